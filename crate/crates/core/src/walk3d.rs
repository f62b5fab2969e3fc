//! 3+1-D Dirac walk and its rotated-shift variant in momentum space.
//!
//! ```text
//! U(p)     = V · T_z · T_y · T_x,          T_j = e^{-i p_j α_j δx},  V = e^{-i mc² β δt}
//! U_mod(p) = V · T̃_{z,−θ}T̃_{z,θ} · T̃_{y,−θ}T̃_{y,θ} · T̃_{x,−θ}T̃_{x,θ}
//! ```
//!
//! with `α_j = diag(σ_j, −σ_j)`, `β` the off-diagonal identity blocks and
//! `K̃_{z,θ} = R_x K_z R_x†`, `K̃_{y,θ} = R_z K_y R_z†`, `K̃_{x,θ} = R_y K_x R_y†`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::SymmetricEigen;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spinor::{
    c, cr, modular_distance, principal_energy, rotation, su2_exp, Axis, Mat2, Mat4, Spinor4, UnitaryEigen,
};
use crate::walk1d::{brillouin_grid, wrap_momentum, Model, WalkParams};

/// A point of the cubic Brillouin zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum3(pub [f64; 3]);

impl Momentum3 {
    pub fn new(px: f64, py: f64, pz: f64) -> Self {
        Self([px, py, pz])
    }

    /// Each component wrapped into `[−π/δx, π/δx)`.
    pub fn wrapped(self, dx: f64) -> Self {
        Self(self.0.map(|p| wrap_momentum(p, dx)))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|p| p * p).sum::<f64>().sqrt()
    }
}

const AXES: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

fn block_diag(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// `α_j = diag(σ_j, −σ_j)`.
pub fn alpha(j: usize) -> Mat4 {
    let s = AXES[j].dot_sigma();
    block_diag(&s, &(-s))
}

/// `β = [[0, I], [I, 0]]`.
pub fn beta() -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        m[(i, i + 2)] = cr(1.0);
        m[(i + 2, i)] = cr(1.0);
    }
    m
}

fn mass_coin(params: &WalkParams) -> Mat4 {
    let (s, co) = params.mass_phase().sin_cos();
    Mat4::identity() * cr(co) - beta() * c(0.0, s)
}

fn shift(j: usize, a: f64) -> Mat4 {
    let k = su2_exp(AXES[j], -a);
    block_diag(&k, &k.adjoint())
}

/// Rotation axis paired with shift axis `j`: z ↔ x, y ↔ z, x ↔ y.
fn paired_axis(j: usize) -> Axis {
    AXES[(j + 1) % 3]
}

fn rotated_shift(j: usize, a: f64, theta: f64) -> Mat4 {
    let r = rotation(paired_axis(j), theta);
    let k = r * su2_exp(AXES[j], -a) * r.adjoint();
    block_diag(&k, &k.adjoint())
}

pub fn u_3d(p: &Momentum3, params: &WalkParams) -> Mat4 {
    let a = p.0.map(|x| x * params.dx);
    mass_coin(params) * shift(2, a[2]) * shift(1, a[1]) * shift(0, a[0])
}

pub fn u_3d_mod(p: &Momentum3, params: &WalkParams) -> Mat4 {
    let a = p.0.map(|x| x * params.dx);
    let th = params.theta;
    let pair = |j: usize| rotated_shift(j, a[j], -th) * rotated_shift(j, a[j], th);
    mass_coin(params) * pair(2) * pair(1) * pair(0)
}

pub fn bloch_matrix3(p: &Momentum3, params: &WalkParams, model: Model) -> Mat4 {
    match model {
        Model::Dirac => u_3d(p, params),
        Model::Modified => u_3d_mod(p, params),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bloch3Result {
    pub p: Momentum3,
    /// Principal-branch energies, ascending.
    pub energies: [f64; 4],
    pub spinors: [Spinor4; 4],
    /// Some pair of energies coincides to `1e-9/δt` on the circle.
    pub degenerate: bool,
}

const DEGENERACY_TOL: f64 = 1e-9;

pub fn dispersion3(p: &Momentum3, params: &WalkParams, model: Model) -> Result<Bloch3Result> {
    params.validate_for(model)?;
    Ok(dispersion3_unchecked(p, params, model))
}

fn dispersion3_unchecked(p: &Momentum3, params: &WalkParams, model: Model) -> Bloch3Result {
    let u = bloch_matrix3(p, params, model);
    let mut pairs: Vec<(f64, Spinor4)> = u
        .eig_unitary()
        .expect("walk matrices are unitary")
        .into_iter()
        .map(|e| (principal_energy(e.phase, params.dt), e.vector))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let energies = [pairs[0].0, pairs[1].0, pairs[2].0, pairs[3].0];
    let degenerate = (0..4).any(|i| {
        (i + 1..4).any(|j| modular_distance(energies[i], energies[j], params.dt) * params.dt < DEGENERACY_TOL)
    });
    Bloch3Result {
        p: *p,
        energies,
        spinors: [pairs[0].1, pairs[1].1, pairs[2].1, pairs[3].1],
        degenerate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointTag {
    DiracLike,
    DiracLikeWithPhase,
    WeylPair,
    Generic,
}

impl std::fmt::Display for PointTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PointTag::DiracLike => "dirac-like",
            PointTag::DiracLikeWithPhase => "dirac-like-with-phase",
            PointTag::WeylPair => "weyl-pair",
            PointTag::Generic => "generic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub tag: PointTag,
    /// The massive walk near `π/(2δx)` points is not characterized.
    pub caveat: bool,
    /// Offset `p⃗` from the special point.
    pub offset: Momentum3,
    /// Dirac-like tags: `max|U(q) ∓ U(p)|`. Weyl pairs: largest distance of
    /// the energies from `{±|p|c, ±(π/δt − |p|c)}`. `None` otherwise.
    pub check: Option<f64>,
}

/// Distance within which a component counts as sitting at a special value.
pub const SPECIAL_POINT_RADIUS: f64 = 0.1;

/// Tags a momentum near one of the special points of the Dirac walk.
pub fn classify_point(p: &Momentum3, params: &WalkParams) -> Result<Classification> {
    params.validate_for(Model::Dirac)?;
    let centers = [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI];
    let mut offset = [0.0; 3];
    let mut kinds = [0u8; 3];
    for j in 0..3 {
        let a = p.0[j] * params.dx;
        let (ci, center) = centers
            .iter()
            .enumerate()
            .map(|(i, &c)| (i, c))
            .min_by(|x, y| (a - x.1).abs().total_cmp(&(a - y.1).abs()))
            .unwrap();
        if (a - center).abs() > SPECIAL_POINT_RADIUS {
            return Err(Error::Domain(format!(
                "component {j} (p δx = {a}) is not within {SPECIAL_POINT_RADIUS} of 0, ±π/2 or ±π"
            )));
        }
        offset[j] = (a - center) / params.dx;
        kinds[j] = match ci {
            0 => 0,
            1 | 2 => 1,
            _ => 2,
        };
    }
    let offset = Momentum3(offset);
    let n_half = kinds.iter().filter(|&&k| k == 1).count();
    let n_pi = kinds.iter().filter(|&&k| k == 2).count();
    if n_half == 3 {
        if params.mass > 0.0 {
            return Ok(Classification {
                tag: PointTag::Generic,
                caveat: true,
                offset,
                check: None,
            });
        }
        let r = dispersion3_unchecked(p, params, Model::Dirac);
        let e = offset.norm() * params.c;
        let targets = [e, -e, PI / params.dt - e, -(PI / params.dt - e)];
        // one-to-one matching of energies to targets
        let dev = PERMS4
            .iter()
            .map(|perm| {
                (0..4)
                    .map(|i| modular_distance(r.energies[i], targets[perm[i]], params.dt))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        return Ok(Classification {
            tag: PointTag::WeylPair,
            caveat: false,
            offset,
            check: Some(dev),
        });
    }
    if n_half > 0 {
        return Ok(Classification {
            tag: PointTag::Generic,
            caveat: false,
            offset,
            check: None,
        });
    }
    let sign = if n_pi % 2 == 0 { 1.0 } else { -1.0 };
    let uq = u_3d(p, params);
    let up = u_3d(&offset, params) * cr(sign);
    let dev = uq
        .iter()
        .zip(up.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(Classification {
        tag: if n_pi % 2 == 0 {
            PointTag::DiracLike
        } else {
            PointTag::DiracLikeWithPhase
        },
        caveat: false,
        offset,
        check: Some(dev),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapScan3 {
    /// `max |Ẽ| δt` over the scanned points.
    pub max_abs_energy_dt: f64,
    /// Where the maximum was found, in units of `1/δx`.
    pub argmax: Momentum3,
    pub gapped: bool,
    /// Points per axis of the uniform grid.
    pub grid_size: usize,
    pub points: usize,
}

/// `max_p |Ẽ(p)| δt` from the smallest eigenvalue of `(U + U†)/2`.
fn max_abs_energy_dt(u: &Mat4) -> f64 {
    let h = (u + u.adjoint()) * cr(0.5);
    let min = SymmetricEigen::new(h).eigenvalues.min();
    min.clamp(-1.0, 1.0).acos()
}

/// Scans a uniform `grid³` mesh plus every combination of
/// `{0, ±π/2, ±π}/δx` per component. The verdict is evidence on this mesh,
/// not a certificate.
pub fn gap_scan3(params: &WalkParams, model: Model, grid_size: usize) -> Result<GapScan3> {
    params.validate_for(model)?;
    if grid_size < 2 {
        return Err(Error::InvalidParams(format!("grid_size = {grid_size} must be >= 2")));
    }
    let axis = brillouin_grid(grid_size, 1.0);
    let special = [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI];
    let mut points: Vec<[f64; 3]> = Vec::with_capacity(grid_size.pow(3) + 125);
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                points.push([x, y, z]);
            }
        }
    }
    for &x in &special {
        for &y in &special {
            for &z in &special {
                points.push([x, y, z]);
            }
        }
    }
    let (best, at) = points
        .par_iter()
        .map(|a| {
            let p = Momentum3(a.map(|x| x / params.dx));
            (max_abs_energy_dt(&bloch_matrix3(&p, params, model)), *a)
        })
        .reduce(
            || (f64::NEG_INFINITY, [0.0; 3]),
            |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
        );
    Ok(GapScan3 {
        max_abs_energy_dt: best,
        argmax: Momentum3(at),
        gapped: best < FRAC_PI_2,
        grid_size,
        points: points.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceRow {
    pub p: Momentum3,
    /// Energies ordered to follow continuous bands along the slice.
    pub energies: [f64; 4],
}

const PERMS4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Sweeps component `axis` over `points` values in `[−π/δx, π/δx)` with the
/// other two held at `fixed`. Bands are matched point to point by maximal
/// total eigenvector overlap.
pub fn band_slice(
    params: &WalkParams,
    model: Model,
    axis: usize,
    fixed: [f64; 3],
    points: usize,
) -> Result<Vec<SliceRow>> {
    params.validate_for(model)?;
    if axis > 2 {
        return Err(Error::InvalidParams(format!("sweep axis {axis} must be 0, 1 or 2")));
    }
    if points == 0 {
        return Err(Error::InvalidParams("slice needs at least one point".into()));
    }
    let mut rows = Vec::with_capacity(points);
    let mut prev: Option<[Spinor4; 4]> = None;
    for p_sweep in brillouin_grid(points, params.dx) {
        let mut comps = fixed;
        comps[axis] = p_sweep;
        let r = dispersion3_unchecked(&Momentum3(comps), params, model);
        let order = match &prev {
            None => [0, 1, 2, 3],
            Some(old) => {
                let ov = |i: usize, j: usize| (old[i].adjoint() * r.spinors[j])[(0, 0)].norm_sqr();
                *PERMS4
                    .iter()
                    .max_by(|a, b| {
                        let sa: f64 = (0..4).map(|i| ov(i, a[i])).sum();
                        let sb: f64 = (0..4).map(|i| ov(i, b[i])).sum();
                        sa.total_cmp(&sb)
                    })
                    .unwrap()
            }
        };
        prev = Some(order.map(|j| r.spinors[j]));
        rows.push(SliceRow {
            p: r.p,
            energies: order.map(|j| r.energies[j]),
        });
    }
    Ok(rows)
}
