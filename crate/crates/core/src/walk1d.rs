//! Momentum-space analysis of the 1+1-D Dirac walk and the rotated-shift
//! ("modified") walk.
//!
//! Bloch matrices:
//!
//! ```text
//! U_dirac(p) = e^{-i m c² σx δt} · e^{-i p σz δx}
//! U_mod(p)   = e^{-i m c² σx δt} · e^{-i p σ_{-θ} δx} · e^{-i p σ_θ δx}
//! ```
//!
//! with `σ_θ = R_{θ,x} σz R_{θ,x}†`. Quasi-energies are read off the
//! eigenvalues `e^{-iEδt}` and live in `(-π/δt, π/δt]`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spinor::{cr, fold_angle, modular_distance, principal_energy, su2_exp, Axis, Mat2, Spinor2, UnitaryEigen};

/// Which walk a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Dirac,
    Modified,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Dirac => "dirac",
            Model::Modified => "modified",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirac" => Ok(Model::Dirac),
            "modified" | "mod" => Ok(Model::Modified),
            other => Err(Error::InvalidParams(format!("unknown model '{other}'"))),
        }
    }
}

/// Physical and lattice constants of a walk.
///
/// The time step is never free: the Dirac walk uses `δt = δx/c` and the
/// modified walk `δt = 2 cos θ δx/c`. Construct through [`WalkParams::dirac`],
/// [`WalkParams::modified`] or [`WalkParams::from_mass_phase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub mass: f64,
    pub c: f64,
    pub dx: f64,
    pub dt: f64,
    /// Shift rotation angle; zero for the Dirac walk.
    pub theta: f64,
}

const DT_REL_TOL: f64 = 1e-12;

impl WalkParams {
    pub fn dirac(mass: f64, c: f64, dx: f64) -> Result<Self> {
        check_constants(mass, c, dx)?;
        Ok(Self {
            mass,
            c,
            dx,
            dt: dx / c,
            theta: 0.0,
        })
    }

    pub fn modified(mass: f64, c: f64, dx: f64, theta: f64) -> Result<Self> {
        check_constants(mass, c, dx)?;
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParams(format!("theta = {theta} must lie in [0, pi/2)")));
        }
        Ok(Self {
            mass,
            c,
            dx,
            dt: 2.0 * theta.cos() * dx / c,
            theta,
        })
    }

    /// Parameters from the dimensionless mass phase `m c² δt`, with `c = δx = 1`.
    pub fn from_mass_phase(model: Model, mass_phase: f64, theta: f64) -> Result<Self> {
        if !(mass_phase.is_finite() && mass_phase >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "m c^2 dt = {mass_phase} must be finite and non-negative"
            )));
        }
        match model {
            Model::Dirac => Self::dirac(mass_phase, 1.0, 1.0),
            Model::Modified => {
                let mut p = Self::modified(0.0, 1.0, 1.0, theta)?;
                p.mass = mass_phase / p.dt;
                Ok(p)
            }
        }
    }

    /// `m c² δt`
    pub fn mass_phase(&self) -> f64 {
        self.mass * self.c * self.c * self.dt
    }

    /// Continuum energy `√(p²c² + m²c⁴)`.
    pub fn continuum_energy(&self, p: f64) -> f64 {
        (p * p * self.c * self.c + self.mass * self.mass * self.c.powi(4)).sqrt()
    }

    /// Checks the time-step convention of `model`.
    pub fn validate_for(&self, model: Model) -> Result<()> {
        check_constants(self.mass, self.c, self.dx)?;
        let expected = match model {
            Model::Dirac => self.dx / self.c,
            Model::Modified => {
                if !(0.0..FRAC_PI_2).contains(&self.theta) {
                    return Err(Error::InvalidParams(format!(
                        "theta = {} must lie in [0, pi/2)",
                        self.theta
                    )));
                }
                2.0 * self.theta.cos() * self.dx / self.c
            }
        };
        if (self.dt - expected).abs() > DT_REL_TOL * expected {
            return Err(Error::InvalidParams(format!(
                "dt = {} does not follow the {model} convention (expected {expected})",
                self.dt
            )));
        }
        Ok(())
    }
}

fn check_constants(mass: f64, c: f64, dx: f64) -> Result<()> {
    let ok = mass.is_finite() && mass >= 0.0 && c.is_finite() && c > 0.0 && dx.is_finite() && dx > 0.0;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "need m >= 0, c > 0, dx > 0 (got m = {mass}, c = {c}, dx = {dx})"
        )))
    }
}

/// `e^{-i a σ_θ}` as an SU(2) exponential.
fn rotated_shift(a: f64, theta: f64) -> Mat2 {
    // σ_θ = n̂·σ with n̂ = (0, -sin θ, cos θ)
    let axis = Axis::new(0.0, -theta.sin(), theta.cos()).expect("unit by construction");
    su2_exp(axis, -a)
}

fn coin(params: &WalkParams) -> Mat2 {
    su2_exp(Axis::X, -params.mass_phase())
}

/// Bloch matrix of the Dirac walk.
pub fn u_dirac(p: f64, params: &WalkParams) -> Mat2 {
    coin(params) * su2_exp(Axis::Z, -p * params.dx)
}

/// Bloch matrix of the modified walk.
pub fn u_mod(p: f64, params: &WalkParams) -> Mat2 {
    let a = p * params.dx;
    coin(params) * rotated_shift(a, -params.theta) * rotated_shift(a, params.theta)
}

pub fn bloch_matrix(p: f64, params: &WalkParams, model: Model) -> Mat2 {
    match model {
        Model::Dirac => u_dirac(p, params),
        Model::Modified => u_mod(p, params),
    }
}

/// Per-momentum eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochResult {
    pub p: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub s_plus: Spinor2,
    pub s_minus: Spinor2,
    /// Both eigenvalues coincide (band touching at `E = 0` or at the fold).
    /// The spinors are then an arbitrary orthonormal pair.
    pub degenerate: bool,
}

const DEGENERACY_TOL: f64 = 1e-12;

/// Eigenpairs of the Bloch matrix, labelled `E+ >= 0 > E-`.
pub fn dispersion(p: f64, params: &WalkParams, model: Model) -> Result<BlochResult> {
    params.validate_for(model)?;
    Ok(dispersion_unchecked(p, params, model))
}

pub(crate) fn dispersion_unchecked(p: f64, params: &WalkParams, model: Model) -> BlochResult {
    let u = bloch_matrix(p, params, model);
    let pairs = u.eig_unitary().expect("Bloch matrices are unitary");
    let dt = params.dt;
    let e0 = principal_energy(pairs[0].phase, dt);
    let e1 = principal_energy(pairs[1].phase, dt);
    let degenerate = modular_distance(e0, e1, dt) * dt < DEGENERACY_TOL;
    let (plus, minus) = if e0 >= e1 { (0, 1) } else { (1, 0) };
    let e_plus = if plus == 0 { e0 } else { e1 };
    let e_minus = if degenerate {
        fold_angle(-e_plus * dt) / dt
    } else if plus == 0 {
        e1
    } else {
        e0
    };
    BlochResult {
        p,
        e_plus,
        e_minus,
        s_plus: pairs[plus].vector,
        s_minus: pairs[minus].vector,
        degenerate,
    }
}

/// Continuum Dirac spinors `(ũ_p, ṽ_p)` in the (r, l) basis.
///
/// These are the positive- and negative-energy eigenvectors of
/// `m c² σx + p c σz`, the small-momentum generator of the walk:
///
/// ```text
/// ũ_p = ( √(E+pc),  √(E−pc)) / √(2E)
/// ṽ_p = (−√(E−pc),  √(E+pc)) / √(2E)
/// ```
pub fn dirac_spinors(p: f64, params: &WalkParams) -> Result<(Spinor2, Spinor2)> {
    let e = params.continuum_energy(p);
    if e <= 0.0 {
        return Err(Error::Degenerate("m = 0 and p = 0: E_p vanishes".into()));
    }
    let pc = p * params.c;
    let norm = (2.0 * e).sqrt();
    let a = (e + pc).max(0.0).sqrt() / norm;
    let b = (e - pc).max(0.0).sqrt() / norm;
    Ok((Spinor2::new(cr(a), cr(b)), Spinor2::new(cr(-b), cr(a))))
}

/// Right-hand side of the quasi-energy identity
/// `cos(Ẽδt) = cos(mc²δt) cos²(pδx) + sin²(pδx) cos(mc²δt + 2φ)`, `φ = π/2 − θ`.
pub fn cos_energy_closed_form(p: f64, params: &WalkParams) -> f64 {
    let m = params.mass_phase();
    let (s, co) = (p * params.dx).sin_cos();
    let phi = FRAC_PI_2 - params.theta;
    m.cos() * co * co + s * s * (m + 2.0 * phi).cos()
}

/// `Re tr U / 2` of a Bloch matrix; equals `cos(Eδt)` for SU(2) matrices.
pub fn half_trace_re(u: &Mat2) -> f64 {
    0.5 * (u[(0, 0)] + u[(1, 1)]).re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCertificate {
    /// `max_p |Ẽ±(p)|` in energy units.
    pub max_abs_energy: f64,
    /// The same in units of `1/δt`.
    pub max_abs_energy_dt: f64,
    /// `max |Ẽ| δt < π/2`.
    pub gapped: bool,
    pub grid_size: usize,
}

pub const MIN_GAP_GRID: usize = 64;

/// Scans the modified-walk bands for the largest quasi-energy.
///
/// `cos(Ẽδt)` is affine in `cos²(pδx)`, so the extrema sit at
/// `pδx ∈ {0, ±π/2, ±π}`; those points are always included and the uniform
/// grid only adds confidence.
pub fn gap_certificate(params: &WalkParams, grid_size: usize) -> Result<GapCertificate> {
    if grid_size < MIN_GAP_GRID {
        return Err(Error::InvalidParams(format!(
            "grid_size = {grid_size} must be at least {MIN_GAP_GRID}"
        )));
    }
    params.validate_for(Model::Modified)?;
    let candidates = [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI];
    let max_dt = brillouin_grid(grid_size, 1.0)
        .into_iter()
        .chain(candidates)
        .map(|pdx| {
            let r = dispersion_unchecked(pdx / params.dx, params, Model::Modified);
            r.e_plus.abs().max(r.e_minus.abs()) * params.dt
        })
        .fold(0.0, f64::max);
    Ok(GapCertificate {
        max_abs_energy: max_dt / params.dt,
        max_abs_energy_dt: max_dt,
        gapped: max_dt < FRAC_PI_2,
        grid_size,
    })
}

/// Open interval of θ for which `−π/2 < mc²δt + 2φ < π/2`.
pub fn feasible_theta_interval(mass_phase: f64) -> Result<(f64, f64)> {
    if !(mass_phase.is_finite() && (0.0..FRAC_PI_2).contains(&mass_phase)) {
        return Err(Error::OutOfHypothesis(mass_phase));
    }
    Ok((FRAC_PI_4 + 0.5 * mass_phase, FRAC_PI_2))
}

/// A rotation angle that opens the gap at the fold.
///
/// Returns the midpoint of the feasible interval; `margin` is the distance
/// (in radians) that must remain to both interval ends.
pub fn find_theta(mass_phase: f64, margin: f64) -> Result<f64> {
    let (lo, hi) = feasible_theta_interval(mass_phase)?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParams(format!("margin = {margin} must be >= 0")));
    }
    if lo + margin >= hi - margin {
        return Err(Error::Infeasible { mass_phase, margin });
    }
    Ok(0.5 * (lo + hi))
}

/// Wraps a momentum into `[−π/δx, π/δx)`.
pub fn wrap_momentum(p: f64, dx: f64) -> f64 {
    let x = p * dx;
    let y = x - TAU * ((x + PI) / TAU).floor();
    y / dx
}

/// `n` uniformly spaced momenta `(−π + 2πk/n)/δx`, `k = 0..n`.
pub fn brillouin_grid(n: usize, dx: f64) -> Vec<f64> {
    (0..n).map(|k| (-PI + TAU * k as f64 / n as f64) / dx).collect()
}

/// Overlaps of the zone-edge eigenstates with the swapped continuum spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapFidelity {
    /// `|⟨ṽ_p|s+_{π/δx+p}⟩|²`
    pub f_plus: f64,
    /// `|⟨ũ_p|s−_{π/δx+p}⟩|²`
    pub f_minus: f64,
    /// `E+_{π/δx+p}`
    pub e_plus_edge: f64,
    /// `π/δt − E_p`
    pub e_plus_predicted: f64,
}

pub fn boundary_swap_fidelity(p: f64, params: &WalkParams) -> Result<SwapFidelity> {
    params.validate_for(Model::Dirac)?;
    let (u, v) = dirac_spinors(p, params)?;
    let edge = wrap_momentum(PI / params.dx + p, params.dx);
    let r = dispersion_unchecked(edge, params, Model::Dirac);
    Ok(SwapFidelity {
        f_plus: overlap_sq(&v, &r.s_plus),
        f_minus: overlap_sq(&u, &r.s_minus),
        e_plus_edge: r.e_plus,
        e_plus_predicted: PI / params.dt - params.continuum_energy(p),
    })
}

pub fn overlap_sq(a: &Spinor2, b: &Spinor2) -> f64 {
    (a.adjoint() * b)[(0, 0)].norm_sqr()
}

const DEVIATION_GRID: usize = 401;

/// `max_{|p| <= p_max} |E+(p) − √(p²c² + m²c⁴)|`.
pub fn continuum_deviation(params: &WalkParams, p_max: f64, model: Model) -> Result<f64> {
    params.validate_for(model)?;
    if !(p_max.is_finite() && p_max >= 0.0 && p_max * params.dx <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "p_max * dx = {} must lie in [0, 1]",
            p_max * params.dx
        )));
    }
    let half = (DEVIATION_GRID / 2) as f64;
    Ok((0..DEVIATION_GRID)
        .map(|k| p_max * (k as f64 - half) / half)
        .map(|p| (dispersion_unchecked(p, params, model).e_plus - params.continuum_energy(p)).abs())
        .fold(0.0, f64::max))
}

/// Number of momenta on a periodic grid where `E+(p)` crosses `energy`
/// (sign changes of `E+(p) − energy`, including the wrap-around).
pub fn count_energy_solutions(params: &WalkParams, model: Model, energy: f64, grid_size: usize) -> Result<usize> {
    params.validate_for(model)?;
    let diffs: Vec<f64> = brillouin_grid(grid_size, params.dx)
        .into_iter()
        .map(|p| dispersion_unchecked(p, params, model).e_plus - energy)
        .collect();
    Ok((0..diffs.len())
        .filter(|&k| {
            let (a, b) = (diffs[k], diffs[(k + 1) % diffs.len()]);
            (a < 0.0) != (b < 0.0)
        })
        .count())
}
