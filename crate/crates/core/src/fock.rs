//! Mode-level bookkeeping for the fermionic QCA.
//!
//! The QCA is quadratic in the fields, so free evolution only multiplies each
//! momentum mode by `e^{-iEδt}`. A many-body state is tracked as occupations
//! of the `+` and `−` bands on the discrete momentum grid
//! `p_k = 2πk/(Nδx)`, `k ∈ {−⌊N/2⌋, …, ⌈N/2⌉−1}`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{momentum, momentum_indices};
use crate::spinor::{cr, fold_angle, rotation, su2_exp, Axis, Mat2, C64};
use crate::walk1d::{dirac_spinors, dispersion, overlap_sq, wrap_momentum, BlochResult, Model, WalkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Particle(Band),
    /// `c_p = a†_{−p}`: a hole in the minus band at `−p`.
    Antiparticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Create,
    Annihilate,
}

impl EventKind {
    fn flipped(self) -> Self {
        match self {
            EventKind::Create => EventKind::Annihilate,
            EventKind::Annihilate => EventKind::Create,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeEvent {
    pub mode: Mode,
    /// Momentum index on the grid.
    pub k: i64,
    pub kind: EventKind,
}

impl ModeEvent {
    pub fn new(mode: Mode, k: i64, kind: EventKind) -> Self {
        Self { mode, k, kind }
    }
}

/// Column matrix `(s+_p, s−_p)` in the `(r, l)` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub p: f64,
    pub matrix: Mat2,
    /// At a band touching the columns are an arbitrary orthonormal pair.
    pub degenerate: bool,
}

pub fn mode_basis(p: f64, params: &WalkParams, model: Model) -> Result<ModeBasis> {
    let r = dispersion(p, params, model)?;
    Ok(ModeBasis {
        p,
        matrix: Mat2::from_columns(&[r.s_plus, r.s_minus]),
        degenerate: r.degenerate,
    })
}

fn wrap_index(k: i64, n: usize) -> i64 {
    let lo = -((n / 2) as i64);
    (k - lo).rem_euclid(n as i64) + lo
}

/// Rewrites a minus-band event as an antiparticle event and back.
///
/// `a_p` acting on the sea creates an antiparticle at `−p`, and `a†_p`
/// removes one.
pub fn antiparticle_relabel(event: ModeEvent, n_grid: usize) -> Result<ModeEvent> {
    let mode = match event.mode {
        Mode::Particle(Band::Minus) => Mode::Antiparticle,
        Mode::Antiparticle => Mode::Particle(Band::Minus),
        Mode::Particle(Band::Plus) => return Err(Error::Domain("plus-band events have no antiparticle form".into())),
    };
    Ok(ModeEvent {
        mode,
        k: wrap_index(-event.k, n_grid),
        kind: event.kind.flipped(),
    })
}

/// Occupations of both bands on an `N`-point momentum grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeaState {
    n: usize,
    plus: Vec<bool>,
    minus: Vec<bool>,
}

impl SeaState {
    pub fn empty(n_grid: usize) -> Result<Self> {
        if n_grid == 0 {
            return Err(Error::Domain("momentum grid must be non-empty".into()));
        }
        Ok(Self {
            n: n_grid,
            plus: vec![false; n_grid],
            minus: vec![false; n_grid],
        })
    }

    /// Every minus-band mode filled, every plus-band mode empty.
    pub fn dirac_vacuum(n_grid: usize) -> Result<Self> {
        let mut s = Self::empty(n_grid)?;
        s.minus.fill(true);
        Ok(s)
    }

    pub fn n_grid(&self) -> usize {
        self.n
    }

    fn slot(&self, k: i64) -> Result<usize> {
        let lo = -((self.n / 2) as i64);
        let i = k - lo;
        if i < 0 || i >= self.n as i64 {
            return Err(Error::Domain(format!(
                "momentum index {k} is off the {}-point grid",
                self.n
            )));
        }
        Ok(i as usize)
    }

    pub fn is_occupied(&self, band: Band, k: i64) -> Result<bool> {
        let i = self.slot(k)?;
        Ok(match band {
            Band::Plus => self.plus[i],
            Band::Minus => self.minus[i],
        })
    }

    /// Applies an event, rejecting creation on a filled mode or annihilation
    /// of an empty one.
    pub fn apply(&self, event: ModeEvent) -> Result<Self> {
        let ev = particle_form(event, self.n)?;
        let Mode::Particle(band) = ev.mode else { unreachable!() };
        let i = self.slot(ev.k)?;
        let mut out = self.clone();
        let slot = match band {
            Band::Plus => &mut out.plus[i],
            Band::Minus => &mut out.minus[i],
        };
        match (ev.kind, *slot) {
            (EventKind::Create, false) => *slot = true,
            (EventKind::Annihilate, true) => *slot = false,
            (kind, occ) => {
                return Err(Error::Occupancy(format!(
                    "{kind:?} on {band:?} mode k = {} which is {}",
                    ev.k,
                    if occ { "occupied" } else { "empty" }
                )))
            }
        }
        Ok(out)
    }

    /// Occupied `(band, k)` pairs.
    pub fn occupied(&self) -> Vec<(Band, i64)> {
        let ks = momentum_indices(self.n);
        let plus = ks
            .iter()
            .zip(&self.plus)
            .filter(|(_, &o)| o)
            .map(|(&k, _)| (Band::Plus, k));
        let minus = ks
            .iter()
            .zip(&self.minus)
            .filter(|(_, &o)| o)
            .map(|(&k, _)| (Band::Minus, k));
        plus.chain(minus).collect()
    }
}

fn particle_form(event: ModeEvent, n: usize) -> Result<ModeEvent> {
    match event.mode {
        Mode::Antiparticle => antiparticle_relabel(event, n),
        Mode::Particle(_) => Ok(event),
    }
}

/// Principal-branch energy of band mode `k`.
pub fn mode_energy(band: Band, k: i64, n_grid: usize, params: &WalkParams, model: Model) -> Result<f64> {
    let r = dispersion(momentum(k, n_grid, params.dx), params, model)?;
    Ok(match band {
        Band::Plus => r.e_plus,
        Band::Minus => r.e_minus,
    })
}

/// Folds an energy into `(−π/δt, π/δt]`.
pub fn fold_energy(e: f64, dt: f64) -> f64 {
    fold_angle(e * dt) / dt
}

/// Energy change of an event sequence acting on `sea`, folded onto the
/// principal branch. Creation adds the mode energy, annihilation subtracts it.
pub fn modular_delta_e(sea: &SeaState, events: &[ModeEvent], params: &WalkParams, model: Model) -> Result<f64> {
    let mut cur = sea.clone();
    let mut total = 0.0;
    for &event in events {
        cur = cur.apply(event)?;
        let ev = particle_form(event, sea.n)?;
        let Mode::Particle(band) = ev.mode else { unreachable!() };
        let e = mode_energy(band, ev.k, sea.n, params, model)?;
        total += match ev.kind {
            EventKind::Create => e,
            EventKind::Annihilate => -e,
        };
    }
    Ok(fold_energy(total, params.dt))
}

/// Unfolded sum of occupied mode energies on the finite grid.
pub fn sea_energy(sea: &SeaState, params: &WalkParams, model: Model) -> Result<f64> {
    params.validate_for(model)?;
    sea.occupied()
        .into_iter()
        .map(|(band, k)| mode_energy(band, k, sea.n, params, model))
        .sum()
}

/// The sea after `steps` QCA steps: occupations are unchanged and the state
/// acquires the global phase `e^{-i E_sea δt · steps}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedSea {
    pub sea: SeaState,
    pub phase: f64,
}

pub fn evolve(sea: &SeaState, steps: u64, params: &WalkParams, model: Model) -> Result<EvolvedSea> {
    let e = sea_energy(sea, params, model)?;
    Ok(EvolvedSea {
        sea: sea.clone(),
        phase: fold_angle(-e * params.dt * steps as f64),
    })
}

/// One pair-creation process on the Dirac vacuum: a particle in the plus
/// band at `k_particle` and a hole in the minus band at `k_hole`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRow {
    pub k_particle: i64,
    pub k_hole: i64,
    pub e_particle: f64,
    pub e_hole: f64,
    pub delta_e: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairScan {
    pub rows: Vec<PairRow>,
    pub min_delta_e: f64,
    pub negative: usize,
}

/// Every particle-hole pair on an `N`-point grid above the Dirac vacuum.
pub fn pair_creation_scan(n_grid: usize, params: &WalkParams, model: Model) -> Result<PairScan> {
    let vac = SeaState::dirac_vacuum(n_grid)?;
    params.validate_for(model)?;
    let ks = momentum_indices(n_grid);
    let bands: Vec<BlochResult> = ks
        .iter()
        .map(|&k| dispersion(momentum(k, n_grid, params.dx), params, model))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(n_grid * n_grid);
    for (i, &kp) in ks.iter().enumerate() {
        for (j, &kh) in ks.iter().enumerate() {
            let events = [
                ModeEvent::new(Mode::Particle(Band::Plus), kp, EventKind::Create),
                ModeEvent::new(Mode::Particle(Band::Minus), kh, EventKind::Annihilate),
            ];
            vac.apply(events[0])?.apply(events[1])?;
            let (ep, eh) = (bands[i].e_plus, bands[j].e_minus);
            rows.push(PairRow {
                k_particle: kp,
                k_hole: kh,
                e_particle: ep,
                e_hole: eh,
                delta_e: fold_energy(ep - eh, params.dt),
            });
        }
    }
    Ok(PairScan {
        min_delta_e: rows.iter().map(|r| r.delta_e).fold(f64::INFINITY, f64::min),
        negative: rows.iter().filter(|r| r.delta_e < 0.0).count(),
        rows,
    })
}

/// Overlaps of the walk eigenvectors with the continuum spinors, at `q` and
/// at the zone edge `π/δx + q` where the roles swap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorLimits {
    /// `|⟨ũ_q|s+_q⟩|²`
    pub plus_low: f64,
    /// `|⟨ṽ_q|s−_q⟩|²`
    pub minus_low: f64,
    /// `|⟨ṽ_q|s+_{π/δx+q}⟩|²`
    pub plus_edge: f64,
    /// `|⟨ũ_q|s−_{π/δx+q}⟩|²`
    pub minus_edge: f64,
}

pub fn sigma_spinor_limits(q: f64, params: &WalkParams) -> Result<SpinorLimits> {
    let (u, v) = dirac_spinors(q, params)?;
    let low = dispersion(q, params, Model::Dirac)?;
    let edge = dispersion(wrap_momentum(PI / params.dx + q, params.dx), params, Model::Dirac)?;
    Ok(SpinorLimits {
        plus_low: overlap_sq(&u, &low.s_plus),
        minus_low: overlap_sq(&v, &low.s_minus),
        plus_edge: overlap_sq(&v, &edge.s_plus),
        minus_edge: overlap_sq(&u, &edge.s_minus),
    })
}

/// One-particle matrix of the QCA step, built in position space.
///
/// Index `2n + c` with `c = 0` for `r` and `1` for `l`. The shift sends
/// `(n, r) → (n+1, r)` and `(n, l) → (n−1, l)`; the mass and rotation terms
/// act as `e^{-iαX}` on every site.
pub fn qca_one_body(n_sites: usize, params: &WalkParams, model: Model) -> Result<DMatrix<C64>> {
    if n_sites < 2 {
        return Err(Error::Domain(format!("need at least 2 sites, got {n_sites}")));
    }
    params.validate_for(model)?;
    let dim = 2 * n_sites;
    let mut t = DMatrix::zeros(dim, dim);
    for n in 0..n_sites {
        t[(2 * ((n + 1) % n_sites), 2 * n)] = cr(1.0);
        t[(2 * ((n + n_sites - 1) % n_sites) + 1, 2 * n + 1)] = cr(1.0);
    }
    let on_site = |m: Mat2| {
        let mut out = DMatrix::zeros(dim, dim);
        for n in 0..n_sites {
            out.view_mut((2 * n, 2 * n), (2, 2)).copy_from(&m);
        }
        out
    };
    let w = on_site(su2_exp(Axis::X, -params.mass_phase()));
    Ok(match model {
        Model::Dirac => w * t,
        Model::Modified => {
            let r = on_site(rotation(Axis::X, params.theta));
            let r_dag = r.adjoint();
            w * &r_dag * &t * &r * &r * &t * &r_dag
        }
    })
}

/// Momentum blocks `⟨p,b|U|p,a⟩` of a one-particle matrix with the index
/// convention of [`qca_one_body`], and the weight that leaves each momentum.
pub fn momentum_blocks(one_body: &DMatrix<C64>, n_sites: usize, dx: f64) -> Vec<(f64, Mat2, f64)> {
    let scale = 1.0 / (n_sites as f64).sqrt();
    momentum_indices(n_sites)
        .into_iter()
        .map(|k| {
            let wave = |a: usize| {
                let mut v = nalgebra::DVector::<C64>::zeros(2 * n_sites);
                for n in 0..n_sites {
                    v[2 * n + a] = C64::from_polar(scale, TAU * (k * n as i64) as f64 / n_sites as f64);
                }
                v
            };
            let basis = [wave(0), wave(1)];
            let mut block = Mat2::zeros();
            let mut leak: f64 = 0.0;
            for a in 0..2 {
                let out = one_body * &basis[a];
                let mut rest = out.clone();
                for b in 0..2 {
                    let amp = basis[b].dotc(&out);
                    block[(b, a)] = amp;
                    rest -= &basis[b] * amp;
                }
                leak = leak.max(rest.norm());
            }
            (momentum(k, n_sites, dx), block, leak)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{max_abs_diff, unitarity_error};
    use crate::walk1d::{bloch_matrix, find_theta};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dirac(mdt: f64) -> WalkParams {
        WalkParams::from_mass_phase(Model::Dirac, mdt, 0.0).unwrap()
    }

    fn modified(mdt: f64, theta: f64) -> WalkParams {
        WalkParams::from_mass_phase(Model::Modified, mdt, theta).unwrap()
    }

    #[test]
    fn mode_basis_examples() {
        let b = mode_basis(0.0, &dirac(0.3), Model::Dirac).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = Mat2::new(cr(h), cr(h), cr(h), cr(-h));
        assert!(max_abs_diff(&b.matrix, &expected) < 1e-15);
        assert!(unitarity_error(&b.matrix) < 1e-12);

        let b = mode_basis(0.4, &dirac(0.0), Model::Dirac).unwrap();
        assert!(max_abs_diff(&b.matrix, &Mat2::identity()) < 1e-15);

        // near the zone edge s+ is the continuum negative-energy spinor
        let params = dirac(0.05);
        let q = 0.03;
        let b = mode_basis(wrap_momentum(PI + q, 1.0), &params, Model::Dirac).unwrap();
        let (_, v) = dirac_spinors(q, &params).unwrap();
        assert!(overlap_sq(&v, &b.matrix.column(0).into_owned()) > 0.99);

        assert!(mode_basis(PI, &dirac(0.0), Model::Dirac).unwrap().degenerate);
    }

    #[test]
    fn relabel_examples() {
        let ev = ModeEvent::new(Mode::Particle(Band::Minus), 3, EventKind::Annihilate);
        let anti = antiparticle_relabel(ev, 16).unwrap();
        assert_eq!(anti, ModeEvent::new(Mode::Antiparticle, -3, EventKind::Create));
        assert_eq!(antiparticle_relabel(anti, 16).unwrap(), ev);
        let zero = ModeEvent::new(Mode::Particle(Band::Minus), 0, EventKind::Create);
        assert_eq!(antiparticle_relabel(zero, 16).unwrap().k, 0);
        // −(−N/2) wraps back onto the grid
        let edge = ModeEvent::new(Mode::Particle(Band::Minus), -8, EventKind::Create);
        assert_eq!(antiparticle_relabel(edge, 16).unwrap().k, -8);
        assert!(antiparticle_relabel(ModeEvent::new(Mode::Particle(Band::Plus), 1, EventKind::Create), 16).is_err());
    }

    #[test]
    fn occupancy_is_checked() {
        let vac = SeaState::dirac_vacuum(8).unwrap();
        let bad = ModeEvent::new(Mode::Particle(Band::Minus), 1, EventKind::Create);
        assert!(matches!(vac.apply(bad), Err(Error::Occupancy(_))));
        let bad = ModeEvent::new(Mode::Particle(Band::Plus), 1, EventKind::Annihilate);
        assert!(matches!(
            modular_delta_e(&vac, &[bad], &dirac(0.1), Model::Dirac),
            Err(Error::Occupancy(_))
        ));
        assert!(vac
            .apply(ModeEvent::new(Mode::Antiparticle, 2, EventKind::Create))
            .is_ok());
        assert!(vac
            .apply(ModeEvent::new(Mode::Antiparticle, 2, EventKind::Annihilate))
            .is_err());
    }

    #[test]
    fn delta_e_examples() {
        let n = 64;
        let params = dirac(0.1);
        let vac = SeaState::dirac_vacuum(n).unwrap();
        assert_eq!(modular_delta_e(&vac, &[], &params, Model::Dirac).unwrap(), 0.0);

        // low-energy pair at p ≈ 0
        let (k1, k2) = (1, -2);
        let events = [
            ModeEvent::new(Mode::Particle(Band::Plus), k1, EventKind::Create),
            ModeEvent::new(Mode::Particle(Band::Minus), k2, EventKind::Annihilate),
        ];
        let e1 = mode_energy(Band::Plus, k1, n, &params, Model::Dirac).unwrap();
        let e2 = -mode_energy(Band::Minus, k2, n, &params, Model::Dirac).unwrap();
        let de = modular_delta_e(&vac, &events, &params, Model::Dirac).unwrap();
        assert!((de - (e1 + e2)).abs() < 1e-12 && de > 0.0);

        // pair across the fold releases energy
        let (k1, k2) = (-31, 30);
        let events = [
            ModeEvent::new(Mode::Particle(Band::Plus), k1, EventKind::Create),
            ModeEvent::new(Mode::Particle(Band::Minus), k2, EventKind::Annihilate),
        ];
        let eps1 = PI / params.dt - mode_energy(Band::Plus, k1, n, &params, Model::Dirac).unwrap();
        let eps2 = mode_energy(Band::Minus, k2, n, &params, Model::Dirac).unwrap() + PI / params.dt;
        let de = modular_delta_e(&vac, &events, &params, Model::Dirac).unwrap();
        assert!((de + (eps1 + eps2)).abs() < 1e-12, "{de} vs {}", -(eps1 + eps2));
        assert!(eps1 >= 0.1 - 1e-12 && eps2 >= 0.1 - 1e-12);
    }

    #[test]
    fn sea_energy_examples() {
        let n = 33;
        let params = dirac(0.0);
        assert_eq!(
            sea_energy(&SeaState::empty(n).unwrap(), &params, Model::Dirac).unwrap(),
            0.0
        );
        let vac = SeaState::dirac_vacuum(n).unwrap();
        let direct: f64 = momentum_indices(n).iter().map(|&k| -momentum(k, n, 1.0).abs()).sum();
        assert!((sea_energy(&vac, &params, Model::Dirac).unwrap() - direct).abs() < 1e-12);

        let params = dirac(0.3);
        let excited = vac
            .apply(ModeEvent::new(Mode::Particle(Band::Plus), 5, EventKind::Create))
            .unwrap();
        let diff =
            sea_energy(&excited, &params, Model::Dirac).unwrap() - sea_energy(&vac, &params, Model::Dirac).unwrap();
        assert!((diff - mode_energy(Band::Plus, 5, n, &params, Model::Dirac).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn vacuum_is_stationary() {
        let vac = SeaState::dirac_vacuum(16).unwrap();
        let out = evolve(&vac, 10, &dirac(0.2), Model::Dirac).unwrap();
        assert_eq!(out.sea, vac);
    }

    #[test]
    fn spinor_limit_examples() {
        let s = sigma_spinor_limits(0.01, &dirac(0.0)).unwrap();
        assert_eq!(
            (s.plus_low, s.minus_low, s.plus_edge, s.minus_edge),
            (1.0, 1.0, 1.0, 1.0)
        );
        let s = sigma_spinor_limits(0.05, &dirac(0.05)).unwrap();
        for f in [s.plus_low, s.minus_low, s.plus_edge, s.minus_edge] {
            assert!(f >= 0.99, "{s:?}");
        }
        assert!(sigma_spinor_limits(0.0, &dirac(0.0)).is_err());
    }

    #[test]
    fn gapped_walk_has_no_negative_pairs() {
        let theta = find_theta(0.2, 0.0).unwrap();
        let scan = pair_creation_scan(64, &modified(0.2, theta), Model::Modified).unwrap();
        assert_eq!(scan.negative, 0);
        let scan = pair_creation_scan(64, &dirac(0.2), Model::Dirac).unwrap();
        assert!(scan.negative > 0);
    }

    #[test]
    fn one_body_matches_bloch_matrices() {
        for (params, model) in [
            (dirac(0.2), Model::Dirac),
            (modified(0.2, 3.0 * PI / 8.0), Model::Modified),
        ] {
            let u = qca_one_body(8, &params, model).unwrap();
            for (p, block, leak) in momentum_blocks(&u, 8, params.dx) {
                assert!(leak < 1e-12);
                assert!(max_abs_diff(&block, &bloch_matrix(p, &params, model)) < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn relabel_preserves_delta_e(k in -8i64..8, kp in -8i64..8, mdt in 0.0f64..1.0) {
            let n = 16;
            let params = dirac(mdt);
            let vac = SeaState::dirac_vacuum(n).unwrap();
            let hole = ModeEvent::new(Mode::Particle(Band::Minus), k, EventKind::Annihilate);
            let particle = ModeEvent::new(Mode::Particle(Band::Plus), kp, EventKind::Create);
            let a = modular_delta_e(&vac, &[particle, hole], &params, Model::Dirac).unwrap();
            let b = modular_delta_e(&vac, &[particle, antiparticle_relabel(hole, n).unwrap()], &params, Model::Dirac).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn delta_e_is_additive_mod_fold(k1 in -8i64..8, k2 in -8i64..8, k3 in -8i64..8, mdt in 0.0f64..1.5) {
            prop_assume!(k1 != k2);
            let n = 16;
            let params = dirac(mdt);
            let vac = SeaState::dirac_vacuum(n).unwrap();
            let a = [ModeEvent::new(Mode::Particle(Band::Plus), k1, EventKind::Create)];
            let b = [
                ModeEvent::new(Mode::Particle(Band::Plus), k2, EventKind::Create),
                ModeEvent::new(Mode::Particle(Band::Minus), k3, EventKind::Annihilate),
            ];
            let whole: Vec<ModeEvent> = a.iter().chain(&b).copied().collect();
            let total = modular_delta_e(&vac, &whole, &params, Model::Dirac).unwrap();
            let parts = modular_delta_e(&vac, &a, &params, Model::Dirac).unwrap()
                + modular_delta_e(&vac.apply(a[0]).unwrap(), &b, &params, Model::Dirac).unwrap();
            prop_assert!(crate::spinor::modular_distance(total, parts, params.dt) < 1e-12);
        }
    }
}
