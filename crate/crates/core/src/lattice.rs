//! Position-space evolution on a periodic lattice of `N` sites.
//!
//! Each site carries the two internal components `(r, l)`. The shift
//! `e^{-iPσzδx}` moves `r` one site right and `l` one site left; it is an
//! index rotation, so the light cone is exact.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spinor::{cr, rotation, su2_exp, Axis, Mat2, Spinor2, C64};
use crate::walk1d::{Model, WalkParams};

pub const R: usize = 0;
pub const L: usize = 1;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    amps: Vec<[C64; 2]>,
}

impl LatticeState {
    /// Unit amplitude on `component` (0 = r, 1 = l) at `site`.
    pub fn delta(n_sites: usize, site: usize, component: usize) -> Result<Self> {
        check_sites(n_sites)?;
        if site >= n_sites || component > 1 {
            return Err(Error::Domain(format!(
                "site {site} / component {component} outside a {n_sites}-site lattice"
            )));
        }
        let mut amps = vec![[cr(0.0); 2]; n_sites];
        amps[site][component] = cr(1.0);
        Ok(Self { amps })
    }

    /// Wraps amplitudes that must already be normalized.
    pub fn from_amplitudes(amps: Vec<[C64; 2]>) -> Result<Self> {
        check_sites(amps.len())?;
        let state = Self { amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state norm² = {norm} is not 1")));
        }
        Ok(state)
    }

    /// `e^{i p_k n δx}/√N ⊗ s` with `p_k = 2πk/(Nδx)`.
    pub fn plane_wave(n_sites: usize, k: i64, spinor: &Spinor2) -> Result<Self> {
        check_sites(n_sites)?;
        let s = spinor / C64::from(spinor.norm());
        let scale = 1.0 / (n_sites as f64).sqrt();
        let amps = (0..n_sites)
            .map(|n| {
                let ph = C64::from_polar(scale, TAU * k as f64 * n as f64 / n_sites as f64);
                [s[0] * ph, s[1] * ph]
            })
            .collect();
        Ok(Self { amps })
    }

    pub fn n_sites(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[[C64; 2]] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).sum()
    }

    /// `|ψ_r(n)|² + |ψ_l(n)|²` for every site.
    pub fn site_probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).collect()
    }

    /// Sites whose component norm exceeds `tol`, in increasing order.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| (a[0].norm_sqr() + a[1].norm_sqr()).sqrt() > tol)
            .map(|(n, _)| n)
            .collect()
    }

    /// Cyclic translation by `shift` sites.
    pub fn translate(&self, shift: i64) -> Self {
        let n = self.amps.len();
        let s = shift.rem_euclid(n as i64) as usize;
        let mut amps = self.amps.clone();
        amps.rotate_right(s);
        Self { amps }
    }

    fn shift(&mut self) {
        let n = self.amps.len();
        let mut out = vec![[cr(0.0); 2]; n];
        for (site, a) in self.amps.iter().enumerate() {
            out[(site + 1) % n][R] = a[R];
            out[(site + n - 1) % n][L] = a[L];
        }
        self.amps = out;
    }

    fn apply_local(&mut self, m: &Mat2) {
        for a in &mut self.amps {
            let (r, l) = (a[R], a[L]);
            a[R] = m[(0, 0)] * r + m[(0, 1)] * l;
            a[L] = m[(1, 0)] * r + m[(1, 1)] * l;
        }
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites < 2 {
        return Err(Error::Domain(format!("need at least 2 sites, got {n_sites}")));
    }
    Ok(())
}

/// One Dirac-walk step: shift, then the mass coin `e^{-imc²σxδt}`.
pub fn step_dirac(state: &LatticeState, params: &WalkParams) -> LatticeState {
    let mut out = state.clone();
    out.shift();
    out.apply_local(&su2_exp(Axis::X, -params.mass_phase()));
    out
}

/// One modified-walk step: the `σ_θ` shift, the `σ_{-θ}` shift, then the coin.
///
/// Each rotated shift is `R e^{-iPσzδx} R†` with `R = e^{-iθσx/2}`.
pub fn step_mod(state: &LatticeState, params: &WalkParams) -> Result<LatticeState> {
    if state.n_sites() < 4 {
        return Err(Error::Domain(format!(
            "the modified walk needs at least 4 sites, got {}",
            state.n_sites()
        )));
    }
    let r = rotation(Axis::X, params.theta);
    let r_dag = r.adjoint();
    let mut out = state.clone();
    out.apply_local(&r_dag);
    out.shift();
    out.apply_local(&(r * r));
    out.shift();
    out.apply_local(&(su2_exp(Axis::X, -params.mass_phase()) * r_dag));
    Ok(out)
}

pub fn step(state: &LatticeState, params: &WalkParams, model: Model) -> Result<LatticeState> {
    match model {
        Model::Dirac => Ok(step_dirac(state, params)),
        Model::Modified => step_mod(state, params),
    }
}

/// Lattice momentum indices `k ∈ {−⌊N/2⌋, …, ⌈N/2⌉−1}`.
pub fn momentum_indices(n_sites: usize) -> Vec<i64> {
    let lo = -((n_sites / 2) as i64);
    (0..n_sites as i64).map(|j| lo + j).collect()
}

/// `p_k = 2πk/(Nδx)`
pub fn momentum(k: i64, n_sites: usize, dx: f64) -> f64 {
    TAU * k as f64 / (n_sites as f64 * dx)
}

/// Momentum amplitudes ordered as [`momentum_indices`].
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumAmplitudes {
    pub k: Vec<i64>,
    pub amps: Vec<[C64; 2]>,
}

impl MomentumAmplitudes {
    pub fn get(&self, k: i64) -> Option<[C64; 2]> {
        self.k.iter().position(|&j| j == k).map(|i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).sum()
    }
}

/// Unitary DFT `ψ̃(p_k) = Σ_n e^{-i p_k n δx} ψ(n) / √N`.
pub fn dft(state: &LatticeState) -> MomentumAmplitudes {
    let n = state.n_sites();
    let scale = 1.0 / (n as f64).sqrt();
    let k = momentum_indices(n);
    let amps = k
        .iter()
        .map(|&kk| {
            state.amps.iter().enumerate().fold([cr(0.0); 2], |acc, (site, a)| {
                let ph = C64::from_polar(scale, -TAU * (kk * site as i64) as f64 / n as f64);
                [acc[0] + a[0] * ph, acc[1] + a[1] * ph]
            })
        })
        .collect();
    MomentumAmplitudes { k, amps }
}

/// Inverse of [`dft`]. The result is not renormalized.
pub fn idft(m: &MomentumAmplitudes) -> LatticeState {
    let n = m.k.len();
    let scale = 1.0 / (n as f64).sqrt();
    let amps = (0..n)
        .map(|site| {
            m.k.iter().zip(&m.amps).fold([cr(0.0); 2], |acc, (&kk, a)| {
                let ph = C64::from_polar(scale, TAU * (kk * site as i64) as f64 / n as f64);
                [acc[0] + a[0] * ph, acc[1] + a[1] * ph]
            })
        })
        .collect();
    LatticeState { amps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk1d::{bloch_matrix, dispersion};
    use proptest::prelude::*;

    fn dirac(mdt: f64) -> WalkParams {
        WalkParams::from_mass_phase(Model::Dirac, mdt, 0.0).unwrap()
    }

    fn modified(mdt: f64, theta: f64) -> WalkParams {
        WalkParams::from_mass_phase(Model::Modified, mdt, theta).unwrap()
    }

    fn max_diff(a: &LatticeState, b: &LatticeState) -> f64 {
        a.amps
            .iter()
            .zip(&b.amps)
            .map(|(x, y)| (x[0] - y[0]).norm().max((x[1] - y[1]).norm()))
            .fold(0.0, f64::max)
    }

    /// Spectral oracle: dft⁻¹ ∘ U(p_k) ∘ dft.
    fn spectral_step(state: &LatticeState, params: &WalkParams, model: Model) -> LatticeState {
        let mut m = dft(state);
        let n = state.n_sites();
        for (kk, a) in m.k.iter().zip(m.amps.iter_mut()) {
            let u = bloch_matrix(momentum(*kk, n, params.dx), params, model);
            *a = [u[(0, 0)] * a[0] + u[(0, 1)] * a[1], u[(1, 0)] * a[0] + u[(1, 1)] * a[1]];
        }
        idft(&m)
    }

    #[test]
    fn massless_step_is_pure_shift() {
        let s = LatticeState::delta(8, 0, R).unwrap();
        let out = step_dirac(&s, &dirac(0.0));
        assert_eq!(out.amps[1][R], cr(1.0));
        assert_eq!(out.support(0.0), vec![1]);
        let s = LatticeState::delta(8, 0, L).unwrap();
        assert_eq!(step_dirac(&s, &dirac(0.0)).support(0.0), vec![7]);
    }

    #[test]
    fn coin_row_after_shift() {
        let s = LatticeState::delta(8, 0, R).unwrap();
        let out = step_dirac(&s, &dirac(0.2));
        assert!((out.amps[1][R] - cr(0.2f64.cos())).norm() < 1e-16);
        assert!((out.amps[1][L] - C64::new(0.0, -0.2f64.sin())).norm() < 1e-16);
    }

    #[test]
    fn plane_waves_are_eigenstates() {
        let n = 16;
        for (params, model) in [
            (dirac(0.2), Model::Dirac),
            (modified(0.2, 3.0 * std::f64::consts::PI / 8.0), Model::Modified),
        ] {
            for k in momentum_indices(n) {
                let p = momentum(k, n, params.dx);
                let r = dispersion(p, &params, model).unwrap();
                for (e, s) in [(r.e_plus, r.s_plus), (r.e_minus, r.s_minus)] {
                    let state = LatticeState::plane_wave(n, k, &s).unwrap();
                    let out = step(&state, &params, model).unwrap();
                    let phase = C64::from_polar(1.0, -e * params.dt);
                    let expected = LatticeState {
                        amps: state.amps.iter().map(|a| [a[0] * phase, a[1] * phase]).collect(),
                    };
                    assert!(max_diff(&out, &expected) < 1e-12, "k = {k}");
                }
            }
        }
    }

    #[test]
    fn modified_massless_untilted_moves_two_sites() {
        let s = LatticeState::delta(8, 3, R).unwrap();
        let out = step_mod(&s, &modified(0.0, 0.0)).unwrap();
        assert_eq!(out.support(1e-15), vec![5]);
        assert!((out.amps[5][R].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn modified_support_grows_by_two() {
        let s = LatticeState::delta(16, 8, L).unwrap();
        let out = step_mod(&s, &modified(0.3, std::f64::consts::PI / 8.0)).unwrap();
        let sup = out.support(0.0);
        assert!(sup.iter().all(|&n| (6..=10).contains(&n)), "{sup:?}");
        assert!(step_mod(&LatticeState::delta(3, 0, R).unwrap(), &modified(0.1, 0.1)).is_err());
    }

    #[test]
    fn dft_examples() {
        let n = 8;
        let h = 1.0 / (n as f64).sqrt();
        let uniform = LatticeState::from_amplitudes(vec![[cr(h), cr(0.0)]; n]).unwrap();
        let m = dft(&uniform);
        assert!((m.get(0).unwrap()[0] - cr(1.0)).norm() < 1e-15);
        assert!(m.norm_sqr() - m.get(0).unwrap()[0].norm_sqr() < 1e-28);

        let delta = LatticeState::delta(n, 0, R).unwrap();
        assert!(dft(&delta).amps.iter().all(|a| (a[0].norm() - h).abs() < 1e-15));

        let wave = LatticeState::plane_wave(n, 3, &Spinor2::new(cr(1.0), cr(0.0))).unwrap();
        let m = dft(&wave);
        assert!((m.get(3).unwrap()[0].norm() - 1.0).abs() < 1e-14);
        assert_eq!(momentum_indices(8), vec![-4, -3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(momentum_indices(5), vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn support_examples() {
        let s = LatticeState::delta(10, 4, R).unwrap();
        assert_eq!(s.support(0.0), vec![4]);
        let zero = LatticeState {
            amps: vec![[cr(0.0); 2]; 4],
        };
        assert!(zero.support(0.0).is_empty());
        let mut s = s;
        for k in 1..=3 {
            s = step_dirac(&s, &dirac(0.4));
            assert!(s.support(0.0).iter().all(|&n| n.abs_diff(4) <= k));
        }
    }

    #[test]
    fn rejects_bad_states() {
        assert!(LatticeState::delta(1, 0, R).is_err());
        assert!(LatticeState::delta(4, 4, R).is_err());
        assert!(LatticeState::from_amplitudes(vec![[cr(1.0), cr(1.0)]; 4]).is_err());
    }

    proptest! {
        #[test]
        fn step_matches_spectral_oracle(
            n in 4usize..40,
            site in 0usize..40,
            comp in 0usize..2,
            mdt in 0.0f64..1.5,
            theta in 0.0f64..1.5,
        ) {
            let s = LatticeState::delta(n, site % n, comp).unwrap();
            let d = dirac(mdt);
            prop_assert!(max_diff(&step_dirac(&s, &d), &spectral_step(&s, &d, Model::Dirac)) < 1e-10);
            let m = modified(mdt, theta);
            prop_assert!(max_diff(&step_mod(&s, &m).unwrap(), &spectral_step(&s, &m, Model::Modified)) < 1e-10);
        }

        #[test]
        fn dft_parseval_and_inverse(re in proptest::collection::vec(-1.0f64..1.0, 16), im in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let raw: Vec<[C64; 2]> = (0..8).map(|n| [C64::new(re[2 * n], im[2 * n]), C64::new(re[2 * n + 1], im[2 * n + 1])]).collect();
            let norm: f64 = raw.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let s = LatticeState::from_amplitudes(raw.iter().map(|a| [a[0] / norm, a[1] / norm]).collect()).unwrap();
            let m = dft(&s);
            prop_assert!((m.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!(max_diff(&idft(&m), &s) < 1e-12);
        }

        #[test]
        fn translation_covariance(n in 4usize..20, site in 0usize..20, shift in -30i64..30, mdt in 0.0f64..1.5, theta in 0.0f64..1.5) {
            let s = LatticeState::delta(n, site % n, 1).unwrap();
            let d = dirac(mdt);
            prop_assert_eq!(step_dirac(&s.translate(shift), &d), step_dirac(&s, &d).translate(shift));
            let m = modified(mdt, theta);
            prop_assert_eq!(step_mod(&s.translate(shift), &m).unwrap(), step_mod(&s, &m).unwrap().translate(shift));
        }
    }
}
