//! Jordan-Wigner image of the fermionic fields and the reference QCA unitary.
//!
//! Qubit `q = 2n + 0` holds mode `(n, l)` and `q = 2n + 1` holds `(n, r)`.
//! Bit `q` of a basis index is the occupation of qubit `q`, and
//!
//! ```text
//! ψ†_q = A†_q · Π_{q' < q} Z_{q'}
//! ```
//!
//! so a basis state with occupied qubits `q1 < q2 < … < qk` equals
//! `ψ†_{q1} ψ†_{q2} ⋯ ψ†_{qk} |0⟩`.

use nalgebra::{DMatrix, DVector};

use super::{qubit, Chirality, MAX_REFERENCE_SITES};
use crate::error::{Error, Result};
use crate::spinor::{cr, C64};
use crate::walk1d::{Model, WalkParams};

fn string_sign(q: usize, index: usize) -> f64 {
    if (index & ((1usize << q) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `ψ†_q |index⟩ = sign |index'⟩`, or `None` when the mode is occupied.
pub fn create_on_basis(q: usize, index: usize) -> Option<(usize, f64)> {
    if index >> q & 1 == 1 {
        None
    } else {
        Some((index | 1 << q, string_sign(q, index)))
    }
}

/// `ψ_q |index⟩ = sign |index'⟩`, or `None` when the mode is empty.
pub fn annihilate_on_basis(q: usize, index: usize) -> Option<(usize, f64)> {
    if index >> q & 1 == 0 {
        None
    } else {
        Some((index & !(1 << q), string_sign(q, index)))
    }
}

fn check_reference_size(n_sites: usize) -> Result<()> {
    if n_sites > MAX_REFERENCE_SITES {
        return Err(Error::SizeLimit {
            what: "sites for dense fermionic operators",
            value: n_sites,
            max: MAX_REFERENCE_SITES,
        });
    }
    if n_sites == 0 {
        return Err(Error::Domain("need at least one site".into()));
    }
    Ok(())
}

/// Dense creation operator `ψ^{a†}_n` on `2^{2N}` amplitudes.
pub fn jw_field_operator(site: usize, a: Chirality, n_sites: usize) -> Result<DMatrix<C64>> {
    check_reference_size(n_sites)?;
    if site >= n_sites {
        return Err(Error::IndexOutOfRange {
            index: site,
            n_qubits: 2 * n_sites,
        });
    }
    let dim = 1usize << (2 * n_sites);
    let q = qubit(site, a);
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        if let Some((i, s)) = create_on_basis(q, j) {
            m[(i, j)] = cr(s);
        }
    }
    Ok(m)
}

/// `v += coef · ψ†_{to} ψ_{from} v`
fn add_hop(out: &mut DVector<C64>, v: &DVector<C64>, to: usize, from: usize, coef: C64) {
    for (j, &amp) in v.iter().enumerate() {
        if amp == cr(0.0) {
            continue;
        }
        if let Some((k, s1)) = annihilate_on_basis(from, j) {
            if let Some((i, s2)) = create_on_basis(to, k) {
                out[i] += coef * amp * (s1 * s2);
            }
        }
    }
}

/// `exp(-iα Σ_n Ψ_n† X Ψ_n)` applied to `v`.
///
/// With `h_n = ψ^{r†}_n ψ^l_n + ψ^{l†}_n ψ^r_n` one has `h_n³ = h_n`, so
/// `e^{-iα h_n} = 1 + (cos α − 1) h_n² − i sin α h_n`. The `h_n` commute.
fn apply_mass_form(v: &DVector<C64>, alpha: f64, n_sites: usize) -> DVector<C64> {
    let mut cur = v.clone();
    let (s, co) = alpha.sin_cos();
    for n in 0..n_sites {
        let (qr, ql) = (qubit(n, Chirality::R), qubit(n, Chirality::L));
        let h = |x: &DVector<C64>| {
            let mut y = DVector::zeros(x.len());
            add_hop(&mut y, x, qr, ql, cr(1.0));
            add_hop(&mut y, x, ql, qr, cr(1.0));
            y
        };
        let hv = h(&cur);
        let hhv = h(&hv);
        cur += hhv * cr(co - 1.0) + hv * C64::new(0.0, -s);
    }
    cur
}

/// Image of a mode under one shift: `(n, r) → (n+1, r)`, `(n, l) → (n−1, l)`,
/// together with whether it crossed the periodic boundary.
fn shifted_mode(q: usize, n_sites: usize) -> (usize, bool) {
    let n = q / 2;
    if q % 2 == 1 {
        let crosses = n + 1 == n_sites;
        (qubit((n + 1) % n_sites, Chirality::R), crosses)
    } else {
        let crosses = n == 0;
        (qubit((n + n_sites - 1) % n_sites, Chirality::L), crosses)
    }
}

/// The shift `T` on a basis state.
///
/// Occupied modes are mapped as `T ψ_q T† = ψ_{π(q)}`; reordering the
/// creation operators contributes the permutation sign. On the ring a mode
/// that crosses the boundary picks up `(−1)^{k+1}` in the `k`-particle
/// sector, the boundary condition realized by a Z-string that stops at
/// site 0.
fn shift_basis(index: usize, n_sites: usize) -> (usize, f64) {
    let occupied: Vec<usize> = (0..2 * n_sites).filter(|&q| index >> q & 1 == 1).collect();
    let k = occupied.len();
    let boundary = if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut sign = 1.0;
    let images: Vec<usize> = occupied
        .iter()
        .map(|&q| {
            let (img, crosses) = shifted_mode(q, n_sites);
            if crosses {
                sign *= boundary;
            }
            img
        })
        .collect();
    let inversions = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| images[i] > images[j])
        .count();
    if inversions % 2 == 1 {
        sign = -sign;
    }
    (images.iter().fold(0, |acc, &q| acc | 1 << q), sign)
}

fn apply_shift(v: &DVector<C64>, n_sites: usize) -> DVector<C64> {
    let mut out = DVector::zeros(v.len());
    for (j, &amp) in v.iter().enumerate() {
        let (i, s) = shift_basis(j, n_sites);
        out[i] += amp * s;
    }
    out
}

/// Reference many-body unitary built from the fermionic definitions.
///
/// Dirac: `U = W T`. Modified: `U = W T_{−θ} T_θ` with `T_θ = R T R†` and
/// `R = exp(-i(θ/2) Σ Ψ†XΨ)`.
pub fn qca_reference_unitary(model: Model, n_sites: usize, params: &WalkParams) -> Result<DMatrix<C64>> {
    check_reference_size(n_sites)?;
    if n_sites < 2 {
        return Err(Error::Domain("need at least 2 sites".into()));
    }
    params.validate_for(model)?;
    let dim = 1usize << (2 * n_sites);
    let mdt = params.mass_phase();
    let half = 0.5 * params.theta;
    let mut u = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut v = DVector::zeros(dim);
        v[j] = cr(1.0);
        let v = match model {
            Model::Dirac => apply_shift(&v, n_sites),
            Model::Modified => {
                let v = apply_mass_form(&v, -half, n_sites);
                let v = apply_shift(&v, n_sites);
                let v = apply_mass_form(&v, 2.0 * half, n_sites);
                let v = apply_shift(&v, n_sites);
                apply_mass_form(&v, -half, n_sites)
            }
        };
        u.set_column(j, &apply_mass_form(&v, mdt, n_sites));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::unitarity_error_dyn;

    fn anticomm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        a * b + b * a
    }

    fn all_fields(n_sites: usize) -> Vec<DMatrix<C64>> {
        (0..n_sites)
            .flat_map(|n| [Chirality::L, Chirality::R].map(|a| jw_field_operator(n, a, n_sites).unwrap()))
            .collect()
    }

    #[test]
    fn car_algebra() {
        for n_sites in 1..=3 {
            let fields = all_fields(n_sites);
            let dim = 1 << (2 * n_sites);
            let id = DMatrix::<C64>::identity(dim, dim);
            for (i, a) in fields.iter().enumerate() {
                for (j, b) in fields.iter().enumerate() {
                    assert!(anticomm(a, b).norm() < 1e-14);
                    let expected = if i == j { id.clone() } else { DMatrix::zeros(dim, dim) };
                    assert!((anticomm(&a.adjoint(), b) - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn creation_on_vacuum_has_no_sign() {
        let m = jw_field_operator(0, Chirality::R, 2).unwrap();
        assert_eq!(m[(1 << qubit(0, Chirality::R), 0)], cr(1.0));
        // with (0, l) occupied the string flips the sign
        let from = 1 << qubit(0, Chirality::L);
        assert_eq!(m[(from | 1 << qubit(0, Chirality::R), from)], cr(-1.0));
    }

    #[test]
    fn shift_conjugates_fields() {
        let n_sites = 3;
        let params = WalkParams::dirac(0.0, 1.0, 1.0).unwrap();
        let t = qca_reference_unitary(Model::Dirac, n_sites, &params).unwrap();
        assert!(unitarity_error_dyn(&t) < 1e-13);
        // T ψ† T† = ψ†(shifted) holds sector-wise up to the boundary sign,
        // and exactly on the vacuum and one-particle sector.
        let vac = {
            let mut v = DVector::zeros(1 << (2 * n_sites));
            v[0] = cr(1.0);
            v
        };
        for n in 0..n_sites {
            let lhs = &t * jw_field_operator(n, Chirality::R, n_sites).unwrap() * &vac;
            let rhs = jw_field_operator((n + 1) % n_sites, Chirality::R, n_sites).unwrap() * &vac;
            assert!((lhs - rhs).norm() < 1e-14);
            let lhs = &t * jw_field_operator(n, Chirality::L, n_sites).unwrap() * &vac;
            let rhs = jw_field_operator((n + n_sites - 1) % n_sites, Chirality::L, n_sites).unwrap() * &vac;
            assert!((lhs - rhs).norm() < 1e-14);
        }
        // with (n, r) for n < N-1 the shift is exact on every state
        // whose other modes stay clear of the boundary
        let bulk = 1 << qubit(1, Chirality::L);
        let psi = jw_field_operator(0, Chirality::R, n_sites).unwrap();
        let next = jw_field_operator(1, Chirality::R, n_sites).unwrap();
        let mut v = DVector::zeros(1 << (2 * n_sites));
        v[bulk] = cr(1.0);
        let pre_image = t.adjoint() * &v;
        assert!(((&t * psi * pre_image) - next * &v).norm() < 1e-14);
    }

    #[test]
    fn mass_form_reproduces_field_mixing() {
        let n_sites = 2;
        let alpha = 0.2;
        let dim = 1 << (2 * n_sites);
        let mut w = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut v = DVector::zeros(dim);
            v[j] = cr(1.0);
            w.set_column(j, &apply_mass_form(&v, alpha, n_sites));
        }
        assert!(unitarity_error_dyn(&w) < 1e-14);
        let w_dag = w.adjoint();
        for n in 0..n_sites {
            let r = jw_field_operator(n, Chirality::R, n_sites).unwrap().adjoint();
            let l = jw_field_operator(n, Chirality::L, n_sites).unwrap().adjoint();
            let (s, co) = alpha.sin_cos();
            let i_s = C64::new(0.0, s);
            assert!((&w * &r * &w_dag - (&r * cr(co) + &l * i_s)).norm() < 1e-13);
            assert!((&w * &l * &w_dag - (&r * i_s + &l * cr(co))).norm() < 1e-13);
        }
    }

    #[test]
    fn reference_size_cap() {
        let params = WalkParams::dirac(0.1, 1.0, 1.0).unwrap();
        assert!(matches!(
            qca_reference_unitary(Model::Dirac, 6, &params),
            Err(Error::SizeLimit { .. })
        ));
    }
}
