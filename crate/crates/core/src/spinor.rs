//! Exact small-matrix complex algebra.
//!
//! Everything here works on 2×2 and 4×4 complex matrices. SU(2) exponentials
//! use the closed form `exp(i θ â·σ) = I cos θ + i â·σ sin θ`, and the 2×2
//! unitary eigenproblem is solved through the `r·I + i·A` split, so no
//! matrix logarithm (and no branch ambiguity) is ever involved.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SMatrix, SVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat<const D: usize> = SMatrix<C64, D, D>;
pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;
pub type Spinor2 = SVector<C64, 2>;
pub type Spinor4 = SVector<C64, 4>;

/// Tolerance used when checking that an input matrix is unitary.
pub const UNITARY_INPUT_TOL: f64 = 1e-10;

const AXIS_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

/// σ_x = |r⟩⟨l| + |l⟩⟨r| in the (r, l) basis.
pub fn sigma_x() -> Mat2 {
    Mat2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
}

/// σ_y = -i|r⟩⟨l| + i|l⟩⟨r|.
pub fn sigma_y() -> Mat2 {
    Mat2::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0))
}

/// σ_z = |r⟩⟨r| - |l⟩⟨l|.
pub fn sigma_z() -> Mat2 {
    Mat2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
}

/// Unit vector in R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    n: [f64; 3],
}

impl Axis {
    /// Fails unless `(x, y, z)` already has unit length (within 1e-12).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOL {
            return Err(Error::Domain(format!(
                "axis ({x}, {y}, {z}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self { n: [x, y, z] })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self {
            n: [x / norm, y / norm, z / norm],
        })
    }

    pub const X: Axis = Axis { n: [1.0, 0.0, 0.0] };
    pub const Y: Axis = Axis { n: [0.0, 1.0, 0.0] };
    pub const Z: Axis = Axis { n: [0.0, 0.0, 1.0] };

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    /// â·σ
    pub fn dot_sigma(&self) -> Mat2 {
        let [x, y, z] = self.n;
        Mat2::new(c(z, 0.0), c(x, -y), c(x, y), c(-z, 0.0))
    }
}

/// `exp(i·angle·â·σ) = I cos(angle) + i â·σ sin(angle)`.
pub fn su2_exp(axis: Axis, angle: f64) -> Mat2 {
    let (s, co) = angle.sin_cos();
    let [x, y, z] = axis.n;
    // I co + i s (x σx + y σy + z σz)
    Mat2::new(c(co, s * z), c(s * y, s * x), c(-s * y, s * x), c(co, -s * z))
}

/// Spin rotation `R_{θ,n̂} = exp(-i σ·n̂ θ/2)`.
pub fn rotation(axis: Axis, theta: f64) -> Mat2 {
    su2_exp(axis, -0.5 * theta)
}

/// `σ_θ = R_{θ,x̂} σ_z R_{θ,x̂}† = cos θ σ_z − sin θ σ_y`.
///
/// The sign of the σ_y term follows from the rotation; with this choice
/// `Re tr U_mod(p) / 2` matches the closed-form quasi-energy cosine.
pub fn rotated_sigma(theta: f64) -> Mat2 {
    let (s, co) = theta.sin_cos();
    sigma_z() * cr(co) - sigma_y() * cr(s)
}

pub fn max_abs_diff<const D: usize>(a: &CMat<D>, b: &CMat<D>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`
pub fn unitarity_error<const D: usize>(u: &CMat<D>) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &CMat::<D>::identity())
}

/// Largest entry of `U†U − I` for a dynamically sized matrix.
pub fn unitarity_error_dyn(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
}

/// `‖A − A†‖_max`
pub fn hermiticity_error<const D: usize>(a: &CMat<D>) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn is_unitary<const D: usize>(u: &CMat<D>, tol: f64) -> bool {
    unitarity_error(u) <= tol
}

pub fn is_hermitian<const D: usize>(a: &CMat<D>, tol: f64) -> bool {
    hermiticity_error(a) <= tol
}

/// Folds an angle into `(-π, π]`.
pub fn fold_angle(x: f64) -> f64 {
    let y = x - TAU * ((x - PI) / TAU).ceil();
    // ceil can land one period off when x - PI is within an ulp of a multiple of TAU
    if y <= -PI {
        y + TAU
    } else if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Energy of an eigenvalue `e^{iφ} = e^{-iEδt}` folded into `(-π/δt, π/δt]`.
pub fn principal_energy(phase: f64, dt: f64) -> f64 {
    fold_angle(-phase) / dt
}

/// Distance between two energies on the quasi-energy circle of period `2π/δt`.
pub fn modular_distance(e1: f64, e2: f64, dt: f64) -> f64 {
    (fold_angle((e1 - e2) * dt) / dt).abs()
}

/// Multiplies `v` by a phase so that its first nonzero component is real positive.
pub fn fix_gauge<const D: usize>(v: &mut SVector<C64, D>) {
    fix_gauge_slice(v.as_mut_slice());
}

fn fix_gauge_slice(v: &mut [C64]) {
    let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-12) else {
        return;
    };
    let phase = lead.conj() / lead.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// One eigenpair of a unitary: `U v = e^{iφ} v`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<const D: usize> {
    /// φ in `(-π, π]`.
    pub phase: f64,
    pub vector: SVector<C64, D>,
}

/// Eigendecomposition of small unitaries.
pub trait UnitaryEigen<const D: usize> {
    fn eig_unitary(&self) -> Result<Vec<EigenPair<D>>>;
}

impl UnitaryEigen<2> for Mat2 {
    fn eig_unitary(&self) -> Result<Vec<EigenPair<2>>> {
        check_unitary(self)?;
        Ok(eig2_closed_form(self)
            .into_iter()
            .map(|(phase, mut vector)| {
                fix_gauge(&mut vector);
                EigenPair { phase, vector }
            })
            .collect())
    }
}

impl UnitaryEigen<4> for Mat4 {
    fn eig_unitary(&self) -> Result<Vec<EigenPair<4>>> {
        check_unitary(self)?;
        let dynamic = DMatrix::from_fn(4, 4, |i, j| self[(i, j)]);
        let (phases, vectors) = eig_normal(&dynamic, 0);
        Ok(phases
            .into_iter()
            .zip(vectors)
            .map(|(phase, v)| {
                let mut vector = Spinor4::from_iterator(v.iter().copied());
                fix_gauge(&mut vector);
                EigenPair { phase, vector }
            })
            .collect())
    }
}

/// Free-function form of [`UnitaryEigen::eig_unitary`].
pub fn eig_unitary<const D: usize>(u: &CMat<D>) -> Result<Vec<EigenPair<D>>>
where
    CMat<D>: UnitaryEigen<D>,
{
    u.eig_unitary()
}

fn check_unitary<const D: usize>(u: &CMat<D>) -> Result<()> {
    let err = unitarity_error(u);
    if err.is_finite() && err <= UNITARY_INPUT_TOL {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "matrix is not unitary: ||U^dag U - I||_max = {err:e}"
        )))
    }
}

/// SU(2) coordinates of a 2×2 unitary: `U = e^{iγ}(v0 I + i v⃗·σ)`.
///
/// Returns `(γ, v0, v⃗)`.
pub fn su2_coordinates(u: &Mat2) -> (f64, f64, [f64; 3]) {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let gamma = 0.5 * det.arg();
    let w = C64::from_polar(1.0, -gamma);
    let (a, b, cc, d) = (u[(0, 0)] * w, u[(0, 1)] * w, u[(1, 0)] * w, u[(1, 1)] * w);
    // [[v0 + i v3, v2 + i v1], [-v2 + i v1, v0 - i v3]]
    let v0 = 0.5 * (a.re + d.re);
    let v1 = 0.5 * (b.im + cc.im);
    let v2 = 0.5 * (b.re - cc.re);
    let v3 = 0.5 * (a.im - d.im);
    (gamma, v0, [v1, v2, v3])
}

/// Eigenvector of `n̂·σ` with eigenvalue `+1`, for a unit vector `n`.
fn plus_eigenvector(n: [f64; 3]) -> Spinor2 {
    let [nx, ny, nz] = n;
    let v = if nz >= 0.0 {
        Spinor2::new(cr(1.0 + nz), c(nx, ny))
    } else {
        Spinor2::new(c(nx, -ny), cr(1.0 - nz))
    };
    v.normalize()
}

/// Closed-form eigenpairs of a 2×2 unitary, no gauge fixing.
/// Order: the `+1` eigenvector of `v̂·σ` first.
pub(crate) fn eig2_closed_form(u: &Mat2) -> [(f64, Spinor2); 2] {
    let (gamma, v0, v) = su2_coordinates(u);
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if len < 1e-15 {
        let phase = fold_angle(gamma + if v0 >= 0.0 { 0.0 } else { PI });
        return [
            (phase, Spinor2::new(cr(1.0), cr(0.0))),
            (phase, Spinor2::new(cr(0.0), cr(1.0))),
        ];
    }
    let n = [v[0] / len, v[1] / len, v[2] / len];
    let up = plus_eigenvector(n);
    let down = plus_eigenvector([-n[0], -n[1], -n[2]]);
    [
        (fold_angle(gamma + len.atan2(v0)), up),
        (fold_angle(gamma + (-len).atan2(v0)), down),
    ]
}

/// Mixing coefficients for the Hermitian combination `H + λK`; alternated
/// between recursion levels so an accidental collision at one level is
/// resolved at the next.
const HERMITIAN_MIX: [f64; 2] = [0.618_033_988_749_894_8, -0.414_213_562_373_095_1];

const MAX_REFINE_DEPTH: usize = 6;

/// Eigendecomposition of a (numerically) unitary matrix of any small size.
///
/// The matrix is recentred on its mean eigenphase and the Hermitian
/// combination `H + λK` of the recentred real and imaginary parts is
/// diagonalized. Clusters the Hermitian solve cannot separate are re-solved
/// on their invariant subspace, which keeps `U v − e^{iφ} v` at rounding
/// level even for bands split by far less than the matrix norm.
fn eig_normal(u: &DMatrix<C64>, depth: usize) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = u.nrows();
    if n == 1 {
        return (vec![u[(0, 0)].arg()], vec![DVector::from_element(1, cr(1.0))]);
    }
    if n == 2 {
        let m = Mat2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        let pairs = eig2_closed_form(&m);
        return (
            pairs.iter().map(|(p, _)| *p).collect(),
            pairs
                .iter()
                .map(|(_, v)| DVector::from_iterator(2, v.iter().copied()))
                .collect(),
        );
    }

    let trace = u.trace();
    let centre = if trace.norm() > 1e-8 {
        trace / trace.norm()
    } else {
        cr(1.0)
    };
    // A = (ζ̄U − I)/i has eigenvalues (e^{iε} − 1)/i ≈ ε for U-eigenvalues ζe^{iε}.
    let shifted = (u * centre.conj() - DMatrix::identity(n, n)) * c(0.0, -1.0);
    let herm = (&shifted + shifted.adjoint()) * cr(0.5);
    let anti = (&shifted - shifted.adjoint()) * c(0.0, -0.5);
    let mix = &herm + &anti * cr(HERMITIAN_MIX[depth % 2]);
    let eigen = SymmetricEigen::new(mix);
    let cols: Vec<DVector<C64>> = (0..n).map(|k| eigen.eigenvectors.column(k).into_owned()).collect();

    let spread = shifted.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cluster_tol = 1e-6 * spread.max(1e-300);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(last) if eigen.eigenvalues[k] - eigen.eigenvalues[*last.last().unwrap()] < cluster_tol => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut phases = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for cluster in clusters {
        let basis = DMatrix::from_columns(&cluster.iter().map(|&k| cols[k].clone()).collect::<Vec<_>>());
        let sub = basis.adjoint() * u * &basis;
        let g = sub.nrows();
        let mean = sub.trace() / cr(g as f64);
        let off_scalar = (&sub - DMatrix::identity(g, g) * mean)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if g == 1 || off_scalar < 1e-15 || depth >= MAX_REFINE_DEPTH {
            for k in 0..g {
                phases.push(fold_angle(sub[(k, k)].arg()));
                vectors.push(basis.column(k).into_owned());
            }
            continue;
        }
        let (p, ws) = eig_normal(&sub, depth + 1);
        for (ph, w) in p.into_iter().zip(ws) {
            phases.push(ph);
            vectors.push(&basis * w);
        }
    }
    (phases, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Term-by-term series for exp(M), used as an independent oracle.
    fn series_exp(m: &Mat2) -> Mat2 {
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..40 {
            term = term * m / cr(k as f64);
            sum += term;
        }
        sum
    }

    fn assert_close<const D: usize>(a: &CMat<D>, b: &CMat<D>, tol: f64) {
        let d = max_abs_diff(a, b);
        assert!(d <= tol, "deviation {d:e} > {tol:e}\n{a}\n{b}");
    }

    #[test]
    fn su2_exp_zero_angle_is_identity() {
        assert_close(&su2_exp(Axis::Z, 0.0), &identity2(), 0.0);
    }

    #[test]
    fn su2_exp_quarter_turn_is_i_sigma_x() {
        assert_close(&su2_exp(Axis::X, PI / 2.0), &(sigma_x() * c(0.0, 1.0)), 1e-15);
    }

    #[test]
    fn su2_exp_matches_series() {
        let expected = series_exp(&(sigma_z() * c(0.0, 0.3)));
        let diag = Mat2::new(C64::from_polar(1.0, 0.3), cr(0.0), cr(0.0), C64::from_polar(1.0, -0.3));
        assert_close(&expected, &diag, 1e-14);
        assert_close(&su2_exp(Axis::Z, 0.3), &expected, 1e-14);

        let axis = Axis::normalized(0.3, -1.2, 0.7).unwrap();
        let expected = series_exp(&(axis.dot_sigma() * c(0.0, 1.1)));
        assert_close(&su2_exp(axis, 1.1), &expected, 1e-13);
    }

    #[test]
    fn non_unit_axis_is_rejected() {
        assert!(matches!(Axis::new(1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(Axis::normalized(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rotated_sigma_special_angles() {
        assert_close(&rotated_sigma(0.0), &sigma_z(), 0.0);
        assert_close(&rotated_sigma(PI / 2.0), &(-sigma_y()), 1e-15);
    }

    #[test]
    fn rotated_sigma_matches_conjugation() {
        let theta = PI / 8.0;
        let r = rotation(Axis::X, theta);
        let conj = r * sigma_z() * r.adjoint();
        assert_close(&rotated_sigma(theta), &conj, 1e-12);
        let s = rotated_sigma(theta);
        assert!(is_hermitian(&s, 1e-15));
        let eig = (s * s - identity2()).norm();
        assert!(eig < 1e-15, "σ_θ² should be I");
    }

    #[test]
    fn eig_identity() {
        let pairs = identity2().eig_unitary().unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!(p.phase.abs() < 1e-15);
        }
        let overlap = (pairs[0].vector.adjoint() * pairs[1].vector)[(0, 0)].norm();
        assert!(overlap < 1e-15);
    }

    #[test]
    fn eig_diagonal() {
        let u = Mat2::new(C64::from_polar(1.0, 0.3), cr(0.0), cr(0.0), C64::from_polar(1.0, -0.3));
        let mut pairs = u.eig_unitary().unwrap();
        pairs.sort_by(|a, b| b.phase.total_cmp(&a.phase));
        assert!((pairs[0].phase - 0.3).abs() < 1e-15);
        assert!((pairs[1].phase + 0.3).abs() < 1e-15);
        assert!((pairs[0].vector - Spinor2::new(cr(1.0), cr(0.0))).norm() < 1e-15);
        assert!((pairs[1].vector - Spinor2::new(cr(0.0), cr(1.0))).norm() < 1e-15);
    }

    #[test]
    fn eig_sigma_x_rotation() {
        let u = su2_exp(Axis::X, -0.2);
        let mut pairs = u.eig_unitary().unwrap();
        pairs.sort_by(|a, b| a.phase.total_cmp(&b.phase));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pairs[0].phase + 0.2).abs() < 1e-15);
        assert!((pairs[1].phase - 0.2).abs() < 1e-15);
        assert!((pairs[0].vector - Spinor2::new(cr(h), cr(h))).norm() < 1e-15);
        assert!((pairs[1].vector - Spinor2::new(cr(h), cr(-h))).norm() < 1e-15);
    }

    #[test]
    fn eig_rejects_non_unitary() {
        let m = Mat2::new(cr(1.0), cr(1.0), cr(0.0), cr(1.0));
        assert!(matches!(m.eig_unitary(), Err(Error::Domain(_))));
    }

    #[test]
    fn principal_energy_examples() {
        assert!((principal_energy(-0.2, 1.0) - 0.2).abs() < 1e-15);
        assert_eq!(principal_energy(PI, 1.0), PI);
        assert_eq!(principal_energy(-PI, 1.0), PI);

        // modular reduction by repeated subtraction
        let mut e = -3.5_f64;
        while e > PI {
            e -= TAU;
        }
        while e <= -PI {
            e += TAU;
        }
        let expected = e / 2.0;
        assert!((expected - (TAU - 3.5) / 2.0).abs() < 1e-15);
        assert!((principal_energy(3.5, 2.0) - expected).abs() < 1e-15);
        assert!((principal_energy(3.5, 2.0) - 1.3916).abs() < 1e-4);
    }

    fn random_unitary4(seed: &[f64]) -> Mat4 {
        let m = Mat4::from_fn(|i, j| {
            c(
                seed[(4 * i + j) % seed.len()] + (i as f64) * 0.37,
                seed[(3 * i + 5 * j + 1) % seed.len()] - (j as f64) * 0.21,
            )
        });
        m.qr().q()
    }

    /// Block-structured unitaries with exactly or nearly degenerate eigenvalues.
    fn near_degenerate4(split: f64, a: f64) -> Mat4 {
        let base = Mat4::from_diagonal(&Spinor4::new(
            C64::from_polar(1.0, a),
            C64::from_polar(1.0, a + split),
            C64::from_polar(1.0, -a),
            C64::from_polar(1.0, -a - split),
        ));
        let q = random_unitary4(&[0.3, -0.7, 1.1, 0.25, -0.4, 0.9, 0.05, -1.3]);
        q * base * q.adjoint()
    }

    fn check_eig4(u: &Mat4) {
        let pairs = u.eig_unitary().unwrap();
        assert_eq!(pairs.len(), 4);
        let mut recon = Mat4::zeros();
        for (i, p) in pairs.iter().enumerate() {
            let resid = (u * p.vector - p.vector * C64::from_polar(1.0, p.phase)).norm();
            assert!(resid < 1e-10, "residual {resid:e}");
            for q in &pairs[i + 1..] {
                assert!((p.vector.adjoint() * q.vector)[(0, 0)].norm() < 1e-10);
            }
            assert!(p.phase > -PI && p.phase <= PI);
            recon += p.vector * p.vector.adjoint() * C64::from_polar(1.0, p.phase);
        }
        assert!(max_abs_diff(&recon, u) < 1e-10);
    }

    #[test]
    fn eig4_handles_degenerate_and_split_bands() {
        check_eig4(&Mat4::identity());
        check_eig4(&near_degenerate4(0.0, 0.4));
        check_eig4(&near_degenerate4(1e-9, 0.4));
        check_eig4(&near_degenerate4(1e-5, 2.9));
        check_eig4(&near_degenerate4(0.3, 1.0));
        let mut m = Mat4::identity() * cr(-1.0);
        m[(0, 0)] = cr(1.0);
        check_eig4(&m);
    }

    proptest! {
        #[test]
        fn su2_exp_inverse_and_det(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, angle in -10.0f64..10.0) {
            prop_assume!(x * x + y * y + z * z > 1e-3);
            let axis = Axis::normalized(x, y, z).unwrap();
            let u = su2_exp(axis, angle);
            assert_close(&(u * su2_exp(axis, -angle)), &identity2(), 1e-12);
            prop_assert!((u.determinant() - cr(1.0)).norm() < 1e-12);
            prop_assert!(unitarity_error(&u) < 1e-12);
        }

        #[test]
        fn eig2_reconstructs(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, angle in -4.0f64..4.0, gphase in -3.0f64..3.0) {
            prop_assume!(x * x + y * y + z * z > 1e-3);
            let u = su2_exp(Axis::normalized(x, y, z).unwrap(), angle) * C64::from_polar(1.0, gphase);
            let pairs = u.eig_unitary().unwrap();
            let mut recon = Mat2::zeros();
            for p in &pairs {
                prop_assert!((u * p.vector - p.vector * C64::from_polar(1.0, p.phase)).norm() < 1e-10);
                recon += p.vector * p.vector.adjoint() * C64::from_polar(1.0, p.phase);
            }
            prop_assert!((pairs[0].vector.adjoint() * pairs[1].vector)[(0, 0)].norm() < 1e-10);
            prop_assert!(max_abs_diff(&recon, &u) < 1e-10);
        }

        #[test]
        fn eig4_reconstructs(seed in proptest::collection::vec(-2.0f64..2.0, 8)) {
            check_eig4(&random_unitary4(&seed));
        }

        #[test]
        fn principal_energy_in_branch(phase in -100.0f64..100.0, dt in 0.01f64..10.0) {
            let e = principal_energy(phase, dt);
            prop_assert!(e * dt > -PI && e * dt <= PI);
            // same point on the circle
            prop_assert!(fold_angle(e * dt + phase).abs() < 1e-9);
        }
    }
}
