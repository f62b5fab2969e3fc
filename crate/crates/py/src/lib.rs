//! Python bindings. Models are passed as the strings `"dirac"` or
//! `"modified"`; core errors surface as `ValueError`.

use diracsea_core::circuits::equivalence_report as core_equivalence_report;
use diracsea_core::fock::pair_creation_scan as core_pair_creation_scan;
use diracsea_core::lattice::{self, LatticeState};
use diracsea_core::spinor::C64;
use diracsea_core::walk1d::{self, GapCertificate};
use diracsea_core::walk3d::{self, Momentum3};
use diracsea_core::{Error, Model, WalkParams};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model(name: &str) -> PyResult<Model> {
    name.parse().map_err(err)
}

#[pyclass(name = "WalkParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyWalkParams(WalkParams);

#[pymethods]
impl PyWalkParams {
    /// Dirac walk with `δt = δx/c`.
    #[staticmethod]
    fn dirac(mass: f64, c: f64, dx: f64) -> PyResult<Self> {
        WalkParams::dirac(mass, c, dx).map(Self).map_err(err)
    }

    /// Modified walk with `δt = 2 cos θ δx/c`.
    #[staticmethod]
    fn modified(mass: f64, c: f64, dx: f64, theta: f64) -> PyResult<Self> {
        WalkParams::modified(mass, c, dx, theta).map(Self).map_err(err)
    }

    /// Dimensionless constructor (`c = δx = 1`). For the modified model a
    /// missing `theta` is chosen from the gap inequality.
    #[staticmethod]
    #[pyo3(signature = (model_name, mass_phase, theta=None))]
    fn from_mass_phase(model_name: &str, mass_phase: f64, theta: Option<f64>) -> PyResult<Self> {
        let m = model(model_name)?;
        let theta = match (m, theta) {
            (_, Some(t)) => t,
            (Model::Dirac, None) => 0.0,
            (Model::Modified, None) => walk1d::find_theta(mass_phase, 0.0).map_err(err)?,
        };
        WalkParams::from_mass_phase(m, mass_phase, theta).map(Self).map_err(err)
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass
    }

    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.0.dx
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.0.dt
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    #[getter]
    fn mass_phase(&self) -> f64 {
        self.0.mass_phase()
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "WalkParams(mass={}, c={}, dx={}, dt={}, theta={})",
            p.mass, p.c, p.dx, p.dt, p.theta
        )
    }
}

#[pyclass(name = "BlochResult", frozen, skip_from_py_object)]
struct PyBlochResult {
    #[pyo3(get)]
    p: f64,
    #[pyo3(get)]
    e_plus: f64,
    #[pyo3(get)]
    e_minus: f64,
    #[pyo3(get)]
    s_plus: Vec<C64>,
    #[pyo3(get)]
    s_minus: Vec<C64>,
    #[pyo3(get)]
    degenerate: bool,
}

#[pyclass(name = "GapCertificate", frozen, skip_from_py_object)]
struct PyGapCertificate {
    #[pyo3(get)]
    max_abs_energy: f64,
    #[pyo3(get)]
    max_abs_energy_dt: f64,
    #[pyo3(get)]
    gapped: bool,
    #[pyo3(get)]
    grid_size: usize,
}

impl From<GapCertificate> for PyGapCertificate {
    fn from(g: GapCertificate) -> Self {
        Self {
            max_abs_energy: g.max_abs_energy,
            max_abs_energy_dt: g.max_abs_energy_dt,
            gapped: g.gapped,
            grid_size: g.grid_size,
        }
    }
}

/// Eigenpairs of the 1-D Bloch matrix at momentum `p`.
#[pyfunction]
fn dispersion(p: f64, params: &PyWalkParams, model_name: &str) -> PyResult<PyBlochResult> {
    let r = walk1d::dispersion(p, &params.0, model(model_name)?).map_err(err)?;
    Ok(PyBlochResult {
        p: r.p,
        e_plus: r.e_plus,
        e_minus: r.e_minus,
        s_plus: r.s_plus.iter().copied().collect(),
        s_minus: r.s_minus.iter().copied().collect(),
        degenerate: r.degenerate,
    })
}

/// The 2×2 Bloch matrix as nested lists.
#[pyfunction]
fn bloch_matrix(p: f64, params: &PyWalkParams, model_name: &str) -> PyResult<Vec<Vec<C64>>> {
    let u = walk1d::bloch_matrix(p, &params.0, model(model_name)?);
    Ok((0..2).map(|i| (0..2).map(|j| u[(i, j)]).collect()).collect())
}

#[pyfunction]
fn cos_energy_closed_form(p: f64, params: &PyWalkParams) -> f64 {
    walk1d::cos_energy_closed_form(p, &params.0)
}

#[pyfunction]
#[pyo3(signature = (params, grid_size=4096))]
fn gap_certificate(params: &PyWalkParams, grid_size: usize) -> PyResult<PyGapCertificate> {
    walk1d::gap_certificate(&params.0, grid_size)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (mass_phase, margin=0.0))]
fn find_theta(mass_phase: f64, margin: f64) -> PyResult<f64> {
    walk1d::find_theta(mass_phase, margin).map_err(err)
}

#[pyfunction]
fn feasible_theta_interval(mass_phase: f64) -> PyResult<(f64, f64)> {
    walk1d::feasible_theta_interval(mass_phase).map_err(err)
}

#[pyfunction]
fn brillouin_grid(n: usize, dx: f64) -> Vec<f64> {
    walk1d::brillouin_grid(n, dx)
}

#[pyclass(name = "LatticeState", frozen, skip_from_py_object)]
struct PyLatticeState(LatticeState);

#[pymethods]
impl PyLatticeState {
    /// Unit amplitude at `site`, component 0 (`r`) or 1 (`l`).
    #[staticmethod]
    #[pyo3(signature = (n_sites, site, component=0))]
    fn delta(n_sites: usize, site: usize, component: usize) -> PyResult<Self> {
        LatticeState::delta(n_sites, site, component).map(Self).map_err(err)
    }

    /// One walk step; returns a new state.
    fn step(&self, params: &PyWalkParams, model_name: &str) -> PyResult<Self> {
        lattice::step(&self.0, &params.0, model(model_name)?)
            .map(Self)
            .map_err(err)
    }

    /// `steps` walk steps.
    fn evolve(&self, params: &PyWalkParams, model_name: &str, steps: usize) -> PyResult<Self> {
        let m = model(model_name)?;
        let mut s = self.0.clone();
        for _ in 0..steps {
            s = lattice::step(&s, &params.0, m).map_err(err)?;
        }
        Ok(Self(s))
    }

    #[getter]
    fn n_sites(&self) -> usize {
        self.0.n_sites()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.0.site_probabilities()
    }

    /// `[(ψ_r, ψ_l)]` per site.
    fn amplitudes(&self) -> Vec<(C64, C64)> {
        self.0.amplitudes().iter().map(|a| (a[0], a[1])).collect()
    }

    fn support(&self, tol: f64) -> Vec<usize> {
        self.0.support(tol)
    }
}

/// `(particles, dimension, deviation)`
type SectorRow = (usize, usize, f64);
/// `(k_particle, k_hole, e_particle, e_hole, delta_e)`
type PairRowTuple = (i64, i64, f64, f64, f64);

/// Circuit-versus-QCA deviation per particle-number sector:
/// `(max_deviation, [(particles, dimension, deviation)])`.
#[pyfunction]
fn equivalence_report(model_name: &str, n_sites: usize, params: &PyWalkParams) -> PyResult<(f64, Vec<SectorRow>)> {
    let r = core_equivalence_report(model(model_name)?, n_sites, &params.0).map_err(err)?;
    let sectors = r
        .sectors
        .iter()
        .map(|s| (s.particles, s.dimension, s.deviation))
        .collect();
    Ok((r.max_deviation, sectors))
}

/// Every particle-hole pair above the Dirac vacuum:
/// `(min_delta_e, negative_count, [(k_particle, k_hole, e_particle, e_hole, delta_e)])`.
#[pyfunction]
fn pair_creation_scan(
    n_grid: usize,
    params: &PyWalkParams,
    model_name: &str,
) -> PyResult<(f64, usize, Vec<PairRowTuple>)> {
    let s = core_pair_creation_scan(n_grid, &params.0, model(model_name)?).map_err(err)?;
    let rows = s
        .rows
        .iter()
        .map(|r| (r.k_particle, r.k_hole, r.e_particle, r.e_hole, r.delta_e))
        .collect();
    Ok((s.min_delta_e, s.negative, rows))
}

/// Ascending quasi-energies of the 3-D walk at `p = (px, py, pz)`.
#[pyfunction]
fn dispersion3(p: (f64, f64, f64), params: &PyWalkParams, model_name: &str) -> PyResult<Vec<f64>> {
    let r = walk3d::dispersion3(&Momentum3::new(p.0, p.1, p.2), &params.0, model(model_name)?).map_err(err)?;
    Ok(r.energies.to_vec())
}

/// `(max |E| δt, gapped, argmax p δx)` over a `grid³` mesh.
#[pyfunction]
fn gap_scan3(params: &PyWalkParams, model_name: &str, grid_size: usize) -> PyResult<(f64, bool, (f64, f64, f64))> {
    let s = walk3d::gap_scan3(&params.0, model(model_name)?, grid_size).map_err(err)?;
    let [x, y, z] = s.argmax.0;
    Ok((s.max_abs_energy_dt, s.gapped, (x, y, z)))
}

#[pymodule]
fn diracsea(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWalkParams>()?;
    m.add_class::<PyBlochResult>()?;
    m.add_class::<PyGapCertificate>()?;
    m.add_class::<PyLatticeState>()?;
    m.add_function(wrap_pyfunction!(dispersion, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(cos_energy_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(gap_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(find_theta, m)?)?;
    m.add_function(wrap_pyfunction!(feasible_theta_interval, m)?)?;
    m.add_function(wrap_pyfunction!(brillouin_grid, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_report, m)?)?;
    m.add_function(wrap_pyfunction!(pair_creation_scan, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion3, m)?)?;
    m.add_function(wrap_pyfunction!(gap_scan3, m)?)?;
    Ok(())
}
