//! Qubit circuits for the fermionic Dirac and modified QCAs.
//!
//! Two qubits per site, ordered `(0,l), (0,r), (1,l), (1,r), …`; see [`jw`]
//! for the fermion-to-qubit map. A two-qubit gate on `(q1, q2)` is written in
//! the local basis `|b(q1) b(q2)⟩`, index `2·b(q1) + b(q2)`.
//!
//! Applied literally, the gate layers realize the QCA step followed by an
//! exchange of the `l` and `r` labels on every site. [`QubitCircuit`] records
//! that relabelling and undoes it as a final wire permutation, which adds no
//! gates.

pub mod jw;

use std::fmt;

use nalgebra::DMatrix;

pub use jw::{annihilate_on_basis, create_on_basis, jw_field_operator, qca_reference_unitary};

use crate::error::{Error, Result};
use crate::spinor::{c, cr, Mat4, C64};
use crate::walk1d::{Model, WalkParams};

/// Largest register simulated as a dense state vector.
pub const MAX_REGISTER_SITES: usize = 7;
/// Largest lattice for which dense many-body matrices are built.
pub const MAX_REFERENCE_SITES: usize = 5;
/// Largest lattice accepted by [`equivalence_report`].
pub const MAX_EQUIVALENCE_SITES: usize = 4;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    R,
    L,
}

/// Qubit index of mode `(n, a)`.
pub fn qubit(site: usize, a: Chirality) -> usize {
    2 * site
        + match a {
            Chirality::L => 0,
            Chirality::R => 1,
        }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_sites: usize,
    amps: Vec<C64>,
}

impl RegisterState {
    /// The empty register `|0…0⟩`.
    pub fn vacuum(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, 0)
    }

    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        check_register(n_sites)?;
        let dim = 1usize << (2 * n_sites);
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![cr(0.0); dim];
        amps[index] = cr(1.0);
        Ok(Self { n_sites, amps })
    }

    pub fn from_amplitudes(n_sites: usize, amps: Vec<C64>) -> Result<Self> {
        check_register(n_sites)?;
        if amps.len() != 1 << (2 * n_sites) {
            return Err(Error::Domain(format!(
                "{} amplitudes for a {n_sites}-site register",
                amps.len()
            )));
        }
        let state = Self { n_sites, amps };
        if (state.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state norm² = {} is not 1", state.norm_sqr())));
        }
        Ok(state)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn check_register(n_sites: usize) -> Result<()> {
    if n_sites > MAX_REGISTER_SITES {
        return Err(Error::SizeLimit {
            what: "register sites",
            value: n_sites,
            max: MAX_REGISTER_SITES,
        });
    }
    if n_sites == 0 {
        return Err(Error::Domain("register needs at least one site".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Fermionic swap.
    S,
    /// Mass gate with the `|11⟩` sign.
    WPrime,
    /// On-site rotation by `θ`.
    RTheta,
    /// `W′ R_θ†`
    WDoublePrime,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::S => "S",
            GateKind::WPrime => "W'",
            GateKind::RTheta => "R_theta",
            GateKind::WDoublePrime => "W''",
        })
    }
}

/// Block `[[1,0,0,0],[0,c,−is,0],[0,−is,c,0],[0,0,0,d]]`.
fn mixing_block(angle: f64, d: f64) -> Mat4 {
    let (s, co) = angle.sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = cr(1.0);
    m[(1, 1)] = cr(co);
    m[(2, 2)] = cr(co);
    m[(1, 2)] = c(0.0, -s);
    m[(2, 1)] = c(0.0, -s);
    m[(3, 3)] = cr(d);
    m
}

/// Gate matrix for mass phase `mc²δt` and rotation angle `theta`.
pub fn gate_matrix(kind: GateKind, mass_phase: f64, theta: f64) -> Mat4 {
    match kind {
        GateKind::S => {
            let mut m = Mat4::zeros();
            m[(0, 0)] = cr(1.0);
            m[(1, 2)] = cr(1.0);
            m[(2, 1)] = cr(1.0);
            m[(3, 3)] = cr(-1.0);
            m
        }
        GateKind::WPrime => mixing_block(mass_phase, -1.0),
        GateKind::RTheta => mixing_block(0.5 * theta, 1.0),
        GateKind::WDoublePrime => {
            gate_matrix(GateKind::WPrime, mass_phase, 0.0) * gate_matrix(GateKind::RTheta, 0.0, theta).adjoint()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub qubits: (usize, usize),
    pub matrix: Mat4,
}

impl GateSpec {
    pub fn new(kind: GateKind, qubits: (usize, usize), mass_phase: f64, theta: f64) -> Self {
        Self {
            kind,
            qubits,
            matrix: gate_matrix(kind, mass_phase, theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitCircuit {
    pub n_sites: usize,
    /// Applied first to last.
    pub gates: Vec<GateSpec>,
    /// Exchange the two qubits of every site after the last gate.
    pub relabel: bool,
}

impl QubitCircuit {
    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

fn bond_layer(n_sites: usize) -> impl Iterator<Item = GateSpec> {
    (0..n_sites).map(move |n| {
        let q = (qubit(n, Chirality::R), qubit((n + 1) % n_sites, Chirality::L));
        GateSpec::new(GateKind::S, q, 0.0, 0.0)
    })
}

fn site_layer(n_sites: usize, kind: GateKind, mass_phase: f64, theta: f64) -> impl Iterator<Item = GateSpec> {
    (0..n_sites).map(move |n| {
        let q = (qubit(n, Chirality::L), qubit(n, Chirality::R));
        GateSpec::new(kind, q, mass_phase, theta)
    })
}

/// Gate list of one QCA step on `n_sites` sites with periodic closure.
///
/// Dirac: `S` on every bond `((n,r),(n+1,l))`, then `W′` on every site.
/// Modified: `R_{−θ}`, bond `S`, on-site `S`, `R_{2θ}`, bond `S`, `W″`.
pub fn build_circuit(model: Model, n_sites: usize, params: &WalkParams) -> Result<QubitCircuit> {
    check_register(n_sites)?;
    if n_sites < 2 || n_sites % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "the brick layout needs an even number of sites >= 2, got {n_sites}"
        )));
    }
    params.validate_for(model)?;
    let m = params.mass_phase();
    let th = params.theta;
    let gates: Vec<GateSpec> = match model {
        Model::Dirac => bond_layer(n_sites)
            .chain(site_layer(n_sites, GateKind::WPrime, m, 0.0))
            .collect(),
        Model::Modified => site_layer(n_sites, GateKind::RTheta, 0.0, -th)
            .chain(bond_layer(n_sites))
            .chain(site_layer(n_sites, GateKind::S, 0.0, 0.0))
            .chain(site_layer(n_sites, GateKind::RTheta, 0.0, 2.0 * th))
            .chain(bond_layer(n_sites))
            .chain(site_layer(n_sites, GateKind::WDoublePrime, m, th))
            .collect(),
    };
    Ok(QubitCircuit {
        n_sites,
        gates,
        relabel: true,
    })
}

fn apply_gate(amps: &mut [C64], (q1, q2): (usize, usize), m: &Mat4) {
    let (b1, b2) = (1usize << q1, 1usize << q2);
    for i in 0..amps.len() {
        if i & (b1 | b2) != 0 {
            continue;
        }
        let idx = [i, i | b2, i | b1, i | b1 | b2];
        let v = idx.map(|k| amps[k]);
        for (row, &k) in idx.iter().enumerate() {
            amps[k] = (0..4).map(|col| m[(row, col)] * v[col]).sum();
        }
    }
}

fn swap_site_qubits(index: usize, n_qubits: usize) -> usize {
    let even: usize = (0..n_qubits).step_by(2).map(|q| 1usize << q).sum();
    ((index & even) << 1) | ((index >> 1) & even)
}

/// Applies the gates in order, then the relabelling.
pub fn apply_circuit(state: &RegisterState, circuit: &QubitCircuit) -> Result<RegisterState> {
    if circuit.n_sites != state.n_sites {
        return Err(Error::Domain(format!(
            "{}-site circuit applied to a {}-site register",
            circuit.n_sites, state.n_sites
        )));
    }
    let n_qubits = state.n_qubits();
    for g in &circuit.gates {
        for q in [g.qubits.0, g.qubits.1] {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange { index: q, n_qubits });
            }
        }
        if g.qubits.0 == g.qubits.1 {
            return Err(Error::Domain(format!(
                "gate {} acts twice on qubit {}",
                g.kind, g.qubits.0
            )));
        }
    }
    let mut amps = state.amps.clone();
    for g in &circuit.gates {
        apply_gate(&mut amps, g.qubits, &g.matrix);
    }
    if circuit.relabel {
        let mut out = vec![cr(0.0); amps.len()];
        for (i, a) in amps.iter().enumerate() {
            out[swap_site_qubits(i, n_qubits)] = *a;
        }
        amps = out;
    }
    Ok(RegisterState {
        n_sites: state.n_sites,
        amps,
    })
}

/// Dense unitary of a circuit, column by column.
pub fn circuit_unitary(circuit: &QubitCircuit) -> Result<DMatrix<C64>> {
    if circuit.n_sites > MAX_REFERENCE_SITES {
        return Err(Error::SizeLimit {
            what: "sites for a dense circuit unitary",
            value: circuit.n_sites,
            max: MAX_REFERENCE_SITES,
        });
    }
    let dim = 1usize << (2 * circuit.n_sites);
    let mut u = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let out = apply_circuit(&RegisterState::basis(circuit.n_sites, j)?, circuit)?;
        for (i, a) in out.amps.iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorDeviation {
    pub particles: usize,
    pub dimension: usize,
    /// Phase `φ` minimizing `|U_circuit − e^{iφ} U_ref|` on this sector.
    pub phase: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub model: Model,
    pub n_sites: usize,
    pub sectors: Vec<SectorDeviation>,
    /// Largest sector deviation.
    pub max_deviation: f64,
    /// Deviation after fitting a single phase to the whole matrix.
    pub global_deviation: f64,
}

fn fitted_deviation(circ: &DMatrix<C64>, reference: &DMatrix<C64>, cols: &[usize]) -> (f64, f64) {
    let overlap: C64 = cols
        .iter()
        .flat_map(|&j| {
            circ.column(j)
                .iter()
                .zip(reference.column(j).iter())
                .map(|(a, b)| b.conj() * a)
                .collect::<Vec<_>>()
        })
        .sum();
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let rot = C64::from_polar(1.0, phase);
    let dev = cols
        .iter()
        .flat_map(|&j| {
            circ.column(j)
                .iter()
                .zip(reference.column(j).iter())
                .map(|(a, b)| (a - rot * b).norm())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    (phase, dev)
}

/// Compares the circuit with [`qca_reference_unitary`] sector by sector.
pub fn equivalence_report(model: Model, n_sites: usize, params: &WalkParams) -> Result<EquivalenceReport> {
    if n_sites > MAX_EQUIVALENCE_SITES {
        return Err(Error::SizeLimit {
            what: "sites for equivalence checks",
            value: n_sites,
            max: MAX_EQUIVALENCE_SITES,
        });
    }
    let circuit = build_circuit(model, n_sites, params)?;
    let circ = circuit_unitary(&circuit)?;
    let reference = qca_reference_unitary(model, n_sites, params)?;
    let dim = circ.ncols();
    let sectors: Vec<SectorDeviation> = (0..=2 * n_sites)
        .map(|k| {
            let cols: Vec<usize> = (0..dim).filter(|j| j.count_ones() as usize == k).collect();
            let (phase, deviation) = fitted_deviation(&circ, &reference, &cols);
            SectorDeviation {
                particles: k,
                dimension: cols.len(),
                phase,
                deviation,
            }
        })
        .collect();
    let all: Vec<usize> = (0..dim).collect();
    let (_, global_deviation) = fitted_deviation(&circ, &reference, &all);
    Ok(EquivalenceReport {
        model,
        n_sites,
        max_deviation: sectors.iter().map(|s| s.deviation).fold(0.0, f64::max),
        sectors,
        global_deviation,
    })
}

/// One-particle block of a many-body matrix, indexed `2n + c` with
/// `c = 0` for `r` and `c = 1` for `l`.
pub fn single_particle_block(u: &DMatrix<C64>, n_sites: usize) -> DMatrix<C64> {
    let index = |pos: usize| {
        let (n, c) = (pos / 2, pos % 2);
        1usize << qubit(n, if c == 0 { Chirality::R } else { Chirality::L })
    };
    DMatrix::from_fn(2 * n_sites, 2 * n_sites, |i, j| u[(index(i), index(j))])
}
