use std::f64::consts::{FRAC_PI_2, PI};

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use diracsea_core::circuits::equivalence_report;
use diracsea_core::fock::pair_creation_scan;
use diracsea_core::lattice::{step, LatticeState, L, R};
use diracsea_core::walk1d::{brillouin_grid, dispersion, feasible_theta_interval, find_theta, gap_certificate};
use diracsea_core::walk3d::band_slice;
use diracsea_core::{Model, WalkParams};

use crate::csv::{num, Table};
use crate::{Cli, Command, Failure, Report};

#[derive(Debug, Clone, Args)]
pub struct Physics {
    /// dirac or modified
    #[arg(long, default_value_t = Model::Dirac)]
    pub model: Model,

    /// Mass phase m c² δt
    #[arg(long)]
    pub mdt: f64,

    /// Shift rotation angle of the modified walk; chosen from the gap
    /// inequality when omitted
    #[arg(long)]
    pub theta: Option<f64>,
}

impl Physics {
    fn params(&self) -> Result<WalkParams, Failure> {
        match self.model {
            Model::Dirac => {
                if self.theta.is_some() {
                    return Err(Failure::Validation("--theta only applies to the modified model".into()));
                }
                Ok(WalkParams::from_mass_phase(Model::Dirac, self.mdt, 0.0)?)
            }
            Model::Modified => {
                let theta = match self.theta {
                    Some(t) => t,
                    None => find_theta(self.mdt, 0.0)?,
                };
                Ok(WalkParams::from_mass_phase(Model::Modified, self.mdt, theta)?)
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub physics: Physics,

    /// Momentum points across the Brillouin zone
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GapScanArgs {
    /// Comma-separated mass phases, each in [0, π/2)
    #[arg(long, value_delimiter = ',', required = true)]
    pub mdt: Vec<f64>,

    /// Fixed rotation angle for every row; chosen per row when omitted
    #[arg(long)]
    pub theta: Option<f64>,

    /// Momentum points of the certificate grid (at least 64)
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,

    /// Required distance of an automatic θ from the feasible interval ends
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Component {
    R,
    L,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub physics: Physics,

    #[arg(long, default_value_t = 64)]
    pub sites: usize,

    #[arg(long, default_value_t = 10)]
    pub steps: usize,

    /// Starting site; defaults to the middle of the ring
    #[arg(long)]
    pub start: Option<usize>,

    /// Chirality of the starting amplitude
    #[arg(long, value_enum, default_value_t = Component::R)]
    pub component: Component,

    /// Refuse lattices whose momentum grid misses the zone edge π/δx
    #[arg(long)]
    pub require_zone_edge: bool,

    /// Allowed |norm − 1| at every step
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub physics: Physics,

    /// Ring sites (even, at most 4)
    #[arg(long, default_value_t = 2)]
    pub sites: usize,

    /// Allowed per-sector deviation
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Both modes below |E| δt = π/2
    Low,
    /// Both modes above |E| δt = π/2, next to the fold
    Fold,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct SeaArgs {
    #[command(flatten)]
    pub physics: Physics,

    /// Momentum modes
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    #[arg(long, value_enum, default_value_t = Scenario::All)]
    pub scenario: Scenario,
}

#[derive(Debug, Clone, Args)]
pub struct Dispersion3dArgs {
    #[command(flatten)]
    pub physics: Physics,

    /// Slice spec: three comma-separated p δx values with `*` marking the
    /// swept component, e.g. `*,0,0` or `pi,*,pi/2`. Repeatable.
    #[arg(long = "slice", required = true)]
    pub slices: Vec<String>,

    /// Points along each slice
    #[arg(long, default_value_t = 256)]
    pub points: usize,
}

/// Column scales for the optional `--dx`/`--c` rescaling.
struct Units {
    p: f64,
    e: f64,
    physical: bool,
}

impl Units {
    fn new(cli: &Cli, params: &WalkParams) -> Result<Self, Failure> {
        if cli.dx.is_none() && cli.c.is_none() {
            return Ok(Self {
                p: 1.0,
                e: 1.0,
                physical: false,
            });
        }
        let dx = cli.dx.unwrap_or(1.0);
        let c = cli.c.unwrap_or(1.0);
        if !(dx.is_finite() && dx > 0.0 && c.is_finite() && c > 0.0) {
            return Err(Failure::Validation(format!(
                "--dx and --c must be positive (got {dx}, {c})"
            )));
        }
        // params carry δx = c = 1, so their δt is the dimensionless ratio δt c/δx
        let dt = params.dt * dx / c;
        Ok(Self {
            p: 1.0 / dx,
            e: 1.0 / dt,
            physical: true,
        })
    }

    fn p_col(&self, name: &str) -> String {
        if self.physical {
            name.to_string()
        } else {
            format!("{name}_dx")
        }
    }

    fn e_col(&self, name: &str) -> String {
        if self.physical {
            name.to_string()
        } else {
            format!("{name}_dt")
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Dispersion(a) => cmd_dispersion(cli, a),
        Command::GapScan(a) => cmd_gap_scan(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::CircuitVerify(a) => cmd_circuit_verify(a),
        Command::Sea(a) => cmd_sea(cli, a),
        Command::Dispersion3d(a) => cmd_dispersion3d(cli, a),
    }
}

fn ok(table: Table) -> Result<Report, Failure> {
    Ok(Report {
        table,
        failed_check: None,
    })
}

pub fn cmd_dispersion(cli: &Cli, a: &DispersionArgs) -> Result<Report, Failure> {
    if a.grid == 0 {
        return Err(Failure::Validation("--grid must be positive".into()));
    }
    let params = a.physics.params()?;
    let units = Units::new(cli, &params)?;
    let model = a.physics.model;
    let mut table = Table::new([units.p_col("p"), units.e_col("E_plus"), units.e_col("E_minus")]);
    for p in brillouin_grid(a.grid, 1.0) {
        let r = dispersion(p, &params, model)?;
        let (ep, em) = (r.e_plus * params.dt, r.e_minus * params.dt);
        if ep.abs() > PI || em.abs() > PI {
            return Err(Failure::Numerical(format!(
                "energy outside the principal branch at p δx = {p}"
            )));
        }
        table.push(vec![num(p * units.p), num(ep * units.e), num(em * units.e)]);
    }
    ok(table)
}

pub fn cmd_gap_scan(a: &GapScanArgs) -> Result<Report, Failure> {
    if a.mdt.is_empty() {
        return Err(Failure::Validation("--mdt needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(a.mdt.len());
    for &mdt in &a.mdt {
        feasible_theta_interval(mdt)?;
        let theta = match a.theta {
            Some(t) => t,
            None => find_theta(mdt, a.margin)?,
        };
        rows.push((mdt, WalkParams::from_mass_phase(Model::Modified, mdt, theta)?));
    }
    let certs = rows
        .par_iter()
        .map(|(_, p)| gap_certificate(p, a.grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(["mdt", "theta", "max_abs_E_dt", "gapped"]);
    for ((mdt, p), cert) in rows.iter().zip(certs) {
        table.push(vec![
            num(*mdt),
            num(p.theta),
            num(cert.max_abs_energy_dt),
            cert.gapped.to_string(),
        ]);
    }
    ok(table)
}

pub fn cmd_evolve(a: &EvolveArgs) -> Result<Report, Failure> {
    if a.require_zone_edge && a.sites % 2 == 1 {
        return Err(Failure::Validation(format!(
            "{} sites: the momentum grid only contains π/δx for even N",
            a.sites
        )));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Failure::Validation("--tol must be positive".into()));
    }
    let params = a.physics.params()?;
    let model = a.physics.model;
    let start = a.start.unwrap_or(a.sites / 2);
    let component = match a.component {
        Component::R => R,
        Component::L => L,
    };
    let mut state = LatticeState::delta(a.sites, start, component)?;
    // surface size preconditions of the step before any output
    step(&state, &params, model)?;

    let mut header = vec!["step".to_string(), "norm".to_string()];
    header.extend((0..a.sites).map(|n| format!("site_{n}")));
    let mut table = Table::new(header);
    let mut failed = None;
    for t in 0..=a.steps {
        if t > 0 {
            state = step(&state, &params, model)?;
        }
        let norm = state.norm_sqr();
        if failed.is_none() && (norm - 1.0).abs() > a.tol {
            failed = Some(format!("norm {norm} at step {t} exceeds tolerance {}", a.tol));
        }
        let mut row = vec![t.to_string(), num(norm)];
        row.extend(state.site_probabilities().into_iter().map(num));
        table.push(row);
    }
    Ok(Report {
        table,
        failed_check: failed,
    })
}

pub fn cmd_circuit_verify(a: &CircuitArgs) -> Result<Report, Failure> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Failure::Validation("--tol must be positive".into()));
    }
    let params = a.physics.params()?;
    let report = equivalence_report(a.physics.model, a.sites, &params)?;
    let mut table = Table::new([
        "model",
        "sites",
        "mdt",
        "theta",
        "particles",
        "dimension",
        "phase",
        "deviation",
    ]);
    for s in &report.sectors {
        table.push(vec![
            report.model.to_string(),
            report.n_sites.to_string(),
            num(a.physics.mdt),
            num(params.theta),
            s.particles.to_string(),
            s.dimension.to_string(),
            num(s.phase),
            num(s.deviation),
        ]);
    }
    let failed = (report.max_deviation > a.tol).then(|| {
        format!(
            "sector deviation {:e} exceeds tolerance {:e}",
            report.max_deviation, a.tol
        )
    });
    Ok(Report {
        table,
        failed_check: failed,
    })
}

pub fn cmd_sea(cli: &Cli, a: &SeaArgs) -> Result<Report, Failure> {
    let params = a.physics.params()?;
    let units = Units::new(cli, &params)?;
    let scan = pair_creation_scan(a.grid, &params, a.physics.model)?;
    let dt = params.dt;
    let mut table = Table::new([
        "scenario".to_string(),
        "k_particle".to_string(),
        "k_hole".to_string(),
        units.e_col("eps1"),
        units.e_col("eps2"),
        units.e_col("delta_E"),
    ]);
    for row in &scan.rows {
        let (ep, eh) = (row.e_particle * dt, -row.e_hole * dt);
        let (label, eps1, eps2) = match (ep > FRAC_PI_2, eh > FRAC_PI_2) {
            (true, true) => ("fold", PI - ep, PI - eh),
            (false, false) => ("low", ep, eh),
            _ => ("mixed", ep, eh),
        };
        let keep = match a.scenario {
            Scenario::All => true,
            Scenario::Low => label == "low",
            Scenario::Fold => label == "fold",
        };
        if keep {
            table.push(vec![
                label.to_string(),
                row.k_particle.to_string(),
                row.k_hole.to_string(),
                num(eps1 * units.e),
                num(eps2 * units.e),
                num(row.delta_e * dt * units.e),
            ]);
        }
    }
    ok(table)
}

fn parse_component(tok: &str) -> Option<f64> {
    let t = tok.trim().to_ascii_lowercase();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.as_str()),
    };
    let value = if let Some(rest) = body.strip_prefix("pi") {
        if rest.is_empty() {
            PI
        } else {
            let d: f64 = rest.strip_prefix('/')?.parse().ok()?;
            (d != 0.0).then_some(PI / d)?
        }
    } else {
        body.parse::<f64>().ok()?
    };
    value.is_finite().then_some(sign * value)
}

/// `(swept axis, fixed components in units of 1/δx)`
pub fn parse_slice(spec: &str) -> Result<(usize, [f64; 3]), Failure> {
    let bad = || {
        Failure::Validation(format!(
            "malformed slice '{spec}': expected three components with exactly one '*'"
        ))
    };
    let toks: Vec<&str> = spec.split(',').map(str::trim).collect();
    if toks.len() != 3 || toks.iter().filter(|t| **t == "*").count() != 1 {
        return Err(bad());
    }
    let mut fixed = [0.0; 3];
    let mut axis = 0;
    for (j, t) in toks.iter().enumerate() {
        if *t == "*" {
            axis = j;
        } else {
            fixed[j] = parse_component(t).ok_or_else(bad)?;
        }
    }
    Ok((axis, fixed))
}

pub fn cmd_dispersion3d(cli: &Cli, a: &Dispersion3dArgs) -> Result<Report, Failure> {
    let slices = a.slices.iter().map(|s| parse_slice(s)).collect::<Result<Vec<_>, _>>()?;
    if a.points == 0 {
        return Err(Failure::Validation("--points must be positive".into()));
    }
    let params = a.physics.params()?;
    let units = Units::new(cli, &params)?;
    let mut header = vec!["slice".to_string()];
    header.extend(["px", "py", "pz"].map(|c| units.p_col(c)));
    header.extend(["E1", "E2", "E3", "E4"].map(|c| units.e_col(c)));
    let mut table = Table::new(header);
    for (i, (axis, fixed)) in slices.into_iter().enumerate() {
        for row in band_slice(&params, a.physics.model, axis, fixed, a.points)? {
            let mut cells = vec![i.to_string()];
            cells.extend(row.p.0.iter().map(|p| num(p * units.p)));
            cells.extend(row.energies.iter().map(|e| num(e * params.dt * units.e)));
            table.push(cells);
        }
    }
    ok(table)
}
