//! One function per subcommand. Each returns a [`Table`]; writing files is
//! left to the caller.

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use fockwalk_core::decoherence::{decohered_distribution, DistinguishabilityInput};
use fockwalk_core::fock_walk::{
    evolve, perfect_state_transfer_fidelity, r_of_theta, theta_of_r, variance_approx, variance_exact,
    walk_distribution, BeamSplitter, StateVector, TwoModeFock,
};
use fockwalk_core::linalg::DenseMatrix;
use fockwalk_core::photonics_mc::{run_experiment, simulate_pair_rate, ExperimentConfig, SpdcSource};
use fockwalk_core::spin_chain::{
    edge_envelope, eigensystem, generalized_ssh_couplings, near_zero_mode, ssh_couplings, zero_energy_mode,
    ChainSpec, Localisation,
};
use fockwalk_core::topology::{classify as classify_matrix, Sign, SymmetryReport};
use fockwalk_core::{Complex64, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::grid::Grid;
use crate::table::{Cell, Table};

fn envelope_cell(total: usize, k: usize) -> Cell {
    let e = edge_envelope(total, k);
    if e.is_finite() {
        Cell::Float(e)
    } else {
        Cell::Empty
    }
}

fn distribution_columns(total: usize) -> impl Iterator<Item = String> {
    (0..=total).map(|k| format!("p_{k}"))
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkParams {
    pub total: usize,
    pub input_a: usize,
    pub reflectivity: f64,
    pub phase: Option<f64>,
}

/// Output distribution of `|l, S-l⟩`. With a phase, the complex amplitudes
/// are added; at `r = ½` and `l = S/2`, the zero-mode envelope.
pub fn walk(p: &WalkParams) -> Result<Table> {
    let dist = walk_distribution(p.total, p.input_a, p.reflectivity)?;
    let with_envelope = p.reflectivity == 0.5 && 2 * p.input_a == p.total;
    let mut columns = vec!["k", "delta_k", "probability"];
    let amplitudes = match p.phase {
        Some(phi) => {
            columns.extend(["amplitude_re", "amplitude_im"]);
            let input = StateVector::from(TwoModeFock::new(p.total, p.input_a)?);
            Some(evolve(&input, &BeamSplitter::new(p.reflectivity, phi)?)?)
        }
        None => None,
    };
    if with_envelope {
        columns.push("envelope");
    }
    let mut t = Table::new(columns);
    for (k, &prob) in dist.probs().iter().enumerate() {
        let mut row = vec![Cell::from(k), Cell::from(p.total as i64 - 2 * k as i64), Cell::from(prob)];
        if let Some(state) = &amplitudes {
            row.push(state.amps()[k].re.into());
            row.push(state.amps()[k].im.into());
        }
        if with_envelope {
            row.push(envelope_cell(p.total, k));
        }
        t.push(row);
    }
    t.note("variance", dist.variance_spin_z());
    t.note("variance_exact", variance_exact(p.total, p.input_a, p.reflectivity)?);
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferParams {
    pub total: usize,
    /// Basis input `|l, S-l⟩`; ignored when `state` is set.
    pub input_a: usize,
    pub state: Option<Vec<[f64; 2]>>,
    pub reflectivity: String,
}

pub fn parse_state(text: &str) -> Result<Vec<[f64; 2]>> {
    serde_json::from_str(text).context("state must be a JSON list of [re, im] pairs")
}

/// Mirror fidelity and output distribution across a reflectivity sweep.
pub fn transfer(p: &TransferParams, grid: &Grid) -> Result<Table> {
    let input = match &p.state {
        Some(amps) => {
            ensure!(amps.len() == p.total + 1, "state has {} amplitudes, expected {}", amps.len(), p.total + 1);
            StateVector::normalised(amps.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())?
        }
        None => TwoModeFock::new(p.total, p.input_a)?.into(),
    };
    let mut t = Table::new(["reflectivity", "theta", "fidelity"].into_iter().map(String::from).chain(distribution_columns(p.total)));
    for &r in grid.values() {
        let out = evolve(&input, &BeamSplitter::real(r)?)?;
        let mut row = vec![Cell::from(r), Cell::from(theta_of_r(r)?), Cell::from(perfect_state_transfer_fidelity(&input, r)?)];
        row.extend(out.distribution().probs().iter().map(|&x| Cell::from(x)));
        t.push(row);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `J_n = ½√(n(S+1-n))`
    Generalized,
    /// `J_n = 2J(1 + δ(-1)^n)`
    Ssh,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainParams {
    pub model: Model,
    /// Number of couplings; the chain has `total + 1` sites.
    pub total: usize,
    pub delta: f64,
    pub hopping: f64,
    pub onsite: f64,
}

pub fn chain(p: &ChainParams) -> Result<ChainSpec> {
    if p.total == 0 {
        return Ok(ChainSpec::new(Vec::new())?);
    }
    Ok(match p.model {
        Model::Generalized => generalized_ssh_couplings(p.total)?,
        Model::Ssh => ssh_couplings(p.total, p.hopping, p.delta)?,
    })
}

/// Eigenvalues and the (near-)zero mode of a chain.
pub fn spectrum(p: &ChainParams) -> Result<Table> {
    let spec = chain(p)?;
    let eig = eigensystem(&spec)?;
    let (mode, kind) = match zero_energy_mode(&spec, None) {
        Ok(Some(m)) => (m, "zero"),
        Ok(None) | Err(Error::AmbiguousZeroMode(_)) => (near_zero_mode(&spec)?, "near-zero"),
        Err(e) => return Err(e.into()),
    };
    let with_envelope = p.model == Model::Generalized && p.total > 0;
    let mut columns = vec!["index", "eigenvalue", "mode_amplitude", "mode_probability"];
    if with_envelope {
        columns.push("envelope");
    }
    let mut t = Table::new(columns);
    for (i, (&lambda, &a)) in eig.values.iter().zip(&mode.amps).enumerate() {
        let mut row = vec![Cell::from(i), Cell::from(lambda), Cell::from(a), Cell::from(a * a)];
        if with_envelope {
            row.push(envelope_cell(p.total, i));
        }
        t.push(row);
    }
    t.note("sites", spec.sites());
    t.note("mode", kind);
    t.note("mode_energy", mode.energy);
    match mode.localisation {
        Localisation::Exponential { length } => t.note("localisation_length", length),
        Localisation::Algebraic => t.note("localisation_length", Value::Null),
    }
    Ok(t)
}

fn sign_value(s: Option<Sign>) -> Value {
    s.map_or(Value::Null, |s| json!(s.value()))
}

pub fn report_json(report: &SymmetryReport) -> Value {
    json!({
        "class": report.az_class.label(),
        "time_reversal_squared": sign_value(report.time_reversal),
        "particle_hole_squared": sign_value(report.particle_hole),
        "chiral_squared": sign_value(report.chiral),
    })
}

/// Symmetry class of the chain Hamiltonian, optionally with a uniform
/// on-site energy added.
pub fn classify(p: &ChainParams) -> Result<(Table, SymmetryReport)> {
    let mut h: DenseMatrix<Complex64> = chain(p)?.matrix().to_complex_dense();
    for i in 0..h.rows() {
        h[(i, i)] += p.onsite;
    }
    let report = classify_matrix(&h)?;
    let present = |s: Option<Sign>| Cell::from(s.map_or(0, |s| s.value() as i64));
    let mut t = Table::new(["sites", "time_reversal", "particle_hole", "chiral", "class"]);
    t.push(vec![
        Cell::from(h.rows()),
        present(report.time_reversal),
        present(report.particle_hole),
        present(report.chiral),
        Cell::from(report.az_class.label()),
    ]);
    t.note("report", report_json(&report));
    Ok((t, report))
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceParams {
    pub total: usize,
    pub input_a: usize,
    pub imbalance: i64,
}

impl VarianceParams {
    pub fn from_input(total: usize, input_a: usize) -> Result<Self> {
        let f = TwoModeFock::new(total, input_a)?;
        Ok(Self { total, input_a, imbalance: f.imbalance() })
    }

    pub fn from_imbalance(total: usize, imbalance: i64) -> Result<Self> {
        let f = TwoModeFock::from_imbalance(total, imbalance)?;
        Ok(Self { total, input_a: f.in_a(), imbalance })
    }
}

pub enum Sweep<'a> {
    Reflectivity(&'a Grid),
    Theta(&'a Grid),
}

/// Exact, small-angle and sampled-distribution variances of `S_z`.
pub fn variance(p: &VarianceParams, sweep: Sweep<'_>) -> Result<Table> {
    let points: Vec<f64> = match sweep {
        Sweep::Reflectivity(g) => g.values().to_vec(),
        Sweep::Theta(g) => g.values().iter().map(|&th| r_of_theta(th)).collect::<Result<_, _>>()?,
    };
    let mut t = Table::new(["reflectivity", "theta", "variance_exact", "variance_approx", "variance_distribution"]);
    for r in points {
        let d = walk_distribution(p.total, p.input_a, r)?;
        t.push(vec![
            Cell::from(r),
            Cell::from(theta_of_r(r)?),
            Cell::from(variance_exact(p.total, p.input_a, r)?),
            Cell::from(variance_approx(p.total, p.input_a, r)?),
            Cell::from(d.variance_spin_z()),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecohereParams {
    pub total: usize,
    pub input_a: usize,
    pub reflectivity: f64,
    pub mixing_angle: String,
}

/// Output distribution across a sweep of the distinguishability angle.
pub fn decohere(p: &DecohereParams, grid: &Grid) -> Result<Table> {
    let mut t = Table::new(["mixing_angle", "variance"].into_iter().map(String::from).chain(distribution_columns(p.total)));
    for &y in grid.values() {
        let input = DistinguishabilityInput::new(p.total, p.input_a, y)?;
        let d = decohered_distribution(&input, p.reflectivity)?;
        let mut row = vec![Cell::from(y), Cell::from(d.variance_spin_z())];
        row.extend(d.probs().iter().map(|&x| Cell::from(x)));
        t.push(row);
    }
    Ok(t)
}

/// Heralded count record, with the lossless walk probabilities alongside.
pub fn experiment(cfg: &ExperimentConfig) -> Result<Table> {
    let rec = run_experiment(cfg)?;
    let (l, m) = cfg.herald;
    let ideal = walk_distribution(l + m, l, cfg.reflectivity)?;
    let mut t = Table::new(["k_a", "k_b", "count", "probability", "delta_p", "lossless_probability"]);
    for bin in rec.bins() {
        let lossless = (bin.k_a + bin.k_b == l + m).then(|| ideal.probs()[bin.k_a]);
        t.push(vec![
            Cell::from(bin.k_a),
            Cell::from(bin.k_b),
            Cell::from(bin.count),
            if rec.heralded > 0 { Cell::from(bin.probability) } else { Cell::Empty },
            Cell::from(bin.uncertainty),
            Cell::from(lossless),
        ]);
    }
    t.note("pulses", rec.pulses);
    t.note("heralded", rec.heralded);
    t.note("herald", json!([l, m]));
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct RateParams {
    pub mean_photon_number: f64,
    pub pairs: usize,
    pub repetition_rate: f64,
    pub pulses: u64,
    pub seed: u64,
}

/// Sampled and exact emission rate of `n` pairs from one source.
pub fn rate(p: &RateParams) -> Result<Table> {
    let source = SpdcSource::from_mean_photon_number(p.mean_photon_number)?;
    if p.pairs > source.n_max() {
        bail!("{} pairs lies beyond the source truncation at {}", p.pairs, source.n_max());
    }
    let r = simulate_pair_rate(&source, p.pairs, p.repetition_rate, p.pulses, p.seed)?;
    let mut t = Table::new(["pairs", "pulses", "events", "per_minute", "per_minute_uncertainty", "expected_per_minute"]);
    t.push(vec![
        Cell::from(p.pairs),
        Cell::from(r.pulses),
        Cell::from(r.events),
        Cell::from(r.per_minute()),
        Cell::from(r.per_minute_uncertainty()),
        Cell::from(source.pair_probability(p.pairs) * p.repetition_rate * 60.0),
    ]);
    Ok(t)
}
