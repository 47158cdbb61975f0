//! JSON experiment configs and the batch runner.
//!
//! One flat schema covers every quantity; `quantity` selects the
//! computation. A config with `sweep` entries is evaluated on the cross
//! product of their values, in parallel, with rows in sweep order.
//!
//! ```json
//! {
//!   "quantity": "cmi",
//!   "model": "toric-code",
//!   "lattice": { "kind": "square-edges", "Lx": 4, "Ly": 4, "boundary": "torus" },
//!   "noise": { "kind": "xz", "px": 0.1, "pz": 0.2 },
//!   "partition": { "scheme": "levin-wen", "center": [1, 1], "inner": 1, "outer": 2, "strict": false },
//!   "sweep": [ { "param": "pz", "values": [0.0, 0.25, 0.5] } ]
//! }
//! ```

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::anomaly::{self, Anyon, MemoryClass, StringOperator};
use crate::convexroof::{self, DenseState, RoofBudget, RoofMode};
use crate::cssnoise::{self, NoiseSpec, DEFAULT_BUDGET};
use crate::lattice::{partition, Lattice, LatticeSpec, Partition, PartitionScheme, PathKind, PathRequest};
use crate::negativity;
use crate::stabmix::{dephasing_ops, model_state, DephasingKind, ModelKind, StabilizerMixedState};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Entropy,
    Cmi,
    Negativity,
    BraidingTable,
    MemoryClass,
    TeeWitness,
    ConvexRoof,
}

/// Pauli noise on every edge of a square lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NoiseConfig {
    None,
    X { p: f64 },
    Z { p: f64 },
    Zx { p: f64 },
    Xz { px: f64, pz: f64 },
}

impl NoiseConfig {
    fn families(&self) -> Vec<(DephasingKind, f64)> {
        match *self {
            NoiseConfig::None => vec![],
            NoiseConfig::X { p } => vec![(DephasingKind::X, p)],
            NoiseConfig::Z { p } => vec![(DephasingKind::Z, p)],
            NoiseConfig::Zx { p } => vec![(DephasingKind::Zx, p)],
            NoiseConfig::Xz { px, pz } => vec![(DephasingKind::X, px), (DephasingKind::Z, pz)],
        }
    }

    fn set(&mut self, param: &str, v: f64) -> Result<(), Error> {
        let bad = || config_err(format!("sweep.{param}"), "does not apply to this noise kind");
        match (self, param) {
            (NoiseConfig::X { p } | NoiseConfig::Z { p } | NoiseConfig::Zx { p }, "p") => *p = v,
            (NoiseConfig::Xz { px, .. }, "px") => *px = v,
            (NoiseConfig::Xz { pz, .. }, "pz") => *pz = v,
            _ => return Err(bad()),
        }
        Ok(())
    }
}

/// Region for `entropy`: a named part of the partition, `all`, or qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    Named(String),
    Qubits(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub strong: Anyon,
    pub weak: Anyon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoofState {
    /// Three-qubit GHZ mixture with weight `p` on `GHZ+`.
    GhzMixture,
    /// The configured model state, noise included, made dense.
    Model,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofConfig {
    pub state: RoofState,
    #[serde(default)]
    pub p: f64,
    pub mode: RoofMode,
    #[serde(default)]
    pub members: Option<usize>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_iters")]
    pub max_iters: u64,
}

fn default_restarts() -> usize {
    16
}

fn default_iters() -> u64 {
    4000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    /// One of `p`, `px`, `pz`, `L`, `Lx`, `Ly`, `roof.p`.
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Largest syndrome dimension enumerated exactly.
    #[serde(default = "default_budget")]
    pub syndrome_bits: usize,
    /// Sample count for the opt-in Monte Carlo entropy estimate.
    #[serde(default)]
    pub mc_samples: Option<usize>,
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

impl Default for Budgets {
    fn default() -> Self {
        Self { syndrome_bits: DEFAULT_BUDGET, mc_samples: None }
    }
}

/// A resolved config and the swept parameter values that produced it.
pub type SweepPoint = (ExperimentConfig, Vec<(String, f64)>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub quantity: Quantity,
    #[serde(default)]
    pub model: Option<ModelKind>,
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    #[serde(default = "no_noise")]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub partition: Option<PartitionScheme>,
    #[serde(default)]
    pub region: Option<RegionSpec>,
    #[serde(default)]
    pub witness: Option<WitnessConfig>,
    #[serde(default)]
    pub roof: Option<RoofConfig>,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budgets: Budgets,
}

fn no_noise() -> NoiseConfig {
    NoiseConfig::None
}

fn config_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| config_err("config", e.to_string()))
    }

    /// Check field presence and ranges before running anything.
    pub fn validate(&self) -> Result<(), Error> {
        let needs_model = !matches!(
            (self.quantity, self.roof.map(|r| r.state)),
            (Quantity::BraidingTable, _) | (Quantity::ConvexRoof, Some(RoofState::GhzMixture))
        );
        if needs_model && self.model.is_none() {
            return Err(config_err("model", "required for this quantity"));
        }
        let needs_lattice = !matches!(self.roof.map(|r| r.state), Some(RoofState::GhzMixture)) || self.quantity != Quantity::ConvexRoof;
        if needs_lattice && self.lattice.is_none() {
            return Err(config_err("lattice", "required for this quantity"));
        }
        let needs_partition = matches!(self.quantity, Quantity::Cmi | Quantity::Negativity | Quantity::TeeWitness)
            || (self.quantity == Quantity::ConvexRoof && matches!(self.roof.map(|r| r.state), Some(RoofState::Model)));
        if needs_partition && self.partition.is_none() {
            return Err(config_err("partition", "required for this quantity"));
        }
        if self.quantity == Quantity::TeeWitness && self.witness.is_none() {
            return Err(config_err("witness", "required for tee-witness"));
        }
        if self.quantity == Quantity::ConvexRoof && self.roof.is_none() {
            return Err(config_err("roof", "required for convex-roof"));
        }
        for (name, p) in self.noise.families().iter().map(|(k, p)| (format!("noise.{k:?}").to_lowercase(), *p)) {
            if !(0.0..=1.0).contains(&p) {
                return Err(config_err(name, format!("probability {p} outside [0, 1]")));
            }
        }
        if self.sweep.len() > 2 {
            return Err(config_err("sweep", "at most two swept parameters"));
        }
        for axis in &self.sweep {
            if axis.values.is_empty() {
                return Err(config_err(format!("sweep.{}", axis.param), "empty range"));
            }
        }
        if self.budgets.mc_samples == Some(0) {
            return Err(config_err("budgets.mc_samples", "must be positive"));
        }
        Ok(())
    }

    /// Every point of the sweep cross product, first axis outermost.
    pub fn points(&self) -> Result<Vec<SweepPoint>, Error> {
        let mut points = vec![(self.clone(), Vec::new())];
        for axis in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for (cfg, coords) in &points {
                for &v in &axis.values {
                    let mut c = cfg.clone();
                    c.apply(&axis.param, v)?;
                    let mut k = coords.clone();
                    k.push((axis.param.clone(), v));
                    next.push((c, k));
                }
            }
            points = next;
        }
        for (c, _) in &mut points {
            c.sweep.clear();
        }
        Ok(points)
    }

    fn apply(&mut self, param: &str, v: f64) -> Result<(), Error> {
        let as_size = |v: f64| -> Result<usize, Error> {
            if v < 1.0 || v.fract() != 0.0 {
                return Err(config_err(format!("sweep.{param}"), format!("{v} is not a positive integer")));
            }
            Ok(v as usize)
        };
        let lat = || config_err("lattice", "required to sweep lattice sizes");
        match param {
            "p" | "px" | "pz" => self.noise.set(param, v),
            "L" => {
                let l = self.lattice.as_mut().ok_or_else(lat)?;
                l.lx = as_size(v)?;
                if l.boundary == crate::lattice::Boundary::Torus {
                    l.ly = l.lx;
                }
                Ok(())
            }
            "Lx" => {
                self.lattice.as_mut().ok_or_else(lat)?.lx = as_size(v)?;
                Ok(())
            }
            "Ly" => {
                self.lattice.as_mut().ok_or_else(lat)?.ly = as_size(v)?;
                Ok(())
            }
            "roof.p" => {
                self.roof.as_mut().ok_or_else(|| config_err("roof", "required to sweep roof.p"))?.p = v;
                Ok(())
            }
            other => Err(config_err(format!("sweep.{other}"), "unknown parameter")),
        }
    }
}

pub type Row = Map<String, Value>;

/// A finished run: the JSON document and its table rows.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub document: Value,
    pub rows: Vec<Row>,
    /// Optimizer trace lines for `convex-roof`.
    pub trace: Vec<convexroof::TraceEntry>,
}

/// Reference expressions attached to each output document.
fn golden(q: Quantity) -> Vec<Value> {
    let g = |expr: &str, source: &str| json!({ "expression": expr, "source": source });
    match q {
        Quantity::Entropy => vec![
            g("S = n - m for a stabilizer mixed state", "exact"),
            g("S = H(syndrome distribution) + S(clean) under Pauli noise", "exact"),
        ],
        Quantity::Cmi => vec![
            g("toric code, Levin-Wen: I(A:C|B) = 2", "closed-form"),
            g("I(px, pz) + I(0, 0) = I(0, pz) + I(px, 0) for CSS states", "closed-form"),
        ],
        Quantity::Negativity => vec![
            g("zx-dephased-max, cut-1: E_N = L - 1", "closed-form"),
            g("zx-dephased-max, cut-2: E_N = L/2 - 1 (even L), (L-1)/2 (odd L)", "closed-form"),
            g("honeycomb-flux, cut-1: E_N = L - 1", "closed-form"),
        ],
        Quantity::BraidingTable => vec![
            g("S_em = -1, S_ee = S_mm = S_ff = +1", "closed-form"),
            g("theta_e = theta_m = +1, theta_f = -1", "closed-form"),
        ],
        Quantity::MemoryClass => vec![
            g("toric code: quantum(2); Z-dephased: classical(2); X+Z-dephased: trivial", "closed-form"),
        ],
        Quantity::TeeWitness => vec![g("measured charge = braiding phase; CMI >= 1/2 log2 n", "closed-form")],
        Quantity::ConvexRoof => vec![
            g("GHZ mixture, pure roof: h((1 + 2 sqrt(p(1-p)))/2)", "closed-form"),
            g("mixed roof <= CMI = 1 - h(p)", "closed-form"),
        ],
    }
}

/// Evaluate a config (with its sweep) and assemble the output document.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, Error> {
    config.validate()?;
    let points = config.points()?;
    let results: Vec<(Vec<Row>, Vec<convexroof::TraceEntry>)> = points
        .par_iter()
        .map(|(cfg, coords)| {
            let (mut rows, trace) = evaluate(cfg)?;
            for row in &mut rows {
                for (k, v) in coords {
                    row.insert(format!("sweep.{k}"), json!(v));
                }
            }
            Ok((rows, trace))
        })
        .collect::<Result<_, Error>>()?;
    let mut rows = Vec::new();
    let mut trace = Vec::new();
    for (r, t) in results {
        rows.extend(r);
        trace.extend(t);
    }
    if config.quantity == Quantity::Negativity {
        add_fit_columns(&mut rows);
    }
    let document = json!({
        "tool": "topomix",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "golden": golden(config.quantity),
        "results": rows,
    });
    Ok(RunOutput { document, rows, trace })
}

/// Alias for [`run`]: sweeps are part of every config.
pub fn sweep(config: &ExperimentConfig) -> Result<RunOutput, Error> {
    if config.sweep.is_empty() {
        return Err(config_err("sweep", "no swept parameters"));
    }
    run(config)
}

/// Least-squares `E_N = α L - γ` per cut-length parity.
fn add_fit_columns(rows: &mut [Row]) {
    for parity in [0usize, 1] {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| Some((r.get("cut_length")?.as_u64()? as usize, r.get("negativity")?.as_f64()?)))
            .filter(|(l, _)| l % 2 == parity)
            .map(|(l, e)| (l as f64, e))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            continue;
        }
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
        let gamma = slope * mx - my;
        for r in rows.iter_mut() {
            if r.get("cut_length").and_then(Value::as_u64).is_some_and(|l| l as usize % 2 == parity) {
                r.insert("fit_alpha".into(), json!(slope));
                r.insert("fit_gamma".into(), json!(gamma));
            }
        }
    }
}

fn lattice_of(cfg: &ExperimentConfig) -> Result<Lattice, Error> {
    let spec = cfg.lattice.ok_or_else(|| config_err("lattice", "required"))?;
    Lattice::from_spec(spec)
}

fn partition_of(cfg: &ExperimentConfig, lat: &Lattice) -> Result<Partition, Error> {
    let scheme = cfg.partition.ok_or_else(|| config_err("partition", "required"))?;
    partition(lat, scheme)
}

fn noise_of(cfg: &ExperimentConfig, lat: &Lattice) -> Result<NoiseSpec, Error> {
    let mut spec = NoiseSpec::new(lat.n());
    for (kind, p) in cfg.noise.families() {
        spec.extend(NoiseSpec::dephasing(lat, kind, p)?)?;
    }
    Ok(spec)
}

/// The model state with noise applied exactly; only `p ∈ {0, ½}` keeps it a
/// stabilizer state.
fn stabilizer_endpoint(cfg: &ExperimentConfig, lat: &Lattice) -> Result<StabilizerMixedState, Error> {
    let model = cfg.model.ok_or_else(|| config_err("model", "required"))?;
    let mut s = model_state(model, lat)?;
    for (kind, p) in cfg.noise.families() {
        if p == 0.5 {
            s = s.apply_max_dephasing(&dephasing_ops(lat, kind)?)?;
        } else if p != 0.0 {
            return Err(config_err("noise", format!("{p} is not a stabilizer endpoint (0 or 0.5) for this quantity")));
        }
    }
    Ok(s)
}

fn region_of(cfg: &ExperimentConfig, lat: &Lattice) -> Result<Vec<usize>, Error> {
    match &cfg.region {
        None => Ok((0..lat.n()).collect()),
        Some(RegionSpec::Qubits(q)) => Ok(q.clone()),
        Some(RegionSpec::Named(name)) => {
            if name == "all" {
                return Ok((0..lat.n()).collect());
            }
            let p = partition_of(cfg, lat)?;
            match name.as_str() {
                "A" => Ok(p.a),
                "B" => Ok(p.b),
                "C" => Ok(p.c),
                "AB" => Ok(p.ab()),
                "BC" => Ok(p.bc()),
                "ABC" => Ok(p.abc()),
                other => Err(config_err("region", format!("unknown region {other:?}"))),
            }
        }
    }
}

fn row(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Row {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn evaluate(cfg: &ExperimentConfig) -> Result<(Vec<Row>, Vec<convexroof::TraceEntry>), Error> {
    let none = Vec::new();
    match cfg.quantity {
        Quantity::Entropy => {
            let lat = lattice_of(cfg)?;
            let s = model_state(cfg.model.ok_or_else(|| config_err("model", "required"))?, &lat)?;
            let noise = noise_of(cfg, &lat)?;
            let region = region_of(cfg, &lat)?;
            let (value, method) = match cfg.budgets.mc_samples {
                Some(n) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    (cssnoise::sampled_entropy_region(&s, &noise, &region, n, &mut rng)?, "sampled")
                }
                None => (cssnoise::noisy_entropy_region(&s, &noise, &region, cfg.budgets.syndrome_bits)?, "exact"),
            };
            Ok((vec![row([("entropy", json!(value)), ("region_size", json!(region.len())), ("method", json!(method))])], none))
        }
        Quantity::Cmi => {
            let lat = lattice_of(cfg)?;
            let s = model_state(cfg.model.ok_or_else(|| config_err("model", "required"))?, &lat)?;
            let noise = noise_of(cfg, &lat)?;
            let p = partition_of(cfg, &lat)?;
            let (value, method) = match cfg.budgets.mc_samples {
                Some(n) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    (cssnoise::sampled_cmi(&s, &noise, &p, n, &mut rng)?, "sampled")
                }
                None => (cssnoise::noisy_cmi(&s, &noise, &p, cfg.budgets.syndrome_bits)?, "exact"),
            };
            Ok((vec![row([("cmi", json!(value)), ("method", json!(method))])], none))
        }
        Quantity::Negativity => {
            let lat = lattice_of(cfg)?;
            let s = stabilizer_endpoint(cfg, &lat)?;
            let p = partition_of(cfg, &lat)?;
            let r = negativity::stabilizer_negativity(&s, &p.a, Some(lat.lx()));
            Ok((
                vec![row([
                    ("cut_length", json!(lat.lx())),
                    ("boundary_generators", json!(r.boundary_generators)),
                    ("rank", json!(r.rank)),
                    ("negativity", json!(r.negativity)),
                ])],
                none,
            ))
        }
        Quantity::BraidingTable => Ok((braiding_rows(&lattice_of(cfg)?)?, none)),
        Quantity::MemoryClass => {
            let lat = lattice_of(cfg)?;
            let s = stabilizer_endpoint(cfg, &lat)?;
            let r = anomaly::classify_memory(&s, &lat)?;
            let strong: Vec<String> = r.strong_types.iter().map(ToString::to_string).collect();
            let loops: Vec<String> = r.loops.iter().map(|l| format!("{}-{}:{}", l.anyon, l.direction, l.status)).collect();
            let (kind, k) = match r.class {
                MemoryClass::Quantum(k) => ("quantum", k),
                MemoryClass::Classical(k) => ("classical", k),
                MemoryClass::Trivial => ("trivial", 0),
            };
            Ok((
                vec![row([
                    ("class", json!(kind)),
                    ("k", json!(k)),
                    ("logical_qubits", json!(r.logical_qubits)),
                    ("logical_bits", json!(r.logical_bits)),
                    ("strong_types", json!(strong.join(" "))),
                    ("loops", json!(loops.join(" "))),
                ])],
                none,
            ))
        }
        Quantity::TeeWitness => {
            let lat = lattice_of(cfg)?;
            let s = stabilizer_endpoint(cfg, &lat)?;
            let p = partition_of(cfg, &lat)?;
            let w = cfg.witness.ok_or_else(|| config_err("witness", "required"))?;
            let scheme = cfg.partition.expect("validated");
            let (wa, wb) = witness_strings(&lat, scheme, w)?;
            let r = anomaly::tee_witness_check(&s, &lat, &wa, &wb, &p)?;
            let cmi = s.cmi(&p);
            Ok((
                vec![row([
                    ("charge_matches", json!(r.charge_matches)),
                    ("locally_indistinguishable", json!(r.locally_indistinguishable)),
                    ("homentropic", json!(r.homentropic)),
                    ("measured_charge", json!(r.measured_charge.map(|c| c.to_string()))),
                    ("braiding", json!(r.braiding.to_string())),
                    ("cmi", json!(cmi)),
                ])],
                none,
            ))
        }
        Quantity::ConvexRoof => {
            let rc = cfg.roof.ok_or_else(|| config_err("roof", "required"))?;
            let (rho, parts) = match rc.state {
                RoofState::GhzMixture => (convexroof::ghz_mixture(rc.p)?, Partition::new(3, vec![0], vec![1], vec![2])?),
                RoofState::Model => {
                    let lat = lattice_of(cfg)?;
                    let s = model_state(cfg.model.ok_or_else(|| config_err("model", "required"))?, &lat)?;
                    let rho = convexroof::densify(&s)?.apply_noise(&noise_of(cfg, &lat)?)?;
                    (rho, partition_of(cfg, &lat)?)
                }
            };
            let budget = RoofBudget {
                members: rc.members,
                restarts: rc.restarts,
                max_iters: rc.max_iters,
                seed: cfg.seed,
                ..RoofBudget::default()
            };
            let res = convexroof::convex_roof_minimize(&rho, &parts, rc.mode, &budget)?;
            let cmi = convexroof::cmi_dense(&rho, &parts)?;
            Ok((
                vec![row([
                    ("value", json!(res.value)),
                    ("cmi", json!(cmi)),
                    ("members", json!(res.best.len())),
                    ("mode", json!(rc.mode)),
                ])],
                res.trace,
            ))
        }
    }
}

fn braiding_rows(lat: &Lattice) -> Result<Vec<Row>, Error> {
    let l = lat.lx().min(lat.ly()) as i64;
    let center = (l / 2, l / 2);
    let disc = anomaly::crossing_disc(lat, center);
    let mut rows = Vec::new();
    for a in Anyon::ALL {
        let mut r = Row::new();
        r.insert("anyon".into(), json!(a.to_string()));
        for b in Anyon::ALL {
            let paths = crate::lattice::standard_paths(
                lat,
                PathRequest::CrossingPair { center, first: a.path_kind(), second: b.path_kind() },
            )?;
            let wa = anomaly::string_operator(a, &paths[0], lat)?;
            let wb = anomaly::string_operator(b, &paths[1], lat)?;
            r.insert(format!("S_{b}"), json!(anomaly::braiding_phase(&wa, &wb, &disc)?.to_string()));
        }
        let arm = ((l - 1) / 2).max(1);
        r.insert("theta".into(), json!(anomaly::self_statistics(a, lat, center, arm)?.to_string()));
        rows.push(r);
    }
    Ok(rows)
}

/// Strong loop inside a Levin-Wen annulus and a weak string from the hole
/// to just outside it.
pub fn witness_strings(lat: &Lattice, scheme: PartitionScheme, w: WitnessConfig) -> Result<(StringOperator, StringOperator), Error> {
    let PartitionScheme::LevinWen { center: (cx, cy), outer, .. } = scheme else {
        return Err(config_err("partition", "tee-witness needs a levin-wen partition"));
    };
    let k = outer as i64 - 2;
    let (lower, upper) = match w.strong.path_kind() {
        PathKind::Direct => ((cx - k, cy - k), (cx + 1 + k, cy + 1 + k)),
        PathKind::Dual => ((cx - k - 1, cy - k - 1), (cx + k, cy + k)),
    };
    let wa = anomaly::standard_string(w.strong, lat, PathRequest::Box { lower, upper, kind: w.strong.path_kind() })?;
    let to = (cx + outer as i64 + 1, cy);
    let wb = anomaly::standard_string(w.weak, lat, PathRequest::OpenString { from: (cx, cy), to, kind: w.weak.path_kind() })?;
    Ok((wa, wb))
}

/// Group rows by a column; handy for reading sweep output.
pub fn group_by(rows: &[Row], column: &str) -> BTreeMap<String, Vec<Row>> {
    let mut out: BTreeMap<String, Vec<Row>> = BTreeMap::new();
    for r in rows {
        let key = r.get(column).map(Value::to_string).unwrap_or_default();
        out.entry(key).or_default().push(r.clone());
    }
    out
}

/// Parse a config, check it, and describe it as a dense state when small.
pub fn dense_model(cfg: &ExperimentConfig) -> Result<DenseState, Error> {
    let lat = lattice_of(cfg)?;
    let s = model_state(cfg.model.ok_or_else(|| config_err("model", "required"))?, &lat)?;
    convexroof::densify(&s)?.apply_noise(&noise_of(cfg, &lat)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn negativity_sweep_rows() {
        let c = cfg(r#"{
            "quantity": "negativity", "model": "zx-dephased-max",
            "lattice": {"kind": "square-edges", "Lx": 2, "Ly": 6, "boundary": "cylinder"},
            "partition": {"scheme": "cylinder-cut1", "row": 2},
            "sweep": [{"param": "Lx", "values": [2, 3, 4, 5, 6]}]
        }"#);
        let out = run(&c).unwrap();
        let vals: Vec<f64> = out.rows.iter().map(|r| r["negativity"].as_f64().unwrap()).collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(out.rows[0]["fit_alpha"].as_f64(), Some(1.0));
    }

    #[test]
    fn braiding_table_values() {
        let c = cfg(r#"{"quantity": "braiding-table",
            "lattice": {"kind": "square-edges", "Lx": 5, "Ly": 5, "boundary": "torus"}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.rows[0]["S_m"], json!("-1"));
        let theta: Vec<&str> = out.rows.iter().map(|r| r["theta"].as_str().unwrap()).collect();
        assert_eq!(theta, vec!["+1", "+1", "-1"]);
    }

    #[test]
    fn memory_endpoints() {
        let c = cfg(r#"{"quantity": "memory-class", "model": "toric-code",
            "lattice": {"kind": "square-edges", "Lx": 3, "Ly": 3, "boundary": "torus"},
            "noise": {"kind": "z", "p": 0.0},
            "sweep": [{"param": "p", "values": [0.0, 0.5]}]}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.rows[0]["class"], json!("quantum"));
        assert_eq!(out.rows[1]["class"], json!("classical"));
        let mut bad = c.clone();
        bad.sweep[0].values = vec![0.2];
        assert!(run(&bad).is_err());
    }

    #[test]
    fn validation_names_field() {
        let c = cfg(r#"{"quantity": "cmi", "model": "toric-code",
            "lattice": {"kind": "square-edges", "Lx": 3, "Ly": 3, "boundary": "torus"}}"#);
        assert!(run(&c).unwrap_err().to_string().contains("`partition`"));
        let mut e = c.clone();
        e.partition = Some(PartitionScheme::LevinWen { center: (0, 0), inner: 1, outer: 2, strict: false });
        e.sweep = vec![SweepAxis { param: "p".into(), values: vec![] }];
        assert!(run(&e).unwrap_err().to_string().contains("sweep.p"));
    }

    #[test]
    fn deterministic_documents() {
        let c = cfg(r#"{"quantity": "cmi", "model": "toric-code",
            "lattice": {"kind": "square-edges", "Lx": 3, "Ly": 3, "boundary": "torus"},
            "noise": {"kind": "xz", "px": 0.1, "pz": 0.2},
            "partition": {"scheme": "levin-wen", "center": [1, 1], "inner": 1, "outer": 2, "strict": false},
            "sweep": [{"param": "px", "values": [0.1, 0.25]}, {"param": "pz", "values": [0.1, 0.4]}]}"#);
        let a = serde_json::to_string(&run(&c).unwrap().document).unwrap();
        let b = serde_json::to_string(&run(&c).unwrap().document).unwrap();
        assert_eq!(a, b);
    }
}
