//! Command-line front end. Every run writes its outputs plus a
//! `manifest.json` that can be fed back through `--config`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::affine::{AffineWord, Glide};
use crate::dkdv::{
    carrier_free_condition, commuting_pair_check, evolve_step, make_instance,
    observable_fh, soliton_states, window_probe, StateSequence, SystemInstance,
};
use crate::error::{Error, Result};
use crate::lusztig::{
    apply_moves_to_weights, find_move_sequence_with, MoveSearch, NeighborOrder, WeightedWord,
};
use crate::network::ChamberLabel;
use crate::scalar::{max_rel_diff, Rational, Scalar};
use crate::tau::{
    bhz_residual, dot, rescaled_for_swap, slope, solve_partner, solve_partner_exact, speed,
    swap_bc, swap_prefactor, tau_eval, tau_eval_det, topological_modes, vertex_weight, Component,
    SolitonSpec, TauFunction,
};

pub const MANIFEST_VERSION: u32 = 1;
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64";
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Parser, Debug)]
#[command(name = "affine-dkdv", version, about = "Affine dKdV carrier dynamics and tau-function solitons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration, or a manifest from an earlier run.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Sweep the carrier through a state window repeatedly.
    ///
    /// states.csv: m, j, y_1..y_l. fh.csv: m, j, f_h.
    /// diagnostics.csv: m, carrier_deviation, edge_deviation.
    Evolve,
    /// States generated from a soliton tau function.
    ///
    /// states.csv: m, j, y_1..y_l. tau.csv: s_1..s_n, tau.
    /// consistency.csv: m, max_rel_dev, edge_deviation. report.json: speeds and modes.
    Soliton,
    /// Run the verification suites; exit code 0 iff all pass.
    ///
    /// report.json: one entry per suite with a metric and a verdict.
    Verify,
    /// Speed of one-soliton solutions across the topological modes.
    ///
    /// speed.csv: b, c, p, mode_lo, mode_hi, tu_dot, tv_dot. summary.json: per-mode ranges.
    SpeedScan,
    /// Check whether a weighted carrier and state commute.
    ///
    /// report.json: commutation, power decomposition and periodicity.
    CommuteCheck,
    /// Compare the crossing condition with a numeric locality probe.
    ///
    /// probe.csv: r, delta. report.json: condition and decay verdict.
    CarrierFreeCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Soliton => "soliton",
            Command::Verify => "verify",
            Command::SpeedScan => "speed-scan",
            Command::CommuteCheck => "commute-check",
            Command::CarrierFreeCheck => "carrier-free-check",
        }
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A scalar as written in a config: integer, float or `"p/q"` text.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Int(i) => i.to_string(),
            Num::Float(x) => format!("{x:?}"),
            Num::Text(s) => s.clone(),
        }
    }

    fn to<S: Scalar>(&self) -> Result<S> {
        S::parse(&self.text())
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num::Int(v)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum AlphaConfig {
    Auto(String),
    Values(Vec<Num>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub edge: f64,
    pub consistency: f64,
    pub bhz: f64,
    pub det: f64,
    pub swap: f64,
    pub probe_decay: f64,
    pub label_bound: i64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            edge: 1e-10,
            consistency: 1e-8,
            bhz: 1e-9,
            det: 1e-10,
            swap: 1e-10,
            probe_decay: 1e-9,
            label_bound: crate::tau::LABEL_BOUND,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub lo: i64,
    pub hi: i64,
    pub min: Num,
    pub max: Num,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InitialStates {
    pub i_lo: i64,
    pub states: Vec<Vec<Num>>,
}

fn default_block() -> Option<Block> {
    Some(Block { lo: 51, hi: 100, min: Num::Int(1), max: Num::Int(10) })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveOptions {
    pub window_lo: i64,
    pub window_len: usize,
    pub steps: usize,
    pub h: usize,
    #[serde(default = "default_block")]
    pub block: Option<Block>,
    pub initial: Option<InitialStates>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { window_lo: 1, window_len: 200, steps: 50, h: 1, block: default_block(), initial: None }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    #[serde(rename = "A")]
    pub a: Num,
    pub b: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Num>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonOptions {
    pub components: Vec<ComponentConfig>,
    pub steps: usize,
    pub window_lo: i64,
    pub window_hi: i64,
    pub h: usize,
    pub check: bool,
}

impl Default for SolitonOptions {
    fn default() -> Self {
        SolitonOptions {
            components: default_components(),
            steps: 20,
            window_lo: -30,
            window_hi: 30,
            h: 1,
            check: true,
        }
    }
}

fn default_components() -> Vec<ComponentConfig> {
    vec![
        ComponentConfig { a: Num::Int(1), b: Num::Float(3.2), c: None },
        ComponentConfig { a: Num::Int(1), b: Num::Float(1.4), c: None },
    ]
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bhz,
    FixedPoint,
    MoveIndependence,
    DetVsSum,
    SwapSymmetry,
    CarrierFree,
    TauConsistency,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Bhz,
        Suite::FixedPoint,
        Suite::MoveIndependence,
        Suite::DetVsSum,
        Suite::SwapSymmetry,
        Suite::CarrierFree,
        Suite::TauConsistency,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Bhz => "bhz",
            Suite::FixedPoint => "fixed-point",
            Suite::MoveIndependence => "move-independence",
            Suite::DetVsSum => "det-vs-sum",
            Suite::SwapSymmetry => "swap-symmetry",
            Suite::CarrierFree => "carrier-free",
            Suite::TauConsistency => "tau-consistency",
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub label_range: i64,
    pub components: Vec<ComponentConfig>,
    pub window_lo: i64,
    pub window_hi: i64,
    pub steps: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suites: Suite::ALL.to_vec(),
            samples: 100,
            label_range: 20,
            components: default_components(),
            window_lo: -30,
            window_hi: 30,
            steps: 10,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScanOptions {
    pub samples_per_mode: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { samples_per_mode: 200 }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WordConfig {
    pub letters: Vec<usize>,
    pub weights: Vec<Num>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CommuteOptions {
    pub carrier: WordConfig,
    pub state: WordConfig,
}

impl Default for CommuteOptions {
    fn default() -> Self {
        let nums = |v: &[i64]| v.iter().map(|&x| Num::Int(x)).collect();
        CommuteOptions {
            carrier: WordConfig { letters: vec![1, 2, 0, 1], weights: nums(&[3, 1, 3, 1]) },
            state: WordConfig { letters: vec![2, 1, 0, 2], weights: nums(&[3, 2, 3, 2]) },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeOptions {
    pub max_radius: usize,
    pub epsilon: Num,
    pub min: Num,
    pub max: Num,
    /// Probe on the vacuum instead of random states.
    pub vacuum: bool,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            max_radius: 20,
            epsilon: Num::Text("1/10".into()),
            min: Num::Int(1),
            max: Num::Int(10),
            vacuum: false,
        }
    }
}

/// A run configuration; every field has a default.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub u: Option<Vec<usize>>,
    pub v: Option<Vec<usize>>,
    pub alpha: Option<AlphaConfig>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub evolve: EvolveOptions,
    pub soliton: SolitonOptions,
    pub verify: VerifyOptions,
    pub speed_scan: ScanOptions,
    pub commute: CommuteOptions,
    pub carrier_free: ProbeOptions,
}

impl RunConfig {
    /// Parses a config, or the `config` field of a manifest.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let value = match value.get("manifest_version") {
            Some(_) => value.get("config").cloned().ok_or_else(|| Error::Config("manifest without config".into()))?,
            None => value,
        };
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    fn glides(&self, command: Command) -> Result<(Glide, Glide)> {
        let n = self.n.unwrap_or(3);
        let (du, dv): (&[usize], &[usize]) = match command {
            Command::Evolve => (&[2, 1], &[1, 2, 1, 0]),
            _ => (&[1, 2, 1, 0], &[1, 0]),
        };
        let u = Glide::from_letters(n, self.u.as_deref().unwrap_or(du))?;
        let v = Glide::from_letters(n, self.v.as_deref().unwrap_or(dv))?;
        Ok((u, v))
    }

    fn alpha<S: Scalar>(&self, command: Command) -> Result<Option<Vec<S>>> {
        match &self.alpha {
            Some(AlphaConfig::Values(v)) => v.iter().map(Num::to).collect::<Result<Vec<S>>>().map(Some),
            Some(AlphaConfig::Auto(s)) if s == "auto" => Ok(None),
            Some(AlphaConfig::Auto(s)) => Err(Error::Config(format!("alpha must be a list or \"auto\", found {s:?}"))),
            None if self.u.is_none() && self.v.is_none() => {
                let d: &[i64] = if command == Command::Evolve { &[0, 3, 4] } else { &[1, 3, 4] };
                Ok(Some(d.iter().map(|&x| S::from_i64(x)).collect()))
            }
            None => Ok(None),
        }
    }

    fn instance<S: Scalar>(&self, command: Command) -> Result<SystemInstance<S>> {
        let (u, v) = self.glides(command)?;
        make_instance(&u, &v, self.alpha(command)?)
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub out: PathBuf,
    pub files: Vec<String>,
    /// `false` when a verification failed.
    pub passed: bool,
    pub report: Value,
}

#[derive(Serialize)]
struct Manifest<'a> {
    manifest_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    mode: Mode,
    seed: u64,
    rng: &'static str,
    config: &'a RunConfig,
    instance: Value,
    outputs: &'a [String],
}

struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Output { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_path(self.dir.join(name)).map_err(io)?;
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(self.dir.join(name), text + "\n")?;
        self.files.push(name.to_string());
        Ok(())
    }
}

fn header(fixed: &[&str], prefix: &str, count: usize) -> Vec<String> {
    fixed
        .iter()
        .map(|s| s.to_string())
        .chain((1..=count).map(|k| format!("{prefix}{k}")))
        .collect()
}

fn state_rows<S: Scalar>(m: usize, s: &StateSequence<S>) -> Vec<Vec<String>> {
    s.indices()
        .zip(s.states())
        .map(|(j, y)| {
            [m.to_string(), j.to_string()].into_iter().chain(y.iter().map(Scalar::render)).collect()
        })
        .collect()
}

fn random_values<S: Scalar>(rng: &mut ChaCha8Rng, count: usize, min: f64, max: f64) -> Result<Vec<S>> {
    (0..count).map(|_| S::parse(&format!("{:?}", rng.gen_range(min..max)))).collect()
}

fn range_of(min: &Num, max: &Num) -> Result<(f64, f64)> {
    let (a, b) = (min.to::<f64>()?, max.to::<f64>()?);
    if !(0.0 < a && a < b) {
        return Err(Error::Config(format!("random range [{a}, {b}) must be positive and nonempty")));
    }
    Ok((a, b))
}

fn random_label(rng: &mut ChaCha8Rng, n: usize, r: i64) -> ChamberLabel {
    ChamberLabel((0..n).map(|_| rng.gen_range(-r..=r)).collect())
}

fn build_spec<S: Scalar>(alpha: &[S], comps: &[ComponentConfig]) -> Result<SolitonSpec<S>> {
    let components = comps
        .iter()
        .map(|c| {
            let b: S = c.b.to()?;
            let partner = match &c.c {
                Some(x) => x.to()?,
                None => partner_of(alpha, &b)?,
            };
            Ok(Component::new(c.a.to()?, b, partner))
        })
        .collect::<Result<Vec<_>>>()?;
    SolitonSpec::new(alpha.to_vec(), components)
}

fn partner_of<S: Scalar>(alpha: &[S], b: &S) -> Result<S> {
    if S::is_exact() {
        let alpha: Vec<Rational> = alpha.iter().map(|a| Rational::parse(&a.render())).collect::<Result<_>>()?;
        let c = solve_partner_exact(&alpha, &Rational::parse(&b.render())?)?;
        S::parse(&c.render())
    } else {
        let alpha: Vec<f64> = alpha.iter().map(Scalar::to_f64).collect();
        S::parse(&format!("{:?}", solve_partner(&alpha, b.to_f64())?))
    }
}

fn instance_json<S: Scalar>(inst: &SystemInstance<S>) -> Value {
    serde_json::to_value(inst).unwrap_or(Value::Null)
}

/// Runs one command and writes its outputs and manifest.
pub fn run(cli: &Cli) -> Result<RunSummary> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mode = cli.mode.or(config.mode).unwrap_or(Mode::Float);
    let seed = cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    config.mode = Some(mode);
    config.seed = Some(seed);
    match mode {
        Mode::Exact => run_with::<Rational>(cli.command, &config, &cli.out, mode, seed),
        Mode::Float => run_with::<f64>(cli.command, &config, &cli.out, mode, seed),
    }
}

fn run_with<S: Scalar>(command: Command, config: &RunConfig, dir: &Path, mode: Mode, seed: u64) -> Result<RunSummary> {
    let mut out = Output::new(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (instance, passed, report) = match command {
        Command::Evolve => cmd_evolve::<S>(config, &mut out, &mut rng)?,
        Command::Soliton => cmd_soliton::<S>(config, &mut out)?,
        Command::Verify => cmd_verify::<S>(config, &mut out, &mut rng)?,
        Command::SpeedScan => cmd_speed_scan(config, &mut out)?,
        Command::CommuteCheck => cmd_commute::<S>(config, &mut out)?,
        Command::CarrierFreeCheck => cmd_carrier_free::<S>(config, &mut out, &mut rng)?,
    };
    out.files.push("manifest.json".into());
    let files = out.files.clone();
    let manifest = Manifest {
        manifest_version: MANIFEST_VERSION,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        mode,
        seed,
        rng: RNG_NAME,
        config,
        instance,
        outputs: &files,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(RunSummary { command: command.name(), out: dir.to_path_buf(), files, passed, report })
}

type CmdResult = Result<(Value, bool, Value)>;

fn cmd_evolve<S: Scalar>(config: &RunConfig, out: &mut Output, rng: &mut ChaCha8Rng) -> CmdResult {
    let opts = &config.evolve;
    let inst = config.instance::<S>(Command::Evolve)?;
    let l = inst.vacuum().len();
    let start = match &opts.initial {
        Some(init) => {
            let states = init
                .states
                .iter()
                .map(|y| y.iter().map(Num::to).collect::<Result<Vec<S>>>())
                .collect::<Result<Vec<_>>>()?;
            StateSequence::new(init.i_lo, states)?
        }
        None => {
            let mut s = StateSequence::vacuum(&inst, opts.window_lo, opts.window_len);
            if let Some(block) = &opts.block {
                let (min, max) = range_of(&block.min, &block.max)?;
                for j in block.lo..=block.hi {
                    s.set(j, random_values(rng, l, min, max)?)?;
                }
            }
            s
        }
    };
    let mut history = vec![start];
    let mut diagnostics = Vec::new();
    for m in 0..opts.steps {
        let (next, carrier_dev) = evolve_step(&inst, &history[m])?;
        diagnostics.push(vec![
            (m + 1).to_string(),
            format!("{carrier_dev:e}"),
            format!("{:e}", next.edge_deviation(inst.vacuum())),
        ]);
        history.push(next);
    }
    let mut states = Vec::new();
    let mut fh = Vec::new();
    for (m, s) in history.iter().enumerate() {
        states.extend(state_rows(m, s));
        fh.extend(observable_fh(s, opts.h)?.into_iter().map(|(j, x)| vec![m.to_string(), j.to_string(), x.render()]));
    }
    out.csv("states.csv", &header(&["m", "j"], "y_", l), &states)?;
    out.csv("fh.csv", &header(&["m", "j", "f_h"], "", 0), &fh)?;
    out.csv("diagnostics.csv", &header(&["m", "carrier_deviation", "edge_deviation"], "", 0), &diagnostics)?;
    let report = json!({ "steps": opts.steps, "window": [history[0].i_lo(), history[0].i_hi()], "h": opts.h });
    Ok((instance_json(&inst), true, report))
}

fn cmd_soliton<S: Scalar>(config: &RunConfig, out: &mut Output) -> CmdResult {
    let opts = &config.soliton;
    let tol = &config.tolerances;
    let inst = config.instance::<S>(Command::Soliton)?;
    let spec = build_spec(inst.alpha(), &opts.components)?;
    let tf = TauFunction::new(spec.clone()).with_label_bound(tol.label_bound);
    let l = inst.vacuum().len();
    let mut seqs = Vec::new();
    for m in 0..=opts.steps {
        seqs.push(soliton_states(&inst, &tf, m as i64, opts.window_lo, opts.window_hi)?);
    }
    let mut rows = Vec::new();
    let mut fh = Vec::new();
    for (m, s) in seqs.iter().enumerate() {
        rows.extend(state_rows(m, s));
        fh.extend(observable_fh(s, opts.h)?.into_iter().map(|(j, x)| vec![m.to_string(), j.to_string(), x.render()]));
    }
    out.csv("states.csv", &header(&["m", "j"], "y_", l), &rows)?;
    out.csv("fh.csv", &header(&["m", "j", "f_h"], "", 0), &fh)?;

    let mut labels = BTreeSet::new();
    for i in opts.window_lo..opts.window_hi {
        for c in inst.chart() {
            labels.insert(c.base_label.plus(&inst.shift(i, 0)).0);
        }
    }
    let tau_rows = labels
        .into_iter()
        .map(|s| {
            let t = tau_eval(&tf, &ChamberLabel(s.clone()))?;
            Ok(s.iter().map(i64::to_string).chain([t.render()]).collect())
        })
        .collect::<Result<Vec<Vec<String>>>>()?;
    out.csv("tau.csv", &header(&[], "s_", inst.n()).into_iter().chain(["tau".to_string()]).collect::<Vec<_>>(), &tau_rows)?;

    let mut worst = 0.0f64;
    let mut passed = true;
    if opts.check {
        let mut cons = Vec::new();
        for m in 0..opts.steps {
            let (next, _) = evolve_step(&inst, &seqs[m])?;
            let dev = next.states().iter().zip(seqs[m + 1].states()).map(|(a, b)| max_rel_diff(a, b)).fold(0.0, f64::max);
            let edge = seqs[m].edge_deviation(inst.vacuum());
            worst = worst.max(dev);
            passed &= dev <= tol.consistency;
            cons.push(vec![m.to_string(), format!("{dev:e}"), format!("{edge:e}")]);
        }
        out.csv("consistency.csv", &header(&["m", "max_rel_dev", "edge_deviation"], "", 0), &cons)?;
    }
    let fspec = float_spec(&spec);
    let comps: Vec<Value> = (0..spec.len())
        .map(|k| {
            let c = &fspec.components()[k];
            let mode = topological_modes(fspec.alpha()).into_iter().find(|&(lo, hi)| lo < c.b && c.b < hi);
            json!({
                "A": c.a, "b": c.b, "c": c.c,
                "mode": mode.map(|(lo, hi)| vec![lo, hi]),
                "speed": speed(&fspec, k, inst.trajectory_u(), inst.trajectory_v()).ok(),
            })
        })
        .collect();
    let measured = if spec.len() == 1 && opts.steps > 0 {
        let w = inst.vacuum();
        match (seqs[0].deviation_centroid(w), seqs[opts.steps].deviation_centroid(w)) {
            (Some(a), Some(b)) => Some((b - a) / opts.steps as f64),
            _ => None,
        }
    } else {
        None
    };
    let report = json!({
        "components": comps,
        "cylindric": spec.is_cylindric(),
        "measured_speed": measured,
        "max_consistency_deviation": opts.check.then_some(worst),
        "consistent": passed,
    });
    out.json("report.json", &report)?;
    Ok((instance_json(&inst), passed, report))
}

fn float_spec<S: Scalar>(spec: &SolitonSpec<S>) -> SolitonSpec<f64> {
    let alpha = spec.alpha().iter().map(Scalar::to_f64).collect();
    let comps = spec
        .components()
        .iter()
        .map(|c| Component::new(c.a.to_f64(), c.b.to_f64(), c.c.to_f64()))
        .collect();
    SolitonSpec::new(alpha, comps).expect("a valid spec stays valid in floats")
}

#[derive(Serialize, Debug, Clone)]
struct SuiteResult {
    suite: &'static str,
    passed: bool,
    metric: f64,
    detail: String,
}

fn cmd_verify<S: Scalar>(config: &RunConfig, out: &mut Output, rng: &mut ChaCha8Rng) -> CmdResult {
    let opts = &config.verify;
    let inst = config.instance::<S>(Command::Verify)?;
    let mut results = Vec::new();
    for &suite in &opts.suites {
        let r = match suite {
            Suite::Bhz => suite_bhz(config, &inst, rng),
            Suite::FixedPoint => suite_fixed_point(&inst),
            Suite::MoveIndependence => suite_move_independence(config, &inst, rng),
            Suite::DetVsSum => suite_det(config, &inst, rng),
            Suite::SwapSymmetry => suite_swap(config, &inst, rng),
            Suite::CarrierFree => suite_carrier_free(config, &inst, rng),
            Suite::TauConsistency => suite_consistency(config, &inst),
        };
        results.push(r.unwrap_or_else(|e| SuiteResult {
            suite: suite.name(),
            passed: false,
            metric: f64::NAN,
            detail: format!("error: {e}"),
        }));
    }
    let passed = results.iter().all(|r| r.passed);
    let report = json!({ "passed": passed, "suites": results });
    out.json("report.json", &report)?;
    Ok((instance_json(&inst), passed, report))
}

fn suite_bhz<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let opts = &config.verify;
    let spec = build_spec(inst.alpha(), &opts.components)?;
    let tf = TauFunction::new(spec.clone()).with_label_bound(config.tolerances.label_bound);
    let n = inst.n();
    let mut worst = 0.0f64;
    let mut exact = true;
    for _ in 0..opts.samples {
        let s = random_label(rng, n, opts.label_range);
        let mut idx: Vec<usize> = (1..=n).collect();
        for k in 0..3 {
            let j = rng.gen_range(k..n);
            idx.swap(k, j);
        }
        let (r, scale) = bhz_residual(&tf, &s, idx[0], idx[1], idx[2])?;
        exact &= r.is_zero();
        worst = worst.max(r.to_f64().abs() / scale.max(f64::MIN_POSITIVE));
    }
    let cylindric = spec.is_cylindric();
    let defect = spec.cylindric_defect();
    let residual_ok = if S::is_exact() { exact } else { worst <= config.tolerances.bhz };
    Ok(SuiteResult {
        suite: "bhz",
        passed: residual_ok && cylindric,
        metric: worst,
        detail: format!("max scaled residual {worst:e}; cylindric {cylindric} (defect {defect:e})"),
    })
}

fn suite_fixed_point<S: Scalar>(inst: &SystemInstance<S>) -> Result<SuiteResult> {
    let (w, z) = inst.interaction().apply(inst.carrier(), inst.vacuum())?;
    let dev = max_rel_diff(&w, inst.vacuum()).max(max_rel_diff(&z, inst.carrier()));
    let exact = w == inst.vacuum() && z == inst.carrier();
    let s = StateSequence::vacuum(inst, -10, 21);
    let (next, carrier_dev) = evolve_step(inst, &s)?;
    let ok = if S::is_exact() { exact && next == s } else { dev <= 1e-12 && carrier_dev <= 1e-12 };
    Ok(SuiteResult { suite: "fixed-point", passed: ok, metric: dev.max(carrier_dev), detail: format!("exact equality {exact}") })
}

fn suite_move_independence<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let it = inst.interaction();
    let searches = [
        MoveSearch::default(),
        MoveSearch { bidirectional: false, order: NeighborOrder::Descending },
        MoveSearch { bidirectional: true, order: NeighborOrder::Shuffled(rng.gen()) },
    ];
    let seqs = searches
        .iter()
        .map(|&s| find_move_sequence_with(it.source(), it.target(), s))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    let mut exact = true;
    for _ in 0..config.verify.samples {
        let weights: Vec<S> = random_values(rng, it.source().len(), 0.1, 10.0)?;
        let outs = seqs
            .iter()
            .map(|seq| {
                let mut w = weights.clone();
                apply_moves_to_weights(&mut w, seq).map(|_| w)
            })
            .collect::<Result<Vec<_>>>()?;
        for o in &outs[1..] {
            exact &= o == &outs[0];
            worst = worst.max(max_rel_diff(o, &outs[0]));
        }
    }
    let lens: Vec<usize> = seqs.iter().map(Vec::len).collect();
    let ok = if S::is_exact() { exact } else { worst <= 1e-12 };
    Ok(SuiteResult { suite: "move-independence", passed: ok, metric: worst, detail: format!("sequence lengths {lens:?}") })
}

fn suite_det<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let opts = &config.verify;
    let tf = TauFunction::new(build_spec(inst.alpha(), &opts.components)?).with_label_bound(config.tolerances.label_bound);
    let mut worst = 0.0f64;
    let mut exact = true;
    for _ in 0..opts.samples {
        let s = random_label(rng, inst.n(), opts.label_range);
        let (a, b) = (tau_eval(&tf, &s)?, tau_eval_det(&tf, &s)?);
        exact &= a == b;
        worst = worst.max((a.to_f64() - b.to_f64()).abs() / a.to_f64().abs());
    }
    let ok = if S::is_exact() { exact } else { worst <= config.tolerances.det };
    Ok(SuiteResult { suite: "det-vs-sum", passed: ok, metric: worst, detail: format!("{} labels", opts.samples) })
}

fn suite_swap<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let opts = &config.verify;
    let spec = build_spec(inst.alpha(), &opts.components)?;
    let bound = config.tolerances.label_bound;
    let mut worst = 0.0f64;
    let mut exact = true;
    for k in 0..spec.len() {
        let sw = TauFunction::new(swap_bc(&spec, k)).with_label_bound(bound);
        let re = TauFunction::new(rescaled_for_swap(&spec, k)).with_label_bound(bound);
        for _ in 0..opts.samples {
            let s = random_label(rng, inst.n(), opts.label_range);
            let lhs = tau_eval(&sw, &s)?;
            let rhs = swap_prefactor(&spec, k, &s) * tau_eval(&re, &s)?;
            exact &= lhs == rhs;
            worst = worst.max((lhs.to_f64() - rhs.to_f64()).abs() / lhs.to_f64().abs());
            let c = &inst.chart()[rng.gen_range(0..inst.chart().len())];
            let (a, b) = (
                vertex_weight(&sw, &s, c.upper_wire, c.lower_wire)?,
                vertex_weight(&re, &s, c.upper_wire, c.lower_wire)?,
            );
            exact &= a == b;
            worst = worst.max((a.to_f64() - b.to_f64()).abs() / (a.to_f64().abs() + b.to_f64().abs()).max(f64::MIN_POSITIVE));
        }
    }
    let ok = if S::is_exact() { exact } else { worst <= config.tolerances.swap };
    Ok(SuiteResult { suite: "swap-symmetry", passed: ok, metric: worst, detail: format!("{} components", spec.len()) })
}

/// Probe deltas for radii `1..=max_radius`.
fn probe_series<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, f64)>> {
    let opts = &config.carrier_free;
    let (min, max) = range_of(&opts.min, &opts.max)?;
    let eps: S = opts.epsilon.to()?;
    let r_max = opts.max_radius;
    let l = inst.vacuum().len();
    let s = if opts.vacuum {
        StateSequence::vacuum(inst, -(r_max as i64), r_max + 1)
    } else {
        let states = (0..=r_max).map(|_| random_values(rng, l, min, max)).collect::<Result<Vec<Vec<S>>>>()?;
        StateSequence::new(-(r_max as i64), states)?
    };
    (1..=r_max).map(|r| window_probe(inst, &s, r, &eps).map(|p| (r, p.delta))).collect()
}

fn suite_carrier_free<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let condition = carrier_free_condition(inst.u(), inst.v())?;
    let series = probe_series(config, inst, rng)?;
    let min = series.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
    let decays = min <= config.tolerances.probe_decay;
    Ok(SuiteResult {
        suite: "carrier-free",
        passed: condition == decays,
        metric: min,
        detail: format!("condition {condition}, probe decays {decays}"),
    })
}

fn suite_consistency<S: Scalar>(config: &RunConfig, inst: &SystemInstance<S>) -> Result<SuiteResult> {
    let opts = &config.verify;
    let tol = &config.tolerances;
    let tf = TauFunction::new(build_spec(inst.alpha(), &opts.components)?).with_label_bound(tol.label_bound);
    let mut worst = 0.0f64;
    let mut worst_edge = 0.0f64;
    let mut exact = true;
    let mut prev = soliton_states(inst, &tf, 0, opts.window_lo, opts.window_hi)?;
    for m in 0..opts.steps as i64 {
        let next = soliton_states(inst, &tf, m + 1, opts.window_lo, opts.window_hi)?;
        let (evolved, _) = evolve_step(inst, &prev)?;
        exact &= evolved == next;
        worst_edge = worst_edge.max(prev.edge_deviation(inst.vacuum()));
        for (a, b) in evolved.states().iter().zip(next.states()) {
            worst = worst.max(max_rel_diff(a, b));
        }
        prev = next;
    }
    let ok = if S::is_exact() { exact } else { worst <= tol.consistency && worst_edge <= tol.edge };
    Ok(SuiteResult {
        suite: "tau-consistency",
        passed: ok,
        metric: worst,
        detail: format!("max edge deviation {worst_edge:e} over {} steps", opts.steps),
    })
}

fn cmd_speed_scan(config: &RunConfig, out: &mut Output) -> CmdResult {
    let inst = config.instance::<f64>(Command::SpeedScan)?;
    let alpha = inst.alpha().to_vec();
    let modes = topological_modes(&alpha);
    if modes.is_empty() {
        return Err(Error::Degenerate("wire weights leave no bounded components".into()));
    }
    let (tu, tv) = (inst.trajectory_u(), inst.trajectory_v());
    let samples = config.speed_scan.samples_per_mode;
    let mut rows = Vec::new();
    let mut per_mode = Vec::new();
    let mut notes = Vec::new();
    let mut all_positive = true;
    let mut dots_negative = true;
    for &(lo, hi) in &modes {
        let (mut pmin, mut pmax, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
        for k in 0..samples {
            let b = lo + (hi - lo) * (k as f64 + 0.5) / samples as f64;
            let c = match solve_partner(&alpha, b) {
                Ok(c) => c,
                Err(e) => {
                    notes.push(format!("b = {b}: {e}"));
                    continue;
                }
            };
            let spec = SolitonSpec::new(alpha.clone(), vec![Component::new(1.0, b, c)])?;
            let p = speed(&spec, 0, tu, tv)?;
            let logs = slope(&spec, 0);
            let (du, dv) = (dot(tu, &logs), dot(tv, &logs));
            if b > c {
                dots_negative &= du < 0.0 && dv < 0.0;
            }
            all_positive &= p > 0.0;
            pmin = pmin.min(p);
            pmax = pmax.max(p);
            count += 1;
            rows.push(vec![format!("{b:?}"), format!("{c:?}"), format!("{p:?}"), lo.to_string(), hi.to_string(), format!("{du:?}"), format!("{dv:?}")]);
        }
        per_mode.push(json!({ "mode": [lo, hi], "min_speed": pmin, "max_speed": pmax, "samples": count }));
    }
    let separated = per_mode.windows(2).all(|w| w[0]["max_speed"].as_f64() < w[1]["min_speed"].as_f64());
    out.csv("speed.csv", &header(&["b", "c", "p", "mode_lo", "mode_hi", "tu_dot", "tv_dot"], "", 0), &rows)?;
    let report = json!({
        "modes": per_mode,
        "all_positive": all_positive,
        "modes_separated": separated,
        "dots_negative_for_b_above_c": dots_negative,
        "skipped": notes,
    });
    out.json("summary.json", &report)?;
    Ok((instance_json(&inst), true, report))
}

fn cmd_commute<S: Scalar>(config: &RunConfig, out: &mut Output) -> CmdResult {
    let n = config.n.unwrap_or(3);
    let weighted = |w: &WordConfig| -> Result<WeightedWord<S>> {
        let weights = w.weights.iter().map(Num::to).collect::<Result<Vec<S>>>()?;
        WeightedWord::new(AffineWord::new(n, w.letters.clone())?, weights)
    };
    let carrier = weighted(&config.commute.carrier)?;
    let state = weighted(&config.commute.state)?;
    let report = commuting_pair_check(&carrier, &state)?;
    let value = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    out.json("report.json", &value)?;
    let instance = json!({ "carrier": carrier, "state": state });
    Ok((instance, true, value))
}

fn cmd_carrier_free<S: Scalar>(config: &RunConfig, out: &mut Output, rng: &mut ChaCha8Rng) -> CmdResult {
    let inst = config.instance::<S>(Command::CarrierFreeCheck)?;
    let condition = carrier_free_condition(inst.u(), inst.v())?;
    let series = probe_series(config, &inst, rng)?;
    let rows: Vec<Vec<String>> = series.iter().map(|(r, d)| vec![r.to_string(), format!("{d:e}")]).collect();
    out.csv("probe.csv", &header(&["r", "delta"], "", 0), &rows)?;
    let min = series.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
    let decays = min <= config.tolerances.probe_decay;
    let report = json!({
        "condition": condition,
        "probe_decays": decays,
        "min_delta": min,
        "agree": condition == decays,
    });
    out.json("report.json", &report)?;
    Ok((instance_json(&inst), condition == decays, report))
}

/// Entry point for the binary.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            if summary.passed {
                eprintln!("{}: wrote {} to {}", summary.command, summary.files.join(", "), summary.out.display());
                ExitCode::SUCCESS
            } else {
                println!("{}", serde_json::to_string_pretty(&summary.report).unwrap_or_default());
                eprintln!("{}: checks failed, see {}", summary.command, summary.out.display());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
