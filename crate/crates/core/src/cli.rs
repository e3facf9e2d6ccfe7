//! Command-line front end: TOML configuration, flag overrides, dispatch and
//! JSON-lines output.
//!
//! Every record carries the fully resolved configuration, the seed scheme and
//! the crate version, so a record stream is a pure function of those three.
//! The thread pool honours `RAYON_NUM_THREADS`; results do not depend on it.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CMatrix, GroupSpec};
use crate::lattice::{BoxSpec, Lattice};
use crate::loops::{build_operation_sets, check_padding, lengths_and_windings, padded_box, parse_sequence, LoopSequence, OpKind};
use crate::observables::{wilson_sequence, ActionParams};
use crate::oracle::{exact_phi_u1, gauge_fix};
use crate::sampler::{sample_chains, ChainConfig, Scheme};
use crate::stats::DEFAULT_BATCHES_PER_CHAIN;
use crate::verify::{covariance_check, lhs_prefactor, magic_formula_check, stationarity_check, verify_cell};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SEED_SCHEME: &str = "replicate r uses seed + r (wrapping); chain k draws from \
ChaCha8Rng::seed_from_u64(seed) on stream k; check-sde noise tests use stream 2^32 of the master seed";

/// Exit statuses.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_STATISTICAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Master loop equation residuals, several seeds per cell.
    Verify,
    /// Monte Carlo estimates of phi(s).
    Sample,
    /// Operation sets of each sequence, with multiplicities.
    Enumerate,
    /// Exact U(1) values by quadrature.
    Oracle,
    /// Noise covariance, magic formulas and sampler agreement.
    CheckSde,
}

/// Run configuration. Every key is optional in the file; [`RunConfig::resolve`]
/// fills in the defaults that depend on other keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Command,
    #[serde(with = "group_text")]
    pub group: GroupSpec,
    pub betas: Vec<f64>,
    pub dim: usize,
    /// Box corners; when absent, the loops' bounding box widened by 1.
    pub lo: Option<Vec<i64>>,
    pub hi: Option<Vec<i64>>,
    /// Loop sequences, loops separated by `;`. Defaults to the plaquette at the origin.
    pub sequences: Vec<String>,
    pub scheme: Scheme,
    pub langevin_step: Option<f64>,
    pub metropolis_step: Option<f64>,
    pub burn_in: usize,
    pub n_samples: usize,
    pub thinning: usize,
    pub n_chains: usize,
    pub hits: usize,
    pub batches_per_chain: usize,
    pub seed: u64,
    /// Independent seeds per verify cell.
    pub replicates: usize,
    /// Quadrature points per free edge for `oracle`.
    pub n_points: usize,
    pub sde_samples: usize,
    pub sde_h: f64,
    /// Random `(M, N)` pairs for the magic formula check.
    pub sde_pairs: usize,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Verify,
            group: GroupSpec::su(2).expect("SU(2)"),
            betas: vec![0.0],
            dim: 2,
            lo: None,
            hi: None,
            sequences: Vec::new(),
            scheme: Scheme::Metropolis,
            langevin_step: None,
            metropolis_step: None,
            burn_in: 1000,
            n_samples: 10_000,
            thinning: 1,
            n_chains: 4,
            hits: 1,
            batches_per_chain: DEFAULT_BATCHES_PER_CHAIN,
            seed: 1,
            replicates: 3,
            n_points: crate::oracle::DEFAULT_QUADRATURE_POINTS,
            sde_samples: 100_000,
            sde_h: 0.01,
            sde_pairs: 5,
            output: None,
            csv: None,
        }
    }
}

mod group_text {
    use super::GroupSpec;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &GroupSpec, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(g)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupSpec, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl RunConfig {
    /// Parses and resolves a TOML document. Unknown keys are rejected.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Materializes every default and validates the loops against the box.
    pub fn resolve(mut self) -> Result<RunConfig> {
        if self.dim < 2 {
            return Err(Error::Config(format!("dim = {} < 2", self.dim)));
        }
        if self.betas.is_empty() || self.betas.iter().any(|b| !b.is_finite()) {
            return Err(Error::Config(format!("betas must be finite and nonempty, got {:?}", self.betas)));
        }
        if self.sequences.is_empty() {
            let origin = vec!["0"; self.dim].join(",");
            self.sequences.push(format!("({origin}): +x +y -x -y"));
        }
        let spec = match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => BoxSpec {
                d: self.dim,
                lo: lo.clone(),
                hi: hi.clone(),
            },
            (None, None) => {
                let texts: Vec<&str> = self.sequences.iter().map(String::as_str).collect();
                padded_box(&texts, self.dim, 1)?
            }
            _ => return Err(Error::Config("give both lo and hi, or neither".into())),
        };
        let lat = Lattice::from_spec(&spec)?;
        self.lo = Some(spec.lo);
        self.hi = Some(spec.hi);
        for text in &self.sequences {
            let s = parse_sequence(text, &lat)?;
            if s.is_empty() {
                return Err(Error::Config(format!("sequence {text:?} has no loops")));
            }
            if matches!(self.command, Command::Verify | Command::Enumerate) {
                check_padding(&s, &lat)?;
            }
        }
        let beta_max = self.betas.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        self.langevin_step
            .get_or_insert(ChainConfig::default_step(Scheme::Langevin, self.group, beta_max));
        self.metropolis_step
            .get_or_insert(ChainConfig::default_step(Scheme::Metropolis, self.group, beta_max));
        if self.replicates == 0 || self.sde_pairs == 0 || self.sde_samples < 2 {
            return Err(Error::Config("replicates, sde_pairs and sde_samples must be positive".into()));
        }
        if !(self.sde_h > 0.0 && self.sde_h.is_finite()) {
            return Err(Error::Config(format!("sde_h must be positive, got {}", self.sde_h)));
        }
        if self.command == Command::Oracle && self.group != GroupSpec::u(1)? {
            return Err(Error::Config(format!("the oracle needs U(1), got {}", self.group)));
        }
        self.chain(self.scheme).validate()?;
        Ok(self)
    }

    pub fn lattice(&self) -> Result<Lattice> {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => Lattice::new(self.dim, lo, hi),
            _ => Err(Error::Config("configuration is not resolved".into())),
        }
    }

    /// Sampler settings for `scheme`, with the master seed.
    pub fn chain(&self, scheme: Scheme) -> ChainConfig {
        let step = match scheme {
            Scheme::Langevin => self.langevin_step,
            Scheme::Metropolis => self.metropolis_step,
        };
        ChainConfig {
            scheme,
            step_size: step.unwrap_or(f64::NAN),
            burn_in: self.burn_in,
            n_samples: self.n_samples,
            thinning: self.thinning,
            seed: self.seed,
            n_chains: self.n_chains,
            hits: self.hits,
            batches_per_chain: self.batches_per_chain,
        }
    }

    pub fn replicate_seeds(&self) -> Vec<u64> {
        (0..self.replicates as u64).map(|r| self.seed.wrapping_add(r)).collect()
    }
}

/// Flags mirror the configuration keys and override the file.
#[derive(Debug, Parser)]
#[command(name = "masterloop", version, about = "Lattice Yang-Mills loop equations: sampling, enumeration and verification")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, env = "MASTERLOOP_CONFIG")]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
    /// Structure group, e.g. `SU(2)`, `U(1)`, `SO(3)`.
    #[arg(long)]
    pub group: Option<GroupSpec>,
    /// Inverse coupling; repeat for several values.
    #[arg(long = "beta", allow_negative_numbers = true)]
    pub betas: Vec<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Lower box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lo: Option<Vec<i64>>,
    /// Upper box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub hi: Option<Vec<i64>>,
    /// Loop sequence such as `(0,0): +x +y -x -y`; repeat for several.
    #[arg(long = "loops")]
    pub sequences: Vec<String>,
    #[arg(long)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub langevin_step: Option<f64>,
    #[arg(long)]
    pub metropolis_step: Option<f64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub thinning: Option<usize>,
    #[arg(long)]
    pub n_chains: Option<usize>,
    #[arg(long)]
    pub hits: Option<usize>,
    #[arg(long)]
    pub batches_per_chain: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub sde_samples: Option<usize>,
    #[arg(long)]
    pub sde_h: Option<f64>,
    #[arg(long)]
    pub sde_pairs: Option<usize>,
    /// JSON-lines output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Optional CSV summary.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl Cli {
    /// File values, then flags, then resolution.
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg: RunConfig = match &self.config {
            Some(path) => toml::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Config(e.to_string()))?,
            None => RunConfig::default(),
        };
        cfg.command = self.command;
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v.into();
                }
            )*};
        }
        take!(group, dim, scheme, burn_in, n_samples, thinning, n_chains, hits, batches_per_chain, seed);
        take!(replicates, n_points, sde_samples, sde_h, sde_pairs);
        take!(lo, hi, langevin_step, metropolis_step, output, csv);
        if !self.betas.is_empty() {
            cfg.betas = self.betas;
        }
        if !self.sequences.is_empty() {
            cfg.sequences = self.sequences;
        }
        cfg.resolve()
    }
}

#[derive(Serialize)]
struct Record<'a, T: Serialize> {
    kind: &'static str,
    version: &'static str,
    seed_scheme: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

/// One line of the CSV summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub command: &'static str,
    pub group: String,
    pub beta: Option<f64>,
    pub sequence: String,
    pub seed: Option<u64>,
    pub quantity: String,
    pub value: f64,
    pub std_error: f64,
    pub z: Option<f64>,
    pub pass: Option<bool>,
}

/// Result of [`run`]: overall verdict and CSV rows.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub rows: Vec<SummaryRow>,
}

struct Emitter<'a> {
    cfg: &'a RunConfig,
    out: &'a mut dyn Write,
}

impl Emitter<'_> {
    fn emit<T: Serialize>(&mut self, kind: &'static str, body: T) -> Result<()> {
        let rec = Record {
            kind,
            version: VERSION,
            seed_scheme: SEED_SCHEME,
            config: self.cfg,
            body,
        };
        let line = serde_json::to_string(&rec).map_err(|e| Error::Config(e.to_string()))?;
        writeln!(self.out, "{line}")?;
        Ok(())
    }
}

/// Runs a resolved configuration, writing JSON lines to `out`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let lat = Arc::new(cfg.lattice()?);
    let seqs = cfg
        .sequences
        .iter()
        .map(|t| parse_sequence(t, &lat))
        .collect::<Result<Vec<_>>>()?;
    let mut em = Emitter { cfg, out };
    match cfg.command {
        Command::Verify => run_verify(&mut em, &lat, &seqs),
        Command::Sample => run_sample(&mut em, &lat, &seqs),
        Command::Enumerate => run_enumerate(&mut em, &lat, &seqs),
        Command::Oracle => run_oracle(&mut em, &lat, &seqs),
        Command::CheckSde => run_check_sde(&mut em, &lat),
    }
}

fn run_verify(em: &mut Emitter, lat: &Arc<Lattice>, seqs: &[LoopSequence]) -> Result<Outcome> {
    let cfg = em.cfg;
    let chain = cfg.chain(cfg.scheme);
    let mut outcome = Outcome {
        pass: true,
        rows: Vec::new(),
    };
    for s in seqs {
        for &beta in &cfg.betas {
            let cell = verify_cell(cfg.group, beta, s, lat.clone(), &chain, &cfg.replicate_seeds())?;
            outcome.pass &= cell.pass;
            for r in &cell.reports {
                outcome.rows.push(SummaryRow {
                    command: "verify",
                    group: cfg.group.to_string(),
                    beta: Some(beta),
                    sequence: r.s.clone(),
                    seed: Some(r.seed),
                    quantity: "residual".into(),
                    value: r.residual,
                    std_error: r.residual_sigma,
                    z: Some(r.z_score()),
                    pass: Some(r.passes()),
                });
            }
            em.emit("verify", &cell)?;
        }
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct SampleBody<'a> {
    beta: f64,
    sequence: String,
    scheme: Scheme,
    step_size: f64,
    acceptance: f64,
    estimate: &'a crate::stats::MCEstimate,
}

fn run_sample(em: &mut Emitter, lat: &Arc<Lattice>, seqs: &[LoopSequence]) -> Result<Outcome> {
    let cfg = em.cfg;
    let chain = cfg.chain(cfg.scheme);
    let n = cfg.group.n() as f64;
    let mut outcome = Outcome {
        pass: true,
        rows: Vec::new(),
    };
    for &beta in &cfg.betas {
        let params = ActionParams::new(beta, cfg.group)?;
        let samples = sample_chains(&chain, lat.clone(), params, seqs.len(), |q, out| {
            for (o, s) in out.iter_mut().zip(seqs) {
                *o = wilson_sequence(q, s) / n.powi(s.count() as i32);
            }
        })?;
        for (k, s) in seqs.iter().enumerate() {
            let est = samples.estimate(k, chain.batches_per_chain)?;
            outcome.rows.push(SummaryRow {
                command: "sample",
                group: cfg.group.to_string(),
                beta: Some(beta),
                sequence: s.to_text(lat),
                seed: Some(cfg.seed),
                quantity: "phi".into(),
                value: est.mean,
                std_error: est.std_error,
                z: None,
                pass: None,
            });
            em.emit(
                "sample",
                SampleBody {
                    beta,
                    sequence: s.to_text(lat),
                    scheme: chain.scheme,
                    step_size: chain.step_size,
                    acceptance: samples.mean_acceptance(),
                    estimate: &est,
                },
            )?;
        }
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct Listed {
    sequence: String,
    multiplicity: usize,
}

#[derive(Serialize)]
struct EnumerateBody {
    sequence: String,
    total_length: usize,
    ell: i64,
    lhs_prefactor: String,
    counts: std::collections::BTreeMap<&'static str, usize>,
    sets: std::collections::BTreeMap<&'static str, Vec<Listed>>,
}

fn run_enumerate(em: &mut Emitter, lat: &Arc<Lattice>, seqs: &[LoopSequence]) -> Result<Outcome> {
    let cfg = em.cfg;
    let mut outcome = Outcome {
        pass: true,
        rows: Vec::new(),
    };
    for s in seqs {
        let ops = build_operation_sets(s, lat)?;
        let (total_length, _, ell) = lengths_and_windings(s);
        let mut counts = std::collections::BTreeMap::new();
        let mut sets = std::collections::BTreeMap::new();
        for kind in OpKind::ALL {
            let members = ops.get(kind);
            counts.insert(kind.label(), members.len());
            let mut listed: Vec<(LoopSequence, usize)> = Vec::new();
            for m in members {
                match listed.iter_mut().find(|(t, _)| t == m) {
                    Some((_, c)) => *c += 1,
                    None => listed.push((m.clone(), 1)),
                }
            }
            sets.insert(
                kind.label(),
                listed
                    .into_iter()
                    .map(|(t, multiplicity)| Listed {
                        sequence: t.to_text(lat),
                        multiplicity,
                    })
                    .collect(),
            );
            outcome.rows.push(SummaryRow {
                command: "enumerate",
                group: cfg.group.to_string(),
                beta: None,
                sequence: s.to_text(lat),
                seed: None,
                quantity: format!("|{}|", kind.label()),
                value: members.len() as f64,
                std_error: 0.0,
                z: None,
                pass: None,
            });
        }
        em.emit(
            "enumerate",
            EnumerateBody {
                sequence: s.to_text(lat),
                total_length,
                ell,
                lhs_prefactor: lhs_prefactor(cfg.group, s).to_string(),
                counts,
                sets,
            },
        )?;
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct OracleBody {
    sequence: String,
    beta: f64,
    phi_re: f64,
    phi_im: f64,
    n_points: usize,
    free_edges: usize,
}

fn run_oracle(em: &mut Emitter, lat: &Arc<Lattice>, seqs: &[LoopSequence]) -> Result<Outcome> {
    let cfg = em.cfg;
    let spec = gauge_fix(lat)?.with_points(cfg.n_points)?;
    let mut outcome = Outcome {
        pass: true,
        rows: Vec::new(),
    };
    for s in seqs {
        for &beta in &cfg.betas {
            let phi = exact_phi_u1(lat, beta, s, &spec)?;
            outcome.rows.push(SummaryRow {
                command: "oracle",
                group: cfg.group.to_string(),
                beta: Some(beta),
                sequence: s.to_text(lat),
                seed: None,
                quantity: "phi".into(),
                value: phi.re,
                std_error: 0.0,
                z: None,
                pass: None,
            });
            em.emit(
                "oracle",
                OracleBody {
                    sequence: s.to_text(lat),
                    beta,
                    phi_re: phi.re,
                    phi_im: phi.im,
                    n_points: spec.n_points(),
                    free_edges: spec.free_edges().len(),
                },
            )?;
        }
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct BasisBody {
    casimir: f64,
    max_defect: f64,
    pass: bool,
}

/// Tolerance on `sum_a v_a^2 = c I`.
pub const BASIS_TOLERANCE: f64 = 1e-10;

fn random_matrix<R: Rng + ?Sized>(g: GroupSpec, rng: &mut R) -> CMatrix {
    let n = g.n();
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if g.is_real() { 0.0 } else { rng.sample(StandardNormal) };
        Complex64::new(re, im)
    })
}

fn run_check_sde(em: &mut Emitter, lat: &Arc<Lattice>) -> Result<Outcome> {
    let cfg = em.cfg;
    let g = cfg.group;
    let mut outcome = Outcome {
        pass: true,
        rows: Vec::new(),
    };
    let row = |quantity: String, beta: Option<f64>, value: f64, std_error: f64, z: Option<f64>, pass: bool| SummaryRow {
        command: "check-sde",
        group: g.to_string(),
        beta,
        sequence: String::new(),
        seed: Some(cfg.seed),
        quantity,
        value,
        std_error,
        z,
        pass: Some(pass),
    };

    let casimir = g.constants().casimir_f64();
    let sq = g.algebra_basis().square_sum();
    let max_defect = (0..g.n())
        .flat_map(|i| (0..g.n()).map(move |j| (i, j)))
        .map(|(i, j)| (sq[(i, j)] - if i == j { casimir } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    let pass = max_defect < BASIS_TOLERANCE;
    outcome.pass &= pass;
    outcome.rows.push(row("basis_square_sum".into(), None, max_defect, 0.0, None, pass));
    em.emit("basis", BasisBody { casimir, max_defect, pass })?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1 << 32);
    let cov = covariance_check(g, cfg.sde_samples, &mut rng);
    outcome.pass &= cov.pass;
    outcome.rows.push(row("covariance".into(), None, cov.max_abs_error, 0.0, Some(cov.max_z), cov.pass));
    em.emit("covariance", &cov)?;

    for k in 0..cfg.sde_pairs {
        let m = random_matrix(g, &mut rng);
        let n2 = random_matrix(g, &mut rng);
        let rep = magic_formula_check(&m, &n2, g, cfg.sde_h, cfg.sde_samples, &mut rng)?;
        for c in [&rep.first, &rep.second] {
            outcome.pass &= c.pass;
            outcome.rows.push(row(format!("{} #{k}", c.name), None, c.max_abs_error, 0.0, Some(c.max_z), c.pass));
        }
        em.emit("magic", &rep)?;
    }

    for &beta in &cfg.betas {
        let rep = stationarity_check(g, beta, lat.clone(), &cfg.chain(Scheme::Langevin), &cfg.chain(Scheme::Metropolis))?;
        outcome.pass &= rep.pass;
        for r in &rep.rows {
            outcome.rows.push(row(
                format!("stationarity {}", r.observable),
                Some(beta),
                r.extrapolated - r.metropolis.mean,
                r.extrapolated_sigma.hypot(r.metropolis.std_error),
                Some(r.z_extrapolated),
                r.pass,
            ));
        }
        em.emit("stationarity", &rep)?;
    }
    Ok(outcome)
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NumericalFault(_) => EXIT_NUMERICAL,
        Error::InsufficientSamples(_) => EXIT_STATISTICAL,
        _ => EXIT_CONFIG,
    }
}

fn write_csv(path: &PathBuf, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Config(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let print_only = cli.print_config;
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if print_only {
        print!("{}", cfg.to_toml());
        return EXIT_PASS;
    }
    let result = match &cfg.output {
        Some(path) => fs::File::create(path)
            .map_err(Error::from)
            .and_then(|f| {
                let mut w = std::io::BufWriter::new(f);
                let r = run(&cfg, &mut w);
                w.flush()?;
                r
            }),
        None => run(&cfg, &mut std::io::stdout().lock()),
    };
    match result.and_then(|o| {
        if let Some(path) = &cfg.csv {
            write_csv(path, &o.rows)?;
        }
        Ok(o)
    }) {
        Ok(o) if o.pass => EXIT_PASS,
        Ok(_) => EXIT_STATISTICAL,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
