//! Statistical verification of the master loop equations and of the
//! stochastic identities behind them.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::group::{ratio_to_f64, CMatrix, GroupKind, GroupSpec};
use crate::lattice::Lattice;
use crate::loops::{build_operation_sets, lengths_and_windings, Loop, LoopSequence, OpKind};
use crate::observables::{path_product, wilson_loop, ActionParams, Configuration};
use crate::sampler::{sample_chains, ChainConfig, Scheme};
use crate::stats::{combined_sigma, z, MCEstimate};

/// Significance threshold for every statistical comparison.
pub const SIGMA_THRESHOLD: f64 = 3.0;

/// `ratio * beta^beta_power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub ratio: Ratio<i64>,
    pub beta_power: u8,
}

impl Coefficient {
    fn new(numer: i64, denom: i64, beta_power: u8) -> Self {
        Coefficient {
            ratio: Ratio::new(numer, denom),
            beta_power,
        }
    }

    pub fn value(&self, beta: f64) -> f64 {
        ratio_to_f64(self.ratio) * beta.powi(self.beta_power as i32)
    }
}

/// Right-hand side coefficients, one per operation multiset that appears.
pub fn coefficient_table(g: GroupSpec) -> Vec<(OpKind, Coefficient)> {
    let n = g.n() as i64;
    use OpKind::*;
    match g.kind() {
        GroupKind::SO => vec![
            (DeformMinus, Coefficient::new(n, 1, 1)),
            (DeformPlus, Coefficient::new(-n, 1, 1)),
            (SplitMinus, Coefficient::new(n, 1, 0)),
            (SplitPlus, Coefficient::new(-n, 1, 0)),
            (TwistMinus, Coefficient::new(1, 1, 0)),
            (TwistPlus, Coefficient::new(-1, 1, 0)),
            (MergeMinus, Coefficient::new(1, n, 0)),
            (MergePlus, Coefficient::new(-1, n, 0)),
        ],
        GroupKind::SU => vec![
            (DeformMinus, Coefficient::new(n, 2, 1)),
            (DeformPlus, Coefficient::new(-n, 2, 1)),
            (SplitMinus, Coefficient::new(n, 1, 0)),
            (SplitPlus, Coefficient::new(-n, 1, 0)),
            (ExpandMinus, Coefficient::new(n, 2, 1)),
            (ExpandPlus, Coefficient::new(-n, 2, 1)),
            (MergeUMinus, Coefficient::new(1, n, 0)),
            (MergeUPlus, Coefficient::new(-1, n, 0)),
        ],
        GroupKind::U => vec![
            (DeformMinus, Coefficient::new(n, 2, 1)),
            (DeformPlus, Coefficient::new(-n, 2, 1)),
            (SplitMinus, Coefficient::new(n, 1, 0)),
            (SplitPlus, Coefficient::new(-n, 1, 0)),
            (MergeUMinus, Coefficient::new(1, n, 0)),
            (MergeUPlus, Coefficient::new(-1, n, 0)),
        ],
    }
}

/// `(N-1)|s|` for SO, `N|s| - l(s)/N` for SU, `N|s|` for U.
pub fn lhs_prefactor(g: GroupSpec, s: &LoopSequence) -> Ratio<i64> {
    let n = g.n() as i64;
    let (len, _, ell) = lengths_and_windings(s);
    let len = len as i64;
    match g.kind() {
        GroupKind::SO => Ratio::from_integer((n - 1) * len),
        GroupKind::SU => Ratio::from_integer(n * len) - Ratio::new(ell, n),
        GroupKind::U => Ratio::from_integer(n * len),
    }
}

/// The master equation for one `(group, s)` with its operation multisets.
#[derive(Clone, Debug)]
pub struct MasterEquation {
    pub group: GroupSpec,
    pub s: LoopSequence,
    pub lhs_prefactor: Ratio<i64>,
    pub terms: Vec<EquationTerm>,
}

#[derive(Clone, Debug)]
pub struct EquationTerm {
    pub kind: OpKind,
    pub coefficient: Coefficient,
    pub sequences: Vec<LoopSequence>,
}

impl MasterEquation {
    /// Builds the operation sets. Fails if `s` is not padded inside `lat`.
    pub fn new(group: GroupSpec, s: &LoopSequence, lat: &Lattice) -> Result<Self> {
        let ops = build_operation_sets(s, lat)?;
        let terms = coefficient_table(group)
            .into_iter()
            .map(|(kind, coefficient)| EquationTerm {
                kind,
                coefficient,
                sequences: ops.get(kind).to_vec(),
            })
            .collect();
        Ok(MasterEquation {
            group,
            s: s.clone(),
            lhs_prefactor: lhs_prefactor(group, s),
            terms,
        })
    }

    /// Per-configuration evaluator that shares Wilson loops across terms.
    pub fn evaluator(&self, beta: f64) -> ResidualEvaluator {
        let mut index: HashMap<Loop, usize> = HashMap::new();
        let mut loops = Vec::new();
        let mut intern = |s: &LoopSequence| -> Vec<usize> {
            s.loops()
                .iter()
                .map(|l| {
                    *index.entry(l.clone()).or_insert_with(|| {
                        loops.push(l.clone());
                        loops.len() - 1
                    })
                })
                .collect()
        };
        let target = intern(&self.s);
        let terms = self
            .terms
            .iter()
            .filter(|t| !t.sequences.is_empty())
            .map(|t| {
                let seqs = t.sequences.iter().map(&mut intern).collect();
                (t.coefficient.value(beta), seqs)
            })
            .collect();
        ResidualEvaluator {
            n: self.group.n() as f64,
            lhs: ratio_to_f64(self.lhs_prefactor),
            loops,
            target,
            terms,
        }
    }
}

/// Evaluates, on one configuration: `W_s/N^m`, each nonempty term's
/// `sum W_s'/N^m'`, and the residual `LHS - RHS`.
#[derive(Clone, Debug)]
pub struct ResidualEvaluator {
    n: f64,
    lhs: f64,
    loops: Vec<Loop>,
    target: Vec<usize>,
    terms: Vec<(f64, Vec<Vec<usize>>)>,
}

impl ResidualEvaluator {
    /// Slots written by [`evaluate`](Self::evaluate): target, one per nonempty term, residual.
    pub fn width(&self) -> usize {
        self.terms.len() + 2
    }

    pub fn distinct_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn evaluate(&self, q: &Configuration, out: &mut [Complex64]) {
        let w: Vec<Complex64> = self.loops.iter().map(|l| wilson_loop(q, l) / self.n).collect();
        let phi = |idx: &[usize]| idx.iter().map(|&k| w[k]).product::<Complex64>();
        let target = phi(&self.target);
        out[0] = target;
        let mut residual = target * self.lhs;
        for (k, (c, seqs)) in self.terms.iter().enumerate() {
            let sum: Complex64 = seqs.iter().map(|s| phi(s)).sum();
            out[k + 1] = sum;
            residual -= sum * *c;
        }
        out[self.terms.len() + 1] = residual;
    }

    /// Residual alone.
    pub fn residual(&self, q: &Configuration) -> Complex64 {
        let mut out = vec![Complex64::new(0.0, 0.0); self.width()];
        self.evaluate(q, &mut out);
        out[self.width() - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub name: String,
    pub coefficient: f64,
    pub set_size: usize,
    /// Estimate of `sum over the set of phi(s')`.
    pub estimate: MCEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MasterEquationReport {
    pub group: GroupSpec,
    pub beta: f64,
    pub s: String,
    pub lhs_prefactor: f64,
    /// Estimate of `phi(s)`.
    pub lhs: MCEstimate,
    pub rhs_terms: Vec<TermReport>,
    /// Real part of the mean per-sample residual `LHS - RHS`.
    pub residual: f64,
    pub residual_sigma: f64,
    pub residual_im: f64,
    pub residual_im_sigma: f64,
    pub n_effective: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub step_sizes: Vec<f64>,
}

impl MasterEquationReport {
    pub fn z_score(&self) -> f64 {
        z(self.residual, self.residual_sigma)
    }

    pub fn passes(&self) -> bool {
        self.z_score() < SIGMA_THRESHOLD
    }
}

/// Estimates of every column of the evaluator output from one sampler run.
fn estimate_equation(
    eq: &MasterEquation,
    beta: f64,
    lat: Arc<Lattice>,
    cfg: &ChainConfig,
) -> Result<Vec<MCEstimate>> {
    let params = ActionParams::new(beta, eq.group)?;
    let ev = eq.evaluator(beta);
    let samples = sample_chains(cfg, lat, params, ev.width(), |q, out| ev.evaluate(q, out))?;
    (0..ev.width()).map(|k| samples.estimate(k, cfg.batches_per_chain)).collect()
}

/// Checks the master equation for `(group, beta, s)` on one seed.
///
/// With the Metropolis scheme this estimates everything on one run. With the
/// Langevin scheme it runs at `h` and `h/2` and reports the extrapolation
/// `2 R(h/2) - R(h)` for every column.
pub fn verify_master_equation(
    group: GroupSpec,
    beta: f64,
    s: &LoopSequence,
    lat: Arc<Lattice>,
    cfg: &ChainConfig,
) -> Result<MasterEquationReport> {
    let eq = MasterEquation::new(group, s, &lat)?;
    let (cols, step_sizes) = match cfg.scheme {
        Scheme::Metropolis => (estimate_equation(&eq, beta, lat.clone(), cfg)?, vec![cfg.step_size]),
        Scheme::Langevin => {
            let coarse = estimate_equation(&eq, beta, lat.clone(), cfg)?;
            let mut half = cfg.clone();
            half.step_size /= 2.0;
            half.burn_in *= 2;
            half.thinning *= 2;
            let fine = estimate_equation(&eq, beta, lat.clone(), &half)?;
            let cols = coarse.iter().zip(&fine).map(|(c, f)| extrapolate(c, f)).collect();
            (cols, vec![cfg.step_size, half.step_size])
        }
    };
    let mut rhs_terms = Vec::new();
    let mut col = 1;
    for t in &eq.terms {
        let estimate = if t.sequences.is_empty() {
            MCEstimate::exact(Complex64::new(0.0, 0.0))
        } else {
            col += 1;
            cols[col - 1].clone()
        };
        rhs_terms.push(TermReport {
            name: t.kind.label().to_string(),
            coefficient: t.coefficient.value(beta),
            set_size: t.sequences.len(),
            estimate,
        });
    }
    let res = cols.last().expect("residual column");
    Ok(MasterEquationReport {
        group,
        beta,
        s: s.to_text(&lat),
        lhs_prefactor: ratio_to_f64(eq.lhs_prefactor),
        lhs: cols[0].clone(),
        rhs_terms,
        residual: res.mean,
        residual_sigma: res.std_error,
        residual_im: res.mean_im,
        residual_im_sigma: res.std_error_im,
        n_effective: res.n_effective,
        seed: cfg.seed,
        scheme: cfg.scheme,
        step_sizes,
    })
}

/// `2 fine - coarse` with errors added in quadrature.
fn extrapolate(coarse: &MCEstimate, fine: &MCEstimate) -> MCEstimate {
    MCEstimate {
        mean: 2.0 * fine.mean - coarse.mean,
        mean_im: 2.0 * fine.mean_im - coarse.mean_im,
        std_error: (4.0 * fine.std_error.powi(2) + coarse.std_error.powi(2)).sqrt(),
        std_error_im: (4.0 * fine.std_error_im.powi(2) + coarse.std_error_im.powi(2)).sqrt(),
        n_samples: fine.n_samples + coarse.n_samples,
        n_effective: fine.n_effective.min(coarse.n_effective),
        batch_count: fine.batch_count.min(coarse.batch_count),
    }
}

/// Reports for one `(group, beta, s)` over several seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub reports: Vec<MasterEquationReport>,
    pub exceedances: usize,
    pub pass: bool,
}

/// Runs [`verify_master_equation`] once per seed. The cell fails when at
/// least two seeds exceed the threshold.
pub fn verify_cell(
    group: GroupSpec,
    beta: f64,
    s: &LoopSequence,
    lat: Arc<Lattice>,
    cfg: &ChainConfig,
    seeds: &[u64],
) -> Result<CellReport> {
    let reports = seeds
        .iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.seed = seed;
            verify_master_equation(group, beta, s, lat.clone(), &c)
        })
        .collect::<Result<Vec<_>>>()?;
    let exceedances = reports.iter().filter(|r| !r.passes()).count();
    Ok(CellReport {
        pass: exceedances < 2,
        reports,
        exceedances,
    })
}

/// `E[W_s / N^m]` from configurations; the empty sequence gives exactly 1.
pub fn phi_hat(samples: &[Configuration], s: &LoopSequence) -> Result<MCEstimate> {
    if s.is_empty() {
        return Ok(MCEstimate::exact(Complex64::new(1.0, 0.0)));
    }
    let first = samples
        .first()
        .ok_or_else(|| Error::InsufficientSamples("no configurations".into()))?;
    let n = first.group().n() as f64;
    let values: Vec<f64> = samples
        .iter()
        .map(|q| (crate::observables::wilson_sequence(q, s) / n.powi(s.count() as i32)).re)
        .collect();
    if values.len() == 1 {
        return Ok(MCEstimate::exact(Complex64::new(values[0], 0.0)));
    }
    MCEstimate::iid(&values)
}

/// Entrywise comparison of an empirical matrix average against a target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntrywiseCheck {
    pub name: String,
    pub max_z: f64,
    pub max_abs_error: f64,
    pub n_samples: usize,
    pub pass: bool,
}

/// Welford-free accumulator of per-entry means and variances.
struct EntryStats {
    sum: Vec<Complex64>,
    sum_sq_re: Vec<f64>,
    sum_sq_im: Vec<f64>,
    count: usize,
}

impl EntryStats {
    fn new(len: usize) -> Self {
        EntryStats {
            sum: vec![Complex64::new(0.0, 0.0); len],
            sum_sq_re: vec![0.0; len],
            sum_sq_im: vec![0.0; len],
            count: 0,
        }
    }

    fn push(&mut self, values: impl Iterator<Item = Complex64>) {
        for (k, v) in values.enumerate() {
            self.sum[k] += v;
            self.sum_sq_re[k] += v.re * v.re;
            self.sum_sq_im[k] += v.im * v.im;
        }
        self.count += 1;
    }

    fn compare(&self, name: &str, target: &[Complex64]) -> EntrywiseCheck {
        let n = self.count as f64;
        let mut max_z = 0.0f64;
        let mut max_abs_error = 0.0f64;
        for k in 0..self.sum.len() {
            let mean = self.sum[k] / n;
            let var_re = (self.sum_sq_re[k] / n - mean.re * mean.re).max(0.0) * n / (n - 1.0);
            let var_im = (self.sum_sq_im[k] / n - mean.im * mean.im).max(0.0) * n / (n - 1.0);
            let d = mean - target[k];
            max_z = max_z
                .max(z(d.re, (var_re / n).sqrt()))
                .max(z(d.im, (var_im / n).sqrt()));
            max_abs_error = max_abs_error.max(d.norm());
        }
        EntrywiseCheck {
            name: name.to_string(),
            max_z,
            max_abs_error,
            n_samples: self.count,
            pass: max_z < SIGMA_THRESHOLD,
        }
    }
}

/// Empirical `E[X^{ij} X^{kl}]` of unit-time increments against
/// `lambda d_il d_jk + nu d_ij d_kl + mu d_ik d_jl`.
///
/// The `N^4` entries are tested jointly, so the threshold is Bonferroni-adjusted
/// to keep the family-wise false alarm rate at the single-test 3 sigma level.
pub fn covariance_check<R: Rng + ?Sized>(g: GroupSpec, n_samples: usize, rng: &mut R) -> EntrywiseCheck {
    let n = g.n();
    let c = g.constants();
    let (lambda, nu, mu) = (c.lambda_f64(), c.nu_f64(), c.mu_f64());
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut target = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    target.push(Complex64::new(
                        lambda * d(i, l) * d(j, k) + nu * d(i, j) * d(k, l) + mu * d(i, k) * d(j, l),
                        0.0,
                    ));
                }
            }
        }
    }
    let basis = g.algebra_basis();
    let mut stats = EntryStats::new(target.len());
    let mut x = CMatrix::zeros(n, n);
    for _ in 0..n_samples {
        basis.sample_into(rng, 1.0, &mut x);
        let x = &x;
        stats.push((0..n.pow(4)).map(|f| {
            let (i, j, k, l) = (f / n.pow(3), (f / n.pow(2)) % n, (f / n) % n, f % n);
            x[(i, j)] * x[(k, l)]
        }));
    }
    let mut check = stats.compare(&format!("covariance {g}"), &target);
    check.pass = check.max_z < bonferroni_threshold(2 * target.len());
    check
}

/// Two-sided normal quantile matching a 3 sigma family-wise level over `m` tests.
pub fn bonferroni_threshold(m: usize) -> f64 {
    let p = 2.0 * Normal::standard().cdf(-SIGMA_THRESHOLD) / m.max(1) as f64;
    -Normal::standard().inverse_cdf(p / 2.0)
}

/// Magic formula results for one `(M, N')` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicFormulaReport {
    pub group: GroupSpec,
    pub first: EntrywiseCheck,
    pub second: EntrywiseCheck,
}

/// `E[dB M dB]/h` against `lambda Tr(M) I + nu M + mu M^t` and
/// `E[Tr(dB M) Tr(dB N')]/h` against `lambda Tr(M N') + nu Tr M Tr N' + mu Tr(M N'^t)`.
pub fn magic_formula_check<R: Rng + ?Sized>(
    m: &CMatrix,
    n2: &CMatrix,
    g: GroupSpec,
    h: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<MagicFormulaReport> {
    let n = g.n();
    for a in [m, n2] {
        if a.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
    }
    let c = g.constants();
    let (lambda, nu, mu) = (c.lambda_f64(), c.nu_f64(), c.mu_f64());
    let eye = CMatrix::identity(n, n);
    let first_target = &eye * (m.trace() * lambda) + m * Complex64::new(nu, 0.0) + m.transpose() * Complex64::new(mu, 0.0);
    let second_target = (m * n2).trace() * lambda + m.trace() * n2.trace() * nu + (m * n2.transpose()).trace() * mu;

    let basis = g.algebra_basis();
    let mut first = EntryStats::new(n * n);
    let mut second = EntryStats::new(1);
    let mut db = CMatrix::zeros(n, n);
    for _ in 0..n_samples {
        basis.sample_into(rng, h.sqrt(), &mut db);
        let a = &db * m * &db * Complex64::new(1.0 / h, 0.0);
        first.push(a.transpose().iter().copied());
        let b = (&db * m).trace() * (&db * n2).trace() / h;
        second.push(std::iter::once(b));
    }
    let first_target: Vec<Complex64> = first_target.transpose().iter().copied().collect();
    let mut first = first.compare("dB M dB", &first_target);
    first.pass = first.max_z < bonferroni_threshold(2 * n * n);
    let mut second = second.compare("Tr(dB M) Tr(dB N)", &[second_target]);
    second.pass = second.max_z < bonferroni_threshold(2);
    Ok(MagicFormulaReport { group: g, first, second })
}

/// Per-observable comparison of Langevin (at `h` and `h/2`) against Metropolis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationarityRow {
    pub observable: String,
    pub metropolis: MCEstimate,
    pub langevin_h: MCEstimate,
    pub langevin_half_h: MCEstimate,
    /// `2 L(h/2) - L(h)`.
    pub extrapolated: f64,
    /// Combined error of the extrapolation and the Metropolis estimate.
    pub extrapolated_sigma: f64,
    pub z_extrapolated: f64,
    pub bias_h: f64,
    pub bias_half_h: f64,
    pub bias_shrinks: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub group: GroupSpec,
    pub beta: f64,
    pub h: f64,
    pub rows: Vec<StationarityRow>,
    pub pass: bool,
}

/// Observables compared by [`stationarity_check`]: first plaquette, a 2x1
/// rectangle at the lower corner (when it fits) and the plaquette average.
fn stationarity_basket(lat: &Lattice) -> Vec<(String, Vec<crate::lattice::DirectedEdge>)> {
    let mut out = Vec::new();
    let p = lat.plaquettes()[0];
    out.push(("plaquette".to_string(), p.edges().to_vec()));
    let lo = lat.lo().to_vec();
    let text = format!(
        "({}): +x +x +y -x -x -y",
        lo.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    );
    if let Ok(l) = crate::loops::parse_loop(&text, lat) {
        out.push(("rectangle_2x1".to_string(), l.edges().to_vec()));
    }
    out
}

/// Langevin at `h` and `h/2` against Metropolis on a basket of observables.
///
/// A row passes when the extrapolated Langevin value agrees with Metropolis
/// within 3 combined sigma and the bias at `h/2` is no larger than at `h`
/// up to 2 combined sigma.
pub fn stationarity_check(
    group: GroupSpec,
    beta: f64,
    lat: Arc<Lattice>,
    langevin: &ChainConfig,
    metropolis: &ChainConfig,
) -> Result<StationarityReport> {
    let params = ActionParams::new(beta, group)?;
    let basket = stationarity_basket(&lat);
    let n = group.n() as f64;
    let n_plaq = lat.plaquettes().len() as f64;
    let width = basket.len() + 1;
    let observe = |q: &Configuration, out: &mut [Complex64]| {
        for (k, (_, edges)) in basket.iter().enumerate() {
            out[k] = path_product(q, edges).trace() / n;
        }
        let total: Complex64 = q
            .lattice()
            .plaquettes()
            .iter()
            .map(|p| path_product(q, p.edges()).trace())
            .sum();
        out[basket.len()] = total / (n * n_plaq);
    };
    let run = |cfg: &ChainConfig| -> Result<Vec<MCEstimate>> {
        let samples = sample_chains(cfg, lat.clone(), params, width, observe)?;
        (0..width).map(|k| samples.estimate(k, cfg.batches_per_chain)).collect()
    };
    let met = run(metropolis)?;
    let mut half = langevin.clone();
    half.step_size /= 2.0;
    half.thinning *= 2;
    half.burn_in *= 2;
    let coarse = run(langevin)?;
    let fine = run(&half)?;
    let mut names: Vec<String> = basket.iter().map(|(name, _)| name.clone()).collect();
    names.push("action_density".into());
    let mut rows = Vec::new();
    for (k, name) in names.into_iter().enumerate() {
        for est in [&met[k], &coarse[k], &fine[k]] {
            if est.n_effective < 100 {
                return Err(Error::InsufficientSamples(format!(
                    "{name}: n_effective {} < 100",
                    est.n_effective
                )));
            }
        }
        let ex = extrapolate(&coarse[k], &fine[k]);
        let sigma = combined_sigma(&ex, &met[k]);
        let z_ex = z(ex.mean - met[k].mean, sigma);
        let bias_h = coarse[k].mean - met[k].mean;
        let bias_half_h = fine[k].mean - met[k].mean;
        let bias_shrinks = bias_half_h.abs() <= bias_h.abs() + 2.0 * combined_sigma(&fine[k], &met[k]);
        rows.push(StationarityRow {
            observable: name,
            metropolis: met[k].clone(),
            langevin_h: coarse[k].clone(),
            langevin_half_h: fine[k].clone(),
            extrapolated: ex.mean,
            extrapolated_sigma: sigma,
            z_extrapolated: z_ex,
            bias_h,
            bias_half_h,
            bias_shrinks,
            pass: z_ex < SIGMA_THRESHOLD && bias_shrinks,
        });
    }
    Ok(StationarityReport {
        group,
        beta,
        h: langevin.step_size,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}
