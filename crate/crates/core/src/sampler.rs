//! Langevin and Metropolis chains targeting the lattice Yang-Mills measure.
//!
//! Chain `k` of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` with stream `k`, so chains are independent
//! and results do not depend on scheduling.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{check_manifold, AlgebraBasis, CMatrix, GroupSpec, MANIFOLD_TOLERANCE};
use crate::lattice::{BoxSpec, DirectedEdge, Lattice};
use crate::loops::LoopSequence;
use crate::observables::{drift_matrix, staple_sum, trace_of_product, wilson_sequence, ActionParams, Configuration};
use crate::stats::{MCEstimate, DEFAULT_BATCHES_PER_CHAIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Langevin,
    Metropolis,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "langevin" => Ok(Scheme::Langevin),
            "metropolis" => Ok(Scheme::Metropolis),
            other => Err(Error::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub scheme: Scheme,
    /// Langevin time step `h` or Metropolis proposal scale `eps`.
    pub step_size: f64,
    pub burn_in: usize,
    pub n_samples: usize,
    pub thinning: usize,
    pub seed: u64,
    pub n_chains: usize,
    /// Metropolis proposals per edge per sweep.
    pub hits: usize,
    pub batches_per_chain: usize,
}

impl ChainConfig {
    /// `h = 0.01` for Langevin, `eps = 0.5 / sqrt(N (1 + |beta|))` for Metropolis.
    pub fn default_step(scheme: Scheme, group: GroupSpec, beta: f64) -> f64 {
        match scheme {
            Scheme::Langevin => 0.01,
            Scheme::Metropolis => 0.5 / (group.n() as f64 * (1.0 + beta.abs())).sqrt(),
        }
    }

    pub fn new(scheme: Scheme, step_size: f64, n_samples: usize, seed: u64) -> Self {
        ChainConfig {
            scheme,
            step_size,
            burn_in: 1000,
            n_samples,
            thinning: 1,
            seed,
            n_chains: 1,
            hits: 1,
            batches_per_chain: DEFAULT_BATCHES_PER_CHAIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::Config(format!("step size must be positive, got {}", self.step_size)));
        }
        if self.n_samples == 0 || self.thinning == 0 || self.n_chains == 0 || self.hits == 0 {
            return Err(Error::Config(
                "n_samples, thinning, n_chains and hits must be at least 1".into(),
            ));
        }
        if self.batches_per_chain == 0 || self.n_chains * self.batches_per_chain < 2 {
            return Err(Error::Config("need at least 2 batches in total".into()));
        }
        Ok(())
    }
}

/// One geodesic Euler step `Q_e <- exp(sqrt(h) xi_e + h A_e) Q_e` on every
/// edge, with all drifts taken from the configuration before the step.
pub fn langevin_step<R: Rng + ?Sized>(
    q: &mut Configuration,
    h: f64,
    params: &ActionParams,
    basis: &AlgebraBasis,
    rng: &mut R,
) -> Result<()> {
    let lat = q.lattice().clone();
    let drifts: Vec<CMatrix> = lat.positive_edges().map(|e| drift_matrix(q, e, params)).collect();
    let n = q.group().n();
    let mut noise = CMatrix::zeros(n, n);
    for (id, a) in drifts.into_iter().enumerate() {
        basis.sample_into(rng, h.sqrt(), &mut noise);
        let x = noise.clone() + a * Complex64::new(h, 0.0);
        let step = x.exp();
        let updated = step * &q.links()[id];
        if updated.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalFault(format!("non-finite link after Langevin step on e{id}")));
        }
        q.set_link_unchecked(id, updated);
    }
    q.reproject();
    Ok(())
}

/// One Metropolis sweep over the positive edges in id order with `hits`
/// proposals `exp(eps xi) Q_e` per edge. Returns the number of accepted proposals.
pub fn metropolis_sweep<R: Rng + ?Sized>(
    q: &mut Configuration,
    eps: f64,
    hits: usize,
    params: &ActionParams,
    basis: &AlgebraBasis,
    rng: &mut R,
) -> usize {
    let n = q.group().n();
    let mut xi = CMatrix::zeros(n, n);
    let mut accepted = 0;
    for id in 0..q.lattice().num_edges() {
        let e = DirectedEdge::positive(id);
        let staples = staple_sum(q, e);
        let mut current = trace_of_product(q.link(e), &staples).re;
        for _ in 0..hits {
            basis.sample_into(rng, eps, &mut xi);
            let proposal = xi.exp() * q.link(e);
            let proposed = trace_of_product(&proposal, &staples).re;
            let delta = params.coupling() * (proposed - current);
            let u: f64 = rng.random();
            if delta >= 0.0 || u < delta.exp() {
                q.set_link_unchecked(id, proposal);
                current = proposed;
                accepted += 1;
            }
        }
    }
    q.reproject();
    accepted
}

/// A single chain: configuration, parameters and its own random stream.
#[derive(Clone, Debug)]
pub struct Chain {
    config: Configuration,
    params: ActionParams,
    scheme: Scheme,
    step_size: f64,
    hits: usize,
    basis: AlgebraBasis,
    rng: ChaCha8Rng,
    sweeps: u64,
    accepted: u64,
    proposed: u64,
}

impl Chain {
    /// Hot start: independent Haar links drawn from the chain's own stream.
    pub fn new(lattice: Arc<Lattice>, params: ActionParams, cfg: &ChainConfig, chain_index: usize) -> Chain {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(chain_index as u64);
        let config = Configuration::haar(lattice, params.group(), &mut rng);
        Chain {
            config,
            params,
            scheme: cfg.scheme,
            step_size: cfg.step_size,
            hits: cfg.hits,
            basis: params.group().algebra_basis(),
            rng,
            sweeps: 0,
            accepted: 0,
            proposed: 0,
        }
    }

    /// One Langevin step or one Metropolis sweep.
    pub fn advance(&mut self) -> Result<()> {
        match self.scheme {
            Scheme::Langevin => {
                langevin_step(&mut self.config, self.step_size, &self.params, &self.basis, &mut self.rng)?
            }
            Scheme::Metropolis => {
                let acc = metropolis_sweep(
                    &mut self.config,
                    self.step_size,
                    self.hits,
                    &self.params,
                    &self.basis,
                    &mut self.rng,
                );
                self.accepted += acc as u64;
                self.proposed += (self.hits * self.config.lattice().num_edges()) as u64;
            }
        }
        self.sweeps += 1;
        Ok(())
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }

    /// Metropolis acceptance rate so far (1 for Langevin).
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            group: self.params.group(),
            beta: self.params.beta(),
            lattice: self.config.lattice().spec(),
            scheme: self.scheme,
            step_size: self.step_size,
            hits: self.hits,
            sweeps: self.sweeps,
            accepted: self.accepted,
            proposed: self.proposed,
            links: self
                .config
                .links()
                .iter()
                .map(|q| q.transpose().iter().flat_map(|z| [z.re, z.im]).collect())
                .collect(),
            rng: self.rng.clone(),
        }
    }

    pub fn restore(cp: &Checkpoint) -> Result<Chain> {
        let lattice = Arc::new(Lattice::from_spec(&cp.lattice)?);
        let n = cp.group.n();
        let links = cp
            .links
            .iter()
            .map(|flat| {
                if flat.len() != 2 * n * n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        rows: flat.len() / 2,
                        cols: 1,
                    });
                }
                // stored row-major; from_fn takes (row, col)
                Ok(CMatrix::from_fn(n, n, |i, j| {
                    Complex64::new(flat[2 * (i * n + j)], flat[2 * (i * n + j) + 1])
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let params = ActionParams::new(cp.beta, cp.group)?;
        Ok(Chain {
            config: Configuration::from_links(lattice, cp.group, links)?,
            params,
            scheme: cp.scheme,
            step_size: cp.step_size,
            hits: cp.hits,
            basis: cp.group.algebra_basis(),
            rng: cp.rng.clone(),
            sweeps: cp.sweeps,
            accepted: cp.accepted,
            proposed: cp.proposed,
        })
    }
}

/// Resumable chain snapshot. Links are row-major `[re, im, re, im, ...]` lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub group: GroupSpec,
    pub beta: f64,
    pub lattice: BoxSpec,
    pub scheme: Scheme,
    pub step_size: f64,
    pub hits: usize,
    pub sweeps: u64,
    pub accepted: u64,
    pub proposed: u64,
    pub links: Vec<Vec<f64>>,
    pub rng: ChaCha8Rng,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Config(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad checkpoint: {e}")))
    }
}

/// Raw per-chain sample series from a run: `series[chain][observable][sample]`.
#[derive(Clone, Debug)]
pub struct ChainSamples {
    pub series: Vec<Vec<Vec<Complex64>>>,
    pub acceptance: Vec<f64>,
}

impl ChainSamples {
    pub fn n_observables(&self) -> usize {
        self.series.first().map_or(0, |c| c.len())
    }

    /// Per-chain series of observable `k`.
    pub fn observable(&self, k: usize) -> Vec<Vec<Complex64>> {
        self.series.iter().map(|c| c[k].clone()).collect()
    }

    pub fn estimate(&self, k: usize, batches_per_chain: usize) -> Result<MCEstimate> {
        MCEstimate::from_chains(&self.observable(k), batches_per_chain)
    }

    pub fn mean_acceptance(&self) -> f64 {
        self.acceptance.iter().sum::<f64>() / self.acceptance.len().max(1) as f64
    }
}

/// Runs `cfg.n_chains` independent chains in parallel and records
/// `observe(Q, out)` after burn-in every `thinning` steps.
pub fn sample_chains<F>(
    cfg: &ChainConfig,
    lattice: Arc<Lattice>,
    params: ActionParams,
    n_observables: usize,
    observe: F,
) -> Result<ChainSamples>
where
    F: Fn(&Configuration, &mut [Complex64]) + Sync,
{
    cfg.validate()?;
    let results: Vec<Result<(Vec<Vec<Complex64>>, f64)>> = (0..cfg.n_chains)
        .into_par_iter()
        .map(|k| {
            let mut chain = Chain::new(lattice.clone(), params, cfg, k);
            for _ in 0..cfg.burn_in {
                chain.advance()?;
            }
            let mut series = vec![Vec::with_capacity(cfg.n_samples); n_observables];
            let mut buf = vec![Complex64::new(0.0, 0.0); n_observables];
            for _ in 0..cfg.n_samples {
                for _ in 0..cfg.thinning {
                    chain.advance()?;
                }
                observe(chain.configuration(), &mut buf);
                for (s, v) in series.iter_mut().zip(&buf) {
                    s.push(*v);
                }
            }
            for q in chain.configuration().links() {
                check_manifold(q, params.group()).map_err(|e| {
                    Error::NumericalFault(format!("chain {k} left the group (tolerance {MANIFOLD_TOLERANCE:e}): {e}"))
                })?;
            }
            Ok((series, chain.acceptance_rate()))
        })
        .collect();
    let mut out = ChainSamples {
        series: Vec::with_capacity(cfg.n_chains),
        acceptance: Vec::with_capacity(cfg.n_chains),
    };
    for r in results {
        let (series, acc) = r?;
        out.series.push(series);
        out.acceptance.push(acc);
    }
    Ok(out)
}

/// Estimates `phi(s) = E[W_s / N^m]` for each sequence.
pub fn run_chain(
    cfg: &ChainConfig,
    lattice: Arc<Lattice>,
    params: ActionParams,
    observables: &[LoopSequence],
) -> Result<Vec<MCEstimate>> {
    let n = params.group().n() as f64;
    let samples = sample_chains(cfg, lattice, params, observables.len(), |q, out| {
        for (o, s) in out.iter_mut().zip(observables) {
            *o = wilson_sequence(q, s) / n.powi(s.count() as i32);
        }
    })?;
    (0..observables.len())
        .map(|k| samples.estimate(k, cfg.batches_per_chain))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::unitarity_defect;
    use crate::observables::action;

    fn lat(n: i64) -> Arc<Lattice> {
        Arc::new(Lattice::new(2, &[0, 0], &[n - 1, n - 1]).unwrap())
    }

    #[test]
    fn zero_noise_zero_beta_leaves_configuration() {
        let g = GroupSpec::su(2).unwrap();
        let params = ActionParams::new(0.0, g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut q = Configuration::haar(lat(3), g, &mut rng);
        let before = q.clone();
        // h tiny: the step is exp(O(1e-10)) and stays within 1e-9 of the start
        langevin_step(&mut q, 1e-20, &params, &g.algebra_basis(), &mut rng).unwrap();
        for (a, b) in q.links().iter().zip(before.links()) {
            assert!((a - b).iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn steps_stay_on_the_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in [GroupSpec::so(3).unwrap(), GroupSpec::u(2).unwrap(), GroupSpec::su(3).unwrap()] {
            let params = ActionParams::new(0.8, g).unwrap();
            let basis = g.algebra_basis();
            let mut q = Configuration::haar(lat(3), g, &mut rng);
            for _ in 0..50 {
                langevin_step(&mut q, 0.05, &params, &basis, &mut rng).unwrap();
                assert!(q.max_unitarity_defect() < 1e-10);
                metropolis_sweep(&mut q, 0.7, 2, &params, &basis, &mut rng);
                assert!(q.max_unitarity_defect() < 1e-10);
            }
            q.check().unwrap();
        }
    }

    #[test]
    fn beta_zero_accepts_everything() {
        let g = GroupSpec::u(2).unwrap();
        let params = ActionParams::new(0.0, g).unwrap();
        let mut cfg = ChainConfig::new(Scheme::Metropolis, 0.5, 1, 3);
        cfg.burn_in = 10;
        let mut chain = Chain::new(lat(3), params, &cfg, 0);
        for _ in 0..10 {
            chain.advance().unwrap();
        }
        assert_eq!(chain.acceptance_rate(), 1.0);
        let params = ActionParams::new(1.0, g).unwrap();
        let mut chain = Chain::new(lat(3), params, &cfg, 0);
        for _ in 0..50 {
            chain.advance().unwrap();
        }
        let r = chain.acceptance_rate();
        assert!(r > 0.0 && r < 1.0, "{r}");
    }

    #[test]
    fn metropolis_local_action_difference_is_exact() {
        let g = GroupSpec::su(2).unwrap();
        let params = ActionParams::new(0.9, g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = Configuration::haar(lat(3), g, &mut rng);
        let e = DirectedEdge::positive(4);
        let staples = staple_sum(&q, e);
        let mut q2 = q.clone();
        let new = crate::group::haar_sample(g, &mut rng).into_matrix();
        q2.set_link_unchecked(4, new.clone());
        let local = params.coupling() * (trace_of_product(&new, &staples).re - trace_of_product(q.link(e), &staples).re);
        assert!((local - (action(&q2, &params) - action(&q, &params))).abs() < 1e-10);
    }

    #[test]
    fn same_seed_same_stream() {
        let g = GroupSpec::su(2).unwrap();
        let params = ActionParams::new(0.5, g).unwrap();
        let p = LoopSequence::single(crate::loops::Loop::from_plaquette(&lat(3).plaquettes()[0]));
        let mut cfg = ChainConfig::new(Scheme::Metropolis, 0.8, 64, 11);
        cfg.burn_in = 5;
        cfg.n_chains = 2;
        let run = || {
            sample_chains(&cfg, lat(3), params, 1, |q, out| out[0] = wilson_sequence(q, &p)).unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.series, b.series);
        assert_ne!(a.series[0], a.series[1]);
    }

    #[test]
    fn constant_observable() {
        let g = GroupSpec::so(3).unwrap();
        let params = ActionParams::new(0.5, g).unwrap();
        let mut cfg = ChainConfig::new(Scheme::Langevin, 0.02, 64, 2);
        cfg.burn_in = 2;
        let est = run_chain(&cfg, lat(3), params, &[LoopSequence::default()]).unwrap();
        assert_eq!(est[0].mean, 1.0);
        assert_eq!(est[0].std_error, 0.0);
    }

    #[test]
    fn checkpoint_round_trip_resumes_identically() {
        let g = GroupSpec::u(2).unwrap();
        let params = ActionParams::new(0.4, g).unwrap();
        let cfg = ChainConfig::new(Scheme::Metropolis, 0.6, 1, 21);
        let mut chain = Chain::new(lat(3), params, &cfg, 3);
        for _ in 0..5 {
            chain.advance().unwrap();
        }
        let dir = std::env::temp_dir().join(format!("masterloop-cp-{}.json", std::process::id()));
        chain.checkpoint().save(&dir).unwrap();
        let mut resumed = Chain::restore(&Checkpoint::load(&dir).unwrap()).unwrap();
        std::fs::remove_file(&dir).ok();
        for _ in 0..5 {
            chain.advance().unwrap();
            resumed.advance().unwrap();
        }
        assert_eq!(chain.configuration().links(), resumed.configuration().links());
        assert_eq!(chain.sweeps(), resumed.sweeps());
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = ChainConfig::new(Scheme::Langevin, 0.0, 10, 0);
        assert!(cfg.validate().is_err());
        cfg.step_size = 0.1;
        cfg.validate().unwrap();
        cfg.batches_per_chain = 1;
        assert!(cfg.validate().is_err());
        assert!("gibbs".parse::<Scheme>().is_err());
        assert!(unitarity_defect(&CMatrix::identity(2, 2)) == 0.0);
    }
}
