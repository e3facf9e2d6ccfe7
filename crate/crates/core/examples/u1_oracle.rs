//! Exact U(1) Wilson loop expectations by quadrature, against Metropolis.
//!
//! cargo run --release --example u1_oracle -- [beta] [sequence]

use std::sync::Arc;

use masterloop::lattice::Lattice;
use masterloop::loops::{padded_box, parse_sequence};
use masterloop::oracle::{exact_phi_u1, gauge_fix};
use masterloop::sampler::{run_chain, ChainConfig, Scheme};
use masterloop::{ActionParams, GroupSpec};

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let beta: f64 = args.first().map_or(1.0, |s| s.parse().unwrap());
    let text = args.get(1).map_or("(0,0): +x +x +y -x -x -y", String::as_str);

    let lat = Arc::new(Lattice::from_spec(&padded_box(&[text], 2, 0)?)?);
    let s = parse_sequence(text, &lat)?;
    let spec = gauge_fix(&lat)?;
    println!("{} edges, {} free after gauge fixing", lat.num_edges(), spec.free_edges().len());
    for n in [16, 32, 64] {
        let phi = exact_phi_u1(&lat, beta, &s, &spec.clone().with_points(n)?)?;
        println!("{n:>3} points: phi = {:.12} {:+.1e}i", phi.re, phi.im);
    }

    let mut cfg = ChainConfig::new(Scheme::Metropolis, 2.0, 25_000, 5);
    cfg.n_chains = 4;
    let est = &run_chain(&cfg, lat, ActionParams::new(beta, GroupSpec::u(1)?)?, &[s])?[0];
    println!("Metropolis: {:.5} +- {:.5}", est.mean, est.std_error);
    Ok(())
}
