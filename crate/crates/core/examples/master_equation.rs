//! Verifies one master loop equation by Metropolis sampling and prints every term.
//!
//! cargo run --release --example master_equation -- [group] [beta] [sequence] [samples]

use std::sync::Arc;

use masterloop::lattice::Lattice;
use masterloop::loops::{padded_box, parse_sequence};
use masterloop::sampler::{ChainConfig, Scheme};
use masterloop::verify::verify_cell;
use masterloop::GroupSpec;

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group: GroupSpec = args.first().map_or("SU(2)", String::as_str).parse()?;
    let beta: f64 = args.get(1).map_or(0.5, |s| s.parse().unwrap());
    let text = args.get(2).map_or("(0,0): +x +x +y -x -x -y", String::as_str);
    let samples: usize = args.get(3).map_or(10_000, |s| s.parse().unwrap());

    let lat = Arc::new(Lattice::from_spec(&padded_box(&[text], 2, 1)?)?);
    let s = parse_sequence(text, &lat)?;
    let mut cfg = ChainConfig::new(Scheme::Metropolis, 1.2, samples, 0);
    cfg.n_chains = 4;
    cfg.burn_in = 500;

    let cell = verify_cell(group, beta, &s, lat, &cfg, &[21, 22, 23])?;
    let r = &cell.reports[0];
    println!("{group} beta={beta} s={}", r.s);
    println!("LHS  {:.4} x phi(s) = {:.4} x ({:.5} +- {:.5})", r.lhs_prefactor, r.lhs_prefactor, r.lhs.mean, r.lhs.std_error);
    for t in &r.rhs_terms {
        println!(
            "  {:<4} {:>8.4} x sum over {:>3} = {:>9.5} +- {:.5}",
            t.name, t.coefficient, t.set_size, t.estimate.mean, t.estimate.std_error
        );
    }
    for r in &cell.reports {
        println!(
            "seed {}: residual {:+.5} +- {:.5} (z = {:.2}), imaginary {:+.1e}, n_eff {}",
            r.seed,
            r.residual,
            r.residual_sigma,
            r.z_score(),
            r.residual_im,
            r.n_effective
        );
    }
    println!("{} of 3 seeds above 3 sigma: {}", cell.exceedances, if cell.pass { "pass" } else { "fail" });
    Ok(())
}
