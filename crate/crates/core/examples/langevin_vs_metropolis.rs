//! Langevin at h and h/2 against the Metropolis reference on a 3x3 box.
//!
//! cargo run --release --example langevin_vs_metropolis -- [group] [beta] [h] [samples]

use std::sync::Arc;
use std::time::Instant;

use masterloop::lattice::Lattice;
use masterloop::sampler::{ChainConfig, Scheme};
use masterloop::verify::stationarity_check;
use masterloop::GroupSpec;

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group: GroupSpec = args.first().map_or("SU(2)", String::as_str).parse()?;
    let beta: f64 = args.get(1).map_or(0.3, |s| s.parse().unwrap());
    let h: f64 = args.get(2).map_or(0.1, |s| s.parse().unwrap());
    let samples: usize = args.get(3).map_or(20_000, |s| s.parse().unwrap());

    let lat = Arc::new(Lattice::new(2, &[0, 0], &[2, 2])?);
    let mut langevin = ChainConfig::new(Scheme::Langevin, h, samples, 11);
    langevin.thinning = (0.5 / h).ceil() as usize;
    langevin.burn_in = 10 * langevin.thinning;
    langevin.n_chains = 4;
    let mut metropolis = ChainConfig::new(Scheme::Metropolis, 1.2, samples, 12);
    metropolis.n_chains = 4;

    let start = Instant::now();
    let rep = stationarity_check(group, beta, lat, &langevin, &metropolis)?;
    println!("{group} beta={beta} h={h} ({:.1?})", start.elapsed());
    println!("{:<16} {:>10} {:>10} {:>10} {:>10} {:>6} {:>6}", "observable", "metropolis", "L(h)", "L(h/2)", "extrap", "z", "pass");
    for r in &rep.rows {
        println!(
            "{:<16} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>6.2} {:>6}",
            r.observable, r.metropolis.mean, r.langevin_h.mean, r.langevin_half_h.mean, r.extrapolated, r.z_extrapolated, r.pass
        );
    }
    println!(
        "n_eff: metropolis {} langevin(h) {} langevin(h/2) {}",
        rep.rows[0].metropolis.n_effective, rep.rows[0].langevin_h.n_effective, rep.rows[0].langevin_half_h.n_effective
    );
    Ok(())
}
