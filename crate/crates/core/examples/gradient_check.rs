//! Compares the analytic action gradient with a finite difference along random directions.
//!
//! cargo run --example gradient_check -- [group] [beta]

use std::sync::Arc;

use masterloop::group::{group_exp, inner_product};
use masterloop::lattice::{DirectedEdge, Lattice};
use masterloop::observables::{action, half_gradient};
use masterloop::{ActionParams, Configuration, GroupElement, GroupSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group: GroupSpec = args.first().map_or("SU(3)", String::as_str).parse()?;
    let beta: f64 = args.get(1).map_or(0.8, |s| s.parse().unwrap());

    let lat = Arc::new(Lattice::new(2, &[0, 0], &[2, 2])?);
    let params = ActionParams::new(beta, group)?;
    let basis = group.algebra_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut q = Configuration::haar(lat.clone(), group, &mut rng);
    let t = 1e-3;

    println!("{:>5} {:>14} {:>14} {:>9}", "edge", "analytic", "difference", "relative");
    for _ in 0..10 {
        let id = rng.random_range(0..lat.num_edges());
        let e = DirectedEdge::positive(id);
        let x = basis.sample_gaussian(&mut rng);
        let grad = half_gradient(&q, e, &params) * q.link(e).adjoint() * Complex64::new(2.0, 0.0);
        let analytic = inner_product(&grad, x.matrix())?;
        let base = q.links()[id].clone();
        let mut at = |k: f64| -> masterloop::Result<f64> {
            let m = group_exp(&x.scaled(k * t))?.into_matrix() * &base;
            q.set_link(id, GroupElement::new(m, group)?)?;
            Ok(action(&q, &params))
        };
        let fd = (8.0 * (at(1.0)? - at(-1.0)?) - (at(2.0)? - at(-2.0)?)) / (12.0 * t);
        q.set_link(id, GroupElement::new(base, group)?)?;
        println!("{id:>5} {analytic:>14.9} {fd:>14.9} {:>9.1e}", (fd - analytic).abs() / analytic.abs());
    }
    Ok(())
}
