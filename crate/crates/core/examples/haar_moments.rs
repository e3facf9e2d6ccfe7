//! Noise covariance and the two magic formulas for one group.
//!
//! cargo run --release --example haar_moments -- [group] [samples]

use masterloop::group::CMatrix;
use masterloop::verify::{covariance_check, magic_formula_check};
use masterloop::GroupSpec;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> masterloop::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group: GroupSpec = args.first().map_or("SU(3)", String::as_str).parse()?;
    let samples: usize = args.get(1).map_or(100_000, |s| s.parse().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let k = group.constants();
    println!("{group}: c = {}, lambda = {}, nu = {}, mu = {}", k.casimir, k.lambda, k.nu, k.mu);

    let cov = covariance_check(group, samples, &mut rng);
    println!("covariance   max z {:.2}  max error {:.2e}  pass {}", cov.max_z, cov.max_abs_error, cov.pass);

    let n = group.n();
    let random = |rng: &mut ChaCha8Rng| -> CMatrix {
        DMatrix::from_fn(n, n, |_, _| {
            let im: f64 = if group.is_real() { 0.0 } else { rng.sample(StandardNormal) };
            Complex64::new(rng.sample(StandardNormal), im)
        })
    };
    let m = random(&mut rng);
    let m2 = random(&mut rng);
    let rep = magic_formula_check(&m, &m2, group, 0.01, samples, &mut rng)?;
    for c in [&rep.first, &rep.second] {
        println!("{:<12} max z {:.2}  max error {:.2e}  pass {}", c.name, c.max_z, c.max_abs_error, c.pass);
    }
    Ok(())
}
