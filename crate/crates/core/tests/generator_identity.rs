//! Deterministic check of the master loop equations, configuration by configuration.
//!
//! For `F = W_s / N^m` the Langevin generator is
//! `L F = sum_e sum_a [ F''_{e,a} / 2 + S'_{e,a} F'_{e,a} / 2 ]`, with derivatives
//! along `t -> exp(t v_a) Q_e`. Integrating `L F` against the invariant measure
//! gives zero, and the Ito computation behind the loop equations shows that the
//! per-configuration residual `LHS - RHS` equals `-k L F` with `k = 4` for SO(N)
//! and `k = 2` for U(N), SU(N). Here `L F` is computed independently by finite
//! differences, so both sides are deterministic and must agree to rounding.

use std::sync::Arc;

use masterloop::group::{group_exp, CMatrix, GroupKind, GroupSpec};
use masterloop::lattice::Lattice;
use masterloop::loops::{parse_sequence, LoopSequence};
use masterloop::observables::{action, wilson_sequence, ActionParams, Configuration};
use masterloop::verify::MasterEquation;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn generator(q: &Configuration, s: &LoopSequence, params: &ActionParams) -> Complex64 {
    let g = q.group();
    let n = g.n() as f64;
    let f = |c: &Configuration| wilson_sequence(c, s) / n.powi(s.count() as i32);
    let basis = g.algebra_basis();
    let mut edges: Vec<usize> = s.loops().iter().flat_map(|l| l.edges().iter().map(|e| e.id())).collect();
    edges.sort_unstable();
    edges.dedup();
    let t = 1e-3;
    let mut total = Complex64::new(0.0, 0.0);
    let mut work = q.clone();
    for id in edges {
        let base = q.links()[id].clone();
        for v in basis.vectors() {
            let x = masterloop::group::AlgebraElement::new(v.clone(), g).unwrap();
            let mut at = |k: f64| -> (Complex64, f64) {
                let m: CMatrix = group_exp(&x.scaled(k * t)).unwrap().into_matrix() * &base;
                work.set_link(id, masterloop::GroupElement::new(m, g).unwrap()).unwrap();
                (f(&work), action(&work, params))
            };
            let (f2, s2) = at(2.0);
            let (f1, s1) = at(1.0);
            let (f0, _) = at(0.0);
            let (fm1, sm1) = at(-1.0);
            let (fm2, sm2) = at(-2.0);
            let d1 = (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * t);
            let d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * t * t);
            let ds = (8.0 * (s1 - sm1) - (s2 - sm2)) / (12.0 * t);
            total += 0.5 * d2 + 0.5 * ds * d1;
        }
        work.set_link(id, masterloop::GroupElement::new(base, g).unwrap()).unwrap();
    }
    total
}

fn kappa(g: GroupSpec) -> f64 {
    match g.kind() {
        GroupKind::SO => 4.0,
        GroupKind::U | GroupKind::SU => 2.0,
    }
}

fn check(g: GroupSpec, lat: Arc<Lattice>, text: &str, beta: f64, seed: u64) {
    let s = parse_sequence(text, &lat).unwrap();
    let params = ActionParams::new(beta, g).unwrap();
    let eq = MasterEquation::new(g, &s, &lat).unwrap();
    let ev = eq.evaluator(beta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut largest = 0.0f64;
    for _ in 0..2 {
        let q = Configuration::haar(lat.clone(), g, &mut rng);
        let residual = ev.residual(&q);
        let lf = generator(&q, &s, &params);
        let want = -kappa(g) * lf;
        let scale = 1.0 + residual.norm();
        assert!(
            (residual - want).norm() < 1e-6 * scale,
            "{g} beta={beta} s={text}: residual {residual} vs -k L F {want}"
        );
        largest = largest.max(want.norm());
    }
    // for U(1) a loop times its reverse is identically 1
    let constant = g == GroupSpec::u(1).unwrap() && text == REVERSED_PAIR;
    assert!(constant || largest > 1e-3, "{g} s={text}: generator vanishes, the check is vacuous");
}

fn box2() -> Arc<Lattice> {
    Arc::new(Lattice::new(2, &[-3, -3], &[4, 4]).unwrap())
}

const PLAQUETTE: &str = "(0,0): +x +y -x -y";
const RECTANGLE: &str = "(0,0): +x +x +y -x -x -y";
const ADJACENT: &str = "(0,0): +x +y -x -y; (1,0): +x +y -x -y";
const DOUBLED: &str = "(0,0): +x +y -x -y +x +y -x -y";
const SAME_TWICE: &str = "(0,0): +x +y -x -y; (0,0): +x +y -x -y";
const FIGURE: &str = "(1,0): +y +x +y -x -y -y -y -x +y +x";
const REVERSED_PAIR: &str = "(0,0): +x +y -x -y; (0,0): +y +x -y -x";

fn groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::so(2).unwrap(),
        GroupSpec::so(3).unwrap(),
        GroupSpec::so(4).unwrap(),
        GroupSpec::u(1).unwrap(),
        GroupSpec::u(2).unwrap(),
        GroupSpec::u(3).unwrap(),
        GroupSpec::su(2).unwrap(),
        GroupSpec::su(3).unwrap(),
    ]
}

#[test]
fn plaquette_and_rectangle() {
    for (k, g) in groups().into_iter().enumerate() {
        check(g, box2(), PLAQUETTE, 0.37, k as u64);
        check(g, box2(), RECTANGLE, -0.6, 100 + k as u64);
    }
}

#[test]
fn two_loop_sequences() {
    for (k, g) in groups().into_iter().enumerate() {
        check(g, box2(), ADJACENT, 0.45, 200 + k as u64);
        check(g, box2(), SAME_TWICE, 0.8, 300 + k as u64);
        check(g, box2(), REVERSED_PAIR, -0.3, 350 + k as u64);
    }
}

#[test]
fn self_intersecting_loops() {
    for (k, g) in groups().into_iter().enumerate() {
        check(g, box2(), DOUBLED, 0.5, 400 + k as u64);
        check(g, box2(), FIGURE, 0.9, 500 + k as u64);
    }
}

#[test]
fn three_dimensional_loops() {
    let lat = Arc::new(Lattice::new(3, &[-1, -1, -1], &[2, 2, 2]).unwrap());
    for (k, g) in groups().into_iter().enumerate() {
        check(g, lat.clone(), "(0,0,0): +x +y +z -x -y -z", 0.6, 600 + k as u64);
        check(g, lat.clone(), "(0,0,0): +x +y -x -y; (0,0,0): +x +z -x -z", -0.4, 700 + k as u64);
    }
}
