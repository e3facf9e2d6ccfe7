//! The U(1) quadrature oracle against independent references: a brute-force sum
//! over the full angle grid, and the closed form for two-dimensional boxes, where
//! axial gauge makes the plaquette angles independent and
//! `E[W] = prod_p I_|n_p|(beta) / I_0(beta)` with `n_p` the winding number of `s`
//! around plaquette `p`.

use std::f64::consts::PI;

use masterloop::lattice::Lattice;
use masterloop::loops::{parse_sequence, LoopSequence, WindingTable};
use masterloop::oracle::{exact_phi_u1, gauge_fix, gauge_fix_from};
use num_complex::Complex64;

fn bessel_i(order: u32, x: f64) -> f64 {
    let mut term = (x / 2.0).powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..300 {
        term *= (x / 2.0).powi(2) / (k as f64 * (k + order) as f64);
        sum += term;
    }
    sum
}

/// Counterclockwise winding of `s` around the unit square with lower-left corner
/// `(x, y)`: the signed flux through the horizontal edges below it in its column.
fn winding(lat: &Lattice, t: &WindingTable, x: i64, y: i64) -> i64 {
    (lat.lo()[1]..=y)
        .map(|yy| {
            let v = lat.vertex_index(&[x, yy]).unwrap();
            lat.step(v, 0, true).map_or(0, |e| t.total(e.id()))
        })
        .sum()
}

fn closed_form_2d(lat: &Lattice, beta: f64, s: &LoopSequence) -> f64 {
    let t = WindingTable::new(s);
    let mut value = 1.0;
    for x in lat.lo()[0]..lat.hi()[0] {
        for y in lat.lo()[1]..lat.hi()[1] {
            let n = winding(lat, &t, x, y).unsigned_abs() as u32;
            value *= bessel_i(n, beta) / bessel_i(0, beta);
        }
    }
    value
}

fn brute_force(lat: &Lattice, beta: f64, s: &LoopSequence, n: usize) -> Complex64 {
    let spec = gauge_fix(lat).unwrap();
    let free = spec.free_edges();
    let t = WindingTable::new(s);
    let mut angle = vec![0.0; lat.num_edges()];
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for flat in 0..n.pow(free.len() as u32) {
        let mut r = flat;
        for &id in free {
            angle[id] = 2.0 * PI * (r % n) as f64 / n as f64;
            r /= n;
        }
        let action: f64 = lat
            .plaquettes()
            .iter()
            .map(|p| {
                p.edges()
                    .iter()
                    .map(|e| if e.is_positive() { angle[e.id()] } else { -angle[e.id()] })
                    .sum::<f64>()
                    .cos()
            })
            .sum();
        let w = beta * action;
        let phase: f64 = t.edges().map(|id| t.total(id) as f64 * angle[id]).sum();
        num += Complex64::from_polar(w.exp(), phase);
        den += w.exp();
    }
    num / den
}

const SEQUENCES: &[&str] = &[
    "(0,0): +x +y -x -y",
    "(0,0): +x +x +y -x -x -y",
    "(0,0): +x +y -x -y; (1,0): +x +y -x -y",
    "(0,0): +x +y -x -y +x +y -x -y",
    "(0,0): +x +y -x -y; (0,0): +x +y -x -y",
    "(1,0): +y +x +y -x -y -y -y -x +y +x",
    "(0,0): +x +y -x -y; (0,1): +y +x -y -x",
];

#[test]
fn matches_closed_form_on_planar_boxes() {
    let lat = Lattice::new(2, &[-1, -2], &[3, 2]).unwrap();
    for text in SEQUENCES {
        let s = parse_sequence(text, &lat).unwrap();
        for beta in [0.0, 0.5, 1.0, -1.3, 2.0] {
            let phi = exact_phi_u1(&lat, beta, &s, &gauge_fix(&lat).unwrap()).unwrap();
            let want = closed_form_2d(&lat, beta, &s);
            assert!(
                (phi.re - want).abs() < 1e-11 && phi.im.abs() < 1e-11,
                "{text} beta={beta}: {phi} vs {want}"
            );
        }
    }
}

#[test]
fn matches_brute_force_grid_sum() {
    let cases = [
        (Lattice::new(2, &[0, 0], &[2, 2]).unwrap(), "(0,0): +x +y -x -y"),
        (Lattice::new(2, &[0, 0], &[2, 2]).unwrap(), "(0,0): +x +x +y +y -x -x -y -y"),
        (Lattice::new(3, &[0, 0, 0], &[1, 1, 1]).unwrap(), "(0,0,0): +x +y +z -x -y -z"),
        (Lattice::new(3, &[0, 0, 0], &[1, 1, 1]).unwrap(), "(0,0,0): +x +y -x -y"),
    ];
    for (lat, text) in &cases {
        let s = parse_sequence(text, lat).unwrap();
        let n = 8;
        let spec = gauge_fix(lat).unwrap().with_points(n).unwrap();
        assert!(spec.free_edges().len() <= 5);
        for beta in [0.4, -0.9] {
            let phi = exact_phi_u1(lat, beta, &s, &spec).unwrap();
            let want = brute_force(lat, beta, &s, n);
            assert!((phi - want).norm() < 1e-12, "{text} beta={beta}: {phi} vs {want}");
        }
    }
}

#[test]
fn independent_of_gauge_tree_and_converged_in_grid() {
    let cube = Lattice::new(3, &[0, 0, 0], &[1, 1, 1]).unwrap();
    let planar = Lattice::new(2, &[0, 0], &[3, 2]).unwrap();
    let cases = [
        (&cube, "(0,0,0): +x +y +z -x -y -z; (0,0,0): +z +y -z -y"),
        (&cube, "(0,0,0): +x +y -x -y"),
        (&planar, "(1,0): +y +x +y -x -y -y -x +y +x -y"),
    ];
    for (lat, text) in cases {
        let s = parse_sequence(text, lat).unwrap();
        for beta in [-2.0, 0.7, 2.0] {
            let a = exact_phi_u1(lat, beta, &s, &gauge_fix(lat).unwrap()).unwrap();
            let root = lat.num_vertices() - 1;
            let b = exact_phi_u1(lat, beta, &s, &gauge_fix_from(lat, root).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-10, "{text} beta={beta}: {a} vs {b}");
            let coarse = gauge_fix(lat).unwrap().with_points(16).unwrap();
            let c = exact_phi_u1(lat, beta, &s, &coarse).unwrap();
            assert!((a - c).norm() < 1e-10, "{text} beta={beta}: 32 points {a} vs 16 points {c}");
            assert!(a.norm() > 1e-4, "{text}: {a}");
        }
    }
}
