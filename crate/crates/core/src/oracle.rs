//! Exact U(1) loop expectations on small boxes by gauge-fixed quadrature.
//!
//! Links on a spanning tree are set to 1. Every remaining edge gets an angle on
//! the periodic trapezoid grid `2 pi k / n`. The weighted sums over the grid are
//! contracted by variable elimination, so the cost is governed by the widest
//! intermediate table rather than by `n^(free edges)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::loops::{LoopSequence, WindingTable};

pub const DEFAULT_QUADRATURE_POINTS: usize = 32;
pub const MIN_QUADRATURE_POINTS: usize = 8;
/// Largest intermediate table, in entries.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    n_points: usize,
    gauge_tree: Vec<usize>,
    free_edges: Vec<usize>,
    table_budget: usize,
}

impl QuadratureSpec {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Sorted ids of the edges fixed to the identity.
    pub fn gauge_tree(&self) -> &[usize] {
        &self.gauge_tree
    }

    /// Sorted ids of the integrated edges.
    pub fn free_edges(&self) -> &[usize] {
        &self.free_edges
    }

    pub fn table_budget(&self) -> usize {
        self.table_budget
    }

    pub fn with_points(mut self, n_points: usize) -> Result<Self> {
        if n_points < MIN_QUADRATURE_POINTS {
            return Err(Error::Config(format!(
                "n_points = {n_points} < {MIN_QUADRATURE_POINTS}"
            )));
        }
        self.n_points = n_points;
        Ok(self)
    }

    pub fn with_table_budget(mut self, entries: usize) -> Self {
        self.table_budget = entries;
        self
    }
}

/// Breadth-first spanning tree from vertex 0, the lexicographically smallest.
pub fn gauge_fix(lat: &Lattice) -> Result<QuadratureSpec> {
    gauge_fix_from(lat, 0)
}

/// Breadth-first spanning tree from `root`. Neighbors are visited by axis,
/// forward before backward.
pub fn gauge_fix_from(lat: &Lattice, root: usize) -> Result<QuadratureSpec> {
    let nv = lat.num_vertices();
    if root >= nv {
        return Err(Error::InvalidLattice(format!("root {root} outside {nv} vertices")));
    }
    let mut seen = vec![false; nv];
    let mut tree = Vec::with_capacity(nv - 1);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        for mu in 0..lat.dim() {
            for fwd in [true, false] {
                if let Some(e) = lat.step(v, mu, fwd) {
                    let w = lat.end(e);
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(e.id());
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    if tree.len() != nv - 1 {
        return Err(Error::InvalidLattice("vertex graph is disconnected".into()));
    }
    tree.sort_unstable();
    let in_tree: BTreeSet<usize> = tree.iter().copied().collect();
    let free_edges = (0..lat.num_edges()).filter(|id| !in_tree.contains(id)).collect();
    Ok(QuadratureSpec {
        n_points: DEFAULT_QUADRATURE_POINTS,
        gauge_tree: tree,
        free_edges,
        table_budget: DEFAULT_TABLE_BUDGET,
    })
}

/// `phi(s) = E[W_s]` for U(1) at inverse coupling `beta`.
pub fn exact_phi_u1(lat: &Lattice, beta: f64, s: &LoopSequence, spec: &QuadratureSpec) -> Result<Complex64> {
    if spec.n_points < MIN_QUADRATURE_POINTS {
        return Err(Error::Config(format!("n_points = {} < {MIN_QUADRATURE_POINTS}", spec.n_points)));
    }
    if !beta.is_finite() {
        return Err(Error::Config(format!("beta = {beta}")));
    }
    for l in s.loops() {
        if let Some(e) = l.edges().iter().find(|e| !lat.contains_edge(**e)) {
            return Err(Error::EdgeNotInLattice(format!("{e}")));
        }
    }
    let var_of: BTreeMap<usize, usize> = spec.free_edges.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let n = spec.n_points;
    let angles: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();

    // shifted by |beta| so every entry is at most 1
    let by_flux: Vec<Complex64> = angles
        .iter()
        .map(|a| Complex64::new((beta * a.cos() - beta.abs()).exp(), 0.0))
        .collect();
    let mut weights = Vec::new();
    for p in lat.plaquettes() {
        let mut signed: Vec<(usize, i64)> = p
            .edges()
            .iter()
            .filter_map(|e| var_of.get(&e.id()).map(|&v| (v, if e.is_positive() { 1 } else { -1 })))
            .collect();
        signed.sort_unstable();
        let vars: Vec<usize> = signed.iter().map(|&(v, _)| v).collect();
        let table = tabulate(vars.len(), n, |idx| {
            let m: i64 = signed.iter().zip(idx).map(|(&(_, t), &k)| t * k as i64).sum();
            by_flux[m.rem_euclid(n as i64) as usize]
        });
        weights.push(Factor { vars, table });
    }

    let mut observable = Vec::new();
    let windings = WindingTable::new(s);
    for id in windings.edges() {
        let t = windings.total(id);
        if t == 0 {
            continue;
        }
        if let Some(&v) = var_of.get(&id) {
            let table = (0..n).map(|k| Complex64::from_polar(1.0, t as f64 * angles[k])).collect();
            observable.push(Factor { vars: vec![v], table });
        }
    }

    let num_vars = spec.free_edges.len();
    let z = contract(weights.clone(), num_vars, n, spec.table_budget)?;
    weights.extend(observable);
    let zw = contract(weights, num_vars, n, spec.table_budget)?;
    match (zw, z) {
        (None, _) => Ok(Complex64::new(0.0, 0.0)),
        (Some(_), None) => Err(Error::NumericalFault("partition function underflowed".into())),
        (Some((a, la)), Some((b, lb))) => Ok(a / b * (la - lb).exp()),
    }
}

#[derive(Clone, Debug)]
struct Factor {
    /// Sorted variable indices; the table is row-major over them.
    vars: Vec<usize>,
    table: Vec<Complex64>,
}

fn tabulate(arity: usize, n: usize, f: impl Fn(&[usize]) -> Complex64) -> Vec<Complex64> {
    let size = n.pow(arity as u32);
    let mut idx = vec![0usize; arity];
    let mut out = Vec::with_capacity(size);
    for _ in 0..size {
        out.push(f(&idx));
        for k in (0..arity).rev() {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// Sums the product of `factors` over all assignments. Returns `(mantissa, log scale)`,
/// or `None` when the sum is exactly zero.
fn contract(mut factors: Vec<Factor>, num_vars: usize, n: usize, budget: usize) -> Result<Option<(Complex64, f64)>> {
    let mut log_scale = 0.0;
    let mut remaining: BTreeSet<usize> = (0..num_vars).collect();
    while !remaining.is_empty() {
        // min-degree by resulting scope size, ties to the smallest index
        let (v, scope) = remaining
            .iter()
            .map(|&v| {
                let scope: BTreeSet<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&v))
                    .flat_map(|f| f.vars.iter().copied())
                    .filter(|&u| u != v)
                    .collect();
                (v, scope)
            })
            .min_by_key(|(v, scope)| (scope.len(), *v))
            .expect("nonempty");
        remaining.remove(&v);
        let size = (n as u128).checked_pow(scope.len() as u32).unwrap_or(u128::MAX);
        if size > budget as u128 {
            return Err(Error::QuadratureBudget(format!(
                "eliminating an edge angle needs a table of {n}^{} entries, budget {budget}",
                scope.len()
            )));
        }
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        let mut out = eliminate(&touching, &scope.into_iter().collect::<Vec<_>>(), n);
        let peak = out.table.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return Ok(None);
        }
        out.table.iter_mut().for_each(|z| *z /= peak);
        log_scale += peak.ln();
        factors.push(out);
    }
    let mut total = Complex64::new(1.0, 0.0);
    for f in factors {
        total *= f.table[0];
    }
    if total == Complex64::new(0.0, 0.0) {
        return Ok(None);
    }
    Ok(Some((total, log_scale)))
}

fn eliminate(factors: &[Factor], scope: &[usize], n: usize) -> Factor {
    // per factor: its stride for each scope position (0 when absent) and for the
    // eliminated variable
    let mut strides = vec![vec![0usize; scope.len()]; factors.len()];
    let mut v_stride = vec![0usize; factors.len()];
    for (f, factor) in factors.iter().enumerate() {
        let mut stride = 1;
        for u in factor.vars.iter().rev() {
            match scope.iter().position(|w| w == u) {
                Some(k) => strides[f][k] = stride,
                None => v_stride[f] = stride,
            }
            stride *= n;
        }
    }
    let size = n.pow(scope.len() as u32);
    let table: Vec<Complex64> = (0..size)
        .into_par_iter()
        .map_init(
            || vec![0usize; factors.len()],
            |base, flat| {
                base.iter_mut().for_each(|b| *b = 0);
                let mut r = flat;
                for k in (0..scope.len()).rev() {
                    let i = r % n;
                    r /= n;
                    for (b, s) in base.iter_mut().zip(&strides) {
                        *b += i * s[k];
                    }
                }
                let mut sum = Complex64::new(0.0, 0.0);
                for kv in 0..n {
                    let mut prod = Complex64::new(1.0, 0.0);
                    for ((f, b), vs) in factors.iter().zip(base.iter()).zip(&v_stride) {
                        prod *= f.table[b + kv * vs];
                    }
                    sum += prod;
                }
                sum
            },
        )
        .collect();
    Factor { vars: scope.to_vec(), table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::parse_sequence;

    fn bessel_i(order: u32, x: f64) -> f64 {
        // power series; fine for the small arguments used here
        let mut term = (x / 2.0).powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..200 {
            term *= (x / 2.0).powi(2) / (k as f64 * (k + order) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn tree_sizes_match_vertex_counts() {
        let lat = Lattice::new(2, &[0, 0], &[1, 1]).unwrap();
        let spec = gauge_fix(&lat).unwrap();
        assert_eq!((lat.num_edges(), spec.gauge_tree().len(), spec.free_edges().len()), (4, 3, 1));
        let lat = Lattice::new(2, &[0, 0], &[2, 2]).unwrap();
        let spec = gauge_fix(&lat).unwrap();
        assert_eq!((lat.num_edges(), spec.gauge_tree().len(), spec.free_edges().len()), (12, 8, 4));
        assert!(gauge_fix_from(&lat, 9).is_err());
    }

    #[test]
    fn plaquette_at_zero_coupling_vanishes() {
        let lat = Lattice::new(2, &[0, 0], &[1, 1]).unwrap();
        let s = parse_sequence("(0,0): +x +y -x -y", &lat).unwrap();
        let phi = exact_phi_u1(&lat, 0.0, &s, &gauge_fix(&lat).unwrap()).unwrap();
        assert!(phi.norm() < 1e-14, "{phi}");
    }

    #[test]
    fn single_plaquette_is_a_bessel_ratio() {
        let lat = Lattice::new(2, &[0, 0], &[1, 1]).unwrap();
        let s = parse_sequence("(0,0): +x +y -x -y", &lat).unwrap();
        let phi = exact_phi_u1(&lat, 1.0, &s, &gauge_fix(&lat).unwrap()).unwrap();
        let want = bessel_i(1, 1.0) / bessel_i(0, 1.0);
        assert!((phi.re - want).abs() < 1e-13 && phi.im.abs() < 1e-13, "{phi} vs {want}");
        assert!((phi.re - 0.44639).abs() < 1e-5);
    }

    #[test]
    fn loop_times_reverse_is_one() {
        let lat = Lattice::new(2, &[0, 0], &[2, 2]).unwrap();
        let s = parse_sequence("(0,0): +x +y -x -y; (0,0): +y +x -y -x", &lat).unwrap();
        let phi = exact_phi_u1(&lat, 0.7, &s, &gauge_fix(&lat).unwrap()).unwrap();
        assert!((phi - 1.0).norm() < 1e-12, "{phi}");
    }

    #[test]
    fn budget_is_enforced() {
        let lat = Lattice::new(2, &[0, 0], &[3, 3]).unwrap();
        let s = parse_sequence("(0,0): +x +y -x -y", &lat).unwrap();
        let spec = gauge_fix(&lat).unwrap().with_table_budget(10);
        assert!(matches!(exact_phi_u1(&lat, 0.5, &s, &spec), Err(Error::QuadratureBudget(_))));
        assert!(gauge_fix(&lat).unwrap().with_points(4).is_err());
    }
}
