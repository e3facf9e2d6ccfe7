//! Gauge configurations, the Wilson action and its gradient, and Wilson loops.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{
    check_manifold, haar_sample, project_matrix, retract, unitarity_defect, AlgebraElement, CMatrix,
    GroupElement, GroupKind, GroupSpec, MANIFOLD_TOLERANCE,
};
use crate::lattice::{DirectedEdge, Lattice, Plaquette};
use crate::loops::{Loop, LoopSequence};

/// Inverse coupling and structure group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionParams {
    beta: f64,
    group: GroupSpec,
}

impl ActionParams {
    pub fn new(beta: f64, group: GroupSpec) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Config(format!("beta must be finite, got {beta}")));
        }
        Ok(ActionParams { beta, group })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// `N beta`, the prefactor of the action.
    pub fn coupling(&self) -> f64 {
        self.group.n() as f64 * self.beta
    }
}

/// One group matrix per positive edge. Negative edges evaluate to the adjoint.
#[derive(Clone, Debug)]
pub struct Configuration {
    lattice: Arc<Lattice>,
    group: GroupSpec,
    links: Vec<CMatrix>,
    adjoints: Vec<CMatrix>,
}

impl Configuration {
    pub fn identity(lattice: Arc<Lattice>, group: GroupSpec) -> Self {
        let links = vec![CMatrix::identity(group.n(), group.n()); lattice.num_edges()];
        Configuration::from_links_unchecked(lattice, group, links)
    }

    /// Independent Haar matrices on every edge.
    pub fn haar<R: Rng + ?Sized>(lattice: Arc<Lattice>, group: GroupSpec, rng: &mut R) -> Self {
        let links = (0..lattice.num_edges())
            .map(|_| haar_sample(group, rng).into_matrix())
            .collect();
        Configuration::from_links_unchecked(lattice, group, links)
    }

    pub fn from_links(lattice: Arc<Lattice>, group: GroupSpec, links: Vec<CMatrix>) -> Result<Self> {
        if links.len() != lattice.num_edges() {
            return Err(Error::InvalidLattice(format!(
                "{} links for {} edges",
                links.len(),
                lattice.num_edges()
            )));
        }
        for q in &links {
            if q.shape() != (group.n(), group.n()) {
                return Err(Error::DimensionMismatch {
                    expected: group.n(),
                    rows: q.nrows(),
                    cols: q.ncols(),
                });
            }
            check_manifold(q, group)?;
        }
        Ok(Configuration::from_links_unchecked(lattice, group, links))
    }

    pub(crate) fn from_links_unchecked(lattice: Arc<Lattice>, group: GroupSpec, links: Vec<CMatrix>) -> Self {
        let adjoints = links.iter().map(|q| q.adjoint()).collect();
        Configuration {
            lattice,
            group,
            links,
            adjoints,
        }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// Matrices of the positive edges, indexed by edge id.
    pub fn links(&self) -> &[CMatrix] {
        &self.links
    }

    /// `Q_e`, with `Q_e = Q_{e^-1}^*` on negative edges.
    pub fn link(&self, e: DirectedEdge) -> &CMatrix {
        if e.is_positive() {
            &self.links[e.id()]
        } else {
            &self.adjoints[e.id()]
        }
    }

    pub fn set_link(&mut self, id: usize, q: GroupElement) -> Result<()> {
        if q.group() != self.group {
            return Err(Error::InvalidGroup(format!("{} link in a {} configuration", q.group(), self.group)));
        }
        if id >= self.links.len() {
            return Err(Error::EdgeNotInLattice(format!("e{id}")));
        }
        self.set_link_unchecked(id, q.into_matrix());
        Ok(())
    }

    pub(crate) fn set_link_unchecked(&mut self, id: usize, q: CMatrix) {
        self.adjoints[id] = q.adjoint();
        self.links[id] = q;
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.links.iter().map(unitarity_defect).fold(0.0, f64::max)
    }

    /// Retracts every link whose defect exceeds the manifold tolerance.
    /// Returns how many links were touched.
    pub fn reproject(&mut self) -> usize {
        let mut touched = 0;
        for id in 0..self.links.len() {
            if unitarity_defect(&self.links[id]) > MANIFOLD_TOLERANCE {
                let q = retract(&self.links[id], self.group);
                self.set_link_unchecked(id, q);
                touched += 1;
            }
        }
        touched
    }

    pub fn check(&self) -> Result<()> {
        self.links.iter().try_for_each(|q| check_manifold(q, self.group))
    }
}

/// Ordered product `Q_{e_1} ... Q_{e_n}`.
pub fn path_product(q: &Configuration, edges: &[DirectedEdge]) -> CMatrix {
    let n = q.group.n();
    let Some((first, rest)) = edges.split_first() else {
        return CMatrix::identity(n, n);
    };
    let mut acc = q.link(*first).clone();
    let mut tmp = CMatrix::zeros(n, n);
    for &e in rest {
        acc.mul_to(q.link(e), &mut tmp);
        std::mem::swap(&mut acc, &mut tmp);
    }
    acc
}

pub fn plaquette_matrix(q: &Configuration, p: &Plaquette) -> CMatrix {
    path_product(q, p.edges())
}

/// `N beta Re sum_{p in P+} Tr Q_p`.
pub fn action(q: &Configuration, params: &ActionParams) -> f64 {
    let total: f64 = q
        .lattice
        .plaquettes()
        .iter()
        .map(|p| plaquette_matrix(q, p).trace().re)
        .sum();
    params.coupling() * total
}

/// Sum over `p` starting with `e` of `Q_{e_2} Q_{e_3} Q_{e_4}`, so that
/// `Q_p = Q_e * staple` for each term.
pub fn staple_sum(q: &Configuration, e: DirectedEdge) -> CMatrix {
    let n = q.group.n();
    let mut sum = CMatrix::zeros(n, n);
    for p in q.lattice.plaquettes_through(e).expect("edge of this lattice") {
        sum += path_product(q, &p.edges()[1..]);
    }
    sum
}

/// The part of the action that depends on `Q_e`: `N beta Re Tr(Q_e * staple_sum)`.
pub fn local_action(q: &Configuration, e: DirectedEdge, staples: &CMatrix, params: &ActionParams) -> f64 {
    params.coupling() * trace_of_product(q.link(e), staples).re
}

pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t
}

/// Half gradient `-(N beta/4) sum_{p > e} (Q_p - Q_p^*) Q_e`, with the
/// trace correction for SU(N). Defined for either orientation of `e`.
pub fn half_gradient(q: &Configuration, e: DirectedEdge, params: &ActionParams) -> CMatrix {
    let n = q.group.n();
    let qe = q.link(e);
    let mut sum = CMatrix::zeros(n, n);
    for p in q.lattice.plaquettes_through(e).expect("edge of this lattice") {
        let qp = qe * path_product(q, &p.edges()[1..]);
        let mut d = &qp - qp.adjoint();
        if q.group.kind() == GroupKind::SU {
            let tr = d.trace() / n as f64;
            for i in 0..n {
                d[(i, i)] -= tr;
            }
        }
        sum += d;
    }
    sum * qe * Complex64::new(-params.coupling() / 4.0, 0.0)
}

/// The same half gradient written as `(N beta/2) sum_{p > e} proj(Q_p^*) Q_e`.
pub fn half_gradient_projected(q: &Configuration, e: DirectedEdge, params: &ActionParams) -> CMatrix {
    drift_matrix(q, e, params) * q.link(e)
}

/// Langevin drift `A_e = (half gradient) Q_e^{-1}`, an algebra element.
pub fn drift(q: &Configuration, e: DirectedEdge, params: &ActionParams) -> AlgebraElement {
    AlgebraElement::from_matrix_unchecked(drift_matrix(q, e, params), q.group)
}

pub(crate) fn drift_matrix(q: &Configuration, e: DirectedEdge, params: &ActionParams) -> CMatrix {
    let staples = staple_sum(q, e);
    let qs = q.link(e) * staples;
    project_matrix(&qs.adjoint(), q.group) * Complex64::new(params.coupling() / 2.0, 0.0)
}

pub fn wilson_loop(q: &Configuration, l: &Loop) -> Complex64 {
    path_product(q, l.edges()).trace()
}

/// Product of the Wilson loops; `1` for the empty sequence.
pub fn wilson_sequence(q: &Configuration, s: &LoopSequence) -> Complex64 {
    s.loops().iter().map(|l| wilson_loop(q, l)).product()
}

/// `Q_e -> g_{u(e)} Q_e g_{v(e)}^{-1}`.
pub fn gauge_transform(q: &Configuration, g: &[GroupElement]) -> Result<Configuration> {
    let lat = &q.lattice;
    if g.len() != lat.num_vertices() {
        return Err(Error::InvalidLattice(format!(
            "{} gauge matrices for {} vertices",
            g.len(),
            lat.num_vertices()
        )));
    }
    let links = lat
        .positive_edges()
        .map(|e| g[lat.start(e)].matrix() * q.link(e) * g[lat.end(e)].matrix().adjoint())
        .collect();
    Ok(Configuration::from_links_unchecked(lat.clone(), q.group, links))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_exp, inner_product, AlgebraBasis};
    use crate::loops::parse_loop;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn groups() -> Vec<GroupSpec> {
        vec![
            GroupSpec::so(2).unwrap(),
            GroupSpec::so(3).unwrap(),
            GroupSpec::u(1).unwrap(),
            GroupSpec::u(2).unwrap(),
            GroupSpec::su(2).unwrap(),
            GroupSpec::su(3).unwrap(),
        ]
    }

    fn box2(n: i64) -> Arc<Lattice> {
        Arc::new(Lattice::new(2, &[0, 0], &[n - 1, n - 1]).unwrap())
    }

    fn close(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_configuration_values() {
        let g = GroupSpec::su(3).unwrap();
        let q = Configuration::identity(box2(3), g);
        let params = ActionParams::new(0.5, g).unwrap();
        assert!((action(&q, &params) - 18.0).abs() < 1e-12);
        assert_eq!(action(&q, &ActionParams::new(0.0, g).unwrap()), 0.0);
        let p = q.lattice().plaquettes()[0];
        assert!(close(&plaquette_matrix(&q, &p), &CMatrix::identity(3, 3)) < 1e-15);
        let l = Loop::from_plaquette(&p);
        assert!((wilson_loop(&q, &l) - 3.0).norm() < 1e-15);
        let s = LoopSequence::new(vec![l.clone(), l.clone(), l]);
        assert!((wilson_sequence(&q, &s) - 27.0).norm() < 1e-12);
        assert_eq!(wilson_sequence(&q, &LoopSequence::default()), Complex64::new(1.0, 0.0));
        for e in q.lattice().positive_edges() {
            assert!(half_gradient(&q, e, &params).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn plaquette_trace_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in groups() {
            let q = Configuration::haar(box2(3), g, &mut rng);
            for p in q.lattice().plaquettes() {
                let t = plaquette_matrix(&q, p).trace();
                for r in 1..4 {
                    assert!((plaquette_matrix(&q, &p.rotate(r)).trace() - t).norm() < 1e-12);
                }
                assert!((plaquette_matrix(&q, &p.reverse()).trace() - t.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn u1_single_plaquette_action() {
        let g = GroupSpec::u(1).unwrap();
        let lat = box2(2);
        let angles = [0.3, -1.1, 0.7, 2.0];
        let links = angles.iter().map(|&a| CMatrix::from_element(1, 1, Complex64::from_polar(1.0, a))).collect();
        let q = Configuration::from_links(lat.clone(), g, links).unwrap();
        let p = lat.plaquettes()[0];
        // theta of e1 + e2 - e3^-1 - e4^-1 in edge-id order
        let phase: f64 = p
            .edges()
            .iter()
            .map(|e| if e.is_positive() { angles[e.id()] } else { -angles[e.id()] })
            .sum();
        let params = ActionParams::new(1.0, g).unwrap();
        assert!((action(&q, &params) - phase.cos()).abs() < 1e-12);
    }

    #[test]
    fn wilson_loop_bounds_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lat = Arc::new(Lattice::new(2, &[-1, -1], &[3, 3]).unwrap());
        let l = parse_loop("(0,0): +x +x +y -x +y -x -y -y", &lat).unwrap();
        for g in groups() {
            let q = Configuration::haar(lat.clone(), g, &mut rng);
            let w = wilson_loop(&q, &l);
            assert!(w.norm() <= g.n() as f64 + 1e-12);
            let mut rot = l.edges().to_vec();
            rot.rotate_left(3);
            assert!((path_product(&q, &rot).trace() - w).norm() < 1e-12);
            if g.is_real() {
                assert!(w.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lat = Arc::new(Lattice::new(3, &[0, 0, 0], &[2, 2, 2]).unwrap());
        for g in groups() {
            let params = ActionParams::new(0.7, g).unwrap();
            let basis = AlgebraBasis::new(g);
            let mut q = Configuration::haar(lat.clone(), g, &mut rng);
            for id in [0usize, 5, 13] {
                let e = DirectedEdge::positive(id);
                let grad = half_gradient(&q, e, &params) * q.link(e).adjoint() * Complex64::new(2.0, 0.0);
                for _ in 0..20 {
                    let x = basis.sample_gaussian(&mut rng);
                    let t = 1e-5;
                    let base = q.links()[id].clone();
                    let mut shifted = |s: f64| {
                        let m = group_exp(&x.scaled(s)).unwrap().into_matrix() * &base;
                        q.set_link_unchecked(id, m);
                        action(&q, &params)
                    };
                    let fd = (shifted(t) - shifted(-t)) / (2.0 * t);
                    q.set_link_unchecked(id, base);
                    let exact = inner_product(&grad, x.matrix()).unwrap();
                    assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "{g}: {fd} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn projected_form_and_conjugation_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lat = Arc::new(Lattice::new(3, &[0, 0, 0], &[2, 2, 2]).unwrap());
        for g in groups() {
            let params = ActionParams::new(-1.3, g).unwrap();
            let q = Configuration::haar(lat.clone(), g, &mut rng);
            for e in lat.positive_edges() {
                let a = half_gradient(&q, e, &params);
                assert!(close(&a, &half_gradient_projected(&q, e, &params)) < 1e-10);
                let b = half_gradient(&q, e.reverse(), &params);
                assert!(close(&a, &b.adjoint()) < 1e-10);
                let x = drift(&q, e, &params);
                assert!(AlgebraElement::new(x.into_matrix(), g).is_ok());
            }
        }
    }

    #[test]
    fn gauge_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lat = Arc::new(Lattice::new(2, &[-1, -1], &[3, 3]).unwrap());
        let l = parse_loop("(0,0): +x +x +y -x +y -x -y -y", &lat).unwrap();
        for g in groups() {
            let params = ActionParams::new(0.9, g).unwrap();
            let q = Configuration::haar(lat.clone(), g, &mut rng);
            let gauge: Vec<GroupElement> = (0..lat.num_vertices()).map(|_| haar_sample(g, &mut rng)).collect();
            let qt = gauge_transform(&q, &gauge).unwrap();
            assert!((action(&q, &params) - action(&qt, &params)).abs() < 1e-10);
            assert!((wilson_loop(&q, &l) - wilson_loop(&qt, &l)).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_links() {
        let g = GroupSpec::su(2).unwrap();
        let lat = box2(2);
        let mut links = vec![CMatrix::identity(2, 2); 4];
        links[2] *= Complex64::new(0.0, 1.0);
        assert!(Configuration::from_links(lat.clone(), g, links).is_err());
        assert!(Configuration::from_links(lat, g, vec![CMatrix::identity(2, 2); 3]).is_err());
    }
}
