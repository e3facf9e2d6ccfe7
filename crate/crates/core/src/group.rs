//! Matrix groups SO(N), U(N), SU(N) and their Lie algebras.
//!
//! All matrices are stored as dense complex `N x N` arrays; SO(N) elements
//! simply carry zero imaginary parts. The Lie algebra inner product is the
//! Hilbert-Schmidt form `<X, Y> = Re Tr(X Y*)`, and every constant in this
//! module (the Casimir-type constant and the Ito covariance parameters) is
//! expressed relative to that normalization.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex square matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Largest tolerated `max |QQ* - I|` for a matrix to count as a group element.
pub const MANIFOLD_TOLERANCE: f64 = 1e-8;

/// Tolerance for the anti-Hermitian / traceless checks on algebra elements.
const ALGEBRA_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    SO,
    U,
    SU,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GroupKind::SO => "SO",
            GroupKind::U => "U",
            GroupKind::SU => "SU",
        };
        f.write_str(name)
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SO" => Ok(GroupKind::SO),
            "U" => Ok(GroupKind::U),
            "SU" => Ok(GroupKind::SU),
            other => Err(Error::InvalidGroup(format!("unknown group kind `{other}`"))),
        }
    }
}

/// Structure group and matrix size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    kind: GroupKind,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    kind: GroupKind,
    n: usize,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        GroupSpec::new(r.kind, r.n)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRepr {
            kind: g.kind,
            n: g.n,
        }
    }
}

impl GroupSpec {
    /// SO(1) and SU(1) are trivial groups and are rejected.
    pub fn new(kind: GroupKind, n: usize) -> Result<Self> {
        let min = match kind {
            GroupKind::SO | GroupKind::SU => 2,
            GroupKind::U => 1,
        };
        if n < min {
            return Err(Error::InvalidGroup(format!(
                "{kind}({n}) is not supported, need N >= {min}"
            )));
        }
        Ok(GroupSpec { kind, n })
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(GroupKind::SO, n)
    }

    pub fn u(n: usize) -> Result<Self> {
        Self::new(GroupKind::U, n)
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(GroupKind::SU, n)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether group elements have real entries.
    pub fn is_real(&self) -> bool {
        self.kind == GroupKind::SO
    }

    /// Real dimension of the Lie algebra.
    pub fn algebra_dim(&self) -> usize {
        let n = self.n;
        match self.kind {
            GroupKind::SO => n * (n - 1) / 2,
            GroupKind::U => n * n,
            GroupKind::SU => n * n - 1,
        }
    }

    pub fn constants(&self) -> GroupConstants {
        group_constants(*self)
    }

    pub fn algebra_basis(&self) -> AlgebraBasis {
        AlgebraBasis::new(*self)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            matrix: CMatrix::identity(self.n, self.n),
            group: *self,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.n)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `SO(3)`, `su(2)`, `U(1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::InvalidGroup(format!("expected KIND(N), got `{s}`")))?;
        if !s.ends_with(')') {
            return Err(Error::InvalidGroup(format!("expected KIND(N), got `{s}`")));
        }
        let kind: GroupKind = s[..open].parse()?;
        let n: usize = s[open + 1..s.len() - 1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("bad matrix size in `{s}`")))?;
        GroupSpec::new(kind, n)
    }
}

/// The constant `c` with `sum_a v_a^2 = c I` over an orthonormal algebra basis,
/// and the Ito parameters `(lambda, nu, mu)` of
/// `dB^{ij} dB^{kl} = (lambda d_il d_jk + nu d_ij d_kl + mu d_ik d_jl) dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupConstants {
    pub casimir: Ratio<i64>,
    pub lambda: Ratio<i64>,
    pub nu: Ratio<i64>,
    pub mu: Ratio<i64>,
}

impl GroupConstants {
    pub fn casimir_f64(&self) -> f64 {
        ratio_to_f64(self.casimir)
    }

    pub fn lambda_f64(&self) -> f64 {
        ratio_to_f64(self.lambda)
    }

    pub fn nu_f64(&self) -> f64 {
        ratio_to_f64(self.nu)
    }

    pub fn mu_f64(&self) -> f64 {
        ratio_to_f64(self.mu)
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn group_constants(g: GroupSpec) -> GroupConstants {
    let n = g.n as i64;
    let r = Ratio::new;
    match g.kind {
        GroupKind::SO => GroupConstants {
            casimir: r(-(n - 1), 2),
            lambda: r(-1, 2),
            nu: r(0, 1),
            mu: r(1, 2),
        },
        GroupKind::U => GroupConstants {
            casimir: r(-n, 1),
            lambda: r(-1, 1),
            nu: r(0, 1),
            mu: r(0, 1),
        },
        GroupKind::SU => GroupConstants {
            casimir: r(-(n * n - 1), n),
            lambda: r(-1, 1),
            nu: r(1, n),
            mu: r(0, 1),
        },
    }
}

fn check_square(m: &CMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Hilbert-Schmidt inner product `Re Tr(X Y*)`.
pub fn inner_product(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            rows: y.nrows(),
            cols: y.ncols(),
        });
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| (a * b.conj()).re).sum())
}

/// Orthogonal projection (under `inner_product`) of an arbitrary matrix onto the algebra.
pub fn project_to_algebra(m: &CMatrix, g: GroupSpec) -> Result<AlgebraElement> {
    check_square(m, g.n)?;
    Ok(AlgebraElement {
        matrix: project_matrix(m, g),
        group: g,
    })
}

pub(crate) fn project_matrix(m: &CMatrix, g: GroupSpec) -> CMatrix {
    let n = g.n;
    match g.kind {
        GroupKind::SO => CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(0.5 * (m[(i, j)].re - m[(j, i)].re), 0.0)
        }),
        GroupKind::U => CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] - m[(j, i)].conj())),
        GroupKind::SU => {
            let mut x = CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] - m[(j, i)].conj()));
            let shift = x.trace() / n as f64;
            for i in 0..n {
                x[(i, i)] -= shift;
            }
            x
        }
    }
}

/// Element of so(N), u(N) or su(N).
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    matrix: CMatrix,
    group: GroupSpec,
}

impl AlgebraElement {
    /// Validates `X + X* = 0`, tracelessness for SU and real entries for SO.
    pub fn new(matrix: CMatrix, group: GroupSpec) -> Result<Self> {
        check_square(&matrix, group.n)?;
        let scale = 1.0 + matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = ALGEBRA_TOLERANCE * scale;
        let n = group.n;
        for i in 0..n {
            for j in 0..n {
                if (matrix[(i, j)] + matrix[(j, i)].conj()).norm() > tol {
                    return Err(Error::InvalidGroup(format!(
                        "matrix is not anti-Hermitian at ({i}, {j})"
                    )));
                }
                if group.is_real() && matrix[(i, j)].im.abs() > tol {
                    return Err(Error::InvalidGroup(format!(
                        "so({n}) element has imaginary entry at ({i}, {j})"
                    )));
                }
            }
        }
        if group.kind == GroupKind::SU && matrix.trace().norm() > tol {
            return Err(Error::InvalidGroup("su(N) element must be traceless".into()));
        }
        Ok(AlgebraElement { matrix, group })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix, group: GroupSpec) -> Self {
        AlgebraElement { matrix, group }
    }

    pub fn zero(group: GroupSpec) -> Self {
        AlgebraElement {
            matrix: CMatrix::zeros(group.n, group.n),
            group,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn scaled(&self, s: f64) -> Self {
        AlgebraElement {
            matrix: &self.matrix * Complex64::new(s, 0.0),
            group: self.group,
        }
    }
}

/// Element of SO(N), U(N) or SU(N).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: CMatrix,
    group: GroupSpec,
}

impl GroupElement {
    /// Validates `QQ* = I` and the determinant condition within `MANIFOLD_TOLERANCE`.
    pub fn new(matrix: CMatrix, group: GroupSpec) -> Result<Self> {
        check_square(&matrix, group.n)?;
        check_manifold(&matrix, group)?;
        Ok(GroupElement { matrix, group })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            matrix: self.matrix.adjoint(),
            group: self.group,
        }
    }

    /// `max |QQ* - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &rhs.matrix,
            group: self.group,
        }
    }
}

/// `max_{ij} |(QQ* - I)_{ij}|`.
pub fn unitarity_defect(q: &CMatrix) -> f64 {
    let p = q * q.adjoint();
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub(crate) fn check_manifold(q: &CMatrix, group: GroupSpec) -> Result<()> {
    if q.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalFault("non-finite group element".into()));
    }
    let defect = unitarity_defect(q);
    if defect > MANIFOLD_TOLERANCE {
        return Err(Error::NumericalFault(format!(
            "unitarity defect {defect:.3e} exceeds {MANIFOLD_TOLERANCE:.0e}"
        )));
    }
    let det = q.determinant();
    let ok = match group.kind {
        GroupKind::U => (det.norm() - 1.0).abs() <= MANIFOLD_TOLERANCE,
        GroupKind::SO | GroupKind::SU => (det - 1.0).norm() <= MANIFOLD_TOLERANCE * group.n as f64,
    };
    if !ok {
        return Err(Error::NumericalFault(format!(
            "determinant {det} violates the {} constraint",
            group
        )));
    }
    if group.is_real() && q.iter().any(|z| z.im.abs() > MANIFOLD_TOLERANCE) {
        return Err(Error::NumericalFault("SO(N) element has imaginary entries".into()));
    }
    Ok(())
}

/// Nearest group element in Frobenius norm (polar factor), with the
/// determinant pinned back to one for SO and SU.
pub fn retract(q: &CMatrix, group: GroupSpec) -> CMatrix {
    let n = group.n;
    let svd = q.clone().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return q.clone();
    };
    let mut p = u * v_t;
    if group.is_real() {
        p.iter_mut().for_each(|z| z.im = 0.0);
    }
    if group.kind == GroupKind::SU {
        let det = p.determinant();
        p *= Complex64::from_polar(1.0, -det.arg() / n as f64);
    }
    p
}

/// Matrix exponential of an algebra element.
pub fn group_exp(x: &AlgebraElement) -> Result<GroupElement> {
    let matrix = x.matrix.exp();
    check_manifold(&matrix, x.group)?;
    Ok(GroupElement {
        matrix,
        group: x.group,
    })
}

/// Haar-distributed group element: Gram-Schmidt (QR) of a Gaussian matrix with
/// the phases of `diag(R)` moved into `Q`, then a determinant correction for SO/SU.
pub fn haar_sample<R: Rng + ?Sized>(group: GroupSpec, rng: &mut R) -> GroupElement {
    let n = group.n;
    let mut z = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            z[(i, j)] = if group.is_real() {
                Complex64::new(rng.sample(StandardNormal), 0.0)
            } else {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            };
        }
    }
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    match group.kind {
        GroupKind::SO => {
            q.iter_mut().for_each(|z| z.im = 0.0);
            if q.determinant().re < 0.0 {
                q.column_mut(0).iter_mut().for_each(|z| *z = -*z);
            }
        }
        GroupKind::SU => {
            let det = q.determinant();
            q *= Complex64::from_polar(1.0, -det.arg() / n as f64);
        }
        GroupKind::U => {}
    }
    GroupElement {
        matrix: q,
        group,
    }
}

/// Orthonormal basis of the Lie algebra under `inner_product`.
///
/// Off-diagonal generators `(E_jk - E_kj)/sqrt 2` (all groups) and
/// `i (E_jk + E_kj)/sqrt 2` (U, SU), then the diagonal family: `i E_jj` for
/// U(N) and the traceless `i diag(1,..,1,-k,0,..)/sqrt(k(k+1))` for SU(N).
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    group: GroupSpec,
    vectors: Vec<CMatrix>,
}

impl AlgebraBasis {
    pub fn new(group: GroupSpec) -> Self {
        let n = group.n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut vectors = Vec::with_capacity(group.algebra_dim());
        for j in 0..n {
            for k in j + 1..n {
                let mut a = CMatrix::zeros(n, n);
                a[(j, k)] = Complex64::new(s, 0.0);
                a[(k, j)] = Complex64::new(-s, 0.0);
                vectors.push(a);
                if !group.is_real() {
                    let mut b = CMatrix::zeros(n, n);
                    b[(j, k)] = Complex64::new(0.0, s);
                    b[(k, j)] = Complex64::new(0.0, s);
                    vectors.push(b);
                }
            }
        }
        match group.kind {
            GroupKind::SO => {}
            GroupKind::U => {
                for j in 0..n {
                    let mut d = CMatrix::zeros(n, n);
                    d[(j, j)] = Complex64::new(0.0, 1.0);
                    vectors.push(d);
                }
            }
            GroupKind::SU => {
                for k in 1..n {
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let mut d = CMatrix::zeros(n, n);
                    for j in 0..k {
                        d[(j, j)] = Complex64::new(0.0, 1.0 / norm);
                    }
                    d[(k, k)] = Complex64::new(0.0, -(k as f64) / norm);
                    vectors.push(d);
                }
            }
        }
        debug_assert_eq!(vectors.len(), group.algebra_dim());
        AlgebraBasis { group, vectors }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn vectors(&self) -> &[CMatrix] {
        &self.vectors
    }

    /// `sum_a v_a^2`, which equals `c I` for the group's Casimir-type constant.
    pub fn square_sum(&self) -> CMatrix {
        let n = self.group.n;
        self.vectors
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, v| acc + v * v)
    }

    /// Coordinates `<X, v_a>`.
    pub fn coefficients(&self, x: &CMatrix) -> Result<Vec<f64>> {
        self.vectors.iter().map(|v| inner_product(x, v)).collect()
    }

    /// Standard Gaussian on the algebra: `E <X,v><X,w> = <v,w>`.
    pub fn sample_gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let n = self.group.n;
        let mut x = CMatrix::zeros(n, n);
        self.sample_into(rng, 1.0, &mut x);
        AlgebraElement {
            matrix: x,
            group: self.group,
        }
    }

    /// Overwrites `out` with `scale` times a standard algebra Gaussian.
    pub(crate) fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64, out: &mut CMatrix) {
        out.fill(Complex64::new(0.0, 0.0));
        for v in &self.vectors {
            let c: f64 = rng.sample(StandardNormal);
            let c = c * scale;
            for (o, b) in out.iter_mut().zip(v.iter()) {
                if b.re != 0.0 || b.im != 0.0 {
                    *o += b * c;
                }
            }
        }
    }
}

/// One standard Gaussian algebra increment (unit time).
pub fn sample_algebra_gaussian<R: Rng + ?Sized>(group: GroupSpec, rng: &mut R) -> AlgebraElement {
    AlgebraBasis::new(group).sample_gaussian(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_groups() -> Vec<GroupSpec> {
        vec![
            GroupSpec::so(2).unwrap(),
            GroupSpec::so(3).unwrap(),
            GroupSpec::so(4).unwrap(),
            GroupSpec::u(1).unwrap(),
            GroupSpec::u(2).unwrap(),
            GroupSpec::u(3).unwrap(),
            GroupSpec::su(2).unwrap(),
            GroupSpec::su(3).unwrap(),
            GroupSpec::su(4).unwrap(),
        ]
    }

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    #[test]
    fn rejects_trivial_groups() {
        assert!(GroupSpec::so(1).is_err());
        assert!(GroupSpec::su(1).is_err());
        assert!(GroupSpec::u(1).is_ok());
        assert!("SO(1)".parse::<GroupSpec>().is_err());
        assert_eq!("su(3)".parse::<GroupSpec>().unwrap(), GroupSpec::su(3).unwrap());
    }

    #[test]
    fn inner_product_examples() {
        let id = CMatrix::identity(2, 2);
        assert_eq!(inner_product(&id, &id).unwrap(), 2.0);
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[0.0, 1.0, -1.0, 0.0].map(|v| Complex64::new(v, 0.0)),
        );
        assert_eq!(inner_product(&x, &x).unwrap(), 2.0);
        assert!(inner_product(&id, &CMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn inner_product_is_minus_trace_on_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in all_groups() {
            let basis = g.algebra_basis();
            let x = basis.sample_gaussian(&mut rng);
            let y = basis.sample_gaussian(&mut rng);
            let direct = inner_product(x.matrix(), y.matrix()).unwrap();
            let via_trace = -(x.matrix() * y.matrix()).trace().re;
            assert!((direct - via_trace).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let so2 = GroupSpec::so(2).unwrap();
        let sym = CMatrix::from_row_slice(
            2,
            2,
            &[1.0, 2.0, 2.0, 5.0].map(|v| Complex64::new(v, 0.0)),
        );
        assert!(project_to_algebra(&sym, so2).unwrap().matrix().norm() < 1e-15);

        let u2 = GroupSpec::u(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = u2.algebra_basis().sample_gaussian(&mut rng);
        let p = project_to_algebra(x.matrix(), u2).unwrap();
        assert!((p.matrix() - x.matrix()).norm() < 1e-15);

        let su2 = GroupSpec::su(2).unwrap();
        let ii = CMatrix::identity(2, 2) * Complex64::new(0.0, 1.0);
        assert!(project_to_algebra(&ii, su2).unwrap().matrix().norm() < 1e-15);
        assert!(project_to_algebra(&CMatrix::identity(3, 3), su2).is_err());
    }

    #[test]
    fn projection_is_idempotent_and_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in all_groups() {
            for _ in 0..10 {
                let m = random_matrix(g.n(), &mut rng);
                let k = random_matrix(g.n(), &mut rng);
                let pm = project_matrix(&m, g);
                let ppm = project_matrix(&pm, g);
                assert!((&pm - &ppm).norm() < 1e-12);
                let pk = project_matrix(&k, g);
                let lhs = inner_product(&pm, &k).unwrap();
                let rhs = inner_product(&m, &pk).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "{g}: {lhs} vs {rhs}");
                AlgebraElement::new(pm, g).unwrap();
            }
        }
    }

    #[test]
    fn constants_examples() {
        let c = group_constants(GroupSpec::so(3).unwrap());
        assert_eq!(c.casimir, Ratio::new(-1, 1));
        assert_eq!((c.lambda, c.nu, c.mu), (Ratio::new(-1, 2), Ratio::new(0, 1), Ratio::new(1, 2)));
        let c = group_constants(GroupSpec::u(2).unwrap());
        assert_eq!(c.casimir, Ratio::new(-2, 1));
        assert_eq!((c.lambda, c.nu, c.mu), (Ratio::new(-1, 1), Ratio::new(0, 1), Ratio::new(0, 1)));
        let c = group_constants(GroupSpec::su(3).unwrap());
        assert_eq!(c.casimir, Ratio::new(-8, 3));
        assert_eq!((c.lambda, c.nu, c.mu), (Ratio::new(-1, 1), Ratio::new(1, 3), Ratio::new(0, 1)));
    }

    #[test]
    fn basis_is_orthonormal_and_matches_casimir() {
        for g in all_groups() {
            let basis = g.algebra_basis();
            let v = basis.vectors();
            assert_eq!(v.len(), g.algebra_dim());
            for (a, va) in v.iter().enumerate() {
                AlgebraElement::new(va.clone(), g).unwrap();
                for (b, vb) in v.iter().enumerate() {
                    let ip = inner_product(va, vb).unwrap();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-14);
                }
            }
            let c = g.constants().casimir_f64();
            let target = CMatrix::identity(g.n(), g.n()) * Complex64::new(c, 0.0);
            assert!((basis.square_sum() - target).norm() < 1e-10, "{g}");
        }
    }

    #[test]
    fn gaussian_samples_lie_in_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for g in all_groups() {
            let basis = g.algebra_basis();
            for _ in 0..20 {
                let x = basis.sample_gaussian(&mut rng);
                let m = x.matrix();
                assert_eq!((m + m.adjoint()).norm(), 0.0);
                if g.kind() == GroupKind::SU {
                    assert!(m.trace().norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        for g in all_groups() {
            let q = group_exp(&AlgebraElement::zero(g)).unwrap();
            assert!((q.matrix() - CMatrix::identity(g.n(), g.n())).norm() < 1e-15);
        }
    }

    #[test]
    fn so2_exp_is_rotation() {
        let g = GroupSpec::so(2).unwrap();
        for theta in [0.1, 1.0, 2.5, -3.0] {
            let x = CMatrix::from_row_slice(
                2,
                2,
                &[0.0, theta, -theta, 0.0].map(|v| Complex64::new(v, 0.0)),
            );
            let q = group_exp(&AlgebraElement::new(x, g).unwrap()).unwrap();
            let (s, c) = f64::sin_cos(theta);
            let want = CMatrix::from_row_slice(2, 2, &[c, s, -s, c].map(|v| Complex64::new(v, 0.0)));
            assert!((q.matrix() - want).norm() < 1e-13);
        }
    }

    #[test]
    fn exp_stays_on_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let su3 = GroupSpec::su(3).unwrap();
        let basis = su3.algebra_basis();
        for _ in 0..50 {
            let x = basis.sample_gaussian(&mut rng);
            let q = group_exp(&x).unwrap();
            assert!(q.unitarity_defect() < 1e-12);
            assert!((q.matrix().determinant() - 1.0).norm() < 1e-10);
        }
        for g in all_groups() {
            let basis = g.algebra_basis();
            for _ in 0..20 {
                let x = basis.sample_gaussian(&mut rng);
                let norm = x.matrix().norm();
                let x = x.scaled(10.0 / norm * rng.random::<f64>());
                let q = group_exp(&x).unwrap();
                GroupElement::new(q.into_matrix(), g).unwrap();
            }
        }
    }

    #[test]
    fn haar_samples_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for g in all_groups() {
            for _ in 0..20 {
                let q = haar_sample(g, &mut rng);
                GroupElement::new(q.matrix().clone(), g).unwrap();
            }
        }
    }

    #[test]
    fn retract_restores_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in all_groups() {
            let q = haar_sample(g, &mut rng);
            let noise = random_matrix(g.n(), &mut rng) * Complex64::new(1e-6, 0.0);
            let mut bent = q.matrix() + noise;
            if g.is_real() {
                bent.iter_mut().for_each(|z| z.im = 0.0);
            }
            assert!(unitarity_defect(&bent) > 1e-8);
            let fixed = retract(&bent, g);
            assert!(unitarity_defect(&fixed) < 1e-13);
            check_manifold(&fixed, g).unwrap();
            assert!((&fixed - q.matrix()).norm() < 1e-5);
        }
    }
}
