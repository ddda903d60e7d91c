//! Lawrence liftings of planar point configurations, face certificates for
//! the resulting polytopes, and recovery of the configuration from a labelled
//! realization.

use std::collections::BTreeSet;

use crate::config::{derive_nonrationality, ConstructionScript, NonRationalityCertificate, Realization};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::exactnum::{dot, normalize_first_nonzero, ExactText, Field, Matrix, OrderedField, QuadExt, Rational};
use crate::projgeom::{dehomogenize, det3, homogenize, proj_eq, HomPoint};

/// The `2n x (2+n)` matrix with rows `(x_i, y_i, h1 e_i)` followed by
/// `(x_i, y_i, h2 e_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LawrenceLifting<F: Field> {
    n: usize,
    heights: (Rational, Rational),
    matrix: Matrix<F>,
    points: Vec<Vec<F>>,
}

pub fn default_heights() -> (Rational, Rational) {
    (Rational::from_integer(1.into()), Rational::from_integer(2.into()))
}

impl<F: OrderedField> LawrenceLifting<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn heights(&self) -> &(Rational, Rational) {
        &self.heights
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    /// The affine source points.
    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.matrix.ctx()
    }

    /// Row labels `v1'..vn'` then `v1''..vn''`.
    pub fn labels(&self) -> Vec<String> {
        lifting_labels(self.n)
    }

    /// Whether no point's removal leaves the others collinear.
    pub fn is_stable(&self) -> bool {
        stability_failures(self.ctx(), &self.points).is_empty()
    }

    /// Reassembles a lifting from its matrix, inferring the heights and
    /// checking the sparsity pattern.
    pub fn from_matrix(matrix: Matrix<F>) -> Result<Self> {
        let rows = matrix.rows();
        if !rows.is_multiple_of(2) || rows == 0 {
            return Err(Error::Invalid(format!("a lifting has an even, positive number of rows, got {rows}")));
        }
        let n = rows / 2;
        if matrix.cols() != n + 2 {
            return Err(Error::Invalid(format!(
                "a lifting of {n} points has {} columns, got {}",
                n + 2,
                matrix.cols()
            )));
        }
        let ctx = matrix.ctx().clone();
        let as_rational = |x: &F, what: &str| -> Result<Rational> {
            rational_value(x).ok_or_else(|| Error::Invalid(format!("{what} height must be rational")))
        };
        let h1 = as_rational(matrix.get(0, 2), "lower")?;
        let h2 = as_rational(matrix.get(n, 2), "upper")?;
        let lifted =
            lawrence_lift_with(&ctx, &(0..n).map(|i| matrix.row(i)[..2].to_vec()).collect::<Vec<_>>(), (h1, h2))?;
        if lifted.matrix != matrix {
            return Err(Error::Invalid("matrix does not have the pattern of a Lawrence lifting".into()));
        }
        Ok(lifted)
    }
}

fn rational_value<F: Field>(x: &F) -> Option<Rational> {
    let any: &dyn std::any::Any = x;
    if let Some(q) = any.downcast_ref::<Rational>() {
        return Some(q.clone());
    }
    any.downcast_ref::<QuadExt>().filter(|q| q.is_rational()).map(|q| q.a.clone())
}

pub fn lifting_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}'")).chain((1..=n).map(|i| format!("v{i}''"))).collect()
}

fn stability_failures<F: Field>(ctx: &F::Ctx, points: &[Vec<F>]) -> Vec<usize> {
    let hom: Vec<Vec<F>> = homogenize(ctx, points).into_iter().map(HomPoint::into_coords).collect();
    let m = Matrix::from_rows(ctx, hom, 3).expect("3 columns");
    (0..points.len())
        .filter(|&skip| {
            let rest: Vec<usize> = (0..points.len()).filter(|&i| i != skip).collect();
            m.select_rows(&rest).rank() < 3
        })
        .collect()
}

/// Lawrence lifting with heights 1 and 2.
pub fn lawrence_lift<F: OrderedField>(ctx: &F::Ctx, points: &[Vec<F>]) -> Result<LawrenceLifting<F>> {
    lawrence_lift_with(ctx, points, default_heights())
}

/// Lawrence lifting with heights `0 < h1 < h2`.
///
/// Rejects fewer than three points, coincident points and collinear
/// configurations. Stability is not required here; unstable inputs lift
/// fine but their point facets fail the dimension check.
pub fn lawrence_lift_with<F: OrderedField>(
    ctx: &F::Ctx,
    points: &[Vec<F>],
    heights: (Rational, Rational),
) -> Result<LawrenceLifting<F>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Unsupported(format!("Lawrence liftings of {n} points are degenerate")));
    }
    if points.iter().any(|p| p.len() != 2) {
        return Err(Error::Invalid("Lawrence lifting needs planar affine points".into()));
    }
    if !(heights.0.is_positive() && heights.0 < heights.1) {
        return Err(Error::Invalid("heights must satisfy 0 < h1 < h2".into()));
    }
    let hom: Vec<Vec<F>> = homogenize(ctx, points).into_iter().map(HomPoint::into_coords).collect();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::Degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
            }
        }
    }
    if Matrix::from_rows(ctx, hom, 3).expect("3 columns").rank() < 3 {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    let h1 = F::from_rational(ctx, &heights.0);
    let h2 = F::from_rational(ctx, &heights.1);
    let mut m = Matrix::zeros(ctx, 2 * n, n + 2);
    for (i, p) in points.iter().enumerate() {
        for (r, h) in [(i, &h1), (n + i, &h2)] {
            m.set(r, 0, p[0].clone());
            m.set(r, 1, p[1].clone());
            m.set(r, 2 + i, h.clone());
        }
    }
    Ok(LawrenceLifting { n, heights, matrix: m, points: points.to_vec() })
}

/// Dehomogenizes a realization and lifts it.
pub fn lift_realization<F: OrderedField>(
    r: &Realization<F>,
    heights: (Rational, Rational),
) -> Result<LawrenceLifting<F>> {
    let hom: Vec<HomPoint<F>> = r.coords().row_vecs().into_iter().map(HomPoint::new).collect::<Result<_>>()?;
    let affine = dehomogenize(&hom)?;
    lawrence_lift_with(r.coords().ctx(), &affine.points, heights)
}

/// Kind of face a certificate claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Edge(usize),
    PointFacet(usize),
    LineFacet(usize),
}

/// Affine functional `functional . row + constant` that vanishes exactly on
/// the claimed rows of a lifting and is positive on the others.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceCertificate<F: Field> {
    pub kind: FaceKind,
    pub functional: Vec<F>,
    pub constant: F,
    /// Zero-based row indices.
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub verified: bool,
    /// Reason for a failed verification.
    pub failure: Option<String>,
}

impl<F: OrderedField> FaceCertificate<F> {
    fn value(&self, row: &[F]) -> F {
        let ctx = self.constant.ctx();
        dot(&ctx, &self.functional, row).add(&self.constant)
    }

    /// Re-checks the certificate against a lifting and returns the failure,
    /// if any.
    pub fn check(&self, l: &LawrenceLifting<F>) -> Option<String> {
        let m = l.matrix();
        if self.functional.len() != m.cols() {
            return Some(format!("functional has {} entries, lifting has {} columns", self.functional.len(), m.cols()));
        }
        let claimed: BTreeSet<usize> = self.vertices.iter().copied().collect();
        let labels = l.labels();
        for r in 0..m.rows() {
            let v = self.value(m.row(r));
            if claimed.contains(&r) && !v.is_zero() {
                return Some(format!("functional is nonzero on claimed vertex {}", labels[r]));
            }
            if !claimed.contains(&r) && !v.is_positive() {
                return Some(format!("functional is not positive on vertex {}", labels[r]));
            }
        }
        let rows: Vec<Vec<F>> = self
            .vertices
            .iter()
            .map(|&r| {
                let mut h = vec![F::one(l.ctx())];
                h.extend(m.row(r).iter().cloned());
                h
            })
            .collect();
        let rank = Matrix::from_rows(l.ctx(), rows, m.cols() + 1).expect("uniform").rank();
        if rank != self.dim + 1 {
            return Some(format!(
                "claimed vertices span affine dimension {}, expected {}",
                rank as isize - 1,
                self.dim
            ));
        }
        None
    }

    fn finish(mut self, l: &LawrenceLifting<F>) -> Self {
        self.failure = self.check(l);
        self.verified = self.failure.is_none();
        self
    }
}

fn check_index<F: OrderedField>(l: &LawrenceLifting<F>, i: usize) -> Result<()> {
    if i >= l.n {
        return Err(Error::Invalid(format!("point index {} out of range 1..{}", i + 1, l.n)));
    }
    Ok(())
}

/// Edge `{v_i', v_i''}` minimizing `(y_1 + ... + y_n) - y_i` (zero-based `i`).
pub fn edge_certificate<F: OrderedField>(l: &LawrenceLifting<F>, i: usize) -> Result<FaceCertificate<F>> {
    check_index(l, i)?;
    let ctx = l.ctx();
    let mut f = vec![F::zero(ctx); l.n + 2];
    for (j, slot) in f.iter_mut().skip(2).enumerate() {
        if j != i {
            *slot = F::one(ctx);
        }
    }
    let cert = FaceCertificate {
        kind: FaceKind::Edge(i),
        functional: f,
        constant: F::zero(ctx),
        vertices: vec![i, l.n + i],
        dim: 1,
        verified: false,
        failure: None,
    };
    Ok(cert.finish(l))
}

/// Facet of all vertices except `v_i', v_i''`, cut out by `y_i`.
pub fn facet_point_certificate<F: OrderedField>(l: &LawrenceLifting<F>, i: usize) -> Result<FaceCertificate<F>> {
    check_index(l, i)?;
    let ctx = l.ctx();
    let mut f = vec![F::zero(ctx); l.n + 2];
    f[2 + i] = F::one(ctx);
    let vertices = (0..2 * l.n).filter(|&r| r != i && r != l.n + i).collect();
    let cert = FaceCertificate {
        kind: FaceKind::PointFacet(i),
        functional: f,
        constant: F::zero(ctx),
        vertices,
        dim: l.n + 1,
        verified: false,
        failure: None,
    };
    Ok(cert.finish(l))
}

/// Points on a line (`on`), on its negative side and on its positive side,
/// zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinePartition {
    pub on: Vec<usize>,
    pub negative: Vec<usize>,
    pub positive: Vec<usize>,
}

/// Affine witness `w0 + w1 x + w2 y` for a configuration line through the
/// given points: the join of its first two points, signed so that the
/// lowest-index point off the line is positive.
pub fn line_witness<F: OrderedField>(points: &[Vec<F>], line: &[usize]) -> Result<(LinePartition, [F; 3])> {
    if line.len() < 2 {
        return Err(Error::Invalid("a line needs two points".into()));
    }
    let ctx = points[0][0].ctx();
    let hom: Vec<Vec<F>> = homogenize(&ctx, points).into_iter().map(HomPoint::into_coords).collect();
    let w = crate::projgeom::cross(&hom[line[0]], &hom[line[1]]);
    if w.iter().all(Field::is_zero) {
        return Err(Error::Degenerate("line through coincident points".into()));
    }
    let val = |k: usize, w: &[F]| dot(&ctx, w, &hom[k]);
    let flip = (0..points.len()).find(|&k| !val(k, &w).is_zero()).is_some_and(|k| val(k, &w).is_negative());
    let w: Vec<F> = if flip { w.iter().map(Field::neg).collect() } else { w };
    let mut part = LinePartition { on: Vec::new(), negative: Vec::new(), positive: Vec::new() };
    for k in 0..points.len() {
        match val(k, &w).signum() {
            0 => part.on.push(k),
            s if s < 0 => part.negative.push(k),
            _ => part.positive.push(k),
        }
    }
    let w: [F; 3] = w.try_into().expect("3 entries");
    Ok((part, w))
}

/// Facet `F^l` for a line `l` given by an affine witness and the induced
/// partition; `line_index` only labels the certificate.
pub fn facet_line_certificate<F: OrderedField>(
    l: &LawrenceLifting<F>,
    line_index: usize,
    part: &LinePartition,
    witness: &[F; 3],
) -> Result<FaceCertificate<F>> {
    let n = l.n;
    let ctx = l.ctx();
    let all: BTreeSet<usize> = part.on.iter().chain(&part.negative).chain(&part.positive).copied().collect();
    if all.len() != n || all.iter().any(|&k| k >= n) || part.on.len() + part.negative.len() + part.positive.len() != n {
        return Err(Error::Invalid("line partition must split the points 1..n".into()));
    }
    let lval = |k: usize| witness[0].add(&witness[1].mul(&l.points[k][0])).add(&witness[2].mul(&l.points[k][1]));
    for (set, want, what) in [(&part.on, 0, "zero"), (&part.negative, -1, "negative"), (&part.positive, 1, "positive")]
    {
        if let Some(&k) = set.iter().find(|&&k| lval(k).signum() != want) {
            return Err(Error::Invalid(format!("witness is not {what} on point {}", k + 1)));
        }
    }
    let h1 = F::from_rational(ctx, &l.heights.0);
    let h2 = F::from_rational(ctx, &l.heights.1);
    let mut f = vec![witness[1].clone(), witness[2].clone()];
    for k in 0..n {
        let alpha = if part.on.contains(&k) {
            F::zero(ctx)
        } else if part.negative.contains(&k) {
            lval(k).neg().checked_div(&h1).expect("h1 > 0")
        } else {
            lval(k).neg().checked_div(&h2).expect("h2 > 0")
        };
        f.push(alpha);
    }
    let mut vertices: Vec<usize> = part.negative.iter().copied().chain(part.on.iter().copied()).collect();
    vertices.extend(part.on.iter().map(|&k| n + k));
    vertices.extend(part.positive.iter().map(|&k| n + k));
    vertices.sort_unstable();
    let cert = FaceCertificate {
        kind: FaceKind::LineFacet(line_index),
        functional: f,
        constant: witness[0].clone(),
        vertices,
        dim: n + 1,
        verified: false,
        failure: None,
    };
    Ok(cert.finish(l))
}

/// Vertices in homogeneous coordinates with the labelling data recovery
/// needs: the rows of each edge `e_i` and of each facet `F_i`, plus optional
/// supporting functionals for the `F_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPolytope<F: Field> {
    pub vertices: Matrix<F>,
    pub edges: Vec<Vec<usize>>,
    pub facets: Vec<Vec<usize>>,
    /// Linear functionals (on homogeneous coordinates) supporting `F_i`;
    /// used when the vertices of `F_i` do not span a hyperplane.
    pub supports: Option<Vec<Vec<F>>>,
}

impl<F: OrderedField> LabeledPolytope<F> {
    /// Labelling by row names `v<i>'` / `v<i>''`: edge `e_i` is the set of
    /// rows labelled with `i` and facet `F_i` its complement.
    pub fn from_labels(vertices: Matrix<F>, labels: &[String], n: usize) -> Result<Self> {
        if labels.len() != vertices.rows() {
            return Err(Error::Invalid(format!("{} labels for {} vertices", labels.len(), vertices.rows())));
        }
        let mut edges = vec![Vec::new(); n];
        for (r, lab) in labels.iter().enumerate() {
            let i = parse_label(lab).ok_or_else(|| Error::Invalid(format!("bad vertex label {lab:?}")))?;
            if i == 0 || i > n {
                return Err(Error::Invalid(format!("label {lab:?} out of range 1..{n}")));
            }
            edges[i - 1].push(r);
        }
        let facets = edges.iter().map(|e| (0..vertices.rows()).filter(|r| !e.contains(r)).collect()).collect();
        Ok(Self { vertices, edges, facets, supports: None })
    }

    /// The labelled polytope of a lifting, homogenized, with the functionals
    /// `y_i` as supports.
    pub fn from_lifting(l: &LawrenceLifting<F>, labels: &[String]) -> Result<Self> {
        let ctx = l.ctx();
        let rows: Vec<Vec<F>> = l.matrix.row_vecs();
        let hom = homogenize(ctx, &rows).into_iter().map(HomPoint::into_coords).collect();
        let vertices = Matrix::from_rows(ctx, hom, l.n + 3).map_err(Error::Invalid)?;
        let mut p = Self::from_labels(vertices, labels, l.n)?;
        p.supports = Some(
            (0..l.n)
                .map(|i| {
                    let mut f = vec![F::zero(ctx); l.n + 3];
                    f[3 + i] = F::one(ctx);
                    f
                })
                .collect(),
        );
        Ok(p)
    }

    /// Applies `x -> T x` to the vertices (and `T^{-T}` to the supports).
    pub fn transform(&self, t: &Matrix<F>) -> Result<Self> {
        let inv = t.inverse().ok_or_else(|| Error::Degenerate("transformation is singular".into()))?;
        let vertices = self.vertices.mul(&t.transpose());
        let supports = self.supports.as_ref().map(|s| s.iter().map(|f| inv.transpose().mul_vec(f)).collect());
        Ok(Self { vertices, edges: self.edges.clone(), facets: self.facets.clone(), supports })
    }
}

fn parse_label(s: &str) -> Option<usize> {
    let body = s.strip_prefix('v')?.trim_end_matches('\'');
    let primes = s.len() - 1 - body.len();
    if !(1..=2).contains(&primes) {
        return None;
    }
    body.parse().ok()
}

/// Output of [`recover_configuration`].
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery<F: Field> {
    /// Basis of `R` as rows.
    pub r_basis: Matrix<F>,
    /// One vector per point, in `R`-basis coordinates, first nonzero entry 1.
    pub vectors: Vec<Vec<F>>,
}

impl<F: OrderedField> Recovery<F> {
    pub fn realization(&self) -> Result<Realization<F>> {
        Realization::from_rows(self.r_basis.ctx(), self.vectors.clone())
    }
}

/// Recovers the planar configuration encoded by a labelled realization of a
/// Lawrence polytope: `R` is the intersection of the facet hyperplanes
/// `H_i`, and each point spans `R` intersected with the span of its edge.
pub fn recover_configuration<F: OrderedField>(p: &LabeledPolytope<F>) -> Result<Recovery<F>> {
    let n = p.edges.len();
    let ctx = p.vertices.ctx().clone();
    let dim = p.vertices.cols();
    if dim != n + 3 {
        return Err(Error::Invalid(format!(
            "{n} labelled points need vertices with {} homogeneous coordinates",
            n + 3
        )));
    }
    let mut normals: Vec<Vec<F>> = Vec::new();
    let mut hyperplane_failures = Vec::new();
    for (i, facet) in p.facets.iter().enumerate() {
        let span = p.vertices.select_rows(facet);
        let ns = span.nullspace();
        if ns.rows() == 1 {
            normals.push(ns.row(0).to_vec());
            continue;
        }
        let support = p
            .supports
            .as_ref()
            .map(|s| &s[i])
            .filter(|f| ns.rows() > 1 && (0..span.rows()).all(|r| dot(&ctx, f, span.row(r)).is_zero()));
        match support {
            Some(f) => normals.push(f.clone()),
            None => hyperplane_failures.push(format!("H{} (facet spans codimension {})", i + 1, ns.rows())),
        }
    }
    let stacked = Matrix::from_rows(&ctx, normals, dim).expect("uniform");
    let r_basis = stacked.nullspace();
    if r_basis.rows() != 3 {
        let mut msg = format!("R has dimension {}", r_basis.rows());
        if !hyperplane_failures.is_empty() {
            msg.push_str(&format!("; no hyperplane for {}", hyperplane_failures.join(", ")));
        }
        return Err(Error::Dimension(msg));
    }
    if let Some(f) = hyperplane_failures.first() {
        return Err(Error::Dimension(format!("no hyperplane for {f}")));
    }
    let mut vectors = Vec::with_capacity(n);
    for (i, edge) in p.edges.iter().enumerate() {
        if edge.len() != 2 {
            return Err(Error::Dimension(format!("E{} is spanned by {} vertices, expected 2", i + 1, edge.len())));
        }
        // Solve c . basis = s e + t e' for (c, s, t).
        let mut cols: Vec<Vec<F>> = r_basis.row_vecs();
        for &r in edge {
            cols.push(p.vertices.row(r).iter().map(Field::neg).collect());
        }
        let system = Matrix::from_rows(&ctx, cols, dim).expect("uniform").transpose();
        let ns = system.nullspace();
        if ns.rows() != 1 {
            return Err(Error::Dimension(format!("R meets E{} in dimension {}", i + 1, ns.rows())));
        }
        let c: Vec<F> = ns.row(0)[..3].to_vec();
        if c.iter().all(Field::is_zero) {
            return Err(Error::Dimension(format!("E{} is degenerate", i + 1)));
        }
        vectors.push(normalize_first_nonzero(c));
    }
    Ok(Recovery { r_basis, vectors })
}

/// Zero pattern of all 3x3 determinants, triples in lexicographic order.
pub fn collinearity_pattern<F: Field>(vectors: &[Vec<F>]) -> Vec<bool> {
    let n = vectors.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(det3(&vectors[i], &vectors[j], &vectors[k]).is_zero());
            }
        }
    }
    out
}

/// Homogenized source points of a lifting.
pub fn source_vectors<F: OrderedField>(l: &LawrenceLifting<F>) -> Vec<Vec<F>> {
    homogenize(l.ctx(), &l.points).into_iter().map(HomPoint::into_coords).collect()
}

/// All certificates of a lifting: `n` edges, `n` point facets and one facet
/// per configuration line.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateSet<F: Field> {
    pub edges: Vec<FaceCertificate<F>>,
    pub point_facets: Vec<FaceCertificate<F>>,
    pub line_facets: Vec<FaceCertificate<F>>,
}

impl<F: OrderedField> CertificateSet<F> {
    pub fn all(&self) -> impl Iterator<Item = &FaceCertificate<F>> {
        self.edges.iter().chain(&self.point_facets).chain(&self.line_facets)
    }

    pub fn all_verified(&self) -> bool {
        self.all().all(|c| c.verified)
    }

    pub fn failures(&self) -> Vec<String> {
        self.all().filter_map(|c| c.failure.as_ref().map(|f| format!("{:?}: {f}", c.kind))).collect()
    }
}

/// Certificates for every edge, point facet and line facet; `lines` are the
/// configuration lines (zero-based point sets).
pub fn certify_lifting<F: OrderedField>(l: &LawrenceLifting<F>, lines: &[Vec<usize>]) -> Result<CertificateSet<F>> {
    let edges = (0..l.n).map(|i| edge_certificate(l, i)).collect::<Result<_>>()?;
    let point_facets = (0..l.n).map(|i| facet_point_certificate(l, i)).collect::<Result<_>>()?;
    let line_facets = lines
        .iter()
        .enumerate()
        .map(|(k, line)| {
            let (part, w) = line_witness(&l.points, line)?;
            facet_line_certificate(l, k, &part, &w)
        })
        .collect::<Result<_>>()?;
    Ok(CertificateSet { edges, point_facets, line_facets })
}

/// Maximal sets of at least three collinear points, zero-based.
pub fn infer_lines<F: OrderedField>(points: &[Vec<F>]) -> Vec<Vec<usize>> {
    let ctx = points[0][0].ctx();
    let hom: Vec<Vec<F>> = homogenize(&ctx, points).into_iter().map(HomPoint::into_coords).collect();
    let n = hom.len();
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if lines.iter().any(|l| l.contains(&i) && l.contains(&j)) {
                continue;
            }
            let line: Vec<usize> =
                (0..n).filter(|&k| k == i || k == j || det3(&hom[i], &hom[j], &hom[k]).is_zero()).collect();
            if line.len() >= 3 {
                lines.push(line);
            }
        }
    }
    lines
}

/// The polytope certificate: a non-rational configuration, its lifting over
/// `Q(sqrt d)`, all face certificates and the recovery round trip.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeCertificate {
    pub configuration: NonRationalityCertificate,
    pub lifting: LawrenceLifting<QuadExt>,
    pub certificates: CertificateSet<QuadExt>,
    pub recovery: Recovery<QuadExt>,
    pub round_trip_ok: bool,
    pub dimension: usize,
    pub vertex_count: usize,
}

impl PolytopeCertificate {
    pub fn all_verified(&self) -> bool {
        self.certificates.all_verified() && self.round_trip_ok
    }
}

pub fn certify_nonrational_polytope(
    script: &ConstructionScript,
    heights: (Rational, Rational),
) -> Result<PolytopeCertificate> {
    let configuration = derive_nonrationality(script)?;
    let lifting = lift_realization(&configuration.realization, heights)?;
    let certificates = certify_lifting(&lifting, configuration.configuration.lines())?;
    let polytope = LabeledPolytope::from_lifting(&lifting, &lifting.labels())?;
    let recovery = recover_configuration(&polytope)?;
    let round_trip_ok = collinearity_pattern(&recovery.vectors) == collinearity_pattern(&source_vectors(&lifting));
    let n = lifting.n();
    Ok(PolytopeCertificate {
        configuration,
        lifting,
        certificates,
        recovery,
        round_trip_ok,
        dimension: n + 2,
        vertex_count: 2 * n,
    })
}

/// Whether two vector families define the same points up to scale, used in
/// tests of the recovery.
pub fn same_points<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| proj_eq(x, y))
}

/// Lifting JSON: rows of the lifting matrix with their vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingJson {
    pub n: usize,
    pub field: String,
    pub rows: Vec<Vec<String>>,
    pub labels: Vec<String>,
}

/// Certificate JSON; vertex indices are 1-based rows of the lifting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub functional: Vec<String>,
    pub constant: String,
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl FaceKind {
    pub fn name(&self) -> String {
        match self {
            FaceKind::Edge(i) => format!("edge e{}", i + 1),
            FaceKind::PointFacet(i) => format!("facet F{}", i + 1),
            FaceKind::LineFacet(k) => format!("facet F^l{}", k + 1),
        }
    }
}

impl<F: ExactText + OrderedField> FaceCertificate<F> {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            kind: self.kind.name(),
            functional: self.functional.iter().map(ExactText::to_exact_string).collect(),
            constant: self.constant.to_exact_string(),
            vertices: self.vertices.iter().map(|v| v + 1).collect(),
            dim: self.dim,
            verified: self.verified,
            failure: self.failure.clone(),
        }
    }
}

/// Parses lifting JSON into its matrix and labels without checking the
/// lifting pattern.
pub fn matrix_from_json<F: ExactText>(ctx: &F::Ctx, j: &LiftingJson) -> Result<(Matrix<F>, Vec<String>)> {
    if j.field != F::field_name(ctx) {
        return Err(Error::Invalid(format!("lifting field {} does not match {}", j.field, F::field_name(ctx))));
    }
    if j.rows.len() != 2 * j.n || j.labels.len() != j.rows.len() {
        return Err(Error::Invalid(format!("lifting of {} points needs {} rows and labels", j.n, 2 * j.n)));
    }
    let rows = j
        .rows
        .iter()
        .map(|r| r.iter().map(|s| F::parse_exact(ctx, s).map_err(Error::Invalid)).collect())
        .collect::<Result<Vec<Vec<F>>>>()?;
    let m = Matrix::from_rows(ctx, rows, j.n + 2).map_err(Error::Invalid)?;
    Ok((m, j.labels.clone()))
}

impl<F: ExactText + OrderedField> LawrenceLifting<F> {
    pub fn to_json(&self) -> LiftingJson {
        LiftingJson {
            n: self.n,
            field: F::field_name(self.ctx()),
            rows: self.matrix.row_vecs().iter().map(|r| r.iter().map(ExactText::to_exact_string).collect()).collect(),
            labels: self.labels(),
        }
    }
}

/// Labelled polytope from lifting JSON. Rows with the exact lifting pattern
/// get the functionals `y_i` as facet supports; other vertex sets are taken
/// as given.
pub fn polytope_from_json<F: ExactText + OrderedField>(ctx: &F::Ctx, j: &LiftingJson) -> Result<LabeledPolytope<F>> {
    let (m, labels) = matrix_from_json(ctx, j)?;
    match LawrenceLifting::from_matrix(m.clone()) {
        Ok(l) => LabeledPolytope::from_lifting(&l, &labels),
        Err(_) => {
            let hom = homogenize(ctx, &m.row_vecs()).into_iter().map(HomPoint::into_coords).collect();
            let vertices = Matrix::from_rows(ctx, hom, j.n + 3).map_err(Error::Invalid)?;
            LabeledPolytope::from_labels(vertices, &labels, j.n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<Rational>> {
        v.iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect()
    }

    #[test]
    fn triangle_lifting_pattern() {
        let l = lawrence_lift(&(), &pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!((l.matrix().rows(), l.matrix().cols()), (6, 5));
        assert_eq!(l.matrix().row(0), &[rat(0), rat(0), rat(1), rat(0), rat(0)]);
        assert_eq!(l.matrix().row(4), &[rat(1), rat(0), rat(0), rat(2), rat(0)]);
        assert!(!l.is_stable());
        let e = edge_certificate(&l, 0).unwrap();
        assert!(e.verified);
        assert_eq!(e.vertices, vec![0, 3]);
        let f = facet_point_certificate(&l, 1).unwrap();
        assert_eq!(f.vertices.len(), 4);
        assert!(!f.verified, "an unstable triangle has no point facets");
    }

    #[test]
    fn triangle_line_facet() {
        let l = lawrence_lift(&(), &pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let (part, w) = line_witness(l.points(), &[0, 1]).unwrap();
        assert_eq!(part, LinePartition { on: vec![0, 1], negative: vec![], positive: vec![2] });
        let c = facet_line_certificate(&l, 0, &part, &w).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 3, 4, 5]);
        assert!(c.verified, "{:?}", c.failure);
        let swapped = LinePartition { on: part.on.clone(), negative: part.positive.clone(), positive: vec![] };
        assert!(facet_line_certificate(&l, 0, &swapped, &w).is_err());
    }

    #[test]
    fn degenerate_lifts_rejected() {
        assert!(matches!(lawrence_lift(&(), &pts(&[(0, 0)])), Err(Error::Unsupported(_))));
        assert!(lawrence_lift(&(), &pts(&[(0, 0), (1, 1), (2, 2)])).is_err());
        assert!(lawrence_lift(&(), &pts(&[(0, 0), (0, 0), (0, 1)])).is_err());
    }

    #[test]
    fn square_with_diagonal_round_trip() {
        let q = |x: i64, y: i64, d: i64| vec![Rational::new(x.into(), d.into()), Rational::new(y.into(), d.into())];
        let p = vec![q(0, 0, 1), q(1, 0, 1), q(1, 1, 1), q(0, 1, 1), q(1, 1, 2)];
        let l = lawrence_lift(&(), &p).unwrap();
        assert!(l.is_stable());
        let lines = infer_lines(l.points());
        assert_eq!(lines, vec![vec![0, 2, 4], vec![1, 3, 4]]);
        let certs = certify_lifting(&l, &lines).unwrap();
        assert!(certs.all_verified(), "{:?}", certs.failures());
        let rec = recover_configuration(&LabeledPolytope::from_lifting(&l, &l.labels()).unwrap()).unwrap();
        assert_eq!(collinearity_pattern(&rec.vectors), collinearity_pattern(&source_vectors(&l)));
    }

    #[test]
    fn labels_parse() {
        assert_eq!(parse_label("v12'"), Some(12));
        assert_eq!(parse_label("v3''"), Some(3));
        assert_eq!(parse_label("v3"), None);
        assert_eq!(parse_label("v3'''"), None);
    }

    #[test]
    fn triangle_recovers_through_supports() {
        let l = lawrence_lift(&(), &pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let rec = recover_configuration(&LabeledPolytope::from_lifting(&l, &l.labels()).unwrap()).unwrap();
        assert_eq!(collinearity_pattern(&rec.vectors), vec![false]);
    }

    #[test]
    fn pentagon_polytope() {
        let script = crate::config::parse_script(crate::config::PENTAGON11_SCRIPT).unwrap();
        let cert = certify_nonrational_polytope(&script, default_heights()).unwrap();
        assert_eq!((cert.dimension, cert.vertex_count), (13, 22));
        assert_eq!(cert.certificates.line_facets.len(), 10);
        assert!(cert.all_verified(), "{:?}", cert.certificates.failures());

        let mut labels = cert.lifting.labels();
        labels[11] = "v2''".into();
        let bad = LabeledPolytope::from_lifting(&cert.lifting, &labels).unwrap();
        match recover_configuration(&bad) {
            Err(Error::Dimension(m)) => assert!(m.starts_with("R has dimension 4"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}
