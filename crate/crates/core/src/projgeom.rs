//! Homogeneous coordinates: (de)homogenization, joins and meets in the
//! projective plane, and projective frame maps in dimensions 2 and 3.

use crate::error::{Error, Result};
use crate::exactnum::{dot, Field, Matrix, OrderedField};

/// Nonzero vector of homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoint<F: Field> {
    coords: Vec<F>,
}

impl<F: Field> HomPoint<F> {
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.iter().all(Field::is_zero) {
            return Err(Error::Degenerate("zero vector is not a projective point".into()));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Projective equality: the two vectors span a line.
    pub fn proj_eq(&self, other: &Self) -> bool {
        proj_eq(&self.coords, &other.coords)
    }

    pub fn scaled(&self, c: &F) -> Self {
        Self { coords: self.coords.iter().map(|x| x.mul(c)).collect() }
    }
}

/// Line of the projective plane, `coeffs . x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomLine<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> HomLine<F> {
    pub fn new(coeffs: Vec<F>) -> Result<Self> {
        if coeffs.len() != 3 {
            return Err(Error::Invalid(format!("a plane line has 3 coefficients, got {}", coeffs.len())));
        }
        if coeffs.iter().all(Field::is_zero) {
            return Err(Error::Degenerate("zero vector is not a line".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn incident(&self, p: &HomPoint<F>) -> bool {
        let ctx = self.coeffs[0].ctx();
        dot(&ctx, &self.coeffs, &p.coords).is_zero()
    }
}

/// Rank of `{a, b}` is one (both vectors assumed nonzero).
pub fn proj_eq<F: Field>(a: &[F], b: &[F]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !a[i].mul(&b[j]).sub(&a[j].mul(&b[i])).is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn cross<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    assert!(a.len() == 3 && b.len() == 3, "cross product needs 3-vectors");
    vec![
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

/// `det(a, b, c)` of three 3-vectors.
pub fn det3<F: Field>(a: &[F], b: &[F], c: &[F]) -> F {
    let ctx = a[0].ctx();
    dot(&ctx, a, &cross(b, c))
}

pub fn collinear<F: Field>(a: &HomPoint<F>, b: &HomPoint<F>, c: &HomPoint<F>) -> bool {
    det3(&a.coords, &b.coords, &c.coords).is_zero()
}

/// Prepends the coordinate 1.
pub fn homogenize<F: Field>(ctx: &F::Ctx, points: &[Vec<F>]) -> Vec<HomPoint<F>> {
    points
        .iter()
        .map(|p| {
            let mut c = Vec::with_capacity(p.len() + 1);
            c.push(F::one(ctx));
            c.extend(p.iter().cloned());
            HomPoint { coords: c }
        })
        .collect()
}

/// Result of [`dehomogenize`]: the functional used and the affine points.
#[derive(Clone, Debug, PartialEq)]
pub struct Dehomogenized<F: Field> {
    pub functional: Vec<F>,
    pub points: Vec<Vec<F>>,
}

/// Scales every vector so a linear functional is 1 on it and drops one
/// coordinate.
///
/// The functional is the first coordinate when that is nonzero on all inputs;
/// otherwise the first admissible weight vector in `{0..n}^k`, ordered by
/// total weight and then lexicographically from the front, skipping vectors
/// proportional to an earlier one. The dropped coordinate is the first one
/// with nonzero weight, so affine coordinates are the remaining entries.
pub fn dehomogenize<F: Field>(points: &[HomPoint<F>]) -> Result<Dehomogenized<F>> {
    let Some(first) = points.first() else {
        return Ok(Dehomogenized { functional: Vec::new(), points: Vec::new() });
    };
    let k = first.coords.len();
    if points.iter().any(|p| p.coords.len() != k) {
        return Err(Error::Invalid("points of different dimensions".into()));
    }
    let ctx = first.coords[0].ctx();
    let n = points.len() as u64;
    let admissible = |w: &[u64]| -> Option<Vec<F>> {
        let f: Vec<F> = w.iter().map(|&x| F::from_i64(&ctx, x as i64)).collect();
        points.iter().all(|p| !dot(&ctx, &f, &p.coords).is_zero()).then_some(f)
    };
    let mut found = None;
    'search: for s in 1..=(k as u64 * n.max(1)) {
        let mut w = vec![0u64; k];
        let mut out = None;
        compositions(s, n.max(1), &mut w, 0, &mut |w| {
            if gcd_all(w) != 1 {
                return false;
            }
            match admissible(w) {
                Some(f) => {
                    out = Some(f);
                    true
                }
                None => false,
            }
        });
        if out.is_some() {
            found = out;
            break 'search;
        }
    }
    let functional = found.ok_or_else(|| Error::Degenerate("no admissible dehomogenizing functional".into()))?;
    let drop = functional.iter().position(|x| !x.is_zero()).expect("nonzero functional");
    let pts = points
        .iter()
        .map(|p| {
            let inv = dot(&ctx, &functional, &p.coords).inv().expect("admissible");
            p.coords.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, x)| x.mul(&inv)).collect()
        })
        .collect();
    Ok(Dehomogenized { functional, points: pts })
}

// Visits weight vectors with entries in 0..=max summing to `rest`, earlier
// entries as large as possible first. Stops when `visit` returns true.
fn compositions(rest: u64, max: u64, w: &mut Vec<u64>, pos: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    if pos == w.len() - 1 {
        if rest > max {
            return false;
        }
        w[pos] = rest;
        let stop = visit(w);
        w[pos] = 0;
        return stop;
    }
    let remaining_cap = max * (w.len() - pos - 1) as u64;
    let lo = rest.saturating_sub(remaining_cap);
    for v in (lo..=rest.min(max)).rev() {
        w[pos] = v;
        if compositions(rest - v, max, w, pos + 1, visit) {
            w[pos] = 0;
            return true;
        }
    }
    w[pos] = 0;
    false
}

fn gcd_all(w: &[u64]) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    w.iter().fold(0, |g, &x| gcd(g, x))
}

/// The line through two distinct points of the plane.
pub fn join<F: Field>(p: &HomPoint<F>, q: &HomPoint<F>) -> Result<HomLine<F>> {
    check_plane(p.coords.len())?;
    check_plane(q.coords.len())?;
    if p.proj_eq(q) {
        return Err(Error::Degenerate("join of equal points".into()));
    }
    Ok(HomLine { coeffs: cross(&p.coords, &q.coords) })
}

/// The intersection point of two distinct lines.
pub fn meet<F: Field>(l: &HomLine<F>, m: &HomLine<F>) -> Result<HomPoint<F>> {
    if proj_eq(&l.coeffs, &m.coeffs) {
        return Err(Error::Degenerate("meet of equal lines".into()));
    }
    Ok(HomPoint { coords: cross(&l.coeffs, &m.coeffs) })
}

fn check_plane(len: usize) -> Result<()> {
    if len == 3 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("expected a point of the projective plane, got {len} coordinates")))
    }
}

/// Columns `v_i`, solved for `v_last = sum alpha_i v_i`; `None` if the first
/// `k` vectors are dependent.
fn frame_coefficients<F: Field>(vs: &[&[F]]) -> Option<(Matrix<F>, Vec<F>)> {
    let k = vs.len() - 1;
    let ctx = vs[0][0].ctx();
    let cols = Matrix::from_rows(&ctx, vs[..k].iter().map(|v| v.to_vec()).collect(), k).ok()?.transpose();
    let alpha = cols.solve(vs[k])?;
    Some((cols, alpha))
}

/// For `k + 1` vectors in general position in `F^k`, the matrix sending
/// `alpha_i v_i` to `e_i` and `v_{k+1}` to `e_1 + ... + e_k`.
pub fn frame_to_standard<F: Field>(vs: &[HomPoint<F>]) -> Result<Matrix<F>> {
    let k = vs.len().saturating_sub(1);
    if k == 0 || vs.iter().any(|v| v.coords.len() != k) {
        return Err(Error::Invalid(format!("a projective basis of {k}-space needs {} vectors of length {k}", k + 1)));
    }
    let refs: Vec<&[F]> = vs.iter().map(|v| v.coords.as_slice()).collect();
    let (cols, alpha) =
        frame_coefficients(&refs).ok_or_else(|| Error::Degenerate("frame vectors are linearly dependent".into()))?;
    if let Some(i) = alpha.iter().position(Field::is_zero) {
        return Err(Error::Degenerate(format!("frame is degenerate: coefficient {} vanishes", i + 1)));
    }
    let mut scaled = cols.clone();
    for i in 0..k {
        for j in 0..k {
            scaled.set(i, j, cols.get(i, j).mul(&alpha[j]));
        }
    }
    scaled.inverse().ok_or_else(|| Error::Degenerate("frame matrix is singular".into()))
}

/// Plane case of [`frame_to_standard`].
pub fn projective_basis_transform<F: Field>(v: &[HomPoint<F>; 4]) -> Result<Matrix<F>> {
    if v.iter().any(|p| p.coords.len() != 3) {
        return Err(Error::Invalid("projective basis of the plane needs points with 3 coordinates".into()));
    }
    frame_to_standard(v)
}

/// Normal of the hyperplane spanned by the given vectors, if they span one.
pub fn hyperplane_through<F: Field>(ctx: &F::Ctx, vs: &[Vec<F>], dim: usize) -> Option<Vec<F>> {
    let m = Matrix::from_rows(ctx, vs.to_vec(), dim).ok()?;
    let ns = m.nullspace();
    (ns.rows() == 1).then(|| ns.row(0).to_vec())
}

/// Sign of the side of `x` relative to the hyperplane `normal`, in affine
/// terms (the representative is made to have positive first coordinate).
pub fn affine_side<F: OrderedField>(normal: &[F], x: &[F]) -> i32 {
    let ctx = x[0].ctx();
    dot(&ctx, normal, x).signum() * x[0].signum()
}

/// Whether four homogeneous points of 3-space with nonzero first
/// coordinates form a flat convex quadrilateral in the given cyclic order.
pub fn quad_flat_convex<F: OrderedField>(q: &[Vec<F>]) -> bool {
    quad_status(q) == QuadStatus::FlatConvex
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadStatus {
    FlatConvex,
    NotFlat,
    NotConvex,
    /// All four corners on a line, or coincident corners.
    Degenerate,
    /// Some corner has first coordinate zero.
    AtInfinity,
}

/// Classification of a quadrilateral given by homogeneous points of any
/// dimension `>= 2`.
///
/// Flat means rank 3 of the homogenized rows. Convex means the normalized
/// affine corners turn the same strict way at every corner.
pub fn quad_status<F: OrderedField>(q: &[Vec<F>]) -> QuadStatus {
    assert_eq!(q.len(), 4, "a quad has 4 corners");
    if q.iter().any(|p| p[0].is_zero()) {
        return QuadStatus::AtInfinity;
    }
    let ctx = q[0][0].ctx();
    let dim = q[0].len();
    let m = Matrix::from_rows(&ctx, q.to_vec(), dim).expect("equal lengths");
    match m.rank() {
        r if r <= 2 => return QuadStatus::Degenerate,
        3 => {}
        _ => return QuadStatus::NotFlat,
    }
    let aff: Vec<Vec<F>> = q
        .iter()
        .map(|p| {
            let inv = p[0].inv().expect("checked nonzero");
            p[1..].iter().map(|x| x.mul(&inv)).collect()
        })
        .collect();
    // Project onto the coordinate plane where the quad has a nonzero
    // area; orientation is consistent within that projection.
    let d = dim - 1;
    let sub = |a: &[F], b: &[F]| -> Vec<F> { a.iter().zip(b).map(|(x, y)| x.sub(y)).collect() };
    for i in 0..d {
        for j in i + 1..d {
            let turn = |k: usize| {
                let e1 = sub(&aff[(k + 1) % 4], &aff[k]);
                let e2 = sub(&aff[(k + 2) % 4], &aff[(k + 1) % 4]);
                e1[i].mul(&e2[j]).sub(&e1[j].mul(&e2[i])).signum()
            };
            let signs: Vec<i32> = (0..4).map(turn).collect();
            if signs.iter().all(|&s| s == 0) {
                continue;
            }
            return if signs.iter().all(|&s| s == signs[0]) && signs[0] != 0 {
                QuadStatus::FlatConvex
            } else {
                QuadStatus::NotConvex
            };
        }
    }
    QuadStatus::Degenerate
}

/// Projective map of 3-space taking one flat convex quad to another.
///
/// The source frame is the corners `c1, c2, c3` (scaled so that their
/// combination is `c4`) together with the first auxiliary vector; the target
/// frame likewise. The homogeneous scale of the auxiliary vectors matters: it
/// is the one free parameter of such maps. The second auxiliary points fix
/// orientation: the image of `source_aux[1]` must lie on the same side of
/// the target plane as `target_aux[1]`.
pub fn space_map_quad<F: OrderedField>(
    source: &[HomPoint<F>; 4],
    source_aux: &[HomPoint<F>; 2],
    target: &[HomPoint<F>; 4],
    target_aux: &[HomPoint<F>; 2],
) -> Result<Matrix<F>> {
    let all = source.iter().chain(source_aux).chain(target).chain(target_aux);
    if all.clone().any(|p| p.coords.len() != 4) {
        return Err(Error::Invalid("space_map_quad needs points with 4 homogeneous coordinates".into()));
    }
    let ctx = source[0].coords[0].ctx();
    let frame = |quad: &[HomPoint<F>; 4], aux: &HomPoint<F>, what: &str| -> Result<Matrix<F>> {
        let rows: Vec<Vec<F>> = quad.iter().map(|p| p.coords.clone()).collect();
        match quad_status(&rows) {
            QuadStatus::FlatConvex => {}
            s => return Err(Error::Degenerate(format!("{what} quad is not flat and convex ({s:?})"))),
        }
        let refs: Vec<&[F]> = quad[..3].iter().map(|p| p.coords.as_slice()).collect();
        let cols =
            Matrix::from_rows(&ctx, refs.iter().map(|r| r.to_vec()).collect(), 4).expect("equal lengths").transpose();
        // c4 = sum alpha_i c_i, solved through the normal equations of the
        // 4x3 system (it is consistent because the quad is flat).
        let gram = cols.transpose().mul(&cols);
        let rhs = cols.transpose().mul_vec(&quad[3].coords);
        let alpha = gram.solve(&rhs).ok_or_else(|| Error::Degenerate(format!("{what} corners are dependent")))?;
        if alpha.iter().any(Field::is_zero) {
            return Err(Error::Degenerate(format!("{what} quad has three collinear corners")));
        }
        let mut m = Matrix::zeros(&ctx, 4, 4);
        for r in 0..4 {
            for c in 0..3 {
                m.set(r, c, cols.get(r, c).mul(&alpha[c]));
            }
            m.set(r, 3, aux.coords[r].clone());
        }
        if m.determinant().expect("square").is_zero() {
            return Err(Error::Degenerate(format!("{what} auxiliary point lies in the quad plane")));
        }
        Ok(m)
    };
    let s = frame(source, &source_aux[0], "source")?;
    let t = frame(target, &target_aux[0], "target")?;
    let m = t.mul(&s.inverse().expect("nonsingular frame"));
    let target_rows: Vec<Vec<F>> = target[..3].iter().map(|p| p.coords.clone()).collect();
    let normal = hyperplane_through(&ctx, &target_rows, 4).expect("target spans a plane");
    let image = m.mul_vec(&source_aux[1].coords);
    if image[0].is_zero() {
        return Err(Error::Degenerate("orientation point is sent to infinity".into()));
    }
    let want = affine_side(&normal, &target_aux[1].coords);
    let got = affine_side(&normal, &image);
    if want == 0 || got != want {
        return Err(Error::Degenerate("map does not preserve the requested side of the quad plane".into()));
    }
    Ok(m)
}
