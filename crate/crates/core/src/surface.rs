//! Quad meshes and the partial surfaces built from Toblerone-torus gadgets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::config::{derive_nonrationality, parse_script, PENTAGON11_SCRIPT};
use crate::error::{Error, Result};
use crate::exactnum::{rat, to_decimal_string, ExactText, Field, Matrix, OrderedField, QuadExt, Rational};
use crate::projgeom::{dehomogenize, quad_status, space_map_quad, HomPoint, QuadStatus};

fn sub3<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn add3<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn scale3<F: Field>(a: &[F], c: &F) -> Vec<F> {
    a.iter().map(|x| x.mul(c)).collect()
}

fn dot3<F: Field>(a: &[F], b: &[F]) -> F {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn cross3<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    vec![
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn l1<F: OrderedField>(a: &[F]) -> F {
    let ctx = a[0].ctx();
    a.iter().fold(F::zero(&ctx), |s, x| s.add(&x.abs()))
}

fn hom<F: Field>(p: &[F]) -> Vec<F> {
    let mut h = vec![F::one(&p[0].ctx())];
    h.extend(p.iter().cloned());
    h
}

/// Orientation normal `(c1 - c0) x (c3 - c0)` of a quad.
pub fn quad_normal<F: Field>(q: &[Vec<F>]) -> Vec<F> {
    cross3(&sub3(&q[1], &q[0]), &sub3(&q[3], &q[0]))
}

/// Polyhedral surface of quadrilaterals with exact vertex coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadMesh<F: Field> {
    ctx: F::Ctx,
    vertices: Vec<Vec<F>>,
    faces: Vec<[usize; 4]>,
    tags: BTreeMap<String, usize>,
}

impl<F: OrderedField> QuadMesh<F> {
    pub fn new(ctx: &F::Ctx) -> Self {
        Self { ctx: ctx.clone(), vertices: Vec::new(), faces: Vec::new(), tags: BTreeMap::new() }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 4]] {
        &self.faces
    }

    pub fn tags(&self) -> &BTreeMap<String, usize> {
        &self.tags
    }

    pub fn tag(&self, name: &str) -> Option<usize> {
        self.tags.get(name).copied()
    }

    pub fn vertex(&self, id: usize) -> &[F] {
        &self.vertices[id]
    }

    pub fn add_vertex(&mut self, p: Vec<F>) -> usize {
        assert_eq!(p.len(), 3, "mesh vertices live in 3-space");
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    pub fn add_face(&mut self, f: [usize; 4]) -> Result<()> {
        let distinct: BTreeSet<usize> = f.iter().copied().collect();
        if distinct.len() != 4 || f.iter().any(|&v| v >= self.vertices.len()) {
            return Err(Error::Invalid(format!("face {f:?} needs 4 distinct existing vertices")));
        }
        self.faces.push(f);
        Ok(())
    }

    pub fn set_tag(&mut self, name: impl Into<String>, id: usize) {
        self.tags.insert(name.into(), id);
    }

    pub fn face_points(&self, f: usize) -> Vec<Vec<F>> {
        self.faces[f].iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Homogenized rows `(1, x, y, z)` of the given vertices.
    pub fn homogenized(&self, ids: &[usize]) -> Matrix<F> {
        let rows = ids.iter().map(|&v| hom(&self.vertices[v])).collect();
        Matrix::from_rows(&self.ctx, rows, 4).expect("uniform")
    }

    /// Copies `other` into `self`, identifying `other`'s vertex `o` with
    /// `self`'s vertex `s` for each `(o, s)`; identified vertices must have
    /// equal coordinates. Tags of `other` are kept under `prefix`. Returns
    /// the vertex map.
    pub fn merge(&mut self, other: &QuadMesh<F>, identify: &[(usize, usize)], prefix: &str) -> Result<Vec<usize>> {
        let fixed: HashMap<usize, usize> = identify.iter().copied().collect();
        let mut map = Vec::with_capacity(other.vertices.len());
        for (o, p) in other.vertices.iter().enumerate() {
            match fixed.get(&o) {
                Some(&s) => {
                    if self.vertices[s] != *p {
                        return Err(Error::Invalid(format!("gluing collision: vertex {} and {} differ", o + 1, s + 1)));
                    }
                    map.push(s);
                }
                None => map.push(self.add_vertex(p.clone())),
            }
        }
        for f in &other.faces {
            self.add_face(f.map(|v| map[v]))?;
        }
        if !prefix.is_empty() {
            for (name, &v) in &other.tags {
                self.tags.insert(format!("{prefix}{name}"), map[v]);
            }
        }
        Ok(map)
    }

    /// Applies a projective map of 3-space; fails if it sends a vertex to
    /// infinity or separates two vertices by the preimage of the plane at
    /// infinity.
    pub fn map_projective(&self, m: &Matrix<F>) -> Result<Self> {
        let mut sign = 0;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for p in &self.vertices {
            let img = m.mul_vec(&hom(p));
            let s = img[0].signum();
            if s == 0 || (sign != 0 && s != sign) {
                return Err(Error::Degenerate("projective map sends part of the mesh through infinity".into()));
            }
            sign = s;
            let inv = img[0].inv().expect("nonzero");
            vertices.push(img[1..].iter().map(|x| x.mul(&inv)).collect());
        }
        Ok(Self { ctx: self.ctx.clone(), vertices, faces: self.faces.clone(), tags: self.tags.clone() })
    }
}

/// Per-face flatness and convexity verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatConvexReport {
    pub statuses: Vec<QuadStatus>,
}

impl FlatConvexReport {
    pub fn failures(&self) -> Vec<(usize, QuadStatus)> {
        self.statuses.iter().copied().enumerate().filter(|(_, s)| *s != QuadStatus::FlatConvex).collect()
    }

    pub fn all_ok(&self) -> bool {
        self.statuses.iter().all(|s| *s == QuadStatus::FlatConvex)
    }
}

pub fn verify_flat_convex<F: OrderedField>(m: &QuadMesh<F>) -> FlatConvexReport {
    let statuses = (0..m.faces.len())
        .map(|f| {
            let q: Vec<Vec<F>> = m.face_points(f).iter().map(|p| hom(p)).collect();
            quad_status(&q)
        })
        .collect();
    FlatConvexReport { statuses }
}

fn face_edges(f: &[usize; 4]) -> [BTreeSet<usize>; 4] {
    std::array::from_fn(|k| [f[k], f[(k + 1) % 4]].into_iter().collect())
}

/// Pairs of faces that share more than two vertices, or two vertices that
/// are not an edge of both.
pub fn combinatorial_violations<F: OrderedField>(m: &QuadMesh<F>) -> Vec<(usize, usize)> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, f) in m.faces.iter().enumerate() {
        for &v in f {
            incident.entry(v).or_default().push(i);
        }
    }
    let mut bad = Vec::new();
    for (i, f) in m.faces.iter().enumerate() {
        let mut shared: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &v in f {
            for &j in &incident[&v] {
                if j > i {
                    shared.entry(j).or_default().insert(v);
                }
            }
        }
        for (j, s) in shared {
            let ok = match s.len() {
                0 | 1 => true,
                2 => face_edges(f).contains(&s) && face_edges(&m.faces[j]).contains(&s),
                _ => false,
            };
            if !ok {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// The 3x3 torus: vertex `(k, j)` is `3k + j`, face `(k, j)` is
/// `[(k,j), (k,j+1), (k+1,j+1), (k+1,j)]`, listed in order `3k + j`.
pub fn toblerone_abstract() -> Vec<[usize; 4]> {
    let v = |k: usize, j: usize| 3 * (k % 3) + j % 3;
    (0..3).flat_map(|k| (0..3).map(move |j| [v(k, j), v(k, j + 1), v(k + 1, j + 1), v(k + 1, j)])).collect()
}

/// Toblerone torus with one face missing; `boundary` lists the corners of
/// the missing face in cyclic order.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetRealization<F: Field> {
    pub mesh: QuadMesh<F>,
    pub boundary: [usize; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn sign(self) -> i32 {
        match self {
            Side::Above => 1,
            Side::Below => -1,
        }
    }

    fn flip(self) -> Self {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }
}

/// Verdicts on a gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub faces: FlatConvexReport,
    pub boundary: QuadStatus,
    /// Face pairs whose intersection could not be shown to be their common
    /// vertices.
    pub intersections: Vec<(usize, usize)>,
}

impl GadgetReport {
    pub fn all_ok(&self) -> bool {
        self.faces.all_ok() && self.boundary == QuadStatus::FlatConvex && self.intersections.is_empty()
    }
}

impl<F: OrderedField> GadgetRealization<F> {
    pub fn boundary_points(&self) -> Vec<Vec<F>> {
        self.boundary.iter().map(|&v| self.mesh.vertex(v).to_vec()).collect()
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.mesh.vertices.len()).filter(|v| !self.boundary.contains(v)).collect()
    }

    pub fn verify(&self) -> GadgetReport {
        let q: Vec<Vec<F>> = self.boundary_points().iter().map(|p| hom(p)).collect();
        GadgetReport {
            faces: verify_flat_convex(&self.mesh),
            boundary: quad_status(&q),
            intersections: face_intersections(&self.mesh),
        }
    }

    /// Side of the interior vertices relative to the boundary orientation
    /// normal, or `None` if they are not strictly on one side.
    pub fn interior_side(&self) -> Option<Side> {
        let b = self.boundary_points();
        let n = quad_normal(&b);
        let signs: BTreeSet<i32> =
            self.interior().iter().map(|&v| dot3(&n, &sub3(self.mesh.vertex(v), &b[0])).signum()).collect();
        match signs.into_iter().collect::<Vec<_>>()[..] {
            [1] => Some(Side::Above),
            [-1] => Some(Side::Below),
            _ => None,
        }
    }
}

/// Sufficient test that two convex faces meet only in their shared
/// vertices: the unshared vertices of one face lie strictly on one side of
/// the other's plane. Pairs failing the test in both directions are
/// reported.
pub fn face_intersections<F: OrderedField>(m: &QuadMesh<F>) -> Vec<(usize, usize)> {
    let separated = |f: usize, g: usize| -> bool {
        let pf = m.face_points(f);
        let n = quad_normal(&pf);
        let shared: BTreeSet<usize> = m.faces[f].iter().copied().collect();
        let sides: BTreeSet<i32> = m.faces[g]
            .iter()
            .filter(|v| !shared.contains(v))
            .map(|&v| dot3(&n, &sub3(m.vertex(v), &pf[0])).signum())
            .collect();
        sides.len() == 1 && !sides.contains(&0)
    };
    let mut bad = Vec::new();
    for f in 0..m.faces.len() {
        for g in f + 1..m.faces.len() {
            if !separated(f, g) && !separated(g, f) {
                bad.push((f, g));
            }
        }
    }
    bad
}

const GADGET_DIRECTIONS: [(i64, i64); 3] = [(2, 0), (-1, 2), (-1, -2)];
const GADGET_SECTION: [(i64, i64); 3] = [(2, 0), (4, 1), (3, 3)];

/// Rational gadget: three triangular prisms around the z-axis whose
/// sections are the triangle with radii/heights [`GADGET_SECTION`] placed
/// along the directions [`GADGET_DIRECTIONS`]. The missing face is face
/// `(0, 0)`.
pub fn reference_gadget() -> GadgetRealization<Rational> {
    let mut mesh = QuadMesh::new(&());
    for &(ux, uy) in &GADGET_DIRECTIONS {
        for &(r, z) in &GADGET_SECTION {
            mesh.add_vertex(vec![rat(r * ux), rat(r * uy), rat(z)]);
        }
    }
    let faces = toblerone_abstract();
    for f in &faces[1..] {
        mesh.add_face(*f).expect("valid torus face");
    }
    GadgetRealization { mesh, boundary: faces[0] }
}

fn convert_gadget<F: OrderedField>(ctx: &F::Ctx, g: &GadgetRealization<Rational>) -> GadgetRealization<F> {
    let mut mesh = QuadMesh::new(ctx);
    for p in &g.mesh.vertices {
        mesh.add_vertex(p.iter().map(|x| F::from_rational(ctx, x)).collect());
    }
    mesh.faces = g.mesh.faces.clone();
    GadgetRealization { mesh, boundary: g.boundary }
}

/// Auxiliary point over a quad: its vertex centroid moved off the plane
/// along the orientation normal, scaled to the size of the first edge.
fn quad_aux<F: OrderedField>(q: &[Vec<F>], side: Side) -> Vec<F> {
    let ctx = q[0][0].ctx();
    let quarter = F::from_rational(&ctx, &Rational::new(1.into(), 4.into()));
    let centroid = scale3(&q.iter().skip(1).fold(q[0].clone(), |s, p| add3(&s, p)), &quarter);
    let n = quad_normal(q);
    let size = l1(&sub3(&q[1], &q[0])).checked_div(&l1(&n)).expect("flat quad has a normal");
    let size = if side == Side::Below { size.neg() } else { size };
    add3(&centroid, &scale3(&n, &size))
}

const MU_LADDER: u32 = 64;

/// Glues the reference gadget onto a flat convex quad by a projective map
/// of 3-space, with the interior vertices on the requested side of the
/// target's orientation normal `(t1 - t0) x (t3 - t0)`.
pub fn gadget_on_quad<F: OrderedField>(target: &[Vec<F>; 4], side: Side) -> Result<GadgetRealization<F>> {
    let ctx = target[0][0].ctx();
    let tq: Vec<Vec<F>> = target.iter().map(|p| hom(p)).collect();
    match quad_status(&tq) {
        QuadStatus::FlatConvex => {}
        s => return Err(Error::Degenerate(format!("target quad is not flat and convex ({s:?})"))),
    }
    let reference = convert_gadget::<F>(&ctx, &reference_gadget());
    let sb = reference.boundary_points();
    let hp = |v: Vec<F>| HomPoint::new(v).expect("nonzero");
    let source: [HomPoint<F>; 4] = std::array::from_fn(|k| hp(hom(&sb[k])));
    let target_h: [HomPoint<F>; 4] = std::array::from_fn(|k| hp(tq[k].clone()));
    let source_aux = hom(&quad_aux(&sb, Side::Above));
    let target_aux = hom(&quad_aux(target, side));
    let interior_ref = reference.interior();
    let mut mu = F::one(&ctx);
    let two = F::from_i64(&ctx, 2);
    for _ in 0..MU_LADDER {
        let scaled: Vec<F> = target_aux.iter().map(|x| x.mul(&mu)).collect();
        let m = space_map_quad(
            &source,
            &[hp(source_aux.clone()), hp(hom(reference.mesh.vertex(interior_ref[0])))],
            &target_h,
            &[hp(scaled), hp(target_aux.clone())],
        );
        mu = mu.mul(&two);
        let Ok(m) = m else { continue };
        let Ok(mut mesh) = reference.mesh.map_projective(&m) else { continue };
        for (k, &v) in reference.boundary.iter().enumerate() {
            debug_assert_eq!(mesh.vertices[v], target[k]);
            mesh.vertices[v] = target[k].clone();
        }
        let g = GadgetRealization { mesh, boundary: reference.boundary };
        if g.interior_side() == Some(side) && g.verify().all_ok() {
            return Ok(g);
        }
    }
    Err(Error::Degenerate("no auxiliary frame keeps the gadget away from infinity".into()))
}

/// Labels of the nine special points.
pub const SPECIAL_LABELS: [&str; 9] = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];

/// Black quads `adih, bfid, cgfe` (glued above the special plane).
pub const S48_BLACK: [[usize; 4]; 3] = [[0, 3, 8, 7], [1, 5, 8, 3], [2, 6, 5, 4]];
/// Grey quads `bdhi, bfge, cegi` (glued below).
pub const S48_GREY: [[usize; 4]; 3] = [[1, 3, 7, 8], [1, 5, 6, 4], [2, 4, 6, 8]];

/// Planar template for the special points, with `a, b, c` on the x-axis at
/// 0, 3 and 6.
pub fn s48_template() -> [Vec<Rational>; 9] {
    const XY: [(i64, i64); 9] = [(0, 0), (3, 0), (6, 0), (0, -4), (6, -1), (3, 1), (4, 1), (1, 3), (2, 4)];
    XY.map(|(x, y)| vec![rat(x), rat(y)])
}

/// Places the template in the plane through `a` spanned by `c - a` and `w`,
/// with `a, c` at the given points and `b` at `a + t (c - a)`, by a
/// projective map of the template plane fixing the line `abc`.
pub fn place_special_points<F: OrderedField>(a: &[F], c: &[F], w: &[F], t: &F) -> Result<[Vec<F>; 9]> {
    let ctx = a[0].ctx();
    let (zero, one) = (F::zero(&ctx), F::one(&ctx));
    if !(t.cmp_exact(&zero).is_gt() && t.cmp_exact(&one).is_lt()) {
        return Err(Error::Invalid("middle anchor must lie strictly between the others".into()));
    }
    let lambda = one.sub(t).checked_div(t).expect("t > 0");
    let sixth = F::from_rational(&ctx, &Rational::new(1.into(), 6.into()));
    let d = sub3(c, a);
    Ok(s48_template().map(|xy| {
        let x = F::from_rational(&ctx, &xy[0]).mul(&sixth);
        let y = F::from_rational(&ctx, &xy[1]).mul(&sixth);
        let den = lambda.add(&one.sub(&lambda).mul(&x)).inv().expect("positive on the template");
        add3(&add3(a, &scale3(&d, &x.mul(&den))), &scale3(w, &y.mul(&den)))
    }))
}

/// Partial surface of six gadgets glued onto quads of nine coplanar special
/// points: black quads above the plane (relative to the orientation of the
/// first black quad), grey quads below.
pub fn build_s48<F: OrderedField>(
    special: &[Vec<F>; 9],
    black: &[[usize; 4]; 3],
    grey: &[[usize; 4]; 3],
) -> Result<QuadMesh<F>> {
    let ctx = special[0][0].ctx();
    let mut mesh = QuadMesh::new(&ctx);
    for (p, name) in special.iter().zip(SPECIAL_LABELS) {
        let id = mesh.add_vertex(p.clone());
        mesh.set_tag(name, id);
    }
    if mesh.homogenized(&(0..9).collect::<Vec<_>>()).rank() != 3 {
        return Err(Error::Degenerate("special points are not coplanar".into()));
    }
    let corners = |q: &[usize; 4]| -> [Vec<F>; 4] { q.map(|v| special[v].clone()) };
    let plane_normal = quad_normal(&corners(&black[0]));
    for (quads, side) in [(black, Side::Above), (grey, Side::Below)] {
        for q in quads {
            let c = corners(q);
            let own = dot3(&quad_normal(&c), &plane_normal).signum();
            let local = match own {
                1 => side,
                -1 => side.flip(),
                _ => return Err(Error::Degenerate(format!("quad {q:?} is not flat and convex"))),
            };
            let g = gadget_on_quad(&c, local)?;
            let identify: Vec<(usize, usize)> = g.boundary.iter().copied().zip(q.iter().copied()).collect();
            mesh.merge(&g.mesh, &identify, "")?;
        }
    }
    Ok(mesh)
}

/// Default S48 in the plane z = 0.
pub fn default_s48() -> Result<QuadMesh<Rational>> {
    let special = s48_template().map(|p| vec![p[0].clone(), p[1].clone(), rat(0)]);
    build_s48(&special, &S48_BLACK, &S48_GREY)
}

/// Copy-plane directions for S144: `(cos, sin)` pairs applied to an
/// in-plane and an out-of-plane perpendicular of the anchor line.
const COPY_TURNS: [(i64, i64, i64); 3] = [(4, 3, 5), (0, 1, 1), (-4, 3, 5)];

/// Three S48 copies in three planes through the line of `a, b, c`,
/// identified at the anchors. Copy `k` tags its special points `d1..i3`
/// style (`<label><k+1>`); the anchors are tagged `a, b, c`.
pub fn build_s144<F: OrderedField>(anchor: &[Vec<F>; 3]) -> Result<QuadMesh<F>> {
    let ctx = anchor[0][0].ctx();
    let [a, b, c] = anchor;
    let d = sub3(c, a);
    let len2 = dot3(&d, &d);
    if len2.is_zero() || a == b || b == c {
        return Err(Error::Degenerate("anchors must be distinct".into()));
    }
    if cross3(&d, &sub3(b, a)).iter().any(|x| !x.is_zero()) {
        return Err(Error::Degenerate("anchors are not collinear".into()));
    }
    let t = dot3(&sub3(b, a), &d).checked_div(&len2).expect("nonzero");
    let axis = (0..3).min_by(|&i, &j| d[i].abs().cmp_exact(&d[j].abs())).expect("3 axes");
    let mut e = vec![F::zero(&ctx); 3];
    e[axis] = F::one(&ctx);
    let p1 = cross3(&d, &e);
    let p2 = scale3(&cross3(&d, &p1), &l1(&d).inv().expect("nonzero"));
    let mut mesh = QuadMesh::new(&ctx);
    let ids: Vec<usize> = anchor.iter().map(|p| mesh.add_vertex(p.clone())).collect();
    for (name, &id) in ["a", "b", "c"].iter().zip(&ids) {
        mesh.set_tag(*name, id);
    }
    for (k, &(cs, sn, den)) in COPY_TURNS.iter().enumerate() {
        let q = |v: i64| F::from_rational(&ctx, &Rational::new(v.into(), den.into()));
        let w = add3(&scale3(&p1, &q(cs)), &scale3(&p2, &q(sn)));
        let special = place_special_points(a, c, &w, &t)?;
        let s48 = build_s48(&special, &S48_BLACK, &S48_GREY)?;
        let map = mesh.merge(&s48, &[(0, ids[0]), (1, ids[1]), (2, ids[2])], "")?;
        for (v, name) in SPECIAL_LABELS.iter().enumerate().skip(3) {
            mesh.set_tag(format!("{name}{}", k + 1), map[v]);
        }
    }
    Ok(mesh)
}

/// Default S144 anchored at (0,0,0), (3,0,0), (6,0,0).
pub fn default_s144() -> Result<QuadMesh<Rational>> {
    let p = |x: i64| vec![rat(x), rat(0), rat(0)];
    build_s144(&[p(0), p(3), p(6)])
}

/// Which collinear triples of the pentagon configuration receive an S144.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    /// Every 3-subset of every line.
    All,
    /// One triple per line, from its first three points.
    PerLine,
}

/// Sorts three collinear points along their line.
fn sort_along<F: OrderedField>(pts: &[Vec<F>], triple: [usize; 3]) -> [usize; 3] {
    let d = sub3(&pts[triple[1]], &pts[triple[0]]);
    let mut t = triple.to_vec();
    t.sort_by(|&i, &j| dot3(&pts[i], &d).cmp_exact(&dot3(&pts[j], &d)));
    [t[0], t[1], t[2]]
}

/// Triples of a configuration's lines under the given interpretation,
/// zero-based and unsorted.
pub fn pentagon_triples(lines: &[Vec<usize>], mode: TripleMode) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for line in lines {
        match mode {
            TripleMode::PerLine => out.push([line[0], line[1], line[2]]),
            TripleMode::All => {
                for i in 0..line.len() {
                    for j in i + 1..line.len() {
                        for k in j + 1..line.len() {
                            out.push([line[i], line[j], line[k]]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The pentagon realization over `Q(sqrt 5)` in the plane z = 0 with one
/// S144 glued onto each selected collinear triple. Points are tagged
/// `p1..p11`.
pub fn build_pentagon_surface(mode: TripleMode) -> Result<QuadMesh<QuadExt>> {
    let cert = derive_nonrationality(&parse_script(PENTAGON11_SCRIPT)?)?;
    let hom_pts: Vec<HomPoint<QuadExt>> =
        cert.realization.coords().row_vecs().into_iter().map(HomPoint::new).collect::<Result<_>>()?;
    let affine = dehomogenize(&hom_pts)?.points;
    let ctx = affine[0][0].ctx();
    let pts: Vec<Vec<QuadExt>> = affine.iter().map(|p| vec![p[0].clone(), p[1].clone(), QuadExt::zero(&ctx)]).collect();
    let mut mesh = QuadMesh::new(&ctx);
    for (i, p) in pts.iter().enumerate() {
        let id = mesh.add_vertex(p.clone());
        mesh.set_tag(format!("p{}", i + 1), id);
    }
    for triple in pentagon_triples(cert.configuration.lines(), mode) {
        let [i, j, k] = sort_along(&pts, triple);
        let s144 = build_s144(&[pts[i].clone(), pts[j].clone(), pts[k].clone()])?;
        mesh.merge(&s144, &[(0, i), (1, j), (2, k)], "")?;
    }
    Ok(mesh)
}

/// Mesh JSON: 1-based vertex ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshJson {
    pub field: String,
    pub vertices: BTreeMap<usize, [String; 3]>,
    pub faces: Vec<[usize; 4]>,
    pub tags: BTreeMap<String, usize>,
}

impl<F: OrderedField + ExactText> QuadMesh<F> {
    pub fn to_json(&self) -> MeshJson {
        MeshJson {
            field: F::field_name(&self.ctx),
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, p)| (i + 1, std::array::from_fn(|k| p[k].to_exact_string())))
                .collect(),
            faces: self.faces.iter().map(|f| f.map(|v| v + 1)).collect(),
            tags: self.tags.iter().map(|(k, &v)| (k.clone(), v + 1)).collect(),
        }
    }

    pub fn from_json(ctx: &F::Ctx, j: &MeshJson) -> Result<Self> {
        if j.field != F::field_name(ctx) {
            return Err(Error::Invalid(format!("mesh field {} does not match {}", j.field, F::field_name(ctx))));
        }
        let mut mesh = Self::new(ctx);
        for (expect, (&id, coords)) in (1..).zip(&j.vertices) {
            if id != expect {
                return Err(Error::Invalid(format!("vertex ids must be 1..n, found {id}")));
            }
            let p = coords.iter().map(|s| F::parse_exact(ctx, s).map_err(Error::Invalid)).collect::<Result<_>>()?;
            mesh.add_vertex(p);
        }
        let n = mesh.vertices.len();
        let fix = |v: usize| -> Result<usize> {
            (1..=n).contains(&v).then(|| v - 1).ok_or_else(|| Error::Invalid(format!("vertex id {v} out of range")))
        };
        for f in &j.faces {
            let f = [fix(f[0])?, fix(f[1])?, fix(f[2])?, fix(f[3])?];
            mesh.add_face(f)?;
        }
        for (k, &v) in &j.tags {
            mesh.tags.insert(k.clone(), fix(v)?);
        }
        Ok(mesh)
    }
}

/// Wavefront OBJ text (coordinates correctly rounded to `precision`
/// digits) and the exact side-car JSON.
pub fn export_obj<F: OrderedField + ExactText>(m: &QuadMesh<F>, precision: usize) -> (String, String) {
    let mut obj = String::new();
    for p in &m.vertices {
        let c: Vec<String> = p.iter().map(|x| to_decimal_string(x, precision)).collect();
        obj.push_str(&format!("v {}\n", c.join(" ")));
    }
    for f in &m.faces {
        obj.push_str(&format!("f {} {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1));
    }
    let exact = serde_json::to_string_pretty(&m.to_json()).expect("serializable");
    (obj, exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(v: [i64; 3]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn single_face(pts: [[i64; 3]; 4]) -> QuadMesh<Rational> {
        let mut m = QuadMesh::new(&());
        for p in pts {
            m.add_vertex(p3(p));
        }
        m.add_face([0, 1, 2, 3]).unwrap();
        m
    }

    #[test]
    fn face_verdicts() {
        let sq = single_face([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]);
        assert!(verify_flat_convex(&sq).all_ok());
        let bent = single_face([[0, 0, 0], [1, 0, 0], [1, 1, 1], [0, 1, 0]]);
        assert_eq!(verify_flat_convex(&bent).statuses, vec![QuadStatus::NotFlat]);
        let bowtie = single_face([[0, 0, 0], [1, 1, 0], [1, 0, 0], [0, 1, 0]]);
        assert_eq!(verify_flat_convex(&bowtie).statuses, vec![QuadStatus::NotConvex]);
    }

    #[test]
    fn torus_combinatorics() {
        let faces = toblerone_abstract();
        assert_eq!(faces.len(), 9);
        let edges: BTreeSet<BTreeSet<usize>> = faces.iter().flat_map(face_edges).collect();
        assert_eq!(edges.len(), 18);
        assert_eq!(9 - 18 + 9, 0);
        for v in 0..9 {
            let deg = edges.iter().filter(|e| e.contains(&v)).count();
            assert_eq!(deg, 4);
        }
    }

    #[test]
    fn reference_gadget_verifies() {
        let g = reference_gadget();
        let r = g.verify();
        assert!(r.all_ok(), "{r:?}");
        assert_eq!(g.boundary_points(), vec![p3([4, 0, 0]), p3([8, 0, 1]), p3([-4, 8, 1]), p3([-2, 4, 0])]);
        assert_eq!(quad_normal(&g.boundary_points()), p3([-4, -6, 16]));
        assert_eq!(g.interior_side(), Some(Side::Above));
        assert!(combinatorial_violations(&g.mesh).is_empty());
    }

    #[test]
    fn gadget_on_reference_quad_is_identity() {
        let g = reference_gadget();
        let b = g.boundary_points();
        let mapped = gadget_on_quad(&[b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()], Side::Above).unwrap();
        assert_eq!(mapped, g);
    }

    #[test]
    fn gadget_on_unit_square() {
        let sq = [p3([0, 0, 0]), p3([1, 0, 0]), p3([1, 1, 0]), p3([0, 1, 0])];
        for side in [Side::Above, Side::Below] {
            let g = gadget_on_quad(&sq, side).unwrap();
            assert!(g.verify().all_ok());
            let want = side.sign();
            assert!(g.interior().iter().all(|&v| g.mesh.vertex(v)[2].signum() == want));
        }
        let bad = [p3([0, 0, 0]), p3([1, 0, 0]), p3([2, 0, 0]), p3([0, 1, 0])];
        assert!(gadget_on_quad(&bad, Side::Above).is_err());
    }

    #[test]
    fn template_quads_convex() {
        let t = s48_template().map(|p| vec![rat(1), p[0].clone(), p[1].clone()]);
        for q in S48_BLACK.iter().chain(&S48_GREY) {
            let rows: Vec<Vec<Rational>> = q.iter().map(|&v| t[v].clone()).collect();
            assert_eq!(quad_status(&rows), QuadStatus::FlatConvex, "{q:?}");
        }
    }

    #[test]
    fn s48_counts() {
        let m = default_s48().unwrap();
        assert_eq!((m.faces().len(), m.vertices().len()), (48, 39));
        assert!(verify_flat_convex(&m).all_ok());
        assert_eq!(m.homogenized(&(0..9).collect::<Vec<_>>()).rank(), 3);
        assert!(combinatorial_violations(&m).is_empty());
    }

    #[test]
    fn obj_export() {
        let mut m = single_face([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]);
        m.vertices[1][0] = Rational::new(1.into(), 3.into());
        let (obj, exact) = export_obj(&m, 6);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 1);
        assert!(obj.contains("v 0.333333 0.000000 0.000000"));
        let back: MeshJson = serde_json::from_str(&exact).unwrap();
        assert_eq!(QuadMesh::from_json(&(), &back).unwrap(), m);
    }

    #[test]
    fn s144_counts() {
        let m = default_s144().unwrap();
        assert_eq!((m.faces().len(), m.vertices().len()), (144, 111));
        assert!(verify_flat_convex(&m).all_ok());
        let abc: Vec<usize> = ["a", "b", "c"].iter().map(|t| m.tag(t).unwrap()).collect();
        assert_eq!(m.homogenized(&abc).rank(), 2);
        assert!(combinatorial_violations(&m).is_empty());
    }

    #[test]
    fn pentagon_surface_per_line() {
        let m = build_pentagon_surface(TripleMode::PerLine).unwrap();
        assert_eq!(m.faces().len(), 10 * 144);
        assert!(verify_flat_convex(&m).all_ok());
        assert!(combinatorial_violations(&m).is_empty());
    }
}
