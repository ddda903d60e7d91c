//! Incidence configurations, their realizations, the construction-script
//! language and the polynomial system describing all realizations.

mod construct;
mod script;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ExactText, Field, Matrix};
use crate::projgeom::{det3, proj_eq};

pub use construct::{derive_nonrationality, run_construction, Construction, NonRationalityCertificate, Requirement};
pub use script::{parse_script, ConstructionScript, Expr, Statement, Stmt};

pub const PENTAGON11_SCRIPT: &str = include_str!("../../assets/pentagon11.construct");
pub const PENTAGON9_SCRIPT: &str = include_str!("../../assets/pentagon9.construct");
pub const RATIONAL_SQUARE_SCRIPT: &str = include_str!("../../assets/square_rational.construct");

/// Source text of a bundled script by name (`pentagon11`, `pentagon9`,
/// `square-rational`).
pub fn builtin_script(name: &str) -> Option<&'static str> {
    match name {
        "pentagon11" | "pentagon" => Some(PENTAGON11_SCRIPT),
        "pentagon9" => Some(PENTAGON9_SCRIPT),
        "square-rational" => Some(RATIONAL_SQUARE_SCRIPT),
        _ => None,
    }
}

/// Points `0..n` and the lines (sets of at least three points) that must be
/// collinear. Indices are zero-based; the JSON form is one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractConfiguration {
    n: usize,
    lines: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl AbstractConfiguration {
    pub fn new(n: usize, lines: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let mut norm = Vec::with_capacity(lines.len());
        for (li, line) in lines.into_iter().enumerate() {
            let set: BTreeSet<usize> = line.iter().copied().collect();
            if set.len() != line.len() {
                return Err(Error::Invalid(format!("line {} repeats a point", li + 1)));
            }
            if set.len() < 3 {
                return Err(Error::Invalid(format!("line {} has fewer than 3 points", li + 1)));
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= n) {
                return Err(Error::Invalid(format!("line {} uses point {} but n = {n}", li + 1, bad + 1)));
            }
            norm.push(set.into_iter().collect::<Vec<_>>());
        }
        for i in 0..norm.len() {
            for j in i + 1..norm.len() {
                let shared = norm[i].iter().filter(|p| norm[j].contains(p)).count();
                if shared > 1 {
                    return Err(Error::Invalid(format!("lines {} and {} share {shared} points", i + 1, j + 1)));
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Invalid(format!("{} labels for {n} points", l.len())));
            }
        }
        Ok(Self { n, lines: norm, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        self.labels.as_ref().map_or_else(|| format!("p{}", i + 1), |l| l[i].clone())
    }

    /// All triples (sorted, zero-based) contained in some line.
    pub fn collinear_triples(&self) -> BTreeSet<[usize; 3]> {
        let mut out = BTreeSet::new();
        for line in &self.lines {
            for (a, &i) in line.iter().enumerate() {
                for (b, &j) in line.iter().enumerate().skip(a + 1) {
                    for &k in &line[b + 1..] {
                        out.insert([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Induced sub-configuration on `keep` (in that order); lines reduced
    /// below three points are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let pos = |p: usize| keep.iter().position(|&k| k == p);
        let lines = self
            .lines
            .iter()
            .map(|l| l.iter().filter_map(|&p| pos(p)).collect::<Vec<_>>())
            .filter(|l| l.len() >= 3)
            .collect();
        let labels = Some(keep.iter().map(|&k| self.label(k)).collect());
        Self::new(keep.len(), lines, labels)
    }

    pub fn to_json(&self) -> ConfigJson {
        ConfigJson {
            n: self.n,
            lines: self.lines.iter().map(|l| l.iter().map(|&i| i + 1).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: &ConfigJson) -> Result<Self> {
        let mut lines = Vec::new();
        for l in &j.lines {
            if l.contains(&0) {
                return Err(Error::Invalid("configuration indices are 1-based".into()));
            }
            lines.push(l.iter().map(|&i| i - 1).collect());
        }
        Self::new(j.n, lines, j.labels.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub n: usize,
    pub lines: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

const PENTAGON11_LINES: [&[usize]; 10] = [
    &[1, 2, 7],
    &[1, 3, 8],
    &[1, 4, 9],
    &[1, 5, 10],
    &[1, 6, 11],
    &[2, 4, 10, 11],
    &[2, 5, 8, 9],
    &[3, 5, 7, 11],
    &[3, 6, 9, 10],
    &[4, 6, 7, 8],
];

/// The extended pentagon: centre `p1`, pentagon `p2..p6`, inner points
/// `p7..p11`, five symmetry lines of three points and five diagonals of four.
pub fn pentagon11() -> AbstractConfiguration {
    let lines = PENTAGON11_LINES.iter().map(|l| l.iter().map(|&i| i - 1).collect()).collect();
    let labels = (1..=11).map(|i| format!("p{i}")).collect();
    AbstractConfiguration::new(11, lines, Some(labels)).expect("valid constant")
}

/// [`pentagon11`] without `p6` and `p11`.
pub fn pentagon9() -> AbstractConfiguration {
    let keep: Vec<usize> = (0..11).filter(|&i| i != 5 && i != 10).collect();
    pentagon11().restrict(&keep).expect("valid restriction")
}

/// Homogeneous coordinates (rows) of the points of a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization<F: Field> {
    coords: Matrix<F>,
}

impl<F: Field> Realization<F> {
    /// Rows must have three entries and be nonzero. Coincident rows are
    /// allowed here and reported by [`verify_realization`].
    pub fn new(coords: Matrix<F>) -> Result<Self> {
        if coords.cols() != 3 {
            return Err(Error::Invalid(format!("realization rows need 3 coordinates, got {}", coords.cols())));
        }
        if let Some(i) = (0..coords.rows()).find(|&i| coords.row(i).iter().all(Field::is_zero)) {
            return Err(Error::Invalid(format!("point {} has the zero vector", i + 1)));
        }
        Ok(Self { coords })
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Result<Self> {
        Self::new(Matrix::from_rows(ctx, rows, 3).map_err(Error::Invalid)?)
    }

    pub fn n(&self) -> usize {
        self.coords.rows()
    }

    pub fn coords(&self) -> &Matrix<F> {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[F] {
        self.coords.row(i)
    }

    pub fn field_name(&self) -> String {
        F::field_name(self.coords.ctx())
    }

    /// Applies `x -> M x` to every point.
    pub fn transform(&self, m: &Matrix<F>) -> Result<Self> {
        Self::new(self.coords.mul(&m.transpose()))
    }
}

/// Realization JSON: field name and one `[x0, x1, x2]` row per point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationJson {
    pub field: String,
    pub coords: Vec<[String; 3]>,
}

impl<F: ExactText> Realization<F> {
    pub fn to_json(&self) -> RealizationJson {
        RealizationJson {
            field: self.field_name(),
            coords: self.coords.row_vecs().iter().map(|r| std::array::from_fn(|k| r[k].to_exact_string())).collect(),
        }
    }

    pub fn from_json(ctx: &F::Ctx, j: &RealizationJson) -> Result<Self> {
        if j.field != F::field_name(ctx) {
            return Err(Error::Invalid(format!("realization field {} does not match {}", j.field, F::field_name(ctx))));
        }
        let rows = j
            .coords
            .iter()
            .map(|r| r.iter().map(|s| F::parse_exact(ctx, s).map_err(Error::Invalid)).collect())
            .collect::<Result<Vec<Vec<F>>>>()?;
        Self::from_rows(ctx, rows)
    }
}

/// Failures found by [`verify_realization`]; indices are zero-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Prescribed triples that are not collinear.
    pub collinearity_failures: Vec<[usize; 3]>,
    /// Collinear triples not covered by any line.
    pub collapse_failures: Vec<[usize; 3]>,
    /// Pairs of projectively equal points.
    pub coincidence_failures: Vec<[usize; 2]>,
    /// Points whose removal leaves the rest on one line.
    pub stability_failures: Vec<usize>,
}

impl VerificationReport {
    pub fn is_empty(&self) -> bool {
        self.collinearity_failures.is_empty()
            && self.collapse_failures.is_empty()
            && self.coincidence_failures.is_empty()
            && self.stability_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} collinearity, {} collapse, {} coincidence, {} stability failures",
            self.collinearity_failures.len(),
            self.collapse_failures.len(),
            self.coincidence_failures.len(),
            self.stability_failures.len()
        )
    }
}

pub fn verify_realization<F: Field>(c: &AbstractConfiguration, r: &Realization<F>) -> Result<VerificationReport> {
    if r.n() != c.n() {
        return Err(Error::Invalid(format!("configuration has {} points, realization has {}", c.n(), r.n())));
    }
    let n = c.n();
    let prescribed = c.collinear_triples();
    let mut rep = VerificationReport::default();
    for i in 0..n {
        for j in i + 1..n {
            if proj_eq(r.point(i), r.point(j)) {
                rep.coincidence_failures.push([i, j]);
            }
            for k in j + 1..n {
                let zero = det3(r.point(i), r.point(j), r.point(k)).is_zero();
                let want = prescribed.contains(&[i, j, k]);
                if want && !zero {
                    rep.collinearity_failures.push([i, j, k]);
                } else if !want && zero {
                    rep.collapse_failures.push([i, j, k]);
                }
            }
        }
    }
    for skip in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
        if r.coords().select_rows(&rest).rank() < 3 {
            rep.stability_failures.push(skip);
        }
    }
    Ok(rep)
}

/// The polynomial system whose real solutions are the affine realizations
/// of a configuration with three points pinned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationSystem {
    /// Zero-based points pinned to `(0,0)`, `(1,0)` and, if present, `(0,1)`.
    pub pinned: Vec<usize>,
    pub equations: Vec<[usize; 3]>,
    pub inequalities: Vec<[usize; 3]>,
    pub text: String,
}

/// Emits one equation `D = 0` per prescribed triple and one inequality
/// `D^2 > 0` per other triple, where `D` is the 3x3 determinant of the
/// homogenized points.
///
/// Text format, one item per line:
///
/// ```text
/// # comment
/// points <n>
/// var x<i> y<i>              one per point, 1-based
/// pin <i> <x> <y>            x<i> = <x>, y<i> = <y>
/// eq <i> <j> <k> : <D> = 0
/// ineq <i> <j> <k> : (<D>)^2 > 0
/// ```
///
/// with `D = (xj - xi)*(yk - yi) - (xk - xi)*(yj - yi)`. The pinned points
/// are the lexicographically first triple not covered by a line; when every
/// triple is covered only the first two points are pinned.
pub fn emit_realization_system(c: &AbstractConfiguration) -> RealizationSystem {
    let n = c.n();
    let prescribed = c.collinear_triples();
    let mut equations = Vec::new();
    let mut inequalities = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if prescribed.contains(&[i, j, k]) {
                    equations.push([i, j, k]);
                } else {
                    inequalities.push([i, j, k]);
                }
            }
        }
    }
    let pinned = match inequalities.first() {
        Some(t) => t.to_vec(),
        None => (0..n.min(2)).collect(),
    };
    let det = |t: &[usize; 3]| {
        let (i, j, k) = (t[0] + 1, t[1] + 1, t[2] + 1);
        format!("(x{j} - x{i})*(y{k} - y{i}) - (x{k} - x{i})*(y{j} - y{i})")
    };
    let mut text = String::new();
    let _ = writeln!(text, "# realization system: {} equations, {} inequalities", equations.len(), inequalities.len());
    let _ = writeln!(text, "points {n}");
    for i in 1..=n {
        let _ = writeln!(text, "var x{i} y{i}");
    }
    for (p, (x, y)) in pinned.iter().zip([(0, 0), (1, 0), (0, 1)]) {
        let _ = writeln!(text, "pin {} {x} {y}", p + 1);
    }
    for t in &equations {
        let _ = writeln!(text, "eq {} {} {} : {} = 0", t[0] + 1, t[1] + 1, t[2] + 1, det(t));
    }
    for t in &inequalities {
        let _ = writeln!(text, "ineq {} {} {} : ({})^2 > 0", t[0] + 1, t[1] + 1, t[2] + 1, det(t));
    }
    RealizationSystem { pinned, equations, inequalities, text }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rational};

    #[test]
    fn pentagon_shapes() {
        let c = pentagon11();
        assert_eq!(c.n(), 11);
        let mut sizes: Vec<usize> = c.lines().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 3, 3, 3, 4, 4, 4, 4, 4]);
        for p in 0..11 {
            assert!(c.lines().iter().filter(|l| l.contains(&p)).count() >= 2);
        }
        let c9 = pentagon9();
        assert_eq!(c9.n(), 9);
        assert_eq!(c9.lines().len(), 9);
        assert_eq!(c9.label(5), "p7");
    }

    #[test]
    fn configuration_validation() {
        assert!(AbstractConfiguration::new(4, vec![vec![0, 1]], None).is_err());
        assert!(AbstractConfiguration::new(4, vec![vec![0, 1, 4]], None).is_err());
        assert!(AbstractConfiguration::new(5, vec![vec![0, 1, 2], vec![0, 1, 3]], None).is_err());
        let c = AbstractConfiguration::new(4, vec![vec![2, 0, 1]], None).unwrap();
        assert_eq!(AbstractConfiguration::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn degenerate_pentagon_realizations() {
        let c = pentagon11();
        let on_line: Vec<Vec<Rational>> = (0..11).map(|i| vec![rat(1), rat(i), rat(0)]).collect();
        let r = Realization::from_rows(&(), on_line).unwrap();
        let rep = verify_realization(&c, &r).unwrap();
        assert!(!rep.collapse_failures.is_empty());
        assert!(rep.collinearity_failures.is_empty());
        let tri = [[1, 0, 0], [1, 1, 0], [1, 0, 1]];
        let rows: Vec<Vec<Rational>> = (0..11).map(|i| tri[i % 3].iter().map(|&x| rat(x)).collect()).collect();
        let rep = verify_realization(&c, &Realization::from_rows(&(), rows).unwrap()).unwrap();
        assert!(!rep.coincidence_failures.is_empty());
    }

    #[test]
    fn emission_counts() {
        let three = AbstractConfiguration::new(3, vec![], None).unwrap();
        let s = emit_realization_system(&three);
        assert_eq!((s.equations.len(), s.inequalities.len()), (0, 1));
        let line = AbstractConfiguration::new(3, vec![vec![0, 1, 2]], None).unwrap();
        let s = emit_realization_system(&line);
        assert_eq!((s.equations.len(), s.inequalities.len()), (1, 0));
        assert_eq!(s.pinned, vec![0, 1]);
        let s = emit_realization_system(&pentagon11());
        assert_eq!((s.equations.len(), s.inequalities.len()), (25, 140));
        assert!(s.text.contains("eq 1 2 7 : (x2 - x1)*(y7 - y1) - (x7 - x1)*(y2 - y1) = 0"));
    }
}
