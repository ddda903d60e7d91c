use std::collections::HashMap;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::script::{ConstructionScript, Stmt};
use super::{verify_realization, AbstractConfiguration, Realization, VerificationReport};
use crate::error::{Error, Result};
use crate::exactnum::{rational_root_test, rational_to_string, Field, Poly, QuadExt, QuadField, RatFunc, Rational};

/// A `require-collinear` statement and the numerator of its determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Requirement {
    pub points: [String; 3],
    pub line: usize,
    /// Primitive determinant; zero when the incidence holds identically.
    pub determinant: Poly,
}

impl Requirement {
    pub fn is_trivial(&self) -> bool {
        self.determinant.is_zero()
    }
}

/// Result of executing a script symbolically in the parameter `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    /// Output point names, in realization order.
    pub names: Vec<String>,
    /// Primitive polynomial coordinate vectors, parallel to `names`.
    pub points: Vec<Vec<Poly>>,
    /// Every constructed object (points and lines) in definition order.
    pub objects: Vec<(String, Vec<Poly>)>,
    pub requirements: Vec<Requirement>,
    /// Product of the nontrivial requirement numerators, primitive with
    /// positive leading coefficient; the constant 1 when there is none.
    pub constraint: Poly,
    /// From `config-line` statements, indexed like `names`.
    pub configuration: Option<AbstractConfiguration>,
}

impl Construction {
    pub fn object(&self, name: &str) -> Option<&[Poly]> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// The realization over the rational functions in `a`.
    pub fn parameterized(&self) -> Result<Realization<RatFunc>> {
        let rows = self.points.iter().map(|v| v.iter().cloned().map(RatFunc::from_poly).collect()).collect();
        Realization::from_rows(&(), rows)
    }

    /// Substitutes `a = x`; fails if some point becomes the zero vector.
    pub fn realization_at<F: Field>(&self, ctx: &F::Ctx, x: &F) -> Result<Realization<F>> {
        let rows = self
            .names
            .iter()
            .zip(&self.points)
            .map(|(name, v)| {
                let row: Vec<F> = v.iter().map(|p| p.eval(ctx, x)).collect();
                if row.iter().all(Field::is_zero) {
                    Err(Error::Degenerate(format!("point {name} vanishes at a = {x}")))
                } else {
                    Ok(row)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Realization::from_rows(ctx, rows)
    }
}

fn cross(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    vec![
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn det3(a: &[Poly], b: &[Poly], c: &[Poly]) -> Poly {
    let x = cross(b, c);
    a[0].mul(&x[0]).add(&a[1].mul(&x[1])).add(&a[2].mul(&x[2]))
}

/// Clears denominators and common factors: the result has polynomial
/// entries with no common polynomial factor, integer coefficients of content
/// one, and a positive lowest-order coefficient in its first nonzero entry.
/// `None` for the zero vector.
fn primitive_vector(v: &[RatFunc]) -> Option<Vec<Poly>> {
    if v.iter().all(Field::is_zero) {
        return None;
    }
    let lcm = v.iter().fold(Poly::one(), |acc, f| {
        let g = acc.gcd(f.denom());
        acc.mul(f.denom()).div_rem(&g).0
    });
    let polys: Vec<Poly> = v.iter().map(|f| f.numer().mul(&lcm.div_rem(f.denom()).0)).collect();
    let g = polys.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
    let polys: Vec<Poly> = polys.iter().map(|p| p.div_rem(&g).0).collect();
    let den_lcm = polys.iter().flat_map(|p| p.coeffs().iter()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<Poly> = polys.iter().map(|p| p.scale(&Rational::from_integer(den_lcm.clone()))).collect();
    let content = scaled.iter().flat_map(|p| p.coeffs().iter()).fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    let first = scaled.iter().find(|p| !p.is_zero()).expect("nonzero vector");
    let lowest = first.coeffs().iter().find(|c| !Zero::is_zero(*c)).expect("nonzero polynomial");
    let sign = if lowest.is_negative() { -BigInt::one() } else { BigInt::one() };
    let factor = Rational::new(sign, content);
    Some(scaled.iter().map(|p| p.scale(&factor)).collect())
}

fn eval_coords(exprs: &[super::Expr; 3], line: usize, name: &str) -> Result<Vec<Poly>> {
    let vals = exprs
        .iter()
        .map(|e| e.eval())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Degenerate(format!("line {line}: coordinates of {name} divide by zero")))?;
    primitive_vector(&vals).ok_or_else(|| Error::Degenerate(format!("line {line}: {name} is the zero vector")))
}

pub fn run_construction(script: &ConstructionScript) -> Result<Construction> {
    let mut objects: Vec<(String, Vec<Poly>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut point_order: Vec<String> = Vec::new();
    let mut explicit_order: Option<Vec<String>> = None;
    let mut requirements = Vec::new();
    let mut config_lines: Vec<Vec<String>> = Vec::new();

    fn put(name: &str, v: Vec<Poly>, objects: &mut Vec<(String, Vec<Poly>)>, index: &mut HashMap<String, usize>) {
        index.insert(name.to_string(), objects.len());
        objects.push((name.to_string(), v));
    }
    let get = |objects: &[(String, Vec<Poly>)], index: &HashMap<String, usize>, name: &str| -> Vec<Poly> {
        objects[index[name]].1.clone()
    };

    for st in &script.statements {
        let line = st.line;
        match &st.stmt {
            Stmt::Basis(items) => {
                for (k, (name, coords)) in items.iter().enumerate() {
                    let v = match coords {
                        Some(c) => eval_coords(c, line, name)?,
                        None => (0..3).map(|j| if k == 3 || j == k { Poly::one() } else { Poly::zero() }).collect(),
                    };
                    put(name, v, &mut objects, &mut index);
                    point_order.push(name.clone());
                }
                let vs: Vec<Vec<Poly>> = items.iter().map(|(n, _)| objects[index[n]].1.clone()).collect();
                for skip in 0..4 {
                    let t: Vec<&Vec<Poly>> =
                        vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).collect();
                    if det3(t[0], t[1], t[2]).is_zero() {
                        return Err(Error::Degenerate(format!(
                            "line {line}: basis points are not in general position"
                        )));
                    }
                }
            }
            Stmt::Param(name, coords) => {
                let v = eval_coords(coords, line, name)?;
                put(name, v, &mut objects, &mut index);
                point_order.push(name.clone());
            }
            Stmt::Line(name, p, q) | Stmt::Point(name, p, q) => {
                let is_line = matches!(st.stmt, Stmt::Line(..));
                let (a, b) = (get(&objects, &index, p), get(&objects, &index, q));
                let c = cross(&a, &b);
                let vals: Vec<RatFunc> = c.into_iter().map(RatFunc::from_poly).collect();
                let v = primitive_vector(&vals).ok_or_else(|| {
                    let what = if is_line { "join of equal points" } else { "meet of equal lines" };
                    Error::Degenerate(format!("line {line}: {name} is a {what} ({p}, {q})"))
                })?;
                put(name, v, &mut objects, &mut index);
                if !is_line {
                    point_order.push(name.clone());
                }
            }
            Stmt::RequireCollinear(names) => {
                let [p, q, r] = names.clone().map(|n| get(&objects, &index, &n));
                let d = det3(&p, &q, &r);
                if !d.is_zero() && d.is_constant() {
                    return Err(Error::Degenerate(format!(
                        "line {line}: {} {} {} can never be collinear",
                        names[0], names[1], names[2]
                    )));
                }
                let determinant = if d.is_zero() { d } else { d.primitive() };
                requirements.push(Requirement { points: names.clone(), line, determinant });
            }
            Stmt::Points(names) => explicit_order = Some(names.clone()),
            Stmt::ConfigLine(names) => config_lines.push(names.clone()),
        }
    }

    let names = explicit_order.unwrap_or(point_order);
    let points: Vec<Vec<Poly>> = names.iter().map(|n| get(&objects, &index, n)).collect();
    let constraint =
        requirements.iter().filter(|r| !r.is_trivial()).fold(Poly::one(), |acc, r| acc.mul(&r.determinant)).primitive();
    let configuration = if config_lines.is_empty() {
        None
    } else {
        let pos = |n: &String| {
            names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| Error::Invalid(format!("configuration point {n} is not among the output points")))
        };
        let lines =
            config_lines.iter().map(|l| l.iter().map(pos).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Some(AbstractConfiguration::new(names.len(), lines, Some(names.clone()))?)
    };
    Ok(Construction { names, points, objects, requirements, constraint, configuration })
}

/// Everything needed to check that a configuration has a realization over
/// `Q(sqrt d)` but none over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonRationalityCertificate {
    pub construction: Construction,
    pub constraint: Poly,
    /// Always empty in a produced certificate.
    pub rational_roots: Vec<Rational>,
    pub radicand: u64,
    /// The substituted root of the constraint.
    pub root: QuadExt,
    pub configuration: AbstractConfiguration,
    pub realization: Realization<QuadExt>,
    pub report: VerificationReport,
}

/// `n = s * m^2` with `s` square-free; trial division.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        let mut e = 0u32;
        while (&rest % &f).is_zero() {
            rest /= &f;
            e += 1;
        }
        m *= num::pow(f.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            s *= &f;
        }
        f += 1;
    }
    (s * rest, m)
}

pub fn derive_nonrationality(script: &ConstructionScript) -> Result<NonRationalityCertificate> {
    let construction = run_construction(script)?;
    let constraint = construction.constraint.clone();
    let roots = rational_root_test(&constraint).map_err(Error::Invalid)?;
    if let Some(r) = roots.first() {
        return Err(Error::RationalRoot(rational_to_string(r)));
    }
    if constraint.degree() != Some(2) {
        return Err(Error::Unsupported(format!(
            "constraint {} has degree {}, only quadratic constraints are certified",
            constraint.to_string_in("a"),
            constraint.degree().unwrap_or(0)
        )));
    }
    let configuration = construction
        .configuration
        .clone()
        .ok_or_else(|| Error::Invalid("the script declares no configuration lines".into()))?;
    let (c0, c1, c2) = (constraint.coeff(0), constraint.coeff(1), constraint.coeff(2));
    let disc = &c1 * &c1 - Rational::from_integer(4.into()) * &c2 * &c0;
    if !disc.is_positive() {
        return Err(Error::Unsupported(format!("constraint {} has no real roots", constraint.to_string_in("a"))));
    }
    let (s, m) = square_free_split(&(disc.numer() * disc.denom()));
    let d = s.to_u64().ok_or_else(|| Error::Unsupported("radicand does not fit in 64 bits".into()))?;
    let field = QuadField::new(d).map_err(Error::Invalid)?;
    let two_c2 = Rational::from_integer(2.into()) * &c2;
    let centre = -&c1 / &two_c2;
    // sqrt(disc) = m sqrt(s) / denom(disc)
    let offset = Rational::new(m, disc.denom().clone()) / &two_c2;
    let mut last_err = None;
    for sign in [1i64, -1] {
        let root = field.element(centre.clone(), &offset * Rational::from_integer(sign.into()));
        debug_assert!(constraint.eval(&field, &root).is_zero());
        let realization = match construction.realization_at(&field, &root) {
            Ok(r) => r,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let report = verify_realization(&configuration, &realization)?;
        if report.is_empty() {
            return Ok(NonRationalityCertificate {
                constraint,
                rational_roots: roots,
                radicand: d,
                root,
                configuration,
                realization,
                report,
                construction,
            });
        }
        last_err = Some(Error::Verification(format!("realization at a = {root}: {}", report.summary())));
    }
    Err(last_err.expect("two roots tried"))
}
