//! End-to-end acceptance run: one timed pass/fail line per criterion.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nonrational::cli::cmd_derive;
use nonrational::config::{
    derive_nonrationality, emit_realization_system, parse_script, pentagon11, verify_realization, Realization,
    RealizationJson, PENTAGON11_SCRIPT, PENTAGON9_SCRIPT, RATIONAL_SQUARE_SCRIPT,
};
use nonrational::exactnum::{rat, ExactText, Field, Matrix, Poly, QuadExt, QuadField, Rational};
use nonrational::lawrence::{
    certify_lifting, certify_nonrational_polytope, collinearity_pattern, lawrence_lift, lawrence_lift_with,
    lift_realization, recover_configuration, source_vectors, LabeledPolytope,
};
use nonrational::projgeom::QuadStatus;
use nonrational::surface::{
    build_pentagon_surface, default_s144, default_s48, reference_gadget, verify_flat_convex, GadgetRealization,
    TripleMode, SPECIAL_LABELS,
};
use nonrational::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn quadratic() -> Poly {
    Poly::from_i64(&[-1, -4, 1])
}

fn c1() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
    let out = dir.path().join("realization.json");
    let outcome = cmd_derive("builtin:pentagon11", &out).map_err(e)?;
    ensure(outcome.status == 0, format!("derive exited {}", outcome.status))?;
    ensure(outcome.report.contains("no rational roots"), "report lacks the rational-root verdict")?;
    let cert = derive_nonrationality(&parse_script(PENTAGON11_SCRIPT).map_err(e)?).map_err(e)?;
    ensure(
        cert.constraint.equal_up_to_scalar(&quadratic()),
        format!("constraint {}", cert.constraint.to_string_in("a")),
    )?;
    ensure(cert.rational_roots.is_empty(), "rational roots present")?;
    let j: RealizationJson =
        serde_json::from_str(&std::fs::read_to_string(&out).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
    ensure(j.field == "Q(sqrt 5)", format!("field {}", j.field))
}

fn c2() -> Result<(), String> {
    let cert = derive_nonrationality(&parse_script(PENTAGON9_SCRIPT).map_err(e)?).map_err(e)?;
    ensure(
        cert.constraint.equal_up_to_scalar(&quadratic()),
        format!("constraint {}", cert.constraint.to_string_in("a")),
    )?;
    ensure(cert.rational_roots.is_empty() && cert.report.is_empty(), "pentagon9 certificate incomplete")
}

fn c3() -> Result<(), String> {
    let script = parse_script(PENTAGON11_SCRIPT).map_err(e)?;
    let construction = nonrational::config::run_construction(&script).map_err(e)?;
    let k = QuadField::new(5).map_err(|x| x.to_string())?;
    let root = k.element(rat(2), rat(1));
    ensure(quadratic().eval(&k, &root).is_zero(), "2 + sqrt 5 is not a root")?;
    let r: Realization<QuadExt> = construction.realization_at(&k, &root).map_err(e)?;
    let rep = verify_realization(&pentagon11(), &r).map_err(e)?;
    ensure(rep.is_empty(), rep.summary())?;
    let c = pentagon11();
    let prescribed = c.collinear_triples().len();
    ensure(prescribed == 25, format!("{prescribed} prescribed triples"))?;
    ensure(165 - prescribed == 140, "other triple count")
}

fn pentagon_realization() -> Result<Realization<QuadExt>, String> {
    Ok(derive_nonrationality(&parse_script(PENTAGON11_SCRIPT).map_err(e)?).map_err(e)?.realization)
}

fn c4() -> Result<(), String> {
    let l = lift_realization(&pentagon_realization()?, (rat(1), rat(2))).map_err(e)?;
    let m = l.matrix();
    ensure((m.rows(), m.cols()) == (22, 13), format!("{}x{}", m.rows(), m.cols()))?;
    ensure(m.rank() == 13, format!("rank {}", m.rank()))
}

fn c5() -> Result<(), String> {
    let cert =
        certify_nonrational_polytope(&parse_script(PENTAGON11_SCRIPT).map_err(e)?, (rat(1), rat(2))).map_err(e)?;
    let c = &cert.certificates;
    ensure((c.edges.len(), c.point_facets.len(), c.line_facets.len()) == (11, 11, 10), "certificate counts")?;
    ensure(c.all_verified(), c.failures().join("; "))?;
    ensure(c.point_facets.iter().chain(&c.line_facets).all(|f| f.dim == 12), "facet dimension")?;
    // Each re-checks from scratch against the lifting.
    ensure(c.all().all(|f| f.check(&cert.lifting).is_none()), "re-check failed")?;
    // Line-facet coefficients: zero on the line, -l/h1 below, -l/h2 above.
    let (h1, h2) = (QuadExt::from_i64(cert.lifting.ctx(), 1), QuadExt::from_i64(cert.lifting.ctx(), 2));
    for f in &c.line_facets {
        for (k, p) in cert.lifting.points().iter().enumerate() {
            let lv = f.constant.add(&f.functional[0].mul(&p[0])).add(&f.functional[1].mul(&p[1]));
            let a = &f.functional[2 + k];
            let ok = match nonrational::exactnum::OrderedField::signum(&lv) {
                0 => a.is_zero(),
                s if s < 0 => a.mul(&h1) == lv.neg(),
                _ => a.mul(&h2) == lv.neg(),
            };
            ensure(ok, format!("alpha case for point {} of {:?}", k + 1, f.kind))?;
        }
    }
    Ok(())
}

fn round_trip<F: nonrational::exactnum::OrderedField>(
    l: &nonrational::lawrence::LawrenceLifting<F>,
    rng: &mut ChaCha8Rng,
    maps: usize,
) -> Result<(), String> {
    let p = LabeledPolytope::from_lifting(l, &l.labels()).map_err(e)?;
    let want = collinearity_pattern(&source_vectors(l));
    let got = collinearity_pattern(&recover_configuration(&p).map_err(e)?.vectors);
    ensure(got == want, "pattern differs")?;
    let ctx = l.ctx();
    let n = p.vertices.cols();
    let mut done = 0;
    while done < maps {
        let rows = (0..n).map(|_| (0..n).map(|_| F::from_i64(ctx, rng.gen_range(-3..4))).collect()).collect();
        let t = Matrix::from_rows(ctx, rows, n)?;
        if t.determinant()?.is_zero() {
            continue;
        }
        done += 1;
        let rec = recover_configuration(&p.transform(&t).map_err(e)?).map_err(e)?;
        ensure(collinearity_pattern(&rec.vectors) == want, "pattern differs after an invertible map")?;
    }
    Ok(())
}

fn c6() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pts = |c: &[(i64, i64)]| -> Vec<Vec<Rational>> { c.iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect() };
    let tri = lawrence_lift(&(), &pts(&[(0, 0), (1, 0), (0, 1)])).map_err(e)?;
    round_trip(&tri, &mut rng, 5)?;
    let sq = lawrence_lift(&(), &pts(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])).map_err(e)?;
    round_trip(&sq, &mut rng, 5)?;
    let pent = lift_realization(&pentagon_realization()?, (rat(1), rat(2))).map_err(e)?;
    round_trip(&pent, &mut rng, 2)
}

fn c7() -> Result<(), String> {
    let script = parse_script(PENTAGON11_SCRIPT).map_err(e)?;
    let sq: Vec<Vec<Rational>> =
        [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)].iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect();
    let mut patterns = Vec::new();
    let mut sq_patterns = Vec::new();
    for (h1, h2) in [(1, 2), (1, 3), (2, 5)] {
        let cert = certify_nonrational_polytope(&script, (rat(h1), rat(h2))).map_err(e)?;
        ensure(cert.all_verified(), format!("heights ({h1},{h2}): {}", cert.certificates.failures().join("; ")))?;
        patterns.push(collinearity_pattern(&cert.recovery.vectors));
        let l = lawrence_lift_with(&(), &sq, (rat(h1), rat(h2))).map_err(e)?;
        let certs = certify_lifting(&l, &[vec![0, 2, 4], vec![1, 3, 4]]).map_err(e)?;
        ensure(certs.all_verified(), format!("square heights ({h1},{h2})"))?;
        let p = LabeledPolytope::from_lifting(&l, &l.labels()).map_err(e)?;
        sq_patterns.push(collinearity_pattern(&recover_configuration(&p).map_err(e)?.vectors));
    }
    ensure(patterns.windows(2).all(|w| w[0] == w[1]), "pentagon patterns differ across heights")?;
    ensure(sq_patterns.windows(2).all(|w| w[0] == w[1]), "square patterns differ across heights")
}

fn c8() -> Result<(), String> {
    let g = reference_gadget();
    ensure(g.mesh.faces().len() == 8, "face count")?;
    let want = g.verify();
    ensure(want.all_ok(), format!("{want:?}"))?;
    ensure(want.boundary == QuadStatus::FlatConvex, "boundary")?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 20 {
        let mut m = Matrix::zeros(&(), 4, 4);
        m.set(0, 0, rat(rng.gen_range(20..40)));
        for c in 1..4 {
            m.set(0, c, Rational::new(rng.gen_range(-2..3).into(), rng.gen_range(1..4).into()));
        }
        for r in 1..4 {
            for c in 0..4 {
                m.set(r, c, Rational::new(rng.gen_range(-5..6).into(), rng.gen_range(1..3).into()));
            }
        }
        if m.determinant()?.is_zero() {
            continue;
        }
        let Ok(mesh) = g.mesh.map_projective(&m) else { continue };
        done += 1;
        let img = GadgetRealization { mesh, boundary: g.boundary };
        ensure(img.verify() == want, format!("verdicts changed under image {done}"))?;
    }
    Ok(())
}

fn c9() -> Result<(), String> {
    let m = default_s48().map_err(e)?;
    ensure(
        (m.faces().len(), m.vertices().len()) == (48, 39),
        format!("{} faces, {} vertices", m.faces().len(), m.vertices().len()),
    )?;
    ensure(verify_flat_convex(&m).all_ok(), "non-flat or non-convex face")?;
    let ids: Vec<usize> = SPECIAL_LABELS.iter().map(|l| m.tag(l).ok_or("missing tag")).collect::<Result<_, _>>()?;
    ensure(m.homogenized(&ids).rank() == 3, "special points not coplanar")
}

fn c10() -> Result<(), String> {
    let m = default_s144().map_err(e)?;
    ensure(
        (m.faces().len(), m.vertices().len()) == (144, 111),
        format!("{} faces, {} vertices", m.faces().len(), m.vertices().len()),
    )?;
    ensure(verify_flat_convex(&m).all_ok(), "non-flat or non-convex face")?;
    let ids: Vec<usize> = ["a", "b", "c"].iter().map(|l| m.tag(l).ok_or("missing tag")).collect::<Result<_, _>>()?;
    ensure(m.homogenized(&ids).rank() == 2, "anchors not collinear")
}

fn c11() -> Result<(), String> {
    let m = build_pentagon_surface(TripleMode::All).map_err(e)?;
    ensure(m.faces().len() == 25 * 144, format!("{} faces", m.faces().len()))?;
    let field = <QuadExt as Field>::field_name(m.ctx());
    ensure(field == "Q(sqrt 5)", format!("field {field}"))?;
    let j = m.to_json();
    ensure(j.field == "Q(sqrt 5)", "exported field")?;
    ensure(m.vertices().iter().flatten().any(|x| !x.is_rational()), "no irrational coordinate")?;
    ensure(
        j.vertices.values().flatten().all(|s| QuadExt::parse_exact(m.ctx(), s).is_ok()),
        "exported coordinate outside the field",
    )?;
    let rep = verify_flat_convex(&m);
    ensure(rep.all_ok(), format!("{} bad faces", rep.failures().len()))
}

fn c12() -> Result<(), String> {
    let s = emit_realization_system(&pentagon11());
    ensure(
        (s.equations.len(), s.inequalities.len()) == (25, 140),
        format!("{}/{}", s.equations.len(), s.inequalities.len()),
    )
}

fn c13() -> Result<(), String> {
    let cert =
        certify_nonrational_polytope(&parse_script(PENTAGON11_SCRIPT).map_err(e)?, (rat(1), rat(2))).map_err(e)?;
    let mut labels = cert.lifting.labels();
    labels[11] = "v2''".into();
    let p = LabeledPolytope::from_lifting(&cert.lifting, &labels).map_err(e)?;
    match recover_configuration(&p) {
        Err(Error::Dimension(_)) => {}
        other => return Err(format!("corrupted label: {:?}", other.map(|_| "recovered")))?,
    }
    match certify_nonrational_polytope(&parse_script(RATIONAL_SQUARE_SCRIPT).map_err(e)?, (rat(1), rat(2))) {
        Err(err @ Error::RationalRoot(_)) => ensure(err.to_string().contains("rational root 2"), err.to_string()),
        other => Err(format!("rational script: {:?}", other.map(|_| "certified"))),
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check, u64); 13] = [
        ("pentagon constraint", c1, 1),
        ("nine-point exercise", c2, 1),
        ("Q(sqrt 5) realization", c3, 5),
        ("Lawrence polytope dimensions", c4, 5),
        ("face certificates", c5, 30),
        ("recovery round trip", c6, 60),
        ("lifting heights", c7, 60),
        ("reference gadget", c8, 30),
        ("S48", c9, 60),
        ("S144", c10, 120),
        ("pentagon surface", c11, 600),
        ("semi-algebraic emission", c12, 1),
        ("negative controls", c13, 5),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = res.and_then(|()| {
            ensure(took <= Duration::from_secs(*limit), format!("took {:.2}s, limit {limit}s", took.as_secs_f64()))
        });
        let line = match &res {
            Ok(()) => format!("criterion {:>2} PASS  {name} ({:.2}s, limit {limit}s)", i + 1, took.as_secs_f64()),
            Err(msg) => {
                failed.push(i + 1);
                format!("criterion {:>2} FAIL  {name} ({:.2}s, limit {limit}s): {msg}", i + 1, took.as_secs_f64())
            }
        };
        // Straight to the process stdout so the lines show without --nocapture.
        let _ = writeln!(std::io::stdout().lock(), "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn exported_realization_round_trips() {
    let r = pentagon_realization().unwrap();
    let j = r.to_json();
    assert!(j.coords.iter().flatten().all(|s| QuadExt::parse_exact(r.coords().ctx(), s).is_ok()));
    assert_eq!(Realization::<QuadExt>::from_json(r.coords().ctx(), &j).unwrap(), r);
}
