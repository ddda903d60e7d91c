use nonrational::exactnum::{rat, ratio, Field, Matrix, Rational};
use nonrational::projgeom::{
    collinear, dehomogenize, frame_to_standard, join, meet, proj_eq, projective_basis_transform, quad_status,
    space_map_quad, HomPoint, QuadStatus,
};
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| ratio(n, d))
}

fn point() -> impl Strategy<Value = HomPoint<Rational>> {
    prop::collection::vec(q(), 3).prop_filter_map("nonzero", |c| HomPoint::new(c).ok())
}

fn invertible(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(prop::collection::vec(-5i64..6, n), n).prop_filter_map("invertible", move |rows| {
        let m = Matrix::from_rows(&(), rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), n).ok()?;
        (!m.determinant().ok()?.is_zero()).then_some(m)
    })
}

fn hp(c: &[i64]) -> HomPoint<Rational> {
    HomPoint::new(c.iter().map(|&x| rat(x)).collect()).unwrap()
}

fn apply(m: &Matrix<Rational>, p: &HomPoint<Rational>) -> HomPoint<Rational> {
    HomPoint::new(m.mul_vec(p.coords())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn collinearity_is_projectively_invariant(a in point(), b in point(), c in point(), s in q(), t in q(), m in invertible(3)) {
        prop_assert_eq!(collinear(&a, &b, &c), collinear(&apply(&m, &a), &apply(&m, &b), &apply(&m, &c)));
        let combo: Vec<Rational> = a.coords().iter().zip(b.coords()).map(|(x, y)| x * &s + y * &t).collect();
        if let Ok(on) = HomPoint::new(combo) {
            prop_assert!(collinear(&a, &b, &on));
            prop_assert!(collinear(&apply(&m, &a), &apply(&m, &b), &apply(&m, &on)));
        }
    }

    #[test]
    fn join_meet_duality(p in point(), q1 in point(), r in point()) {
        prop_assume!(!collinear(&p, &q1, &r));
        let l = join(&p, &q1).unwrap();
        let m = join(&p, &r).unwrap();
        prop_assert!(l.incident(&p) && l.incident(&q1));
        prop_assert!(meet(&l, &m).unwrap().proj_eq(&p));
    }

    #[test]
    fn frame_maps_to_standard(m in invertible(3)) {
        let frame = [hp(&[1, 0, 0]), hp(&[0, 1, 0]), hp(&[0, 0, 1]), hp(&[1, 1, 1])];
        let moved: Vec<HomPoint<Rational>> = frame.iter().map(|p| apply(&m, p)).collect();
        let t = frame_to_standard(&moved).unwrap();
        for (src, img) in frame.iter().zip(&moved) {
            prop_assert!(apply(&t, img).proj_eq(src));
        }
    }
}

#[test]
fn meet_of_parallel_lines_is_at_infinity() {
    let l = join(&hp(&[1, 0, 0]), &hp(&[1, 1, 0])).unwrap();
    let m = join(&hp(&[1, 0, 1]), &hp(&[1, 1, 1])).unwrap();
    let p = meet(&l, &m).unwrap();
    assert!(p.coords()[0].is_zero());
    assert!(proj_eq(p.coords(), &[rat(0), rat(1), rat(0)]));
    assert!(join(&hp(&[1, 2, 3]), &hp(&[2, 4, 6])).is_err());
    assert!(meet(&l, &l).is_err());
}

#[test]
fn dehomogenize_examples() {
    let d = dehomogenize(&[hp(&[2, 4, 6]), hp(&[1, 0, 1])]).unwrap();
    assert_eq!(d.functional, vec![rat(1), rat(0), rat(0)]);
    assert_eq!(d.points, vec![vec![rat(2), rat(3)], vec![rat(0), rat(1)]]);
    // First coordinate vanishes somewhere: some other functional is used,
    // and it must be nonzero on every input.
    let pts = [hp(&[0, 1, 0]), hp(&[1, 0, 0]), hp(&[1, -1, 0])];
    let d = dehomogenize(&pts).unwrap();
    for p in &pts {
        let v: Rational = d.functional.iter().zip(p.coords()).map(|(a, b)| a * b).sum();
        assert!(!v.is_zero());
    }
    assert_eq!(d.points.len(), 3);
}

#[test]
fn basis_transform_rejects_collinear_frames() {
    let bad = [hp(&[1, 0, 0]), hp(&[1, 1, 0]), hp(&[1, 2, 0]), hp(&[1, 0, 1])];
    assert!(projective_basis_transform(&bad).is_err());
}

fn h4(c: [Rational; 3]) -> HomPoint<Rational> {
    let [x, y, z] = c;
    HomPoint::new(vec![rat(1), x, y, z]).unwrap()
}

#[test]
fn space_map_recovers_affine_maps() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let square = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]].map(|c| h4(c.map(rat)));
    let aux = [h4([rat(0), rat(0), rat(1)]), h4([ratio(1, 2), ratio(1, 2), rat(1)])];
    let mut tried = 0;
    while tried < 20 {
        // Affine map x -> A x + b in homogeneous form.
        let mut m = Matrix::zeros(&(), 4, 4);
        m.set(0, 0, rat(1));
        for r in 1..4 {
            for c in 0..4 {
                m.set(r, c, ratio(rng.gen_range(-6..7), rng.gen_range(1..4)));
            }
        }
        if m.determinant().unwrap().is_zero() {
            continue;
        }
        tried += 1;
        let img = |p: &HomPoint<Rational>| HomPoint::new(m.mul_vec(p.coords())).unwrap();
        let target = [img(&square[0]), img(&square[1]), img(&square[2]), img(&square[3])];
        let target_aux = [img(&aux[0]), img(&aux[1])];
        let rows: Vec<Vec<Rational>> = target.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(quad_status(&rows), QuadStatus::FlatConvex);
        let got = space_map_quad(&square, &aux, &target, &target_aux).unwrap();
        let flat = |x: &Matrix<Rational>| x.row_vecs().concat();
        assert!(proj_eq(&flat(&got), &flat(&m)), "map differs from the affine oracle");
    }
}

#[test]
fn space_map_rejects_nonconvex_targets() {
    let square = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]].map(|c| h4(c.map(rat)));
    let bowtie = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]].map(|c| h4(c.map(rat)));
    let aux = [h4([rat(0), rat(0), rat(1)]), h4([rat(0), rat(0), rat(2)])];
    assert!(space_map_quad(&square, &aux, &bowtie, &aux).is_err());
}
