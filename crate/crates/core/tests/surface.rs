use std::collections::BTreeSet;

use nonrational::exactnum::{rat, ratio, Field, Matrix, OrderedField, Rational};
use nonrational::projgeom::QuadStatus;
use nonrational::surface::{
    combinatorial_violations, default_s144, default_s48, export_obj, gadget_on_quad, reference_gadget,
    verify_flat_convex, MeshJson, QuadMesh, Side, SPECIAL_LABELS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p3(x: i64, y: i64, z: i64) -> Vec<Rational> {
    vec![rat(x), rat(y), rat(z)]
}

/// Projective maps close to an affine one, so the gadget stays on one side
/// of the plane sent to infinity.
fn random_projective(rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    loop {
        let mut m = Matrix::zeros(&(), 4, 4);
        m.set(0, 0, rat(rng.gen_range(20..40)));
        for c in 1..4 {
            m.set(0, c, ratio(rng.gen_range(-2..3), rng.gen_range(1..4)));
        }
        for r in 1..4 {
            for c in 0..4 {
                m.set(r, c, ratio(rng.gen_range(-5..6), rng.gen_range(1..3)));
            }
        }
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

#[test]
fn reference_gadget_verdicts() {
    let g = reference_gadget();
    assert_eq!(g.mesh.faces().len(), 8);
    assert_eq!(g.mesh.vertices().len(), 9);
    let rep = g.verify();
    assert!(rep.faces.all_ok());
    assert_eq!(rep.boundary, QuadStatus::FlatConvex);
    assert!(rep.intersections.is_empty());
    assert!(combinatorial_violations(&g.mesh).is_empty());
    // Exact coplanarity of the boundary by a 4x4 determinant.
    let rows: Vec<Vec<Rational>> =
        g.boundary_points().into_iter().map(|p| std::iter::once(rat(1)).chain(p).collect()).collect();
    assert!(Matrix::from_rows(&(), rows, 4).unwrap().determinant().unwrap().is_zero());
    assert!(g.interior_side().is_some());
}

#[test]
fn projective_images_preserve_verdicts() {
    let g = reference_gadget();
    let want = g.verify();
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let mut done = 0;
    while done < 20 {
        let m = random_projective(&mut rng);
        let Ok(mesh) = g.mesh.map_projective(&m) else { continue };
        done += 1;
        let img = nonrational::surface::GadgetRealization { mesh, boundary: g.boundary };
        assert_eq!(img.verify(), want);
    }
}

#[test]
fn projective_images_preserve_failures() {
    let mut bad = QuadMesh::new(&());
    for p in [p3(0, 0, 0), p3(1, 0, 0), p3(1, 1, 1), p3(0, 1, 0), p3(2, 2, 0), p3(3, 0, 0)] {
        bad.add_vertex(p);
    }
    bad.add_face([0, 1, 2, 3]).unwrap();
    bad.add_face([0, 4, 1, 3]).unwrap();
    let want = verify_flat_convex(&bad);
    assert_eq!(want.statuses, vec![QuadStatus::NotFlat, QuadStatus::NotConvex]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 20 {
        let Ok(img) = bad.map_projective(&random_projective(&mut rng)) else { continue };
        done += 1;
        assert_eq!(verify_flat_convex(&img), want);
    }
}

#[test]
fn gadget_on_unit_square() {
    let sq = [p3(0, 0, 0), p3(1, 0, 0), p3(1, 1, 0), p3(0, 1, 0)];
    for side in [Side::Above, Side::Below] {
        let g = gadget_on_quad(&sq, side).unwrap();
        assert!(g.verify().all_ok());
        assert_eq!(g.interior_side(), Some(side));
        assert_eq!(g.boundary_points(), sq.to_vec());
        for v in g.interior() {
            assert_eq!(g.mesh.vertex(v)[2].signum(), side.sign());
        }
    }
    let bent = [p3(0, 0, 0), p3(1, 0, 0), p3(1, 1, 1), p3(0, 1, 0)];
    assert!(gadget_on_quad(&bent, Side::Above).is_err());
    let bowtie = [p3(0, 0, 0), p3(1, 1, 0), p3(1, 0, 0), p3(0, 1, 0)];
    assert!(gadget_on_quad(&bowtie, Side::Above).is_err());
}

#[test]
fn s48_counts_and_special_plane() {
    let m = default_s48().unwrap();
    assert_eq!(m.faces().len(), 48);
    assert_eq!(m.vertices().len(), 39);
    assert!(verify_flat_convex(&m).all_ok());
    assert!(combinatorial_violations(&m).is_empty());
    let special: Vec<usize> = SPECIAL_LABELS.iter().map(|l| m.tag(l).unwrap()).collect();
    assert_eq!(special.iter().collect::<BTreeSet<_>>().len(), 9);
    assert_eq!(m.homogenized(&special).rank(), 3);
}

#[test]
fn s144_counts_and_anchor_line() {
    let m = default_s144().unwrap();
    assert_eq!(m.faces().len(), 144);
    assert_eq!(m.vertices().len(), 111);
    assert!(verify_flat_convex(&m).all_ok());
    assert!(combinatorial_violations(&m).is_empty());
    let abc: Vec<usize> = ["a", "b", "c"].iter().map(|l| m.tag(l).unwrap()).collect();
    assert_eq!(m.homogenized(&abc).rank(), 2);
    // Each copy's special points span a plane through the anchor line.
    for k in 1..=3 {
        let mut ids = abc.clone();
        ids.extend(SPECIAL_LABELS[3..].iter().map(|l| m.tag(&format!("{l}{k}")).unwrap()));
        assert_eq!(m.homogenized(&ids).rank(), 3);
    }
}

#[test]
fn mesh_json_round_trip() {
    let m = default_s48().unwrap();
    let j = m.to_json();
    let text = serde_json::to_string(&j).unwrap();
    let back: MeshJson = serde_json::from_str(&text).unwrap();
    assert_eq!(QuadMesh::<Rational>::from_json(&(), &back).unwrap(), m);
    let (obj, exact) = export_obj(&m, 4);
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 39);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 48);
    assert!(exact.contains("\"field\": \"Q\""));
}
