//! Mesh loading, dual graphs and quadrangulation.

use std::path::PathBuf;

use matchforge::classify::is_bridgeless;
use matchforge::mesh::*;
use matchforge::rational::{ratio, Rational};
use num::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn data_files_load() {
    let t = TriangleMesh::load_off(data("tetrahedron.off")).unwrap();
    let d = dual_graph(&t).unwrap();
    assert_eq!((d.graph.n(), d.graph.m()), (4, 6));

    let ico = TriangleMesh::load_off(data("icosahedron.off")).unwrap();
    let d = dual_graph(&ico).unwrap();
    assert_eq!((d.graph.n(), d.graph.m()), (20, 30));
    assert!(is_bridgeless(&d.graph).unwrap());

    let cube = TriangleMesh::load_off(data("cube.off")).unwrap();
    let d = dual_graph(&cube).unwrap();
    assert_eq!(d.graph.n(), 12);
    assert!(is_bridgeless(&d.graph).unwrap());
}

#[test]
fn inconsistent_orientation_is_rejected() {
    let mut t = tetrahedron();
    t.faces[0].swap(1, 2);
    assert!(matches!(t.validate(), Err(MeshError::Inconsistent(..))));
    assert!(TriangleMesh::load_off(data("missing.off")).is_err());
}

#[test]
fn regular_icosahedron_weights_are_symmetric() {
    let ico = icosahedron();
    let d = dual_graph(&ico).unwrap();
    let w = weight_models().get("quality").unwrap().weights(&ico, &d);
    assert!(w.iter().all(|x| *x == w[0]));
    assert!(w[0] > Rational::zero() && w[0] < Rational::one());
}

#[test]
fn every_quad_merges_two_adjacent_faces() {
    let m = cube_with_diagonals();
    for mode in [Mode::Perfect, Mode::Maximum] {
        let (q, r) = quadrangulate(&m, mode, None).unwrap();
        assert_eq!(2 * r.n_quads + r.n_leftover, r.n_faces);
        for quad in &q.quads {
            let mut distinct = quad.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            assert_eq!(distinct.len(), 4);
        }
        // the diagonal split cube merges back into its six squares
        if mode == Mode::Perfect {
            assert_eq!(r.n_quads, 6);
            assert_eq!(r.w_perfect, ratio(6, 1));
        }
    }
}

#[test]
fn obj_output() {
    let m = icosahedron();
    let (q, _) = quadrangulate(&m, Mode::Perfect, None).unwrap();
    let obj = to_obj(&m, &q);
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 10);
}

#[test]
fn zero_weights_give_ratio_one() {
    let m = icosahedron();
    let (_, r) = quadrangulate(&m, Mode::Maximum, Some(&vec![Rational::zero(); 30])).unwrap();
    assert_eq!(r.ratio, Rational::one());
    assert!(quadrangulate(&m, Mode::Maximum, Some(&[Rational::one()])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratios_stay_within_bounds(seed in any::<u64>(), which in 0usize..3) {
        let m = [tetrahedron(), icosahedron(), cube_with_diagonals()][which].clone();
        let faces = m.faces.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<Rational> = (0..faces * 3 / 2).map(|_| ratio(rng.gen_range(0..=50), rng.gen_range(1..=7))).collect();
        let (_, perfect) = quadrangulate(&m, Mode::Perfect, Some(&w)).unwrap();
        let (_, max) = quadrangulate(&m, Mode::Maximum, Some(&w)).unwrap();
        prop_assert_eq!(perfect.n_leftover, 0);
        prop_assert!(max.w_maximum >= perfect.w_perfect);
        prop_assert!(max.ratio >= ratio(1, 3) && max.ratio <= Rational::one());
    }
}
