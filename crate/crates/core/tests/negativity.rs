mod common;

use common::{cz_state_dense, negativity_real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topomix::lattice::{partition, PartitionScheme};
use topomix::convexroof::{densify, negativity_dense};
use topomix::cssnoise::NoiseSpec;
use topomix::negativity::{area_law_split, mms_cz_negativity, negativity_spectrum_oracle, stabilizer_negativity};
use topomix::stabmix::{model_state, DephasingKind, ModelKind};
use topomix::{Boundary, Error, Lattice, LatticeKind};

fn cut(lat: &Lattice, one: bool) -> Vec<usize> {
    let row = 2;
    let s = if one { PartitionScheme::CylinderCut1 { row } } else { PartitionScheme::CylinderCut2 { row } };
    partition(lat, s).unwrap().a
}

fn cut2_formula(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        l as f64 / 2.0 - 1.0
    } else {
        (l as f64 - 1.0) / 2.0
    }
}

#[test]
fn cylinder_tables() {
    for (kind, model) in [(LatticeKind::SquareEdges, ModelKind::ZxDephasedMax), (LatticeKind::HoneycombVertices, ModelKind::HoneycombFlux)] {
        for l in 2..=8 {
            let lat = Lattice::build(kind, l, 6, Boundary::Cylinder).unwrap();
            let s = model_state(model, &lat).unwrap();
            assert_eq!(stabilizer_negativity(&s, &cut(&lat, true), Some(l)).negativity, l as f64 - 1.0, "{model:?} L={l}");
            assert_eq!(stabilizer_negativity(&s, &cut(&lat, false), Some(l)).negativity, cut2_formula(l), "{model:?} L={l}");
        }
    }
}

#[test]
fn spectrum_oracle_agrees_on_small_cuts() {
    for l in 2..=4 {
        let lat = Lattice::build(LatticeKind::SquareEdges, l, 6, Boundary::Cylinder).unwrap();
        let s = model_state(ModelKind::ZxDephasedMax, &lat).unwrap();
        for one in [true, false] {
            let region = cut(&lat, one);
            let r = stabilizer_negativity(&s, &region, Some(l));
            let o = negativity_spectrum_oracle(&s, &region).unwrap();
            assert!((o.negativity - r.negativity).abs() < 1e-9);
        }
    }
}

#[test]
fn area_law_constant_per_parity() {
    let lat = |l| Lattice::build(LatticeKind::SquareEdges, l, 6, Boundary::Cylinder).unwrap();
    let report = |l: usize, one: bool| {
        let la = lat(l);
        stabilizer_negativity(&model_state(ModelKind::ZxDephasedMax, &la).unwrap(), &cut(&la, one), Some(l))
    };
    let even = area_law_split(&report(4, false), &report(8, false)).unwrap();
    assert_eq!((even.alpha, even.gamma), (0.5, 1.0));
    let odd = area_law_split(&report(3, false), &report(7, false)).unwrap();
    assert_eq!((odd.alpha, odd.gamma), (0.5, 0.5));
}

#[test]
fn cz_enumeration_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (lx, ly, b) in [(1, 1, Boundary::Open), (1, 2, Boundary::Open), (2, 1, Boundary::Open), (2, 2, Boundary::Torus), (1, 3, Boundary::Cylinder)] {
        let lat = Lattice::build(LatticeKind::HoneycombVertices, lx, ly, b).unwrap();
        let rho = cz_state_dense(lat.n(), &lat.hexagons().unwrap());
        for _ in 0..6 {
            let a: Vec<usize> = (0..lat.n()).filter(|_| rng.random::<bool>()).collect();
            let fast = mms_cz_negativity(&lat, &a).unwrap();
            let dense = negativity_real(&rho, &a);
            assert!((fast - dense).abs() < 1e-9, "{lx}x{ly} {b:?} {a:?}: {fast} vs {dense}");
            assert!((0.0..=0.5).contains(&fast));
        }
    }
}

#[test]
fn cz_edge_cases() {
    let lat = Lattice::build(LatticeKind::HoneycombVertices, 1, 1, Boundary::Open).unwrap();
    assert_eq!(mms_cz_negativity(&lat, &[]).unwrap(), 0.0);
    let all: Vec<usize> = (0..lat.n()).collect();
    assert_eq!(mms_cz_negativity(&lat, &all).unwrap(), 0.0);
    let tri = Lattice::build(LatticeKind::TriangularVertices, 3, 3, Boundary::Torus).unwrap();
    assert!(matches!(mms_cz_negativity(&tri, &[0]), Err(Error::UnsupportedLattice(_))));
    let big = Lattice::build(LatticeKind::HoneycombVertices, 3, 3, Boundary::Open).unwrap();
    assert!(matches!(mms_cz_negativity(&big, &[0]), Err(Error::Budget { .. })));
}

#[test]
fn bulk_cut1_negativity_is_independent_of_p() {
    let lat = Lattice::build(LatticeKind::SquareEdges, 1, 4, Boundary::Cylinder).unwrap();
    let tc = densify(&model_state(ModelKind::ToricCode, &lat).unwrap()).unwrap();
    let max = model_state(ModelKind::ZxDephasedMax, &lat).unwrap();
    for row in [1, 2] {
        let a = partition(&lat, PartitionScheme::CylinderCut1 { row }).unwrap().a;
        let end = stabilizer_negativity(&max, &a, None).negativity;
        for p in [0.1, 0.3, 0.45] {
            let rho = tc.apply_noise(&NoiseSpec::dephasing(&lat, DephasingKind::Zx, p).unwrap()).unwrap();
            let e = negativity_dense(&rho, &a).unwrap();
            assert!((e - end).abs() < 1e-9, "row {row} p={p}: {e} vs {end}");
        }
    }
}
