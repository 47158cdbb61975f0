mod common;

use std::collections::HashMap;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use topomix::cssnoise::{noisy_cmi, noisy_entropy_region, sampled_entropy_region, NoiseSpec, DEFAULT_BUDGET};
use topomix::lattice::{partition, PartitionScheme};
use topomix::stabmix::{dephasing_ops, model_state, DephasingKind, ModelKind};
use topomix::{Boundary, Error, Lattice, LatticeKind, PauliOp, StabilizerMixedState};

fn torus(l: usize) -> Lattice {
    Lattice::build(LatticeKind::SquareEdges, l, l, Boundary::Torus).unwrap()
}

fn shannon(probs: impl Iterator<Item = f64>) -> f64 {
    probs.filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

/// Entropy of `E(ρ_A)` by enumerating every error pattern of independent
/// single-op channels supported in `region`.
fn brute_force_entropy(s: &StabilizerMixedState, ops: &[PauliOp], p: f64, region: &[usize]) -> f64 {
    let group = s.region_subgroup(region);
    let ops: Vec<&PauliOp> = ops.iter().filter(|o| o.support().ones().all(|q| region.contains(&q))).collect();
    let k = ops.len();
    assert!(k <= 20);
    let syndromes: Vec<u64> = ops
        .iter()
        .map(|o| group.iter().enumerate().filter(|(_, g)| g.anticommutes(o)).fold(0u64, |acc, (i, _)| acc | 1 << i))
        .collect();
    let hist = (0u64..1 << k)
        .into_par_iter()
        .fold(HashMap::new, |mut h: HashMap<u64, f64>, mask| {
            let w = mask.count_ones() as i32;
            let prob = p.powi(w) * (1.0 - p).powi(k as i32 - w);
            let syn = (0..k).filter(|i| mask >> i & 1 == 1).fold(0u64, |acc, i| acc ^ syndromes[i]);
            *h.entry(syn).or_default() += prob;
            h
        })
        .reduce(HashMap::new, |mut a, b| {
            for (s, p) in b {
                *a.entry(s).or_default() += p;
            }
            a
        });
    shannon(hist.into_values()) + s.entropy_region(region)
}

#[test]
fn pushforward_matches_brute_force_on_3x3() {
    let lat = torus(3);
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let ops = dephasing_ops(&lat, DephasingKind::Z).unwrap();
    let noise = NoiseSpec::dephasing(&lat, DephasingKind::Z, 0.11).unwrap();
    let all: Vec<usize> = (0..lat.n()).collect();
    let exact = noisy_entropy_region(&tc, &noise, &all, DEFAULT_BUDGET).unwrap();
    let brute = brute_force_entropy(&tc, &ops, 0.11, &all);
    assert!((exact - brute).abs() < 1e-9, "{exact} vs {brute}");

    let lw = partition(&lat, PartitionScheme::LevinWen { center: (1, 1), inner: 1, outer: 2, strict: false }).unwrap();
    for region in [lw.a.clone(), lw.ab(), lw.bc()] {
        let exact = noisy_entropy_region(&tc, &noise, &region, DEFAULT_BUDGET).unwrap();
        let brute = brute_force_entropy(&tc, &ops, 0.11, &region);
        assert!((exact - brute).abs() < 1e-9);
    }
}

fn dense_channel(rho: &M, ops: &[PauliOp], p: f64) -> M {
    let mut out = rho.clone();
    for o in ops {
        let m = pauli_dense(o);
        out = &out * c(1.0 - p, 0.0) + &m * &out * m.adjoint() * c(p, 0.0);
    }
    out
}

#[test]
fn noisy_entropy_matches_kraus_mixture() {
    let lat = torus(2);
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let rho0 = stabilizer_dense(&tc);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in [DephasingKind::X, DephasingKind::Z, DephasingKind::Zx] {
        for p in [0.05, 0.2, 0.37, 0.5] {
            let ops = dephasing_ops(&lat, kind).unwrap();
            let rho = dense_channel(&rho0, &ops, p);
            let noise = NoiseSpec::dephasing(&lat, kind, p).unwrap();
            for _ in 0..6 {
                let region: Vec<usize> = (0..lat.n()).filter(|_| rng.random::<bool>()).collect();
                let exact = noisy_entropy_region(&tc, &noise, &region, DEFAULT_BUDGET).unwrap();
                let dense = entropy_of(&rho, lat.n(), &region);
                assert!((exact - dense).abs() < 1e-9, "{kind:?} p={p}: {exact} vs {dense}");
            }
        }
    }
    // both families at once, different strengths
    let xz = NoiseSpec::xz(&lat, 0.13, 0.31).unwrap();
    let rho = dense_channel(
        &dense_channel(&rho0, &dephasing_ops(&lat, DephasingKind::X).unwrap(), 0.13),
        &dephasing_ops(&lat, DephasingKind::Z).unwrap(),
        0.31,
    );
    let all: Vec<usize> = (0..lat.n()).collect();
    assert!((noisy_entropy_region(&tc, &xz, &all, DEFAULT_BUDGET).unwrap() - entropy(&rho)).abs() < 1e-9);
}

#[test]
fn random_states_under_random_noise_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(0..=n);
        let s = random_stabilizer(&mut rng, n, m);
        let ops: Vec<PauliOp> = (0..rng.random_range(1..5))
            .map(|_| random_stabilizer(&mut rng, n, 1).generators().first().cloned().unwrap_or_else(|| PauliOp::identity(n)))
            .collect();
        let p = rng.random_range(0.0..0.5);
        let noise = NoiseSpec::independent(n, &ops, p).unwrap();
        let rho = dense_channel(&stabilizer_dense(&s), &ops, p);
        let region: Vec<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
        let exact = noisy_entropy_region(&s, &noise, &region, DEFAULT_BUDGET).unwrap();
        assert!((exact - entropy_of(&rho, n, &region)).abs() < 1e-9);
    }
}

/// `S(px,pz) + S(0,0) - S(0,pz) - S(px,0)` for each region.
fn decoupling_defects(lat: &Lattice, px: f64, pz: f64, regions: &[Vec<usize>]) -> Vec<f64> {
    let tc = model_state(ModelKind::ToricCode, lat).unwrap();
    let s = |px: f64, pz: f64, r: &[usize]| noisy_entropy_region(&tc, &NoiseSpec::xz(lat, px, pz).unwrap(), r, DEFAULT_BUDGET).unwrap();
    regions.iter().map(|r| s(px, pz, r) + s(0.0, 0.0, r) - s(0.0, pz, r) - s(px, 0.0, r)).collect()
}

#[test]
fn decoupling_on_every_region_of_2x2() {
    let lat = torus(2);
    let regions: Vec<Vec<usize>> = (0u32..256).map(|m| (0..8).filter(|q| m >> q & 1 == 1).collect()).collect();
    for px in [0.1, 0.25, 0.4] {
        for pz in [0.1, 0.25, 0.4] {
            let worst = decoupling_defects(&lat, px, pz, &regions).into_iter().fold(0.0f64, |m, d| m.max(d.abs()));
            assert!(worst < 1e-9, "px={px} pz={pz}: {worst}");
        }
    }
}

#[test]
fn decoupling_on_levin_wen_regions_of_3x3() {
    let lat = torus(3);
    let lw = partition(&lat, PartitionScheme::LevinWen { center: (1, 1), inner: 1, outer: 2, strict: false }).unwrap();
    let regions = vec![lw.a.clone(), lw.b.clone(), lw.c.clone(), lw.ab(), lw.bc(), lw.abc(), (0..lat.n()).collect()];
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let i = |px: f64, pz: f64| noisy_cmi(&tc, &NoiseSpec::xz(&lat, px, pz).unwrap(), &lw, DEFAULT_BUDGET).unwrap();
    for px in [0.1, 0.25, 0.4] {
        for pz in [0.1, 0.25, 0.4] {
            for d in decoupling_defects(&lat, px, pz, &regions) {
                assert!(d.abs() < 1e-9, "px={px} pz={pz}: {d}");
            }
            let dc = i(px, pz) + i(0.0, 0.0) - i(0.0, pz) - i(px, 0.0);
            assert!(dc.abs() < 1e-9);
        }
    }
}

#[test]
fn half_dephasing_adds_independent_stars() {
    for l in [2, 3, 4] {
        let lat = torus(l);
        let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
        let all: Vec<usize> = (0..lat.n()).collect();
        let s = noisy_entropy_region(&tc, &NoiseSpec::dephasing(&lat, DephasingKind::Z, 0.5).unwrap(), &all, DEFAULT_BUDGET).unwrap();
        assert!((s - (tc.global_entropy() + (l * l - 1) as f64)).abs() < 1e-9);
    }
}

#[test]
fn entropy_is_monotone_in_p() {
    let lat = torus(3);
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let all: Vec<usize> = (0..lat.n()).collect();
    for kind in [DephasingKind::X, DephasingKind::Z] {
        let vals: Vec<f64> = (0..=20)
            .map(|k| {
                let p = 0.025 * k as f64;
                noisy_entropy_region(&tc, &NoiseSpec::dephasing(&lat, kind, p).unwrap(), &all, DEFAULT_BUDGET).unwrap()
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{kind:?}: {vals:?}");
    }
}

#[test]
fn budget_and_sampling() {
    let lat = torus(4);
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let noise = NoiseSpec::dephasing(&lat, DephasingKind::Z, 0.2).unwrap();
    let all: Vec<usize> = (0..lat.n()).collect();
    match noisy_entropy_region(&tc, &noise, &all, 8) {
        Err(Error::Budget { limit: 8, required, .. }) => assert_eq!(required, 15),
        other => panic!("expected a budget error, got {other:?}"),
    }
    let exact = noisy_entropy_region(&tc, &noise, &all, DEFAULT_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let est = sampled_entropy_region(&tc, &noise, &all, 200_000, &mut rng).unwrap();
    assert!((est - exact).abs() < 0.05, "{est} vs {exact}");
}

#[test]
fn zero_noise_cmi_is_clean_cmi() {
    let lat = torus(6);
    let tc = model_state(ModelKind::ToricCode, &lat).unwrap();
    let p = partition(&lat, PartitionScheme::LevinWen { center: (3, 3), inner: 1, outer: 2, strict: true }).unwrap();
    let none = NoiseSpec::xz(&lat, 0.0, 0.0).unwrap();
    assert_eq!(noisy_cmi(&tc, &none, &p, DEFAULT_BUDGET).unwrap(), 2.0);
}
