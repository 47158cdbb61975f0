//! Pauli noise at arbitrary strength.
//!
//! A Pauli error on a stabilizer state only flips the signs of the
//! generators it anticommutes with, and different sign sectors are
//! orthogonal with equal entropy. So for a region `A`
//!
//! ```text
//! S_A(noisy) = H(syndrome distribution on G_A) + S_A(clean)
//! ```
//!
//! where the syndrome distribution is the pushforward of the product error
//! distribution, computed by XOR-convolution over the syndrome space.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{Lattice, Partition};
use crate::pauli::PauliOp;
use crate::stabmix::{dephasing_ops, DephasingKind, StabilizerMixedState};
use crate::Error;

/// Default cap on the syndrome dimension.
pub const DEFAULT_BUDGET: usize = 24;

const WHT_THRESHOLD_BITS: usize = 10;

/// One independent error source: mutually exclusive Pauli errors with their
/// probabilities. The identity takes the remaining weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub errors: Vec<(PauliOp, f64)>,
}

impl Channel {
    pub fn identity_prob(&self) -> f64 {
        1.0 - self.errors.iter().map(|(_, p)| p).sum::<f64>()
    }
}

/// A product of independent channels on `n` qubits.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    n: usize,
    channels: Vec<Channel>,
}

impl NoiseSpec {
    #[must_use]
    pub fn new(n: usize) -> Self {
        Self { n, channels: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// Add an independent channel. Probabilities must lie in `[0, 1]` and
    /// leave a nonnegative identity weight.
    pub fn push(&mut self, errors: Vec<(PauliOp, f64)>) -> Result<(), Error> {
        for (op, p) in &errors {
            if op.n() != self.n {
                return Err(Error::QubitCountMismatch { left: self.n, right: op.n() });
            }
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Invalid(format!("probability {p} outside [0, 1]")));
            }
        }
        let ch = Channel { errors };
        if ch.identity_prob() < -1e-12 {
            return Err(Error::Invalid("error probabilities sum above 1".into()));
        }
        self.channels.push(ch);
        Ok(())
    }

    /// Each operator applied independently with probability `p`.
    pub fn independent(n: usize, ops: &[PauliOp], p: f64) -> Result<Self, Error> {
        let mut s = Self::new(n);
        for op in ops {
            s.push(vec![(op.clone(), p)])?;
        }
        Ok(s)
    }

    /// Single-family dephasing on every edge of a square lattice.
    pub fn dephasing(lat: &Lattice, kind: DephasingKind, p: f64) -> Result<Self, Error> {
        Self::independent(lat.n(), &dephasing_ops(lat, kind)?, p)
    }

    /// Independent X errors at `px` and Z errors at `pz` on every edge.
    pub fn xz(lat: &Lattice, px: f64, pz: f64) -> Result<Self, Error> {
        let mut s = Self::dephasing(lat, DephasingKind::X, px)?;
        s.extend(Self::dephasing(lat, DephasingKind::Z, pz)?)?;
        Ok(s)
    }

    /// Append the channels of another spec on the same qubits.
    pub fn extend(&mut self, other: NoiseSpec) -> Result<(), Error> {
        if other.n != self.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: other.n });
        }
        self.channels.extend(other.channels);
        Ok(())
    }
}

/// Distribution of syndromes on the subgroup `G_A` of a region.
///
/// Syndromes live in the span of the error syndromes, so `probs` is indexed
/// by coordinates in `basis` and has length `2^k`.
#[derive(Clone, Debug)]
pub struct SyndromeDistribution {
    /// Dimension of the reachable syndrome space.
    pub k: usize,
    /// Number of generators of `G_A`.
    pub full_k: usize,
    /// Reachable syndrome space, each vector of length `full_k`.
    pub basis: Vec<BitVec>,
    pub probs: Vec<f64>,
}

impl SyndromeDistribution {
    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon(&self.probs)
    }

    /// Probability of a full-length syndrome.
    pub fn prob_of(&self, syndrome: &BitVec) -> Result<f64, Error> {
        if self.basis.is_empty() {
            return Ok(if syndrome.is_zero() { 1.0 } else { 0.0 });
        }
        let m = BitMatrix::from_rows(self.full_k, self.basis.clone())?;
        Ok(match m.in_span(syndrome)? {
            Some(c) => self.probs[index_of(&c)],
            None => 0.0,
        })
    }
}

fn shannon(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn index_of(c: &BitVec) -> usize {
    c.ones().fold(0usize, |acc, i| acc | (1 << i))
}

/// Per-channel error syndromes on `G_A`, restricted to the region.
struct ChannelSyndromes {
    full_k: usize,
    channels: Vec<Vec<(BitVec, f64)>>,
}

fn channel_syndromes(s: &StabilizerMixedState, noise: &NoiseSpec, region: &[usize]) -> Result<ChannelSyndromes, Error> {
    if noise.n() != s.n() {
        return Err(Error::QubitCountMismatch { left: s.n(), right: noise.n() });
    }
    let group = s.region_subgroup(region);
    let mask = BitVec::from_indices(s.n(), region.iter().copied());
    let channels = noise
        .channels()
        .iter()
        .map(|ch| {
            ch.errors
                .iter()
                .map(|(op, p)| {
                    let e = op.restrict_mask(&mask);
                    let syn = BitVec::from_bools(&group.iter().map(|g| g.anticommutes(&e)).collect::<Vec<_>>());
                    (syn, *p)
                })
                .collect()
        })
        .collect();
    Ok(ChannelSyndromes { full_k: group.len(), channels })
}

/// Pushforward of the noise through the syndrome map of `G_A`.
pub fn syndrome_distribution(
    s: &StabilizerMixedState,
    noise: &NoiseSpec,
    region: &[usize],
    budget: usize,
) -> Result<SyndromeDistribution, Error> {
    let cs = channel_syndromes(s, noise, region)?;
    let nonzero: Vec<BitVec> = cs
        .channels
        .iter()
        .flatten()
        .filter(|(v, p)| *p > 0.0 && !v.is_zero())
        .map(|(v, _)| v.clone())
        .collect();
    let basis: Vec<BitVec> = if nonzero.is_empty() {
        Vec::new()
    } else {
        let (rref, pivots) = BitMatrix::from_rows(cs.full_k, nonzero)?.rref();
        rref.rows()[..pivots.len()].to_vec()
    };
    let k = basis.len();
    if k > budget {
        return Err(Error::Budget { name: "syndrome-bits", limit: budget, required: k });
    }
    let bm = (k > 0).then(|| BitMatrix::from_rows(cs.full_k, basis.clone())).transpose()?;
    // coordinates of each error syndrome in the basis
    let coord = |v: &BitVec| -> Result<usize, Error> {
        match &bm {
            None => Ok(0),
            Some(m) => m.in_span(v)?.map(|c| index_of(&c)).ok_or_else(|| Error::Invalid("syndrome outside span".into())),
        }
    };
    let mut chans: Vec<Vec<(usize, f64)>> = Vec::with_capacity(cs.channels.len());
    for ch in &cs.channels {
        let mut merged: HashMap<usize, f64> = HashMap::new();
        let mut id = 1.0;
        for (v, p) in ch.iter().filter(|e| e.1 > 0.0) {
            id -= p;
            *merged.entry(coord(v)?).or_default() += p;
        }
        *merged.entry(0).or_default() += id.max(0.0);
        let mut entries: Vec<(usize, f64)> = merged.into_iter().filter(|&(_, p)| p > 0.0).collect();
        entries.sort_unstable_by_key(|e| e.0);
        if !(entries.len() == 1 && entries[0].0 == 0) {
            chans.push(entries);
        }
    }
    let probs = if k > WHT_THRESHOLD_BITS { convolve_wht(k, &chans) } else { convolve_direct(k, &chans) };
    Ok(SyndromeDistribution { k, full_k: cs.full_k, basis, probs })
}

fn convolve_direct(k: usize, chans: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let size = 1usize << k;
    let mut dist = vec![0.0; size];
    dist[0] = 1.0;
    let mut next = vec![0.0; size];
    for ch in chans {
        next.iter_mut().for_each(|v| *v = 0.0);
        for &(sigma, p) in ch {
            for (s, &d) in dist.iter().enumerate() {
                next[s ^ sigma] += p * d;
            }
        }
        std::mem::swap(&mut dist, &mut next);
    }
    dist
}

/// Characters of each channel multiply in the Walsh-Hadamard domain.
fn convolve_wht(k: usize, chans: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let size = 1usize << k;
    let mut hat = vec![1.0; size];
    for ch in chans {
        for (chi, h) in hat.iter_mut().enumerate() {
            let v: f64 = ch
                .iter()
                .map(|&(sigma, p)| if (chi & sigma).count_ones() % 2 == 0 { p } else { -p })
                .sum();
            *h *= v;
        }
    }
    fwht(&mut hat);
    let norm = size as f64;
    hat.iter().map(|v| (v / norm).max(0.0)).collect()
}

/// In-place unnormalized Walsh-Hadamard transform.
pub fn fwht(a: &mut [f64]) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Exact entropy of the noisy state on `region`, in bits.
pub fn noisy_entropy_region(
    s: &StabilizerMixedState,
    noise: &NoiseSpec,
    region: &[usize],
    budget: usize,
) -> Result<f64, Error> {
    let d = syndrome_distribution(s, noise, region, budget)?;
    Ok(d.entropy() + s.entropy_region(region))
}

/// Exact `I(A:C|B)` of the noisy state.
pub fn noisy_cmi(s: &StabilizerMixedState, noise: &NoiseSpec, p: &Partition, budget: usize) -> Result<f64, Error> {
    let regions = [p.ab(), p.bc(), p.b.clone(), p.abc()];
    let v: Vec<f64> = regions
        .iter()
        .map(|r| noisy_entropy_region(s, noise, r, budget))
        .collect::<Result<_, _>>()?;
    Ok(v[0] + v[1] - v[2] - v[3])
}

/// Monte Carlo estimate of the noisy region entropy: plug-in syndrome
/// entropy with the Miller-Madow bias correction. No budget applies.
pub fn sampled_entropy_region<R: Rng>(
    s: &StabilizerMixedState,
    noise: &NoiseSpec,
    region: &[usize],
    samples: usize,
    rng: &mut R,
) -> Result<f64, Error> {
    if samples == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let cs = channel_syndromes(s, noise, region)?;
    let mut counts: HashMap<BitVec, usize> = HashMap::new();
    for _ in 0..samples {
        let mut syn = BitVec::zeros(cs.full_k);
        for ch in &cs.channels {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for (v, p) in ch {
                acc += p;
                if u < acc {
                    syn.xor_assign(v);
                    break;
                }
            }
        }
        *counts.entry(syn).or_default() += 1;
    }
    let n = samples as f64;
    let probs: Vec<f64> = counts.values().map(|&c| c as f64 / n).collect();
    let correction = (counts.len() as f64 - 1.0) / (2.0 * n * std::f64::consts::LN_2);
    Ok(shannon(&probs) + correction + s.entropy_region(region))
}

/// Sampled CMI from [`sampled_entropy_region`] on the four regions.
pub fn sampled_cmi<R: Rng>(
    s: &StabilizerMixedState,
    noise: &NoiseSpec,
    p: &Partition,
    samples: usize,
    rng: &mut R,
) -> Result<f64, Error> {
    let regions = [p.ab(), p.bc(), p.b.clone(), p.abc()];
    let mut v = [0.0; 4];
    for (slot, r) in v.iter_mut().zip(&regions) {
        *slot = sampled_entropy_region(s, noise, r, samples, rng)?;
    }
    Ok(v[0] + v[1] - v[2] - v[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Boundary, LatticeKind};
    use crate::stabmix::{model_state, ModelKind};

    fn torus(l: usize) -> Lattice {
        Lattice::build(LatticeKind::SquareEdges, l, l, Boundary::Torus).unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn zero_noise_is_point_mass() {
        let l = torus(3);
        let tc = model_state(ModelKind::ToricCode, &l).unwrap();
        let d = syndrome_distribution(&tc, &NoiseSpec::dephasing(&l, DephasingKind::Z, 0.0).unwrap(), &all(18), 24).unwrap();
        assert_eq!(d.k, 0);
        assert_eq!(d.probs, vec![1.0]);
        assert_eq!(d.prob_of(&BitVec::zeros(d.full_k)).unwrap(), 1.0);
    }

    #[test]
    fn single_error_half() {
        let s = StabilizerMixedState::from_strings(&["XX", "ZZ"]).unwrap();
        let noise = NoiseSpec::independent(2, &["ZI".parse().unwrap()], 0.5).unwrap();
        let d = syndrome_distribution(&s, &noise, &[0, 1], 24).unwrap();
        assert_eq!(d.k, 1);
        assert_eq!(d.probs, vec![0.5, 0.5]);
    }

    #[test]
    fn half_dephasing_counts_plaquettes() {
        let l = torus(3);
        let tc = model_state(ModelKind::ToricCode, &l).unwrap();
        let noise = NoiseSpec::dephasing(&l, DephasingKind::Z, 0.5).unwrap();
        let s = noisy_entropy_region(&tc, &noise, &all(18), 24).unwrap();
        assert!((s - (2.0 + 8.0)).abs() < 1e-9);
    }

    #[test]
    fn wht_matches_direct() {
        let chans = vec![vec![(0, 0.7), (5, 0.3)], vec![(0, 0.9), (2047, 0.1)], vec![(0, 0.5), (1024, 0.25), (3, 0.25)]];
        let a = convolve_direct(11, &chans);
        let b = convolve_wht(11, &chans);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_error_names_budget() {
        let l = torus(4);
        let tc = model_state(ModelKind::ToricCode, &l).unwrap();
        let noise = NoiseSpec::dephasing(&l, DephasingKind::Z, 0.1).unwrap();
        let err = noisy_entropy_region(&tc, &noise, &all(32), 4).unwrap_err();
        assert!(err.to_string().contains("syndrome-bits"));
    }

    #[test]
    fn noise_outside_region_is_invisible() {
        let l = torus(3);
        let tc = model_state(ModelKind::ToricCode, &l).unwrap();
        let region = [0, 1];
        let noise = NoiseSpec::dephasing(&l, DephasingKind::Z, 0.3).unwrap();
        let noisy = noisy_entropy_region(&tc, &noise, &region, 24).unwrap();
        assert_eq!(noisy, tc.entropy_region(&region));
    }

    #[test]
    fn sampled_estimate_is_close() {
        use rand::SeedableRng;
        let l = torus(3);
        let tc = model_state(ModelKind::ToricCode, &l).unwrap();
        let noise = NoiseSpec::dephasing(&l, DephasingKind::Z, 0.11).unwrap();
        let exact = noisy_entropy_region(&tc, &noise, &all(18), 24).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let est = sampled_entropy_region(&tc, &noise, &all(18), 40_000, &mut rng).unwrap();
        assert!((exact - est).abs() < 0.05, "{exact} vs {est}");
    }
}
