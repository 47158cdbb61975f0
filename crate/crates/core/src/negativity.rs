//! Logarithmic negativity of stabilizer mixed states.
//!
//! For a region `A`, let `M` be the commutation matrix of the generators
//! restricted to `A`. Then `E_N = rank(M)/2` bits. Only generators straddling
//! the cut give nonzero rows, so the others are pruned.
//!
//! [`mms_cz_negativity`] handles the maximally mixed state of the CZ
//! one-form symmetry on a honeycomb patch, which is not a stabilizer state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cssnoise::fwht;
use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{Lattice, LatticeKind};
use crate::stabmix::StabilizerMixedState;
use crate::Error;

/// Limit on straddling generators for the spectrum enumeration.
pub const SPECTRUM_MAX_GENERATORS: usize = 20;

/// Limit on qubits for the CZ-model enumeration.
pub const CZ_MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    /// Number of generators straddling the cut.
    pub boundary_generators: usize,
    pub rank: usize,
    /// `E_N` in bits.
    pub negativity: f64,
    pub cut_length: Option<usize>,
}

/// `E_N = α L - γ` from two cut lengths of equal parity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaLawSplit {
    pub alpha: f64,
    pub gamma: f64,
}

/// Indices of generators supported both inside and outside `region`.
pub fn boundary_generators(s: &StabilizerMixedState, region: &[usize]) -> Vec<usize> {
    let mask = BitVec::from_indices(s.n(), region.iter().copied());
    s.generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let sup = g.support();
            let inside = sup.and_count(&mask);
            inside > 0 && inside < sup.count_ones()
        })
        .map(|(i, _)| i)
        .collect()
}

/// `M_ij = 1` iff the restrictions of boundary generators `i`, `j` to
/// `region` anticommute.
pub fn commutation_matrix(s: &StabilizerMixedState, region: &[usize]) -> BitMatrix {
    let mask = BitVec::from_indices(s.n(), region.iter().copied());
    let restricted: Vec<_> = boundary_generators(s, region)
        .into_iter()
        .map(|i| s.generators()[i].restrict_mask(&mask))
        .collect();
    let k = restricted.len();
    let mut m = BitMatrix::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            if restricted[i].anticommutes(&restricted[j]) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
    }
    m
}

pub fn stabilizer_negativity(s: &StabilizerMixedState, region: &[usize], cut_length: Option<usize>) -> NegativityReport {
    let m = commutation_matrix(s, region);
    let rank = m.rank();
    NegativityReport {
        boundary_generators: m.nrows(),
        rank,
        negativity: rank as f64 / 2.0,
        cut_length,
    }
}

/// Split two reports into slope and constant. The cut lengths must differ
/// and share parity, since several cuts have parity-dependent constants.
pub fn area_law_split(a: &NegativityReport, b: &NegativityReport) -> Result<AreaLawSplit, Error> {
    let (Some(l1), Some(l2)) = (a.cut_length, b.cut_length) else {
        return Err(Error::Invalid("both reports need a cut length".into()));
    };
    if l1 == l2 || (l1 % 2) != (l2 % 2) {
        return Err(Error::Invalid(format!("cut lengths {l1} and {l2} must differ and share parity")));
    }
    let alpha = (b.negativity - a.negativity) / (l2 as f64 - l1 as f64);
    Ok(AreaLawSplit { alpha, gamma: alpha * l1 as f64 - a.negativity })
}

/// Partial-transpose spectrum from sign enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub boundary_generators: usize,
    /// Distinct normalized eigenvalue weights with multiplicities.
    pub levels: Vec<(f64, usize)>,
    pub trace_norm: f64,
    /// `log2` of the trace norm.
    pub negativity: f64,
}

/// Enumerate the overlaps `2^-N Σ_σ (-1)^{σᵀ M_< σ + s·σ}` over all sign
/// assignments `s` and sum their magnitudes.
pub fn negativity_spectrum_oracle(s: &StabilizerMixedState, region: &[usize]) -> Result<SpectrumSummary, Error> {
    let m = commutation_matrix(s, region);
    let n = m.nrows();
    if n > SPECTRUM_MAX_GENERATORS {
        return Err(Error::Budget { name: "boundary-generators", limit: SPECTRUM_MAX_GENERATORS, required: n });
    }
    let upper: Vec<u32> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| m.get(i, j)).fold(0u32, |acc, j| acc | (1 << j)))
        .collect();
    let size = 1usize << n;
    let mut f: Vec<f64> = (0..size as u32)
        .into_par_iter()
        .map(|sigma| {
            let q = (0..n)
                .filter(|&i| sigma >> i & 1 == 1)
                .map(|i| (upper[i] & sigma).count_ones())
                .sum::<u32>();
            if q % 2 == 0 { 1.0 } else { -1.0 }
        })
        .collect();
    fwht(&mut f);
    let norm = size as f64;
    let mut vals: Vec<f64> = f.iter().map(|v| v / norm).collect();
    let trace_norm: f64 = vals.iter().map(|v| v.abs()).sum();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut levels: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match levels.last_mut() {
            Some((x, c)) if (*x - v).abs() < 1e-12 => *c += 1,
            _ => levels.push((v, 1)),
        }
    }
    Ok(SpectrumSummary { boundary_generators: n, levels, trace_norm, negativity: trace_norm.log2() })
}

/// Hexagon bonds as bit-index pairs.
fn cz_bonds(lat: &Lattice) -> Result<Vec<[(u32, u32); 6]>, Error> {
    if lat.kind() != LatticeKind::HoneycombVertices {
        return Err(Error::UnsupportedLattice(format!(
            "the CZ model needs a bipartite honeycomb lattice, got {:?}",
            lat.kind()
        )));
    }
    Ok(lat
        .hexagons()?
        .iter()
        .map(|h| std::array::from_fn(|k| (h[k] as u32, h[(k + 1) % 6] as u32)))
        .collect())
}

/// Every hexagon has an even number of bonds with both ends set.
fn in_cz_set(alpha: u32, bonds: &[[(u32, u32); 6]]) -> bool {
    bonds.iter().all(|hex| {
        hex.iter().map(|&(i, j)| (alpha >> i) & (alpha >> j) & 1).sum::<u32>() % 2 == 0
    })
}

/// Negativity `(‖ρ^{T_A}‖₁ - 1)/2` of the maximally mixed state with the
/// joint spin flip and all hexagon CZ loops as strong symmetries. Equals half
/// the probability that flipping `A` leaves the constrained set.
pub fn mms_cz_negativity(lat: &Lattice, region_a: &[usize]) -> Result<f64, Error> {
    let bonds = cz_bonds(lat)?;
    let n = lat.n();
    if n > CZ_MAX_QUBITS {
        return Err(Error::Budget { name: "cz-qubits", limit: CZ_MAX_QUBITS, required: n });
    }
    let mut flip = 0u32;
    for &q in region_a {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        flip |= 1 << q;
    }
    let (valid, leave) = (0..1u32 << n)
        .into_par_iter()
        .filter(|&a| in_cz_set(a, &bonds))
        .map(|a| (1u64, u64::from(!in_cz_set(a ^ flip, &bonds))))
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(0.5 * leave as f64 / valid as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{partition, Boundary, PartitionScheme};
    use crate::stabmix::{model_state, ModelKind};

    fn cyl(kind: LatticeKind, l: usize, ly: usize) -> Lattice {
        Lattice::build(kind, l, ly, Boundary::Cylinder).unwrap()
    }

    fn cut(lat: &Lattice, one: bool, row: i64) -> Vec<usize> {
        let s = if one { PartitionScheme::CylinderCut1 { row } } else { PartitionScheme::CylinderCut2 { row } };
        partition(lat, s).unwrap().a
    }

    #[test]
    fn product_state_zero() {
        let s = StabilizerMixedState::from_strings(&["ZII", "IZI", "IIX"]).unwrap();
        assert_eq!(commutation_matrix(&s, &[0]).nrows(), 0);
        assert_eq!(stabilizer_negativity(&s, &[0, 2], None).negativity, 0.0);
        let o = negativity_spectrum_oracle(&s, &[0]).unwrap();
        assert_eq!(o.trace_norm, 1.0);
    }

    #[test]
    fn bell_pair_one_bit() {
        let s = StabilizerMixedState::from_strings(&["XX", "ZZ"]).unwrap();
        assert_eq!(stabilizer_negativity(&s, &[0], None).negativity, 1.0);
        assert!((negativity_spectrum_oracle(&s, &[0]).unwrap().trace_norm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zx_cut1_is_cyclic_tridiagonal() {
        let l = cyl(LatticeKind::SquareEdges, 3, 6);
        let s = model_state(ModelKind::ZxDephasedMax, &l).unwrap();
        let m = commutation_matrix(&s, &cut(&l, true, 2));
        assert_eq!(m.nrows(), 6);
        for i in 0..6 {
            assert_eq!((0..6).filter(|&j| m.get(i, j)).count(), 2);
        }
        assert_eq!(m.rank(), 4);
        let o = negativity_spectrum_oracle(&s, &cut(&l, true, 2)).unwrap();
        assert!((o.trace_norm - 4.0).abs() < 1e-9);
    }

    #[test]
    fn split_recovers_constant() {
        let l4 = cyl(LatticeKind::SquareEdges, 4, 6);
        let l6 = cyl(LatticeKind::SquareEdges, 6, 6);
        let r4 = stabilizer_negativity(&model_state(ModelKind::ZxDephasedMax, &l4).unwrap(), &cut(&l4, true, 2), Some(4));
        let r6 = stabilizer_negativity(&model_state(ModelKind::ZxDephasedMax, &l6).unwrap(), &cut(&l6, true, 2), Some(6));
        let sp = area_law_split(&r4, &r6).unwrap();
        assert!((sp.alpha - 1.0).abs() < 1e-12 && (sp.gamma - 1.0).abs() < 1e-12);
        let r5 = NegativityReport { cut_length: Some(5), ..r4.clone() };
        assert!(area_law_split(&r4, &r5).is_err());
    }

    #[test]
    fn cz_trivial_region() {
        let h = Lattice::build(LatticeKind::HoneycombVertices, 1, 1, Boundary::Open).unwrap();
        assert_eq!(mms_cz_negativity(&h, &[]).unwrap(), 0.0);
        let t = Lattice::build(LatticeKind::TriangularVertices, 3, 3, Boundary::Torus).unwrap();
        assert!(mms_cz_negativity(&t, &[0]).is_err());
    }
}
