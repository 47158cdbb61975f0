//! Stabilizer mixed states `ρ_G ∝ ∏(1 + S_i)/2`.
//!
//! Entropies use `S_A = |A| - dim G_A`, where `G_A` is the subgroup supported
//! in `A`. `dim G_A` is the number of generators minus the rank of their
//! restriction to the complement of `A`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{Boundary, Lattice, LatticeKind, Partition, HEXAGON_LETTERS};
use crate::pauli::{PauliOp, Phase};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerMixedState {
    n: usize,
    generators: Vec<PauliOp>,
}

/// Strong (`gρ = λρ`), weak (`gρg† = ρ`) or no symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "charge")]
pub enum SymmetryStatus {
    Strong(Phase),
    Weak,
    None,
}

impl SymmetryStatus {
    pub fn is_strong(&self) -> bool {
        matches!(self, SymmetryStatus::Strong(_))
    }

    pub fn charge(&self) -> Option<Phase> {
        match self {
            SymmetryStatus::Strong(c) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for SymmetryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryStatus::Strong(c) => write!(f, "strong({c})"),
            SymmetryStatus::Weak => f.write_str("weak"),
            SymmetryStatus::None => f.write_str("none"),
        }
    }
}

/// Named states built on a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Z-stars `A_v` and X-plaquettes `B_p`.
    ToricCode,
    /// Z-stars only: the toric code after maximal Z dephasing.
    LoopSoup,
    /// `C_v = A_v B_{v-δ}`: the toric code after maximal `Z_e X_{e+δ}` dephasing.
    ZxDephasedMax,
    /// Kitaev honeycomb plaquette terms.
    HoneycombFlux,
}

/// Families of single-site dephasing operators on the square lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DephasingKind {
    X,
    Z,
    /// Two-body `Z_e X_{e+δ}`.
    Zx,
}

impl StabilizerMixedState {
    /// Validate `gens` and drop dependent ones.
    pub fn canonicalize(n: usize, gens: &[PauliOp]) -> Result<Self, Error> {
        for (i, g) in gens.iter().enumerate() {
            if g.n() != n {
                return Err(Error::QubitCountMismatch { left: n, right: g.n() });
            }
            if !g.is_hermitian() {
                return Err(Error::ImaginarySign(i));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].anticommutes(&gens[j]) {
                    return Err(Error::AnticommutingGenerators(i, j));
                }
            }
        }
        let generators = reduce(n, gens.to_vec())?;
        Ok(Self { n, generators })
    }

    /// Parse each string with the Pauli text grammar, then canonicalize.
    pub fn from_strings(strings: &[&str]) -> Result<Self, Error> {
        let ops: Vec<PauliOp> = strings.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        let n = ops.first().map_or(0, PauliOp::n);
        Self::canonicalize(n, &ops)
    }

    /// The maximally mixed state on `n` qubits.
    #[must_use]
    pub fn maximally_mixed(n: usize) -> Self {
        Self { n, generators: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    /// Number of independent generators.
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    /// Global entropy `n - m` in bits.
    pub fn global_entropy(&self) -> f64 {
        (self.n - self.m()) as f64
    }

    fn symplectic_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(2 * self.n, self.generators.iter().map(PauliOp::symplectic).collect())
            .expect("generators share n")
    }

    /// Generator restrictions to `cols` (qubit indices), as a symplectic matrix.
    fn restricted_matrix(&self, qubits: &[usize]) -> BitMatrix {
        let mut cols: Vec<usize> = qubits.to_vec();
        cols.extend(qubits.iter().map(|&q| q + self.n));
        self.symplectic_matrix().select_cols(&cols)
    }

    fn complement(&self, region: &[usize]) -> Vec<usize> {
        let mask = BitVec::from_indices(self.n, region.iter().copied());
        (0..self.n).filter(|&q| !mask.get(q)).collect()
    }

    /// `dim G_A`: independent group elements supported inside `region`.
    pub fn region_group_dim(&self, region: &[usize]) -> usize {
        let comp = self.complement(region);
        self.m() - self.restricted_matrix(&comp).rank()
    }

    /// Von Neumann entropy of the reduced state on `region`, in bits.
    pub fn entropy_region(&self, region: &[usize]) -> f64 {
        let mut r = region.to_vec();
        r.sort_unstable();
        r.dedup();
        (r.len() - self.region_group_dim(&r)) as f64
    }

    /// `I(A:C|B) = S_AB + S_BC - S_B - S_ABC`.
    pub fn cmi(&self, p: &Partition) -> f64 {
        self.entropy_region(&p.ab()) + self.entropy_region(&p.bc())
            - self.entropy_region(&p.b)
            - self.entropy_region(&p.abc())
    }

    /// Generators of the subgroup supported inside `region`, with exact signs.
    pub fn region_subgroup(&self, region: &[usize]) -> Vec<PauliOp> {
        let comp = self.complement(region);
        let r = self.restricted_matrix(&comp);
        r.transpose()
            .nullspace()
            .iter()
            .map(|c| self.combine(c))
            .collect()
    }

    /// Ordered product of the generators selected by `coeff`.
    fn combine(&self, coeff: &BitVec) -> PauliOp {
        coeff
            .ones()
            .fold(PauliOp::identity(self.n), |acc, i| acc.mul_unchecked(&self.generators[i]))
    }

    /// Classify `g` as a strong, weak or non-symmetry of the state.
    pub fn symmetry_status(&self, g: &PauliOp) -> Result<SymmetryStatus, Error> {
        if g.n() != self.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: g.n() });
        }
        if let Some(c) = self.symplectic_matrix().in_span(&g.symplectic())? {
            let h = self.combine(&c);
            // same Pauli string, so g = i^(pg - ph) h and h fixes ρ
            return Ok(SymmetryStatus::Strong(Phase::new(g.phase() + 4 - h.phase())));
        }
        if self.generators.iter().all(|s| !s.anticommutes(g)) {
            Ok(SymmetryStatus::Weak)
        } else {
            Ok(SymmetryStatus::None)
        }
    }

    /// The group's centralizer of `noise`: the state after maximal dephasing
    /// by every operator in `noise`.
    pub fn apply_max_dephasing(&self, noise: &[PauliOp]) -> Result<Self, Error> {
        let mut gens = self.generators.clone();
        for op in noise {
            if op.n() != self.n {
                return Err(Error::QubitCountMismatch { left: self.n, right: op.n() });
            }
            if !op.is_hermitian() {
                return Err(Error::Invalid(format!("noise operator {op} is not Hermitian")));
            }
            let Some(k) = gens.iter().position(|g| g.anticommutes(op)) else { continue };
            let pivot = gens.remove(k);
            for g in gens.iter_mut() {
                if g.anticommutes(op) {
                    *g = g.mul_unchecked(&pivot);
                }
            }
        }
        Self::canonicalize(self.n, &gens)
    }

    /// Conjugate the state by a Pauli: generators anticommuting with `p` flip sign.
    #[must_use]
    pub fn conjugated_by(&self, p: &PauliOp) -> Self {
        let generators = self
            .generators
            .iter()
            .map(|g| if g.anticommutes(p) { g.times_i(2) } else { g.clone() })
            .collect();
        Self { n: self.n, generators }
    }

    /// Sign sector: flip the sign of generator `i` wherever `flips[i]` is set.
    #[must_use]
    pub fn sector(&self, flips: &BitVec) -> Self {
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| if flips.get(i) { g.times_i(2) } else { g.clone() })
            .collect();
        Self { n: self.n, generators }
    }

    /// `ρ ⊗ |0…0⟩⟨0…0|` on `extra` appended ancillas.
    #[must_use]
    pub fn with_zero_ancillas(&self, extra: usize) -> Self {
        let n = self.n + extra;
        let mut generators: Vec<PauliOp> = self.generators.iter().map(|g| g.extend(extra)).collect();
        for a in self.n..n {
            generators.push(PauliOp::single(n, a, 'Z').expect("ancilla in range"));
        }
        Self { n, generators }
    }

    /// Generators as text, one per operator.
    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }
}

/// Drop dependent generators, keeping the rest as given. Each kept
/// generator is also stored in echelon form with its sign tracked, so a
/// dependent one that reduces to `-I` is caught.
fn reduce(n: usize, rows: Vec<PauliOp>) -> Result<Vec<PauliOp>, Error> {
    let lead = |p: &PauliOp| p.x().ones().next().or_else(|| p.z().ones().next().map(|c| c + n));
    let bit = |p: &PauliOp, col: usize| if col < n { p.x().get(col) } else { p.z().get(col - n) };
    let mut echelon: Vec<(usize, PauliOp)> = Vec::new();
    let mut kept = Vec::new();
    for g in rows {
        let mut h = g.clone();
        for (col, b) in &echelon {
            if bit(&h, *col) {
                h = h.mul_unchecked(b);
            }
        }
        match lead(&h) {
            None if h.phase() != 0 => return Err(Error::InconsistentSigns),
            None => {}
            Some(col) => {
                let at = echelon.partition_point(|(c, _)| *c < col);
                echelon.insert(at, (col, h));
                kept.push(g);
            }
        }
    }
    Ok(kept)
}

impl StabilizerMixedState {
    /// True when both states have the same stabilizer group, signs included.
    pub fn same_group(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m() == other.m()
            && other
                .generators
                .iter()
                .all(|g| matches!(self.symmetry_status(g), Ok(SymmetryStatus::Strong(Phase::ONE))))
    }
}

/// Build one of the named model states on a lattice.
pub fn model_state(kind: ModelKind, lat: &Lattice) -> Result<StabilizerMixedState, Error> {
    let n = lat.n();
    let incompatible = || Error::UnsupportedLattice(format!("{kind:?} on {:?}", lat.kind()));
    let mut gens = Vec::new();
    match kind {
        ModelKind::ToricCode | ModelKind::LoopSoup | ModelKind::ZxDephasedMax => {
            if lat.kind() != LatticeKind::SquareEdges {
                return Err(incompatible());
            }
            for (x, y) in lat.vertices() {
                let star = star_op(lat, x, y)?;
                match kind {
                    ModelKind::ToricCode | ModelKind::LoopSoup => gens.push(star),
                    _ => {
                        if let Some(b) = plaquette_op(lat, x, y - 1)? {
                            gens.push(star.mul_unchecked(&b));
                        }
                    }
                }
            }
            if kind == ModelKind::ToricCode {
                for (x, y) in lat.plaquettes() {
                    gens.extend(plaquette_op(lat, x, y)?);
                }
            }
        }
        ModelKind::HoneycombFlux => {
            if lat.kind() != LatticeKind::HoneycombVertices {
                return Err(incompatible());
            }
            for hex in lat.hexagons()? {
                let letters: Vec<(usize, char)> = hex.iter().copied().zip(HEXAGON_LETTERS).collect();
                gens.push(PauliOp::from_letters(n, &letters)?);
            }
        }
    }
    StabilizerMixedState::canonicalize(n, &gens)
}

/// Z-star `A_v`.
pub fn star_op(lat: &Lattice, x: i64, y: i64) -> Result<PauliOp, Error> {
    PauliOp::uniform(lat.n(), &lat.star(x, y), 'Z')
}

/// X-plaquette `B_p` for the plaquette with lower-left corner `(x, y)`.
pub fn plaquette_op(lat: &Lattice, x: i64, y: i64) -> Result<Option<PauliOp>, Error> {
    lat.plaquette(x, y).map(|e| PauliOp::uniform(lat.n(), &e, 'X')).transpose()
}

/// Dephasing operators of one family on every edge where they fit.
pub fn dephasing_ops(lat: &Lattice, kind: DephasingKind) -> Result<Vec<PauliOp>, Error> {
    if lat.kind() != LatticeKind::SquareEdges {
        return Err(Error::UnsupportedLattice("dephasing families are defined on square-edges".into()));
    }
    let n = lat.n();
    (0..n)
        .filter_map(|e| match kind {
            DephasingKind::X => Some(PauliOp::single(n, e, 'X')),
            DephasingKind::Z => Some(PauliOp::single(n, e, 'Z')),
            DephasingKind::Zx => lat.delta(e).map(|d| PauliOp::from_letters(n, &[(e, 'Z'), (d, 'X')])),
        })
        .collect()
}

/// True when the lattice is a torus; several constructions need it.
pub fn is_torus(lat: &Lattice) -> bool {
    lat.boundary() == Boundary::Torus
}
