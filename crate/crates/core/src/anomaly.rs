//! One-form symmetry strings on the square lattice and the data they carry.
//!
//! * `e`: X on the edges of a direct path.
//! * `m`: Z on the edges crossed by a dual path.
//! * `f`: `X_e Z_{e+δ}` per link of a direct path.
//!
//! A string is the ordered product `w(link_k)⋯w(link_1)`, so later links
//! stand to the left. Braiding is the commutation sign of two strings cut
//! down to a disc around their single crossing. Self-statistics is the phase
//! between two orderings of three hopping strings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{crossing_points, standard_paths, Boundary, Crossing, Lattice, LatticeKind, Partition, Path, PathKind, PathRequest};
use crate::pauli::{CliffordCircuit, Direction, Gate, PauliOp, Phase};
use crate::stabmix::{plaquette_op, star_op, StabilizerMixedState, SymmetryStatus};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anyon {
    E,
    M,
    F,
}

impl Anyon {
    pub const ALL: [Anyon; 3] = [Anyon::E, Anyon::M, Anyon::F];

    /// Lattice the anyon's paths live on.
    pub fn path_kind(self) -> PathKind {
        match self {
            Anyon::M => PathKind::Dual,
            Anyon::E | Anyon::F => PathKind::Direct,
        }
    }
}

impl fmt::Display for Anyon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Anyon::E => "e",
            Anyon::M => "m",
            Anyon::F => "f",
        })
    }
}

impl std::str::FromStr for Anyon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "e" => Ok(Anyon::E),
            "m" => Ok(Anyon::M),
            "f" => Ok(Anyon::F),
            _ => Err(Error::Invalid(format!("unknown anyon {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringOperator {
    pub anyon: Anyon,
    pub path: Path,
    pub operator: PauliOp,
}

/// Build `W_a(path)`.
pub fn string_operator(anyon: Anyon, path: &Path, lat: &Lattice) -> Result<StringOperator, Error> {
    if lat.kind() != LatticeKind::SquareEdges {
        return Err(Error::UnsupportedLattice("string operators live on square-edges".into()));
    }
    if path.kind != anyon.path_kind() {
        return Err(Error::Geometry(format!("{anyon} strings need a {:?} path", anyon.path_kind())));
    }
    let n = lat.n();
    let mut op = PauliOp::identity(n);
    for link in &path.links {
        let w = match anyon {
            Anyon::E => PauliOp::single(n, link.qubit, 'X')?,
            Anyon::M => PauliOp::single(n, link.qubit, 'Z')?,
            Anyon::F => {
                let d = lat
                    .delta(link.qubit)
                    .ok_or_else(|| Error::Geometry(format!("edge {} has no δ partner", link.qubit)))?;
                PauliOp::from_letters(n, &[(link.qubit, 'X'), (d, 'Z')])?
            }
        };
        op = w.mul_unchecked(&op);
    }
    Ok(StringOperator { anyon, path: path.clone(), operator: op })
}

/// String along the paths of a standard request (first path only).
pub fn standard_string(anyon: Anyon, lat: &Lattice, req: PathRequest) -> Result<StringOperator, Error> {
    let path = standard_paths(lat, req)?.remove(0);
    string_operator(anyon, &path, lat)
}

/// Mutual braiding phase of two strings crossing exactly once inside
/// `region`. Operators may live on a larger qubit set than the lattice (for
/// pulled-back strings); `region` indexes that set.
pub fn braiding_phase(wa: &StringOperator, wb: &StringOperator, region: &[usize]) -> Result<Phase, Error> {
    let (a, b) = (&wa.operator, &wb.operator);
    if a.n() != b.n() {
        return Err(Error::QubitCountMismatch { left: a.n(), right: b.n() });
    }
    let inside = BitVec::from_indices(a.n(), region.iter().copied());
    let crossings = crossing_points(&wa.path, &wb.path);
    if crossings.len() != 1 {
        return Err(Error::Crossing(format!("paths cross {} times, need exactly 1", crossings.len())));
    }
    let ok = match crossings[0] {
        Crossing::Edge(q) => inside.get(q),
        Crossing::Node(p) => [&wa.path, &wb.path].iter().all(|path| {
            path.links
                .iter()
                .zip(path.nodes.windows(2))
                .filter(|(_, w)| w[0] == p || w[1] == p)
                .all(|(l, _)| inside.get(l.qubit))
        }),
    };
    if !ok {
        return Err(Error::Crossing("the crossing is not inside the region".into()));
    }
    let sign = a.restrict_mask(&inside).commutes(&b.restrict_mask(&inside))?;
    Ok(Phase::from_sign(sign))
}

/// Default disc for [`braiding_phase`]: edges within two spacings of `center`.
pub fn crossing_disc(lat: &Lattice, center: (i64, i64)) -> Vec<usize> {
    lat.disc_around_vertex(center, 2)
}

/// The hopping strings `t_pq`, `t_pr`, `t_sp`, with `q, r, s` at distance
/// `arm` east, north and west of `center`.
pub fn statistics_strings(anyon: Anyon, lat: &Lattice, center: (i64, i64), arm: i64) -> Result<Vec<StringOperator>, Error> {
    standard_paths(lat, PathRequest::Statistics { center, arm, kind: anyon.path_kind() })?
        .iter()
        .map(|p| string_operator(anyon, p, lat))
        .collect()
}

/// `θ` from `t_pr t_sp t_pq = θ t_pq t_sp t_pr`.
pub fn hopping_phase(t_pq: &PauliOp, t_pr: &PauliOp, t_sp: &PauliOp) -> Result<Phase, Error> {
    let lhs = t_pr.multiply(t_sp)?.multiply(t_pq)?;
    let rhs = t_pq.multiply(t_sp)?.multiply(t_pr)?;
    debug_assert_eq!(lhs.unsigned(), rhs.unsigned());
    Ok(Phase::new(lhs.phase() + 4 - rhs.phase()))
}

/// Exchange statistics `θ_a` from the hopping triple around `center`.
pub fn self_statistics(anyon: Anyon, lat: &Lattice, center: (i64, i64), arm: i64) -> Result<Phase, Error> {
    let t = statistics_strings(anyon, lat, center, arm)?;
    hopping_phase(&t[0].operator, &t[1].operator, &t[2].operator)
}

// ---- dilations and pullback ---------------------------------------------

/// Maximal dephasing channels with a Clifford dilation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DilationKind {
    /// `ρ → ½(ρ + ZρZ)` per edge.
    Z,
    /// `ρ → ½(ρ + XρX)` per edge.
    X,
    /// `ρ → ½(ρ + Z_e X_{e+δ} ρ Z_e X_{e+δ})` per edge.
    Zx,
    /// Z then X dephasing, two ancillas per edge.
    XZ,
}

/// A unitary `U` on system plus ancillas (initialised to `|0⟩`) whose
/// ancilla trace implements a dephasing channel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dilation {
    pub kind: DilationKind,
    pub system: usize,
    pub ancillas: Vec<usize>,
    pub circuit: CliffordCircuit,
}

/// Dilation circuit: Hadamards on every ancilla, then all CZ, then all CX.
pub fn dilation(lat: &Lattice, kind: DilationKind) -> Result<Dilation, Error> {
    if lat.kind() != LatticeKind::SquareEdges {
        return Err(Error::UnsupportedLattice("dilations are defined on square-edges".into()));
    }
    let n = lat.n();
    let edges: Vec<usize> = match kind {
        DilationKind::Zx => (0..n).filter(|&e| lat.delta(e).is_some()).collect(),
        _ => (0..n).collect(),
    };
    let per = if kind == DilationKind::XZ { 2 } else { 1 };
    let total = n + per * edges.len();
    let ancillas: Vec<usize> = (n..total).collect();
    let mut cz = Vec::new();
    let mut cx = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        let a = n + per * i;
        match kind {
            DilationKind::Z => cz.push(Gate::CZ(e, a)),
            DilationKind::X => cx.push(Gate::CX(a, e)),
            DilationKind::Zx => {
                cz.push(Gate::CZ(a, e));
                cx.push(Gate::CX(a, lat.delta(e).expect("filtered")));
            }
            DilationKind::XZ => {
                cz.push(Gate::CZ(e, a));
                cx.push(Gate::CX(a + 1, e));
            }
        }
    }
    let gates = ancillas.iter().map(|&a| Gate::H(a)).chain(cz).chain(cx);
    let circuit = CliffordCircuit::from_gates(total, gates)?;
    Ok(Dilation { kind, system: n, ancillas, circuit })
}

impl Dilation {
    pub fn total_qubits(&self) -> usize {
        self.system + self.ancillas.len()
    }

    /// `ρ ⊗ |0…0⟩⟨0…0|`.
    pub fn input_state(&self, s: &StabilizerMixedState) -> Result<StabilizerMixedState, Error> {
        if s.n() != self.system {
            return Err(Error::QubitCountMismatch { left: self.system, right: s.n() });
        }
        Ok(s.with_zero_ancillas(self.ancillas.len()))
    }

    /// `Tr_anc U (ρ ⊗ |0⟩⟨0|) U†`.
    pub fn output_state(&self, s: &StabilizerMixedState) -> Result<StabilizerMixedState, Error> {
        let input = self.input_state(s)?;
        let evolved: Vec<PauliOp> = input
            .generators()
            .iter()
            .map(|g| self.circuit.conjugate(g, Direction::Forward))
            .collect::<Result<_, _>>()?;
        let full = StabilizerMixedState::canonicalize(self.total_qubits(), &evolved)?;
        let system: Vec<usize> = (0..self.system).collect();
        let reduced: Vec<PauliOp> = full
            .region_subgroup(&system)
            .iter()
            .map(|g| g.truncate(self.system))
            .collect::<Result<_, _>>()?;
        StabilizerMixedState::canonicalize(self.system, &reduced)
    }
}

/// `U† (g ⊗ 1) U` for `g` on the system qubits.
pub fn pullback(g: &PauliOp, d: &Dilation) -> Result<PauliOp, Error> {
    let full = if g.n() == d.system {
        g.extend(d.ancillas.len())
    } else if g.n() == d.total_qubits() {
        if g.support().ones().any(|q| q >= d.system) {
            return Err(Error::Invalid("operator to pull back acts on ancillas".into()));
        }
        g.clone()
    } else {
        return Err(Error::QubitCountMismatch { left: d.system, right: g.n() });
    };
    d.circuit.conjugate(&full, Direction::Inverse)
}

/// Pull back a string; the path is kept for crossing bookkeeping.
pub fn pullback_string(w: &StringOperator, d: &Dilation) -> Result<StringOperator, Error> {
    Ok(StringOperator { anyon: w.anyon, path: w.path.clone(), operator: pullback(&w.operator, d)? })
}

// ---- memory -------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "class", content = "k")]
pub enum MemoryClass {
    Quantum(usize),
    Classical(usize),
    Trivial,
}

impl fmt::Display for MemoryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemoryClass::Quantum(k) => write!(f, "quantum({k})"),
            MemoryClass::Classical(k) => write!(f, "classical({k})"),
            MemoryClass::Trivial => f.write_str("trivial"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopStatus {
    pub anyon: Anyon,
    /// `"horizontal"` or `"vertical"`.
    pub direction: String,
    pub status: SymmetryStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryReport {
    pub class: MemoryClass,
    pub logical_qubits: usize,
    pub logical_bits: usize,
    /// Anyon types whose contractible loops are all strong symmetries.
    pub strong_types: Vec<Anyon>,
    /// Literal status of each non-contractible loop.
    pub loops: Vec<LoopStatus>,
}

fn contractible_loops(anyon: Anyon, lat: &Lattice) -> Result<Vec<PauliOp>, Error> {
    match anyon {
        Anyon::E => lat
            .plaquettes()
            .into_iter()
            .map(|(x, y)| plaquette_op(lat, x, y).map(|p| p.expect("listed plaquette")))
            .collect(),
        Anyon::M => lat.vertices().into_iter().map(|(x, y)| star_op(lat, x, y)).collect(),
        Anyon::F => lat
            .plaquettes()
            .into_iter()
            .map(|c| standard_string(Anyon::F, lat, PathRequest::Rectangle { center: c, radius: 0, kind: PathKind::Direct }).map(|s| s.operator))
            .collect(),
    }
}

/// Classify the topological memory carried by `s` on a square torus.
///
/// A type counts when every elementary contractible loop of it is a strong
/// symmetry. Its non-contractible loops then act as logical operators:
/// anticommuting pairs give qubits, the rest of their span gives bits.
pub fn classify_memory(s: &StabilizerMixedState, lat: &Lattice) -> Result<MemoryReport, Error> {
    if lat.kind() != LatticeKind::SquareEdges || lat.boundary() != Boundary::Torus {
        return Err(Error::UnsupportedLattice("memory classification needs a square torus".into()));
    }
    let mut strong_types = Vec::new();
    let mut loops = Vec::new();
    let mut logicals: Vec<PauliOp> = Vec::new();
    for anyon in Anyon::ALL {
        let strong = contractible_loops(anyon, lat)?
            .iter()
            .map(|g| s.symmetry_status(g).map(|st| st.is_strong()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .all(|b| b);
        if strong {
            strong_types.push(anyon);
        }
        let kind = anyon.path_kind();
        for (direction, req) in [
            ("horizontal", PathRequest::HorizontalLoop { at: 0, kind }),
            ("vertical", PathRequest::VerticalLoop { at: 0, kind }),
        ] {
            let w = standard_string(anyon, lat, req)?.operator;
            loops.push(LoopStatus { anyon, direction: direction.into(), status: s.symmetry_status(&w)? });
            if strong {
                logicals.push(w);
            }
        }
    }
    let n2 = 2 * s.n();
    let group_rows: Vec<BitVec> = s.generators().iter().map(PauliOp::symplectic).collect();
    let base = BitMatrix::from_rows(n2, group_rows.clone())?.rank();
    let mut all = group_rows;
    all.extend(logicals.iter().map(PauliOp::symplectic));
    let span = BitMatrix::from_rows(n2, all)?.rank() - base;
    let k = logicals.len();
    let mut comm = BitMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            comm.set(i, j, logicals[i].anticommutes(&logicals[j]));
        }
    }
    let logical_qubits = comm.rank() / 2;
    let logical_bits = span - 2 * logical_qubits;
    let class = if logical_qubits > 0 {
        MemoryClass::Quantum(logical_qubits)
    } else if logical_bits > 0 {
        MemoryClass::Classical(logical_bits)
    } else {
        MemoryClass::Trivial
    };
    Ok(MemoryReport { class, logical_qubits, logical_bits, strong_types, loops })
}

// ---- witness ------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Charge of `W_a` in `ρ` (absent when `W_a` is not strong).
    pub charge_before: Option<Phase>,
    /// Charge of `W_a` in `W_b ρ W_b†`.
    pub charge_after: Option<Phase>,
    /// Ratio of the two charges.
    pub measured_charge: Option<Phase>,
    /// Commutation sign of the crossing strings.
    pub braiding: Phase,
    pub charge_matches: bool,
    pub locally_indistinguishable: bool,
    pub homentropic: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.charge_matches && self.locally_indistinguishable && self.homentropic
    }
}

fn endpoint_edges(lat: &Lattice, kind: PathKind, node: (i64, i64)) -> Vec<usize> {
    match kind {
        PathKind::Direct => lat.star(node.0, node.1),
        PathKind::Dual => lat.plaquette(node.0, node.1).unwrap_or_default(),
    }
}

/// Check the three ingredients of the entanglement-entropy lower bound for a
/// strong loop `wa` inside the annulus `ABC` and an open string `wb` that
/// runs from the hole to the outside.
pub fn tee_witness_check(
    s: &StabilizerMixedState,
    lat: &Lattice,
    wa: &StringOperator,
    wb: &StringOperator,
    p: &Partition,
) -> Result<WitnessReport, Error> {
    let abc = BitVec::from_indices(s.n(), p.abc());
    if !wa.path.closed {
        return Err(Error::Geometry("the strong string must be a closed loop".into()));
    }
    if wa.operator.support().ones().any(|q| !abc.get(q)) {
        return Err(Error::Geometry("the strong loop leaves the annulus".into()));
    }
    if wb.path.closed || wb.path.links.is_empty() {
        return Err(Error::Geometry("the weak string must be open".into()));
    }
    for end in [wb.path.start(), wb.path.end()].into_iter().flatten() {
        if endpoint_edges(lat, wb.path.kind, end).iter().any(|&q| abc.get(q)) {
            return Err(Error::Geometry(format!("weak string endpoint {end:?} touches the annulus")));
        }
    }
    if wb.operator.support().and_count(&abc) == 0 {
        return Err(Error::Geometry("the weak string misses the annulus".into()));
    }
    let crossings = crossing_points(&wa.path, &wb.path).len();
    if crossings != 1 {
        return Err(Error::Crossing(format!("strings cross {crossings} times, need exactly 1")));
    }

    let braiding = Phase::from_sign(wa.operator.commutes(&wb.operator)?);
    let disturbed = s.conjugated_by(&wb.operator);
    let charge_before = s.symmetry_status(&wa.operator)?.charge();
    let charge_after = disturbed.symmetry_status(&wa.operator)?.charge();
    let measured_charge = charge_before.zip(charge_after).map(|(b, a)| a * b.conj());
    let charge_matches = measured_charge == Some(braiding);

    let locally_indistinguishable = [p.ab(), p.bc(), p.a.clone(), p.b.clone(), p.c.clone()]
        .iter()
        .all(|r| s.region_subgroup(r).iter().all(|g| !g.anticommutes(&wb.operator)));

    let abc_q = p.abc();
    let homentropic = s.entropy_region(&abc_q) == disturbed.entropy_region(&abc_q);

    Ok(WitnessReport {
        charge_before,
        charge_after,
        measured_charge,
        braiding,
        charge_matches,
        locally_indistinguishable,
        homentropic,
    })
}
