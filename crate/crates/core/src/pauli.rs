//! Phase-tracked Pauli operators and Clifford conjugation.
//!
//! An operator is stored as `i^phase · ∏_q X_q^{x_q} Z_q^{z_q}` with X to
//! the left of Z on each qubit. Under this convention `X·Z = -i·Y` and
//! `Y = i·X·Z`. The text form uses letters instead, so `"+Y"` has
//! `phase = 1`, `x = z = 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::gf2::BitVec;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOp {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self { n, x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// Raw constructor in the X-then-Z convention.
    pub fn from_parts(x: BitVec, z: BitVec, phase: u8) -> Result<Self, Error> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: z.len() });
        }
        Ok(Self { n: x.len(), x, z, phase: phase % 4 })
    }

    /// Hermitian product of single-qubit letters, e.g. `[(0,'X'),(3,'Y')]`.
    /// Repeated qubits are multiplied left to right.
    pub fn from_letters(n: usize, letters: &[(usize, char)]) -> Result<Self, Error> {
        let mut op = Self::identity(n);
        for &(q, c) in letters {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            let f = Self::single(n, q, c)?;
            op = op.mul_unchecked(&f);
        }
        Ok(op)
    }

    /// Single-qubit letter `I`, `X`, `Y` or `Z` on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self, Error> {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        let mut op = Self::identity(n);
        match letter {
            'I' => {}
            'X' => op.x.set(q, true),
            'Z' => op.z.set(q, true),
            'Y' => {
                op.x.set(q, true);
                op.z.set(q, true);
                op.phase = 1;
            }
            _ => return Err(Error::ParsePauli(letter.to_string())),
        }
        Ok(op)
    }

    /// Tensor product of the same letter on every qubit in `qubits`.
    pub fn uniform(n: usize, qubits: &[usize], letter: char) -> Result<Self, Error> {
        let l: Vec<_> = qubits.iter().map(|&q| (q, letter)).collect();
        Self::from_letters(n, &l)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    /// Exponent of `i` in the X-then-Z convention.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Exponent of `i` in front of the letter string (`Y` counted as a letter).
    pub fn letter_phase(&self) -> u8 {
        let ys = (self.x.and_count(&self.z) % 4) as u8;
        (self.phase + 4 - ys) % 4
    }

    /// True iff the operator is Hermitian, i.e. its letter sign is real.
    pub fn is_hermitian(&self) -> bool {
        self.letter_phase().is_multiple_of(2)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Qubits acted on nontrivially.
    pub fn support(&self) -> BitVec {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones()
    }

    /// Letter at qubit `q`.
    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Multiply by `i^k`.
    #[must_use]
    pub fn times_i(&self, k: u8) -> Self {
        let mut o = self.clone();
        o.phase = (o.phase + k) % 4;
        o
    }

    /// Same Pauli string with letter sign `+`.
    #[must_use]
    pub fn unsigned(&self) -> Self {
        let mut o = self.clone();
        o.phase = (self.x.and_count(&self.z) % 4) as u8;
        o
    }

    /// Symplectic vector `x ‖ z`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Inverse of [`PauliOp::symplectic`] with phase 0.
    pub fn from_symplectic(v: &BitVec) -> Result<Self, Error> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Invalid("odd symplectic length".into()));
        }
        let n = v.len() / 2;
        let x = v.select(&(0..n).collect::<Vec<_>>());
        let z = v.select(&(n..2 * n).collect::<Vec<_>>());
        Self::from_parts(x, z, 0)
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp, Error> {
        self.check_n(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOp) -> PauliOp {
        debug_assert_eq!(self.n, other.n);
        // Z^a X^b = (-1)^{ab} X^b Z^a on each qubit
        let flips = (self.z.and_count(&other.x) % 2) as u8;
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        PauliOp { n: self.n, x, z, phase: (self.phase + other.phase + 2 * flips) % 4 }
    }

    /// `+1` if the operators commute, `-1` otherwise.
    pub fn commutes(&self, other: &PauliOp) -> Result<i8, Error> {
        self.check_n(other)?;
        Ok(if self.anticommutes(other) { -1 } else { 1 })
    }

    pub fn anticommutes(&self, other: &PauliOp) -> bool {
        debug_assert_eq!(self.n, other.n);
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 1
    }

    /// Tensor factors on `region`, identity elsewhere, letter sign `+`.
    #[must_use]
    pub fn restrict(&self, region: &[usize]) -> PauliOp {
        self.restrict_mask(&BitVec::from_indices(self.n, region.iter().copied()))
    }

    #[must_use]
    pub fn restrict_mask(&self, mask: &BitVec) -> PauliOp {
        let mut x = self.x.clone();
        x.and_assign(mask);
        let mut z = self.z.clone();
        z.and_assign(mask);
        PauliOp { n: self.n, x, z, phase: 0 }.unsigned()
    }

    /// Embed into `n + extra` qubits, new qubits appended as identity.
    #[must_use]
    pub fn extend(&self, extra: usize) -> PauliOp {
        let n = self.n + extra;
        let x = BitVec::from_indices(n, self.x.ones());
        let z = BitVec::from_indices(n, self.z.ones());
        PauliOp { n, x, z, phase: self.phase }
    }

    /// Drop trailing qubits, which must carry identity. The sign is kept.
    pub fn truncate(&self, n: usize) -> Result<PauliOp, Error> {
        if let Some(q) = self.support().ones().find(|&q| q >= n) {
            return Err(Error::Invalid(format!("qubit {q} is outside the first {n}")));
        }
        let x = BitVec::from_indices(n, self.x.ones());
        let z = BitVec::from_indices(n, self.z.ones());
        Ok(PauliOp { n, x, z, phase: self.phase })
    }

    /// Apply a Clifford circuit by conjugation.
    pub fn conjugate_by_circuit(&self, c: &CliffordCircuit, dir: Direction) -> Result<PauliOp, Error> {
        c.conjugate(self, dir)
    }

    fn check_n(&self, other: &PauliOp) -> Result<(), Error> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}

impl std::ops::Mul for &PauliOp {
    type Output = PauliOp;

    /// Panics on a qubit-count mismatch; use [`PauliOp::multiply`] to get an error.
    fn mul(self, rhs: &PauliOp) -> PauliOp {
        self.multiply(rhs).expect("Pauli product of different sizes")
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.letter_phase() as usize])?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().replace('\u{2212}', "-");
        let (prefix, body) = match t.char_indices().find(|&(_, c)| matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
            Some((i, _)) => t.split_at(i),
            None => (t.as_str(), ""),
        };
        let lp = match prefix {
            "" | "+" => 0,
            "+i" => 1,
            "-" => 2,
            "-i" => 3,
            _ => return Err(Error::ParsePauli(s.to_string())),
        };
        let n = body.chars().count();
        let mut op = PauliOp::identity(n);
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => op.x.set(q, true),
                'Z' => op.z.set(q, true),
                'Y' => {
                    op.x.set(q, true);
                    op.z.set(q, true);
                }
                _ => return Err(Error::ParsePauli(s.to_string())),
            }
        }
        let ys = (op.x.and_count(&op.z) % 4) as u8;
        op.phase = (lp + ys) % 4;
        Ok(op)
    }
}

impl Serialize for PauliOp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A power of `i`: `+1`, `+i`, `-1`, `-i` for exponents 0..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const MINUS_ONE: Phase = Phase(2);

    #[must_use]
    pub fn new(k: u8) -> Self {
        Phase(k % 4)
    }

    /// `+1` or `-1` as a sign.
    #[must_use]
    pub fn from_sign(s: i8) -> Self {
        if s < 0 { Phase(2) } else { Phase(0) }
    }

    #[must_use]
    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Value as `(re, im)`.
    pub fn as_complex(self) -> (f64, f64) {
        [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][self.0 as usize]
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, o: Phase) -> Phase {
        Phase((self.0 + o.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(["+1", "+i", "-1", "-i"][self.0 as usize % 4])
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "+1" | "1" => Ok(Phase(0)),
            "+i" | "i" => Ok(Phase(1)),
            "-1" => Ok(Phase(2)),
            "-i" => Ok(Phase(3)),
            _ => Err(Error::Invalid(format!("phase {s:?}"))),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Clifford gates. Two-qubit gates list (control, target).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    CX(usize, usize),
    CZ(usize, usize),
    X(usize),
    Z(usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Z(q) => (q, None),
            Gate::CX(a, b) | Gate::CZ(a, b) => (a, Some(b)),
        }
    }
}

/// `Forward` maps `P ↦ U P U†`, `Inverse` maps `P ↦ U† P U`, where the
/// circuit's gates act in list order (`U = g_k ⋯ g_1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
}

// Two-qubit local Pauli: bit 0 = first gate qubit, bit 1 = second.
#[derive(Clone, Copy)]
struct Local {
    x: u8,
    z: u8,
    ph: u8,
}

impl Local {
    const ID: Local = Local { x: 0, z: 0, ph: 0 };

    fn mul(self, o: Local) -> Local {
        let flips = (self.z & o.x).count_ones() as u8;
        Local { x: self.x ^ o.x, z: self.z ^ o.z, ph: (self.ph + o.ph + 2 * flips) % 4 }
    }
}

const fn loc(x: u8, z: u8, ph: u8) -> Local {
    Local { x, z, ph }
}

impl CliffordCircuit {
    #[must_use]
    pub fn new(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self, Error> {
        let mut c = Self::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<(), Error> {
        let (a, b) = g.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        if b == Some(a) {
            return Err(Error::InvalidGate(format!("{g:?} acts twice on qubit {a}")));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn conjugate(&self, p: &PauliOp, dir: Direction) -> Result<PauliOp, Error> {
        if p.n != self.n {
            return Err(Error::QubitCountMismatch { left: p.n, right: self.n });
        }
        let mut out = p.clone();
        match dir {
            Direction::Forward => self.gates.iter().for_each(|g| conj_gate(&mut out, g, false)),
            Direction::Inverse => self.gates.iter().rev().for_each(|g| conj_gate(&mut out, g, true)),
        }
        Ok(out)
    }

    /// Qubits that can influence `U† O U` for `O` supported on `region`.
    pub fn light_cone(&self, region: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        for &q in region {
            inside[q] = true;
        }
        for g in self.gates.iter().rev() {
            if let (a, Some(b)) = g.qubits() {
                if inside[a] || inside[b] {
                    inside[a] = true;
                    inside[b] = true;
                }
            }
        }
        (0..self.n).filter(|&q| inside[q]).collect()
    }
}

/// Image of X or Z on the gate's first/second qubit. `which`: 0 = X_a,
/// 1 = Z_a, 2 = X_b, 3 = Z_b.
fn image(g: &Gate, which: usize, inverse: bool) -> Local {
    const X0: Local = loc(1, 0, 0);
    const Z0: Local = loc(0, 1, 0);
    const X1: Local = loc(2, 0, 0);
    const Z1: Local = loc(0, 2, 0);
    match (g, which) {
        (Gate::H(_), 0) => Z0,
        (Gate::H(_), 1) => X0,
        // S X S† = Y = i X Z, S† X S = -Y
        (Gate::S(_), 0) => loc(1, 1, if inverse { 3 } else { 1 }),
        (Gate::S(_), 1) => Z0,
        (Gate::X(_), 0) => X0,
        (Gate::X(_), 1) => loc(0, 1, 2),
        (Gate::Z(_), 0) => loc(1, 0, 2),
        (Gate::Z(_), 1) => Z0,
        (Gate::CX(..), 0) => loc(3, 0, 0),
        (Gate::CX(..), 1) => Z0,
        (Gate::CX(..), 2) => X1,
        (Gate::CX(..), 3) => loc(0, 3, 0),
        (Gate::CZ(..), 0) => loc(1, 2, 0),
        (Gate::CZ(..), 1) => Z0,
        (Gate::CZ(..), 2) => loc(2, 1, 0),
        (Gate::CZ(..), 3) => Z1,
        _ => unreachable!("single-qubit gate has no second qubit"),
    }
}

fn conj_gate(p: &mut PauliOp, g: &Gate, inverse: bool) {
    let (a, b) = g.qubits();
    let qs: Vec<usize> = std::iter::once(a).chain(b).collect();
    let mut acc = Local::ID;
    for (slot, &q) in qs.iter().enumerate() {
        if p.x.get(q) {
            acc = acc.mul(image(g, 2 * slot, inverse));
        }
        if p.z.get(q) {
            acc = acc.mul(image(g, 2 * slot + 1, inverse));
        }
        p.x.set(q, false);
        p.z.set(q, false);
    }
    for (slot, &q) in qs.iter().enumerate() {
        p.x.set(q, acc.x >> slot & 1 == 1);
        p.z.set(q, acc.z >> slot & 1 == 1);
    }
    p.phase = (p.phase + acc.ph) % 4;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XIZ", "-iYZI", "+iY", "-Y", "+", "-ZZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XY"), p("+XY"));
        assert_eq!(p("−iX"), p("-iX"));
        assert!("XQ".parse::<PauliOp>().is_err());
        assert!("*X".parse::<PauliOp>().is_err());
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        assert_eq!(&p("X") * &p("Z"), p("-iY"));
        assert_eq!(&p("Z") * &p("X"), p("+iY"));
    }

    #[test]
    fn hermitian_squares_to_identity() {
        for s in ["+XYZ", "-YYI", "+ZZX"] {
            assert_eq!(&p(s) * &p(s), PauliOp::identity(3));
        }
    }

    #[test]
    fn reordered_anticommuting_pair() {
        let a = p("XZ");
        let b = p("ZX");
        let ab = &a * &b;
        let ba = &b * &a;
        assert_eq!(ab.symplectic(), ba.symplectic());
        assert_eq!((ab.phase() + 4 - ba.phase()) % 4, 0, "two anticommuting factors cancel");
        let c = p("XI");
        let d = p("ZI");
        assert_eq!(((&c * &d).phase() + 4 - (&d * &c).phase()) % 4, 2);
    }

    #[test]
    fn commutation_examples() {
        assert_eq!(p("X").commutes(&p("Z")).unwrap(), -1);
        assert_eq!(p("XX").commutes(&p("ZZ")).unwrap(), 1);
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(p("XZY").restrict(&[0]), p("XII"));
        assert_eq!(p("-XZY").restrict(&[0, 1, 2]), p("XZY"));
    }

    #[test]
    fn conjugation_examples() {
        let empty = CliffordCircuit::new(2);
        assert_eq!(empty.conjugate(&p("-iXY"), Direction::Forward).unwrap(), p("-iXY"));
        let cz = CliffordCircuit::from_gates(2, [Gate::CZ(0, 1)]).unwrap();
        assert_eq!(cz.conjugate(&p("XI"), Direction::Forward).unwrap(), p("XZ"));
        let s = CliffordCircuit::from_gates(1, [Gate::S(0)]).unwrap();
        assert_eq!(s.conjugate(&p("X"), Direction::Forward).unwrap(), p("Y"));
        assert_eq!(s.conjugate(&p("X"), Direction::Inverse).unwrap(), p("-Y"));
        let cx = CliffordCircuit::from_gates(2, [Gate::CX(0, 1)]).unwrap();
        assert_eq!(cx.conjugate(&p("IZ"), Direction::Forward).unwrap(), p("ZZ"));
        assert_eq!(cx.conjugate(&p("YI"), Direction::Forward).unwrap(), p("YX"));
        assert!(CliffordCircuit::from_gates(2, [Gate::CX(1, 1)]).is_err());
        assert!(CliffordCircuit::from_gates(2, [Gate::H(2)]).is_err());
    }

    #[test]
    fn light_cone_follows_gates_backwards() {
        let c = CliffordCircuit::from_gates(4, [Gate::CZ(0, 1), Gate::CX(1, 2), Gate::H(3)]).unwrap();
        assert_eq!(c.light_cone(&[2]), vec![0, 1, 2]);
        assert_eq!(c.light_cone(&[0]), vec![0, 1]);
        assert_eq!(c.light_cone(&[3]), vec![3]);
    }
}
