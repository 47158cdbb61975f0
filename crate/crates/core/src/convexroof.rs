//! Dense density matrices and convex-roof minimization of the CMI.
//!
//! Qubit `q` is bit `q` of a basis index. Everything here is exponential in
//! the qubit count and meant for a dozen qubits at most; it serves as the
//! independent check on the stabilizer code paths.
//!
//! Decompositions follow the Schrödinger-HJW theorem: with
//! `ρ = Σ_k λ_k |k⟩⟨k|`, every pure decomposition into `m` members is
//! `|ψ̃_i⟩ = Σ_k V_ik √λ_k |k⟩` for an `m × r` isometry `V`. `V` is
//! parametrized by Givens rotations and column phases and optimized by
//! Nelder-Mead from many seeded restarts.

use std::sync::{Arc, Mutex};

use argmin::core::observers::{Observe, ObserverMode};
use argmin::core::{CostFunction, Executor, State, KV};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{Complex, DMatrix, DVector, Dyn, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cssnoise::NoiseSpec;
use crate::lattice::Partition;
use crate::pauli::PauliOp;
use crate::stabmix::StabilizerMixedState;
use crate::Error;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest qubit count accepted by [`densify`] and [`DenseState::new`].
pub const DENSE_MAX_QUBITS: usize = 14;
/// Largest qubit count for partial-transpose negativity.
pub const NEGATIVITY_MAX_QUBITS: usize = 12;
/// Largest qubit count for roof optimization.
pub const ROOF_MAX_QUBITS: usize = 10;

const EIG_CUTOFF: f64 = 1e-12;

/// A validated density matrix on `n` qubits.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    matrix: CMatrix,
}

fn check_size(n: usize, limit: usize) -> Result<(), Error> {
    if n > limit {
        return Err(Error::Budget { name: "dense-qubits", limit, required: n });
    }
    Ok(())
}

fn qubits_of_dim(dim: usize) -> Result<usize, Error> {
    if !dim.is_power_of_two() {
        return Err(Error::Invalid(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `-Σ λ log2 λ` over eigenvalues above the cutoff.
fn entropy_of_eigs(eigs: impl IntoIterator<Item = f64>) -> f64 {
    eigs.into_iter().filter(|&l| l > EIG_CUTOFF).map(|l| -l * l.log2()).sum()
}

/// Eigendecomposition of a Hermitian matrix. The implicit QR iteration can
/// return NaN on some exactly degenerate stabilizer matrices; shifting the
/// diagonal avoids that without moving the eigenvectors.
fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<C64, Dyn> {
    let d = m.nrows();
    let mut last = None;
    for shift in [0.0, 0.5, 0.3125, 1.0] {
        let mut e = SymmetricEigen::new(m + CMatrix::identity(d, d) * C64::from(shift));
        e.eigenvalues.add_scalar_mut(-shift);
        if e.eigenvalues.iter().all(|v| v.is_finite()) && e.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return e;
        }
        last = Some(e);
    }
    last.expect("at least one shift")
}

fn hermitian_eigs(m: &CMatrix) -> DVector<f64> {
    hermitian_eigen(m).eigenvalues
}

fn complement(n: usize, region: &[usize]) -> Vec<usize> {
    (0..n).filter(|q| !region.contains(q)).collect()
}

fn normalized_region(n: usize, region: &[usize]) -> Result<Vec<usize>, Error> {
    let mut r = region.to_vec();
    r.sort_unstable();
    r.dedup();
    if let Some(&q) = r.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    Ok(r)
}

impl DenseState {
    /// Validate Hermiticity, unit trace and positivity to `1e-10`.
    pub fn new(matrix: CMatrix) -> Result<Self, Error> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n = qubits_of_dim(matrix.nrows())?;
        check_size(n, DENSE_MAX_QUBITS)?;
        if (&matrix - matrix.adjoint()).camax() > 1e-10 {
            return Err(Error::Invalid("matrix is not Hermitian".into()));
        }
        if (matrix.trace().re - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("trace {} is not 1", matrix.trace().re)));
        }
        if hermitian_eigs(&matrix).min() < -1e-10 {
            return Err(Error::Invalid("matrix has a negative eigenvalue".into()));
        }
        Ok(Self { n, matrix })
    }

    fn unchecked(n: usize, matrix: CMatrix) -> Self {
        Self { n, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn from_pure(psi: &CVector) -> Result<Self, Error> {
        let n = qubits_of_dim(psi.len())?;
        check_size(n, DENSE_MAX_QUBITS)?;
        let norm = psi.norm();
        if norm < EIG_CUTOFF {
            return Err(Error::Invalid("zero vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self::unchecked(n, &v * v.adjoint()))
    }

    #[must_use]
    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        Self::unchecked(n, CMatrix::identity(d, d).unscale(d as f64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigs(&self.matrix).iter().copied().collect()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_eigs(self.eigenvalues())
    }

    /// Reduced state on `keep`, qubits renumbered in increasing order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseState, Error> {
        let keep = normalized_region(self.n, keep)?;
        let rest = complement(self.n, &keep);
        let dk = 1usize << keep.len();
        let mut out = CMatrix::zeros(dk, dk);
        // enumerate (i, j) pairs sharing the traced-out bits
        let scatter = |small: usize, positions: &[usize]| -> usize {
            positions.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((small >> k) & 1) << q))
        };
        for e in 0..(1usize << rest.len()) {
            let base = scatter(e, &rest);
            for a in 0..dk {
                let i = base | scatter(a, &keep);
                for b in 0..dk {
                    let j = base | scatter(b, &keep);
                    out[(a, b)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self::unchecked(keep.len(), out))
    }

    pub fn entropy_region(&self, region: &[usize]) -> Result<f64, Error> {
        Ok(self.partial_trace(region)?.entropy())
    }

    /// Partial transpose on `region`.
    pub fn partial_transpose(&self, region: &[usize]) -> Result<CMatrix, Error> {
        let region = normalized_region(self.n, region)?;
        let mask = region.iter().fold(0usize, |acc, &q| acc | (1 << q));
        let dim = 1usize << self.n;
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            let swap = (i ^ j) & mask;
            self.matrix[(i ^ swap, j ^ swap)]
        }))
    }

    /// `Σ p_k U_k ρ U_k†`.
    pub fn apply_mixed_unitary(&self, terms: &[(f64, CMatrix)]) -> Result<DenseState, Error> {
        let dim = 1usize << self.n;
        let mut out = CMatrix::zeros(dim, dim);
        for (p, u) in terms {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: u.nrows() });
            }
            out += (u * &self.matrix * u.adjoint()).scale(*p);
        }
        Ok(Self::unchecked(self.n, out))
    }

    /// `P ρ P†` via the permutation-with-signs action of `P`.
    pub fn conjugate_by_pauli(&self, p: &PauliOp) -> Result<DenseState, Error> {
        if p.n() != self.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: p.n() });
        }
        let (xm, zm) = (mask_of(p.x()), mask_of(p.z()));
        let dim = 1usize << self.n;
        let sign = |b: usize| if (zm & b).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        // global phase cancels between P and P†
        let mut out = CMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(r ^ xm, c ^ xm)] = self.matrix[(r, c)].scale(sign(r) * sign(c));
            }
        }
        Ok(Self::unchecked(self.n, out))
    }

    /// Apply every channel of a Pauli noise model.
    pub fn apply_noise(&self, noise: &NoiseSpec) -> Result<DenseState, Error> {
        let mut cur = self.clone();
        for ch in noise.channels() {
            let mut acc = cur.matrix.scale(ch.identity_prob());
            for (op, p) in &ch.errors {
                acc += cur.conjugate_by_pauli(op)?.matrix.scale(*p);
            }
            cur = Self::unchecked(self.n, acc);
        }
        Ok(cur)
    }

    pub fn trace_distance(&self, other: &DenseState) -> f64 {
        0.5 * hermitian_eigs(&(&self.matrix - &other.matrix)).iter().map(|l| l.abs()).sum::<f64>()
    }

    /// Tensor product `self ⊗ other`; `other` occupies the higher qubits.
    #[must_use]
    pub fn tensor(&self, other: &DenseState) -> DenseState {
        Self::unchecked(self.n + other.n, other.matrix.kronecker(&self.matrix))
    }
}

fn mask_of(v: &crate::gf2::BitVec) -> usize {
    v.ones().fold(0, |acc, q| acc | (1 << q))
}

/// Dense matrix of a Pauli operator, phase included.
pub fn pauli_matrix(p: &PauliOp) -> Result<CMatrix, Error> {
    check_size(p.n(), DENSE_MAX_QUBITS)?;
    let dim = 1usize << p.n();
    let (xm, zm) = (mask_of(p.x()), mask_of(p.z()));
    let (re, im) = p_phase(p.phase());
    let mut m = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let s = if (zm & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m[(b ^ xm, b)] = C64::new(re * s, im * s);
    }
    Ok(m)
}

fn p_phase(k: u8) -> (f64, f64) {
    match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// Operator `u` acting on qubit `q` of `n`, identity elsewhere.
pub fn single_qubit_operator(n: usize, q: usize, u: &CMatrix) -> Result<CMatrix, Error> {
    if q >= n {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    let eye = |k: usize| CMatrix::identity(1 << k, 1 << k);
    Ok(eye(n - q - 1).kronecker(u).kronecker(&eye(q)))
}

/// `2^{-n} Σ_{g ∈ G} g`, summed over the whole group.
pub fn densify(s: &StabilizerMixedState) -> Result<DenseState, Error> {
    let n = s.n();
    check_size(n, DENSE_MAX_QUBITS)?;
    let dim = 1usize << n;
    let gens = s.generators();
    let mut rho = CMatrix::zeros(dim, dim);
    let mut g = PauliOp::identity(n);
    for k in 0..(1usize << gens.len()) {
        if k > 0 {
            // Gray code: one generator changes between consecutive elements
            g = g.mul_unchecked(&gens[k.trailing_zeros() as usize]);
        }
        let (xm, zm) = (mask_of(g.x()), mask_of(g.z()));
        let (re, im) = p_phase(g.phase());
        for b in 0..dim {
            let s = if (zm & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            rho[(b ^ xm, b)] += C64::new(re * s, im * s);
        }
    }
    Ok(DenseState::unchecked(n, rho.unscale(dim as f64)))
}

/// `I(A:C|B)` in bits; qubits outside `ABC` are traced out.
pub fn cmi_dense(rho: &DenseState, p: &Partition) -> Result<f64, Error> {
    let abc = rho.partial_trace(&p.abc())?;
    let local = |r: &[usize]| -> Vec<usize> {
        let all = p.abc();
        r.iter().map(|q| all.binary_search(q).expect("region inside ABC")).collect()
    };
    Ok(abc.entropy_region(&local(&p.ab()))? + abc.entropy_region(&local(&p.bc()))?
        - abc.entropy_region(&local(&p.b))?
        - abc.entropy())
}

/// `log2 ‖ρ^{T_A}‖₁`.
pub fn negativity_dense(rho: &DenseState, region: &[usize]) -> Result<f64, Error> {
    check_size(rho.n(), NEGATIVITY_MAX_QUBITS)?;
    let pt = rho.partial_transpose(region)?;
    Ok(hermitian_eigs(&pt).iter().map(|l| l.abs()).sum::<f64>().log2())
}

/// Trace norm of the partial transpose.
pub fn partial_transpose_trace_norm(rho: &DenseState, region: &[usize]) -> Result<f64, Error> {
    Ok(2f64.powf(negativity_dense(rho, region)?))
}

/// `p |GHZ+⟩⟨GHZ+| + (1 - p) |GHZ-⟩⟨GHZ-|` on three qubits.
pub fn ghz_mixture(p: f64) -> Result<DenseState, Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invalid(format!("p = {p} outside [0, 1]")));
    }
    let mut m = CMatrix::zeros(8, 8);
    m[(0, 0)] = C64::new(0.5, 0.0);
    m[(7, 7)] = C64::new(0.5, 0.0);
    m[(0, 7)] = C64::new(p - 0.5, 0.0);
    m[(7, 0)] = C64::new(p - 0.5, 0.0);
    Ok(DenseState::unchecked(3, m))
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_eigs([p, 1.0 - p])
}

// ---- decompositions -----------------------------------------------------

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub members: Vec<DenseState>,
    /// Unnormalized pure members when every member is pure.
    pub pure_vectors: Option<Vec<CVector>>,
}

impl Decomposition {
    pub fn is_pure(&self) -> bool {
        self.pure_vectors.is_some()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_i ρ_i`.
    pub fn recombine(&self) -> CMatrix {
        let dim = self.members[0].matrix.nrows();
        self.weights
            .iter()
            .zip(&self.members)
            .fold(CMatrix::zeros(dim, dim), |acc, (p, m)| acc + m.matrix.scale(*p))
    }

    /// `Σ p_i I(A:C|B)_{ρ_i}`.
    pub fn average_cmi(&self, p: &Partition) -> Result<f64, Error> {
        let mut total = 0.0;
        for (w, m) in self.weights.iter().zip(&self.members) {
            total += w * cmi_dense(m, p)?;
        }
        Ok(total)
    }

    /// Concatenate two decompositions with mixing weight `t` on `self`.
    #[must_use]
    pub fn union(&self, other: &Decomposition, t: f64) -> Decomposition {
        let weights = self
            .weights
            .iter()
            .map(|w| w * t)
            .chain(other.weights.iter().map(|w| w * (1.0 - t)))
            .collect();
        let members = self.members.iter().chain(&other.members).cloned().collect();
        Decomposition { weights, members, pure_vectors: None }
    }
}

/// Eigenvectors scaled by `√λ` for the nonzero part of the spectrum.
fn weighted_eigenvectors(rho: &DenseState) -> Vec<CVector> {
    let eig = hermitian_eigen(&rho.matrix);
    let mut cols: Vec<(f64, CVector)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > EIG_CUTOFF)
        .map(|(k, &l)| (l, eig.eigenvectors.column(k).scale(l.sqrt())))
        .collect();
    cols.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite"));
    cols.into_iter().map(|(_, v)| v).collect()
}

/// Number of real parameters for `m` members of a rank-`r` state.
pub fn parameter_count(m: usize, r: usize) -> usize {
    2 * m * r - r * r
}

/// The `m × r` isometry: Givens rotations on pairs `(i, j)`, `i < r`,
/// applied to the first `r` columns of the identity, then column phases.
fn isometry(m: usize, r: usize, params: &[f64]) -> CMatrix {
    let mut v = CMatrix::zeros(m, r);
    for k in 0..r {
        v[(k, k)] = C64::new(1.0, 0.0);
    }
    let mut it = params.iter();
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in i + 1..m {
            pairs.push((i, j));
        }
    }
    let mut rots = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let theta = *it.next().unwrap_or(&0.0);
        let phi = *it.next().unwrap_or(&0.0);
        rots.push((i, j, theta, phi));
    }
    for k in 0..r {
        let a = *it.next().unwrap_or(&0.0);
        let ph = C64::from_polar(1.0, a);
        for row in 0..m {
            v[(row, k)] *= ph;
        }
    }
    // V = G_1 G_2 ... G_K D, applied right to left
    for &(i, j, theta, phi) in rots.iter().rev() {
        let (c, s) = (theta.cos(), theta.sin());
        let e = C64::from_polar(1.0, phi);
        for col in 0..r {
            let (vi, vj) = (v[(i, col)], v[(j, col)]);
            v[(i, col)] = vi.scale(c) - e * vj.scale(s);
            v[(j, col)] = e.conj() * vi.scale(s) + vj.scale(c);
        }
    }
    v
}

/// Decomposition of `rho` into `m` pure members from isometry parameters,
/// merged into consecutive groups of `group_size` members.
pub fn sample_decomposition(rho: &DenseState, m: usize, params: &[f64], group_size: usize) -> Result<Decomposition, Error> {
    let basis = weighted_eigenvectors(rho);
    let r = basis.len();
    if m < r {
        return Err(Error::Invalid(format!("{m} members cannot decompose a rank-{r} state")));
    }
    if group_size == 0 || !m.is_multiple_of(group_size) {
        return Err(Error::Invalid(format!("group size {group_size} does not divide {m}")));
    }
    let need = parameter_count(m, r);
    if params.len() != need {
        return Err(Error::DimensionMismatch { expected: need, found: params.len() });
    }
    let v = isometry(m, r, params);
    let dim = rho.matrix.nrows();
    let vectors: Vec<CVector> = (0..m)
        .map(|i| (0..r).fold(CVector::zeros(dim), |acc, k| acc + basis[k].scale(1.0).map(|z| z * v[(i, k)])))
        .collect();
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for group in vectors.chunks(group_size) {
        let w: f64 = group.iter().map(|v| v.norm_squared()).sum();
        if w < 1e-14 {
            continue;
        }
        let sum = group.iter().fold(CMatrix::zeros(dim, dim), |acc, v| acc + v * v.adjoint());
        weights.push(w);
        members.push(DenseState::unchecked(rho.n, sum.unscale(w)));
    }
    let pure_vectors = (group_size == 1).then(|| vectors.into_iter().filter(|v| v.norm_squared() >= 1e-14).collect());
    Ok(Decomposition { weights, members, pure_vectors })
}

// ---- optimizer ----------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoofMode {
    /// Minimize over pure-state decompositions.
    Pure,
    /// Minimize over mixed-state decompositions (includes the trivial one).
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofBudget {
    /// Pure members; defaults to `rank²`.
    pub members: Option<usize>,
    pub restarts: usize,
    pub max_iters: u64,
    /// Simplex standard-deviation tolerance in bits.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for RoofBudget {
    fn default() -> Self {
        Self { members: None, restarts: 16, max_iters: 4000, tolerance: 1e-9, seed: 0 }
    }
}

/// One line of the optimizer trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub group_size: usize,
    pub iteration: u64,
    /// Best value of this restart so far, in bits.
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct RoofResult {
    pub value: f64,
    pub best: Decomposition,
    /// Best value after each restart, in restart order; nonincreasing.
    pub best_so_far: Vec<f64>,
    pub trace: Vec<TraceEntry>,
}

struct RoofObjective<'a> {
    rho: &'a DenseState,
    partition: &'a Partition,
    members: usize,
    group_size: usize,
}

impl CostFunction for RoofObjective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, params: &Vec<f64>) -> Result<f64, argmin::core::Error> {
        let d = sample_decomposition(self.rho, self.members, params, self.group_size)?;
        Ok(d.average_cmi(self.partition)?)
    }
}

#[derive(Clone, Default)]
struct Recorder(Arc<Mutex<Vec<(u64, f64)>>>);

impl<I: State<Float = f64>> Observe<I> for Recorder {
    fn observe_iter(&mut self, state: &I, _kv: &KV) -> Result<(), argmin::core::Error> {
        self.0.lock().expect("recorder lock").push((state.get_iter(), state.get_best_cost()));
        Ok(())
    }
}

struct RestartOutcome {
    value: f64,
    params: Vec<f64>,
    group_size: usize,
    trace: Vec<(u64, f64)>,
}

fn run_restart(
    rho: &DenseState,
    partition: &Partition,
    members: usize,
    group_size: usize,
    start: Vec<f64>,
    budget: &RoofBudget,
) -> Result<RestartOutcome, Error> {
    let objective = RoofObjective { rho, partition, members, group_size };
    let dim = start.len();
    if dim == 0 {
        let value = objective.cost(&start).map_err(|e| Error::Invalid(e.to_string()))?;
        return Ok(RestartOutcome { value, params: start, group_size, trace: vec![(0, value)] });
    }
    let mut simplex = vec![start.clone()];
    for k in 0..dim {
        let mut v = start.clone();
        v[k] += 0.3;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(budget.tolerance)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let recorder = Recorder::default();
    let res = Executor::new(objective, solver)
        .configure(|s| s.max_iters(budget.max_iters))
        .add_observer(recorder.clone(), ObserverMode::Always)
        .run()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let state = res.state();
    let params = state.get_best_param().cloned().unwrap_or(start);
    let trace = recorder.0.lock().expect("recorder lock").clone();
    Ok(RestartOutcome { value: state.get_best_cost(), params, group_size, trace })
}

/// Minimize the average CMI over decompositions of `rho`.
///
/// Restart 0 starts from the eigendecomposition; the others from uniformly
/// random parameters seeded by `budget.seed` and the restart index. In mixed
/// mode every proper divisor of the member count is tried as a group size
/// and the trivial decomposition `{ρ}` is included.
pub fn convex_roof_minimize(rho: &DenseState, p: &Partition, mode: RoofMode, budget: &RoofBudget) -> Result<RoofResult, Error> {
    check_size(rho.n(), ROOF_MAX_QUBITS)?;
    if budget.restarts == 0 || budget.max_iters == 0 || budget.tolerance <= 0.0 {
        return Err(Error::Invalid("roof budget needs restarts, iterations and a positive tolerance".into()));
    }
    if p.n != rho.n() {
        return Err(Error::QubitCountMismatch { left: rho.n(), right: p.n });
    }
    let r = weighted_eigenvectors(rho).len();
    let m = budget.members.unwrap_or(r * r).max(r);
    let sizes: Vec<usize> = match mode {
        RoofMode::Pure => vec![1],
        RoofMode::Mixed => (1..m).filter(|s| m.is_multiple_of(*s)).collect(),
    };
    let dim = parameter_count(m, r);
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&s| (0..budget.restarts).map(move |k| (s, k)))
        .collect();
    let outcomes: Vec<(usize, RestartOutcome)> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(s, k))| {
            let start = if k == 0 {
                vec![0.0; dim]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                (0..dim).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
            };
            run_restart(rho, p, m, s, start, budget).map(|o| (idx, o))
        })
        .collect::<Result<_, _>>()?;

    let mut best_value = f64::INFINITY;
    let mut best: Option<Decomposition> = None;
    let mut best_so_far = Vec::new();
    let mut trace = Vec::new();
    if mode == RoofMode::Mixed {
        best_value = cmi_dense(rho, p)?;
        best = Some(Decomposition { weights: vec![1.0], members: vec![rho.clone()], pure_vectors: None });
    }
    for (idx, o) in outcomes {
        trace.extend(o.trace.iter().map(|&(iteration, value)| TraceEntry { restart: idx, group_size: o.group_size, iteration, value }));
        if o.value < best_value {
            best_value = o.value;
            best = Some(sample_decomposition(rho, m, &o.params, o.group_size)?);
        }
        best_so_far.push(best_value);
    }
    Ok(RoofResult { value: best_value, best: best.expect("at least one restart"), best_so_far, trace })
}

/// Optimizer trace as JSON lines.
pub fn trace_json_lines(trace: &[TraceEntry]) -> String {
    trace.iter().map(|e| serde_json::to_string(e).expect("plain struct") + "\n").collect()
}
