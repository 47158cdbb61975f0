//! Independent dense oracles and random instance generators shared by the
//! integration tests. Nothing here calls the library's dense code.

#![allow(dead_code)]

pub mod roof;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use topomix::pauli::Gate;
use topomix::{CliffordCircuit, Direction, Partition, PauliOp, StabilizerMixedState};

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

fn letter_matrix(l: char) -> M {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        'I' => M::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => M::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => M::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => M::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!(),
    }
}

/// Dense matrix of `p`; qubit `q` is bit `q` of the basis index, so qubit 0
/// is the rightmost tensor factor.
pub fn pauli_dense(p: &PauliOp) -> M {
    let n = p.n();
    let mut out = M::identity(1, 1);
    for q in (0..n).rev() {
        let (x, z) = (p.x().get(q), p.z().get(q));
        // X^x Z^z per qubit
        let mut f = M::identity(2, 2);
        if x {
            f = letter_matrix('X');
        }
        if z {
            f *= letter_matrix('Z');
        }
        out = kron(&out, &f);
    }
    let ph = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(p.phase() % 4) as usize];
    out * ph
}

pub fn stabilizer_dense(s: &StabilizerMixedState) -> M {
    let d = 1usize << s.n();
    let mut rho = M::identity(d, d);
    for g in s.generators() {
        rho = (&rho + &rho * pauli_dense(g)) * c(0.5, 0.0);
    }
    let tr = rho.trace();
    rho / tr
}

pub fn eigenvalues(rho: &M) -> Vec<f64> {
    // Hermitian: embed as a real symmetric 2d x 2d matrix
    let d = rho.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let v = rho[(i, j)];
            r[(i, j)] = v.re;
            r[(i + d, j + d)] = v.re;
            r[(i, j + d)] = -v.im;
            r[(i + d, j)] = v.im;
        }
    }
    let mut ev = real_eigenvalues(r);
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // each eigenvalue appears twice
    ev.chunks(2).map(|p| p[0]).collect()
}

/// Symmetric eigenvalues, retrying with a diagonal shift when the QR
/// iteration breaks down on a degenerate matrix.
pub fn real_eigenvalues(r: DMatrix<f64>) -> Vec<f64> {
    let d = r.nrows();
    for shift in [0.0, 0.5, 0.75] {
        let ev: Vec<f64> = SymmetricEigen::new(&r + DMatrix::<f64>::identity(d, d) * shift).eigenvalues.iter().map(|v| v - shift).collect();
        if ev.iter().all(|v| v.is_finite()) {
            return ev;
        }
    }
    panic!("eigenvalues did not converge");
}

pub fn entropy(rho: &M) -> f64 {
    eigenvalues(rho).iter().filter(|&&l| l > 1e-13).map(|&l| -l * l.log2()).sum()
}

/// Reduced state on `keep` (ascending), in the same bit convention.
pub fn ptrace(rho: &M, n: usize, keep: &[usize]) -> M {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let trace_out: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let dt = 1usize << trace_out.len();
    let embed = |a: usize, b: usize| -> usize {
        let mut idx = 0;
        for (k, &q) in keep.iter().enumerate() {
            idx |= ((a >> k) & 1) << q;
        }
        for (k, &q) in trace_out.iter().enumerate() {
            idx |= ((b >> k) & 1) << q;
        }
        idx
    };
    let mut out = M::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut s = c(0.0, 0.0);
            for t in 0..dt {
                s += rho[(embed(i, t), embed(j, t))];
            }
            out[(i, j)] = s;
        }
    }
    out
}

pub fn entropy_of(rho: &M, n: usize, region: &[usize]) -> f64 {
    if region.is_empty() {
        return 0.0;
    }
    entropy(&ptrace(rho, n, region))
}

pub fn cmi(rho: &M, n: usize, p: &Partition) -> f64 {
    entropy_of(rho, n, &p.ab()) + entropy_of(rho, n, &p.bc()) - entropy_of(rho, n, &p.b) - entropy_of(rho, n, &p.abc())
}

pub fn partial_transpose(rho: &M, region: &[usize]) -> M {
    let mask: usize = region.iter().map(|q| 1usize << q).sum();
    let d = rho.nrows();
    let mut out = M::zeros(d, d);
    for r in 0..d {
        for col in 0..d {
            let r2 = (r & !mask) | (col & mask);
            let c2 = (col & !mask) | (r & mask);
            out[(r2, c2)] = rho[(r, col)];
        }
    }
    out
}

pub fn trace_norm(h: &M) -> f64 {
    eigenvalues(h).iter().map(|l| l.abs()).sum()
}

pub fn log_negativity(rho: &M, region: &[usize]) -> f64 {
    trace_norm(&partial_transpose(rho, region)).log2()
}

/// Random Clifford circuit of `depth` gates.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, depth: usize) -> CliffordCircuit {
    let mut circ = CliffordCircuit::new(n);
    for _ in 0..depth {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n);
        if n > 1 {
            while b == a {
                b = rng.random_range(0..n);
            }
        }
        let g = match rng.random_range(0..4) {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 if n > 1 => Gate::CX(a, b),
            3 if n > 1 => Gate::CZ(a, b),
            _ => Gate::H(a),
        };
        circ.push(g).unwrap();
    }
    circ
}

/// Random stabilizer mixed state with `m` independent generators and random
/// signs.
pub fn random_stabilizer<R: Rng>(rng: &mut R, n: usize, m: usize) -> StabilizerMixedState {
    let circ = random_circuit(rng, n, 6 * n + 4);
    let gens: Vec<PauliOp> = (0..m)
        .map(|q| {
            let z = PauliOp::single(n, q, 'Z').unwrap();
            let g = circ.conjugate(&z, Direction::Forward).unwrap();
            if rng.random::<bool>() {
                g.times_i(2)
            } else {
                g
            }
        })
        .collect();
    StabilizerMixedState::canonicalize(n, &gens).unwrap()
}

/// A random tripartition of `n` qubits with every part nonempty, plus a
/// possibly empty environment.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    loop {
        let (mut a, mut b, mut cc) = (vec![], vec![], vec![]);
        for q in 0..n {
            match rng.random_range(0..4) {
                0 => a.push(q),
                1 => b.push(q),
                2 => cc.push(q),
                _ => {}
            }
        }
        if !a.is_empty() && !b.is_empty() && !cc.is_empty() {
            return Partition::new(n, a, b, cc).unwrap();
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, d: usize) -> DVector<C> {
    let v = DVector::from_fn(d, |_, _| c(normal(rng), normal(rng)));
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-ish random 2x2 unitary from a normalized complex Gaussian column pair.
pub fn random_unitary2<R: Rng>(rng: &mut R) -> M {
    let a = random_vector(rng, 2);
    let b = DVector::from_vec(vec![-a[1].conj(), a[0].conj()]);
    let ph = C::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    M::from_columns(&[a, b * ph])
}

/// `u_{n-1} ⊗ … ⊗ u_0`.
pub fn product_unitary(us: &[M]) -> M {
    us.iter().rev().fold(M::identity(1, 1), |acc, u| kron(&acc, u))
}

pub fn projector(v: &DVector<C>) -> M {
    v * v.adjoint()
}

pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Dense `(1+X)/2 ∏_hex (1+W_CZ(hex))/2`, normalized, from hexagon site lists.
pub fn cz_state_dense(n: usize, hexagons: &[[usize; 6]]) -> DMatrix<f64> {
    let d = 1usize << n;
    let mut rho = DMatrix::<f64>::zeros(d, d);
    let all = d - 1;
    for x in 0..d {
        let ok = hexagons.iter().all(|h| {
            let mut phase = 0;
            for k in 0..6 {
                let (i, j) = (h[k], h[(k + 1) % 6]);
                phase ^= (x >> i) & (x >> j) & 1;
            }
            phase == 0
        });
        if ok {
            rho[(x, x)] += 0.5;
            rho[(x ^ all, x)] += 0.5;
        }
    }
    let tr = rho.trace();
    rho / tr
}

/// `(‖ρ^{T_A}‖₁ - 1)/2` for a real density matrix.
pub fn negativity_real(rho: &DMatrix<f64>, region: &[usize]) -> f64 {
    let mask: usize = region.iter().map(|q| 1usize << q).sum();
    let d = rho.nrows();
    let mut pt = DMatrix::<f64>::zeros(d, d);
    for r in 0..d {
        for col in 0..d {
            let v = rho[(r, col)];
            if v != 0.0 {
                pt[((r & !mask) | (col & mask), (col & !mask) | (r & mask))] = v;
            }
        }
    }
    let norm: f64 = real_eigenvalues(pt).iter().map(|v| v.abs()).sum();
    (norm - 1.0) / 2.0
}
