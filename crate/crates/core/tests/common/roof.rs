//! Random instances and checks for the minimized-CMI property suite.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topomix::convexroof::{cmi_dense, convex_roof_minimize, ghz_mixture, DenseState, RoofBudget, RoofMode};
use topomix::Partition;

use super::*;

/// Slack allowed for comparisons that depend on the optimizer reaching a
/// minimum rather than on exact arithmetic.
pub const OPT_TOL: f64 = 2e-3;

pub fn tripartition() -> Partition {
    Partition::new(3, vec![0], vec![1], vec![2]).unwrap()
}

pub fn budget(seed: u64, members: Option<usize>) -> RoofBudget {
    RoofBudget { members, restarts: 8, max_iters: 3000, tolerance: 1e-10, seed }
}

fn orthonormal_pair<R: Rng>(rng: &mut R) -> (DVector<C>, DVector<C>) {
    let a = random_vector(rng, 8);
    let b = random_vector(rng, 8);
    let b = &b - &a * a.dotc(&b);
    let norm = b.norm();
    (a, b / c(norm, 0.0))
}

/// Random full-rank state on the span of `basis`.
fn state_on<R: Rng>(rng: &mut R, basis: &(DVector<C>, DVector<C>)) -> DenseState {
    let g = M::from_fn(2, 2, |_, _| c(normal(rng), normal(rng)));
    let sigma = &g * g.adjoint();
    let sigma = &sigma / sigma.trace();
    let cols = [&basis.0, &basis.1];
    let mut rho = M::zeros(8, 8);
    for i in 0..2 {
        for j in 0..2 {
            rho += cols[i] * cols[j].adjoint() * sigma[(i, j)];
        }
    }
    DenseState::new((&rho + rho.adjoint()) * c(0.5, 0.0)).unwrap()
}

fn product_state<R: Rng>(rng: &mut R) -> DVector<C> {
    let qs: Vec<DVector<C>> = (0..3).map(|_| random_vector(rng, 2)).collect();
    // qubit 0 is the rightmost factor
    let m = qs.iter().rev().fold(M::identity(1, 1), |acc, v| kron(&acc, &M::from_column_slice(2, 1, v.as_slice())));
    DVector::from_column_slice(m.as_slice())
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SuiteOutcome {
    pub positivity: bool,
    pub convexity: bool,
    pub pure_reduction: bool,
    pub cmi_bound: bool,
    pub mixed_unitary: bool,
    pub separable_zero: bool,
    /// Largest amount by which an optimizer-dependent inequality was missed.
    pub worst_slack: f64,
}

impl SuiteOutcome {
    pub fn all(&self) -> bool {
        self.positivity && self.convexity && self.pure_reduction && self.cmi_bound && self.mixed_unitary && self.separable_zero
    }
}

/// Run every property on the instance generated from `seed`.
pub fn run_instance(seed: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = tripartition();
    let basis = orthonormal_pair(&mut rng);
    let rho1 = state_on(&mut rng, &basis);
    let rho2 = state_on(&mut rng, &basis);
    let t: f64 = rng.random_range(0.2..0.8);
    let mut out = SuiteOutcome::default();
    let mut slack = 0.0f64;

    let r1 = convex_roof_minimize(&rho1, &p, RoofMode::Mixed, &budget(seed, Some(2))).unwrap();
    let r2 = convex_roof_minimize(&rho2, &p, RoofMode::Mixed, &budget(seed + 1, Some(2))).unwrap();
    out.positivity = r1.value >= -1e-9 && r2.value >= -1e-9;
    out.cmi_bound = r1.value <= cmi_dense(&rho1, &p).unwrap() + 1e-9 && r2.value <= cmi_dense(&rho2, &p).unwrap() + 1e-9;

    // convexity: the union of the two best decompositions is a decomposition of the mixture
    let mix = DenseState::new(rho1.matrix() * c(t, 0.0) + rho2.matrix() * c(1.0 - t, 0.0)).unwrap();
    let union = r1.best.union(&r2.best, t);
    let recombined_ok = (union.recombine() - mix.matrix()).iter().all(|z| z.norm() < 1e-8);
    let bound = t * r1.value + (1.0 - t) * r2.value;
    let union_ok = (union.average_cmi(&p).unwrap() - bound).abs() < 1e-9;
    let rm = convex_roof_minimize(&mix, &p, RoofMode::Mixed, &budget(seed + 2, Some(4))).unwrap();
    slack = slack.max(rm.value - bound);
    out.convexity = recombined_ok && union_ok && rm.value <= bound + OPT_TOL;

    // pure states: every decomposition is trivial
    let psi = random_vector(&mut rng, 8);
    let pure = DenseState::new(projector(&psi)).unwrap();
    let exact = cmi(&projector(&psi), 3, &p);
    let vp = convex_roof_minimize(&pure, &p, RoofMode::Pure, &budget(seed, None)).unwrap().value;
    let vm = convex_roof_minimize(&pure, &p, RoofMode::Mixed, &budget(seed, None)).unwrap().value;
    out.pure_reduction = (vp - exact).abs() < 1e-9 && (vm - exact).abs() < 1e-9;

    // strictly local mixed-unitary channel
    let q: f64 = rng.random_range(0.2..0.8);
    let u = product_unitary(&[random_unitary2(&mut rng), random_unitary2(&mut rng), random_unitary2(&mut rng)]);
    let v = product_unitary(&[random_unitary2(&mut rng), random_unitary2(&mut rng), random_unitary2(&mut rng)]);
    let phi = rho1.apply_mixed_unitary(&[(q, u), (1.0 - q, v)]).unwrap();
    let rphi = convex_roof_minimize(&phi, &p, RoofMode::Mixed, &budget(seed + 3, Some(4))).unwrap();
    slack = slack.max(rphi.value - r1.value);
    out.mixed_unitary = rphi.value <= r1.value + OPT_TOL;

    // separable mixtures of two product states
    let w: f64 = rng.random_range(0.2..0.8);
    let (a, b) = (product_state(&mut rng), product_state(&mut rng));
    let sep = DenseState::new(projector(&a) * c(w, 0.0) + projector(&b) * c(1.0 - w, 0.0)).unwrap();
    let rs = convex_roof_minimize(&sep, &p, RoofMode::Pure, &budget(seed + 4, Some(2))).unwrap();
    slack = slack.max(rs.value);
    out.separable_zero = rs.value <= OPT_TOL;

    out.worst_slack = slack;
    out
}

/// Pure and mixed roofs of the GHZ mixture at `p` against the closed form.
#[derive(Debug, Clone, Copy)]
pub struct GhzOutcome {
    pub p: f64,
    pub cmi: f64,
    pub closed: f64,
    pub pure: f64,
    pub mixed: f64,
    /// Largest distance of a member angle from `asin(|1-2p|)`.
    pub angle_error: f64,
}

impl GhzOutcome {
    pub fn passes(&self) -> bool {
        (self.pure - self.closed).abs() < 1e-3 && self.pure - self.cmi >= 0.05 && self.angle_error < 1e-2 && self.mixed <= self.cmi + 1e-6
    }
}

pub fn ghz_check(p: f64) -> GhzOutcome {
    let parts = tripartition();
    let rho = ghz_mixture(p).unwrap();
    let budget = RoofBudget { seed: 11, ..RoofBudget::default() };
    let pure = convex_roof_minimize(&rho, &parts, RoofMode::Pure, &budget).unwrap();
    let mixed = convex_roof_minimize(&rho, &parts, RoofMode::Mixed, &budget).unwrap();
    let q = (1.0 + 2.0 * (p * (1.0 - p)).sqrt()) / 2.0;
    let theta_star = (1.0 - 2.0 * p).abs().asin();
    // members are cos(θ/2)|000⟩ ± sin(θ/2)|111⟩ up to phases; the sign of θ is a phase choice
    let angle_error = pure
        .best
        .pure_vectors
        .iter()
        .flatten()
        .zip(&pure.best.weights)
        .filter(|(_, &w)| w > 1e-3)
        .map(|(v, _)| {
            let theta = 2.0 * v[7].norm().atan2(v[0].norm());
            (theta.min(std::f64::consts::PI - theta) - theta_star).abs()
        })
        .fold(0.0, f64::max);
    GhzOutcome {
        p,
        cmi: cmi(rho.matrix(), 3, &parts),
        closed: binary_entropy(q),
        pure: pure.value,
        mixed: mixed.value,
        angle_error,
    }
}
