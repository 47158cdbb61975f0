//! Convex roofs of the CMI for the GHZ mixture `p GHZ+ + (1-p) GHZ-`.
//!
//! The pure roof has a closed form, `h((1 + 2√(p(1-p)))/2)`, reached by
//! members `cos(θ/2)|000⟩ ± sin(θ/2)|111⟩` with `sin θ = |1 - 2p|`. The mixed
//! roof never exceeds the CMI `1 - h(p)`.
//!
//! ```text
//! cargo run -p topomix --example ghz_roof --release
//! ```

use topomix::convexroof::{binary_entropy, cmi_dense, convex_roof_minimize, ghz_mixture, RoofBudget, RoofMode};
use topomix::Partition;

fn main() -> Result<(), topomix::Error> {
    let parts = Partition::new(3, vec![0], vec![1], vec![2])?;
    let budget = RoofBudget { seed: 11, ..RoofBudget::default() };
    println!("{:>5} {:>9} {:>9} {:>9} {:>9} {:>22}", "p", "CMI", "pure", "closed", "mixed", "member angles / θ*");
    for p in [0.1, 0.25, 0.4, 0.5] {
        let rho = ghz_mixture(p)?;
        let cmi = cmi_dense(&rho, &parts)?;
        let pure = convex_roof_minimize(&rho, &parts, RoofMode::Pure, &budget)?;
        let mixed = convex_roof_minimize(&rho, &parts, RoofMode::Mixed, &budget)?;
        let closed = binary_entropy((1.0 + 2.0 * (p * (1.0 - p)).sqrt()) / 2.0);
        let theta_star = (1.0 - 2.0 * p).asin();
        let angles: Vec<String> = pure
            .best
            .pure_vectors
            .iter()
            .flatten()
            .zip(&pure.best.weights)
            .filter(|(_, &w)| w > 1e-3)
            .map(|(v, _)| {
                let theta = 2.0 * v[7].norm().atan2(v[0].norm());
                format!("{:.3}", theta.min(std::f64::consts::PI - theta) / theta_star.max(1e-12))
            })
            .collect();
        println!(
            "{p:>5} {cmi:>9.5} {:>9.5} {closed:>9.5} {:>9.5} {:>22}",
            pure.value,
            mixed.value,
            angles.join(",")
        );
    }
    Ok(())
}
