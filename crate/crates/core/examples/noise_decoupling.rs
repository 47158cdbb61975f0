//! Toric code under independent X and Z noise at any strength.
//!
//! Syndrome distributions are pushed forward exactly, so entropies are exact.
//! For CSS states the X and Z parts decouple:
//! `S(px, pz) + S(0, 0) = S(0, pz) + S(px, 0)` for every region.
//!
//! ```text
//! cargo run -p topomix --example noise_decoupling
//! ```

use topomix::cssnoise::{noisy_cmi, noisy_entropy_region, NoiseSpec, DEFAULT_BUDGET};
use topomix::lattice::{partition, PartitionScheme};
use topomix::stabmix::{model_state, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 3, 3, Boundary::Torus)?;
    let tc = model_state(ModelKind::ToricCode, &lat)?;
    let lw = partition(&lat, PartitionScheme::LevinWen { center: (1, 1), inner: 1, outer: 2, strict: false })?;
    let all: Vec<usize> = (0..lat.n()).collect();
    let s = |px: f64, pz: f64, region: &[usize]| noisy_entropy_region(&tc, &NoiseSpec::xz(&lat, px, pz)?, region, DEFAULT_BUDGET);
    let i = |px: f64, pz: f64| noisy_cmi(&tc, &NoiseSpec::xz(&lat, px, pz)?, &lw, DEFAULT_BUDGET);

    println!("{:>5} {:>5} {:>10} {:>10} {:>10} {:>10}", "px", "pz", "S(ABC)", "defect", "CMI", "defect");
    for px in [0.1, 0.25, 0.4] {
        for pz in [0.1, 0.25, 0.4] {
            let sg = s(px, pz, &all)?;
            let ds = sg + s(0.0, 0.0, &all)? - s(0.0, pz, &all)? - s(px, 0.0, &all)?;
            let c = i(px, pz)?;
            let dc = c + i(0.0, 0.0)? - i(0.0, pz)? - i(px, 0.0)?;
            println!("{px:>5} {pz:>5} {sg:>10.6} {ds:>10.1e} {c:>10.6} {dc:>10.1e}");
        }
    }
    let half = s(0.5, 0.5, &all)?;
    println!("px = pz = 1/2 gives the maximally mixed state: S = {half} of {} qubits", lat.n());
    Ok(())
}
