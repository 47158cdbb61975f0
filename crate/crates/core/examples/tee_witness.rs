//! Lower-bound witness for the entanglement entropy: a strong loop inside a
//! Levin-Wen annulus detects the charge of a weak string threaded through it,
//! while the string is invisible to every proper subregion.
//!
//! ```text
//! cargo run -p topomix --example tee_witness
//! ```

use topomix::anomaly::{tee_witness_check, Anyon};
use topomix::config::{witness_strings, WitnessConfig};
use topomix::lattice::{partition, PartitionScheme};
use topomix::stabmix::{model_state, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 9, 9, Boundary::Torus)?;
    let scheme = PartitionScheme::LevinWen { center: (4, 4), inner: 2, outer: 4, strict: true };
    let p = partition(&lat, scheme)?;
    for (model, strong) in [(ModelKind::LoopSoup, Anyon::M), (ModelKind::ZxDephasedMax, Anyon::F)] {
        let s = model_state(model, &lat)?;
        let (wa, wb) = witness_strings(&lat, scheme, WitnessConfig { strong, weak: Anyon::E })?;
        let r = tee_witness_check(&s, &lat, &wa, &wb, &p)?;
        println!(
            "{model:?}: W_{strong} charge {} -> {}, braiding {}, indistinguishable {}, homentropic {}, CMI {}",
            r.charge_before.map_or("none".into(), |c| c.to_string()),
            r.charge_after.map_or("none".into(), |c| c.to_string()),
            r.braiding,
            r.locally_indistinguishable,
            r.homentropic,
            s.cmi(&p)
        );
    }
    Ok(())
}
