//! Which anyon loops stay strong after maximal dephasing, and what kind of
//! memory the surviving logical loops encode.
//!
//! ```text
//! cargo run -p topomix --example memory_classes
//! ```

use topomix::anomaly::classify_memory;
use topomix::stabmix::{dephasing_ops, model_state, DephasingKind, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 4, 4, Boundary::Torus)?;
    let tc = model_state(ModelKind::ToricCode, &lat)?;
    let z = tc.apply_max_dephasing(&dephasing_ops(&lat, DephasingKind::Z)?)?;
    let xz = z.apply_max_dephasing(&dephasing_ops(&lat, DephasingKind::X)?)?;
    let zx = tc.apply_max_dephasing(&dephasing_ops(&lat, DephasingKind::Zx)?)?;
    for (name, s) in [("toric code", &tc), ("Z-dephased", &z), ("X+Z-dephased", &xz), ("ZX-dephased", &zx)] {
        let r = classify_memory(s, &lat)?;
        let strong: Vec<String> = r.strong_types.iter().map(|a| a.to_string()).collect();
        println!("{name:<14} {:<14} strong loops: {{{}}}", r.class.to_string(), strong.join(", "));
    }
    Ok(())
}
