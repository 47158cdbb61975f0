//! Negativity across cylinder cuts, from the rank of the boundary
//! commutation matrix.
//!
//! Cut-1 takes the rows below a horizontal line; cut-2 takes a horizontal
//! strip. The ZX-dephased toric code and the honeycomb flux state are both
//! swept over the circumference `L`.
//!
//! ```text
//! cargo run -p topomix --example negativity_tables
//! ```

use topomix::lattice::{partition, PartitionScheme};
use topomix::negativity::stabilizer_negativity;
use topomix::stabmix::{model_state, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn table(kind: LatticeKind, model: ModelKind, ly: usize, row: i64) -> Result<(), topomix::Error> {
    println!("{model:?} on {kind:?}, height {ly}");
    println!("{:>3} {:>8} {:>8}", "L", "cut-1", "cut-2");
    for l in 2..=8 {
        let lat = Lattice::build(kind, l, ly, Boundary::Cylinder)?;
        let s = model_state(model, &lat)?;
        let one = partition(&lat, PartitionScheme::CylinderCut1 { row })?;
        let two = partition(&lat, PartitionScheme::CylinderCut2 { row })?;
        let e1 = stabilizer_negativity(&s, &one.a, Some(l)).negativity;
        let e2 = stabilizer_negativity(&s, &two.a, Some(l)).negativity;
        println!("{l:>3} {e1:>8} {e2:>8}");
    }
    Ok(())
}

fn main() -> Result<(), topomix::Error> {
    table(LatticeKind::SquareEdges, ModelKind::ZxDephasedMax, 6, 2)?;
    println!();
    table(LatticeKind::HoneycombVertices, ModelKind::HoneycombFlux, 6, 2)?;
    Ok(())
}
