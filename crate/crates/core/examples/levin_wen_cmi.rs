//! Levin-Wen and Markov CMI of the toric code and its maximally dephased
//! relatives, from exact stabilizer counting.
//!
//! ```text
//! cargo run -p topomix --example levin_wen_cmi
//! ```

use topomix::lattice::{partition, PartitionScheme};
use topomix::stabmix::{model_state, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 8, 8, Boundary::Torus)?;
    let lw = partition(&lat, PartitionScheme::LevinWen { center: (4, 4), inner: 1, outer: 3, strict: true })?;
    let markov = partition(&lat, PartitionScheme::Markov { center: (4, 4), radius: 1, d: 1, c_width: 1 })?;
    println!("8x8 torus, {} qubits; |A|={} |B|={} |C|={}", lat.n(), lw.a.len(), lw.b.len(), lw.c.len());
    println!("{:<18} {:>6} {:>10} {:>8}", "state", "S", "Levin-Wen", "Markov");
    for model in [ModelKind::ToricCode, ModelKind::LoopSoup, ModelKind::ZxDephasedMax] {
        let s = model_state(model, &lat)?;
        println!("{:<18} {:>6} {:>10} {:>8}", format!("{model:?}"), s.global_entropy(), s.cmi(&lw), s.cmi(&markov));
    }

    let small = Lattice::build(LatticeKind::SquareEdges, 6, 6, Boundary::Torus)?;
    let p = partition(&small, PartitionScheme::LevinWen { center: (3, 3), inner: 1, outer: 2, strict: true })?;
    let tc = model_state(ModelKind::ToricCode, &small)?;
    println!("6x6 torus, inner 1, outer 2: toric code CMI = {} (2γ)", tc.cmi(&p));
    Ok(())
}
