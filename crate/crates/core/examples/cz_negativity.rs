//! Negativity of the maximally mixed state with a CZ-loop one-form symmetry
//! on a 24-site honeycomb torus, as region `A` grows breadth-first from one
//! site. Values approach ½ but are not monotone at this size.
//!
//! ```text
//! cargo run -p topomix --example cz_negativity --release
//! ```

use std::collections::VecDeque;

use topomix::negativity::mms_cz_negativity;
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::HoneycombVertices, 3, 4, Boundary::Torus)?;
    println!("{} sites, {} hexagons", lat.n(), lat.hexagons()?.len());
    let mut seen = vec![false; lat.n()];
    let mut order = vec![];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for r in lat.qubit_neighbors(q) {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    let mut prev = 0.0;
    for k in 0..=lat.n() / 2 {
        let e = mms_cz_negativity(&lat, &order[..k])?;
        println!("|A| = {k:>2}: E = {e:.6}{}", if e < prev { "  (down)" } else { "" });
        prev = e;
    }
    Ok(())
}
