//! Braiding matrix and exchange statistics of e, m and f = em, read off
//! from the phases of lattice string operators.
//!
//! ```text
//! cargo run -p topomix --example anyon_data
//! ```

use topomix::anomaly::{braiding_phase, crossing_disc, self_statistics, string_operator, Anyon};
use topomix::lattice::{standard_paths, PathRequest};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 7, 7, Boundary::Torus)?;
    let center = (3, 3);
    let disc = crossing_disc(&lat, center);
    print!("S   ");
    for b in Anyon::ALL {
        print!("{b:>4}");
    }
    println!();
    for a in Anyon::ALL {
        print!("{a:<4}");
        for b in Anyon::ALL {
            let paths = standard_paths(&lat, PathRequest::CrossingPair { center, first: a.path_kind(), second: b.path_kind() })?;
            let wa = string_operator(a, &paths[0], &lat)?;
            let wb = string_operator(b, &paths[1], &lat)?;
            print!("{:>4}", braiding_phase(&wa, &wb, &disc)?);
        }
        println!();
    }
    for a in Anyon::ALL {
        println!("θ_{a} = {}", self_statistics(a, &lat, center, 2)?);
    }
    Ok(())
}
