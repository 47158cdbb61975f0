//! Pull anyon strings back through the Clifford dilations of maximal X, Z
//! and ZX dephasing. The pulled-back operators act on system plus ancillas,
//! yet braid and exchange exactly like the originals, and a loop that is a
//! strong symmetry of the dephased state pulls back to a strong symmetry of
//! the undephased input with ancillas in |0⟩.
//!
//! ```text
//! cargo run -p topomix --example symmetry_pullback
//! ```

use topomix::anomaly::{
    braiding_phase, crossing_disc, dilation, hopping_phase, pullback, pullback_string, standard_string, statistics_strings,
    string_operator, Anyon, DilationKind,
};
use topomix::lattice::{standard_paths, PathRequest};
use topomix::stabmix::{model_state, ModelKind};
use topomix::{Boundary, Lattice, LatticeKind};

fn main() -> Result<(), topomix::Error> {
    let lat = Lattice::build(LatticeKind::SquareEdges, 7, 7, Boundary::Torus)?;
    let center = (3, 3);
    let tc = model_state(ModelKind::ToricCode, &lat)?;
    for kind in [DilationKind::X, DilationKind::Z, DilationKind::Zx] {
        let d = dilation(&lat, kind)?;
        let output = d.output_state(&tc)?;
        let input = d.input_state(&tc)?;
        // the pulled-back strings spread by the circuit depth, so widen the disc
        let disc = d.circuit.light_cone(&crossing_disc(&lat, center));
        println!("{kind:?}: {} ancillas, {} gates", d.ancillas.len(), d.circuit.len());

        let mut s_row = vec![];
        for a in Anyon::ALL {
            for b in Anyon::ALL {
                let paths = standard_paths(&lat, PathRequest::CrossingPair { center, first: a.path_kind(), second: b.path_kind() })?;
                let wa = pullback_string(&string_operator(a, &paths[0], &lat)?, &d)?;
                let wb = pullback_string(&string_operator(b, &paths[1], &lat)?, &d)?;
                s_row.push(format!("S_{a}{b}={}", braiding_phase(&wa, &wb, &disc)?));
            }
        }
        println!("  {}", s_row.join(" "));

        for a in Anyon::ALL {
            let t: Vec<_> = statistics_strings(a, &lat, center, 2)?.iter().map(|s| pullback(&s.operator, &d)).collect::<Result<_, _>>()?;
            let w = standard_string(a, &lat, PathRequest::Box { lower: (1, 1), upper: (4, 4), kind: a.path_kind() })?;
            let back = pullback(&w.operator, &d)?;
            println!(
                "  {a}: θ={:<3} loop weight {:>2} -> {:>2}, after dephasing {:<10} pulled back on input {}",
                hopping_phase(&t[0], &t[1], &t[2])?,
                w.operator.weight(),
                back.weight(),
                output.symmetry_status(&w.operator)?.to_string(),
                input.symmetry_status(&back)?,
            );
        }
    }
    Ok(())
}
