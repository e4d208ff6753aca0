//! Certify that a plank cover of the square obeys the bound
//! sum of relative widths >= 2/(1+sqrt(d)), then refute a broken cover.

use plankbound::bounds::certify_cover_bound;
use plankbound::geometry::{Direction, Polytope};
use plankbound::planks::{covers, slab_cover, CoverVerdict, VerifyConfig};

fn main() {
    let square = Polytope::from_rows(
        2,
        &[vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]],
    )
    .unwrap();

    let u = Direction::axis(2, 1, true);
    let cover = slab_cover(&square, &u, 3).unwrap();
    let report = certify_cover_bound(&square, &cover, "square").unwrap();
    println!("total relative width = {}", report.total_rw);
    println!("Bang functional      = {}", report.total_width_over_ell);
    println!("threshold 2/(1+sqrt(2)) = {}", report.threshold_theorem);
    println!("all inequalities pass: {}", report.all_pass());

    // drop the middle slab: the verifier finds an uncovered point
    let broken: Vec<_> = cover
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 1)
        .map(|(_, p)| p.clone())
        .collect();
    match covers(&broken, &square, &VerifyConfig::for_dimension(2)).unwrap() {
        CoverVerdict::Covered { .. } => println!("unexpectedly covered"),
        CoverVerdict::Counterexample { witness, margin, .. } => {
            println!(
                "refuted: point ({}, {}) is uncovered with margin {margin}",
                witness[0], witness[1]
            );
        }
    }
}
