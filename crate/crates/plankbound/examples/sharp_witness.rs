//! The chord/width ratio bound 2/(1+sqrt(d)) and the cube direction that
//! attains it exactly.

use plankbound::bounds::{lemma4_bound_check, sharp_witness};

fn main() {
    for d in 2..=8 {
        let w = sharp_witness(d).unwrap();
        let bound = 2.0 / (1.0 + (d as f64).sqrt());
        println!(
            "d = {d}: r = {:.6}, h = {:.6}, x = {:.6}, ratio = {:.12}, bound = {:.12}",
            w.r, w.h, w.x, w.ratio, bound
        );
    }

    // away from the sharp point the ratio sits strictly above the bound
    let check = lemma4_bound_check(2.0, 1.2).unwrap();
    println!(
        "r = 2, h = 1.2: ratio = {}, bound = {}, slack = {}",
        check.ratio, check.bound, check.slack
    );
}
