//! LP-based queries: point membership, radial function and chord length.
//!
//! The chord length of K in a direction equals twice the radial function
//! of the difference body in that direction.

use nalgebra::DVector;
use plankbound::geometry::{difference_body, Direction, Polytope};
use plankbound::lp;

fn main() {
    let k = Polytope::from_rows(
        2,
        &[vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]],
    )
    .unwrap();

    let inside = DVector::from_vec(vec![0.25, -0.5]);
    let outside = DVector::from_vec(vec![1.5, 0.0]);
    println!("(0.25,-0.5) inside: {}", lp::membership(&k, &inside).unwrap().is_inside());
    println!("(1.5,0)     inside: {}", lp::membership(&k, &outside).unwrap().is_inside());

    let diag = Direction::normalized(DVector::from_vec(vec![1.0, 1.0])).unwrap();
    let l = difference_body(&k).unwrap();
    let ell = lp::chord_length(&k, &diag).unwrap();
    let rho = lp::radial(&l, &diag).unwrap();
    println!("chord along diagonal: {ell} (expect 2*sqrt(2) = {})", 2.0 * 2.0f64.sqrt());
    println!("2 * radial of L:      {}", 2.0 * rho);
}
