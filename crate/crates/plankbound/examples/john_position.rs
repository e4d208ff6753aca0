//! John normalization: sandwich a symmetric body between the unit ball
//! and sqrt(d) times the unit ball.

use plankbound::geometry::{difference_body, Polytope};
use plankbound::john;

fn main() {
    let triangle =
        Polytope::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let hexagon = difference_body(&triangle).unwrap();

    let norm = john::john_normalize(&hexagon, 1e-7).unwrap();
    println!("transform T =");
    println!("{}", norm.transform);
    println!("inner radius = {}", norm.certificate.inner);
    println!("outer radius = {}", norm.certificate.outer);
    println!("sqrt(d)      = {}", 2.0f64.sqrt());
}
