//! Support function, directional width and minimal width of a polytope.

use nalgebra::DVector;
use plankbound::geometry::{min_width, Direction, Polytope};
use plankbound::sphere::SearchConfig;

fn main() {
    let triangle =
        Polytope::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();

    let e1 = Direction::axis(2, 0, true);
    let diag = Direction::normalized(DVector::from_vec(vec![1.0, 1.0])).unwrap();
    println!("h(e1)   = {}", triangle.support(&e1).unwrap());
    println!("w(e1)   = {}", triangle.width_in_direction(&e1).unwrap());
    println!("w(diag) = {}", triangle.width_in_direction(&diag).unwrap());

    let (dir, w) = min_width(&triangle, &SearchConfig::min_width_default(2)).unwrap();
    println!("minimal width {w} in direction {:?}", dir.coords().as_slice());
    println!("expected 1/sqrt(2) = {}", 1.0 / 2.0f64.sqrt());
}
