//! The difference body L = (K - K)/2 keeps every directional width.

use plankbound::geometry::{difference_body, Polytope};
use plankbound::sphere;

fn main() {
    let k = Polytope::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let l = difference_body(&k).unwrap();
    println!("K has {} vertices, L has {}", k.vertices().len(), l.vertices().len());

    let mut worst = 0.0f64;
    for u in sphere::sphere_directions(2, 100) {
        let wk = k.width_in_direction(&u).unwrap();
        let wl = l.width_in_direction(&u).unwrap();
        worst = worst.max((wk - wl).abs());
    }
    println!("max |w_K - w_L| over 100 directions: {worst:e}");
}
