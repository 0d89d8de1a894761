//! Seeded random instances for tests and benchmarks.

use rand::Rng;

use crate::tsplib::{Instance, Metric, Point};

/// `n` nodes uniform in `[0, side)^2`; node 0 is the base.
pub fn random_instance<R: Rng + ?Sized>(n: usize, side: f64, rng: &mut R) -> Instance {
    let coords = (0..n)
        .map(|_| Point::new(rng.gen::<f64>() * side, rng.gen::<f64>() * side))
        .collect();
    Instance::new(format!("rand{n}"), coords, 0, Metric::Exact)
        .expect("random instance needs n >= 2")
}
