use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::Rect;
use crate::error::{invalid, Error, Result};
use crate::geom::Point2D;
use crate::protocol::{is_connected, unit_disk_adjacency, Network};

/// Whole-deployment resamples before giving up.
pub const NETWORK_REJECTION_BUDGET: usize = 10_000;

/// Uniform deployment in `area`, resampled until the unit-disk graph of
/// radius `r` is connected.
pub fn gen_connected_network(n: usize, area: &Rect, r: f64, seed: u64) -> Result<Network> {
    if n == 0 {
        return Err(invalid("sensor count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..NETWORK_REJECTION_BUDGET {
        let pts: Vec<Point2D> = (0..n)
            .map(|_| {
                Point2D::new(
                    area.origin.x + rng.gen::<f64>() * area.width,
                    area.origin.y + rng.gen::<f64>() * area.height,
                )
            })
            .collect();
        if is_connected(&unit_disk_adjacency(&pts, r)) {
            return Network::new(&pts, r);
        }
    }
    Err(Error::NetworkGeneration)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sensor_is_connected() {
        let net = gen_connected_network(1, &Rect::square(50.0), 1.0, 0).unwrap();
        assert_eq!(net.len(), 1);
    }

    #[test]
    fn repeatable() {
        let a = gen_connected_network(50, &Rect::square(50.0), 15.0, 42).unwrap();
        let b = gen_connected_network(50, &Rect::square(50.0), 15.0, 42).unwrap();
        assert_eq!(a, b);
        let adj = unit_disk_adjacency(&a.positions(), 15.0);
        assert!(is_connected(&adj));
    }

    #[test]
    fn infeasible_density() {
        let got = gen_connected_network(100, &Rect::square(50.0), 0.1, 0);
        assert_eq!(got, Err(Error::NetworkGeneration));
    }
}
