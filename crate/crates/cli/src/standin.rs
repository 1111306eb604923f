//! Seeded synthetic point sets sized like the classic 30- and 324-point
//! covering benchmarks.
//!
//! Points are uniform on the unit square with integer demands in
//! `10..200`. The benchmark files themselves are not shipped; these sets
//! have the same sizes and a comparable coverage profile at the radii in
//! [`suggested_radius`].

use fmclp_core::{CrispInstance, DemandPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SMALL: usize = 30;
pub const LARGE: usize = 324;
pub const DEFAULT_SEED: u64 = 5;

pub fn points(n: usize, seed: u64) -> Vec<DemandPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.random::<f64>();
            let y = rng.random::<f64>();
            let demand = rng.random_range(10..200) as f64;
            DemandPoint { x, y, demand }
        })
        .collect()
}

pub fn instance(n: usize, seed: u64) -> CrispInstance {
    CrispInstance::from_points(points(n, seed)).expect("stand-in sizes are nonzero")
}

/// Radius used with the stand-ins in tests and examples.
pub fn suggested_radius(n: usize) -> Option<f64> {
    match n {
        SMALL => Some(RADIUS_SMALL),
        LARGE => Some(0.13),
        _ => None,
    }
}

const RADIUS_SMALL: f64 = 0.15;

/// Resolves a `standin:N[:SEED]` input name.
pub fn parse_name(name: &str) -> Option<(usize, u64)> {
    let rest = name.strip_prefix("standin:")?;
    let mut parts = rest.split(':');
    let n = parts.next()?.parse().ok()?;
    let seed = match parts.next() {
        Some(s) => s.parse().ok()?,
        None => DEFAULT_SEED,
    };
    if parts.next().is_some() || n == 0 {
        return None;
    }
    Some((n, seed))
}
