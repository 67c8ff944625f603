use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::ActivityKey;
use crate::network::Network;

/// FNV-1a over the project name and the file job number.
fn stream_id(key: &ActivityKey) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.project.bytes().chain(key.activity.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Draws one cv per non-dummy activity from `U(lo, hi)`; dummies get 0.
///
/// Each draw comes from its own ChaCha stream selected by the activity key,
/// so the result does not depend on declaration order or on which other
/// activities exist.
pub fn assign_cvs(
    network: &Network,
    seed: u64,
    lo: f64,
    hi: f64,
) -> Result<BTreeMap<ActivityKey, f64>> {
    if !(lo >= 0.0 && lo <= hi && hi < 1.0) {
        return Err(Error::Domain(format!("invalid cv range [{lo}, {hi}]")));
    }
    Ok(network
        .nodes
        .iter()
        .map(|node| {
            let cv = if node.dummy {
                0.0
            } else if lo == hi {
                lo
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream_id(&node.key));
                let u: f64 = rng.random();
                (lo + (hi - lo) * u).min(hi)
            };
            (node.key.clone(), cv)
        })
        .collect())
}
