//! Seeded synthetic text: an order-2 Markov chain over `a`..`z` and space.
//!
//! Each two-symbol context gets its own Zipf-skewed distribution over a
//! context-specific permutation of the alphabet, which yields word-like
//! structure and a q-gram profile closer to prose than uniform noise.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[u8; 27] = b"abcdefghijklmnopqrstuvwxyz ";

pub fn markov_text(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym = ALPHABET.len();
    let tables: Vec<(Vec<u8>, WeightedIndex<f64>)> = (0..sym * sym)
        .map(|_| {
            let mut order: Vec<u8> = (0..sym as u8).collect();
            order.shuffle(&mut rng);
            let weights: Vec<f64> = (0..sym).map(|r| 1.0 / ((r + 1) as f64).powf(1.3)).collect();
            (order, WeightedIndex::new(weights).expect("positive weights"))
        })
        .collect();
    let mut out = Vec::with_capacity(len);
    let (mut a, mut b) = (sym - 1, sym - 1);
    for _ in 0..len {
        let (order, dist) = &tables[a * sym + b];
        let c = order[dist.sample(&mut rng)] as usize;
        out.push(ALPHABET[c]);
        a = b;
        b = c;
    }
    out
}
