//! Numerics for q-deformed zw-measures on the extended Gelfand-Tsetlin graph.

pub mod boundary_approx;
pub mod cli;
pub mod graph_links;
pub mod limit_kernel;
pub mod lattice;
pub mod pbqj;
pub mod qspecial;
pub mod scaled;
pub mod verify;
pub mod zw_measures;

pub use num_complex::Complex64;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` of a master seed. Independent streams make
/// parallel Monte-Carlo results independent of the thread count.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
