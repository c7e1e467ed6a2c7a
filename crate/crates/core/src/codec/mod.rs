//! Communication-size optimizations: constant-weight coding, response
//! packing and pairwise seed compression.

mod bits;
mod cw;
mod response;

pub use cw::{cw_capacity_ok, cw_decode, cw_encode, cw_rank, cw_unrank};
pub use response::{
    compress_response, decompress_response, expected_response_bits, plan_seed_pairs, response_bits,
    response_len, IterationResponse, PackedResponse, PairMasters, SeedPlan, VectorReveal,
};
