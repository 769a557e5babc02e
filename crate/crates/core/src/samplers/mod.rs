//! Converters from probability estimators to approximate samplers.

mod chain;
mod cdf;
mod sparse;

pub use cdf::{cdf_bitwise_from_r, cdf_bitwise_sample, draw_r, CdfSamplerConfig};
pub use chain::conditional_chain_sample;
pub use sparse::{
    epsilon_plan, epsilon_simulate, heavy_prefixes, sparse_distribution, sparse_sample, survivor_cap, HeavyPrefixes,
    SparseDraw, SparseSampler, SparsityPolynomial,
};
