//! Scale-free digraph generation: growth models, composite construction and
//! the parameter/exponent relations of each model.

mod graph;
mod growth;
mod params;

pub use graph::{compose_and_simplify, simplify, MultiDigraph, SimpleDigraph};
pub use growth::{generate, generate_multigraph, grow_alpha_pa, grow_copy, grow_pa, seed_graph};
pub use params::{
    composite_offset_prediction, predicted_exponents, AlphaPaParams, CopyParams, Direction,
    ExponentPair, ModelParams, PaParams,
};
