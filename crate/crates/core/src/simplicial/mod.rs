//! Finite simplicial complexes, their constructors, group actions and
//! quotients, complement models and the simplicial cochain algebra.

mod action;
mod cochain;
mod complement;
mod complex;
mod construct;
mod lens;
mod product;
mod subdivision;

pub use action::{quotient, GroupAction, Quotient};
pub use cochain::{coboundary, cup, Cochain, CupTable, SimplicialCochains};
pub use complement::{complement_model, complement_model_streaming, ComplementModel, PieceOracle};
pub use complex::{SimplicialComplex, SimplicialMap};
pub use construct::{
    boundary_sphere, cone, join, join_with_offsets, point, polygon, rp2_six_vertex, simplex,
    staircase_torus, wedge,
};
pub use lens::{lens_space, polygon_size, rotation_join, s3_with_action, S3Model};
pub use product::{
    graph_subcomplex, lattice_paths, product_vertex, staircase_product, staircase_top_simplices,
};
pub use subdivision::{barycentric_subdivision, Subdivision};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<u32>),
    #[error("vertex {vertex} outside 0..{bound}")]
    VertexOutOfRange { vertex: u32, bound: usize },
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("image {image:?} of simplex {simplex:?} is not a simplex of the target")]
    NotSimplicial { simplex: Vec<u32>, image: Vec<u32> },
    #[error("map is not strictly order-preserving on simplex {0:?}")]
    NotOrderPreserving(Vec<u32>),
    #[error("polygon needs at least 3 vertices, got {0}")]
    PolygonTooSmall(usize),
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("removed subcomplexes overlap at vertex {0}")]
    Overlap(u32),
    #[error("{0}")]
    Invalid(String),
}
