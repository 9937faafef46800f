//! Combinatorial and topological lower bounds for the chromatic and local
//! chromatic numbers of uniform hypergraphs, with explicit witnesses.
//!
//! The crate covers Kneser hypergraphs, alternation numbers, colorability
//! defect, `Z_p`-box complexes, `Z_p`-hom posets, the cross-index, bracketed
//! `Z_p`-indices, executable harnesses for Tucker-type chain lemmas and
//! searches for colorful complete multipartite subhypergraphs.

#![allow(clippy::needless_range_loop)]

pub mod altdefect;
pub mod colorful;
pub mod complex;
pub mod error;
pub mod hypergraph;
pub mod index;
pub mod io;
pub mod report;
mod sat;
pub mod tucker;
pub mod vset;
pub mod zp;

pub use error::{Error, Result};
pub use hypergraph::{kneser, petersen, usual_kneser, ChromaticNumber, Coloring, Hypergraph, PartiteFamily, SearchBudget};
pub use vset::VertexSet;
pub use zp::Modulus;
