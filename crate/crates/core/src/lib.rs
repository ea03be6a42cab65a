//! Computations in partially commutative groups `G(Γ)`: the lattice of
//! closed vertex sets, normal-form words, the integer matrix groups `S_Y`,
//! and the stabiliser of the closure lattice together with its conjugating
//! extension.

pub mod aut;
pub mod conj;
pub mod context;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod int_matrix;
pub mod io;
pub mod lattice;
pub mod stab_matrix;
pub mod verify;
pub mod vertex_set;
pub mod word;

pub use aut::{automap_of, decompose, AutMap, GeneratorAtom, GeneratorInventory, GeneratorWord};
pub use conj::{
    compose_mixed, conj_stab_witness, elementary_conj, factor_semidirect, inner, verify_witness,
    Automorphism, ConjWitness, ElemConjSpec, Factorization, MixedAtom,
};
pub use context::Context;
pub use error::{Error, Result};
pub use graph::Graph;
pub use int_matrix::{IntMatrix, RowOp};
pub use lattice::{ClosureLattice, LOrder, TotalOrder};
pub use stab_matrix::{max_pattern_check, StabMatrix, StabPattern};
pub use vertex_set::VertexSet;
pub use word::{CyclicDecomposition, Letter, PcGroup, Word};
