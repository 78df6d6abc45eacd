//! Finite relational structures, embeddings, automorphisms and canonical forms.

mod canonical;
mod embedding;
pub mod named;
mod signature;
mod structure;

pub use canonical::{canonical_form, canonical_structure, CanonicalCode};
pub use embedding::{
    automorphisms, compose, embeds, enumerate_copies, enumerate_embeddings, first_embedding,
    invert, is_embedding, is_isomorphic, subsets, EmbeddingSearch, Map, Plan,
};
pub use signature::{Signature, Symbol};
pub use structure::{all_tuples, Structure, StructureDoc};
