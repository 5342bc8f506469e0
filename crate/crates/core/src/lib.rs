//! Regional tile grammars for two-dimensional picture languages.
//!
//! The crate validates tile grammars, parses pictures with a
//! generalized CKY recognizer, converts several other picture grammar
//! formalisms into regional tile grammars, and carries brute-force
//! oracles used to cross-check all of the above.

pub mod cli;
pub mod convert;
pub mod format;
pub mod grammar;
pub mod local;
pub mod names;
pub mod oracle;
pub mod parser;
pub mod picture;
pub mod tileset;

pub use grammar::{eliminate_chain_rules, is_chain_rule, validate_grammar, Rule, TileGrammar, ValidationReport};
pub use parser::{extract_derivation, parse, DerivationNode, Parser, RecognitionMatrix};
pub use picture::{
    adjacency_kind, bordered, hcat, in_local_language, is_regional_picture, strong_partition, subpicture, tiles_of,
    vcat, Adjacency, Cell, Partition, Picture, PictureError, Slot, Subdomain, Sym, Tile, TileSet,
};
pub use tileset::{adjacency_relations, decompose_regional, is_simple_regional, AdjacencyRelations};
