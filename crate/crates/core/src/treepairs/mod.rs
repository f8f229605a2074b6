//! Finite caret trees and tree pairs.
//!
//! A tree's leaves, read left to right, tile `[0, 1]` by cells of length
//! `β^depth`. Two trees with the same leaf-depth sequence give the same
//! partition, so depth sequences serve as partition keys throughout. A pair
//! `(L, R)` with equally many leaves is the map sending the cells of `L`
//! affinely onto the cells of `R`. Pairs compose left to right, like maps.

mod pair;
mod presentation;
mod tree;

use num_bigint::BigUint;
use thiserror::Error;

use crate::exactnum::FieldElem;
use crate::json::FormatError;
use crate::subdivision::SubdivisionError;

pub use pair::{
    caret_bijection, compose_pairs, equivalent, power_base, power_map_down, power_map_up, reduce,
    treepair_to_plmap, TreePair, DEFAULT_COMPOSE_BUDGET,
};
pub use presentation::{
    check_ftau_relations, check_relations, emit_presentation, evaluate_word, ftau_treepair, Convention, Letter,
    Relation, RelationCheck, RelationKind, RelationReport,
};
pub use tree::{
    count_trees, depths_to_partition, enumerate_trees, leaf_depths, partition_to_tree, realize,
    tree_to_partition, PartitionTree, Tree,
};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("cannot parse tree: {0}")]
    Parse(String),
    #[error("caret {shape} is not a shape of the context")]
    ShapeNotInContext { shape: String },
    #[error("left tree has {left} leaves, right tree has {right}")]
    LeafCountMismatch { left: usize, right: usize },
    #[error("tree pairs live in different contexts")]
    ContextMismatch,
    #[error("depths do not tile [0, 1]")]
    NotAPartition,
    #[error("breakpoint {breakpoint} is not a leaf boundary of any tree with depth at most {bound}")]
    Unrepresentable { breakpoint: FieldElem, bound: u32 },
    #[error("{count} trees exceed the cap of {cap}")]
    TooManyTrees { count: BigUint, cap: usize },
    #[error("common refinement not found within {budget} caret expansions")]
    BudgetExceeded { budget: usize },
    #[error("no common refinement within depth {depth}")]
    NoCommonRefinement { depth: u32 },
    #[error("leg {leg} is not divisible by {k}")]
    IndivisibleLeg { leg: u32, k: u32 },
    #[error("{poly} is not a polynomial in x^{k}")]
    NotAPowerContext { poly: String, k: u32 },
    #[error("the pair for ({a},{b}) is defined only when a <= b")]
    Undefined { a: u64, b: u64 },
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Format(#[from] FormatError),
}
