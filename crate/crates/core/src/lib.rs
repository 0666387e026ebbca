//! Core toolkit for graph flips and bounded-depth structure theory.
//!
//! The crate provides, without requiring `std`:
//!
//! * dense graphs and relational structures with canonical forms ([`graph`],
//!   [`structure`], [`canon`]),
//! * partition-based edge flips and irreducible flip witnesses ([`partition`],
//!   [`witness`]),
//! * generators for the pattern families used throughout: path unions,
//!   half-graphs and their flips, crossings, rooks, and linear orders
//!   ([`patterns`]),
//! * an MSO/FO formula language with two independent evaluators and
//!   Ehrenfeucht-Fraisse games ([`logic`]),
//! * first-order interpretations and transductions, including the concrete
//!   pipelines that turn flipped patterns back into paths ([`interp`]),
//! * structural search: SC-depth, induced embeddings, and the pigeonhole
//!   extraction lemmas ([`analysis`]),
//! * Hanf-style ball censuses for locality arguments ([`hanf`]).
//!
//! Everything is deterministic: iteration orders are fixed, and all search
//! procedures break ties by vertex order.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod bitset;
pub mod canon;
pub mod graph;
pub mod hanf;
pub mod interp;
pub mod logic;
pub mod partition;
pub mod patterns;
pub mod structure;
pub mod witness;
