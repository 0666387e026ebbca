//! FO/MSO/CMSO formulas: ASTs, a prefix-syntax parser and printer, Tarskian
//! evaluation with a step budget and native connectivity, quantifier-rank
//! equivalence via Ehrenfeucht–Fraïssé search, order-property witness search,
//! and the named sentences used by the separation arguments.

pub mod ast;
pub mod ef;
pub mod eval;
pub mod named;
pub mod order;
pub mod parse;

pub use ast::{Assignment, Formula, LogicClass};
pub use ef::{fo_q_equivalent, fo_q_equivalent_with, rank_q_type_sentence, EfConfig};
pub use eval::{
    evaluate, evaluate_naive, evaluate_sentence, evaluate_with, expand_conn, EvalConfig, Evaluator,
    DEFAULT_EVAL_BUDGET,
};
pub use order::{order_property_witness, order_property_witness_with, OrderSearchConfig};
pub use parse::parse_formula;

use alloc::string::String;

/// Errors for parsing, evaluation, and game search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogicError {
    /// Malformed input at the given byte offset.
    Syntax { pos: usize, msg: String },
    /// A relation name missing from the structure's signature.
    UnknownRelation { name: String },
    /// Atom arity does not match the signature.
    ArityMismatch { name: String, expected: usize, got: usize },
    /// A free element variable missing from the assignment.
    UnboundElement { name: String },
    /// A free set variable missing from the assignment.
    UnboundSet { name: String },
    /// The evaluation step budget was exhausted.
    Budget { budget: u64 },
    /// A universe too large for the requested search.
    UniverseTooLarge { n: usize, cap: usize },
    /// A cardinality constraint with `r ≥ k` or `k = 0`.
    InvalidCard { r: u64, k: u64 },
    /// The formula has the wrong free variables for this operation.
    WrongFreeVariables { expected: &'static str },
    /// Structures with different signatures cannot be compared.
    SignatureMismatch,
}

impl core::fmt::Display for LogicError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LogicError::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            LogicError::UnknownRelation { name } => write!(f, "unknown relation {name}"),
            LogicError::ArityMismatch { name, expected, got } => {
                write!(f, "relation {name} expects {expected} arguments, got {got}")
            }
            LogicError::UnboundElement { name } => write!(f, "unbound element variable {name}"),
            LogicError::UnboundSet { name } => write!(f, "unbound set variable {name}"),
            LogicError::Budget { budget } => {
                write!(f, "evaluation exceeded the step budget of {budget}")
            }
            LogicError::UniverseTooLarge { n, cap } => {
                write!(f, "universe size {n} exceeds the cap {cap}")
            }
            LogicError::InvalidCard { r, k } => {
                write!(f, "cardinality constraint needs 0 <= r < k, got r={r}, k={k}")
            }
            LogicError::WrongFreeVariables { expected } => {
                write!(f, "formula must have free variables: {expected}")
            }
            LogicError::SignatureMismatch => write!(f, "structures have different signatures"),
        }
    }
}

impl core::error::Error for LogicError {}
