//! Relation-checking language: parse `lhs == rhs for n in a..b` relations and
//! evaluate them over every binding in a chosen operator registry.

pub mod ast;
pub mod eval;
pub mod mutate;
pub mod parser;
pub mod registry;
pub mod suites;

pub use ast::{Binding, BracketKind, Expr, IExpr, Relation};
pub use eval::{bindings, check_relations, evaluate, relation_residual, Meta, Realization, Value};
pub use mutate::mutate;
pub use parser::{parse_relation, parse_suite_text};
pub use suites::{builtin_suites, find_suite, run_suite, run_suite_text, BuiltinSuite, RegistrySpec, Setup};
