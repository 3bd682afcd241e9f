//! Declarative definition of the grade mapping: explicit cell entries, an
//! ordered rule list and a default, compiled into a total assignment.

mod assignment;
mod dsl;
mod lint;

pub use assignment::{resolve_rules, Assignment, CompiledAssignment, Entry, ResolvedClause, ResolvedRule, Source};
pub use dsl::{parse_rules, print_rules, Clause, Comparator, Rule, Span, DSL_VERSION};
pub use lint::{coverage, lint_rules, lint_with, Diagnostic, LintOptions, Severity};
