//! Expression grammar, declaration files and canonical printing.

pub mod ast;
pub mod lexer;
pub mod print;
pub mod source;

pub use print::{Names, Style};
pub use source::{parse_source, print_source, Binding, GenDecl, Scope, SourceSpec};
