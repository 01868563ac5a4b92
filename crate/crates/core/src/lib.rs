pub mod diag;
pub mod diagram;
pub mod dsl;
pub mod mapper;
pub mod model;
pub mod validate;
pub mod checker;
pub mod codegen;
