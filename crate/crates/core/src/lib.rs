pub mod cli;
pub mod datalog;
pub mod dl;
pub mod engine;
pub mod owl;
pub mod rewrite;
pub mod sameas;
pub mod sparql;
pub mod terms;
