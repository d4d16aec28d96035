pub mod audit;
pub mod cli;
pub mod ddl;
pub mod emit;
pub mod fixtures;
pub mod mapping;
pub mod relational;
