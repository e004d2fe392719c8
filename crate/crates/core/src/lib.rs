pub mod arff;
pub mod classifiers;
pub mod corpus;
pub mod data;
pub mod features;
pub mod sampling;
pub mod eval;
pub mod pipeline;
pub mod demo;
pub mod persist;
