pub mod attack;
pub mod community;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod null_models;
pub mod proximity;
pub mod spatial;
pub mod stats;
