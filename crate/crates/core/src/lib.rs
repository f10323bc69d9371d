pub mod analysis;
pub mod colour;
pub mod config;
pub mod emotion;
pub mod essys;
pub mod orchestrator;
pub mod renderer;
pub mod stats;
pub mod styling;
pub mod typesetter;
