pub mod bath;
pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod measurement;
pub mod models;
pub mod state;
pub mod sweep;
