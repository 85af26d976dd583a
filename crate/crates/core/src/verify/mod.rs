//! Definition-level oracles and the seeded property suite.

pub mod gen;
pub mod oracles;
pub mod suite;
