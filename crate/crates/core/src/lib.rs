pub mod automorphism;
pub mod cli;
pub mod corpus;
pub mod curvature;
pub mod discharging;
pub mod error;
pub mod flow;
pub mod generators;
pub mod glue;
pub mod io;
pub mod pattern_tables;
pub mod planar_map;
pub mod prismlike;
pub mod rational;
pub mod validate;
