pub mod codes;
pub mod cli;
pub mod complex;
pub mod error;
pub mod generators;
pub mod gf2;
pub mod io;
pub mod matroid;
pub mod par;
pub mod rational;
pub mod spectral;
pub mod topology;
pub mod walks;
