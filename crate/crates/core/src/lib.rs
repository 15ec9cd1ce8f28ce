//! Exact computations connecting rational weighted languages, syntactic
//! algebras, Frobenius and semisimple algebras, biprefix codes, 2D lattice
//! and closed topological field theories, and restricted weighted MSO.

pub mod algebra;
pub mod codes;
pub mod exactla;
pub mod groups;
pub mod mso;
pub mod tft;
pub mod wfa;
pub mod word;
