//! Exact-arithmetic toolkit for deciding AF embeddability of C*-algebras of
//! one-sided shift groupoids presented by finite directed graphs.
//!
//! The library works entirely over arbitrary-precision integers and
//! rationals. It provides Smith normal form and rational feasibility
//! (`exactlin`), graph validation and transfer matrices (`graphmodel`),
//! groupoid homology with its positive cone and the trace pairing on a
//! finite fibered model (`fibered`), path windows, the skew-product shift
//! and dimension-group elements (`drgroupoid`), the three independent
//! embeddability deciders (`decide`), finite dynamical models for crossed
//! products and pseudoloops (`dynsys`), and brute-force oracles that share
//! no logic with the main code paths (`oracle`).

pub mod error;
pub mod guards;

pub mod decide;
pub mod drgroupoid;
pub mod dynsys;
pub mod exactlin;
pub mod fibered;
pub mod graphmodel;
pub mod oracle;

pub use error::{Error, Result};
