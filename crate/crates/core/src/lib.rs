//! Exact computations for polarized rational conic fibrations of genus 2:
//! F_1 blown up at points on distinct fibers, with `L = 2s + 4f - sum e_i`.
//!
//! Everything is exact. Coordinates are rationals, lattice classes are
//! integer vectors, and every verdict comes with a certificate that
//! [`positivity::verify_certificate`] can re-check.

pub mod arith;
pub mod classify;
pub mod config;
pub mod error;
pub mod linalg;
pub mod lines;
pub mod osculation;
pub mod picard;
pub mod plane;
pub mod poly;
pub mod positivity;

pub use arith::{Q, Z};
pub use classify::{BoundLevel, ClassificationEntry, MuBound};
pub use config::{ElmDatum, ElmKind, ElmMap, PointConfig, PointSpec};
pub use error::{Error, Result};
pub use lines::{LineClass, LineKind, LineRecord};
pub use osculation::{InflectionReport, JetRank, SurfacePoint};
pub use picard::{DivisorClass, FeClass, HirzebruchClass};
pub use plane::{Direction, Form, MultCondition, PlanePoint};
pub use positivity::{Certificate, ConditionTag, Level, Verdict};
