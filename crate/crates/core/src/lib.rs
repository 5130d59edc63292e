//! Load-coupled OFDMA networks with in-band wireless relays.
//!
//! [`scenario`] builds network instances, [`coupling`] evaluates the
//! load-coupling fixed point and transmission energy of an association, and
//! [`optimizer`] searches associations for lower energy.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common choice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod optimizer;
pub mod scalar;
pub mod scenario;

pub use coupling::{Association, FixedPointConfig, FixedPointResult, LinkTopology, LoadVector};
pub use error::{Error, Result};
pub use optimizer::{AlgorithmConfig, ImprovementVerdict, ReferencePolicy, SubsetPolicy};
pub use scalar::Scalar;
pub use scenario::{CellId, NodeId, Scenario};

pub type Scenario64 = Scenario<f64>;
pub type Scenario32 = Scenario<f32>;
pub type LoadVector64 = LoadVector<f64>;
pub type LoadVector32 = LoadVector<f32>;
pub type LinkTopology64 = LinkTopology<f64>;
pub type FixedPointResult64 = FixedPointResult<f64>;
pub type FixedPointConfig64 = FixedPointConfig<f64>;
pub type AlgorithmConfig64 = AlgorithmConfig<f64>;
pub type AlgorithmConfig32 = AlgorithmConfig<f32>;
