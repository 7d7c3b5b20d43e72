#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod chain;
pub mod cndim;
pub mod domain;
pub mod error;
pub mod green;
pub mod kernels;
pub mod linalg;

pub use chain::{compute_chain, ChainConfig, ChainReport, Conclusion, EntryKey, Theorem};
pub use cndim::{CnBoundsRecord, CnDomainSpec};
pub use domain::{Curve, DomainSpec, QuadratureRule, Region};
pub use error::{Error, Result};
pub use green::{GreenModel, GreenOptions, SublevelSweep};
pub use kernels::{CapacityBracket, KernelKind, KernelResult};
pub use num_complex::Complex64;
