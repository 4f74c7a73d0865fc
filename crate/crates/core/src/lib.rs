//! Tensor powers of the fundamental module of quantum sl2 at odd roots of unity.
//!
//! Multiplicities of indecomposable tilting modules in `T(1)^N` are computed
//! several independent ways (closed forms, weighted lattice paths, character
//! quadrature, Markov iteration) and compared against asymptotic limit laws.

pub mod asymptotics;
pub mod bigq;
pub mod classical;
pub mod error;
pub mod format;
pub mod level;
pub mod markov;
pub mod measure;
pub mod paths;
pub mod qarith;
pub mod smallq;
pub mod spectral;

pub use bigq::{MultiplicityTable, WeightLabel};
pub use error::{Error, Result};
pub use level::Level;
pub use measure::{Measure, Weights};
pub use paths::{PathCountVector, StepKind, StepSet};
pub use qarith::{LaurentPoly, RootOfUnity};
pub use smallq::{Family, SmallMultiplicityTable, SmallNode};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
