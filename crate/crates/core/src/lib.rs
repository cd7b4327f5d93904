pub mod error;
pub mod family;
pub mod moments;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sato;
pub mod second_kind;
pub mod series;
pub mod toda;
pub mod virasoro;
pub mod weyl;

pub use error::{Error, Result};
pub use family::{FamilyConfig, PolyFamily};
pub use poly::{IndexFunction, Poly, XPolynomial};
pub use rational::Rational;
pub use report::{CheckReport, Failure, NumericReport, NumericResidual};
pub use sato::{FormalLaurentVector, GrassmannPlane, Partition};
pub use series::{Monomial, TauSeries};
pub use toda::{OperatorType, PseudoDiffOperator};
pub use virasoro::{BosonicOperator, VirasoroFamily};
pub use weyl::DiffOperator;
