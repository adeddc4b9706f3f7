pub mod clifford;
pub mod error;
pub mod frame;
pub mod xi;
pub mod scalar;
pub mod sphere;
pub mod boundary;
pub mod paper_data;
pub mod interior;
pub mod selfcheck;
pub mod verify;

pub use clifford::{CliffordElement, CliffordWord, Generator, Signature};
pub use xi::{XiBasis, XiRational, XiTerm};
pub use error::{Error, ParseError, Result};
pub use scalar::{ExactScalar, Family, Kind, Marker, Monomial, Registry, ScalarPoly, VarId};
pub use boundary::{BoundaryResult, BoundarySymbol, CaseSpec, JetKey, StructuredCoefficients, SymbolJet};
pub use frame::{Frame, Gauge};
pub use interior::{einstein_functional, InteriorResult};
pub use paper_data::suite::{load_suite, ExpectedResult, EncodedLemma, Suite, SuiteName};
pub use verify::{verify, Report, Status, VerifyOptions, Waivers};
pub use selfcheck::{run_properties, PropertyOutcome};
