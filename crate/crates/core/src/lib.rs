pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod model;
pub mod ops;
pub mod report;
pub mod spectral;
pub mod suites;

pub use error::{Error, ParseError, Result};
pub use model::{builtin, parse_model, Model};
