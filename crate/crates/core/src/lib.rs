pub mod error;
pub mod eta;
pub mod macdonald;
pub mod series;
pub mod virasoro;
pub mod wronskian;

pub use error::{Error, Result};
pub use series::{QExponent, QSeries};
