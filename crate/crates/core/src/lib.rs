//! Link-level simulation and optimization of surveillance and intervention
//! against infrastructure-free suspicious wireless links.

pub mod error;
pub mod experiment;
pub mod intervention;
pub mod model;
pub mod network;
pub mod optim;
pub mod protocol;
pub mod scenario;
pub mod surveillance;
pub mod table;

pub use error::{Error, Result};
pub use scenario::{load_scenario, LoadedScenario};
pub use table::ResultTable;
