//! Scheduling product marketing on a social network where consumers act as
//! rebels: each one buys whichever of two products fewer of her
//! already-decided friends own.

pub mod cut;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod io;
pub mod mirror;
pub mod mis;
pub mod nodeset;
pub mod oracle;
pub mod peeling;
pub mod reductions;
pub mod schedulers;

pub use cut::{Cut, Side};
pub use dynamics::{simulate, Decision, Outcome, PartialSchedule, Schedule};
pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use nodeset::NodeSet;
