//! Uniform access to the four schedulers and the counts they guarantee.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Decision, Schedule};
use crate::equilibrium::{algorithm4, algorithm5, algorithm5_bound, default_initial_cut};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mirror::schedule_y;
use crate::mis::{exact_max_independent_set, EXACT_MIS_LIMIT};
use crate::peeling::schedule_n;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Mirror schedules: at least `n/2` decisions of `Y`.
    Alg1,
    /// Layered mirror schedules: at least `n/3` decisions of `N`.
    Alg2,
    /// Regret-proof, at least `n/2` decisions of `Y`.
    Alg4,
    /// Regret-proof, at least `max(sqrt(n+1) - 1, (n - alpha)/2)` of `N`.
    Alg5,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Alg1,
        Algorithm::Alg2,
        Algorithm::Alg4,
        Algorithm::Alg5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg4 => "alg4",
            Algorithm::Alg5 => "alg5",
        }
    }

    /// The decision whose count the algorithm maximizes.
    pub fn objective(self) -> Decision {
        match self {
            Algorithm::Alg1 | Algorithm::Alg4 => Decision::Y,
            Algorithm::Alg2 | Algorithm::Alg5 => Decision::N,
        }
    }

    pub fn claims_regret_proof(self) -> bool {
        matches!(self, Algorithm::Alg4 | Algorithm::Alg5)
    }

    pub fn run(self, graph: &Graph) -> Result<Schedule> {
        match self {
            Algorithm::Alg1 => schedule_y(graph),
            Algorithm::Alg2 => schedule_n(graph),
            Algorithm::Alg4 => algorithm4(graph, default_initial_cut(graph)),
            Algorithm::Alg5 => algorithm5(graph),
        }
    }

    /// Smallest objective count the guarantee allows on `n` nodes. `alpha`
    /// only matters for [`Algorithm::Alg5`].
    pub fn required(self, n: usize, alpha: Option<usize>) -> usize {
        match self {
            Algorithm::Alg1 | Algorithm::Alg4 => n.div_ceil(2),
            Algorithm::Alg2 => n.div_ceil(3),
            Algorithm::Alg5 => algorithm5_bound(n, alpha),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "alg1" => Ok(Algorithm::Alg1),
            "alg2" => Ok(Algorithm::Alg2),
            "alg4" => Ok(Algorithm::Alg4),
            "alg5" => Ok(Algorithm::Alg5),
            _ => Err(Error::Param(format!(
                "unknown algorithm `{s}` (expected alg1, alg2, alg4 or alg5)"
            ))),
        }
    }
}

/// Independence number when the graph is small enough for the exact solver.
pub fn alpha_if_small(graph: &Graph) -> Option<usize> {
    if graph.n() <= EXACT_MIS_LIMIT {
        exact_max_independent_set(graph).ok().map(|(_, a)| a)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_counts() {
        assert_eq!(Algorithm::Alg1.required(9, None), 5);
        assert_eq!(Algorithm::Alg2.required(7, None), 3);
        assert_eq!(Algorithm::Alg5.required(4, Some(1)), 2);
        assert_eq!(Algorithm::Alg5.required(8, None), 2);
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("alg3".parse::<Algorithm>().is_err());
    }
}
