//! Lattice geometry: vectors, covectors, simplicial cones and fans.
//!
//! Fans are stored with their full face closure. A cone is identified by the
//! sorted list of indices of its rays in the parent fan and addressed by a
//! [`ConeId`] into [`Fan::cones`]. All arithmetic is exact.

mod fan;
mod io;
mod subset;
mod validate;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{dot_int, Q};

pub use fan::{
    cone_perp_basis, dual_covector, integral_perp_basis, minimal_containing_cone, quotient_star,
    star_subdivide, Cone, ConeId, Fan, PerpBasis, StarQuotient,
};
pub use io::{fan_to_file, load_fan, parse_fan_str, render_fan_toml, FanFile};
pub use subset::{FanSubset, SubsetKind};
pub use validate::{fan_validate, Issue, IssueKind, ValidationReport};

/// An integral point of N.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        crate::linalg::gcd_slice(&self.0) == 1
    }

    /// The primitive vector on the same ray; the zero vector stays zero.
    pub fn primitive(&self) -> LatticeVector {
        let g = crate::linalg::gcd_slice(&self.0);
        if g == 0 {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|x| x / g).collect())
    }

    pub fn to_q(&self) -> Vec<Q> {
        crate::linalg::qvec(&self.0)
    }
}

impl std::fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A rational point of M_Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalCovector(pub Vec<Q>);

impl RationalCovector {
    pub fn zero(rank: usize) -> Self {
        RationalCovector(vec![Q::zero(); rank])
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn pair(&self, v: &LatticeVector) -> Q {
        dot_int(&self.0, &v.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        crate::linalg::is_integral(&self.0)
    }

    pub fn sub(&self, other: &RationalCovector) -> RationalCovector {
        RationalCovector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Rescales to the primitive integer covector in the same direction.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        crate::linalg::primitive_integer(&self.0)
    }
}

impl std::fmt::Display for RationalCovector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| {
                if x.is_integer() {
                    x.to_integer().to_string()
                } else if x.is_negative() {
                    format!("-{}/{}", x.numer().abs(), x.denom())
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}
