use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::fan::{ConeId, Fan};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubsetKind {
    StarClosed,
    StarOpen,
    Whole,
}

/// A star closed or star open subset of a fan (or the whole fan).
#[derive(Debug, Clone)]
pub struct FanSubset<'a> {
    fan: &'a Fan,
    cones: BTreeSet<ConeId>,
    kind: SubsetKind,
}

impl<'a> FanSubset<'a> {
    pub fn whole(fan: &'a Fan) -> Self {
        Self {
            fan,
            cones: (0..fan.n_cones()).collect(),
            kind: SubsetKind::Whole,
        }
    }

    /// Checks the defining closure property of `kind` before constructing.
    pub fn new(fan: &'a Fan, cones: BTreeSet<ConeId>, kind: SubsetKind) -> Result<Self> {
        let subset = Self { fan, cones, kind };
        let ok = match kind {
            SubsetKind::Whole => subset.cones.len() == fan.n_cones(),
            SubsetKind::StarClosed => subset.is_star_closed(),
            SubsetKind::StarOpen => subset.is_star_open(),
        };
        if !ok {
            return Err(Error::Dim(format!("subset is not {kind:?}")));
        }
        Ok(subset)
    }

    /// Wraps a set of cones without checking the closure property. Useful
    /// for subsets that are closed only relative to another subset.
    pub fn from_parts(fan: &'a Fan, cones: BTreeSet<ConeId>, kind: SubsetKind) -> Self {
        Self { fan, cones, kind }
    }

    /// `Star_γ = {τ : γ ≺ τ}`.
    pub fn star(fan: &'a Fan, gamma: ConeId) -> Self {
        let g = fan.cone(gamma);
        Self {
            fan,
            cones: (0..fan.n_cones())
                .filter(|&t| g.is_face_of(fan.cone(t)))
                .collect(),
            kind: SubsetKind::StarClosed,
        }
    }

    /// All faces of `tau`.
    pub fn faces_of(fan: &'a Fan, tau: ConeId) -> Self {
        let t = fan.cone(tau);
        Self {
            fan,
            cones: (0..fan.n_cones())
                .filter(|&g| fan.cone(g).is_face_of(t))
                .collect(),
            kind: SubsetKind::StarOpen,
        }
    }

    /// Complement of `self` in its fan (star closed ↔ star open).
    pub fn complement(&self) -> FanSubset<'a> {
        let kind = match self.kind {
            SubsetKind::StarClosed => SubsetKind::StarOpen,
            SubsetKind::StarOpen | SubsetKind::Whole => SubsetKind::StarClosed,
        };
        FanSubset {
            fan: self.fan,
            cones: (0..self.fan.n_cones())
                .filter(|c| !self.cones.contains(c))
                .collect(),
            kind,
        }
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    pub fn cones(&self) -> &BTreeSet<ConeId> {
        &self.cones
    }

    pub fn contains(&self, id: ConeId) -> bool {
        self.cones.contains(&id)
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Cones of the subset of dimension `k`, in fan order.
    pub fn cones_of_dim(&self, k: usize) -> Vec<ConeId> {
        self.fan
            .cones_of_dim(k)
            .iter()
            .copied()
            .filter(|c| self.cones.contains(c))
            .collect()
    }

    pub fn count_dim(&self, k: usize) -> usize {
        self.fan
            .cones_of_dim(k)
            .iter()
            .filter(|c| self.cones.contains(c))
            .count()
    }

    pub fn is_star_closed(&self) -> bool {
        self.cones.iter().all(|&s| {
            (0..self.fan.n_cones())
                .filter(|&t| self.fan.cone(s).is_face_of(self.fan.cone(t)))
                .all(|t| self.cones.contains(&t))
        })
    }

    pub fn is_star_open(&self) -> bool {
        self.cones.iter().all(|&t| {
            (0..self.fan.n_cones())
                .filter(|&s| self.fan.cone(s).is_face_of(self.fan.cone(t)))
                .all(|s| self.cones.contains(&s))
        })
    }
}
