//! Exterior algebra over Q^n in the standard monomial basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::Q;

/// All `r`-element subsets of `items`, each sorted, in lexicographic order.
pub fn subsets(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(
        items: &[usize],
        start: usize,
        r: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, r, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, r, &mut current, &mut out);
    out
}

/// An element of the exterior algebra, stored as coefficients on sorted
/// index sets. Mixed degrees are allowed but rarely useful.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<FormTerm>", try_from = "Vec<FormTerm>")]
pub struct Form {
    terms: BTreeMap<Vec<usize>, Q>,
}

impl Form {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Q::one());
        Self { terms }
    }

    /// The degree-one form with the given coordinates.
    pub fn from_vector(v: &[Q]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                terms.insert(vec![i], x.clone());
            }
        }
        Self { terms }
    }

    pub fn monomial(indices: Vec<usize>, coeff: Q) -> Self {
        let mut f = Self::zero();
        f.add_term(indices, coeff);
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, indices: &[usize]) -> Q {
        self.terms.get(indices).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff` times the monomial on `indices` (which must be sorted and
    /// free of repeats).
    pub fn add_term(&mut self, indices: Vec<usize>, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(indices).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Q) -> Form {
        if factor.is_zero() {
            return Form::zero();
        }
        Form {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((merged, sign)) = merge_sign(a, b) {
                    let c = x * y;
                    out.add_term(merged, if sign { -c } else { c });
                }
            }
        }
        out
    }

    /// Contraction with the vector `v`: `v ⌟ (x_{i_0} ∧ … ∧ x_{i_r})` =
    /// `Σ_s (-1)^s v_{i_s} x_{i_0} ∧ … ∧ x̂_{i_s} ∧ …`.
    pub fn contract(&self, v: &[Q]) -> Form {
        let mut out = Form::zero();
        for (idx, x) in &self.terms {
            for (s, &i) in idx.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(s);
                let c = x * &v[i];
                out.add_term(rest, if s % 2 == 1 { -c } else { c });
            }
        }
        out
    }
}

/// Serialized form of one term: the index set and the coefficient written
/// as an exact rational string such as `-3/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

impl From<Form> for Vec<FormTerm> {
    fn from(form: Form) -> Self {
        form.terms
            .into_iter()
            .map(|(indices, coeff)| FormTerm {
                indices,
                coeff: coeff.to_string(),
            })
            .collect()
    }
}

impl TryFrom<Vec<FormTerm>> for Form {
    type Error = String;

    fn try_from(terms: Vec<FormTerm>) -> Result<Self, String> {
        let mut form = Form::zero();
        for t in terms {
            let coeff: Q = t
                .coeff
                .parse()
                .map_err(|_| format!("bad coefficient `{}`", t.coeff))?;
            let mut sorted = t.indices.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted != t.indices {
                return Err(format!(
                    "indices {:?} are not strictly increasing",
                    t.indices
                ));
            }
            form.add_term(t.indices, coeff);
        }
        Ok(form)
    }
}

/// Concatenates two sorted index lists and sorts, returning the sorted list
/// and whether the permutation was odd; `None` if they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}
