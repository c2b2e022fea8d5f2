//! Ishida's complexes of fans and fan subsets.
//!
//! For a subset Φ of a simplicial fan the l-th complex has terms
//! `C^j = ⊕_{γ ∈ Φ(j)} Λ^{l−j} γ^⊥` and differential
//! `δ_{γ,τ}(w) = e_{γ,τ} ⌟ w`, where `e_{γ,τ}` is the primitive generator of
//! the ray of τ not in γ.
//!
//! Wedges are written in the echelon basis of γ^⊥ (see
//! [`crate::lattice::PerpBasis`]), so a basis monomial is a set of pivot
//! columns. Because the pivots of τ^⊥ are a subset of those of γ^⊥ for
//! γ ≺ τ, the matrix entry between monomials `F` (of γ) and `G` (of τ) is
//! `(−1)^s ⟨u_f, e_{γ,τ}⟩` when `G = F ∖ {f}` with f in position s, and
//! zero otherwise.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::ContractionData;
use crate::error::{Error, Result};
use crate::exterior::subsets;
use crate::lattice::{ConeId, Fan, FanSubset, SubsetKind};
use crate::linalg::{self, SparseMatrix, Q};

/// A basis element of a term: the cone γ and a wedge monomial, given by
/// the pivot columns of the echelon basis of γ^⊥ it uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermLabel {
    pub cone: ConeId,
    pub wedge: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct IshidaComplex {
    pub l: usize,
    pub rank: usize,
    /// Bases of `C^0, …, C^l`.
    pub terms: Vec<Vec<TermLabel>>,
    /// `differentials[j] : C^j → C^{j+1}` for `j < l`; rows index `C^{j+1}`.
    pub differentials: Vec<SparseMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDims {
    pub dims: Vec<usize>,
}

impl CohomologyDims {
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }
}

fn alternating_sum(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

impl IshidaComplex {
    pub fn term_dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.term_dims())
    }

    /// Whether every composite `δ^{j+1} ∘ δ^j` vanishes exactly.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// Builds Ishida's l-th complex of a subset with the primitive choice of
/// `e_{γ,τ}`.
pub fn build_ishida(phi: &FanSubset<'_>, l: usize) -> Result<IshidaComplex> {
    build_ishida_scaled(phi, l, &|_, _| Q::one())
}

/// As [`build_ishida`], with `e_{γ,τ}` replaced by `scale(γ, τ) · e_{γ,τ}`.
pub fn build_ishida_scaled(
    phi: &FanSubset<'_>,
    l: usize,
    scale: &dyn Fn(ConeId, ConeId) -> Q,
) -> Result<IshidaComplex> {
    let fan = phi.fan();
    let d = fan.rank();
    if l > d {
        return Err(Error::OutOfRange(format!(
            "form degree {l} is outside [0, {d}]"
        )));
    }
    if let Some(&bad) = phi.cones().iter().find(|&&c| !fan.cone(c).is_simplicial()) {
        return Err(Error::Dim(format!(
            "cone {:?} is not simplicial",
            fan.cone(bad).rays
        )));
    }
    let mut terms: Vec<Vec<TermLabel>> = Vec::with_capacity(l + 1);
    let mut pivots: HashMap<ConeId, (Vec<Vec<Q>>, Vec<usize>)> = HashMap::new();
    for j in 0..=l {
        let mut labels = Vec::new();
        for gamma in phi.cones_of_dim(j) {
            let basis = fan.perp_basis(gamma);
            for wedge in subsets(&basis.pivots, l - j) {
                labels.push(TermLabel { cone: gamma, wedge });
            }
            pivots.insert(
                gamma,
                (
                    basis.vectors.into_iter().map(|v| v.0).collect(),
                    basis.pivots,
                ),
            );
        }
        terms.push(labels);
    }
    let mut differentials = Vec::with_capacity(l);
    for j in 0..l {
        let index: HashMap<&TermLabel, usize> = terms[j + 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut m = SparseMatrix::new(terms[j + 1].len(), terms[j].len());
        for (col, label) in terms[j].iter().enumerate() {
            let (vectors, piv) = &pivots[&label.cone];
            for &tau in fan.cofacets(label.cone) {
                if !phi.contains(tau) {
                    continue;
                }
                let e = fan.ray(fan.extra_ray(label.cone, tau)).to_q();
                let factor = scale(label.cone, tau);
                for (s, &f) in label.wedge.iter().enumerate() {
                    let u = &vectors[piv.iter().position(|&p| p == f).expect("pivot")];
                    let pairing = linalg::dot(u, &e);
                    if pairing.is_zero() {
                        continue;
                    }
                    let mut g = label.wedge.clone();
                    g.remove(s);
                    // Monomials not made of τ-pivots have zero coordinates
                    // in Λτ^⊥, where the image is known to lie.
                    let Some(&row) = index.get(&TermLabel {
                        cone: tau,
                        wedge: g,
                    }) else {
                        continue;
                    };
                    let sign = if s % 2 == 0 { Q::one() } else { -Q::one() };
                    m.add(row, col, sign * pairing * &factor);
                }
            }
        }
        differentials.push(m);
    }
    Ok(IshidaComplex {
        l,
        rank: d,
        terms,
        differentials,
    })
}

/// `h^j = dim C^j − rank δ^j − rank δ^{j−1}` by exact elimination.
pub fn cohomology_dims(k: &IshidaComplex) -> CohomologyDims {
    let ranks: Vec<usize> = k.differentials.iter().map(|m| m.rank()).collect();
    let dims = (0..=k.l)
        .map(|j| {
            let out = if j < ranks.len() { ranks[j] } else { 0 };
            let inc = if j > 0 { ranks[j - 1] } else { 0 };
            k.terms[j].len() - out - inc
        })
        .collect();
    CohomologyDims { dims }
}

/// Splits Φ into `Φ' = Φ ∩ Star_γ` (closed upward within Φ) and
/// `Φ'' = Φ ∖ Φ'` (closed downward).
pub fn star_split<'a>(phi: &FanSubset<'a>, gamma: ConeId) -> (FanSubset<'a>, FanSubset<'a>) {
    let fan = phi.fan();
    let g = fan.cone(gamma);
    let (closed, open): (BTreeSet<ConeId>, BTreeSet<ConeId>) = phi
        .cones()
        .iter()
        .partition(|&&t| g.is_face_of(fan.cone(t)));
    (
        FanSubset::from_parts(fan, closed, SubsetKind::StarClosed),
        FanSubset::from_parts(fan, open, SubsetKind::StarOpen),
    )
}

/// `Σ_σ = {γ ∈ Σ : π̃(γ) ⊆ σ}`, the subdivision of the cone `π̃^{-1}(σ)`
/// induced by Σ.
pub fn subdivision_fan_of_cone<'a>(
    fan: &'a Fan,
    cd: &ContractionData,
    sigma: ConeId,
) -> FanSubset<'a> {
    let cones = (0..fan.n_cones())
        .filter(|&g| cd.maps_into(g, sigma))
        .collect();
    FanSubset::from_parts(fan, cones, SubsetKind::StarOpen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{contraction, Divisor};
    use crate::lattice::LatticeVector;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn p1() -> Fan {
        Fan::new(1, vec![lv(&[1]), lv(&[-1])], vec![vec![0], vec![1]]).unwrap()
    }

    fn p2() -> Fan {
        Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    fn f1() -> Fan {
        Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 1]), lv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    #[test]
    fn p1_degree_one() {
        let fan = p1();
        let k = build_ishida(&FanSubset::whole(&fan), 1).unwrap();
        assert_eq!(k.term_dims(), vec![1, 2]);
        let dense = k.differentials[0].to_dense();
        let mut entries: Vec<Q> = dense.iter().map(|r| r[0].clone()).collect();
        entries.sort();
        assert_eq!(entries, vec![-Q::one(), Q::one()]);
        assert_eq!(cohomology_dims(&k).dims, vec![0, 1]);
    }

    #[test]
    fn degree_zero_is_a_single_term() {
        let fan = p2();
        let k = build_ishida(&FanSubset::whole(&fan), 0).unwrap();
        assert_eq!(k.term_dims(), vec![1]);
        assert!(k.differentials.is_empty());
        assert_eq!(cohomology_dims(&k).dims, vec![1]);
    }

    #[test]
    fn star_of_a_ray_in_degree_one() {
        let fan = p2();
        let ray = fan.cone_id(&[0]).unwrap();
        let star = FanSubset::star(&fan, ray);
        let k = build_ishida(&star, 1).unwrap();
        assert_eq!(k.term_dims(), vec![0, 1]);
    }

    #[test]
    fn p2_degree_one() {
        let fan = p2();
        let k = build_ishida(&FanSubset::whole(&fan), 1).unwrap();
        assert!(k.is_complex());
        assert_eq!(cohomology_dims(&k).dims, vec![0, 1]);
    }

    #[test]
    fn p2_full_diagonal() {
        let fan = p2();
        for l in 0..=2 {
            let k = build_ishida(&FanSubset::whole(&fan), l).unwrap();
            assert!(k.is_complex());
            let dims = cohomology_dims(&k).dims;
            for (j, &h) in dims.iter().enumerate() {
                assert_eq!(h, usize::from(j == l), "l={l} j={j}");
            }
        }
    }

    #[test]
    fn out_of_range_degree() {
        let fan = p2();
        let err = build_ishida(&FanSubset::whole(&fan), 3).unwrap_err();
        assert_eq!(err.code(), "OUT_OF_RANGE");
    }

    #[test]
    fn faces_of_a_maximal_cone_are_acyclic() {
        let fan = p2();
        let tau = fan.cone_id(&[0, 1]).unwrap();
        let faces = FanSubset::faces_of(&fan, tau);
        for l in 0..=2 {
            let dims = cohomology_dims(&build_ishida(&faces, l).unwrap()).dims;
            let expected: Vec<usize> = (0..=l).map(|j| usize::from(j == 0 && l == 0)).collect();
            assert_eq!(dims, expected);
        }
    }

    #[test]
    fn star_split_examples() {
        let fan = p2();
        let whole = FanSubset::whole(&fan);
        let (a, b) = star_split(&whole, fan.zero_cone());
        assert_eq!(a.cones().len(), fan.n_cones());
        assert!(b.is_empty());

        let ray = fan.cone_id(&[0]).unwrap();
        let (a, b) = star_split(&whole, ray);
        assert_eq!(a.cones().len(), 3);
        assert!(a.is_star_closed() && b.is_star_open());
        let expected: BTreeSet<ConeId> = [
            fan.zero_cone(),
            fan.cone_id(&[1]).unwrap(),
            fan.cone_id(&[2]).unwrap(),
            fan.cone_id(&[1, 2]).unwrap(),
        ]
        .into();
        assert_eq!(b.cones(), &expected);
    }

    #[test]
    fn split_inside_faces_of_a_cone() {
        let fan = p2();
        let tau = fan.cone_id(&[0, 1]).unwrap();
        let faces = FanSubset::faces_of(&fan, tau);
        let (_, rest) = star_split(&faces, fan.cone_id(&[1]).unwrap());
        let facet = FanSubset::faces_of(&fan, fan.cone_id(&[0]).unwrap());
        assert_eq!(rest.cones(), facet.cones());
    }

    #[test]
    fn subdivision_for_f1_fiber() {
        let fan = f1();
        let cd = contraction(&fan, &Divisor::new(vec![1, 0, 0, 0])).unwrap();
        let positive = (0..cd.sigma_fan.n_cones())
            .find(|&c| {
                let cone = cd.sigma_fan.cone(c);
                cone.dim == 1 && cd.sigma_fan.ray(cone.rays[0]).0 == vec![1]
            })
            .unwrap();
        let sub = subdivision_fan_of_cone(&fan, &cd, positive);
        let max: Vec<Vec<usize>> = sub
            .cones_of_dim(2)
            .iter()
            .map(|&c| fan.cone(c).rays.clone())
            .collect();
        assert_eq!(max, vec![vec![0, 1], vec![0, 3]]);
        assert_eq!(sub.cones().len(), 6);

        let trivial = contraction(&fan, &Divisor::trivial(4)).unwrap();
        let all = subdivision_fan_of_cone(&fan, &trivial, trivial.sigma_fan.zero_cone());
        assert_eq!(all.cones().len(), fan.n_cones());
    }

    #[test]
    fn rescaling_does_not_change_dims() {
        let fan = f1();
        let whole = FanSubset::whole(&fan);
        for l in 0..=2 {
            let plain = cohomology_dims(&build_ishida(&whole, l).unwrap());
            // Rescale every ray and conjugate by a positive scalar per cone;
            // both keep δ∘δ = 0.
            let ray_factor = |r: usize| linalg::q(r as i64 % 3 + 1);
            let cone_factor = |c: ConeId| linalg::q(c as i64 % 4 + 1);
            let scaled = build_ishida_scaled(&whole, l, &|g, t| {
                ray_factor(fan.extra_ray(g, t)) * cone_factor(t) / cone_factor(g)
            })
            .unwrap();
            assert!(scaled.is_complex());
            assert_eq!(cohomology_dims(&scaled), plain);
        }
    }
}
