//! Graded pieces of the Chow ring of a simplicial fan or cone subdivision.
//!
//! In degree k the ring is spanned by `D_γ`, γ ∈ Φ(k), subject to one
//! relation `Σ_γ ⟨m, e_{γ',γ}⟩ D_γ = 0` per cone γ' ∈ Φ(k−1) and basis
//! covector m of `M ∩ γ'^⊥`, the sum running over the cofacets γ of γ'
//! in Φ.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::divisor::ContractionData;
use crate::ishida::subdivision_fan_of_cone;
use crate::lattice::{integral_perp_basis, ConeId, Fan, FanSubset};
use crate::linalg::{self, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChowPresentation {
    pub degree: usize,
    /// Cones γ of dimension k, in lexicographic order of ray sets.
    pub generators: Vec<ConeId>,
    /// One row per pair (γ', m).
    pub relations: Vec<Vec<Q>>,
}

pub fn chow_presentation(phi: &FanSubset<'_>, k: usize) -> ChowPresentation {
    let fan = phi.fan();
    let generators = phi.cones_of_dim(k);
    let mut relations = Vec::new();
    if k > 0 {
        for gp in phi.cones_of_dim(k - 1) {
            let cofacets: Vec<(usize, usize)> = fan
                .cofacets(gp)
                .iter()
                .filter(|&&g| phi.contains(g))
                .map(|&g| {
                    let col = generators
                        .binary_search(&g)
                        .expect("cofacet is a generator");
                    (col, fan.extra_ray(gp, g))
                })
                .collect();
            if cofacets.is_empty() {
                continue;
            }
            for m in integral_perp_basis(fan, gp) {
                let mut row = vec![Q::zero(); generators.len()];
                for &(col, ray) in &cofacets {
                    row[col] = linalg::q(linalg::dot_i64(&m, &fan.ray(ray).0));
                }
                if row.iter().any(|x| !x.is_zero()) {
                    relations.push(row);
                }
            }
        }
    }
    ChowPresentation {
        degree: k,
        generators,
        relations,
    }
}

/// `dim_Q A(Φ)_k = #Φ(k) − rank(relations)`.
pub fn chow_dim(phi: &FanSubset<'_>, k: usize) -> usize {
    let p = chow_presentation(phi, k);
    p.generators.len() - linalg::rank_dense(&p.relations, p.generators.len())
}

/// Cones whose classes form a basis of `A(Φ)_k`.
///
/// Elimination visits generator columns from last to first, so the pivot
/// columns are the latest possible ones and the remaining generators,
/// returned here, form the lexicographically first basis of the quotient.
pub fn chow_basis(phi: &FanSubset<'_>, k: usize) -> Vec<ConeId> {
    let p = chow_presentation(phi, k);
    let order: Vec<usize> = (0..p.generators.len()).rev().collect();
    let mut rows = p.relations;
    let pivots = linalg::rref_in_order(&mut rows, &order);
    (0..p.generators.len())
        .filter(|c| !pivots.contains(c))
        .map(|c| p.generators[c])
        .collect()
}

/// `dim A^σ(Σ)_k`, computed as the Chow group of the subdivision Σ_σ of
/// `π̃^{-1}(σ)`.
pub fn chow_sigma_dim(fan: &Fan, cd: &ContractionData, sigma: ConeId, k: usize) -> usize {
    chow_dim(&subdivision_fan_of_cone(fan, cd, sigma), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{contraction, Divisor};
    use crate::lattice::LatticeVector;
    use std::collections::BTreeSet;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
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

    fn half_plane(fan: &Fan) -> FanSubset<'_> {
        let cones: BTreeSet<ConeId> = [vec![], vec![0], vec![1], vec![3], vec![0, 1], vec![0, 3]]
            .iter()
            .map(|r| fan.cone_id(r).unwrap())
            .collect();
        FanSubset::new(fan, cones, crate::lattice::SubsetKind::StarOpen).unwrap()
    }

    #[test]
    fn p2_is_one_in_each_degree() {
        let fan = p2();
        let whole = FanSubset::whole(&fan);
        let dims: Vec<usize> = (0..=3).map(|k| chow_dim(&whole, k)).collect();
        assert_eq!(dims, vec![1, 1, 1, 0]);
    }

    #[test]
    fn p2_basis() {
        let fan = p2();
        let whole = FanSubset::whole(&fan);
        assert_eq!(chow_basis(&whole, 0), vec![fan.zero_cone()]);
        assert_eq!(chow_basis(&whole, 1), vec![fan.cone_id(&[0]).unwrap()]);
        assert_eq!(chow_basis(&whole, 2).len(), 1);
    }

    #[test]
    fn half_plane_of_f1() {
        let fan = f1();
        let sub = half_plane(&fan);
        assert_eq!(chow_dim(&sub, 0), 1);
        assert_eq!(chow_dim(&sub, 1), 1);
        let basis = chow_basis(&sub, 1);
        assert_eq!(basis.len(), 1);
        let ray = fan.cone(basis[0]).rays[0];
        assert!(ray == 1 || ray == 3);
    }

    #[test]
    fn complete_fans_match_the_counting_formula() {
        for fan in [p2(), f1()] {
            let whole = FanSubset::whole(&fan);
            let d = fan.rank() as i64;
            for k in 0..=fan.rank() {
                let expected: i64 = (0..=k)
                    .map(|j| {
                        let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                        sign * linalg::binomial(d - j as i64, (k - j) as i64)
                            * fan.cones_of_dim(j).len() as i64
                    })
                    .sum();
                assert_eq!(chow_dim(&whole, k) as i64, expected);
            }
        }
    }

    #[test]
    fn sigma_dims_for_f1_fiber() {
        let fan = f1();
        let cd = contraction(&fan, &Divisor::new(vec![1, 0, 0, 0])).unwrap();
        for sigma in 0..cd.sigma_fan.n_cones() {
            assert_eq!(chow_sigma_dim(&fan, &cd, sigma, 0), 1);
        }
        let positive = (0..cd.sigma_fan.n_cones())
            .find(|&c| {
                let cone = cd.sigma_fan.cone(c);
                cone.dim == 1 && cd.sigma_fan.ray(cone.rays[0]).0 == vec![1]
            })
            .unwrap();
        assert_eq!(chow_sigma_dim(&fan, &cd, positive, 1), 1);

        let trivial = contraction(&fan, &Divisor::trivial(4)).unwrap();
        let zero = trivial.sigma_fan.zero_cone();
        let dims: Vec<usize> = (0..=2)
            .map(|k| chow_sigma_dim(&fan, &trivial, zero, k))
            .collect();
        assert_eq!(dims, vec![1, 2, 1]);
    }
}
