use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{LatticeVector, RationalCovector};
use crate::error::{Error, Result};
use crate::exterior::subsets;
use crate::linalg::{self, q, Q};

pub type ConeId = usize;

/// A cone of a fan, given by the sorted indices of its rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cone {
    pub rays: Vec<usize>,
    pub dim: usize,
}

impl Cone {
    pub fn contains_ray(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }

    /// Whether `self` is a face of `other` (not necessarily proper).
    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains_ray(*r))
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim == self.rays.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
    max_cones: Vec<ConeId>,
    index: HashMap<Vec<usize>, ConeId>,
    by_dim: Vec<Vec<ConeId>>,
    cofacets: Vec<Vec<ConeId>>,
}

impl Fan {
    /// Builds a fan from its maximal cones, adding every face (every subset of
    /// the rays of a maximal cone). Only structural consistency is checked
    /// here; geometric validity is the job of [`super::fan_validate`].
    pub fn new(rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        check_rays(rank, &rays)?;
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &max_cones {
            let sorted = sorted_cone(cone, rays.len())?;
            for r in 0..=sorted.len() {
                all.extend(subsets(&sorted, r));
            }
        }
        if all.is_empty() {
            all.insert(Vec::new());
        }
        Ok(Fan::assemble(rank, rays, all.into_iter().collect()))
    }

    /// Builds a fan from an explicit list of all its cones. Used for fans
    /// whose cones need not be simplicial, such as normal fans of polytopes.
    pub fn from_cones(
        rank: usize,
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Fan> {
        check_rays(rank, &rays)?;
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &cones {
            all.insert(sorted_cone(cone, rays.len())?);
        }
        all.insert(Vec::new());
        Ok(Fan::assemble(rank, rays, all.into_iter().collect()))
    }

    fn assemble(rank: usize, rays: Vec<LatticeVector>, ray_sets: Vec<Vec<usize>>) -> Fan {
        let mut cones: Vec<Cone> = ray_sets
            .into_iter()
            .map(|r| {
                let gens: Vec<Vec<Q>> = r.iter().map(|&i| rays[i].to_q()).collect();
                let dim = linalg::rank_dense(&gens, rank);
                Cone { rays: r, dim }
            })
            .collect();
        cones.sort_by(|a, b| (a.dim, a.rays.len(), &a.rays).cmp(&(b.dim, b.rays.len(), &b.rays)));
        let index: HashMap<Vec<usize>, ConeId> = cones
            .iter()
            .enumerate()
            .map(|(i, c)| (c.rays.clone(), i))
            .collect();
        let top = cones.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        for (i, c) in cones.iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        let mut cofacets = vec![Vec::new(); cones.len()];
        for (i, c) in cones.iter().enumerate() {
            if c.dim + 1 > top {
                continue;
            }
            for &j in &by_dim[c.dim + 1] {
                if c.is_face_of(&cones[j]) {
                    cofacets[i].push(j);
                }
            }
        }
        let max_cones: Vec<ConeId> = (0..cones.len())
            .filter(|&i| {
                !cones.iter().enumerate().any(|(j, other)| {
                    j != i && other.rays.len() > cones[i].rays.len() && cones[i].is_face_of(other)
                })
            })
            .collect();
        Fan {
            rank,
            rays,
            cones,
            max_cones,
            index,
            by_dim,
            cofacets,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    pub fn n_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_id(&self, rays: &[usize]) -> Option<ConeId> {
        let mut sorted = rays.to_vec();
        sorted.sort_unstable();
        self.index.get(&sorted).copied()
    }

    pub fn zero_cone(&self) -> ConeId {
        self.index[&Vec::new()]
    }

    pub fn max_cones(&self) -> &[ConeId] {
        &self.max_cones
    }

    /// Highest dimension of a cone in the fan.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn cones_of_dim(&self, k: usize) -> &[ConeId] {
        self.by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Cones having `id` as a facet.
    pub fn cofacets(&self, id: ConeId) -> &[ConeId] {
        &self.cofacets[id]
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.is_simplicial())
    }

    /// Generators of a cone as rational vectors.
    pub fn generators(&self, id: ConeId) -> Vec<Vec<Q>> {
        self.cones[id]
            .rays
            .iter()
            .map(|&i| self.rays[i].to_q())
            .collect()
    }

    /// For a facet `gamma` of a simplicial cone `tau`, the unique ray of
    /// `tau` not in `gamma`.
    pub fn extra_ray(&self, gamma: ConeId, tau: ConeId) -> usize {
        let g = &self.cones[gamma];
        *self.cones[tau]
            .rays
            .iter()
            .find(|r| !g.contains_ray(**r))
            .expect("gamma must be a proper face of tau")
    }

    /// Whether the cone `id` contains the rational vector `v`.
    pub fn cone_contains(&self, id: ConeId, v: &[Q]) -> bool {
        let cone = &self.cones[id];
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if cone.dim == 0 {
            return false;
        }
        if cone.is_simplicial() {
            return simplicial_contains(&self.generators(id), v, self.rank);
        }
        subsets(&cone.rays, cone.dim).into_iter().any(|sub| {
            let gens: Vec<Vec<Q>> = sub.iter().map(|&i| self.rays[i].to_q()).collect();
            linalg::rank_dense(&gens, self.rank) == cone.dim
                && simplicial_contains(&gens, v, self.rank)
        })
    }
}

fn check_rays(rank: usize, rays: &[LatticeVector]) -> Result<()> {
    for (i, r) in rays.iter().enumerate() {
        if r.rank() != rank {
            return Err(Error::Parse(format!(
                "ray {i} has {} coordinates, expected {rank}",
                r.rank()
            )));
        }
        if r.is_zero() {
            return Err(Error::Parse(format!("ray {i} is the zero vector")));
        }
    }
    Ok(())
}

fn sorted_cone(cone: &[usize], n_rays: usize) -> Result<Vec<usize>> {
    let mut sorted = cone.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&i| i >= n_rays) {
        return Err(Error::Parse(format!(
            "cone {cone:?} refers to ray {bad}, but there are only {n_rays} rays"
        )));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse(format!("cone {cone:?} repeats a ray")));
    }
    Ok(sorted)
}

/// `v ∈ cone(gens)` for linearly independent `gens`.
fn simplicial_contains(gens: &[Vec<Q>], v: &[Q], rank: usize) -> bool {
    // Solve Σ λ_j g_j = v, i.e. G^T λ = v.
    let k = gens.len();
    let system: Vec<Vec<Q>> = (0..rank)
        .map(|c| gens.iter().map(|g| g[c].clone()).collect())
        .collect();
    match linalg::solve_any(&system, v, k) {
        Some(lambda) => lambda.iter().all(|x| !x.is_negative()),
        None => false,
    }
}

/// Canonical basis of γ^⊥ ⊂ M_Q in reduced row-echelon form. The pivot
/// columns make coordinates cheap: the coordinates of `m ∈ γ^⊥` in this
/// basis are the entries of `m` at the pivot columns, and likewise the
/// coordinates of a wedge in the monomial basis are its Plücker coordinates
/// on subsets of pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerpBasis {
    pub vectors: Vec<RationalCovector>,
    pub pivots: Vec<usize>,
}

impl Fan {
    pub fn perp_basis(&self, id: ConeId) -> PerpBasis {
        let (vectors, pivots) = linalg::kernel(&self.generators(id), self.rank);
        PerpBasis {
            vectors: vectors.into_iter().map(RationalCovector).collect(),
            pivots,
        }
    }
}

/// Q-basis of the annihilator of γ in M_Q, in reduced row-echelon form.
pub fn cone_perp_basis(fan: &Fan, gamma: ConeId) -> Vec<RationalCovector> {
    fan.perp_basis(gamma).vectors
}

/// Z-basis (Hermite normal form) of M ∩ γ^⊥.
pub fn integral_perp_basis(fan: &Fan, gamma: ConeId) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<BigInt>> = fan.cones[gamma]
        .rays
        .iter()
        .map(|&i| fan.rays[i].0.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    linalg::integer_kernel(&rows, fan.rank)
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_i64().expect("lattice basis fits in i64"))
                .collect()
        })
        .collect()
}

/// The covector `m_τ^i`: dual to ray `i` within the maximal cone `τ`, and zero
/// when ray `i` is not in `τ`.
pub fn dual_covector(fan: &Fan, tau: ConeId, ray: usize) -> Result<RationalCovector> {
    let cone = &fan.cones[tau];
    if cone.dim != fan.rank || !cone.is_simplicial() {
        return Err(Error::Dim(format!(
            "cone {:?} is not a maximal simplicial cone of a rank {} fan",
            cone.rays, fan.rank
        )));
    }
    let Some(pos) = cone.rays.iter().position(|&r| r == ray) else {
        return Ok(RationalCovector::zero(fan.rank));
    };
    let gens = fan.generators(tau);
    let rhs: Vec<Q> = (0..gens.len()).map(|j| q((j == pos) as i64)).collect();
    let m = linalg::solve(&gens, &rhs).expect("simplicial cone generators are independent");
    Ok(RationalCovector(m))
}

/// The star of γ as a fan in the quotient lattice N/N_γ.
#[derive(Debug, Clone)]
pub struct StarQuotient {
    pub fan: Fan,
    /// Rows form a Z-basis of M ∩ γ^⊥; the quotient map is `v ↦ (⟨row, v⟩)`.
    pub projection: Vec<Vec<i64>>,
    /// Maps every cone τ ⊇ γ of the parent fan to its image cone.
    pub cone_map: BTreeMap<ConeId, ConeId>,
}

pub fn quotient_star(fan: &Fan, gamma: ConeId) -> Result<StarQuotient> {
    let projection = integral_perp_basis(fan, gamma);
    let project = |v: &LatticeVector| -> LatticeVector {
        LatticeVector(
            projection
                .iter()
                .map(|row| linalg::dot_i64(row, &v.0))
                .collect(),
        )
    };
    let g = fan.cone(gamma).clone();
    let star: Vec<ConeId> = (0..fan.n_cones())
        .filter(|&t| g.is_face_of(fan.cone(t)))
        .collect();
    let mut new_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut new_rays: Vec<LatticeVector> = Vec::new();
    for &t in &star {
        for &r in &fan.cone(t).rays {
            if g.contains_ray(r) || new_index.contains_key(&r) {
                continue;
            }
            let image = project(fan.ray(r)).primitive();
            if let Some(existing) = new_rays.iter().position(|x| *x == image) {
                new_index.insert(r, existing);
            } else {
                new_index.insert(r, new_rays.len());
                new_rays.push(image);
            }
        }
    }
    let image_of = |t: ConeId| -> Vec<usize> {
        let mut v: Vec<usize> = fan
            .cone(t)
            .rays
            .iter()
            .filter(|r| !g.contains_ray(**r))
            .map(|r| new_index[r])
            .collect();
        v.sort_unstable();
        v
    };
    let max_images: Vec<Vec<usize>> = star
        .iter()
        .filter(|&&t| fan.max_cones().contains(&t))
        .map(|&t| image_of(t))
        .collect();
    let quotient = Fan::new(projection.len(), new_rays, max_images)?;
    let cone_map = star
        .iter()
        .map(|&t| {
            let id = quotient
                .cone_id(&image_of(t))
                .expect("image of a star cone is a cone of the quotient");
            (t, id)
        })
        .collect();
    Ok(StarQuotient {
        fan: quotient,
        projection,
        cone_map,
    })
}

/// The unique minimal cone containing every vector of `vectors` (the zero
/// cone for an empty list).
pub fn minimal_containing_cone(fan: &Fan, vectors: &[Vec<Q>]) -> Result<ConeId> {
    for k in 0..=fan.dim() {
        for &id in fan.cones_of_dim(k) {
            if vectors.iter().all(|v| fan.cone_contains(id, v)) {
                return Ok(id);
            }
        }
    }
    Err(Error::NotInSupport)
}

/// Stellar subdivision of `fan` at the primitive vector `v`.
pub fn star_subdivide(fan: &Fan, v: &LatticeVector) -> Result<Fan> {
    if !v.is_primitive() {
        return Err(Error::Dim(format!(
            "subdivision vector {v} is not primitive"
        )));
    }
    if fan.rays().contains(v) {
        return Err(Error::Dim(format!("{v} is already a ray of the fan")));
    }
    let tau = minimal_containing_cone(fan, &[v.to_q()])?;
    let tau_cone = fan.cone(tau).clone();
    let new_ray = fan.n_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(v.clone());
    let mut max_cones = Vec::new();
    for &sigma in fan.max_cones() {
        let s = fan.cone(sigma);
        if !tau_cone.is_face_of(s) {
            max_cones.push(s.rays.clone());
            continue;
        }
        for &r in &tau_cone.rays {
            let mut c: Vec<usize> = s.rays.iter().copied().filter(|&x| x != r).collect();
            c.push(new_ray);
            max_cones.push(c);
        }
    }
    Fan::new(fan.rank(), rays, max_cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;

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

    fn half(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn face_closure_counts() {
        let fan = p2();
        assert_eq!(fan.cones_of_dim(0).len(), 1);
        assert_eq!(fan.cones_of_dim(1).len(), 3);
        assert_eq!(fan.cones_of_dim(2).len(), 3);
        assert_eq!(fan.max_cones().len(), 3);
        assert_eq!(fan.cofacets(fan.zero_cone()).len(), 3);
    }

    #[test]
    fn perp_basis_examples() {
        let fan = p2();
        assert_eq!(
            cone_perp_basis(&fan, fan.zero_cone()),
            vec![
                RationalCovector(qvec(&[1, 0])),
                RationalCovector(qvec(&[0, 1]))
            ]
        );
        let full = fan.cone_id(&[0, 1]).unwrap();
        assert!(cone_perp_basis(&fan, full).is_empty());

        let f = Fan::new(2, vec![lv(&[1, 2]), lv(&[1, 0])], vec![vec![0, 1]]).unwrap();
        let ray = f.cone_id(&[0]).unwrap();
        assert_eq!(
            cone_perp_basis(&f, ray),
            vec![RationalCovector(vec![q(1), half(-1, 2)])]
        );
    }

    #[test]
    fn dual_covector_examples() {
        let fan = p2();
        let sigma = fan.cone_id(&[0, 1]).unwrap();
        assert_eq!(
            dual_covector(&fan, sigma, 0).unwrap(),
            RationalCovector(qvec(&[1, 0]))
        );
        assert_eq!(
            dual_covector(&fan, sigma, 2).unwrap(),
            RationalCovector(qvec(&[0, 0]))
        );
        let ray = fan.cone_id(&[0]).unwrap();
        assert!(matches!(dual_covector(&fan, ray, 0), Err(Error::Dim(_))));

        let f = Fan::new(2, vec![lv(&[1, 0]), lv(&[1, 2])], vec![vec![0, 1]]).unwrap();
        let tau = f.cone_id(&[0, 1]).unwrap();
        assert_eq!(
            dual_covector(&f, tau, 0).unwrap(),
            RationalCovector(vec![q(1), half(-1, 2)])
        );
        assert_eq!(
            dual_covector(&f, tau, 1).unwrap(),
            RationalCovector(vec![q(0), half(1, 2)])
        );
    }

    #[test]
    fn quotient_star_examples() {
        let fan = p2();
        let whole = quotient_star(&fan, fan.zero_cone()).unwrap();
        assert_eq!(whole.fan.n_cones(), fan.n_cones());
        assert_eq!(whole.fan.rank(), 2);

        let ray = fan.cone_id(&[0]).unwrap();
        let star = quotient_star(&fan, ray).unwrap();
        assert_eq!(star.fan.rank(), 1);
        assert_eq!(star.fan.n_rays(), 2);
        let mut rays: Vec<i64> = star.fan.rays().iter().map(|r| r.0[0]).collect();
        rays.sort();
        assert_eq!(rays, vec![-1, 1]);
        assert_eq!(star.cone_map.len(), 3);

        let top = fan.cone_id(&[1, 2]).unwrap();
        let point = quotient_star(&fan, top).unwrap();
        assert_eq!(point.fan.rank(), 0);
        assert_eq!(point.fan.n_cones(), 1);
    }

    #[test]
    fn minimal_cone_examples() {
        let p1 = Fan::new(1, vec![lv(&[1]), lv(&[-1])], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            minimal_containing_cone(&p1, &[qvec(&[0])]).unwrap(),
            p1.zero_cone()
        );
        assert_eq!(
            minimal_containing_cone(&p1, &[qvec(&[5])]).unwrap(),
            p1.cone_id(&[0]).unwrap()
        );
        let fan = p2();
        assert_eq!(
            minimal_containing_cone(&fan, &[qvec(&[1, 1])]).unwrap(),
            fan.cone_id(&[0, 1]).unwrap()
        );
        let partial = Fan::new(1, vec![lv(&[1])], vec![vec![0]]).unwrap();
        assert!(matches!(
            minimal_containing_cone(&partial, &[qvec(&[-1])]),
            Err(Error::NotInSupport)
        ));
    }

    #[test]
    fn stellar_subdivision_of_p2() {
        let fan = p2();
        let sub = star_subdivide(&fan, &lv(&[1, 1])).unwrap();
        assert_eq!(sub.n_rays(), 4);
        assert_eq!(sub.max_cones().len(), 4);
        assert!(star_subdivide(&fan, &lv(&[2, 2])).is_err());
    }
}
