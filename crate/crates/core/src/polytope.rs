//! Divisor polytopes, their face lattices and normal fans.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::subsets;
use crate::lattice::{ConeId, Fan, LatticeVector};
use crate::linalg::{self, q, Q};

/// The half-space `⟨m, normal⟩ ≥ offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Inequality {
    pub fn slack(&self, m: &[i64]) -> i64 {
        linalg::dot_i64(&self.normal, m) - self.offset
    }

    fn slack_q(&self, m: &[Q]) -> Q {
        linalg::dot_int(m, &self.normal) - q(self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    rank: usize,
    inequalities: Vec<Inequality>,
    vertices: Vec<Vec<Q>>,
    affine_dim: Option<usize>,
}

impl Polytope {
    /// Builds the polytope from its H-representation and computes its
    /// vertices. Vertices are found by solving every `rank`-subset of
    /// inequalities with independent normals and keeping feasible solutions.
    pub fn from_inequalities(rank: usize, inequalities: Vec<Inequality>) -> Result<Polytope> {
        if inequalities.iter().any(|i| i.normal.len() != rank) {
            return Err(Error::Dim("inequality normal has the wrong length".into()));
        }
        if has_recession(rank, &inequalities) {
            return Err(Error::Unbounded);
        }
        let idx: Vec<usize> = (0..inequalities.len()).collect();
        let mut vertices: BTreeSet<Vec<Q>> = BTreeSet::new();
        for tight in subsets(&idx, rank) {
            let a: Vec<Vec<Q>> = tight
                .iter()
                .map(|&i| linalg::qvec(&inequalities[i].normal))
                .collect();
            let b: Vec<Q> = tight.iter().map(|&i| q(inequalities[i].offset)).collect();
            let Some(x) = linalg::solve(&a, &b) else {
                continue;
            };
            if inequalities.iter().all(|h| !h.slack_q(&x).is_negative()) {
                vertices.insert(x);
            }
        }
        let vertices: Vec<Vec<Q>> = vertices.into_iter().collect();
        let affine_dim = affine_dim(&vertices, rank);
        Ok(Polytope {
            rank,
            inequalities,
            vertices,
            affine_dim,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull; `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_dim
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.inequalities.iter().all(|h| h.slack(m) >= 0)
    }

    /// Indices of the inequalities tight at `m`.
    pub fn tight_set(&self, m: &[i64]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&i| self.inequalities[i].slack(m) == 0)
            .collect()
    }

    fn tight_at_vertex(&self, v: &[Q]) -> BTreeSet<usize> {
        (0..self.inequalities.len())
            .filter(|&i| self.inequalities[i].slack_q(v).is_zero())
            .collect()
    }

    /// All lattice points, in lexicographic order, by scanning the bounding
    /// box of the vertices.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let bounds: Vec<(i64, i64)> = (0..self.rank)
            .map(|c| {
                let lo = self.vertices.iter().map(|v| v[c].floor()).min().unwrap();
                let hi = self.vertices.iter().map(|v| v[c].ceil()).max().unwrap();
                (
                    lo.to_integer().to_i64().expect("bounded coordinates"),
                    hi.to_integer().to_i64().expect("bounded coordinates"),
                )
            })
            .collect();
        let mut points = Vec::new();
        let mut current: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            if self.contains(&current) {
                points.push(current.clone());
            }
            let mut c = self.rank;
            loop {
                if c == 0 {
                    return points;
                }
                c -= 1;
                if current[c] < bounds[c].1 {
                    current[c] += 1;
                    for (x, b) in current[c + 1..].iter_mut().zip(&bounds[c + 1..]) {
                        *x = b.0;
                    }
                    break;
                }
            }
        }
    }
}

fn affine_dim(vertices: &[Vec<Q>], rank: usize) -> Option<usize> {
    let first = vertices.first()?;
    let diffs: Vec<Vec<Q>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(linalg::rank_dense(&diffs, rank))
}

/// Whether `{x : ⟨normal_i, x⟩ ≥ 0 ∀i}` contains a nonzero vector.
fn has_recession(rank: usize, inequalities: &[Inequality]) -> bool {
    let normals: Vec<Vec<Q>> = inequalities
        .iter()
        .map(|h| linalg::qvec(&h.normal))
        .collect();
    if linalg::rank_dense(&normals, rank) < rank {
        return true;
    }
    if rank == 0 {
        return false;
    }
    let idx: Vec<usize> = (0..normals.len()).collect();
    for tight in subsets(&idx, rank - 1) {
        let rows: Vec<Vec<Q>> = tight.iter().map(|&i| normals[i].clone()).collect();
        let (kernel, _) = linalg::kernel(&rows, rank);
        if kernel.len() != 1 {
            continue;
        }
        for sign in [1, -1] {
            let r: Vec<Q> = kernel[0].iter().map(|x| x * q(sign)).collect();
            if normals.iter().all(|n| !linalg::dot(n, &r).is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Δ_D = {m : ⟨m, e_i⟩ ≥ −a_i for all rays e_i}.
pub fn divisor_polytope(fan: &Fan, coeffs: &[i64]) -> Result<Polytope> {
    if coeffs.len() != fan.n_rays() {
        return Err(Error::DimMismatch {
            expected: fan.n_rays(),
            got: coeffs.len(),
        });
    }
    let inequalities = fan
        .rays()
        .iter()
        .zip(coeffs)
        .map(|(e, &a)| Inequality {
            normal: e.0.clone(),
            offset: -a,
        })
        .collect();
    Polytope::from_inequalities(fan.rank(), inequalities)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFace {
    pub dim: usize,
    /// Inequalities tight on the whole face.
    pub tight_set: Vec<usize>,
    /// Indices into [`Polytope::vertices`].
    pub vertices: Vec<usize>,
    /// Lattice points in the relative interior, lexicographically ordered.
    pub interior_points: Vec<Vec<i64>>,
    /// `l*` of the face.
    pub interior_count: usize,
}

/// All nonempty faces of `poly` (the polytope itself included), ordered by
/// dimension and then by vertex set, with relative-interior lattice points.
///
/// Faces are the closure of the tight-vertex sets of the inequalities under
/// intersection; a lattice point belongs to the relative interior of the
/// face whose tight set equals the set of inequalities tight at the point.
pub fn face_lattice(poly: &Polytope) -> Vec<PolytopeFace> {
    if poly.is_empty() {
        return Vec::new();
    }
    let n = poly.vertices.len();
    let vertex_tight: Vec<BTreeSet<usize>> = poly
        .vertices
        .iter()
        .map(|v| poly.tight_at_vertex(v))
        .collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert((0..n).collect());
    for i in 0..poly.inequalities.len() {
        let f: Vec<usize> = (0..n).filter(|&v| vertex_tight[v].contains(&i)).collect();
        if !f.is_empty() {
            faces.insert(f);
        }
    }
    loop {
        let list: Vec<Vec<usize>> = faces.iter().cloned().collect();
        let mut added = false;
        for (a, x) in list.iter().enumerate() {
            for y in &list[a + 1..] {
                let z: Vec<usize> = x.iter().copied().filter(|v| y.contains(v)).collect();
                if !z.is_empty() && faces.insert(z) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut out: Vec<PolytopeFace> = faces
        .into_iter()
        .map(|verts| {
            let tight: BTreeSet<usize> = verts
                .iter()
                .map(|&v| vertex_tight[v].clone())
                .reduce(|a, b| a.intersection(&b).copied().collect())
                .unwrap_or_default();
            let pts: Vec<Vec<Q>> = verts.iter().map(|&v| poly.vertices[v].clone()).collect();
            PolytopeFace {
                dim: affine_dim(&pts, poly.rank).unwrap_or(0),
                tight_set: tight.into_iter().collect(),
                vertices: verts,
                interior_points: Vec::new(),
                interior_count: 0,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let by_tight: BTreeMap<Vec<usize>, usize> = out
        .iter()
        .enumerate()
        .map(|(i, f)| (f.tight_set.clone(), i))
        .collect();
    for p in poly.lattice_points() {
        let t = poly.tight_set(&p);
        let idx = by_tight[&t];
        out[idx].interior_points.push(p);
    }
    for f in &mut out {
        f.interior_count = f.interior_points.len();
    }
    out
}

/// Normal fan of a full-dimensional polytope with the face ↔ cone bijection.
#[derive(Debug, Clone)]
pub struct NormalFan {
    pub fan: Fan,
    /// Cone of the fan for each face (same indexing as the face list).
    pub face_to_cone: Vec<ConeId>,
    /// Face index for each cone of the fan.
    pub cone_to_face: Vec<usize>,
}

/// Builds the inner normal fan of `poly`, which must be full dimensional in
/// a lattice of rank `rank`. Its rays are the primitive inner facet normals
/// and the cone of a face is spanned by the normals of the facets
/// containing it, so a face of dimension `j` maps to a cone of dimension
/// `rank − j`.
pub fn normal_fan(poly: &Polytope, faces: &[PolytopeFace], rank: usize) -> Result<NormalFan> {
    let got = poly.affine_dim().unwrap_or(0);
    if poly.is_empty() || poly.rank() != rank || got != rank {
        return Err(Error::DimMismatch {
            expected: rank,
            got,
        });
    }
    let facets: Vec<usize> = (0..faces.len())
        .filter(|&i| rank > 0 && faces[i].dim == rank - 1)
        .collect();
    let rays: Vec<LatticeVector> = facets
        .iter()
        .map(|&f| inner_normal(poly, &faces[f]))
        .collect();
    let cones_of_face: Vec<Vec<usize>> = faces
        .iter()
        .map(|face| {
            facets
                .iter()
                .enumerate()
                .filter(|(_, &f)| face.vertices.iter().all(|v| faces[f].vertices.contains(v)))
                .map(|(r, _)| r)
                .collect()
        })
        .collect();
    let fan = Fan::from_cones(rank, rays, cones_of_face.clone())?;
    let face_to_cone: Vec<ConeId> = cones_of_face
        .iter()
        .map(|c| fan.cone_id(c).expect("cone was inserted"))
        .collect();
    let mut cone_to_face = vec![usize::MAX; fan.n_cones()];
    for (face, &cone) in face_to_cone.iter().enumerate() {
        cone_to_face[cone] = face;
    }
    debug_assert!(cone_to_face.iter().all(|&f| f != usize::MAX));
    Ok(NormalFan {
        fan,
        face_to_cone,
        cone_to_face,
    })
}

fn inner_normal(poly: &Polytope, facet: &PolytopeFace) -> LatticeVector {
    let v0 = &poly.vertices[facet.vertices[0]];
    let diffs: Vec<Vec<Q>> = facet.vertices[1..]
        .iter()
        .map(|&v| {
            poly.vertices[v]
                .iter()
                .zip(v0)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    let (kernel, _) = linalg::kernel(&diffs, poly.rank);
    debug_assert_eq!(kernel.len(), 1);
    let n: Vec<BigInt> = linalg::primitive_integer(&kernel[0]);
    let nq: Vec<Q> = n.iter().map(|x| Q::from_integer(x.clone())).collect();
    let above = poly.vertices.iter().any(|w| {
        let d: Vec<Q> = w.iter().zip(v0).map(|(a, b)| a - b).collect();
        linalg::dot(&d, &nq).is_positive()
    });
    let sign: i64 = if above { 1 } else { -1 };
    let g = n.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    debug_assert!(g == BigInt::from(1));
    LatticeVector(
        n.iter()
            .map(|x| sign * x.to_i64().expect("normal fits in i64"))
            .collect(),
    )
}
