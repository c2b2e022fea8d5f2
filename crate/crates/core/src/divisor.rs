//! Torus-invariant divisors: support functions, positivity and the
//! canonical contraction defined by a semiample divisor.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{minimal_containing_cone, ConeId, Fan, RationalCovector};
use crate::linalg::{self, q, Q};
use crate::polytope::{
    divisor_polytope, face_lattice, normal_fan, Inequality, Polytope, PolytopeFace,
};

/// `D = Σ a_i D_i`, coefficients aligned with the rays of the fan.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Divisor {
    pub coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor { coeffs }
    }

    pub fn trivial(n: usize) -> Self {
        Divisor { coeffs: vec![0; n] }
    }

    /// `D + div(χ^m)`, i.e. `a_i ↦ a_i + ⟨m, e_i⟩`.
    pub fn shifted(&self, fan: &Fan, m: &[i64]) -> Divisor {
        Divisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(fan.rays())
                .map(|(a, e)| a + linalg::dot_i64(m, &e.0))
                .collect(),
        }
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.n_rays() {
            return Err(Error::DimMismatch {
                expected: fan.n_rays(),
                got: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// The local linear forms `m_σ` of ψ_D, one per maximal cone, with
/// `ψ_D(v) = ⟨m_σ, v⟩` on σ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportFunction {
    pub pieces: Vec<(ConeId, RationalCovector)>,
}

impl SupportFunction {
    pub fn get(&self, sigma: ConeId) -> Option<&RationalCovector> {
        self.pieces
            .iter()
            .find(|(s, _)| *s == sigma)
            .map(|(_, m)| m)
    }
}

/// Solves `⟨m_σ, e_i⟩ = −a_i` for `e_i ∈ σ` on each maximal cone.
pub fn support_function(fan: &Fan, d: &Divisor) -> Result<SupportFunction> {
    d.check(fan)?;
    let mut pieces = Vec::with_capacity(fan.max_cones().len());
    for &sigma in fan.max_cones() {
        let cone = fan.cone(sigma);
        if cone.dim != fan.rank() || !cone.is_simplicial() {
            return Err(Error::Dim(format!(
                "maximal cone {:?} is not full-dimensional simplicial",
                cone.rays
            )));
        }
        let rhs: Vec<Q> = cone.rays.iter().map(|&i| q(-d.coeffs[i])).collect();
        let m = linalg::solve(&fan.generators(sigma), &rhs).expect("independent generators");
        pieces.push((sigma, RationalCovector(m)));
    }
    Ok(SupportFunction { pieces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub cartier: bool,
    pub semiample: bool,
    pub iitaka_dim: Option<usize>,
}

/// Cartier, semiample (convex ψ_D) and, when semiample, the
/// Kodaira–Iitaka dimension `dim Δ_D`.
pub fn classify(fan: &Fan, d: &Divisor) -> Result<Classification> {
    let sf = support_function(fan, d)?;
    let cartier = sf.pieces.iter().all(|(_, m)| m.is_integral());
    let semiample = cartier && convexity_violation(fan, d, &sf).is_none();
    let iitaka_dim = if semiample {
        divisor_polytope(fan, &d.coeffs)?.affine_dim()
    } else {
        None
    };
    Ok(Classification {
        cartier,
        semiample,
        iitaka_dim,
    })
}

/// First pair (σ, j) with `⟨m_σ, e_j⟩ < −a_j`.
fn convexity_violation(fan: &Fan, d: &Divisor, sf: &SupportFunction) -> Option<(ConeId, usize)> {
    for (sigma, m) in &sf.pieces {
        for (j, e) in fan.rays().iter().enumerate() {
            if m.pair(e) < q(-d.coeffs[j]) {
                return Some((*sigma, j));
            }
        }
    }
    None
}

/// Everything the cohomology formulas need about the contraction
/// `π̃ : N → N_D = N / N'` determined by a semiample divisor.
///
/// The polytope Δ_X is stored in coordinates `c` with respect to the basis
/// `m_x_basis` of M_X, translated by the vertex `origin`:
/// `m = origin + Σ c_r m_x_basis[r]`.
#[derive(Debug, Clone)]
pub struct ContractionData {
    /// Z-basis of N' (rows).
    pub lineality: Vec<Vec<i64>>,
    /// Rows define `π̃(v) = (⟨row, v⟩)_r`; they also form the basis of M_X.
    pub projection: Vec<Vec<i64>>,
    pub origin: Vec<i64>,
    pub iitaka_dim: usize,
    pub polytope: Polytope,
    pub faces: Vec<PolytopeFace>,
    /// Σ_X, the normal fan of Δ_X in N_D.
    pub sigma_fan: Fan,
    /// Face of Δ_X for each cone of Σ_X.
    pub face_of: Vec<usize>,
    /// Cone of Σ_X for each face of Δ_X.
    pub cone_of_face: Vec<ConeId>,
    /// Minimal cone of Σ_X containing `π̃(γ)`, for every cone γ of Σ.
    pub cone_image: Vec<ConeId>,
}

impl ContractionData {
    pub fn m_x_basis(&self) -> &[Vec<i64>] {
        &self.projection
    }

    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        self.projection
            .iter()
            .map(|row| linalg::dot_i64(row, v))
            .collect()
    }

    /// Point of M for polytope coordinates `c`.
    pub fn to_m(&self, c: &[i64]) -> Vec<i64> {
        let mut m = self.origin.clone();
        for (row, &x) in self.projection.iter().zip(c) {
            for (mi, ri) in m.iter_mut().zip(row) {
                *mi += x * ri;
            }
        }
        m
    }

    /// Whether ray `j` of Σ is mapped into the cone σ of Σ_X.
    pub fn ray_maps_into(&self, fan: &Fan, j: usize, sigma: ConeId) -> bool {
        let image = self.project(&fan.ray(j).0);
        self.sigma_fan.cone_contains(sigma, &linalg::qvec(&image))
    }

    /// Whether the cone γ of Σ satisfies `π̃(γ) ⊆ σ`.
    pub fn maps_into(&self, gamma: ConeId, sigma: ConeId) -> bool {
        self.sigma_fan
            .cone(self.cone_image[gamma])
            .is_face_of(self.sigma_fan.cone(sigma))
    }
}

/// Builds the contraction data of a semiample divisor.
///
/// N' is the common kernel of the differences `m_σ − m_σ0`, M_X its
/// integral annihilator and Σ_X the normal fan of Δ_D written in M_X.
pub fn contraction(fan: &Fan, d: &Divisor) -> Result<ContractionData> {
    let sf = support_function(fan, d)?;
    if let Some((sigma, m)) = sf.pieces.iter().find(|(_, m)| !m.is_integral()) {
        return Err(Error::NotSemiample(format!(
            "not Cartier: the local form on cone {:?} is {m}",
            fan.cone(*sigma).rays
        )));
    }
    if let Some((sigma, j)) = convexity_violation(fan, d, &sf) {
        return Err(Error::NotSemiample(format!(
            "support function is not convex: the form on cone {:?} violates ray {j}",
            fan.cone(sigma).rays
        )));
    }
    let rank = fan.rank();
    let big = |v: &[Q]| -> Vec<BigInt> { v.iter().map(|x| x.to_integer()).collect() };
    let base = &sf.pieces[0].1;
    let diffs: Vec<Vec<BigInt>> = sf.pieces.iter().map(|(_, m)| big(&m.sub(base).0)).collect();
    let lineality = to_i64_rows(linalg::integer_kernel(&diffs, rank));
    let lineality_big: Vec<Vec<BigInt>> = lineality
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let projection = to_i64_rows(linalg::integer_kernel(&lineality_big, rank));
    let origin = linalg::to_i64_vec(&base.0).expect("Cartier");
    let i = projection.len();

    let inequalities: Vec<Inequality> = fan
        .rays()
        .iter()
        .zip(&d.coeffs)
        .map(|(e, a)| Inequality {
            normal: projection
                .iter()
                .map(|row| linalg::dot_i64(row, &e.0))
                .collect(),
            offset: -a - linalg::dot_i64(&origin, &e.0),
        })
        .collect();
    let polytope = Polytope::from_inequalities(i, inequalities)?;
    let faces = face_lattice(&polytope);
    let nf = normal_fan(&polytope, &faces, i)?;

    let cone_image = (0..fan.n_cones())
        .map(|g| {
            let images: Vec<Vec<Q>> = fan
                .cone(g)
                .rays
                .iter()
                .map(|&r| {
                    linalg::qvec(
                        &projection
                            .iter()
                            .map(|row| linalg::dot_i64(row, &fan.ray(r).0))
                            .collect::<Vec<i64>>(),
                    )
                })
                .collect();
            minimal_containing_cone(&nf.fan, &images)
        })
        .collect::<Result<Vec<ConeId>>>()?;

    Ok(ContractionData {
        lineality,
        projection,
        origin,
        iitaka_dim: i,
        polytope,
        faces,
        sigma_fan: nf.fan,
        face_of: nf.cone_to_face,
        cone_of_face: nf.face_to_cone,
        cone_image,
    })
}

fn to_i64_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<i64>> {
    rows.into_iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("lattice basis fits in i64"))
                .collect()
        })
        .collect()
}

/// Whether `b − a = div(χ^m)` for some `m ∈ M`; returns that `m`.
pub fn linear_equivalence(fan: &Fan, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    if a.len() != fan.n_rays() || b.len() != fan.n_rays() {
        return None;
    }
    let rows: Vec<Vec<Q>> = fan.rays().iter().map(|e| e.to_q()).collect();
    let rhs: Vec<Q> = a.iter().zip(b).map(|(x, y)| q(y - x)).collect();
    let m = linalg::solve_any(&rows, &rhs, fan.rank())?;
    if m.iter().any(|x| !x.is_integer()) {
        return None;
    }
    let m = linalg::to_i64_vec(&m)?;
    let ok = fan
        .rays()
        .iter()
        .zip(a.iter().zip(b))
        .all(|(e, (x, y))| linalg::dot_i64(&m, &e.0) == y - x);
    ok.then_some(m)
}
