//! Dimensions of `H^k(P_Σ, Ω^l(X))` for a semiample divisor X, by three
//! independent routes:
//!
//! * `Chow`: sum over cones σ of Σ_X of
//!   `l*(Γ_σ) · dim A^σ(Σ)_k · C(i − dim σ, l − k)`;
//! * `Count`: the closed counting formula over faces Γ of Δ_X,
//!   `l*(Γ) C(dim Γ, l−k) Σ_j C(d − dim Γ − j, k − j)(−1)^{k−j} #Σ_{σ_Γ}(j)`;
//! * `Direct`: exact ranks in the complex
//!   `⊕_{γ ∈ Σ(j)} ⊕_{m} Λ^{l−j} γ^⊥`, with m running over lattice points of
//!   Δ_D tight on the rays of γ. This route uses neither the contraction
//!   nor the normal fan.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chow::chow_dim;
use crate::divisor::{classify, contraction, ContractionData, Divisor};
use crate::error::{Error, Result};
use crate::exterior::{subsets, Form};
use crate::ishida::subdivision_fan_of_cone;
use crate::lattice::{integral_perp_basis, ConeId, Fan};
use crate::linalg::{self, binomial, SparseMatrix, Q};
use crate::polytope::divisor_polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Route {
    Chow,
    Count,
    Direct,
    All,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Route> {
        match s.to_ascii_lowercase().as_str() {
            "chow" => Ok(Route::Chow),
            "count" | "counting" => Ok(Route::Count),
            "direct" => Ok(Route::Direct),
            "all" => Ok(Route::All),
            other => Err(Error::Parse(format!("unknown route `{other}`"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Route::Chow => "CHOW",
            Route::Count => "COUNT",
            Route::Direct => "DIRECT",
            Route::All => "ALL",
        };
        write!(f, "{name}")
    }
}

/// `entries[k][l] = dim H^k(P_Σ, Ω^l(X))` for `0 ≤ k, l ≤ d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTable {
    pub d: usize,
    pub i: usize,
    pub route: Route,
    pub entries: Vec<Vec<i64>>,
}

impl HodgeTable {
    pub fn get(&self, k: usize, l: usize) -> i64 {
        self.entries[k][l]
    }
}

fn check_degrees(fan: &Fan, k: usize, l: usize) -> Result<()> {
    let d = fan.rank();
    if k > d || l > d {
        return Err(Error::OutOfRange(format!(
            "(k, l) = ({k}, {l}) is outside [0, {d}]^2"
        )));
    }
    Ok(())
}

/// Route `Chow` for a single entry.
pub fn h_dims_chow(fan: &Fan, d: &Divisor, k: usize, l: usize) -> Result<i64> {
    check_degrees(fan, k, l)?;
    let cd = contraction(fan, d)?;
    Ok(ChowData::new(fan, &cd).entry(&cd, k, l))
}

/// Route `Count` for a single entry.
pub fn h_dims_counting(fan: &Fan, d: &Divisor, k: usize, l: usize) -> Result<i64> {
    check_degrees(fan, k, l)?;
    let cd = contraction(fan, d)?;
    Ok(CountData::new(fan, &cd).entry(fan, &cd, k, l))
}

/// Route `Direct` for a single entry.
pub fn h_dims_direct(fan: &Fan, d: &Divisor, k: usize, l: usize) -> Result<i64> {
    check_degrees(fan, k, l)?;
    let direct = DirectComplex::new(fan, d)?;
    Ok(direct.cohomology(l)[k])
}

/// Chow dimensions `dim A^σ(Σ)_k` for every σ ∈ Σ_X and k ≤ d.
struct ChowData {
    dims: Vec<Vec<usize>>,
}

impl ChowData {
    fn new(fan: &Fan, cd: &ContractionData) -> Self {
        let dims = (0..cd.sigma_fan.n_cones())
            .map(|sigma| {
                let sub = subdivision_fan_of_cone(fan, cd, sigma);
                (0..=fan.rank()).map(|k| chow_dim(&sub, k)).collect()
            })
            .collect();
        ChowData { dims }
    }

    fn entry(&self, cd: &ContractionData, k: usize, l: usize) -> i64 {
        let i = cd.iitaka_dim as i64;
        let mut total = 0;
        for sigma in 0..cd.sigma_fan.n_cones() {
            let lstar = cd.faces[cd.face_of[sigma]].interior_count as i64;
            let dim_sigma = cd.sigma_fan.cone(sigma).dim as i64;
            let wedge = binomial(i - dim_sigma, l as i64 - k as i64);
            if lstar == 0 || wedge == 0 {
                continue;
            }
            total += lstar * self.dims[sigma][k] as i64 * wedge;
        }
        total
    }
}

/// `#Σ_σ(j)` for every σ ∈ Σ_X.
struct CountData {
    counts: Vec<Vec<i64>>,
}

impl CountData {
    fn new(fan: &Fan, cd: &ContractionData) -> Self {
        let d = fan.rank();
        let mut counts = vec![vec![0i64; d + 1]; cd.sigma_fan.n_cones()];
        for (sigma, row) in counts.iter_mut().enumerate() {
            for gamma in 0..fan.n_cones() {
                if cd.maps_into(gamma, sigma) {
                    row[fan.cone(gamma).dim] += 1;
                }
            }
        }
        CountData { counts }
    }

    fn entry(&self, fan: &Fan, cd: &ContractionData, k: usize, l: usize) -> i64 {
        let d = fan.rank() as i64;
        let (k, l) = (k as i64, l as i64);
        let mut total = 0;
        for (idx, face) in cd.faces.iter().enumerate() {
            let lstar = face.interior_count as i64;
            let dim = face.dim as i64;
            let outer = binomial(dim, l - k);
            if lstar == 0 || outer == 0 {
                continue;
            }
            let counts = &self.counts[cd.cone_of_face[idx]];
            let inner: i64 = (0..=k)
                .map(|j| {
                    let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - dim - j, k - j) * counts[j as usize]
                })
                .sum();
            total += lstar * outer * inner;
        }
        total
    }
}

/// Coordinates in a basis of `Λ^r V` for a subspace `V ⊂ M_Q`, with the
/// basis given by wedges of a Z-basis of V. Coordinates are read off a set
/// of standard monomials on which the basis is invertible.
struct WedgeCoords {
    basis: Vec<Form>,
    keys: Vec<Vec<usize>>,
    inverse: Vec<Vec<Q>>,
}

impl WedgeCoords {
    fn new(vectors: &[Vec<i64>], r: usize, rank: usize) -> Self {
        let idx: Vec<usize> = (0..vectors.len()).collect();
        let basis: Vec<Form> = subsets(&idx, r)
            .into_iter()
            .map(|s| {
                s.iter().fold(Form::one(), |acc, &i| {
                    acc.wedge(&Form::from_vector(&linalg::qvec(&vectors[i])))
                })
            })
            .collect();
        let all: Vec<usize> = (0..rank).collect();
        let monomials = subsets(&all, r);
        let mut rows: Vec<Vec<Q>> = basis
            .iter()
            .map(|f| monomials.iter().map(|m| f.coeff(m)).collect())
            .collect();
        let cols = linalg::rref(&mut rows, monomials.len());
        let keys: Vec<Vec<usize>> = cols.iter().map(|&c| monomials[c].clone()).collect();
        // B[i][j] = coefficient of basis i on key j; coords c solve c B = w.
        let square: Vec<Vec<Q>> = basis
            .iter()
            .map(|f| keys.iter().map(|m| f.coeff(m)).collect())
            .collect();
        let inverse = linalg::invert(&square).unwrap_or_default();
        WedgeCoords {
            basis,
            keys,
            inverse,
        }
    }

    fn coords(&self, w: &Form) -> Vec<Q> {
        let values: Vec<Q> = self.keys.iter().map(|m| w.coeff(m)).collect();
        (0..self.basis.len())
            .map(|i| {
                values
                    .iter()
                    .zip(&self.inverse)
                    .fold(Q::zero(), |acc, (v, row)| acc + v * &row[i])
            })
            .collect()
    }
}

/// The global-sections complex of route `Direct`.
pub struct DirectComplex<'a> {
    fan: &'a Fan,
    /// For every cone, the indices of lattice points of Δ_D tight on it.
    points_of_cone: Vec<Vec<usize>>,
    /// For every cone, whether each lattice point is tight on it.
    tight: Vec<Vec<bool>>,
    perp: Vec<Vec<Vec<i64>>>,
}

impl<'a> DirectComplex<'a> {
    pub fn new(fan: &'a Fan, d: &Divisor) -> Result<Self> {
        let class = classify(fan, d)?;
        if !class.semiample {
            return Err(Error::NotSemiample(if class.cartier {
                "support function is not convex".into()
            } else {
                "divisor is not Cartier".into()
            }));
        }
        let points = divisor_polytope(fan, &d.coeffs)?.lattice_points();
        let tight_rays: Vec<Vec<bool>> = points
            .iter()
            .map(|p| {
                fan.rays()
                    .iter()
                    .zip(&d.coeffs)
                    .map(|(e, a)| linalg::dot_i64(p, &e.0) == -a)
                    .collect()
            })
            .collect();
        let tight: Vec<Vec<bool>> = fan
            .cones()
            .iter()
            .map(|c| {
                tight_rays
                    .iter()
                    .map(|t| c.rays.iter().all(|&r| t[r]))
                    .collect()
            })
            .collect();
        let points_of_cone = tight
            .iter()
            .map(|row| (0..row.len()).filter(|&p| row[p]).collect())
            .collect();
        let perp = (0..fan.n_cones())
            .map(|g| integral_perp_basis(fan, g))
            .collect();
        Ok(DirectComplex {
            fan,
            points_of_cone,
            tight,
            perp,
        })
    }

    /// `(h^0, …, h^l)` of the degree-l complex.
    pub fn cohomology(&self, l: usize) -> Vec<i64> {
        let fan = self.fan;
        let d = fan.rank();
        let mut coords: HashMap<(ConeId, usize), WedgeCoords> = HashMap::new();
        let mut offsets: Vec<HashMap<ConeId, usize>> = Vec::with_capacity(l + 1);
        let mut sizes = Vec::with_capacity(l + 1);
        for j in 0..=l {
            let mut offset = 0;
            let mut map = HashMap::new();
            for &g in fan.cones_of_dim(j) {
                let wc = coords
                    .entry((g, l - j))
                    .or_insert_with(|| WedgeCoords::new(&self.perp[g], l - j, d));
                map.insert(g, offset);
                offset += self.points_of_cone[g].len() * wc.basis.len();
            }
            offsets.push(map);
            sizes.push(offset);
        }
        let mut ranks = Vec::with_capacity(l);
        for j in 0..l {
            let mut m = SparseMatrix::new(sizes[j + 1], sizes[j]);
            for &g in fan.cones_of_dim(j) {
                let source = &coords[&(g, l - j)];
                let width = source.basis.len();
                for &tau in fan.cofacets(g) {
                    let target = &coords[&(tau, l - j - 1)];
                    let t_width = target.basis.len();
                    let e = fan.ray(fan.extra_ray(g, tau)).to_q();
                    let blocks: Vec<Vec<Q>> = source
                        .basis
                        .iter()
                        .map(|w| target.coords(&w.contract(&e)))
                        .collect();
                    let tau_points = &self.tight[tau];
                    let rank_in_tau: HashMap<usize, usize> = self.points_of_cone[tau]
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| (p, i))
                        .collect();
                    for (pi, &p) in self.points_of_cone[g].iter().enumerate() {
                        if !tau_points[p] {
                            continue;
                        }
                        let ti = rank_in_tau[&p];
                        for (a, column) in blocks.iter().enumerate() {
                            for (b, value) in column.iter().enumerate() {
                                if value.is_zero() {
                                    continue;
                                }
                                m.add(
                                    offsets[j + 1][&tau] + ti * t_width + b,
                                    offsets[j][&g] + pi * width + a,
                                    value.clone(),
                                );
                            }
                        }
                    }
                }
            }
            ranks.push(m.rank() as i64);
        }
        (0..=l)
            .map(|j| {
                let out = if j < l { ranks[j] } else { 0 };
                let inc = if j > 0 { ranks[j - 1] } else { 0 };
                sizes[j] as i64 - out - inc
            })
            .collect()
    }
}

fn table_from(
    d: usize,
    i: usize,
    route: Route,
    mut cell: impl FnMut(usize, usize) -> i64,
) -> HodgeTable {
    let entries = (0..=d)
        .map(|k| (0..=d).map(|l| cell(k, l)).collect())
        .collect();
    HodgeTable {
        d,
        i,
        route,
        entries,
    }
}

fn direct_table(fan: &Fan, d: &Divisor, i: usize) -> Result<HodgeTable> {
    let direct = DirectComplex::new(fan, d)?;
    let n = fan.rank();
    let mut entries = vec![vec![0i64; n + 1]; n + 1];
    for l in 0..=n {
        for (k, h) in direct.cohomology(l).into_iter().enumerate() {
            entries[k][l] = h;
        }
    }
    Ok(HodgeTable {
        d: n,
        i,
        route: Route::Direct,
        entries,
    })
}

/// The full `(k, l)` table by one route, or by all three with an agreement
/// check (`ROUTE_MISMATCH` on the first disagreeing cell).
pub fn full_table(fan: &Fan, d: &Divisor, route: Route) -> Result<HodgeTable> {
    let cd = contraction(fan, d)?;
    let n = fan.rank();
    let i = cd.iitaka_dim;
    let chow = || {
        let data = ChowData::new(fan, &cd);
        table_from(n, i, Route::Chow, |k, l| data.entry(&cd, k, l))
    };
    let count = || {
        let data = CountData::new(fan, &cd);
        table_from(n, i, Route::Count, |k, l| data.entry(fan, &cd, k, l))
    };
    match route {
        Route::Chow => Ok(chow()),
        Route::Count => Ok(count()),
        Route::Direct => direct_table(fan, d, i),
        Route::All => {
            let a = chow();
            let b = count();
            let c = direct_table(fan, d, i)?;
            for k in 0..=n {
                for l in 0..=n {
                    let (x, y, z) = (a.get(k, l), b.get(k, l), c.get(k, l));
                    if x != y || y != z {
                        return Err(Error::RouteMismatch {
                            k,
                            l,
                            chow: x,
                            count: y,
                            direct: z,
                        });
                    }
                }
            }
            Ok(HodgeTable {
                route: Route::All,
                ..a
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCell {
    pub k: usize,
    pub l: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub d: usize,
    pub i: usize,
    pub table: HodgeTable,
    /// Cells with `k > l` or `l > k + i`.
    pub vanishing_region: Vec<AuditCell>,
    /// Cells of the column `l = d` with `k ≠ d − i`.
    pub top_column: Vec<AuditCell>,
    pub pass: bool,
}

impl AuditReport {
    pub fn violations(&self) -> Vec<&AuditCell> {
        self.vanishing_region
            .iter()
            .chain(&self.top_column)
            .filter(|c| c.value != 0)
            .collect()
    }
}

/// Checks the predicted zeros of the table computed by route `Chow`.
pub fn vanishing_audit(fan: &Fan, d: &Divisor) -> Result<AuditReport> {
    let table = full_table(fan, d, Route::Chow)?;
    let (n, i) = (table.d, table.i);
    let mut vanishing_region = Vec::new();
    let mut top_column = Vec::new();
    for k in 0..=n {
        for l in 0..=n {
            let cell = AuditCell {
                k,
                l,
                value: table.get(k, l),
            };
            if k > l || l > k + i {
                vanishing_region.push(cell.clone());
            }
            if l == n && k + i != n {
                top_column.push(cell);
            }
        }
    }
    let pass = vanishing_region
        .iter()
        .chain(&top_column)
        .all(|c| c.value == 0);
    Ok(AuditReport {
        d: n,
        i,
        table,
        vanishing_region,
        top_column,
        pass,
    })
}

/// `rank(M_X ∩ σ^⊥)` by a kernel computation, for comparison with the
/// duality shortcut `i − dim σ`.
pub fn perp_rank(cd: &ContractionData, sigma: ConeId) -> usize {
    integral_perp_basis(&cd.sigma_fan, sigma).len()
}
