//! Explicit Čech cocycles for the cover of P_Σ by the affine charts U_τ of
//! the maximal cones.
//!
//! A generator is a lattice point m in the relative interior of a face Γ_σ
//! of Δ_X, a cone γ from a Chow basis of Σ_σ and a wedge ω over a basis of
//! `M_X ∩ σ^⊥`. Its cocycle has, on a tuple `τ_0 < … < τ_k` of maximal
//! cones, the component
//!
//! `(A ∏_{π̃(ρ_j) ⊄ σ} x_j / f) · (m_{τ_1}^{i_1} − m_{τ_0}^{i_1}) ∧ … ∧ (m_{τ_k}^{i_k} − m_{τ_{k−1}}^{i_k}) ∧ ω`
//!
//! where `i_1 < … < i_k` are the rays of γ and `m_τ^i` is the covector dual
//! to ray i in τ (zero when i ∉ τ). A covector m stands for the invariant
//! form `Σ_j ⟨m, e_j⟩ dlog x_j`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::chow_basis;
use crate::divisor::{contraction, linear_equivalence, Divisor};
use crate::error::{Error, Result};
use crate::exterior::{subsets, Form};
use crate::ishida::subdivision_fan_of_cone;
use crate::lattice::{dual_covector, integral_perp_basis, ConeId, Fan};
use crate::linalg::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleGenerator {
    pub k: usize,
    pub l: usize,
    /// Cone of Σ_X.
    pub sigma: ConeId,
    /// Lattice point of M in the relative interior of Γ_σ.
    pub point: Vec<i64>,
    /// Exponents of the monomial A (zero on variables with `π̃(ρ_j) ⊆ σ`).
    pub a_exponents: Vec<i64>,
    /// Variables j with `π̃(ρ_j) ⊄ σ`.
    pub outside: Vec<usize>,
    /// Cone of Σ whose class is a Chow basis element.
    pub gamma: ConeId,
    pub gamma_rays: Vec<usize>,
    /// Factors of ω, as covectors of M.
    pub omega: Vec<Vec<i64>>,
}

impl CocycleGenerator {
    /// Exponents of `A ∏_{outside} x_j`, i.e. `⟨m, e_j⟩ + a_j`.
    pub fn numerator(&self) -> Vec<i64> {
        let mut e = self.a_exponents.clone();
        for &j in &self.outside {
            e[j] += 1;
        }
        e
    }
}

/// A basis of `H^k(P_Σ, Ω^l(X))` realized by generators, one for each
/// (σ, interior point of Γ_σ, Chow basis cone, wedge monomial).
pub fn generators(fan: &Fan, d: &Divisor, k: usize, l: usize) -> Result<Vec<CocycleGenerator>> {
    let cd = contraction(fan, d)?;
    let n = fan.rank();
    if k > n || l > n {
        return Err(Error::OutOfRange(format!(
            "(k, l) = ({k}, {l}) is outside [0, {n}]^2"
        )));
    }
    if k > l {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for sigma in 0..cd.sigma_fan.n_cones() {
        let face = &cd.faces[cd.face_of[sigma]];
        if face.interior_points.is_empty() {
            continue;
        }
        let perp: Vec<Vec<i64>> = integral_perp_basis(&cd.sigma_fan, sigma)
            .iter()
            .map(|c| {
                let mut m = vec![0i64; n];
                for (row, &x) in cd.projection.iter().zip(c) {
                    for (mi, ri) in m.iter_mut().zip(row) {
                        *mi += x * ri;
                    }
                }
                m
            })
            .collect();
        let idx: Vec<usize> = (0..perp.len()).collect();
        let wedges = subsets(&idx, l - k);
        if wedges.is_empty() {
            continue;
        }
        let basis = chow_basis(&subdivision_fan_of_cone(fan, &cd, sigma), k);
        let outside: Vec<usize> = (0..fan.n_rays())
            .filter(|&j| !cd.ray_maps_into(fan, j, sigma))
            .collect();
        for c in &face.interior_points {
            let point = cd.to_m(c);
            let mut a_exponents = vec![0i64; fan.n_rays()];
            for &j in &outside {
                a_exponents[j] = linalg::dot_i64(&point, &fan.ray(j).0) + d.coeffs[j] - 1;
            }
            for &gamma in &basis {
                for w in &wedges {
                    out.push(CocycleGenerator {
                        k,
                        l,
                        sigma,
                        point: point.clone(),
                        a_exponents: a_exponents.clone(),
                        outside: outside.clone(),
                        gamma,
                        gamma_rays: fan.cone(gamma).rays.clone(),
                        omega: w.iter().map(|&i| perp[i].clone()).collect(),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechComponent {
    /// Maximal cones `τ_0 < … < τ_k`, as cone ids.
    pub tuple: Vec<ConeId>,
    /// The same cones as ray lists.
    pub tuple_rays: Vec<Vec<usize>>,
    /// The form in the standard basis of Λ M_Q.
    pub form: Form,
    /// The form in the symbols `dlog x_j` (index j is the ray index).
    pub dlog: Form,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechCocycle {
    pub k: usize,
    pub l: usize,
    /// Exponents of the numerator `A ∏ x_j`.
    pub numerator: Vec<i64>,
    /// Exponents of f.
    pub denominator: Vec<i64>,
    pub components: Vec<CechComponent>,
}

/// Emits the Čech cocycle of a generator. `f` defaults to `x^a`; any other
/// monomial must be linearly equivalent to it.
pub fn emit_cech_cocycle(
    fan: &Fan,
    d: &Divisor,
    g: &CocycleGenerator,
    f: Option<&[i64]>,
) -> Result<CechCocycle> {
    let f = f.map(|x| x.to_vec()).unwrap_or_else(|| d.coeffs.clone());
    if f.len() != fan.n_rays() {
        return Err(Error::DegreeMismatch(format!(
            "f has {} exponents but the fan has {} rays",
            f.len(),
            fan.n_rays()
        )));
    }
    if linear_equivalence(fan, &d.coeffs, &f).is_none() {
        return Err(Error::DegreeMismatch(format!(
            "x^{f:?} does not have the class of the divisor {:?}",
            d.coeffs
        )));
    }
    let maximal: Vec<ConeId> = fan.max_cones().to_vec();
    let mut duals: HashMap<(ConeId, usize), Vec<Q>> = HashMap::new();
    for &tau in &maximal {
        for &i in &g.gamma_rays {
            duals.insert((tau, i), dual_covector(fan, tau, i)?.0);
        }
    }
    let omega = g.omega.iter().fold(Form::one(), |acc, v| {
        acc.wedge(&Form::from_vector(&linalg::qvec(v)))
    });
    let idx: Vec<usize> = (0..maximal.len()).collect();
    let components = subsets(&idx, g.k + 1)
        .into_iter()
        .map(|positions| {
            let tuple: Vec<ConeId> = positions.iter().map(|&p| maximal[p]).collect();
            let mut form = Form::one();
            for (s, &i) in g.gamma_rays.iter().enumerate() {
                let diff: Vec<Q> = duals[&(tuple[s + 1], i)]
                    .iter()
                    .zip(&duals[&(tuple[s], i)])
                    .map(|(a, b)| a - b)
                    .collect();
                form = form.wedge(&Form::from_vector(&diff));
            }
            let form = form.wedge(&omega);
            CechComponent {
                tuple_rays: tuple.iter().map(|&t| fan.cone(t).rays.clone()).collect(),
                dlog: to_dlog(fan, &form),
                tuple,
                form,
            }
        })
        .collect();
    Ok(CechCocycle {
        k: g.k,
        l: g.l,
        numerator: g.numerator(),
        denominator: f,
        components,
    })
}

/// Rewrites a form on M_Q in the symbols `dlog x_j`: a covector m becomes
/// `Σ_j ⟨m, e_j⟩ dlog x_j`, extended multiplicatively.
pub fn to_dlog(fan: &Fan, form: &Form) -> Form {
    let rays: Vec<usize> = (0..fan.n_rays()).collect();
    let mut out = Form::zero();
    for (s, coeff) in form.terms() {
        for j in subsets(&rays, s.len()) {
            let minor: Vec<Vec<Q>> = j
                .iter()
                .map(|&r| s.iter().map(|&c| linalg::q(fan.ray(r).0[c])).collect())
                .collect();
            let det = if s.is_empty() {
                Q::one()
            } else {
                linalg::det(&minor)
            };
            if !det.is_zero() {
                out.add_term(j, coeff * det);
            }
        }
    }
    out
}

impl CechCocycle {
    fn component(&self, tuple: &[ConeId]) -> Option<&Form> {
        self.components
            .iter()
            .find(|c| c.tuple == tuple)
            .map(|c| &c.form)
    }

    /// Whether the alternating Čech coboundary vanishes on every increasing
    /// `(k+2)`-tuple of maximal cones. The scalar coefficient is the same on
    /// every component and is left out.
    pub fn coboundary_vanishes(&self, fan: &Fan) -> bool {
        let maximal = fan.max_cones();
        let idx: Vec<usize> = (0..maximal.len()).collect();
        subsets(&idx, self.k + 2).into_iter().all(|positions| {
            let tuple: Vec<ConeId> = positions.iter().map(|&p| maximal[p]).collect();
            let mut sum = Form::zero();
            for t in 0..tuple.len() {
                let mut face = tuple.clone();
                face.remove(t);
                let Some(c) = self.component(&face) else {
                    return false;
                };
                let sign = if t % 2 == 0 { Q::one() } else { -Q::one() };
                sum = sum.add(&c.scale(&sign));
            }
            sum.is_zero()
        })
    }

    /// Text rendering: one line per tuple.
    pub fn render(&self) -> String {
        let coeff = format!(
            "{}/{}",
            render_monomial(&self.numerator),
            render_monomial(&self.denominator)
        );
        let mut out = String::new();
        for c in &self.components {
            let tuple: Vec<String> = c
                .tuple_rays
                .iter()
                .map(|r| {
                    let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                    format!("<{}>", parts.join(","))
                })
                .collect();
            let _ = writeln!(
                out,
                "({}) -> {coeff} * {}",
                tuple.join(" "),
                render_dlog(&c.dlog)
            );
        }
        out
    }
}

/// `x0^2*x3`, or `1` for the empty monomial.
pub fn render_monomial(exponents: &[i64]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(j, &e)| {
            if e == 1 {
                format!("x{j}")
            } else {
                format!("x{j}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        format!("({})", parts.join("*"))
    }
}

fn render_dlog(form: &Form) -> String {
    if form.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (idx, c)) in form.terms().enumerate() {
        let negative = c < &Q::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let symbol = if idx.is_empty() {
            "1".to_string()
        } else {
            let parts: Vec<String> = idx.iter().map(|j| format!("dlog x{j}")).collect();
            parts.join(" ^ ")
        };
        if abs.is_one() {
            out.push_str(&symbol);
        } else {
            let _ = write!(out, "{abs} {symbol}");
        }
    }
    out
}
