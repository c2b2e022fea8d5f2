//! Shared generators and independent reference computations for the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toricoh::ishida::{build_ishida, cohomology_dims};
use toricoh::lattice::{star_subdivide, FanSubset, SubsetKind};
use toricoh::linalg::{self, binomial, gcd_slice};
use toricoh::polytope::divisor_polytope;
use toricoh::{Divisor, Fan, LatticeVector};

pub fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = gcd_slice(&v);
    if g == 0 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// `dim` independent primitive vectors of Z^rank with entries in [-5, 5].
pub fn random_simplicial_generators(
    rng: &mut ChaCha8Rng,
    rank: usize,
    dim: usize,
) -> Vec<Vec<i64>> {
    loop {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|_| primitive((0..rank).map(|_| rng.gen_range(-5..=5)).collect()))
            .collect();
        let rows: Vec<Vec<_>> = gens.iter().map(|g| linalg::qvec(g)).collect();
        if linalg::rank_dense(&rows, rank) == dim {
            return gens;
        }
    }
}

/// The fan of faces of the cone spanned by `gens`.
pub fn face_fan(rank: usize, gens: &[Vec<i64>]) -> Fan {
    let rays = gens.iter().cloned().map(LatticeVector).collect();
    Fan::new(rank, rays, vec![(0..gens.len()).collect()]).expect("simplicial cone")
}

/// A random simplicial subdivision of a simplicial cone by `steps` stellar
/// subdivisions at primitive positive combinations of existing rays of one
/// cone.
pub fn random_subdivision(rng: &mut ChaCha8Rng, base: &Fan, steps: usize) -> Fan {
    let mut fan = base.clone();
    let mut done = 0;
    while done < steps {
        let cones = fan.cones();
        let c = &cones[rng.gen_range(1..cones.len())];
        let mut v = vec![0i64; fan.rank()];
        for &r in &c.rays {
            let w = rng.gen_range(1..=3);
            for (x, y) in v.iter_mut().zip(&fan.ray(r).0) {
                *x += w * y;
            }
        }
        let v = LatticeVector(primitive(v));
        if let Ok(next) = star_subdivide(&fan, &v) {
            fan = next;
            done += 1;
        }
    }
    fan
}

/// `Σ_{j ≤ k} C(n − j, k − j) (−1)^{k−j} counts[j]`.
pub fn alternating_count(n: i64, k: usize, counts: &[usize]) -> i64 {
    (0..=k)
        .map(|j| {
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            sign * binomial(n - j as i64, (k - j) as i64) * counts[j] as i64
        })
        .sum()
}

pub fn cone_counts(phi: &FanSubset<'_>, d: usize) -> Vec<usize> {
    (0..=d).map(|j| phi.cones_of_dim(j).len()).collect()
}

/// `(h^0, …, h^l)` of the degree-l complex of global sections of the
/// twisted forms, assembled lattice point by lattice point: the graded piece
/// at m is the Ishida complex of the subfan of cones on whose rays m is
/// tight.
pub fn per_point_cohomology(fan: &Fan, d: &Divisor, l: usize) -> Vec<i64> {
    let mut total = vec![0i64; l + 1];
    let points = divisor_polytope(fan, &d.coeffs).unwrap().lattice_points();
    for m in points {
        let tight: Vec<bool> = fan
            .rays()
            .iter()
            .zip(&d.coeffs)
            .map(|(e, a)| linalg::dot_i64(&m, &e.0) == -a)
            .collect();
        let cones: BTreeSet<usize> = (0..fan.n_cones())
            .filter(|&c| fan.cone(c).rays.iter().all(|&r| tight[r]))
            .collect();
        let phi = FanSubset::from_parts(fan, cones, SubsetKind::StarOpen);
        let h = cohomology_dims(&build_ishida(&phi, l).unwrap()).dims;
        for (t, x) in total.iter_mut().zip(h) {
            *t += x as i64;
        }
    }
    total
}

/// All vectors in `{lo..=hi}^n`, lexicographically.
pub fn boxes(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (lo..=hi).collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                values.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}
