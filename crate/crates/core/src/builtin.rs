//! Built-in example fans.

use crate::exterior::subsets;
use crate::lattice::{star_subdivide, Fan, LatticeVector};

/// Names accepted by [`builtin`], in listing order.
pub const BUILTIN_NAMES: &[&str] = &[
    "P1", "P2", "P3", "P4", "P1xP1", "P1xP2", "F0", "F1", "F2", "F3", "P3sub",
];

pub fn builtin_names() -> &'static [&'static str] {
    BUILTIN_NAMES
}

/// One-line description of a builtin.
pub fn describe(name: &str) -> Option<&'static str> {
    let text = match canonical(name)? {
        "P1" => "projective line",
        "P2" => "projective plane",
        "P3" => "projective 3-space",
        "P4" => "projective 4-space",
        "P1xP1" => "product of two projective lines",
        "P1xP2" => "product of a projective line and a projective plane",
        "F0" => "Hirzebruch surface F_0",
        "F1" => "Hirzebruch surface F_1 (blow-up of P2 at a point)",
        "F2" => "Hirzebruch surface F_2",
        "F3" => "Hirzebruch surface F_3",
        "P3sub" => "P3 star-subdivided at (1,1,0), (1,1,1), (0,1,1), (1,0,1)",
        _ => return None,
    };
    Some(text)
}

fn canonical(name: &str) -> Option<&'static str> {
    BUILTIN_NAMES
        .iter()
        .copied()
        .find(|n| n.eq_ignore_ascii_case(name))
}

/// Looks up a builtin fan by (case-insensitive) name.
pub fn builtin(name: &str) -> Option<Fan> {
    let fan = match canonical(name)? {
        "P1" => projective_space(1),
        "P2" => projective_space(2),
        "P3" => projective_space(3),
        "P4" => projective_space(4),
        "P1xP1" => product(&projective_space(1), &projective_space(1)),
        "P1xP2" => product(&projective_space(1), &projective_space(2)),
        "F0" => hirzebruch(0),
        "F1" => hirzebruch(1),
        "F2" => hirzebruch(2),
        "F3" => hirzebruch(3),
        "P3sub" => subdivided_p3(),
        _ => return None,
    };
    Some(fan)
}

/// Rays `e_1, …, e_n, −Σ e_i`; every n of them span a maximal cone.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticeVector> = (0..n)
        .map(|i| LatticeVector((0..n).map(|j| i64::from(i == j)).collect()))
        .collect();
    rays.push(LatticeVector(vec![-1; n]));
    let idx: Vec<usize> = (0..=n).collect();
    Fan::new(n, rays, subsets(&idx, n)).expect("valid fan")
}

/// Rays `(1,0), (0,1), (−1,a), (0,−1)`.
pub fn hirzebruch(a: i64) -> Fan {
    let rays = vec![
        LatticeVector(vec![1, 0]),
        LatticeVector(vec![0, 1]),
        LatticeVector(vec![-1, a]),
        LatticeVector(vec![0, -1]),
    ];
    Fan::new(
        2,
        rays,
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .expect("valid fan")
}

/// Product fan; rays of the first factor come first.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let (ra, rb) = (a.rank(), b.rank());
    let mut rays: Vec<LatticeVector> = a
        .rays()
        .iter()
        .map(|r| {
            let mut v = r.0.clone();
            v.extend(std::iter::repeat_n(0, rb));
            LatticeVector(v)
        })
        .collect();
    rays.extend(b.rays().iter().map(|r| {
        let mut v = vec![0; ra];
        v.extend(&r.0);
        LatticeVector(v)
    }));
    let offset = a.n_rays();
    let mut cones = Vec::new();
    for &x in a.max_cones() {
        for &y in b.max_cones() {
            let mut c = a.cone(x).rays.clone();
            c.extend(b.cone(y).rays.iter().map(|r| r + offset));
            cones.push(c);
        }
    }
    Fan::new(ra + rb, rays, cones).expect("valid fan")
}

fn subdivided_p3() -> Fan {
    let mut fan = projective_space(3);
    for v in [[1, 1, 0], [1, 1, 1], [0, 1, 1], [1, 0, 1]] {
        fan = star_subdivide(&fan, &LatticeVector(v.to_vec())).expect("valid subdivision");
    }
    fan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fan_validate;

    #[test]
    fn every_builtin_is_a_complete_simplicial_fan() {
        for name in BUILTIN_NAMES {
            let fan = builtin(name).unwrap();
            let report = fan_validate(&fan, true);
            assert!(report.is_valid(), "{name}: {report}");
            assert!(describe(name).is_some());
        }
    }

    #[test]
    fn sizes() {
        let count = |name: &str| {
            let f = builtin(name).unwrap();
            (f.rank(), f.n_rays(), f.max_cones().len())
        };
        assert_eq!(count("P4"), (4, 5, 5));
        assert_eq!(count("P1xP2"), (3, 5, 6));
        assert_eq!(count("F2"), (2, 4, 4));
        let (rank, rays, _) = count("P3sub");
        assert_eq!((rank, rays), (3, 8));
    }

    #[test]
    fn names_are_case_insensitive() {
        assert!(builtin("p1xp2").is_some());
        assert!(builtin("P5").is_none());
    }
}
