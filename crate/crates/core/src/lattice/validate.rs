use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fan::{ConeId, Fan};
use crate::exterior::subsets;
use crate::linalg::{self, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueKind {
    Nonsimplicial,
    NonprimitiveRay,
    BadIntersection,
    NotComplete,
}

impl IssueKind {
    pub fn code(&self) -> &'static str {
        match self {
            IssueKind::Nonsimplicial => "NONSIMPLICIAL",
            IssueKind::NonprimitiveRay => "NONPRIMITIVE_RAY",
            IssueKind::BadIntersection => "BAD_INTERSECTION",
            IssueKind::NotComplete => "NOT_COMPLETE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    fn push(&mut self, kind: IssueKind, detail: String) {
        self.issues.push(Issue { kind, detail });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .issues
            .iter()
            .map(|i| format!("{}: {}", i.kind.code(), i.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks the standing hypotheses on a fan: primitive rays, simplicial
/// cones, cones meeting in common faces and, if requested, completeness.
///
/// Completeness is decided by facet pairing: all maximal cones are full
/// dimensional, every codimension-one cone lies in exactly two of them and
/// the facet-adjacency graph is connected.
pub fn fan_validate(fan: &Fan, require_complete: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, r) in fan.rays().iter().enumerate() {
        if !r.is_primitive() {
            report.push(
                IssueKind::NonprimitiveRay,
                format!("ray {i} = {r} is not primitive"),
            );
        }
    }
    for &m in fan.max_cones() {
        let c = fan.cone(m);
        if !c.is_simplicial() {
            report.push(
                IssueKind::Nonsimplicial,
                format!(
                    "cone {:?} has {} rays but dimension {}",
                    c.rays,
                    c.rays.len(),
                    c.dim
                ),
            );
        }
    }
    let max = fan.max_cones();
    for (a, &s) in max.iter().enumerate() {
        for &t in &max[a + 1..] {
            if !fan.cone(s).is_simplicial() || !fan.cone(t).is_simplicial() {
                continue;
            }
            if !meets_in_common_face(fan, s, t) {
                report.push(
                    IssueKind::BadIntersection,
                    format!(
                        "cones {:?} and {:?} do not intersect in a common face",
                        fan.cone(s).rays,
                        fan.cone(t).rays
                    ),
                );
            }
        }
    }
    if require_complete {
        check_complete(fan, &mut report);
    }
    report
}

fn check_complete(fan: &Fan, report: &mut ValidationReport) {
    let d = fan.rank();
    let max = fan.max_cones();
    for &m in max {
        if fan.cone(m).dim != d {
            report.push(
                IssueKind::NotComplete,
                format!(
                    "maximal cone {:?} is not full dimensional",
                    fan.cone(m).rays
                ),
            );
        }
    }
    if d == 0 {
        return;
    }
    let mut incident: BTreeMap<ConeId, Vec<ConeId>> = BTreeMap::new();
    for &f in fan.cones_of_dim(d - 1) {
        incident.insert(f, Vec::new());
    }
    for &m in max {
        if fan.cone(m).dim != d {
            continue;
        }
        for (&f, list) in incident.iter_mut() {
            if fan.cone(f).is_face_of(fan.cone(m)) {
                list.push(m);
            }
        }
    }
    if incident.is_empty() {
        report.push(
            IssueKind::NotComplete,
            "fan has no codimension-one cones".into(),
        );
    }
    for (f, list) in &incident {
        if list.len() != 2 {
            report.push(
                IssueKind::NotComplete,
                format!(
                    "cone {:?} is a facet of {} maximal cones, expected 2",
                    fan.cone(*f).rays,
                    list.len()
                ),
            );
        }
    }
    let full: Vec<ConeId> = max
        .iter()
        .copied()
        .filter(|&m| fan.cone(m).dim == d)
        .collect();
    if full.is_empty() {
        return;
    }
    let mut seen = vec![false; fan.n_cones()];
    let mut queue = VecDeque::from([full[0]]);
    seen[full[0]] = true;
    while let Some(m) = queue.pop_front() {
        for list in incident.values() {
            if !list.contains(&m) {
                continue;
            }
            for &n in list {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    if full.iter().any(|&m| !seen[m]) {
        report.push(
            IssueKind::NotComplete,
            "facet-adjacency graph is disconnected".into(),
        );
    }
}

/// Linear constraints `eq · x = 0`, `ineq · x ≥ 0` describing a simplicial
/// cone: equalities from the annihilator of its span, inequalities from
/// covectors dual to its generators on that span.
fn simplicial_constraints(fan: &Fan, id: ConeId) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let d = fan.rank();
    let gens = fan.generators(id);
    let (eq, _) = linalg::kernel(&gens, d);
    let ineq = (0..gens.len())
        .map(|i| {
            let rhs: Vec<Q> = (0..gens.len()).map(|j| q((i == j) as i64)).collect();
            linalg::solve_any(&gens, &rhs, d).expect("independent generators")
        })
        .collect();
    (eq, ineq)
}

/// Whether two simplicial cones meet in the cone over their shared rays.
/// Enumerates the extreme rays of the intersection and checks that each is
/// supported on the shared rays.
fn meets_in_common_face(fan: &Fan, s: ConeId, t: ConeId) -> bool {
    let d = fan.rank();
    let (eq_s, ineq_s) = simplicial_constraints(fan, s);
    let (eq_t, ineq_t) = simplicial_constraints(fan, t);
    let eq: Vec<Vec<Q>> = eq_s.into_iter().chain(eq_t).collect();
    let ineq: Vec<Vec<Q>> = ineq_s.iter().cloned().chain(ineq_t).collect();
    let s_cone = fan.cone(s);
    let t_cone = fan.cone(t);
    let outside_shared: Vec<usize> = s_cone
        .rays
        .iter()
        .enumerate()
        .filter(|(_, r)| !t_cone.contains_ray(**r))
        .map(|(i, _)| i)
        .collect();
    let idx: Vec<usize> = (0..ineq.len()).collect();
    for size in 0..d {
        for tight in subsets(&idx, size) {
            let mut system = eq.clone();
            system.extend(tight.iter().map(|&i| ineq[i].clone()));
            let (kernel, _) = linalg::kernel(&system, d);
            if kernel.len() != 1 {
                continue;
            }
            for sign in [1, -1] {
                let r: Vec<Q> = kernel[0].iter().map(|x| x * q(sign)).collect();
                let feasible = ineq.iter().all(|h| !linalg::dot(h, &r).is_negative());
                if !feasible {
                    continue;
                }
                if outside_shared
                    .iter()
                    .any(|&i| !linalg::dot(&ineq_s[i], &r).is_zero())
                {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn p2_is_complete() {
        let fan = Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        assert!(fan_validate(&fan, true).is_valid());
    }

    #[test]
    fn missing_cone_is_not_complete() {
        let fan = Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        let report = fan_validate(&fan, true);
        assert!(report.has(IssueKind::NotComplete));
        assert!(fan_validate(&fan, false).is_valid());
    }

    #[test]
    fn square_cone_is_nonsimplicial() {
        let fan = Fan::new(
            3,
            vec![
                lv(&[1, 0, 1]),
                lv(&[0, 1, 1]),
                lv(&[-1, 0, 1]),
                lv(&[0, -1, 1]),
            ],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert!(fan_validate(&fan, false).has(IssueKind::Nonsimplicial));
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let fan = Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1]), lv(&[-1, 2])],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        assert!(fan_validate(&fan, false).has(IssueKind::BadIntersection));
    }

    #[test]
    fn nonprimitive_ray_is_reported() {
        let fan = Fan::new(2, vec![lv(&[2, 4]), lv(&[1, 0])], vec![vec![0, 1]]).unwrap();
        assert!(fan_validate(&fan, false).has(IssueKind::NonprimitiveRay));
    }

    #[test]
    fn double_cover_of_circle_is_not_a_fan() {
        // Five 2-cones of angle ~144 degrees wind twice around the origin:
        // facets pair up correctly but the cones overlap.
        let rays = vec![
            lv(&[1, 0]),
            lv(&[-4, 3]),
            lv(&[1, -3]),
            lv(&[1, 3]),
            lv(&[-4, -3]),
        ];
        let fan = Fan::new(
            2,
            rays,
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        let report = fan_validate(&fan, true);
        assert!(report.has(IssueKind::BadIntersection));
        assert!(!report.has(IssueKind::NotComplete));
    }
}
