//! Fan file format.
//!
//! A fan file is a TOML (or, if it starts with `{`, JSON) document:
//!
//! ```toml
//! rank = 2
//! rays = [[1, 0], [0, 1], [-1, -1]]
//! max_cones = [[0, 1], [1, 2], [2, 0]]
//! ```
//!
//! Ray indices in `max_cones` are 0-based. Duplicate rays are rejected.

use serde::{Deserialize, Serialize};

use super::fan::Fan;
use super::validate::fan_validate;
use super::LatticeVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// Parses a fan file and checks its structure (coordinates, indices,
/// duplicate rays). Geometric validity is not checked.
pub fn parse_fan_str(text: &str) -> Result<Fan> {
    let file: FanFile = if text.trim_start().starts_with('{') {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?
    } else {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?
    };
    for (i, r) in file.rays.iter().enumerate() {
        if let Some(j) = file.rays[..i].iter().position(|s| s == r) {
            return Err(Error::Parse(format!(
                "field `rays`: duplicate ray {} at indices {j} and {i}",
                LatticeVector(r.clone())
            )));
        }
    }
    Fan::new(
        file.rank,
        file.rays.into_iter().map(LatticeVector).collect(),
        file.max_cones,
    )
    .map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("field `max_cones`/`rays`: {msg}")),
        other => other,
    })
}

/// Parses and validates a fan (primitive rays, simplicial cones, proper
/// intersections). Completeness is not required here.
pub fn load_fan(text: &str) -> Result<Fan> {
    let fan = parse_fan_str(text)?;
    let report = fan_validate(&fan, false);
    if !report.is_valid() {
        return Err(Error::InvalidFan(report));
    }
    Ok(fan)
}

pub fn fan_to_file(fan: &Fan) -> FanFile {
    FanFile {
        rank: fan.rank(),
        rays: fan.rays().iter().map(|r| r.0.clone()).collect(),
        max_cones: fan
            .max_cones()
            .iter()
            .map(|&m| fan.cone(m).rays.clone())
            .collect(),
    }
}

/// Renders a fan in the TOML fan-file layout, one list per line.
pub fn render_fan_toml(fan: &Fan) -> String {
    let file = fan_to_file(fan);
    let list = |v: &[i64]| {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(", "))
    };
    let rays: Vec<String> = file
        .rays
        .iter()
        .map(|r| format!("    {},", list(r)))
        .collect();
    let cones: Vec<String> = file
        .max_cones
        .iter()
        .map(|c| {
            let v: Vec<i64> = c.iter().map(|&x| x as i64).collect();
            format!("    {},", list(&v))
        })
        .collect();
    format!(
        "rank = {}\nrays = [\n{}\n]\nmax_cones = [\n{}\n]\n",
        file.rank,
        rays.join("\n"),
        cones.join("\n")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IssueKind;

    const P2: &str = "rank = 2\nrays = [[1,0],[0,1],[-1,-1]]\nmax_cones = [[0,1],[1,2],[2,0]]\n";

    #[test]
    fn parses_p2() {
        let fan = load_fan(P2).unwrap();
        assert_eq!(fan.n_rays(), 3);
        assert!(fan_validate(&fan, true).is_valid());
    }

    #[test]
    fn whitespace_is_irrelevant() {
        let spaced =
            "rank=2\n\nrays = [ [ 1 , 0 ],\n [0,1], [ -1,-1 ] ]\n   max_cones=[[0,1],[1,2],[2,0]]";
        assert_eq!(load_fan(spaced).unwrap(), load_fan(P2).unwrap());
    }

    #[test]
    fn json_is_accepted() {
        let json =
            r#"{"rank": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#;
        assert_eq!(load_fan(json).unwrap(), load_fan(P2).unwrap());
    }

    #[test]
    fn duplicate_ray_is_a_parse_error() {
        let text = "rank = 2\nrays = [[1,0],[0,1],[1,0]]\nmax_cones = [[0,1]]\n";
        let err = parse_fan_str(text).unwrap_err();
        assert_eq!(err.code(), "PARSE_ERROR");
        assert!(err.to_string().contains("duplicate ray"));
    }

    #[test]
    fn nonprimitive_ray_is_rejected() {
        let text = "rank = 2\nrays = [[2,4],[1,0]]\nmax_cones = [[0,1]]\n";
        match load_fan(text) {
            Err(Error::InvalidFan(report)) => assert!(report.has(IssueKind::NonprimitiveRay)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_names_the_line() {
        let text = "rank = 2\nrays = [[1,0],[0,1]\nmax_cones = [[0,1]]\n";
        let err = parse_fan_str(text).unwrap_err();
        assert_eq!(err.code(), "PARSE_ERROR");
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn render_round_trips() {
        let fan = load_fan(P2).unwrap();
        assert_eq!(load_fan(&render_fan_toml(&fan)).unwrap(), fan);
    }
}
