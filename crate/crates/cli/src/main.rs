use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toricoh::chow::{chow_basis, chow_dim};
use toricoh::cocycle::{emit_cech_cocycle, generators, render_monomial};
use toricoh::ishida::{build_ishida, cohomology_dims};
use toricoh::lattice::{render_fan_toml, FanSubset};
use toricoh::{
    builtin, builtin_names, classify, contraction, fan_validate, full_table, load_fan,
    vanishing_audit, Divisor, Error, Fan, HodgeTable, Route,
};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;

/// Cohomology of logarithmic differential forms on complete simplicial toric varieties.
#[derive(Parser, Debug)]
#[command(name = "toricoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a fan: primitive rays, simplicial cones, intersections, completeness.
    Validate(FanArgs),
    /// Cartier, semiample and Kodaira-Iitaka dimension of a divisor.
    Classify(DivisorArgs),
    /// The table of dim H^k(P, Ω^l(X)).
    Table {
        #[command(flatten)]
        args: DivisorArgs,
        /// chow, count, direct or all (all checks that the three agree).
        #[arg(long, default_value = "chow")]
        route: Route,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short, long)]
        l: Option<usize>,
    },
    /// Audit the predicted zeros of the table.
    Vanishing(DivisorArgs),
    /// Term and cohomology dimensions of the Ishida complexes of the fan.
    Ishida {
        #[command(flatten)]
        args: FanArgs,
        #[arg(short, long)]
        l: Option<usize>,
    },
    /// Graded dimensions and bases of the Chow group of the fan.
    Chow {
        #[command(flatten)]
        args: FanArgs,
        #[arg(short, long)]
        k: Option<usize>,
    },
    /// Explicit Čech cocycles spanning H^k(P, Ω^l(X)).
    Cocycles {
        #[command(flatten)]
        args: DivisorArgs,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        l: usize,
        /// Exponents of the denominator monomial f (defaults to the divisor).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// List the builtin fans, or print one as a fan file.
    Example {
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct FanArgs {
    /// Fan file path, or `builtin:NAME`.
    #[arg(long)]
    fan: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct DivisorArgs {
    #[command(flatten)]
    fan: FanArgs,
    /// Comma-separated coefficients, one per ray in file order.
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Validation(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = match &e {
            Error::InvalidFan(report) => format!("{}: {report}", e.code()),
            _ => e.to_string(),
        };
        match e {
            Error::RouteMismatch { .. } => Failure::Computation(msg),
            _ => Failure::Validation(msg),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate(args) => validate(&args),
        Command::Classify(args) => classify_cmd(&args),
        Command::Table { args, route, k, l } => table(&args, route, k, l),
        Command::Vanishing(args) => vanishing(&args),
        Command::Ishida { args, l } => ishida(&args, l),
        Command::Chow { args, k } => chow(&args, k),
        Command::Cocycles { args, k, l, f } => cocycles(&args, k, l, f.as_deref()),
        Command::Example { name, format } => example(name.as_deref(), format),
    }
}

fn read_fan(source: &str) -> Result<Fan, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown builtin `{name}` (available: {})",
                builtin_names().join(", ")
            ))
        });
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Failure::Usage(format!("cannot read `{source}`: {e}")))?;
    Ok(load_fan(&text)?)
}

fn complete_fan(source: &str) -> Result<Fan, Failure> {
    let fan = read_fan(source)?;
    let report = fan_validate(&fan, true);
    if !report.is_valid() {
        return Err(Error::InvalidFan(report).into());
    }
    Ok(fan)
}

fn parse_ints(text: &str, what: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("{what}: `{}` is not an integer", s.trim())))
        })
        .collect()
}

fn parse_divisor(fan: &Fan, text: &str) -> Result<Divisor, Failure> {
    let coeffs = parse_ints(text, "divisor")?;
    if coeffs.len() != fan.n_rays() {
        return Err(Failure::Usage(format!(
            "divisor has {} coefficients but the fan has {} rays",
            coeffs.len(),
            fan.n_rays()
        )));
    }
    Ok(Divisor::new(coeffs))
}

fn check_degree(fan: &Fan, name: &str, v: Option<usize>) -> Result<(), Failure> {
    match v {
        Some(x) if x > fan.rank() => Err(Failure::Usage(format!(
            "{name} = {x} exceeds the dimension {}",
            fan.rank()
        ))),
        _ => Ok(()),
    }
}

fn to_json(value: &Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    )
}

fn validate(args: &FanArgs) -> Outcome {
    let fan = read_fan(&args.fan)?;
    let report = fan_validate(&fan, true);
    let out = match args.format {
        Format::Json => to_json(&json!({
            "valid": report.is_valid(),
            "rank": fan.rank(),
            "rays": fan.n_rays(),
            "max_cones": fan.max_cones().len(),
            "issues": report.issues,
        })),
        Format::Text => {
            let mut s = format!(
                "rank {}, {} rays, {} maximal cones\n",
                fan.rank(),
                fan.n_rays(),
                fan.max_cones().len()
            );
            for issue in &report.issues {
                let _ = writeln!(s, "{}: {}", issue.kind.code(), issue.detail);
            }
            s.push_str(if report.is_valid() {
                "valid\n"
            } else {
                "invalid\n"
            });
            s
        }
    };
    if report.is_valid() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Validation(format!(
            "{}: {report}",
            report.issues[0].kind.code()
        )))
    }
}

fn classify_cmd(args: &DivisorArgs) -> Outcome {
    let fan = complete_fan(&args.fan.fan)?;
    let d = parse_divisor(&fan, &args.divisor)?;
    let c = classify(&fan, &d)?;
    let reason = match contraction(&fan, &d) {
        Err(e @ Error::NotSemiample(_)) => Some(e.to_string()),
        Err(e) => return Err(e.into()),
        Ok(_) => None,
    };
    Ok(match args.fan.format {
        Format::Json => to_json(&json!({
            "divisor": d.coeffs,
            "cartier": c.cartier,
            "semiample": c.semiample,
            "iitaka_dim": c.iitaka_dim,
            "reason": reason,
        })),
        Format::Text => {
            let mut s = format!(
                "cartier: {}\nsemiample: {}\n",
                if c.cartier { "yes" } else { "no" },
                if c.semiample { "yes" } else { "no" }
            );
            if let Some(i) = c.iitaka_dim {
                let _ = writeln!(s, "iitaka dimension: {i}");
            }
            if let Some(r) = reason {
                let _ = writeln!(s, "reason: {r}");
            }
            s
        }
    })
}

fn render_table(t: &HodgeTable) -> String {
    let width = t
        .entries
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        .max(3);
    let mut s = format!("route {}, d = {}, i = {}\n", t.route, t.d, t.i);
    let _ = write!(s, "{:>4}", "k\\l");
    for l in 0..=t.d {
        let _ = write!(s, " {l:>width$}");
    }
    s.push('\n');
    for (k, row) in t.entries.iter().enumerate() {
        let _ = write!(s, "{k:>4}");
        for v in row {
            let _ = write!(s, " {v:>width$}");
        }
        s.push('\n');
    }
    s
}

fn table(args: &DivisorArgs, route: Route, k: Option<usize>, l: Option<usize>) -> Outcome {
    let fan = complete_fan(&args.fan.fan)?;
    let d = parse_divisor(&fan, &args.divisor)?;
    check_degree(&fan, "k", k)?;
    check_degree(&fan, "l", l)?;
    let t = full_table(&fan, &d, route)?;
    if k.is_none() && l.is_none() {
        return Ok(match args.fan.format {
            Format::Json => to_json(&serde_json::to_value(&t).expect("table serializes")),
            Format::Text => render_table(&t),
        });
    }
    let cells: Vec<(usize, usize, i64)> = (0..=t.d)
        .flat_map(|a| (0..=t.d).map(move |b| (a, b)))
        .filter(|&(a, b)| k.is_none_or(|x| x == a) && l.is_none_or(|x| x == b))
        .map(|(a, b)| (a, b, t.get(a, b)))
        .collect();
    Ok(match args.fan.format {
        Format::Json => to_json(&json!({
            "d": t.d,
            "i": t.i,
            "route": t.route,
            "cells": cells.iter().map(|&(k, l, v)| json!({"k": k, "l": l, "value": v})).collect::<Vec<_>>(),
        })),
        Format::Text => cells
            .iter()
            .map(|(k, l, v)| format!("h^{k}(Ω^{l}) = {v}\n"))
            .collect(),
    })
}

fn vanishing(args: &DivisorArgs) -> Outcome {
    let fan = complete_fan(&args.fan.fan)?;
    let d = parse_divisor(&fan, &args.divisor)?;
    let report = vanishing_audit(&fan, &d)?;
    Ok(match args.fan.format {
        Format::Json => to_json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Text => {
            let mut s = render_table(&report.table);
            let _ = writeln!(
                s,
                "checked {} cells with k > l or l > k + i, {} cells of the column l = d",
                report.vanishing_region.len(),
                report.top_column.len()
            );
            for c in report.violations() {
                let _ = writeln!(s, "violation at (k={}, l={}): {}", c.k, c.l, c.value);
            }
            let _ = writeln!(
                s,
                "{} (i = {})",
                if report.pass { "PASS" } else { "FAIL" },
                report.i
            );
            s
        }
    })
}

fn ishida(args: &FanArgs, l: Option<usize>) -> Outcome {
    let fan = read_fan(&args.fan)?;
    check_degree(&fan, "l", l)?;
    let whole = FanSubset::whole(&fan);
    let mut rows = Vec::new();
    for deg in 0..=fan.rank() {
        if l.is_some_and(|x| x != deg) {
            continue;
        }
        let complex = build_ishida(&whole, deg)?;
        rows.push((deg, complex.term_dims(), cohomology_dims(&complex).dims));
    }
    Ok(match args.format {
        Format::Json => to_json(&Value::Array(
            rows.iter()
                .map(|(l, terms, h)| json!({"l": l, "term_dims": terms, "cohomology": h}))
                .collect(),
        )),
        Format::Text => rows
            .iter()
            .map(|(l, terms, h)| format!("l = {l}: terms {terms:?}, cohomology {h:?}\n"))
            .collect(),
    })
}

fn chow(args: &FanArgs, k: Option<usize>) -> Outcome {
    let fan = read_fan(&args.fan)?;
    check_degree(&fan, "k", k)?;
    let whole = FanSubset::whole(&fan);
    let mut rows = Vec::new();
    for deg in 0..=fan.rank() {
        if k.is_some_and(|x| x != deg) {
            continue;
        }
        let basis: Vec<Vec<usize>> = chow_basis(&whole, deg)
            .into_iter()
            .map(|c| fan.cone(c).rays.clone())
            .collect();
        rows.push((deg, chow_dim(&whole, deg), basis));
    }
    Ok(match args.format {
        Format::Json => to_json(&Value::Array(
            rows.iter()
                .map(|(k, dim, basis)| json!({"k": k, "dim": dim, "basis": basis}))
                .collect(),
        )),
        Format::Text => rows
            .iter()
            .map(|(k, dim, basis)| format!("A_{k}: dim {dim}, basis {basis:?}\n"))
            .collect(),
    })
}

fn cocycles(args: &DivisorArgs, k: usize, l: usize, f: Option<&str>) -> Outcome {
    let fan = complete_fan(&args.fan.fan)?;
    let d = parse_divisor(&fan, &args.divisor)?;
    check_degree(&fan, "k", Some(k))?;
    check_degree(&fan, "l", Some(l))?;
    let f = f.map(|s| parse_ints(s, "f")).transpose()?;
    let gens = generators(&fan, &d, k, l)?;
    let mut emitted = Vec::with_capacity(gens.len());
    for g in &gens {
        emitted.push(emit_cech_cocycle(&fan, &d, g, f.as_deref())?);
    }
    Ok(match args.fan.format {
        Format::Json => to_json(&json!({
            "k": k,
            "l": l,
            "count": gens.len(),
            "cocycles": gens
                .iter()
                .zip(&emitted)
                .map(|(g, c)| json!({"generator": g, "cocycle": c}))
                .collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("{} generators of H^{k}(Ω^{l})\n", gens.len());
            for (n, (g, c)) in gens.iter().zip(&emitted).enumerate() {
                let omega: Vec<String> = g.omega.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(
                    s,
                    "\n# generator {n}: point {:?}, gamma {:?}, omega [{}], A = {}",
                    g.point,
                    g.gamma_rays,
                    omega.join(" ^ "),
                    render_monomial(&g.a_exponents)
                );
                s.push_str(&c.render());
            }
            s
        }
    })
}

fn example(name: Option<&str>, format: Format) -> Outcome {
    let Some(name) = name else {
        return Ok(match format {
            Format::Json => to_json(&Value::Array(
                builtin_names()
                    .iter()
                    .map(|n| json!({"name": n, "description": toricoh::builtin::describe(n)}))
                    .collect(),
            )),
            Format::Text => builtin_names()
                .iter()
                .map(|n| {
                    format!(
                        "{n:<8}{}\n",
                        toricoh::builtin::describe(n).unwrap_or_default()
                    )
                })
                .collect(),
        });
    };
    let fan = builtin(name).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown builtin `{name}` (available: {})",
            builtin_names().join(", ")
        ))
    })?;
    Ok(match format {
        Format::Json => to_json(
            &serde_json::to_value(toricoh::lattice::fan_to_file(&fan)).expect("fan serializes"),
        ),
        Format::Text => render_fan_toml(&fan),
    })
}
