//! The `kr-torus` command line.
//!
//! Exit codes: 0 on success, 1 when the input is rejected (malformed file,
//! not a torus, KR-graph not a tree), 2 when an internal check fails.
//! With `--format json`, diagnostics on stderr are JSON objects too.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use krtorus_core::homology::render_diagonal;
use krtorus_core::pipeline::ReebReport;
use krtorus_core::{
    analyze, compute_reeb, smith_normal_form, total_index, verify_extension, AnalysisError, AnalysisReport, ClosedSurface,
    Cyclic, ErrorClass, IntMatrix, SurfaceField, VertexKind,
};

use crate::dot::reeb_dot;
use crate::format::{parse_field, write_field, FormatError};
use crate::presets::Preset;

#[derive(Debug, Parser)]
#[command(name = "kr-torus", version, about = "Orbit groups of functions on the torus with a tree KR-graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a field file describes a closed orientable surface.
    Validate {
        /// `torus-field v1` file, or `-` for stdin.
        input: PathBuf,
    },
    /// Compute the KR-graph.
    Reeb { input: PathBuf },
    /// Run the full analysis and print the orbit group.
    Analyze { input: PathBuf },
    /// Instantiate the orbit group with concrete cyclic atoms and check the
    /// extension identities.
    Verify {
        input: PathBuf,
        /// Comma-separated atoms, e.g. `Z2,Z3` or `1`. A single atom is used
        /// for every disk orbit.
        #[arg(long)]
        atoms: String,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        /// Rows separated by `;`, entries by `,`, e.g. `2,2;0,4`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Sample a preset field on the grid torus.
    Gen {
        #[arg(value_parser = parse_preset, conflicts_with = "preset_flag")]
        preset: Option<Preset>,
        #[arg(long = "preset", id = "preset_flag", value_parser = parse_preset)]
        preset_flag: Option<Preset>,
        /// Grid size N.
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: crate::presets::UnknownPreset| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub class: &'static str,
    pub exit_code: i32,
    pub message: String,
}

impl Diagnostic {
    fn new(code: &'static str, class: ErrorClass, message: impl Into<String>) -> Self {
        let name = match class {
            ErrorClass::Input => "input",
            ErrorClass::HypothesisViolation => "hypothesis-violation",
            ErrorClass::Internal => "internal",
        };
        Diagnostic { code, class: name, exit_code: class.exit_code(), message: message.into() }
    }

    fn input(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic::new(code, ErrorClass::Input, message)
    }
}

impl From<AnalysisError> for Diagnostic {
    fn from(e: AnalysisError) -> Self {
        Diagnostic::new(e.code(), e.class(), e.to_string())
    }
}

impl From<FormatError> for Diagnostic {
    fn from(e: FormatError) -> Self {
        Diagnostic::input("invalid-input", e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let d = Diagnostic::input("usage", e.render().to_string().trim_end());
            report_error(&d, wants_json(&args), stderr);
            return d.exit_code;
        }
    };
    let json = cli.format == OutputFormat::Json;
    match execute(&cli, stdin) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| (path.clone(), e)),
                None => stdout.write_all(text.as_bytes()).map_err(|e| (PathBuf::from("<stdout>"), e)),
            };
            match written {
                Ok(()) => 0,
                Err((path, e)) => {
                    let d = Diagnostic::input("io", format!("cannot write {}: {e}", path.display()));
                    report_error(&d, json, stderr);
                    d.exit_code
                }
            }
        }
        Err(d) => {
            report_error(&d, json, stderr);
            d.exit_code
        }
    }
}

fn wants_json(args: &[OsString]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

fn report_error(d: &Diagnostic, json: bool, stderr: &mut dyn Write) {
    let _ = if json {
        writeln!(stderr, "{}", json!({ "error": d }))
    } else {
        writeln!(stderr, "error[{}]: {}", d.code, d.message)
    };
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, Diagnostic> {
    let allowed: &[OutputFormat] = match cli.command {
        Command::Reeb { .. } | Command::Analyze { .. } => &[OutputFormat::Text, OutputFormat::Json, OutputFormat::Dot],
        Command::Gen { .. } => &[OutputFormat::Text],
        _ => &[OutputFormat::Text, OutputFormat::Json],
    };
    if !allowed.contains(&cli.format) {
        return Err(Diagnostic::input("usage", format!("--format {:?} is not available for this command", cli.format).to_lowercase()));
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { input } => validate(&load(input, stdin)?, fmt),
        Command::Reeb { input } => reeb(load(input, stdin)?, fmt),
        Command::Analyze { input } => analyze_cmd(load(input, stdin)?, fmt),
        Command::Verify { input, atoms } => verify(load(input, stdin)?, atoms, fmt),
        Command::Snf { matrix } => snf(matrix, fmt),
        Command::Gen { preset, preset_flag, grid } => {
            let preset = preset.or(*preset_flag).ok_or_else(|| Diagnostic::input("usage", "gen needs a preset name"))?;
            if *grid < 8 {
                return Err(Diagnostic::input("usage", format!("grid size {grid} is below the minimum 8")));
            }
            let mut text = format!("torus-field v1\n# {}: {} on a {grid}x{grid} grid\n", preset.name(), preset.formula());
            text.push_str(write_field(&preset.sample(*grid)).trim_start_matches("torus-field v1\n"));
            Ok(text)
        }
    }
}

fn load(path: &Path, stdin: &mut dyn Read) -> Result<SurfaceField, Diagnostic> {
    let mut text = String::new();
    if path == Path::new("-") {
        stdin.read_to_string(&mut text).map_err(|e| Diagnostic::input("io", format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Diagnostic::input("io", format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(parse_field(&text)?)
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn closed(field: SurfaceField) -> Result<ClosedSurface, Diagnostic> {
    ClosedSurface::new(field).map_err(|e| AnalysisError::from(e).into())
}

fn validate(field: &SurfaceField, fmt: OutputFormat) -> Result<String, Diagnostic> {
    let s = closed(field.clone())?;
    let summary = s.summary();
    let count = |kind: VertexKind| s.classes().iter().filter(|c| c.kind == kind).count();
    let saddles: usize = s.classes().iter().filter(|c| c.kind == VertexKind::Saddle).map(|c| c.multiplicity).sum();
    let (mins, maxs, sad) = (count(VertexKind::Minimum), count(VertexKind::Maximum), count(VertexKind::Saddle));
    let index = total_index(&s);
    if index != summary.chi {
        return Err(Diagnostic::new("index-sum", ErrorClass::Internal, format!("PL indices sum to {index}, chi is {}", summary.chi)));
    }
    Ok(match fmt {
        OutputFormat::Json => to_json(&json!({
            "vertices": s.vertex_count(),
            "edges": s.edge_count(),
            "triangles": s.triangle_count(),
            "chi": summary.chi,
            "genus": summary.genus,
            "is_torus": summary.chi == 0,
            "critical": { "minima": mins, "maxima": maxs, "saddles": sad, "saddle_multiplicity": saddles },
            "total_index": index,
        })),
        _ => format!(
            "closed orientable surface: V={} E={} T={} chi={} genus={}\ncritical: {mins} min, {maxs} max, {sad} saddle (multiplicity {saddles}); index sum {index}\n",
            s.vertex_count(),
            s.edge_count(),
            s.triangle_count(),
            summary.chi,
            summary.genus
        ),
    })
}

fn reeb(field: SurfaceField, fmt: OutputFormat) -> Result<String, Diagnostic> {
    let s = closed(field)?;
    let g = compute_reeb(&s).map_err(|e| Diagnostic::from(AnalysisError::from(e)))?;
    let r = ReebReport::new(&g);
    Ok(match fmt {
        OutputFormat::Json => to_json(&r),
        OutputFormat::Dot => reeb_dot(&g, None),
        OutputFormat::Text => {
            let mut out = format!("KR-graph: {} nodes, {} edges, b1={}, tree={}\n", r.nodes, r.edges, r.betti1, r.is_tree);
            for n in &r.node_list {
                writeln!(out, "  node {} level {} [{}] degree {}", n.id, n.level, n.kinds.join(" "), n.degree).unwrap();
            }
            for e in &r.edge_list {
                writeln!(out, "  edge {} {} -- {}", e.id, e.lower, e.upper).unwrap();
            }
            out
        }
    })
}

fn full_report(field: SurfaceField) -> Result<(krtorus_core::Analysis, AnalysisReport), Diagnostic> {
    let a = analyze(field)?;
    let report = a.report()?;
    Ok((a, report))
}

fn analyze_cmd(field: SurfaceField, fmt: OutputFormat) -> Result<String, Diagnostic> {
    let (a, r) = full_report(field)?;
    Ok(match fmt {
        OutputFormat::Json => to_json(&r),
        OutputFormat::Dot => reeb_dot(&a.reeb, Some(a.special)),
        OutputFormat::Text => text_report(&r),
    })
}

fn text_report(r: &AnalysisReport) -> String {
    let sym = &r.symmetry;
    let sp = &r.special;
    let mut out = String::new();
    writeln!(out, "surface: V={} T={} chi={} genus={}", r.surface.vertices, r.surface.triangles, r.surface.chi, r.surface.genus).unwrap();
    writeln!(out, "KR-graph: {} nodes, {} edges, tree", r.reeb.nodes, r.reeb.edges).unwrap();
    let chis: Vec<String> = sp.branch_chis.iter().map(i64::to_string).collect();
    writeln!(out, "special vertex: node {} at level {} (branch chi {})", sp.node, sp.level, chis.join(",")).unwrap();
    writeln!(out, "cells: {} zero, {} one, {} two", sp.zero_cells, sp.one_cells, sp.two_cells).unwrap();
    writeln!(out, "symmetry: order {}, n={}, m={}, r={}", sym.order, sym.n, sym.m, sym.r).unwrap();
    for d in &r.disks {
        writeln!(out, "disk D_{}00: cell {}, {} triangles, interior {}", d.id, d.cell, d.triangles, d.interior_critical.join(" ")).unwrap();
    }
    writeln!(out, "group: {}", r.group.expr).unwrap();
    out
}

pub fn parse_atoms(list: &str) -> Result<Vec<Cyclic>, String> {
    list.split(',')
        .map(|a| {
            let a = a.trim();
            let digits = a.strip_prefix("Z_").or_else(|| a.strip_prefix('Z')).unwrap_or(a);
            match digits.parse::<u64>() {
                Ok(k) if k >= 1 && (digits != a || k == 1) => Ok(Cyclic(k)),
                _ => Err(format!("bad atom `{a}` (expected 1, Z1, Z2, ...)")),
            }
        })
        .collect()
}

fn verify(field: SurfaceField, atoms: &str, fmt: OutputFormat) -> Result<String, Diagnostic> {
    let mut atoms = parse_atoms(atoms).map_err(|e| Diagnostic::input("usage", e))?;
    let (_, r) = full_report(field)?;
    if atoms.len() == 1 {
        atoms = vec![atoms[0]; r.symmetry.r];
    }
    let v = verify_extension(&r, &atoms).map_err(|e| Diagnostic::input("atoms", e.to_string()))?;
    let out = match fmt {
        OutputFormat::Json => to_json(&v),
        _ => {
            let mut out = format!("W = {}\n", v.expr);
            for c in &v.checks {
                writeln!(out, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail).unwrap();
            }
            out
        }
    };
    if v.passed() {
        Ok(out)
    } else {
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Diagnostic::new("verification-failed", ErrorClass::Internal, format!("failed checks: {}", failed.join(", "))))
    }
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| row.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad entry `{}`", x.trim()))).collect())
        .collect::<Result<_, _>>()?;
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err("rows have different lengths".into());
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_rows(&refs))
}

fn matrix_json(m: &IntMatrix) -> Value {
    let entry = |i, j| {
        let s = m.get(i, j).to_string();
        s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
    };
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| entry(i, j)).collect())).collect())
}

fn snf(text: &str, fmt: OutputFormat) -> Result<String, Diagnostic> {
    let a = parse_matrix(text).map_err(|e| Diagnostic::input("usage", e))?;
    let r = smith_normal_form(&a);
    if r.u.mul(&a).mul(&r.v) != r.d {
        return Err(Diagnostic::new("snf", ErrorClass::Internal, "U A V differs from D"));
    }
    Ok(match fmt {
        OutputFormat::Json => to_json(&json!({
            "D": matrix_json(&r.d),
            "U": matrix_json(&r.u),
            "V": matrix_json(&r.v),
            "rank": r.rank,
            "invariant_factors": r.invariant_factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        })),
        _ => format!("D={}\nU={}\nV={}\n", render_diagonal(&r.d), r.u, r.v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        assert_eq!(parse_atoms("Z2,Z3").unwrap(), vec![Cyclic(2), Cyclic(3)]);
        assert_eq!(parse_atoms("1, Z_4").unwrap(), vec![Cyclic(1), Cyclic(4)]);
        assert!(parse_atoms("Z0").is_err());
        assert!(parse_atoms("3").is_err());
        assert!(parse_atoms("S3").is_err());
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("2,2;0,4").unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[&[2, 2], &[0, 4]]));
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x").is_err());
        assert_eq!(parse_matrix("-1,2,3").unwrap().cols(), 3);
    }
}
