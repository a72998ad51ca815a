//! Command-line surface over the library: exact counts, the lattice listing,
//! both directions of every bijection, the verification suite, the order
//! complex experiment, and SVG figures.
//!
//! Exit codes: 0 for success (including a passing verification), 1 for a
//! failed verification, 2 for usage or input problems.  Usage problems are
//! written to standard error, results to standard output or `--out`.  Plain
//! text output is stable and golden-testable; `--format json` switches to the
//! machine format.  The environment variable `REFLPARK_CAP` (overridden by
//! `--cap`) bounds how large a group the enumeration commands will expand.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;
use serde_json::json;

use crate::absolute::{nc_interval, parabolic_subgroup};
use crate::bijection::{from_vector, to_vector, ParkVector};
use crate::fuss::{
    annular_labeled, enumerate_multichains, fuss_from_vector, fuss_to_vector, nabla_labeled,
    FussParkingFunction,
};
use crate::group::{Family, GroupContext};
use crate::model::orbit_partition;
use crate::parking::ParkingFunction;
use crate::render::{svg_annulus, svg_circle, svg_labeled, RenderSpec};
use crate::verify::{default_grid, euler_experiment, park_count_formula, run_suite};
use crate::{Error, Result};

const DEFAULT_CAP: u64 = 1_000_000;
/// Cells larger than this are skipped by the bare `euler` command.
const EULER_PARK_LIMIT: u64 = 1_000;

#[derive(Parser)]
#[command(
    name = "reflpark",
    version,
    about = "Noncrossing parking functions of G(d,1,n) and G(d,d,n) and their root-of-unity vectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "d1n")]
    D1n,
    #[value(name = "ddn")]
    Ddn,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::D1n => Family::D1N,
            FamilyArg::Ddn => Family::DDN,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct GroupArgs {
    /// Group family: d1n for G(d,1,n), ddn for G(d,d,n).
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Color order d.
    #[arg(long)]
    d: usize,
    /// Number of coordinates n.
    #[arg(long)]
    n: usize,
}

impl GroupArgs {
    fn context(&self) -> Result<GroupContext> {
        GroupContext::new(self.family.into(), self.d, self.n)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the result to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapArg {
    /// Enumeration size cap; defaults to REFLPARK_CAP or one million.
    #[arg(long)]
    cap: Option<u64>,
}

impl CapArg {
    fn resolve(&self) -> Result<u64> {
        if let Some(cap) = self.cap {
            return Ok(cap);
        }
        match std::env::var("REFLPARK_CAP") {
            Ok(text) => text.parse().map_err(|_| {
                Error::InvalidParameters(format!("REFLPARK_CAP is not an integer: {text}"))
            }),
            Err(_) => Ok(DEFAULT_CAP),
        }
    }

    /// The enumeration commands expand the whole group, so the group order
    /// itself must fit under the cap.
    fn admit(&self, ctx: &GroupContext) -> Result<u64> {
        let cap = self.resolve()?;
        if ctx.order > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: ctx.order.to_u64_digits().first().map_or(u128::MAX, |&x| x as u128),
                cap: cap as u128,
            });
        }
        Ok(cap)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    /// The full verification grid over both families.
    Default,
    /// Three small cells, for a fast smoke run.
    Quick,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count noncrossing parking functions by expanding cosets over NC(W,c).
    Count {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count chained parking functions for a Fuss parameter k.
    FussCount {
        #[command(flatten)]
        group: GroupArgs,
        /// Fuss parameter.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List NC(W,c): one element and its circular partition per line.
    Nc {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map a parking function `w=... ; pi=...` to its vector.
    Map {
        #[command(flatten)]
        group: GroupArgs,
        /// Parking function text.
        #[arg(long)]
        pf: String,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map a vector back to its parking function.
    Unmap {
        #[command(flatten)]
        group: GroupArgs,
        /// Vector text: comma-separated `Z` or `i:j` entries.
        #[arg(long)]
        vector: String,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map a chained parking function `w=... ; chain=...` to its vector.
    FussMap {
        #[command(flatten)]
        group: GroupArgs,
        /// Fuss parameter; must match the chain length when given.
        #[arg(short, long)]
        k: Option<usize>,
        /// Chained parking function text.
        #[arg(long)]
        fpf: String,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map a vector back to its chained parking function.
    FussUnmap {
        #[command(flatten)]
        group: GroupArgs,
        /// Fuss parameter.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Vector text: comma-separated `Z` or `i:j` entries.
        #[arg(long)]
        vector: String,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the verification suite and report every check.
    Verify {
        /// Which grid of cells to verify.
        #[arg(long, value_enum, default_value_t = GridArg::Default)]
        grid: GridArg,
        /// Largest Fuss parameter swept per cell.
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduced Euler characteristic of the parking poset after removing its
    /// unique maximum, reported beside (h-1)^r without being asserted.
    Euler {
        /// Group family; omit family, d, and n to sweep the small default cells.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Color order d.
        #[arg(long)]
        d: Option<usize>,
        /// Number of coordinates n.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a model as SVG, from a parking function, a chained one, or a vector.
    Render {
        #[command(flatten)]
        group: GroupArgs,
        /// Fuss parameter used when inverting `--vector`.
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Parking function text `w=... ; pi=...` (k = 1 pictures).
        #[arg(long)]
        pf: Option<String>,
        /// Chained parking function text `w=... ; chain=...`.
        #[arg(long)]
        fpf: Option<String>,
        /// Vector text, inverted before drawing.
        #[arg(long)]
        vector: Option<String>,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Entry point for the binary: parses real argv and writes to the real
/// standard streams.
pub fn run() -> i32 {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_from(std::env::args().collect(), &mut stdout, &mut stderr)
}

/// Testable entry point: parses the given argv and writes to the given
/// streams, returning the exit code.
pub fn run_from(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write!(stdout, "{err}");
                return 0;
            }
            _ => {
                let _ = write!(stderr, "{err}");
                return 2;
            }
        },
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            2
        }
    }
}

fn emit(output: &OutputArgs, payload: &str, stdout: &mut dyn Write) -> Result<()> {
    let mut text = payload.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidParameters(format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = write!(stdout, "{text}");
            Ok(())
        }
    }
}

fn vector_m(ctx: &GroupContext, k: usize) -> usize {
    match ctx.family {
        Family::D1N => k * ctx.n,
        Family::DDN => k * (ctx.n - 1),
    }
}

/// Coset count Σ |W| / |W_π| over the lattice, without materializing cosets.
fn park_count(ctx: &GroupContext) -> Result<u64> {
    let order = ctx.elements()?.len() as u128;
    let mut total: u128 = 0;
    for &pi in nc_interval(ctx)? {
        let sub = parabolic_subgroup(ctx, ctx.element(pi))?;
        total += order / sub.len() as u128;
    }
    Ok(total as u64)
}

fn fuss_park_count(ctx: &GroupContext, k: usize, cap: u64) -> Result<u64> {
    let chains = crate::verify::fuss_catalan(ctx, k);
    if chains > cap {
        return Err(Error::CapExceeded { needed: chains as u128, cap: cap as u128 });
    }
    let order = ctx.elements()?.len() as u128;
    let mut total: u128 = 0;
    for chain in enumerate_multichains(ctx, k)? {
        let sub = parabolic_subgroup(ctx, ctx.element(chain.parts[0]))?;
        total += order / sub.len() as u128;
    }
    Ok(total as u64)
}

fn group_json(ctx: &GroupContext) -> serde_json::Value {
    json!({ "family": ctx.family, "d": ctx.d, "n": ctx.n })
}

fn execute(cmd: Cmd, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Count { group, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let count = park_count(&ctx)?;
            let payload = match output.format {
                FormatArg::Text => count.to_string(),
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["count"] = json!(count);
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::FussCount { group, k, cap, output } => {
            let ctx = group.context()?;
            let cap = cap.admit(&ctx)?;
            let count = fuss_park_count(&ctx, k, cap)?;
            let payload = match output.format {
                FormatArg::Text => count.to_string(),
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["k"] = json!(k);
                    obj["count"] = json!(count);
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::Nc { group, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let mut rows = Vec::new();
            for &id in nc_interval(&ctx)? {
                let w = ctx.element(id);
                rows.push((w.to_string(), orbit_partition(&ctx, w)?.to_text()));
            }
            let payload = match output.format {
                FormatArg::Text => rows
                    .iter()
                    .map(|(w, p)| format!("{w}\t{p}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
                FormatArg::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|(w, p)| json!({ "element": w, "partition": p }))
                        .collect();
                    let mut obj = group_json(&ctx);
                    obj["count"] = json!(rows.len());
                    obj["elements"] = json!(items);
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::Map { group, pf, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let pf = ParkingFunction::parse(&ctx, &pf)?;
            let v = to_vector(&ctx, &pf)?;
            let payload = match output.format {
                FormatArg::Text => v.to_text(),
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["pf"] = json!(pf.to_text(&ctx)?);
                    obj["vector"] = json!(v.to_text());
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::Unmap { group, vector, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let v = ParkVector::parse(ctx.d, vector_m(&ctx, 1), ctx.n, &vector)?;
            let pf = from_vector(&ctx, &v)?;
            let payload = match output.format {
                FormatArg::Text => pf.to_text(&ctx)?,
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["vector"] = json!(v.to_text());
                    obj["pf"] = json!(pf.to_text(&ctx)?);
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::FussMap { group, k, fpf, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let fpf = FussParkingFunction::parse(&ctx, &fpf)?;
            if let Some(k) = k {
                if k != fpf.chain.k() {
                    return Err(Error::InvalidParameters(format!(
                        "-k {k} does not match the chain length {}",
                        fpf.chain.k()
                    )));
                }
            }
            let v = fuss_to_vector(&ctx, &fpf)?;
            let payload = match output.format {
                FormatArg::Text => v.to_text(),
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["k"] = json!(fpf.chain.k());
                    obj["fpf"] = json!(fpf.to_text(&ctx));
                    obj["vector"] = json!(v.to_text());
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::FussUnmap { group, k, vector, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let v = ParkVector::parse(ctx.d, vector_m(&ctx, k), ctx.n, &vector)?;
            let fpf = fuss_from_vector(&ctx, k, &v)?;
            let payload = match output.format {
                FormatArg::Text => fpf.to_text(&ctx),
                FormatArg::Json => {
                    let mut obj = group_json(&ctx);
                    obj["k"] = json!(k);
                    obj["vector"] = json!(v.to_text());
                    obj["fpf"] = json!(fpf.to_text(&ctx));
                    serde_json::to_string_pretty(&obj).unwrap()
                }
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::Verify { grid, k_max, output } => {
            let cells = match grid {
                GridArg::Default => default_grid(),
                GridArg::Quick => vec![
                    (Family::D1N, 2, 2),
                    (Family::D1N, 1, 3),
                    (Family::DDN, 3, 2),
                ],
            };
            let report = run_suite(&cells, k_max)?;
            let payload = match output.format {
                FormatArg::Text => report.to_text(),
                FormatArg::Json => serde_json::to_string_pretty(&report).unwrap(),
            };
            emit(&output, &payload, stdout)?;
            Ok(if report.pass() { 0 } else { 1 })
        }
        Cmd::Euler { family, d, n, output } => {
            let cells: Vec<GroupContext> = match (family, d, n) {
                (Some(f), Some(d), Some(n)) => vec![GroupContext::new(f.into(), d, n)?],
                (None, None, None) => {
                    let mut cells = Vec::new();
                    for (f, d, n) in default_grid() {
                        let ctx = GroupContext::new(f, d, n)?;
                        if park_count_formula(&ctx, 1) <= EULER_PARK_LIMIT {
                            cells.push(ctx);
                        }
                    }
                    cells
                }
                _ => {
                    return Err(Error::InvalidParameters(
                        "give all of --family, --d, --n, or none of them".into(),
                    ))
                }
            };
            let mut results = Vec::new();
            for ctx in &cells {
                results.push(euler_experiment(ctx)?);
            }
            let payload = match output.format {
                FormatArg::Text => {
                    let mut lines = vec![
                        "# order complex of the parking poset, unique maximum removed".to_string(),
                        "# chi = reduced Euler characteristic; target = (h-1)^r, reported only"
                            .to_string(),
                    ];
                    for e in &results {
                        lines.push(format!(
                            "{} d={} n={} park={} chi={} target={}",
                            e.family, e.d, e.n, e.park, e.chi, e.target
                        ));
                    }
                    lines.join("\n")
                }
                FormatArg::Json => serde_json::to_string_pretty(&results).unwrap(),
            };
            emit(&output, &payload, stdout)?;
            Ok(0)
        }
        Cmd::Render { group, k, pf, fpf, vector, cap, output } => {
            let ctx = group.context()?;
            cap.admit(&ctx)?;
            let spec = RenderSpec::default();
            let given = [pf.is_some(), fpf.is_some(), vector.is_some()];
            if given.iter().filter(|&&g| g).count() != 1 {
                return Err(Error::InvalidParameters(
                    "give exactly one of --pf, --fpf, --vector".into(),
                ));
            }
            let svg = if let Some(text) = pf {
                if k != 1 {
                    return Err(Error::InvalidParameters(
                        "--pf draws the k = 1 picture; use --fpf for chains".into(),
                    ));
                }
                svg_circle(&ctx, &ParkingFunction::parse(&ctx, &text)?, &spec)?
            } else {
                let fpf = match (fpf, vector) {
                    (Some(text), _) => {
                        let fpf = FussParkingFunction::parse(&ctx, &text)?;
                        if k != 1 && k != fpf.chain.k() {
                            return Err(Error::InvalidParameters(format!(
                                "-k {k} does not match the chain length {}",
                                fpf.chain.k()
                            )));
                        }
                        fpf
                    }
                    (None, Some(text)) => {
                        let v = ParkVector::parse(ctx.d, vector_m(&ctx, k), ctx.n, &text)?;
                        fuss_from_vector(&ctx, k, &v)?
                    }
                    (None, None) => unreachable!("validated above"),
                };
                let k = fpf.chain.k();
                match ctx.family {
                    Family::D1N => svg_labeled(&nabla_labeled(&ctx, &fpf)?, &spec)?,
                    Family::DDN => svg_annulus(&ctx, k, &annular_labeled(&ctx, &fpf)?, &spec)?,
                }
            };
            emit(&output, &svg, stdout)?;
            Ok(0)
        }
    }
}
