use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jacobian_newton::chains::{audit_report, enumerate, validate_chain, ChainVerdict, EnumConfig};
use jacobian_newton::homogform::{family_witness, witness_search, Family, HomogError, SearchConfig};
use jacobian_newton::lattice::{lower_side_edges, newton_polygon};
use jacobian_newton::obstruction::{edge_obstruction_test, pair_polygon_audit, slope_one_audit, tilde_j, Verdict};
use jacobian_newton::report::{parse_chain, report_to_csv, report_to_json};
use jacobian_newton::{parse_poly, Direction, LatticePoint, LaurentPoly};

#[derive(Parser)]
#[command(
    name = "jnewton",
    version,
    about = "Newton polygons, companion brackets and corner enumeration"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Polygon data of a single polynomial.
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Audits of a candidate pair (P,Q).
    Pair {
        #[command(subcommand)]
        cmd: PairCmd,
    },
    /// Candidate lower-side corners.
    Corners {
        #[command(subcommand)]
        cmd: CornersCmd,
    },
    /// Companion witnesses and chains.
    Witness {
        #[command(subcommand)]
        cmd: WitnessCmd,
    },
    /// Closed-form witness families.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Support, hull corners, lower-side edges and direction set.
    Show {
        #[arg(long)]
        expr: String,
        /// Direction `R,S` for the leading form.
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
    },
}

#[derive(Subcommand)]
enum PairCmd {
    /// Polygon restrictions, slope-1 edges and edge obstructions.
    Audit {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum CornersCmd {
    /// Classify every candidate corner with v11 below the bound.
    Enumerate {
        #[arg(long)]
        bound: i64,
        /// Comma-separated rationals used as roots in the witness search.
        #[arg(long, allow_hyphen_values = true)]
        pool: Option<String>,
        #[arg(long)]
        imax: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Validate a chain stored as JSON.
    Verify {
        #[arg(long)]
        file: String,
    },
    /// Search an edge for a companion pair.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        st: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long)]
        steps: i64,
        #[arg(long, allow_hyphen_values = true)]
        pool: Option<String>,
        #[arg(long)]
        imax: Option<u32>,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Print R, G and i for a family member.
    Emit {
        #[arg(long)]
        name: String,
        /// `key=value` pairs, comma separated or repeated.
        #[arg(long, allow_hyphen_values = true)]
        params: Vec<String>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Violations,
}

/// A usage or input error; reported on stderr with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn poly(text: &str) -> Result<LaurentPoly, Usage> {
    parse_poly(text).map_err(|e| Usage(format!("{text:?}: {e}")))
}

fn int_pair(text: &str) -> Result<(i64, i64), Usage> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.parse()?, b.parse()?)),
        _ => Err(Usage(format!("expected two integers A,B, got {text:?}"))),
    }
}

fn direction(text: &str) -> Result<Direction, Usage> {
    let (r, s) = int_pair(text)?;
    Ok(Direction::new(r, s)?)
}

fn search_config(pool: Option<&str>, imax: Option<u32>) -> Result<SearchConfig, Usage> {
    let mut cfg = SearchConfig::default();
    if let Some(list) = pool {
        cfg.pool = list
            .split(',')
            .map(|s| {
                poly(s)?
                    .as_constant()
                    .ok_or_else(|| Usage(format!("pool entry {s:?} is not a rational")))
            })
            .collect::<Result<_, _>>()?;
    }
    if let Some(i) = imax {
        if i < 2 {
            return Err(Usage("--imax must be at least 2".into()));
        }
        cfg.i_max = i;
    }
    Ok(cfg)
}

fn points(ps: &[LatticePoint]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn poly_show(expr: &str, dir: Option<&str>) -> Result<Outcome, Usage> {
    let p = poly(expr)?;
    println!("poly: {p}");
    if p.is_zero() {
        return Ok(Outcome::Ok);
    }
    let support = p.support();
    let corners = newton_polygon(&support)?;
    println!("support: {}", points(&support));
    println!("corners: {}", points(&corners));
    for e in lower_side_edges(&corners) {
        println!("lower edge: {} -> {} along {}", e.start, e.end, e.dir);
    }
    let dirs = p.dir_set()?;
    println!(
        "dir set: {}",
        dirs.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
    );
    if let Some(d) = dir {
        let d = direction(d)?;
        let (st, en) = p.st_en(d)?;
        println!("v_deg{d}: {}", p.v_deg(d)?);
        println!("leading form: {}", p.leading_form(d)?);
        println!("st: {st}");
        println!("en: {en}");
    }
    Ok(Outcome::Ok)
}

fn pair_audit(p: &str, q: &str) -> Result<Outcome, Usage> {
    let (p, q) = (poly(p)?, poly(q)?);
    if p.is_zero() || q.is_zero() {
        return Err(Usage("P and Q must be nonzero".into()));
    }
    let mut bad = false;
    println!("bracket: {}", LaurentPoly::bracket(&p, &q));
    let violations = pair_polygon_audit(&p, &q);
    for v in &violations {
        println!("violation: {v}");
    }
    bad |= !violations.is_empty();
    for (name, f) in [("P", &p), ("Q", &q)] {
        for e in slope_one_audit(f)? {
            println!("slope-1 edge of {name}: {} -> {}", e.start, e.end);
            bad = true;
        }
    }
    let jt = tilde_j(&p, &q);
    println!("tilde-J: {jt}");
    for d in p.dir_set()? {
        if d.rho() <= 0 {
            continue;
        }
        match edge_obstruction_test(&p, &q, d) {
            Ok((res, verdict)) => {
                println!("edge {d}: resultant {res}, {verdict}");
                bad |= verdict == Verdict::Obstructed;
            }
            Err(e) => println!("edge {d}: {e}"),
        }
    }
    Ok(if bad { Outcome::Violations } else { Outcome::Ok })
}

fn corners_enumerate(
    bound: i64,
    pool: Option<&str>,
    imax: Option<u32>,
    format: Format,
    out: Option<&str>,
) -> Result<Outcome, Usage> {
    if bound < 1 {
        return Err(Usage("--bound must be positive".into()));
    }
    let cfg = EnumConfig {
        search: search_config(pool, imax)?,
    };
    let report = enumerate(bound, &cfg);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report_to_json(&report))? + "\n",
        Format::Csv => report_to_csv(&report),
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    let violations = audit_report(&report);
    for v in &violations {
        eprintln!("audit: {v}");
    }
    Ok(if violations.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Violations
    })
}

fn witness_verify(file: &str) -> Result<Outcome, Usage> {
    let text = fs::read_to_string(file).map_err(|e| Usage(format!("{file}: {e}")))?;
    let chain = parse_chain(&text)?;
    match validate_chain(&chain) {
        Ok(ChainVerdict::Valid) => {
            println!("valid");
            Ok(Outcome::Ok)
        }
        Ok(ChainVerdict::SkeletonValid) => {
            println!("skeleton valid (some edges lack R or G)");
            Ok(Outcome::Ok)
        }
        Err(vs) => {
            for v in vs {
                println!("violation: {v}");
            }
            Ok(Outcome::Violations)
        }
    }
}

fn witness_search_cmd(
    st: &str,
    dir: &str,
    steps: i64,
    pool: Option<&str>,
    imax: Option<u32>,
) -> Result<Outcome, Usage> {
    let (a, b) = int_pair(st)?;
    let d = direction(dir)?;
    let cfg = search_config(pool, imax)?;
    match witness_search(LatticePoint::int(a, b), d, steps, &cfg) {
        Ok(Some(w)) => {
            println!("R = {}", w.r);
            println!("G = {}", w.g);
            println!("i = {}", w.i);
            Ok(Outcome::Ok)
        }
        Ok(None) => {
            println!("no witness in the search space");
            Ok(Outcome::Ok)
        }
        Err(e @ HomogError::EdgeRejected { .. }) => {
            println!("{e}");
            Ok(Outcome::Violations)
        }
        Err(e) => Err(e.into()),
    }
}

fn family_emit(name: &str, params: &[String]) -> Result<Outcome, Usage> {
    let mut map = BTreeMap::new();
    for kv in params
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
    {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Usage(format!("parameter {kv:?} is not key=value")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let w = family_witness(&Family::from_params(name, &map)?)?;
    println!("R = {}", w.r);
    println!("G = {}", w.g);
    println!("i = {}", w.i);
    let ok = w.bracket_holds();
    println!("bracket: {}", if ok { "ok" } else { "FAILED" });
    Ok(if ok { Outcome::Ok } else { Outcome::Violations })
}

fn run(cli: Cli) -> Result<Outcome, Usage> {
    match cli.cmd {
        Cmd::Poly {
            cmd: PolyCmd::Show { expr, dir },
        } => poly_show(&expr, dir.as_deref()),
        Cmd::Pair {
            cmd: PairCmd::Audit { p, q },
        } => pair_audit(&p, &q),
        Cmd::Corners {
            cmd:
                CornersCmd::Enumerate {
                    bound,
                    pool,
                    imax,
                    format,
                    out,
                },
        } => corners_enumerate(bound, pool.as_deref(), imax, format, out.as_deref()),
        Cmd::Witness {
            cmd: WitnessCmd::Verify { file },
        } => witness_verify(&file),
        Cmd::Witness {
            cmd:
                WitnessCmd::Search {
                    st,
                    dir,
                    steps,
                    pool,
                    imax,
                },
        } => witness_search_cmd(&st, &dir, steps, pool.as_deref(), imax),
        Cmd::Family {
            cmd: FamilyCmd::Emit { name, params },
        } => family_emit(&name, &params),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
