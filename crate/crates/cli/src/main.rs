//! `wreathscope`: word metrics, structure posets and confining-subset
//! checks for `G wr Z` from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wreathscope::confining::{
    check_confining, recover_subgroup, validate_equivalence, CheckParams, Direction, QSpec,
    RecoverParams, Verdict,
};
use wreathscope::metrics::{delta_four_point, BfsTable, DEFAULT_STATE_LIMIT};
use wreathscope::poly::{parse_coeff_list, parse_poly, parse_word};
use wreathscope::structures::{build_b_poset, compare_empirical, qp_count, StructureKind};
use wreathscope::{subgroup_closure, Element, Error, GenSet, GroupDesc, WordMetric};

const STATE_LIMIT_VAR: &str = "WREATHSCOPE_STATE_LIMIT";

#[derive(Parser, Debug)]
#[command(
    name = "wreathscope",
    version,
    about = "Hyperbolic structures on lamplighter-type groups G wr Z"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Lamp group, e.g. Z12 or Z2xZ2 (a positional group argument wins).
    #[arg(long, global = true)]
    group: Option<String>,
    /// Lamp window W.
    #[arg(long, global = true, default_value_t = 4)]
    window: i64,
    /// Cursor bound for the BFS oracle (defaults to the window).
    #[arg(long, global = true)]
    cursor_bound: Option<i64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 4)]
    n0_max: i64,
    /// Iteration cap for saturation.
    #[arg(long, global = true, default_value_t = 100_000)]
    iter_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The poset B(G) of hyperbolic structures.
    Poset { group: Option<String> },
    /// Word length of an element with a witness walk.
    Wordlen {
        group: String,
        /// standard | lineal | trivial | qp+:{..} | qp-:{..}
        structure: String,
        /// Absolute lamp states as a polynomial, e.g. "2t^-5 + t", or a word
        /// in the generators with --word.
        element: String,
        /// Cursor position of the element.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        cursor: i64,
        /// Read ELEMENT as a word such as "t^-3 a t^3".
        #[arg(long)]
        word: bool,
        /// Cross-check against breadth-first search on the window.
        #[arg(long)]
        oracle: bool,
    },
    /// Empirical and exact domination between two structures.
    Compare {
        group: String,
        x: String,
        y: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Confining-subset checks.
    Confining {
        #[command(subcommand)]
        action: ConfiningCmd,
    },
    /// Four-point estimates of the hyperbolicity constant.
    Delta {
        group: String,
        structure: String,
        #[arg(long, value_delimiter = ',', default_values_t = [6, 10, 14])]
        radii: Vec<i64>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
struct QSource {
    /// Built-in set: qh:Z4:{2}, qh-:Z6:{3}, bplus:Z2, bminus:Z2,
    /// fullbase:Z3, counterexample, z8example.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// QSpec JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ConfiningCmd {
    /// Conditions (a), (b), (c) on the window.
    Check {
        #[command(flatten)]
        source: QSource,
        #[arg(long, value_enum, default_value_t = Dir::T)]
        direction: Dir,
        /// Random candidates when the window is too large to enumerate.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Recover the subgroup H.
    Recover {
        #[command(flatten)]
        source: QSource,
        /// Depth cutoff D (default ceil(W/2)).
        #[arg(long)]
        depth_cutoff: Option<i64>,
    },
    /// Test [X] = [S_H] along witness families.
    Validate {
        #[command(flatten)]
        source: QSource,
        /// Generators of H, e.g. "{(0,1)}"; "{}" is the trivial subgroup.
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 20)]
        depth: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Dir {
    #[value(name = "t")]
    T,
    #[value(name = "t^-1", alias = "tinv")]
    TInv,
}

/// A failure with its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidGroup(_) | Error::BoundExceeded { .. } => 2,
            Error::Parse { .. }
            | Error::DuplicateExponent(_)
            | Error::ExponentOutOfBounds { .. }
            | Error::CoeffOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::MalformedQSpec(_) => 3,
            Error::TargetOutsideWindow(_)
            | Error::StateLimitExceeded { .. }
            | Error::EmptySampleDomain(_)
            | Error::SupportExceedsWindow { .. }
            | Error::WindowTooLarge { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// Rendered output plus the exit code it should end with.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

/// Serde wire form of a value, used for enum names in text output.
fn label<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn group_arg(positional: Option<&str>, global: &Global) -> Result<GroupDesc, Failure> {
    let text = positional
        .or(global.group.as_deref())
        .ok_or_else(|| Failure {
            code: 2,
            message: "no group given (positional or --group)".into(),
        })?;
    Ok(GroupDesc::parse(text)?)
}

fn state_limit() -> Result<u64, Failure> {
    match std::env::var(STATE_LIMIT_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "{STATE_LIMIT_VAR} must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_STATE_LIMIT),
    }
}

fn load_q(source: &QSource, window: i64) -> Result<QSpec, Failure> {
    match (&source.builtin, &source.file) {
        (Some(name), None) => Ok(QSpec::builtin(name, window)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(QSpec::from_json_str(&text)?)
        }
        _ => Err(usage("give exactly one of --builtin or --file")),
    }
}

fn cmd_poset(group: Option<&str>, global: &Global) -> Result<Output, Failure> {
    let g = group_arg(group, global)?;
    if !g.is_cyclic() {
        eprintln!("warning: B(G) ⊊ H(G wr ℤ) for this group");
    }
    let p = build_b_poset(&g);
    let cyclic_order = if g.is_cyclic() {
        Some(g.order() as u64)
    } else {
        None
    };
    let expected = cyclic_order.map(qp_count).transpose()?;
    let counts = json!({
        "elliptic": p.count(StructureKind::Elliptic),
        "lineal": p.count(StructureKind::Lineal),
        "quasi-parabolic": p.count(StructureKind::QuasiParabolic),
    });
    let text = match global.format {
        Format::Dot => p.to_dot(),
        Format::Json => {
            let mut v = p.to_json();
            v["counts"] = counts;
            v["qp_count"] = json!(expected);
            v["complete"] = json!(g.is_cyclic());
            json_text(&v)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "group {g}");
            let _ = writeln!(
                s,
                "nodes {} (elliptic {}, lineal {}, quasi-parabolic {})",
                p.nodes().len(),
                p.count(StructureKind::Elliptic),
                p.count(StructureKind::Lineal),
                p.count(StructureKind::QuasiParabolic)
            );
            if let Some(e) = expected {
                let ok = e == p.count(StructureKind::QuasiParabolic) as u64;
                let _ = writeln!(
                    s,
                    "qp_count {e} ({})",
                    if ok { "matches" } else { "MISMATCH" }
                );
            }
            let _ = writeln!(s, "covering relations:");
            for &(a, b) in p.hasse() {
                let _ = writeln!(
                    s,
                    "  {} < {}",
                    p.nodes()[a].descriptor,
                    p.nodes()[b].descriptor
                );
            }
            s
        }
    };
    Ok(Output::ok(text))
}

#[allow(clippy::too_many_arguments)]
fn cmd_wordlen(
    group: &str,
    structure: &str,
    element: &str,
    cursor: i64,
    word: bool,
    oracle: bool,
    global: &Global,
) -> Result<Output, Failure> {
    let g = group_arg(Some(group), global)?;
    let gens = GenSet::parse(structure, &g)?;
    let x = if word {
        parse_word(element, &g)?
    } else {
        Element::from_lamps(&parse_poly(element, &g)?, cursor)
    };
    let metric = WordMetric::new(&g, &gens)?;
    let len = metric.len(&x);
    let plan = metric.plan(&x);
    let bfs = if oracle {
        let bound = global.cursor_bound.unwrap_or(global.window);
        let table = BfsTable::build(&g, &gens, global.window, bound, state_limit()?)?;
        let d = table.distance(&x)?;
        Some(json!({
            "window": global.window,
            "cursor_bound": bound,
            "length": d,
            "agrees": d == Some(len),
        }))
    } else {
        None
    };
    let disagree = bfs.as_ref().is_some_and(|b| b["agrees"] == json!(false));
    let text = match global.format {
        Format::Json | Format::Dot => json_text(&json!({
            "group": g.to_string(),
            "structure": gens.to_string(),
            "element": x.to_string(),
            "length": len,
            "plan": plan,
            "oracle": bfs,
        })),
        Format::Text => {
            let mut s = format!("{len}\n");
            let _ = writeln!(s, "walk {:?}", plan.visits);
            for b in &plan.bursts {
                let _ = writeln!(s, "  at {}: {}", b.position, b.generator);
            }
            if let Some(b) = &bfs {
                let _ = writeln!(
                    s,
                    "bfs {} on window {} (cursor bound {}){}",
                    b["length"],
                    b["window"],
                    b["cursor_bound"],
                    if disagree {
                        " DISAGREES with closed form"
                    } else {
                        ""
                    }
                );
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if disagree { 1 } else { 0 },
    })
}

fn cmd_compare(
    group: &str,
    x: &str,
    y: &str,
    depth: usize,
    global: &Global,
) -> Result<Output, Failure> {
    let g = group_arg(Some(group), global)?;
    let (gx, gy) = (GenSet::parse(x, &g)?, GenSet::parse(y, &g)?);
    let e = compare_empirical(&gx, &gy, &g, global.window, depth)?;
    let p = build_b_poset(&g);
    let exact = match (p.node(&gx), p.node(&gy)) {
        (Some(a), Some(b)) => Some(p.compare_exact(a, b)?),
        _ => None,
    };
    let text = match global.format {
        Format::Json | Format::Dot => json_text(&json!({
            "group": g.to_string(),
            "x": gx.to_string(),
            "y": gy.to_string(),
            "window": global.window,
            "depth": depth,
            "empirical": e,
            "exact": exact,
        })),
        Format::Text => {
            let show = |gr: &wreathscope::structures::Growth| match gr {
                wreathscope::structures::Growth::Bounded { value, depth } => {
                    format!("bounded by {value} up to depth {depth}")
                }
                wreathscope::structures::Growth::Growing { sequence } => {
                    format!("growing {sequence:?}")
                }
            };
            let mut s = String::new();
            let _ = writeln!(s, "sup |X-letter|_Y: {}", show(&e.sup_x_in_y));
            let _ = writeln!(s, "sup |Y-letter|_X: {}", show(&e.sup_y_in_x));
            if let Some(c) = exact {
                let _ = writeln!(
                    s,
                    "exact: {}{}",
                    label(&c.relation).as_str().unwrap_or("?"),
                    if c.complete { "" } else { " (within B(G))" }
                );
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn cmd_confining(action: &ConfiningCmd, global: &Global) -> Result<Output, Failure> {
    match action {
        ConfiningCmd::Check {
            source,
            direction,
            samples,
        } => {
            let q = load_q(source, global.window)?;
            let params = CheckParams {
                window: global.window,
                n0_max: global.n0_max,
                sample_budget: *samples,
                seed: global.seed,
                ..CheckParams::with_window(global.window)
            };
            let dir = match direction {
                Dir::T => Direction::T,
                Dir::TInv => Direction::TInv,
            };
            let r = check_confining(&q, dir, &params)?;
            let code = if matches!(r.verdict, Verdict::Inconclusive { .. }) {
                5
            } else {
                0
            };
            let text = match global.format {
                Format::Text => {
                    let show = |f: &Option<wreathscope::LampConfig>| {
                        f.as_ref().map_or("-".into(), |f| f.to_string())
                    };
                    let num = |n: Option<i64>| n.map_or("-".into(), |n| n.to_string());
                    let mut s = format!(
                        "{}{}\n",
                        label(&r)["verdict"].as_str().unwrap_or("?"),
                        if r.lineal { " (lineal)" } else { "" }
                    );
                    let _ = writeln!(
                        s,
                        "mode {}, {} candidates, {} members",
                        label(&r.mode).as_str().unwrap_or("?"),
                        r.candidates,
                        r.members
                    );
                    let _ = writeln!(
                        s,
                        "(a) {} strictness witness {}",
                        r.cond_a.pass,
                        show(&r.cond_a.strictness_witness)
                    );
                    let _ = writeln!(s, "(b) {} max n {}", r.cond_b.pass, num(r.cond_b.max_n));
                    let _ = writeln!(s, "(c) {} n0 {}", r.cond_c.pass, num(r.cond_c.n0));
                    s
                }
                _ => json_text(&r),
            };
            Ok(Output { text, code })
        }
        ConfiningCmd::Recover {
            source,
            depth_cutoff,
        } => {
            let q = load_q(source, global.window)?;
            let mut params = RecoverParams::new(global.window);
            params.depth_cutoff = *depth_cutoff;
            params.iter_cap = global.iter_cap;
            params.check.n0_max = global.n0_max;
            params.check.seed = global.seed;
            let r = recover_subgroup(&q, &params)?;
            let text = match global.format {
                Format::Text => format!(
                    "H = {} ({} side), certified {}\n",
                    r.subgroup,
                    label(&r.side).as_str().unwrap_or("?"),
                    r.certified
                ),
                _ => json_text(&r),
            };
            Ok(Output::ok(text))
        }
        ConfiningCmd::Validate {
            source,
            subgroup,
            depth,
        } => {
            let q = load_q(source, global.window)?;
            let gens = parse_coeff_list(subgroup, &q.group)?;
            let h = subgroup_closure(&gens, &q.group)?;
            let r = validate_equivalence(&q, &h, *depth)?;
            let text = match global.format {
                Format::Text => {
                    let mut s = format!(
                        "{}\n",
                        if r.is_refuted() {
                            "refuted"
                        } else {
                            "consistent"
                        }
                    );
                    for f in &r.families {
                        let _ = writeln!(
                            s,
                            "{}: X {:?} S_H {:?}",
                            f.family, f.x_lengths, f.sh_lengths
                        );
                    }
                    s
                }
                _ => json_text(&r),
            };
            Ok(Output::ok(text))
        }
    }
}

fn cmd_delta(
    group: &str,
    structure: &str,
    radii: &[i64],
    samples: usize,
    global: &Global,
) -> Result<Output, Failure> {
    let g = group_arg(Some(group), global)?;
    let gens = GenSet::parse(structure, &g)?;
    let estimates = radii
        .iter()
        .map(|&r| delta_four_point(&g, &gens, r, samples, global.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match global.format {
        Format::Json | Format::Dot => json_text(&json!({
            "group": g.to_string(),
            "structure": gens.to_string(),
            "seed": global.seed,
            "samples": samples,
            "estimator": "four-point, sampled lower estimate",
            "estimates": estimates,
        })),
        Format::Text => {
            let mut s = format!("{:>6}  {:>7}  {:>5}\n", "radius", "2delta", "delta");
            for e in &estimates {
                let _ = writeln!(
                    s,
                    "{:>6}  {:>7}  {:>5.1}",
                    e.radius,
                    e.twice_delta,
                    e.delta()
                );
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let global = &cli.global;
    if global.window < 0 || global.cursor_bound.is_some_and(|b| b < 0) {
        return Err(usage("window and cursor bound must be non-negative"));
    }
    match &cli.command {
        Command::Poset { group } => cmd_poset(group.as_deref(), global),
        Command::Wordlen {
            group,
            structure,
            element,
            cursor,
            word,
            oracle,
        } => cmd_wordlen(group, structure, element, *cursor, *word, *oracle, global),
        Command::Compare { group, x, y, depth } => cmd_compare(group, x, y, *depth, global),
        Command::Confining { action } => cmd_confining(action, global),
        Command::Delta {
            group,
            structure,
            radii,
            samples,
        } => cmd_delta(group, structure, radii, *samples, global),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
