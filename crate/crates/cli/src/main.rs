//! `segal-lab`: runs one check per subcommand and prints a JSON report.
//!
//! Exit codes: 0 when the verdict is the expected one, 1 on a property violation, 2 on a
//! usage error, 3 when a resource limit (desk-scale bound or search budget) is hit.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use segal_lab::backend::{
    check_proto_exact_axioms, mono_pullback_coker, nine_from_subobjects, nine_lemma_check, random_pullback_square,
    stringency_probe,
};
use segal_lab::category::Reindexing;
use segal_lab::combinatorics::{classify_subset, gale_facets, segal_poset, subsets_of_size, Parity};
use segal_lab::polytope::{
    below_order_check, below_relation_variant, canonical_triangulation, enumerate_triangulations_with,
    facet_side_geometric, BelowVariant, EnumerationLimits, FacetSide, FlipGraph,
};
use segal_lab::waldhausen::{
    acyclic_family, budget_from_env, check_functor, left_exact_family, path_space_functor, segal_functor, Construction,
    PathKind, Variant,
};
use segal_lab::{hall, segal_sum, Backend, Error, Side};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "segal-lab", version, about = "Higher Segal and Waldhausen checks at desk scale")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Lift the desk-scale limits on sizes and levels.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gale evenness against exact facet geometry for all (d+1)-subsets of [n].
    Gale {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Maximal elements of the lower or upper d-Segal poset of [n].
    Poset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_side)]
        side: Side,
    },
    /// Triangulations of the cyclic polytope C([n], d).
    Triangulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Increasing-flip graph on the triangulations of C([n], d).
    Flipgraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Acyclicity of the "lies below" relation on d-simplices of [n].
    BelowOrder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Restrict the relation to simplices sharing a facet.
        #[arg(long)]
        shared_facet: bool,
    },
    /// Segal condition of the direct-sum construction S_⊕⟨k⟩ (default: lower (2k−1)-Segal).
    CheckSegalSum {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = SideArg::Lower)]
        side: SideArg,
        #[arg(long)]
        bound: usize,
    },
    /// Segal condition of a Waldhausen-type construction.
    CheckWaldhausen {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        bound: usize,
        #[arg(long, value_parser = parse_variant, default_value = "exact")]
        variant: Variant,
        #[arg(long, value_enum)]
        reindexing: Option<ReindexArg>,
    },
    /// Forgetful functor from a path space of S⟨k⟩ at level n.
    Pathspace {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: PathArg,
        #[arg(long)]
        bound: usize,
    },
    /// Stringency probe, proto-exact axioms and randomized nine-lemma / pullback-cokernel suites.
    Stringency {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
        #[arg(long, default_value_t = 2)]
        size_bound: usize,
        #[arg(long, default_value_t = 2)]
        entry_bound: i64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The glued families without Segal preimages.
    Counterexample {
        #[arg(value_enum)]
        example: ExampleArg,
        /// Defaults to freeab for 5.9 and fq:2 for 5.10.
        #[arg(long, value_parser = parse_backend)]
        backend: Option<Backend>,
        /// The scalar f of the 5.9 family.
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        f: i64,
        /// The rank of A in the 5.10 family (0 is the zero control).
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Hall numbers and associativity of their convolution.
    Hall {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
        #[arg(long)]
        bound: usize,
        /// Also write the structure constants as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
    /// Both lower and upper.
    Fully,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Lower => vec![Side::Lower],
            SideArg::Upper => vec![Side::Upper],
            SideArg::Fully => vec![Side::Lower, Side::Upper],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReindexArg {
    PathLeft,
    PathRight,
    DoublePath,
    Edgewise,
}

impl From<ReindexArg> for Reindexing {
    fn from(r: ReindexArg) -> Reindexing {
        match r {
            ReindexArg::PathLeft => Reindexing::PathLeft,
            ReindexArg::PathRight => Reindexing::PathRight,
            ReindexArg::DoublePath => Reindexing::DoublePath,
            ReindexArg::Edgewise => Reindexing::Edgewise,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Left,
    Right,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    #[value(name = "5.9")]
    Staircase,
    #[value(name = "5.10")]
    Acyclic,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A finished check: the report, the verdict, and the verdict the theory predicts.
struct Outcome {
    config: Value,
    report: Value,
    verdict: bool,
    expected: bool,
}

impl Outcome {
    fn holds(config: Value, report: Value, verdict: bool) -> Outcome {
        Outcome { config, report, verdict, expected: true }
    }
}

fn desk(force: bool, ok: bool, what: &str) -> anyhow::Result<()> {
    if force || ok {
        Ok(())
    } else {
        Err(Error::ResourceLimit(format!("{what} is beyond desk scale; pass --force to run anyway")).into())
    }
}

fn size_limit(b: Backend) -> usize {
    if b == Backend::F1 {
        3
    } else {
        2
    }
}

fn run(command: &Command, force: bool) -> anyhow::Result<Outcome> {
    let budget = budget_from_env();
    Ok(match *command {
        Command::Gale { n, d } => {
            desk(force, n <= 10 && d <= 6, "gale beyond n <= 10, d <= 6")?;
            if d >= n {
                return Err(Error::InvalidArguments(format!("gale needs d < n, got n={n}, d={d}")).into());
            }
            let (lower, upper) = gale_facets(n, d)?;
            let mut mismatches = Vec::new();
            let mut checked = 0;
            for s in subsets_of_size(n, d + 1) {
                let combinatorial = match classify_subset(&s) {
                    Parity::Even => FacetSide::LowerFacet,
                    Parity::Odd => FacetSide::UpperFacet,
                    _ => FacetSide::NotAFacet,
                };
                let geometric = facet_side_geometric(&s, n, d)?;
                checked += 1;
                if combinatorial != geometric {
                    mismatches.push(json!({ "subset": s, "combinatorial": combinatorial, "geometric": geometric }));
                }
            }
            let verdict = mismatches.is_empty();
            let report = json!({ "lower": lower, "upper": upper, "checked": checked, "mismatches": mismatches });
            Outcome::holds(json!({ "n": n, "d": d }), report, verdict)
        }
        Command::Poset { n, d, side } => {
            desk(force, n <= 12, "poset beyond n <= 12")?;
            let p = segal_poset(n, d, side)?;
            let report = json!({ "maximal": p.maximal, "elements": p.all_elements.len() });
            Outcome::holds(json!({ "n": n, "d": d, "side": side }), report, true)
        }
        Command::Triangulate { n, d, count_only } => {
            let limits = if force {
                EnumerationLimits { max_n: usize::MAX, max_d: usize::MAX }
            } else {
                EnumerationLimits::default()
            };
            let ts = enumerate_triangulations_with(n, d, limits)?;
            let report = if count_only {
                json!({ "count": ts.len() })
            } else {
                json!({ "count": ts.len(), "triangulations": ts.iter().map(|t| &t.simplices).collect::<Vec<_>>() })
            };
            Outcome::holds(json!({ "n": n, "d": d, "count_only": count_only }), report, true)
        }
        Command::Flipgraph { n, d } => {
            let g = FlipGraph::build(n, d)?;
            let lower = g.index_of(&canonical_triangulation(n, d, Side::Lower)?);
            let upper = g.index_of(&canonical_triangulation(n, d, Side::Upper)?);
            let (sources, sinks, connected) = (g.sources(), g.sinks(), g.is_connected());
            let verdict = connected && lower.is_some_and(|l| sources == [l]) && upper.is_some_and(|u| sinks == [u]);
            let report = json!({
                "nodes": g.nodes.len(),
                "edges": g.edges.len(),
                "connected": connected,
                "sources": sources,
                "sinks": sinks,
                "lower_canonical": lower,
                "upper_canonical": upper,
                "graph": g.to_json(),
            });
            Outcome::holds(json!({ "n": n, "d": d }), report, verdict)
        }
        Command::BelowOrder { n, d, shared_facet } => {
            desk(force, n <= 8 && d <= 4, "below-order beyond n <= 8, d <= 4")?;
            let order = if shared_facet {
                below_relation_variant(n, d, BelowVariant::SharedFacet)?
            } else {
                below_order_check(n, d)?
            };
            let report = json!({
                "simplices": order.simplices.len(),
                "relation_pairs": order.relation.len(),
                "partial_order": order.is_partial_order(),
                "cycle": order.cycle,
            });
            Outcome::holds(json!({ "n": n, "d": d, "shared_facet": shared_facet }), report, order.is_partial_order())
        }
        Command::CheckSegalSum { backend, k, n, d, side, bound } => {
            desk(force, k <= 3 && n <= 6 && bound <= 3, "check-segal-sum beyond k <= 3, n <= 6, bound <= 3")?;
            let d = d.unwrap_or((2 * k).saturating_sub(1));
            let mut reports = Vec::new();
            for s in side.sides() {
                reports.push(segal_sum::sum_segal_check(backend, k, n, d, s, bound, budget)?);
            }
            let verdict = reports.iter().all(|r| r.verdict);
            let config = json!({ "backend": backend, "k": k, "n": n, "d": d, "side": side_name(side), "bound": bound });
            Outcome::holds(config, json!({ "checks": reports, "verdict": verdict }), verdict)
        }
        Command::CheckWaldhausen { backend, k, n, d, side, bound, variant, reindexing } => {
            desk(
                force,
                k <= 3 && n <= 6 && bound <= size_limit(backend),
                "check-waldhausen beyond k <= 3, n <= 6, bound <= 3 (F1) / 2",
            )?;
            let mut reports = Vec::new();
            for s in side.sides() {
                let f = segal_functor(Construction { k, variant }, reindexing.map(Reindexing::from), n, d, s)?;
                reports.push(check_functor(&f, backend, bound, budget)?);
            }
            let verdict = reports.iter().all(|r| r.verdict);
            let config = json!({
                "backend": backend, "k": k, "n": n, "d": d, "side": side_name(side), "bound": bound,
                "variant": variant.to_string(), "reindexing": reindexing.map(|r| format!("{:?}", Reindexing::from(r))),
            });
            Outcome::holds(config, json!({ "checks": reports, "verdict": verdict }), verdict)
        }
        Command::Pathspace { backend, k, n, kind, bound } => {
            desk(
                force,
                k <= 3 && n <= 5 && bound <= size_limit(backend),
                "pathspace beyond k <= 3, n <= 5, bound <= 3 (F1) / 2",
            )?;
            let kind = match kind {
                PathArg::Left => PathKind::Left,
                PathArg::Right => PathKind::Right,
                PathArg::Double => PathKind::Double,
            };
            let r = check_functor(&path_space_functor(k, n, kind)?, backend, bound, budget)?;
            let verdict = r.verdict;
            let config = json!({ "backend": backend, "k": k, "n": n, "kind": kind, "bound": bound });
            Outcome::holds(config, serde_json::to_value(r)?, verdict)
        }
        Command::Stringency { backend, size_bound, entry_bound, instances, seed } => {
            desk(
                force,
                size_bound <= 3 && entry_bound <= 3 && instances <= 10_000,
                "stringency beyond size 3, entries 3, 10000 instances",
            )?;
            stringency_suite(backend, size_bound, entry_bound, instances, seed)?
        }
        Command::Counterexample { example, backend, f, rank } => {
            let (r, expected) = match example {
                ExampleArg::Staircase => {
                    let b = backend.unwrap_or(Backend::FreeAb);
                    // over a field every nonzero scalar is invertible, and f = 0 splits
                    (left_exact_family(b, f, budget)?, b == Backend::FreeAb && f.abs() >= 2)
                }
                ExampleArg::Acyclic => (acyclic_family(backend.unwrap_or(Backend::Fq(2)), rank, budget)?, rank == 1),
            };
            let config = json!({ "example": r.example, "backend": r.backend, "parameters": r.parameters });
            let verdict = r.refuted;
            Outcome { config, report: serde_json::to_value(r)?, verdict, expected }
        }
        Command::Hall { backend, bound, ref csv } => {
            desk(force, bound <= if backend == Backend::F1 { 4 } else { 3 }, "hall beyond bound 4 (F1) / 3")?;
            let r = hall::associativity_check(backend, bound)?;
            if let Some(path) = csv {
                std::fs::write(path, r.table.to_csv()?).with_context(|| format!("writing {}", path.display()))?;
            }
            let verdict = r.associative;
            Outcome::holds(json!({ "backend": backend, "bound": bound }), serde_json::to_value(r)?, verdict)
        }
    })
}

fn side_name(s: SideArg) -> &'static str {
    match s {
        SideArg::Lower => "lower",
        SideArg::Upper => "upper",
        SideArg::Fully => "fully",
    }
}

/// Non-stringency is expected exactly for the free abelian groups; the proto-exact axioms are
/// expected everywhere and both lemmas on stringent backends (elsewhere they are reported only).
fn stringency_suite(
    b: Backend,
    size_bound: usize,
    entry_bound: i64,
    instances: usize,
    seed: u64,
) -> anyhow::Result<Outcome> {
    let witness = stringency_probe(b, size_bound, entry_bound, 1 << 22)?;
    let axioms = check_proto_exact_axioms(b, size_bound, entry_bound.min(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut nine, mut nine_failures, mut attempts) = (0, Vec::new(), 0);
    while nine < instances && attempts < 100 * instances.max(1) {
        attempts += 1;
        if let Some(d) = nine_from_subobjects(b, &mut rng, size_bound) {
            nine += 1;
            if !nine_lemma_check(b, &d)? {
                nine_failures.push(d);
            }
        }
    }
    let (mut squares, mut square_failures, mut attempts) = (0, Vec::new(), 0);
    while squares < instances && attempts < 100 * instances.max(1) {
        attempts += 1;
        if let Some(sq) = random_pullback_square(b, &mut rng, size_bound) {
            squares += 1;
            if !mono_pullback_coker(b, &sq)?.1 {
                square_failures.push(sq);
            }
        }
    }
    let stringent = witness.is_none();
    let lemmas = axioms.holds() && (!stringent || (nine_failures.is_empty() && square_failures.is_empty()));
    let report = json!({
        "stringent": stringent,
        "non_stringency_witness": witness,
        "axioms": axioms,
        "nine_lemma": { "instances": nine, "failures": nine_failures },
        "mono_pullback_cokernel": { "instances": squares, "failures": square_failures },
    });
    let config = json!({ "backend": b, "size_bound": size_bound, "entry_bound": entry_bound, "instances": instances, "seed": seed });
    Ok(Outcome { config, report, verdict: lemmas && stringent == b.is_finite(), expected: true })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gale { .. } => "gale",
        Command::Poset { .. } => "poset",
        Command::Triangulate { .. } => "triangulate",
        Command::Flipgraph { .. } => "flipgraph",
        Command::BelowOrder { .. } => "below-order",
        Command::CheckSegalSum { .. } => "check-segal-sum",
        Command::CheckWaldhausen { .. } => "check-waldhausen",
        Command::Pathspace { .. } => "pathspace",
        Command::Stringency { .. } => "stringency",
        Command::Counterexample { .. } => "counterexample",
        Command::Hall { .. } => "hall",
    }
}

fn exit_code_of(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::InvalidArguments(_)) => 2,
        Some(Error::ResourceLimit(_)) => 3,
        _ => 1,
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = output {
        std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_name(&cli.command);
    let (doc, code) = match run(&cli.command, cli.force) {
        Ok(o) => {
            let code = if o.verdict == o.expected { 0 } else { 1 };
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "config": o.config,
                "verdict": o.verdict,
                "expected": o.expected,
                "report": o.report,
            });
            (doc, code)
        }
        Err(e) => {
            let code = exit_code_of(&e);
            let doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "error": format!("{e:#}"), "exit_code": code });
            (doc, code)
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    if let Err(e) = emit(&text, cli.output.as_ref()) {
        eprintln!("{e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
