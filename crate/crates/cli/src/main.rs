use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use pnbundles::catalog::{self, Classification, VerifyOptions, VerifySummary};
use pnbundles::forms::{fiberwise_injectivity_sample, random_matrix, section_map, SampleOutcome};
use pnbundles::liaison::{bundle_from_ideal, link, scheme_invariants, IdealResolution};
use pnbundles::presentation::cohomology_table;
use pnbundles::{json_int, Ambient, Error, TwoTermPresentation};

#[derive(Parser)]
#[command(name = "pnbundles", version, about = "Exact computations with vector bundles on projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Dimension of the ambient projective space.
    #[arg(long)]
    n: u32,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology table h^i(E(j)).
    Coh {
        presentation: String,
        #[command(flatten)]
        common: Common,
        /// Twists `a:b`; defaults to the decisive window.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<RangeInclusive<i64>>,
    },
    /// Total Chern class.
    Chern {
        presentation: String,
        #[command(flatten)]
        common: Common,
    },
    /// The catalog of globally generated bundles with c1 = 3.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Link an ideal resolution through a complete intersection.
    Link {
        resolution: String,
        #[command(flatten)]
        common: Common,
        /// Complete intersection degrees `d1,d2`.
        #[arg(long, value_parser = parse_pair)]
        ci: (i64, i64),
        /// Twists of matching summand pairs to cancel, e.g. `-3,-3`.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        cancel: Vec<i64>,
    },
    /// Bundle from an ideal resolution and sections.
    Serre {
        resolution: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        /// Number of trivial summands (sections).
        #[arg(long)]
        sections: u64,
    },
    /// Match a presentation against the catalog.
    Classify {
        presentation: String,
        #[command(flatten)]
        common: Common,
    },
    /// Random matrix of forms: fiber sampling and section-map ranks.
    MatrixCheck {
        presentation: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<RangeInclusive<i64>>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rank: Option<u64>,
    },
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rank: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Verify entries on all cores; output order is unchanged.
        #[arg(long)]
        parallel: bool,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok(a..=b)
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected d1,d2")?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// What a command produced: text, the same data as JSON, and whether the
/// verification it ran succeeded.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn presentation(n: u32, src: &str) -> pnbundles::Result<TwoTermPresentation> {
    TwoTermPresentation::parse(Ambient::new(n)?, src)
}

fn resolution(n: u32, src: &str) -> pnbundles::Result<IdealResolution> {
    IdealResolution::parse(Ambient::new(n)?, src)
}

fn run(cmd: Command) -> pnbundles::Result<(Output, bool)> {
    let (out, json) = match cmd {
        Command::Coh { presentation: src, common, range } => {
            let p = presentation(common.n, &src)?;
            let range = range.unwrap_or_else(|| {
                let (lo, hi) = p.decisive_window();
                lo..=hi
            });
            (coh(&p, range)?, common.json)
        }
        Command::Chern { presentation: src, common } => {
            let p = presentation(common.n, &src)?;
            let c = p.chern()?;
            let coeffs: Vec<String> = c.coeffs().iter().map(ToString::to_string).collect();
            let text = format!("[{}]\nc = {c}\n", coeffs.join(", "));
            let json = json!({
                "n": common.n,
                "presentation": p.to_string(),
                "chern": c.coeffs().iter().map(json_int).collect::<Vec<_>>(),
            });
            (Output { text, json, ok: true }, common.json)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List { common, rank } => {
                let entries = catalog::enumerate(common.n, rank)?;
                let mut text = String::new();
                for e in &entries {
                    writeln!(
                        text,
                        "{}\trank {}\t{}\tc2={} case {} degZ={}",
                        e.id, e.rank, e.presentation, e.expected.c2, e.expected.case, e.expected.deg_z
                    )
                    .unwrap();
                }
                let json = serde_json::to_value(&entries).expect("entries serialize");
                (Output { text, json, ok: true }, common.json)
            }
            CatalogAction::Verify { common, rank, seed, parallel } => {
                let entries = catalog::enumerate(common.n, rank)?;
                let opts = VerifyOptions { seed, ..VerifyOptions::default() };
                let reports = if parallel {
                    entries.par_iter().map(|e| catalog::verify_entry(e, opts)).collect()
                } else {
                    entries.iter().map(|e| catalog::verify_entry(e, opts)).collect()
                };
                (verify_output(VerifySummary::from_reports(common.n, reports)), common.json)
            }
        },
        Command::Link { resolution: src, common, ci, cancel } => {
            let r = resolution(common.n, &src)?;
            let l = link(&r, ci.0, ci.1, &cancel)?;
            let text = format!(
                "{}\ndegrees: {} + {} = {}\n{}\n",
                l.resolution,
                l.degree_given,
                l.degree_linked,
                ci.0 * ci.1,
                l.assumption
            );
            let json = json!({
                "n": common.n,
                "resolution": l.resolution.to_string(),
                "degree_given": json_int(&l.degree_given),
                "degree_linked": json_int(&l.degree_linked),
                "ci": [ci.0, ci.1],
                "assumption": l.assumption,
            });
            (Output { text, json, ok: true }, common.json)
        }
        Command::Serre { resolution: src, common, c1, sections } => {
            let r = resolution(common.n, &src)?;
            let inv = scheme_invariants(&r)?;
            let p = bundle_from_ideal(&r, c1, sections)?;
            let c = p.chern()?;
            let text = format!(
                "{p}\nrank {} c = {c}\nZ: dimension {} degree {}\n",
                p.rank(),
                inv.dimension,
                inv.degree
            );
            let json = json!({
                "n": common.n,
                "presentation": p.to_string(),
                "rank": json_int(&p.rank()),
                "chern": c.coeffs().iter().map(json_int).collect::<Vec<_>>(),
                "scheme": serde_json::to_value(&inv).expect("invariants serialize"),
            });
            (Output { text, json, ok: true }, common.json)
        }
        Command::Classify { presentation: src, common } => {
            let p = presentation(common.n, &src)?;
            let verdict = catalog::classify_presentation(&p)?;
            let text = match &verdict {
                Classification::Match { id, trivial_excess } => {
                    format!("match {id} trivial-excess {trivial_excess}\n")
                }
                Classification::DirectSum { summands } => format!("direct-sum {summands}\n"),
                Classification::NoMatch { reason } => format!("no-match: {reason}\n"),
            };
            let json = serde_json::to_value(&verdict).expect("verdict serializes");
            (Output { text, json, ok: true }, common.json)
        }
        Command::MatrixCheck { presentation: src, common, seed, samples, range } => {
            let p = presentation(common.n, &src)?;
            let range = range.unwrap_or_else(|| {
                let (lo, _) = p.decisive_window();
                lo..=1
            });
            (matrix_check(&p, seed, samples, range)?, common.json)
        }
    };
    Ok((out, json))
}

fn coh(p: &TwoTermPresentation, range: RangeInclusive<i64>) -> pnbundles::Result<Output> {
    let t = cohomology_table(p, range)?;
    let mut text = format!("{} on P^{}\n", p, t.n);
    for row in &t.rows {
        let cells: Vec<String> = row.cells.iter().map(ToString::to_string).collect();
        writeln!(text, "j={}: ({}) chi={}", row.j, cells.join(", "), row.chi).unwrap();
    }
    let mut json = serde_json::to_value(&t).expect("table serializes");
    json["presentation"] = p.to_string().into();
    Ok(Output { text, json, ok: true })
}

fn verify_output(s: VerifySummary) -> Output {
    let mut text = String::new();
    for r in &s.reports {
        writeln!(text, "{}\t{}\tc2={}", r.id, if r.pass() { "pass" } else { "FAIL" }, r.c2).unwrap();
        for c in r.checks.iter().filter(|c| !c.pass) {
            writeln!(text, "  {}: {}", c.name, c.detail).unwrap();
        }
    }
    let total = s.passed + s.failed;
    writeln!(text, "{}/{total} pass", s.passed).unwrap();
    let ok = s.failed == 0;
    let json = serde_json::to_value(&s).expect("summary serializes");
    Output { text, json, ok }
}

fn matrix_check(
    p: &TwoTermPresentation,
    seed: u64,
    samples: usize,
    range: RangeInclusive<i64>,
) -> pnbundles::Result<Output> {
    let m = random_matrix(p, seed)?;
    let sample = fiberwise_injectivity_sample(&m, seed, samples);
    let table = cohomology_table(p, range.clone())?;
    let mut ok = !matches!(sample, SampleOutcome::DropAt { .. });
    let mut text = format!("{p} seed {seed}\n");
    match &sample {
        SampleOutcome::NoDropFound { samples, vacuous: true } => {
            writeln!(text, "fibers: {samples} samples, nothing checked").unwrap()
        }
        SampleOutcome::NoDropFound { samples, .. } => {
            writeln!(text, "fibers: no rank drop in {samples} samples (probabilistic)").unwrap()
        }
        SampleOutcome::DropAt { point, rank } => {
            let pt: Vec<String> = point.iter().map(ToString::to_string).collect();
            writeln!(text, "fibers: rank {rank} at ({})", pt.join(":")).unwrap()
        }
    }
    let mut rows = Vec::new();
    for j in range {
        let sm = section_map(&m, j);
        let formula = table.cell(0, j).expect("row in range");
        let agree = formula.contains(&sm.h0_quotient().into());
        ok &= agree;
        writeln!(
            text,
            "j={j}: matrix h0={} formula h0={formula}{}",
            sm.h0_quotient(),
            if agree { "" } else { " MISMATCH" }
        )
        .unwrap();
        rows.push(json!({
            "j": j,
            "matrix_h0": sm.h0_quotient(),
            "formula_h0": formula,
            "agree": agree,
        }));
    }
    let json = json!({
        "presentation": p.to_string(),
        "seed": seed,
        "fibers": sample,
        "sections": rows,
        "ok": ok,
    });
    Ok(Output { text, json, ok })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, as_json)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
