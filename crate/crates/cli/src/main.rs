mod data;
mod workspace;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use ternary_core::localdata::{
    bad_primes, genus_symbol, jordan_splitting, render_splitting, two_adic_shape,
};
use ternary_core::regularity::{
    appendix_specs, build_status_table, candidate_verdict, genus_classes, regular_candidates,
    search_range, search_range_with, DiscStatus, RegularityError, DEFAULT_BOUND, JAGY_BOUND,
};
use ternary_core::spinor::{partition_spinor_genera, units_in_theta};
use ternary_core::watson::{descent_chain, watson_transform, WatsonError};
use ternary_core::TernaryForm;

use data::{
    disc_set, parse_candidates, render_candidates, CandidateRow, Source, REGULAR_CSV, TABLE1_CSV,
};
use workspace::{sha256_hex, write_atomic, Workspace, VERSION};

const EXIT_USAGE: u8 = 1;
const EXIT_FORM: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_DATA: u8 = 5;

#[derive(Parser)]
#[command(
    name = "ternary",
    version,
    about = "Positive definite ternary quadratic forms"
)]
struct Cli {
    /// Workspace root for cached genera and manifests (overrides TERNARY_WORKSPACE).
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local and global data of one form.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Restrict the local report to this prime.
        #[arg(long)]
        prime: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
    },
    /// Apply λ_p once, or repeatedly with --chain; prints JSON.
    Watson {
        #[arg(allow_hyphen_values = true)]
        form: String,
        p: i64,
        #[arg(long)]
        chain: bool,
    },
    /// Check the 29 catalogued forms.
    VerifyTable1 {
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long)]
        table1: Option<PathBuf>,
    },
    /// Spinor regular candidates in a discriminant range, as JSON lines.
    Search {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the appendix status tables.
    Tables {
        /// Candidate list for the regular set (default: shipped list).
        #[arg(long = "regular", alias = "R")]
        regular: Option<PathBuf>,
        /// Candidate list for the spinor-regular-not-regular set (default: shipped Table 1).
        #[arg(long = "spinor", alias = "S")]
        spinor: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(long, default_value_t = JAGY_BOUND)]
        search_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute regular candidates (source SELF) as a candidate list.
    SelfRegular {
        #[arg(long, default_value_t = 1)]
        from: i64,
        #[arg(long)]
        to: i64,
        /// Only discriminants that occur as non-x cells of the appendix tables.
        #[arg(long)]
        appendix_cells: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult = Result<(), Failure>;

fn config_hash(config: &serde_json::Value) -> String {
    sha256_hex(config.to_string().as_bytes())[..16].to_string()
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())
            .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(fail(EXIT_DATA, e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn parse_form(text: &str) -> Result<TernaryForm, Failure> {
    text.parse()
        .map_err(|e| fail(EXIT_FORM, format!("invalid form: {e}")))
}

fn read_candidates(
    path: &Option<PathBuf>,
    default: &str,
    name: &str,
    check_disc: bool,
) -> Result<(Vec<CandidateRow>, String), Failure> {
    let (text, origin) = match path {
        Some(p) => (
            std::fs::read_to_string(p)
                .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", p.display())))?,
            p.display().to_string(),
        ),
        None => (default.to_string(), format!("{name} (shipped)")),
    };
    let rows =
        parse_candidates(&text, &origin, check_disc).map_err(|e| fail(EXIT_DATA, e.to_string()))?;
    Ok((rows, text))
}

fn open_workspace(cli_root: &Option<PathBuf>) -> Result<Option<Workspace>, Failure> {
    let ws = match cli_root {
        Some(root) => Workspace::open(root).map(Some),
        None => Workspace::from_env(),
    };
    ws.map_err(|e| fail(EXIT_DATA, format!("workspace: {e}")))
}

fn precondition(e: impl std::fmt::Display) -> Failure {
    fail(EXIT_PRECONDITION, e.to_string())
}

fn cmd_analyze(form: &str, prime: Option<i64>, bound: u64) -> CmdResult {
    let f = parse_form(form)?;
    let (reduced, _) = f.reduce();
    let mut r = String::new();
    writeln!(r, "form: {f}").unwrap();
    writeln!(r, "disc: {}", f.discriminant()).unwrap();
    writeln!(r, "reduced: {}", reduced.canonical()).unwrap();
    writeln!(r, "genus symbol: {}", genus_symbol(&f)).unwrap();
    let primes: Vec<i64> = match prime {
        Some(p) => vec![p],
        None => bad_primes(f.lattice_discriminant()),
    };
    for p in primes {
        if p < 2 || !ternary_core::arith::is_prime(p as i128) {
            return Err(fail(EXIT_USAGE, format!("{p} is not a prime")));
        }
        writeln!(
            r,
            "p={p}: {}",
            render_splitting(&jordan_splitting(&f, p), p)
        )
        .unwrap();
        if p == 2 {
            writeln!(r, "  two-adic shape: {}", two_adic_shape(&f)).unwrap();
        }
        writeln!(r, "  units in theta: {:?}", units_in_theta(&f, p)).unwrap();
    }
    let classes = genus_classes(&f);
    let part = partition_spinor_genera(&classes).map_err(precondition)?;
    writeln!(r, "genus size: {}", classes.len()).unwrap();
    writeln!(r, "spinor genera in genus: {}", part.groups.len()).unwrap();
    writeln!(
        r,
        "spinor genus size: {}",
        part.group_of(&f).map_or(0, |g| g.len())
    )
    .unwrap();
    let v = candidate_verdict(&f, bound).map_err(precondition)?;
    writeln!(r, "bound: {bound}").unwrap();
    writeln!(r, "regular candidate: {}", v.regular_candidate).unwrap();
    writeln!(
        r,
        "spinor regular candidate: {}",
        v.spinor_regular_candidate
    )
    .unwrap();
    if let Some(w) = v.witness {
        writeln!(r, "witness: {w}").unwrap();
    }
    emit(&None, &r)
}

fn watson_failure(e: WatsonError) -> Failure {
    match e {
        WatsonError::CaseMismatch { .. } => fail(EXIT_VERIFY, e.to_string()),
        _ => precondition(e),
    }
}

fn cmd_watson(form: &str, p: i64, chain: bool) -> CmdResult {
    let f = parse_form(form)?;
    let value = if chain {
        let steps = descent_chain(&f, p).map_err(watson_failure)?;
        if steps.is_empty() {
            return Err(watson_failure(watson_transform(&f, p).unwrap_err()));
        }
        serde_json::to_value(&steps).unwrap()
    } else {
        serde_json::to_value(watson_transform(&f, p).map_err(watson_failure)?).unwrap()
    };
    emit(
        &None,
        &format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
    )
}

fn cmd_verify_table1(bound: u64, table1: &Option<PathBuf>) -> CmdResult {
    let (rows, _) = read_candidates(table1, TABLE1_CSV, "table1.csv", false)?;
    let (mut pass, mut inconclusive, mut failed) = (0, 0, 0);
    for row in &rows {
        let f = row.form;
        let mut problems = Vec::new();
        let mut unsure = Vec::new();
        if f.discriminant() != row.disc {
            problems.push(format!(
                "discriminant {} differs from {}",
                f.discriminant(),
                row.disc
            ));
        }
        let v = candidate_verdict(&f, bound).map_err(precondition)?;
        if !v.spinor_regular_candidate {
            problems.push(format!(
                "not spinor regular up to {bound} (witness {:?})",
                v.witness
            ));
        }
        if v.regular_candidate {
            unsure.push(format!("no regularity witness up to {bound}"));
        }
        if let Some(size) = row.extra.first() {
            let part = partition_spinor_genera(&genus_classes(&f)).map_err(precondition)?;
            let got = part.group_of(&f).map_or(0, |g| g.len());
            if size.parse::<usize>().ok() != Some(got) {
                problems.push(format!("spinor genus size {got}, expected {size}"));
            }
        }
        let status = if !problems.is_empty() {
            failed += 1;
            "FAIL"
        } else if !unsure.is_empty() {
            inconclusive += 1;
            "INCONCLUSIVE"
        } else {
            pass += 1;
            "PASS"
        };
        let detail: Vec<String> = problems.into_iter().chain(unsure).collect();
        let witness = v.witness.map_or(String::new(), |w| format!(" witness={w}"));
        println!(
            "row {} {} disc={} {}{}{}",
            row.line - 1,
            status,
            row.disc,
            f,
            witness,
            if detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", detail.join("; "))
            }
        );
    }
    println!(
        "{pass}/{} pass, {inconclusive} inconclusive, {failed} fail (bound {bound})",
        rows.len()
    );
    if failed > 0 {
        Err(fail(EXIT_VERIFY, format!("{failed} rows failed")))
    } else {
        Ok(())
    }
}

fn cmd_search(
    ws: Option<Workspace>,
    from: i64,
    to: i64,
    bound: u64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> CmdResult {
    if from < 1 || to < from || bound < 1 || jobs < 1 {
        return Err(fail(
            EXIT_USAGE,
            "need 1 ≤ --from ≤ --to, --bound ≥ 1 and --jobs ≥ 1",
        ));
    }
    let config = json!({ "command": "search", "from": from, "to": to, "bound": bound });
    let verdicts = match &ws {
        Some(ws) => search_range_with(from, to, bound, jobs, &|d| {
            ws.genera(d)
                .expect("workspace write")
                .into_values()
                .collect()
        }),
        None => search_range(from, to, bound, jobs),
    }
    .map_err(|e: RegularityError| precondition(e))?;
    let mut text =
        json!({ "version": VERSION, "config_hash": config_hash(&config), "config": config })
            .to_string();
    text.push('\n');
    for v in &verdicts {
        let mut line = serde_json::to_value(v).unwrap();
        line["disc"] = json!(v.form.discriminant());
        text += &line.to_string();
        text.push('\n');
    }
    emit(out, &text)
}

fn cmd_tables(
    ws: Option<Workspace>,
    regular: &Option<PathBuf>,
    spinor: &Option<PathBuf>,
    format: Format,
    search_bound: i64,
    out: &Option<PathBuf>,
) -> CmdResult {
    let (r_rows, r_text) = read_candidates(regular, REGULAR_CSV, "jks_regular.csv", true)?;
    let (s_rows, s_text) = read_candidates(spinor, TABLE1_CSV, "table1.csv", true)?;
    if let Some(ws) = &ws {
        ws.ingest("regular", &r_text)
            .and_then(|_| ws.ingest("spinor", &s_text))
            .map_err(|e| fail(EXIT_DATA, e.to_string()))?;
    }
    let config = json!({
        "command": "tables",
        "regular_sha256": sha256_hex(r_text.as_bytes()),
        "spinor_sha256": sha256_hex(s_text.as_bytes()),
        "search_bound": search_bound,
        "format": if format == Format::Ascii { "ascii" } else { "csv" },
    });
    let (r, s): (BTreeSet<i64>, BTreeSet<i64>) = (disc_set(&r_rows), disc_set(&s_rows));
    let mut text = format!("# ternary {VERSION} config {}\n", config_hash(&config));
    let mut last_table = 0;
    for spec in appendix_specs() {
        let t = build_status_table(&spec, &r, &s, search_bound);
        match format {
            Format::Ascii => {
                if spec.table != last_table {
                    text += &format!("\nTable {}\n", spec.table);
                    last_table = spec.table;
                }
                text += &t.render_ascii();
            }
            Format::Csv => {
                let csv = t.render_csv();
                let body = if last_table == 0 {
                    &csv[..]
                } else {
                    csv.split_once('\n').unwrap().1
                };
                text += body;
                last_table = spec.table;
            }
        }
    }
    emit(out, &text)
}

fn cmd_self_regular(
    from: i64,
    to: i64,
    appendix_cells: bool,
    bound: u64,
    out: &Option<PathBuf>,
) -> CmdResult {
    if from < 1 || to < from {
        return Err(fail(EXIT_USAGE, "need 1 ≤ --from ≤ --to"));
    }
    let discs: BTreeSet<i64> = if appendix_cells {
        let empty = BTreeSet::new();
        appendix_specs()
            .iter()
            .flat_map(|spec| {
                let t = build_status_table(spec, &empty, &empty, i64::MAX);
                t.values
                    .into_iter()
                    .flatten()
                    .zip(t.cells.into_iter().flatten())
                    .collect::<Vec<_>>()
            })
            .filter(|(v, c)| !c.contains(DiscStatus::X) && (from..=to).contains(v))
            .map(|(v, _)| v)
            .collect()
    } else {
        (from..=to).collect()
    };
    let mut rows = Vec::new();
    for d in discs {
        rows.extend(
            regular_candidates(d, bound)
                .into_iter()
                .map(|f| (d, f, Source::SelfComputed)),
        );
    }
    let config = json!({
        "command": "self-regular",
        "from": from,
        "to": to,
        "appendix_cells": appendix_cells,
        "bound": bound,
    });
    emit(
        out,
        &format!(
            "# ternary {VERSION} config {}\n{}",
            config_hash(&config),
            render_candidates(&rows)
        ),
    )
}

fn run(cli: Cli) -> CmdResult {
    let ws = open_workspace(&cli.workspace)?;
    match cli.command {
        Command::Analyze { form, prime, bound } => cmd_analyze(&form, prime, bound),
        Command::Watson { form, p, chain } => cmd_watson(&form, p, chain),
        Command::VerifyTable1 { bound, table1 } => cmd_verify_table1(bound, &table1),
        Command::Search {
            from,
            to,
            bound,
            jobs,
            out,
        } => cmd_search(ws, from, to, bound, jobs, &out),
        Command::Tables {
            regular,
            spinor,
            format,
            search_bound,
            out,
        } => cmd_tables(ws, &regular, &spinor, format, search_bound, &out),
        Command::SelfRegular {
            from,
            to,
            appendix_cells,
            bound,
            out,
        } => cmd_self_regular(from, to, appendix_cells, bound, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
