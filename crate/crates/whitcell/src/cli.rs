//! Batch command-line surface with deterministic, machine-readable output.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure (a table or
//! theorem check that did not hold).

use crate::cellfam::{descent_class_report, sigma_s, verify_tables};
use crate::chars::{char_table, decompose, install_table_from_json};
use crate::error::{Error, Result};
use crate::poly::PolyJson;
use crate::rootsys::{build_cartan, CartanDatum, TypeLabel};
use crate::weyl::{self, Family, SimpleSet};
use crate::whitpoly::{scan_speculation, verify_split_theorems, whittaker_json, ScanRow};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "whitcell",
    about = "Descent classes, two-sided-cell data and Whittaker polynomials for Weyl groups",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// Cartan type: A, B, C, D or G2.
    #[arg(long = "type", global = true, default_value = "A")]
    type_label: String,

    /// Rank of the root system.
    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,

    /// Subset of simple roots: comma-separated Bourbaki indices ("1,3,4"),
    /// "" for the empty set, "all" for Delta, "Sj:k" for S_k, "Sj*:k" for
    /// its complement.
    #[arg(long, global = true, default_value = "")]
    subset: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Skip the on-disk character-table cache.
    #[arg(long, global = true, default_value_t = false)]
    no_cache: bool,

    /// Enumeration guard; defaults to 8 for type A, 7 for B/C/D, 2 for G2.
    #[arg(long, global = true)]
    max_rank: Option<usize>,

    /// Accepted for interface stability; no command path is randomized.
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Root-system datum: simple roots, coroots, Cartan matrix, exponents.
    Roots,
    /// Enumerate the Weyl group: window, length, reflection length.
    Group,
    /// Elements with left descent set exactly S.
    DescentClass,
    /// Decomposition of the cell representation sigma_S.
    Sigma,
    /// Family report for C_S: phi, a-values, special orbits.
    Report,
    /// Check the two-sided-cell tables for the given type and rank.
    VerifyTables,
    /// The Whittaker polynomial P_{G,S}(X) with its splitting data.
    Whittaker,
    /// Check the closed-form splitting theorems.
    VerifySplit,
    /// Whittaker polynomials and splitting for every subset S.
    Scan,
    /// Fixed-point oracle: chi(w) = n^{d(w)} on Y/nY for oasitic n.
    Oracle {
        /// Covering degree n.
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
}

/// Parses a subset specifier: "" (empty), "all", "Sj:k", "Sj*:k" or a
/// comma-separated list of 1-based Bourbaki indices.
pub fn parse_subset(spec: &str, rank: usize) -> Result<SimpleSet> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(SimpleSet::new());
    }
    if spec.eq_ignore_ascii_case("all") {
        return Ok((1..=rank).collect());
    }
    let prefix_of = |k: usize| -> Result<SimpleSet> {
        if k > rank {
            return Err(Error::Parse {
                what: "subset (k exceeds rank)",
                input: spec.to_string(),
            });
        }
        Ok((1..=k).collect())
    };
    if let Some(rest) = spec.strip_prefix("Sj*:") {
        let k: usize = rest.parse().map_err(|_| Error::Parse {
            what: "subset",
            input: spec.to_string(),
        })?;
        let s = prefix_of(k)?;
        return Ok((1..=rank).filter(|i| !s.contains(i)).collect());
    }
    if let Some(rest) = spec.strip_prefix("Sj:") {
        let k: usize = rest.parse().map_err(|_| Error::Parse {
            what: "subset",
            input: spec.to_string(),
        })?;
        return prefix_of(k);
    }
    let mut out = SimpleSet::new();
    for part in spec.split(',') {
        let i: usize = part.trim().parse().map_err(|_| Error::Parse {
            what: "subset",
            input: spec.to_string(),
        })?;
        if i < 1 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, max: rank });
        }
        out.insert(i);
    }
    Ok(out)
}

fn default_guard(t: TypeLabel) -> usize {
    match t {
        TypeLabel::A => 8,
        TypeLabel::B | TypeLabel::C | TypeLabel::D => 7,
        TypeLabel::G2 => 2,
    }
}

fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("WHITCELL_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    let base = std::env::var("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .unwrap_or_else(|_| {
            let home = std::env::var("HOME").unwrap_or_else(|_| ".".into());
            PathBuf::from(home).join(".cache")
        });
    base.join("whitcell")
}

fn warm_table_cache(datum: &CartanDatum, no_cache: bool) {
    if no_cache {
        return;
    }
    let family = Family::of(datum);
    let path = cache_dir().join(format!(
        "chartab-v{}-{:?}-{}.json",
        crate::chars::TABLE_FORMAT_VERSION,
        family,
        datum.rank
    ));
    let mut loaded = false;
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(json) = serde_json::from_str::<serde_json::Value>(&text) {
            loaded = install_table_from_json(family, datum.rank, &json).unwrap_or(false);
        }
    }
    if !loaded {
        if let Ok(table) = char_table(datum) {
            if std::fs::create_dir_all(cache_dir()).is_ok() {
                let _ = std::fs::write(&path, table.to_json().to_string());
            }
        }
    }
}

struct Output {
    text: String,
    verification_failed: bool,
}

fn ok_output(text: String) -> Result<Output> {
    Ok(Output {
        text,
        verification_failed: false,
    })
}

fn run(args: &Args) -> Result<Output> {
    let type_label = TypeLabel::parse(&args.type_label)?;
    let guard = args.max_rank.unwrap_or_else(|| default_guard(type_label));
    if args.rank > guard {
        return Err(Error::RankTooLarge {
            rank: args.rank,
            bound: guard,
        });
    }
    let datum = build_cartan(type_label, args.rank)?;
    let subset = parse_subset(&args.subset, args.rank)?;
    match &args.command {
        Cmd::Roots => {
            let json = datum.to_json();
            match args.format {
                Format::Json => ok_output(json.to_string()),
                Format::Csv => {
                    let mut out = String::from("kind,index,coordinates\n");
                    for (i, root) in datum.simple_roots.iter().enumerate() {
                        out += &format!("simple,{},\"{:?}\"\n", i + 1, root);
                    }
                    for (i, root) in datum.positive_roots.iter().enumerate() {
                        out += &format!("positive,{},\"{:?}\"\n", i + 1, root);
                    }
                    ok_output(out)
                }
                Format::Text => {
                    let mut out = format!(
                        "{}_{}: |W| = {}, {} positive roots, exponents {:?}\n",
                        type_label,
                        args.rank,
                        datum.weyl_order,
                        datum.positive_roots.len(),
                        datum.exponents
                    );
                    out += &format!("cartan matrix: {:?}\n", datum.cartan_matrix);
                    ok_output(out)
                }
            }
        }
        Cmd::Group => {
            let elements = weyl::enumerate_group(&datum)?;
            match args.format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = elements
                        .iter()
                        .map(|w| {
                            serde_json::json!({
                                "window": w.to_string(),
                                "length": weyl::length(w),
                                "reflection_length": weyl::reflection_length(w),
                            })
                        })
                        .collect();
                    ok_output(serde_json::json!({"order": elements.len(), "elements": rows}).to_string())
                }
                Format::Csv => {
                    let mut out = String::from("window,length,reflection_length\n");
                    for w in &elements {
                        out += &format!(
                            "\"{}\",{},{}\n",
                            w,
                            weyl::length(w),
                            weyl::reflection_length(w)
                        );
                    }
                    ok_output(out)
                }
                Format::Text => {
                    let mut out = format!("|W({}_{})| = {}\n", type_label, args.rank, elements.len());
                    for w in &elements {
                        out += &format!("{}  l={}\n", w, weyl::length(w));
                    }
                    ok_output(out)
                }
            }
        }
        Cmd::DescentClass => {
            let class = weyl::descent_class(&datum, &subset)?;
            match args.format {
                Format::Json => {
                    let windows: Vec<String> =
                        class.elements.iter().map(|w| w.to_string()).collect();
                    ok_output(
                        serde_json::json!({
                            "S": subset.iter().cloned().collect::<Vec<_>>(),
                            "size": windows.len(),
                            "elements": windows,
                        })
                        .to_string(),
                    )
                }
                Format::Csv => {
                    let mut out = String::from("window\n");
                    for w in &class.elements {
                        out += &format!("\"{}\"\n", w);
                    }
                    ok_output(out)
                }
                Format::Text => {
                    let mut out = format!(
                        "C_S for S={:?}: {} elements\n",
                        subset.iter().collect::<Vec<_>>(),
                        class.elements.len()
                    );
                    for w in &class.elements {
                        out += &format!("{}\n", w);
                    }
                    ok_output(out)
                }
            }
        }
        Cmd::Sigma => {
            warm_table_cache(&datum, args.no_cache);
            let sigma = sigma_s(&datum, &subset)?;
            let decomp = decompose(&sigma)?;
            let json = serde_json::json!({
                "S": subset.iter().cloned().collect::<Vec<_>>(),
                "degree": crate::cellfam::sigma_degree(&sigma),
                "decomposition": decomp
                    .iter()
                    .map(|(l, m)| serde_json::json!({"label": l.to_string(), "mult": m}))
                    .collect::<Vec<_>>(),
            });
            match args.format {
                Format::Json => ok_output(json.to_string()),
                Format::Csv => {
                    let mut out = String::from("label,mult\n");
                    for (l, m) in &decomp {
                        out += &format!("\"{}\",{}\n", l, m);
                    }
                    ok_output(out)
                }
                Format::Text => {
                    let mut out = format!(
                        "sigma_S for S={:?} (degree {})\n",
                        subset.iter().collect::<Vec<_>>(),
                        crate::cellfam::sigma_degree(&sigma)
                    );
                    for (l, m) in &decomp {
                        out += &format!("  {} x{}\n", l, m);
                    }
                    ok_output(out)
                }
            }
        }
        Cmd::Report => {
            warm_table_cache(&datum, args.no_cache);
            let report = descent_class_report(&datum, &subset)?;
            match args.format {
                Format::Json => ok_output(report.to_json().to_string()),
                Format::Csv => {
                    let mut out = String::from("field,value\n");
                    out += &format!("phi,{}\n", report.phi);
                    out += &format!(
                        "a_values,\"{:?}\"\n",
                        report.a_values.iter().collect::<Vec<_>>()
                    );
                    out += &format!(
                        "orbits,\"{}\"\n",
                        report
                            .orbits
                            .iter()
                            .map(|o| o.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                    ok_output(out)
                }
                Format::Text => {
                    let mut out = format!(
                        "S = {:?}: phi = {}\n",
                        subset.iter().collect::<Vec<_>>(),
                        report.phi
                    );
                    out += &format!("a-values: {:?}\n", report.a_values.iter().collect::<Vec<_>>());
                    out += "orbits:";
                    for o in &report.orbits {
                        out += &format!(" {}", o);
                    }
                    out += "\ndecomposition:\n";
                    for (l, m) in &report.decomposition {
                        out += &format!("  {} x{}\n", l, m);
                    }
                    ok_output(out)
                }
            }
        }
        Cmd::VerifyTables => {
            warm_table_cache(&datum, args.no_cache);
            let verification = verify_tables(type_label, args.rank)?;
            let failed = !verification.passed;
            let text = match args.format {
                Format::Json => serde_json::to_string(&verification).unwrap(),
                Format::Csv => {
                    let mut out = String::from("j,phi\n");
                    for (j, phi) in &verification.phi_points {
                        out += &format!("{},{}\n", j, phi);
                    }
                    out
                }
                Format::Text => {
                    let mut out = format!(
                        "tables for {}_{}: {}\n",
                        verification.type_label,
                        verification.rank,
                        if verification.passed { "PASS" } else { "FAIL" }
                    );
                    for row in &verification.rows {
                        out += &format!(
                            "  j={}: phi {}/{} a:{} orbits:{}{} witnesses:{}{}\n",
                            row.j,
                            row.got_phi,
                            row.expected_phi,
                            row.a_values_ok,
                            row.orbits_ok,
                            if row.tag_swap_warning { " (I/II swap)" } else { "" },
                            row.witnesses_ok,
                            if row.passed { "" } else { "  <- FAIL" },
                        );
                    }
                    if let Some(note) = &verification.monotonicity_note {
                        out += &format!("  note: {}\n", note);
                    }
                    out
                }
            };
            Ok(Output {
                text,
                verification_failed: failed,
            })
        }
        Cmd::Whittaker => {
            warm_table_cache(&datum, args.no_cache);
            let json = whittaker_json(&datum, &subset)?;
            match args.format {
                Format::Json => ok_output(serde_json::to_string(&json).unwrap()),
                Format::Csv => {
                    let mut out = String::from("type,rank,S,den,coeffs,splits\n");
                    out += &format!(
                        "{},{},\"{:?}\",{},\"{:?}\",{}\n",
                        json.r#type,
                        json.rank,
                        json.s,
                        json.poly.den,
                        json.poly.num_coeffs,
                        json.splits
                    );
                    ok_output(out)
                }
                Format::Text => {
                    let p = crate::whitpoly::whittaker_poly(&datum, &subset)?;
                    ok_output(format!(
                        "P_{{{}_{},S={:?}}}(X) = {}\nsplits over Q: {}\n",
                        type_label,
                        args.rank,
                        subset.iter().collect::<Vec<_>>(),
                        p,
                        json.splits
                    ))
                }
            }
        }
        Cmd::VerifySplit => {
            warm_table_cache(&datum, args.no_cache);
            let report = verify_split_theorems(type_label, args.rank)?;
            let failed = !report.passed;
            let text = match args.format {
                Format::Json => serde_json::to_string(&report).unwrap(),
                Format::Csv => {
                    let mut out = String::from("check,passed,detail\n");
                    for c in &report.checks {
                        out += &format!("\"{}\",{},\"{}\"\n", c.name, c.passed, c.detail);
                    }
                    out
                }
                Format::Text => {
                    let mut out = format!(
                        "splitting theorems for {}_{}: {}\n",
                        report.type_label,
                        report.rank,
                        if report.passed { "PASS" } else { "FAIL" }
                    );
                    for c in &report.checks {
                        out += &format!(
                            "  {}: {} ({})\n",
                            c.name,
                            if c.passed { "ok" } else { "FAIL" },
                            c.detail
                        );
                    }
                    out
                }
            };
            Ok(Output {
                text,
                verification_failed: failed,
            })
        }
        Cmd::Scan => {
            warm_table_cache(&datum, args.no_cache);
            let report = scan_parallel(&datum, args.jobs.max(1))?;
            let failed = !report.flat_implies_split;
            let text = match args.format {
                Format::Json => serde_json::to_string(&report).unwrap(),
                Format::Csv => {
                    // One row per subset, mirroring the printed table layout:
                    // common denominator first, then numerator coefficients.
                    let mut out = String::from("S,den,num_coeffs,splits,in_flat_union\n");
                    for row in &report.rows {
                        out += &format!(
                            "\"{:?}\",{},\"{:?}\",{},{}\n",
                            row.s, row.poly.den, row.poly.num_coeffs, row.splits, row.in_flat_union
                        );
                    }
                    out
                }
                Format::Text => {
                    let mut out = format!(
                        "scan {}_{}: flat => split: {}\n",
                        report.type_label,
                        report.rank,
                        if report.flat_implies_split { "ok" } else { "FAIL" }
                    );
                    for row in &report.rows {
                        out += &format!(
                            "  S={:?} den={} num={:?} splits={} flat={}\n",
                            row.s, row.poly.den, row.poly.num_coeffs, row.splits, row.in_flat_union
                        );
                    }
                    if !report.converse_exceptions.is_empty() {
                        out += &format!(
                            "  observation: splitting outside the flat union at {:?}\n",
                            report.converse_exceptions
                        );
                    }
                    out
                }
            };
            Ok(Output {
                text,
                verification_failed: failed,
            })
        }
        Cmd::Oracle { n } => {
            let elements = weyl::enumerate_group(&datum)?;
            let oasitic = datum.oasitic(*n);
            let mut mismatches = Vec::new();
            for w in &elements {
                let got = crate::whitpoly::brute_force_chi(&datum, w, *n)?;
                let predicted = n.pow(weyl::fixed_dim(w) as u32);
                if got != predicted {
                    mismatches.push(serde_json::json!({
                        "w": w.to_string(),
                        "fixed_points": got,
                        "n_pow_d": predicted,
                    }));
                }
            }
            // The formula is only claimed for oasitic degrees.
            let failed = oasitic && !mismatches.is_empty();
            let json = serde_json::json!({
                "type": type_label.to_string(),
                "rank": args.rank,
                "n": n,
                "oasitic": oasitic,
                "checked": elements.len(),
                "mismatches": mismatches,
            });
            let text = match args.format {
                Format::Json => json.to_string(),
                Format::Csv => format!(
                    "n,oasitic,checked,mismatches\n{},{},{},{}\n",
                    n,
                    oasitic,
                    elements.len(),
                    json["mismatches"].as_array().unwrap().len()
                ),
                Format::Text => format!(
                    "oracle {}_{} n={} (oasitic: {}): {} elements checked, {} mismatches\n",
                    type_label,
                    args.rank,
                    n,
                    oasitic,
                    elements.len(),
                    json["mismatches"].as_array().unwrap().len()
                ),
            };
            Ok(Output {
                text,
                verification_failed: failed,
            })
        }
    }
}

/// Scan with a bounded worker pool; rows are reassembled in subset order.
fn scan_parallel(datum: &CartanDatum, jobs: usize) -> Result<crate::whitpoly::ScanReport> {
    if jobs <= 1 {
        return scan_speculation(datum);
    }
    let r = datum.rank;
    let total = 1u32 << r;
    let mut row_slots: Vec<Option<ScanRow>> = (0..total).map(|_| None).collect();
    let next = std::sync::atomic::AtomicU32::new(0);
    let results = std::sync::Mutex::new(Vec::<(u32, Result<ScanRow>)>::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(total as usize) {
            scope.spawn(|| loop {
                let bits = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if bits >= total {
                    break;
                }
                let s: SimpleSet = (1..=r).filter(|i| bits >> (i - 1) & 1 == 1).collect();
                let row = scan_one(datum, &s);
                results.lock().unwrap().push((bits, row));
            });
        }
    });
    for (bits, row) in results.into_inner().unwrap() {
        row_slots[bits as usize] = Some(row?);
    }
    let rows: Vec<ScanRow> = row_slots.into_iter().map(|r| r.unwrap()).collect();
    let flat_implies_split = rows.iter().all(|row| !row.in_flat_union || row.splits);
    let converse_exceptions = rows
        .iter()
        .filter(|row| row.splits && !row.in_flat_union)
        .map(|row| row.s.clone())
        .collect();
    Ok(crate::whitpoly::ScanReport {
        type_label: datum.type_label.to_string(),
        rank: r,
        rows,
        flat_implies_split,
        converse_exceptions,
    })
}

fn scan_one(datum: &CartanDatum, s: &SimpleSet) -> Result<ScanRow> {
    let p = crate::whitpoly::whittaker_poly(datum, s)?;
    let rep = p.split_over_q();
    Ok(ScanRow {
        s: s.iter().cloned().collect(),
        poly: PolyJson::of(&p),
        splits: rep.splits,
        in_flat_union: crate::whitpoly::in_flat_union(datum, s),
        agrees_with_speculation: rep.splits == crate::whitpoly::in_flat_union(datum, s),
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // clap prints help/version on stdout with exit 0 by convention.
            if e.use_stderr() {
                eprintln!("{}", e);
                std::process::exit(1);
            } else {
                print!("{}", e);
                std::process::exit(0);
            }
        }
    };
    match run(&args) {
        Ok(output) => {
            let mut stdout = std::io::stdout();
            let _ = stdout.write_all(output.text.as_bytes());
            if !output.text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            std::process::exit(if output.verification_failed { 2 } else { 0 });
        }
        Err(e) => {
            eprintln!("error: {}", e);
            eprintln!("usage: whitcell <command> --type <A|B|C|D|G2> --rank <r> [--subset S] [--format json|csv|text]");
            std::process::exit(1);
        }
    }
}
