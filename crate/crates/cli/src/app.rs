use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latsize::family::{
    check_lemma_ad_restriction, check_lemma_forced_width, closed_form_ls_cube,
    closed_form_ls_delta, make_family_simplex, theorem_scope, witness_cube_map, witness_matrix,
    FamilyParams,
};
use latsize::geometry::{
    apply_map, lattice_width_with_budget, width_minimizers, AffineUnimodularMap, Direction,
    GeometryError, LatticePolytope, DEFAULT_ENUMERATION_BUDGET,
};
use latsize::search::{
    fits, ls_cube, ls_delta, SearchConfig, SearchError, SearchResult, SizeKind,
    DEFAULT_NODE_BUDGET,
};
use num_bigint::BigInt;
use serde_json::Value;

use crate::document::{big_json, PolytopeDocument};
use crate::sweep::{
    run_sweep, sweep_exit_code, OracleOptions, ParamRange, SweepSpec, VerifyOptions, VerifyRow,
    COLUMNS,
};
use crate::{exit, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "latsize",
    version,
    about = "Exact lattice width and lattice size of lattice polytopes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the search and oracle (default: all cores).
    #[arg(long, global = true, env = "LATSIZE_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Partial matrices the search may assemble per invocation.
    #[arg(long, global = true, env = "LATSIZE_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice width and a witness direction.
    Width {
        /// Polytope document, or `-` for standard input.
        input: String,
        /// Also list every width-minimizing primitive direction.
        #[arg(long)]
        all: bool,
    },
    /// Lattice size with respect to the standard simplex.
    Lsdelta(SizeArgs),
    /// Lattice size with respect to the unit cube.
    Lscube(SizeArgs),
    /// Closed forms and witness for the simplex T_{p1...pd}.
    Family {
        #[arg(required = true, num_args = 1..)]
        params: Vec<u64>,
        /// Also run the exact search and compare.
        #[arg(long)]
        search: bool,
    },
    /// Compare closed forms with search over a parameter sweep.
    Verify(VerifyArgs),
    /// Complete enumeration checks of the direction lemmas for T_{p1...pd}.
    Lemmas {
        #[arg(required = true, num_args = 1..)]
        params: Vec<u64>,
    },
}

#[derive(Args, Debug)]
struct SizeArgs {
    /// Polytope document, or `-` for standard input.
    input: String,
    /// Re-verify the witness: determinant ±1 and containment of the image.
    #[arg(long)]
    certify: bool,
    /// Never search above this bound.
    #[arg(long)]
    upper_bound: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Inclusive range LO:HI (or a single N) for the next parameter; repeat
    /// once per parameter.
    #[arg(long = "p", value_name = "LO:HI")]
    ranges: Vec<ParamRange>,
    /// Skip tuples outside the closed-form scope
    #[arg(long)]
    in_scope_only: bool,
    /// Skip tuples whose parameters share a common factor
    #[arg(long)]
    coprime_only: bool,
    /// Cross-check with the brute-force oracle (ambient dimension at most 3).
    #[arg(long)]
    oracle: bool,
    /// Oracle entry bound; default is one more than the witness's largest entry.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    entry_bound: Option<u64>,
    /// Oracle time budget in seconds.
    #[arg(long, default_value_t = 300.0)]
    time_budget: f64,
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::failure(code, text)
            } else {
                Outcome::success(text)
            };
        }
    };
    let pool = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n as usize).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return Outcome::failure(exit::USAGE, format!("error: {e}\n")),
    };
    let (code, report) = match pool.install(|| dispatch(&cli)) {
        Ok(done) => done,
        Err(failure) => return failure,
    };
    let text = report.render(cli.format);
    match &cli.output {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::failure(exit::USAGE, format!("error: {}: {e}\n", path.display())),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

type Done = Result<(i32, Report), Outcome>;

fn dispatch(cli: &Cli) -> Done {
    let search = SearchConfig {
        node_budget: cli.node_budget,
        ..SearchConfig::default()
    };
    match &cli.command {
        Command::Width { input, all } => cmd_width(&read_document(input)?, *all),
        Command::Lsdelta(args) => cmd_size(SizeKind::Simplex, args, search),
        Command::Lscube(args) => cmd_size(SizeKind::Cube, args, search),
        Command::Family { params, search: run } => cmd_family(params, *run, &search),
        Command::Verify(args) => cmd_verify(args, search),
        Command::Lemmas { params } => cmd_lemmas(params),
    }
}

fn read_document(input: &str) -> Result<PolytopeDocument, Outcome> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(input).map_err(|e| usage(format!("{input}: {e}")))?
    };
    PolytopeDocument::parse(&text).map_err(|e| usage(format!("{input}: {e}")))
}

fn usage(msg: impl std::fmt::Display) -> Outcome {
    Outcome::failure(exit::USAGE, format!("error: {msg}\n"))
}

fn geometry_failure(e: GeometryError) -> Outcome {
    match e {
        GeometryError::BudgetExceeded { .. } => {
            Outcome::failure(exit::BUDGET, format!("error: {e}\n"))
        }
        other => usage(other),
    }
}

fn search_failure(e: SearchError) -> Outcome {
    match e {
        SearchError::Geometry(g) => geometry_failure(g),
        SearchError::WitnessCheckFailed => {
            Outcome::failure(exit::MISMATCH, format!("error: {e}\n"))
        }
        other => usage(other),
    }
}

fn cmd_width(doc: &PolytopeDocument, all: bool) -> Done {
    let p = doc.to_polytope();
    let (w, witness) =
        lattice_width_with_budget(&p, DEFAULT_ENUMERATION_BUDGET).map_err(geometry_failure)?;
    let mut r = Report::default();
    r.push("width", big_json(&w));
    r.push("witness", direction_json(&witness));
    if all {
        let (_, dirs) =
            width_minimizers(&p, DEFAULT_ENUMERATION_BUDGET).map_err(geometry_failure)?;
        r.push("minimizers", Value::Array(dirs.iter().map(direction_json).collect()));
    }
    Ok((exit::OK, r))
}

fn cmd_size(kind: SizeKind, args: &SizeArgs, mut cfg: SearchConfig) -> Done {
    let doc = read_document(&args.input)?;
    let p = doc.to_polytope();
    cfg.initial_upper_bound = args.upper_bound;
    let result = match kind {
        SizeKind::Simplex => ls_delta(&p, &cfg),
        SizeKind::Cube => ls_cube(&p, &cfg),
    }
    .map_err(search_failure)?;
    let name = match kind {
        SizeKind::Simplex => "ls_delta",
        SizeKind::Cube => "ls_cube",
    };
    let mut r = Report::default();
    r.push(name, Value::from(result.value));
    push_search_details(&mut r, &result);
    let mut code = if result.certified {
        exit::OK
    } else {
        exit::BUDGET
    };
    if args.certify {
        let ok = certify(&p, &result);
        r.push("certify", Value::from(if ok { "ok" } else { "failed" }));
        if !ok {
            code = exit::MISMATCH;
        }
    }
    Ok((code, r))
}

fn push_search_details(r: &mut Report, result: &SearchResult) {
    r.push("certified", Value::Bool(result.certified));
    r.push("lower_bound", Value::from(result.lower_bound));
    r.push("witness", matrix_json(&result.witness));
    r.push("translation", Value::Array(result.witness.translation().iter().map(big_json).collect()));
    r.push("nodes_explored", Value::from(result.nodes_explored));
    r.push("candidates_considered", Value::from(result.candidates_considered));
}

/// Independent re-check of a search witness.
fn certify(p: &LatticePolytope, result: &SearchResult) -> bool {
    let unimodular = result
        .witness
        .matrix()
        .determinant()
        .is_ok_and(|d| d == BigInt::from(1) || d == BigInt::from(-1));
    let image = apply_map(&result.witness, p);
    unimodular && image.is_ok_and(|img| fits(result.kind, &img, result.value))
}

fn family_params(p: &[u64]) -> Result<FamilyParams, Outcome> {
    FamilyParams::from_u64(p).map_err(usage)
}

fn cmd_family(p: &[u64], run_search: bool, cfg: &SearchConfig) -> Done {
    let params = family_params(p)?;
    let scope = theorem_scope(&params);
    let t = make_family_simplex(&params);
    let mut r = Report::default();
    r.push("params", Value::from(params.to_string()));
    r.push("d", Value::from(params.d()));
    r.push("alpha", big_json(&params.alpha()));
    r.push("k", params.k().as_ref().map_or(Value::Null, big_json));
    r.push("scope", Value::from(scope.to_string()));
    r.push("in_scope", Value::Bool(scope.in_scope()));
    let delta = closed_form_ls_delta(&params).ok();
    let cube = closed_form_ls_cube(&params).ok();
    r.push("ls_delta", delta.as_ref().map_or(Value::Null, big_json));
    r.push("ls_cube", cube.as_ref().map_or(Value::Null, big_json));
    let witness = witness_matrix(&params).ok();
    r.push("witness", witness.as_ref().map_or(Value::Null, matrix_json));
    r.push(
        "cube_translation",
        witness_cube_map(&params)
            .ok()
            .map_or(Value::Null, |m| Value::Array(m.translation().iter().map(big_json).collect())),
    );
    let name = format!("T_{{{}}}", p.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    r.push("polytope", PolytopeDocument::from_polytope(&t, Some(name)).to_json());

    let mut code = exit::OK;
    // out-of-scope parameters have no closed form, so search is the answer
    if run_search || !scope.in_scope() {
        let cfg = SearchConfig {
            seed: witness,
            ..cfg.clone()
        };
        let sd = ls_delta(&t, &cfg);
        let sc = ls_cube(&t, &cfg);
        let (sd, sc) = match (sd, sc) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(SearchError::Degenerate), _) | (_, Err(SearchError::Degenerate)) => {
                r.push("search", Value::from("degenerate"));
                return Ok((code, r));
            }
            (Err(e), _) | (_, Err(e)) => return Err(search_failure(e)),
        };
        r.push("ls_delta_search", Value::from(sd.value));
        r.push("ls_cube_search", Value::from(sc.value));
        r.push("certified", Value::Bool(sd.certified && sc.certified));
        if !(sd.certified && sc.certified) {
            code = exit::BUDGET;
        }
        if let (Some(d), Some(c)) = (&delta, &cube) {
            let ok = *d == BigInt::from(sd.value) && *c == BigInt::from(sc.value);
            r.push("match", Value::Bool(ok));
            if !ok && code == exit::OK {
                code = exit::MISMATCH;
            }
        }
    }
    Ok((code, r))
}

fn cmd_verify(args: &VerifyArgs, search: SearchConfig) -> Done {
    if !(args.time_budget.is_finite() && args.time_budget >= 0.0) {
        return Err(usage("time budget must be a nonnegative number of seconds"));
    }
    let spec = SweepSpec {
        ranges: args.ranges.clone(),
        in_scope_only: args.in_scope_only,
        coprime_only: args.coprime_only,
    };
    let opts = VerifyOptions {
        search,
        oracle: args.oracle.then(|| OracleOptions {
            entry_bound: args.entry_bound,
            time_budget: Duration::from_secs_f64(args.time_budget),
        }),
    };
    let rows = run_sweep(&spec, &opts);
    let code = sweep_exit_code(&rows);
    Ok((code, Report::table(rows)))
}

fn cmd_lemmas(p: &[u64]) -> Done {
    let params = family_params(p)?;
    let budget = DEFAULT_ENUMERATION_BUDGET;
    let failure = |e: latsize::family::FamilyError| match e {
        latsize::family::FamilyError::Geometry(g) => geometry_failure(g),
        other => usage(other),
    };
    let ad = check_lemma_ad_restriction(&params, budget).map_err(failure)?;
    let forced = check_lemma_forced_width(&params, budget).map_err(failure)?;
    let coord = ad.coordinate;
    let negative: Vec<Value> = forced
        .directions
        .iter()
        .filter(|h| h.coords()[coord] == BigInt::from(-1))
        .map(direction_json)
        .collect();
    let mut r = Report::default();
    r.push("params", Value::from(params.to_string()));
    r.push("bound", big_json(&ad.bound));
    r.push("directions", Value::Array(ad.directions.iter().map(direction_json).collect()));
    r.push("a_d_restriction", Value::from(pass(ad.passed())));
    r.push("a_d_violations", Value::Array(ad.violations.iter().map(direction_json).collect()));
    r.push("forced_width", Value::from(pass(forced.passed())));
    r.push(
        "forced_width_violations",
        Value::Array(forced.violations.iter().map(direction_json).collect()),
    );
    r.push("a_d_minus_one", Value::Array(negative));
    let code = if ad.passed() && forced.passed() {
        exit::OK
    } else {
        exit::MISMATCH
    };
    Ok((code, r))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn direction_json(h: &Direction) -> Value {
    Value::Array(h.coords().iter().map(big_json).collect())
}

fn matrix_json(m: &AffineUnimodularMap) -> Value {
    Value::Array(
        m.matrix()
            .rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(big_json).collect()))
            .collect(),
    )
}

/// Either an ordered list of named fields or a verify table.
#[derive(Default)]
struct Report {
    fields: Vec<(&'static str, Value)>,
    table: Option<Vec<VerifyRow>>,
}

impl Report {
    fn push(&mut self, key: &'static str, value: Value) {
        self.fields.push((key, value));
    }

    fn table(rows: Vec<VerifyRow>) -> Self {
        Self {
            fields: Vec::new(),
            table: Some(rows),
        }
    }

    fn render(&self, format: Format) -> String {
        match (&self.table, format) {
            (Some(rows), Format::Text) => text_table(rows),
            (Some(rows), Format::Csv) => csv_table(rows),
            (Some(rows), Format::Json) => {
                let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
                s.push('\n');
                s
            }
            (None, Format::Text) => self.text_fields(),
            (None, Format::Csv) => self.csv_fields(),
            (None, Format::Json) => {
                let obj: serde_json::Map<String, Value> = self
                    .fields
                    .iter()
                    .map(|(k, v)| ((*k).to_string(), v.clone()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
                s.push('\n');
                s
            }
        }
    }

    fn text_fields(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            match value {
                // matrices and direction lists, one row per line
                Value::Array(rows) if rows.iter().any(Value::is_array) => {
                    out.push_str(&format!("{key}:\n"));
                    for row in rows {
                        out.push_str(&format!("  {}\n", text_value(row)));
                    }
                    if rows.is_empty() {
                        out.push_str("  (none)\n");
                    }
                }
                Value::Array(rows) if rows.is_empty() => {
                    out.push_str(&format!("{key}: (none)\n"));
                }
                v => out.push_str(&format!("{key}: {}\n", text_value(v))),
            }
        }
        out
    }

    fn csv_fields(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.fields.iter().map(|(k, _)| *k))
            .expect("in-memory write");
        w.write_record(self.fields.iter().map(|(_, v)| csv_value(v)))
            .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| x.is_number()) => format!(
            "({})",
            items.iter().map(Value::to_string).collect::<Vec<_>>().join(",")
        ),
        other => other.to_string(),
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_table(rows: &[VerifyRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(COLUMNS).expect("in-memory write");
    }
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn text_table(rows: &[VerifyRow]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(VerifyRow::cells).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([COLUMNS[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: Vec<&str>| {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(COLUMNS.to_vec());
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
