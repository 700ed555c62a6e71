//! Command-line front end. `run` parses arguments, dispatches and writes the
//! report; the binary only forwards its exit status.

use std::ffi::OsString;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::azflag::{az_delta_bound, solve_critical_weight, FlagConfig, Preset};
use crate::error::Error;
use crate::exactalg::Rat;
use crate::kclass::{
    classify_at, d1_normal_form, d1_stability, kss_domain, last_wall_replacement, reduce_hypersurface,
    verify_complexity_one_polystable, wall_degeneration, KVerdict, PlaneCurve, Poly4, PolystablePair,
};
use crate::lct::lct_pair;
use crate::vgit::{brute_force_git_oracle, enumerate_walls, git_classify, FamilyPoint, GitVerdict};

/// Grid bound for the brute-force oracle.
pub const ORACLE_BOUND: i64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Parser, Debug)]
#[command(name = "wpkstab", version, about = "Exact GIT and K-stability computations for curves on weighted projective planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Append decimal approximations to rationals (display only).
    #[arg(long, global = true)]
    pub approx: bool,
    /// Cross-check GIT verdicts with the brute-force oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Print version and timestamp metadata on standard error.
    #[arg(long, global = true)]
    pub meta: bool,
}

#[derive(Args, Debug, Clone)]
pub struct NArg {
    #[arg(long)]
    pub n: Option<u64>,
    /// Even family parameter; sets n = 2l.
    #[arg(long, conflicts_with = "n")]
    pub l: Option<u64>,
}

impl NArg {
    fn resolve(&self) -> Result<u64, CliError> {
        match (self.n, self.l) {
            (Some(0), _) | (_, Some(0)) => Err(CliError::Usage("n and l must be positive".into())),
            (Some(n), None) => Ok(n),
            (None, Some(l)) => Ok(2 * l),
            _ => Err(CliError::Usage("one of --n or --l is required".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Wall schedule, critical weight and domain end.
    Walls {
        #[command(flatten)]
        n: NArg,
    },
    /// K-stability verdict at one weight.
    Classify {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        point: String,
        #[arg(long, value_parser = parse_rat)]
        w: Rat,
    },
    /// Weights at which a curve is K-semistable and K-polystable.
    KssDomain {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        point: String,
    },
    /// GIT verdict from the cone criterion.
    Git {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        point: String,
        #[arg(long, value_parser = parse_rat)]
        w: Rat,
    },
    /// Log canonical threshold of the pair.
    Lct {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        point: String,
    },
    /// Isotrivial degeneration to the polystable curve at a wall.
    Degenerate {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        point: String,
        #[arg(long)]
        wall: u64,
    },
    /// Normal form of a plane curve on W0 (three exponents per term) or of a
    /// hypersurface in (t, x, y, z) (four exponents per term).
    NormalForm {
        #[command(flatten)]
        n: NArg,
        /// JSON list of [[exponents], "p/q"] terms.
        #[arg(long)]
        curve: String,
    },
    /// Abban-Zhuang bound for a flag preset.
    Az {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        preset: String,
        /// Omit to solve for the critical weight.
        #[arg(long, value_parser = parse_rat)]
        w: Option<Rat>,
    },
    /// GIT and K verdicts for every (point, weight) pair.
    Batch {
        #[command(flatten)]
        n: NArg,
        /// JSON file holding an array of points.
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        /// Point preset or inline JSON; may be repeated.
        #[arg(long)]
        point: Vec<String>,
        /// Comma-separated weights.
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, required = true)]
        w: Vec<Rat>,
    },
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Domain(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Domain(e) => write!(f, "{}", e),
        }
    }
}

/// What a `--point` argument names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSpec {
    Family(FamilyPoint),
    Pair(PolystablePair),
    D1(Vec<Rat>),
}

/// Presets: `dss`, `monomial:e`, `w0d0`, `d1:b0,b1,...`, or inline JSON
/// (`n` may be omitted and is then taken from the flags).
pub fn parse_point(n: u64, s: &str) -> Result<PointSpec, CliError> {
    let s = s.trim();
    let usage = |m: String| CliError::Usage(m);
    if s.starts_with('{') {
        let mut v: Value = serde_json::from_str(s).map_err(|e| usage(format!("point JSON: {}", e)))?;
        if let Value::Object(m) = &mut v {
            m.entry("n").or_insert(json!(n));
        }
        let p: FamilyPoint = serde_json::from_value(v).map_err(|e| usage(format!("point JSON: {}", e)))?;
        if p.n != n {
            return Err(usage(format!("point has n = {} but --n is {}", p.n, n)));
        }
        return Ok(PointSpec::Family(p));
    }
    if s == "dss" {
        return Ok(PointSpec::Family(FamilyPoint::dss(n)));
    }
    if s == "w0d0" {
        return Ok(PointSpec::Pair(last_wall_replacement(n)?));
    }
    if let Some(e) = s.strip_prefix("monomial:") {
        let e: usize = e.parse().map_err(|_| usage(format!("monomial index '{}'", e)))?;
        return Ok(PointSpec::Family(FamilyPoint::monomial(n, e).map_err(|e| usage(e.to_string()))?));
    }
    if let Some(bs) = s.strip_prefix("d1:") {
        let b = bs.split(',').map(|x| x.parse::<Rat>()).collect::<Result<Vec<_>, _>>();
        let b = b.map_err(|e| usage(e.to_string()))?;
        if b.len() != n as usize + 3 {
            return Err(usage(format!("d1 needs {} coefficients b_0..b_{}", n + 3, n + 2)));
        }
        return Ok(PointSpec::D1(b));
    }
    Err(usage(format!("unknown point '{}'", s)))
}

fn family(spec: PointSpec, cmd: &str) -> Result<FamilyPoint, CliError> {
    match spec {
        PointSpec::Family(p) => Ok(p),
        _ => Err(CliError::Usage(format!("{} needs a curve of the family", cmd))),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// A report plus an optional flat table used by the csv and md renderers.
pub struct Output {
    pub data: Value,
    pub table: Option<Vec<Value>>,
}

impl Output {
    fn single(data: Value) -> Output {
        Output { data, table: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRow {
    pub point: usize,
    pub w: Rat,
    pub git_semistable: Option<bool>,
    pub git_polystable: Option<bool>,
    pub k_verdict: Option<KVerdict>,
    pub agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRequest {
    pub points: Vec<FamilyPoint>,
    pub weights: Vec<Rat>,
    pub output: Format,
}

/// Verdicts only; the two methods may pick different witnesses.
pub fn oracle_agrees(o: &GitVerdict, g: &GitVerdict) -> bool {
    o.semistable == g.semistable && o.polystable == g.polystable
}

fn verdicts_agree(g: &GitVerdict, k: KVerdict) -> bool {
    g.semistable == k.semistable() && g.polystable == k.polystable()
}

fn batch_row(p: &FamilyPoint, idx: usize, w: &Rat, oracle: bool) -> BatchRow {
    let res = (|| -> crate::Result<(GitVerdict, KVerdict, Option<bool>)> {
        let g = git_classify(p, w)?;
        let k = classify_at(p, w)?;
        let o = if oracle { Some(oracle_agrees(&brute_force_git_oracle(p, w, ORACLE_BOUND)?, &g)) } else { None };
        Ok((g, k, o))
    })();
    match res {
        Ok((g, k, o)) => BatchRow {
            point: idx,
            w: w.clone(),
            git_semistable: Some(g.semistable),
            git_polystable: Some(g.polystable),
            k_verdict: Some(k),
            agree: Some(verdicts_agree(&g, k)),
            oracle_agrees: o,
            error: None,
        },
        Err(e) => BatchRow {
            point: idx,
            w: w.clone(),
            git_semistable: None,
            git_polystable: None,
            k_verdict: None,
            agree: None,
            oracle_agrees: None,
            error: Some(e.code().to_string()),
        },
    }
}

/// One row per (point, weight), points outer, in input order.
pub fn batch_classify(req: &BatchRequest, oracle: bool) -> Result<Vec<BatchRow>, CliError> {
    if req.points.is_empty() || req.weights.is_empty() {
        return Err(CliError::Usage("batch needs at least one point and one weight".into()));
    }
    let jobs: Vec<(usize, &FamilyPoint, &Rat)> = req
        .points
        .iter()
        .enumerate()
        .flat_map(|(i, p)| req.weights.iter().map(move |w| (i, p, w)))
        .collect();
    Ok(jobs.into_par_iter().map(|(i, p, w)| batch_row(p, i, w, oracle)).collect())
}

fn read_points(n: u64, input: &Option<std::path::PathBuf>, specs: &[String]) -> Result<Vec<FamilyPoint>, CliError> {
    let mut raw: Vec<Value> = Vec::new();
    if let Some(path) = input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
        let arr: Vec<Value> =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
        raw.extend(arr);
    }
    let mut points = Vec::new();
    for (i, v) in raw.into_iter().enumerate() {
        let p = parse_point(n, &v.to_string()).map_err(|e| CliError::Usage(format!("point {}: {}", i, e)))?;
        points.push(family(p, "batch").map_err(|e| CliError::Usage(format!("point {}: {}", i, e)))?);
    }
    for s in specs {
        let i = points.len();
        let p = parse_point(n, s).map_err(|e| CliError::Usage(format!("point {}: {}", i, e)))?;
        points.push(family(p, "batch").map_err(|e| CliError::Usage(format!("point {}: {}", i, e)))?);
    }
    Ok(points)
}

fn parse_terms<T: serde::de::DeserializeOwned>(s: &str) -> Result<Vec<(T, Rat)>, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("curve JSON: {}", e)))
}

/// Dispatches a parsed command. Per-row batch errors come back as `Ok` with
/// the error flag set in the second component.
pub fn execute(cli: &Cli) -> Result<(Output, bool), CliError> {
    let oracle = cli.oracle;
    let out = match &cli.command {
        Command::Walls { n } => {
            let s = enumerate_walls(n.resolve()?)?;
            let table = s.walls.iter().map(|(l, w)| json!({"label": l, "w": w})).collect();
            let data = json!({
                "n": s.n,
                "parity": s.parity,
                "schedule": s.values(),
                "labels": s.walls.iter().map(|(l, _)| l).collect::<Vec<_>>(),
                "xi": s.xi(),
                "domain_end": s.domain_end,
            });
            Output { data, table: Some(table) }
        }
        Command::Classify { n, point, w } => {
            let n = n.resolve()?;
            let data = match parse_point(n, point)? {
                PointSpec::Family(p) => {
                    let k = classify_at(&p, w)?;
                    let mut m = Map::new();
                    m.insert("n".into(), json!(n));
                    m.insert("w".into(), to_value(w));
                    m.insert("verdict".into(), to_value(&k));
                    m.insert("row".into(), to_value(&kss_domain(&p).row));
                    if oracle {
                        let g = git_classify(&p, w)?;
                        let o = brute_force_git_oracle(&p, w, ORACLE_BOUND)?;
                        m.insert("git_agrees".into(), json!(verdicts_agree(&g, k)));
                        m.insert("oracle_agrees".into(), json!(oracle_agrees(&o, &g)));
                    }
                    Value::Object(m)
                }
                PointSpec::D1(b) => json!({"n": n, "w": w, "verdict": d1_stability(n, &b, w)?}),
                PointSpec::Pair(pair) => {
                    crate::vgit::check_domain(n, w)?;
                    let rep = verify_complexity_one_polystable(&pair, w)?;
                    let verdict = if rep.passed { KVerdict::Polystable } else { KVerdict::Unstable };
                    json!({"n": n, "w": w, "verdict": verdict, "complexity_one": rep})
                }
            };
            Output::single(data)
        }
        Command::KssDomain { n, point } => {
            let n = n.resolve()?;
            let p = family(parse_point(n, point)?, "kss-domain")?;
            Output::single(to_value(&kss_domain(&p)))
        }
        Command::Git { n, point, w } => {
            let n = n.resolve()?;
            let p = family(parse_point(n, point)?, "git")?;
            let g = git_classify(&p, w)?;
            let mut v = to_value(&g);
            if oracle {
                let o = brute_force_git_oracle(&p, w, ORACLE_BOUND)?;
                v["oracle_agrees"] = json!(oracle_agrees(&o, &g));
            }
            Output::single(v)
        }
        Command::Lct { n, point } => {
            let n = n.resolve()?;
            let p = family(parse_point(n, point)?, "lct")?;
            Output::single(to_value(&lct_pair(&p)?))
        }
        Command::Degenerate { n, point, wall } => {
            let n = n.resolve()?;
            let p = family(parse_point(n, point)?, "degenerate")?;
            Output::single(to_value(&wall_degeneration(&p, *wall)?))
        }
        Command::NormalForm { n, curve } => {
            let n = n.resolve()?;
            let v: Value = serde_json::from_str(curve).map_err(|e| CliError::Usage(format!("curve JSON: {}", e)))?;
            let arity = v.get(0).and_then(|t| t.get(0)).and_then(Value::as_array).map(Vec::len);
            match arity {
                Some(3) => {
                    let c: PlaneCurve = parse_terms::<[u32; 3]>(curve)?.into_iter().collect();
                    Output::single(json!({"n": n, "b": d1_normal_form(n, &c)?}))
                }
                Some(4) => {
                    let f = Poly4::from(parse_terms::<[u32; 4]>(curve)?);
                    Output::single(to_value(&reduce_hypersurface(n, &f)?))
                }
                _ => return Err(CliError::Usage("terms need 3 or 4 exponents".into())),
            }
        }
        Command::Az { n, preset, w } => {
            let n = n.resolve()?;
            let preset: Preset = preset.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            match w {
                Some(w) => Output::single(to_value(&az_delta_bound(&FlagConfig::new(preset, n, w.clone())?)?)),
                None => {
                    let cfg = FlagConfig::new(preset, n, Rat::zero())?;
                    Output::single(json!({"preset": preset, "n": n, "critical_weight": solve_critical_weight(&cfg)?}))
                }
            }
        }
        Command::Batch { n, input, point, w } => {
            let n = n.resolve()?;
            let req = BatchRequest { points: read_points(n, input, point)?, weights: w.clone(), output: cli.format };
            let rows = batch_classify(&req, oracle)?;
            let failed = rows.iter().any(|r| r.error.is_some());
            let table: Vec<Value> = rows.iter().map(to_value).collect();
            return Ok((Output { data: Value::Array(table.clone()), table: Some(table) }, failed));
        }
    };
    Ok((out, false))
}

fn approx_value(v: &Value) -> Value {
    match v {
        Value::String(s) if s.contains('/') => match s.parse::<Rat>() {
            Ok(q) => Value::String(format!("{} (~{})", s, q.approx(6))),
            Err(_) => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(approx_value).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), approx_value(x))).collect()),
        _ => v.clone(),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    }
}

fn table_of(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let rows: Vec<Value> = out.table.clone().unwrap_or_else(|| vec![out.data.clone()]);
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    if header.is_empty() {
        header.push("value".into());
        return (header, rows.iter().map(|r| vec![cell(r)]).collect());
    }
    let body = rows.iter().map(|r| header.iter().map(|k| cell(r.get(k).unwrap_or(&Value::Null))).collect()).collect();
    (header, body)
}

pub fn render(out: &Output, format: Format, approx: bool) -> String {
    let out = if approx {
        Output { data: approx_value(&out.data), table: out.table.as_ref().map(|t| t.iter().map(approx_value).collect()) }
    } else {
        Output { data: out.data.clone(), table: out.table.clone() }
    };
    match format {
        Format::Json => serde_json::to_string_pretty(&out.data).expect("json") + "\n",
        Format::Csv => {
            let (header, body) = table_of(&out);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("csv");
            for row in &body {
                w.write_record(row).expect("csv");
            }
            String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
        }
        Format::Md => {
            let (header, body) = table_of(&out);
            let esc = |s: &String| s.replace('|', "\\|");
            let mut s = format!("| {} |\n", header.iter().map(esc).collect::<Vec<_>>().join(" | "));
            s += &format!("|{}\n", " --- |".repeat(header.len()));
            for row in &body {
                s += &format!("| {} |\n", row.iter().map(esc).collect::<Vec<_>>().join(" | "));
            }
            s
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status: 0 success, 1 domain error, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", text);
                    0
                }
                _ => {
                    let _ = write!(err, "{}", text);
                    2
                }
            };
        }
    };
    if cli.meta {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let meta = json!({"tool": "wpkstab", "version": env!("CARGO_PKG_VERSION"), "unix_time": secs});
        let _ = writeln!(err, "{}", meta);
    }
    match execute(&cli) {
        Ok((o, failed)) => {
            let _ = write!(out, "{}", render(&o, cli.format, cli.approx));
            i32::from(failed)
        }
        Err(e) => {
            let payload = match &e {
                CliError::Domain(d) => json!({"error": d.code(), "message": d.to_string()}),
                CliError::Usage(m) => json!({"error": "usage", "message": m}),
            };
            let _ = writeln!(err, "{}", payload);
            e.exit_code()
        }
    }
}
