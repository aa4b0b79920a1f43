//! `atmot`: command-line front end for `atmot-core`.
//!
//! Results go to stdout as line-delimited JSON (or TSV / SVG where requested).
//! Failures print one line `atmot: error[CODE]: message` to stderr and exit 1 for
//! usage problems, 2 for validation failures.

mod cache;

use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use atmot_core::bockstein::{self, BocksteinInput};
use atmot_core::charts::{self, ChartSpec, EdgeSpec, Plane, Products};
use atmot_core::cobar::ExtCoeffs;
use atmot_core::cta::{generators_for, object_table, CtaObject, DegreeBox, ExtTables};
use atmot_core::grading::{named_element, registry, ElementDegree, NamedElement, RODegree};
use atmot_core::group::GroupRecord;
use atmot_core::point::{mf2_group, mfp_group, mz2_group, point_group, PointRing};
use atmot_core::regions::{self, RegionObject};
use atmot_core::steenrod::{normalize, parse_element, steenrod_multiply, steenrod_rank};
use atmot_core::{GroupPresentation, GroupTable, TriDegree};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cache::ExtCache;

#[derive(Parser, Debug)]
#[command(name = "atmot", version, about = "Exact computations in tri-graded Artin-Tate R-motivic homotopy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degrees of registered elements.
    Degree {
        /// Element names; all registered elements when omitted.
        names: Vec<String>,
    },
    /// Homotopy of uF2, uZ2 (two ranges) or MF2, MZ2, MF_p (three ranges).
    Point {
        #[arg(long, default_value = "uF2")]
        ring: String,
        /// Odd prime for MF_p; needs a three-range box.
        #[arg(long)]
        prime: Option<u64>,
        /// `p0:p1,q0:q1[,w0:w1]`.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
    },
    /// Tri-graded dual Steenrod algebra.
    Steenrod {
        #[command(subcommand)]
        op: SteenrodOp,
    },
    /// Ext over the truncated BP Hopf algebroid.
    Ext {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        s_max: usize,
        #[arg(long, default_value_t = 24)]
        max_degree: i64,
        #[arg(long, default_value = "Z")]
        coeffs: String,
        #[arg(long)]
        no_cache: bool,
    },
    /// Homotopy of Cta, Ca ⊗ Cta or Cta[a^-1] over a box.
    Cta {
        #[arg(long, default_value = "Cta")]
        object: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        /// Internal-degree bound of the Ext tables; defaults to twice the largest weight, at least 2.
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        no_cache: bool,
    },
    /// ta-Bockstein spectral sequence runner.
    Bockstein {
        #[command(subcommand)]
        op: BocksteinOp,
    },
    /// Vanishing-region validation.
    Regions {
        #[command(subcommand)]
        op: RegionsOp,
    },
    /// SVG chart of a table or of a point ring.
    Chart {
        /// Line-delimited group records; the point ring given by `--ring` when omitted.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Ring whose products draw the edges.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, value_enum, default_value_t = PlaneArg::Pq)]
        plane: PlaneArg,
        /// Fixed coordinate, `w=K` for `pq` or `p=K` for `qw`.
        #[arg(long, allow_hyphen_values = true)]
        fix: Option<String>,
        /// Comma-separated element names.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long)]
        title: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SteenrodOp {
    /// Ranks over a box `p0:p1,q0:q1,w0:w1`.
    Rank {
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
    },
    /// Product of two elements in normal form.
    Mul { x: String, y: String },
    /// Normal form of an element.
    Normal { x: String },
}

#[derive(Subcommand, Debug)]
enum BocksteinOp {
    /// Runs the spectral sequence on an input document or the bundled dataset.
    Run {
        #[arg(long, conflicts_with = "dataset")]
        input: Option<PathBuf>,
        /// Bundled dataset name (`kq`).
        #[arg(long)]
        dataset: Option<String>,
        /// Last page to report; the stable page when omitted.
        #[arg(long)]
        pages: Option<u32>,
        #[arg(long = "box", allow_hyphen_values = true, default_value = "0:6,-4:4,0:3")]
        bx: String,
    },
    /// Prints the JSON schema of input documents.
    Schema,
}

#[derive(Subcommand, Debug)]
enum RegionsOp {
    /// Lists nonzero entries of a table outside an object's vanishing region; exit 2 if any.
    Check {
        /// Index 1..9 or name.
        #[arg(long)]
        object: String,
        #[arg(long)]
        table: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlaneArg {
    Pq,
    Qw,
}

/// A failure with a stable code.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    exit: u8,
    msg: String,
}

impl Failure {
    fn usage(code: &'static str, msg: impl ToString) -> Self {
        Failure { code, exit: 1, msg: msg.to_string() }
    }

    fn invalid(code: &'static str, msg: impl ToString) -> Self {
        Failure { code, exit: 2, msg: msg.to_string() }
    }

    fn io(e: io::Error) -> Self {
        let code = if e.kind() == io::ErrorKind::BrokenPipe { "E_PIPE" } else { "E_IO" };
        Failure::usage(code, e)
    }
}

type Out<'a> = &'a mut dyn Write;
type Res = Result<(), Failure>;

fn emit(out: Out, v: &impl serde::Serialize) -> Res {
    let line = serde_json::to_string(v).map_err(|e| Failure::invalid("E_INTERNAL", e))?;
    writeln!(out, "{line}").map_err(Failure::io)
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::usage("E_RANGE", format!("bad range `{s}`, expected `lo:hi` or `k`"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(Failure::usage("E_RANGE", format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn parse_ranges(s: &str) -> Result<Vec<(i64, i64)>, Failure> {
    s.split(',').map(parse_range).collect()
}

fn parse_box3(s: &str) -> Result<DegreeBox, Failure> {
    match parse_ranges(s)?[..] {
        [p, q, w] => Ok(DegreeBox::new(p, q, w)),
        _ => Err(Failure::usage("E_RANGE", format!("box `{s}` needs three ranges"))),
    }
}

fn ring_arg(s: &str) -> Result<PointRing, Failure> {
    PointRing::parse(s).ok_or_else(|| Failure::usage("E_UNKNOWN_NAME", format!("unknown ring `{s}`")))
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage("E_IO", format!("{}: {e}", path.display())))
}

/// Reads group records; two-component degrees are stored at weight zero.
fn read_table(path: &PathBuf) -> Result<GroupTable, Failure> {
    let text = read_file(path)?;
    let mut table = GroupTable::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| Failure::invalid("E_PARSE", format!("{}:{}: {m}", path.display(), i + 1));
        let rec: GroupRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let d = match rec.degree[..] {
            [p, q] => TriDegree::new(p, q, 0),
            [p, q, w] => TriDegree::new(p, q, w),
            _ => return Err(bad("degree must have two or three components".into())),
        };
        let e = table.entry(d).or_default();
        *e = std::mem::take(e).direct_sum(rec.summands);
    }
    Ok(table)
}

fn element_record(e: &NamedElement) -> Value {
    let (grading, degree) = match e.degree {
        ElementDegree::Tri(d) => ("tri", d.as_array().to_vec()),
        ElementDegree::RO(d) => ("ro", vec![d.p, d.q]),
    };
    json!({ "name": e.name, "grading": grading, "degree": degree, "home": e.home })
}

fn cmd_degree(out: Out, names: &[String]) -> Res {
    if names.is_empty() {
        for e in registry() {
            emit(out, &element_record(&e))?;
        }
        return Ok(());
    }
    for n in names {
        let e = named_element(n).map_err(|e| Failure::invalid("E_UNKNOWN_NAME", e))?;
        emit(out, &element_record(&e))?;
    }
    Ok(())
}

fn record(degree: Vec<i64>, g: GroupPresentation) -> GroupRecord {
    GroupRecord { degree, summands: g }
}

fn cmd_point(out: Out, ring: &str, prime: Option<u64>, bx: &str) -> Res {
    let ranges = parse_ranges(bx)?;
    match (&ranges[..], prime) {
        (&[p, q], None) => {
            let ring = ring_arg(ring)?;
            for p in p.0..=p.1 {
                for q in q.0..=q.1 {
                    let g = point_group(ring, RODegree::new(p, q));
                    if !g.is_zero() {
                        emit(out, &record(vec![p, q], g))?;
                    }
                }
            }
        }
        (&[p, q, w], prime) => {
            let bx = DegreeBox::new(p, q, w);
            let group = |d: TriDegree| -> Result<GroupPresentation, Failure> {
                match prime {
                    Some(pr) => mfp_group(pr, d).map_err(|e| Failure::invalid("E_PRIME", e)),
                    None => match ring_arg(ring)? {
                        PointRing::UF2 => Ok(mf2_group(d)),
                        PointRing::UZ2 => Ok(mz2_group(d)),
                    },
                }
            };
            for d in bx.degrees() {
                let g = group(d)?;
                if !g.is_zero() {
                    emit(out, &record(d.as_array().to_vec(), g))?;
                }
            }
        }
        ([_, _], Some(_)) => return Err(Failure::usage("E_RANGE", "--prime needs a three-range box")),
        _ => return Err(Failure::usage("E_RANGE", format!("box `{bx}` needs two or three ranges"))),
    }
    Ok(())
}

fn cmd_steenrod(out: Out, op: &SteenrodOp) -> Res {
    let parse = |s: &str| parse_element(s).map_err(|e| Failure::invalid("E_STEENROD", e));
    match op {
        SteenrodOp::Rank { bx } => {
            for d in parse_box3(bx)?.degrees() {
                emit(out, &json!({ "degree": d.as_array(), "rank": steenrod_rank(d) }))?;
            }
        }
        SteenrodOp::Mul { x, y } => {
            let z = steenrod_multiply(&parse(x)?, &parse(y)?);
            emit(out, &json!({ "product": z.to_string(), "degree": z.degree().map(|d| d.as_array()), "terms": z.len() }))?;
        }
        SteenrodOp::Normal { x } => {
            let z = normalize(&parse(x)?);
            emit(out, &json!({ "normal_form": z.to_string(), "degree": z.degree().map(|d| d.as_array()), "terms": z.len() }))?;
        }
    }
    Ok(())
}

fn coeffs_arg(s: &str) -> Result<ExtCoeffs, Failure> {
    ExtCoeffs::parse(s).ok_or_else(|| Failure::usage("E_UNKNOWN_NAME", format!("unknown coefficients `{s}`")))
}

fn cmd_ext(out: Out, n: usize, s_max: usize, max_degree: i64, coeffs: &str, no_cache: bool) -> Res {
    let coeffs = coeffs_arg(coeffs)?;
    if n == 0 {
        return Err(Failure::usage("E_RANGE", "--n must be positive"));
    }
    let table = ExtCache::from_env(!no_cache).ext(n, s_max, max_degree, coeffs).map_err(|e| Failure::invalid("E_EXT", e))?;
    for e in &table.entries {
        if !e.group.is_zero() {
            emit(out, &json!({ "s": e.s, "t": e.t, "summands": e.group }))?;
        }
    }
    Ok(())
}

fn ext_tables(max_degree: i64, no_cache: bool) -> Result<ExtTables, Failure> {
    let cache = ExtCache::from_env(!no_cache);
    let n = generators_for(max_degree);
    let s_max = (max_degree.max(0) / 2) as usize;
    let get = |c| cache.ext(n, s_max, max_degree.max(0), c).map_err(|e| Failure::invalid("E_EXT", e));
    Ok(ExtTables { z: get(ExtCoeffs::Z)?, f2: get(ExtCoeffs::F2)? })
}

fn cmd_cta(out: Out, object: &str, bx: &str, max_degree: Option<i64>, format: Format, no_cache: bool) -> Res {
    let object = CtaObject::parse(object).map_err(|e| Failure::usage("E_UNKNOWN_NAME", e))?;
    let bx = parse_box3(bx)?;
    let d = max_degree.unwrap_or(2 * bx.w.1.max(1));
    let tables = ext_tables(d, no_cache)?;
    let table = object_table(object, &bx, &tables).map_err(|e| Failure::invalid("E_CTA", e))?;
    match format {
        Format::Json => {
            for (d, g) in &table {
                emit(out, &record(d.as_array().to_vec(), g.clone()))?;
            }
        }
        Format::Tsv => {
            let w = |out: Out, s: String| writeln!(out, "{s}").map_err(Failure::io);
            w(out, "p\tq\tw\torder\tlabel".into())?;
            for (d, g) in &table {
                for s in g.summands() {
                    w(out, format!("{}\t{}\t{}\t{}\t{}", d.p, d.q, d.w, s.order, s.label))?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_bockstein(out: Out, op: &BocksteinOp) -> Res {
    let (input, dataset, pages, bx) = match op {
        BocksteinOp::Schema => {
            let v: Value = serde_json::from_str(bockstein::SCHEMA_JSON).map_err(|e| Failure::invalid("E_INTERNAL", e))?;
            return emit(out, &v);
        }
        BocksteinOp::Run { input, dataset, pages, bx } => (input, dataset, pages, bx),
    };
    let doc = match (input, dataset.as_deref()) {
        (Some(path), None) => BocksteinInput::from_json(&read_file(path)?).map_err(|e| Failure::invalid("E_BOCKSTEIN", e))?,
        (None, Some("kq")) => bockstein::kq_dataset(),
        (None, Some(other)) => return Err(Failure::usage("E_UNKNOWN_NAME", format!("unknown dataset `{other}`"))),
        _ => return Err(Failure::usage("E_USAGE", "one of --input or --dataset is required")),
    };
    let cx = doc.close(parse_box3(bx)?).map_err(|e| Failure::invalid("E_BOCKSTEIN", e))?;
    let r_max = pages.unwrap_or_else(|| bockstein::stable_page(&cx)).max(1);
    let run = bockstein::run(&cx, r_max).map_err(|e| Failure::invalid("E_BOCKSTEIN", e))?;
    let cell = |kind: &str, r: Value, c: &bockstein::PageCell| {
        json!({
            "record": kind,
            "r": r,
            "degree": c.degree.as_array(),
            "summands": c.group,
            "ta_free": c.ta_free,
            "ta_torsion": c.ta_torsion,
        })
    };
    for page in &run.pages {
        for c in &page.cells {
            emit(out, &cell("page", json!(page.r), c))?;
        }
    }
    for c in &run.e_infinity.cells {
        emit(out, &cell("e_infinity", Value::Null, c))?;
    }
    for a in &run.abutment {
        let graded: BTreeMap<String, &GroupPresentation> = a.graded.iter().map(|(k, g)| (k.to_string(), g)).collect();
        emit(out, &json!({ "record": "abutment", "degree": a.total_degree.as_array(), "graded": graded }))?;
    }
    emit(out, &json!({ "record": "checks", "checks": run.checks, "pages": r_max }))
}

fn cmd_regions(out: Out, op: &RegionsOp) -> Res {
    let RegionsOp::Check { object, table } = op;
    let object = RegionObject::parse(object).map_err(|e| Failure::usage("E_UNKNOWN_NAME", e))?;
    let table = read_table(table)?;
    let violations: Vec<[i64; 3]> = regions::validate(&table, object).into_iter().map(|d| d.as_array()).collect();
    emit(out, &json!({ "object": object.to_string(), "index": object.index(), "violations": violations }))?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::invalid("E_REGION_VIOLATION", format!("{} nonzero entries outside region ({})", violations.len(), object.index())))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_chart(
    out: Out,
    table: &Option<PathBuf>,
    ring: &Option<String>,
    plane: PlaneArg,
    fix: &Option<String>,
    edges: &[String],
    x: &Option<String>,
    y: &Option<String>,
    title: &Option<String>,
    path: &Option<PathBuf>,
) -> Res {
    let ring = ring.as_deref().map(ring_arg).transpose()?;
    let fixed = match fix {
        None => 0,
        Some(f) => {
            let want = match plane {
                PlaneArg::Pq => "w",
                PlaneArg::Qw => "p",
            };
            let (k, v) = f.split_once('=').ok_or_else(|| Failure::usage("E_USAGE", format!("bad --fix `{f}`")))?;
            if k.trim() != want {
                return Err(Failure::usage("E_USAGE", format!("plane fixes `{want}`, not `{k}`")));
            }
            v.trim().parse().map_err(|_| Failure::usage("E_USAGE", format!("bad --fix `{f}`")))?
        }
    };
    let plane = match plane {
        PlaneArg::Pq => Plane::Pq { w: fixed },
        PlaneArg::Qw => Plane::Qw { p: fixed },
    };
    let x = x.as_deref().map(parse_range).transpose()?;
    let y = y.as_deref().map(parse_range).transpose()?;
    let data = match (table, ring) {
        (Some(p), _) => read_table(p)?,
        (None, Some(r)) => {
            let (Some(x), Some(y), Plane::Pq { w: 0 }) = (x, y, plane) else {
                return Err(Failure::usage("E_USAGE", "a point-ring chart needs --x, --y and the pq plane at w=0"));
            };
            charts::point_table(r, x, y)
        }
        (None, None) => return Err(Failure::usage("E_USAGE", "one of --table or --ring is required")),
    };
    let coords: Vec<(i64, i64)> = data
        .keys()
        .filter_map(|d| match plane {
            Plane::Pq { w } => (d.w == w).then_some((d.p, d.q)),
            Plane::Qw { p } => (d.p == p).then_some((d.q, d.w)),
        })
        .collect();
    let extent = |f: fn(&(i64, i64)) -> i64| {
        let lo = coords.iter().map(f).min().unwrap_or(0);
        let hi = coords.iter().map(f).max().unwrap_or(0);
        (lo, hi)
    };
    let mut spec = ChartSpec::new(plane, x.unwrap_or_else(|| extent(|c| c.0)), y.unwrap_or_else(|| extent(|c| c.1)));
    spec.edges = edges.iter().filter(|e| !e.is_empty()).map(EdgeSpec::new).collect();
    if !spec.edges.is_empty() {
        let ring = ring.ok_or_else(|| Failure::usage("E_USAGE", "--edges needs --ring to multiply labels"))?;
        spec.products = Products::Point(ring);
    }
    spec.title = title.clone();
    let svg = charts::render(&data, &spec).map_err(|e| Failure::invalid("E_CHART", e))?;
    match path {
        Some(p) => std::fs::write(p, svg).map_err(|e| Failure::usage("E_IO", format!("{}: {e}", p.display()))),
        None => out.write_all(svg.as_bytes()).map_err(Failure::io),
    }
}

fn dispatch(cli: &Cli, out: Out) -> Res {
    match &cli.command {
        Command::Degree { names } => cmd_degree(out, names),
        Command::Point { ring, prime, bx } => cmd_point(out, ring, *prime, bx),
        Command::Steenrod { op } => cmd_steenrod(out, op),
        Command::Ext { n, s_max, max_degree, coeffs, no_cache } => cmd_ext(out, *n, *s_max, *max_degree, coeffs, *no_cache),
        Command::Cta { object, bx, max_degree, format, no_cache } => cmd_cta(out, object, bx, *max_degree, *format, *no_cache),
        Command::Bockstein { op } => cmd_bockstein(out, op),
        Command::Regions { op } => cmd_regions(out, op),
        Command::Chart { table, ring, plane, fix, edges, x, y, title, out: path } => {
            cmd_chart(out, table, ring, *plane, fix, edges, x, y, title, path)
        }
    }
}

fn report(f: &Failure) -> ExitCode {
    let msg = f.msg.replace(['\n', '\r'], " ");
    eprintln!("atmot: error[{}]: {msg}", f.code);
    ExitCode::from(f.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return report(&Failure::usage("E_USAGE", first));
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = dispatch(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::io));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        // A closed reader is not an error.
        Err(f) if f.code == "E_PIPE" => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            report(&f)
        }
    }
}
