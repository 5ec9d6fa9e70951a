use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vieta_tubes::boxes::coeff_box;
use vieta_tubes::chamber::{
    min_partition_deficit, partition_deficit, proper_partitions, rho_sl, rho_sp, sp_partition_deficit,
    Direction, Group, Norm, SignPattern,
};
use vieta_tubes::entropy::{arithmetic_grid, count_curve, fit_entropy, Filter, Mode};
use vieta_tubes::factor::{self, classify, irreducible_fraction, reciprocal_factor_census};
use vieta_tubes::poly::IntPolynomial;
use vieta_tubes::rational::{format_rational, parse_rational, rational_to_f64};
use vieta_tubes::realize::{cartan_projection, companion, jordan_data, sp_verify, IntMatrix};
use vieta_tubes::roots::{discriminant, disc_growth};
use vieta_tubes::volume::{census_slopes, sl2_census, volume_curve, volume_slope};
use vieta_tubes::{par, Error};

mod output;

use output::{write_csv, Manifest};

#[derive(Parser)]
#[command(name = "vieta-tubes", version, subcommand_required = false, about = "Counting integral polynomials in exponential root tubes")]
struct Cli {
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Re-run the configuration recorded in a manifest
    #[arg(long, global = true, value_name = "MANIFEST")]
    rerun: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Count curves along a T grid and fit the growth rate
    Count(CountArgs),
    /// Companion matrix of a polynomial with its Jordan data
    Realize(PolyArgs),
    /// Jordan projection and eigenvalue signs of an integer matrix
    Jordan(MatrixArgs),
    /// Cartan projection of an integer matrix
    Cartan(MatrixArgs),
    /// Irreducibility of one polynomial or a census of a box
    Irreducible(IrreducibleArgs),
    /// Discriminant of a polynomial, or growth of the model discriminant
    Disc(DiscArgs),
    /// Haar volume of tubes along a T grid
    Volume(VolumeArgs),
    /// Exhaustive SL(2, Z) census by entry height
    Census(CensusArgs),
    /// Partition deficits of a direction
    Deficit(DeficitArgs),
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct DirectionArgs {
    /// sl or sp
    #[arg(long, default_value = "sl")]
    group: String,
    /// Rank check: SL(n) or Sp(2n)
    #[arg(long)]
    n: Option<usize>,
    /// Chamber direction, comma separated rationals
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    /// Sign pattern such as +,- (default all +)
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
}

impl DirectionArgs {
    fn resolve(&self) -> Result<(Direction, SignPattern), Error> {
        let group = parse_group(&self.group)?;
        let v = Direction::parse(group, &self.v)?;
        if let Some(n) = self.n {
            if n != v.n() {
                return Err(Error::InvalidDirection(format!("--n {n} but v has {} coordinates", v.n())));
            }
        }
        let m = match &self.m {
            Some(s) => SignPattern::parse(s)?,
            None => SignPattern::all_positive(v.n()),
        };
        vieta_tubes::chamber::check_pattern(&v, &m, false)?;
        Ok((v, m))
    }
}

#[derive(Args, Serialize, Deserialize)]
struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    dir: DirectionArgs,
    /// Tube widths, comma separated
    #[arg(long, default_value = "0.1")]
    eps: String,
    /// T grid: start:stop:step or a comma separated list
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t: String,
    /// box, q-member, irreducible or units
    #[arg(long, default_value = "box")]
    filter: String,
    /// exact, exhaustive or sampled (default exact for boxes, else exhaustive)
    #[arg(long)]
    mode: Option<String>,
    /// Enumeration cap for exhaustive mode
    #[arg(long, default_value_t = 10_000_000)]
    cap: u64,
    /// Samples per grid point (sampled mode, or fallback past the cap)
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// File stem for outputs
    #[arg(long, default_value = "count")]
    name: String,
}

#[derive(Args, Serialize, Deserialize)]
struct PolyArgs {
    /// Descending integer coefficients, e.g. 1,-3,1
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args, Serialize, Deserialize)]
struct MatrixArgs {
    /// JSON array of rows, entries as numbers or decimal strings
    #[arg(long)]
    matrix: String,
}

#[derive(Args, Serialize, Deserialize)]
struct IrreducibleArgs {
    /// A single polynomial instead of a box
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, default_value = "sl")]
    group: String,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Tube widths, comma separated
    #[arg(long, default_value = "0.1")]
    eps: String,
    /// T grid: start:stop:step or a comma separated list
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t: Option<String>,
    /// exhaustive or sampled
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    #[arg(long, default_value_t = 10_000_000)]
    cap: u64,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Split reducible reciprocal polynomials into f f* and the rest (Sp)
    #[arg(long)]
    reciprocal: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value = "irreducible")]
    name: String,
}

#[derive(Args, Serialize, Deserialize)]
struct DiscArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, default_value = "sl")]
    group: String,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t: Option<String>,
    /// Bits of relative precision
    #[arg(long, default_value_t = 128)]
    precision: u64,
}

#[derive(Args, Serialize, Deserialize)]
struct VolumeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    dir: DirectionArgs,
    /// T values: start:stop:step or a comma separated list
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t: String,
    #[arg(long, default_value = "0.5")]
    eps: f64,
    /// euclidean or max
    #[arg(long, default_value = "euclidean")]
    norm: String,
    #[arg(long, default_value = "1e6")]
    samples: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value = "volume")]
    name: String,
}

#[derive(Args, Serialize, Deserialize)]
struct CensusArgs {
    /// Entry height bound
    #[arg(long = "X")]
    #[serde(rename = "X")]
    x: i64,
    #[arg(long, default_value_t = vieta_tubes::volume::CENSUS_CAP)]
    cap: i64,
    #[arg(long, default_value_t = 0.25)]
    bin_width: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value = "census")]
    name: String,
}

#[derive(Args, Serialize, Deserialize)]
struct DeficitArgs {
    #[arg(long, default_value = "sl")]
    group: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    /// First block, 1-based indices; all partitions when absent
    #[arg(long)]
    s1: Option<String>,
}

fn parse_group(s: &str) -> Result<Group, Error> {
    match s.trim().to_ascii_lowercase().as_str() {
        "sl" => Ok(Group::Sl),
        "sp" => Ok(Group::Sp),
        _ => Err(Error::Parse(format!("unknown group {s:?}"))),
    }
}

fn parse_count(s: &str) -> Result<usize, Error> {
    let r = parse_rational(s)?;
    if !r.is_integer() || r < num_rational::BigRational::from_integer(1.into()) {
        return Err(Error::Parse(format!("not a positive count: {s:?}")));
    }
    r.to_integer()
        .to_string()
        .parse()
        .map_err(|_| Error::Parse(format!("count too large: {s:?}")))
}

fn parse_grid(s: &str) -> Result<Vec<num_rational::BigRational>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, c] => arithmetic_grid(&parse_rational(a)?, &parse_rational(b)?, &parse_rational(c)?)?,
        [_] => s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(Error::Parse(format!("bad T grid {s:?}"))),
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("T grid must be nonempty and increasing".into()));
    }
    Ok(grid)
}

fn parse_poly(s: &str) -> Result<IntPolynomial, Error> {
    IntPolynomial::parse_descending(s)
}

fn rho_target(v: &Direction) -> f64 {
    match v.group() {
        Group::Sl => rational_to_f64(&rho_sl(v)),
        Group::Sp => rational_to_f64(&rho_sp(v)),
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64, Error> {
    seed.ok_or_else(|| Error::InvalidParameter("a --seed is required for sampling".into()))
}

fn cmd_count(a: &CountArgs) -> Result<(), Error> {
    let (v, m) = a.dir.resolve()?;
    let grid = parse_grid(&a.t)?;
    let filter = Filter::parse(&a.filter)?;
    let samples = a.samples.as_deref().map(parse_count).transpose()?;
    let mode = match a.mode.as_deref().unwrap_or(if filter == Filter::Box { "exact" } else { "exhaustive" }) {
        "exact" => Mode::Exact,
        "exhaustive" => Mode::Exhaustive {
            cap: a.cap,
            fallback: match samples {
                Some(k) => Some((k, need_seed(a.seed)?)),
                None => None,
            },
        },
        "sampled" => Mode::Sampled {
            k: samples.ok_or_else(|| Error::InvalidParameter("sampled mode needs --samples".into()))?,
            seed: need_seed(a.seed)?,
        },
        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
    };
    let target = rho_target(&v);
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for e in a.eps.split(',') {
        let eps = parse_rational(e)?;
        let recs = count_curve(&v, &m, &eps, &grid, filter, mode)?;
        let fit = match fit_entropy(&recs, target) {
            Ok(f) => {
                println!(
                    "eps={} slope={:.6} target={} relative_error={:.6}{}",
                    format_rational(&eps),
                    f.slope,
                    target,
                    f.relative_error,
                    if f.degenerate { " (degenerate)" } else { "" }
                );
                serde_json::to_value(&f).expect("fit serializes")
            }
            Err(err) => {
                println!("eps={} no fit: {err}", format_rational(&eps));
                json!({ "error": err.kind(), "message": err.to_string() })
            }
        };
        fits.push(json!({ "eps": format_rational(&eps), "fit": fit }));
        rows.extend(recs.iter().map(output::CountRow::from));
    }
    let csv = a.out.join(format!("{}.csv", a.name));
    write_csv(&csv, &rows)?;
    Manifest::new("count", a, json!({ "target_rho": target, "fits": fits }))
        .with_output(&csv)
        .write(&a.out.join(format!("{}.json", a.name)))
}

fn cmd_realize(a: &PolyArgs) -> Result<Value, Error> {
    let p = parse_poly(&a.poly)?;
    let c = companion(&p)?;
    let j = jordan_data(&c)?;
    Ok(json!({ "poly": p.to_string(), "matrix": c, "jordan": j }))
}

fn cmd_jordan(a: &MatrixArgs) -> Result<Value, Error> {
    let m = IntMatrix::from_json(&a.matrix)?;
    Ok(serde_json::to_value(jordan_data(&m)?).expect("serializes"))
}

fn cmd_cartan(a: &MatrixArgs) -> Result<Value, Error> {
    let m = IntMatrix::from_json(&a.matrix)?;
    let c = cartan_projection(&m)?;
    let mut out = json!({ "mu": c.mu, "max_norm": c.max_norm(), "euclidean_norm": c.euclidean_norm() });
    if m.dim() % 2 == 0 {
        out["symplectic"] = serde_json::to_value(sp_verify(&m)?).expect("serializes");
    }
    Ok(out)
}

fn cmd_irreducible(a: &IrreducibleArgs) -> Result<(), Error> {
    if let Some(s) = &a.poly {
        let p = parse_poly(s)?;
        let cert = classify(&p, &[])?;
        return print_json(json!({ "poly": p.to_string(), "certificate": cert }));
    }
    let dir = DirectionArgs {
        group: a.group.clone(),
        n: None,
        v: a.v.clone().ok_or_else(|| Error::InvalidParameter("--poly or --v is required".into()))?,
        m: a.m.clone(),
    };
    let (v, m) = dir.resolve()?;
    let grid = parse_grid(a.t.as_deref().ok_or_else(|| Error::InvalidParameter("--T is required".into()))?)?;
    let mode = match a.mode.as_str() {
        "exhaustive" => factor::Mode::Exhaustive { cap: a.cap },
        "sampled" => factor::Mode::Sample {
            k: parse_count(a.samples.as_deref().ok_or_else(|| Error::InvalidParameter("sampled mode needs --samples".into()))?)?,
            seed: need_seed(a.seed)?,
        },
        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
    };
    let degree = match v.group() {
        Group::Sl => v.n(),
        Group::Sp => 2 * v.n(),
    };
    let mut header = vec!["T".to_string(), "eps".into(), "total".into(), "irreducible".into()];
    if a.reciprocal {
        header.extend(["class_i".into(), "class_ii".into()]);
    } else {
        header.extend((1..=degree / 2).map(|k| format!("reducible_deg{k}")));
    }
    header.push("deferred".into());
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for e in a.eps.split(',') {
        let eps = parse_rational(e)?;
        for t in &grid {
            let bx = coeff_box(&v, &m, t, &eps)?;
            let mut row = vec![format_rational(t), format_rational(&eps)];
            if a.reciprocal {
                let c = reciprocal_factor_census(&bx, mode)?;
                row.extend([c.total, c.irreducible, c.class_i, c.class_ii, c.deferred].map(|x| x.to_string()));
                results.push(json!({ "T": format_rational(t), "eps": format_rational(&eps), "census": c }));
            } else {
                let c = irreducible_fraction(&bx, mode)?;
                row.extend([c.total, c.irreducible].map(|x| x.to_string()));
                row.extend((1..=degree / 2).map(|k| c.by_size.get(&k).copied().unwrap_or(0).to_string()));
                row.push(c.deferred.to_string());
                println!("T={} eps={} total={} fraction={:.6}", format_rational(t), format_rational(&eps), c.total, c.fraction());
                results.push(json!({
                    "T": format_rational(t),
                    "eps": format_rational(&eps),
                    "fraction": c.fraction(),
                    "census": c,
                }));
            }
            rows.push(row);
        }
    }
    let csv = a.out.join(format!("{}.csv", a.name));
    output::write_table(&csv, &header, &rows)?;
    let eta = match v.group() {
        Group::Sl => min_partition_deficit(&v).map(|d| format_rational(&d.deficit)),
        Group::Sp => None,
    };
    Manifest::new("irreducible", a, json!({ "min_deficit": eta, "rows": results }))
        .with_output(&csv)
        .write(&a.out.join(format!("{}.json", a.name)))
}

fn cmd_disc(a: &DiscArgs) -> Result<Value, Error> {
    if let Some(s) = &a.poly {
        let p = parse_poly(s)?;
        return Ok(json!({ "poly": p.to_string(), "discriminant": discriminant(&p).to_string() }));
    }
    let dir = DirectionArgs {
        group: a.group.clone(),
        n: None,
        v: a.v.clone().ok_or_else(|| Error::InvalidParameter("--poly or --v is required".into()))?,
        m: a.m.clone(),
    };
    let (v, m) = dir.resolve()?;
    let t = parse_rational(a.t.as_deref().ok_or_else(|| Error::InvalidParameter("--T is required".into()))?)?;
    let g = disc_growth(&v, &m, &t, a.precision)?;
    let full = v.full_coords();
    let mut limit = num_rational::BigRational::from_integer(0.into());
    for i in 0..full.len() {
        for j in i + 1..full.len() {
            limit += &full[i] - &full[j];
        }
    }
    Ok(json!({
        "T": format_rational(&t),
        "log_disc_over_T": g.value_f64(),
        "log_sqrt_disc_over_T": g.sqrt_form_f64(),
        "enclosure": [g.value.lo().to_string(), g.value.hi().to_string()],
        "limit": format_rational(&limit),
        "precision": g.precision,
    }))
}

fn cmd_volume(a: &VolumeArgs) -> Result<(), Error> {
    let (v, _) = a.dir.resolve()?;
    let seed = need_seed(a.seed)?;
    let grid: Vec<f64> = parse_grid(&a.t)?.iter().map(rational_to_f64).collect();
    let norm: Norm = a.norm.parse()?;
    let samples = parse_count(&a.samples)? as u64;
    let curve = volume_curve(&v, &grid, a.eps, norm, samples, seed)?;
    let slope = volume_slope(&curve);
    let target = 2.0 * rho_target(&v);
    match slope {
        Some(s) => println!("slope={s:.6} target={target} relative_error={:.6}", (s - target).abs() / target),
        None => println!("single T value: no slope"),
    }
    let csv = a.out.join(format!("{}.csv", a.name));
    write_csv(&csv, &curve.iter().map(output::VolumeRow::from).collect::<Vec<_>>())?;
    Manifest::new("volume", a, json!({ "slope": slope, "target_two_rho": target }))
        .with_output(&csv)
        .write(&a.out.join(format!("{}.json", a.name)))
}

fn cmd_census(a: &CensusArgs) -> Result<(), Error> {
    let c = sl2_census(a.x, a.cap, a.bin_width)?;
    let hi = (a.x as f64).ln();
    let lo = (hi - 3.0).max(1.0);
    let slopes = if hi > lo { census_slopes(&c, lo, hi, 31) } else { None };
    println!(
        "matrices={} loxodromic={} distinct_traces={}",
        c.matrix_count, c.loxodromic_count, c.distinct_trace_count
    );
    if let Some((st, sm)) = slopes {
        println!("trace_slope={st:.6} (target 1) matrix_slope={sm:.6} (target 2)");
    }
    let jh = a.out.join(format!("{}_jordan.csv", a.name));
    let ch = a.out.join(format!("{}_cartan.csv", a.name));
    write_csv(&jh, &c.jordan_histogram.iter().map(output::BinRow::from).collect::<Vec<_>>())?;
    write_csv(&ch, &c.cartan_histogram.iter().map(output::BinRow::from).collect::<Vec<_>>())?;
    Manifest::new(
        "census",
        a,
        json!({
            "matrix_count": c.matrix_count,
            "loxodromic_count": c.loxodromic_count,
            "distinct_trace_count": c.distinct_trace_count,
            "fit_range": [lo, hi],
            "trace_slope": slopes.map(|s| s.0),
            "matrix_slope": slopes.map(|s| s.1),
        }),
    )
    .with_output(&jh)
    .with_output(&ch)
    .write(&a.out.join(format!("{}.json", a.name)))
}

fn cmd_deficit(a: &DeficitArgs) -> Result<Value, Error> {
    let v = Direction::parse(parse_group(&a.group)?, &a.v)?;
    let one = |s1: &[usize]| match v.group() {
        Group::Sl => partition_deficit(&v, s1),
        Group::Sp => sp_partition_deficit(&v, s1),
    };
    let show = |d: &vieta_tubes::chamber::PartitionDeficit| {
        json!({
            "s1": d.s1.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "s2": d.s2.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "deficit": format_rational(&d.deficit),
            "zero_block_sums": d.zero_block_sums,
        })
    };
    if let Some(s) = &a.s1 {
        let idx = s
            .split(',')
            .map(|x| match x.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(Error::InvalidPartition(format!("bad index {x:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(show(&one(&idx)?));
    }
    let all = proper_partitions(v.n())
        .iter()
        .map(|s| one(s).map(|d| show(&d)))
        .collect::<Result<Vec<_>, _>>()?;
    let min = match v.group() {
        Group::Sl => min_partition_deficit(&v).map(|d| show(&d)),
        Group::Sp => None,
    };
    Ok(json!({ "partitions": all, "min": min }))
}

fn print_json(v: Value) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}

fn rerun(path: &std::path::Path) -> Result<(), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
    let config = doc.get("config").cloned().unwrap_or(Value::Null);
    let bad = |e: serde_json::Error| Error::Parse(format!("manifest config: {e}"));
    match doc.get("command").and_then(Value::as_str) {
        Some("count") => cmd_count(&serde_json::from_value(config).map_err(bad)?),
        Some("irreducible") => cmd_irreducible(&serde_json::from_value(config).map_err(bad)?),
        Some("volume") => cmd_volume(&serde_json::from_value(config).map_err(bad)?),
        Some("census") => cmd_census(&serde_json::from_value(config).map_err(bad)?),
        other => Err(Error::Parse(format!("manifest has no runnable command: {other:?}"))),
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let command = match (&cli.rerun, &cli.command) {
        (Some(path), None) => return rerun(path),
        (Some(_), Some(_)) => return Err(Error::InvalidParameter("--rerun takes no subcommand".into())),
        (None, None) => return Err(Error::InvalidParameter("a subcommand or --rerun is required".into())),
        (None, Some(c)) => c,
    };
    match command {
        Command::Count(a) => cmd_count(a),
        Command::Realize(a) => print_json(cmd_realize(a)?),
        Command::Jordan(a) => print_json(cmd_jordan(a)?),
        Command::Cartan(a) => print_json(cmd_cartan(a)?),
        Command::Irreducible(a) => cmd_irreducible(a),
        Command::Disc(a) => print_json(cmd_disc(a)?),
        Command::Volume(a) => cmd_volume(a),
        Command::Census(a) => cmd_census(a),
        Command::Deficit(a) => print_json(cmd_deficit(a)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match par::with_jobs(cli.jobs, || run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
