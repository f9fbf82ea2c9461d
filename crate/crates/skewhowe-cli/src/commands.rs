use std::fs::File;
use std::io::{self, BufWriter, Write};

use num_rational::BigRational;
use serde::Serialize;
use skewhowe::asymptotics::{
    krawtchouk_asymptotic_parts, krawtchouk_exact_log, symplectic_asymptotic_parts, symplectic_exact_log,
};
use skewhowe::combinatorics::{Sampler, YoungDiagram};
use skewhowe::harness::{
    anchor_coordinate, compare_curves, empirical_kernel_ratio, run_sampling, write_records, Format, Metadata,
};
use skewhowe::kernel::{kernel_matrix, KernelEvaluator};
use skewhowe::measure::{enumerate_measure, measure_exact, measure_explicit, ParticleConfig};
use skewhowe::orthopoly::table1::compare_table;
use skewhowe::orthopoly::{
    krawtchouk_jacobi, krawtchouk_table, monic_ttr, qr_step, qr_step_squared_exact, symplectic_table,
    ttr_from_polynomials,
};
use skewhowe::{EnsembleParams, Error};

use crate::{say, Failure, Family, Global, OutFormat, Precision};

type Outcome = Result<(), Failure>;

/// Largest number of diagrams listed one per row by `sample`.
const LISTING_LIMIT: u64 = 10_000_000;

pub fn params(g: &Global) -> Result<EnsembleParams, Failure> {
    Ok(EnsembleParams::new(g.n, g.k)?)
}

fn writer(g: &Global) -> io::Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn emit<T: Serialize>(g: &Global, rows: &[T], meta: &Metadata) -> Outcome {
    let format = match g.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let mut w = writer(g)?;
    write_records(&mut w, format, rows, meta)?;
    w.flush()?;
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct SampleRow {
    replicate: usize,
    index: u64,
    shape: String,
    particles: String,
}

#[derive(Serialize)]
struct SiteRow {
    a: usize,
    rho_hat: f64,
    se: f64,
    rho_exact: f64,
}

pub fn sample(g: &Global, summary: bool) -> Outcome {
    let params = params(g)?;
    let meta = Metadata::new(&params, Some(g.seed))
        .with("samples", g.samples)
        .with("replicates", g.replicates);
    if summary {
        let batch = run_sampling(&params, g.samples, g.replicates, g.seed)?;
        let kernel = KernelEvaluator::new(&params)?;
        let total = batch.total_samples() as f64;
        let rows = (1..=params.n() + params.k())
            .map(|a| {
                let r = batch.density(a);
                Ok(SiteRow { a, rho_hat: r, se: (r * (1.0 - r) / total).sqrt(), rho_exact: kernel.eval(a as i64, a as i64)? })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        return emit(g, &rows, &meta);
    }
    let total = g.samples.saturating_mul(g.replicates as u64);
    if total > LISTING_LIMIT {
        return Err(Error::Resource(format!("{total} diagrams exceed the listing limit {LISTING_LIMIT}; use --summary")).into());
    }
    let mut sampler = Sampler::new(&params)?;
    let mut rows = Vec::with_capacity(total as usize);
    for r in 0..g.replicates {
        for s in 0..g.samples {
            let index = r as u64 * g.samples + s;
            let d = sampler.sample(g.seed, index);
            let coords = ParticleConfig::from_diagram(&d);
            rows.push(SampleRow { replicate: r, index, shape: d.to_string(), particles: join(coords.coords()) });
        }
    }
    emit(g, &rows, &meta)
}

#[derive(Serialize)]
struct MeasureRow {
    shape: String,
    particles: String,
    probability: String,
    value: f64,
}

fn parse_shape(s: &str, params: &EnsembleParams) -> Result<YoungDiagram, Failure> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let rows = if s.is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(format!("bad shape {s:?}: {e}")))?
    };
    Ok(YoungDiagram::new(rows, params.n(), params.k())?)
}

pub fn measure(g: &Global, shape: Option<&str>) -> Outcome {
    let params = params(g)?;
    let all = match shape {
        Some(s) => {
            let d = parse_shape(s, &params)?;
            let p = measure_exact(&d, &params)?;
            let explicit = measure_explicit(&ParticleConfig::from_diagram(&d), &params)?;
            if explicit != p {
                return Err(Error::Consistency(format!("product formula gives {explicit}, dimensions give {p}")).into());
            }
            vec![(d, p)]
        }
        None => enumerate_measure(&params)?,
    };
    let rows: Vec<MeasureRow> = all
        .iter()
        .map(|(d, p)| MeasureRow {
            shape: d.to_string(),
            particles: join(ParticleConfig::from_diagram(d).coords()),
            probability: p.to_string(),
            value: p.to_f64(),
        })
        .collect();
    emit(g, &rows, &Metadata::new(&params, None))
}

#[derive(Serialize)]
struct PolyRow {
    family: &'static str,
    degree: usize,
    power: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct ExactJacobiRow {
    m: usize,
    qr_a_hat2: String,
    beta: String,
    equal: bool,
}

#[derive(Serialize)]
struct FloatJacobiRow {
    m: usize,
    qr_a: f64,
    sqrt_beta: f64,
    qr_b: f64,
    alpha: f64,
    rel_diff: f64,
}

pub fn poly(g: &Global, check_table1: bool, jacobi: bool, max_degree: usize, p: &str) -> Outcome {
    let p: BigRational = p.parse().map_err(|e| Failure::Usage(format!("bad p {p:?}: {e}")))?;
    let params = EnsembleParams::with_p(g.n, g.k, p)?;
    let meta = Metadata::new(&params, None).with("max_degree", max_degree);
    if check_table1 {
        let mut failed = 0;
        for c in compare_table(&params)? {
            let name = format!("{}_{} (K={}, n={})", c.family.symbol(), c.degree, c.big_k, c.n);
            let note = if c.printed_matches { "" } else { "; reference entry as printed differs" };
            if c.corrected_matches {
                say(format_args!("PASS {name}{note}"))?;
            } else {
                failed += 1;
                say(format_args!("FAIL {name}: computed {}", c.computed))?;
            }
        }
        return if failed == 0 { Ok(()) } else { Err(Failure::Checks(failed)) };
    }
    if jacobi {
        if g.precision == Precision::Exact {
            let sq = qr_step_squared_exact(&params)?;
            let (_, beta) = monic_ttr(max_degree, &params)?;
            let rows: Vec<ExactJacobiRow> = (1..=max_degree)
                .map(|m| ExactJacobiRow {
                    m,
                    qr_a_hat2: sq.a_hat2[m].to_string(),
                    beta: beta[m].to_string(),
                    equal: sq.a_hat2[m] == beta[m],
                })
                .collect();
            return emit(g, &rows, &meta);
        }
        let qr = qr_step(&krawtchouk_jacobi(&params))?;
        let ttr = ttr_from_polynomials(max_degree, &params)?;
        let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
        let rows: Vec<FloatJacobiRow> = (0..=max_degree)
            .map(|m| FloatJacobiRow {
                m,
                qr_a: qr.a[m].abs(),
                sqrt_beta: ttr.a[m],
                qr_b: qr.b[m],
                alpha: ttr.b[m],
                rel_diff: rel(qr.a[m].abs(), ttr.a[m]).max(rel(qr.b[m], ttr.b[m])),
            })
            .collect();
        return emit(g, &rows, &meta);
    }
    let mut rows = Vec::new();
    for (family, table) in [
        ("K", krawtchouk_table(max_degree, &params)?),
        ("G", symplectic_table(max_degree, &params)?),
    ] {
        for (degree, poly) in table.iter().enumerate() {
            for (power, c) in poly.coeffs().iter().enumerate() {
                let coefficient = match g.precision {
                    Precision::Exact => c.to_string(),
                    Precision::F64 => as_f64(c).to_string(),
                };
                rows.push(PolyRow { family, degree, power, coefficient });
            }
        }
    }
    emit(g, &rows, &meta)
}

fn as_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize)]
struct KernelCheckRow {
    n: usize,
    k: usize,
    trace: f64,
    trace_error: f64,
    symmetry_residual: f64,
    idempotency_residual: f64,
}

#[derive(Serialize)]
struct SliceRow {
    j: i64,
    kernel: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct EntryRow {
    a: usize,
    b: usize,
    value: f64,
}

pub fn kernel(g: &Global, anchor: Option<i64>, check: bool) -> Outcome {
    let params = params(g)?;
    let meta = Metadata::new(&params, None);
    if let Some(i) = anchor {
        let kernel = KernelEvaluator::new(&params)?;
        let diag = kernel.eval(i, i)?;
        let rows = (1..=(params.n() + params.k()) as i64)
            .map(|j| kernel.eval(i, j).map(|v| SliceRow { j, kernel: v, ratio: v / diag }))
            .collect::<Result<Vec<_>, _>>()?;
        return emit(g, &rows, &meta.with("anchor", i));
    }
    let m = kernel_matrix(&params)?;
    if check {
        let trace = m.trace();
        let row = KernelCheckRow {
            n: params.n(),
            k: params.k(),
            trace,
            trace_error: (trace - params.n() as f64).abs(),
            symmetry_residual: m.symmetry_residual(),
            idempotency_residual: m.idempotency_residual(),
        };
        return emit(g, &[row], &meta);
    }
    let size = m.size();
    let rows: Vec<EntryRow> = (1..=size)
        .flat_map(|a| (1..=size).map(move |b| (a, b)))
        .map(|(a, b)| EntryRow { a, b, value: m.get(a, b) })
        .collect();
    emit(g, &rows, &meta)
}

#[derive(Serialize)]
struct AsymRow {
    j: i64,
    m: usize,
    g: f64,
    mu: f64,
    exact: f64,
    asymptotic: f64,
    rel_error: f64,
    envelope_error: f64,
    sine: f64,
}

pub fn asym(g: &Global, family: Family, degree: Option<usize>) -> Outcome {
    let params = params(g)?;
    let m = degree.unwrap_or(2 * params.n());
    let half = (params.n() + params.k()) as i64;
    let mut rows = Vec::new();
    for j in -half..=half {
        let (approx, exact) = match family {
            Family::Krawtchouk => (krawtchouk_asymptotic_parts(j, m, &params), Ok(krawtchouk_exact_log(j as f64, m, &params))),
            Family::Symplectic if j == 0 => continue,
            Family::Symplectic => (symplectic_asymptotic_parts(j, m, &params), symplectic_exact_log(j as f64, m, &params)),
        };
        let approx = match approx {
            Ok(a) => a,
            Err(Error::Region(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let exact = exact?;
        rows.push(AsymRow {
            j,
            m,
            g: approx.g,
            mu: approx.mu,
            exact: exact.to_f64(),
            asymptotic: approx.to_f64(),
            rel_error: approx.relative_error(exact),
            envelope_error: approx.envelope_error(exact),
            sine: approx.sine,
        });
    }
    let name = match family {
        Family::Krawtchouk => "krawtchouk",
        Family::Symplectic => "symplectic",
    };
    emit(g, &rows, &Metadata::new(&params, None).with("family", name).with("degree", m))
}

pub fn compare(g: &Global, anchor: Option<i64>, window: i64) -> Outcome {
    let params = params(g)?;
    let anchor = anchor.unwrap_or(((params.n() + params.k()) / 2) as i64);
    let sites = (params.n() + params.k()) as i64;
    let range = (anchor - window).max(1)..=(anchor + window).min(sites);
    let empirical = if g.samples > 0 {
        let batch = run_sampling(&params, g.samples, g.replicates, g.seed)?;
        let stats = empirical_kernel_ratio(&batch, anchor, range.clone())?;
        if stats.flagged > 0 {
            eprintln!("warning: {} negative K² estimates beyond 3 SE were clamped", stats.flagged);
        }
        Some(stats)
    } else {
        None
    };
    let c = compare_curves(&params, anchor, range, empirical.as_ref())?;
    eprintln!(
        "anchor {anchor}: x = {:.6}, rho = {:.6}, sup|cd - sine| = {:.6}{}",
        c.x,
        c.rho,
        c.sup_cd_sine,
        c.band_coverage.map_or(String::new(), |b| format!(", cd inside whiskers for {:.1}% of j", 100.0 * b))
    );
    let meta = Metadata::new(&params, Some(g.seed))
        .with("anchor", anchor)
        .with("x", anchor_coordinate(anchor, &params))
        .with("x_convention", "x = anchor / K")
        .with("rho", c.rho)
        .with("sup_cd_sine", c.sup_cd_sine)
        .with("band_coverage", c.band_coverage)
        .with("samples", g.samples)
        .with("replicates", g.replicates)
        .with("clamped", empirical.as_ref().map(|e| e.clamped));
    emit(g, &c.rows, &meta)
}
