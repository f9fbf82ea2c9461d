use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use skewhowe::asymptotics::{density_region, limit_density, DensityRegion};
use skewhowe::combinatorics::validate_bijection;
use skewhowe::kernel::kernel_matrix;
use skewhowe::measure::{enumerate_measure, measure_explicit, ParticleConfig};
use skewhowe::orthopoly::table1::compare_table;
use skewhowe::orthopoly::{appendix_ratio, monic_ttr, norm_sequence, qr_step_squared_exact};
use skewhowe::{EnsembleParams, Error};

use crate::commands::params;
use crate::{say, Failure, Global};

/// Largest `2nk` for the exhaustive bijection check.
const BIJECTION_BITS: usize = 16;
/// Largest number of diagrams for the determinant check.
const DETERMINANT_DIAGRAMS: usize = 5000;

type Check = Result<String, Error>;

fn table(p: &EnsembleParams) -> Check {
    let rows = compare_table(p)?;
    match rows.iter().find(|c| !c.corrected_matches) {
        Some(c) => Err(Error::Consistency(format!("{}_{} differs", c.family.symbol(), c.degree))),
        None => Ok(format!("{} entries", rows.len())),
    }
}

fn appendix(p: &EnsembleParams) -> Check {
    let top = p.big_k() - 2;
    for m in (0..=top).step_by(2) {
        appendix_ratio(m, p)?;
    }
    Ok(format!("even m ≤ {top}"))
}

fn norms(p: &EnsembleParams) -> Check {
    let top = (p.big_k() - 3).min(20);
    norm_sequence(p, top)?.verify()?;
    Ok(format!("m ≤ {top}"))
}

fn qr(p: &EnsembleParams) -> Check {
    let top = (p.big_k() - 3).min(20);
    let sq = qr_step_squared_exact(p)?;
    let (alpha, beta) = monic_ttr(top, p)?;
    for m in 1..=top {
        if sq.a_hat2[m] != beta[m] {
            return Err(Error::Consistency(format!("â²_{m} = {} but β_{m} = {}", sq.a_hat2[m], beta[m])));
        }
    }
    if alpha.iter().any(|a| *a != BigRational::from_integer(0.into())) {
        return Err(Error::Consistency("nonzero α at p = 1/2".into()));
    }
    Ok(format!("â² = β, b̂ = α = 0 for m ≤ {top}"))
}

fn measure(p: &EnsembleParams) -> Check {
    let all = enumerate_measure(p)?;
    let mut total = BigRational::from_integer(0.into());
    for (d, mu) in &all {
        if &measure_explicit(&ParticleConfig::from_diagram(d), p)? != mu {
            return Err(Error::Consistency(format!("product formula differs at {d}")));
        }
        total += mu.value();
    }
    if !total.is_one() {
        return Err(Error::Consistency(format!("probabilities sum to {total}")));
    }
    Ok(format!("{} diagrams", all.len()))
}

fn bijection(p: &EnsembleParams) -> Check {
    let r = validate_bijection(p)?;
    Ok(format!("{} matrices", r.matrices))
}

fn projection(p: &EnsembleParams) -> Check {
    let m = kernel_matrix(p)?;
    let trace = (m.trace() - p.n() as f64).abs();
    let idem = m.idempotency_residual();
    if trace > 1e-8 || idem > 1e-8 {
        return Err(Error::Consistency(format!("|trace − n| = {trace:.2e}, ‖K² − K‖ = {idem:.2e}")));
    }
    Ok(format!("|trace − n| = {trace:.1e}, ‖K² − K‖ = {idem:.1e}"))
}

fn determinants(p: &EnsembleParams) -> Check {
    let m = kernel_matrix(p)?;
    let mut worst = 0.0f64;
    for (d, mu) in enumerate_measure(p)? {
        let det = m.minor_determinant(ParticleConfig::from_diagram(&d).coords())?;
        worst = worst.max((det - mu.to_f64()).abs());
    }
    if worst > 1e-10 {
        return Err(Error::Consistency(format!("max |det − μ| = {worst:.2e}")));
    }
    Ok(format!("max |det − μ| = {worst:.1e}"))
}

fn density(p: &EnsembleParams) -> Check {
    let h = p.h_f64();
    let mut worst = 0.0f64;
    for t in 0..1000 {
        let x = -0.5 + (t as f64 + 0.5) / 1000.0;
        if density_region(x, h) == DensityRegion::Bulk {
            let lhs = (std::f64::consts::PI * limit_density(x, h)).cos();
            worst = worst.max((lhs - (1.0 - 4.0 * h) / (1.0 - 4.0 * x * x).sqrt()).abs());
        }
    }
    if worst > 1e-12 {
        return Err(Error::Consistency(format!("cos(πρ) identity off by {worst:.2e}")));
    }
    Ok(format!("max error {worst:.1e}"))
}

pub fn run(g: &Global) -> Result<(), Failure> {
    let p = params(g)?;
    let (n, k) = (p.n(), p.k());
    let small = n + k <= 24 && binomial(n + k, n) <= DETERMINANT_DIAGRAMS;
    let suites: Vec<(&str, bool, fn(&EnsembleParams) -> Check)> = vec![
        ("polynomial table", p.big_k() >= 8, table),
        ("appendix ratio", true, appendix),
        ("norm recurrences", p.big_k() >= 4, norms),
        ("QR step vs recurrence", p.big_k() >= 4, qr),
        ("measure", small, measure),
        ("bijection", 2 * n * k <= BIJECTION_BITS, bijection),
        ("kernel projection", true, projection),
        ("determinants", small, determinants),
        ("limit density", true, density),
    ];
    let mut failed = 0;
    for (name, applicable, check) in suites {
        if !applicable {
            say(format_args!("SKIP {name}: box too small or too large"))?;
            continue;
        }
        match check(&p) {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(e) => {
                failed += 1;
                say(format_args!("FAIL {name}: {e}"))?;
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}
