use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::orthopoly::polynomial::{ops, MonicPolynomial};
use crate::params::EnsembleParams;

fn rat(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Diagonal coefficient of the monic recurrence on the lattice `u = i/n`:
/// `α̃_m = (p(K−m) + m(1−p) − K/2) / n`.
pub fn alpha_tilde(m: usize, params: &EnsembleParams) -> BigRational {
    let k = params.big_k() as i64;
    let p = params.p();
    let q = BigRational::one() - p;
    let m_i = m as i64;
    (p * BigRational::from_integer((k - m_i).into()) + q * rat(m) - BigRational::new(k.into(), 2.into()))
        / rat(params.n())
}

/// `β̃_m = m(K−m+1) p(1−p) / n²`, zero for `m = 0` and `m = K + 1`.
pub fn beta_tilde(m: usize, params: &EnsembleParams) -> BigRational {
    let k = params.big_k();
    if m == 0 || m > k + 1 {
        return BigRational::zero();
    }
    let p = params.p();
    let pq = p * (BigRational::one() - p);
    rat(m * (k + 1 - m)) * pq / rat(params.n() * params.n())
}

pub fn alpha_tilde_f64(m: usize, params: &EnsembleParams) -> f64 {
    let (k, p) = (params.big_k() as f64, params.p_f64());
    let m = m as f64;
    (p * (k - m) + m * (1.0 - p) - k / 2.0) / params.n() as f64
}

pub fn beta_tilde_f64(m: usize, params: &EnsembleParams) -> f64 {
    let k = params.big_k();
    if m == 0 || m > k + 1 {
        return 0.0;
    }
    let p = params.p_f64();
    let n = params.n() as f64;
    (m * (k + 1 - m)) as f64 * p * (1.0 - p) / (n * n)
}

fn check_degree(m: usize, params: &EnsembleParams) -> Result<()> {
    if m > params.big_k() {
        return Err(Error::Domain(format!(
            "degree {m} exceeds K = {}: the weight has only K + 1 support points",
            params.big_k()
        )));
    }
    Ok(())
}

/// `K̃_0, …, K̃_{max_m}` built by the three-term recurrence.
pub fn krawtchouk_table(max_m: usize, params: &EnsembleParams) -> Result<Vec<MonicPolynomial>> {
    check_degree(max_m, params)?;
    let mut prev: Vec<BigRational> = Vec::new();
    let mut cur = vec![BigRational::one()];
    let mut out = vec![MonicPolynomial::one(params)];
    for m in 0..max_m {
        let next = ops::ttr_step(&cur, &prev, &alpha_tilde(m, params), &beta_tilde(m, params));
        out.push(MonicPolynomial::from_raw(next.clone(), params));
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// The monic Krawtchouk polynomial `K̃_m` in the rescaled variable `u`.
pub fn monic_krawtchouk(m: usize, params: &EnsembleParams) -> Result<MonicPolynomial> {
    Ok(krawtchouk_table(m, params)?.pop().expect("table is nonempty"))
}

/// Lattice offsets `i = −K/2, …, K/2`; the point is `u = i/n`.
pub fn lattice(params: &EnsembleParams) -> impl Iterator<Item = i64> {
    let half = (params.big_k() / 2) as i64;
    -half..=half
}

pub fn lattice_point(i: i64, params: &EnsembleParams) -> BigRational {
    BigRational::new(i.into(), BigInt::from(params.n()))
}

/// `W(i/n) = binom(K, K/2+i) p^{K/2+i} (1−p)^{K/2−i}`.
pub fn lattice_weight(i: i64, params: &EnsembleParams) -> Result<BigRational> {
    let k = params.big_k() as i64;
    let a = k / 2 + i;
    if !(0..=k).contains(&a) {
        return Err(Error::Domain(format!("lattice offset {i} outside [−K/2, K/2]")));
    }
    let b: BigUint = binomial(BigUint::from(k as u64), BigUint::from(a as u64));
    let p = params.p();
    let q = BigRational::one() - p;
    Ok(BigRational::from_integer(b.into()) * Pow::pow(p, a as u64) * Pow::pow(&q, (k - a) as u64))
}

/// `ln W` at the real point `u` (continuous in `u` through `ln Γ`).
pub fn ln_weight(u: f64, params: &EnsembleParams) -> f64 {
    let k = params.big_k() as f64;
    let a = k / 2.0 + params.n() as f64 * u;
    let p = params.p_f64();
    ln_gamma(k + 1.0) - ln_gamma(a + 1.0) - ln_gamma(k - a + 1.0) + a * p.ln() + (k - a) * (1.0 - p).ln()
}

/// `L_m = n^{−2m} κ_m^{−2} = n^{−2m} (m!)² binom(K, m) (p(1−p))^m`.
pub fn krawtchouk_norm(m: usize, params: &EnsembleParams) -> BigRational {
    let k = params.big_k();
    if m > k {
        return BigRational::zero();
    }
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    let b: BigUint = binomial(BigUint::from(k), BigUint::from(m));
    let p = params.p();
    let pq = p * (BigRational::one() - p);
    let n2m = BigInt::from(params.n()).pow(2 * m as u32);
    BigRational::new(&fact * &fact * BigInt::from(b), n2m) * Pow::pow(&pq, m as u64)
}

/// `ln L_m` in floating point.
pub fn ln_krawtchouk_norm(m: usize, params: &EnsembleParams) -> f64 {
    let (k, m_f) = (params.big_k() as f64, m as f64);
    let p = params.p_f64();
    2.0 * ln_gamma(m_f + 1.0) + ln_gamma(k + 1.0) - ln_gamma(m_f + 1.0) - ln_gamma(k - m_f + 1.0)
        + m_f * (p * (1.0 - p)).ln()
        - 2.0 * m_f * (params.n() as f64).ln()
}

/// `Σ_i K̃_l(i/n) K̃_m(i/n) W(i/n)`, which should be `δ_{lm} L_m`.
pub fn krawtchouk_orthogonality_check(l: usize, m: usize, params: &EnsembleParams) -> Result<BigRational> {
    let table = krawtchouk_table(l.max(m), params)?;
    let mut sum = BigRational::zero();
    for i in lattice(params) {
        let u = lattice_point(i, params);
        sum += table[l].eval(&u) * table[m].eval(&u) * lattice_weight(i, params)?;
    }
    Ok(sum)
}

/// `Ω₂ = Σ (i/n)² W(i/n) = K(K(1−2p)² + 4p(1−p)) / (4n²)`.
pub fn second_moment(params: &EnsembleParams) -> BigRational {
    let k = rat(params.big_k());
    let p = params.p();
    let one = BigRational::one();
    let d = &one - rat(2) * p;
    &k * (&k * &d * &d + rat(4) * p * (&one - p)) / rat(4 * params.n() * params.n())
}
