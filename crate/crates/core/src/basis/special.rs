use std::sync::OnceLock;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
const ZETA_TERMS: usize = 64;

/// ζ(k) for k = 0..ZETA_TERMS (entries 0 and 1 unused), by Euler–Maclaurin.
fn zeta_table() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2j}/(2j)!
        const BERN: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30240.0,
            -1.0 / 1_209_600.0,
            1.0 / 47_900_160.0,
            -691.0 / 1_307_674_368_000.0,
        ];
        let big_n = 12.0_f64;
        let mut out = [0.0; ZETA_TERMS];
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let mut sum = 0.0;
            for n in (1..12).rev() {
                sum += (n as f64).powf(-s);
            }
            sum += big_n.powf(1.0 - s) / (s - 1.0) + 0.5 * big_n.powf(-s);
            let mut rising = s;
            let mut pow = big_n.powf(-s - 1.0);
            for (j, b) in BERN.iter().enumerate() {
                sum += b * rising * pow;
                let j = j as f64;
                rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
                pow /= big_n * big_n;
            }
            *slot = sum;
        }
        out
    })
}

/// ln Γ(1 + z) for |z| ≤ 1/2 from the ζ-series.
fn ln_gamma_1p(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut acc = 0.0;
    let mut zk = -z;
    for (k, zeta_k) in zeta.iter().enumerate().skip(2) {
        zk *= -z;
        let term = zeta_k * zk / k as f64;
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA * z + acc
}

fn stirling(x: f64) -> f64 {
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in C {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series
}

/// Natural log of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    if x <= 2.5 {
        let z = x - 2.0;
        return ln_gamma_1p(z) + z.ln_1p();
    }
    if x >= 10.0 {
        return stirling(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < 10.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

/// ln of the generalized binomial C(a, k) = Γ(a+1)/(Γ(k+1)Γ(a−k+1)).
pub fn ln_binomial(a: f64, k: f64) -> f64 {
    log_gamma_unchecked(a + 1.0) - log_gamma_unchecked(k + 1.0) - log_gamma_unchecked(a - k + 1.0)
}

fn check_jacobi(alpha: f64, beta: f64, t: f64) -> Result<()> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi parameters must exceed -1, got ({alpha}, {beta})"
        )));
    }
    if !(t.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("Jacobi argument {t} outside [-1, 1]")));
    }
    Ok(())
}

/// P_k^{(α,β)}(t) by the three-term recurrence.
pub(crate) fn jacobi_value(k: u32, alpha: f64, beta: f64, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = (alpha + 1.0) + 0.5 * (ab + 2.0) * (t - 1.0);
    for n in 1..k {
        let n = n as f64;
        let two_n_ab = 2.0 * n + ab;
        let a1 = 2.0 * (n + 1.0) * (n + ab + 1.0) * two_n_ab;
        let a2 = (two_n_ab + 1.0) * (alpha * alpha - beta * beta);
        let a3 = two_n_ab * (two_n_ab + 1.0) * (two_n_ab + 2.0);
        let a4 = 2.0 * (n + alpha) * (n + beta) * (two_n_ab + 2.0);
        let next = ((a2 + a3 * t) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// P_0..P_K^{(α,β)}(t) in one recurrence pass.
pub(crate) fn jacobi_all(kmax: usize, alpha: f64, beta: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    let ab = alpha + beta;
    out.push((alpha + 1.0) + 0.5 * (ab + 2.0) * (t - 1.0));
    for n in 1..kmax {
        let nf = n as f64;
        let two_n_ab = 2.0 * nf + ab;
        let a1 = 2.0 * (nf + 1.0) * (nf + ab + 1.0) * two_n_ab;
        let a2 = (two_n_ab + 1.0) * (alpha * alpha - beta * beta);
        let a3 = two_n_ab * (two_n_ab + 1.0) * (two_n_ab + 2.0);
        let a4 = 2.0 * (nf + alpha) * (nf + beta) * (two_n_ab + 2.0);
        let next = ((a2 + a3 * t) * out[n] - a4 * out[n - 1]) / a1;
        out.push(next);
    }
    out
}

/// Value and t-derivative of P_k^{(α,β)} at t.
pub fn jacobi_eval(k: u32, alpha: f64, beta: f64, t: f64) -> Result<(f64, f64)> {
    check_jacobi(alpha, beta, t)?;
    let value = jacobi_value(k, alpha, beta, t);
    let deriv = if k == 0 {
        0.0
    } else {
        0.5 * (k as f64 + alpha + beta + 1.0) * jacobi_value(k - 1, alpha + 1.0, beta + 1.0, t)
    };
    Ok((value, deriv))
}

/// Value, first and second t-derivatives of P_k^{(α,β)} at t.
pub fn jacobi_eval2(k: u32, alpha: f64, beta: f64, t: f64) -> Result<(f64, f64, f64)> {
    let (value, deriv) = jacobi_eval(k, alpha, beta, t)?;
    let second = if k < 2 {
        0.0
    } else {
        let kf = k as f64;
        0.25 * (kf + alpha + beta + 1.0)
            * (kf + alpha + beta + 2.0)
            * jacobi_value(k - 2, alpha + 2.0, beta + 2.0, t)
    };
    Ok((value, deriv, second))
}
