//! Soundness and attack-cost formulas used to pick the iteration count δ.
//!
//! Binomials are exact big integers; only the final logarithms are floats.
//! The Kales–Zaverucha tail is evaluated in the log domain because for
//! δ ≈ 150 and `sk` in the hundreds its terms underflow `f64`.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact `C(n, r)`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `log2(x)` for a big integer, accurate to `f64` precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

pub fn log2_binomial(n: u64, r: u64) -> f64 {
    log2_biguint(&binomial(n, r))
}

/// `log2 ε(α) = (α - 1) log2 C(n, w) - (n - k)(α - 2)`.
pub fn log2_epsilon(alpha: u64, n: u64, k: u64, w: u64) -> Result<f64> {
    if alpha < 2 {
        return Err(Error::Range {
            what: "alpha",
            value: alpha,
            bound: 2,
        });
    }
    Ok((alpha - 1) as f64 * log2_binomial(n, w) - ((n - k) * (alpha - 2)) as f64)
}

/// Smallest `α ≥ 2` with `ε(α) ≤ 2^-λ`.
///
/// `ε` decreases in `α` whenever `C(n, w) < 2^(n-k)`, so the smallest
/// qualifying `α` is the one that minimises the per-iteration soundness
/// error `π*`.
pub fn alpha_star(n: u64, k: u64, w: u64, lambda: u64) -> Result<u64> {
    let lc = log2_binomial(n, w);
    let slope = lc - (n - k) as f64;
    if slope >= 0.0 {
        return Err(Error::Parameter(format!(
            "log2 C({n}, {w}) = {lc:.3} is not below n - k = {}; no α satisfies ε(α) ≤ 2^-λ",
            n - k
        )));
    }
    // log2 ε(α) = lc + (α - 2) · slope; start near the crossing and step.
    let guess = ((-(lambda as f64) - lc) / slope).ceil().max(0.0) as u64 + 2;
    let mut alpha = guess.saturating_sub(2).max(2);
    while log2_epsilon(alpha, n, k, w)? > -(lambda as f64) {
        alpha += 1;
    }
    while alpha > 2 && log2_epsilon(alpha - 1, n, k, w)? <= -(lambda as f64) {
        alpha -= 1;
    }
    Ok(alpha)
}

/// Per-iteration soundness bound `(sk + α - 1) / (2sk)`.
pub fn pi_star(alpha: u64, s: u64, k: u64) -> Result<f64> {
    if s == 0 || k == 0 {
        return Err(Error::Parameter("s and k must be positive".into()));
    }
    let sk = s * k;
    if alpha == 0 || alpha > sk {
        return Err(Error::Range {
            what: "alpha",
            value: alpha,
            bound: sk + 1,
        });
    }
    Ok((sk + alpha - 1) as f64 / (2 * sk) as f64)
}

/// Smallest δ with `π*^δ ≤ 2^-λ`, i.e. `⌈-λ / log2 π*⌉`.
pub fn delta_min_soundness(lambda: u64, pi_star: f64) -> Result<u64> {
    if !(pi_star > 0.0 && pi_star < 1.0) {
        return Err(Error::Parameter(format!("π* = {pi_star} must lie in (0, 1)")));
    }
    if lambda == 0 {
        return Ok(0);
    }
    let exact = -(lambda as f64) / pi_star.log2();
    // Snap values within rounding noise of an integer (π* = 1/2 gives λ).
    let nearest = exact.round();
    if (exact - nearest).abs() < 1e-9 {
        return Ok(nearest as u64);
    }
    Ok(exact.ceil() as u64)
}

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Cost (log2) of the Kales–Zaverucha attack on δ parallel repetitions
/// with a first-challenge space of size `sk`:
/// `min over τ* of P(τ*)⁻¹ + 2^(δ - τ*)` with
/// `P(τ*) = Σ_{τ ≥ τ*} C(δ, τ) (1/sk)^τ ((sk-1)/sk)^(δ-τ)`.
pub fn kz_cost_log2(delta: u64, sk: u64) -> f64 {
    assert!(sk >= 2, "first challenge space must have at least 2 elements");
    let d = delta as usize;
    let mut ln_fact = vec![0.0f64; d + 1];
    for i in 1..=d {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let lp = -(sk as f64).log2();
    let lq = ((sk - 1) as f64 / sk as f64).log2();
    let log2_term = |tau: usize| {
        (ln_fact[d] - ln_fact[tau] - ln_fact[d - tau]) / std::f64::consts::LN_2
            + tau as f64 * lp
            + (d - tau) as f64 * lq
    };
    let mut tail = f64::NEG_INFINITY;
    let mut best = f64::INFINITY;
    for tau_star in (0..=d).rev() {
        tail = log2_add(tail, log2_term(tau_star));
        let cost = log2_add(-tail, (d - tau_star) as f64);
        best = best.min(cost);
    }
    best
}

/// Smallest δ whose KZ attack cost reaches `2^λ`.
pub fn delta_min_kz(lambda: u64, sk: u64) -> Result<u64> {
    let limit = 64 * lambda + 64;
    (1..=limit)
        .find(|&d| kz_cost_log2(d, sk) >= lambda as f64)
        .ok_or_else(|| Error::Parameter(format!("no δ ≤ {limit} reaches 2^{lambda} against KZ")))
}

/// Everything the calculator derives for `(λ, n, k, w, s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecurityReport {
    pub lambda: u64,
    pub n: u64,
    pub k: u64,
    pub w: u64,
    pub s: u64,
    pub log2_binomial: f64,
    pub alpha_star: u64,
    pub log2_epsilon: f64,
    pub pi_star: f64,
    pub delta_soundness: u64,
    pub delta_kz: u64,
    pub delta_selected: u64,
    pub kz_cost_log2: f64,
    pub soundness_log2: f64,
    pub sqrt_n_margin_bits: f64,
    pub expected_sig_bytes: f64,
}

/// Computes α*, π*, both lower bounds on δ and picks the larger one.
pub fn select_parameters(lambda: u64, n: u64, k: u64, w: u64, s: u64) -> Result<SecurityReport> {
    if n != 2 * k {
        return Err(Error::Parameter(format!(
            "rate-1/2 codes only: n = {n} but k = {k}"
        )));
    }
    if s == 0 || k == 0 {
        return Err(Error::Parameter("s and k must be positive".into()));
    }
    let alpha = alpha_star(n, k, w, lambda)?;
    let pi = pi_star(alpha, s, k)?;
    let delta_soundness = delta_min_soundness(lambda, pi)?;
    let sk = s * k;
    let delta_kz = delta_min_kz(lambda, sk)?;
    let delta = delta_soundness.max(delta_kz);
    Ok(SecurityReport {
        lambda,
        n,
        k,
        w,
        s,
        log2_binomial: log2_binomial(n, w),
        alpha_star: alpha,
        log2_epsilon: log2_epsilon(alpha, n, k, w)?,
        pi_star: pi,
        delta_soundness,
        delta_kz,
        delta_selected: delta,
        kz_cost_log2: kz_cost_log2(delta, sk),
        soundness_log2: delta as f64 * pi.log2(),
        sqrt_n_margin_bits: 0.5 * (sk as f64).log2(),
        expected_sig_bytes: crate::fiatshamir::closed_form_signature_bits(lambda, delta, n) / 8.0,
    })
}

impl SecurityReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        vec![
            ("lambda", self.lambda.to_string()),
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("w", self.w.to_string()),
            ("s", self.s.to_string()),
            ("log2_binomial_n_w", format!("{:.4}", self.log2_binomial)),
            ("alpha_star", self.alpha_star.to_string()),
            ("log2_epsilon", format!("{:.4}", self.log2_epsilon)),
            ("pi_star", format!("{:.6}", self.pi_star)),
            ("delta_soundness", self.delta_soundness.to_string()),
            ("delta_kz", self.delta_kz.to_string()),
            ("delta_selected", self.delta_selected.to_string()),
            ("kz_cost_log2", format!("{:.4}", self.kz_cost_log2)),
            ("soundness_log2", format!("{:.4}", self.soundness_log2)),
            ("sqrt_n_margin_bits", format!("{:.4}", self.sqrt_n_margin_bits)),
            ("expected_sig_bytes", format!("{:.1}", self.expected_sig_bytes)),
        ]
    }

    /// One `key=value` line per field.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.rows() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

impl fmt::Display for SecurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.rows() {
            writeln!(f, "{k:<20} {v:>14}")?;
        }
        Ok(())
    }
}
