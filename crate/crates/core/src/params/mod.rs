//! Parameter sets and the security calculator.

mod security;

use std::fmt;

pub use security::{
    alpha_star, binomial, delta_min_kz, delta_min_soundness, kz_cost_log2, log2_biguint, log2_binomial,
    log2_epsilon, pi_star, select_parameters, SecurityReport,
};

use crate::error::{Error, Result};

/// Which communication optimizations are active. All default to on; turning
/// them all off yields the plain (unoptimized) quasi-cyclic Stern protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Optimizations {
    /// Derive `v = π[u]` from a seed `ξ` and reveal `ξ` instead of `v`.
    pub seed_for_vector: bool,
    /// Derive consecutive iterations' seeds from per-pair masters.
    pub seed_pairing: bool,
    /// Send weight-`w` vectors as `n - k`-bit combinadic ranks.
    pub cw_compression: bool,
    /// Send two aggregate commitments instead of all `3δ`.
    pub commitment_aggregation: bool,
}

impl Default for Optimizations {
    fn default() -> Self {
        Self::all()
    }
}

impl Optimizations {
    pub const NAMES: [&'static str; 4] = ["seed-vector", "seed-pairing", "cw", "commit-aggregation"];

    pub const fn all() -> Self {
        Optimizations {
            seed_for_vector: true,
            seed_pairing: true,
            cw_compression: true,
            commitment_aggregation: true,
        }
    }

    pub const fn none() -> Self {
        Optimizations {
            seed_for_vector: false,
            seed_pairing: false,
            cw_compression: false,
            commitment_aggregation: false,
        }
    }

    /// Turns one optimization off by its CLI name.
    pub fn disable(&mut self, name: &str) -> Result<()> {
        match name {
            "seed-vector" => self.seed_for_vector = false,
            "seed-pairing" => self.seed_pairing = false,
            "cw" => self.cw_compression = false,
            "commit-aggregation" => self.commitment_aggregation = false,
            other => {
                return Err(Error::Parameter(format!(
                    "unknown optimization {other:?} (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Bit `i` set means optimization `NAMES[i]` is disabled.
    pub fn disabled_mask(&self) -> u8 {
        (!self.seed_for_vector as u8)
            | (!self.seed_pairing as u8) << 1
            | (!self.cw_compression as u8) << 2
            | (!self.commitment_aggregation as u8) << 3
    }

    pub fn from_disabled_mask(mask: u8) -> Result<Self> {
        if mask & !0x0f != 0 {
            return Err(Error::Parameter(format!("unknown optimization mask {mask:#04x}")));
        }
        Ok(Optimizations {
            seed_for_vector: mask & 1 == 0,
            seed_pairing: mask & 2 == 0,
            cw_compression: mask & 4 == 0,
            commitment_aggregation: mask & 8 == 0,
        })
    }
}

/// `(λ, k, n = 2k, w, δ, s)` plus the active optimizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSet {
    name: String,
    id: Option<u8>,
    lambda: usize,
    k: usize,
    w: usize,
    delta: usize,
    s: usize,
    opts: Optimizations,
}

impl ParameterSet {
    /// A custom set with every optimization enabled.
    pub fn new(lambda: usize, k: usize, w: usize, delta: usize, s: usize) -> Result<Self> {
        Self::with_optimizations(lambda, k, w, delta, s, Optimizations::all())
    }

    pub fn with_optimizations(
        lambda: usize,
        k: usize,
        w: usize,
        delta: usize,
        s: usize,
        opts: Optimizations,
    ) -> Result<Self> {
        let p = ParameterSet {
            name: format!("custom-{lambda}-k{k}-w{w}-d{delta}-s{s}"),
            id: None,
            lambda,
            k,
            w,
            delta,
            s,
            opts,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Parameter(m));
        if self.lambda == 0 || self.lambda % 8 != 0 || self.lambda > 256 {
            return fail(format!(
                "λ = {} must be a positive multiple of 8, at most 256",
                self.lambda
            ));
        }
        if self.k == 0 || self.n() > 1 << 16 {
            return fail(format!("k = {} must be in [1, 32768]", self.k));
        }
        if self.w == 0 || self.w >= self.n() {
            return fail(format!("w = {} must satisfy 0 < w < n = {}", self.w, self.n()));
        }
        if self.delta == 0 || self.delta > u32::MAX as usize / 2 {
            return fail(format!("δ = {} must be at least 1", self.delta));
        }
        if self.s == 0 || self.s > u16::MAX as usize {
            return fail(format!("s = {} must be in [1, 65535]", self.s));
        }
        if self.opts.cw_compression && !self.cw_capacity_ok() {
            return fail(format!(
                "C({}, {}) exceeds 2^{}: constant-weight compression impossible",
                self.n(),
                self.w,
                self.n() - self.k
            ));
        }
        Ok(())
    }

    /// `C(n, w) ≤ 2^(n-k)`, checked with exact integers.
    pub fn cw_capacity_ok(&self) -> bool {
        crate::codec::cw_capacity_ok(self.n(), self.w, self.n() - self.k)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Registry id for built-in sets.
    pub fn id(&self) -> Option<u8> {
        self.id
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        2 * self.k
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn optimizations(&self) -> Optimizations {
        self.opts
    }

    pub fn seed_len(&self) -> usize {
        self.lambda / 8
    }

    pub fn commit_len(&self) -> usize {
        2 * self.lambda / 8
    }

    /// Same set with different optimizations; keys are unaffected.
    pub fn set_optimizations(&self, opts: Optimizations) -> Result<Self> {
        let mut p = self.clone();
        p.opts = opts;
        p.validate()?;
        Ok(p)
    }

    pub fn with_delta(&self, delta: usize) -> Result<Self> {
        let mut p = self.clone();
        p.delta = delta;
        p.id = None;
        p.name = format!("{}-d{delta}", self.name);
        p.validate()?;
        Ok(p)
    }

    fn builtin(name: &str, id: u8, lambda: usize, k: usize, w: usize, delta: usize, s: usize) -> Self {
        let p = ParameterSet {
            name: name.to_string(),
            id: Some(id),
            lambda,
            k,
            w,
            delta,
            s,
            opts: Optimizations::all(),
        };
        p.validate().expect("built-in parameter sets are valid");
        p
    }

    /// Looks up a built-in set by name (case-insensitive).
    pub fn by_name(name: &str) -> Result<Self> {
        builtin_parameter_sets()
            .into_iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parameter(format!("unknown parameter set {name:?}")))
    }

    pub fn by_id(id: u8) -> Result<Self> {
        builtin_parameter_sets()
            .into_iter()
            .find(|p| p.id == Some(id))
            .ok_or_else(|| Error::Parameter(format!("unknown parameter set id {id}")))
    }

    /// Secret key size: one λ-bit seed.
    pub fn secret_key_bytes(&self) -> usize {
        self.seed_len()
    }

    /// Serialized public key: `φ2 ‖ y^1 ‖ … ‖ y^s`, each `y` packed in
    /// `⌈k/8⌉` bytes.
    pub fn public_key_bytes(&self) -> usize {
        self.seed_len() + self.s * self.k.div_ceil(8)
    }

    /// Public key size if each syndrome is counted as `n` bits, the
    /// convention behind the published key-size table (`(λ + s·n) / 8`).
    pub fn public_key_bytes_n_bit_accounting(&self) -> f64 {
        (self.lambda + self.s * self.n()) as f64 / 8.0
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (λ={}, n={}, k={}, w={}, δ={}, s={})",
            self.name,
            self.lambda,
            self.n(),
            self.k,
            self.w,
            self.delta,
            self.s
        )
    }
}

pub const TOY_ID: u8 = 0;
pub const QCS_128_S1_ID: u8 = 1;
pub const QCS_128_S4_ID: u8 = 2;
pub const QCS_128_S20_ID: u8 = 3;

/// The three 128-bit sets plus a toy set for tests.
pub fn builtin_parameter_sets() -> Vec<ParameterSet> {
    vec![
        ParameterSet::builtin("QCS-128-s1", QCS_128_S1_ID, 128, 653, 137, 151, 1),
        ParameterSet::builtin("QCS-128-s4", QCS_128_S4_ID, 128, 653, 137, 145, 4),
        ParameterSet::builtin("QCS-128-s20", QCS_128_S20_ID, 128, 653, 137, 141, 20),
        // w = 2 keeps C(16, w) within 2^8 so every optimization applies.
        ParameterSet::builtin("TOY", TOY_ID, 128, 8, 2, 4, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sets() {
        let sets = builtin_parameter_sets();
        let rows: Vec<_> = sets
            .iter()
            .filter(|p| p.lambda() == 128 && p.k() == 653)
            .map(|p| (p.n(), p.k(), p.w(), p.delta(), p.s()))
            .collect();
        assert_eq!(
            rows,
            vec![
                (1306, 653, 137, 151, 1),
                (1306, 653, 137, 145, 4),
                (1306, 653, 137, 141, 20)
            ]
        );
        for p in &sets {
            assert!(p.cw_capacity_ok(), "{p}");
            assert_eq!(ParameterSet::by_name(p.name()).unwrap(), *p);
            assert_eq!(ParameterSet::by_id(p.id().unwrap()).unwrap(), *p);
        }
    }

    #[test]
    fn toy_set_is_valid() {
        let toy = ParameterSet::by_name("toy").unwrap();
        assert_eq!((toy.k(), toy.n(), toy.delta(), toy.s()), (8, 16, 4, 1));
        assert!(toy.w() > 0 && toy.w() < toy.n());
    }

    #[test]
    fn validation_errors() {
        assert!(ParameterSet::new(128, 8, 0, 4, 1).is_err());
        assert!(ParameterSet::new(128, 8, 16, 4, 1).is_err());
        assert!(ParameterSet::new(128, 8, 2, 0, 1).is_err());
        assert!(ParameterSet::new(128, 8, 2, 4, 0).is_err());
        assert!(ParameterSet::new(100, 8, 2, 4, 1).is_err());
        // C(16, 3) = 560 > 2^8
        assert!(ParameterSet::new(128, 8, 3, 4, 1).is_err());
        let mut opts = Optimizations::all();
        opts.disable("cw").unwrap();
        assert!(ParameterSet::with_optimizations(128, 8, 3, 4, 1, opts).is_ok());
    }

    #[test]
    fn optimization_mask_roundtrip() {
        for mask in 0..16u8 {
            assert_eq!(
                Optimizations::from_disabled_mask(mask).unwrap().disabled_mask(),
                mask
            );
        }
        assert!(Optimizations::from_disabled_mask(0x10).is_err());
        assert!(Optimizations::all().disable("nope").is_err());
    }

    #[test]
    fn key_sizes() {
        let s1 = ParameterSet::by_name("QCS-128-s1").unwrap();
        assert_eq!(s1.secret_key_bytes(), 16);
        assert_eq!(s1.public_key_bytes(), 16 + 82);
        assert_eq!(s1.public_key_bytes_n_bit_accounting(), 179.25);
    }
}
