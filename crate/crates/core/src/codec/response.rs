//! Packing of the prover's third message.
//!
//! The packed response is one bit stream, padded with zeros to a whole
//! byte only at the very end:
//!
//! 1. Seed material, pair by pair (iterations `(0,1)`, `(2,3)`, …), then the
//!    unpaired iterations. A pair whose two branch bits agree sends a single
//!    master seed (`θ̂` for `00`, `ξ̂` for `11`); any other pair sends each
//!    iteration's own item.
//! 2. For every iteration in order, its vector (`n` bits for `b = 0`; the
//!    `n - k`-bit constant-weight code or `n` raw bits for `b = 1`),
//!    followed by the missing commitment when commitments are aggregated.
//!
//! An iteration's seed item is `θ_i` for `b = 0`, and for `b = 1` either `ξ_i`
//! or, with seed-for-vector disabled, the raw `n`-bit `v_i`.

use crate::algebra::BitVector;
use crate::codec::bits::{BitReader, BitWriter};
use crate::codec::cw::{cw_decode, cw_encode};
use crate::commit::Commitment;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::seedexp::{derive_pair, Seed};

/// What a `b = 1` response reveals about `v_i = π_i[u_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VectorReveal {
    Seed(Seed),
    Raw(BitVector),
}

/// One iteration's response `d_i`, before packing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IterationResponse {
    /// `b = 0`: `(θ_i, u_i + x, c_{i,2})`.
    Zero {
        theta: Seed,
        masked: BitVector,
        c2: Option<Commitment>,
    },
    /// `b = 1`: `(ξ_i, π_i[x], c_{i,1})`.
    One {
        reveal: VectorReveal,
        permuted: BitVector,
        c1: Option<Commitment>,
    },
}

impl IterationResponse {
    pub fn branch(&self) -> bool {
        matches!(self, IterationResponse::One { .. })
    }
}

/// The master seeds a pair of iterations derived its `θ` and `ξ` from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMasters {
    pub theta: Seed,
    pub xi: Seed,
}

/// The serialized, compressed `d_1 … d_δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedResponse(Vec<u8>);

impl PackedResponse {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        PackedResponse(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Grouping of iterations for seed compression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPlan {
    pub pairs: Vec<(usize, usize)>,
    pub standalone: Vec<usize>,
}

/// `(0,1), (2,3), …`; with odd `delta` the last iteration stands alone.
pub fn plan_seed_pairs(delta: usize) -> SeedPlan {
    SeedPlan {
        pairs: (0..delta / 2).map(|p| (2 * p, 2 * p + 1)).collect(),
        standalone: if delta % 2 == 1 {
            vec![delta - 1]
        } else {
            Vec::new()
        },
    }
}

fn plan_for(params: &ParameterSet) -> SeedPlan {
    if params.optimizations().seed_pairing {
        plan_seed_pairs(params.delta())
    } else {
        SeedPlan {
            pairs: Vec::new(),
            standalone: (0..params.delta()).collect(),
        }
    }
}

fn pair_collapses(params: &ParameterSet, b0: bool, b1: bool) -> bool {
    b0 == b1 && (!b0 || params.optimizations().seed_for_vector)
}

/// Exact bit length of the packed response for the given branch bits.
pub fn response_bits(params: &ParameterSet, branches: &[bool]) -> usize {
    let o = params.optimizations();
    let seed = 8 * params.seed_len();
    let n = params.n();
    let item = |b: bool| if !b || o.seed_for_vector { seed } else { n };
    let plan = plan_for(params);
    let mut bits = 0;
    for &(i, j) in &plan.pairs {
        bits += if pair_collapses(params, branches[i], branches[j]) {
            seed
        } else {
            item(branches[i]) + item(branches[j])
        };
    }
    bits += plan.standalone.iter().map(|&i| item(branches[i])).sum::<usize>();
    for &b in branches {
        bits += if b && o.cw_compression { n - params.k() } else { n };
        if o.commitment_aggregation {
            bits += 8 * params.commit_len();
        }
    }
    bits
}

/// Byte length of the packed response for the given branch bits.
pub fn response_len(params: &ParameterSet, branches: &[bool]) -> usize {
    response_bits(params, branches).div_ceil(8)
}

/// Mean of [`response_bits`] over uniformly random branch bits.
pub fn expected_response_bits(params: &ParameterSet) -> f64 {
    let o = params.optimizations();
    let seed = 8.0 * params.seed_len() as f64;
    let n = params.n() as f64;
    let item1 = if o.seed_for_vector { seed } else { n };
    let plan = plan_for(params);
    let both_one = if o.seed_for_vector { seed } else { 2.0 * n };
    let pair = 0.25 * seed + 0.25 * both_one + 0.5 * (seed + item1);
    let single = 0.5 * (seed + item1);
    let vector = 0.5 * n
        + 0.5
            * if o.cw_compression {
                n - params.k() as f64
            } else {
                n
            };
    let commit = if o.commitment_aggregation {
        8.0 * params.commit_len() as f64
    } else {
        0.0
    };
    plan.pairs.len() as f64 * pair
        + plan.standalone.len() as f64 * single
        + params.delta() as f64 * (vector + commit)
}

fn check_shape(params: &ParameterSet, d: &IterationResponse) -> Result<()> {
    let o = params.optimizations();
    let bad = |m: &str| Err(Error::Contract(m.to_string()));
    match d {
        IterationResponse::Zero { theta, masked, c2 } => {
            if theta.len() != params.seed_len() || masked.len() != params.n() {
                return bad("b = 0 response has the wrong seed or vector size");
            }
            if c2.is_some() != o.commitment_aggregation {
                return bad("missing-commitment presence disagrees with aggregation flag");
            }
        }
        IterationResponse::One { reveal, permuted, c1 } => {
            match (reveal, o.seed_for_vector) {
                (VectorReveal::Seed(s), true) if s.len() == params.seed_len() => {}
                (VectorReveal::Raw(v), false) if v.len() == params.n() => {}
                _ => return bad("b = 1 reveal does not match the seed-for-vector flag"),
            }
            if permuted.len() != params.n() {
                return bad("b = 1 response vector has the wrong length");
            }
            if c1.is_some() != o.commitment_aggregation {
                return bad("missing-commitment presence disagrees with aggregation flag");
            }
        }
    }
    Ok(())
}

fn write_item(w: &mut BitWriter, d: &IterationResponse) {
    match d {
        IterationResponse::Zero { theta, .. } => w.push_bytes(theta.as_bytes()),
        IterationResponse::One {
            reveal: VectorReveal::Seed(xi),
            ..
        } => w.push_bytes(xi.as_bytes()),
        IterationResponse::One {
            reveal: VectorReveal::Raw(v),
            ..
        } => w.push_vector(v),
    }
}

fn seed_of(d: &IterationResponse) -> Option<&Seed> {
    match d {
        IterationResponse::Zero { theta, .. } => Some(theta),
        IterationResponse::One {
            reveal: VectorReveal::Seed(xi),
            ..
        } => Some(xi),
        IterationResponse::One { .. } => None,
    }
}

/// Packs `d_1 … d_δ`. `masters[p]` must be the masters pair `p` was derived
/// from (ignored when seed pairing is off).
pub fn compress_response(
    params: &ParameterSet,
    responses: &[IterationResponse],
    branches: &[bool],
    masters: &[PairMasters],
) -> Result<PackedResponse> {
    let delta = params.delta();
    if responses.len() != delta || branches.len() != delta {
        return Err(Error::Contract(format!(
            "expected {delta} responses and branch bits, got {} and {}",
            responses.len(),
            branches.len()
        )));
    }
    for (i, (d, &b)) in responses.iter().zip(branches).enumerate() {
        if d.branch() != b {
            return Err(Error::Contract(format!("response {i} answers the wrong branch")));
        }
        check_shape(params, d)?;
    }
    let o = params.optimizations();
    let plan = plan_for(params);
    if plan.pairs.len() > masters.len() {
        return Err(Error::Contract(format!(
            "{} seed pairs but only {} master pairs",
            plan.pairs.len(),
            masters.len()
        )));
    }

    let mut w = BitWriter::new();
    for (p, &(i, j)) in plan.pairs.iter().enumerate() {
        if pair_collapses(params, branches[i], branches[j]) {
            let master = if branches[i] {
                &masters[p].xi
            } else {
                &masters[p].theta
            };
            let (left, right) = derive_pair(master, p as u32);
            if seed_of(&responses[i]) != Some(&left) || seed_of(&responses[j]) != Some(&right) {
                return Err(Error::Contract(format!(
                    "pair {p} seeds do not derive from its master"
                )));
            }
            w.push_bytes(master.as_bytes());
        } else {
            write_item(&mut w, &responses[i]);
            write_item(&mut w, &responses[j]);
        }
    }
    for &i in &plan.standalone {
        write_item(&mut w, &responses[i]);
    }
    for d in responses {
        match d {
            IterationResponse::Zero { masked, c2, .. } => {
                w.push_vector(masked);
                if let Some(c) = c2 {
                    w.push_bytes(c.as_bytes());
                }
            }
            IterationResponse::One { permuted, c1, .. } => {
                if o.cw_compression {
                    w.push_vector(&cw_encode(permuted, params.w(), params.n() - params.k())?);
                } else {
                    w.push_vector(permuted);
                }
                if let Some(c) = c1 {
                    w.push_bytes(c.as_bytes());
                }
            }
        }
    }
    debug_assert_eq!(w.bit_len(), response_bits(params, branches));
    Ok(PackedResponse(w.finish()))
}

enum Item {
    Seed(Seed),
    Raw(BitVector),
}

fn read_item(r: &mut BitReader<'_>, params: &ParameterSet, b: bool) -> Result<Item> {
    if b && !params.optimizations().seed_for_vector {
        Ok(Item::Raw(r.read_vector(params.n())?))
    } else {
        Ok(Item::Seed(Seed::new(r.read_bytes(params.seed_len())?)))
    }
}

/// Inverse of [`compress_response`]; child seeds are re-derived from any
/// transmitted masters. Never panics on malformed input.
pub fn decompress_response(
    params: &ParameterSet,
    packed: &PackedResponse,
    branches: &[bool],
) -> Result<Vec<IterationResponse>> {
    let delta = params.delta();
    if branches.len() != delta {
        return Err(Error::Decode(format!(
            "expected {delta} branch bits, got {}",
            branches.len()
        )));
    }
    let expected = response_len(params, branches);
    if packed.len() != expected {
        return Err(Error::Decode(format!(
            "response is {} bytes, expected {expected}",
            packed.len()
        )));
    }
    let o = params.optimizations();
    let plan = plan_for(params);
    let mut r = BitReader::new(packed.as_bytes());
    let mut items: Vec<Option<Item>> = (0..delta).map(|_| None).collect();
    for (p, &(i, j)) in plan.pairs.iter().enumerate() {
        if pair_collapses(params, branches[i], branches[j]) {
            let master = Seed::new(r.read_bytes(params.seed_len())?);
            let (left, right) = derive_pair(&master, p as u32);
            items[i] = Some(Item::Seed(left));
            items[j] = Some(Item::Seed(right));
        } else {
            items[i] = Some(read_item(&mut r, params, branches[i])?);
            items[j] = Some(read_item(&mut r, params, branches[j])?);
        }
    }
    for &i in &plan.standalone {
        items[i] = Some(read_item(&mut r, params, branches[i])?);
    }

    let mut out = Vec::with_capacity(delta);
    for (item, &b) in items.into_iter().zip(branches) {
        let item = item.expect("every iteration is planned");
        if !b {
            let Item::Seed(theta) = item else {
                unreachable!("b = 0 items are always seeds")
            };
            let masked = r.read_vector(params.n())?;
            let c2 = if o.commitment_aggregation {
                Some(Commitment::from_bytes(&r.read_bytes(params.commit_len())?))
            } else {
                None
            };
            out.push(IterationResponse::Zero { theta, masked, c2 });
        } else {
            let reveal = match item {
                Item::Seed(s) => VectorReveal::Seed(s),
                Item::Raw(v) => VectorReveal::Raw(v),
            };
            let permuted = if o.cw_compression {
                let code = r.read_vector(params.n() - params.k())?;
                cw_decode(&code, params.n(), params.w())?
            } else {
                r.read_vector(params.n())?
            };
            let c1 = if o.commitment_aggregation {
                Some(Commitment::from_bytes(&r.read_bytes(params.commit_len())?))
            } else {
                None
            };
            out.push(IterationResponse::One { reveal, permuted, c1 });
        }
    }
    r.finish()?;
    Ok(out)
}
