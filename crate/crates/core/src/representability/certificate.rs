use std::collections::HashMap;

use serde_json::{Map, Value};

use super::matrix::{apply, build_matrix, BoolMatrix, CoeffVector, SubstitutionMatrix};
use super::RepresentabilityError;
use crate::json::{self, FormatError};
use crate::subdivision::Ctx;

pub const DEFAULT_MAX_N: usize = 256;

/// Supports of `A^N p⁺` and `A^N p⁻` for `N = split_at, ..., cycle_start +
/// cycle_length - 1`, where `p⁺ - p⁻` is the split of `A^{split_at} p`.
/// Applying the pattern of `A` to the last pair gives the pair at
/// `cycle_start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpossibleCycle {
    pub split_at: usize,
    pub cycle_start: usize,
    pub cycle_length: usize,
    pub positive: Vec<Vec<bool>>,
    pub negative: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// `A^n p = result >= 0`.
    Witness { n: usize, result: CoeffVector },
    Impossible(ImpossibleCycle),
    Inconclusive { bound: usize },
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub context: Ctx,
    pub vector: CoeffVector,
    pub kind: CertificateKind,
}

impl Certificate {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CertificateKind::Witness { .. } => "witness",
            CertificateKind::Impossible(_) => "impossible",
            CertificateKind::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("context".into(), json::context(&self.context));
        m.insert("vector".into(), vec_json(&self.vector));
        m.insert("kind".into(), Value::String(self.kind_name().into()));
        match &self.kind {
            CertificateKind::Witness { n, result } => {
                m.insert("n".into(), json::usize_value(*n));
                m.insert("result".into(), vec_json(result));
            }
            CertificateKind::Impossible(c) => {
                m.insert("split_at".into(), json::usize_value(c.split_at));
                m.insert("cycle_start".into(), json::usize_value(c.cycle_start));
                m.insert("cycle_length".into(), json::usize_value(c.cycle_length));
                m.insert("positive".into(), c.positive.iter().map(|b| json::bits(b)).collect());
                m.insert("negative".into(), c.negative.iter().map(|b| json::bits(b)).collect());
            }
            CertificateKind::Inconclusive { bound } => {
                m.insert("bound".into(), json::usize_value(*bound));
            }
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Certificate, FormatError> {
        let context = json::parse_context(json::get(v, "context")?)?;
        let vector = parse_vec(json::get(v, "vector")?)?;
        let kind = match json::str_of(json::get(v, "kind")?, "kind")? {
            "witness" => CertificateKind::Witness {
                n: json::parse_usize(json::get(v, "n")?, "n")?,
                result: parse_vec(json::get(v, "result")?)?,
            },
            "impossible" => {
                let bits = |key: &str| -> Result<Vec<Vec<bool>>, FormatError> {
                    json::array(json::get(v, key)?, key)?
                        .iter()
                        .map(|b| json::parse_bits(b, key))
                        .collect()
                };
                CertificateKind::Impossible(ImpossibleCycle {
                    split_at: json::parse_usize(json::get(v, "split_at")?, "split_at")?,
                    cycle_start: json::parse_usize(json::get(v, "cycle_start")?, "cycle_start")?,
                    cycle_length: json::parse_usize(json::get(v, "cycle_length")?, "cycle_length")?,
                    positive: bits("positive")?,
                    negative: bits("negative")?,
                })
            }
            "inconclusive" => CertificateKind::Inconclusive {
                bound: json::parse_usize(json::get(v, "bound")?, "bound")?,
            },
            other => return Err(FormatError::new(format!("unknown certificate kind \"{other}\""))),
        };
        Ok(Certificate { context, vector, kind })
    }
}

fn vec_json(v: &CoeffVector) -> Value {
    Value::Array(v.entries().iter().map(json::int).collect())
}

fn parse_vec(v: &Value) -> Result<CoeffVector, FormatError> {
    Ok(CoeffVector(
        json::array(v, "vector")?
            .iter()
            .map(|x| json::parse_int(x, "vector entry"))
            .collect::<Result<_, _>>()?,
    ))
}

fn disjoint_with_negative(pos: &[bool], neg: &[bool]) -> bool {
    neg.iter().any(|&b| b) && pos.iter().zip(neg).all(|(&p, &n)| !(p && n))
}

type SupportPair = (Vec<bool>, Vec<bool>);

/// Iterate support pairs from `v_from` until one repeats. `None` if some
/// visited pair fails disjointness or the cycle does not close by `max_n`.
fn support_cycle(
    b: &BoolMatrix,
    v: &CoeffVector,
    from: usize,
    max_n: usize,
) -> Option<ImpossibleCycle> {
    let (p, q) = v.split();
    let mut state: SupportPair = (p.support(), q.support());
    let mut seen: HashMap<SupportPair, usize> = HashMap::new();
    let mut states: Vec<SupportPair> = Vec::new();
    let mut n = from;
    loop {
        if !disjoint_with_negative(&state.0, &state.1) {
            return None;
        }
        seen.insert(state.clone(), n);
        states.push(state.clone());
        let next = (b.apply(&state.0), b.apply(&state.1));
        n += 1;
        if n > max_n {
            return None;
        }
        if let Some(&start) = seen.get(&next) {
            let (positive, negative) = states.into_iter().unzip();
            return Some(ImpossibleCycle {
                split_at: from,
                cycle_start: start,
                cycle_length: n - start,
                positive,
                negative,
            });
        }
        state = next;
    }
}

pub fn decide_nonneg(
    ctx: &Ctx,
    p: &CoeffVector,
    max_n: usize,
) -> Result<Certificate, RepresentabilityError> {
    decide_nonneg_with(&build_matrix(ctx), p, max_n)
}

/// Search `v_N = A^N p` for a nonnegative witness, trying at every `N` to
/// split `v_N` into parts whose supports stay disjoint forever.
pub fn decide_nonneg_with(
    a: &SubstitutionMatrix,
    p: &CoeffVector,
    max_n: usize,
) -> Result<Certificate, RepresentabilityError> {
    if p.dim() != a.dim() {
        return Err(RepresentabilityError::DimensionMismatch { expected: a.dim(), got: p.dim() });
    }
    if p.is_zero() {
        return Err(RepresentabilityError::ZeroVector);
    }
    let b = a.matrix().pattern();
    let mut v = p.clone();
    let cert = |kind| Certificate { context: a.context().clone(), vector: p.clone(), kind };
    for n in 0..=max_n {
        if v.is_nonnegative() {
            return Ok(cert(CertificateKind::Witness { n, result: v }));
        }
        if let Some(cycle) = support_cycle(&b, &v, n, max_n) {
            return Ok(cert(CertificateKind::Impossible(cycle)));
        }
        v = apply(a, &v)?;
    }
    Ok(cert(CertificateKind::Inconclusive { bound: max_n }))
}

pub fn verify_certificate(ctx: &Ctx, p: &CoeffVector, cert: &Certificate) -> bool {
    verify_certificate_with(&build_matrix(ctx), p, cert)
}

pub fn verify_certificate_with(a: &SubstitutionMatrix, p: &CoeffVector, cert: &Certificate) -> bool {
    if cert.context.poly() != a.context().poly() || &cert.vector != p || p.dim() != a.dim() {
        return false;
    }
    if !a.matrix().is_nonnegative() {
        return false;
    }
    match &cert.kind {
        CertificateKind::Witness { n, result } => {
            let mut v = p.clone();
            for _ in 0..*n {
                v = match apply(a, &v) {
                    Ok(w) => w,
                    Err(_) => return false,
                };
            }
            &v == result && v.is_nonnegative()
        }
        CertificateKind::Impossible(c) => verify_cycle(a, p, c),
        // an inconclusive outcome asserts nothing
        CertificateKind::Inconclusive { .. } => true,
    }
}

fn verify_cycle(a: &SubstitutionMatrix, p: &CoeffVector, c: &ImpossibleCycle) -> bool {
    let dim = a.dim();
    if c.cycle_length == 0 || c.cycle_start < c.split_at {
        return false;
    }
    let len = c.cycle_start + c.cycle_length - c.split_at;
    if c.positive.len() != len || c.negative.len() != len {
        return false;
    }
    if c.positive.iter().chain(&c.negative).any(|s| s.len() != dim) {
        return false;
    }
    let mut v = p.clone();
    for _ in 0..c.split_at {
        if v.is_nonnegative() {
            return false;
        }
        v = apply(a, &v).expect("dimension checked");
    }
    let (pos, neg) = v.split();
    if pos.support() != c.positive[0] || neg.support() != c.negative[0] {
        return false;
    }
    let b = a.matrix().pattern();
    // patterns of integer powers agree with boolean powers over the range
    let mut int_pow = a.matrix().clone();
    let mut bool_pow = b.clone();
    for _ in 0..c.cycle_start + c.cycle_length {
        if int_pow.pattern() != bool_pow {
            return false;
        }
        int_pow = int_pow.mul(a.matrix());
        bool_pow = bool_pow.mul(&b);
    }
    for k in 0..len {
        if !disjoint_with_negative(&c.positive[k], &c.negative[k]) {
            return false;
        }
        let next = (b.apply(&c.positive[k]), b.apply(&c.negative[k]));
        let j = if k + 1 < len { k + 1 } else { c.cycle_start - c.split_at };
        if next.0 != c.positive[j] || next.1 != c.negative[j] {
            return false;
        }
    }
    true
}
