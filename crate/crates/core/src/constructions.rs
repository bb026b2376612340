//! Explicit and randomized constructions of B*[g] and B*[g] (mod n) sets.
//!
//! Every explicit construction returns a [`ConstructionReport`] whose `verified`
//! flag comes from recomputing the representation counts of the output, never
//! from the construction's own claim.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{discrete_log_table, is_prime, make_field, FieldElement, FieldError};
use crate::sets::{max_rep, IntSet, SetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// What the range number in a report means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeKind {
    /// Sums are taken mod this number.
    Modulus,
    /// The set lies inside `{1, ..., n}` (or `[0, n)` for the small-g witness).
    Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: String,
    pub params: BTreeMap<String, i64>,
    pub set: IntSet,
    pub claimed_g: u64,
    pub range_kind: RangeKind,
    pub claimed_modulus_or_range: u64,
    pub max_rep: u64,
    pub verified: bool,
}

impl ConstructionReport {
    fn finish(
        construction: &str,
        params: &[(&str, i64)],
        set: IntSet,
        claimed_g: u64,
        range_kind: RangeKind,
        range: u64,
    ) -> Self {
        let achieved = max_rep(&set);
        let in_range = match range_kind {
            RangeKind::Modulus => set.modulus() == Some(range),
            RangeKind::Interval => set.max().is_none_or(|m| m <= range),
        };
        ConstructionReport {
            construction: construction.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            set,
            claimed_g,
            range_kind,
            claimed_modulus_or_range: range,
            max_rep: achieved,
            verified: achieved <= claimed_g && in_range,
        }
    }
}

fn check_prime_k(p: u64, k: u64) -> Result<(), ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::BadParams(format!("{p} is not prime")));
    }
    if k == 0 || k >= p {
        return Err(ConstructionError::BadParams(format!(
            "need 1 <= k < p, got k={k}, p={p}"
        )));
    }
    Ok(())
}

/// The `k` blocks of the Ruzsa-type construction mod `p(p-1)`, one per
/// multiplier `i = 1..=k`. Block `i` holds the CRT solutions of
/// `a = t (mod p-1)`, `a = i * r^t (mod p)` for `t = 1..p-1`, with `r` a
/// primitive root.
pub fn ruzsa_blocks(p: u64, k: u64) -> Result<Vec<Vec<u64>>, ConstructionError> {
    check_prime_k(p, k)?;
    let field = make_field(p, 1)?;
    let root = field.generator().coeffs[0];
    let n = p * (p - 1);
    let mut blocks = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let mut block = Vec::with_capacity((p - 1) as usize);
        let mut power = 1u64;
        for t in 1..p {
            power = power * root % p;
            let target = i * power % p;
            // a = t + (p-1) m with a = target mod p; (p-1) = -1 mod p so m = t - target.
            let m = (t + p - target) % p;
            block.push((t + (p - 1) * m) % n);
        }
        blocks.push(block);
    }
    Ok(blocks)
}

pub fn ruzsa_sets(p: u64, k: u64) -> Result<ConstructionReport, ConstructionError> {
    let blocks = ruzsa_blocks(p, k)?;
    let n = p * (p - 1);
    let set = IntSet::modular(blocks.into_iter().flatten(), n)?;
    Ok(ConstructionReport::finish(
        "ruzsa",
        &[("p", p as i64), ("k", k as i64)],
        set,
        2 * k * k,
        RangeKind::Modulus,
        n,
    ))
}

pub fn bose_sets(p: u64, k: u64) -> Result<ConstructionReport, ConstructionError> {
    check_prime_k(p, k)?;
    let field = make_field(p, 2)?;
    let dl = discrete_log_table(&field);
    let n = p * p - 1;
    let mut elements = Vec::with_capacity((k * p) as usize);
    for i in 1..=k {
        for s in 0..p {
            let e = dl
                .log(FieldElement::linear(i, s))
                .expect("i * theta + s is nonzero for i != 0");
            elements.push(e % n);
        }
    }
    let set = IntSet::modular(elements, n)?;
    Ok(ConstructionReport::finish(
        "bose",
        &[("p", p as i64), ("k", k as i64)],
        set,
        2 * k * k,
        RangeKind::Modulus,
        n,
    ))
}

/// The perfect difference set mod `p^2+p+1`: `{0}` together with the
/// exponents `s'` with `theta^{s'} = theta + s`, reduced mod `p^2+p+1`.
pub fn singer_line(p: u64) -> Result<Vec<u64>, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::BadParams(format!("{p} is not prime")));
    }
    let field = make_field(p, 3)?;
    let dl = discrete_log_table(&field);
    let n = p * p + p + 1;
    let mut line = vec![0u64];
    for s in 0..p {
        let e = dl
            .log(FieldElement::linear(1, s))
            .expect("theta + s is nonzero");
        line.push(e % n);
    }
    line.sort_unstable();
    Ok(line)
}

/// Union of `k` translates `D - d` of the perfect difference set `D`, one for
/// each of its `k` smallest elements `d`. Every translate contains 0 and two
/// distinct translates meet only there, so the union has `kp + 1` elements.
///
/// Using the blocks `theta^{s'} = i theta + s` directly does not work for
/// `k > 1`: scalars of the prime field have logarithms divisible by
/// `p^2+p+1`, so every block reduces to the same residues.
pub fn singer_sets(p: u64, k: u64) -> Result<ConstructionReport, ConstructionError> {
    check_prime_k(p, k)?;
    let line = singer_line(p)?;
    let n = p * p + p + 1;
    let elements = line[..k as usize]
        .iter()
        .flat_map(|&d| line.iter().map(move |&x| (x + n - d) % n));
    let set = IntSet::reduced(elements, n)?;
    Ok(ConstructionReport::finish(
        "singer",
        &[("p", p as i64), ("k", k as i64)],
        set,
        2 * k * k,
        RangeKind::Modulus,
        n,
    ))
}

/// `M + yS (mod xy)` for `S` mod `x` and `M` mod `y`, claimed B*[g h].
pub fn compose_mod(
    s: &IntSet,
    g: u64,
    m: &IntSet,
    h: u64,
) -> Result<ConstructionReport, ConstructionError> {
    let (x, y) = match (s.modulus(), m.modulus()) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(ConstructionError::BadParams(
                "both sets must carry a modulus".into(),
            ))
        }
    };
    if x.gcd(&y) != 1 {
        return Err(ConstructionError::NotCoprime(x, y));
    }
    let n = x * y;
    let elements = m
        .elements()
        .iter()
        .flat_map(|&mi| s.elements().iter().map(move |&si| (mi + y * si) % n));
    let set = IntSet::modular(elements, n)?;
    Ok(ConstructionReport::finish(
        "compose_mod",
        &[
            ("x", x as i64),
            ("y", y as i64),
            ("g", g as i64),
            ("h", h as i64),
        ],
        set,
        g * h,
        RangeKind::Modulus,
        n,
    ))
}

/// Rotates a modular set into `{1, ..., y}` so that its largest element is as
/// small as possible: the element following the widest cyclic gap goes to 1.
pub fn shift_to_minimize_max(m: &IntSet) -> Result<Vec<u64>, ConstructionError> {
    let y = m
        .modulus()
        .ok_or_else(|| ConstructionError::BadParams("M must carry a modulus".into()))?;
    let el = m.elements();
    if el.is_empty() {
        return Ok(Vec::new());
    }
    let len = el.len();
    let mut best = (0u64, 0usize);
    for i in 0..len {
        let gap = if i + 1 < len {
            el[i + 1] - el[i]
        } else {
            el[0] + y - el[len - 1]
        };
        if gap > best.0 {
            best = (gap, (i + 1) % len);
        }
    }
    let start = el[best.1];
    let mut out: Vec<u64> = el.iter().map(|&e| (e + y - start) % y + 1).collect();
    out.sort_unstable();
    Ok(out)
}

/// Integer B*[g h] set of size `|S||M|` built from an integer B*[g] set `S`
/// and a B*[h] (mod y) set `M`. `S` is first translated to start at 0; the
/// result lies in `[1, y s + 1 - ceil(y/|M|)]` where `s = max S - min S + 1`.
pub fn half_modular(
    s: &IntSet,
    g: u64,
    m: &IntSet,
    h: u64,
) -> Result<ConstructionReport, ConstructionError> {
    if s.modulus().is_some() {
        return Err(ConstructionError::BadParams("S must be an integer set".into()));
    }
    let y = m
        .modulus()
        .ok_or_else(|| ConstructionError::BadParams("M must carry a modulus".into()))?;
    if s.is_empty() || m.is_empty() {
        return Err(ConstructionError::BadParams("S and M must be nonempty".into()));
    }
    let lo = s.min().unwrap();
    let span = s.max().unwrap() - lo + 1;
    let shifted = shift_to_minimize_max(m)?;
    let elements = shifted
        .iter()
        .flat_map(|&mi| s.elements().iter().map(move |&si| mi + y * (si - lo)));
    let set = IntSet::integer(elements)?;
    let bound = y * span + 1 - y.div_ceil(m.len() as u64);
    Ok(ConstructionReport::finish(
        "half_modular",
        &[
            ("y", y as i64),
            ("s", span as i64),
            ("g", g as i64),
            ("h", h as i64),
        ],
        set,
        g * h,
        RangeKind::Interval,
        bound,
    ))
}

/// `[0, a) ∪ {g - a + 2j : 0 <= j < b} ∪ [g, g + a) ∪ (2g - a, 3g - a]` with
/// `a = floor(g/3)`, `b = floor(g/6)`: a B*[g] set of size `g + 2a + b` inside
/// `[0, 3g - a]`.
pub fn small_gn_witness(g: u64) -> Result<ConstructionReport, ConstructionError> {
    if g == 0 {
        return Err(ConstructionError::BadParams("g must be positive".into()));
    }
    let a = g / 3;
    let b = g / 6;
    let mut elements: Vec<u64> = (0..a).collect();
    elements.extend((0..b).map(|j| g - a + 2 * j));
    elements.extend(g..g + a);
    elements.extend(2 * g - a + 1..=3 * g - a);
    let set = IntSet::integer(elements)?;
    Ok(ConstructionReport::finish(
        "small_gn",
        &[("g", g as i64)],
        set,
        g,
        RangeKind::Interval,
        3 * g - a,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbConstructReport {
    pub construction: String,
    pub set: IntSet,
    pub n: u64,
    pub seed: u64,
    /// Target representation bound (the integer construction only).
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub achieved_g: u64,
    /// Leading-order size prediction.
    pub expected_size: f64,
    /// Exact expectation of `|S|` under the sampling probabilities.
    pub exact_mean_size: f64,
    /// Variance of `|S|` under the sampling probabilities.
    pub size_variance: f64,
    /// Elements below this threshold are always included.
    pub a0: f64,
    pub pk_rule: String,
}

/// Includes each residue of `Z/nZ` independently with probability `epsilon`.
pub fn random_circle_set(
    n: u64,
    epsilon: f64,
    seed: u64,
) -> Result<ProbConstructReport, ConstructionError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(ConstructionError::BadParams(format!("n must be odd, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(ConstructionError::BadParams(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<u64> = (1..=n)
        .filter(|_| rng.gen_bool(epsilon))
        .map(|i| i % n)
        .collect();
    let set = IntSet::reduced(elements, n)?;
    let achieved_g = max_rep(&set);
    let nf = n as f64;
    Ok(ProbConstructReport {
        construction: "random_circle".into(),
        set,
        n,
        seed,
        gamma: None,
        epsilon: Some(epsilon),
        achieved_g,
        expected_size: epsilon * nf,
        exact_mean_size: epsilon * nf,
        size_variance: epsilon * (1.0 - epsilon) * nf,
        a0: 0.0,
        pk_rule: "constant".into(),
    })
}

/// Inclusion probability of `k` in the integer construction: 1 below
/// `gamma/pi`, `sqrt(gamma/(pi k))` above.
pub fn integer_inclusion_probability(k: u64, gamma: f64) -> f64 {
    let a0 = gamma / PI;
    let kf = k as f64;
    if kf < a0 {
        1.0
    } else {
        (a0 / kf).sqrt().min(1.0)
    }
}

/// `2 sqrt(gamma n / pi) - gamma / pi`, the size prediction without its O(1) term.
pub fn integer_expected_size(n: u64, gamma: f64) -> f64 {
    2.0 * (gamma * n as f64 / PI).sqrt() - gamma / PI
}

pub fn random_integer_set(
    n: u64,
    gamma: f64,
    seed: u64,
) -> Result<ProbConstructReport, ConstructionError> {
    if !(gamma >= PI) || (n as f64) < gamma {
        return Err(ConstructionError::BadParams(format!(
            "need n >= gamma >= pi, got n={n}, gamma={gamma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::new();
    let (mut mean, mut var) = (0.0, 0.0);
    for k in 1..=n {
        let p = integer_inclusion_probability(k, gamma);
        mean += p;
        var += p * (1.0 - p);
        if rng.gen_bool(p) {
            elements.push(k);
        }
    }
    let set = IntSet::integer(elements)?;
    let achieved_g = max_rep(&set);
    Ok(ProbConstructReport {
        construction: "random_integer".into(),
        set,
        n,
        seed,
        gamma: Some(gamma),
        epsilon: None,
        achieved_g,
        expected_size: integer_expected_size(n, gamma),
        exact_mean_size: mean,
        size_variance: var,
        a0: gamma / PI,
        pk_rule: "sqrt(gamma/(pi k)) for k >= gamma/pi, else 1".into(),
    })
}
