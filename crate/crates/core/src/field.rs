//! Small finite fields GF(p^t), t in {1, 2, 3}.
//!
//! Elements are coefficient vectors over GF(p) in the basis `1, x, x^2`, where
//! `x` is a root of the reduction polynomial. The reduction polynomial and the
//! multiplicative generator are both found by deterministic scans, so a given
//! `(p, t)` always produces the same field presentation.

use thiserror::Error;

/// Largest field order `p^t` accepted by [`make_field`].
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} unsupported (expected 1, 2 or 3)")]
    BadDegree(usize),
    #[error("field order {p}^{t} exceeds {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, t: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coeffs: [u64; 3],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { coeffs: [0; 3] };

    pub fn constant(c: u64) -> Self {
        FieldElement { coeffs: [c, 0, 0] }
    }

    /// `a * x + b`, the shape used by the Bose and Singer constructions.
    pub fn linear(a: u64, b: u64) -> Self {
        FieldElement { coeffs: [b, a, 0] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 3]
    }
}

/// Field presentation: prime, degree, monic reduction polynomial and generator.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    degree: usize,
    /// Low-order coefficients of the monic reduction polynomial, length `degree`.
    reduction: Vec<u64>,
    generator: FieldElement,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn make_field(p: u64, t: usize) -> Result<FieldCtx, FieldError> {
    if !(1..=3).contains(&t) {
        return Err(FieldError::BadDegree(t));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let order = (p as u128).pow(t as u32);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(FieldError::TooLarge { p, t });
    }

    // Degree 1 is always irreducible; degrees 2 and 3 are irreducible iff rootless.
    let reduction = if t == 1 {
        [0; 3]
    } else {
        (0..order as u64)
            .map(|code| decode(code, p, t))
            .find(|low| (0..p).all(|x| eval_monic(low, t, x, p) != 0))
            .expect("an irreducible polynomial of every degree exists")
    };

    let mut ctx = FieldCtx {
        p,
        degree: t,
        reduction: reduction[..t].to_vec(),
        generator: FieldElement::constant(1),
    };
    let group_order = order as u64 - 1;
    let factors = prime_factors(group_order);
    let generator = (1..order as u64)
        .map(|code| ctx.decode_element(code))
        .find(|&g| {
            factors
                .iter()
                .all(|&q| ctx.pow(g, group_order / q) != FieldElement::constant(1))
        })
        .expect("multiplicative group of a finite field is cyclic");
    ctx.generator = generator;
    Ok(ctx)
}

fn decode(mut code: u64, p: u64, t: usize) -> [u64; 3] {
    let mut out = [0u64; 3];
    for c in out.iter_mut().take(t) {
        *c = code % p;
        code /= p;
    }
    out
}

fn eval_monic(low: &[u64; 3], t: usize, x: u64, p: u64) -> u64 {
    let mut v = 1u64;
    for i in (0..t).rev() {
        v = (v * x + low[i]) % p;
    }
    v
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    /// Coefficients of the monic reduction polynomial, lowest degree first,
    /// including the leading 1.
    pub fn reduction_poly(&self) -> Vec<u64> {
        let mut v = self.reduction.clone();
        v.push(1);
        v
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::constant(1 % self.p)
    }

    pub fn encode(&self, e: FieldElement) -> u64 {
        let mut code = 0;
        for i in (0..self.degree).rev() {
            code = code * self.p + e.coeffs[i];
        }
        code
    }

    pub fn decode_element(&self, code: u64) -> FieldElement {
        FieldElement {
            coeffs: decode(code, self.p, self.degree),
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut c = [0u64; 3];
        for (i, ci) in c.iter_mut().enumerate().take(self.degree) {
            *ci = (a.coeffs[i] + b.coeffs[i]) % self.p;
        }
        FieldElement { coeffs: c }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut c = [0u64; 3];
        for (i, ci) in c.iter_mut().enumerate().take(self.degree) {
            *ci = (self.p - a.coeffs[i]) % self.p;
        }
        FieldElement { coeffs: c }
    }

    pub fn scale(&self, k: u64, a: FieldElement) -> FieldElement {
        let k = k % self.p;
        let mut c = [0u64; 3];
        for (i, ci) in c.iter_mut().enumerate().take(self.degree) {
            *ci = k * a.coeffs[i] % self.p;
        }
        FieldElement { coeffs: c }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (p, t) = (self.p, self.degree);
        let mut prod = [0u64; 5];
        for i in 0..t {
            for j in 0..t {
                prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % p;
            }
        }
        // x^t = -(reduction[0] + ... + reduction[t-1] x^{t-1})
        for d in (t..2 * t - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &r) in self.reduction.iter().enumerate() {
                let sub = c * r % p;
                prod[d - t + k] = (prod[d - t + k] + p - sub) % p;
            }
        }
        let mut coeffs = [0u64; 3];
        coeffs[..t].copy_from_slice(&prod[..t]);
        FieldElement { coeffs }
    }

    pub fn pow(&self, mut base: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Full table of powers of the generator and its inverse map.
#[derive(Clone, Debug)]
pub struct DlogTable {
    exp: Vec<u64>,
    log: Vec<Option<u64>>,
    ctx: FieldCtx,
}

impl DlogTable {
    /// Exponent `k` in `[0, q - 1)` with `generator^k = e`; `None` for zero.
    pub fn log(&self, e: FieldElement) -> Option<u64> {
        self.log[self.ctx.encode(e) as usize]
    }

    pub fn exp(&self, k: u64) -> FieldElement {
        let period = self.exp.len() as u64;
        self.ctx.decode_element(self.exp[(k % period) as usize])
    }

    /// Multiplicative group order `q - 1`.
    pub fn period(&self) -> u64 {
        self.exp.len() as u64
    }
}

pub fn discrete_log_table(ctx: &FieldCtx) -> DlogTable {
    let q = ctx.order();
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut log = vec![None; q as usize];
    let mut cur = ctx.one();
    for k in 0..q - 1 {
        let code = ctx.encode(cur);
        debug_assert!(log[code as usize].is_none(), "generator order too small");
        log[code as usize] = Some(k);
        exp.push(code);
        cur = ctx.mul(cur, ctx.generator);
    }
    DlogTable {
        exp,
        log,
        ctx: ctx.clone(),
    }
}
