//! Finite fields F_{p^k} with a deterministic defining polynomial.
//!
//! Elements are packed integers: the element `c_0 + c_1 T + ... + c_{k-1} T^{k-1}`
//! is stored as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. The prime subfield is
//! therefore the range `0..p`, and an element of F_p keeps its encoding when
//! viewed inside any extension built over the same `p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::poly::Poly;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

/// Fields up to this order get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;

pub type Field = Arc<FieldDesc>;

#[derive(
    Clone,
    Copy,
    Debug,
    Default,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    serde::Serialize,
    serde::Deserialize,
)]
#[serde(transparent)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer encoding.
    pub fn raw(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FieldDesc {
    p: u64,
    k: u32,
    order: u64,
    /// Monic modulus, ascending coefficients, length k + 1.
    modulus: Vec<u64>,
    /// Bit mask of the modulus below T^k (characteristic 2 only).
    mask2: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDesc")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldDesc {}

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

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Builds F_{p^k} with the smallest monic irreducible modulus of degree `k`.
///
/// Candidates `T^k + c_{k-1} T^{k-1} + ... + c_0` are scanned in increasing
/// order of `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, i.e. lexicographically with
/// the coefficient of `T^{k-1}` most significant.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::DegreeTooLarge {
            p,
            k,
            bound: MAX_FIELD_ORDER,
        });
    }
    let order = match p.checked_pow(k) {
        Some(o) if o <= MAX_FIELD_ORDER => o,
        _ => {
            return Err(Error::DegreeTooLarge {
                p,
                k,
                bound: MAX_FIELD_ORDER,
            })
        }
    };
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, k)
    };
    Ok(Arc::new(FieldDesc::with_modulus(p, k, order, modulus)))
}

fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let fp = FieldDesc::with_modulus(p, 1, p, vec![0, 1]);
    let count = p.pow(k);
    for n in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut rest = n;
        for _ in 0..k {
            coeffs.push(rest % p);
            rest /= p;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        let f = Poly::from_coeffs(coeffs.iter().map(|&c| FieldElem(c as u32)).collect());
        if f.is_irreducible(&fp) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl FieldDesc {
    fn with_modulus(p: u64, k: u32, order: u64, modulus: Vec<u64>) -> FieldDesc {
        let mask2 = if p == 2 {
            modulus[..k as usize]
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &c)| m | (c << i))
        } else {
            0
        };
        let mut desc = FieldDesc {
            p,
            k,
            order,
            modulus,
            mask2,
            tables: None,
        };
        if k > 1 && order <= TABLE_LIMIT {
            desc.tables = Some(desc.build_tables());
        }
        desc
    }

    fn build_tables(&self) -> Tables {
        let n = self.order - 1;
        let factors = prime_factors(n);
        let gen = (2..self.order)
            .map(|g| FieldElem(g as u32))
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(g, n / r) != FieldElem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = FieldElem::ONE;
        for i in 0..n as usize {
            exp[i] = acc.0;
            exp[i + n as usize] = acc.0;
            log[acc.0 as usize] = i as u32;
            acc = self.mul_slow(acc, gen);
        }
        Tables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The residue class of `T`.
    pub fn generator(&self) -> FieldElem {
        if self.k == 1 {
            FieldElem::ZERO
        } else {
            FieldElem(self.p as u32)
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.k as usize, "too many coefficients");
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c % self.p;
        }
        FieldElem(v as u32)
    }

    /// Coefficient vector of length `k`, ascending.
    pub fn to_coeffs(&self, a: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = a.0 as u64;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(|v| FieldElem(v as u32))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 + b.0 as u64) % self.p) as u32);
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 + self.p - b.0 as u64) % self.p) as u32);
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(FieldElem::ZERO, a)
    }

    fn digitwise(
        &self,
        a: FieldElem,
        b: FieldElem,
        op: impl Fn(u64, u64, u64) -> u64,
    ) -> FieldElem {
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            out += op(x % self.p, y % self.p, self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out as u32)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p) as u32);
        }
        if let Some(t) = &self.tables {
            let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return FieldElem(t.exp[i]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let k = self.k as usize;
        if self.p == 2 {
            let (x, y) = (a.0 as u64, b.0 as u64);
            let mut prod = 0u64;
            for i in 0..k {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            for i in (k..2 * k - 1).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= 1 << i;
                    prod ^= self.mask2 << (i - k);
                }
            }
            return FieldElem(prod as u32);
        }
        let p = self.p;
        let da = self.to_coeffs(a);
        let db = self.to_coeffs(b);
        let mut r = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            r[i] = 0;
            for j in 0..k {
                let m = self.modulus[j];
                r[i - k + j] = (r[i - k + j] + (p - c) * m) % p;
            }
        }
        self.from_coeffs(&r[..k])
    }

    fn pow_slow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let l = (t.log[a.0 as usize] as u64 * (e % n)) % n;
            return FieldElem(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(!a.is_zero(), "inverse of zero");
        if let Some(t) = &self.tables {
            let n = (self.order - 1) as usize;
            return FieldElem(t.exp[(n - t.log[a.0 as usize] as usize) % n]);
        }
        self.pow(a, self.order - 2)
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Whether `a` lies in the subfield F_{p^d}.
    pub fn in_subfield(&self, a: FieldElem, d: u32) -> bool {
        let mut x = a;
        for _ in 0..d {
            x = self.frobenius(x);
        }
        x == a
    }

    /// Exponent `n` with `q = p^n`, if any.
    pub fn p_power_exponent(&self, q: u64) -> Result<u32> {
        let mut n = 0u32;
        let mut v = q;
        while v > 1 && v.is_multiple_of(self.p) {
            v /= self.p;
            n += 1;
        }
        if v != 1 || n == 0 {
            return Err(Error::NotPPower { q, p: self.p });
        }
        Ok(n)
    }

    /// The unique `b` with `b^q = a`, via `n` applications of `x -> x^{p^{k-1}}`.
    pub fn qth_root(&self, a: FieldElem, q: u64) -> Result<FieldElem> {
        let n = self.p_power_exponent(q)?;
        let steps = (n % self.k) as usize;
        let mut x = a;
        for _ in 0..steps {
            x = self.pow(x, self.p.pow(self.k - 1));
        }
        Ok(x)
    }

    pub fn describe(&self) -> String {
        if self.k == 1 {
            format!("F_{}", self.p)
        } else {
            format!("F_{}^{}", self.p, self.k)
        }
    }
}

/// Binomial coefficient reduced mod `p` (Lucas).
pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..ki {
            c = c * (ni - i) % p;
        }
        let mut d = 1u64;
        for i in 1..=ki {
            d = d * i % p;
        }
        c = c * mod_pow(d, p - 2, p) % p;
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}
