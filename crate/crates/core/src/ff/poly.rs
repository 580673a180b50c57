//! Dense univariate polynomials over a `FieldDesc`, root finding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::field::{prime_factors, FieldDesc, FieldElem};

/// Seed used by [`roots_in_field`] when none is given.
pub const DEFAULT_SPLIT_SEED: u64 = 0x05ee_d0ff_1e1d;

/// Ascending coefficients, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElem::ONE)
    }

    pub fn constant(c: FieldElem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c * T^d`.
    pub fn monomial(c: FieldElem, d: usize) -> Poly {
        let mut coeffs = vec![FieldElem::ZERO; d + 1];
        coeffs[d] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `T - a`.
    pub fn linear(f: &FieldDesc, a: FieldElem) -> Poly {
        Poly::from_coeffs(vec![f.neg(a), FieldElem::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &FieldDesc) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, f: &FieldDesc) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: FieldElem, f: &FieldDesc) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &FieldDesc) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, x: FieldElem, f: &FieldDesc) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn monic(&self, f: &FieldDesc) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.leading()), f)
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly, f: &FieldDesc) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = f.inv(divisor.leading());
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, inv_lead);
            quot[i - dd] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, d));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &FieldDesc) -> Poly {
        self.divrem(divisor, f).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly, f: &FieldDesc) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &Poly, f: &FieldDesc) -> Poly {
        let mut base = self.rem(modulus, f);
        let mut acc = Poly::one().rem(modulus, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(modulus, f);
            }
            base = base.mul(&base, f).rem(modulus, f);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &FieldDesc) -> bool {
        let Some(k) = self.degree() else {
            return false;
        };
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let q = f.order();
        let t = Poly::monomial(FieldElem::ONE, 1);
        // T^{q^i} mod self, by repeated q-th powering.
        let frob_iter = |times: usize| -> Poly {
            let mut x = t.clone();
            for _ in 0..times {
                x = x.powmod(q, self, f);
            }
            x
        };
        if frob_iter(k).sub(&t, f).rem(self, f) != Poly::zero() {
            return false;
        }
        prime_factors(k as u64).into_iter().all(|r| {
            let h = frob_iter(k / r as usize).sub(&t, f);
            self.gcd(&h, f).degree() == Some(0)
        })
    }
}

/// Roots of `poly` lying in the field, ascending by encoding, each listed once.
pub fn roots_in_field(field: &FieldDesc, poly: &Poly) -> Result<Vec<FieldElem>> {
    roots_in_field_seeded(field, poly, DEFAULT_SPLIT_SEED)
}

/// Roots via `gcd(f, T^{|F|} - T)` and equal-degree splitting driven by a seeded PRNG.
pub fn roots_in_field_seeded(field: &FieldDesc, poly: &Poly, seed: u64) -> Result<Vec<FieldElem>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = poly.monic(field);
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let t = Poly::monomial(FieldElem::ONE, 1);
    let frob = t.powmod(field.order(), &f, field);
    let split = f.gcd(&frob.sub(&t, field), field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::new();
    split_linear(field, split, &mut rng, &mut roots);
    roots.sort();
    Ok(roots)
}

fn split_linear(field: &FieldDesc, g: Poly, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) {
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(field.neg(field.div(g.coeff(0), g.coeff(1))));
            return;
        }
        _ => {}
    }
    let deg = g.degree().unwrap();
    loop {
        let a = FieldElem(rng.gen_range(0..field.order()) as u32);
        let h = if field.characteristic() == 2 {
            // Tr(aT) = sum_{i < log2 |F|} (aT)^{2^i} mod g.
            let bits = field.order().trailing_zeros();
            let mut term = Poly::monomial(a, 1).rem(&g, field);
            let mut acc = term.clone();
            for _ in 1..bits {
                term = term.mul(&term, field).rem(&g, field);
                acc = acc.add(&term, field);
            }
            acc
        } else {
            let base = Poly::from_coeffs(vec![a, FieldElem::ONE]);
            base.powmod((field.order() - 1) / 2, &g, field)
                .sub(&Poly::one(), field)
        };
        let d = g.gcd(&h, field);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            let (other, _) = g.divrem(&d, field);
            split_linear(field, d, rng, out);
            split_linear(field, other.monic(field), rng, out);
            return;
        }
    }
}
