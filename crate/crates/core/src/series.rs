//! Truncated Laurent series in the local parameter `y` at the point at infinity.

use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::ff::{make_field, Field, FieldDesc, FieldElem};

/// A Laurent series known exactly for exponents below `cutoff()`.
///
/// Stored densely from `start`; the first stored coefficient is nonzero unless
/// the series is the zero series, which is empty with `start == cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    start: i64,
    coeffs: Vec<FieldElem>,
}

impl Series {
    pub fn zero(cutoff: i64) -> Series {
        Series {
            start: cutoff,
            coeffs: Vec::new(),
        }
    }

    /// `c * y^exp`, known below `cutoff`.
    pub fn monomial(c: FieldElem, exp: i64, cutoff: i64) -> Series {
        if c.is_zero() || exp >= cutoff {
            return Series::zero(cutoff);
        }
        let mut coeffs = vec![FieldElem::ZERO; (cutoff - exp) as usize];
        coeffs[0] = c;
        Series { start: exp, coeffs }
    }

    pub fn from_dense(start: i64, coeffs: Vec<FieldElem>) -> Series {
        let cutoff = start + coeffs.len() as i64;
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => Series::zero(cutoff),
            Some(i) => Series {
                start: start + i as i64,
                coeffs: coeffs[i..].to_vec(),
            },
        }
    }

    pub fn cutoff(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Valuation, or `None` if every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Lowest exponent that may carry a nonzero coefficient.
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Result<FieldElem> {
        if e >= self.cutoff() {
            return Err(Error::PrecisionTooLow {
                needed: e,
                available: self.cutoff(),
                context: "series coefficient".into(),
            });
        }
        Ok(self.coeff_or_zero(e))
    }

    /// Coefficient at `e`, zero outside the stored window (caller checks the cutoff).
    pub(crate) fn coeff_or_zero(&self, e: i64) -> FieldElem {
        if e < self.start || e >= self.cutoff() {
            FieldElem::ZERO
        } else {
            self.coeffs[(e - self.start) as usize]
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    pub fn truncate(&self, cutoff: i64) -> Series {
        if cutoff >= self.cutoff() {
            return self.clone();
        }
        if cutoff <= self.start {
            return Series::zero(cutoff);
        }
        Series::from_dense(
            self.start,
            self.coeffs[..(cutoff - self.start) as usize].to_vec(),
        )
    }

    /// Multiplication by `y^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            start: self.start + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: FieldElem, f: &FieldDesc) -> Series {
        if c.is_zero() {
            return Series::zero(self.cutoff());
        }
        Series {
            start: self.start,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self, f: &FieldDesc) -> Series {
        self.scale(f.neg(FieldElem::ONE), f)
    }

    fn combine(&self, other: &Series, op: impl Fn(FieldElem, FieldElem) -> FieldElem) -> Series {
        let cutoff = self.cutoff().min(other.cutoff());
        let start = self.start.min(other.start).min(cutoff);
        let coeffs = (start..cutoff)
            .map(|e| op(self.coeff_or_zero(e), other.coeff_or_zero(e)))
            .collect();
        Series::from_dense(start, coeffs)
    }

    pub fn add(&self, other: &Series, f: &FieldDesc) -> Series {
        self.combine(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Series, f: &FieldDesc) -> Series {
        self.combine(other, |a, b| f.sub(a, b))
    }

    pub fn mul(&self, other: &Series, f: &FieldDesc) -> Series {
        let start = self.start + other.start;
        let cutoff = (self.cutoff() + other.start).min(other.cutoff() + self.start);
        let len = (cutoff - start).max(0) as usize;
        let mut out = vec![FieldElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        if len == 0 {
            return Series::zero(cutoff);
        }
        Series::from_dense(start, out)
    }

    /// Inverse of a series with a known nonzero leading term.
    pub fn inv(&self, f: &FieldDesc) -> Result<Series> {
        let Some(v) = self.valuation() else {
            return Err(Error::PrecisionTooLow {
                needed: self.start,
                available: self.cutoff(),
                context: "inverse of a series with no known nonzero term".into(),
            });
        };
        let n = self.coeffs.len();
        let a0_inv = f.inv(self.coeffs[0]);
        let mut b = vec![FieldElem::ZERO; n];
        b[0] = a0_inv;
        for k in 1..n {
            let mut acc = FieldElem::ZERO;
            for i in 1..=k {
                let a = self.coeffs[i];
                if !a.is_zero() {
                    acc = f.add(acc, f.mul(a, b[k - i]));
                }
            }
            b[k] = f.neg(f.mul(a0_inv, acc));
        }
        Ok(Series::from_dense(-v, b))
    }

    pub fn pow(&self, mut e: u64, f: &FieldDesc) -> Series {
        let mut base = self.clone();
        let mut acc: Option<Series> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, f),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc.unwrap_or_else(|| Series::monomial(FieldElem::ONE, 0, self.cutoff() - self.start))
    }

    /// Formal derivative `d/dy`.
    pub fn derivative(&self, f: &FieldDesc) -> Series {
        let start = self.start - 1;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f.mul(c, f.from_int(self.start + i as i64)))
            .collect();
        Series::from_dense(start, coeffs)
    }

    /// Lowest exponent below both cutoffs where the series differ.
    pub fn first_difference(&self, other: &Series) -> Option<i64> {
        let cutoff = self.cutoff().min(other.cutoff());
        let start = self.start.min(other.start);
        (start..cutoff).find(|&e| self.coeff_or_zero(e) != other.coeff_or_zero(e))
    }
}

/// Relative precision needed by every bundle computation in scope.
pub fn required_precision(qe: u64) -> usize {
    let qe = qe as usize;
    2 * qe * (qe - 3) + 2 * qe + 50
}

/// Local expansions at infinity of the curve's coordinate functions.
#[derive(Clone, Debug)]
pub struct CurveSeries {
    pub field: Field,
    /// Relative precision (terms past the leading one) of every expansion.
    pub precision: usize,
    pub x: Series,
    pub z: Series,
    pub y1: Series,
    pub gamma: Series,
    pub alpha: Series,
    pub beta: Series,
    /// Fixed-point steps taken until two iterates agreed.
    pub iterations: usize,
}

pub fn expand_basics(params: CurveParams, precision: usize) -> Result<CurveSeries> {
    let qe = params.qe() as i64;
    let needed = required_precision(params.qe());
    if precision < needed {
        return Err(Error::PrecisionTooLow {
            needed: needed as i64,
            available: precision as i64,
            context: format!("expansion precision for qe = {qe}"),
        });
    }
    let field = make_field(params.p, 1)?;
    let f = &*field;
    let cutoff = qe + precision as i64;
    let leading = Series::monomial(FieldElem::ONE, qe, cutoff);
    let mut x = leading.clone();
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let next = leading
            .sub(&x.pow((qe - 1) as u64, f).shift(1), f)
            .truncate(cutoff);
        if next == x {
            break;
        }
        x = next;
    }
    let z = x.inv(f)?;
    let y1 = z.shift(1);
    let gamma = x.shift(-qe).pow((qe - 2) as u64, f).shift(1);
    let alpha_exp = params.alpha_exponent();
    let alpha = Series::monomial(FieldElem::ONE, alpha_exp, alpha_exp + precision as i64);
    let e = params.e as i64;
    let beta = Series::monomial(FieldElem::ONE, -e, -e + precision as i64);
    Ok(CurveSeries {
        field,
        precision,
        x,
        z,
        y1,
        gamma,
        alpha,
        beta,
        iterations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub first_failure: Option<i64>,
    pub checked_below: i64,
}

/// Checks `dy1/dy = z^{qe-2} dz/dy` and `z = alpha^q gamma + beta^q` as series.
pub fn verify_differential_identities(
    params: CurveParams,
    basics: &CurveSeries,
) -> Vec<IdentityCheck> {
    verify_differential_identities_with(params, basics, params.alpha_exponent())
}

/// Same checks, with `alpha = y^{alpha_exp}` substituted in the translation identity.
pub fn verify_differential_identities_with(
    params: CurveParams,
    basics: &CurveSeries,
    alpha_exp: i64,
) -> Vec<IdentityCheck> {
    let f = &*basics.field;
    let qe = params.qe();
    let q = params.q();
    let check = |name: &str, lhs: Series, rhs: Series| {
        let first = lhs.first_difference(&rhs);
        IdentityCheck {
            name: name.to_string(),
            pass: first.is_none(),
            first_failure: first,
            checked_below: lhs.cutoff().min(rhs.cutoff()),
        }
    };
    let dy1 = basics.y1.derivative(f);
    let rhs1 = basics.z.pow(qe - 2, f).mul(&basics.z.derivative(f), f);
    let alpha = Series::monomial(
        FieldElem::ONE,
        alpha_exp,
        alpha_exp + basics.precision as i64,
    );
    let rhs2 = alpha
        .pow(q, f)
        .mul(&basics.gamma, f)
        .add(&basics.beta.pow(q, f), f);
    vec![
        check("dy1 = z^(qe-2) dz", dy1, rhs1),
        check("z = alpha^q gamma + beta^q", basics.z.clone(), rhs2),
    ]
}
