//! Exact univariate polynomials over the rationals, with rational-root
//! splitting analysis.
//!
//! Coefficients are arbitrary-precision rationals; every operation is exact.
//! The splitting routine repeatedly extracts rational roots from the primitive
//! integer form of the polynomial and reports whether the residual factor is
//! constant.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Polynomial stored as `coeffs[k]` = coefficient of `X^k`; the leading
/// coefficient is nonzero unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// `X - root` as a monic linear polynomial.
    pub fn linear_root(root: &BigRational) -> Self {
        RatPoly {
            coeffs: vec![-root.clone(), BigRational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        RatPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Monomial `c * X^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        RatPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        RatPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    /// `p(-X)`.
    pub fn compose_neg(&self) -> RatPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        RatPoly::from_coeffs(coeffs)
    }

    /// Euclidean division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let piece = divisor.mul(&RatPoly::monomial(factor, shift));
            rem = rem.sub(&piece);
        }
        (RatPoly::from_coeffs(quot), rem)
    }

    /// `Π (X - roots[i])` times `lead`.
    pub fn from_roots(lead: BigRational, roots: &[BigRational]) -> RatPoly {
        let mut p = RatPoly::constant(lead);
        for root in roots {
            p = p.mul(&RatPoly::linear_root(root));
        }
        p
    }

    /// Clears denominators and removes integer content, preserving the sign of
    /// the leading coefficient. Returns the primitive integer coefficients.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = num::integer::gcd(content, v.clone());
        }
        if !content.is_zero() {
            for v in &mut ints {
                *v /= &content;
            }
        }
        if ints.last().map(|v| v.is_negative()).unwrap_or(false) {
            for v in &mut ints {
                *v = -v.clone();
            }
        }
        ints
    }

    /// Extracts all rational roots (with multiplicity) and the residual factor
    /// with no rational root.
    pub fn split_over_q(&self) -> SplitReport {
        assert!(!self.is_zero(), "splitting analysis needs a nonzero polynomial");
        let mut residual = self.clone();
        let mut roots: Vec<(BigRational, usize)> = Vec::new();

        // X | p corresponds to the root 0.
        let mut zero_mult = 0usize;
        while !residual.is_zero() && residual.coeff(0).is_zero() && residual.degree() != Some(0) {
            residual = residual.div_rem(&RatPoly::monomial(BigRational::one(), 1)).0;
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((BigRational::zero(), zero_mult));
        }

        while residual.degree().map(|d| d >= 1).unwrap_or(false) {
            match find_rational_root(&residual) {
                Some(root) => {
                    let lin = RatPoly::linear_root(&root);
                    let mut mult = 0usize;
                    loop {
                        let (q, r) = residual.div_rem(&lin);
                        if r.is_zero() {
                            residual = q;
                            mult += 1;
                        } else {
                            break;
                        }
                    }
                    roots.push((root, mult));
                }
                None => break,
            }
        }

        roots.sort_by(|a, b| a.0.cmp(&b.0));
        let splits = residual.degree() == Some(0);
        let report = SplitReport {
            poly: self.clone(),
            splits,
            roots,
            residual,
        };
        debug_assert!(report.reconstructs());
        report
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{}", k)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Result of the rational-root splitting analysis.
#[derive(Debug, Clone)]
pub struct SplitReport {
    pub poly: RatPoly,
    pub splits: bool,
    /// Rational roots with multiplicities, sorted ascending.
    pub roots: Vec<(BigRational, usize)>,
    /// Factor left after removing all rational roots; constant iff `splits`.
    pub residual: RatPoly,
}

impl SplitReport {
    /// Product of the extracted linear factors and the residual reproduces the
    /// input exactly.
    pub fn reconstructs(&self) -> bool {
        let mut prod = self.residual.clone();
        for (root, mult) in &self.roots {
            for _ in 0..*mult {
                prod = prod.mul(&RatPoly::linear_root(root));
            }
        }
        prod == self.poly
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "splits": self.splits,
            "roots": self
                .roots
                .iter()
                .map(|(r, m)| serde_json::json!({ "root": r.to_string(), "mult": m }))
                .collect::<Vec<_>>(),
            "residual": self.residual.to_string(),
        })
    }
}

/// Serializable form used by the CLI: integer numerator coefficients over one
/// common denominator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub num_coeffs: Vec<String>,
    pub den: String,
}

impl PolyJson {
    pub fn of(p: &RatPoly) -> PolyJson {
        let mut den = BigInt::one();
        for c in p.coeffs() {
            den = num::integer::lcm(den, c.denom().clone());
        }
        PolyJson {
            num_coeffs: p
                .coeffs()
                .iter()
                .map(|c| (c.numer() * (&den / c.denom())).to_string())
                .collect(),
            den: den.to_string(),
        }
    }
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; inputs here come from primitive forms of desk-scale
    // polynomials, so the factor sizes stay modest.
    let mut n = n.abs();
    assert!(!n.is_zero());
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    }
    divs.sort();
    divs
}

/// One rational root of the primitive integer form, if any (rational root
/// theorem: numerator divides the constant term, denominator the leading one).
fn find_rational_root(p: &RatPoly) -> Option<BigRational> {
    let ints = p.primitive_int();
    debug_assert!(ints.len() >= 2 && !ints[0].is_zero());
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    for num_div in positive_divisors(&a0) {
        for den_div in positive_divisors(&an) {
            if num::integer::gcd(num_div.clone(), den_div.clone()) != BigInt::one() {
                continue;
            }
            for sign in [1i32, -1] {
                let cand = BigRational::new(&num_div * BigInt::from(sign), den_div.clone());
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}
