// Copyright 2026 The qacc-lab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Sparse multivariate polynomials with arbitrary-precision coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Exponent vector `k = (k_1, ..., k_m)`.
pub type Exponents = Vec<u32>;

/// A polynomial in `Z[y_1, ..., y_m]`.
///
/// Terms are kept in lexicographic exponent order and zero coefficients are
/// never stored, so two equal polynomials are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    arity: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl IntPoly {
    pub fn zero(arity: usize) -> Self {
        IntPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigInt::one())
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c.into());
        p
    }

    /// The monomial `y_index`.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable index {index} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[index] = 1;
        let mut p = Self::zero(arity);
        p.add_term(e, BigInt::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; repeated
    /// exponent vectors are merged.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (BigInt, Exponents)>,
    {
        let mut p = Self::zero(arity);
        for (c, e) in terms {
            if e.len() != arity {
                return Err(AlgebraError::ArityMismatch { expected: arity, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| e.iter().all(|&k| k == 0) && c.is_one())
    }

    /// Returns the constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree `max |k|`; the zero polynomial has degree `None`.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.arity);
        }
        IntPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.arity);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same arity");
        }
        acc
    }

    /// Exact division by an integer; `None` unless every coefficient is divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            terms.insert(e.clone(), c / d);
        }
        Some(IntPoly { arity: self.arity, terms })
    }

    /// Evaluates at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.arity, "evaluation point has wrong arity");
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.arity, "evaluation point has wrong arity");
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, &k) in point.iter().zip(e) {
                t *= x.powu(k);
            }
            acc += t;
        }
        acc
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Human-readable form using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

struct PolyDisplay<'a> {
    poly: &'a IntPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    let name = self.names.get(v).cloned().unwrap_or_else(|| format!("y{}", v + 1));
                    if k == 1 { name } else { format!("{name}^{k}") }
                })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// A polynomial with rational coefficients, used for interpolation bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    arity: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl RatPoly {
    pub fn zero(arity: usize) -> Self {
        RatPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// `a_0 + a_1 y_1 + ... + a_m y_m`.
    pub fn affine(constant: BigRational, linear: &[BigRational]) -> Self {
        let arity = linear.len();
        let mut p = Self::constant(arity, constant);
        for (i, a) in linear.iter().enumerate() {
            let mut e = vec![0; arity];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.arity);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Converts to an integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        let mut p = IntPoly::zero(self.arity);
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            p.add_term(e.clone(), c.to_integer());
        }
        Some(p)
    }
}

/// Exact coefficient-wise sum of a sequence of polynomials sharing `arity`.
pub fn ipoly_iterated_sum(arity: usize, polys: &[IntPoly]) -> Result<IntPoly, AlgebraError> {
    let mut acc = IntPoly::zero(arity);
    for p in polys {
        if p.arity != arity {
            return Err(AlgebraError::ArityMismatch { expected: arity, found: p.arity });
        }
        for (e, c) in &p.terms {
            acc.add_term(e.clone(), c.clone());
        }
    }
    Ok(acc)
}

/// Product by sequential convolution. Reference path for the interpolated product.
pub fn ipoly_direct_product(arity: usize, polys: &[IntPoly]) -> Result<IntPoly, AlgebraError> {
    let mut acc = IntPoly::one(arity);
    for p in polys {
        if p.arity != arity {
            return Err(AlgebraError::ArityMismatch { expected: arity, found: p.arity });
        }
        acc = acc.try_mul(p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(arity: usize, terms: &[(i64, &[u32])]) -> IntPoly {
        IntPoly::from_terms(arity, terms.iter().map(|(c, e)| (BigInt::from(*c), e.to_vec()))).unwrap()
    }

    #[test]
    fn sum_cancels_coefficients() {
        let a = p(1, &[(1, &[0]), (1, &[1])]);
        let b = p(1, &[(1, &[0]), (-1, &[1])]);
        let s = ipoly_iterated_sum(1, &[a, b]).unwrap();
        assert_eq!(s, IntPoly::constant(1, 2));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn empty_sum_and_product() {
        assert!(ipoly_iterated_sum(2, &[]).unwrap().is_zero());
        assert!(ipoly_direct_product(2, &[]).unwrap().is_one());
    }

    #[test]
    fn difference_of_squares_twice() {
        let a = p(1, &[(1, &[0]), (1, &[1])]);
        let b = p(1, &[(1, &[0]), (-1, &[1])]);
        let c = p(1, &[(1, &[0]), (1, &[2])]);
        let prod = ipoly_direct_product(1, &[a.clone(), b, c]).unwrap();
        assert_eq!(prod, p(1, &[(1, &[0]), (-1, &[4])]));
        assert_eq!(ipoly_direct_product(1, std::slice::from_ref(&a)).unwrap(), a);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let a = IntPoly::var(2, 0);
        let b = IntPoly::var(1, 0);
        assert!(matches!(
            ipoly_iterated_sum(2, &[a.clone(), b.clone()]),
            Err(AlgebraError::ArityMismatch { .. })
        ));
        assert!(ipoly_direct_product(2, &[a, b]).is_err());
    }

    #[test]
    fn display_is_readable() {
        let a = p(2, &[(3, &[2, 1]), (-1, &[0, 0])]);
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(a.display_with(&names).to_string(), "3*a^2*b - 1");
    }

    #[test]
    fn eval_int_matches_hand_value() {
        let a = p(2, &[(3, &[2, 1]), (-1, &[0, 0])]);
        assert_eq!(a.eval_int(&[BigInt::from(2), BigInt::from(5)]), BigInt::from(59));
    }
}
