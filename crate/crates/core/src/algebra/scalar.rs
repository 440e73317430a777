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

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::context::{AlgebraContext, ContextRef};
use super::poly::IntPoly;
use super::AlgebraError;

/// An element `s / u^r` of the coefficient field `F = Q(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FScalar {
    pub numerator: IntPoly,
    pub denom_power: u32,
}

impl FScalar {
    pub fn new(numerator: IntPoly, denom_power: u32) -> Self {
        let denom_power = if numerator.is_zero() { 0 } else { denom_power };
        FScalar { numerator, denom_power }
    }

    pub fn zero(arity: usize) -> Self {
        FScalar { numerator: IntPoly::zero(arity), denom_power: 0 }
    }

    /// Numerator rescaled to denominator `u^target`; `target >= denom_power`.
    pub fn numerator_at(&self, target: u32, u: &IntPoly) -> IntPoly {
        assert!(target >= self.denom_power);
        self.numerator.try_mul(&u.pow(target - self.denom_power)).expect("same arity")
    }

    /// Value equality after bringing both sides to a common denominator.
    pub fn equals(&self, other: &Self, u: &IntPoly) -> bool {
        let r = self.denom_power.max(other.denom_power);
        self.numerator_at(r, u) == other.numerator_at(r, u)
    }
}

/// `s/u^a + t/u^b`, normalized to `u^max(a,b)`.
pub fn f_add(a: &FScalar, b: &FScalar, u: &IntPoly) -> FScalar {
    let r = a.denom_power.max(b.denom_power);
    let num = a.numerator_at(r, u).try_add(&b.numerator_at(r, u)).expect("same arity");
    FScalar::new(num, r)
}

/// `(s/u^a)(t/u^b) = st/u^(a+b)`.
pub fn f_mul(a: &FScalar, b: &FScalar) -> FScalar {
    FScalar::new(a.numerator.try_mul(&b.numerator).expect("same arity"), a.denom_power + b.denom_power)
}

/// Coordinates over a shared denominator power, without a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Raw {
    pub r: u32,
    pub coords: Vec<IntPoly>,
}

impl Raw {
    pub fn from_fscalars(coords: &[FScalar], u: &IntPoly) -> Raw {
        let r = coords.iter().map(|c| c.denom_power).max().unwrap_or(0);
        Raw { r, coords: coords.iter().map(|c| c.numerator_at(r, u)).collect() }
    }

    pub fn to_fscalars(&self) -> Vec<FScalar> {
        self.coords.iter().map(|c| FScalar::new(c.clone(), self.r)).collect()
    }

    pub fn unit(d: usize, arity: usize, j: usize) -> Raw {
        let mut coords = vec![IntPoly::zero(arity); d];
        coords[j] = IntPoly::one(arity);
        Raw { r: 0, coords }
    }

    pub fn raise(&self, target: u32, ctx: &AlgebraContext) -> Vec<IntPoly> {
        debug_assert!(target >= self.r);
        let k = target - self.r;
        if k == 0 {
            return self.coords.clone();
        }
        let factor = ctx.u_pow(k);
        self.coords.iter().map(|c| c.try_mul(&factor).expect("same arity")).collect()
    }
}

/// An element `Σ_j λ_j β_j` of `G`, all `λ_j` sharing the denominator `u^r`.
///
/// When `u` is an integer constant the representation is kept reduced (`r`
/// minimal), which makes equal values structurally equal.
#[derive(Clone)]
pub struct ExactScalar {
    ctx: ContextRef,
    r: u32,
    coords: Vec<IntPoly>,
}

impl ExactScalar {
    pub(crate) fn from_raw(ctx: &ContextRef, raw: &Raw) -> Self {
        let mut s = ExactScalar { ctx: Arc::clone(ctx), r: raw.r, coords: raw.coords.clone() };
        s.normalize();
        s
    }

    pub(crate) fn raw(&self) -> Raw {
        Raw { r: self.r, coords: self.coords.clone() }
    }

    /// Builds a scalar from coordinate FScalars.
    pub fn from_coords(ctx: &ContextRef, coords: &[FScalar]) -> Result<Self, AlgebraError> {
        if coords.len() != ctx.dim() {
            return Err(AlgebraError::InvalidContext(format!(
                "expected {} coordinates, found {}",
                ctx.dim(),
                coords.len()
            )));
        }
        for c in coords {
            if c.numerator.arity() != ctx.arity() {
                return Err(AlgebraError::ArityMismatch { expected: ctx.arity(), found: c.numerator.arity() });
            }
        }
        Ok(Self::from_raw(ctx, &Raw::from_fscalars(coords, ctx.u())))
    }

    pub fn zero(ctx: &ContextRef) -> Self {
        ExactScalar { ctx: Arc::clone(ctx), r: 0, coords: vec![IntPoly::zero(ctx.arity()); ctx.dim()] }
    }

    pub fn one(ctx: &ContextRef) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &ContextRef, n: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(ctx);
        s.coords[0] = IntPoly::constant(ctx.arity(), n);
        s.normalize();
        s
    }

    pub fn from_poly(ctx: &ContextRef, p: IntPoly) -> Result<Self, AlgebraError> {
        if p.arity() != ctx.arity() {
            return Err(AlgebraError::ArityMismatch { expected: ctx.arity(), found: p.arity() });
        }
        let mut s = Self::zero(ctx);
        s.coords[0] = p;
        s.normalize();
        Ok(s)
    }

    /// Basis element `β_j`.
    pub fn basis(ctx: &ContextRef, j: usize) -> Self {
        Self::from_raw(ctx, &Raw::unit(ctx.dim(), ctx.arity(), j))
    }

    /// Indeterminate `α_i`.
    pub fn indeterminate(ctx: &ContextRef, i: usize) -> Self {
        Self::from_poly(ctx, IntPoly::var(ctx.arity(), i)).expect("context arity")
    }

    /// `1/u`.
    pub fn u_inverse(ctx: &ContextRef) -> Self {
        let mut s = Self::one(ctx);
        s.r = 1;
        s.coords[0] = IntPoly::one(ctx.arity());
        s.normalize();
        s
    }

    /// Resolves a named constant, basis element or indeterminate.
    pub fn symbol(ctx: &ContextRef, name: &str) -> Option<Self> {
        if let Some(raw) = ctx.constant_raw(name) {
            return Some(Self::from_raw(ctx, raw));
        }
        if let Some(j) = ctx.basis_names().iter().position(|b| b == name) {
            return Some(Self::basis(ctx, j));
        }
        ctx.indeterminate_names().iter().position(|a| a == name).map(|i| Self::indeterminate(ctx, i))
    }

    /// `p/q` when `q` divides a power of an integer `u`.
    pub fn from_ratio(ctx: &ContextRef, p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        Self::from_int(ctx, p).div_int(&q.into())
    }

    pub fn context(&self) -> &ContextRef {
        &self.ctx
    }

    pub fn denom_power(&self) -> u32 {
        self.r
    }

    /// Coordinate numerators over the shared denominator `u^r`.
    pub fn numerators(&self) -> &[IntPoly] {
        &self.coords
    }

    /// Coordinates `λ_j` as individual field elements.
    pub fn coords(&self) -> Vec<FScalar> {
        self.raw().to_fscalars()
    }

    fn normalize(&mut self) {
        if self.coords.iter().all(IntPoly::is_zero) {
            self.r = 0;
            return;
        }
        let Some(c) = self.ctx.u_constant() else { return };
        if c.abs().is_one() {
            if c.is_negative() && self.r % 2 == 1 {
                self.coords = self.coords.iter().map(IntPoly::neg).collect();
            }
            self.r = 0;
            return;
        }
        while self.r > 0 {
            let divided: Option<Vec<IntPoly>> = self.coords.iter().map(|p| p.div_exact_int(c)).collect();
            match divided {
                Some(d) => {
                    self.coords = d;
                    self.r -= 1;
                }
                None => break,
            }
        }
    }

    fn same_context(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(IntPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_context(other)?;
        let r = self.r.max(other.r);
        let a = self.raw().raise(r, &self.ctx);
        let b = other.raw().raise(r, &self.ctx);
        let coords = a.iter().zip(&b).map(|(x, y)| x.try_add(y).expect("same arity")).collect();
        let mut s = ExactScalar { ctx: Arc::clone(&self.ctx), r, coords };
        s.normalize();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        ExactScalar { ctx: Arc::clone(&self.ctx), r: self.r, coords: self.coords.iter().map(IntPoly::neg).collect() }
    }

    /// Bilinear expansion through the multiplication table.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_context(other)?;
        let ctx = &self.ctx;
        let d = ctx.dim();
        let mut coords = vec![IntPoly::zero(ctx.arity()); d];
        for (a, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.try_mul(y).expect("same arity");
                for (k, t) in ctx.table_entry(a, b) {
                    let term = xy.try_mul(t).expect("same arity");
                    coords[*k] = coords[*k].try_add(&term).expect("same arity");
                }
            }
        }
        let mut s = ExactScalar { ctx: Arc::clone(ctx), r: self.r + other.r + ctx.table_power(), coords };
        s.normalize();
        Ok(s)
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut s = ExactScalar {
            ctx: Arc::clone(&self.ctx),
            r: self.r,
            coords: self.coords.iter().map(|p| p.scale(k)).collect(),
        };
        s.normalize();
        s
    }

    /// Division by an integer `d`, possible when `d` divides some power of a
    /// constant `u` (or when `d = ±1`).
    pub fn div_int(&self, d: &BigInt) -> Result<Self, AlgebraError> {
        let not_repr = || AlgebraError::NotRepresentable {
            context: self.ctx.name().to_string(),
            what: format!("division by {d}"),
        };
        if d.is_zero() {
            return Err(not_repr());
        }
        if d.abs().is_one() {
            return Ok(self.scale_int(d));
        }
        let c = self.ctx.u_constant().ok_or_else(not_repr)?;
        let mut power = BigInt::one();
        for k in 1..=64u32 {
            power *= c;
            if (&power % d).is_zero() {
                let factor = &power / d;
                let mut s = ExactScalar {
                    ctx: Arc::clone(&self.ctx),
                    r: self.r + k,
                    coords: self.coords.iter().map(|p| p.scale(&factor)).collect(),
                };
                s.normalize();
                return Ok(s);
            }
        }
        Err(not_repr())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate through the context involution; indeterminates are
    /// treated as real.
    pub fn conj(&self) -> Result<Self, AlgebraError> {
        let images = self.ctx.conjugates_raw().ok_or_else(|| AlgebraError::NoConjugation(self.ctx.name().into()))?;
        let rmax = images.iter().map(|c| c.r).max().unwrap_or(0);
        let mut coords = vec![IntPoly::zero(self.ctx.arity()); self.ctx.dim()];
        for (j, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let image = images[j].raise(rmax, &self.ctx);
            for (k, y) in image.iter().enumerate() {
                if !y.is_zero() {
                    coords[k] = coords[k].try_add(&x.try_mul(y).expect("same arity")).expect("same arity");
                }
            }
        }
        let mut s = ExactScalar { ctx: Arc::clone(&self.ctx), r: self.r + rmax, coords };
        s.normalize();
        Ok(s)
    }

    /// `|x|² = x · conj(x)`.
    pub fn abs2(&self) -> Result<Self, AlgebraError> {
        Ok(self * &self.conj()?)
    }

    /// The rational value when the scalar lies in `Q·β_0` and `u` is a constant.
    pub fn to_rational(&self) -> Option<BigRational> {
        let c = self.ctx.u_constant()?;
        if self.coords.iter().skip(1).any(|p| !p.is_zero()) {
            return None;
        }
        let num = self.coords[0].as_constant()?;
        Some(BigRational::new(num, num_traits::pow(c.clone(), self.r as usize)))
    }

    pub fn eval_numeric(&self) -> Result<Complex64, AlgebraError> {
        let ctx = &self.ctx;
        let point = ctx.numeric_indeterminates();
        let denom = ctx.u().eval_complex(point).powu(self.r);
        if denom.norm() < 1e-12 {
            return Err(AlgebraError::Evaluation("denominator evaluates to zero".into()));
        }
        let mut acc = Complex64::zero();
        for (p, beta) in self.coords.iter().zip(ctx.numeric_basis()) {
            if !p.is_zero() {
                acc += p.eval_complex(point) * beta;
            }
        }
        Ok(acc / denom)
    }
}

/// Sum of a sequence; the empty sum is zero.
pub fn g_iterated_sum(ctx: &ContextRef, xs: &[ExactScalar]) -> Result<ExactScalar, AlgebraError> {
    xs.iter().try_fold(ExactScalar::zero(ctx), |acc, x| acc.try_add(x))
}

/// Left-to-right product fold; the empty product is one.
pub fn g_iterated_product(ctx: &ContextRef, xs: &[ExactScalar]) -> Result<ExactScalar, AlgebraError> {
    xs.iter().try_fold(ExactScalar::one(ctx), |acc, x| acc.try_mul(x))
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.same_context(other).is_err() {
            return false;
        }
        if self.ctx.u_constant().is_some() {
            return self.r == other.r && self.coords == other.coords;
        }
        let r = self.r.max(other.r);
        self.raw().raise(r, &self.ctx) == other.raw().raise(r, &self.ctx)
    }
}

impl Eq for ExactScalar {}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            /// Panics when the operands live in different contexts.
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$try(rhs).expect("ExactScalar operands must share a context")
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = &self.ctx;
        let mut parts = Vec::new();
        for (j, p) in self.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let coeff = p.display_with(ctx.indeterminate_names()).to_string();
            let name = &ctx.basis_names()[j];
            let part = if j == 0 {
                coeff
            } else if p.is_one() {
                name.clone()
            } else if p.num_terms() == 1 && !coeff.contains(' ') {
                if coeff == "-1" { format!("-{name}") } else { format!("{coeff}*{name}") }
            } else {
                format!("({coeff})*{name}")
            };
            parts.push(part);
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            let mut s = parts[0].clone();
            for p in &parts[1..] {
                match p.strip_prefix('-') {
                    Some(rest) => s.push_str(&format!(" - {rest}")),
                    None => s.push_str(&format!(" + {p}")),
                }
            }
            s
        };
        if self.r == 0 {
            return write!(f, "{body}");
        }
        let denom = match ctx.u_constant() {
            Some(c) => num_traits::pow(c.clone(), self.r as usize).to_string(),
            None => {
                let u = ctx.u().display_with(ctx.indeterminate_names()).to_string();
                if self.r == 1 { format!("({u})") } else { format!("({u})^{}", self.r) }
            }
        };
        if parts.len() == 1 && !body.contains(' ') {
            write!(f, "{body}/{denom}")
        } else {
            write!(f, "({body})/{denom}")
        }
    }
}
