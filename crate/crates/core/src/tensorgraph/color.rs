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

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgebraError, ContextRef, ExactScalar};

/// A product of colors and anticolors, or the annihilated product.
///
/// Multiplication folds the right operand's factors into the left one at a
/// time: a repeated factor cancels, a factor meeting its opposite polarity
/// zeroes the product. This is not associative, e.g. `(a·a)·ã = ã` while
/// `a·(a·ã) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorProduct {
    Zero,
    /// Color id to polarity (`true` = anticolor). Empty is the scalar 1.
    Prod(BTreeMap<u64, bool>),
}

impl ColorProduct {
    pub fn one() -> Self {
        ColorProduct::Prod(BTreeMap::new())
    }

    pub fn color(id: u64) -> Self {
        ColorProduct::Prod(BTreeMap::from([(id, false)]))
    }

    pub fn anticolor(id: u64) -> Self {
        ColorProduct::Prod(BTreeMap::from([(id, true)]))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ColorProduct::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ColorProduct::Prod(m) if m.is_empty())
    }

    /// `(id, anti)` pairs in id order; empty for zero.
    pub fn factors(&self) -> Vec<(u64, bool)> {
        match self {
            ColorProduct::Zero => Vec::new(),
            ColorProduct::Prod(m) => m.iter().map(|(k, v)| (*k, *v)).collect(),
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        let m = match self {
            ColorProduct::Zero => None,
            ColorProduct::Prod(m) => Some(m),
        };
        m.into_iter().flat_map(|m| m.keys().copied())
    }

    pub fn mul_factor(&self, id: u64, anti: bool) -> Self {
        match self {
            ColorProduct::Zero => ColorProduct::Zero,
            ColorProduct::Prod(m) => {
                let mut m = m.clone();
                match m.get(&id) {
                    Some(&p) if p == anti => {
                        m.remove(&id);
                    }
                    Some(_) => return ColorProduct::Zero,
                    None => {
                        m.insert(id, anti);
                    }
                }
                ColorProduct::Prod(m)
            }
        }
    }

    pub fn mul(&self, other: &ColorProduct) -> Self {
        match other {
            ColorProduct::Zero => ColorProduct::Zero,
            ColorProduct::Prod(o) => o.iter().fold(self.clone(), |acc, (id, anti)| acc.mul_factor(*id, *anti)),
        }
    }
}

impl fmt::Display for ColorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorProduct::Zero => write!(f, "0"),
            ColorProduct::Prod(m) if m.is_empty() => write!(f, "1"),
            ColorProduct::Prod(m) => {
                let parts: Vec<String> = m.iter().map(|(id, anti)| format!("{}c{id}", if *anti { "~" } else { "" })).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// A formal sum of scalars times color products.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorTerm {
    ctx: ContextRef,
    terms: BTreeMap<ColorProduct, ExactScalar>,
}

impl ColorTerm {
    pub fn zero(ctx: &ContextRef) -> Self {
        ColorTerm { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &ContextRef) -> Self {
        ColorTerm::single(ColorProduct::one(), ExactScalar::one(ctx))
    }

    pub fn single(p: ColorProduct, s: ExactScalar) -> Self {
        let mut t = ColorTerm::zero(s.context());
        t.add_entry(p, s);
        t
    }

    pub fn context(&self) -> &ContextRef {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<ColorProduct, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty product.
    pub fn scalar_part(&self) -> ExactScalar {
        self.terms.get(&ColorProduct::one()).cloned().unwrap_or_else(|| ExactScalar::zero(&self.ctx))
    }

    /// True when some non-empty product survives.
    pub fn has_residual_color(&self) -> bool {
        self.terms.keys().any(|p| !p.is_one())
    }

    pub fn add_entry(&mut self, p: ColorProduct, s: ExactScalar) {
        if p.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(acc) => {
                *acc = &*acc + &s;
                if acc.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, s);
            }
        }
    }

    pub fn try_add(&self, other: &ColorTerm) -> Result<ColorTerm, AlgebraError> {
        if self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut out = self.clone();
        for (p, s) in &other.terms {
            out.add_entry(p.clone(), s.clone());
        }
        Ok(out)
    }

    /// Termwise product; each pair of products is folded left to right.
    pub fn try_mul(&self, other: &ColorTerm) -> Result<ColorTerm, AlgebraError> {
        let mut out = ColorTerm::zero(&self.ctx);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_entry(p.mul(q), a.try_mul(b)?);
            }
        }
        Ok(out)
    }

    /// `self · (p s)` for a single edge label.
    pub fn mul_edge(&self, p: &ColorProduct, s: &ExactScalar) -> Result<ColorTerm, AlgebraError> {
        let mut out = ColorTerm::zero(&self.ctx);
        if s.is_zero() {
            return Ok(out);
        }
        for (q, a) in &self.terms {
            out.add_entry(q.mul(p), a.try_mul(s)?);
        }
        Ok(out)
    }
}

/// Product in the color algebra.
pub fn color_mul(a: &ColorTerm, b: &ColorTerm) -> Result<ColorTerm, AlgebraError> {
    a.try_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;

    #[test]
    fn collapse_rules() {
        let b = ColorProduct::color(1);
        let bt = ColorProduct::anticolor(1);
        assert!(b.mul(&b).is_one());
        assert!(bt.mul(&bt).is_one());
        assert!(b.mul(&bt).is_zero());
        let c = ColorProduct::color(2);
        assert_eq!(b.mul(&c), c.mul(&b));
    }

    #[test]
    fn non_associative_witness() {
        let a = ColorProduct::color(7);
        let at = ColorProduct::anticolor(7);
        assert_eq!(a.mul(&a).mul(&at), at);
        assert!(a.mul(&a.mul(&at)).is_zero());
    }

    #[test]
    fn term_products() {
        let ctx = AlgebraContext::rational(1).unwrap();
        let two = ExactScalar::from_int(&ctx, 2);
        let b = ColorTerm::single(ColorProduct::color(1), two.clone());
        let bt = ColorTerm::single(ColorProduct::anticolor(1), two);
        let bb = color_mul(&b, &b).unwrap();
        assert!(!bb.has_residual_color());
        assert_eq!(bb.scalar_part(), ExactScalar::from_int(&ctx, 4));
        assert!(color_mul(&b, &bt).unwrap().is_zero());
        let sum = b.try_add(&bt).unwrap();
        let sq = color_mul(&sum, &sum).unwrap();
        assert_eq!(sq.scalar_part(), ExactScalar::from_int(&ctx, 8));
        assert_eq!(sq.terms().len(), 1);
    }
}
