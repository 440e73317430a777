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

//! Iterated products through multivariate Lagrange interpolation on the
//! principal lattice of the simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Exponents, IntPoly, RatPoly};
use super::AlgebraError;

/// Interpolation variables `m'` and degree bound `p'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    pub arity: usize,
    pub degree_bound: u32,
}

impl LatticeSpec {
    pub fn new(arity: usize, degree_bound: u32) -> Result<Self, AlgebraError> {
        if arity == 0 {
            return Err(AlgebraError::InvalidLattice("arity must be at least 1".into()));
        }
        Ok(LatticeSpec { arity, degree_bound })
    }

    /// `binomial(p' + m', m')`.
    pub fn point_count(&self) -> BigInt {
        let n = self.degree_bound as u64 + self.arity as u64;
        let mut acc = BigInt::one();
        for i in 0..self.arity as u64 {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    }
}

/// All points with nonnegative coordinates summing to at most `p'`, in
/// lexicographic order.
pub fn principal_lattice(spec: LatticeSpec) -> Vec<Exponents> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Exponents>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=budget {
            prefix.push(v);
            rec(prefix, left - 1, budget - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(spec.arity), spec.arity, spec.degree_bound, &mut out);
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Integer numerator `N_α` and denominator `D_α` of the basis polynomial for
/// node `α`, so that `p_α = N_α / D_α`.
///
/// `p_α(y) = Π_s Π_{k<α_s} (y_s − k)/(α_s − k) · Π_{k<α_0} (p' − |y| − k)/(α_0 − k)`
/// with `α_0 = p' − |α|`.
fn basis_parts(spec: LatticeSpec, alpha: &[u32]) -> (IntPoly, BigInt) {
    let m = spec.arity;
    let mut num = IntPoly::one(m);
    let mut den = BigInt::one();
    for (s, &a) in alpha.iter().enumerate() {
        for k in 0..a {
            let factor = IntPoly::var(m, s).try_sub(&IntPoly::constant(m, k)).expect("same arity");
            num = num.try_mul(&factor).expect("same arity");
        }
        den *= factorial(a);
    }
    let a0 = spec.degree_bound - alpha.iter().sum::<u32>();
    let mut sum_y = IntPoly::zero(m);
    for s in 0..m {
        sum_y = sum_y.try_add(&IntPoly::var(m, s)).expect("same arity");
    }
    for k in 0..a0 {
        let factor = IntPoly::constant(m, spec.degree_bound - k).try_sub(&sum_y).expect("same arity");
        num = num.try_mul(&factor).expect("same arity");
    }
    den *= factorial(a0);
    (num, den)
}

/// Lagrange basis `p_j`, one per lattice point in [`principal_lattice`] order.
pub fn lagrange_basis(spec: LatticeSpec) -> Vec<RatPoly> {
    principal_lattice(spec)
        .iter()
        .map(|alpha| {
            let (num, den) = basis_parts(spec, alpha);
            num.to_rat().scale(&BigRational::new(BigInt::one(), den))
        })
        .collect()
}

/// Precomputed basis for repeated interpolated products under one spec.
///
/// Every `D_α = α_0! Π α_s!` divides `p'!`, so the basis is stored as integer
/// polynomials over the common denominator `p'!`.
#[derive(Clone, Debug)]
pub struct Interpolator {
    spec: LatticeSpec,
    points: Vec<Exponents>,
    scaled: Vec<IntPoly>,
    common_den: BigInt,
}

impl Interpolator {
    pub fn new(spec: LatticeSpec) -> Self {
        let points = principal_lattice(spec);
        let common_den = factorial(spec.degree_bound);
        let scaled = points
            .iter()
            .map(|alpha| {
                let (num, den) = basis_parts(spec, alpha);
                num.scale(&(&common_den / den))
            })
            .collect();
        Interpolator { spec, points, scaled, common_den }
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn points(&self) -> &[Exponents] {
        &self.points
    }

    /// Interpolates the product of `polys` through the lattice values
    /// `k(j) = Π_i f_i(point_j)`.
    pub fn product(&self, polys: &[IntPoly]) -> Result<IntPoly, AlgebraError> {
        let m = self.spec.arity;
        let mut degree = 0u32;
        for p in polys {
            if p.arity() != m {
                return Err(AlgebraError::ArityMismatch { expected: m, found: p.arity() });
            }
            match p.total_degree() {
                Some(d) => degree += d,
                None => return Ok(IntPoly::zero(m)),
            }
        }
        if degree > self.spec.degree_bound {
            return Err(AlgebraError::DegreeBoundViolated { degree, bound: self.spec.degree_bound });
        }

        let mut acc = IntPoly::zero(m);
        for (point, basis) in self.points.iter().zip(&self.scaled) {
            let at: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
            let value: BigInt = polys.iter().map(|p| p.eval_int(&at)).product();
            if !value.is_zero() {
                acc = acc.try_add(&basis.scale(&value))?;
            }
        }
        let result = acc.div_exact_int(&self.common_den).ok_or(AlgebraError::InterpolationMismatch)?;

        // Post-hoc guard at a point outside the lattice.
        let probe: Vec<BigInt> =
            (0..m).map(|s| BigInt::from(self.spec.degree_bound as u64 + 1 + s as u64)).collect();
        let expected: BigInt = polys.iter().map(|p| p.eval_int(&probe)).product();
        if result.eval_int(&probe) != expected {
            return Err(AlgebraError::InterpolationMismatch);
        }
        Ok(result)
    }
}

/// Iterated product computed by interpolation through the principal lattice.
pub fn ipoly_interpolated_product(polys: &[IntPoly], spec: LatticeSpec) -> Result<IntPoly, AlgebraError> {
    Interpolator::new(spec).product(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ipoly_direct_product;

    fn spec(m: usize, p: u32) -> LatticeSpec {
        LatticeSpec::new(m, p).unwrap()
    }

    #[test]
    fn lattice_examples() {
        let pts = principal_lattice(spec(2, 2));
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
        assert_eq!(principal_lattice(spec(1, 3)), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(principal_lattice(spec(3, 4)).len(), 35);
        assert_eq!(spec(3, 4).point_count(), BigInt::from(35));
    }

    #[test]
    fn zero_arity_rejected() {
        assert!(LatticeSpec::new(0, 3).is_err());
    }

    #[test]
    fn linear_basis() {
        let b = lagrange_basis(spec(1, 1));
        let one_minus_y = IntPoly::from_terms(1, [(BigInt::from(1), vec![0]), (BigInt::from(-1), vec![1])]).unwrap();
        assert_eq!(b[0].to_int().unwrap(), one_minus_y);
        assert_eq!(b[1].to_int().unwrap(), IntPoly::var(1, 0));
    }

    #[test]
    fn quadratic_middle_node_against_vandermonde() {
        // Solve V c = e_1 for nodes 0, 1, 2 by hand: c = (0, 2, -1).
        let b = lagrange_basis(spec(1, 2));
        let mid = b[1].to_int().unwrap();
        let expected = IntPoly::from_terms(1, [(BigInt::from(2), vec![1]), (BigInt::from(-1), vec![2])]).unwrap();
        assert_eq!(mid, expected);
    }

    #[test]
    fn kronecker_delta_and_partition_of_unity() {
        for (m, p) in [(1, 4), (2, 3), (3, 2)] {
            let s = spec(m, p);
            let pts = principal_lattice(s);
            let basis = lagrange_basis(s);
            for (j, pj) in basis.iter().enumerate() {
                assert!(pj.total_degree().unwrap_or(0) <= p);
                for (i, pt) in pts.iter().enumerate() {
                    let at: Vec<BigRational> = pt.iter().map(|&v| BigRational::from_integer(v.into())).collect();
                    let want = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(pj.eval(&at), want);
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let a = IntPoly::var(1, 0);
        let one = IntPoly::one(1);
        let f = one.try_add(&a).unwrap();
        let g = one.try_sub(&a).unwrap();
        let got = ipoly_interpolated_product(&[f.clone(), g.clone()], spec(1, 2)).unwrap();
        assert_eq!(got, ipoly_direct_product(1, &[f, g]).unwrap());
        assert!(matches!(
            ipoly_interpolated_product(&[a], spec(1, 0)),
            Err(AlgebraError::DegreeBoundViolated { degree: 1, bound: 0 })
        ));
    }
}
