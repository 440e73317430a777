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

//! The shipped `cyc<q>` contexts: `Q(ζ_q)` with `1/√q` adjoined when it is
//! not already a field element.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::context::{AlgebraContext, ContextRef, ContextSpec};
use super::poly::IntPoly;
use super::scalar::FScalar;
use super::AlgebraError;

/// Integer polynomial in one variable, lowest degree first.
type UPoly = Vec<i64>;

fn trim(mut p: UPoly) -> UPoly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

/// Division by a monic polynomial; returns (quotient, remainder).
fn divmod_monic(num: &[i64], den: &[i64]) -> (UPoly, UPoly) {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![0], trim(rem));
    }
    let mut quot = vec![0; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i - dd + j] -= c * dj;
        }
    }
    rem.truncate(dd.max(1));
    (trim(quot), trim(rem))
}

pub(crate) fn cyclotomic_poly(n: u32) -> UPoly {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = divmod_monic(&p, &cyclotomic_poly(d));
            debug_assert!(r.iter().all(|&c| c == 0));
            p = q;
        }
    }
    p
}

fn legendre(a: u32, p: u32) -> i64 {
    let mut acc = 1u64;
    let mut base = (a % p) as u64;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    match acc {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn prime_factors(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Arithmetic in the group ring `Z[x]/(x^q − 1)` as a stand-in for `Z[ζ_q]`.
struct Cyclic {
    q: u32,
}

impl Cyclic {
    fn zero(&self) -> UPoly {
        vec![0; self.q as usize]
    }

    fn monomial(&self, k: u32, c: i64) -> UPoly {
        let mut v = self.zero();
        v[(k % self.q) as usize] += c;
        v
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> UPoly {
        let q = self.q as usize;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[(i + j) % q] += x * y;
            }
        }
        out
    }

    fn eval(&self, a: &[i64]) -> Complex64 {
        a.iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / self.q as f64))
            .sum()
    }

    /// `√n` as an element of `Z[ζ_q]`, if it lies in `Q(ζ_q)`.
    ///
    /// With `n = s²t`, `t` squarefree, `Q(√t) ⊂ Q(ζ_q)` iff its discriminant
    /// divides `q`. The root is assembled from quadratic Gauss sums
    /// `g_p = Σ_a (a/p) ζ_p^a`, which equal `√p` for `p ≡ 1 (mod 4)` and
    /// `i√p` for `p ≡ 3 (mod 4)`, and from `√2 = ζ_8 + ζ_8^{-1}`.
    fn sqrt(&self, n: u32) -> Option<UPoly> {
        let q = self.q;
        let mut s = 1u32;
        let mut t = 1u32;
        for (p, e) in prime_factors(n) {
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                t *= p;
            }
        }
        let disc = if t % 4 == 1 { t } else { 4 * t };
        if !q.is_multiple_of(disc) {
            return None;
        }
        let mut acc = self.monomial(0, s as i64);
        let mut threes = 0;
        for (p, _) in prime_factors(t) {
            let factor = if p == 2 {
                let k = q / 8;
                let mut v = self.monomial(k, 1);
                v[(q - k) as usize] += 1;
                v
            } else {
                if p % 4 == 3 {
                    threes += 1;
                }
                let mut v = self.zero();
                for a in 1..p {
                    v[(a * (q / p)) as usize] += legendre(a, p);
                }
                v
            };
            acc = self.mul(&acc, &factor);
        }
        // Π (−i) over the p ≡ 3 (mod 4) factors.
        let fix = match threes % 4 {
            0 => self.monomial(0, 1),
            2 => self.monomial(0, -1),
            1 => self.monomial(3 * q / 4, 1),
            _ => self.monomial(q / 4, 1),
        };
        let root = self.mul(&acc, &fix);
        let value = self.eval(&root);
        let want = (n as f64).sqrt();
        assert!(
            (value - Complex64::new(want, 0.0)).norm() < 1e-8 * (1.0 + want),
            "Gauss sum construction of sqrt({n}) in Q(zeta_{q}) gave {value}"
        );
        Some(root)
    }
}

impl AlgebraContext {
    /// `Q(ζ_q)` with power basis `ζ^k`, `k < φ(q)`. When `√q ∉ Q(ζ_q)` the
    /// elements `ζ^k ω` with `ω = 1/√q` are appended. `u = q`.
    ///
    /// Named constants: `z` (ζ_q), `w` (1/√q), `i` when `4 | q`, `h` (1/√2)
    /// when representable, and `zeta<e>`, `isqrt<e>` for each divisor `e ≥ 2`.
    #[allow(clippy::needless_range_loop)]
    pub fn cyclotomic(q: u32) -> Result<ContextRef, AlgebraError> {
        if q < 2 {
            return Err(AlgebraError::InvalidContext("cyclotomic order must be at least 2".into()));
        }
        let phi_poly = cyclotomic_poly(q);
        let phi = phi_poly.len() - 1;
        let ring = Cyclic { q };
        let sqrt_q = ring.sqrt(q);
        let adjoin = sqrt_q.is_none();
        let d = if adjoin { 2 * phi } else { phi };

        // Power-basis coordinates of x^k for k < 2q.
        let reduce = |v: &[i64]| -> Vec<i64> {
            let (_, r) = divmod_monic(v, &phi_poly);
            let mut out = vec![0; phi];
            for (i, c) in r.into_iter().enumerate() {
                out[i] = c;
            }
            out
        };
        let power = |k: u32| reduce(&ring.monomial(k, 1));

        let fs = |c: i64, r: u32| FScalar::new(IntPoly::constant(0, c), r);
        // (ζ-part coordinates, ω-part coordinates, denominator power) to a full vector.
        let embed = |zpart: &[i64], wpart: &[i64], r: u32| -> Vec<FScalar> {
            let mut out = vec![FScalar::zero(0); d];
            for (i, &c) in zpart.iter().enumerate() {
                out[i] = fs(c, r);
            }
            if adjoin {
                for (i, &c) in wpart.iter().enumerate() {
                    out[phi + i] = fs(c, r);
                }
            } else {
                assert!(wpart.iter().all(|&c| c == 0));
            }
            out
        };
        let none = vec![0i64; phi];

        let split = |j: usize| -> (u32, bool) { ((j % phi) as u32, j >= phi) };
        let mut table = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let (ea, wa) = split(a);
                let (eb, wb) = split(b);
                let zz = power(ea + eb);
                table[a][b] = match (wa, wb) {
                    (false, false) => embed(&zz, &none, 0),
                    (true, true) => embed(&zz, &none, 1),
                    _ => embed(&none, &zz, 0),
                };
            }
        }

        let zeta = Complex64::from_polar(1.0, 2.0 * PI / q as f64);
        let omega = 1.0 / (q as f64).sqrt();
        let numeric_basis: Vec<Complex64> =
            (0..d).map(|j| {
                let (e, w) = split(j);
                zeta.powu(e) * if w { omega } else { 1.0 }
            }).collect();
        let conjugates: Vec<Vec<FScalar>> = (0..d)
            .map(|j| {
                let (e, w) = split(j);
                let image = power(q - e);
                if w { embed(&none, &image, 0) } else { embed(&image, &none, 0) }
            })
            .collect();

        // √n as (ζ-part, ω-part): either √n ∈ Q(ζ) or √n = √(nq)·ω.
        let sqrt_coords = |n: u32| -> Option<(Vec<i64>, Vec<i64>)> {
            if let Some(root) = ring.sqrt(n) {
                return Some((reduce(&root), none.clone()));
            }
            if adjoin {
                if let Some(root) = ring.sqrt(n * q) {
                    return Some((none.clone(), reduce(&root)));
                }
            }
            None
        };
        // 1/√e = √e · (q/e) / q for e | q.
        let inv_sqrt = |e: u32| -> Option<Vec<FScalar>> {
            let (z, w) = sqrt_coords(e)?;
            let k = (q / e) as i64;
            let scale = |v: &[i64]| v.iter().map(|c| c * k).collect::<Vec<_>>();
            Some(embed(&scale(&z), &scale(&w), 1))
        };

        let mut constants = BTreeMap::new();
        constants.insert("z".to_string(), embed(&power(1), &none, 0));
        constants.insert("w".to_string(), inv_sqrt(q).expect("1/sqrt(q) is always representable"));
        if q.is_multiple_of(4) {
            constants.insert("i".to_string(), embed(&power(q / 4), &none, 0));
        }
        if q.is_multiple_of(2) {
            if let Some(h) = inv_sqrt(2) {
                constants.insert("h".to_string(), h);
            }
        }
        for e in 2..=q {
            if q.is_multiple_of(e) {
                constants.insert(format!("zeta{e}"), embed(&power(q / e), &none, 0));
                if let Some(v) = inv_sqrt(e) {
                    constants.insert(format!("isqrt{e}"), v);
                }
            }
        }

        let mut basis = Vec::with_capacity(d);
        for j in 0..d {
            let (e, w) = split(j);
            let z = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z{e}"),
            };
            basis.push(match (z.is_empty(), w) {
                (true, false) => "1".to_string(),
                (true, true) => "w".to_string(),
                (false, false) => z,
                (false, true) => format!("{z}w"),
            });
        }

        AlgebraContext::new(ContextSpec {
            name: format!("cyc{q}"),
            indeterminates: vec![],
            basis,
            mult_table: table,
            u: IntPoly::constant(0, q),
            numeric_indeterminates: vec![],
            numeric_basis,
            conjugates: Some(conjugates),
            constants,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactScalar;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(5).len(), 5);
    }

    #[test]
    fn square_roots_where_expected() {
        assert!(Cyclic { q: 5 }.sqrt(5).is_some());
        assert!(Cyclic { q: 3 }.sqrt(3).is_none());
        assert!(Cyclic { q: 12 }.sqrt(3).is_some());
        assert!(Cyclic { q: 8 }.sqrt(2).is_some());
        assert!(Cyclic { q: 4 }.sqrt(2).is_none());
        assert!(Cyclic { q: 21 }.sqrt(21).is_some());
        assert!(Cyclic { q: 24 }.sqrt(6).is_some());
    }

    #[test]
    fn dimensions() {
        for (q, d) in [(2, 2), (3, 4), (4, 2), (5, 4), (8, 4), (12, 4)] {
            assert_eq!(AlgebraContext::cyclotomic(q).unwrap().dim(), d, "q={q}");
        }
    }

    #[test]
    fn omega_squares_to_inverse_q() {
        for q in 2..=12 {
            let ctx = AlgebraContext::cyclotomic(q).unwrap();
            let w = ExactScalar::symbol(&ctx, "w").unwrap();
            assert_eq!(&w * &w, ExactScalar::from_ratio(&ctx, 1, q).unwrap(), "q={q}");
            let z = ExactScalar::symbol(&ctx, "z").unwrap();
            assert!(z.pow(q).is_one());
            assert!(!z.pow(q - 1).is_one() || q == 1);
        }
    }

    #[test]
    fn root_of_unity_sums_vanish() {
        for q in 2..=9u32 {
            let ctx = AlgebraContext::cyclotomic(q).unwrap();
            let z = ExactScalar::symbol(&ctx, "z").unwrap();
            for a in 1..q {
                let za = z.pow(a);
                let mut acc = ExactScalar::zero(&ctx);
                for l in 0..q {
                    acc = &acc + &za.pow(l);
                }
                assert!(acc.is_zero(), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn hadamard_constant() {
        let ctx = AlgebraContext::cyclotomic(8).unwrap();
        let h = ExactScalar::symbol(&ctx, "h").unwrap();
        assert_eq!(&h * &h, ExactScalar::from_ratio(&ctx, 1, 2).unwrap());
        assert!((h.eval_numeric().unwrap().re - 0.5f64.sqrt()).abs() < 1e-12);
        let ctx2 = AlgebraContext::cyclotomic(2).unwrap();
        assert!(ExactScalar::symbol(&ctx2, "h").is_some());
    }

    #[test]
    fn conjugation_is_involution() {
        let ctx = AlgebraContext::cyclotomic(5).unwrap();
        for j in 0..ctx.dim() {
            let b = ExactScalar::basis(&ctx, j);
            assert_eq!(b.conj().unwrap().conj().unwrap(), b);
            assert!(b.abs2().unwrap().to_rational().is_some());
        }
    }
}
