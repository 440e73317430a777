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
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::poly::IntPoly;
use super::scalar::{FScalar, Raw};
use super::AlgebraError;

pub type ContextRef = Arc<AlgebraContext>;

/// Description of a field `G = Q(A)(B)`: indeterminates, basis, multiplication
/// table and common denominator `u`.
///
/// Built through [`AlgebraContext::new`], [`AlgebraContext::cyclotomic`] or
/// [`AlgebraContext::rational`]; immutable afterwards.
#[derive(Clone, PartialEq)]
pub struct AlgebraContext {
    name: String,
    indeterminates: Vec<String>,
    basis: Vec<String>,
    table: Vec<Vec<Raw>>,
    u: IntPoly,
    numeric_indeterminates: Vec<Complex64>,
    numeric_basis: Vec<Complex64>,
    conjugates: Option<Vec<Raw>>,
    constants: BTreeMap<String, Raw>,

    u_const: Option<BigInt>,
    table_r: u32,
    sparse: Vec<Vec<Vec<(usize, IntPoly)>>>,
    u_powers: Vec<IntPoly>,
}

/// Plain-data form of a context, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextSpec {
    pub name: String,
    pub indeterminates: Vec<String>,
    pub basis: Vec<String>,
    /// `mult_table[a][b]` holds the coordinates of `β_a β_b`.
    pub mult_table: Vec<Vec<Vec<FScalar>>>,
    pub u: IntPoly,
    pub numeric_indeterminates: Vec<Complex64>,
    pub numeric_basis: Vec<Complex64>,
    /// Image of each basis element under complex conjugation.
    pub conjugates: Option<Vec<Vec<FScalar>>>,
    pub constants: BTreeMap<String, Vec<FScalar>>,
}

impl std::fmt::Debug for AlgebraContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraContext({}, m={}, d={})", self.name, self.arity(), self.dim())
    }
}

const NUMERIC_TOL: f64 = 1e-9;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= NUMERIC_TOL * (1.0 + a.norm().max(b.norm()))
}

impl AlgebraContext {
    pub fn new(spec: ContextSpec) -> Result<ContextRef, AlgebraError> {
        let bad = |msg: String| Err(AlgebraError::InvalidContext(msg));
        let m = spec.indeterminates.len();
        let d = spec.basis.len();
        if d == 0 {
            return bad("basis must contain at least the unit element".into());
        }
        if spec.u.arity() != m {
            return Err(AlgebraError::ArityMismatch { expected: m, found: spec.u.arity() });
        }
        if spec.u.is_zero() {
            return bad("denominator u is the zero polynomial".into());
        }
        let check_vec = |v: &Vec<FScalar>, what: &str| -> Result<(), AlgebraError> {
            if v.len() != d {
                return Err(AlgebraError::InvalidContext(format!("{what}: expected {d} coordinates, found {}", v.len())));
            }
            for c in v {
                if c.numerator.arity() != m {
                    return Err(AlgebraError::ArityMismatch { expected: m, found: c.numerator.arity() });
                }
            }
            Ok(())
        };
        if spec.mult_table.len() != d || spec.mult_table.iter().any(|row| row.len() != d) {
            return bad(format!("mult_table must be {d}x{d}"));
        }
        for (a, row) in spec.mult_table.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                check_vec(entry, &format!("mult_table[{a}][{b}]"))?;
            }
        }
        if let Some(conj) = &spec.conjugates {
            if conj.len() != d {
                return bad(format!("conjugates must list {d} images"));
            }
            for (j, c) in conj.iter().enumerate() {
                check_vec(c, &format!("conjugates[{j}]"))?;
            }
        }
        for (name, c) in &spec.constants {
            check_vec(c, &format!("constant `{name}`"))?;
        }
        if spec.numeric_indeterminates.len() != m || spec.numeric_basis.len() != d {
            return bad("numeric assignment has the wrong length".into());
        }

        let u = spec.u.clone();
        let table: Vec<Vec<Raw>> = spec
            .mult_table
            .iter()
            .map(|row| row.iter().map(|e| Raw::from_fscalars(e, &u)).collect())
            .collect();
        let table_r = table.iter().flatten().map(|e| e.r).max().unwrap_or(0);
        let u_const = u.as_constant();

        let mut ctx = AlgebraContext {
            name: spec.name.clone(),
            indeterminates: spec.indeterminates.clone(),
            basis: spec.basis.clone(),
            table,
            u: u.clone(),
            numeric_indeterminates: spec.numeric_indeterminates.clone(),
            numeric_basis: spec.numeric_basis.clone(),
            conjugates: spec.conjugates.as_ref().map(|c| c.iter().map(|e| Raw::from_fscalars(e, &u)).collect()),
            constants: spec.constants.iter().map(|(k, v)| (k.clone(), Raw::from_fscalars(v, &u))).collect(),
            u_const,
            table_r,
            sparse: Vec::new(),
            u_powers: vec![IntPoly::one(m)],
        };
        for k in 1..=table_r.max(4) {
            let next = ctx.u_powers[k as usize - 1].try_mul(&u).expect("same arity");
            ctx.u_powers.push(next);
        }
        ctx.sparse = ctx
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.raise(table_r, &ctx)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, p)| !p.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();

        ctx.check_structure()?;
        ctx.check_numeric()?;
        Ok(Arc::new(ctx))
    }

    fn check_structure(&self) -> Result<(), AlgebraError> {
        let d = self.dim();
        let m = self.arity();
        for b in 0..d {
            let unit = Raw::unit(d, m, b);
            if !self.raw_equal(&self.table[0][b], &unit) {
                return Err(AlgebraError::InvalidContext(format!(
                    "row of the identity element is not the unit vector at column {b}"
                )));
            }
        }
        for a in 0..d {
            for b in 0..a {
                if !self.raw_equal(&self.table[a][b], &self.table[b][a]) {
                    return Err(AlgebraError::InvalidContext(format!("mult_table is not symmetric at ({a},{b})")));
                }
            }
        }
        Ok(())
    }

    fn raw_equal(&self, x: &Raw, y: &Raw) -> bool {
        let r = x.r.max(y.r);
        x.raise(r, self) == y.raise(r, self)
    }

    fn raw_numeric(&self, x: &Raw) -> Complex64 {
        let point = &self.numeric_indeterminates;
        let denom = self.u.eval_complex(point).powu(x.r);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, beta) in x.coords.iter().zip(&self.numeric_basis) {
            acc += p.eval_complex(point) * beta;
        }
        acc / denom
    }

    fn check_numeric(&self) -> Result<(), AlgebraError> {
        if self.u.eval_complex(&self.numeric_indeterminates).norm() < 1e-12 {
            return Err(AlgebraError::InvalidContext("u evaluates to zero at the numeric assignment".into()));
        }
        if !close(self.numeric_basis[0], Complex64::new(1.0, 0.0)) {
            return Err(AlgebraError::InvalidContext("numeric value of the unit element is not 1".into()));
        }
        let d = self.dim();
        for a in 0..d {
            for b in a..d {
                let lhs = self.numeric_basis[a] * self.numeric_basis[b];
                let rhs = self.raw_numeric(&self.table[a][b]);
                if !close(lhs, rhs) {
                    return Err(AlgebraError::InvalidContext(format!(
                        "numeric assignment violates mult_table at ({a},{b}): {lhs} vs {rhs}"
                    )));
                }
            }
        }
        if let Some(conj) = &self.conjugates {
            for (j, image) in conj.iter().enumerate() {
                if !close(self.numeric_basis[j].conj(), self.raw_numeric(image)) {
                    return Err(AlgebraError::InvalidContext(format!("conjugate of basis element {j} is inconsistent")));
                }
            }
        }
        Ok(())
    }

    /// The rational field with denominators restricted to powers of `u`.
    pub fn rational(u: i64) -> Result<ContextRef, AlgebraError> {
        let one = vec![FScalar::new(IntPoly::one(0), 0)];
        AlgebraContext::new(ContextSpec {
            name: format!("rat{u}"),
            indeterminates: vec![],
            basis: vec!["1".into()],
            mult_table: vec![vec![one.clone()]],
            u: IntPoly::constant(0, u),
            numeric_indeterminates: vec![],
            numeric_basis: vec![Complex64::new(1.0, 0.0)],
            conjugates: Some(vec![one]),
            constants: BTreeMap::new(),
        })
    }

    /// Parses the short context names `cyc<q>` and `rat<u>`.
    pub fn by_name(name: &str) -> Result<ContextRef, AlgebraError> {
        let num = |s: &str| s.parse::<i64>().map_err(|_| AlgebraError::InvalidContext(format!("unknown context `{name}`")));
        if let Some(q) = name.strip_prefix("cyc") {
            let q = num(q)?;
            if !(2..=64).contains(&q) {
                return Err(AlgebraError::InvalidContext(format!("cyclotomic order {q} outside 2..=64")));
            }
            AlgebraContext::cyclotomic(q as u32)
        } else if let Some(u) = name.strip_prefix("rat") {
            AlgebraContext::rational(num(u)?)
        } else {
            Err(AlgebraError::InvalidContext(format!("unknown context `{name}`")))
        }
    }

    pub fn to_spec(&self) -> ContextSpec {
        ContextSpec {
            name: self.name.clone(),
            indeterminates: self.indeterminates.clone(),
            basis: self.basis.clone(),
            mult_table: self.table.iter().map(|row| row.iter().map(Raw::to_fscalars).collect()).collect(),
            u: self.u.clone(),
            numeric_indeterminates: self.numeric_indeterminates.clone(),
            numeric_basis: self.numeric_basis.clone(),
            conjugates: self.conjugates.as_ref().map(|c| c.iter().map(Raw::to_fscalars).collect()),
            constants: self.constants.iter().map(|(k, v)| (k.clone(), v.to_fscalars())).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `d = |B|`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `m = |A|`.
    pub fn arity(&self) -> usize {
        self.indeterminates.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn indeterminate_names(&self) -> &[String] {
        &self.indeterminates
    }

    pub fn u(&self) -> &IntPoly {
        &self.u
    }

    pub(crate) fn u_constant(&self) -> Option<&BigInt> {
        self.u_const.as_ref()
    }

    pub(crate) fn u_pow(&self, k: u32) -> IntPoly {
        match self.u_powers.get(k as usize) {
            Some(p) => p.clone(),
            None => self.u.pow(k),
        }
    }

    pub(crate) fn table_entry(&self, a: usize, b: usize) -> &[(usize, IntPoly)] {
        &self.sparse[a][b]
    }

    pub(crate) fn table_power(&self) -> u32 {
        self.table_r
    }

    pub(crate) fn conjugates_raw(&self) -> Option<&[Raw]> {
        self.conjugates.as_deref()
    }

    pub(crate) fn constant_raw(&self, name: &str) -> Option<&Raw> {
        self.constants.get(name)
    }

    pub fn constant_names(&self) -> impl Iterator<Item = &str> {
        self.constants.keys().map(String::as_str)
    }

    pub fn numeric_indeterminates(&self) -> &[Complex64] {
        &self.numeric_indeterminates
    }

    pub fn numeric_basis(&self) -> &[Complex64] {
        &self.numeric_basis
    }

    pub fn has_conjugation(&self) -> bool {
        self.conjugates.is_some()
    }

    /// True for `d = 1` and no indeterminates: every element is rational.
    pub fn is_rational(&self) -> bool {
        self.dim() == 1 && self.arity() == 0
    }
}
