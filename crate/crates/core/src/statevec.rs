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

//! Exact sparse state-vector simulation and the E/N/B acceptance predicates.
//!
//! Basis indices put line 0 in the most significant bit. This is the
//! ground truth the tensor-graph and transform code is tested against.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::json::{scalar_to_doc, ScalarDoc};
use crate::algebra::{AlgebraError, ContextRef, ExactScalar};
use crate::circuit::{index_to_bits, validate, Circuit, CircuitError, Gate, Image, Layer};

pub const DEFAULT_LINE_CAP: usize = 20;

/// The exact-simulation line cap, overridable with `QACC_LINE_CAP`.
pub fn line_cap() -> usize {
    std::env::var("QACC_LINE_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_LINE_CAP)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("input {input} does not fit in {n_inputs} input lines")]
    InputLength { input: u64, n_inputs: usize },
    #[error("not an E-operator on this input: |amplitude|^2 = {0}")]
    NotEOperator(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl From<AlgebraError> for SimError {
    fn from(e: AlgebraError) -> Self {
        SimError::Circuit(CircuitError::Algebra(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    E,
    N,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
    /// Bounded-error mode with `|amp|²` inside `[1/4, 3/4]`.
    InvalidGap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_lines: usize,
    ctx: ContextRef,
    entries: BTreeMap<u64, ExactScalar>,
}

#[derive(Serialize)]
struct DumpEntry {
    basis: String,
    amplitude: ScalarDoc,
    approx: [f64; 2],
}

impl StateVector {
    pub fn basis_state(ctx: &ContextRef, n_lines: usize, idx: u64) -> Result<Self, SimError> {
        let cap = line_cap();
        if n_lines > cap {
            return Err(CircuitError::TooWide { lines: n_lines, cap }.into());
        }
        Ok(StateVector { n_lines, ctx: ctx.clone(), entries: BTreeMap::from([(idx, ExactScalar::one(ctx))]) })
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    pub fn context(&self) -> &ContextRef {
        &self.ctx
    }

    pub fn entries(&self) -> &BTreeMap<u64, ExactScalar> {
        &self.entries
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn amplitude(&self, idx: u64) -> ExactScalar {
        self.entries.get(&idx).cloned().unwrap_or_else(|| ExactScalar::zero(&self.ctx))
    }

    /// `Σ |a|²`; needs conjugation.
    pub fn norm2(&self) -> Result<ExactScalar, SimError> {
        let mut acc = ExactScalar::zero(&self.ctx);
        for a in self.entries.values() {
            acc = acc.try_add(&a.abs2()?)?;
        }
        Ok(acc)
    }

    fn check_line(&self, l: usize) -> Result<(), SimError> {
        if l >= self.n_lines {
            return Err(CircuitError::LineOutOfRange { line: l, width: self.n_lines }.into());
        }
        Ok(())
    }

    fn apply_gate(&mut self, g: &Gate) -> Result<(), SimError> {
        for l in g.lines() {
            self.check_line(l)?;
        }
        let n = self.n_lines;
        let kernel = g.kernel(&self.ctx, n)?;
        let old = std::mem::take(&mut self.entries);
        let mut out: BTreeMap<u64, ExactScalar> = BTreeMap::new();
        for (idx, amp) in old {
            match kernel.apply(idx, n) {
                Image::Basis(j) => {
                    out.insert(j, amp);
                }
                Image::Combination(terms) => {
                    for (j, c) in terms {
                        let t = amp.try_mul(c)?;
                        match out.get_mut(&j) {
                            Some(acc) => *acc = acc.try_add(&t)?,
                            None => {
                                out.insert(j, t);
                            }
                        }
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        self.entries = out;
        Ok(())
    }

    fn apply_pairs(&mut self, pairs: &[(usize, usize)]) -> Result<(), SimError> {
        for &(c, t) in pairs {
            self.check_line(c)?;
            self.check_line(t)?;
        }
        let n = self.n_lines;
        let masks: Vec<(u64, u64)> = pairs.iter().map(|&(c, t)| (1u64 << (n - 1 - c), 1u64 << (n - 1 - t))).collect();
        let old = std::mem::take(&mut self.entries);
        self.entries = old
            .into_iter()
            .map(|(idx, a)| {
                let j = masks.iter().fold(idx, |j, &(cm, tm)| if idx & cm != 0 { j ^ tm } else { j });
                (j, a)
            })
            .collect();
        Ok(())
    }

    pub fn apply_layer(&self, layer: &Layer) -> Result<StateVector, SimError> {
        let mut s = self.clone();
        match layer {
            Layer::Tensor(gates) => {
                for g in gates {
                    s.apply_gate(g)?;
                }
            }
            Layer::CNotLayer(pairs) => s.apply_pairs(pairs)?,
            Layer::CNotLayerLogDepth(subs) => {
                for p in subs {
                    s.apply_pairs(p)?;
                }
            }
        }
        Ok(s)
    }

    /// JSON list sorted by basis string.
    pub fn to_json(&self) -> serde_json::Value {
        let dump: Vec<DumpEntry> = self
            .entries
            .iter()
            .map(|(idx, a)| {
                let z = a.eval_numeric().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                DumpEntry { basis: index_to_bits(*idx, self.n_lines), amplitude: scalar_to_doc(a), approx: [z.re, z.im] }
            })
            .collect();
        serde_json::to_value(dump).expect("state dump serializes")
    }
}

/// `U_t ⋯ U_1 |x, 0…0⟩`, with `x` read as an `n_inputs`-bit number.
pub fn run(c: &Circuit, x: u64) -> Result<StateVector, SimError> {
    if c.n_inputs < 64 && x >> c.n_inputs != 0 {
        return Err(SimError::InputLength { input: x, n_inputs: c.n_inputs });
    }
    validate(c).map_err(CircuitError::Invalid)?;
    let start = if c.n_aux >= 64 { 0 } else { x << c.n_aux };
    let mut s = StateVector::basis_state(&c.context, c.width(), start)?;
    for l in &c.layers {
        s = s.apply_layer(l)?;
    }
    Ok(s)
}

/// `⟨z | F | x, 0…0⟩`, `z` a full-width index.
pub fn amplitude(c: &Circuit, x: u64, z: u64) -> Result<ExactScalar, SimError> {
    Ok(run(c, x)?.amplitude(z))
}

pub fn accept(c: &Circuit, x: u64, z: u64, mode: Mode) -> Result<Decision, SimError> {
    let amp = amplitude(c, x, z)?;
    let decide = |b: bool| if b { Decision::Accept } else { Decision::Reject };
    match mode {
        Mode::N => Ok(decide(!amp.is_zero())),
        Mode::E => {
            if c.context.has_conjugation() {
                let a2 = amp.abs2()?;
                if !(a2.is_zero() || a2.is_one()) {
                    return Err(SimError::NotEOperator(a2.to_string()));
                }
            } else {
                let a2 = amp.eval_numeric()?.norm_sqr();
                if a2.abs() > 1e-9 && (a2 - 1.0).abs() > 1e-9 {
                    return Err(SimError::NotEOperator(format!("{a2}")));
                }
            }
            Ok(decide(!amp.is_zero()))
        }
        Mode::B => {
            if !c.context.is_rational() {
                return Err(SimError::Unsupported(format!(
                    "bounded-error acceptance needs a rational context, got `{}`",
                    c.context.name()
                )));
            }
            let a = amp.to_rational().unwrap_or_else(BigRational::zero);
            let p = &a * &a;
            let quarter = BigRational::new(1.into(), 4.into());
            let three_quarters = BigRational::new(3.into(), 4.into());
            Ok(if p > three_quarters {
                Decision::Accept
            } else if p < quarter {
                Decision::Reject
            } else {
                Decision::InvalidGap
            })
        }
    }
}
