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

use crate::algebra::{ContextRef, ExactScalar};

use super::gate::{Gate, Image};
use super::CircuitError;

/// Largest width realized densely by [`gate_matrix`].
pub const MATRIX_LINE_CAP: usize = 12;

/// Square matrix over `G` stored by sparse columns.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    ctx: ContextRef,
    dim: usize,
    columns: Vec<BTreeMap<u64, ExactScalar>>,
}

impl GateMatrix {
    pub fn identity(ctx: &ContextRef, dim: usize) -> Self {
        let columns = (0..dim as u64).map(|c| BTreeMap::from([(c, ExactScalar::one(ctx))])).collect();
        GateMatrix { ctx: ctx.clone(), dim, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: u64, col: u64) -> ExactScalar {
        self.columns[col as usize].get(&row).cloned().unwrap_or_else(|| ExactScalar::zero(&self.ctx))
    }

    pub fn column(&self, col: u64) -> &BTreeMap<u64, ExactScalar> {
        &self.columns[col as usize]
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    /// `self · other`.
    pub fn mul(&self, other: &GateMatrix) -> GateMatrix {
        assert_eq!(self.dim, other.dim);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut out: BTreeMap<u64, ExactScalar> = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k as usize] {
                        let term = a * b;
                        match out.get_mut(i) {
                            Some(acc) => *acc = &*acc + &term,
                            None => {
                                out.insert(*i, term);
                            }
                        }
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        GateMatrix { ctx: self.ctx.clone(), dim: self.dim, columns }
    }

    /// Conjugate transpose; requires context conjugation.
    pub fn adjoint(&self) -> Result<GateMatrix, CircuitError> {
        let mut columns = vec![BTreeMap::new(); self.dim];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r as usize].insert(c as u64, v.conj()?);
            }
        }
        Ok(GateMatrix { ctx: self.ctx.clone(), dim: self.dim, columns })
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(c, col)| col.len() == 1 && col.get(&(c as u64)).is_some_and(ExactScalar::is_one))
    }

    /// Exactly one 1 per row and column, all other entries 0.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.dim];
        for col in &self.columns {
            if col.len() != 1 {
                return false;
            }
            let (r, v) = col.iter().next().expect("one entry");
            if !v.is_one() || seen[*r as usize] {
                return false;
            }
            seen[*r as usize] = true;
        }
        true
    }

    /// `M M† = I`, exactly.
    pub fn is_unitary(&self) -> Result<bool, CircuitError> {
        Ok(self.mul(&self.adjoint()?).is_identity())
    }
}

/// Dense-size matrix of `g` acting on `width` lines.
pub fn gate_matrix(g: &Gate, width: usize, ctx: &ContextRef) -> Result<GateMatrix, CircuitError> {
    if width > MATRIX_LINE_CAP {
        return Err(CircuitError::TooWide { lines: width, cap: MATRIX_LINE_CAP });
    }
    if let Some(&l) = g.lines().iter().find(|&&l| l >= width) {
        return Err(CircuitError::LineOutOfRange { line: l, width });
    }
    let kernel = g.kernel(ctx, width)?;
    let dim = 1usize << width;
    let columns = (0..dim as u64)
        .map(|c| match kernel.apply(c, width) {
            Image::Basis(r) => BTreeMap::from([(r, ExactScalar::one(ctx))]),
            Image::Combination(v) => v.into_iter().map(|(r, s)| (r, s.clone())).collect(),
        })
        .collect();
    Ok(GateMatrix { ctx: ctx.clone(), dim, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;

    #[test]
    fn cnot_swaps_10_and_11() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let m = gate_matrix(&Gate::CNot { control: 0, target: 1 }, 2, &ctx).unwrap();
        assert!(m.is_permutation());
        assert!(m.entry(0b11, 0b10).is_one());
        assert!(m.entry(0b10, 0b11).is_one());
        assert!(m.entry(0b00, 0b00).is_one());
        assert!(m.entry(0b01, 0b01).is_one());
    }

    #[test]
    fn qft3_fixes_the_non_qudigit() {
        let ctx = AlgebraContext::cyclotomic(3).unwrap();
        let m = gate_matrix(&Gate::Qft { q: 3, block: vec![0, 1], inverse: false }, 2, &ctx).unwrap();
        assert_eq!(m.column(3).len(), 1);
        assert!(m.entry(3, 3).is_one());
        assert!(m.is_unitary().unwrap());
    }

    #[test]
    fn mod3_on_three_ones() {
        let ctx = AlgebraContext::cyclotomic(3).unwrap();
        let g = Gate::ModQ { q: 3, r: 0, inputs: vec![0, 1, 2], output: 3 };
        let m = gate_matrix(&g, 4, &ctx).unwrap();
        assert!(m.entry(0b1111, 0b1110).is_one());
    }

    #[test]
    fn width_cap() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        assert!(matches!(gate_matrix(&Gate::x(&ctx, 0), 13, &ctx), Err(CircuitError::TooWide { .. })));
    }
}
