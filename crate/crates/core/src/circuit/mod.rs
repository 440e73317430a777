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

//! Layered circuit IR: gates, layers, validation and exact gate matrices.

mod gate;
mod matrix;
mod validate;

pub use gate::{bit, bits_to_index, block_bits, block_value, index_to_bits, with_bit, with_block, Gate};
pub(crate) use gate::Image;
pub use matrix::{gate_matrix, GateMatrix, MATRIX_LINE_CAP};
pub use validate::{validate, Diagnostic};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{AlgebraError, ContextRef};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("line {line} out of range for {width} lines")]
    LineOutOfRange { line: usize, width: usize },
    #[error("{lines} lines exceeds the cap of {cap}")]
    TooWide { lines: usize, cap: usize },
    #[error("context `{context}` lacks constant `{constant}`")]
    MissingConstant { context: String, constant: String },
    #[error("invalid bitstring `{0}`")]
    BadBits(String),
    #[error("invalid circuit: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Algebra(AlgebraError),
}

/// One step `U_i` of a circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// Kronecker product of line-disjoint gates; unlisted lines are identity.
    Tensor(Vec<Gate>),
    /// Controlled-nots on disjoint `(control, target)` pairs.
    CNotLayer(Vec<(usize, usize)>),
    /// A composition of spaced controlled-not sub-layers, applied in order.
    CNotLayerLogDepth(Vec<Vec<(usize, usize)>>),
}

impl Layer {
    /// Canonical form: tensor gates sorted by lowest line, pairs by control.
    pub fn canonical(&self) -> Layer {
        match self {
            Layer::Tensor(gates) => {
                let mut g = gates.clone();
                g.sort_by_key(Gate::min_line);
                Layer::Tensor(g)
            }
            Layer::CNotLayer(pairs) => {
                let mut p = pairs.clone();
                p.sort();
                Layer::CNotLayer(p)
            }
            Layer::CNotLayerLogDepth(subs) => Layer::CNotLayerLogDepth(
                subs.iter()
                    .map(|s| {
                        let mut p = s.clone();
                        p.sort();
                        p
                    })
                    .collect(),
            ),
        }
    }

    pub fn inverse(&self) -> Result<Layer, CircuitError> {
        Ok(match self {
            Layer::Tensor(gates) => Layer::Tensor(gates.iter().map(Gate::inverse).collect::<Result<_, _>>()?),
            Layer::CNotLayer(p) => Layer::CNotLayer(p.clone()),
            Layer::CNotLayerLogDepth(subs) => Layer::CNotLayerLogDepth(subs.iter().rev().cloned().collect()),
        })
    }

    pub fn is_cnot_layer(&self) -> bool {
        !matches!(self, Layer::Tensor(_))
    }
}

/// `n_inputs` input lines followed by `n_aux` auxiliary lines initialized to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_inputs: usize,
    pub n_aux: usize,
    pub layers: Vec<Layer>,
    pub context: ContextRef,
}

impl Circuit {
    pub fn new(n_inputs: usize, n_aux: usize, context: ContextRef) -> Self {
        Circuit { n_inputs, n_aux, layers: Vec::new(), context }
    }

    pub fn with_layers(mut self, layers: Vec<Layer>) -> Self {
        self.layers = layers;
        self
    }

    pub fn push(&mut self, layer: Layer) {
        self.layers.push(layer);
    }

    pub fn width(&self) -> usize {
        self.n_inputs + self.n_aux
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| match l {
            Layer::Tensor(g) => g.as_slice(),
            _ => &[],
        })
    }

    /// Number of distinct one-qubit matrices; reported, not enforced.
    pub fn distinct_one_qubit_gates(&self) -> usize {
        let mut seen: Vec<&Gate> = Vec::new();
        for g in self.gates() {
            if let Gate::OneQubit { matrix, .. } = g {
                if !seen.iter().any(|s| matches!(s, Gate::OneQubit { matrix: m, .. } if m == matrix)) {
                    seen.push(g);
                }
            }
        }
        seen.len()
    }

    /// Every gate except one-qubit gates, counting each controlled-not of a
    /// controlled-not layer.
    pub fn multi_line_gate_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Tensor(g) => g.iter().filter(|g| !g.is_one_qubit()).count(),
                Layer::CNotLayer(p) => p.len(),
                Layer::CNotLayerLogDepth(s) => s.iter().map(Vec::len).sum(),
            })
            .sum()
    }

    pub fn canonical(&self) -> Circuit {
        Circuit { layers: self.layers.iter().map(Layer::canonical).collect(), ..self.clone() }
    }

    /// Lines touched by any gate.
    pub fn used_lines(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for l in &self.layers {
            match l {
                Layer::Tensor(g) => g.iter().for_each(|g| out.extend(g.lines())),
                Layer::CNotLayer(p) => p.iter().for_each(|(a, b)| {
                    out.insert(*a);
                    out.insert(*b);
                }),
                Layer::CNotLayerLogDepth(s) => s.iter().flatten().for_each(|(a, b)| {
                    out.insert(*a);
                    out.insert(*b);
                }),
            }
        }
        out
    }
}

/// Layers reversed, each gate replaced by its inverse.
pub fn inverse_circuit(c: &Circuit) -> Result<Circuit, CircuitError> {
    let layers = c.layers.iter().rev().map(Layer::inverse).collect::<Result<_, _>>()?;
    Ok(Circuit { layers, ..c.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;

    #[test]
    fn self_inverse_circuit_round_trips() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let c = Circuit::new(3, 1, ctx.clone()).with_layers(vec![
            Layer::Tensor(vec![Gate::Toffoli { controls: vec![0, 1], target: 3 }, Gate::x(&ctx, 2)]),
            Layer::CNotLayer(vec![(0, 2), (1, 3)]),
            Layer::Tensor(vec![Gate::FanOut { targets: vec![1, 2], control: 0 }]),
        ]);
        let inv = inverse_circuit(&c).unwrap();
        assert_eq!(inv.layers[0], c.layers[2]);
        assert_eq!(inv.layers[1], c.layers[1]);
        assert_eq!(inverse_circuit(&inv).unwrap(), c);
    }

    #[test]
    fn counts() {
        let ctx = AlgebraContext::cyclotomic(8).unwrap();
        let c = Circuit::new(4, 0, ctx.clone()).with_layers(vec![
            Layer::Tensor(vec![Gate::h(&ctx, 0).unwrap(), Gate::h(&ctx, 1).unwrap(), Gate::x(&ctx, 2)]),
            Layer::CNotLayer(vec![(0, 1), (2, 3)]),
        ]);
        assert_eq!(c.distinct_one_qubit_gates(), 2);
        assert_eq!(c.multi_line_gate_count(), 2);
    }

    #[test]
    fn canonical_sorts_gates() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let l = Layer::Tensor(vec![Gate::x(&ctx, 3), Gate::x(&ctx, 1)]).canonical();
        match l {
            Layer::Tensor(g) => assert_eq!(g[0].min_line(), 1),
            _ => unreachable!(),
        }
    }
}
