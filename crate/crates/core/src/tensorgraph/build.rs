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

use num_bigint::BigInt;

use crate::algebra::{ContextRef, ExactScalar};
use crate::circuit::{gate_matrix, validate, Circuit, CircuitError, Gate, Layer};

use super::eval::path_count;
use super::graph::{
    add_product_terms, tg_apply_cnot_layer, tg_apply_fanout, tg_apply_one_qubit, tg_apply_toffoli, tg_init, Mat2,
    TensorGraph,
};
use super::TgError;

/// Dense fallback refuses gates on more lines than this.
pub const DENSE_LINE_CAP: usize = 8;

/// One graph update during [`tg_build_traced`].
#[derive(Clone, Debug, PartialEq)]
pub struct BuildStep {
    /// 0-based layer index.
    pub layer: usize,
    pub kind: String,
    /// Multi-line gates applied in this step (one per controlled-not pair).
    pub multi_line_gates: usize,
    pub dense: bool,
    pub width_before: usize,
    pub width_after: usize,
    pub paths_before: BigInt,
    pub paths_after: BigInt,
}

fn unit(ctx: &ContextRef, row: u64, col: u64) -> Mat2 {
    let mut m: Mat2 = std::array::from_fn(|_| std::array::from_fn(|_| ExactScalar::zero(ctx)));
    m[row as usize][col as usize] = ExactScalar::one(ctx);
    m
}

type DenseTerms = (usize, usize, Vec<BTreeMap<usize, Mat2>>);

/// `O - I` on the gate's lines as rank-one product terms, one per nonzero
/// entry, spanning the lines between its lowest and highest line.
fn dense_terms(g: &Gate, ctx: &ContextRef) -> Result<DenseTerms, TgError> {
    let mut lines = g.lines();
    lines.sort_unstable();
    if lines.len() > DENSE_LINE_CAP {
        return Err(TgError::DenseCapExceeded { gate: g.kind(), lines: lines.len(), cap: DENSE_LINE_CAP });
    }
    let k = lines.len();
    let local = g.remap(&|l| lines.binary_search(&l).expect("line of gate"));
    let m = gate_matrix(&local, k, ctx)?;
    let mut terms = Vec::new();
    for col in 0..(1u64 << k) {
        let mut entries: BTreeMap<u64, ExactScalar> = m.column(col).clone();
        let d = entries.remove(&col).unwrap_or_else(|| ExactScalar::zero(ctx));
        let diag = &d - &ExactScalar::one(ctx);
        if !diag.is_zero() {
            entries.insert(col, diag);
        }
        for (row, v) in entries {
            let mut t = BTreeMap::new();
            for (j, &line) in lines.iter().enumerate() {
                let sh = k - 1 - j;
                let mut f = unit(ctx, (row >> sh) & 1, (col >> sh) & 1);
                if j == 0 {
                    for r in f.iter_mut().flatten() {
                        *r = &*r * &v;
                    }
                }
                t.insert(line, f);
            }
            terms.push(t);
        }
    }
    Ok((lines[0], lines[k - 1], terms))
}

fn apply_gate(g: &TensorGraph, gate: &Gate, ctx: &ContextRef) -> Result<(TensorGraph, bool), TgError> {
    Ok(match gate {
        Gate::OneQubit { matrix, line } => (tg_apply_one_qubit(g, matrix, *line)?, false),
        Gate::Toffoli { controls, target } => (tg_apply_toffoli(g, controls, *target)?, false),
        Gate::CNot { control, target } => (tg_apply_toffoli(g, &[*control], *target)?, false),
        Gate::FanOut { targets, control } => (tg_apply_fanout(g, targets, *control)?, false),
        other => {
            let (lo, hi, terms) = dense_terms(other, ctx)?;
            let mut out = g.clone();
            add_product_terms(&mut out, lo, hi, &terms);
            out.lowerings.push(format!("{}: dense expansion, {} terms", other.kind(), terms.len()));
            (out, true)
        }
    })
}

/// Graph for `U_t ⋯ U_1 |x, 0…0⟩` plus one trace entry per gate or
/// controlled-not layer.
pub fn tg_build_traced(c: &Circuit, x: u64) -> Result<(TensorGraph, Vec<BuildStep>), TgError> {
    validate(c).map_err(CircuitError::Invalid)?;
    if c.n_inputs < 64 && x >> c.n_inputs != 0 {
        return Err(TgError::Malformed(format!("input {x} does not fit in {} lines", c.n_inputs)));
    }
    let ctx = &c.context;
    let n = c.width();
    let mut g = tg_init(ctx, n, if c.n_aux >= 64 { 0 } else { x << c.n_aux });
    let mut steps = Vec::new();
    for (li, layer) in c.layers.iter().enumerate() {
        let mut record = |g: &TensorGraph, next: TensorGraph, kind: String, multi: usize, dense: bool| {
            steps.push(BuildStep {
                layer: li,
                kind,
                multi_line_gates: multi,
                dense,
                width_before: g.width(),
                width_after: next.width(),
                paths_before: path_count(g),
                paths_after: path_count(&next),
            });
            next
        };
        match layer {
            Layer::Tensor(gates) => {
                for gate in gates {
                    let (next, dense) = apply_gate(&g, gate, ctx)?;
                    let multi = usize::from(!gate.is_one_qubit());
                    g = record(&g, next, gate.kind().to_string(), multi, dense);
                }
            }
            Layer::CNotLayer(pairs) => {
                let next = tg_apply_cnot_layer(&g, pairs)?;
                g = record(&g, next, "cnot-layer".into(), pairs.len(), false);
            }
            Layer::CNotLayerLogDepth(subs) => {
                for p in subs {
                    let next = tg_apply_cnot_layer(&g, p)?;
                    g = record(&g, next, "cnot-layer".into(), p.len(), false);
                }
            }
        }
    }
    Ok((g, steps))
}

pub fn tg_build(c: &Circuit, x: u64) -> Result<TensorGraph, TgError> {
    Ok(tg_build_traced(c, x)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::statevec;
    use crate::tensorgraph::tg_amplitude_dp;

    fn check_all(c: &Circuit) {
        let n = c.width();
        for x in 0..(1u64 << c.n_inputs) {
            let s = statevec::run(c, x).unwrap();
            let g = tg_build(c, x).unwrap();
            g.check_structure().unwrap();
            for z in 0..(1u64 << n) {
                assert_eq!(tg_amplitude_dp(&g, z).unwrap(), s.amplitude(z), "x={x} z={z}");
            }
        }
    }

    #[test]
    fn empty_circuit_is_init() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let c = Circuit::new(2, 1, ctx.clone());
        assert_eq!(tg_build(&c, 0b10).unwrap(), tg_init(&ctx, 3, 0b100));
    }

    #[test]
    fn mixed_circuit_matches_oracle() {
        let ctx = AlgebraContext::cyclotomic(8).unwrap();
        let c = Circuit::new(4, 0, ctx.clone()).with_layers(vec![
            Layer::Tensor(vec![Gate::h(&ctx, 0).unwrap(), Gate::h(&ctx, 2).unwrap()]),
            Layer::CNotLayer(vec![(0, 1), (2, 3)]),
            Layer::Tensor(vec![Gate::Toffoli { controls: vec![3, 0], target: 2 }]),
            Layer::Tensor(vec![Gate::FanOut { targets: vec![0, 3], control: 1 }, Gate::h(&ctx, 2).unwrap()]),
        ]);
        check_all(&c);
    }

    #[test]
    fn dense_fallback_matches_oracle() {
        let ctx = AlgebraContext::cyclotomic(3).unwrap();
        let c = Circuit::new(3, 1, ctx.clone()).with_layers(vec![
            Layer::Tensor(vec![Gate::ModQ { q: 3, r: 1, inputs: vec![0, 2, 1], output: 3 }]),
            Layer::Tensor(vec![Gate::Qft { q: 3, block: vec![1, 2], inverse: false }]),
        ]);
        check_all(&c);
        let g = tg_build(&c, 0b101).unwrap();
        assert_eq!(g.lowerings().len(), 2);
    }
}
