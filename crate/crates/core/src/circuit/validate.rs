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

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::ExactScalar;

use super::gate::{block_bits, Gate};
use super::{Circuit, Layer};

/// A validation finding. `layer` and `gate` are 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub layer: Option<usize>,
    pub gate: Option<usize>,
    pub lines: Vec<usize>,
}

impl Diagnostic {
    fn new(message: impl Into<String>, layer: usize, gate: Option<usize>, lines: Vec<usize>) -> Self {
        Diagnostic { message: message.into(), layer: Some(layer), gate, lines }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(l) = self.layer {
            write!(f, ", layer {l}")?;
        }
        if let Some(g) = self.gate {
            write!(f, ", gate {g}")?;
        }
        match self.lines.as_slice() {
            [] => Ok(()),
            [l] => write!(f, ", line {l}"),
            ls => write!(f, ", lines {}", ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

fn numeric_unitary(m: &[[ExactScalar; 2]; 2]) -> bool {
    let mut v = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            match m[r][c].eval_numeric() {
                Ok(z) => v[r][c] = z,
                Err(_) => return false,
            }
        }
    }
    for r in 0..2 {
        for s in 0..2 {
            let dot: Complex64 = (0..2).map(|k| v[r][k] * v[s][k].conj()).sum();
            let want = if r == s { 1.0 } else { 0.0 };
            if (dot - Complex64::new(want, 0.0)).norm() > 1e-9 {
                return false;
            }
        }
    }
    true
}

#[allow(clippy::needless_range_loop)]
fn exact_unitary(m: &[[ExactScalar; 2]; 2]) -> Option<bool> {
    let mut conj = Vec::with_capacity(4);
    for row in m.iter() {
        for x in row {
            conj.push(x.conj().ok()?);
        }
    }
    let cj = |r: usize, c: usize| &conj[r * 2 + c];
    for r in 0..2 {
        for s in 0..2 {
            let dot = &(&m[r][0] * cj(s, 0)) + &(&m[r][1] * cj(s, 1));
            let ok = if r == s { dot.is_one() } else { dot.is_zero() };
            if !ok {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn check_gate(c: &Circuit, g: &Gate, layer: usize, index: usize, out: &mut Vec<Diagnostic>) {
    let width = c.width();
    let at = |msg: String, lines: Vec<usize>| Diagnostic::new(msg, layer, Some(index), lines);
    let lines = g.lines();
    let bad: Vec<usize> = lines.iter().copied().filter(|&l| l >= width).collect();
    if !bad.is_empty() {
        out.push(at(format!("line out of range (width {width})"), bad));
    }
    let mut seen = BTreeSet::new();
    let dups: BTreeSet<usize> = lines.iter().copied().filter(|l| !seen.insert(*l)).collect();
    if !dups.is_empty() {
        out.push(at("line used twice within one gate".into(), dups.into_iter().collect()));
    }

    let check_q = |q: u32, out: &mut Vec<Diagnostic>| -> bool {
        if q < 2 {
            out.push(at(format!("modulus {q} must be at least 2"), vec![]));
            return false;
        }
        true
    };
    let check_blocks = |q: u32, blocks: &[&Vec<usize>], out: &mut Vec<Diagnostic>| {
        let k = block_bits(q);
        for b in blocks {
            if b.len() != k {
                out.push(at(format!("block for q={q} must have {k} lines, found {}", b.len()), (*b).clone()));
            }
        }
    };

    match g {
        Gate::OneQubit { matrix, line } => {
            let foreign = matrix.iter().flatten().any(|x| {
                !std::sync::Arc::ptr_eq(x.context(), &c.context) && **x.context() != *c.context
            });
            if foreign {
                out.push(at("matrix entries belong to a different context".into(), vec![*line]));
            } else {
                let unitary = match exact_unitary(matrix) {
                    Some(u) => u,
                    None => numeric_unitary(matrix),
                };
                if !unitary {
                    out.push(at("one-qubit matrix is not unitary".into(), vec![*line]));
                }
            }
        }
        Gate::Toffoli { .. } | Gate::FanOut { .. } | Gate::CNot { .. } => {}
        Gate::ModQ { q, r, .. } => {
            if check_q(*q, out) && r >= q {
                out.push(at(format!("residue {r} must be below modulus {q}"), vec![]));
            }
        }
        Gate::AddModQ { q, digits, result, .. } => {
            if check_q(*q, out) {
                let mut blocks: Vec<&Vec<usize>> = digits.iter().collect();
                blocks.push(result);
                check_blocks(*q, &blocks, out);
            }
        }
        Gate::FanOutQ { q, targets, control, .. } => {
            if check_q(*q, out) {
                let mut blocks: Vec<&Vec<usize>> = targets.iter().collect();
                blocks.push(control);
                check_blocks(*q, &blocks, out);
            }
        }
        Gate::Qft { q, block, .. } => {
            if check_q(*q, out) {
                check_blocks(*q, &[block], out);
                if let Err(e) = Gate::qft_constants(&c.context, *q) {
                    out.push(at(e.to_string(), block.clone()));
                }
            }
        }
        Gate::Permutation { lines, table } => {
            if lines.len() > 16 || table.len() != 1usize << lines.len() {
                out.push(at(format!("permutation table needs 2^{} entries", lines.len()), lines.clone()));
            } else {
                let mut hit = vec![false; table.len()];
                let ok = table.iter().all(|&w| (w as usize) < hit.len() && !std::mem::replace(&mut hit[w as usize], true));
                if !ok {
                    out.push(at("permutation table is not a bijection".into(), lines.clone()));
                }
            }
        }
    }
}

fn check_pairs(pairs: &[(usize, usize)], width: usize, layer: usize, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    let mut clash = BTreeSet::new();
    for &(a, b) in pairs {
        for l in [a, b] {
            if l >= width {
                out.push(Diagnostic::new(format!("line out of range (width {width})"), layer, None, vec![l]));
            }
            if !seen.insert(l) {
                clash.insert(l);
            }
        }
    }
    if !clash.is_empty() {
        out.push(Diagnostic::new("non-disjoint pairs", layer, None, clash.into_iter().collect()));
    }
}

/// Checks every structural invariant; never aborts early.
pub fn validate(c: &Circuit) -> Result<(), Vec<Diagnostic>> {
    let mut out = Vec::new();
    let width = c.width();
    for (li, layer) in c.layers.iter().enumerate() {
        let ln = li + 1;
        match layer {
            Layer::Tensor(gates) => {
                let mut owner = vec![None; width];
                let mut overlaps = BTreeSet::new();
                for (gi, g) in gates.iter().enumerate() {
                    check_gate(c, g, ln, gi + 1, &mut out);
                    for l in g.lines().into_iter().collect::<BTreeSet<_>>() {
                        if l < width {
                            if owner[l].is_some() {
                                overlaps.insert(l);
                            }
                            owner[l] = Some(gi);
                        }
                    }
                }
                for l in overlaps {
                    out.push(Diagnostic::new("overlap", ln, None, vec![l]));
                }
            }
            Layer::CNotLayer(pairs) => check_pairs(pairs, width, ln, &mut out),
            Layer::CNotLayerLogDepth(subs) => {
                for s in subs {
                    check_pairs(s, width, ln, &mut out);
                }
            }
        }
    }
    if out.is_empty() { Ok(()) } else { Err(out) }
}
