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

use crate::algebra::{ContextRef, ExactScalar};

use super::CircuitError;

/// Number of qubit lines holding one base-`q` digit.
pub fn block_bits(q: u32) -> usize {
    assert!(q >= 2, "block gates need q >= 2");
    (32 - (q - 1).leading_zeros()) as usize
}

/// Bit of `line` in basis index `idx` over `n` lines; line 0 is the most
/// significant bit, so numeric order matches bitstring order.
#[inline]
pub fn bit(idx: u64, n: usize, line: usize) -> u64 {
    (idx >> (n - 1 - line)) & 1
}

#[inline]
pub fn with_bit(idx: u64, n: usize, line: usize, value: u64) -> u64 {
    let mask = 1u64 << (n - 1 - line);
    if value & 1 == 1 { idx | mask } else { idx & !mask }
}

/// Value of a block of lines, first line most significant.
pub fn block_value(idx: u64, n: usize, lines: &[usize]) -> u64 {
    lines.iter().fold(0, |acc, &l| (acc << 1) | bit(idx, n, l))
}

pub fn with_block(mut idx: u64, n: usize, lines: &[usize], value: u64) -> u64 {
    let k = lines.len();
    for (i, &l) in lines.iter().enumerate() {
        idx = with_bit(idx, n, l, value >> (k - 1 - i));
    }
    idx
}

/// Parses a bitstring such as `"0110"` into a basis index.
pub fn bits_to_index(bits: &str) -> Result<u64, CircuitError> {
    if bits.len() > 63 {
        return Err(CircuitError::BadBits(bits.to_string()));
    }
    bits.chars().try_fold(0u64, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(CircuitError::BadBits(bits.to_string())),
    })
}

pub fn index_to_bits(idx: u64, n: usize) -> String {
    (0..n).map(|l| if bit(idx, n, l) == 1 { '1' } else { '0' }).collect()
}

/// One gate of the IR. Block gates address digits through explicit line
/// lists, most significant line first.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    OneQubit { matrix: Box<[[ExactScalar; 2]; 2]>, line: usize },
    /// `∧_m(X)`: flips `target` when every control is 1.
    Toffoli { controls: Vec<usize>, target: usize },
    /// `F`: XORs `control` into every target.
    FanOut { targets: Vec<usize>, control: usize },
    /// `MOD_{q,r}`: flips `output` when the input bit-sum is `≡ r (mod q)`.
    ModQ { q: u32, r: u32, inputs: Vec<usize>, output: usize },
    /// `M_q`: adds the qudigit inputs into the result digit mod q.
    AddModQ { q: u32, digits: Vec<Vec<usize>>, result: Vec<usize>, inverse: bool },
    /// `F_q`: adds the control digit into each qudigit target mod q.
    FanOutQ { q: u32, targets: Vec<Vec<usize>>, control: Vec<usize>, inverse: bool },
    /// `H_q`: Fourier transform on one qudigit.
    Qft { q: u32, block: Vec<usize>, inverse: bool },
    CNot { control: usize, target: usize },
    /// Fixed permutation of the basis states of `lines`: value `v` maps to `table[v]`.
    Permutation { lines: Vec<usize>, table: Vec<u64> },
}

/// How a gate acts on one basis index.
pub(crate) enum Kernel {
    Perm(Box<dyn Fn(u64) -> u64 + Send + Sync>),
    /// Columns of the gate restricted to `lines`, indexed by the block value.
    Local { lines: Vec<usize>, columns: Vec<Vec<(u64, ExactScalar)>> },
}

/// Image of one basis state under a gate.
pub(crate) enum Image<'a> {
    Basis(u64),
    Combination(Vec<(u64, &'a ExactScalar)>),
}

impl Kernel {
    pub fn apply(&self, idx: u64, n: usize) -> Image<'_> {
        match self {
            Kernel::Perm(f) => Image::Basis(f(idx)),
            Kernel::Local { lines, columns } => {
                let v = block_value(idx, n, lines);
                Image::Combination(columns[v as usize].iter().map(|(w, c)| (with_block(idx, n, lines, *w), c)).collect())
            }
        }
    }
}

fn digit_sum(idx: u64, n: usize, q: u32, digits: &[Vec<usize>]) -> u64 {
    digits
        .iter()
        .map(|d| block_value(idx, n, d))
        .filter(|&v| v < q as u64)
        .sum::<u64>()
        % q as u64
}

impl Gate {
    pub fn one_qubit(matrix: [[ExactScalar; 2]; 2], line: usize) -> Gate {
        Gate::OneQubit { matrix: Box::new(matrix), line }
    }

    pub fn x(ctx: &ContextRef, line: usize) -> Gate {
        let (o, z) = (ExactScalar::one(ctx), ExactScalar::zero(ctx));
        Gate::one_qubit([[z.clone(), o.clone()], [o, z]], line)
    }

    /// Hadamard; needs the constant `h = 1/√2` in the context.
    pub fn h(ctx: &ContextRef, line: usize) -> Result<Gate, CircuitError> {
        let h = ExactScalar::symbol(ctx, "h").ok_or_else(|| CircuitError::MissingConstant {
            context: ctx.name().into(),
            constant: "h".into(),
        })?;
        Ok(Gate::one_qubit([[h.clone(), h.clone()], [h.clone(), -&h]], line))
    }

    /// All lines touched by the gate.
    pub fn lines(&self) -> Vec<usize> {
        match self {
            Gate::OneQubit { line, .. } => vec![*line],
            Gate::Toffoli { controls, target } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::FanOut { targets, control } => {
                let mut v = targets.clone();
                v.push(*control);
                v
            }
            Gate::ModQ { inputs, output, .. } => {
                let mut v = inputs.clone();
                v.push(*output);
                v
            }
            Gate::AddModQ { digits, result, .. } => digits.iter().flatten().chain(result).copied().collect(),
            Gate::FanOutQ { targets, control, .. } => targets.iter().flatten().chain(control).copied().collect(),
            Gate::Qft { block, .. } => block.clone(),
            Gate::CNot { control, target } => vec![*control, *target],
            Gate::Permutation { lines, .. } => lines.clone(),
        }
    }

    pub fn min_line(&self) -> usize {
        self.lines().into_iter().min().unwrap_or(0)
    }

    pub fn is_one_qubit(&self) -> bool {
        matches!(self, Gate::OneQubit { .. })
    }

    /// Gates whose matrix is a 0-1 permutation.
    pub fn is_classical(&self) -> bool {
        match self {
            Gate::OneQubit { matrix, .. } => one_qubit_flip(matrix).is_some(),
            Gate::Qft { .. } => false,
            _ => true,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::OneQubit { .. } => "one-qubit",
            Gate::Toffoli { .. } => "toffoli",
            Gate::FanOut { .. } => "fanout",
            Gate::ModQ { .. } => "mod",
            Gate::AddModQ { .. } => "add-mod",
            Gate::FanOutQ { .. } => "fanout-q",
            Gate::Qft { .. } => "qft",
            Gate::CNot { .. } => "cnot",
            Gate::Permutation { .. } => "permutation",
        }
    }

    /// The inverse gate. One-qubit gates need context conjugation.
    pub fn inverse(&self) -> Result<Gate, CircuitError> {
        Ok(match self {
            Gate::OneQubit { matrix, line } => {
                let m = matrix;
                let c = |x: &ExactScalar| x.conj().map_err(CircuitError::Algebra);
                Gate::one_qubit([[c(&m[0][0])?, c(&m[1][0])?], [c(&m[0][1])?, c(&m[1][1])?]], *line)
            }
            Gate::AddModQ { q, digits, result, inverse } => {
                Gate::AddModQ { q: *q, digits: digits.clone(), result: result.clone(), inverse: !inverse }
            }
            Gate::FanOutQ { q, targets, control, inverse } => {
                Gate::FanOutQ { q: *q, targets: targets.clone(), control: control.clone(), inverse: !inverse }
            }
            Gate::Qft { q, block, inverse } => Gate::Qft { q: *q, block: block.clone(), inverse: !inverse },
            Gate::Permutation { lines, table } => {
                let mut inv = vec![0; table.len()];
                for (v, &w) in table.iter().enumerate() {
                    inv[w as usize] = v as u64;
                }
                Gate::Permutation { lines: lines.clone(), table: inv }
            }
            other => other.clone(),
        })
    }

    /// Shifts every line through `map`.
    pub fn remap(&self, map: &dyn Fn(usize) -> usize) -> Gate {
        let v = |xs: &Vec<usize>| xs.iter().map(|&l| map(l)).collect::<Vec<_>>();
        let vv = |xs: &Vec<Vec<usize>>| xs.iter().map(v).collect::<Vec<_>>();
        match self {
            Gate::OneQubit { matrix, line } => Gate::OneQubit { matrix: matrix.clone(), line: map(*line) },
            Gate::Toffoli { controls, target } => Gate::Toffoli { controls: v(controls), target: map(*target) },
            Gate::FanOut { targets, control } => Gate::FanOut { targets: v(targets), control: map(*control) },
            Gate::ModQ { q, r, inputs, output } => Gate::ModQ { q: *q, r: *r, inputs: v(inputs), output: map(*output) },
            Gate::AddModQ { q, digits, result, inverse } => {
                Gate::AddModQ { q: *q, digits: vv(digits), result: v(result), inverse: *inverse }
            }
            Gate::FanOutQ { q, targets, control, inverse } => {
                Gate::FanOutQ { q: *q, targets: vv(targets), control: v(control), inverse: *inverse }
            }
            Gate::Qft { q, block, inverse } => Gate::Qft { q: *q, block: v(block), inverse: *inverse },
            Gate::CNot { control, target } => Gate::CNot { control: map(*control), target: map(*target) },
            Gate::Permutation { lines, table } => Gate::Permutation { lines: v(lines), table: table.clone() },
        }
    }

    /// `(ζ_q, 1/√q)` for a Fourier gate, looked up in the context.
    pub(crate) fn qft_constants(ctx: &ContextRef, q: u32) -> Result<(ExactScalar, ExactScalar), CircuitError> {
        let get = |name: String| {
            ExactScalar::symbol(ctx, &name)
                .ok_or_else(|| CircuitError::MissingConstant { context: ctx.name().into(), constant: name })
        };
        Ok((get(format!("zeta{q}"))?, get(format!("isqrt{q}"))?))
    }

    pub(crate) fn kernel(&self, ctx: &ContextRef, n: usize) -> Result<Kernel, CircuitError> {
        let g = self.clone();
        let perm = |f: Box<dyn Fn(u64) -> u64 + Send + Sync>| Ok(Kernel::Perm(f));
        match g {
            Gate::OneQubit { matrix, line } => {
                if let Some(flip) = one_qubit_flip(&matrix) {
                    return perm(Box::new(move |i| if flip { i ^ (1u64 << (n - 1 - line)) } else { i }));
                }
                let columns = (0..2)
                    .map(|c| {
                        (0..2u64)
                            .filter(|&r| !matrix[r as usize][c].is_zero())
                            .map(|r| (r, matrix[r as usize][c].clone()))
                            .collect()
                    })
                    .collect();
                Ok(Kernel::Local { lines: vec![line], columns })
            }
            Gate::Toffoli { controls, target } => perm(Box::new(move |i| {
                if controls.iter().all(|&c| bit(i, n, c) == 1) {
                    i ^ (1u64 << (n - 1 - target))
                } else {
                    i
                }
            })),
            Gate::CNot { control, target } => perm(Box::new(move |i| {
                if bit(i, n, control) == 1 { i ^ (1u64 << (n - 1 - target)) } else { i }
            })),
            Gate::FanOut { targets, control } => perm(Box::new(move |i| {
                if bit(i, n, control) == 1 {
                    targets.iter().fold(i, |acc, &t| acc ^ (1u64 << (n - 1 - t)))
                } else {
                    i
                }
            })),
            Gate::ModQ { q, r, inputs, output } => perm(Box::new(move |i| {
                let s: u64 = inputs.iter().map(|&l| bit(i, n, l)).sum();
                if s % q as u64 == r as u64 { i ^ (1u64 << (n - 1 - output)) } else { i }
            })),
            Gate::AddModQ { q, digits, result, inverse } => perm(Box::new(move |i| {
                let b = block_value(i, n, &result);
                let q64 = q as u64;
                if b >= q64 {
                    return i;
                }
                let s = digit_sum(i, n, q, &digits);
                let nb = if inverse { (b + q64 - s) % q64 } else { (b + s) % q64 };
                with_block(i, n, &result, nb)
            })),
            Gate::FanOutQ { q, targets, control, inverse } => perm(Box::new(move |i| {
                let c = block_value(i, n, &control);
                let q64 = q as u64;
                if c >= q64 {
                    return i;
                }
                let shift = if inverse { (q64 - c) % q64 } else { c };
                targets.iter().fold(i, |acc, t| {
                    let v = block_value(acc, n, t);
                    if v >= q64 { acc } else { with_block(acc, n, t, (v + shift) % q64) }
                })
            })),
            Gate::Permutation { lines, table } => {
                perm(Box::new(move |i| with_block(i, n, &lines, table[block_value(i, n, &lines) as usize])))
            }
            Gate::Qft { q, block, inverse } => {
                let (zeta, isq) = Self::qft_constants(ctx, q)?;
                let zeta = if inverse { zeta.pow(q - 1) } else { zeta };
                let powers: Vec<ExactScalar> = (0..q).map(|k| zeta.pow(k)).collect();
                let size = 1u64 << block.len();
                let columns = (0..size)
                    .map(|a| {
                        if a >= q as u64 {
                            vec![(a, ExactScalar::one(ctx))]
                        } else {
                            (0..q as u64).map(|b| (b, &isq * &powers[((a * b) % q as u64) as usize])).collect()
                        }
                    })
                    .collect();
                Ok(Kernel::Local { lines: block, columns })
            }
        }
    }
}

impl From<crate::algebra::AlgebraError> for CircuitError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        CircuitError::Algebra(e)
    }
}

/// `Some(false)` for the identity, `Some(true)` for X, `None` otherwise.
fn one_qubit_flip(m: &[[ExactScalar; 2]; 2]) -> Option<bool> {
    if m[0][1].is_zero() && m[1][0].is_zero() && m[0][0].is_one() && m[1][1].is_one() {
        Some(false)
    } else if m[0][0].is_zero() && m[1][1].is_zero() && m[0][1].is_one() && m[1][0].is_one() {
        Some(true)
    } else {
        None
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = |b: &bool| if *b { "INV" } else { "" };
        match self {
            Gate::OneQubit { matrix, line } => write!(
                f,
                "U [[{},{}],[{},{}]] [{line}]",
                matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]
            ),
            Gate::Toffoli { controls, target } => write!(f, "TOF {controls:?} -> {target}"),
            Gate::FanOut { targets, control } => write!(f, "FAN {targets:?} <- {control}"),
            Gate::ModQ { q, r, inputs, output } => write!(f, "MOD {q} {r} {inputs:?} -> {output}"),
            Gate::AddModQ { q, digits, result, inverse } => write!(f, "MQ{} {q} {digits:?} -> {result:?}", inv(inverse)),
            Gate::FanOutQ { q, targets, control, inverse } => {
                write!(f, "FQ{} {q} {targets:?} <- {control:?}", inv(inverse))
            }
            Gate::Qft { q, block, inverse } => write!(f, "HQ{} {q} {block:?}", inv(inverse)),
            Gate::CNot { control, target } => write!(f, "CX {control} -> {target}"),
            Gate::Permutation { lines, table } => write!(f, "PERM {lines:?} {table:?}"),
        }
    }
}
