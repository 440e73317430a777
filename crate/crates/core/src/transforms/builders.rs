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

//! Circuit builders. Every builder puts the main lines first, in the order
//! of its target gate, followed by auxiliary lines that start and end at 0.
//! All builders work over the `cyc<q>` context.

use crate::algebra::{AlgebraContext, ContextRef};
use crate::circuit::{block_bits, inverse_circuit, Circuit, Gate, Layer};

use super::TransformError;

fn ctx_for(q: u32) -> Result<ContextRef, TransformError> {
    if q < 2 {
        return Err(TransformError::BadArgs(format!("modulus {q} must be at least 2")));
    }
    Ok(AlgebraContext::cyclotomic(q)?)
}

fn blocks(start: usize, count: usize, k: usize) -> Vec<Vec<usize>> {
    (0..count).map(|i| (start + i * k..start + (i + 1) * k).collect()).collect()
}

fn xs(ctx: &ContextRef, lines: &[usize]) -> Layer {
    Layer::Tensor(lines.iter().map(|&l| Gate::x(ctx, l)).collect())
}

/// `M_q` on `n` digit blocks and a result block, as the target gate of
/// [`build_mq_via_conjugation`] and [`build_mq_from_modq`].
pub fn mq_target(n: usize, q: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    let k = block_bits(q);
    let b = blocks(0, n + 1, k);
    let g = Gate::AddModQ { q, digits: b[..n].to_vec(), result: b[n].clone(), inverse: false };
    Ok(Circuit::new((n + 1) * k, 0, ctx).with_layers(vec![Layer::Tensor(vec![g])]))
}

/// `M_q = (H_q^{⊗(n+1)})^{-1} F_q^{-1} H_q^{⊗(n+1)}` on `n` digit blocks and a
/// result block.
pub fn build_mq_via_conjugation(n: usize, q: u32) -> Result<Circuit, TransformError> {
    if n == 0 {
        return Err(TransformError::BadArgs("need at least one digit".into()));
    }
    let ctx = ctx_for(q)?;
    let k = block_bits(q);
    let b = blocks(0, n + 1, k);
    Ok(Circuit::new((n + 1) * k, 0, ctx).with_layers(conjugation_layers(q, &b[..n], &b[n], false)))
}

/// The three layers realizing `M_q` (or its inverse) on the given blocks.
pub(crate) fn conjugation_layers(q: u32, digits: &[Vec<usize>], result: &[usize], inverse: bool) -> Vec<Layer> {
    let mut all = digits.to_vec();
    all.push(result.to_vec());
    let qft = |inv: bool| Layer::Tensor(all.iter().map(|b| Gate::Qft { q, block: b.clone(), inverse: inv }).collect());
    let f = Gate::FanOutQ { q, targets: digits.to_vec(), control: result.to_vec(), inverse: !inverse };
    vec![qft(false), Layer::Tensor(vec![f]), qft(true)]
}

/// `MOD_{q,r}` on inputs `0..n` and output `n`.
pub fn modqr_target(n: usize, q: u32, r: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    if r >= q {
        return Err(TransformError::BadArgs(format!("residue {r} must be below {q}")));
    }
    let g = Gate::ModQ { q, r, inputs: (0..n).collect(), output: n };
    Ok(Circuit::new(n + 1, 0, ctx).with_layers(vec![Layer::Tensor(vec![g])]))
}

/// `MOD_{q,r}` from `MOD_q` with `(q - r) mod q` extra inputs held at 1.
pub fn build_modqr_from_modq(n: usize, q: u32, r: u32) -> Result<Circuit, TransformError> {
    let base = modqr_target(n, q, r)?;
    let extra = ((q - r) % q) as usize;
    let aux: Vec<usize> = (n + 1..n + 1 + extra).collect();
    let mut inputs: Vec<usize> = (0..n).collect();
    inputs.extend(&aux);
    let mut c = Circuit::new(n + 1, extra, base.context.clone());
    if extra > 0 {
        c.push(xs(&c.context, &aux));
    }
    c.push(Layer::Tensor(vec![Gate::ModQ { q, r: 0, inputs, output: n }]));
    if extra > 0 {
        c.push(xs(&c.context, &aux));
    }
    Ok(c)
}

/// `MOD_q` on `n` bits from one `M_q`: each bit becomes the low bit of a
/// zero-padded digit, a Toffoli on the negated sum block flips the output.
pub fn build_modq_from_mq(n: usize, q: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    let k = block_bits(q);
    let pads = k - 1;
    let mut next = n + 1;
    let mut digits = Vec::with_capacity(n);
    for i in 0..n {
        let mut block: Vec<usize> = (next..next + pads).collect();
        next += pads;
        block.push(i);
        digits.push(block);
    }
    let result: Vec<usize> = (next..next + k).collect();
    next += k;
    let mq = Gate::AddModQ { q, digits: digits.clone(), result: result.clone(), inverse: false };
    let mqinv = Gate::AddModQ { q, digits, result: result.clone(), inverse: true };
    let c = Circuit::new(n + 1, next - (n + 1), ctx.clone()).with_layers(vec![
        Layer::Tensor(vec![mq]),
        xs(&ctx, &result),
        Layer::Tensor(vec![Gate::Toffoli { controls: result.clone(), target: n }]),
        xs(&ctx, &result),
        Layer::Tensor(vec![mqinv]),
    ]);
    Ok(c)
}

/// Weight of line `j` within a block of `k` lines, MSB first.
fn weight(k: usize, j: usize) -> usize {
    1 << (k - 1 - j)
}

/// Fan-out gates copying each digit bit of weight `2^w` onto `2^w - 1`
/// auxiliary lines allocated from `next`. Returns the gates and, for use as
/// MOD inputs, every bit line together with its copies.
fn weighted_fanout(digits: &[Vec<usize>], next: &mut usize) -> (Vec<Gate>, Vec<usize>) {
    let mut gates = Vec::new();
    let mut inputs = Vec::new();
    for d in digits {
        let k = d.len();
        for (j, &line) in d.iter().enumerate() {
            let copies = weight(k, j) - 1;
            inputs.push(line);
            if copies > 0 {
                let targets: Vec<usize> = (*next..*next + copies).collect();
                *next += copies;
                inputs.extend(&targets);
                gates.push(Gate::FanOut { targets, control: line });
            }
        }
    }
    (gates, inputs)
}

/// Flips the output iff the numeric sum of the `n` digit blocks is `≡ r`.
pub fn modhat_target(n: usize, q: u32, r: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    if r >= q {
        return Err(TransformError::BadArgs(format!("residue {r} must be below {q}")));
    }
    let k = block_bits(q);
    let main = n * k + 1;
    if main > 16 {
        return Err(TransformError::BadArgs(format!("{main} lines is too many for a table gate")));
    }
    let mask = (1u64 << k) - 1;
    let table = (0..1u64 << main)
        .map(|idx| {
            let sum: u64 = (0..n).map(|i| (idx >> (1 + (n - 1 - i) * k)) & mask).sum();
            if sum % q as u64 == r as u64 { idx ^ 1 } else { idx }
        })
        .collect();
    let g = Gate::Permutation { lines: (0..main).collect(), table };
    Ok(Circuit::new(main, 0, ctx).with_layers(vec![Layer::Tensor(vec![g])]))
}

/// Tests `Σ digits ≡ r (mod q)` with one `MOD_{q,r}` fed by weighted
/// fan-out copies of the digit bits, then undoes the fan-out.
pub fn build_modhat(n: usize, q: u32, r: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    if r >= q {
        return Err(TransformError::BadArgs(format!("residue {r} must be below {q}")));
    }
    let k = block_bits(q);
    let main = n * k + 1;
    let digits = blocks(0, n, k);
    let mut next = main;
    let (fan, inputs) = weighted_fanout(&digits, &mut next);
    let mut c = Circuit::new(main, next - main, ctx);
    if !fan.is_empty() {
        c.push(Layer::Tensor(fan.clone()));
    }
    c.push(Layer::Tensor(vec![Gate::ModQ { q, r, inputs, output: main - 1 }]));
    if !fan.is_empty() {
        c.push(Layer::Tensor(fan));
    }
    Ok(c)
}

/// Stage `C` of [`build_mq_from_modq`] and the lines holding its output `S`.
pub struct MqFromModq {
    pub c: Circuit,
    pub s_lines: Vec<usize>,
    pub b_lines: Vec<usize>,
}

/// `C`: weighted fan-out, `MOD_{q,r}` into `m_r` for each `r`, then
/// `S_j = OR_{r : bit j of r} m_r` by De Morgan. The AND with the constant
/// bit `r_j` only selects which `m_r` enter each OR.
pub fn mq_from_modq_stage_c(n: usize, q: u32) -> Result<MqFromModq, TransformError> {
    let ctx = ctx_for(q)?;
    let k = block_bits(q);
    let main = (n + 1) * k;
    let b = blocks(0, n + 1, k);
    let digits = &b[..n];
    let mut next = main;
    let (fan, inputs) = weighted_fanout(digits, &mut next);
    let m: Vec<usize> = (next..next + q as usize).collect();
    next += q as usize;
    let s: Vec<usize> = (next..next + k).collect();
    next += k;
    let mut c = Circuit::new(main, next - main, ctx.clone());
    if !fan.is_empty() {
        c.push(Layer::Tensor(fan));
    }
    for (r, &out) in m.iter().enumerate() {
        c.push(Layer::Tensor(vec![Gate::ModQ { q, r: r as u32, inputs: inputs.clone(), output: out }]));
    }
    c.push(xs(&ctx, &m));
    for j in 0..k {
        let controls: Vec<usize> = (0..q as usize).filter(|r| (r >> j) & 1 == 1).map(|r| m[r]).collect();
        c.push(Layer::Tensor(vec![Gate::Toffoli { controls, target: s[k - 1 - j] }]));
    }
    let mut restore = s.clone();
    restore.extend(&m);
    c.push(xs(&ctx, &restore));
    Ok(MqFromModq { c, s_lines: s, b_lines: b[n].clone() })
}

/// `T|S, b⟩ = |S, (b + S) mod q⟩`, identity when either block is not a qudigit.
pub fn add_block_gate(q: u32, s: &[usize], b: &[usize]) -> Gate {
    let k = s.len();
    let mask = (1u64 << k) - 1;
    let table = (0..1u64 << (2 * k))
        .map(|idx| {
            let (sv, bv) = (idx >> k, idx & mask);
            if sv < q as u64 && bv < q as u64 { (sv << k) | ((bv + sv) % q as u64) } else { idx }
        })
        .collect();
    let mut lines = s.to_vec();
    lines.extend(b);
    Gate::Permutation { lines, table }
}

/// `M_q` as `C`, `T`, `C^{-1}` using only `MOD_{q,r}`, fan-out, Toffoli, X and
/// one table gate. Matches `M_q` on inputs whose digit blocks are qudigits.
pub fn build_mq_from_modq(n: usize, q: u32) -> Result<Circuit, TransformError> {
    if n == 0 {
        return Err(TransformError::BadArgs("need at least one digit".into()));
    }
    let st = mq_from_modq_stage_c(n, q)?;
    let inv = inverse_circuit(&st.c)?;
    let mut c = st.c.clone();
    c.push(Layer::Tensor(vec![add_block_gate(q, &st.s_lines, &st.b_lines)]));
    c.layers.extend(inv.layers);
    Ok(c)
}

/// Fan-out of line `n` onto lines `0..n`, over `cyc<q>` to match
/// [`build_f_from_fq`].
pub fn fanout_target(n: usize, q: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    let g = Gate::FanOut { targets: (0..n).collect(), control: n };
    Ok(Circuit::new(n + 1, 0, ctx).with_layers(vec![Layer::Tensor(vec![g])]))
}

/// Fan-out from `F_q`: the control bit becomes the low bit of a padded
/// digit, `F_q` copies it into zeroed target digits, controlled-nots move
/// each low bit onto its target, and `F_q^{-1}` clears the digits.
pub fn build_f_from_fq(n: usize, q: u32) -> Result<Circuit, TransformError> {
    let ctx = ctx_for(q)?;
    let k = block_bits(q);
    let mut next = n + 1;
    let mut control: Vec<usize> = (next..next + k - 1).collect();
    next += k - 1;
    control.push(n);
    let targets = blocks(next, n, k);
    next += n * k;
    let pairs = targets.iter().enumerate().map(|(i, t)| (t[k - 1], i)).collect();
    let fq = |inverse| Layer::Tensor(vec![Gate::FanOutQ { q, targets: targets.clone(), control: control.clone(), inverse }]);
    Ok(Circuit::new(n + 1, next - (n + 1), ctx).with_layers(vec![fq(false), Layer::CNotLayer(pairs), fq(true)]))
}
