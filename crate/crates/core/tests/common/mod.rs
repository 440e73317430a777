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

#![allow(dead_code)]

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qacc_core::algebra::{AlgebraContext, ExactScalar};
use qacc_core::circuit::{Circuit, Gate, Layer};

/// Seed for randomized suites; `QACC_SEED` overrides it.
pub fn seed(default: u64) -> u64 {
    std::env::var("QACC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn diag(ctx: &qacc_core::algebra::ContextRef, phase: ExactScalar, line: usize) -> Gate {
    let (o, z) = (ExactScalar::one(ctx), ExactScalar::zero(ctx));
    Gate::one_qubit([[o, z.clone()], [z, phase]], line)
}

/// A random circuit on at most 6 lines with at most 4 layers, exactly one of
/// them a controlled-not layer. Uses `cyc8` (Hadamard, phases, Toffoli,
/// fan-out, CX) or `cyc3` (`H_3`, `MOD_3`, phases) gates.
pub fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n = rng.gen_range(2..=6usize);
    let aux = rng.gen_range(0..=1usize.min(n - 1));
    let use3 = rng.gen_bool(0.3);
    let ctx = AlgebraContext::cyclotomic(if use3 { 3 } else { 8 }).unwrap();
    let z = ExactScalar::symbol(&ctx, "z").unwrap();
    let depth = rng.gen_range(1..=4usize);
    let cnot_at = rng.gen_range(0..depth);
    let mut c = Circuit::new(n - aux, aux, ctx.clone());
    for li in 0..depth {
        let mut lines: Vec<usize> = (0..n).collect();
        lines.shuffle(rng);
        if li == cnot_at {
            let pairs = rng.gen_range(1..=n / 2);
            c.push(Layer::CNotLayer(lines.chunks_exact(2).take(pairs).map(|p| (p[0], p[1])).collect()));
            continue;
        }
        let mut gates = Vec::new();
        let mut rest = lines.as_slice();
        while !rest.is_empty() {
            let k = rest.len();
            let choice = rng.gen_range(0..8);
            let (g, used) = match choice {
                0 if !use3 => (Gate::h(&ctx, rest[0]).unwrap(), 1),
                0 | 1 => (diag(&ctx, z.pow(rng.gen_range(1..8)), rest[0]), 1),
                2 => (Gate::x(&ctx, rest[0]), 1),
                3 if k >= 3 => (Gate::Toffoli { controls: vec![rest[0], rest[1]], target: rest[2] }, 3),
                4 if k >= 3 => (Gate::FanOut { targets: vec![rest[1], rest[2]], control: rest[0] }, 3),
                5 if k >= 2 => (Gate::CNot { control: rest[0], target: rest[1] }, 2),
                6 if use3 && k >= 2 => {
                    let mut b = vec![rest[0], rest[1]];
                    b.sort_unstable();
                    (Gate::Qft { q: 3, block: b, inverse: rng.gen_bool(0.5) }, 2)
                }
                7 if use3 && k >= 3 => {
                    (Gate::ModQ { q: 3, r: rng.gen_range(0..3), inputs: vec![rest[0], rest[1]], output: rest[2] }, 2 + 1)
                }
                _ => {
                    // Leave the line idle.
                    rest = &rest[1..];
                    continue;
                }
            };
            gates.push(g);
            rest = &rest[used..];
        }
        c.push(Layer::Tensor(gates));
    }
    c
}

fn bit(i: usize, n: usize, line: usize) -> usize {
    (i >> (n - 1 - line)) & 1
}

fn flip(i: usize, n: usize, line: usize) -> usize {
    i ^ (1 << (n - 1 - line))
}

fn block(i: usize, n: usize, lines: &[usize]) -> usize {
    lines.iter().fold(0, |acc, &l| (acc << 1) | bit(i, n, l))
}

fn set_block(mut i: usize, n: usize, lines: &[usize], v: usize) -> usize {
    for (j, &l) in lines.iter().enumerate() {
        let b = (v >> (lines.len() - 1 - j)) & 1;
        if bit(i, n, l) != b {
            i = flip(i, n, l);
        }
    }
    i
}

fn num(x: &ExactScalar) -> Complex64 {
    x.eval_numeric().unwrap()
}

/// Applies a map `basis -> [(basis, coefficient)]` to a dense vector.
fn apply(state: &[Complex64], f: impl Fn(usize) -> Vec<(usize, Complex64)>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (i, a) in state.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for (j, c) in f(i) {
            out[j] += a * c;
        }
    }
    out
}

fn apply_gate(state: &[Complex64], g: &Gate, n: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match g {
        Gate::OneQubit { matrix, line } => {
            let m: Vec<Vec<Complex64>> = matrix.iter().map(|r| r.iter().map(num).collect()).collect();
            apply(state, |i| {
                let b = bit(i, n, *line);
                let i0 = if b == 0 { i } else { flip(i, n, *line) };
                vec![(i0, m[0][b]), (flip(i0, n, *line), m[1][b])]
            })
        }
        Gate::Toffoli { controls, target } => apply(state, |i| {
            let fire = controls.iter().all(|&c| bit(i, n, c) == 1);
            vec![(if fire { flip(i, n, *target) } else { i }, one)]
        }),
        Gate::CNot { control, target } => {
            apply(state, |i| vec![(if bit(i, n, *control) == 1 { flip(i, n, *target) } else { i }, one)])
        }
        Gate::FanOut { targets, control } => apply(state, |i| {
            let mut j = i;
            if bit(i, n, *control) == 1 {
                for &t in targets {
                    j = flip(j, n, t);
                }
            }
            vec![(j, one)]
        }),
        Gate::ModQ { q, r, inputs, output } => apply(state, |i| {
            let s: usize = inputs.iter().map(|&l| bit(i, n, l)).sum();
            vec![(if s % *q as usize == *r as usize { flip(i, n, *output) } else { i }, one)]
        }),
        Gate::Qft { q, block: lines, inverse } => {
            let q = *q as usize;
            let sign = if *inverse { -1.0 } else { 1.0 };
            apply(state, |i| {
                let a = block(i, n, lines);
                if a >= q {
                    return vec![(i, one)];
                }
                (0..q)
                    .map(|b| {
                        let phase = sign * 2.0 * std::f64::consts::PI * (a * b) as f64 / q as f64;
                        (set_block(i, n, lines, b), Complex64::from_polar(1.0 / (q as f64).sqrt(), phase))
                    })
                    .collect()
            })
        }
        Gate::Permutation { lines, table } => {
            apply(state, |i| vec![(set_block(i, n, lines, table[block(i, n, lines)] as usize), one)])
        }
        other => panic!("dense oracle does not model {}", other.kind()),
    }
}

fn apply_pairs(state: &[Complex64], pairs: &[(usize, usize)], n: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    apply(state, |i| {
        let mut j = i;
        for &(c, t) in pairs {
            if bit(i, n, c) == 1 {
                j = flip(j, n, t);
            }
        }
        vec![(j, one)]
    })
}

/// Plain double-precision simulation from `|x, 0…0⟩`.
pub fn dense_run(c: &Circuit, x: u64) -> Vec<Complex64> {
    let n = c.width();
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
    state[(x as usize) << c.n_aux] = Complex64::new(1.0, 0.0);
    for layer in &c.layers {
        state = match layer {
            Layer::Tensor(gates) => gates.iter().fold(state, |s, g| apply_gate(&s, g, n)),
            Layer::CNotLayer(p) => apply_pairs(&state, p, n),
            Layer::CNotLayerLogDepth(subs) => subs.iter().fold(state, |s, p| apply_pairs(&s, p, n)),
        };
    }
    state
}
