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

//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qacc_core::algebra::{
    ipoly_direct_product, AlgebraContext, ContextRef, ExactScalar, IntPoly, Interpolator, LatticeSpec,
};
use qacc_core::circuit::{Circuit, Gate, Layer};
use qacc_core::statevec::{self, line_cap, Decision, Mode, SimError};
use qacc_core::tensorgraph::{
    path_count, tg_amplitude_dp, tg_amplitude_paths, tg_build, tg_build_traced, tg_paths, ColorProduct, TensorGraph,
    VEdge, DEFAULT_PATH_CAP,
};
use qacc_core::transforms::{builder_instance, equivalence_check, gate_kinds, mq_target, Verdict};

/// Tolerance of the double-precision cross-check.
const NUMERIC_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn c1_conjugation() -> Outcome {
    let mut checked = 0;
    for q in 2..=5u32 {
        for n in 1..=2usize {
            let cand = qacc_core::transforms::build_mq_via_conjugation(n, q).map_err(|e| e.to_string())?;
            let target = mq_target(n, q).map_err(|e| e.to_string())?;
            let rep = equivalence_check(&target, &cand, &qacc_core::transforms::InputDomain::All)
                .map_err(|e| format!("q={q} n={n}: {e}"))?;
            if rep.verdict != Verdict::Equivalent {
                return Err(format!("q={q} n={n}: {:?}", rep.counterexample));
            }
            checked += rep.inputs_checked;
        }
    }
    Ok(format!("8 instances, {checked} basis inputs, exact"))
}

fn c2_builders() -> Outcome {
    let builders = ["modqr_from_modq", "modq_from_mq", "modhat", "mq_from_modq", "f_from_fq"];
    let mut passed = 0;
    let mut skipped = Vec::new();
    for name in builders {
        for q in 2..=5u32 {
            for n in 1..=3usize {
                let residues: Vec<u32> = if matches!(name, "modqr_from_modq" | "modhat") { (0..q).collect() } else { vec![0] };
                for r in residues {
                    let inst = builder_instance(name, n, q, r).map_err(|e| format!("{name} q={q} n={n} r={r}: {e}"))?;
                    let width = inst.candidate.width();
                    if width > line_cap() {
                        skipped.push(format!("{name}(q={q},n={n},r={r}): {width} lines"));
                        continue;
                    }
                    let rep = equivalence_check(&inst.target, &inst.candidate, &inst.domain)
                        .map_err(|e| format!("{name} q={q} n={n} r={r}: {e}"))?;
                    if rep.verdict != Verdict::Equivalent || !rep.aux_restored {
                        return Err(format!("{name} q={q} n={n} r={r}: {:?}", rep.counterexample));
                    }
                    passed += 1;
                }
            }
        }
    }
    let mut msg = format!("{passed} instances equivalent with auxiliaries restored");
    if !skipped.is_empty() {
        msg.push_str(&format!("; over the {}-line cap: {}", line_cap(), skipped.join(", ")));
    }
    Ok(msg)
}

fn c3_chain() -> Outcome {
    let inst = builder_instance("modq_chain", 2, 3, 0).map_err(|e| e.to_string())?;
    let allowed: BTreeSet<&str> = ["one-qubit", "toffoli", "fanout", "cnot", "cnot-layer", "fanout-q", "qft"].into();
    let kinds = gate_kinds(&inst.candidate);
    if !kinds.is_subset(&allowed) {
        return Err(format!("chain uses {kinds:?}"));
    }
    let rep = equivalence_check(&inst.target, &inst.candidate, &inst.domain).map_err(|e| e.to_string())?;
    if rep.verdict != Verdict::Equivalent || !rep.aux_restored {
        return Err(format!("{:?}", rep.counterexample));
    }
    Ok(format!("MOD_3 on 2 inputs from {kinds:?}, {} lines", inst.candidate.width()))
}

fn c4_tensor_graphs(circuits: &[(Circuit, u64)]) -> Outcome {
    let mut amps = 0;
    let mut path_checked = 0;
    for (k, (c, x)) in circuits.iter().enumerate() {
        let sv = statevec::run(c, *x).map_err(|e| format!("circuit {k}: {e}"))?;
        let g = tg_build(c, *x).map_err(|e| format!("circuit {k}: {e}"))?;
        g.check_structure().map_err(|e| format!("circuit {k}: {e}"))?;
        let by_paths = path_count(&g) <= BigInt::from(DEFAULT_PATH_CAP);
        for z in 0..(1u64 << c.width()) {
            let dp = tg_amplitude_dp(&g, z).map_err(|e| format!("circuit {k}: {e}"))?;
            if dp != sv.amplitude(z) {
                return Err(format!("circuit {k} z={z}: dp {dp} vs {}", sv.amplitude(z)));
            }
            if by_paths {
                let p = tg_amplitude_paths(&g, z, DEFAULT_PATH_CAP).map_err(|e| format!("circuit {k}: {e}"))?;
                if p != dp {
                    return Err(format!("circuit {k} z={z}: paths {p} vs dp {dp}"));
                }
                path_checked += 1;
            }
            amps += 1;
        }
    }
    Ok(format!("{} circuits, {amps} amplitudes by DP, {path_checked} also by path sum", circuits.len()))
}

fn half_sqrt(ctx: &ContextRef) -> ExactScalar {
    ExactScalar::symbol(ctx, "h").expect("cyc8 has h")
}

fn vedge(from: usize, to: usize, colors: ColorProduct, a: ExactScalar, b: ExactScalar) -> VEdge {
    VEdge { from, to, colors, amp0: a, amp1: b }
}

/// Two columns from `s` to `t` over three heights.
fn uncolored_example(ctx: &ContextRef) -> TensorGraph {
    let (o, z, h) = (ExactScalar::one(ctx), ExactScalar::zero(ctx), half_sqrt(ctx));
    let half = ExactScalar::from_ratio(ctx, 1, 2).unwrap();
    let one = ColorProduct::one;
    // s=0, a0..a3 = 1..4, b0..b3 = 5..8, t=9.
    let heights = vec![0, 0, 1, 2, 3, 0, 1, 2, 3, 3];
    let vedges = vec![
        vedge(1, 2, one(), z.clone(), o.clone()),
        vedge(2, 3, one(), h.clone(), h.clone()),
        vedge(3, 4, one(), half.clone(), z.clone()),
        vedge(5, 6, one(), o, z.clone()),
        vedge(6, 7, one(), h.clone(), -&h),
        vedge(7, 8, one(), half, z),
    ];
    let hedges = vec![(0, 1), (0, 5), (4, 9), (8, 9)];
    TensorGraph::from_parts(ctx, heights, vedges, hedges, 0, 9).unwrap()
}

/// The colored example: color `b` ties heights 1 and 3 of each dotted path.
fn colored_example(ctx: &ContextRef) -> TensorGraph {
    let (o, z, h) = (ExactScalar::one(ctx), ExactScalar::zero(ctx), half_sqrt(ctx));
    let (b, bt) = (ColorProduct::color(0), ColorProduct::anticolor(0));
    // s=0, a0=1, a1=2, b0=3, b1=4, m1=5, m2=6, a2=7, a3=8, b2=9, b3=10, t=11.
    let heights = vec![0, 0, 1, 0, 1, 1, 2, 2, 3, 2, 3, 3];
    let vedges = vec![
        vedge(1, 2, b.clone(), -&h, -&h),
        vedge(3, 4, bt.clone(), h.clone(), -&h),
        vedge(5, 6, ColorProduct::one(), -&h, h.clone()),
        vedge(7, 8, b, o.clone(), z.clone()),
        vedge(9, 10, bt, z, o),
    ];
    let hedges = vec![(0, 1), (0, 3), (2, 5), (4, 5), (6, 7), (6, 9), (8, 11), (10, 11)];
    TensorGraph::from_parts(ctx, heights, vedges, hedges, 0, 11).unwrap()
}

fn c5_worked_examples() -> Outcome {
    let ctx = AlgebraContext::cyclotomic(8).map_err(|e| e.to_string())?;
    let h = half_sqrt(&ctx);
    let (o, z) = (ExactScalar::one(&ctx), ExactScalar::zero(&ctx));
    let half = ExactScalar::from_ratio(&ctx, 1, 2).unwrap();

    let g = uncolored_example(&ctx);
    let paths = tg_paths(&g, DEFAULT_PATH_CAP).map_err(|e| e.to_string())?;
    let vectors: BTreeSet<Vec<(String, String)>> = paths
        .iter()
        .map(|p| p.iter().map(|&i| (g.vedges()[i].amp0.to_string(), g.vedges()[i].amp1.to_string())).collect())
        .collect();
    let expect = |v: [(&ExactScalar, &ExactScalar); 3]| -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    let left = expect([(&z, &o), (&h, &h), (&half, &z)]);
    let right = expect([(&o, &z), (&h, &-&h), (&half, &z)]);
    if vectors != BTreeSet::from([left, right]) {
        return Err(format!("uncolored path vectors {vectors:?}"));
    }

    let g = colored_example(&ctx);
    let z100 = 0b100;
    let dp = tg_amplitude_dp(&g, z100).map_err(|e| e.to_string())?;
    let ps = tg_amplitude_paths(&g, z100, DEFAULT_PATH_CAP).map_err(|e| e.to_string())?;
    if dp != half || ps != half {
        return Err(format!("|100> gives dp {dp}, paths {ps}"));
    }
    let z001 = tg_amplitude_dp(&g, 0b001).map_err(|e| e.to_string())?;
    if z001 != -&half {
        return Err(format!("|001> gives {z001}"));
    }
    Ok("uncolored: both path vectors match; colored: <100| = 1/2 by DP and by paths, <001| = -1/2".into())
}

/// `2^(2^(2t))`, saturating at `usize::MAX`.
fn width_bound(t: usize) -> usize {
    let e = 2 * t;
    if e >= 6 {
        return usize::MAX;
    }
    let inner = 1u32 << e;
    if inner >= usize::BITS {
        usize::MAX
    } else {
        1usize << inner
    }
}

fn c6_bounds(suite: &[(Circuit, u64)]) -> Outcome {
    let mut width_viol = Vec::new();
    let mut path_viol = Vec::new();
    let mut double_viol = Vec::new();
    let mut cnot_steps = 0;
    for (k, (c, x)) in suite.iter().enumerate() {
        let (_, steps) = tg_build_traced(c, *x).map_err(|e| format!("circuit {k}: {e}"))?;
        for s in &steps {
            if s.width_after > width_bound(s.layer + 1) {
                width_viol.push(format!("circuit {k} layer {}: width {}", s.layer + 1, s.width_after));
            }
            if s.multi_line_gates > 0 {
                let limit = &s.paths_before * BigInt::from(4u32).pow(s.multi_line_gates as u32);
                if s.paths_after > limit {
                    path_viol.push(format!("circuit {k} {}: {} -> {} paths", s.kind, s.paths_before, s.paths_after));
                }
            }
            if s.kind == "cnot-layer" {
                cnot_steps += 1;
                if s.width_after > 2 * s.width_before {
                    double_viol.push(format!(
                        "circuit {k} layer {}: width {} -> {} over {} pairs",
                        s.layer + 1,
                        s.width_before,
                        s.width_after,
                        s.multi_line_gates
                    ));
                }
            }
        }
    }
    let summary = format!(
        "{} circuits: width bound violations {}, path-growth violations {}, cnot-layer doubling violations {}/{}",
        suite.len(),
        width_viol.len(),
        path_viol.len(),
        double_viol.len(),
        cnot_steps
    );
    let detail: Vec<String> = width_viol.into_iter().chain(path_viol).chain(double_viol).take(3).collect();
    if detail.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; e.g. {}", detail.join("; ")))
    }
}

fn random_poly(rng: &mut ChaCha8Rng, m: usize, max_deg: u32) -> IntPoly {
    let terms: Vec<(BigInt, Vec<u32>)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut e = vec![0u32; m];
            let mut budget = max_deg;
            for v in e.iter_mut() {
                let d = rng.gen_range(0..=budget);
                *v = d;
                budget -= d;
            }
            (BigInt::from(rng.gen_range(-9i64..=9)), e)
        })
        .collect();
    IntPoly::from_terms(m, terms).unwrap()
}

fn random_scalar(rng: &mut ChaCha8Rng, ctx: &ContextRef) -> ExactScalar {
    let mut acc = ExactScalar::zero(ctx);
    for j in 0..ctx.dim() {
        acc = &acc + &ExactScalar::basis(ctx, j).scale_int(&BigInt::from(rng.gen_range(-20i64..=20)));
    }
    &acc * &ExactScalar::u_inverse(ctx).pow(rng.gen_range(0..3))
}

#[allow(clippy::eq_op)]
fn c7_algebra(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for inst in 0..200 {
        let m = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=4usize);
        let mut budget = 8u32;
        let polys: Vec<IntPoly> = (0..k)
            .map(|_| {
                let d = rng.gen_range(0..=budget.min(4));
                budget -= d;
                random_poly(&mut rng, m, d)
            })
            .collect();
        let degree = polys.iter().filter_map(IntPoly::total_degree).sum::<u32>();
        let spec = LatticeSpec::new(m, degree).map_err(|e| e.to_string())?;
        let interp = Interpolator::new(spec).product(&polys).map_err(|e| format!("instance {inst}: {e}"))?;
        let direct = ipoly_direct_product(m, &polys).map_err(|e| e.to_string())?;
        if interp != direct {
            return Err(format!("instance {inst}: {interp} vs {direct}"));
        }
    }
    for q in [3u32, 5] {
        let ctx = AlgebraContext::cyclotomic(q).map_err(|e| e.to_string())?;
        let (zero, one) = (ExactScalar::zero(&ctx), ExactScalar::one(&ctx));
        for t in 0..200 {
            let (a, b, c) = (random_scalar(&mut rng, &ctx), random_scalar(&mut rng, &ctx), random_scalar(&mut rng, &ctx));
            let ok = (&(&a + &b) + &c) == (&a + &(&b + &c))
                && (&(&a * &b) * &c) == (&a * &(&b * &c))
                && (&a * &(&b + &c)) == (&(&a * &b) + &(&a * &c))
                && (&a + &b) == (&b + &a)
                && (&a * &b) == (&b * &a)
                && (&a + &zero) == a
                && (&a * &one) == a
                && (&a - &a).is_zero()
                && (&(&a - &b) + &b) == a
                && (&a * &zero).is_zero();
            if !ok {
                return Err(format!("cyc{q} triple {t}: a={a} b={b} c={c}"));
            }
        }
    }
    Ok("200 interpolated products equal direct products; ring axioms on 200 triples in cyc3 and cyc5".into())
}

fn c8_modes() -> Outcome {
    let cyc8 = AlgebraContext::cyclotomic(8).map_err(|e| e.to_string())?;
    let rat = |u| AlgebraContext::rational(u).unwrap();
    let one_line = |ctx: &ContextRef, layers: Vec<Gate>| {
        Circuit::new(1, 0, ctx.clone()).with_layers(layers.into_iter().map(|g| Layer::Tensor(vec![g])).collect())
    };
    let h = Gate::h(&cyc8, 0).unwrap();
    let r = |ctx: &ContextRef, p: i64, q: i64| ExactScalar::from_ratio(ctx, p, q).unwrap();
    let rot = |u: i64, c: i64, s: i64| {
        let ctx = rat(u);
        let g = Gate::one_qubit([[r(&ctx, c, u), r(&ctx, -s, u)], [r(&ctx, s, u), r(&ctx, c, u)]], 0);
        one_line(&ctx, vec![g])
    };
    let r2 = rat(2);
    // (name, circuit, target, mode, expected); `None` expects an error.
    let suite: Vec<(&str, Circuit, u64, Mode, Option<Decision>)> = vec![
        ("H|0>, |1>, N", one_line(&cyc8, vec![h.clone()]), 1, Mode::N, Some(Decision::Accept)),
        ("X|0>, |0>, N", one_line(&cyc8, vec![Gate::x(&cyc8, 0)]), 0, Mode::N, Some(Decision::Reject)),
        ("H|0>, |1>, E (|amp|^2 = 1/2)", one_line(&cyc8, vec![h.clone()]), 1, Mode::E, None),
        ("X|0>, |1>, E", one_line(&cyc8, vec![Gate::x(&cyc8, 0)]), 1, Mode::E, Some(Decision::Accept)),
        ("HH|0>, |1>, E", one_line(&cyc8, vec![h.clone(), h]), 1, Mode::E, Some(Decision::Reject)),
        ("X|0>, |1>, B", one_line(&r2, vec![Gate::x(&r2, 0)]), 1, Mode::B, Some(Decision::Accept)),
        ("I|0>, |1>, B", one_line(&r2, vec![]), 1, Mode::B, Some(Decision::Reject)),
        ("rot(12/13)|0>, |0>, B", rot(13, 12, 5), 0, Mode::B, Some(Decision::Accept)),
        ("rot(3/5)|0>, |1>, B (16/25)", rot(5, 3, 4), 1, Mode::B, Some(Decision::InvalidGap)),
        ("X|0>, |1>, B in cyc8", one_line(&cyc8, vec![Gate::x(&cyc8, 0)]), 1, Mode::B, None),
    ];
    for (name, c, z, mode, expected) in &suite {
        let got = statevec::accept(c, 0, *z, *mode);
        let ok = match (expected, &got) {
            (Some(d), Ok(g)) => d == g,
            (None, Err(SimError::NotEOperator(_))) => *mode == Mode::E,
            (None, Err(SimError::Unsupported(_))) => *mode == Mode::B,
            _ => false,
        };
        if !ok {
            return Err(format!("{name}: expected {expected:?}, got {got:?}"));
        }
    }
    Ok(format!("{} hand-built cases match", suite.len()))
}

fn c9_numeric(circuits: &[(Circuit, u64)]) -> Outcome {
    let mut worst = 0.0f64;
    for (k, (c, x)) in circuits.iter().enumerate() {
        let sv = statevec::run(c, *x).map_err(|e| e.to_string())?;
        let dense = common::dense_run(c, *x);
        for (z, d) in dense.iter().enumerate() {
            let a: Complex64 = sv.amplitude(z as u64).eval_numeric().map_err(|e| e.to_string())?;
            let err = (a - d).norm();
            worst = worst.max(err);
            if err > NUMERIC_TOL {
                return Err(format!("circuit {k} z={z}: exact {a} vs double {d}"));
            }
        }
    }
    Ok(format!("{} circuits, max deviation {worst:.2e} (tolerance {NUMERIC_TOL:e})", circuits.len()))
}

fn main() {
    let seed = common::seed(20261015);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circuits: Vec<(Circuit, u64)> = (0..100)
        .map(|_| {
            let c = common::random_circuit(&mut rng);
            let x = rng.gen_range(0..(1u64 << c.n_inputs));
            (c, x)
        })
        .collect();
    // Bounds suite: the first 20 random circuits built from natively handled gates.
    let native: BTreeSet<&str> = ["one-qubit", "toffoli", "fanout", "cnot", "cnot-layer"].into();
    let bounds_suite: Vec<(Circuit, u64)> =
        circuits.iter().filter(|(c, _)| gate_kinds(c).is_subset(&native)).take(20).cloned().collect();
    assert_eq!(bounds_suite.len(), 20, "too few native circuits for seed {seed}");

    println!("acceptance suite, seed {seed}");
    let criteria: Vec<Criterion> = vec![
        ("conjugation identity for M_q", Box::new(c1_conjugation)),
        ("gate-equivalence builder grid", Box::new(c2_builders)),
        ("MOD_3 chain from fan-out and F_3 blocks", Box::new(c3_chain)),
        ("tensor graph amplitudes equal simulation", Box::new(|| c4_tensor_graphs(&circuits))),
        ("worked graph examples", Box::new(c5_worked_examples)),
        ("width and path-count bounds", Box::new(|| c6_bounds(&bounds_suite))),
        ("interpolation and ring axioms", Box::new(move || c7_algebra(seed))),
        ("E/N/B acceptance suite", Box::new(c8_modes)),
        ("double-precision cross-check", Box::new(|| c9_numeric(&circuits))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = run();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("[PASS] {} {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {} {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
