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

use crate::algebra::ExactScalar;
use crate::circuit::{block_value, index_to_bits, Circuit};
use crate::statevec::run;

use super::TransformError;

/// Exhaustive comparison refuses more main lines than this.
pub const EQUIVALENCE_LINE_CAP: usize = 12;

/// Which main-line inputs are compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputDomain {
    All,
    /// Only inputs where every listed block (main lines) holds a value `< q`.
    Qudigits { q: u32, blocks: Vec<Vec<usize>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub x: u64,
    pub y: u64,
    /// Auxiliary value of the offending candidate output; 0 for an amplitude mismatch.
    pub aux: u64,
    /// `⟨y | target | x⟩`.
    pub lhs: ExactScalar,
    /// `⟨y, aux | candidate | x, 0⟩`.
    pub rhs: ExactScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// The auxiliary setting used, always all zeros.
    pub aux_setting: String,
    pub counterexample: Option<Counterexample>,
    pub lines_compared: usize,
    pub aux_restored: bool,
    pub inputs_checked: usize,
}

impl InputDomain {
    fn contains(&self, x: u64, n: usize) -> bool {
        match self {
            InputDomain::All => true,
            InputDomain::Qudigits { q, blocks } => blocks.iter().all(|b| block_value(x, n, b) < *q as u64),
        }
    }
}

/// Checks `⟨y|target|x⟩ = ⟨y,0|candidate|x,0⟩` for all `x` in `domain` and
/// all `y`, and that the candidate leaves its auxiliaries at 0.
pub fn equivalence_check(
    target: &Circuit,
    candidate: &Circuit,
    domain: &InputDomain,
) -> Result<EquivalenceReport, TransformError> {
    let main = target.width();
    if main > EQUIVALENCE_LINE_CAP {
        return Err(TransformError::TooWide { lines: main, cap: EQUIVALENCE_LINE_CAP });
    }
    if candidate.n_inputs != main {
        return Err(TransformError::BadArgs(format!(
            "candidate has {} input lines, target has {main}",
            candidate.n_inputs
        )));
    }
    if target.context != candidate.context {
        return Err(TransformError::BadArgs("target and candidate use different contexts".into()));
    }
    let aux = candidate.n_aux;
    let mut report = EquivalenceReport {
        verdict: Verdict::Equivalent,
        aux_setting: index_to_bits(0, aux),
        counterexample: None,
        lines_compared: main,
        aux_restored: true,
        inputs_checked: 0,
    };
    for x in 0..(1u64 << main) {
        if !domain.contains(x, main) {
            continue;
        }
        report.inputs_checked += 1;
        let t = run(target, x)?;
        let c = run(candidate, x)?;
        let bad_aux = c.entries().keys().find(|&&idx| idx & ((1u64 << aux) - 1) != 0);
        if let Some(&idx) = bad_aux {
            let y = idx >> aux;
            report.verdict = Verdict::Counterexample;
            report.aux_restored = false;
            report.counterexample = Some(Counterexample { x, y, aux: idx & ((1u64 << aux) - 1), lhs: t.amplitude(y), rhs: c.amplitude(idx) });
            return Ok(report);
        }
        let ys: BTreeSet<u64> = t.entries().keys().copied().chain(c.entries().keys().map(|i| i >> aux)).collect();
        for y in ys {
            let (lhs, rhs) = (t.amplitude(y), c.amplitude(y << aux));
            if lhs != rhs {
                report.verdict = Verdict::Counterexample;
                report.counterexample = Some(Counterexample { x, y, aux: 0, lhs, rhs });
                return Ok(report);
            }
        }
    }
    Ok(report)
}
