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

//! Circuit-to-circuit constructions relating `M_q`, `F_q`, `MOD_q` and
//! fan-out, and an exhaustive equivalence checker over auxiliary lines.

mod builders;
mod equivalence;
mod lower;
mod registry;

pub use builders::{
    add_block_gate, build_f_from_fq, build_modhat, build_modq_from_mq, build_modqr_from_modq, build_mq_from_modq,
    build_mq_via_conjugation, fanout_target, modhat_target, modqr_target, mq_from_modq_stage_c, mq_target, MqFromModq,
};
pub use equivalence::{equivalence_check, Counterexample, EquivalenceReport, InputDomain, Verdict, EQUIVALENCE_LINE_CAP};
pub use lower::lower_mq_via_conjugation;
pub use registry::{builder_instance, BuilderInstance, BUILDER_NAMES};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::circuit::{Circuit, CircuitError, Layer};
use crate::statevec::SimError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("invalid arguments: {0}")]
    BadArgs(String),
    #[error("{lines} main lines exceeds the cap of {cap}")]
    TooWide { lines: usize, cap: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl From<CircuitError> for TransformError {
    fn from(e: CircuitError) -> Self {
        TransformError::Sim(SimError::Circuit(e))
    }
}

impl From<AlgebraError> for TransformError {
    fn from(e: AlgebraError) -> Self {
        TransformError::Sim(SimError::from(e))
    }
}

/// Gate kinds used by a circuit; controlled-not layers count as `cnot-layer`.
pub fn gate_kinds(c: &Circuit) -> BTreeSet<&'static str> {
    c.layers
        .iter()
        .flat_map(|l| match l {
            Layer::Tensor(g) => g.iter().map(|g| g.kind()).collect::<Vec<_>>(),
            _ => vec!["cnot-layer"],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Layer};

    fn qudigit_domain(n: usize, q: u32) -> InputDomain {
        let k = crate::circuit::block_bits(q);
        InputDomain::Qudigits { q, blocks: (0..n).map(|i| (i * k..(i + 1) * k).collect()).collect() }
    }

    #[test]
    fn conjugation_equals_mq() {
        for (n, q) in [(1, 3), (2, 2), (1, 5)] {
            let r = equivalence_check(&mq_target(n, q).unwrap(), &build_mq_via_conjugation(n, q).unwrap(), &InputDomain::All).unwrap();
            assert_eq!(r.verdict, Verdict::Equivalent, "n={n} q={q}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn modqr_and_modq_from_mq() {
        let r = equivalence_check(&modqr_target(3, 3, 1).unwrap(), &build_modqr_from_modq(3, 3, 1).unwrap(), &InputDomain::All).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert_eq!(build_modqr_from_modq(3, 3, 0).unwrap().n_aux, 0);
        for (n, q) in [(3, 3), (2, 2)] {
            let r = equivalence_check(&modqr_target(n, q, 0).unwrap(), &build_modq_from_mq(n, q).unwrap(), &InputDomain::All).unwrap();
            assert_eq!(r.verdict, Verdict::Equivalent);
            assert!(r.aux_restored);
        }
    }

    #[test]
    fn modhat_and_mq_from_modq() {
        let r = equivalence_check(&modhat_target(2, 3, 0).unwrap(), &build_modhat(2, 3, 0).unwrap(), &InputDomain::All).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        let c = build_mq_from_modq(2, 3).unwrap();
        assert!(!gate_kinds(&c).contains("add-mod"));
        let r = equivalence_check(&mq_target(2, 3).unwrap(), &c, &qudigit_domain(2, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent, "{:?}", r.counterexample);
        assert_eq!(r.inputs_checked, 36);
    }

    #[test]
    fn fanout_from_fq_and_chain() {
        let r = equivalence_check(&fanout_target(2, 3).unwrap(), &build_f_from_fq(2, 3).unwrap(), &InputDomain::All).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        let chain = lower_mq_via_conjugation(&build_modq_from_mq(2, 3).unwrap());
        assert!(!gate_kinds(&chain).contains("add-mod"));
        let r = equivalence_check(&modqr_target(2, 3, 0).unwrap(), &chain, &InputDomain::All).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
    }

    #[test]
    fn x_versus_identity_fails_at_zero() {
        let t = fanout_target(0, 2).unwrap();
        let x = Circuit::new(1, 0, t.context.clone()).with_layers(vec![Layer::Tensor(vec![Gate::x(&t.context, 0)])]);
        let id = Circuit::new(1, 0, t.context.clone());
        let r = equivalence_check(&x, &id, &InputDomain::All).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        let ce = r.counterexample.unwrap();
        assert_eq!((ce.x, ce.y), (0, 0));
    }

    #[test]
    fn dirty_aux_detected() {
        let t = fanout_target(1, 2).unwrap();
        let ctx = t.context.clone();
        let c = Circuit::new(2, 1, ctx.clone())
            .with_layers(vec![Layer::Tensor(vec![Gate::FanOut { targets: vec![0, 2], control: 1 }])]);
        let r = equivalence_check(&t, &c, &InputDomain::All).unwrap();
        assert!(!r.aux_restored);
        assert_eq!(r.verdict, Verdict::Counterexample);
    }
}
