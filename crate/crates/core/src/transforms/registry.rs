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

use crate::circuit::{block_bits, Circuit};

use super::builders::*;
use super::lower::lower_mq_via_conjugation;
use super::{InputDomain, TransformError};

/// Builder names accepted by [`builder_instance`].
pub const BUILDER_NAMES: [&str; 7] =
    ["mq_via_conjugation", "modqr_from_modq", "modq_from_mq", "modhat", "mq_from_modq", "f_from_fq", "modq_chain"];

/// A construction together with the gate it implements and the inputs on
/// which the two are compared.
#[derive(Clone, Debug, PartialEq)]
pub struct BuilderInstance {
    pub name: &'static str,
    pub target: Circuit,
    pub candidate: Circuit,
    pub domain: InputDomain,
}

/// Looks up a builder by name. `r` is used by `modqr_from_modq` and `modhat` only.
pub fn builder_instance(name: &str, n: usize, q: u32, r: u32) -> Result<BuilderInstance, TransformError> {
    let Some(&name) = BUILDER_NAMES.iter().find(|b| **b == name) else {
        return Err(TransformError::BadArgs(format!("unknown builder `{name}`; expected one of {}", BUILDER_NAMES.join(", "))));
    };
    let (target, candidate, domain) = match name {
        "mq_via_conjugation" => (mq_target(n, q)?, build_mq_via_conjugation(n, q)?, InputDomain::All),
        "modqr_from_modq" => (modqr_target(n, q, r)?, build_modqr_from_modq(n, q, r)?, InputDomain::All),
        "modq_from_mq" => (modqr_target(n, q, 0)?, build_modq_from_mq(n, q)?, InputDomain::All),
        "modhat" => (modhat_target(n, q, r)?, build_modhat(n, q, r)?, InputDomain::All),
        "mq_from_modq" => {
            let k = block_bits(q);
            let blocks = (0..n).map(|i| (i * k..(i + 1) * k).collect()).collect();
            (mq_target(n, q)?, build_mq_from_modq(n, q)?, InputDomain::Qudigits { q, blocks })
        }
        "f_from_fq" => (fanout_target(n, q)?, build_f_from_fq(n, q)?, InputDomain::All),
        _ => (modqr_target(n, q, 0)?, lower_mq_via_conjugation(&build_modq_from_mq(n, q)?), InputDomain::All),
    };
    Ok(BuilderInstance { name, target, candidate, domain })
}
