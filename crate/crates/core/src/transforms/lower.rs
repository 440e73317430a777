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

use crate::circuit::{Circuit, Gate, Layer};

use super::builders::conjugation_layers;

/// Replaces every tensor layer holding `M_q` gates by three layers: Fourier
/// transforms (plus the layer's other gates), inverse base-`q` fan-outs,
/// inverse Fourier transforms.
pub fn lower_mq_via_conjugation(c: &Circuit) -> Circuit {
    let mut layers = Vec::with_capacity(c.layers.len());
    for layer in &c.layers {
        let Layer::Tensor(gates) = layer else {
            layers.push(layer.clone());
            continue;
        };
        if !gates.iter().any(|g| matches!(g, Gate::AddModQ { .. })) {
            layers.push(layer.clone());
            continue;
        }
        let mut out = [Vec::new(), Vec::new(), Vec::new()];
        for g in gates {
            match g {
                Gate::AddModQ { q, digits, result, inverse } => {
                    for (slot, l) in conjugation_layers(*q, digits, result, *inverse).into_iter().enumerate() {
                        if let Layer::Tensor(gs) = l {
                            out[slot].extend(gs);
                        }
                    }
                }
                other => out[0].push(other.clone()),
            }
        }
        layers.extend(out.into_iter().map(Layer::Tensor));
    }
    Circuit { layers, ..c.clone() }
}
