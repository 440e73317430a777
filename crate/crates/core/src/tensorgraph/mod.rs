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

//! Tensor graphs: path-sum representations of circuit output states with
//! colored vertical edges binding the two heights of a controlled-not.

mod build;
mod color;
mod eval;
mod graph;
pub mod json;

pub use build::{tg_build, tg_build_traced, BuildStep, DENSE_LINE_CAP};
pub use color::{color_mul, ColorProduct, ColorTerm};
pub use eval::{path_count, tg_amplitude_dp, tg_amplitude_paths, tg_metrics, tg_paths, GraphMetrics, DEFAULT_PATH_CAP};
pub use graph::{
    tg_apply_cnot_layer, tg_apply_fanout, tg_apply_one_qubit, tg_apply_toffoli, tg_init, Mat2, TensorGraph, VEdge,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::circuit::CircuitError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TgError {
    #[error("malformed tensor graph: {0}")]
    Malformed(String),
    #[error("color product {0} left at the terminal; graph is not color consistent")]
    ResidualColor(String),
    #[error("{count} paths exceeds the cap of {cap}")]
    PathCapExceeded { count: String, cap: u64 },
    #[error("line {line} out of range for {lines} lines")]
    LineOutOfRange { line: usize, lines: usize },
    #[error("{gate} on {lines} lines exceeds the dense expansion cap of {cap}")]
    DenseCapExceeded { gate: &'static str, lines: usize, cap: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl From<AlgebraError> for TgError {
    fn from(e: AlgebraError) -> Self {
        TgError::Circuit(CircuitError::Algebra(e))
    }
}
