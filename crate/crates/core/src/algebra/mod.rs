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

//! Exact amplitude arithmetic in `G = Q(A)(B)`.
//!
//! Elements are stored as `Σ_j (s_j / u^r) β_j` with integer polynomials
//! `s_j ∈ Z[A]` and one shared power `r` of the context denominator `u`.

mod context;
mod cyclotomic;
mod interp;
pub mod json;
mod poly;
mod scalar;

pub use context::{AlgebraContext, ContextRef};
pub use interp::{
    ipoly_interpolated_product, lagrange_basis, principal_lattice, Interpolator, LatticeSpec,
};
pub use poly::{ipoly_direct_product, ipoly_iterated_sum, Exponents, IntPoly, RatPoly};
pub use scalar::{f_add, f_mul, g_iterated_product, g_iterated_sum, ExactScalar, FScalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operands belong to different algebra contexts")]
    ContextMismatch,
    #[error("degree bound violated: product has total degree {degree}, lattice supports {bound}")]
    DegreeBoundViolated { degree: u32, bound: u32 },
    #[error("interpolant disagrees with the product at an off-lattice check point")]
    InterpolationMismatch,
    #[error("invalid lattice spec: {0}")]
    InvalidLattice(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("numeric evaluation failed: {0}")]
    Evaluation(String),
    #[error("context `{0}` has no conjugation involution")]
    NoConjugation(String),
    #[error("not representable in context `{context}`: {what}")]
    NotRepresentable { context: String, what: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}
