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

//! JSON encodings of polynomials, scalars and contexts.
//!
//! Polynomials are lists of `[coeff, [exponents...]]`. Coefficients that fit
//! in an `i64` are written as numbers, larger ones as decimal strings, so the
//! round trip is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::context::{AlgebraContext, ContextRef, ContextSpec};
use super::poly::IntPoly;
use super::scalar::{ExactScalar, FScalar};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDoc {
    Small(i64),
    Big(String),
}

impl CoeffDoc {
    fn from_big(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => CoeffDoc::Small(v),
            None => CoeffDoc::Big(c.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, AlgebraError> {
        match self {
            CoeffDoc::Small(v) => Ok(BigInt::from(*v)),
            CoeffDoc::Big(s) => s.parse().map_err(|_| AlgebraError::Json(format!("bad integer `{s}`"))),
        }
    }
}

pub type PolyDoc = Vec<(CoeffDoc, Vec<u32>)>;

/// `{"r": k, "coords": [poly, ...]}`: coordinates over the shared denominator `u^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub r: u32,
    pub coords: Vec<PolyDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericDoc {
    pub indeterminates: Vec<[f64; 2]>,
    pub basis: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextDoc {
    #[serde(default)]
    pub name: String,
    pub indeterminates: Vec<String>,
    pub basis: Vec<String>,
    pub mult_table: Vec<Vec<ScalarDoc>>,
    pub u: PolyDoc,
    pub numeric: NumericDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugates: Option<Vec<ScalarDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, ScalarDoc>,
}

pub fn poly_to_doc(p: &IntPoly) -> PolyDoc {
    p.terms().map(|(e, c)| (CoeffDoc::from_big(c), e.clone())).collect()
}

pub fn poly_from_doc(doc: &PolyDoc, arity: usize) -> Result<IntPoly, AlgebraError> {
    let terms: Result<Vec<_>, _> = doc.iter().map(|(c, e)| Ok((c.to_big()?, e.clone()))).collect();
    IntPoly::from_terms(arity, terms?)
}

fn fscalars_to_doc(v: &[FScalar], u: &IntPoly) -> ScalarDoc {
    let r = v.iter().map(|c| c.denom_power).max().unwrap_or(0);
    ScalarDoc { r, coords: v.iter().map(|c| poly_to_doc(&c.numerator_at(r, u))).collect() }
}

fn fscalars_from_doc(doc: &ScalarDoc, arity: usize) -> Result<Vec<FScalar>, AlgebraError> {
    doc.coords.iter().map(|p| Ok(FScalar::new(poly_from_doc(p, arity)?, doc.r))).collect()
}

pub fn scalar_to_doc(x: &ExactScalar) -> ScalarDoc {
    ScalarDoc { r: x.denom_power(), coords: x.numerators().iter().map(poly_to_doc).collect() }
}

pub fn scalar_from_doc(ctx: &ContextRef, doc: &ScalarDoc) -> Result<ExactScalar, AlgebraError> {
    ExactScalar::from_coords(ctx, &fscalars_from_doc(doc, ctx.arity())?)
}

fn c2(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn context_to_doc(ctx: &AlgebraContext) -> ContextDoc {
    let spec = ctx.to_spec();
    let u = &spec.u;
    ContextDoc {
        name: spec.name.clone(),
        indeterminates: spec.indeterminates.clone(),
        basis: spec.basis.clone(),
        mult_table: spec.mult_table.iter().map(|row| row.iter().map(|e| fscalars_to_doc(e, u)).collect()).collect(),
        u: poly_to_doc(u),
        numeric: NumericDoc {
            indeterminates: spec.numeric_indeterminates.iter().map(c2).collect(),
            basis: spec.numeric_basis.iter().map(c2).collect(),
        },
        conjugates: spec.conjugates.as_ref().map(|c| c.iter().map(|e| fscalars_to_doc(e, u)).collect()),
        constants: spec.constants.iter().map(|(k, v)| (k.clone(), fscalars_to_doc(v, u))).collect(),
    }
}

pub fn context_from_doc(doc: &ContextDoc) -> Result<ContextRef, AlgebraError> {
    let m = doc.indeterminates.len();
    let table: Result<Vec<Vec<_>>, _> = doc
        .mult_table
        .iter()
        .map(|row| row.iter().map(|e| fscalars_from_doc(e, m)).collect())
        .collect();
    let conjugates = match &doc.conjugates {
        Some(c) => Some(c.iter().map(|e| fscalars_from_doc(e, m)).collect::<Result<Vec<_>, _>>()?),
        None => None,
    };
    let mut constants = BTreeMap::new();
    for (k, v) in &doc.constants {
        constants.insert(k.clone(), fscalars_from_doc(v, m)?);
    }
    let cx = |v: &[f64; 2]| Complex64::new(v[0], v[1]);
    AlgebraContext::new(ContextSpec {
        name: doc.name.clone(),
        indeterminates: doc.indeterminates.clone(),
        basis: doc.basis.clone(),
        mult_table: table?,
        u: poly_from_doc(&doc.u, m)?,
        numeric_indeterminates: doc.numeric.indeterminates.iter().map(cx).collect(),
        numeric_basis: doc.numeric.basis.iter().map(cx).collect(),
        conjugates,
        constants,
    })
}

pub fn context_to_json(ctx: &AlgebraContext) -> String {
    serde_json::to_string_pretty(&context_to_doc(ctx)).expect("context documents always serialize")
}

pub fn context_from_json(text: &str) -> Result<ContextRef, AlgebraError> {
    let doc: ContextDoc = serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
    context_from_doc(&doc)
}
