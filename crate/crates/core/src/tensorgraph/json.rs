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

use serde::{Deserialize, Serialize};

use crate::algebra::json::{scalar_from_doc, scalar_to_doc, ScalarDoc};
use crate::algebra::ContextRef;

use super::color::ColorProduct;
use super::graph::{TensorGraph, VEdge};
use super::TgError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VEdgeDoc {
    pub from: usize,
    pub to: usize,
    /// `[id, anti]` factors; empty for the scalar 1.
    pub colors: Vec<(u64, bool)>,
    pub amp0: ScalarDoc,
    pub amp1: ScalarDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HEdgeDoc {
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<NodeDoc>,
    pub vedges: Vec<VEdgeDoc>,
    pub hedges: Vec<HEdgeDoc>,
    pub source: usize,
    pub terminal: usize,
}

pub fn graph_to_doc(g: &TensorGraph) -> GraphDoc {
    GraphDoc {
        nodes: (0..g.node_count()).map(|id| NodeDoc { id, height: g.height_of(id) }).collect(),
        vedges: g
            .vedges()
            .iter()
            .map(|e| VEdgeDoc {
                from: e.from,
                to: e.to,
                colors: e.colors.factors(),
                amp0: scalar_to_doc(&e.amp0),
                amp1: scalar_to_doc(&e.amp1),
            })
            .collect(),
        hedges: g.hedges().iter().map(|&(from, to)| HEdgeDoc { from, to }).collect(),
        source: g.source(),
        terminal: g.terminal(),
    }
}

pub fn graph_from_doc(ctx: &ContextRef, doc: &GraphDoc) -> Result<TensorGraph, TgError> {
    let mut heights = vec![None; doc.nodes.len()];
    for n in &doc.nodes {
        match heights.get_mut(n.id) {
            Some(slot @ None) => *slot = Some(n.height),
            _ => return Err(TgError::Malformed(format!("node ids must be 0..{} without repeats", doc.nodes.len()))),
        }
    }
    let heights: Vec<usize> = heights.into_iter().map(|h| h.expect("all ids filled")).collect();
    let vedges = doc
        .vedges
        .iter()
        .map(|e| {
            let colors = e.colors.iter().try_fold(ColorProduct::one(), |acc, &(id, anti)| {
                let next = acc.mul_factor(id, anti);
                if next.is_zero() || next == acc { Err(TgError::Malformed(format!("repeated color {id}"))) } else { Ok(next) }
            })?;
            Ok(VEdge { from: e.from, to: e.to, colors, amp0: scalar_from_doc(ctx, &e.amp0)?, amp1: scalar_from_doc(ctx, &e.amp1)? })
        })
        .collect::<Result<Vec<_>, TgError>>()?;
    let hedges = doc.hedges.iter().map(|h| (h.from, h.to)).collect();
    TensorGraph::from_parts(ctx, heights, vedges, hedges, doc.source, doc.terminal)
}

pub fn graph_to_json(g: &TensorGraph) -> String {
    serde_json::to_string_pretty(&graph_to_doc(g)).expect("graph serializes")
}

pub fn graph_from_json(ctx: &ContextRef, text: &str) -> Result<TensorGraph, TgError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| TgError::Malformed(e.to_string()))?;
    graph_from_doc(ctx, &doc)
}
