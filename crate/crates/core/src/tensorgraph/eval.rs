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

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::ExactScalar;

use super::color::{ColorProduct, ColorTerm};
use super::graph::TensorGraph;
use super::TgError;

pub const DEFAULT_PATH_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMetrics {
    pub width: usize,
    pub height: usize,
    pub nodes: usize,
    pub path_count: BigInt,
    /// Most colors active at one height: seen at or below it and closed above it.
    pub color_depth: usize,
    /// Most distinct colors on the edges of one height.
    pub colors_per_height: usize,
    pub color_consistent: bool,
    pub lowerings: Vec<String>,
}

fn bit_of(z: u64, lines: usize, height: usize) -> bool {
    (z >> (lines - height)) & 1 == 1
}

/// Height-by-height dynamic program over color terms.
pub fn tg_amplitude_dp(g: &TensorGraph, z: u64) -> Result<ExactScalar, TgError> {
    let ctx = g.context();
    let (hout, vout) = g.adjacency();
    let mut value: Vec<Option<ColorTerm>> = vec![None; g.node_count()];
    value[g.source()] = Some(ColorTerm::one(ctx));
    for v in g.topological_order() {
        let Some(val) = value[v].take() else { continue };
        if v == g.terminal() {
            value[v] = Some(val);
            break;
        }
        if val.is_zero() {
            continue;
        }
        let mut push = |w: usize, t: ColorTerm| -> Result<(), TgError> {
            value[w] = Some(match value[w].take() {
                Some(acc) => acc.try_add(&t)?,
                None => t,
            });
            Ok(())
        };
        for &w in &hout[v] {
            push(w, val.clone())?;
        }
        if let Some(i) = vout[v] {
            let e = &g.vedges()[i];
            let amp = if bit_of(z, g.lines(), g.height_of(e.to)) { &e.amp1 } else { &e.amp0 };
            if !amp.is_zero() {
                push(e.to, val.mul_edge(&e.colors, amp)?)?;
            }
        }
    }
    let fin = value[g.terminal()].take().unwrap_or_else(|| ColorTerm::zero(ctx));
    if fin.has_residual_color() {
        let left: Vec<String> = fin.terms().keys().filter(|p| !p.is_one()).map(|p| p.to_string()).collect();
        return Err(TgError::ResidualColor(left.join(", ")));
    }
    Ok(fin.scalar_part())
}

/// Exact path count by dynamic programming.
pub fn path_count(g: &TensorGraph) -> BigInt {
    let (hout, vout) = g.adjacency();
    let mut count = vec![BigInt::zero(); g.node_count()];
    count[g.source()] = BigInt::one();
    for v in g.topological_order() {
        if count[v].is_zero() {
            continue;
        }
        let c = count[v].clone();
        for &w in &hout[v] {
            count[w] += &c;
        }
        if let Some(i) = vout[v] {
            count[g.vedges()[i].to] += &c;
        }
    }
    count[g.terminal()].clone()
}

fn check_cap(g: &TensorGraph, cap: u64) -> Result<(), TgError> {
    let n = path_count(g);
    if n > BigInt::from(cap) {
        return Err(TgError::PathCapExceeded { count: n.to_string(), cap });
    }
    Ok(())
}

/// Every source-to-terminal path as its list of vertical edge indices.
pub fn tg_paths(g: &TensorGraph, cap: u64) -> Result<Vec<Vec<usize>>, TgError> {
    check_cap(g, cap)?;
    let (hout, vout) = g.adjacency();
    let mut out = Vec::new();
    let mut stack = vec![(g.source(), Vec::new())];
    while let Some((v, path)) = stack.pop() {
        if v == g.terminal() {
            out.push(path);
            continue;
        }
        if let Some(i) = vout[v] {
            let mut p = path.clone();
            p.push(i);
            stack.push((g.vedges()[i].to, p));
        }
        for &w in hout[v].iter().rev() {
            stack.push((w, path.clone()));
        }
    }
    out.reverse();
    Ok(out)
}

/// Sum over paths of the folded per-height amplitude and color product.
/// Branches whose running product vanishes are cut early.
pub fn tg_amplitude_paths(g: &TensorGraph, z: u64, cap: u64) -> Result<ExactScalar, TgError> {
    check_cap(g, cap)?;
    let ctx = g.context();
    let (hout, vout) = g.adjacency();
    let mut total = ExactScalar::zero(ctx);
    let mut stack = vec![(g.source(), ColorProduct::one(), ExactScalar::one(ctx))];
    while let Some((v, colors, amp)) = stack.pop() {
        if v == g.terminal() {
            if !colors.is_one() {
                return Err(TgError::ResidualColor(colors.to_string()));
            }
            total = total.try_add(&amp)?;
            continue;
        }
        for &w in &hout[v] {
            stack.push((w, colors.clone(), amp.clone()));
        }
        if let Some(i) = vout[v] {
            let e = &g.vedges()[i];
            let a = if bit_of(z, g.lines(), g.height_of(e.to)) { &e.amp1 } else { &e.amp0 };
            let c = colors.mul(&e.colors);
            if !a.is_zero() && !c.is_zero() {
                stack.push((e.to, c, amp.try_mul(a)?));
            }
        }
    }
    Ok(total)
}

/// Heights (of edges) at which each color id occurs, split by polarity.
fn color_heights(g: &TensorGraph) -> BTreeMap<u64, [BTreeSet<usize>; 2]> {
    let mut m: BTreeMap<u64, [BTreeSet<usize>; 2]> = BTreeMap::new();
    for e in g.vedges() {
        let h = g.height_of(e.to);
        for (id, anti) in e.colors.factors() {
            m.entry(id).or_default()[anti as usize].insert(h);
        }
    }
    m
}

pub fn tg_metrics(g: &TensorGraph) -> GraphMetrics {
    let heights = color_heights(g);
    let mut consistent = true;
    let mut active = vec![0usize; g.lines() + 1];
    for [col, anti] in heights.values() {
        if col.len() != 2 || col != anti {
            consistent = false;
        }
        let lo = col.iter().chain(anti).min().copied().unwrap_or(0);
        let hi = col.iter().chain(anti).max().copied().unwrap_or(0);
        for a in active.iter_mut().take(hi).skip(lo) {
            *a += 1;
        }
    }
    let mut ids_at: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); g.lines() + 1];
    for e in g.vedges() {
        ids_at[g.height_of(e.to)].extend(e.colors.ids());
    }
    // Every product at one height must range over the same color ids.
    for e in g.vedges() {
        let ids: BTreeSet<u64> = e.colors.ids().collect();
        if ids != ids_at[g.height_of(e.to)] {
            consistent = false;
        }
    }
    GraphMetrics {
        width: g.width(),
        height: g.lines(),
        nodes: g.node_count(),
        path_count: path_count(g),
        color_depth: active.into_iter().max().unwrap_or(0),
        colors_per_height: ids_at.iter().map(BTreeSet::len).max().unwrap_or(0),
        color_consistent: consistent,
        lowerings: g.lowerings().to_vec(),
    }
}

impl GraphMetrics {
    /// Path count as `u64` when it fits.
    pub fn paths_u64(&self) -> Option<u64> {
        self.path_count.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::tensorgraph::graph::{tg_apply_cnot_layer, tg_apply_toffoli, tg_init};

    #[test]
    fn init_amplitudes() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let g = tg_init(&ctx, 2, 0b01);
        assert!(tg_amplitude_dp(&g, 0b01).unwrap().is_one());
        assert!(tg_amplitude_dp(&g, 0b00).unwrap().is_zero());
        let m = tg_metrics(&g);
        assert_eq!((m.width, m.color_depth), (1, 0));
        assert_eq!(m.path_count, BigInt::one());
    }

    #[test]
    fn toffoli_amplitudes() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let g = tg_apply_toffoli(&tg_init(&ctx, 3, 0b110), &[0, 1], 2).unwrap();
        assert!(tg_amplitude_dp(&g, 0b111).unwrap().is_one());
        assert!(tg_amplitude_dp(&g, 0b110).unwrap().is_zero());
        assert!(tg_amplitude_paths(&g, 0b111, DEFAULT_PATH_CAP).unwrap().is_one());
        let g = tg_apply_toffoli(&tg_init(&ctx, 3, 0b100), &[0, 1], 2).unwrap();
        assert!(tg_amplitude_dp(&g, 0b100).unwrap().is_one());
    }

    #[test]
    fn cnot_colors_appear_at_two_heights() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let g = tg_apply_cnot_layer(&tg_init(&ctx, 2, 0b10), &[(0, 1)]).unwrap();
        assert!(tg_amplitude_dp(&g, 0b11).unwrap().is_one());
        assert!(tg_amplitude_dp(&g, 0b10).unwrap().is_zero());
        let m = tg_metrics(&g);
        assert!(m.color_consistent);
        assert_eq!(m.color_depth, 1);
        assert_eq!(m.path_count, BigInt::from(4));
    }

    #[test]
    fn path_cap() {
        let ctx = AlgebraContext::cyclotomic(2).unwrap();
        let g = tg_apply_cnot_layer(&tg_init(&ctx, 2, 0), &[(0, 1)]).unwrap();
        assert!(matches!(tg_amplitude_paths(&g, 0, 3), Err(TgError::PathCapExceeded { .. })));
    }
}
