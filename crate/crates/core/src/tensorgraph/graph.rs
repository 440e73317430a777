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

use std::collections::{BTreeMap, VecDeque};

use crate::algebra::{ContextRef, ExactScalar};

use super::color::ColorProduct;
use super::TgError;

/// Vertical edge; its height is the height of `to`.
#[derive(Clone, Debug, PartialEq)]
pub struct VEdge {
    pub from: usize,
    pub to: usize,
    pub colors: ColorProduct,
    pub amp0: ExactScalar,
    pub amp1: ExactScalar,
}

pub type Mat2 = [[ExactScalar; 2]; 2];

/// Element counts at one moment; later additions are left alone.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Snapshot {
    nodes: usize,
    vedges: usize,
    hedges: usize,
}

/// Tensor graph over `lines` heights. Vertical edges at height `k` carry
/// line `k - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorGraph {
    ctx: ContextRef,
    lines: usize,
    heights: Vec<usize>,
    vedges: Vec<VEdge>,
    hedges: Vec<(usize, usize)>,
    source: usize,
    terminal: usize,
    next_color: u64,
    pub(crate) lowerings: Vec<String>,
}

impl TensorGraph {
    /// Checks the structural invariants of a hand-assembled graph.
    pub fn from_parts(
        ctx: &ContextRef,
        heights: Vec<usize>,
        vedges: Vec<VEdge>,
        hedges: Vec<(usize, usize)>,
        source: usize,
        terminal: usize,
    ) -> Result<Self, TgError> {
        let lines = heights.get(terminal).copied().ok_or_else(|| TgError::Malformed("terminal out of range".into()))?;
        let next_color = vedges.iter().flat_map(|e| e.colors.ids().collect::<Vec<_>>()).max().map_or(0, |m| m + 1);
        let g = TensorGraph {
            ctx: ctx.clone(),
            lines,
            heights,
            vedges,
            hedges,
            source,
            terminal,
            next_color,
            lowerings: Vec::new(),
        };
        g.check_structure()?;
        Ok(g)
    }

    pub fn context(&self) -> &ContextRef {
        &self.ctx
    }

    /// Number of lines, equal to the terminal height.
    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn node_count(&self) -> usize {
        self.heights.len()
    }

    pub fn height_of(&self, node: usize) -> usize {
        self.heights[node]
    }

    pub fn vedges(&self) -> &[VEdge] {
        &self.vedges
    }

    pub fn hedges(&self) -> &[(usize, usize)] {
        &self.hedges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    /// Gates that went through the dense fallback, in application order.
    pub fn lowerings(&self) -> &[String] {
        &self.lowerings
    }

    pub fn width(&self) -> usize {
        let mut count = vec![0usize; self.lines + 1];
        for &h in &self.heights {
            count[h] += 1;
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Nodes per height, `0..=lines`.
    pub fn nodes_per_height(&self) -> Vec<usize> {
        let mut count = vec![0usize; self.lines + 1];
        for &h in &self.heights {
            count[h] += 1;
        }
        count
    }

    pub fn check_structure(&self) -> Result<(), TgError> {
        let n = self.heights.len();
        let bad = |m: String| Err(TgError::Malformed(m));
        if self.source >= n || self.terminal >= n {
            return bad("source or terminal out of range".into());
        }
        if self.heights[self.source] != 0 {
            return bad("source must have height 0".into());
        }
        let mut vin = vec![0usize; n];
        let mut vout = vec![0usize; n];
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for (i, e) in self.vedges.iter().enumerate() {
            if e.from >= n || e.to >= n || self.heights[e.to] != self.heights[e.from] + 1 {
                return bad(format!("vertical edge {i} must climb exactly one height"));
            }
            if e.colors.is_zero() {
                return bad(format!("vertical edge {i} carries the zero color product"));
            }
            vin[e.to] += 1;
            vout[e.from] += 1;
            indeg[e.to] += 1;
            outdeg[e.from] += 1;
        }
        for &(a, b) in &self.hedges {
            if a >= n || b >= n || self.heights[a] != self.heights[b] {
                return bad(format!("horizontal edge {a}->{b} must stay at one height"));
            }
            indeg[b] += 1;
            outdeg[a] += 1;
        }
        if let Some(v) = (0..n).find(|&v| vin[v] > 1 || vout[v] > 1) {
            return bad(format!("node {v} has vertical degree above one"));
        }
        let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let terminals: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0).collect();
        if sources != [self.source] || terminals != [self.terminal] {
            return bad(format!("expected one source and one terminal, found {sources:?} and {terminals:?}"));
        }
        if self.topological_order().len() != n {
            return bad("horizontal edges form a cycle".into());
        }
        Ok(())
    }

    /// Outgoing `(hedge targets, vertical edge indices)` per node.
    pub(crate) fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        let n = self.heights.len();
        let mut h = vec![Vec::new(); n];
        let mut v = vec![None; n];
        for &(a, b) in &self.hedges {
            h[a].push(b);
        }
        for (i, e) in self.vedges.iter().enumerate() {
            v[e.from] = Some(i);
        }
        (h, v)
    }

    /// By height, then Kahn order over horizontal edges with ties broken by id.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.heights.len();
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for &(a, b) in &self.hedges {
            if a < n && b < n {
                indeg[b] += 1;
                out[a].push(b);
            }
        }
        let mut by_height: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &h) in self.heights.iter().enumerate() {
            by_height.entry(h).or_default().push(v);
        }
        let mut order = Vec::with_capacity(n);
        for nodes in by_height.values() {
            let mut ready: VecDeque<usize> = nodes.iter().copied().filter(|&v| indeg[v] == 0).collect();
            while let Some(v) = ready.pop_front() {
                order.push(v);
                for &w in &out[v] {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        ready.push_back(w);
                    }
                }
            }
        }
        order
    }

    fn add_node(&mut self, h: usize) -> usize {
        self.heights.push(h);
        self.heights.len() - 1
    }

    pub(crate) fn fresh_color(&mut self) -> u64 {
        self.next_color += 1;
        self.next_color - 1
    }

    pub(crate) fn snapshot(&self) -> Snapshot {
        Snapshot { nodes: self.heights.len(), vedges: self.vedges.len(), hedges: self.hedges.len() }
    }

    /// Rewrites in place the vertical edges of `snap` carrying `line`.
    pub(crate) fn map_line(&mut self, snap: Snapshot, line: usize, f: &dyn Fn(&VEdge) -> VEdge) {
        for e in &mut self.vedges[..snap.vedges] {
            if self.heights[e.to] == line + 1 {
                *e = f(e);
            }
        }
    }

    /// Adds a parallel copy of the part of the graph carrying lines
    /// `lo..=hi`, entered by a horizontal edge out of each tail at height
    /// `lo` and left by a horizontal edge into each head at height `hi + 1`.
    /// Copied vertical edges are rewritten by `f(line, edge)`. Only the
    /// part of the graph present at `snap` is copied.
    pub(crate) fn copy_region(&mut self, snap: Snapshot, lo: usize, hi: usize, f: &dyn Fn(usize, &VEdge) -> VEdge) {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut entry: BTreeMap<usize, usize> = BTreeMap::new();
        let mut exit: BTreeMap<usize, usize> = BTreeMap::new();
        let old_edges = snap.vedges;
        for v in 0..snap.nodes {
            let h = self.heights[v];
            if h > lo && h <= hi {
                let c = self.add_node(h);
                map.insert(v, c);
            }
        }
        for i in 0..old_edges {
            let (from, to) = (self.vedges[i].from, self.vedges[i].to);
            let h = self.heights[to];
            if h == lo + 1 {
                let c = self.add_node(lo);
                self.hedges.push((from, c));
                entry.insert(from, c);
            }
            if h == hi + 1 {
                let c = self.add_node(hi + 1);
                self.hedges.push((c, to));
                exit.insert(to, c);
            }
        }
        for i in 0..snap.hedges {
            let (a, b) = self.hedges[i];
            if let (Some(&ca), Some(&cb)) = (map.get(&a), map.get(&b)) {
                self.hedges.push((ca, cb));
            }
        }
        for i in 0..old_edges {
            let e = &self.vedges[i];
            let h = self.heights[e.to];
            if h <= lo || h > hi + 1 {
                continue;
            }
            let from = if h == lo + 1 { entry[&e.from] } else { map[&e.from] };
            let to = if h == hi + 1 { exit[&e.to] } else { map[&e.to] };
            let mut ne = f(h - 1, e);
            ne.from = from;
            ne.to = to;
            self.vedges.push(ne);
        }
    }
}

/// `M · (amp0, amp1)`.
pub(crate) fn apply_mat(m: &Mat2, e: &VEdge) -> VEdge {
    VEdge {
        from: e.from,
        to: e.to,
        colors: e.colors.clone(),
        amp0: &(&m[0][0] * &e.amp0) + &(&m[0][1] * &e.amp1),
        amp1: &(&m[1][0] * &e.amp0) + &(&m[1][1] * &e.amp1),
    }
}

/// A single chain for the basis state `idx` over `lines` lines.
pub fn tg_init(ctx: &ContextRef, lines: usize, idx: u64) -> TensorGraph {
    let (one, zero) = (ExactScalar::one(ctx), ExactScalar::zero(ctx));
    let vedges = (0..lines)
        .map(|l| {
            let set = (idx >> (lines - 1 - l)) & 1 == 1;
            VEdge {
                from: l,
                to: l + 1,
                colors: ColorProduct::one(),
                amp0: if set { zero.clone() } else { one.clone() },
                amp1: if set { one.clone() } else { zero.clone() },
            }
        })
        .collect();
    TensorGraph {
        ctx: ctx.clone(),
        lines,
        heights: (0..=lines).collect(),
        vedges,
        hedges: Vec::new(),
        source: 0,
        terminal: lines,
        next_color: 0,
        lowerings: Vec::new(),
    }
}

fn check_lines(g: &TensorGraph, lines: &[usize]) -> Result<(), TgError> {
    match lines.iter().find(|&&l| l >= g.lines) {
        Some(&l) => Err(TgError::LineOutOfRange { line: l, lines: g.lines }),
        None => Ok(()),
    }
}

fn mats(ctx: &ContextRef) -> (ExactScalar, ExactScalar) {
    (ExactScalar::zero(ctx), ExactScalar::one(ctx))
}

/// Left-multiplies every edge carrying `line` by `u`.
pub fn tg_apply_one_qubit(g: &TensorGraph, u: &Mat2, line: usize) -> Result<TensorGraph, TgError> {
    check_lines(g, &[line])?;
    let mut out = g.clone();
    out.map_line(out.snapshot(), line, &|e| apply_mat(u, e));
    Ok(out)
}

/// Adds the correction term `P1(controls) ⊗ (X - I)(target)`; the original
/// part is left as is. Control edges in the copy become `(0, γ)` and target
/// edges `(γ - α, α - γ)`.
pub fn tg_apply_toffoli(g: &TensorGraph, controls: &[usize], target: usize) -> Result<TensorGraph, TgError> {
    let mut all = controls.to_vec();
    all.push(target);
    check_lines(g, &all)?;
    let (z, o) = mats(&g.ctx);
    let p1: Mat2 = [[z.clone(), z.clone()], [z.clone(), o.clone()]];
    let xm: Mat2 = [[-&o, o.clone()], [o.clone(), -&o]];
    let lo = *all.iter().min().expect("target present");
    let hi = *all.iter().max().expect("target present");
    let mut out = g.clone();
    out.copy_region(out.snapshot(), lo, hi, &|line, e| {
        if line == target {
            apply_mat(&xm, e)
        } else if controls.contains(&line) {
            apply_mat(&p1, e)
        } else {
            e.clone()
        }
    });
    Ok(out)
}

/// Original control edges become `(α, 0)`; the copy has control `(0, γ)`
/// and every target edge reversed.
pub fn tg_apply_fanout(g: &TensorGraph, targets: &[usize], control: usize) -> Result<TensorGraph, TgError> {
    let mut all = targets.to_vec();
    all.push(control);
    check_lines(g, &all)?;
    let (z, o) = mats(&g.ctx);
    let p0: Mat2 = [[o.clone(), z.clone()], [z.clone(), z.clone()]];
    let p1: Mat2 = [[z.clone(), z.clone()], [z.clone(), o.clone()]];
    let xm: Mat2 = [[z.clone(), o.clone()], [o.clone(), z.clone()]];
    let lo = *all.iter().min().expect("control present");
    let hi = *all.iter().max().expect("control present");
    let mut out = g.clone();
    let snap = out.snapshot();
    out.copy_region(snap, lo, hi, &|line, e| {
        if line == control {
            apply_mat(&p1, e)
        } else if targets.contains(&line) {
            apply_mat(&xm, e)
        } else {
            e.clone()
        }
    });
    out.map_line(snap, control, &|e| apply_mat(&p0, e));
    Ok(out)
}

/// One fresh color `c` per pair. Control edges become `(C·c, α, 0)` with a
/// parallel `(C·c̃, 0, γ)`; target edges become `(C·c, α, γ)` with a
/// parallel `(C·c̃, γ, α)`.
pub fn tg_apply_cnot_layer(g: &TensorGraph, pairs: &[(usize, usize)]) -> Result<TensorGraph, TgError> {
    let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    check_lines(g, &flat)?;
    let mut out = g.clone();
    for &(control, target) in pairs {
        let c = out.fresh_color();
        let z = ExactScalar::zero(&out.ctx);
        let zc = z.clone();
        let snap = out.snapshot();
        out.copy_region(snap, control, control, &move |_, e| VEdge {
            colors: e.colors.mul_factor(c, true),
            amp0: zc.clone(),
            ..e.clone()
        });
        out.map_line(snap, control, &|e| VEdge { colors: e.colors.mul_factor(c, false), amp1: z.clone(), ..e.clone() });
        let snap = out.snapshot();
        out.copy_region(snap, target, target, &|_, e| VEdge {
            colors: e.colors.mul_factor(c, true),
            amp0: e.amp1.clone(),
            amp1: e.amp0.clone(),
            ..e.clone()
        });
        out.map_line(snap, target, &|e| VEdge { colors: e.colors.mul_factor(c, false), ..e.clone() });
    }
    Ok(out)
}

/// Adds `Σ` of product terms to the identity on lines `lo..=hi`: each term
/// maps line to a 2×2 factor, unlisted lines are identity.
pub(crate) fn add_product_terms(g: &mut TensorGraph, lo: usize, hi: usize, terms: &[BTreeMap<usize, Mat2>]) {
    let snap = g.snapshot();
    for t in terms {
        g.copy_region(snap, lo, hi, &|line, e| match t.get(&line) {
            Some(m) => apply_mat(m, e),
            None => e.clone(),
        });
    }
}
