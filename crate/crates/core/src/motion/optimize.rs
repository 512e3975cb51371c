//! Incremental mesh optimization: a priority queue over the worst tets, an
//! exhaustive edge-removal sequence search per bad tet, and the one-flip-
//! per-generator execution rule. Unfinished removal sequences persist as
//! pending plans and continue one flip per timestep.

use super::flips::{
    execute_23, execute_32, execute_44, link_cycle, FlipEvent,
};
use super::quality::alpha_of_tet;
use crate::geometry::{tet_volume, V3};
use crate::mesh::{TetId, Tetrahedralization};
use crate::{Error, Result};
use std::collections::HashSet;

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Tets with alpha below this enter the priority queue.
    pub alpha_threshold: f64,
    /// A plan must beat the current worst alpha by this margin.
    pub improvement_margin: f64,
    /// Stars larger than this are not searched.
    pub max_star: usize,
    /// Depth bound for recursive removal of blocking edges.
    pub max_recursion: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            alpha_threshold: 0.6,
            improvement_margin: 1e-3,
            max_star: 7,
            max_recursion: 3,
        }
    }
}

/// One step of an edge-removal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlannedAction {
    /// 2-3 flip on the star face (edge.0, edge.1, w), shrinking the star.
    CutEar { w: usize },
    /// Final 3-2 flip removing the edge.
    Remove,
}

/// An in-progress edge removal: `remaining` holds the |S(e)| - 2 actions
/// still to perform, executed one per timestep (the last two merge into a
/// single 4-4 flip).
#[derive(Debug, Clone)]
pub struct EdgeRemovalPlan {
    pub edge: (usize, usize),
    pub remaining: Vec<PlannedAction>,
    pub predicted_alpha: f64,
}

/// Flip forced by a scenario (sanity tests), bypassing the quality queue.
#[derive(Debug, Clone, Copy)]
pub enum ForcedFlip {
    Remove32 { edge: (usize, usize) },
    Insert23 { face: [usize; 3] },
    Repair44 { edge: (usize, usize), diagonal: (usize, usize) },
}

fn ear_cut_valid(a: &V3, b: &V3, u: &V3, w: &V3, v: &V3) -> bool {
    // 2-3 flip on face (a, b, w) between tets (a,b,u,w) and (a,b,w,v):
    // the three new tets must reproduce the cavity volume.
    let old = tet_volume(a, b, u, w).abs() + tet_volume(a, b, w, v).abs();
    let t1 = tet_volume(a, u, w, v).abs();
    let t2 = tet_volume(b, u, w, v).abs();
    let t3 = tet_volume(a, b, u, v).abs();
    t1 > 0.0 && t2 > 0.0 && t3 > 0.0 && ((t1 + t2 + t3) - old).abs() <= 1e-9 * old
}

/// Gather the neighborhood points used for alpha of a hypothetical tet over
/// generators `gens`: all ball vertices of those generators in the current
/// mesh, excluding the tet's own corners.
fn neighborhood_points(
    mesh: &Tetrahedralization,
    pos: &[V3],
    gens: &[usize; 4],
) -> Vec<V3> {
    let mut pts: Vec<usize> = Vec::with_capacity(48);
    for &g in gens {
        for &t in mesh.ball(g) {
            for &v in mesh.vertices(t).iter() {
                if !gens.contains(&v) {
                    pts.push(v);
                }
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts.into_iter().map(|v| pos[v]).collect()
}

fn alpha_of_candidate(mesh: &Tetrahedralization, pos: &[V3], gens: [usize; 4]) -> f64 {
    let verts = [pos[gens[0]], pos[gens[1]], pos[gens[2]], pos[gens[3]]];
    super::quality::tet_alpha(&verts, &neighborhood_points(mesh, pos, &gens))
}

struct SearchCtx<'a> {
    mesh: &'a Tetrahedralization,
    pos: &'a [V3],
    edge: (usize, usize),
    excluded: &'a HashSet<usize>,
    /// Ear vertices blocked at the root level (for the recursion fallback).
    blocked_root_ears: Vec<usize>,
    best: Option<(f64, Vec<PlannedAction>)>,
}

impl SearchCtx<'_> {
    /// Validity of the closing 3-2 on the 3-vertex polygon.
    fn remove_valid(&self, tri: [usize; 3]) -> bool {
        let (a, b) = self.edge;
        let p = self.pos;
        let old = tet_volume(&p[a], &p[b], &p[tri[0]], &p[tri[1]]).abs()
            + tet_volume(&p[a], &p[b], &p[tri[1]], &p[tri[2]]).abs()
            + tet_volume(&p[a], &p[b], &p[tri[2]], &p[tri[0]]).abs();
        let t1 = tet_volume(&p[a], &p[tri[0]], &p[tri[1]], &p[tri[2]]).abs();
        let t2 = tet_volume(&p[b], &p[tri[0]], &p[tri[1]], &p[tri[2]]).abs();
        t1 > 0.0 && t2 > 0.0 && ((t1 + t2) - old).abs() <= 1e-9 * old
    }

    /// Atomic 4-4 validity on a 4-vertex polygon split by the diagonal
    /// (poly[j-1], poly[j+1]). The intermediate 2-3 state may be degenerate;
    /// only the fused result must reproduce the cavity.
    fn fused44_valid(&self, poly: &[usize], j: usize) -> bool {
        let (a, b) = self.edge;
        let p = self.pos;
        let w = poly[j];
        let u = poly[(j + 3) % 4];
        let v = poly[(j + 1) % 4];
        let o = poly[(j + 2) % 4];
        let mut old = 0.0;
        for k in 0..4 {
            old += tet_volume(&p[a], &p[b], &p[poly[k]], &p[poly[(k + 1) % 4]]).abs();
        }
        let parts = [
            tet_volume(&p[a], &p[u], &p[w], &p[v]).abs(),
            tet_volume(&p[b], &p[u], &p[w], &p[v]).abs(),
            tet_volume(&p[a], &p[u], &p[v], &p[o]).abs(),
            tet_volume(&p[b], &p[u], &p[v], &p[o]).abs(),
        ];
        parts.iter().all(|&v| v > 0.0)
            && ((parts.iter().sum::<f64>()) - old).abs() <= 1e-9 * old
    }

    /// DFS over ear-cut orders of the link polygon. The last two actions of
    /// a sequence (the 4-vertex stage) are validated as one fused 4-4 flip,
    /// whose intermediate 2-3 state is allowed to be degenerate.
    fn dfs(&mut self, poly: &[usize], acts: &mut Vec<PlannedAction>, min_alpha: f64) {
        let (a, b) = self.edge;
        let root = acts.is_empty();
        if poly.len() == 4 {
            for j in 0..2 {
                if !self.fused44_valid(poly, j) {
                    if root {
                        self.blocked_root_ears.push(poly[j]);
                    }
                    continue;
                }
                if root && poly.iter().any(|g| self.excluded.contains(g)) {
                    continue;
                }
                let w = poly[j];
                let u = poly[(j + 3) % 4];
                let v = poly[(j + 1) % 4];
                let o = poly[(j + 2) % 4];
                let alpha = min_alpha
                    .min(alpha_of_candidate(self.mesh, self.pos, [a, u, w, v]))
                    .min(alpha_of_candidate(self.mesh, self.pos, [b, u, w, v]))
                    .min(alpha_of_candidate(self.mesh, self.pos, [a, u, v, o]))
                    .min(alpha_of_candidate(self.mesh, self.pos, [b, u, v, o]));
                if self.best.as_ref().map_or(true, |(best, _)| alpha > *best) {
                    let mut acts = acts.clone();
                    acts.push(PlannedAction::CutEar { w });
                    acts.push(PlannedAction::Remove);
                    self.best = Some((alpha, acts));
                }
            }
            return;
        }
        if poly.len() == 3 {
            if !self.remove_valid([poly[0], poly[1], poly[2]]) {
                return;
            }
            let alpha = min_alpha
                .min(alpha_of_candidate(self.mesh, self.pos, [a, poly[0], poly[1], poly[2]]))
                .min(alpha_of_candidate(self.mesh, self.pos, [b, poly[0], poly[1], poly[2]]));
            if self.best.as_ref().map_or(true, |(best, _)| alpha > *best) {
                let mut acts = acts.clone();
                acts.push(PlannedAction::Remove);
                self.best = Some((alpha, acts));
            }
            return;
        }
        for j in 0..poly.len() {
            let w = poly[j];
            let u = poly[(j + poly.len() - 1) % poly.len()];
            let v = poly[(j + 1) % poly.len()];
            if !ear_cut_valid(
                &self.pos[a],
                &self.pos[b],
                &self.pos[u],
                &self.pos[w],
                &self.pos[v],
            ) {
                if root {
                    self.blocked_root_ears.push(w);
                }
                continue;
            }
            if root && [u, w, v].iter().any(|g| self.excluded.contains(g)) {
                continue;
            }
            let alpha = min_alpha
                .min(alpha_of_candidate(self.mesh, self.pos, [a, u, w, v]))
                .min(alpha_of_candidate(self.mesh, self.pos, [b, u, w, v]));
            // Prune: cannot beat the incumbent.
            if let Some((best, _)) = &self.best {
                if alpha <= *best {
                    continue;
                }
            }
            let mut next: Vec<usize> = poly.to_vec();
            next.remove(j);
            acts.push(PlannedAction::CutEar { w });
            self.dfs(&next, acts, alpha);
            acts.pop();
        }
    }
}

/// Search the best edge-removal sequence for `edge`: all realizable orders
/// of 2-3 flips shrinking the star to 3 tets plus the closing 3-2, scored
/// by the minimum alpha over the created tets. Returns None when the edge
/// is not removable (open or oversized star, or every sequence blocked); a
/// blocked non-convex star face triggers a recursive attempt on the nearest
/// independent edge.
pub fn plan_edge_removal(
    mesh: &Tetrahedralization,
    pos: &[V3],
    edge: (usize, usize),
    excluded: &HashSet<usize>,
    cfg: &OptimizerConfig,
    depth: usize,
) -> Result<Option<EdgeRemovalPlan>> {
    if excluded.contains(&edge.0) || excluded.contains(&edge.1) {
        return Ok(None);
    }
    let Ok(star) = mesh.star_region(edge.0, edge.1) else {
        return Ok(None);
    };
    if !star.closed || star.tets.len() < 3 || star.tets.len() > cfg.max_star {
        return Ok(None);
    }
    let link = link_cycle(mesh, edge.0, edge.1, &star)?;
    let mut ctx = SearchCtx {
        mesh,
        pos,
        edge,
        excluded,
        blocked_root_ears: Vec::new(),
        best: None,
    };
    if star.tets.len() == 3 {
        // Single 3-2; no ears to cut.
        let alpha = alpha_of_candidate(mesh, pos, [edge.0, link[0], link[1], link[2]])
            .min(alpha_of_candidate(mesh, pos, [edge.1, link[0], link[1], link[2]]));
        let valid = {
            let a = &pos[edge.0];
            let b = &pos[edge.1];
            let old: f64 = star.tets.iter().map(|&t| mesh.volume(t, pos).abs()).sum();
            let t1 = tet_volume(a, &pos[link[0]], &pos[link[1]], &pos[link[2]]).abs();
            let t2 = tet_volume(b, &pos[link[0]], &pos[link[1]], &pos[link[2]]).abs();
            t1 > 0.0 && t2 > 0.0 && ((t1 + t2) - old).abs() <= 1e-9 * old
        };
        let blocked = link.iter().any(|g| excluded.contains(g));
        if valid && !blocked {
            return Ok(Some(EdgeRemovalPlan {
                edge,
                remaining: vec![PlannedAction::Remove],
                predicted_alpha: alpha,
            }));
        }
        return Ok(None);
    }
    let mut acts = Vec::new();
    ctx.dfs(&link, &mut acts, f64::INFINITY);
    if let Some((alpha, actions)) = ctx.best {
        return Ok(Some(EdgeRemovalPlan {
            edge,
            remaining: actions,
            predicted_alpha: alpha,
        }));
    }
    // Every order blocked on a non-convex star face: recursively try to
    // remove the edge closest to the blockage that shares no generator with
    // the edge that failed to insert.
    if depth < cfg.max_recursion {
        if let Some(&w) = ctx.blocked_root_ears.first() {
            let da = (pos[edge.0] - pos[w]).norm();
            let db = (pos[edge.1] - pos[w]).norm();
            let blue = if da <= db { (edge.0.min(w), edge.0.max(w)) } else { (edge.1.min(w), edge.1.max(w)) };
            return plan_edge_removal(mesh, pos, blue, excluded, cfg, depth + 1);
        }
    }
    Ok(None)
}

/// Execute the next action of a plan. Consumes one action (or the final
/// two, fused into a single 4-4 flip). Returns None when the flip turned
/// out not to be realizable, which invalidates the plan.
fn execute_plan_step(
    mesh: &mut Tetrahedralization,
    pos: &[V3],
    plan: &mut EdgeRemovalPlan,
) -> Result<Option<FlipEvent>> {
    match plan.remaining.len() {
        0 => Ok(None),
        1 => {
            // Must be the closing 3-2.
            if plan.remaining[0] != PlannedAction::Remove {
                return Ok(None);
            }
            let ev = execute_32(mesh, pos, plan.edge)?;
            if ev.is_some() {
                plan.remaining.clear();
            }
            Ok(ev)
        }
        2 => {
            // CutEar + Remove on a 4-star: atomic 4-4 across the diagonal
            // that skips the cut vertex.
            let PlannedAction::CutEar { w } = plan.remaining[0] else {
                return Ok(None);
            };
            let star = mesh.star_region(plan.edge.0, plan.edge.1)?;
            if !star.closed || star.tets.len() != 4 {
                return Ok(None);
            }
            let link = link_cycle(mesh, plan.edge.0, plan.edge.1, &star)?;
            let Some(j) = link.iter().position(|&x| x == w) else {
                return Ok(None);
            };
            let diagonal = (link[(j + 1) % 4], link[(j + 3) % 4]);
            let ev = execute_44(mesh, pos, plan.edge, diagonal)?;
            if ev.is_some() {
                plan.remaining.clear();
            }
            Ok(ev)
        }
        _ => {
            let PlannedAction::CutEar { w } = plan.remaining[0] else {
                return Ok(None);
            };
            let ev = execute_23(mesh, pos, [plan.edge.0, plan.edge.1, w])?;
            if ev.is_some() {
                plan.remaining.remove(0);
            }
            Ok(ev)
        }
    }
}

/// Generators the next execution of this plan will touch.
fn plan_execution_generators(
    mesh: &Tetrahedralization,
    plan: &EdgeRemovalPlan,
) -> Result<Vec<usize>> {
    let star = mesh.star_region(plan.edge.0, plan.edge.1)?;
    if !star.closed {
        return Err(Error::TopologyCorrupt("plan edge star opened".into()));
    }
    let link = link_cycle(mesh, plan.edge.0, plan.edge.1, &star)?;
    let mut gens = match plan.remaining.first() {
        Some(PlannedAction::Remove) => {
            let mut g = vec![plan.edge.0, plan.edge.1];
            g.extend_from_slice(&link);
            g
        }
        Some(PlannedAction::CutEar { w }) if plan.remaining.len() == 2 => {
            // Atomic 4-4 touches everything.
            let _ = w;
            let mut g = vec![plan.edge.0, plan.edge.1];
            g.extend_from_slice(&link);
            g
        }
        Some(PlannedAction::CutEar { w }) => {
            let j = link
                .iter()
                .position(|&x| x == *w)
                .ok_or_else(|| Error::TopologyCorrupt("planned ear vanished".into()))?;
            let m = link.len();
            vec![
                plan.edge.0,
                plan.edge.1,
                link[(j + m - 1) % m],
                *w,
                link[(j + 1) % m],
            ]
        }
        None => Vec::new(),
    };
    gens.sort_unstable();
    gens.dedup();
    Ok(gens)
}

#[derive(Debug, Default)]
pub struct OptimizeOutcome {
    pub events: Vec<FlipEvent>,
    pub pending: Vec<EdgeRemovalPlan>,
    pub worst_alpha_before: f64,
    pub worst_alpha_after: f64,
}

/// One optimization pass at fixed (already blended) generator positions:
/// advance pending plans by one flip each, then search new plans for the
/// worst tets and execute only their first flip. Every generator joins at
/// most one flip, so the emitted flips are pairwise non-adjacent.
pub fn optimize_step(
    mesh: &mut Tetrahedralization,
    pos: &[V3],
    pending: Vec<EdgeRemovalPlan>,
    forced: Option<&ForcedFlip>,
    cfg: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    let mut out = OptimizeOutcome::default();
    let worst = |mesh: &Tetrahedralization| -> f64 {
        mesh.alive_tets()
            .map(|t| alpha_of_tet(mesh, t, pos))
            .fold(f64::INFINITY, f64::min)
    };
    out.worst_alpha_before = worst(mesh);
    if let Some(forced) = forced {
        let ev = match *forced {
            ForcedFlip::Remove32 { edge } => execute_32(mesh, pos, edge)?,
            ForcedFlip::Insert23 { face } => execute_23(mesh, pos, face)?,
            ForcedFlip::Repair44 { edge, diagonal } => execute_44(mesh, pos, edge, diagonal)?,
        };
        let ev = ev.ok_or_else(|| {
            Error::TopologyCorrupt("forced flip is not realizable".into())
        })?;
        out.events.push(ev);
        out.worst_alpha_after = worst(mesh);
        return Ok(out);
    }
    let mut executed: HashSet<usize> = HashSet::new();
    // Continue pending removals first, one flip each.
    for mut plan in pending {
        let valid = mesh.contains_edge(plan.edge.0, plan.edge.1)
            && plan_execution_generators(mesh, &plan)
                .map(|gens| {
                    gens.iter().all(|g| !executed.contains(g))
                        && mesh
                            .star_region(plan.edge.0, plan.edge.1)
                            .map(|s| s.closed && s.tets.len() == plan.remaining.len() + 2)
                            .unwrap_or(false)
                })
                .unwrap_or(false);
        if !valid {
            continue; // plan invalidated; the edge re-enters the queue later
        }
        let gens = plan_execution_generators(mesh, &plan)?;
        match execute_plan_step(mesh, pos, &mut plan)? {
            Some(ev) => {
                executed.extend(ev.generators.iter().copied());
                let _ = gens;
                out.events.push(ev);
                if !plan.remaining.is_empty() {
                    out.pending.push(plan);
                }
            }
            None => {}
        }
    }
    // Priority queue of bad tets, worst first.
    let mut queue: Vec<(TetId, f64)> = mesh
        .alive_tets()
        .map(|t| (t, alpha_of_tet(mesh, t, pos)))
        .filter(|&(_, a)| a < cfg.alpha_threshold)
        .collect();
    queue.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then(x.0.cmp(&y.0)));
    for (tet, alpha) in queue {
        if !mesh.is_alive(tet) {
            continue;
        }
        let vs = mesh.vertices(tet);
        if vs.iter().any(|g| executed.contains(g)) {
            continue;
        }
        // Re-check: earlier flips may have improved this tet.
        let alpha_now = alpha_of_tet(mesh, tet, pos);
        if alpha_now >= cfg.alpha_threshold {
            continue;
        }
        let _ = alpha;
        let mut best: Option<EdgeRemovalPlan> = None;
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(6);
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((vs[i].min(vs[j]), vs[i].max(vs[j])));
            }
        }
        edges.sort_unstable();
        for edge in edges {
            if let Some(plan) = plan_edge_removal(mesh, pos, edge, &executed, cfg, 0)? {
                let better = match &best {
                    // Strict improvement keeps the tie-break at the
                    // lexicographically smallest edge.
                    Some(b) => plan.predicted_alpha > b.predicted_alpha,
                    None => true,
                };
                if better {
                    best = Some(plan);
                }
            }
        }
        let Some(mut plan) = best else {
            continue;
        };
        if plan.predicted_alpha <= alpha_now + cfg.improvement_margin {
            continue;
        }
        match execute_plan_step(mesh, pos, &mut plan)? {
            Some(ev) => {
                executed.extend(ev.generators.iter().copied());
                out.events.push(ev);
                if !plan.remaining.is_empty() {
                    out.pending.push(plan);
                }
            }
            None => {}
        }
    }
    out.worst_alpha_after = worst(mesh);
    Ok(out)
}
