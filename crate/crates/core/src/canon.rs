//! Canonical forms of small graphs by color refinement with
//! individualization, plus a brute-force isomorphism check for tiny graphs.

use crate::graph::{SimplicialGraph, Vertex};

/// A relabelling-invariant certificate: vertex count and the sorted edge
/// list under the lexicographically least discovered labelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Canonical form, or `None` when the search tree exceeds `leaf_limit`
/// leaves (highly symmetric large graphs).
pub fn canonical_form(g: &SimplicialGraph, leaf_limit: usize) -> Option<CanonicalForm> {
    let n = g.vertex_count();
    let colors = refine(g, vec![0; n]);
    let mut search = Search { g, best: None, leaves: 0, leaf_limit };
    search.descend(colors);
    if search.leaves > leaf_limit {
        return None;
    }
    search.best
}

pub fn are_isomorphic(a: &SimplicialGraph, b: &SimplicialGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    match (canonical_form(a, 1 << 20), canonical_form(b, 1 << 20)) {
        (Some(x), Some(y)) => x == y,
        _ => panic!("canonical form search exceeded its leaf limit"),
    }
}

/// Tries every bijection; only for graphs with at most 10 vertices.
pub fn are_isomorphic_brute_force(a: &SimplicialGraph, b: &SimplicialGraph) -> bool {
    let n = a.vertex_count();
    assert!(n <= 10, "brute-force isomorphism is limited to 10 vertices");
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    let mut used = vec![false; n];
    fn place(a: &SimplicialGraph, b: &SimplicialGraph, i: usize, perm: &mut Vec<Vertex>, used: &mut Vec<bool>) -> bool {
        let n = a.vertex_count();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || a.degree(i as Vertex) != b.degree(cand as Vertex) {
                continue;
            }
            let ok = (0..i).all(|j| a.is_adjacent(i as Vertex, j as Vertex) == b.is_adjacent(cand as Vertex, perm[j]));
            if ok {
                used[cand] = true;
                perm[i] = cand as Vertex;
                if place(a, b, i + 1, perm, used) {
                    return true;
                }
                used[cand] = false;
            }
        }
        false
    }
    place(a, b, 0, &mut perm, &mut used)
}

struct Search<'a> {
    g: &'a SimplicialGraph,
    best: Option<CanonicalForm>,
    leaves: usize,
    leaf_limit: usize,
}

impl Search<'_> {
    fn descend(&mut self, colors: Vec<u32>) {
        if self.leaves > self.leaf_limit {
            return;
        }
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        // First non-singleton cell by color index.
        let target = (0..n).find(|&c| counts[c] > 1);
        let Some(target) = target else {
            self.leaves += 1;
            let cert = self.certificate(&colors);
            if self.best.as_ref().is_none_or(|b| cert < *b) {
                self.best = Some(cert);
            }
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
        for v in members {
            let split: Vec<u32> =
                colors.iter().enumerate().map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 }).collect();
            self.descend(refine(self.g, split));
        }
    }

    fn certificate(&self, colors: &[u32]) -> CanonicalForm {
        let mut edges: Vec<(Vertex, Vertex)> = self
            .g
            .edges()
            .map(|(a, b)| {
                let (x, y) = (colors[a as usize], colors[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        CanonicalForm { vertices: colors.len(), edges }
    }
}

/// Iterated 1-dimensional Weisfeiler-Leman refinement. Colors are re-ranked
/// densely from 0 by sorted signature, so the result is invariant under
/// relabelling.
fn refine(g: &SimplicialGraph, mut colors: Vec<u32>) -> Vec<u32> {
    let n = colors.len();
    colors = rank(&colors.iter().map(|&c| (c, Vec::new())).collect::<Vec<_>>());
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v as Vertex).iter().map(|&u| colors[u as usize]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let distinct = |c: &[u32]| c.iter().copied().max().map_or(0, |m| m + 1);
        if distinct(&next) == distinct(&colors) {
            return next;
        }
        colors = next;
    }
}

fn rank(sigs: &[(u32, Vec<u32>)]) -> Vec<u32> {
    let mut sorted: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(&s).expect("present") as u32).collect()
}
