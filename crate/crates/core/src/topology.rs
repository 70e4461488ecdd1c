//! Recognition of contractible graphs, d-spheres and d-graphs.
//!
//! The definitions are recursive:
//!
//! * the one-point graph is contractible; a larger graph is contractible if
//!   some vertex `x` has a contractible unit sphere `S(x)` and `G - x` is
//!   contractible;
//! * the empty graph is the (-1)-sphere; a d-sphere is a graph whose unit
//!   spheres are (d-1)-spheres and which becomes contractible after removing
//!   some vertex;
//! * a d-graph is a graph whose unit spheres are all (d-1)-spheres.
//!
//! Contractibility is a search. Every search runs against an expansion
//! budget and reports [`Verdict::ResourceLimit`] instead of guessing when
//! the budget runs out. A `Yes` is always backed by an explicit removal
//! sequence; a `No` comes either from exhausting the search or from a sound
//! obstruction (disconnectedness, Euler characteristic).

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::graph::{SimplicialGraph, Vertex};
use crate::par;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Canonical-form memoization applies to graphs up to this size.
const CANON_MEMO_MAX: usize = 12;
/// Exhaustive backtracking applies to graphs up to this size; larger graphs
/// only get the greedy pass.
const BACKTRACK_MAX: usize = 64;
/// Euler characteristic pruning applies to graphs up to this size.
const EULER_PRUNE_MAX: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    ResourceLimit,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A vertex whose unit sphere fails the required test.
    Vertex(Vertex),
    /// A vertex set that as a whole fails (possibly empty).
    Subgraph(Vec<Vertex>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub dimension: Option<i64>,
    pub witness: Option<Witness>,
    pub expansions: u64,
}

impl VerificationReport {
    pub fn is_yes(&self) -> bool {
        self.verdict.is_yes()
    }

    fn new(verdict: Verdict, dimension: i64, witness: Option<Witness>, expansions: u64) -> Self {
        let (dimension, witness) = match verdict {
            Verdict::Yes => (Some(dimension), None),
            Verdict::No => (Some(dimension), Some(witness.unwrap_or(Witness::Subgraph(Vec::new())))),
            Verdict::ResourceLimit => (Some(dimension), witness),
        };
        VerificationReport { verdict, dimension, witness, expansions }
    }
}

/// Stateful recognizer: an expansion budget and a memo of verdicts keyed by
/// canonical form. Not shared across threads; parallel callers create one
/// per task.
pub struct Verifier {
    budget: u64,
    used: u64,
    memo: HashMap<CanonicalForm, Verdict>,
}

impl Verifier {
    pub fn new(budget: u64) -> Self {
        Verifier { budget, used: 0, memo: HashMap::new() }
    }

    pub fn expansions(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.budget
    }

    pub fn contractible(&mut self, g: &SimplicialGraph) -> Verdict {
        let n = g.vertex_count();
        match n {
            0 => return Verdict::No,
            1 => return Verdict::Yes,
            _ => {}
        }
        if !self.tick() {
            return Verdict::ResourceLimit;
        }
        if !is_connected(g) {
            return Verdict::No;
        }
        // Cones are contractible.
        if g.vertices().any(|v| g.degree(v) == n - 1) {
            return Verdict::Yes;
        }
        let key = if n <= CANON_MEMO_MAX { canonical_form(g, 50_000) } else { None };
        if let Some(v) = key.as_ref().and_then(|k| self.memo.get(k)) {
            return *v;
        }
        let verdict = if n <= EULER_PRUNE_MAX && g.euler_characteristic() != 1 {
            Verdict::No
        } else if self.greedy(g) {
            Verdict::Yes
        } else if n <= BACKTRACK_MAX {
            self.backtrack(g)
        } else {
            Verdict::ResourceLimit
        };
        if let (Some(k), true) = (key, verdict != Verdict::ResourceLimit) {
            self.memo.insert(k, verdict);
        }
        verdict
    }

    /// Removes vertices with contractible unit spheres, smallest degree
    /// first, until one vertex is left. Success certifies contractibility;
    /// failure proves nothing.
    fn greedy(&mut self, g: &SimplicialGraph) -> bool {
        let n = g.vertex_count();
        let mut alive = vec![true; n];
        let mut remaining = n;
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.sort_by_key(|&v| (g.degree(v), v));
        let mut queue: VecDeque<Vertex> = order.into();
        let mut queued = vec![true; n];
        while let Some(x) = queue.pop_front() {
            queued[x as usize] = false;
            if remaining == 1 {
                break;
            }
            if !alive[x as usize] {
                continue;
            }
            if !self.tick() {
                return false;
            }
            let nbrs: Vec<Vertex> = g.neighbors(x).iter().copied().filter(|&u| alive[u as usize]).collect();
            if nbrs.is_empty() {
                continue;
            }
            if self.contractible(&g.induced_plain(&nbrs)) == Verdict::Yes {
                alive[x as usize] = false;
                remaining -= 1;
                for u in nbrs {
                    if !queued[u as usize] {
                        queued[u as usize] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        remaining == 1
    }

    fn backtrack(&mut self, g: &SimplicialGraph) -> Verdict {
        let n = g.vertex_count();
        debug_assert!(n <= 64);
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut memo = HashMap::new();
        self.search(g, full, &mut memo)
    }

    fn search(&mut self, g: &SimplicialGraph, alive: u64, memo: &mut HashMap<u64, Verdict>) -> Verdict {
        let count = alive.count_ones() as usize;
        if count == 1 {
            return Verdict::Yes;
        }
        if let Some(v) = memo.get(&alive) {
            return *v;
        }
        if !self.tick() {
            return Verdict::ResourceLimit;
        }
        let members: Vec<Vertex> = (0..g.vertex_count() as Vertex).filter(|&v| alive & (1 << v) != 0).collect();
        let alive_nbrs =
            |v: Vertex| -> Vec<Vertex> { g.neighbors(v).iter().copied().filter(|&u| alive & (1 << u) != 0).collect() };
        let verdict = if !mask_connected(g, alive) {
            Verdict::No
        } else if members.iter().any(|&v| alive_nbrs(v).len() == count - 1) {
            Verdict::Yes
        } else {
            let mut order = members.clone();
            order.sort_by_key(|&v| (alive_nbrs(v).len(), v));
            let mut limited = false;
            let mut found = false;
            for x in order {
                let nbrs = alive_nbrs(x);
                match self.contractible(&g.induced_plain(&nbrs)) {
                    Verdict::Yes => match self.search(g, alive & !(1 << x), memo) {
                        Verdict::Yes => {
                            found = true;
                            break;
                        }
                        Verdict::ResourceLimit => limited = true,
                        Verdict::No => {}
                    },
                    Verdict::ResourceLimit => limited = true,
                    Verdict::No => {}
                }
            }
            if found {
                Verdict::Yes
            } else if limited {
                Verdict::ResourceLimit
            } else {
                Verdict::No
            }
        };
        if verdict != Verdict::ResourceLimit {
            memo.insert(alive, verdict);
        }
        verdict
    }

    /// Sphere recognition; the witness explains a `No`.
    pub fn sphere(&mut self, g: &SimplicialGraph, d: i64) -> (Verdict, Option<Witness>) {
        let n = g.vertex_count();
        let everything = || Witness::Subgraph(g.vertices().collect());
        if d < -1 {
            return (Verdict::No, Some(everything()));
        }
        if d == -1 {
            return if n == 0 { (Verdict::Yes, None) } else { (Verdict::No, Some(everything())) };
        }
        if n == 0 {
            return (Verdict::No, Some(Witness::Subgraph(Vec::new())));
        }
        if d == 0 {
            return match g.vertices().find(|&v| g.degree(v) > 0) {
                Some(v) => (Verdict::No, Some(Witness::Vertex(v))),
                None if n == 2 => (Verdict::Yes, None),
                None => (Verdict::No, Some(everything())),
            };
        }
        if d == 1 {
            return match one_graph_witness(g) {
                Some(w) => (Verdict::No, Some(w)),
                None if is_connected(g) => (Verdict::Yes, None),
                None => (Verdict::No, Some(Witness::Subgraph(components(g).remove(1)))),
            };
        }
        let mut limited = false;
        for x in g.vertices() {
            let s = g.induced_plain(g.neighbors(x));
            match self.sphere(&s, d - 1).0 {
                Verdict::Yes => {}
                Verdict::No => return (Verdict::No, Some(Witness::Vertex(x))),
                Verdict::ResourceLimit => limited = true,
            }
        }
        if limited {
            return (Verdict::ResourceLimit, None);
        }
        self.puncture_contractible(g, d)
    }

    /// Second half of sphere recognition, once every unit sphere passed.
    fn puncture_contractible(&mut self, g: &SimplicialGraph, d: i64) -> (Verdict, Option<Witness>) {
        let everything = || Witness::Subgraph(g.vertices().collect());
        if g.euler_characteristic() != 1 + if d % 2 == 0 { 1 } else { -1 } {
            return (Verdict::No, Some(everything()));
        }
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.sort_by_key(|&v| (g.degree(v), v));
        let mut limited = false;
        for x in order {
            let rest: Vec<Vertex> = g.vertices().filter(|&v| v != x).collect();
            match self.contractible(&g.induced_plain(&rest)) {
                Verdict::Yes => return (Verdict::Yes, None),
                Verdict::ResourceLimit => {
                    limited = true;
                    if self.used > self.budget {
                        break;
                    }
                }
                Verdict::No => {}
            }
        }
        if limited {
            (Verdict::ResourceLimit, None)
        } else {
            (Verdict::No, Some(everything()))
        }
    }
}

pub fn is_contractible(g: &SimplicialGraph, budget: u64) -> VerificationReport {
    let mut v = Verifier::new(budget);
    let verdict = v.contractible(g);
    let witness = (verdict == Verdict::No).then(|| Witness::Subgraph(g.vertices().collect()));
    let dim = g.dimension().map_or(-1, |d| d as i64);
    VerificationReport::new(verdict, dim, witness, v.expansions())
}

/// Checks every unit sphere (in parallel, one verifier per vertex, each
/// with the full budget) and then a puncture.
pub fn is_sphere(g: &SimplicialGraph, d: i64, budget: u64) -> VerificationReport {
    if d <= 1 || g.is_empty() {
        let mut v = Verifier::new(budget);
        let (verdict, witness) = v.sphere(g, d);
        return VerificationReport::new(verdict, d, witness, v.expansions());
    }
    let (verdict, witness, mut expansions) = unit_spheres_are_spheres(g, d - 1, budget);
    if verdict != Verdict::Yes {
        return VerificationReport::new(verdict, d, witness, expansions);
    }
    let mut v = Verifier::new(budget);
    let (verdict, witness) = v.puncture_contractible(g, d);
    expansions += v.expansions();
    VerificationReport::new(verdict, d, witness, expansions)
}

/// Every unit sphere must be a (d-1)-sphere. The empty graph passes
/// vacuously.
pub fn is_dgraph(g: &SimplicialGraph, d: i64, budget: u64) -> VerificationReport {
    match d {
        d if d < 0 => {
            let verdict = if g.is_empty() { Verdict::Yes } else { Verdict::No };
            let witness = g.vertices().next().map(Witness::Vertex);
            VerificationReport::new(verdict, d, witness, 0)
        }
        0 => {
            let witness = g.vertices().find(|&v| g.degree(v) > 0).map(Witness::Vertex);
            let verdict = if witness.is_some() { Verdict::No } else { Verdict::Yes };
            VerificationReport::new(verdict, 0, witness, 0)
        }
        1 => {
            let witness = one_graph_witness(g);
            let verdict = if witness.is_some() { Verdict::No } else { Verdict::Yes };
            VerificationReport::new(verdict, 1, witness, 0)
        }
        _ => {
            let (verdict, witness, expansions) = unit_spheres_are_spheres(g, d - 1, budget);
            VerificationReport::new(verdict, d, witness, expansions)
        }
    }
}

fn unit_spheres_are_spheres(g: &SimplicialGraph, d: i64, budget: u64) -> (Verdict, Option<Witness>, u64) {
    let results = par::map_range(g.vertex_count(), |x| {
        let s = g.induced_plain(g.neighbors(x as Vertex));
        if d == 1 {
            // Fast path: a 1-sphere is a single cycle with at least 4 vertices.
            let ok = s.vertex_count() >= 4 && one_graph_witness(&s).is_none() && is_connected(&s);
            return (if ok { Verdict::Yes } else { Verdict::No }, 0);
        }
        let mut v = Verifier::new(budget);
        let verdict = v.sphere(&s, d).0;
        (verdict, v.expansions())
    });
    let expansions = results.iter().map(|r| r.1).sum();
    if let Some(x) = results.iter().position(|r| r.0 == Verdict::No) {
        return (Verdict::No, Some(Witness::Vertex(x as Vertex)), expansions);
    }
    if results.iter().any(|r| r.0 == Verdict::ResourceLimit) {
        return (Verdict::ResourceLimit, None, expansions);
    }
    (Verdict::Yes, None, expansions)
}

/// `None` if `g` is a disjoint union of cycles of length at least 4,
/// otherwise a vertex showing why not.
fn one_graph_witness(g: &SimplicialGraph) -> Option<Witness> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) != 2) {
        return Some(Witness::Vertex(v));
    }
    components(g).into_iter().find(|c| c.len() < 4).map(|c| Witness::Vertex(c[0]))
}

/// Connected components, each sorted, ordered by least vertex.
pub fn components(g: &SimplicialGraph) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in g.edges() {
        let ra = find(&mut parent, a as usize);
        let rb = find(&mut parent, b as usize);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<Vertex>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let i = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[i].push(v as Vertex);
    }
    groups
}

pub fn is_connected(g: &SimplicialGraph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0 as Vertex];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

fn mask_connected(g: &SimplicialGraph, alive: u64) -> bool {
    let start = alive.trailing_zeros();
    let mut seen = 1u64 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            let bit = 1u64 << u;
            if alive & bit != 0 && seen & bit == 0 {
                seen |= bit;
                stack.push(u);
            }
        }
    }
    seen == alive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn contractible(g: &SimplicialGraph) -> Verdict {
        is_contractible(g, DEFAULT_BUDGET).verdict
    }

    #[test]
    fn contractibility_examples() {
        assert_eq!(contractible(&catalog::point()), Verdict::Yes);
        assert_eq!(contractible(&SimplicialGraph::empty()), Verdict::No);
        assert_eq!(contractible(&catalog::cycle(4).unwrap()), Verdict::No);
        assert_eq!(contractible(&catalog::wheel(7).unwrap()), Verdict::Yes);
        assert_eq!(contractible(&catalog::path(9)), Verdict::Yes);
        assert_eq!(contractible(&catalog::star(5)), Verdict::Yes);
        assert_eq!(contractible(&catalog::zero_sphere()), Verdict::No);
    }

    #[test]
    fn no_verdicts_carry_witnesses() {
        let r = is_contractible(&catalog::cycle(4).unwrap(), DEFAULT_BUDGET);
        assert_eq!(r.verdict, Verdict::No);
        assert!(r.witness.is_some());
        let r = is_dgraph(&catalog::wheel(7).unwrap(), 2, DEFAULT_BUDGET);
        assert_eq!(r.verdict, Verdict::No);
        assert_eq!(r.witness, Some(Witness::Vertex(1)));
    }

    #[test]
    fn punctured_sphere_is_contractible() {
        let oct = catalog::cross_polytope(2).unwrap();
        let punctured = oct.without_vertex(0).graph;
        assert_eq!(contractible(&punctured), Verdict::Yes);
        let ico = catalog::icosahedron();
        assert_eq!(contractible(&ico.without_vertex(3).graph), Verdict::Yes);
        assert_eq!(contractible(&ico), Verdict::No);
    }

    #[test]
    fn exhausted_budget_reports_resource_limit() {
        let ico = catalog::icosahedron();
        let r = is_contractible(&ico.without_vertex(3).graph, 2);
        assert_eq!(r.verdict, Verdict::ResourceLimit);
        let r = is_sphere(&catalog::cross_polytope(3).unwrap(), 3, 0);
        assert_eq!(r.verdict, Verdict::ResourceLimit);
    }

    #[test]
    fn sphere_examples() {
        assert!(is_sphere(&SimplicialGraph::empty(), -1, 10).is_yes());
        assert!(!is_sphere(&catalog::point(), -1, 10).is_yes());
        assert!(is_sphere(&catalog::zero_sphere(), 0, 10).is_yes());
        assert!(is_sphere(&catalog::cycle(12).unwrap(), 1, 10).is_yes());
        assert!(!is_sphere(&catalog::cycle_unchecked(3), 1, 10).is_yes());
        assert!(is_sphere(&catalog::octahedron_polar(), 2, DEFAULT_BUDGET).is_yes());
        assert!(is_sphere(&catalog::cross_polytope(3).unwrap(), 3, DEFAULT_BUDGET).is_yes());
        // A 2-torus is a 2-graph but not a 2-sphere.
        let torus = catalog::kuhn_grid(&[4, 4], true).unwrap();
        assert!(is_dgraph(&torus, 2, DEFAULT_BUDGET).is_yes());
        assert_eq!(is_sphere(&torus, 2, DEFAULT_BUDGET).verdict, Verdict::No);
    }

    #[test]
    fn one_graph_fast_path() {
        let two_c8 = SimplicialGraph::disjoint_union(&catalog::cycle(8).unwrap(), &catalog::cycle(8).unwrap());
        assert!(is_dgraph(&two_c8, 1, 0).is_yes());
        assert!(!is_sphere(&two_c8, 1, 0).is_yes());
        let with_triangle = SimplicialGraph::disjoint_union(&catalog::cycle(8).unwrap(), &catalog::cycle_unchecked(3));
        assert_eq!(is_dgraph(&with_triangle, 1, 0).witness, Some(Witness::Vertex(8)));
    }

    #[test]
    fn components_are_ordered() {
        let g = SimplicialGraph::disjoint_union(&catalog::cycle(4).unwrap(), &catalog::path(3));
        assert_eq!(components(&g), vec![vec![0, 1, 2, 3], vec![4, 5, 6]]);
        assert!(components(&SimplicialGraph::empty()).is_empty());
    }
}
