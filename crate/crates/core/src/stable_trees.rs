//! Dual trees of pointed stable rational curves: stability, the central
//! vertex or edge, contractions of one or two components to a plane conic,
//! principal parts and forgetting a marked point.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exact_projective::{Conic, P1Point, ProjectiveLine, ProjectivePoint};
use crate::marked_conic::{generic_realize, psi, AbstractMarkedConic, MarkedConic, MarkedConicError, Marking};
use crate::stability::{config_verdict, StabilityVerdict};

pub type VertexId = u32;
pub type Leg = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("legs must be labelled 1..m")]
    BadLegLabels,
    #[error("unknown leg {0}")]
    UnknownLeg(Leg),
    #[error("vertex {0} violates stability")]
    Unstable(VertexId),
    #[error("coordinates at vertex {0}: {1}")]
    BadCoords(VertexId, String),
    #[error("coordinates are required")]
    MissingCoords,
    #[error("tree has a central vertex")]
    HasCentralVertex,
    #[error("no edge splits the legs evenly")]
    NoCentralEdge,
    #[error("not a single vertex or an adjacent pair")]
    InvalidPart,
    #[error("forgetting needs at least 4 legs")]
    TooFewLegs,
    #[error("expected {expected} legs, found {found}")]
    LegCount { expected: u64, found: u64 },
    #[error(transparent)]
    Realize(#[from] MarkedConicError),
}

/// A special point of a component: a leg, or the node shared with a neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Special {
    Leg(Leg),
    Edge(VertexId),
}

pub type VertexCoords = BTreeMap<Special, P1Point>;

/// The weighted dual tree of an `m`-pointed rational nodal curve, optionally
/// with the position of every special point on its component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedTree {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
    legs: BTreeMap<Leg, VertexId>,
    coords: Option<BTreeMap<VertexId, VertexCoords>>,
}

fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl PointedTree {
    /// Checks that edges and legs refer to known vertices and that the legs
    /// are labelled `1..m`. Tree shape and stability are checked separately.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        legs: impl IntoIterator<Item = (Leg, VertexId)>,
    ) -> Result<Self, TreeError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if !vertices.contains(&v) {
                    return Err(TreeError::UnknownVertex(v));
                }
            }
            if a == b {
                return Err(TreeError::NotATree(format!("loop at {a}")));
            }
            if !es.insert(ordered(a, b)) {
                return Err(TreeError::NotATree(format!("repeated edge {a}-{b}")));
            }
        }
        let legs: BTreeMap<Leg, VertexId> = legs.into_iter().collect();
        for &v in legs.values() {
            if !vertices.contains(&v) {
                return Err(TreeError::UnknownVertex(v));
            }
        }
        if legs.keys().copied().ne(1..=legs.len() as Leg) {
            return Err(TreeError::BadLegLabels);
        }
        Ok(Self { vertices, edges: es, legs, coords: None })
    }

    /// Chain of vertices `0, 1, …` carrying the given numbers of legs,
    /// labelled consecutively.
    pub fn chain(leg_counts: &[u32]) -> Result<Self, TreeError> {
        let n = leg_counts.len() as VertexId;
        Self::with_leg_counts(0..n, (1..n).map(|v| (v - 1, v)), leg_counts)
    }

    /// Tree with the given edges where vertex `i` carries `leg_counts[i]` legs,
    /// labelled consecutively in vertex order.
    pub fn with_leg_counts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        leg_counts: &[u32],
    ) -> Result<Self, TreeError> {
        let mut legs = Vec::new();
        let mut label = 1;
        for (v, &c) in leg_counts.iter().enumerate() {
            for _ in 0..c {
                legs.push((label, v as VertexId));
                label += 1;
            }
        }
        Self::new(vertices, edges, legs)
    }

    /// Attach coordinates: per vertex, distinct points for its legs and edges.
    pub fn with_coords(mut self, coords: BTreeMap<VertexId, VertexCoords>) -> Result<Self, TreeError> {
        for &v in &self.vertices {
            let c = coords.get(&v).ok_or_else(|| TreeError::BadCoords(v, "missing".into()))?;
            let expected: BTreeSet<Special> = self.specials(v).into_iter().collect();
            if c.keys().copied().collect::<BTreeSet<_>>() != expected {
                return Err(TreeError::BadCoords(v, "keys differ from the special points".into()));
            }
            let distinct: BTreeSet<&P1Point> = c.values().collect();
            if distinct.len() != c.len() {
                return Err(TreeError::BadCoords(v, "two special points coincide".into()));
            }
        }
        if let Some(v) = coords.keys().find(|v| !self.vertices.contains(v)) {
            return Err(TreeError::UnknownVertex(*v));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Coordinates `0, 1, 2, …` on every component, in the order of [`Self::specials`].
    pub fn with_default_coords(self) -> Self {
        let coords = self
            .vertices
            .iter()
            .map(|&v| (v, self.specials(v).into_iter().zip(0..).map(|(s, t)| (s, P1Point::from_int(t))).collect()))
            .collect();
        self.with_coords(coords).expect("distinct integers")
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    pub fn legs(&self) -> &BTreeMap<Leg, VertexId> {
        &self.legs
    }

    pub fn coords(&self) -> Option<&BTreeMap<VertexId, VertexCoords>> {
        self.coords.as_ref()
    }

    pub fn leg_count(&self) -> u64 {
        self.legs.len() as u64
    }

    pub fn legs_at(&self, v: VertexId) -> Vec<Leg> {
        self.legs.iter().filter(|(_, &w)| w == v).map(|(&l, _)| l).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Legs at `v` then edges at `v`, each in increasing order.
    pub fn specials(&self, v: VertexId) -> Vec<Special> {
        let mut s: Vec<Special> = self.legs_at(v).into_iter().map(Special::Leg).collect();
        s.extend(self.neighbors(v).into_iter().map(Special::Edge));
        s
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    pub fn is_tree(&self) -> bool {
        let Some(&root) = self.vertices.iter().next() else {
            return false;
        };
        self.edges.len() + 1 == self.vertices.len() && self.component(root, None).len() == self.vertices.len()
    }

    /// Vertices reachable from `start` without passing through `avoid`.
    fn component(&self, start: VertexId, avoid: Option<VertexId>) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if Some(u) != avoid && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Legs on the branch at `v` containing the neighbour `u`.
    pub fn branch_legs(&self, v: VertexId, u: VertexId) -> Vec<Leg> {
        let side = self.component(u, Some(v));
        self.legs.iter().filter(|(_, w)| side.contains(w)).map(|(&l, _)| l).collect()
    }

    fn coord(&self, v: VertexId, s: Special) -> Result<P1Point, TreeError> {
        self.coords.as_ref().and_then(|c| c.get(&v)).and_then(|c| c.get(&s)).cloned().ok_or(TreeError::MissingCoords)
    }

    fn require_stable(&self) -> Result<(), TreeError> {
        if !check_stable_tree(self)? {
            let v = self.vertices.iter().find(|&&v| self.legs_at(v).len() + self.degree(v) < 3).expect("unstable vertex");
            return Err(TreeError::Unstable(*v));
        }
        Ok(())
    }
}

/// Whether every component has at least three special points.
pub fn check_stable_tree(t: &PointedTree) -> Result<bool, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree("disconnected or cyclic".into()));
    }
    Ok(t.vertices.iter().all(|&v| t.legs_at(v).len() + t.degree(v) >= 3))
}

/// Degree of the dual of the dualizing sheaf on each component, `2 − deg(v)`.
pub fn dualizing_dual_degrees(t: &PointedTree) -> BTreeMap<VertexId, i64> {
    t.vertices.iter().map(|&v| (v, 2 - t.degree(v) as i64)).collect()
}

/// The vertex at which every branch carries fewer than half the legs.
pub fn central_vertex(t: &PointedTree) -> Option<VertexId> {
    let m = t.leg_count();
    t.vertices.iter().copied().find(|&v| t.neighbors(v).into_iter().all(|u| 2 * (t.branch_legs(v, u).len() as u64) < m))
}

/// The edge splitting the legs into two halves; exists exactly when there is no central vertex.
pub fn central_edge(t: &PointedTree) -> Result<(VertexId, VertexId), TreeError> {
    if central_vertex(t).is_some() {
        return Err(TreeError::HasCentralVertex);
    }
    let m = t.leg_count();
    t.edges.iter().copied().find(|&(a, b)| 2 * (t.branch_legs(a, b).len() as u64) == m).ok_or(TreeError::NoCentralEdge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Vertex(VertexId),
    /// Adjacent vertices, smaller id first.
    Pair(VertexId, VertexId),
}

impl Part {
    pub fn pair(a: VertexId, b: VertexId) -> Self {
        let (a, b) = ordered(a, b);
        Part::Pair(a, b)
    }

    pub fn vertices(self) -> Vec<VertexId> {
        match self {
            Part::Vertex(v) => vec![v],
            Part::Pair(a, b) => vec![a, b],
        }
    }
}

/// Degrees in `{0, 1, 2}` on the components, summing to 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Twister {
    pub multidegree: BTreeMap<VertexId, u32>,
}

impl Twister {
    pub fn of_part(t: &PointedTree, part: Part) -> Self {
        let mut multidegree: BTreeMap<VertexId, u32> = t.vertices.iter().map(|&v| (v, 0)).collect();
        match part {
            Part::Vertex(v) => {
                multidegree.insert(v, 2);
            }
            Part::Pair(a, b) => {
                multidegree.insert(a, 1);
                multidegree.insert(b, 1);
            }
        }
        Self { multidegree }
    }

    pub fn support(&self) -> Vec<VertexId> {
        self.multidegree.iter().filter(|(_, &d)| d > 0).map(|(&v, _)| v).collect()
    }
}

/// Single vertices in id order, then adjacent pairs in edge order.
pub fn candidate_parts(t: &PointedTree) -> Vec<(Part, Twister)> {
    t.vertices
        .iter()
        .map(|&v| Part::Vertex(v))
        .chain(t.edges.iter().map(|&(a, b)| Part::Pair(a, b)))
        .map(|p| (p, Twister::of_part(t, p)))
        .collect()
}

/// What a marking of a contraction stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MarkingRole {
    Leg(Leg),
    /// The branch hanging at `at` through the neighbour `toward`, collapsed to one point.
    Branch {
        at: VertexId,
        toward: VertexId,
        legs: Vec<Leg>,
    },
}

impl MarkingRole {
    pub fn weight(&self) -> u32 {
        match self {
            MarkingRole::Leg(_) => 1,
            MarkingRole::Branch { legs, .. } => legs.len() as u32,
        }
    }

    fn special(&self) -> Special {
        match self {
            MarkingRole::Leg(l) => Special::Leg(*l),
            MarkingRole::Branch { toward, .. } => Special::Edge(*toward),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub part: Part,
    pub abstract_conic: AbstractMarkedConic,
    /// Roles per component, aligned with the groups of `abstract_conic`.
    pub roles: Vec<Vec<MarkingRole>>,
    /// Present when the tree carries coordinates.
    pub embedded: Option<MarkedConic>,
}

fn roles_at(t: &PointedTree, v: VertexId, skip: Option<VertexId>) -> Vec<MarkingRole> {
    let mut roles: Vec<MarkingRole> = t.legs_at(v).into_iter().map(MarkingRole::Leg).collect();
    for u in t.neighbors(v) {
        if Some(u) != skip {
            roles.push(MarkingRole::Branch { at: v, toward: u, legs: t.branch_legs(v, u) });
        }
    }
    roles
}

/// Map a component with node coordinate `e` linearly onto a line through
/// `(0:0:1)`, sending `e` to that point: `s ↦ (s₀e₁ − s₁e₀, s₀e₀ + s₁e₁)`.
fn onto_node_line(s: &P1Point, e: &P1Point, first: bool) -> ProjectivePoint {
    let ([s0, s1], [e0, e1]) = (s.coords(), e.coords());
    let u = s0 * e1 - s1 * e0;
    let w = s0 * e0 + s1 * e1;
    let zero = num_bigint::BigInt::from(0);
    let v = if first { [zero, u, w] } else { [u, zero, w] };
    ProjectivePoint::from_integers(v).expect("invertible on the line")
}

/// The marked conic obtained by contracting everything outside `part`.
pub fn contract_to_conic(t: &PointedTree, part: Part) -> Result<Contraction, TreeError> {
    t.require_stable()?;
    let (roles, abstract_conic) = match part {
        Part::Vertex(v) if t.vertices.contains(&v) => {
            let r = roles_at(t, v, None);
            let a = AbstractMarkedConic::smooth(r.iter().map(MarkingRole::weight).collect())?;
            (vec![r], a)
        }
        Part::Pair(a, b) if a < b && t.is_adjacent(a, b) => {
            let (ra, rb) = (roles_at(t, a, Some(b)), roles_at(t, b, Some(a)));
            let ab = AbstractMarkedConic::two_line(
                ra.iter().map(MarkingRole::weight).collect(),
                rb.iter().map(MarkingRole::weight).collect(),
            )?;
            (vec![ra, rb], ab)
        }
        _ => return Err(TreeError::InvalidPart),
    };
    let embedded = match t.coords {
        None => None,
        Some(_) => Some(embed(t, part, &roles)?),
    };
    Ok(Contraction { part, abstract_conic, roles, embedded })
}

fn embed(t: &PointedTree, part: Part, roles: &[Vec<MarkingRole>]) -> Result<MarkedConic, TreeError> {
    let mut markings = Vec::new();
    let conic = match part {
        Part::Vertex(v) => {
            for r in &roles[0] {
                markings.push(Marking::new(ProjectivePoint::veronese(&t.coord(v, r.special())?), r.weight()));
            }
            Conic::veronese()
        }
        Part::Pair(a, b) => {
            for (c, (v, u)) in [(a, b), (b, a)].into_iter().enumerate() {
                let e = t.coord(v, Special::Edge(u))?;
                for r in &roles[c] {
                    markings.push(Marking::new(onto_node_line(&t.coord(v, r.special())?, &e, c == 0), r.weight()));
                }
            }
            let x = ProjectiveLine::new(1, 0, 0).expect("nonzero");
            let y = ProjectiveLine::new(0, 1, 0).expect("nonzero");
            Conic::from_lines(&x, &y).expect("distinct lines")
        }
    };
    Ok(MarkedConic::new(conic, markings)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalPart {
    pub part: Part,
    pub twister: Twister,
    pub verdict: StabilityVerdict,
}

/// Candidate parts whose contraction, realized in certified generic
/// position, has a semistable configuration of lines.
pub fn principal_parts(t: &PointedTree, g: u32, seed: u64) -> Result<Vec<PrincipalPart>, TreeError> {
    t.require_stable()?;
    let m = 2 * u64::from(g) + 2;
    if t.leg_count() != m {
        return Err(TreeError::LegCount { expected: m, found: t.leg_count() });
    }
    let mut out = Vec::new();
    for (part, twister) in candidate_parts(t) {
        let c = contract_to_conic(t, part)?;
        let k = generic_realize(&c.abstract_conic, seed)?;
        let verdict = config_verdict(&psi(&k)).expect("nonempty configuration");
        if verdict.status.is_semistable() {
            out.push(PrincipalPart { part, twister, verdict });
        }
    }
    Ok(out)
}

/// Drop a leg, relabel the higher legs down by one, and contract the
/// component if it is left with only two special points.
pub fn forget_leg(t: &PointedTree, label: Leg) -> Result<PointedTree, TreeError> {
    t.require_stable()?;
    if t.leg_count() < 4 {
        return Err(TreeError::TooFewLegs);
    }
    let v = *t.legs.get(&label).ok_or(TreeError::UnknownLeg(label))?;
    let relabel = |s: Special| match s {
        Special::Leg(l) if l > label => Special::Leg(l - 1),
        other => other,
    };
    let mut out = t.clone();
    out.legs = t.legs.iter().filter(|(&l, _)| l != label).map(|(&l, &w)| (if l > label { l - 1 } else { l }, w)).collect();
    if let Some(coords) = &mut out.coords {
        for c in coords.values_mut() {
            *c = std::mem::take(c).into_iter().filter(|(s, _)| *s != Special::Leg(label)).map(|(s, p)| (relabel(s), p)).collect();
        }
    }
    if out.legs_at(v).len() + out.degree(v) >= 3 {
        return Ok(out);
    }
    let legs = out.legs_at(v);
    let nbrs = out.neighbors(v);
    match (legs.as_slice(), nbrs.as_slice()) {
        // The remaining leg moves to where the component met its neighbour.
        (&[l], &[u]) => {
            out.legs.insert(l, u);
            out.edges.remove(&ordered(u, v));
            if let Some(coords) = &mut out.coords {
                coords.remove(&v);
                let cu = coords.get_mut(&u).expect("vertex coords");
                let p = cu.remove(&Special::Edge(v)).expect("edge coordinate");
                cu.insert(Special::Leg(l), p);
            }
        }
        // A bridge between two neighbours: join them directly.
        (&[], &[u, w]) => {
            out.edges.remove(&ordered(u, v));
            out.edges.remove(&ordered(w, v));
            out.edges.insert(ordered(u, w));
            if let Some(coords) = &mut out.coords {
                coords.remove(&v);
                for (x, y) in [(u, w), (w, u)] {
                    let cx = coords.get_mut(&x).expect("vertex coords");
                    let p = cx.remove(&Special::Edge(v)).expect("edge coordinate");
                    cx.insert(Special::Edge(y), p);
                }
            }
        }
        _ => return Err(TreeError::Unstable(v)),
    }
    out.vertices.remove(&v);
    Ok(out)
}

/// Every labelled tree on `n` vertices, from Prüfer sequences.
fn labelled_trees(n: u32) -> Vec<Vec<(VertexId, VertexId)>> {
    match n {
        0 => return vec![],
        1 => return vec![vec![]],
        _ => {}
    }
    let len = (n - 2) as usize;
    let mut out = Vec::new();
    let mut seq = vec![0u32; len];
    loop {
        let mut deg = vec![1u32; n as usize];
        for &s in &seq {
            deg[s as usize] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..n).find(|&v| deg[v as usize] == 1).expect("leaf exists");
            edges.push(ordered(leaf, s));
            deg[leaf as usize] -= 1;
            deg[s as usize] -= 1;
        }
        let rest: Vec<u32> = (0..n).filter(|&v| deg[v as usize] == 1).collect();
        edges.push(ordered(rest[0], rest[1]));
        out.push(edges);
        // Next sequence in lexicographic order.
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
        }
    }
}

fn leg_distributions(m: u32, mins: &[u32]) -> Vec<Vec<u32>> {
    fn go(m: u32, mins: &[u32], acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if mins.is_empty() {
            if m == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let floor: u32 = mins[1..].iter().sum();
        for c in mins[0]..=m.saturating_sub(floor) {
            acc.push(c);
            go(m - c, &mins[1..], acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(m, mins, &mut Vec::new(), &mut out);
    out
}

/// All stable labelled trees on at most `max_vertices` vertices with `m`
/// legs, up to relabelling the legs: legs are numbered in vertex order.
pub fn enumerate_stable_trees(m: u32, max_vertices: u32) -> Vec<PointedTree> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for edges in labelled_trees(n) {
            let mut deg = vec![0u32; n as usize];
            for &(a, b) in &edges {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
            let mins: Vec<u32> = deg.iter().map(|&d| 3u32.saturating_sub(d)).collect();
            for counts in leg_distributions(m, &mins) {
                out.push(PointedTree::with_leg_counts(0..n, edges.iter().copied(), &counts).expect("valid tree"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::Status;

    fn pair(a: u32, b: u32) -> PointedTree {
        PointedTree::chain(&[a, b]).unwrap()
    }

    #[test]
    fn stability_examples() {
        assert!(check_stable_tree(&PointedTree::chain(&[8]).unwrap()).unwrap());
        assert!(check_stable_tree(&pair(6, 4)).unwrap());
        assert!(!check_stable_tree(&pair(1, 9)).unwrap());
        let cyc = PointedTree::new(0..3, [(0, 1), (1, 2), (0, 2)], (1..=6).map(|l| (l, 0))).unwrap();
        assert!(matches!(check_stable_tree(&cyc), Err(TreeError::NotATree(_))));
    }

    #[test]
    fn central_examples() {
        assert_eq!(central_vertex(&pair(6, 4)), Some(0));
        assert_eq!(central_vertex(&pair(4, 4)), None);
        assert_eq!(central_vertex(&PointedTree::chain(&[3, 2, 3]).unwrap()), Some(1));
        assert_eq!(central_edge(&pair(4, 4)), Ok((0, 1)));
        assert_eq!(central_edge(&PointedTree::chain(&[2, 2, 4]).unwrap()), Ok((1, 2)));
        assert_eq!(central_edge(&pair(6, 4)), Err(TreeError::HasCentralVertex));
    }

    #[test]
    fn candidates() {
        assert_eq!(candidate_parts(&PointedTree::chain(&[8]).unwrap()).len(), 1);
        let c = candidate_parts(&pair(6, 4));
        assert_eq!(c.iter().map(|x| x.0).collect::<Vec<_>>(), vec![Part::Vertex(0), Part::Vertex(1), Part::Pair(0, 1)]);
        assert_eq!(c[0].1.multidegree, BTreeMap::from([(0, 2), (1, 0)]));
        assert_eq!(candidate_parts(&PointedTree::chain(&[3, 2, 3]).unwrap()).len(), 5);
    }

    #[test]
    fn contractions() {
        let t = pair(6, 4);
        let single = contract_to_conic(&t, Part::Vertex(0)).unwrap();
        assert_eq!(
            single.abstract_conic.normalized(),
            AbstractMarkedConic::smooth(vec![1, 1, 1, 1, 1, 1, 4]).unwrap().normalized()
        );
        let both = contract_to_conic(&t, Part::Pair(0, 1)).unwrap();
        assert_eq!(both.abstract_conic.groups(), &[vec![1; 6], vec![1; 4]]);
        let mid = contract_to_conic(&PointedTree::chain(&[3, 2, 3]).unwrap(), Part::Vertex(1)).unwrap();
        assert_eq!(mid.abstract_conic.groups(), &[vec![1, 1, 3, 3]]);
        assert_eq!(contract_to_conic(&PointedTree::chain(&[3, 2, 3]).unwrap(), Part::Pair(0, 2)), Err(TreeError::InvalidPart));
    }

    #[test]
    fn embedded_contractions_land_on_the_model_conics() {
        let t = pair(6, 4).with_default_coords();
        let k = contract_to_conic(&t, Part::Vertex(0)).unwrap().embedded.unwrap();
        assert!(k.conic().is_smooth());
        assert_eq!(k.weight_profile(), vec![1, 1, 1, 1, 1, 1, 4]);
        let k = contract_to_conic(&t, Part::Pair(0, 1)).unwrap().embedded.unwrap();
        assert_eq!(k.conic().node(), Some(&ProjectivePoint::new(0, 0, 1).unwrap()));
        assert_eq!(k.markings().len(), 10);
    }

    #[test]
    fn principal_parts_of_two_component_curves() {
        let pp = principal_parts(&pair(6, 4), 4, 0).unwrap();
        assert_eq!(pp.iter().map(|p| p.part).collect::<Vec<_>>(), vec![Part::Vertex(0), Part::Pair(0, 1)]);
        assert!(pp.iter().all(|p| p.verdict.status == Status::StrictlySemistable));

        let pp = principal_parts(&PointedTree::chain(&[8]).unwrap(), 3, 0).unwrap();
        assert_eq!(pp.len(), 1);
        assert_eq!(pp[0].verdict.status, Status::Stable);

        let pp = principal_parts(&pair(4, 4), 3, 0).unwrap();
        assert_eq!(pp.iter().map(|p| p.part).collect::<Vec<_>>(), vec![Part::Pair(0, 1)]);
    }

    #[test]
    fn forgetting_legs() {
        let t = forget_leg(&pair(3, 5), 1).unwrap();
        assert_eq!((t.legs_at(0).len(), t.legs_at(1).len()), (2, 5));
        let t = forget_leg(&pair(2, 6).with_default_coords(), 1).unwrap();
        assert_eq!(t.vertices().len(), 1);
        assert_eq!(t.leg_count(), 7);
        assert!(check_stable_tree(&t).unwrap());
        assert!(t.coords().is_some());
        let t = forget_leg(&PointedTree::chain(&[4]).unwrap(), 2).unwrap();
        assert_eq!(t.leg_count(), 3);
        assert_eq!(forget_leg(&t, 1), Err(TreeError::TooFewLegs));

        // A bridge component left with only its two edges disappears.
        let t = PointedTree::chain(&[3, 1, 3]).unwrap().with_default_coords();
        let f = forget_leg(&t, 4).unwrap();
        assert_eq!(f.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(f.coords().unwrap()[&0][&Special::Edge(2)], t.coords().unwrap()[&0][&Special::Edge(1)]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(labelled_trees(4).len(), 16);
        assert_eq!(labelled_trees(5).len(), 125);
        let trees = enumerate_stable_trees(6, 3);
        assert!(trees.iter().all(|t| check_stable_tree(t).unwrap() && t.leg_count() == 6));
    }

    #[test]
    fn central_vertex_or_edge_always() {
        for m in [4, 6, 8, 10] {
            for t in enumerate_stable_trees(m, 5) {
                let centers: Vec<VertexId> = t
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&v| t.neighbors(v).into_iter().all(|u| 2 * t.branch_legs(v, u).len() < m as usize))
                    .collect();
                let halves = t.edges().iter().filter(|&&(a, b)| 2 * t.branch_legs(a, b).len() == m as usize).count();
                assert!(centers.len() <= 1 && halves <= 1);
                assert_eq!(centers.len() + halves, 1, "{t:?}");
                assert_eq!(central_vertex(&t).is_some(), central_edge(&t).is_err());
            }
        }
    }

    #[test]
    fn twister_budget() {
        for t in enumerate_stable_trees(8, 4) {
            assert_eq!(dualizing_dual_degrees(&t).values().sum::<i64>(), 2);
        }
    }

    #[test]
    fn small_curves_have_a_principal_part() {
        for g in [3, 4] {
            for t in enumerate_stable_trees(2 * g + 2, 2) {
                assert!(!principal_parts(&t, g, 0).unwrap().is_empty(), "{t:?}");
            }
        }
    }

    #[test]
    fn forgetting_keeps_stability() {
        for t in enumerate_stable_trees(7, 4) {
            let t = t.with_default_coords();
            for l in 1..=7 {
                let f = forget_leg(&t, l).unwrap();
                assert!(check_stable_tree(&f).unwrap());
                assert_eq!(f.leg_count(), 6);
                let at = t.legs()[&l];
                let dropped = t.legs_at(at).len() + t.degree(at) == 3;
                assert_eq!(f.vertices().len() + usize::from(dropped), t.vertices().len());
            }
        }
    }
}
