//! Mapping graphs: multigraphs with an arrow on every edge and a cyclic leg
//! ordering at every vertex, plus cycle-space computations.
//!
//! The arrow of an edge fixes which end contracts the `L` and which the `R`
//! virtual leg of the edge tensor: the tail is `L`, the head is `R`. The
//! per-vertex slot list fixes which incident edge occupies which virtual
//! slot of the vertex tensor, in the internal (clockwise) order starting
//! after the physical leg.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graded::Side;

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph preset needs {0}")]
    BadPreset(String),
    #[error("self-loops are not supported (edge {0})")]
    SelfLoop(EdgeId),
    #[error("edge {0} must appear in exactly two vertex slot lists")]
    BadIncidence(EdgeId),
    #[error("vertex {0} slot list does not match its incident edges")]
    BadSlotList(VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
}

/// One edge of the mapping graph. `tail` holds the `L` end, `head` the `R`
/// end of the edge tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// Which graph family a graph was built from, when it came from a preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Cycle { n: u32 },
    Torus { lx: u32, ly: u32 },
}

/// A multigraph with labels, arrows and per-vertex slot orderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    /// slot lists: `slots[v][k-1]` is the edge occupying slot `k` at `v`
    slots: BTreeMap<VertexId, Vec<EdgeId>>,
    labels: BTreeMap<EdgeId, String>,
    vertex_labels: BTreeMap<VertexId, String>,
    pub preset: Option<Preset>,
}

impl MappingGraph {
    pub fn new(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        slots: BTreeMap<VertexId, Vec<EdgeId>>,
    ) -> Result<MappingGraph, GraphError> {
        let g = MappingGraph {
            labels: edges.iter().map(|e| (e.id, format!("e{}", e.id))).collect(),
            vertex_labels: vertices.iter().map(|&v| (v, format!("{v}"))).collect(),
            vertices,
            edges,
            slots,
            preset: None,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let mut seen = BTreeMap::new();
        for e in &self.edges {
            if e.tail == e.head {
                return Err(GraphError::SelfLoop(e.id));
            }
            seen.insert(e.id, 0u32);
        }
        for (&v, list) in &self.slots {
            let mut incident = BTreeSet::new();
            for &e in list {
                if !incident.insert(e) {
                    return Err(GraphError::BadSlotList(v));
                }
                *seen.get_mut(&e).ok_or(GraphError::BadIncidence(e))? += 1;
            }
            let expect: BTreeSet<EdgeId> = self
                .edges
                .iter()
                .filter(|e| e.tail == v || e.head == v)
                .map(|e| e.id)
                .collect();
            if incident != expect {
                return Err(GraphError::BadSlotList(v));
            }
        }
        for (&e, &count) in &seen {
            if count != 2 {
                return Err(GraphError::BadIncidence(e));
            }
        }
        if self.vertices.len() != self.slots.len() {
            return Err(GraphError::BadSlotList(
                *self.vertices.iter().find(|v| !self.slots.contains_key(v)).unwrap_or(&0),
            ));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        self.edges.iter().find(|e| e.id == id).expect("edge id")
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.slots[&v].len()
    }

    pub fn slot_list(&self, v: VertexId) -> &[EdgeId] {
        &self.slots[&v]
    }

    /// Slot number (1..=d) of edge `e` at vertex `v`.
    pub fn slot_of(&self, v: VertexId, e: EdgeId) -> Option<u8> {
        self.slots[&v].iter().position(|&x| x == e).map(|p| p as u8 + 1)
    }

    /// Which virtual side of edge `e` faces vertex `v`.
    pub fn side_at(&self, v: VertexId, e: EdgeId) -> Side {
        let edge = self.edge(e);
        if edge.tail == v {
            Side::L
        } else {
            Side::R
        }
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        &self.labels[&e]
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_labels[&v]
    }

    /// Edge labels in id order: the spin-site universe of this graph.
    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| self.labels[&e.id].clone()).collect()
    }

    /// Vertex labels in id order: the fermionic mode universe.
    pub fn vertex_labels(&self) -> Vec<String> {
        self.vertices.iter().map(|&v| self.vertex_labels[&v].clone()).collect()
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.vertex_labels
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(&v, _)| v)
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(&e, _)| e)
    }

    /// Neighbors of `v` as (edge, other endpoint), sorted by edge id.
    pub fn incident(&self, v: VertexId) -> Vec<(EdgeId, VertexId)> {
        let mut out: Vec<(EdgeId, VertexId)> = self
            .edges
            .iter()
            .filter(|e| e.tail == v || e.head == v)
            .map(|e| (e.id, if e.tail == v { e.head } else { e.tail }))
            .collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.vertices[0]);
        seen.insert(self.vertices[0]);
        while let Some(v) = queue.pop_front() {
            for (_, w) in self.incident(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Shortest path from `from` to `to` as a list of edge ids; BFS with
    /// deterministic tie-breaking by edge id.
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Option<Vec<EdgeId>> {
        self.shortest_path_avoiding(from, to, None)
    }

    /// Shortest path not using the banned edge (falls back to nothing if
    /// that disconnects the endpoints).
    pub fn shortest_path_avoiding(
        &self,
        from: VertexId,
        to: VertexId,
        banned: Option<EdgeId>,
    ) -> Option<Vec<EdgeId>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut prev: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for (e, w) in self.incident(v) {
                if Some(e) == banned {
                    continue;
                }
                if w != from && !prev.contains_key(&w) {
                    prev.insert(w, (v, e));
                    if w == to {
                        let mut path = Vec::new();
                        let mut cur = to;
                        while cur != from {
                            let (p, pe) = prev[&cur];
                            path.push(pe);
                            cur = p;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// A cycle written as the set of edge ids it traverses (Z2 chain).
pub type Cycle = BTreeSet<EdgeId>;

/// A basis of the graph's cycle space over Z2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
    pub rank: usize,
    /// Indices into `cycles` of the non-contractible representatives, when
    /// the graph is a preset with known topology.
    pub non_contractible: Vec<usize>,
}

/// Circuit rank `|E| - |V| + 1` of a connected graph.
pub fn circuit_rank(g: &MappingGraph) -> usize {
    g.edges().len() + 1 - g.vertices().len()
}

/// Fundamental cycles of a spanning tree, one per non-tree edge.
///
/// On torus presets the basis is post-processed so `lx·ly - 1` cycles are
/// plaquettes and two are the non-contractible loops (through row 0 and
/// column 0; the encoder may swap in other representatives).
pub fn cycle_basis(g: &MappingGraph) -> Result<CycleBasis, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if let Some(Preset::Torus { lx, ly }) = g.preset {
        let mut cycles: Vec<Cycle> = Vec::new();
        for f in plaquettes(lx, ly) {
            cycles.push(f);
        }
        cycles.pop(); // plaquettes multiply to the identity chain
        let h: Cycle = (0..lx).map(|x| torus_h_edge(lx, x, 0)).collect();
        let v: Cycle = (0..ly).map(|y| torus_v_edge(lx, ly, 0, y)).collect();
        cycles.push(h);
        cycles.push(v);
        let rank = cycles.len();
        debug_assert_eq!(rank, circuit_rank(g));
        debug_assert_eq!(z2_rank(&cycles, g.edges().len()), rank);
        return Ok(CycleBasis {
            non_contractible: vec![rank - 2, rank - 1],
            cycles,
            rank,
        });
    }
    // spanning tree by BFS, then one fundamental cycle per chord
    let root = g.vertices()[0];
    let mut tree_edge: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    seen.insert(root);
    let mut queue = VecDeque::new();
    queue.push_back(root);
    let mut in_tree: BTreeSet<EdgeId> = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        for (e, w) in g.incident(v) {
            if seen.insert(w) {
                tree_edge.insert(w, (v, e));
                in_tree.insert(e);
                queue.push_back(w);
            }
        }
    }
    let tree_path = |mut v: VertexId| -> Vec<EdgeId> {
        let mut path = Vec::new();
        while v != root {
            let (p, e) = tree_edge[&v];
            path.push(e);
            v = p;
        }
        path
    };
    let mut cycles = Vec::new();
    for e in g.edges() {
        if in_tree.contains(&e.id) {
            continue;
        }
        let mut chain: Cycle = BTreeSet::new();
        chain.insert(e.id);
        for x in tree_path(e.tail).into_iter().chain(tree_path(e.head)) {
            if !chain.insert(x) {
                chain.remove(&x);
            }
        }
        cycles.push(chain);
    }
    let rank = cycles.len();
    debug_assert_eq!(rank, circuit_rank(g));
    let non_contractible = if matches!(g.preset, Some(Preset::Cycle { .. })) {
        vec![0]
    } else {
        Vec::new()
    };
    Ok(CycleBasis {
        cycles,
        rank,
        non_contractible,
    })
}

/// Z2 rank of a set of edge chains.
pub fn z2_rank(cycles: &[Cycle], n_edges: usize) -> usize {
    let mut rows: Vec<u64> = cycles
        .iter()
        .map(|c| c.iter().fold(0u64, |acc, &e| acc | (1 << e)))
        .collect();
    assert!(n_edges <= 64);
    let mut rank = 0;
    for bit in 0..n_edges {
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) {
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r] >> bit & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Cycle graph on `n >= 2` vertices. Edge `i` runs from vertex `i` to vertex
/// `i+1 mod n`; all arrows point forward. Slot 1 at each vertex is the
/// incoming (left) edge, slot 2 the outgoing (right) edge, the clockwise
/// order seen from a physical leg drawn downward.
pub fn cycle_graph(n: u32) -> Result<MappingGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadPreset("a cycle of at least 2 sites".into()));
    }
    let vertices: Vec<VertexId> = (0..n).collect();
    let edges: Vec<Edge> = (0..n)
        .map(|i| Edge {
            id: i,
            tail: i,
            head: (i + 1) % n,
        })
        .collect();
    let slots: BTreeMap<VertexId, Vec<EdgeId>> = (0..n)
        .map(|v| (v, vec![(v + n - 1) % n, v]))
        .collect();
    let mut g = MappingGraph::new(vertices, edges, slots)?;
    g.preset = Some(Preset::Cycle { n });
    Ok(g)
}

fn torus_h_edge(lx: u32, x: u32, y: u32) -> EdgeId {
    y * lx + (x % lx)
}

fn torus_v_edge(lx: u32, ly: u32, x: u32, y: u32) -> EdgeId {
    lx * ly + (y % ly) * lx + (x % lx)
}

/// Plaquette of the square torus with lower-left corner (x, y): its four
/// boundary edges.
fn plaquettes(lx: u32, ly: u32) -> Vec<Cycle> {
    let mut out = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            let mut c = BTreeSet::new();
            for e in [
                torus_h_edge(lx, x, y),
                torus_h_edge(lx, x, (y + 1) % ly),
                torus_v_edge(lx, ly, x, y),
                torus_v_edge(lx, ly, (x + 1) % lx, y),
            ] {
                // parallel edges on a 2-wide torus coincide pairwise
                if !c.insert(e) {
                    c.remove(&e);
                }
            }
            out.push(c);
        }
    }
    out
}

/// Square-lattice torus with `lx·ly` vertices of degree 4.
///
/// The vertex at (x, y) has id `y·lx + x`. Horizontal edges point +x and
/// vertical edges +y; slot order at every vertex is (up, right, down, left).
pub fn torus_graph(lx: u32, ly: u32) -> Result<MappingGraph, GraphError> {
    if lx < 2 || ly < 2 {
        return Err(GraphError::BadPreset("torus dimensions of at least 2".into()));
    }
    let vid = |x: u32, y: u32| (y % ly) * lx + (x % lx);
    let vertices: Vec<VertexId> = (0..lx * ly).collect();
    let mut edges = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            edges.push(Edge {
                id: torus_h_edge(lx, x, y),
                tail: vid(x, y),
                head: vid(x + 1, y),
            });
        }
    }
    for y in 0..ly {
        for x in 0..lx {
            edges.push(Edge {
                id: torus_v_edge(lx, ly, x, y),
                tail: vid(x, y),
                head: vid(x, y + 1),
            });
        }
    }
    let mut slots = BTreeMap::new();
    for y in 0..ly {
        for x in 0..lx {
            // clockwise from a physical leg drawn to the southeast:
            // down, left, up, right
            slots.insert(
                vid(x, y),
                vec![
                    torus_v_edge(lx, ly, x, y + ly - 1),
                    torus_h_edge(lx, x + lx - 1, y),
                    torus_v_edge(lx, ly, x, y),
                    torus_h_edge(lx, x, y),
                ],
            );
        }
    }
    let mut g = MappingGraph::new(vertices, edges, slots)?;
    for y in 0..ly {
        for x in 0..lx {
            g.labels.insert(torus_h_edge(lx, x, y), format!("h({x},{y})"));
            g.labels.insert(torus_v_edge(lx, ly, x, y), format!("v({x},{y})"));
            g.vertex_labels.insert(vid(x, y), format!("({x},{y})"));
        }
    }
    g.preset = Some(Preset::Torus { lx, ly });
    Ok(g)
}

/// Parse the structured-text graph format:
///
/// ```text
/// vertex <label> ...
/// edge <label> <tail> <head>        # arrow: tail is L, head is R
/// order <vertex> <edge> <edge> ...  # slot order a_1, a_2, ...
/// ```
pub fn parse_graph_file(text: &str) -> Result<MappingGraph, GraphError> {
    let mut vertex_ids: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut vertex_order: Vec<String> = Vec::new();
    let mut edge_rows: Vec<(String, String, String, usize)> = Vec::new();
    let mut order_rows: Vec<(String, Vec<String>, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let kind = tok.next().unwrap();
        let rest: Vec<String> = tok.map(str::to_string).collect();
        match kind {
            "vertex" => {
                for name in rest {
                    if vertex_ids
                        .insert(name.clone(), vertex_order.len() as VertexId)
                        .is_some()
                    {
                        return Err(GraphError::Parse(lineno + 1, format!("duplicate vertex {name}")));
                    }
                    vertex_order.push(name);
                }
            }
            "edge" => {
                if rest.len() != 3 {
                    return Err(GraphError::Parse(lineno + 1, "edge needs label tail head".into()));
                }
                edge_rows.push((rest[0].clone(), rest[1].clone(), rest[2].clone(), lineno + 1));
            }
            "order" => {
                if rest.len() < 2 {
                    return Err(GraphError::Parse(lineno + 1, "order needs vertex and edges".into()));
                }
                order_rows.push((rest[0].clone(), rest[1..].to_vec(), lineno + 1));
            }
            other => {
                return Err(GraphError::Parse(lineno + 1, format!("unknown directive {other:?}")));
            }
        }
    }
    let mut edges = Vec::new();
    let mut edge_ids: BTreeMap<String, EdgeId> = BTreeMap::new();
    for (i, (label, tail, head, lineno)) in edge_rows.iter().enumerate() {
        let &t = vertex_ids
            .get(tail)
            .ok_or_else(|| GraphError::Parse(*lineno, format!("unknown vertex {tail}")))?;
        let &h = vertex_ids
            .get(head)
            .ok_or_else(|| GraphError::Parse(*lineno, format!("unknown vertex {head}")))?;
        if edge_ids.insert(label.clone(), i as EdgeId).is_some() {
            return Err(GraphError::Parse(*lineno, format!("duplicate edge {label}")));
        }
        edges.push(Edge {
            id: i as EdgeId,
            tail: t,
            head: h,
        });
    }
    let mut slots = BTreeMap::new();
    for (vname, list, lineno) in &order_rows {
        let &v = vertex_ids
            .get(vname)
            .ok_or_else(|| GraphError::Parse(*lineno, format!("unknown vertex {vname}")))?;
        let mut ids = Vec::new();
        for l in list {
            ids.push(
                *edge_ids
                    .get(l)
                    .ok_or_else(|| GraphError::Parse(*lineno, format!("unknown edge {l}")))?,
            );
        }
        slots.insert(v, ids);
    }
    let mut g = MappingGraph::new((0..vertex_order.len() as u32).collect(), edges, slots)?;
    g.vertex_labels = vertex_ids.iter().map(|(n, &v)| (v, n.clone())).collect();
    g.labels = edge_ids.iter().map(|(n, &e)| (e, n.clone())).collect();
    Ok(g)
}

/// Render a graph back into the structured-text format.
pub fn render_graph_file(g: &MappingGraph) -> String {
    let mut s = String::new();
    for &v in g.vertices() {
        let _ = writeln!(s, "vertex {}", g.vertex_label(v));
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "edge {} {} {}",
            g.edge_label(e.id),
            g.vertex_label(e.tail),
            g.vertex_label(e.head)
        );
    }
    for &v in g.vertices() {
        let list: Vec<&str> = g.slot_list(v).iter().map(|&e| g.edge_label(e)).collect();
        let _ = writeln!(s, "order {} {}", g.vertex_label(v), list.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_preset() {
        let g = cycle_graph(4).unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edges().len(), 4);
        assert_eq!(circuit_rank(&g), 1);
        let b = cycle_basis(&g).unwrap();
        assert_eq!(b.rank, 1);
        assert_eq!(b.cycles[0].len(), 4);
        // two-site cycle is a valid multigraph with parallel edges
        let g2 = cycle_graph(2).unwrap();
        assert_eq!(g2.edges().len(), 2);
        assert_eq!(circuit_rank(&g2), 1);
        assert!(cycle_graph(1).is_err());
    }

    #[test]
    fn torus_preset() {
        let g = torus_graph(2, 2).unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edges().len(), 8);
        assert_eq!(circuit_rank(&g), 5);
        let b = cycle_basis(&g).unwrap();
        assert_eq!(b.rank, 5);
        assert_eq!(b.non_contractible.len(), 2);
        let g3 = torus_graph(3, 3).unwrap();
        assert_eq!(circuit_rank(&g3), 10);
        let b3 = cycle_basis(&g3).unwrap();
        assert_eq!(b3.rank, 10);
        // lx·ly plaquettes, lx·ly - 1 independent, 2 loops
        assert_eq!(b3.cycles.len(), 10);
        assert!(torus_graph(1, 3).is_err());
    }

    #[test]
    fn torus_slot_order_rotation_consistent() {
        let g = torus_graph(3, 2).unwrap();
        for y in 0..2u32 {
            for x in 0..3u32 {
                let v = y * 3 + x;
                let list = g.slot_list(v);
                // down, left, up, right at every vertex
                assert_eq!(list[0], torus_v_edge(3, 2, x, y + 1));
                assert_eq!(list[1], torus_h_edge(3, x + 2, y));
                assert_eq!(list[2], torus_v_edge(3, 2, x, y));
                assert_eq!(list[3], torus_h_edge(3, x, y));
            }
        }
    }

    #[test]
    fn path_graph_rank_zero() {
        // 3-vertex path: rank 0
        let vertices = vec![0, 1, 2];
        let edges = vec![
            Edge { id: 0, tail: 0, head: 1 },
            Edge { id: 1, tail: 1, head: 2 },
        ];
        let mut slots = BTreeMap::new();
        slots.insert(0, vec![0]);
        slots.insert(1, vec![0, 1]);
        slots.insert(2, vec![1]);
        let g = MappingGraph::new(vertices, edges, slots).unwrap();
        let b = cycle_basis(&g).unwrap();
        assert_eq!(b.rank, 0);
    }

    #[test]
    fn roundtrip_file_format() {
        let g = torus_graph(2, 3).unwrap();
        let text = render_graph_file(&g);
        let parsed = parse_graph_file(&text).unwrap();
        assert_eq!(parsed.vertices().len(), g.vertices().len());
        assert_eq!(parsed.edges().len(), g.edges().len());
        for &v in g.vertices() {
            assert_eq!(parsed.slot_list(v), g.slot_list(v));
        }
    }

    #[test]
    fn rejects_self_loop() {
        let vertices = vec![0];
        let edges = vec![Edge { id: 0, tail: 0, head: 0 }];
        let mut slots = BTreeMap::new();
        slots.insert(0, vec![0]);
        assert!(matches!(
            MappingGraph::new(vertices, edges, slots),
            Err(GraphError::SelfLoop(0))
        ));
    }

    #[test]
    fn shortest_path_deterministic() {
        let g = cycle_graph(6).unwrap();
        // 0 -> 2 must go through edge 0, 1
        assert_eq!(g.shortest_path(0, 2), Some(vec![0, 1]));
        // 0 -> 3: two length-3 routes; BFS tie-break picks lower edge ids
        assert_eq!(g.shortest_path(0, 3), Some(vec![0, 1, 2]));
    }
}
