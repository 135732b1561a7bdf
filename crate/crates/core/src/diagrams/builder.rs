//! Incremental construction of planar diagrams.
//!
//! Nodes are either crossing ports or virtual points on strands. Each node has
//! two link slots; ports use only slot 0, the pass-through of a port being the
//! opposite port of its crossing. Orientation and edge numbering are fixed at
//! [`DiagramBuilder::finalize`] by tracing components from the given starts.

use super::pd::{Crossing, PlanarDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Port { crossing: usize, slot: usize },
    Virtual,
}

#[derive(Clone, Copy, Debug, Default)]
struct Links([Option<(usize, usize)>; 2]);

/// A traversal start: leave `node` through link slot `link`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Start {
    pub node: usize,
    pub link: usize,
}

impl Start {
    pub fn new(node: usize, link: usize) -> Self {
        Start { node, link }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DiagramBuilder {
    kinds: Vec<Kind>,
    links: Vec<Links>,
    crossings: Vec<Option<[usize; 4]>>,
}

/// Result of [`DiagramBuilder::finalize`].
#[derive(Clone, Debug)]
pub struct Finalized {
    pub diagram: PlanarDiagram,
    /// Component index (in tracing order) of every node.
    pub component_of_node: Vec<usize>,
    /// Edge id containing the link leaving `node` through each slot.
    pub edge_of_link: Vec<[Option<u32>; 2]>,
    /// Crossing id in the finalized diagram for every builder crossing.
    pub crossing_map: Vec<Option<usize>>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn virtual_node(&mut self) -> usize {
        self.kinds.push(Kind::Virtual);
        self.links.push(Links::default());
        self.kinds.len() - 1
    }

    /// Adds a crossing; returns its four port nodes in counterclockwise order,
    /// with the under-strand through ports 0 and 2.
    pub fn crossing(&mut self) -> [usize; 4] {
        let c = self.crossings.len();
        let mut ports = [0; 4];
        for (slot, p) in ports.iter_mut().enumerate() {
            self.kinds.push(Kind::Port { crossing: c, slot });
            self.links.push(Links::default());
            *p = self.kinds.len() - 1;
        }
        self.crossings.push(Some(ports));
        ports
    }

    /// Number of crossings ever added, including smoothed ones.
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    fn free_slot(&self, n: usize) -> usize {
        let cap = if matches!(self.kinds[n], Kind::Port { .. }) { 1 } else { 2 };
        (0..cap)
            .find(|&i| self.links[n].0[i].is_none())
            .unwrap_or_else(|| panic!("node {n} has no free link slot"))
    }

    /// Joins two nodes by a strand segment, using their first free link slots.
    pub fn connect(&mut self, a: usize, b: usize) {
        let ia = self.free_slot(a);
        self.links[a].0[ia] = Some((usize::MAX, usize::MAX));
        let ib = self.free_slot(b);
        self.links[a].0[ia] = Some((b, ib));
        self.links[b].0[ib] = Some((a, ia));
    }

    /// Deletes a crossing, turning its ports into virtual nodes and joining
    /// them in the given pairs.
    pub fn smooth(&mut self, crossing: usize, pairs: [(usize, usize); 2]) {
        let ports = self.crossings[crossing].take().expect("crossing already removed");
        for &p in &ports {
            self.kinds[p] = Kind::Virtual;
        }
        for (a, b) in pairs {
            self.connect(ports[a], ports[b]);
        }
    }

    pub fn ports(&self, crossing: usize) -> Option<[usize; 4]> {
        self.crossings[crossing]
    }

    fn step(&self, node: usize, link: usize) -> (usize, usize) {
        self.links[node].0[link].expect("dangling link")
    }

    /// Traces all components and produces an oriented diagram.
    ///
    /// Components are visited in the order of `starts`, then any remaining
    /// nodes in index order. `basepoint` marks the edge to use as basepoint.
    pub fn finalize(&self, starts: &[Start], basepoint: Start) -> Finalized {
        let n = self.kinds.len();
        for (i, l) in self.links.iter().enumerate() {
            let need = if matches!(self.kinds[i], Kind::Port { .. }) { 1 } else { 2 };
            assert!(l.0[..need].iter().all(Option::is_some), "node {i} is not fully connected");
        }

        let mut component_of_node = vec![usize::MAX; n];
        let mut edge_of_link = vec![[None; 2]; n];
        // (in slot, out slot edge) per crossing: incoming edge and direction
        let mut slot_edges: Vec<[u32; 4]> = vec![[u32::MAX; 4]; self.crossings.len()];
        let mut under_in: Vec<Option<usize>> = vec![None; self.crossings.len()];
        let mut over_in: Vec<Option<usize>> = vec![None; self.crossings.len()];
        let mut next_edge: u32 = 0;
        let mut n_comp = 0;

        let fallback = (0..n).map(|node| Start::new(node, 0));
        for start in starts.iter().copied().chain(fallback) {
            if component_of_node[start.node] != usize::MAX {
                continue;
            }
            let comp = n_comp;
            n_comp += 1;

            // Walk once around, collecting the links traversed and the
            // crossing passages (entry port, exit port).
            let mut walk: Vec<(usize, usize)> = Vec::new();
            let mut passages: Vec<(usize, usize, usize)> = Vec::new(); // (walk idx of arrival, in port, out port)
            let (mut node, mut link) = (start.node, start.link);
            loop {
                component_of_node[node] = comp;
                walk.push((node, link));
                let (to, to_link) = self.step(node, link);
                component_of_node[to] = comp;
                let (nn, nl) = match self.kinds[to] {
                    Kind::Virtual => (to, 1 - to_link),
                    Kind::Port { crossing, slot } => {
                        let out = self.crossings[crossing].unwrap()[(slot + 2) % 4];
                        component_of_node[out] = comp;
                        passages.push((walk.len(), to, out));
                        (out, 0)
                    }
                };
                if (nn, nl) == (start.node, start.link) {
                    break;
                }
                node = nn;
                link = nl;
            }

            // Edge boundaries sit at passages; the edge containing the start
            // is numbered first.
            let k = passages.len().max(1);
            let first = next_edge;
            next_edge += k as u32;
            let edge_at = |walk_idx: usize| -> u32 {
                // number of passages strictly before walk position
                let before = passages.iter().take_while(|p| p.0 <= walk_idx).count();
                if passages.is_empty() {
                    first
                } else {
                    first + (before % k) as u32
                }
            };
            for (wi, &(node, link)) in walk.iter().enumerate() {
                let e = edge_at(wi);
                edge_of_link[node][link] = Some(e);
                let (to, to_link) = self.step(node, link);
                edge_of_link[to][to_link] = Some(e);
            }
            for (j, &(_, inp, outp)) in passages.iter().enumerate() {
                let e_in = first + j as u32;
                let e_out = first + ((j + 1) % k) as u32;
                let Kind::Port { crossing, slot } = self.kinds[inp] else { unreachable!() };
                let Kind::Port { slot: out_slot, .. } = self.kinds[outp] else { unreachable!() };
                slot_edges[crossing][slot] = e_in;
                slot_edges[crossing][out_slot] = e_out;
                if slot % 2 == 0 {
                    under_in[crossing] = Some(slot);
                } else {
                    over_in[crossing] = Some(slot);
                }
            }
        }

        let mut crossings = Vec::new();
        let mut crossing_map = vec![None; self.crossings.len()];
        for (c, ports) in self.crossings.iter().enumerate() {
            if ports.is_none() {
                continue;
            }
            let rot = under_in[c].expect("under strand not traversed");
            let over = (over_in[c].expect("over strand not traversed") + 4 - rot) % 4;
            let mut edges = [0u32; 4];
            for (j, e) in edges.iter_mut().enumerate() {
                *e = slot_edges[c][(j + rot) % 4];
            }
            let sign = if over == 3 { 1 } else { -1 };
            crossing_map[c] = Some(crossings.len());
            crossings.push(Crossing { edges, sign });
        }

        let bp = edge_of_link[basepoint.node][basepoint.link].expect("basepoint not traversed");
        let diagram = PlanarDiagram::from_parts(crossings, next_edge, bp)
            .expect("builder produced an inconsistent diagram");
        Finalized { diagram, component_of_node, edge_of_link, crossing_map }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_loop() {
        let mut b = DiagramBuilder::new();
        let v = b.virtual_node();
        b.connect(v, v);
        let f = b.finalize(&[Start::new(v, 0)], Start::new(v, 0));
        assert_eq!(f.diagram.crossing_count(), 0);
        assert_eq!(f.diagram.edge_count(), 1);
    }

    #[test]
    fn kink() {
        // a single positive curl: port 1 joined to port 2 closes a loop
        let mut b = DiagramBuilder::new();
        let p = b.crossing();
        let v = b.virtual_node();
        b.connect(p[1], p[2]);
        b.connect(v, p[0]);
        b.connect(v, p[3]);
        let f = b.finalize(&[Start::new(v, 0)], Start::new(v, 0));
        let d = &f.diagram;
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.metadata().component_count, 1);
    }
}
