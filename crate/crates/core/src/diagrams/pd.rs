use serde::{Deserialize, Serialize};

use super::builder::{DiagramBuilder, Start};
use crate::{Error, Result};

/// One crossing. `edges` lists the incident edges counterclockwise starting
/// from the incoming under-strand, so the under-strand runs from slot 0 to
/// slot 2. The over-strand runs 3 → 1 when `sign` is +1 and 1 → 3 when it is −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub edges: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    /// Slots through which strands enter the crossing.
    pub fn in_slots(&self) -> [usize; 2] {
        if self.sign > 0 {
            [0, 3]
        } else {
            [0, 1]
        }
    }

    pub fn out_slots(&self) -> [usize; 2] {
        if self.sign > 0 {
            [2, 1]
        } else {
            [2, 3]
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }
}

/// An oriented link diagram in PD form.
///
/// Edge ids run over `0..edge_count`; ids that no crossing mentions are
/// crossingless circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    edge_count: u32,
    basepoint: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkMetadata {
    pub component_count: usize,
    pub linking: Vec<Vec<i64>>,
    pub writhe: i64,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Where an edge starts and ends: `(crossing, slot)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

impl PlanarDiagram {
    pub fn from_parts(crossings: Vec<Crossing>, edge_count: u32, basepoint: u32) -> Result<Self> {
        let d = PlanarDiagram { crossings, edge_count, basepoint };
        d.validate()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        PlanarDiagram { crossings: vec![], edge_count: 1, basepoint: 0 }
    }

    /// `k` disjoint crossingless circles.
    pub fn unlink(k: usize) -> Self {
        assert!(k >= 1);
        PlanarDiagram { crossings: vec![], edge_count: k as u32, basepoint: 0 }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if self.edge_count == 0 {
            return bad("diagram has no edges".into());
        }
        if self.basepoint >= self.edge_count {
            return bad(format!("basepoint {} out of range", self.basepoint));
        }
        let n = self.edge_count as usize;
        let mut ins = vec![0u32; n];
        let mut outs = vec![0u32; n];
        for (c, x) in self.crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return bad(format!("crossing {c} has sign {}", x.sign));
            }
            for &e in &x.edges {
                if e >= self.edge_count {
                    return bad(format!("crossing {c} mentions edge {e} out of range"));
                }
            }
            for s in x.in_slots() {
                ins[x.edges[s] as usize] += 1;
            }
            for s in x.out_slots() {
                outs[x.edges[s] as usize] += 1;
            }
        }
        for e in 0..n {
            match (ins[e], outs[e]) {
                (0, 0) | (1, 1) => {}
                (i, o) => return bad(format!("edge {e} has {i} heads and {o} tails")),
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count as usize
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn with_basepoint(&self, edge: u32) -> Result<Self> {
        let mut d = self.clone();
        d.basepoint = edge;
        d.validate()?;
        Ok(d)
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Ends of every edge; `None` for crossingless circles.
    pub fn edge_ends(&self) -> Vec<Option<EdgeEnds>> {
        let n = self.edge_count();
        let mut tail = vec![None; n];
        let mut head = vec![None; n];
        for (c, x) in self.crossings.iter().enumerate() {
            for s in x.in_slots() {
                head[x.edges[s] as usize] = Some((c, s));
            }
            for s in x.out_slots() {
                tail[x.edges[s] as usize] = Some((c, s));
            }
        }
        (0..n)
            .map(|e| match (tail[e], head[e]) {
                (Some(tail), Some(head)) => Some(EdgeEnds { tail, head }),
                _ => None,
            })
            .collect()
    }

    /// Component index of every edge, numbered by smallest edge id, and the
    /// number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.edge_count();
        let ends = self.edge_ends();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut e = start;
            loop {
                comp[e] = count;
                let Some(EdgeEnds { head: (c, s), .. }) = ends[e] else { break };
                e = self.crossings[c].edges[(s + 2) % 4] as usize;
                if e == start {
                    break;
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn metadata(&self) -> LinkMetadata {
        let (comp, k) = self.components();
        let mut twice = vec![vec![0i64; k]; k];
        for x in &self.crossings {
            let a = comp[x.edges[0] as usize];
            let b = comp[x.edges[1] as usize];
            if a != b {
                twice[a][b] += x.sign as i64;
                twice[b][a] += x.sign as i64;
            }
        }
        let linking = twice.iter().map(|row| row.iter().map(|v| v / 2).collect()).collect();
        LinkMetadata {
            component_count: k,
            linking,
            writhe: self.writhe(),
            n_plus: self.n_plus(),
            n_minus: self.n_minus(),
        }
    }

    /// Mirror image: every crossing changes sign, orientation kept.
    pub fn mirror(&self) -> PlanarDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                // rotate so the old over-strand becomes the under-strand
                let [a, b, c, d] = x.edges;
                if x.sign > 0 {
                    Crossing { edges: [d, a, b, c], sign: -1 }
                } else {
                    Crossing { edges: [b, c, d, a], sign: 1 }
                }
            })
            .collect();
        PlanarDiagram { crossings, edge_count: self.edge_count, basepoint: self.basepoint }
    }

    /// Rebuilds the diagram as a builder. Every edge gets a virtual node
    /// whose link slot 0 points along the orientation; those nodes are
    /// returned indexed by edge id. Crossing ports keep their slot order.
    pub fn to_builder(&self) -> (DiagramBuilder, Vec<usize>) {
        let mut b = DiagramBuilder::new();
        let ports: Vec<[usize; 4]> = self.crossings.iter().map(|_| b.crossing()).collect();
        let ends = self.edge_ends();
        let mut virt = Vec::with_capacity(self.edge_count());
        for end in &ends {
            let v = b.virtual_node();
            virt.push(v);
            match *end {
                Some(EdgeEnds { tail, head }) => {
                    b.connect(v, ports[head.0][head.1]);
                    b.connect(v, ports[tail.0][tail.1]);
                }
                None => b.connect(v, v),
            }
        }
        (b, virt)
    }

    /// Renumbers edges in traversal order from the basepoint; orientation is
    /// preserved and the basepoint becomes edge 0.
    pub fn canonical(&self) -> PlanarDiagram {
        let (b, virt) = self.to_builder();
        let mut starts = vec![Start::new(virt[self.basepoint as usize], 0)];
        starts.extend(virt.iter().map(|&v| Start::new(v, 0)));
        b.finalize(&starts, starts[0]).diagram
    }
}

#[derive(Serialize, Deserialize)]
struct PdJson {
    crossings: Vec<[i64; 5]>,
    edges: u32,
    basepoint: u32,
}

impl Serialize for PlanarDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.edges;
                [a as i64, b as i64, c as i64, d as i64, x.sign as i64]
            })
            .collect();
        PdJson { crossings, edges: self.edge_count, basepoint: self.basepoint }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanarDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PdJson::deserialize(d)?;
        let mut crossings = Vec::with_capacity(raw.crossings.len());
        for r in raw.crossings {
            let edge = |v: i64| u32::try_from(v).map_err(|_| serde::de::Error::custom("negative edge id"));
            crossings.push(Crossing {
                edges: [edge(r[0])?, edge(r[1])?, edge(r[2])?, edge(r[3])?],
                sign: r[4] as i8,
            });
        }
        PlanarDiagram::from_parts(crossings, raw.edges, raw.basepoint).map_err(serde::de::Error::custom)
    }
}

pub fn link_metadata(d: &PlanarDiagram) -> LinkMetadata {
    d.metadata()
}
