//! The cube of resolutions, for diagrams small enough to expand fully.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::table::{delta_bigrading, KhTable};
use crate::diagrams::PlanarDiagram;
use crate::gf2::{normalize, SparseMatrix};
use crate::{Error, Result};

/// Largest crossing count the full cube will expand.
pub const CUBE_CAP: usize = 16;

/// Circles of one complete resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circles {
    /// Circle index of every edge; circles are numbered by smallest edge.
    pub circle_of_edge: Vec<u32>,
    pub count: usize,
    pub basepoint_circle: u32,
    /// Smallest edge of every circle.
    pub representative: Vec<u32>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

/// Smoothing of crossing slots: bit 0 joins (0,1),(2,3); bit 1 joins (0,3),(1,2).
pub fn smoothing_pairs(bit: bool) -> [(usize, usize); 2] {
    if bit {
        [(0, 3), (1, 2)]
    } else {
        [(0, 1), (2, 3)]
    }
}

/// Circles of the resolution selected by `v` (bit `c` smooths crossing `c`).
pub fn resolution_circles(d: &PlanarDiagram, v: u64) -> Circles {
    let n = d.edge_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    for (c, x) in d.crossings().iter().enumerate() {
        for (a, b) in smoothing_pairs(v >> c & 1 == 1) {
            let ra = find(&mut parent, x.edges[a]);
            let rb = find(&mut parent, x.edges[b]);
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi as usize] = lo;
            }
        }
    }
    let mut circle_of_root = vec![u32::MAX; n];
    let mut circle_of_edge = vec![0u32; n];
    let mut representative = Vec::new();
    for e in 0..n as u32 {
        let r = find(&mut parent, e) as usize;
        if circle_of_root[r] == u32::MAX {
            circle_of_root[r] = representative.len() as u32;
            representative.push(e);
        }
        circle_of_edge[e as usize] = circle_of_root[r];
    }
    let basepoint_circle = circle_of_edge[d.basepoint() as usize];
    Circles { circle_of_edge, count: representative.len(), basepoint_circle, representative }
}

/// Which algebra the cube uses on merges and splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Algebra {
    /// `x² = 0`, `Δ(1) = 1⊗x + x⊗1`.
    Khovanov,
    /// Characteristic-2 perturbation: `x² = x`, `Δ(1) = 1⊗x + x⊗1 + 1⊗1`.
    Perturbed,
}

/// The reduced cube: generators are (vertex, labelling) with the basepoint
/// circle labelled `x`. Label bit `k` set means circle `k` carries `x`.
pub(crate) struct Cube<'a> {
    d: &'a PlanarDiagram,
    vertices: Vec<Circles>,
    offsets: Vec<usize>,
    n_plus: i64,
    n_minus: i64,
}

impl<'a> Cube<'a> {
    pub fn new(d: &'a PlanarDiagram, cap: usize) -> Result<Self> {
        let n = d.crossing_count();
        if n > cap.min(CUBE_CAP) {
            return Err(Error::ResourceLimit { crossings: n, cap: cap.min(CUBE_CAP) });
        }
        let vertices: Vec<Circles> = (0..1u64 << n).into_par_iter().map(|v| resolution_circles(d, v)).collect();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut acc = 0;
        for c in &vertices {
            offsets.push(acc);
            acc += 1usize << (c.count - 1);
        }
        offsets.push(acc);
        Ok(Cube { d, vertices, offsets, n_plus: d.n_plus() as i64, n_minus: d.n_minus() as i64 })
    }

    pub fn generator_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn compress(&self, v: u64, full: u64) -> usize {
        let bp = self.vertices[v as usize].basepoint_circle;
        let low = full & ((1u64 << bp) - 1);
        let high = full >> (bp + 1);
        self.offsets[v as usize] + (low | (high << bp)) as usize
    }

    /// Vertex and full label mask of generator `g`.
    pub fn decode(&self, g: usize) -> (u64, u64) {
        let v = self.offsets.partition_point(|&o| o <= g) - 1;
        let l = (g - self.offsets[v]) as u64;
        let bp = self.vertices[v].basepoint_circle;
        let low = l & ((1u64 << bp) - 1);
        let high = l >> bp;
        (v as u64, low | (1u64 << bp) | (high << (bp + 1)))
    }

    /// Internal gradings `(i, j)` of generator `g`.
    pub fn grading(&self, g: usize) -> (i64, i64) {
        let (v, full) = self.decode(g);
        let h = v.count_ones() as i64;
        let xs = full.count_ones() as i64;
        let ones = self.vertices[v as usize].count as i64 - xs;
        (h - self.n_minus, ones - xs + h + self.n_plus - 2 * self.n_minus)
    }

    /// Appends the boundary of generator `g` to `out` (unnormalised).
    pub fn boundary(&self, g: usize, alg: Algebra, out: &mut Vec<u32>) {
        let (v, full) = self.decode(g);
        let src = &self.vertices[v as usize];
        for (c, x) in self.d.crossings().iter().enumerate() {
            if v >> c & 1 == 1 {
                continue;
            }
            let w = v | 1 << c;
            let dst = &self.vertices[w as usize];
            // transport labels of the circles untouched by this crossing
            let a = src.circle_of_edge[x.edges[0] as usize];
            let b = src.circle_of_edge[x.edges[2] as usize];
            let mut base = 0u64;
            for k in 0..src.count as u32 {
                if k != a && k != b && full >> k & 1 == 1 {
                    base |= 1 << dst.circle_of_edge[src.representative[k as usize] as usize];
                }
            }
            let la = full >> a & 1 == 1;
            if a != b {
                // merge
                let lb = full >> b & 1 == 1;
                let m = dst.circle_of_edge[x.edges[0] as usize];
                let targets: &[bool] = match (la, lb, alg) {
                    (false, false, _) => &[false],
                    (true, true, Algebra::Khovanov) => &[],
                    _ => &[true],
                };
                for &t in targets {
                    out.push(self.compress(w, base | (t as u64) << m) as u32);
                }
            } else {
                // split
                let p = dst.circle_of_edge[x.edges[0] as usize];
                let q = dst.circle_of_edge[x.edges[1] as usize];
                let bit = |lp: bool, lq: bool| base | (lp as u64) << p | (lq as u64) << q;
                let bp = dst.basepoint_circle;
                let mut push = |m: u64| {
                    if m >> bp & 1 == 1 {
                        out.push(self.compress(w, m) as u32);
                    }
                };
                if la {
                    push(bit(true, true));
                } else {
                    push(bit(false, true));
                    push(bit(true, false));
                    if alg == Algebra::Perturbed {
                        push(bit(false, false));
                    }
                }
            }
        }
    }
}

/// One quantum slice: generators grouped by homological degree, and the
/// differential from each degree to the next.
#[derive(Clone, Debug)]
pub struct Slice {
    pub generators: BTreeMap<i64, Vec<(u64, u64)>>,
    pub differentials: BTreeMap<i64, SparseMatrix>,
}

/// The reduced Khovanov complex split into independent quantum slices.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub components: usize,
    pub slices: BTreeMap<i64, Slice>,
}

/// Groups cube generators by a key and builds the differential between
/// consecutive degrees inside every group.
fn sliced_complex<K: Ord + Copy + Send + Sync>(
    cube: &Cube,
    alg: Algebra,
    key: impl Fn(usize) -> (K, i64) + Sync,
) -> BTreeMap<K, Slice> {
    let total = cube.generator_count();
    let keys: Vec<(K, i64)> = (0..total).into_par_iter().map(&key).collect();
    let mut index = vec![0u32; total];
    let mut groups: BTreeMap<K, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
    for (g, &(k, i)) in keys.iter().enumerate() {
        let list = groups.entry(k).or_default().entry(i).or_default();
        index[g] = list.len() as u32;
        list.push(g);
    }
    groups
        .into_par_iter()
        .map(|(k, degrees)| {
            let mut differentials = BTreeMap::new();
            for (&i, gens) in &degrees {
                let cols = degrees.get(&(i + 1)).map_or(0, Vec::len);
                let mut m = SparseMatrix::new(cols);
                let mut buf = Vec::new();
                for &g in gens {
                    buf.clear();
                    cube.boundary(g, alg, &mut buf);
                    let row: Vec<u32> = buf
                        .iter()
                        .map(|&h| {
                            debug_assert!(keys[h as usize] == (k, i + 1), "differential leaves its slice");
                            index[h as usize]
                        })
                        .collect();
                    m.push_row(row);
                }
                differentials.insert(i, m);
            }
            let generators = degrees.into_iter().map(|(i, gs)| (i, gs.into_iter().map(|g| cube.decode(g)).collect())).collect();
            (k, Slice { generators, differentials })
        })
        .collect()
}

/// Asserts `d ∘ d = 0` on every degree of a slice.
pub(crate) fn check_square_zero(slice: &Slice) {
    for (i, d) in &slice.differentials {
        let Some(next) = slice.differentials.get(&(i + 1)) else { continue };
        for row in d.rows() {
            let mut acc = Vec::new();
            for &c in row {
                acc.extend_from_slice(&next.rows()[c as usize]);
            }
            assert!(normalize(acc).is_empty(), "d∘d ≠ 0 in degree {i}");
        }
    }
}

pub fn build_reduced_complex(d: &PlanarDiagram) -> Result<GradedComplex> {
    build_reduced_complex_capped(d, CUBE_CAP)
}

pub fn build_reduced_complex_capped(d: &PlanarDiagram, cap: usize) -> Result<GradedComplex> {
    let cube = Cube::new(d, cap)?;
    let slices = sliced_complex(&cube, Algebra::Khovanov, |g| {
        let (i, j) = cube.grading(g);
        (j, i)
    });
    if cfg!(debug_assertions) {
        slices.par_iter().for_each(|(_, s)| check_square_zero(s));
    }
    Ok(GradedComplex { components: d.metadata().component_count, slices })
}

/// Homology ranks of a slice, by degree.
pub(crate) fn slice_homology(slice: &Slice) -> BTreeMap<i64, u64> {
    let ranks: BTreeMap<i64, usize> = slice.differentials.iter().map(|(&i, m)| (i, m.rank())).collect();
    let mut out = BTreeMap::new();
    for (&i, gens) in &slice.generators {
        let h = gens.len() - ranks.get(&i).copied().unwrap_or(0) - ranks.get(&(i - 1)).copied().unwrap_or(0);
        if h > 0 {
            out.insert(i, h as u64);
        }
    }
    out
}

pub fn homology_table(c: &GradedComplex) -> KhTable {
    let per_slice: Vec<(i64, BTreeMap<i64, u64>)> =
        c.slices.par_iter().map(|(&j, s)| (j, slice_homology(s))).collect();
    let mut t = KhTable::new(c.components);
    for (j, hs) in per_slice {
        for (i, r) in hs {
            t.add(delta_bigrading(i, j), r);
        }
    }
    t
}

/// Homology of the perturbed reduced complex, by homological degree.
pub(crate) fn perturbed_homology(d: &PlanarDiagram, cap: usize) -> Result<BTreeMap<i64, u64>> {
    let cube = Cube::new(d, cap)?;
    let slices = sliced_complex(&cube, Algebra::Perturbed, |g| ((), cube.grading(g).0));
    let slice = slices.into_values().next();
    Ok(match slice {
        Some(s) => {
            if cfg!(debug_assertions) {
                check_square_zero(&s);
            }
            slice_homology(&s)
        }
        None => BTreeMap::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::closure;

    fn word(s: &str) -> crate::BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn circle_counts() {
        let id = closure(&crate::BraidWord::identity(3).unwrap());
        assert_eq!(resolution_circles(&id, 0).count, 3);
        let t = closure(&word("2: 1 1 1"));
        assert_eq!(resolution_circles(&t, 0b000).count, 2);
        assert_eq!(resolution_circles(&t, 0b111).count, 3);
        assert_eq!(resolution_circles(&t, 0b001).count, 1);
    }

    #[test]
    fn generator_counts() {
        let c = build_reduced_complex(&PlanarDiagram::unknot()).unwrap();
        let total: usize = c.slices.values().flat_map(|s| s.generators.values()).map(Vec::len).sum();
        assert_eq!(total, 1);
        let h = closure(&word("2: 1 1"));
        let cube = Cube::new(&h, CUBE_CAP).unwrap();
        assert_eq!(cube.generator_count(), 6);
    }

    #[test]
    fn square_zero_on_full_twist() {
        let c = build_reduced_complex(&closure(&crate::BraidWord::full_twist3())).unwrap();
        for s in c.slices.values() {
            check_square_zero(s);
        }
    }

    #[test]
    fn decode_compress_inverse() {
        let d = closure(&word("3: 1 -2 1 2"));
        let cube = Cube::new(&d, CUBE_CAP).unwrap();
        for g in 0..cube.generator_count() {
            let (v, full) = cube.decode(g);
            assert_eq!(cube.compress(v, full), g);
        }
    }

    #[test]
    fn cap_enforced() {
        let d = closure(&word("2: 1 1 1 1 1"));
        assert!(matches!(Cube::new(&d, 4), Err(Error::ResourceLimit { crossings: 5, cap: 4 })));
    }
}
