//! Tangle-scanning reduction over F2.
//!
//! Crossings are added one at a time to a complex whose objects are
//! crossingless matchings of the current boundary points and whose morphisms
//! are F2-combinations of dotted cobordisms in normal form. Closed circles are
//! delooped as soon as they appear and isomorphisms are cancelled by Gaussian
//! elimination after every step, so the complex stays small for diagrams
//! with narrow boundary (braid closures in particular).
//!
//! Points are crossing slots `4·c + s`. A morphism between matchings `M₁`
//! and `M₂` is a set of dot masks; bit `k` dots the disk bounded by circle
//! `k` of `M₁ ∪ M₂`, circles ordered by smallest point. In reduced mode the
//! tail end of the basepoint edge is marked and dots on its component vanish.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::table::{delta_bigrading, KhTable};
use crate::diagrams::PlanarDiagram;

type Pt = u32;
type Morph = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Matching(Vec<(Pt, Pt)>);

impl Matching {
    fn new(mut arcs: Vec<(Pt, Pt)>) -> Self {
        for a in arcs.iter_mut() {
            if a.0 > a.1 {
                *a = (a.1, a.0);
            }
        }
        arcs.sort_unstable();
        Matching(arcs)
    }
}

/// Sorted point list with the arc index of each point in two matchings.
struct Pair {
    pts: Vec<Pt>,
    arc1: Vec<usize>,
    arc2: Vec<usize>,
}

impl Pair {
    fn new(m1: &[(Pt, Pt)], m2: &[(Pt, Pt)]) -> Self {
        let mut pts: Vec<Pt> = m1.iter().flat_map(|&(a, b)| [a, b]).collect();
        pts.sort_unstable();
        let mut arc1 = vec![usize::MAX; pts.len()];
        let mut arc2 = vec![usize::MAX; pts.len()];
        let at = |p: Pt| pts.binary_search(&p).expect("point missing");
        for (k, &(a, b)) in m1.iter().enumerate() {
            arc1[at(a)] = k;
            arc1[at(b)] = k;
        }
        for (k, &(a, b)) in m2.iter().enumerate() {
            arc2[at(a)] = k;
            arc2[at(b)] = k;
        }
        Pair { pts, arc1, arc2 }
    }

    fn index(&self, p: Pt) -> usize {
        self.pts.binary_search(&p).expect("point missing")
    }

    /// Circle of every point of `m1 ∪ m2`, circles numbered by smallest point.
    fn circles(&self, m1: &[(Pt, Pt)], m2: &[(Pt, Pt)]) -> (Vec<u32>, usize) {
        let n = self.pts.len();
        let mut circ = vec![u32::MAX; n];
        let mut count = 0u32;
        for start in 0..n {
            if circ[start] != u32::MAX {
                continue;
            }
            let mut i = start;
            let mut use_first = true;
            loop {
                circ[i] = count;
                let (a, b) = if use_first { m1[self.arc1[i]] } else { m2[self.arc2[i]] };
                let other = if self.pts[i] == a { b } else { a };
                i = self.index(other);
                circ[i] = count;
                use_first = !use_first;
                if i == start {
                    break;
                }
            }
            count += 1;
        }
        (circ, count as usize)
    }
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn xor_into(acc: &mut HashMap<u64, bool>, m: u64) {
    let e = acc.entry(m).or_insert(false);
    *e = !*e;
}

fn finish(acc: HashMap<u64, bool>) -> Morph {
    let mut v: Morph = acc.into_iter().filter(|&(_, on)| on).map(|(m, _)| m).collect();
    v.sort_unstable();
    v
}

/// A surface component before normalisation.
#[derive(Clone, Default)]
struct Comp {
    old: i64,
    glue: i64,
    new_circles: Vec<u32>,
}

/// Rewrites a surface, given per old circle its component, into normal form.
/// `dots` lists the components of each dotted old circle.
struct Normalizer {
    comps: Vec<Comp>,
    marked: Option<u32>,
}

impl Normalizer {
    /// Expands one term (given as dotted component counts) into `acc`.
    fn expand(&self, dots: &[u32], acc: &mut HashMap<u64, bool>) {
        let mut res: Vec<u64> = vec![0];
        for (ci, c) in self.comps.iter().enumerate() {
            let d = dots[ci];
            let k = c.new_circles.len() as i64;
            let chi = c.old - c.glue;
            let g2 = 2 - chi - k;
            debug_assert!(g2 >= 0 && g2 % 2 == 0, "bad surface: chi={chi} k={k}");
            if g2 > 0 || d >= 2 {
                return;
            }
            if k == 0 {
                if d == 1 {
                    continue;
                }
                return;
            }
            let all: u64 = c.new_circles.iter().fold(0, |m, &n| m | 1 << n);
            let has_mark = self.marked.is_some_and(|m| c.new_circles.contains(&m));
            let opts: Vec<u64> = if d == 1 {
                if has_mark {
                    return;
                }
                vec![all]
            } else if has_mark {
                vec![all & !(1 << self.marked.unwrap())]
            } else {
                c.new_circles.iter().map(|&n| all & !(1 << n)).collect()
            };
            if opts.len() == 1 {
                for r in res.iter_mut() {
                    *r |= opts[0];
                }
            } else {
                res = res.iter().flat_map(|&r| opts.iter().map(move |&o| r | o)).collect();
            }
        }
        for r in res {
            xor_into(acc, r);
        }
    }
}

/// Vertical composition `δ ∘ γ` with `γ: mz → my`, `δ: my → mw`.
fn compose(mz: &Matching, my: &Matching, mw: &Matching, gamma: &Morph, delta: &Morph, mark: Option<Pt>) -> Morph {
    let pg = Pair::new(&mz.0, &my.0);
    let (cg, ng) = pg.circles(&mz.0, &my.0);
    let pd = Pair::new(&my.0, &mw.0);
    let (cd, nd) = pd.circles(&my.0, &mw.0);
    let pn = Pair::new(&mz.0, &mw.0);
    let (cn, nn) = pn.circles(&mz.0, &mw.0);

    let mut uf = Uf::new(ng + nd);
    for &(a, _) in &my.0 {
        let i = pg.index(a);
        uf.union(cg[i] as usize, ng + cd[pd.index(a)] as usize);
    }
    let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Comp> = Vec::new();
    let mut comp_of = vec![0usize; ng + nd];
    for (node, slot) in comp_of.iter_mut().enumerate() {
        let r = uf.find(node);
        let id = *comp_of_root.entry(r).or_insert_with(|| {
            comps.push(Comp::default());
            comps.len() - 1
        });
        comps[id].old += 1;
        *slot = id;
    }
    for &(a, _) in &my.0 {
        comps[comp_of[cg[pg.index(a)] as usize]].glue += 1;
    }
    let mut seen = vec![false; nn];
    for (i, &p) in pn.pts.iter().enumerate() {
        let n = cn[i] as usize;
        if !seen[n] {
            seen[n] = true;
            comps[comp_of[cg[pg.index(p)] as usize]].new_circles.push(n as u32);
        }
    }
    let marked = mark.and_then(|m| pn.pts.binary_search(&m).ok()).map(|i| cn[i]);
    let norm = Normalizer { comps, marked };

    let mut acc = HashMap::new();
    let mut dots = vec![0u32; norm.comps.len()];
    for &tg in gamma {
        for &td in delta {
            dots.iter_mut().for_each(|d| *d = 0);
            for k in 0..ng {
                if tg >> k & 1 == 1 {
                    dots[comp_of[k]] += 1;
                }
            }
            for k in 0..nd {
                if td >> k & 1 == 1 {
                    dots[comp_of[ng + k]] += 1;
                }
            }
            norm.expand(&dots, &mut acc);
        }
    }
    finish(acc)
}

/// Result of closing strips on one side: the new matching and its loops,
/// each loop identified by its smallest point.
struct Closed {
    matching: Matching,
    loops: Vec<Pt>,
}

fn close_side(arcs: &[(Pt, Pt)], partner: &HashMap<Pt, Pt>) -> Closed {
    let mut other: HashMap<Pt, Pt> = HashMap::with_capacity(arcs.len() * 2);
    for &(a, b) in arcs {
        other.insert(a, b);
        other.insert(b, a);
    }
    let mut done: HashSet<Pt> = HashSet::new();
    let mut new_arcs = Vec::new();
    let mut pts: Vec<Pt> = other.keys().copied().collect();
    pts.sort_unstable();
    for &p in &pts {
        if partner.contains_key(&p) || done.contains(&p) {
            continue;
        }
        let mut cur = p;
        loop {
            done.insert(cur);
            let q = other[&cur];
            done.insert(q);
            match partner.get(&q) {
                Some(&r) => cur = r,
                None => {
                    new_arcs.push((p, q));
                    break;
                }
            }
        }
    }
    let mut loops = Vec::new();
    for &p in &pts {
        if done.contains(&p) {
            continue;
        }
        loops.push(p);
        let mut cur = p;
        loop {
            done.insert(cur);
            let q = other[&cur];
            done.insert(q);
            cur = partner[&q];
            if cur == p {
                break;
            }
        }
    }
    Closed { matching: Matching::new(new_arcs), loops }
}

/// Glues strips along `pairs` into a normal-form cobordism `src → tgt`.
/// Returns masks over the new circles ordered as: mixed circles by smallest
/// free point, then source loops, then target loops (each by smallest point).
fn glue(src: &[(Pt, Pt)], tgt: &[(Pt, Pt)], terms: &Morph, pairs: &[(Pt, Pt)], mark: Option<Pt>) -> Glued {
    let pr = Pair::new(src, tgt);
    let (oc, no) = pr.circles(src, tgt);
    let ns = src.len();
    let partner: HashMap<Pt, Pt> = pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();

    // new circles as classes of arcs
    let mut uf = Uf::new(ns + tgt.len());
    for &(a, b) in pairs {
        let (ia, ib) = (pr.index(a), pr.index(b));
        uf.union(pr.arc1[ia], pr.arc1[ib]);
        uf.union(ns + pr.arc2[ia], ns + pr.arc2[ib]);
    }
    for (i, &p) in pr.pts.iter().enumerate() {
        if !partner.contains_key(&p) {
            uf.union(pr.arc1[i], ns + pr.arc2[i]);
        }
    }
    // class key: (kind, smallest relevant point)
    let mut info: HashMap<usize, (u8, Pt, Pt)> = HashMap::new(); // root -> (kind bits, min free, min any)
    for (i, &p) in pr.pts.iter().enumerate() {
        for node in [pr.arc1[i], ns + pr.arc2[i]] {
            let r = uf.find(node);
            let e = info.entry(r).or_insert((0, Pt::MAX, Pt::MAX));
            e.0 |= if node < ns { 1 } else { 2 };
            if !partner.contains_key(&p) {
                e.0 |= 4;
                e.1 = e.1.min(p);
            }
            e.2 = e.2.min(p);
        }
    }
    let mut classes: Vec<(u8, Pt, usize)> = info
        .iter()
        .map(|(&r, &(bits, mf, ma))| {
            let kind = if bits & 4 != 0 {
                0
            } else if bits == 1 {
                1
            } else {
                debug_assert_eq!(bits, 2);
                2
            };
            (kind, if kind == 0 { mf } else { ma }, r)
        })
        .collect();
    classes.sort_unstable();
    let mixed = classes.iter().filter(|c| c.0 == 0).count();
    let src_loops = classes.iter().filter(|c| c.0 == 1).count();
    let tgt_loops = classes.iter().filter(|c| c.0 == 2).count();
    let new_index: HashMap<usize, u32> = classes.iter().enumerate().map(|(k, c)| (c.2, k as u32)).collect();

    // surface components over old circles
    let mut cu = Uf::new(no);
    for &(a, b) in pairs {
        cu.union(oc[pr.index(a)] as usize, oc[pr.index(b)] as usize);
    }
    let mut comp_id: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Comp> = Vec::new();
    let mut comp_of = vec![0usize; no];
    for (k, slot) in comp_of.iter_mut().enumerate() {
        let r = cu.find(k);
        let id = *comp_id.entry(r).or_insert_with(|| {
            comps.push(Comp::default());
            comps.len() - 1
        });
        comps[id].old += 1;
        *slot = id;
    }
    for &(a, _) in pairs {
        comps[comp_of[oc[pr.index(a)] as usize]].glue += 1;
    }
    let mut seen = vec![false; classes.len()];
    for (i, _) in pr.pts.iter().enumerate() {
        let r = uf.find(pr.arc1[i]);
        let n = new_index[&r] as usize;
        if !seen[n] {
            seen[n] = true;
            comps[comp_of[oc[i] as usize]].new_circles.push(n as u32);
        }
        let r = uf.find(ns + pr.arc2[i]);
        let n = new_index[&r] as usize;
        if !seen[n] {
            seen[n] = true;
            comps[comp_of[oc[i] as usize]].new_circles.push(n as u32);
        }
    }
    let marked = mark.filter(|m| pr.pts.binary_search(m).is_ok()).map(|m| new_index[&uf.find(pr.arc1[pr.index(m)])]);
    let norm = Normalizer { comps, marked };

    let mut acc = HashMap::new();
    let mut dots = vec![0u32; norm.comps.len()];
    for &t in terms {
        dots.iter_mut().for_each(|d| *d = 0);
        for k in 0..no {
            if t >> k & 1 == 1 {
                dots[comp_of[k]] += 1;
            }
        }
        norm.expand(&dots, &mut acc);
    }
    Glued { terms: finish(acc), mixed, src_loops, tgt_loops }
}

struct Glued {
    terms: Morph,
    mixed: usize,
    src_loops: usize,
    tgt_loops: usize,
}

#[derive(Clone, Debug)]
struct Obj {
    m: Matching,
    deg: i32,
    q: i32,
}

#[derive(Default)]
struct Complex {
    objs: Vec<Option<Obj>>,
    out: Vec<HashMap<usize, Morph>>,
    inc: Vec<HashSet<usize>>,
}

impl Complex {
    fn add_obj(&mut self, o: Obj) -> usize {
        self.objs.push(Some(o));
        self.out.push(HashMap::new());
        self.inc.push(HashSet::new());
        self.objs.len() - 1
    }

    fn obj(&self, i: usize) -> &Obj {
        self.objs[i].as_ref().expect("dead object")
    }

    fn add_entry(&mut self, x: usize, y: usize, m: &Morph) {
        if m.is_empty() {
            return;
        }
        let e = self.out[x].entry(y).or_default();
        let mut set: HashMap<u64, bool> = e.iter().map(|&v| (v, true)).collect();
        for &v in m {
            xor_into(&mut set, v);
        }
        *e = finish(set);
        if e.is_empty() {
            self.out[x].remove(&y);
            self.inc[y].remove(&x);
        } else {
            self.inc[y].insert(x);
        }
    }

    fn remove(&mut self, x: usize) {
        for y in std::mem::take(&mut self.out[x]).into_keys() {
            self.inc[y].remove(&x);
        }
        for z in std::mem::take(&mut self.inc[x]) {
            self.out[z].remove(&x);
        }
        self.objs[x] = None;
    }

    fn is_iso(&self, x: usize, y: usize, m: &Morph) -> bool {
        m.len() == 1 && m[0] == 0 && self.obj(x).m == self.obj(y).m
    }

    /// Cancels `x → y`, an identity entry.
    fn cancel(&mut self, x: usize, y: usize, mark: Option<Pt>) {
        let my = self.obj(y).m.clone();
        let ins: Vec<usize> = self.inc[y].iter().copied().filter(|&z| z != x).collect();
        let outs: Vec<(usize, Morph)> =
            self.out[x].iter().filter(|(&w, _)| w != y).map(|(&w, m)| (w, m.clone())).collect();
        for &z in &ins {
            let gamma = self.out[z][&y].clone();
            let mz = self.obj(z).m.clone();
            for (w, delta) in &outs {
                let c = compose(&mz, &my, &self.obj(*w).m, &gamma, delta, mark);
                self.add_entry(z, *w, &c);
            }
        }
        self.remove(x);
        self.remove(y);
    }

    fn simplify(&mut self, mark: Option<Pt>) {
        loop {
            let mut found = None;
            'scan: for x in 0..self.objs.len() {
                if self.objs[x].is_none() {
                    continue;
                }
                for (&y, m) in &self.out[x] {
                    if self.is_iso(x, y, m) {
                        found = Some((x, y));
                        break 'scan;
                    }
                }
            }
            match found {
                Some((x, y)) => self.cancel(x, y, mark),
                None => break,
            }
        }
    }

    /// Cancels every identity entry, cheapest first, in one sweep per
    /// round until none remain.
    fn reduce(&mut self, mark: Option<Pt>) {
        loop {
            let mut cands: Vec<(usize, usize, usize)> = Vec::new();
            for x in 0..self.objs.len() {
                if self.objs[x].is_none() {
                    continue;
                }
                for (&y, m) in &self.out[x] {
                    if self.is_iso(x, y, m) {
                        let cost = (self.inc[y].len()) * (self.out[x].len());
                        cands.push((cost, x, y));
                    }
                }
            }
            if cands.is_empty() {
                break;
            }
            cands.sort_unstable();
            for (_, x, y) in cands {
                if self.objs[x].is_none() || self.objs[y].is_none() {
                    continue;
                }
                match self.out[x].get(&y) {
                    Some(m) if self.is_iso(x, y, m) => self.cancel(x, y, mark),
                    _ => {}
                }
            }
        }
        self.simplify(mark);
    }
}

/// Reduced homology by scanning. Crossingless circles and a basepoint on a
/// crossingless circle are handled directly.
pub fn kh_scan(d: &PlanarDiagram) -> KhTable {
    let ends = d.edge_ends();
    let bp = d.basepoint() as usize;
    let free_loops = ends.iter().filter(|e| e.is_none()).count();
    let reduced = ends[bp].is_some();

    // partner point of every slot point; the basepoint edge stays cut
    let n = d.crossing_count();
    let mut partner: Vec<Option<Pt>> = vec![None; 4 * n];
    let mut mark = None;
    for (e, end) in ends.iter().enumerate() {
        let Some(end) = end else { continue };
        let t = (4 * end.tail.0 + end.tail.1) as Pt;
        let h = (4 * end.head.0 + end.head.1) as Pt;
        if e == bp {
            mark = Some(t);
        } else {
            partner[t as usize] = Some(h);
            partner[h as usize] = Some(t);
        }
    }

    let mut cx = Complex::default();
    cx.add_obj(Obj { m: Matching(vec![]), deg: 0, q: 0 });
    let mut placed = vec![false; n];
    for _ in 0..n {
        let c = next_crossing(&placed, &partner);
        placed[c] = true;
        cx = tensor_crossing(&cx, c, &placed, &partner, mark);
        cx.reduce(mark);
    }

    let mut t = KhTable::new(d.metadata().component_count);
    let n_plus = d.n_plus() as i64;
    let n_minus = d.n_minus() as i64;
    let mut gens: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for (k, o) in cx.objs.iter().enumerate() {
        let Some(o) = o else { continue };
        assert!(cx.out[k].is_empty(), "scanning left a nonzero differential");
        let i = o.deg as i64 - n_minus;
        let j = o.q as i64 - 1 + n_plus - 2 * n_minus;
        *gens.entry((i, j)).or_insert(0) += 1;
    }
    // other crossingless circles each contribute a factor q + q⁻¹
    let loops = free_loops - usize::from(!reduced);
    for _ in 0..loops {
        let mut next = BTreeMap::new();
        for (&(i, j), &r) in &gens {
            *next.entry((i, j + 1)).or_insert(0) += r;
            *next.entry((i, j - 1)).or_insert(0) += r;
        }
        gens = next;
    }
    for ((i, j), r) in gens {
        t.add(delta_bigrading(i, j), r);
    }
    t
}

/// The unplaced crossing with the most slots glued to the current boundary;
/// ties go to the smallest id.
fn next_crossing(placed: &[bool], partner: &[Option<Pt>]) -> usize {
    let mut best = (0usize, usize::MAX);
    for c in 0..placed.len() {
        if placed[c] {
            continue;
        }
        let glued = (0..4)
            .filter(|&s| partner[4 * c + s].is_some_and(|p| placed[p as usize / 4] || p as usize / 4 == c))
            .count();
        if best.1 == usize::MAX || glued > best.0 {
            best = (glued, c);
        }
    }
    best.1
}

fn tensor_crossing(cx: &Complex, c: usize, placed: &[bool], partner: &[Option<Pt>], mark: Option<Pt>) -> Complex {
    let base = 4 * c as Pt;
    let smooth = [
        [(base, base + 1), (base + 2, base + 3)],
        [(base, base + 3), (base + 1, base + 2)],
    ];
    let mut pairs: Vec<(Pt, Pt)> = Vec::new();
    for s in 0..4 {
        let p = base + s;
        if let Some(q) = partner[p as usize] {
            let qc = q as usize / 4;
            if (qc != c && placed[qc]) || (qc == c && p < q) {
                pairs.push((p, q));
            }
        }
    }
    let pmap: HashMap<Pt, Pt> = pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();

    let mut next = Complex::default();
    // (old object, smoothing) -> (ids of delooped copies indexed by loop labels, loop count)
    let mut copies: HashMap<(usize, usize), (Vec<usize>, usize)> = HashMap::new();
    for (x, o) in cx.objs.iter().enumerate() {
        let Some(o) = o else { continue };
        for (a, sm) in smooth.iter().enumerate() {
            let mut arcs = o.m.0.clone();
            arcs.extend_from_slice(sm);
            let closed = close_side(&arcs, &pmap);
            let l = closed.loops.len();
            let ids = (0..1u64 << l)
                .map(|sigma| {
                    let plus = sigma.count_ones() as i32;
                    next.add_obj(Obj {
                        m: closed.matching.clone(),
                        deg: o.deg + a as i32,
                        q: o.q + a as i32 + 2 * plus - l as i32,
                    })
                })
                .collect();
            copies.insert((x, a), (ids, l));
        }
    }

    let add = |next: &mut Complex, sx: (usize, usize), ty: (usize, usize), src: &[(Pt, Pt)], tgt: &[(Pt, Pt)], terms: &Morph| {
        let Glued { terms: m, mixed: n_mixed, src_loops: ls, tgt_loops: lt } = glue(src, tgt, terms, &pairs, mark);
        if m.is_empty() {
            return;
        }
        let (sids, sl) = &copies[&sx];
        let (tids, tl) = &copies[&ty];
        debug_assert_eq!((*sl, *tl), (ls, lt));
        let mixed_mask = (1u64 << n_mixed) - 1;
        for sigma in 0..1u64 << ls {
            for tau in 0..1u64 << lt {
                let want_src = sigma << n_mixed;
                let want_tgt = (!tau & ((1u64 << lt) - 1)) << (n_mixed + ls);
                let loop_mask = ((1u64 << (ls + lt)) - 1) << n_mixed;
                let want = want_src | want_tgt;
                let mut set: HashMap<u64, bool> = HashMap::new();
                for &v in &m {
                    if v & loop_mask == want {
                        xor_into(&mut set, v & mixed_mask);
                    }
                }
                let f = finish(set);
                if !f.is_empty() {
                    next.add_entry(sids[sigma as usize], tids[tau as usize], &f);
                }
            }
        }
    };

    for (x, o) in cx.objs.iter().enumerate() {
        if o.is_none() {
            continue;
        }
        let ox = &o.as_ref().unwrap().m;
        // differentials of the old complex, crossing held fixed
        for (&y, f) in &cx.out[x] {
            let oy = &cx.obj(y).m;
            let top = Pair::new(&ox.0, &oy.0);
            let (tc, _) = top.circles(&ox.0, &oy.0);
            for (a, sm) in smooth.iter().enumerate() {
                let mut src = ox.0.clone();
                src.extend_from_slice(sm);
                let mut tgt = oy.0.clone();
                tgt.extend_from_slice(sm);
                let comb = Pair::new(&src, &tgt);
                let (cc, _) = comb.circles(&src, &tgt);
                // top circle k -> combined circle of its smallest point
                let mut remap: Vec<u32> = Vec::new();
                for (i, &p) in top.pts.iter().enumerate() {
                    if tc[i] as usize == remap.len() {
                        remap.push(cc[comb.index(p)]);
                    }
                }
                let terms: Morph = f
                    .iter()
                    .map(|&t| (0..remap.len()).filter(|&k| t >> k & 1 == 1).fold(0u64, |m, k| m | 1 << remap[k]))
                    .collect();
                add(&mut next, (x, a), (y, a), &src, &tgt, &terms);
            }
        }
        // the saddle
        let mut src = ox.0.clone();
        src.extend_from_slice(&smooth[0]);
        let mut tgt = ox.0.clone();
        tgt.extend_from_slice(&smooth[1]);
        add(&mut next, (x, 0), (x, 1), &src, &tgt, &vec![0]);
    }
    next
}
