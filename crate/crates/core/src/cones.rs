//! Skein mapping cones and the E1 pages of iterated cones.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{closure, BraidWord, Letter, PlanarDiagram, Start};
use crate::khovanov::{kh_reduced_with, Bigrading, EngineConfig, KhTable};
use crate::{Error, Result};

/// Resolves one positive crossing. `d0` is the oriented resolution with the
/// inherited orientation; `d1` is the other resolution, its components
/// through the crossing oriented to minimise negative crossings (first
/// minimiser in component order). `c = n₋(d1) − n₋(d)`.
#[derive(Clone, Debug)]
pub struct SkeinSplit {
    pub d0: PlanarDiagram,
    pub d1: PlanarDiagram,
    pub c: i64,
}

pub fn skein_split(d: &PlanarDiagram, crossing: usize) -> Result<SkeinSplit> {
    let x = d.crossings().get(crossing).ok_or(Error::NoSuchCrossing(crossing))?;
    if !x.is_positive() {
        return Err(Error::NegativeCrossing(crossing));
    }
    let resolve = |bit: bool| {
        let (mut b, virt) = d.to_builder();
        b.smooth(crossing, crate::khovanov::smoothing_pairs(bit));
        (b, virt)
    };
    let bp = d.basepoint() as usize;

    let (b0, virt) = resolve(false);
    let mut starts = vec![Start::new(virt[bp], 0)];
    starts.extend(virt.iter().map(|&v| Start::new(v, 0)));
    let d0 = b0.finalize(&starts, starts[0]).diagram;

    let (b1, virt) = resolve(true);
    let probe = b1.finalize(&starts, starts[0]);
    let ports = d.to_builder().0.ports(crossing).expect("crossing present");
    let mut site: Vec<usize> = ports.iter().map(|&p| probe.component_of_node[p]).collect();
    site.sort_unstable();
    site.dedup();
    let edge_comp: Vec<usize> = virt.iter().map(|&v| probe.component_of_node[v]).collect();

    let mut best: Option<PlanarDiagram> = None;
    for flips in 0u32..1 << site.len() {
        let flipped = |comp: usize| site.iter().position(|&s| s == comp).is_some_and(|k| flips >> k & 1 == 1);
        let link = |e: usize| usize::from(flipped(edge_comp[e]));
        let mut st = vec![Start::new(virt[bp], link(bp))];
        st.extend(virt.iter().enumerate().map(|(e, &v)| Start::new(v, link(e))));
        let cand = b1.finalize(&st, st[0]).diagram;
        if best.as_ref().is_none_or(|b| cand.n_minus() < b.n_minus()) {
            best = Some(cand);
        }
    }
    let d1 = best.expect("at least one orientation");
    let c = d1.n_minus() as i64 - d.n_minus() as i64;
    Ok(SkeinSplit { d0, d1, c })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedSummand {
    pub label: String,
    pub table: KhTable,
    /// `(2i, 2j)` for the shift `[i, j]`: `δ` moves by `i` and `q` by `j`.
    pub shift2: (i64, i64),
}

impl ShiftedSummand {
    pub fn shifted_table(&self) -> KhTable {
        self.table.shifted(self.shift2.0, self.shift2.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePage {
    pub summands: Vec<ShiftedSummand>,
    pub constants: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SummandJson {
    label: String,
    shift2: [i64; 2],
    entries: serde_json::Value,
}

impl ConePage {
    /// Sum of all shifted summands, labelled with `components`.
    pub fn total(&self, components: usize) -> KhTable {
        let mut t = KhTable::new(components);
        for s in &self.summands {
            for (g, r) in s.shifted_table().entries() {
                t.add(g, r);
            }
        }
        t
    }

    /// Applies a further shift to every summand.
    pub fn shifted(&self, di2: i64, dj2: i64) -> ConePage {
        let summands = self
            .summands
            .iter()
            .map(|s| ShiftedSummand { shift2: (s.shift2.0 + di2, s.shift2.1 + dj2), ..s.clone() })
            .collect();
        ConePage { summands, constants: self.constants.clone() }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let summands: Vec<SummandJson> = self
            .summands
            .iter()
            .map(|s| SummandJson {
                label: s.label.clone(),
                shift2: [s.shift2.0, s.shift2.1],
                entries: s.table.to_json_value()["entries"].clone(),
            })
            .collect();
        serde_json::json!({ "summands": summands, "constants": self.constants })
    }
}

/// The two-summand page of a single skein cone.
pub fn cone_page(d: &PlanarDiagram, crossing: usize, cfg: &EngineConfig) -> Result<ConePage> {
    let s = skein_split(d, crossing)?;
    let (k0, k1) = rayon::join(|| kh_reduced_with(&s.d0, cfg), || kh_reduced_with(&s.d1, cfg));
    let c = s.c;
    Ok(ConePage {
        summands: vec![
            ShiftedSummand { label: "D0".into(), table: k0?, shift2: (-1, 1) },
            ShiftedSummand { label: "D1".into(), table: k1?, shift2: (-c, 3 * c + 2) },
        ],
        constants: vec![c],
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    /// Bigradings where the page has less rank than the exact table.
    pub rank_violations: Vec<(Bigrading, u64, u64)>,
    /// `q2` values whose Euler characteristics differ: (q2, page, exact).
    pub euler_mismatches: Vec<(i64, i64, i64)>,
    pub defect: i64,
    pub defect_even: bool,
}

impl DominationReport {
    pub fn passed(&self) -> bool {
        self.rank_violations.is_empty() && self.euler_mismatches.is_empty() && self.defect_even
    }
}

/// Checks that an E1 page can converge to `exact`.
pub fn e1_dominates(page: &ConePage, exact: &KhTable) -> DominationReport {
    let total = page.total(exact.component_count());
    let mut rank_violations = Vec::new();
    for (g, r) in exact.entries() {
        let have = total.rank(g);
        if have < r {
            rank_violations.push((g, have, r));
        }
    }
    let (pe, ee) = (total.euler_by_q(), exact.euler_by_q());
    let qs: BTreeSet<i64> = pe.keys().chain(ee.keys()).copied().collect();
    let euler_mismatches = qs
        .into_iter()
        .filter_map(|q| {
            let (a, b) = (pe.get(&q).copied().unwrap_or(0), ee.get(&q).copied().unwrap_or(0));
            (a != b).then_some((q, a, b))
        })
        .collect();
    let defect = total.total_rank() as i64 - exact.total_rank() as i64;
    DominationReport { rank_violations, euler_mismatches, defect, defect_even: defect % 2 == 0 }
}

/// Builds the single-crossing cone and checks it against `Kh(d)`.
pub fn cone_consistency(d: &PlanarDiagram, crossing: usize, cfg: &EngineConfig) -> Result<DominationReport> {
    let page = cone_page(d, crossing, cfg)?;
    let exact = kh_reduced_with(d, cfg)?;
    Ok(e1_dominates(&page, &exact))
}

fn without_letters(b: &BraidWord, drop: &BTreeSet<usize>) -> BraidWord {
    let letters: Vec<Letter> =
        b.letters().iter().enumerate().filter(|(k, _)| !drop.contains(k)).map(|(_, &l)| l).collect();
    BraidWord::new(b.strands(), letters).expect("subword of a valid word")
}

/// Diagram of `R_i` (1-based `i`): earlier chosen letters removed, letter
/// `crossings[i-1]` resolved the other way.
fn resolved(b: &BraidWord, crossings: &[usize], i: usize) -> Result<SkeinSplit> {
    let earlier: BTreeSet<usize> = crossings[..i - 1].iter().copied().collect();
    let target = crossings[i - 1];
    let word = without_letters(b, &earlier);
    let pos = target - earlier.iter().filter(|&&k| k < target).count();
    skein_split(&closure(&word), pos)
}

/// E1 page of the iterated cone over the given letters of a positive braid.
pub fn e1_page(b: &BraidWord, crossings: &[usize], cfg: &EngineConfig) -> Result<ConePage> {
    if !b.is_positive() {
        return Err(Error::NotPositive);
    }
    let mut seen = BTreeSet::new();
    for &c in crossings {
        if c >= b.len() {
            return Err(Error::NoSuchCrossing(c));
        }
        if !seen.insert(c) {
            return Err(Error::DuplicateCrossing(c));
        }
    }
    let n = crossings.len() as i64;
    let base = closure(&without_letters(b, &seen));
    let splits: Vec<SkeinSplit> = (1..=crossings.len()).map(|i| resolved(b, crossings, i)).collect::<Result<_>>()?;
    let mut diagrams: Vec<&PlanarDiagram> = vec![&base];
    diagrams.extend(splits.iter().map(|s| &s.d1));
    let tables: Vec<KhTable> = diagrams.par_iter().map(|d| kh_reduced_with(d, cfg)).collect::<Result<_>>()?;

    let mut summands = vec![ShiftedSummand { label: "base".into(), table: tables[0].clone(), shift2: (-n, n) }];
    let mut constants = Vec::new();
    for (k, s) in splits.iter().enumerate() {
        let i = k as i64 + 1;
        let c = s.c;
        constants.push(c);
        summands.push(ShiftedSummand {
            label: format!("R{i}"),
            table: tables[k + 1].clone(),
            shift2: (-(c - 1 + i), 3 * c + 1 + i),
        });
    }
    Ok(ConePage { summands, constants })
}

/// E1 page for a whole twist region `σ_i^n` of `b1 · σ_i^n · b2`, with the
/// region's resolutions collapsed to a single link `R`. The per-crossing
/// page of the same letters is computed too and must agree.
pub fn twist_region_e1(b1: &BraidWord, i: usize, n: usize, b2: &BraidWord, cfg: &EngineConfig) -> Result<ConePage> {
    if n == 0 {
        return Err(Error::Usage("twist region needs n ≥ 1".into()));
    }
    let strands = b1.strands().max(b2.strands()).max(i + 1);
    let region = BraidWord::power(strands, i, n as i64)?;
    let lift = |w: &BraidWord| BraidWord::new(strands, w.letters().to_vec());
    let (b1, b2) = (lift(b1)?, lift(b2)?);
    let full = b1.concat(&region).concat(&b2);
    if !full.is_positive() {
        return Err(Error::NotPositive);
    }
    let single = b1.concat(&BraidWord::power(strands, i, 1)?).concat(&b2);
    let split = skein_split(&closure(&single), b1.len())?;
    let c = split.c;
    let (base, r) = rayon::join(
        || kh_reduced_with(&closure(&b1.concat(&b2)), cfg),
        || kh_reduced_with(&split.d1, cfg),
    );
    let (base, r) = (base?, r?);
    let mut summands = vec![ShiftedSummand { label: "base".into(), table: base, shift2: (0, 0) }];
    for q in 0..n as i64 {
        summands.push(ShiftedSummand { label: format!("R q={q}"), table: r.clone(), shift2: (-(c - 1), 3 * c + 1 + 2 * q) });
    }
    let page = ConePage { summands, constants: vec![c] }.shifted(-(n as i64), n as i64);

    let letters: Vec<usize> = (b1.len()..b1.len() + n).collect();
    let per_crossing = e1_page(&full, &letters, cfg)?;
    for (k, &ci) in per_crossing.constants.iter().enumerate() {
        let expect = c + n as i64 - (k as i64 + 1);
        if ci != expect {
            return Err(Error::Usage(format!("twist region constant c_{} = {ci}, expected {expect}", k + 1)));
        }
    }
    let components = closure(&full).metadata().component_count;
    if per_crossing.total(components) != page.total(components) {
        return Err(Error::Usage("twist-region page disagrees with the per-crossing page".into()));
    }
    Ok(page)
}

/// Ranks of a page grouped by summand label, for reports.
pub fn summand_ranks(page: &ConePage) -> BTreeMap<String, u64> {
    page.summands.iter().map(|s| (s.label.clone(), s.table.total_rank())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::khovanov::kh_reduced;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn trefoil_split() {
        let d = closure(&word("2: 1 1 1"));
        let s = skein_split(&d, 2).unwrap();
        assert_eq!(s.d0.metadata().component_count, 2);
        assert_eq!(s.d0.n_plus(), 2);
        assert_eq!(s.d1.metadata().component_count, 1);
        assert_eq!(s.c, 2);
        assert_eq!(kh_reduced(&s.d1).unwrap(), KhTable::from_doubled(1, &[(0, 0, 1)]));
    }

    #[test]
    fn errors() {
        let d = closure(&word("2: 1 -1"));
        assert_eq!(skein_split(&d, 1).unwrap_err(), Error::NegativeCrossing(1));
        assert_eq!(skein_split(&d, 5).unwrap_err(), Error::NoSuchCrossing(5));
        let cfg = EngineConfig::default();
        assert_eq!(e1_page(&word("2: 1 -1"), &[0], &cfg).unwrap_err(), Error::NotPositive);
        assert_eq!(e1_page(&word("2: 1 1"), &[0, 0], &cfg).unwrap_err(), Error::DuplicateCrossing(0));
    }

    #[test]
    fn trefoil_cone_is_exact() {
        let d = closure(&word("2: 1 1 1"));
        let cfg = EngineConfig::default();
        for x in 0..3 {
            let page = cone_page(&d, x, &cfg).unwrap();
            let exact = kh_reduced(&d).unwrap();
            assert_eq!(page.total(1), exact);
            assert!(e1_dominates(&page, &exact).passed());
        }
    }

    #[test]
    fn single_crossing_page_matches_cone() {
        let cfg = EngineConfig::default();
        let b = word("3: 1 2 1 1 2");
        for x in 0..b.len() {
            let a = e1_page(&b, &[x], &cfg).unwrap();
            let c = cone_page(&closure(&b), x, &cfg).unwrap();
            assert_eq!(a.constants, c.constants);
            assert_eq!(a.total(1), c.total(1));
        }
    }

    #[test]
    fn kink_cone() {
        let d = closure(&word("2: 1"));
        let rep = cone_consistency(&d, 0, &EngineConfig::default()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.defect == 0 || rep.defect == 2);
    }

    #[test]
    fn twist_region_agrees() {
        let cfg = EngineConfig::default();
        let p = twist_region_e1(&word("3: 2 1"), 1, 3, &word("3: 2 2 1 2 1 2 1"), &cfg).unwrap();
        let exact = kh_reduced(&closure(&word("3: 2 1 1 1 1 2 2 1 2 1 2 1"))).unwrap();
        assert!(e1_dominates(&p, &exact).passed());
    }
}
