//! Perturbed reduced homology over F2 and the linking-number rank law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagrams::{LinkMetadata, PlanarDiagram};
use crate::khovanov::{perturbed_homology, KhTable, CUBE_CAP};
use crate::{Error, Result};

/// Ranks on the diagonals `n = δ + q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagonalRanks(pub BTreeMap<i64, u64>);

impl DiagonalRanks {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn get(&self, n: i64) -> u64 {
        self.0.get(&n).copied().unwrap_or(0)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let diagonals: serde_json::Map<String, serde_json::Value> =
            self.0.iter().map(|(n, r)| (n.to_string(), serde_json::Value::from(*r))).collect();
        serde_json::json!({ "total": self.total(), "diagonals": diagonals })
    }
}

/// Predicted ranks: for each subset `X` of components, the diagonal
/// `2·Σ_{l∈X, m∉X} lk(L_l, L_m)` receives one half.
pub fn lk_rank_formula(meta: &LinkMetadata) -> DiagonalRanks {
    let k = meta.component_count;
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for x in 0u64..1 << k {
        let mut n = 0;
        for l in 0..k {
            for m in 0..k {
                if x >> l & 1 == 1 && x >> m & 1 == 0 {
                    n += 2 * meta.linking[l][m];
                }
            }
        }
        *counts.entry(n).or_insert(0) += 1;
    }
    DiagonalRanks(counts.into_iter().map(|(n, c)| (n, c / 2)).filter(|&(_, r)| r > 0).collect())
}

/// Homology of the perturbed complex, collapsed onto diagonals. Both rank
/// laws are checked before returning.
pub fn bn_homology_rank(d: &PlanarDiagram) -> Result<(u64, DiagonalRanks)> {
    bn_homology_rank_capped(d, CUBE_CAP)
}

pub fn bn_homology_rank_capped(d: &PlanarDiagram, cap: usize) -> Result<(u64, DiagonalRanks)> {
    let by_degree = perturbed_homology(d, cap)?;
    let diagonals = DiagonalRanks(by_degree.into_iter().filter(|&(_, r)| r > 0).collect());
    let total = diagonals.total();
    let meta = d.metadata();
    let expect_total = 1u64 << (meta.component_count - 1);
    if total != expect_total {
        return Err(Error::RankLaw(format!("total rank {total}, expected {expect_total}")));
    }
    let predicted = lk_rank_formula(&meta);
    if diagonals != predicted {
        return Err(Error::RankLaw(format!("diagonals {:?}, linking numbers predict {:?}", diagonals.0, predicted.0)));
    }
    Ok((total, diagonals))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub n: i64,
    pub khovanov: u64,
    pub perturbed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub violations: Vec<BoundViolation>,
    /// Total rank difference; survivors cancel in pairs so this is even.
    pub defect: i64,
    pub defect_even: bool,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.defect_even
    }
}

/// Checks that each diagonal of `t` carries at least the perturbed rank.
pub fn lee_lower_bound_check(t: &KhTable, ranks: &DiagonalRanks) -> LowerBoundReport {
    let sums = t.diagonal_sums();
    let mut violations = Vec::new();
    for (&n, &r) in &ranks.0 {
        let have = sums.get(&n).copied().unwrap_or(0);
        if have < r {
            violations.push(BoundViolation { n, khovanov: have, perturbed: r });
        }
    }
    let defect = t.total_rank() as i64 - ranks.total() as i64;
    LowerBoundReport { violations, defect, defect_even: defect % 2 == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::closure;
    use crate::khovanov::kh_reduced;
    use crate::BraidWord;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn formula_examples() {
        let knot = closure(&word("2: 1 1 1")).metadata();
        assert_eq!(lk_rank_formula(&knot).0, BTreeMap::from([(0, 1)]));
        let hopf = closure(&word("2: 1 1")).metadata();
        assert_eq!(lk_rank_formula(&hopf).0, BTreeMap::from([(0, 1), (2, 1)]));
        for t in 1..=3i64 {
            let m = closure(&BraidWord::full_twist3().pow(t as usize)).metadata();
            assert_eq!(lk_rank_formula(&m).0, BTreeMap::from([(0, 1), (4 * t, 3)]));
        }
    }

    #[test]
    fn perturbed_examples() {
        assert_eq!(bn_homology_rank(&PlanarDiagram::unknot()).unwrap(), (1, DiagonalRanks(BTreeMap::from([(0, 1)]))));
        let (t, d) = bn_homology_rank(&closure(&word("2: 1 1"))).unwrap();
        assert_eq!((t, d.0), (2, BTreeMap::from([(0, 1), (2, 1)])));
        let (t, d) = bn_homology_rank(&closure(&BraidWord::full_twist3())).unwrap();
        assert_eq!((t, d.0), (4, BTreeMap::from([(0, 1), (4, 3)])));
    }

    #[test]
    fn lower_bound_on_full_twist() {
        let d = closure(&BraidWord::full_twist3());
        let (_, ranks) = bn_homology_rank(&d).unwrap();
        let rep = lee_lower_bound_check(&kh_reduced(&d).unwrap(), &ranks);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.defect, 2);
    }

    #[test]
    fn json_shape() {
        let r = DiagonalRanks(BTreeMap::from([(0, 1), (4, 3)]));
        assert_eq!(r.to_json_value().to_string(), r#"{"diagonals":{"0":1,"4":3},"total":4}"#);
    }
}
