use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::poly::Laurent;
use crate::{Error, Result};

/// A point of the `(δ, q)` plane, both coordinates doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bigrading {
    pub delta2: i64,
    pub q2: i64,
}

impl Bigrading {
    pub fn new(delta2: i64, q2: i64) -> Self {
        Bigrading { delta2, q2 }
    }

    /// Homological grading `u = δ + q`.
    pub fn u(&self) -> i64 {
        (self.delta2 + self.q2).div_euclid(2)
    }

    /// Shift by the `[i, j]` operator with `(2i, 2j) = (di2, dj2)`.
    pub fn shifted(&self, di2: i64, dj2: i64) -> Self {
        Bigrading { delta2: self.delta2 + di2, q2: self.q2 + dj2 }
    }
}

/// Converts the cube gradings `(i, j)` to `(δ, q)` coordinates.
///
/// Fixed by the unknot, two-component unlink, positive Hopf link and
/// right-handed trefoil tables; see the `calibration` tests.
pub fn delta_bigrading(i: i64, j: i64) -> Bigrading {
    let q2 = j + 1;
    Bigrading { delta2: 2 * i - q2, q2 }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KhTable {
    ranks: BTreeMap<Bigrading, u64>,
    components: usize,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    delta2: i64,
    q2: i64,
    rank: u64,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    components: usize,
    entries: Vec<EntryJson>,
}

impl KhTable {
    pub fn new(components: usize) -> Self {
        KhTable { ranks: BTreeMap::new(), components }
    }

    pub fn from_entries(components: usize, entries: impl IntoIterator<Item = (Bigrading, u64)>) -> Self {
        let mut t = Self::new(components);
        for (g, r) in entries {
            t.add(g, r);
        }
        t
    }

    /// Convenience for fixtures: entries given as `(δ·2, q·2, rank)`.
    pub fn from_doubled(components: usize, entries: &[(i64, i64, u64)]) -> Self {
        Self::from_entries(components, entries.iter().map(|&(d, q, r)| (Bigrading::new(d, q), r)))
    }

    pub fn add(&mut self, g: Bigrading, rank: u64) {
        if rank == 0 {
            return;
        }
        *self.ranks.entry(g).or_insert(0) += rank;
    }

    pub fn rank(&self, g: Bigrading) -> u64 {
        self.ranks.get(&g).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Bigrading, u64)> + '_ {
        self.ranks.iter().map(|(&g, &r)| (g, r))
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    /// Distinct `δ` values carrying homology, ascending.
    pub fn deltas(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.ranks.keys().map(|g| g.delta2).collect();
        d.dedup();
        d
    }

    pub fn width(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(self.deltas().len())
    }

    /// Every entry moved by `[di2/2, dj2/2]`.
    pub fn shifted(&self, di2: i64, dj2: i64) -> KhTable {
        KhTable::from_entries(self.components, self.entries().map(|(g, r)| (g.shifted(di2, dj2), r)))
    }

    /// Sum `Σ (−1)^u t^q · rank`.
    pub fn jones(&self) -> Laurent {
        let mut p = Laurent::zero();
        for (g, r) in self.entries() {
            let sign = if g.u().rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(g.q2, sign * r as i64);
        }
        p
    }

    /// Graded Euler characteristic per `q2`, with sign `(−1)^u`.
    pub fn euler_by_q(&self) -> BTreeMap<i64, i64> {
        let mut m = BTreeMap::new();
        for (g, r) in self.entries() {
            let sign = if g.u().rem_euclid(2) == 0 { 1 } else { -1 };
            *m.entry(g.q2).or_insert(0) += sign * r as i64;
        }
        m.retain(|_, v| *v != 0);
        m
    }

    /// Alternating rank sum over `δ`, relative to the smallest `δ`.
    pub fn delta_euler(&self) -> i64 {
        let Some(d0) = self.ranks.keys().map(|g| g.delta2).min() else { return 0 };
        self.entries()
            .map(|(g, r)| if ((g.delta2 - d0) / 2) % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// The determinant, computed both from the `δ`-Euler characteristic and
    /// from the Jones polynomial at `t = −1`; the two must agree.
    pub fn determinant(&self) -> Result<i64> {
        let euler = self.delta_euler().abs();
        let jones = self.jones().abs_at_minus_one();
        if euler != jones {
            return Err(Error::DeterminantMismatch { euler, jones });
        }
        Ok(euler)
    }

    /// Checks `u` integrality and the uniform `q2` parity `k − 1 (mod 2)`.
    pub fn parity_ok(&self) -> bool {
        let want = (self.components as i64 - 1).rem_euclid(2);
        self.entries().all(|(g, _)| (g.delta2 + g.q2).rem_euclid(2) == 0 && g.q2.rem_euclid(2) == want)
    }

    /// Sum of ranks on each diagonal `u = δ + q`.
    pub fn diagonal_sums(&self) -> BTreeMap<i64, u64> {
        let mut m = BTreeMap::new();
        for (g, r) in self.entries() {
            *m.entry(g.u()).or_insert(0) += r;
        }
        m
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let t = TableJson {
            components: self.components,
            entries: self.entries().map(|(g, r)| EntryJson { delta2: g.delta2, q2: g.q2, rank: r }).collect(),
        };
        serde_json::to_value(t).expect("table serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: TableJson = serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad table JSON: {e}")))?;
        Ok(Self::from_entries(t.components, t.entries.into_iter().map(|e| (Bigrading::new(e.delta2, e.q2), e.rank))))
    }

    /// Text rendering with `δ` along the horizontal axis and `q` vertical,
    /// largest `q` on top.
    pub fn ascii(&self) -> String {
        if self.is_empty() {
            return "(empty)\n".into();
        }
        let deltas = self.deltas();
        let mut qs: Vec<i64> = self.ranks.keys().map(|g| g.q2).collect();
        qs.sort_unstable();
        qs.dedup();
        let (qmin, qmax) = (qs[0], *qs.last().unwrap());
        let half = |v: i64| if v % 2 == 0 { format!("{}", v / 2) } else { format!("{v}/2") };
        let cols: Vec<i64> = (deltas[0]..=*deltas.last().unwrap()).step_by(2).collect();
        let cell = cols.iter().map(|&d| half(d).len()).max().unwrap_or(1).max(3);
        let label = (qmin..=qmax).step_by(2).map(|q| half(q).len()).max().unwrap_or(1).max(1);
        let mut out = String::new();
        for q in (qmin..=qmax).rev().step_by(2) {
            let _ = write!(out, "{:>label$} |", half(q));
            for &d in &cols {
                let r = self.rank(Bigrading::new(d, q));
                let s = if r == 0 { ".".to_string() } else { r.to_string() };
                let _ = write!(out, " {s:>cell$}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:>label$} +{}", "", "-".repeat(cols.len() * (cell + 1)));
        let _ = write!(out, "{:>label$}  ", "q/δ");
        for &d in &cols {
            let _ = write!(out, " {:>cell$}", half(d));
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> KhTable {
        KhTable::from_doubled(1, &[(-2, 2, 1), (-2, 6, 1), (-2, 8, 1)])
    }

    #[test]
    fn derived_invariants() {
        let t = trefoil();
        assert_eq!(t.width().unwrap(), 1);
        assert_eq!(t.jones().to_string(), "t + t^3 - t^4");
        assert_eq!(t.determinant().unwrap(), 3);
        assert!(t.parity_ok());
        assert_eq!(KhTable::new(1).width(), Err(Error::EmptyTable));
    }

    #[test]
    fn unlink_jones() {
        let t = KhTable::from_doubled(2, &[(-1, 1, 1), (1, -1, 1)]);
        assert_eq!(t.width().unwrap(), 2);
        assert_eq!(t.jones().to_string(), "t^-1/2 + t^1/2");
        assert_eq!(t.determinant().unwrap(), 0);
    }

    #[test]
    fn json_roundtrip_and_order() {
        let t = trefoil();
        let s = t.to_json();
        assert_eq!(
            s,
            r#"{"components":1,"entries":[{"delta2":-2,"q2":2,"rank":1},{"delta2":-2,"q2":6,"rank":1},{"delta2":-2,"q2":8,"rank":1}]}"#
        );
        assert_eq!(KhTable::from_json(&s).unwrap(), t);
    }

    #[test]
    fn ascii_layout() {
        let a = trefoil().ascii();
        let lines: Vec<&str> = a.lines().collect();
        assert!(lines[0].starts_with("4 |"));
        assert!(a.contains("q/δ"));
    }
}
