//! Branch sets of surgeries on twist knots: braid families, rational
//! closures, width sweeps and the finite-filling verdict.

mod figures;

pub use figures::{half, torus_word, verify_figure, CheckLine, BlockReport, CellDiff, FigureId, FigureReport, PanelReport};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{closure, draw_braid, BraidWord, DiagramBuilder, PlanarDiagram, Start, NEGATIVE_SLOTS, POSITIVE_SLOTS};
use crate::khovanov::{kh_reduced_with, EngineConfig, KhTable};
use crate::{Error, Result};

/// A twist knot `K_t` together with a surgery coefficient `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistKnotSpec {
    pub t: u32,
    pub n: i64,
}

impl TwistKnotSpec {
    pub fn beta(&self) -> BraidWord {
        beta(self.t, self.n)
    }

    pub fn diagram(&self) -> PlanarDiagram {
        tau(self.t, self.n)
    }
}

/// Framing at which the branch set first has width `t+1`: −1 for odd `t`,
/// −5 for even `t`.
pub fn ell(t: u32) -> i64 {
    if t % 2 == 1 {
        -1
    } else {
        -5
    }
}

fn framing_base(t: u32) -> i64 {
    if t % 2 == 1 {
        2
    } else {
        6
    }
}

/// `σ₂σ₁³σ₂Δ^t`, the part of `β_{t,n}` that does not depend on `n`.
fn body(t: u32) -> BraidWord {
    let core: BraidWord = "3: 2 1 1 1 2".parse().expect("fixed word");
    core.concat(&BraidWord::full_twist3().pow(t as usize))
}

/// `σ₁^{b+n}(σ₂σ₁³σ₂)Δ^t` with `b = 2` for odd `t` and `b = 6` for even `t`.
/// A negative exponent gives negative letters.
pub fn beta(t: u32, n: i64) -> BraidWord {
    let twist = BraidWord::power(3, 1, framing_base(t) + n).expect("σ₁ exists on three strands");
    twist.concat(&body(t))
}

pub fn tau(t: u32, n: i64) -> PlanarDiagram {
    closure(&beta(t, n))
}

/// Regular continued fraction `p/q = a₁ + 1/(a₂ + 1/(…))`. Only `a₁` can be
/// zero or negative.
pub fn continued_fraction(p: i64, q: i64) -> Result<Vec<i64>> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    if q < 0 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let (mut a, mut b) = (p, q);
    let mut out = Vec::new();
    while b != 0 {
        out.push(a.div_euclid(b));
        (a, b) = (b, a.rem_euclid(b));
    }
    Ok(out)
}

/// Evaluates an expansion back to a reduced fraction `(p, q)`.
pub fn evaluate_continued_fraction(terms: &[i64]) -> (i64, i64) {
    let (mut p, mut q) = (1i64, 0i64);
    for &a in terms.iter().rev() {
        (p, q) = (a * p + q, p);
    }
    if q < 0 {
        (-p, -q)
    } else {
        (p, q)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Loose ends of a two-string tangle being assembled in a builder:
/// bottom-left, bottom-right, top-left, top-right.
struct Tangle {
    b1: usize,
    b2: usize,
    t1: usize,
    t2: usize,
}

impl Tangle {
    fn identity(builder: &mut DiagramBuilder) -> Self {
        let (a, b) = (builder.virtual_node(), builder.virtual_node());
        Tangle { b1: a, b2: b, t1: a, t2: b }
    }

    fn cap_cup(builder: &mut DiagramBuilder) -> Self {
        let (cup, cap) = (builder.virtual_node(), builder.virtual_node());
        Tangle { b1: cup, b2: cup, t1: cap, t2: cap }
    }

    fn crossing(builder: &mut DiagramBuilder, positive: bool) -> [usize; 4] {
        let ports = builder.crossing();
        let slots = if positive { POSITIVE_SLOTS } else { NEGATIVE_SLOTS };
        slots.map(|s| ports[s])
    }

    /// Twists the two top ends around each other, as `σ₁^k` does.
    fn twist_top(&mut self, builder: &mut DiagramBuilder, k: i64) {
        for _ in 0..k.abs() {
            let [bl, br, tl, tr] = Self::crossing(builder, k > 0);
            builder.connect(self.t1, bl);
            builder.connect(self.t2, br);
            (self.t1, self.t2) = (tl, tr);
        }
    }

    /// Twists the two right-hand ends around each other.
    fn twist_right(&mut self, builder: &mut DiagramBuilder, k: i64, mirrored: bool) {
        for _ in 0..k.abs() {
            let [bl, br, tl, tr] = Self::crossing(builder, (k > 0) != mirrored);
            builder.connect(self.b2, bl);
            builder.connect(self.t2, tl);
            (self.b2, self.t2) = (br, tr);
        }
    }
}

/// Closure of the `τ_t` tangle with the rational tangle of the given
/// expansion (already offset by the framing base) in place of `σ₁^{b+n}`.
fn rational_diagram(t: u32, terms: Option<&[i64]>, mirrored: bool) -> PlanarDiagram {
    let mut builder = DiagramBuilder::new();
    let tangle = match terms {
        None => Tangle::cap_cup(&mut builder),
        Some(terms) => {
            let mut tangle =
                if terms.len() % 2 == 1 { Tangle::identity(&mut builder) } else { Tangle::cap_cup(&mut builder) };
            for (j, &a) in terms.iter().enumerate().rev() {
                if j % 2 == 0 {
                    tangle.twist_top(&mut builder, a);
                } else {
                    tangle.twist_right(&mut builder, a, mirrored);
                }
            }
            tangle
        }
    };
    let third = builder.virtual_node();
    let open = draw_braid(&mut builder, &body(t), vec![tangle.t1, tangle.t2, third]);
    builder.connect(open.top[0], tangle.b1);
    builder.connect(open.top[1], tangle.b2);
    builder.connect(open.top[2], third);
    let start = Start::new(third, 0);
    builder.finalize(&[start], start).diagram
}

/// A rational closure together with how it was pinned down.
#[derive(Clone, Debug)]
pub struct RationalClosure {
    pub diagram: PlanarDiagram,
    pub expansion: Vec<i64>,
    /// Whether the right-hand twist regions use the mirrored handedness.
    pub mirrored: bool,
    pub determinant: i64,
    /// Determinant of the other handedness.
    pub other_determinant: i64,
    /// Both handednesses satisfy the determinant law.
    pub ambiguous: bool,
}

/// Branch set of `p/q` surgery on `K_t`. `q = 0` requires `p = ±1` and
/// gives the trivial filling.
pub fn tau_rational(t: u32, p: i64, q: i64) -> Result<PlanarDiagram> {
    Ok(tau_rational_with(t, p, q, &EngineConfig::from_env())?.diagram)
}

pub fn tau_rational_with(t: u32, p: i64, q: i64, cfg: &EngineConfig) -> Result<RationalClosure> {
    let expansion = if q == 0 {
        if p.abs() != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Vec::new()
    } else {
        continued_fraction(p, q)?
    };
    let mut terms = expansion.clone();
    if let Some(first) = terms.first_mut() {
        *first += framing_base(t);
    }
    let terms = (q != 0).then_some(terms.as_slice());
    let expected = p.abs();
    let det_of = |d: &PlanarDiagram| -> Result<i64> { kh_reduced_with(d, cfg)?.determinant() };

    let (plain, mirrored) =
        rayon::join(|| rational_diagram(t, terms, false), || rational_diagram(t, terms, true));
    let (d0, d1) = rayon::join(|| det_of(&plain), || det_of(&mirrored));
    let (d0, d1) = (d0?, d1?);
    let ambiguous = d0 == d1;
    if d0 == expected {
        return Ok(RationalClosure { diagram: plain, expansion, mirrored: false, determinant: d0, other_determinant: d1, ambiguous });
    }
    if d1 == expected {
        return Ok(RationalClosure { diagram: mirrored, expansion, mirrored: true, determinant: d1, other_determinant: d0, ambiguous });
    }
    Err(Error::ClosureDeterminant { got: d0, expected })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthProfile {
    pub t: u32,
    pub entries: BTreeMap<i64, usize>,
    /// First framing `n` in the sweep with `width(n+1) = width(n) + 1`.
    pub jump_framing: Option<i64>,
    #[serde(rename = "w_K")]
    pub w_k: usize,
}

impl WidthProfile {
    /// True when the widths take exactly two consecutive values.
    pub fn two_valued(&self) -> bool {
        let lo = self.entries.values().min();
        let hi = self.entries.values().max();
        matches!((lo, hi), (Some(a), Some(b)) if b == &(a + 1))
    }
}

/// Widths of `τ_t(n)` for `n_lo ≤ n ≤ n_hi`.
pub fn width_profile(t: u32, n_lo: i64, n_hi: i64, cfg: &EngineConfig) -> Result<WidthProfile> {
    if n_lo > n_hi {
        return Err(Error::Usage(format!("empty framing range {n_lo}..{n_hi}")));
    }
    let widths: Vec<(i64, usize)> = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| Ok((n, kh_reduced_with(&tau(t, n), cfg)?.width()?)))
        .collect::<Result<_>>()?;
    let entries: BTreeMap<i64, usize> = widths.into_iter().collect();
    let jump_framing =
        entries.iter().find(|(n, w)| entries.get(&(**n + 1)).is_some_and(|w1| *w1 == **w + 1)).map(|(n, _)| *n);
    let w_k = *entries.values().min().expect("nonempty range");
    Ok(WidthProfile { t, entries, jump_framing, w_k })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingReport {
    pub t: u32,
    #[serde(rename = "w_K")]
    pub w_k: usize,
    pub jump_framing: Option<i64>,
    pub verdict: String,
    pub caveats: Vec<String>,
}

pub const NO_FINITE_FILLINGS: &str = "no finite fillings";
pub const INCONCLUSIVE: &str = "inconclusive";

/// Applies the width obstruction (a finite filling forces width ≤ 2) to the
/// branch sets of `K_t`.
pub fn finite_filling_report(t: u32, cfg: &EngineConfig) -> Result<FillingReport> {
    let l = ell(t);
    let profile = width_profile(t, l, l + 1, cfg)?;
    let w_k = profile.w_k;
    let above = profile.entries[&(l + 1)];
    let mut caveats = vec![format!(
        "rational slopes rely on width(τ(p/q)) ≥ w_K, checked here on sampled closures only"
    )];
    let verdict = if w_k > 2 {
        caveats.push(format!("width is at least w_K = {w_k} > 2 for every framing"));
        NO_FINITE_FILLINGS
    } else if t == 1 && above > 2 {
        caveats.push(format!("width(τ₁(n)) ≥ {above} > 2 only for n ≥ 0, so the computation covers r ≥ 0"));
        caveats.push("r < 0 follows because K₁ is amphichiral; this is an external fact, not computed".into());
        NO_FINITE_FILLINGS
    } else {
        caveats.push(format!("w_K = {w_k} ≤ 2 does not obstruct finite fillings"));
        INCONCLUSIVE
    };
    Ok(FillingReport { t, w_k, jump_framing: profile.jump_framing, verdict: verdict.into(), caveats })
}

/// Ranks per δ-column, ordered by δ.
pub fn column_ranks(table: &KhTable) -> Vec<u64> {
    let mut cols: BTreeMap<i64, u64> = BTreeMap::new();
    for (g, r) in table.entries() {
        *cols.entry(g.delta2).or_insert(0) += r;
    }
    cols.into_values().collect()
}

/// How `Kh(τ_t(ℓ+m))` sits relative to `Kh(τ_t(ℓ))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtraColumnReport {
    pub t: u32,
    pub m: i64,
    pub base_columns: Vec<u64>,
    pub columns: Vec<u64>,
    pub width: usize,
    /// The first `t` columns agree and column `t+1` does not grow.
    pub prefix_ok: bool,
    pub new_column_rank: u64,
    /// The lowest generator of the new column lies strictly below the top of
    /// the column before it.
    pub below_adjacent_max: bool,
}

impl ExtraColumnReport {
    pub fn passed(&self) -> bool {
        let t = self.t as usize;
        let exact_for_one = self.m != 1 || (self.columns[..=t] == self.base_columns[..] && self.new_column_rank == 1);
        self.width == t + 2
            && self.prefix_ok
            && self.new_column_rank >= 1
            && self.new_column_rank <= self.m as u64
            && self.below_adjacent_max
            && exact_for_one
    }
}

pub fn extra_column_report(t: u32, m: i64, cfg: &EngineConfig) -> Result<ExtraColumnReport> {
    let l = ell(t);
    let (base, table) =
        rayon::join(|| kh_reduced_with(&tau(t, l), cfg), || kh_reduced_with(&tau(t, l + m), cfg));
    let (base, table) = (base?, table?);
    let base_columns = column_ranks(&base);
    let columns = column_ranks(&table);
    let width = columns.len();
    let tu = t as usize;
    let prefix_ok = width == tu + 2
        && base_columns.len() == tu + 1
        && columns[..tu] == base_columns[..tu]
        && columns[tu] >= 1
        && columns[tu] <= base_columns[tu];
    let deltas = table.deltas();
    let (new_rank, below) = match (deltas.last(), deltas.len().checked_sub(2).map(|i| deltas[i])) {
        (Some(&last), Some(prev)) => {
            let qs = |d: i64| table.entries().filter(move |(g, _)| g.delta2 == d).map(|(g, _)| g.q2);
            let new_min = qs(last).min().unwrap_or(i64::MAX);
            let prev_max = qs(prev).max().unwrap_or(i64::MIN);
            (*columns.last().unwrap_or(&0), new_min < prev_max)
        }
        _ => (0, false),
    };
    Ok(ExtraColumnReport {
        t,
        m,
        base_columns,
        columns,
        width,
        prefix_ok,
        new_column_rank: new_rank,
        below_adjacent_max: below,
    })
}
