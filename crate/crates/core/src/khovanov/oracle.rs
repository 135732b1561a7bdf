//! Jones polynomial from the Kauffman bracket state sum. Shares nothing with
//! the homology code beyond the diagram type.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diagrams::PlanarDiagram;
use crate::poly::Laurent;
use crate::{Error, Result};

pub const ORACLE_CAP: usize = 20;

fn loops(d: &PlanarDiagram, state: u64) -> u32 {
    let n = d.edge_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n as u32;
    for (c, x) in d.crossings().iter().enumerate() {
        let e = x.edges.map(|e| e as usize);
        // A-smoothing joins slots 0-1 and 2-3; B-smoothing joins 0-3 and 1-2
        let pairs = if state >> c & 1 == 0 { [(e[0], e[1]), (e[2], e[3])] } else { [(e[0], e[3]), (e[1], e[2])] };
        for (a, b) in pairs {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
    }
    count
}

/// Jones polynomial in `t^{1/2}`, sign-normalised to match
/// `KhTable::jones` (an extra factor `(−1)^{k−1}` for `k` components).
pub fn kauffman_bracket_oracle(d: &PlanarDiagram) -> Result<Laurent> {
    let n = d.crossing_count();
    if n > ORACLE_CAP {
        return Err(Error::ResourceLimit { crossings: n, cap: ORACLE_CAP });
    }
    // tally states by (A-exponent, loop count)
    let tally: HashMap<(i64, u32), i64> = (0..1u64 << n)
        .into_par_iter()
        .fold(HashMap::new, |mut m, s| {
            let b = s.count_ones() as i64;
            let a_exp = (n as i64 - b) - b;
            *m.entry((a_exp, loops(d, s))).or_insert(0) += 1;
            m
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    // bracket as a polynomial in A (keys are plain A-exponents)
    let delta = &Laurent::monomial(2, -1) + &Laurent::monomial(-2, -1);
    let mut powers = vec![Laurent::one()];
    let mut bracket = Laurent::zero();
    let mut entries: Vec<_> = tally.into_iter().collect();
    entries.sort_unstable();
    for ((a_exp, l), count) in entries {
        while powers.len() < l as usize {
            let next = &powers[powers.len() - 1] * &delta;
            powers.push(next);
        }
        bracket = &bracket + &powers[l as usize - 1].shift(a_exp).scaled(count);
    }

    // (−A³)^{−w}
    let w = d.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let normalised = bracket.shift(-3 * w).scaled(sign);

    // A = t^{-1/4}: A^a becomes t^{-a/4}, doubled exponent −a/2
    let mut jones = Laurent::zero();
    for (a, c) in normalised.terms() {
        debug_assert!(a % 2 == 0, "odd A exponent in a normalised bracket");
        jones.add_term(-a / 2, c);
    }
    let k = d.metadata().component_count;
    Ok(if k.is_multiple_of(2) { jones.scaled(-1) } else { jones })
}
