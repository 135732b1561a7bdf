//! Reduced Khovanov homology over F2 in the diagonal `(δ, q)` grading.

mod cube;
mod oracle;
mod scan;
mod table;

pub use cube::{
    build_reduced_complex, build_reduced_complex_capped, homology_table, resolution_circles, smoothing_pairs, Circles,
    GradedComplex, Slice, CUBE_CAP,
};
pub use oracle::{kauffman_bracket_oracle, ORACLE_CAP};
pub use table::{delta_bigrading, Bigrading, KhTable};

pub(crate) use cube::perturbed_homology;

use crate::diagrams::PlanarDiagram;
use crate::poly::Laurent;
use crate::{Error, Result};

/// Default crossing cap for homology computations.
pub const DEFAULT_MAX_CROSSINGS: usize = 28;

/// Environment variable overriding [`DEFAULT_MAX_CROSSINGS`].
pub const MAX_CROSSINGS_ENV: &str = "KHWIDTH_MAX_CROSSINGS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Cube for small diagrams, scanning otherwise.
    Auto,
    Cube,
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_crossings: usize,
    /// Largest crossing count for which `Auto` expands the full cube.
    pub cube_threshold: usize,
    pub method: Method,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_crossings: DEFAULT_MAX_CROSSINGS, cube_threshold: 8, method: Method::Auto }
    }
}

impl EngineConfig {
    /// Default configuration with the cap taken from the environment when set.
    pub fn from_env() -> Self {
        let mut c = Self::default();
        if let Some(cap) = std::env::var(MAX_CROSSINGS_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            c.max_crossings = cap;
        }
        c
    }

    pub fn with_method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }
}

pub fn kh_reduced(d: &PlanarDiagram) -> Result<KhTable> {
    kh_reduced_with(d, &EngineConfig::from_env())
}

pub fn kh_reduced_with(d: &PlanarDiagram, cfg: &EngineConfig) -> Result<KhTable> {
    let n = d.crossing_count();
    if n > cfg.max_crossings {
        return Err(Error::ResourceLimit { crossings: n, cap: cfg.max_crossings });
    }
    let use_cube = match cfg.method {
        Method::Cube => true,
        Method::Scan => false,
        Method::Auto => n <= cfg.cube_threshold,
    };
    if use_cube {
        Ok(homology_table(&build_reduced_complex_capped(d, cfg.max_crossings)?))
    } else {
        Ok(scan::kh_scan(d))
    }
}

pub fn width(t: &KhTable) -> Result<usize> {
    t.width()
}

pub fn jones(t: &KhTable) -> Laurent {
    t.jones()
}

pub fn determinant(t: &KhTable) -> Result<i64> {
    t.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::closure;
    use crate::BraidWord;

    fn cube(d: &PlanarDiagram) -> KhTable {
        kh_reduced_with(d, &EngineConfig::default().with_method(Method::Cube)).unwrap()
    }

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn calibration() {
        assert_eq!(cube(&PlanarDiagram::unknot()), KhTable::from_doubled(1, &[(0, 0, 1)]));
        assert_eq!(cube(&PlanarDiagram::unlink(2)), KhTable::from_doubled(2, &[(-1, 1, 1), (1, -1, 1)]));
        assert_eq!(cube(&closure(&word("2: 1 1"))), KhTable::from_doubled(2, &[(-1, 1, 1), (-1, 5, 1)]));
        assert_eq!(cube(&closure(&word("2: 1 1 1"))), KhTable::from_doubled(1, &[(-2, 2, 1), (-2, 6, 1), (-2, 8, 1)]));
    }

    #[test]
    fn oracle_matches_on_small_words() {
        for w in ["2: 1 1 1", "2: 1 1", "3: 1 -2 1 -2", "3: 2 1 2 1 2 1", "3: 1 1 -2", "4: 1 2 3 -1 2"] {
            let d = closure(&word(w));
            assert_eq!(cube(&d).jones(), kauffman_bracket_oracle(&d).unwrap(), "{w}");
        }
        assert_eq!(kauffman_bracket_oracle(&PlanarDiagram::unknot()).unwrap(), Laurent::one());
    }
}

#[cfg(test)]
mod scan_tests {
    use super::*;
    use crate::diagrams::closure;
    use crate::BraidWord;

    #[test]
    fn scan_agrees_with_cube() {
        let words = [
            "2: 1 1 1", "2: 1 1", "2: 1", "1:", "3:", "3: 1 -2 1 -2", "3: 2 1 2 1 2 1", "3: 1 1 -2", "4: 1 2 3 -1 2",
            "3: 1 2 1 2 1 2 1 2", "3: -1 -1 2 2 -1 2", "4: 1 -3 2 2 -1 3 -2",
        ];
        for w in words {
            let d = closure(&w.parse::<BraidWord>().unwrap());
            for e in 0..d.edge_count() as u32 {
                let d = d.with_basepoint(e).unwrap();
                let c = kh_reduced_with(&d, &EngineConfig::default().with_method(Method::Cube)).unwrap();
                let s = kh_reduced_with(&d, &EngineConfig::default().with_method(Method::Scan)).unwrap();
                assert_eq!(c, s, "{w} bp {e}");
            }
        }
    }
}
