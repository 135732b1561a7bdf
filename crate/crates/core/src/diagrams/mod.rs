//! Braid words, their closures as planar diagrams, and link metadata.

mod braid;
mod builder;
mod pd;

pub use braid::{braid_from_text, BraidWord, Letter};
pub use builder::{DiagramBuilder, Finalized, Start};
pub use pd::{link_metadata, Crossing, EdgeEnds, LinkMetadata, PlanarDiagram};

/// Port slots of a braid crossing, as (bottom-left, bottom-right, top-left,
/// top-right) positions into the builder's counterclockwise port array.
pub(crate) const POSITIVE_SLOTS: [usize; 4] = [3, 0, 2, 1];
pub(crate) const NEGATIVE_SLOTS: [usize; 4] = [0, 1, 3, 2];

/// A braid drawn inside a builder, open at top and bottom.
pub(crate) struct OpenBraid {
    /// Bottom virtual node of each strand position; link slot 0 heads upward.
    pub bottom: Vec<usize>,
    /// Current top end of each position (the node whose next free link
    /// continues upward).
    pub top: Vec<usize>,
}

/// Draws `b` upward into `builder`, starting from the given bottom nodes.
pub(crate) fn draw_braid(builder: &mut DiagramBuilder, b: &BraidWord, bottom: Vec<usize>) -> OpenBraid {
    let mut top = bottom.clone();
    for l in b.letters() {
        let (left, right) = (l.index - 1, l.index);
        let ports = builder.crossing();
        let slots = if l.positive { POSITIVE_SLOTS } else { NEGATIVE_SLOTS };
        let [bl, br, tl, tr] = slots.map(|s| ports[s]);
        builder.connect(top[left], bl);
        builder.connect(top[right], br);
        top[left] = tl;
        top[right] = tr;
    }
    OpenBraid { bottom, top }
}

/// Braid closure. Edges are numbered by traversal starting from the closure
/// arc of strand 1, which is also the basepoint; crossing `i` is letter `i`.
pub fn closure(b: &BraidWord) -> PlanarDiagram {
    let mut builder = DiagramBuilder::new();
    let bottom: Vec<usize> = (0..b.strands()).map(|_| builder.virtual_node()).collect();
    let open = draw_braid(&mut builder, b, bottom);
    for p in 0..b.strands() {
        builder.connect(open.top[p], open.bottom[p]);
    }
    let starts: Vec<Start> = open.bottom.iter().map(|&v| Start::new(v, 0)).collect();
    builder.finalize(&starts, starts[0]).diagram
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn identity_closure_is_unlink() {
        let d = closure(&BraidWord::identity(3).unwrap());
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.metadata().component_count, 3);
    }

    #[test]
    fn trefoil_plus_circle() {
        let d = closure(&word("3: 1 1 1"));
        let m = d.metadata();
        assert_eq!(m.component_count, 2);
        assert_eq!(m.n_plus, 3);
        assert_eq!(m.linking, vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn hopf_link() {
        let m = closure(&word("2: 1 1")).metadata();
        assert_eq!(m.component_count, 2);
        assert_eq!(m.linking, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(m.n_plus, 2);
    }

    #[test]
    fn torus_3_3t_linking() {
        for t in 1..=3 {
            let b = BraidWord::full_twist3().pow(t);
            let m = closure(&b).metadata();
            assert_eq!(m.component_count, 3);
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 0 } else { t as i64 };
                    assert_eq!(m.linking[i][j], expect);
                }
            }
        }
    }

    #[test]
    fn unknot_metadata() {
        let m = PlanarDiagram::unknot().metadata();
        assert_eq!((m.component_count, m.writhe), (1, 0));
    }

    #[test]
    fn basepoint_is_edge_zero_and_positive_signs() {
        let d = closure(&word("3: 1 2 1 2"));
        assert_eq!(d.basepoint(), 0);
        assert!(d.crossings().iter().all(|c| c.sign == 1));
        let d = closure(&word("3: -1 -2"));
        assert!(d.crossings().iter().all(|c| c.sign == -1));
    }

    #[test]
    fn json_roundtrip() {
        let d = closure(&word("3: 1 -2 1 -2"));
        let text = serde_json::to_string(&d).unwrap();
        let back: PlanarDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<PlanarDiagram>(r#"{"crossings":[[0,0,0,0,1]],"edges":1,"basepoint":0}"#).is_err());
    }

    #[test]
    fn mirror_flips_signs_keeps_components() {
        let d = closure(&word("3: 1 -2 1 1"));
        let m = d.mirror();
        assert_eq!(m.writhe(), -d.writhe());
        assert_eq!(m.metadata().component_count, d.metadata().component_count);
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn canonical_from_other_basepoint() {
        let d = closure(&word("3: 1 2 1 2 2"));
        for e in 0..d.edge_count() as u32 {
            let c = d.with_basepoint(e).unwrap().canonical();
            assert_eq!(c.basepoint(), 0);
            assert_eq!(c.metadata(), d.metadata());
        }
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..5).prop_flat_map(|s| {
            proptest::collection::vec((1..s, any::<bool>()), 0..14).prop_map(move |ls| {
                BraidWord::new(s, ls.into_iter().map(|(i, p)| Letter { index: i, positive: p }).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn writhe_is_exponent_sum(b in arb_word()) {
            prop_assert_eq!(closure(&b).metadata().writhe, b.exponent_sum());
        }

        #[test]
        fn components_are_cycles(b in arb_word()) {
            prop_assert_eq!(closure(&b).metadata().component_count, b.cycle_count());
        }

        #[test]
        fn positive_words_have_no_negative_crossings(b in arb_word()) {
            let pos = BraidWord::new(b.strands(), b.letters().iter().map(|l| Letter::pos(l.index)).collect()).unwrap();
            prop_assert_eq!(closure(&pos).n_minus(), 0);
        }

        #[test]
        fn linking_matrix_symmetric(b in arb_word()) {
            let m = closure(&b).metadata();
            for i in 0..m.component_count {
                prop_assert_eq!(m.linking[i][i], 0);
                for j in 0..m.component_count {
                    prop_assert_eq!(m.linking[i][j], m.linking[j][i]);
                }
            }
        }
    }
}
