use std::sync::Arc;

use nichols_engine::groups::{make_epsilon_twisted, FiniteGroup};
use nichols_engine::nichols::NicholsDimension;
use nichols_engine::scalars::Characteristic;
use nichols_engine::skeleton::{classify_tuple, realize_skeleton, ClassifyCaps, Evidence, SkeletonType};
use nichols_engine::ydmod::{cartan_matrix, YDModule, YDTuple};

#[test]
fn gamma_three_is_finite_on_every_route() {
    let m = realize_skeleton(SkeletonType::Gamma(3), Characteristic::ZERO).unwrap();
    let r = classify_tuple(&m, ClassifyCaps::default()).unwrap();
    assert_eq!(r.skeleton_type, SkeletonType::Gamma(3));
    for v in [&r.skeleton_verdict, &r.groupoid_verdict, &r.nichols_verdict] {
        assert_eq!(v.finite, Some(true), "{}", v.detail);
    }
    assert_eq!(r.dimension, Some(NicholsDimension::Finite(1 << 15)));
    assert!(r.triangle_applies);
    assert!(r.inconsistency.is_none());
}

/// Points `s1, s2, s3 z` in an epsilon-twisted group times `C3`, in
/// characteristic 2, with the Cartan matrix of type C3 at the start.
#[test]
fn char_two_c3_shape_has_no_skeleton_and_an_open_groupoid() {
    let c = Characteristic::new(2).unwrap();
    let e = make_epsilon_twisted(3, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]], &[0, 0, 0]).unwrap();
    let g = Arc::new(FiniteGroup::direct_product(&e, &FiniteGroup::cyclic("z", 3).unwrap()).unwrap());
    let pts: Vec<_> = ["s1", "s2", "s3*z"].iter().map(|w| g.parse_word(w).unwrap()).collect();
    let chars: Vec<_> = pts.iter().map(|&x| g.linear_characters(&g.centralizer(x), c).unwrap()).collect();
    let target = vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]];
    let mut seen = 0;
    for c1 in &chars[0] {
        for c2 in &chars[1] {
            for c3 in &chars[2] {
                let mods = vec![
                    YDModule::induce(&g, pts[0], c1).unwrap(),
                    YDModule::induce(&g, pts[1], c2).unwrap(),
                    YDModule::induce(&g, pts[2], c3).unwrap(),
                ];
                let t = YDTuple::new(g.clone(), mods, c).unwrap();
                let Ok(Ok(a)) = cartan_matrix(&t, 8) else { continue };
                if a.rows() != &target {
                    continue;
                }
                let r = classify_tuple(&t, ClassifyCaps::default()).unwrap();
                assert_eq!(r.skeleton_type, SkeletonType::None);
                assert!(r.braid_indecomposable());
                assert_eq!(r.groupoid_verdict.finite, None);
                assert_eq!(r.groupoid_verdict.evidence, Evidence::CapReached);
                // The structure theorem applies, so the missing skeleton decides.
                assert!(r.triangle_applies);
                assert_eq!(r.skeleton_verdict.finite, Some(false));
                assert_eq!(r.finite(), Some(false));
                assert!(r.inconsistency.is_none());
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn decomposable_tuples_are_flagged() {
    let c = Characteristic::ZERO;
    let g = Arc::new(
        FiniteGroup::direct_product(&FiniteGroup::cyclic("x", 2).unwrap(), &FiniteGroup::cyclic("y", 2).unwrap()).unwrap(),
    );
    let (x, y) = (g.parse_word("x").unwrap(), g.parse_word("y").unwrap());
    let chars = g.linear_characters(&g.whole(), c).unwrap();
    // chi(x) = -1 and chi(y) = 1, then its swap: the two points do not braid.
    let find = |vx: bool, vy: bool| {
        chars
            .iter()
            .find(|k| k.value(x).is_one() == vx && k.value(y).is_one() == vy)
            .unwrap()
            .clone()
    };
    let v = YDModule::induce(&g, x, &find(false, true)).unwrap();
    let w = YDModule::induce(&g, y, &find(true, false)).unwrap();
    let t = YDTuple::new(g.clone(), vec![v, w], c).unwrap();
    let r = classify_tuple(&t, ClassifyCaps::default()).unwrap();
    assert_eq!(r.braid_components.len(), 2);
    assert!(r.warnings.iter().any(|w| w.starts_with("decomposable")));
    assert_eq!(r.dimension, Some(NicholsDimension::Finite(4)));
}
