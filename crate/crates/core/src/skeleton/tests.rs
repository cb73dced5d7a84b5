use super::*;

fn ch(p: u32) -> Characteristic {
    Characteristic::new(p).unwrap()
}

#[test]
fn alpha_two_round_trips_over_the_order_eight_group() {
    let m = realize_skeleton(SkeletonType::Alpha(2), ch(0)).unwrap();
    assert_eq!(m.group().order(), 8);
    let sk = extract_skeleton(&m, 8).unwrap();
    assert_eq!(sk.cartan.to_string(), "[2 -1; -1 2]");
    assert_eq!(sk.edges.len(), 1);
    assert!(sk.edges[0].dashed);
    assert_eq!(sk.edges[0].label, None);
}

#[test]
fn rank_three_shapes_round_trip() {
    for (ty, p) in [
        (SkeletonType::Alpha(3), 0),
        (SkeletonType::Gamma(3), 0),
        (SkeletonType::Beta(3), 3),
        (SkeletonType::BetaPrime(3), 0),
        (SkeletonType::BetaDoublePrime(3), 0),
    ] {
        let m = realize_skeleton(ty, ch(p)).unwrap_or_else(|e| panic!("{ty}: {e}"));
        assert!(m.support_generates(), "{ty}");
    }
}

#[test]
fn side_conditions_reject() {
    assert!(matches!(
        realize_skeleton(SkeletonType::Beta(3), ch(0)),
        Err(SkeletonError::NotRealizable { .. })
    ));
    assert!(matches!(
        realize_skeleton(SkeletonType::Gamma(3), ch(2)),
        Err(SkeletonError::NotRealizable { .. })
    ));
}

#[test]
fn beta_double_prime_middle_vertex_carries_minus_p() {
    let m = realize_skeleton(SkeletonType::BetaDoublePrime(3), ch(0)).unwrap();
    let sk = extract_skeleton(&m, 8).unwrap();
    let p = skeleton_parameter(&sk, ch(0)).unwrap();
    assert!(q_number(3, p.neg(ch(0)), ch(0)));
    let two = sk.vertices.iter().find(|v| v.points == 2).unwrap();
    assert_eq!(two.label, VertexLabel::Ratio(p.neg(ch(0))));
}

#[test]
fn beta_prime_labels_are_a_sixth_root() {
    let m = realize_skeleton(SkeletonType::BetaPrime(3), ch(0)).unwrap();
    let sk = extract_skeleton(&m, 8).unwrap();
    let p = skeleton_parameter(&sk, ch(0)).unwrap();
    assert_eq!(p.order(), 6);
    assert_eq!(sk.vertices[0].label, VertexLabel::Scalar(p));
}

#[test]
fn two_commuting_points_give_isolated_vertices() {
    let g = Arc::new(FiniteGroup::direct_product(
        &FiniteGroup::cyclic("x", 2).unwrap(),
        &FiniteGroup::cyclic("y", 2).unwrap(),
    )
    .unwrap());
    let (x, y) = (g.generator("x").unwrap(), g.generator("y").unwrap());
    let whole = g.whole();
    let gens = g.canonical_generators(&whole);
    let vals = |v: &[RootOfUnity]| g.character_from_values(&whole, &gens, v).unwrap();
    let m1 = YDModule::induce(&g, x, &vals(&[RootOfUnity::new(2, 1), RootOfUnity::ONE])).unwrap();
    let m2 = YDModule::induce(&g, y, &vals(&[RootOfUnity::ONE, RootOfUnity::new(2, 1)])).unwrap();
    let m = YDTuple::new(g.clone(), vec![m1, m2], ch(0)).unwrap();
    let sk = extract_skeleton(&m, 8).unwrap();
    assert!(sk.edges.is_empty());
    assert_eq!(sk.vertices[0].label, VertexLabel::Scalar(RootOfUnity::new(2, 1)));
    assert_eq!(classify_skeleton(&sk, ch(0)), SkeletonType::None);
}

#[test]
fn alpha_three_is_reflection_fixed() {
    let m = realize_skeleton(SkeletonType::Alpha(3), ch(0)).unwrap();
    let r = skeleton_reflection_check(&m, 8).unwrap();
    assert!(r.all_ok(), "{r:?}");
}

#[test]
fn type_names_parse_back() {
    for ty in [
        SkeletonType::Alpha(4),
        SkeletonType::BetaPrime(3),
        SkeletonType::BetaDoublePrime(5),
        SkeletonType::Epsilon(7),
        SkeletonType::Phi4,
        SkeletonType::None,
    ] {
        assert_eq!(ty.to_string().parse::<SkeletonType>().unwrap(), ty);
    }
    assert!(!SkeletonType::BetaPrime(4).is_finite());
    assert!(SkeletonType::BetaDoublePrime(3).is_finite());
}
