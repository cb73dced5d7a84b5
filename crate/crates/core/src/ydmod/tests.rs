use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::groups::make_gamma_quotient;

fn ch(p: u32) -> Characteristic {
    Characteristic::new(p).unwrap()
}

fn module(g: &Arc<FiniteGroup>, x: GroupElement, values: &[RootOfUnity]) -> YDModule {
    let cent = g.centralizer(x);
    let gens = g.canonical_generators(&cent);
    let chi = g.character_from_values(&cent, &gens, values).unwrap();
    YDModule::induce(g, x, &chi).unwrap()
}

fn all_modules(g: &Arc<FiniteGroup>, x: GroupElement, c: Characteristic) -> Vec<YDModule> {
    g.linear_characters(&g.centralizer(x), c)
        .unwrap()
        .iter()
        .map(|chi| YDModule::induce(g, x, chi).unwrap())
        .collect()
}

/// Runs the recursion for every predicted power and compares.
fn engine_agrees(v: &YDModule, w: &YDModule, c: Characteristic) -> Result<PairPrediction, String> {
    let pred = predict_pair(v, w, c).map_err(|e| e.to_string())?;
    let mut seq = AdjointSequence::new(v, w, c).unwrap();
    for p in &pred.powers {
        let x = seq.step().unwrap().clone();
        assert_eq!(x.power(), p.m);
        pred.check(&x)?;
    }
    if let Some(a) = pred.cartan_entry {
        let got = cartan_entry_with_top(v, w, DEFAULT_ADJOINT_CAP, c).unwrap().0;
        if got != CartanEntry::Finite(a) {
            return Err(format!("cartan entry {got}, predicted {a}"));
        }
    }
    Ok(pred)
}

fn gamma(n: u32, ma: u32, mb: u32, k: u32) -> Arc<FiniteGroup> {
    let g = make_gamma_quotient(n, ma, mb).unwrap();
    if k == 1 {
        return Arc::new(g);
    }
    let c = FiniteGroup::cyclic("t", k).unwrap();
    Arc::new(FiniteGroup::direct_product(&g, &c).unwrap())
}

#[test]
fn induced_dimensions() {
    let g = gamma(3, 2, 3, 2);
    let t = g.parse_word("t").unwrap();
    assert_eq!(all_modules(&g, t, ch(0))[0].dim(), 1);
    let a = g.parse_word("a").unwrap();
    let m = &all_modules(&g, a, ch(0))[0];
    assert_eq!(m.dim(), 3);
    m.validate().unwrap();
    let b = g.parse_word("b").unwrap();
    let m = &all_modules(&g, b, ch(0))[1];
    assert_eq!(m.dim(), 2);
    assert_eq!(m.support(), g.conjugacy_class(b).to_vec());
    m.validate().unwrap();
}

#[test]
fn braiding_on_a_point() {
    let g = Arc::new(FiniteGroup::cyclic("x", 6).unwrap());
    let x = g.parse_word("x").unwrap();
    let q = RootOfUnity::new(6, 1);
    let v = module(&g, x, &[q]);
    assert_eq!(braiding(&v, &v).map, vec![(0, q)]);
    assert!(!squared_braiding_trivial(&v, &v));
}

#[test]
fn yang_baxter_on_induced_modules() {
    let g = gamma(3, 2, 3, 2);
    for word in ["a", "b", "t", "a*t", "b*t"] {
        let x = g.parse_word(word).unwrap();
        for m in all_modules(&g, x, ch(0)) {
            assert!(yang_baxter_holds(&m), "{word}");
        }
    }
}

#[test]
fn zeroth_power_is_w() {
    let g = gamma(3, 2, 3, 2);
    let v = all_modules(&g, g.parse_word("b").unwrap(), ch(0)).remove(1);
    let w = all_modules(&g, g.parse_word("t").unwrap(), ch(0)).remove(1);
    let x = adjoint_power(&v, &w, 0, ch(0)).unwrap();
    assert_eq!(x.dim(), 1);
    assert_eq!(x.to_simple().unwrap(), w);
}

#[test]
fn diagonal_pairs_follow_rosso() {
    let c6 = FiniteGroup::cyclic("x", 6).unwrap();
    let g = Arc::new(FiniteGroup::direct_product(&c6, &FiniteGroup::cyclic("y", 6).unwrap()).unwrap());
    let (x, y) = (g.parse_word("x").unwrap(), g.parse_word("y").unwrap());
    for p in [0, 5] {
        let vs = all_modules(&g, x, ch(p));
        let ws = all_modules(&g, y, ch(p));
        for (k, v) in vs.iter().enumerate().step_by(5) {
            for w in ws.iter().skip(k % 3).step_by(4) {
                let pred = engine_agrees(v, w, ch(p)).unwrap();
                assert_eq!(pred.setting, PairSetting::Diagonal);
            }
        }
    }
}

#[test]
fn generalized_rosso_on_a_class() {
    let g = gamma(3, 2, 3, 4);
    let (t, a) = (g.parse_word("t").unwrap(), g.parse_word("a").unwrap());
    for v in all_modules(&g, t, ch(0)).iter().step_by(3) {
        for w in all_modules(&g, a, ch(0)) {
            let pred = engine_agrees(v, &w, ch(0)).unwrap();
            assert_eq!(pred.setting, PairSetting::OnePlusThree);
        }
    }
}

#[test]
fn two_plus_one_pairs_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, k, p) in [(3, 2, 0), (4, 2, 0), (6, 2, 0), (3, 4, 0), (3, 2, 5)] {
        let g = gamma(n, 2, n, k);
        let (b, t) = (g.parse_word("b").unwrap(), g.parse_word("t").unwrap());
        let vs = all_modules(&g, b, ch(p));
        let ws = all_modules(&g, t, ch(p));
        for _ in 0..12 {
            let v = vs.choose(&mut rng).unwrap();
            let w = ws.choose(&mut rng).unwrap();
            let pred = engine_agrees(v, w, ch(p)).unwrap_or_else(|e| panic!("n={n} k={k} p={p}: {e}"));
            assert_eq!(pred.setting, PairSetting::TwoPlusOne);
        }
    }
}

#[test]
fn two_plus_two_pairs_match_closed_forms() {
    let g = gamma(2, 4, 4, 1);
    let (a, b) = (g.parse_word("a").unwrap(), g.parse_word("b").unwrap());
    for p in [0, 3] {
        let vs = all_modules(&g, a, ch(p));
        let ws = all_modules(&g, b, ch(p));
        for v in vs.iter().step_by(3) {
            for w in ws.iter().step_by(5) {
                let pred = engine_agrees(v, w, ch(p)).unwrap();
                assert_eq!(pred.setting, PairSetting::TwoPlusTwo);
            }
        }
    }
}

#[test]
fn dual_is_an_involution() {
    let g = gamma(3, 2, 3, 2);
    for word in ["a", "b*t"] {
        for m in all_modules(&g, g.parse_word(word).unwrap(), ch(0)) {
            let dd = dual(&dual(&m).unwrap()).unwrap();
            assert_eq!(dd.fingerprint().unwrap(), m.fingerprint().unwrap());
        }
    }
}

#[test]
fn supports_commuting_with_inverse_scalars_braid_trivially() {
    let c6 = FiniteGroup::cyclic("x", 6).unwrap();
    let g = Arc::new(FiniteGroup::direct_product(&c6, &FiniteGroup::cyclic("y", 6).unwrap()).unwrap());
    let (x, y) = (g.parse_word("x").unwrap(), g.parse_word("y").unwrap());
    let v = module(&g, x, &[RootOfUnity::new(6, 1), RootOfUnity::new(6, 2)]);
    let w = module(&g, y, &[RootOfUnity::new(6, 4), RootOfUnity::new(6, 3)]);
    assert!(squared_braiding_trivial(&v, &w));
    assert_eq!(classify_pair(&v, &w, ch(0)).unwrap(), PairClass::None);
    let t = YDTuple::new(g.clone(), vec![v, w], ch(0)).unwrap();
    assert!(!is_braid_indecomposable(&t));
    assert_eq!(cartan_entry(&t, 0, 1, 4).unwrap(), CartanEntry::Finite(0));
}

#[test]
fn reflections_square_to_identity() {
    let g = gamma(3, 2, 6, 2);
    let (b, t) = (g.parse_word("b").unwrap(), g.parse_word("t").unwrap());
    let v = all_modules(&g, b, ch(0)).into_iter().find(|m| m.local_character(b).unwrap().value(b) == RootOfUnity::minus_one(ch(0)));
    let v = v.unwrap();
    for w in all_modules(&g, t, ch(0)) {
        let tup = YDTuple::new(g.clone(), vec![v.clone(), w], ch(0)).unwrap();
        for i in 0..2 {
            let Ok(r) = reflect(&tup, i, 8) else { continue };
            let rr = reflect(&r, i, 8).unwrap();
            assert_eq!(iso_fingerprint(&rr).unwrap(), iso_fingerprint(&tup).unwrap());
        }
    }
}

#[test]
fn restriction_keeps_simple_pairs() {
    let g = gamma(3, 2, 3, 2);
    let (a, b) = (g.parse_word("a").unwrap(), g.parse_word("b").unwrap());
    let v = all_modules(&g, a, ch(0)).remove(0);
    let w = all_modules(&g, b, ch(0)).remove(0);
    let tup = YDTuple::new(g.clone(), vec![v, w], ch(0)).unwrap();
    let h = g.subgroup_generated(&[a, b]);
    let r = restrict(&tup, &h).unwrap();
    assert_eq!(r.group().order(), h.order());
    assert_eq!(r.module(0).dim(), 3);
}
