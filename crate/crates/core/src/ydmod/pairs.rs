//! Classes of pairs with small supports and the closed-form descriptions of
//! their adjoint powers.

use std::fmt;

use super::{squared_braiding_trivial, AdjointPower, YDModule, YdError, DEFAULT_ADJOINT_CAP};
use crate::groups::{FiniteGroup, GroupElement, LinearCharacter};
use crate::scalars::{q_factorial_nonzero, q_number, Characteristic, RootOfUnity};

/// Class of a pair `(V, W)`; `Wp1(n)` records the order `n` of `tau(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairClass {
    Wp22_0,
    Wp22_1,
    Wp(u8),
    Wp1(u32),
    None,
}

impl PairClass {
    /// Row index for the support-(2,1) classes.
    pub fn index(self) -> Option<u8> {
        match self {
            PairClass::Wp(i) => Some(i),
            PairClass::Wp1(_) => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairClass::Wp22_0 => write!(f, "wp22_0"),
            PairClass::Wp22_1 => write!(f, "wp22_1"),
            PairClass::Wp(i) => write!(f, "wp{i}"),
            PairClass::Wp1(n) => write!(f, "wp1({n})"),
            PairClass::None => write!(f, "none"),
        }
    }
}

/// Scalar data of a pair with `|supp V| = 2`: `s` the smaller element of
/// `supp V`, `eps` with `supp V = {s, eps s}`.
struct TwoOne<'a> {
    g: &'a FiniteGroup,
    s: GroupElement,
    t: GroupElement,
    eps: GroupElement,
    sigma: LinearCharacter,
    tau: LinearCharacter,
}

impl<'a> TwoOne<'a> {
    fn new(v: &'a YDModule, w: &'a YDModule) -> Result<Option<Self>, YdError> {
        let g = &**v.group();
        let sv = v.support();
        let sw = w.support();
        if sv.len() != 2 || sw.len() != 1 || v.dim() != 2 || w.dim() != 1 {
            return Ok(None);
        }
        let (s, t) = (sv[0], sw[0]);
        let eps = g.mul(sv[1], g.inv(s));
        let sigma = v.local_character(s)?;
        let tau = w.local_character(t)?;
        if !sigma.domain().contains(eps) {
            return Ok(None);
        }
        Ok(Some(TwoOne { g, s, t, eps, sigma, tau }))
    }

    fn sg(&self, word: &[GroupElement]) -> RootOfUnity {
        self.sigma.value(self.g.product(word.iter().copied()))
    }

    fn tg(&self, word: &[GroupElement]) -> RootOfUnity {
        self.tau.value(self.g.product(word.iter().copied()))
    }
}

/// Evaluates the defining conditions of the pair classes literally.
pub fn classify_pair(v: &YDModule, w: &YDModule, ch: Characteristic) -> Result<PairClass, YdError> {
    let g = &**v.group();
    if v.support().len() == 2 && w.support().len() == 2 {
        if squared_braiding_trivial(v, w) {
            return Ok(PairClass::Wp22_0);
        }
        let s = v.support()[0];
        let sigma = v.local_character(s)?;
        let minus = RootOfUnity::minus_one(ch);
        for t in w.support() {
            if g.commute(s, t) {
                continue;
            }
            let tau = w.local_character(t)?;
            // st = eps ts
            let eps = g.product([s, t, g.inv(s), g.inv(t)]);
            let a = sigma.try_value(g.product([eps, t, t]));
            let b = tau.try_value(g.product([eps, s, s]));
            if let (Some(a), Some(b)) = (a, b) {
                if a.mul(b).is_one() && sigma.value(s) == minus && tau.value(t) == minus {
                    return Ok(PairClass::Wp22_1);
                }
            }
        }
        return Ok(PairClass::None);
    }
    let Some(d) = TwoOne::new(v, w)? else {
        return Ok(PairClass::None);
    };
    let (s, t, e) = (d.s, d.t, d.eps);
    let minus = RootOfUnity::minus_one(ch);
    let st_ts = d.sg(&[t]).mul(d.tg(&[s]));
    let e2 = d.sg(&[e, e]).is_one();
    let sig_s = d.sg(&[s]);
    let tau_t = d.tg(&[t]);
    let st_tau_s = d.sg(&[s, t]).mul(d.tg(&[s])).is_one();
    let t_tau_st = d.sg(&[t]).mul(d.tg(&[s, t])).is_one();
    let three = |q: RootOfUnity| q_number(3, q, ch);
    let e2t2 = d.sg(&[e, e, t, t]).mul(d.tg(&[s, s])).is_one();
    let e2s2 = d.sg(&[e, e, s, s]).is_one();
    let rows: [(u8, bool); 9] = [
        (0, st_ts.is_one()),
        (1, e2 && sig_s == minus && t_tau_st && !tau_t.is_one()),
        (2, e2 && sig_s == minus && tau_t == minus && three(st_ts) && !st_ts.is_one()),
        (3, e2 && sig_s == minus && three(st_ts) && tau_t == st_ts.neg(ch) && !st_ts.is_one()),
        (4, e2 && three(sig_s) && st_tau_s && tau_t == minus && !sig_s.is_one()),
        (5, !e2 && sig_s == minus && e2t2 && t_tau_st),
        (6, !e2 && sig_s == minus && e2t2 && tau_t == minus),
        (7, !e2 && e2s2 && st_tau_s && t_tau_st),
        (8, !e2 && e2s2 && st_tau_s && tau_t == minus),
    ];
    for (i, holds) in rows {
        if holds {
            return Ok(if i == 1 { PairClass::Wp1(tau_t.order()) } else { PairClass::Wp(i) });
        }
    }
    Ok(PairClass::None)
}

/// Which closed-form description applies to `(ad V)^m(W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSetting {
    /// Both supports central, one-dimensional modules.
    Diagonal,
    /// Support of `V` central, `W` arbitrary.
    GenRosso,
    /// Two conjugacy classes of size two generating a quotient of the
    /// two-generator group with central commutator square.
    TwoPlusTwo,
    /// `|supp V| = 2`, `W` central.
    TwoPlusOne,
    /// `V` central, `|supp W| = 3`.
    OnePlusThree,
    /// `|supp V| = 2`, `|supp W| = 3`.
    TwoPlusThree,
}

/// Predicted shape of a single `X_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicted {
    Zero,
    /// Nonzero, not absolutely simple.
    NotSimple,
    /// Nonzero; the closed forms say nothing more.
    NonZero,
    /// `M(degree, chi)` with `chi(h) = value` for each listed `(h, value)`.
    Simple {
        degree: GroupElement,
        dim: usize,
        values: Vec<(GroupElement, RootOfUnity)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedAdjoint {
    pub m: u32,
    pub shape: Predicted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPrediction {
    pub setting: PairSetting,
    pub powers: Vec<PredictedAdjoint>,
    /// `a_12` when the sequence is known to vanish.
    pub cartan_entry: Option<i64>,
    /// For the 1+3 and 2+3 settings: whether `(a_12, a_21) = (-1, -2)`.
    pub b2_criterion: Option<bool>,
}

impl PairPrediction {
    fn new(setting: PairSetting) -> Self {
        PairPrediction {
            setting,
            powers: Vec::new(),
            cartan_entry: None,
            b2_criterion: None,
        }
    }

    fn push(&mut self, shape: Predicted) {
        let m = self.powers.len() as u32 + 1;
        if shape == Predicted::Zero && self.cartan_entry.is_none() {
            self.cartan_entry = Some(1 - m as i64);
        }
        self.powers.push(PredictedAdjoint { m, shape });
    }

    pub fn power(&self, m: u32) -> Option<&Predicted> {
        self.powers.iter().find(|p| p.m == m).map(|p| &p.shape)
    }

    /// Compares one predicted power with an engine result; returns the
    /// first disagreement.
    pub fn check(&self, x: &AdjointPower) -> Result<(), String> {
        let Some(pred) = self.power(x.power()) else {
            return Ok(());
        };
        match pred {
            Predicted::Zero if x.is_zero() => Ok(()),
            Predicted::Zero => Err(format!("X_{} has dimension {}, expected 0", x.power(), x.dim())),
            Predicted::NonZero | Predicted::NotSimple if x.is_zero() => {
                Err(format!("X_{} vanishes, expected nonzero", x.power()))
            }
            Predicted::NonZero => Ok(()),
            Predicted::NotSimple => match x.to_simple() {
                Ok(_) => Err(format!("X_{} is simple, expected not simple", x.power())),
                Err(_) => Ok(()),
            },
            Predicted::Simple { degree, dim, values } => {
                let m = x.to_simple().map_err(|e| format!("X_{}: {e}", x.power()))?;
                if m.dim() != *dim {
                    return Err(format!("X_{} has dimension {}, expected {dim}", x.power(), m.dim()));
                }
                if !m.degrees().contains(degree) {
                    return Err(format!("X_{} has no component of the predicted degree", x.power()));
                }
                let chi = m.local_character(*degree).map_err(|e| e.to_string())?;
                for &(h, q) in values {
                    match chi.try_value(h) {
                        Some(r) if r == q => {}
                        other => {
                            return Err(format!(
                                "X_{}: character at {h} is {:?}, expected {q}",
                                x.power(),
                                other.map(|r| r.to_string())
                            ))
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn class_size(g: &FiniteGroup, x: GroupElement) -> usize {
    g.conjugacy_class(x).len()
}

fn central_single(m: &YDModule) -> Option<GroupElement> {
    let s = m.support();
    (s.len() == 1 && m.dim() == 1 && m.group().is_central(s[0])).then(|| s[0])
}

/// Closed-form adjoint powers `X_1, X_2, ...` of `(V, W)`, computed from
/// scalar data alone.
pub fn predict_pair(v: &YDModule, w: &YDModule, ch: Characteristic) -> Result<PairPrediction, YdError> {
    let g = &**v.group();
    let limit = DEFAULT_ADJOINT_CAP + 1;
    if let Some(r) = central_single(v) {
        let rho = v.local_character(r)?;
        let (s, sigma) = w.simple_data()?;
        let setting = if central_single(w).is_some() {
            PairSetting::Diagonal
        } else if class_size(g, s) == 3 {
            PairSetting::OnePlusThree
        } else {
            PairSetting::GenRosso
        };
        let mut out = PairPrediction::new(setting);
        let q = rho.value(r);
        let sig_r = sigma.value(r);
        let cent = g.centralizer(s);
        let gens = g.canonical_generators(&cent);
        for m in 1..=limit {
            // gamma_m = (m)_q (1 - rho(r^(m-1) s) sigma(r))
            let gamma_zero = q_number(m, q, ch)
                || rho.value(g.mul(g.pow(r, m as i64 - 1), s)).mul(sig_r).is_one();
            if gamma_zero {
                out.push(Predicted::Zero);
                break;
            }
            let values = gens.iter().map(|&h| (h, rho.value(h).pow(m as i64).mul(sigma.value(h)))).collect();
            out.push(Predicted::Simple {
                degree: g.mul(g.pow(r, m as i64), s),
                dim: w.dim(),
                values,
            });
        }
        if setting == PairSetting::Diagonal {
            debug_assert_eq!(out.cartan_entry, rosso_entry(q, rho.value(s), sig_r, ch, limit));
        }
        if setting == PairSetting::OnePlusThree {
            let minus = RootOfUnity::minus_one(ch);
            let (sg, tau) = (&rho, &sigma);
            let (s, t) = (r, s);
            let a = sg.value(t).mul(tau.value(s)).neg(ch);
            out.b2_criterion = Some(
                tau.value(t) == minus
                    && q_number(3, a, ch)
                    && (sg.value(s) == minus || sg.value(g.mul(s, t)).mul(tau.value(s)).is_one()),
            );
        }
        return Ok(out);
    }
    let sv = v.support();
    let sw = w.support();
    if sv.len() == 2 && sw.len() == 1 {
        if let Some(d) = TwoOne::new(v, w)? {
            return Ok(predict_two_one(&d, v, ch));
        }
    }
    if sv.len() == 2 && sw.len() == 2 && v.dim() == 2 && w.dim() == 2 {
        let gg = sv[0];
        if let Some(h) = sw.iter().copied().find(|&h| !g.commute(gg, h)) {
            return predict_two_two(g, v, w, gg, h, ch);
        }
    }
    if sv.len() == 2 && sw.len() == 3 && v.dim() == 2 && w.dim() == 3 {
        let s = sv[0];
        if let Some(t) = sw.iter().copied().find(|&t| !g.commute(s, t)) {
            return predict_two_three(g, v, w, s, t, ch);
        }
    }
    Err(YdError::Unsupported("pair matches no closed-form setting".into()))
}

/// `a_12` from the diagonal vanishing criterion
/// `(m)!_q prod_{i<m} (q^i q12 q21 - 1) != 0`.
pub fn rosso_entry(q: RootOfUnity, rho_s: RootOfUnity, sigma_r: RootOfUnity, ch: Characteristic, limit: u32) -> Option<i64> {
    let c = rho_s.mul(sigma_r);
    (1..=limit)
        .find(|&m| !(q_factorial_nonzero(m, q, ch) && (0..m).all(|i| !q.pow(i as i64).mul(c).is_one())))
        .map(|m| 1 - m as i64)
}

fn predict_two_one(d: &TwoOne<'_>, v: &YDModule, ch: Characteristic) -> PairPrediction {
    let g = d.g;
    let (s, t, e) = (d.s, d.t, d.eps);
    let mut out = PairPrediction::new(PairSetting::TwoPlusOne);
    let minus = RootOfUnity::minus_one(ch);
    let cent_s = d.sigma.domain().clone();
    let gens_s = g.canonical_generators(&cent_s);
    let r = (0..g.order()).find(|&x| !cent_s.contains(x)).expect("s is not central");
    let ri = g.inv(r);
    let conj_r = |x: GroupElement| g.product([ri, x, r]);

    let st_ts = d.sg(&[t]).mul(d.tg(&[s]));
    if st_ts.is_one() {
        out.push(Predicted::Zero);
        return out;
    }
    out.push(Predicted::Simple {
        degree: g.mul(s, t),
        dim: v.dim(),
        values: gens_s.iter().map(|&h| (h, d.sigma.value(h).mul(d.tau.value(h)))).collect(),
    });

    let sig_s = d.sg(&[s]);
    let e2 = d.sg(&[e, e]).is_one();
    let lambda = if e2 && (sig_s == minus || d.sg(&[s, t]).mul(d.tg(&[s])).is_one()) {
        Some(d.sg(&[e]).neg(ch))
    } else if sig_s == minus && d.sg(&[e, e, t, t]).mul(d.tg(&[s, s])).is_one() {
        Some(d.sg(&[e, t]).mul(d.tg(&[s])))
    } else if d.sg(&[s, t]).mul(d.tg(&[s])).is_one() && d.sg(&[e, e, s, s]).is_one() {
        Some(d.sg(&[e, s]))
    } else {
        None
    };
    let Some(lambda) = lambda else {
        out.push(Predicted::NotSimple);
        return out;
    };
    let deg2 = g.product([e, s, s, t]);
    let mut values2: Vec<(GroupElement, RootOfUnity)> = gens_s
        .iter()
        .map(|&h| (h, d.sigma.value(g.mul(h, conj_r(h))).mul(d.tau.value(h))))
        .collect();
    values2.push((r, lambda.mul(d.sg(&[r, r])).mul(d.tau.value(r))));
    out.push(Predicted::Simple {
        degree: deg2,
        dim: class_size(g, deg2),
        values: values2,
    });

    if sig_s == minus || !e2 {
        out.push(Predicted::Zero);
        return out;
    }
    let deg3 = g.product([e, s, s, s, t]);
    out.push(Predicted::Simple {
        degree: deg3,
        dim: class_size(g, deg3),
        values: gens_s
            .iter()
            .map(|&h| (h, d.sigma.value(g.product([h, h, conj_r(h)])).mul(d.tau.value(h))))
            .collect(),
    });
    if !q_number(3, sig_s, ch) {
        out.push(Predicted::NotSimple);
        return out;
    }
    let deg4 = g.product([e, e, s, s, s, s, t]);
    let mut values4: Vec<(GroupElement, RootOfUnity)> = gens_s
        .iter()
        .map(|&h| {
            let c = conj_r(h);
            (h, d.sigma.value(g.product([h, h, c, c])).mul(d.tau.value(h)))
        })
        .collect();
    values4.push((r, d.sg(&[r, r, r, r]).mul(d.tau.value(r))));
    out.push(Predicted::Simple {
        degree: deg4,
        dim: class_size(g, deg4),
        values: values4,
    });
    out.push(Predicted::Zero);
    out
}

fn predict_two_two(
    g: &FiniteGroup,
    v: &YDModule,
    w: &YDModule,
    gg: GroupElement,
    h: GroupElement,
    ch: Characteristic,
) -> Result<PairPrediction, YdError> {
    let rho = v.local_character(gg)?;
    let sigma = w.local_character(h)?;
    let eps = g.product([gg, h, g.inv(gg), g.inv(h)]);
    let minus = RootOfUnity::minus_one(ch);
    let mut out = PairPrediction::new(PairSetting::TwoPlusTwo);
    let common = g.centralizer_of_set(&[gg, h]);
    let zs = g.canonical_generators(&common);
    let simple_x1 = match (rho.try_value(g.product([eps, h, h])), sigma.try_value(g.product([eps, gg, gg]))) {
        (Some(a), Some(b)) => a.mul(b).is_one(),
        _ => false,
    };
    if !simple_x1 {
        out.push(Predicted::NotSimple);
        return Ok(out);
    }
    let rg = rho.value(gg);
    let sh = sigma.value(h);
    let deg = |n: u32| g.mul(g.pow(gg, n as i64), h);
    let simple = |n: u32, lead: RootOfUnity| {
        let mut values = vec![(deg(n), lead)];
        values.extend(zs.iter().map(|&z| (z, rho.value(z).pow(n as i64).mul(sigma.value(z)))));
        Predicted::Simple {
            degree: deg(n),
            dim: class_size(g, deg(n)),
            values,
        }
    };
    out.push(simple(1, rg.mul(sh).neg(ch)));
    if rg == minus {
        out.push(Predicted::Zero);
        return Ok(out);
    }
    if !(rg.is_one() && ch.p() != 2) {
        out.push(Predicted::NotSimple);
        return Ok(out);
    }
    out.push(simple(2, sh));
    for n in 3..=DEFAULT_ADJOINT_CAP + 1 {
        if ch.p() > 0 && ch.p() <= n {
            out.push(Predicted::Zero);
            break;
        }
        let lead = if n % 2 == 0 { sh } else { sh.neg(ch) };
        out.push(simple(n, lead));
    }
    Ok(out)
}

fn predict_two_three(
    g: &FiniteGroup,
    v: &YDModule,
    w: &YDModule,
    s: GroupElement,
    t: GroupElement,
    ch: Characteristic,
) -> Result<PairPrediction, YdError> {
    let sigma = v.local_character(s)?;
    let tau = w.local_character(t)?;
    let sv = v.support();
    let eps = g.mul(sv[1], g.inv(s));
    let minus = RootOfUnity::minus_one(ch);
    let mut out = PairPrediction::new(PairSetting::TwoPlusThree);
    let a = sigma.try_value(g.product([eps, t, t]));
    let b = tau.try_value(g.product([eps, s, s]));
    let crit = matches!((a, b), (Some(a), Some(b)) if a.mul(b).is_one())
        && sigma.value(s) == minus
        && tau.value(t) == minus;
    out.b2_criterion = Some(crit);
    if crit && q_number(3, sigma.value(eps), ch) {
        let deg = g.product([g.inv(eps), s, t]);
        let common = g.centralizer_of_set(&[s, t]);
        let mut values = vec![(t, tau.value(g.mul(eps, g.inv(s))).mul(sigma.value(eps)))];
        values.extend(
            g.canonical_generators(&common)
                .into_iter()
                .map(|z| (z, sigma.value(z).mul(tau.value(z)))),
        );
        out.push(Predicted::Simple {
            degree: deg,
            dim: class_size(g, deg),
            values,
        });
        out.push(Predicted::Zero);
    }
    Ok(out)
}
