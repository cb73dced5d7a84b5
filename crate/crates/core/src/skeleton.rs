//! Decorated Dynkin diagrams of tuples and the finite-type catalog.
//!
//! A skeleton records, for each module, the size of its support and a scalar
//! label, and for each pair of modules the Cartan entries as a multi-edge
//! together with whether the supports commute. Skeletons are matched against
//! a catalog of named shapes whose labels may involve one free scalar `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{CartanError, GeneralizedCartanMatrix};
use crate::groups::{FiniteGroup, GroupElement, GroupError, GroupSpec, LinearCharacter};
use crate::scalars::{q_number, Characteristic, RootOfUnity};
use crate::ydmod::{cartan_matrix, reflect, YDModule, YDTuple, YdError, DEFAULT_ADJOINT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error(transparent)]
    Yd(#[from] YdError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("no skeleton: {0}")]
    NoSkeleton(String),
    #[error("Cartan entry ({0},{1}) exceeds the adjoint cap")]
    ExceedsCap(usize, usize),
    #[error("unknown skeleton type {0}")]
    UnknownType(String),
    #[error("{ty} is not realizable: {reason}")]
    NotRealizable { ty: SkeletonType, reason: String },
    #[error("character search exhausted for {ty}; unsatisfied: {condition}")]
    SearchExhausted { ty: SkeletonType, condition: String },
    #[error("realization of {expected} has skeleton of type {found}")]
    RoundTrip { expected: SkeletonType, found: SkeletonType },
}

/// Label of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexLabel {
    /// `sigma(s)` of a one-point vertex.
    Scalar(RootOfUnity),
    /// The constrained ratio `(p)` of a two-point vertex.
    Ratio(RootOfUnity),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonVertex {
    pub points: usize,
    pub label: VertexLabel,
    /// `sigma(s' s^-1)` for a two-point support `{s, s'}` when it is defined
    /// and independent of the base point. Shown as a label only when the
    /// matched catalog entry constrains it.
    pub ratio: Option<RootOfUnity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub i: usize,
    pub j: usize,
    pub multiplicity: i64,
    pub toward: Option<usize>,
    pub dashed: bool,
    pub label: Option<RootOfUnity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub vertices: Vec<SkeletonVertex>,
    /// Edges with `i < j`, sorted.
    pub edges: Vec<SkeletonEdge>,
    pub cartan: GeneralizedCartanMatrix,
}

impl Skeleton {
    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&SkeletonEdge> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.iter().find(|e| e.i == a && e.j == b)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for e in &self.edges {
                let y = if e.i == x {
                    e.j
                } else if e.j == x {
                    e.i
                } else {
                    continue;
                };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "skeleton rank {}", self.rank())?;
        for (i, v) in self.vertices.iter().enumerate() {
            let pts = if v.points == 1 { "point" } else { "points" };
            write!(f, "  vertex {}: {} {}", i + 1, v.points, pts)?;
            match v.label {
                VertexLabel::Scalar(q) => writeln!(f, ", label {q}")?,
                VertexLabel::Ratio(q) => writeln!(f, ", label ({q})")?,
                VertexLabel::None => writeln!(f)?,
            }
        }
        for e in &self.edges {
            let style = if e.dashed { "dashed" } else { "continuous" };
            write!(f, "  edge {}-{}: {} x {}", e.i + 1, e.j + 1, e.multiplicity, style)?;
            if let Some(t) = e.toward {
                write!(f, ", toward {}", t + 1)?;
            }
            if let Some(q) = e.label {
                write!(f, ", label {q}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Named skeleton shapes with their rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkeletonType {
    Alpha(usize),
    Beta(usize),
    BetaPrime(usize),
    BetaDoublePrime(usize),
    Gamma(usize),
    Delta(usize),
    Epsilon(usize),
    Phi4,
    None,
}

impl SkeletonType {
    /// Builds a type from a family name and rank, checking the rank range.
    pub fn from_name(name: &str, theta: usize) -> Result<Self, SkeletonError> {
        let bad = || SkeletonError::UnknownType(format!("{name}_{theta}"));
        let ty = match name {
            "alpha" | "a" if theta >= 2 => SkeletonType::Alpha(theta),
            "beta" | "b" if theta >= 3 => SkeletonType::Beta(theta),
            "beta'" | "beta1" | "betaprime" if theta >= 3 => SkeletonType::BetaPrime(theta),
            "beta''" | "beta2" | "betadoubleprime" if theta >= 3 => SkeletonType::BetaDoublePrime(theta),
            "gamma" | "c" if theta >= 3 => SkeletonType::Gamma(theta),
            "delta" | "d" if theta >= 4 => SkeletonType::Delta(theta),
            "epsilon" | "e" if (6..=8).contains(&theta) => SkeletonType::Epsilon(theta),
            "phi" | "f" if theta == 4 => SkeletonType::Phi4,
            _ => return Err(bad()),
        };
        Ok(ty)
    }

    pub fn theta(self) -> usize {
        match self {
            SkeletonType::Alpha(n)
            | SkeletonType::Beta(n)
            | SkeletonType::BetaPrime(n)
            | SkeletonType::BetaDoublePrime(n)
            | SkeletonType::Gamma(n)
            | SkeletonType::Delta(n)
            | SkeletonType::Epsilon(n) => n,
            SkeletonType::Phi4 => 4,
            SkeletonType::None => 0,
        }
    }

    /// Membership in the finite-type catalog. The primed beta shapes are of
    /// finite type only in rank 3.
    pub fn is_finite(self) -> bool {
        match self {
            SkeletonType::BetaPrime(n) | SkeletonType::BetaDoublePrime(n) => n == 3,
            SkeletonType::None => false,
            _ => true,
        }
    }

    pub fn side_condition(self) -> &'static str {
        match self {
            SkeletonType::Beta(_) => "char 3",
            SkeletonType::BetaPrime(_) | SkeletonType::BetaDoublePrime(_) => "(3)_{-p} = 0",
            SkeletonType::Gamma(_) | SkeletonType::Phi4 => "char != 2",
            _ => "none",
        }
    }

    /// Every catalog shape with `theta` vertices.
    pub fn candidates(theta: usize) -> Vec<SkeletonType> {
        let mut out = Vec::new();
        if theta >= 2 {
            out.push(SkeletonType::Alpha(theta));
        }
        if theta >= 3 {
            out.extend([
                SkeletonType::Beta(theta),
                SkeletonType::BetaPrime(theta),
                SkeletonType::BetaDoublePrime(theta),
                SkeletonType::Gamma(theta),
            ]);
        }
        if theta >= 4 {
            out.push(SkeletonType::Delta(theta));
        }
        if (6..=8).contains(&theta) {
            out.push(SkeletonType::Epsilon(theta));
        }
        if theta == 4 {
            out.push(SkeletonType::Phi4);
        }
        out
    }
}

impl fmt::Display for SkeletonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.theta();
        match self {
            SkeletonType::Alpha(_) => write!(f, "alpha_{n}"),
            SkeletonType::Beta(_) => write!(f, "beta_{n}"),
            SkeletonType::BetaPrime(_) => write!(f, "beta'_{n}"),
            SkeletonType::BetaDoublePrime(_) => write!(f, "beta''_{n}"),
            SkeletonType::Gamma(_) => write!(f, "gamma_{n}"),
            SkeletonType::Delta(_) => write!(f, "delta_{n}"),
            SkeletonType::Epsilon(_) => write!(f, "epsilon_{n}"),
            SkeletonType::Phi4 => write!(f, "phi_4"),
            SkeletonType::None => write!(f, "none"),
        }
    }
}

impl FromStr for SkeletonType {
    type Err = SkeletonError;

    /// Parses `alpha_3`, `beta'_3`, `phi_4`, `none`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(SkeletonType::None);
        }
        let (name, n) = s.rsplit_once('_').ok_or_else(|| SkeletonError::UnknownType(s.to_string()))?;
        let n: usize = n.parse().map_err(|_| SkeletonError::UnknownType(s.to_string()))?;
        SkeletonType::from_name(name, n)
    }
}

// ---------------------------------------------------------------------------
// Extraction

/// The skeleton of `m`, with `(p)` labels attached where the matched catalog
/// entry constrains them.
pub fn extract_skeleton(m: &YDTuple, cap: u32) -> Result<Skeleton, SkeletonError> {
    let theta = m.rank();
    if theta < 2 {
        return Err(SkeletonError::NoSkeleton("skeletons need at least two modules".into()));
    }
    let g = m.group();
    let data = m
        .modules()
        .iter()
        .map(|v| v.simple_data())
        .collect::<Result<Vec<_>, _>>()?;
    let a = cartan_matrix(m, cap)?.map_err(|(i, j)| SkeletonError::ExceedsCap(i, j))?;
    for i in 0..theta {
        for j in i + 1..theta {
            let (aij, aji) = (a.entry(i, j), a.entry(j, i));
            if aij != 0 && aij != -1 && aji != -1 {
                return Err(SkeletonError::NoSkeleton(format!(
                    "a_{}{} = {aij} and a_{}{} = {aji}",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    let supports: Vec<Vec<GroupElement>> = m.modules().iter().map(|v| v.support()).collect();
    let vertices = (0..theta)
        .map(|i| {
            let (s, sigma) = &data[i];
            let points = supports[i].len();
            let label = if points == 1 {
                VertexLabel::Scalar(sigma.value(*s))
            } else {
                VertexLabel::None
            };
            let ratio = if points == 2 { two_point_ratio(m.module(i)) } else { None };
            SkeletonVertex { points, label, ratio }
        })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    for i in 0..theta {
        for j in i + 1..theta {
            let (aij, aji) = (a.entry(i, j), a.entry(j, i));
            if aij == 0 {
                continue;
            }
            let toward = if aij == -1 && aji < -1 {
                Some(j)
            } else if aji == -1 && aij < -1 {
                Some(i)
            } else {
                None
            };
            let commute = supports[i].iter().all(|&x| supports[j].iter().all(|&y| g.commute(x, y)));
            let label = (vertices[i].points == 1 || vertices[j].points == 1).then(|| {
                let (si, sigi) = &data[i];
                let (sj, sigj) = &data[j];
                sigi.value(*sj).mul(sigj.value(*si))
            });
            edges.push(SkeletonEdge {
                i,
                j,
                multiplicity: aij * aji,
                toward,
                dashed: !commute,
                label,
            });
        }
    }
    let mut sk = Skeleton {
        vertices,
        edges,
        cartan: a,
    };
    if let Some((ty, perm, _)) = match_catalog(&sk, m.characteristic()) {
        let pat = pattern(ty);
        for (k, pv) in pat.vertices.iter().enumerate() {
            if pv.points == 2 && pv.label.is_some() {
                let v = &mut sk.vertices[perm[k]];
                if let Some(r) = v.ratio {
                    v.label = VertexLabel::Ratio(r);
                }
            }
        }
    }
    Ok(sk)
}

/// `sigma(s' s^-1)` for a two-point module, computed from both base points;
/// `None` when undefined or base-point dependent.
fn two_point_ratio(v: &YDModule) -> Option<RootOfUnity> {
    let g = v.group();
    let supp = v.support();
    let [s, t] = supp[..] else { return None };
    let at = |base: GroupElement, other: GroupElement| -> Option<RootOfUnity> {
        let x = g.mul(other, g.inv(base));
        let chi = v.local_character(base).ok()?;
        chi.try_value(x)
    };
    let p = at(s, t)?;
    (at(t, s)? == p).then_some(p)
}

// ---------------------------------------------------------------------------
// Catalog

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    MinusOne,
    P,
    PInv,
    MinusP,
}

impl Sym {
    fn eval(self, p: RootOfUnity, ch: Characteristic) -> RootOfUnity {
        match self {
            Sym::MinusOne => RootOfUnity::minus_one(ch),
            Sym::P => p,
            Sym::PInv => p.inv(),
            Sym::MinusP => p.neg(ch),
        }
    }

    /// The `p` for which this symbol evaluates to `x`; `None` if free of `p`.
    fn solve(self, x: RootOfUnity, ch: Characteristic) -> Option<RootOfUnity> {
        match self {
            Sym::MinusOne => None,
            Sym::P => Some(x),
            Sym::PInv => Some(x.inv()),
            Sym::MinusP => Some(x.neg(ch)),
        }
    }
}

struct PatVertex {
    points: usize,
    label: Option<Sym>,
}

struct PatEdge {
    i: usize,
    j: usize,
    mult: i64,
    toward: Option<usize>,
    dashed: bool,
    label: Option<Sym>,
}

struct Pattern {
    vertices: Vec<PatVertex>,
    edges: Vec<PatEdge>,
}

fn pv(points: usize, label: Option<Sym>) -> PatVertex {
    PatVertex { points, label }
}

fn pe(i: usize, j: usize, mult: i64, toward: Option<usize>, dashed: bool, label: Option<Sym>) -> PatEdge {
    PatEdge {
        i,
        j,
        mult,
        toward,
        dashed,
        label,
    }
}

/// Simply-laced Dynkin edges of type A, D or E on `n` vertices.
fn simply_laced_edges(ty: SkeletonType) -> Vec<(usize, usize)> {
    match ty {
        SkeletonType::Alpha(n) | SkeletonType::Beta(n) => (0..n - 1).map(|k| (k, k + 1)).collect(),
        SkeletonType::Delta(n) => {
            let mut e: Vec<_> = (0..n - 2).map(|k| (k, k + 1)).collect();
            e.push((n - 3, n - 1));
            e
        }
        SkeletonType::Epsilon(n) => {
            // 1 - 3 - 4 - ... - n with 2 attached to 4.
            let mut e = vec![(0, 2), (1, 3)];
            e.extend((2..n - 1).map(|k| (k, k + 1)));
            e
        }
        _ => Vec::new(),
    }
}

fn pattern(ty: SkeletonType) -> Pattern {
    let n = ty.theta();
    match ty {
        SkeletonType::Alpha(_) | SkeletonType::Delta(_) | SkeletonType::Epsilon(_) => Pattern {
            vertices: (0..n).map(|_| pv(2, None)).collect(),
            edges: simply_laced_edges(ty).into_iter().map(|(i, j)| pe(i, j, 1, None, true, None)).collect(),
        },
        SkeletonType::Beta(_) => {
            let mut edges: Vec<_> = (0..n - 2).map(|k| pe(k, k + 1, 1, None, true, None)).collect();
            edges.push(pe(n - 2, n - 1, 2, Some(n - 1), true, None));
            Pattern {
                vertices: (0..n).map(|_| pv(2, None)).collect(),
                edges,
            }
        }
        SkeletonType::BetaPrime(_) => {
            let mut vertices: Vec<_> = (0..n - 1).map(|_| pv(1, Some(Sym::P))).collect();
            vertices.push(pv(3, None));
            let mut edges: Vec<_> = (0..n - 2).map(|k| pe(k, k + 1, 1, None, false, Some(Sym::PInv))).collect();
            edges.push(pe(n - 2, n - 1, 2, Some(n - 1), false, Some(Sym::PInv)));
            Pattern { vertices, edges }
        }
        SkeletonType::BetaDoublePrime(_) => {
            let mut vertices: Vec<_> = (0..n - 2).map(|_| pv(1, Some(Sym::P))).collect();
            vertices.push(pv(2, Some(Sym::MinusP)));
            vertices.push(pv(3, None));
            let mut edges: Vec<_> = (0..n - 3).map(|k| pe(k, k + 1, 1, None, false, Some(Sym::PInv))).collect();
            edges.push(pe(n - 3, n - 2, 2, Some(n - 2), false, Some(Sym::PInv)));
            edges.push(pe(n - 2, n - 1, 2, Some(n - 1), true, None));
            Pattern { vertices, edges }
        }
        SkeletonType::Gamma(_) => {
            let mut vertices: Vec<_> = (0..n - 1).map(|_| pv(2, None)).collect();
            vertices.push(pv(1, Some(Sym::MinusOne)));
            let mut edges: Vec<_> = (0..n - 2).map(|k| pe(k, k + 1, 1, None, true, None)).collect();
            edges.push(pe(n - 2, n - 1, 2, Some(n - 2), false, Some(Sym::MinusOne)));
            Pattern { vertices, edges }
        }
        SkeletonType::Phi4 => Pattern {
            vertices: vec![
                pv(1, Some(Sym::MinusOne)),
                pv(1, Some(Sym::MinusOne)),
                pv(2, None),
                pv(2, None),
            ],
            edges: vec![
                pe(0, 1, 1, None, false, Some(Sym::MinusOne)),
                pe(1, 2, 2, Some(2), false, Some(Sym::MinusOne)),
                pe(2, 3, 1, None, true, None),
            ],
        },
        SkeletonType::None => Pattern {
            vertices: Vec::new(),
            edges: Vec::new(),
        },
    }
}

fn side_condition_holds(ty: SkeletonType, p: Option<RootOfUnity>, ch: Characteristic) -> bool {
    match ty {
        SkeletonType::Beta(_) => ch.p() == 3,
        SkeletonType::BetaPrime(_) | SkeletonType::BetaDoublePrime(_) => {
            p.is_some_and(|p| q_number(3, p.neg(ch), ch))
        }
        SkeletonType::Gamma(_) | SkeletonType::Phi4 => ch.p() != 2,
        _ => true,
    }
}

/// Structural and label match of a pattern under the vertex map `perm`
/// (pattern vertex to skeleton vertex). Returns the value of `p`, if any.
fn labels_match(
    pat: &Pattern,
    s: &Skeleton,
    perm: &[usize],
    ch: Characteristic,
) -> Option<Option<RootOfUnity>> {
    let mut p: Option<RootOfUnity> = None;
    let mut check = |sym: Sym, x: Option<RootOfUnity>| -> bool {
        let Some(x) = x else { return false };
        match (sym.solve(x, ch), p) {
            (Some(q), None) => {
                p = Some(q);
                sym.eval(q, ch) == x
            }
            (_, Some(q)) => sym.eval(q, ch) == x,
            (None, None) => sym.eval(RootOfUnity::ONE, ch) == x,
        }
    };
    for (k, v) in pat.vertices.iter().enumerate() {
        let Some(sym) = v.label else { continue };
        let sv = &s.vertices[perm[k]];
        let x = match sv.points {
            1 => match sv.label {
                VertexLabel::Scalar(q) => Some(q),
                _ => None,
            },
            _ => sv.ratio,
        };
        if !check(sym, x) {
            return None;
        }
    }
    for e in &pat.edges {
        let Some(sym) = e.label else { continue };
        let se = s.edge(perm[e.i], perm[e.j])?;
        if !check(sym, se.label) {
            return None;
        }
    }
    Some(p)
}

/// Backtracking search for vertex maps compatible with points, edges,
/// orientations and line styles; calls `accept` on each full map.
fn structural_maps(pat: &Pattern, s: &Skeleton, accept: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let n = pat.vertices.len();
    if s.rank() != n || s.edges.len() != pat.edges.len() {
        return false;
    }
    let mut pat_edge: BTreeMap<(usize, usize), &PatEdge> = BTreeMap::new();
    for e in &pat.edges {
        pat_edge.insert((e.i, e.j), e);
        pat_edge.insert((e.j, e.i), e);
    }
    fn rec(
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pat: &Pattern,
        pat_edge: &BTreeMap<(usize, usize), &PatEdge>,
        s: &Skeleton,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = pat.vertices.len();
        if k == n {
            return accept(perm);
        }
        for x in 0..n {
            if used[x] || s.vertices[x].points != pat.vertices[k].points {
                continue;
            }
            let ok = (0..k).all(|l| {
                let pe = pat_edge.get(&(k, l));
                let se = s.edge(x, perm[l]);
                match (pe, se) {
                    (None, None) => true,
                    (Some(pe), Some(se)) => {
                        let toward = pe.toward.map(|t| if t == k { x } else { perm[l] });
                        pe.mult == se.multiplicity && pe.dashed == se.dashed && toward == se.toward
                    }
                    _ => false,
                }
            });
            if !ok {
                continue;
            }
            used[x] = true;
            perm.push(x);
            if rec(k + 1, perm, used, pat, pat_edge, s, accept) {
                return true;
            }
            perm.pop();
            used[x] = false;
        }
        false
    }
    rec(0, &mut Vec::with_capacity(n), &mut vec![false; n], pat, &pat_edge, s, accept)
}

fn match_catalog(s: &Skeleton, ch: Characteristic) -> Option<(SkeletonType, Vec<usize>, Option<RootOfUnity>)> {
    if s.rank() < 2 || !s.is_connected() {
        return None;
    }
    for ty in SkeletonType::candidates(s.rank()) {
        let pat = pattern(ty);
        let mut found = None;
        structural_maps(&pat, s, &mut |perm| match labels_match(&pat, s, perm, ch) {
            Some(p) if side_condition_holds(ty, p, ch) => {
                found = Some((perm.to_vec(), p));
                true
            }
            _ => false,
        });
        if let Some((perm, p)) = found {
            return Some((ty, perm, p));
        }
    }
    None
}

/// Catalog type of a skeleton in characteristic `ch`, or `None`.
pub fn classify_skeleton(s: &Skeleton, ch: Characteristic) -> SkeletonType {
    match_catalog(s, ch).map_or(SkeletonType::None, |(ty, _, _)| ty)
}

/// The value of `p` for skeletons whose labels involve it.
pub fn skeleton_parameter(s: &Skeleton, ch: Characteristic) -> Option<RootOfUnity> {
    match_catalog(s, ch).and_then(|(_, _, p)| p)
}

// ---------------------------------------------------------------------------
// Realization

/// `prod sigma_i(g) = target` over the listed `(i, g)`.
struct Condition {
    terms: Vec<(usize, GroupElement)>,
    target: RootOfUnity,
    what: String,
}

struct Blueprint {
    spec: GroupSpec,
    group: Arc<FiniteGroup>,
    points: Vec<GroupElement>,
    conditions: Vec<Condition>,
}

impl Blueprint {
    fn new(spec: GroupSpec, points: impl FnOnce(&FiniteGroup) -> Result<Vec<GroupElement>, GroupError>) -> Result<Self, SkeletonError> {
        let group = spec.build()?;
        let points = points(&group)?;
        Ok(Blueprint {
            spec,
            group: Arc::new(group),
            points,
            conditions: Vec::new(),
        })
    }

    fn require(&mut self, terms: &[(usize, GroupElement)], target: RootOfUnity) {
        let g = &self.group;
        let what = terms
            .iter()
            .map(|&(i, x)| format!("sigma{}({})", i + 1, g.word(x)))
            .collect::<Vec<_>>()
            .join("*");
        self.conditions.push(Condition {
            terms: terms.to_vec(),
            target,
            what: format!("{what} = {target}"),
        });
    }
}

/// Conditions on a family of two-point vertices over an epsilon-twisted
/// group: `sigma_i(s_i)` prescribed, linked pairs satisfy
/// `sigma_i(eps s_j^2) sigma_j(eps s_i^2) = 1`, unlinked pairs braid
/// trivially and agree on `eps` up to inversion.
fn twisted_conditions(
    b: &mut Blueprint,
    verts: &[usize],
    linked: &dyn Fn(usize, usize) -> bool,
    self_value: &dyn Fn(usize) -> RootOfUnity,
    eps: GroupElement,
) {
    let g = b.group.clone();
    let s = b.points.clone();
    for &i in verts {
        b.require(&[(i, s[i])], self_value(i));
    }
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            if linked(i, j) {
                let ej = g.mul(eps, g.mul(s[j], s[j]));
                let ei = g.mul(eps, g.mul(s[i], s[i]));
                b.require(&[(i, ej), (j, ei)], RootOfUnity::ONE);
            } else {
                b.require(&[(i, s[j]), (j, s[i])], RootOfUnity::ONE);
                b.require(&[(i, eps), (j, eps)], RootOfUnity::ONE);
            }
        }
    }
}

fn twisted_blueprint(theta: usize, links: &[(usize, usize)]) -> Result<(Blueprint, GroupElement), SkeletonError> {
    let mut comm = vec![vec![0u8; theta]; theta];
    for &(i, j) in links {
        comm[i][j] = 1;
        comm[j][i] = 1;
    }
    let spec = GroupSpec::EpsilonTwisted {
        theta,
        commutation: comm,
        square_flags: Some(vec![0; theta]),
    };
    let b = Blueprint::new(spec, |g| (1..=theta).map(|i| g.generator(&format!("s{i}"))).collect())?;
    let eps = b.group.generator("eps")?;
    Ok((b, eps))
}

/// Smallest `p` (by order, then exponent) with `(3)_{-p} = 0`.
fn beta_parameter(ch: Characteristic) -> RootOfUnity {
    (1..=12u32)
        .flat_map(|d| (0..d).map(move |k| RootOfUnity::new(d, k as i64)))
        .filter(|q| q.valid_in(ch) && q.order() <= 12)
        .find(|&q| q_number(3, q.neg(ch), ch))
        .expect("a cube root of unity exists in every characteristic")
}

/// `base x C_6 x ... x C_6` with generators `t1..tk` on the cyclic factors.
fn with_central_factors(base: GroupSpec, k: usize) -> GroupSpec {
    let mut factors = vec![base];
    factors.extend((1..=k).map(|i| GroupSpec::Cyclic {
        name: format!("t{i}"),
        order: 6,
    }));
    GroupSpec::Product { factors }
}

fn blueprint(ty: SkeletonType, ch: Characteristic) -> Result<Blueprint, SkeletonError> {
    let n = ty.theta();
    let minus = RootOfUnity::minus_one(ch);
    let not_realizable = |reason: &str| SkeletonError::NotRealizable {
        ty,
        reason: reason.to_string(),
    };
    match ty {
        SkeletonType::None => Err(not_realizable("no shape")),
        SkeletonType::Alpha(_) | SkeletonType::Delta(_) | SkeletonType::Epsilon(_) | SkeletonType::Beta(_) => {
            if matches!(ty, SkeletonType::Beta(_)) && ch.p() != 3 {
                return Err(not_realizable("requires char 3"));
            }
            let links = simply_laced_edges(ty);
            let (mut b, eps) = twisted_blueprint(n, &links)?;
            let linked = |i: usize, j: usize| links.contains(&(i, j)) || links.contains(&(j, i));
            let last_trivial = matches!(ty, SkeletonType::Beta(_));
            let verts: Vec<usize> = (0..n).collect();
            twisted_conditions(
                &mut b,
                &verts,
                &linked,
                &|i| if last_trivial && i == n - 1 { RootOfUnity::ONE } else { minus },
                eps,
            );
            Ok(b)
        }
        SkeletonType::Gamma(_) => {
            if ch.p() == 2 {
                return Err(not_realizable("requires char != 2"));
            }
            let links: Vec<_> = (0..n - 2).map(|k| (k, k + 1)).collect();
            let (mut b, eps) = twisted_blueprint(n, &links)?;
            let s = b.points.clone();
            let path: Vec<usize> = (0..n - 1).collect();
            twisted_conditions(&mut b, &path, &|i, j| j == i + 1 || i == j + 1, &|_| minus, eps);
            let c = n - 1;
            b.require(&[(c, s[c])], minus);
            for i in 0..n - 2 {
                b.require(&[(i, s[c]), (c, s[i])], RootOfUnity::ONE);
            }
            b.require(&[(n - 2, s[c]), (c, s[n - 2])], minus);
            Ok(b)
        }
        SkeletonType::Phi4 => {
            if ch.p() == 2 {
                return Err(not_realizable("requires char != 2"));
            }
            let (mut b, eps) = twisted_blueprint(4, &[(2, 3)])?;
            let s = b.points.clone();
            let one = RootOfUnity::ONE;
            twisted_conditions(&mut b, &[2, 3], &|_, _| true, &|_| minus, eps);
            b.require(&[(0, s[0])], minus);
            b.require(&[(1, s[1])], minus);
            b.require(&[(0, s[1]), (1, s[0])], minus);
            b.require(&[(1, s[2]), (2, s[1])], minus);
            b.require(&[(0, s[2]), (2, s[0])], one);
            b.require(&[(0, s[3]), (3, s[0])], one);
            b.require(&[(1, s[3]), (3, s[1])], one);
            Ok(b)
        }
        SkeletonType::BetaPrime(_) => {
            let p = beta_parameter(ch);
            let s3 = GroupSpec::Subgroup {
                of: Box::new(GroupSpec::GammaQuotient { n: 3, m_a: 2, m_b: 3 }),
                generators: vec!["a".into(), "nu".into()],
            };
            let mut b = Blueprint::new(with_central_factors(s3, n - 1), |g| {
                let mut s: Vec<GroupElement> = (1..n).map(|i| g.generator(&format!("t{i}"))).collect::<Result<_, _>>()?;
                s.push(g.generator("a")?);
                Ok(s)
            })?;
            let s = b.points.clone();
            for i in 0..n - 1 {
                b.require(&[(i, s[i])], p);
                b.require(&[(i, s[i + 1]), (i + 1, s[i])], p.inv());
            }
            b.require(&[(n - 1, s[n - 1])], minus);
            for i in 0..n {
                for j in i + 2..n {
                    b.require(&[(i, s[j]), (j, s[i])], RootOfUnity::ONE);
                }
            }
            Ok(b)
        }
        SkeletonType::BetaDoublePrime(_) => {
            let p = beta_parameter(ch);
            let gamma = GroupSpec::GammaQuotient { n: 3, m_a: 2, m_b: 6 };
            let mut b = Blueprint::new(with_central_factors(gamma, n - 2), |g| {
                let mut s: Vec<GroupElement> = (1..n - 1).map(|i| g.generator(&format!("t{i}"))).collect::<Result<_, _>>()?;
                s.push(g.generator("b")?);
                s.push(g.generator("a")?);
                Ok(s)
            })?;
            let g = b.group.clone();
            let s = b.points.clone();
            let eps = g.inv(g.generator("nu")?);
            for i in 0..n - 2 {
                b.require(&[(i, s[i])], p);
                b.require(&[(i, s[i + 1]), (i + 1, s[i])], p.inv());
            }
            b.require(&[(n - 2, s[n - 2])], minus);
            b.require(&[(n - 1, s[n - 1])], minus);
            b.require(&[(n - 2, eps)], p.neg(ch));
            let x = g.mul(eps, g.mul(s[n - 1], s[n - 1]));
            let y = g.mul(eps, g.mul(s[n - 2], s[n - 2]));
            b.require(&[(n - 2, x), (n - 1, y)], RootOfUnity::ONE);
            for i in 0..n {
                for j in i + 2..n {
                    b.require(&[(i, s[j]), (j, s[i])], RootOfUnity::ONE);
                }
            }
            Ok(b)
        }
    }
}

/// First assignment of characters (in the order of their generator values)
/// satisfying every condition.
fn search_characters(b: &Blueprint, ty: SkeletonType, ch: Characteristic) -> Result<Vec<LinearCharacter>, SkeletonError> {
    let g = &b.group;
    let n = b.points.len();
    let mut candidates = Vec::with_capacity(n);
    for &s in &b.points {
        candidates.push(g.linear_characters(&g.centralizer(s), ch)?);
    }
    let mut by_level: Vec<Vec<&Condition>> = vec![Vec::new(); n];
    for c in &b.conditions {
        let level = c.terms.iter().map(|t| t.0).max().unwrap_or(0);
        for &(i, x) in &c.terms {
            if !g.centralizer(b.points[i]).contains(x) {
                return Err(SkeletonError::NotRealizable {
                    ty,
                    reason: format!("condition {} leaves the centralizer", c.what),
                });
            }
        }
        by_level[level].push(c);
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut deepest: (usize, String) = (0, String::from("no candidate characters"));
    fn holds(c: &Condition, chosen: &[usize], cands: &[Vec<LinearCharacter>]) -> bool {
        let v = RootOfUnity::product(c.terms.iter().map(|&(i, x)| cands[i][chosen[i]].value(x)));
        v == c.target
    }
    fn rec(
        chosen: &mut Vec<usize>,
        cands: &[Vec<LinearCharacter>],
        by_level: &[Vec<&Condition>],
        deepest: &mut (usize, String),
    ) -> bool {
        let k = chosen.len();
        if k == cands.len() {
            return true;
        }
        for idx in 0..cands[k].len() {
            chosen.push(idx);
            match by_level[k].iter().find(|c| !holds(c, chosen, cands)) {
                None => {
                    if rec(chosen, cands, by_level, deepest) {
                        return true;
                    }
                }
                Some(c) => {
                    if k >= deepest.0 {
                        *deepest = (k, c.what.clone());
                    }
                }
            }
            chosen.pop();
        }
        false
    }
    if rec(&mut chosen, &candidates, &by_level, &mut deepest) {
        Ok(chosen.iter().enumerate().map(|(i, &c)| candidates[i][c].clone()).collect())
    } else {
        Err(SkeletonError::SearchExhausted {
            ty,
            condition: deepest.1,
        })
    }
}

/// A tuple with skeleton of the given type, built over the smallest group of
/// the relevant shape and verified by extracting and classifying its
/// skeleton.
pub fn realize_skeleton(ty: SkeletonType, ch: Characteristic) -> Result<YDTuple, SkeletonError> {
    Ok(realize_skeleton_spec(ty, ch)?.1)
}

/// [`realize_skeleton`] together with the recipe of its group.
pub fn realize_skeleton_spec(ty: SkeletonType, ch: Characteristic) -> Result<(GroupSpec, YDTuple), SkeletonError> {
    let b = blueprint(ty, ch)?;
    let chars = search_characters(&b, ty, ch)?;
    let modules = b
        .points
        .iter()
        .zip(&chars)
        .map(|(&s, chi)| YDModule::induce(&b.group, s, chi))
        .collect::<Result<Vec<_>, _>>()?;
    let m = YDTuple::new(b.group.clone(), modules, ch)?;
    let found = classify_skeleton(&extract_skeleton(&m, DEFAULT_ADJOINT_CAP)?, ch);
    if found != ty {
        return Err(SkeletonError::RoundTrip { expected: ty, found });
    }
    Ok((b.spec, m))
}

// ---------------------------------------------------------------------------
// Reflections

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionOutcome {
    pub index: usize,
    pub expected: SkeletonType,
    pub found: Result<SkeletonType, String>,
}

impl ReflectionOutcome {
    pub fn ok(&self) -> bool {
        self.found.as_ref() == Ok(&self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionReport {
    pub base: SkeletonType,
    pub outcomes: Vec<ReflectionOutcome>,
}

impl ReflectionReport {
    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(ReflectionOutcome::ok)
    }

    pub fn deviations(&self) -> Vec<&ReflectionOutcome> {
        self.outcomes.iter().filter(|o| !o.ok()).collect()
    }
}

/// Type of `R_k` of a tuple with skeleton `ty`: the primed beta shapes swap
/// under the reflection at the three-point vertex, everything else is fixed.
pub fn predicted_reflection_type(ty: SkeletonType, k: usize, three_point_vertex: Option<usize>) -> SkeletonType {
    match ty {
        SkeletonType::BetaPrime(n) if Some(k) == three_point_vertex => SkeletonType::BetaDoublePrime(n),
        SkeletonType::BetaDoublePrime(n) if Some(k) == three_point_vertex => SkeletonType::BetaPrime(n),
        _ => ty,
    }
}

/// Reflects at every vertex and compares the skeleton types with the
/// predicted ones.
pub fn skeleton_reflection_check(m: &YDTuple, cap: u32) -> Result<ReflectionReport, SkeletonError> {
    let ch = m.characteristic();
    let sk = extract_skeleton(m, cap)?;
    let base = classify_skeleton(&sk, ch);
    if base == SkeletonType::None {
        return Err(SkeletonError::NoSkeleton("tuple has no catalog skeleton".into()));
    }
    let three = sk.vertices.iter().position(|v| v.points == 3);
    let mut outcomes = Vec::with_capacity(m.rank());
    for k in 0..m.rank() {
        let expected = predicted_reflection_type(base, k, three);
        let found = reflect(m, k, cap)
            .map_err(SkeletonError::from)
            .and_then(|r| extract_skeleton(&r, cap))
            .map(|s| classify_skeleton(&s, ch))
            .map_err(|e| e.to_string());
        outcomes.push(ReflectionOutcome { index: k, expected, found });
    }
    Ok(ReflectionReport { base, outcomes })
}

mod classify;
pub use classify::{classify_tuple, ClassifyCaps, Evidence, GraphStats, TupleReport, Verdict};

#[cfg(test)]
mod tests;
