//! Yetter-Drinfeld modules with monomial actions.
//!
//! A module is a graded vector space with a basis of homogeneous vectors on
//! which every group element acts by a permutation times roots of unity. The
//! modules `M(g, chi)` induced from a linear character of a centralizer are
//! of this shape, and so is everything the reflections produce.

mod pairs;

pub use pairs::{classify_pair, predict_pair, PairClass, PairPrediction, PairSetting, Predicted, PredictedAdjoint};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::GeneralizedCartanMatrix;
use crate::exec;
use crate::groups::{FiniteGroup, GroupElement, GroupError, LinearCharacter, Subgroup};
use crate::linalg::{field_for, Echelon, SparseVec};
use crate::scalars::{Characteristic, FieldElement, RootOfUnity, ScalarError, SplittingField};

pub const DEFAULT_ADJOINT_CAP: u32 = 8;
/// Largest tensor space `V^m (x) W` the adjoint recursion will touch.
pub const TENSOR_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YdError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("character domain is not the centralizer of the degree")]
    DomainMismatch,
    #[error("action does not define a Yetter-Drinfeld module: {0}")]
    Invalid(String),
    #[error("unsupported module shape: {0}")]
    Unsupported(String),
    #[error("module is not absolutely simple: {0}")]
    NotSimple(String),
    #[error("adjoint power exceeds the cap {0}")]
    ExceedsCap(u32),
    #[error("tensor space of dimension {0} exceeds the budget")]
    Budget(usize),
    #[error("modules live over different groups")]
    GroupMismatch,
    #[error("support is not contained in the subgroup")]
    SupportNotContained,
    #[error("Cartan matrix axioms violated: {0}")]
    CartanAxiom(String),
    #[error("index out of range")]
    Index,
}

/// Graded module with a monomial action of the whole group.
#[derive(Debug, Clone)]
pub struct YDModule {
    group: Arc<FiniteGroup>,
    degrees: Vec<GroupElement>,
    /// `act[h * dim + i] = (j, q)` means `h . e_i = q e_j`.
    act: Vec<(u32, RootOfUnity)>,
}

impl PartialEq for YDModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.degrees == other.degrees && self.act == other.act
    }
}

impl YDModule {
    /// `M(g, chi)`: induced from a linear character of the centralizer of
    /// `g`. Basis vectors are `x_i (x) w` for the sorted class elements
    /// `c_i = x_i g x_i^-1`, `x_i` the smallest such element.
    pub fn induce(group: &Arc<FiniteGroup>, g: GroupElement, chi: &LinearCharacter) -> Result<Self, YdError> {
        let cent = group.centralizer(g);
        if *chi.domain() != cent {
            return Err(YdError::DomainMismatch);
        }
        let class = group.conjugacy_class(g).to_vec();
        let d = class.len();
        let pos: HashMap<GroupElement, usize> = class.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut transversal = vec![usize::MAX; d];
        for x in 0..group.order() {
            let i = pos[&group.conj(x, g)];
            if transversal[i] == usize::MAX {
                transversal[i] = x;
            }
        }
        let n = group.order();
        let mut act = Vec::with_capacity(n * d);
        for h in 0..n {
            for i in 0..d {
                let j = pos[&group.conj(h, class[i])];
                let k = group.product([group.inv(transversal[j]), h, transversal[i]]);
                act.push((j as u32, chi.value(k)));
            }
        }
        Ok(YDModule {
            group: group.clone(),
            degrees: class,
            act,
        })
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        YDModule {
            group: group.clone(),
            degrees: Vec::new(),
            act: Vec::new(),
        }
    }

    /// Module from explicit data; validated on the named generators.
    pub fn from_parts(
        group: &Arc<FiniteGroup>,
        degrees: Vec<GroupElement>,
        act: Vec<(u32, RootOfUnity)>,
    ) -> Result<Self, YdError> {
        let m = YDModule {
            group: group.clone(),
            degrees,
            act,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks that the action is a representation compatible with the
    /// grading. Multiplicativity is tested against each named generator,
    /// which covers the whole group.
    pub fn validate(&self) -> Result<(), YdError> {
        let g = &*self.group;
        let d = self.dim();
        if self.act.len() != g.order() * d {
            return Err(YdError::Invalid("action table shape".into()));
        }
        for i in 0..d {
            if self.act(0, i) != (i, RootOfUnity::ONE) {
                return Err(YdError::Invalid("identity acts nontrivially".into()));
            }
        }
        for &(_, s) in g.generators() {
            for x in 0..g.order() {
                let xs = g.mul(x, s);
                for i in 0..d {
                    let (j, a) = self.act(s, i);
                    let (k, b) = self.act(x, j);
                    if self.act(xs, i) != (k, a.mul(b)) {
                        return Err(YdError::Invalid(format!("action not multiplicative at ({x},{s})")));
                    }
                }
            }
            for i in 0..d {
                let (j, _) = self.act(s, i);
                if self.degrees[j] != g.conj(s, self.degrees[i]) {
                    return Err(YdError::Invalid("grading not compatible with the action".into()));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn act(&self, h: GroupElement, i: usize) -> (usize, RootOfUnity) {
        let (j, q) = self.act[h * self.dim() + i];
        (j as usize, q)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        let s: BTreeSet<_> = self.degrees.iter().copied().collect();
        s.into_iter().collect()
    }

    /// lcm of the orders of all scalars in the action table.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.act.iter().fold(1u32, |a, (_, q)| a.lcm(&q.order()))
    }

    /// Character by which the centralizer of `t` acts on the 1-dimensional
    /// component of degree `t`.
    pub fn local_character(&self, t: GroupElement) -> Result<LinearCharacter, YdError> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.degrees[i] == t).collect();
        if idx.len() != 1 {
            return Err(YdError::Unsupported(format!(
                "component of degree {} has dimension {}",
                self.group.word(t),
                idx.len()
            )));
        }
        let i = idx[0];
        let cent = self.group.centralizer(t);
        let gens = self.group.canonical_generators(&cent);
        let mut vals = Vec::with_capacity(gens.len());
        for &h in &gens {
            let (j, q) = self.act(h, i);
            debug_assert_eq!(j, i);
            vals.push(q);
        }
        Ok(self.group.character_from_values(&cent, &gens, &vals)?)
    }

    /// `(g0, chi)` with `g0` the smallest element of the support, when the
    /// module is isomorphic to `M(g0, chi)`.
    pub fn simple_data(&self) -> Result<(GroupElement, LinearCharacter), YdError> {
        if self.is_zero() {
            return Err(YdError::NotSimple("zero module".into()));
        }
        let support = self.support();
        if support.len() != self.dim() {
            return Err(YdError::Unsupported(
                "higher-dimensional centralizer representation".into(),
            ));
        }
        let g0 = support[0];
        if self.group.conjugacy_class(g0) != support.as_slice() {
            return Err(YdError::NotSimple("support is not a single conjugacy class".into()));
        }
        Ok((g0, self.local_character(g0)?))
    }

    /// Canonical isomorphism-class key of an absolutely simple module.
    pub fn fingerprint(&self) -> Result<String, YdError> {
        let (g0, chi) = self.simple_data()?;
        let vals: Vec<String> = chi.generator_values().iter().map(|q| format!("{}/{}", q.exponent(), q.order())).collect();
        Ok(format!("{}:[{}]", g0, vals.join(",")))
    }

    /// Direct sum, basis of the first summand first.
    pub fn direct_sum(mods: &[YDModule]) -> Result<YDModule, YdError> {
        let group = mods.first().ok_or(YdError::Index)?.group.clone();
        if mods.iter().any(|m| !Arc::ptr_eq(&m.group, &group)) {
            return Err(YdError::GroupMismatch);
        }
        let d: usize = mods.iter().map(|m| m.dim()).sum();
        let mut degrees = Vec::with_capacity(d);
        for m in mods {
            degrees.extend_from_slice(&m.degrees);
        }
        let mut act = Vec::with_capacity(group.order() * d);
        for h in 0..group.order() {
            let mut off = 0;
            for m in mods {
                for i in 0..m.dim() {
                    let (j, q) = m.act(h, i);
                    act.push(((j + off) as u32, q));
                }
                off += m.dim();
            }
        }
        Ok(YDModule { group, degrees, act })
    }

    /// Human-readable `M(g, chi)` description.
    pub fn describe(&self) -> String {
        match self.simple_data() {
            Ok((g0, chi)) => {
                let vals: Vec<String> = chi
                    .generators()
                    .iter()
                    .zip(chi.generator_values())
                    .map(|(&h, q)| format!("{}={}", self.group.word(h), q))
                    .collect();
                format!("M({}; {})", self.group.word(g0), vals.join(", "))
            }
            Err(_) => format!("module of dimension {}", self.dim()),
        }
    }
}

impl fmt::Display for YDModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Monomial operator: basis vector `k` maps to `scalar * e_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOp {
    pub map: Vec<(usize, RootOfUnity)>,
}

impl MonomialOp {
    pub fn compose(&self, first: &MonomialOp) -> MonomialOp {
        MonomialOp {
            map: first
                .map
                .iter()
                .map(|&(j, a)| {
                    let (k, b) = self.map[j];
                    (k, a.mul(b))
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &(j, q))| i == j && q.is_one())
    }
}

/// `c(u (x) v) = (deg u) v (x) u` from `V (x) W` to `W (x) V`; index of
/// `e_i (x) f_j` is `i * dim W + j`.
pub fn braiding(v: &YDModule, w: &YDModule) -> MonomialOp {
    let (dv, dw) = (v.dim(), w.dim());
    let mut map = Vec::with_capacity(dv * dw);
    for i in 0..dv {
        for j in 0..dw {
            let (j2, q) = w.act(v.degrees[i], j);
            map.push((j2 * dv + i, q));
        }
    }
    MonomialOp { map }
}

/// Whether `c_{W,V} c_{V,W}` is the identity on `V (x) W`.
pub fn squared_braiding_trivial(v: &YDModule, w: &YDModule) -> bool {
    braiding(w, v).compose(&braiding(v, w)).is_identity()
}

/// Braid relation `c1 c2 c1 = c2 c1 c2` on `V (x) V (x) V`.
pub fn yang_baxter_holds(v: &YDModule) -> bool {
    let d = v.dim();
    let c = braiding(v, v);
    let apply = |pos: usize, idx: usize| -> (usize, RootOfUnity) {
        let digits = [idx / (d * d), (idx / d) % d, idx % d];
        let (t, q) = c.map[digits[pos] * d + digits[pos + 1]];
        let mut nd = digits;
        nd[pos] = t / d;
        nd[pos + 1] = t % d;
        (nd[0] * d * d + nd[1] * d + nd[2], q)
    };
    let word = |idx: usize, w: [usize; 3]| -> (usize, RootOfUnity) {
        w.iter().fold((idx, RootOfUnity::ONE), |(i, q), &p| {
            let (j, r) = apply(p, i);
            (j, q.mul(r))
        })
    };
    (0..d * d * d).all(|idx| word(idx, [0, 1, 0]) == word(idx, [1, 0, 1]))
}

/// An ordered tuple of modules over a common group.
#[derive(Debug, Clone)]
pub struct YDTuple {
    group: Arc<FiniteGroup>,
    modules: Vec<YDModule>,
    ch: Characteristic,
}

impl YDTuple {
    pub fn new(group: Arc<FiniteGroup>, modules: Vec<YDModule>, ch: Characteristic) -> Result<Self, YdError> {
        if modules.is_empty() {
            return Err(YdError::Index);
        }
        if modules.iter().any(|m| !Arc::ptr_eq(m.group(), &group)) {
            return Err(YdError::GroupMismatch);
        }
        for m in &modules {
            if m.act.iter().any(|(_, q)| !q.valid_in(ch)) {
                return Err(ScalarError::Collapse { order: 0, p: ch.p() }.into());
            }
        }
        Ok(YDTuple { group, modules, ch })
    }

    pub fn rank(&self) -> usize {
        self.modules.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modules(&self) -> &[YDModule] {
        &self.modules
    }

    pub fn module(&self, i: usize) -> &YDModule {
        &self.modules[i]
    }

    pub fn characteristic(&self) -> Characteristic {
        self.ch
    }

    /// Whether the supports generate the whole group.
    pub fn support_generates(&self) -> bool {
        let gens: Vec<_> = self.modules.iter().flat_map(|m| m.support()).collect();
        self.group.subgroup_generated(&gens).order() == self.group.order()
    }

    pub fn with_module(&self, i: usize, m: YDModule) -> YDTuple {
        let mut modules = self.modules.clone();
        modules[i] = m;
        YDTuple {
            group: self.group.clone(),
            modules,
            ch: self.ch,
        }
    }
}

/// Canonical key of the tuple of isomorphism classes.
pub fn iso_fingerprint(m: &YDTuple) -> Result<Vec<u8>, YdError> {
    let parts: Result<Vec<String>, YdError> = m.modules.iter().map(|x| x.fingerprint()).collect();
    Ok(parts?.join("|").into_bytes())
}

/// The subspace `X_m` of `V^(x)m (x) W` from the recursion
/// `phi_{m+1} = id - c^2 + (id (x) phi_m) c_{12}`, `X_{m+1} = phi_{m+1}(V (x) X_m)`.
#[derive(Debug, Clone)]
pub struct AdjointPower {
    m: u32,
    v: YDModule,
    w: YDModule,
    field: Arc<SplittingField>,
    /// Echelon basis; every vector is homogeneous.
    basis: Vec<SparseVec>,
    degrees: Vec<GroupElement>,
}

impl AdjointPower {
    pub fn power(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn component_dims(&self) -> BTreeMap<GroupElement, usize> {
        let mut out = BTreeMap::new();
        for &g in &self.degrees {
            *out.entry(g).or_insert(0) += 1;
        }
        out
    }

    fn shape(&self) -> Shape<'_> {
        Shape { v: &self.v, w: &self.w }
    }

    /// The absolutely simple module `M(g0, chi)` isomorphic to this space,
    /// or the reason it is not of that form.
    pub fn to_simple(&self) -> Result<YDModule, YdError> {
        let g = self.v.group.clone();
        if self.is_zero() {
            return Err(YdError::NotSimple("zero".into()));
        }
        let comps = self.component_dims();
        let support: Vec<GroupElement> = comps.keys().copied().collect();
        let g0 = support[0];
        if g.conjugacy_class(g0) != support.as_slice() {
            return Err(YdError::NotSimple(format!(
                "support meets {} conjugacy classes",
                support.iter().map(|&x| g.class_index(x)).collect::<BTreeSet<_>>().len()
            )));
        }
        if comps.values().any(|&c| c != 1) {
            return Err(YdError::Unsupported(
                "higher-dimensional centralizer representation".into(),
            ));
        }
        let i0 = self.degrees.iter().position(|&x| x == g0).unwrap();
        let xi = &self.basis[i0];
        let (&pivot, _) = xi.iter().next().unwrap();
        let f = &*self.field;
        let cent = g.centralizer(g0);
        let gens = g.canonical_generators(&cent);
        let mut vals = Vec::with_capacity(gens.len());
        for &h in &gens {
            let hx = self.shape().act_vector(f, h, self.m, xi);
            let lambda = hx.get(&pivot).cloned().unwrap_or_else(|| f.zero());
            let scaled: SparseVec = xi.iter().map(|(k, c)| (*k, f.mul(&lambda, c))).collect();
            if scaled != hx {
                return Err(YdError::NotSimple("centralizer does not act by a scalar".into()));
            }
            let q = f
                .discrete_log(&lambda)
                .ok_or_else(|| YdError::Invalid("eigenvalue is not a root of unity".into()))?;
            vals.push(q);
        }
        let chi = g.character_from_values(&cent, &gens, &vals)?;
        YDModule::induce(&g, g0, &chi)
    }
}

#[derive(Clone, Copy)]
struct Shape<'a> {
    v: &'a YDModule,
    w: &'a YDModule,
}

impl<'a> Shape<'a> {
    fn size(&self, k: u32) -> usize {
        self.v.dim().pow(k) * self.w.dim()
    }

    /// Degree of the basis tensor `y` of `V^(x)k (x) W`.
    fn degree(&self, k: u32, mut y: usize) -> GroupElement {
        let g = &*self.v.group;
        let j = y % self.w.dim();
        y /= self.w.dim();
        let mut digits = Vec::with_capacity(k as usize);
        for _ in 0..k {
            digits.push(y % self.v.dim());
            y /= self.v.dim();
        }
        let mut deg = 0;
        for &i in digits.iter().rev() {
            deg = g.mul(deg, self.v.degrees[i]);
        }
        g.mul(deg, self.w.degrees[j])
    }

    /// Diagonal action of `h` on the basis tensor `y` of `V^(x)k (x) W`.
    fn act(&self, h: GroupElement, k: u32, y: usize) -> (usize, RootOfUnity) {
        let (dv, dw) = (self.v.dim(), self.w.dim());
        let (j2, mut q) = self.w.act(h, y % dw);
        let mut rest = y / dw;
        let mut out = j2;
        let mut place = dw;
        for _ in 0..k {
            let (i2, r) = self.v.act(h, rest % dv);
            q = q.mul(r);
            out += i2 * place;
            place *= dv;
            rest /= dv;
        }
        (out, q)
    }

    fn act_vector(&self, f: &SplittingField, h: GroupElement, k: u32, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&y, c) in x {
            let (y2, q) = self.act(h, k, y);
            let t = f.mul(c, &f.embed(q).expect("scalar in field"));
            let e = out.entry(y2).or_insert_with(|| f.zero());
            *e = f.add(e, &t);
        }
        out.retain(|_, c| !f.is_zero(c));
        out
    }
}

/// Incremental computation of `X_1, X_2, ...` for a fixed pair.
pub struct AdjointSequence {
    v: YDModule,
    w: YDModule,
    field: Arc<SplittingField>,
    current: AdjointPower,
    memo: HashMap<(u32, usize, usize), Arc<Vec<(usize, FieldElement)>>>,
}

impl AdjointSequence {
    pub fn new(v: &YDModule, w: &YDModule, ch: Characteristic) -> Result<Self, YdError> {
        if !Arc::ptr_eq(&v.group, &w.group) {
            return Err(YdError::GroupMismatch);
        }
        use num_integer::Integer;
        let field = field_for(ch, v.conductor().lcm(&w.conductor()))?;
        let basis: Vec<SparseVec> = (0..w.dim())
            .map(|j| SparseVec::from([(j, field.one())]))
            .collect();
        let current = AdjointPower {
            m: 0,
            v: v.clone(),
            w: w.clone(),
            field: field.clone(),
            basis,
            degrees: w.degrees.clone(),
        };
        Ok(AdjointSequence {
            v: v.clone(),
            w: w.clone(),
            field,
            current,
            memo: HashMap::new(),
        })
    }

    pub fn current(&self) -> &AdjointPower {
        &self.current
    }

    /// `phi_m(e_a (x) e_y)` for `y` a basis tensor of `V^(x)(m-1) (x) W`.
    fn phi(&mut self, m: u32, a: usize, y: usize) -> Arc<Vec<(usize, FieldElement)>> {
        if let Some(r) = self.memo.get(&(m, a, y)) {
            return r.clone();
        }
        let shape = Shape { v: &self.v, w: &self.w };
        let f = self.field.clone();
        let ysize = shape.size(m - 1);
        let ga = self.v.degrees[a];
        let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
        let add = |acc: &mut BTreeMap<usize, FieldElement>, idx: usize, c: FieldElement| {
            let e = acc.entry(idx).or_insert_with(|| f.zero());
            *e = f.add(e, &c);
        };
        add(&mut acc, a * ysize + y, f.one());
        let (y1, l1) = shape.act(ga, m - 1, y);
        let (a1, l2) = self.v.act(shape.degree(m - 1, y1), a);
        let c2 = f.neg(&f.embed(l1.mul(l2)).expect("scalar in field"));
        add(&mut acc, a1 * ysize + y1, c2);
        if m >= 2 {
            let zsize = shape.size(m - 2);
            let (b, z) = (y / zsize, y % zsize);
            let (b1, lam) = self.v.act(ga, b);
            let lam = f.embed(lam).expect("scalar in field");
            let inner = self.phi(m - 1, a, z);
            for (idx, c) in inner.iter() {
                add(&mut acc, b1 * ysize + idx, f.mul(&lam, c));
            }
        }
        let out: Vec<(usize, FieldElement)> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        let out = Arc::new(out);
        self.memo.insert((m, a, y), out.clone());
        out
    }

    /// Advances to `X_{m+1}`.
    pub fn step(&mut self) -> Result<&AdjointPower, YdError> {
        let m = self.current.m + 1;
        let size = self.v.dim().pow(m) * self.w.dim();
        if size > TENSOR_BUDGET {
            return Err(YdError::Budget(size));
        }
        let f = self.field.clone();
        let mut ech = Echelon::new(f.clone());
        let mut degs: HashMap<usize, GroupElement> = HashMap::new();
        let prev = std::mem::take(&mut self.current.basis);
        let prev_degrees = std::mem::take(&mut self.current.degrees);
        for a in 0..self.v.dim() {
            for (xi, &dx) in prev.iter().zip(&prev_degrees) {
                let mut out = SparseVec::new();
                for (&y, c) in xi {
                    let terms = self.phi(m, a, y);
                    for (idx, t) in terms.iter() {
                        let e = out.entry(*idx).or_insert_with(|| f.zero());
                        *e = f.add(e, &f.mul(c, t));
                    }
                }
                if let Some(p) = ech.insert(out) {
                    degs.insert(p, self.v.group.mul(self.v.degrees[a], dx));
                }
            }
        }
        let mut basis = Vec::with_capacity(ech.rank());
        let mut degrees = Vec::with_capacity(ech.rank());
        for (p, row) in ech.rows() {
            basis.push(row.iter().cloned().collect::<SparseVec>());
            degrees.push(degs[p]);
        }
        self.current = AdjointPower {
            m,
            v: self.v.clone(),
            w: self.w.clone(),
            field: f,
            basis,
            degrees,
        };
        Ok(&self.current)
    }
}

/// `X_m^{V,W}`, isomorphic to `(ad V)^m(W)`.
pub fn adjoint_power(v: &YDModule, w: &YDModule, m: u32, ch: Characteristic) -> Result<AdjointPower, YdError> {
    let mut seq = AdjointSequence::new(v, w, ch)?;
    for _ in 0..m {
        if seq.current().is_zero() {
            break;
        }
        seq.step()?;
    }
    let mut out = seq.current().clone();
    out.m = m;
    Ok(out)
}

/// An off-diagonal Cartan entry, or the marker that `X_{cap+1}` is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanEntry {
    Finite(i64),
    ExceedsCap,
}

impl fmt::Display for CartanEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanEntry::Finite(a) => write!(f, "{a}"),
            CartanEntry::ExceedsCap => write!(f, "exceeds-cap"),
        }
    }
}

/// `a_ij = -max{m : X_m != 0}` together with the top nonzero `X_m`.
pub fn cartan_entry_with_top(
    v: &YDModule,
    w: &YDModule,
    cap: u32,
    ch: Characteristic,
) -> Result<(CartanEntry, Option<AdjointPower>), YdError> {
    let mut seq = AdjointSequence::new(v, w, ch)?;
    let mut last = seq.current().clone();
    for _ in 0..=cap {
        let next = seq.step()?;
        if next.is_zero() {
            return Ok((CartanEntry::Finite(-(last.m as i64)), Some(last)));
        }
        last = next.clone();
    }
    Ok((CartanEntry::ExceedsCap, None))
}

pub fn cartan_entry(m: &YDTuple, i: usize, j: usize, cap: u32) -> Result<CartanEntry, YdError> {
    if i >= m.rank() || j >= m.rank() {
        return Err(YdError::Index);
    }
    if i == j {
        return Ok(CartanEntry::Finite(2));
    }
    Ok(cartan_entry_with_top(&m.modules[i], &m.modules[j], cap, m.ch)?.0)
}

/// Cartan matrix of the tuple; entries are computed in parallel.
pub fn cartan_matrix(m: &YDTuple, cap: u32) -> Result<Result<GeneralizedCartanMatrix, (usize, usize)>, YdError> {
    let theta = m.rank();
    let pairs: Vec<(usize, usize)> = (0..theta)
        .flat_map(|i| (0..theta).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let entries = exec::par_map(&pairs, |&(i, j)| cartan_entry(m, i, j, cap));
    let mut a = vec![vec![2i64; theta]; theta];
    for (&(i, j), e) in pairs.iter().zip(entries) {
        match e? {
            CartanEntry::Finite(x) => a[i][j] = x,
            CartanEntry::ExceedsCap => return Ok(Err((i, j))),
        }
    }
    GeneralizedCartanMatrix::new(a)
        .map(Ok)
        .map_err(|e| YdError::CartanAxiom(e.to_string()))
}

/// `M(g, rho)^* = M(g^-1, rho^*)` with `rho^*(x) = rho(x^-1)`.
pub fn dual(v: &YDModule) -> Result<YDModule, YdError> {
    let (g0, chi) = v.simple_data()?;
    let g = v.group.clone();
    let gi = g.inv(g0);
    let cent = g.centralizer(gi);
    let gens = g.canonical_generators(&cent);
    let vals: Vec<RootOfUnity> = gens.iter().map(|&h| chi.value(h).inv()).collect();
    let chi2 = g.character_from_values(&cent, &gens, &vals)?;
    YDModule::induce(&g, gi, &chi2)
}

/// The `i`-th row of the Cartan matrix and `R_i(M)`.
pub fn reflect_with_row(m: &YDTuple, i: usize, cap: u32) -> Result<(Vec<i64>, YDTuple), YdError> {
    let theta = m.rank();
    if i >= theta {
        return Err(YdError::Index);
    }
    let idx: Vec<usize> = (0..theta).collect();
    let results = exec::par_map(&idx, |&j| -> Result<(i64, YDModule), YdError> {
        if j == i {
            return Ok((2, dual(&m.modules[i])?));
        }
        let (e, top) = cartan_entry_with_top(&m.modules[i], &m.modules[j], cap, m.ch)?;
        match e {
            CartanEntry::ExceedsCap => Err(YdError::ExceedsCap(cap)),
            CartanEntry::Finite(a) => Ok((a, top.expect("finite entry has a top power").to_simple()?)),
        }
    });
    let mut row = Vec::with_capacity(theta);
    let mut modules = Vec::with_capacity(theta);
    for r in results {
        let (a, module) = r?;
        row.push(a);
        modules.push(module);
    }
    Ok((
        row,
        YDTuple {
            group: m.group.clone(),
            modules,
            ch: m.ch,
        },
    ))
}

/// `R_i(M)`.
pub fn reflect(m: &YDTuple, i: usize, cap: u32) -> Result<YDTuple, YdError> {
    Ok(reflect_with_row(m, i, cap)?.1)
}

/// False iff the indices split into two nonempty parts with trivial squared
/// braiding between them.
pub fn is_braid_indecomposable(m: &YDTuple) -> bool {
    let theta = m.rank();
    let mut seen = vec![false; theta];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..theta {
            if !seen[j] && !squared_braiding_trivial(&m.modules[i], &m.modules[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Connected components of the squared-braiding graph.
pub fn braid_components(m: &YDTuple) -> Vec<Vec<usize>> {
    let theta = m.rank();
    let mut comp = vec![usize::MAX; theta];
    let mut out = Vec::new();
    for start in 0..theta {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..theta {
                if comp[j] == usize::MAX && !squared_braiding_trivial(&m.modules[i], &m.modules[j]) {
                    comp[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Restriction to a subgroup containing all supports; each entry must stay
/// absolutely simple over the subgroup.
pub fn restrict(m: &YDTuple, h: &Subgroup) -> Result<YDTuple, YdError> {
    let g = &m.group;
    for module in &m.modules {
        if module.degrees.iter().any(|&x| !h.contains(x)) {
            return Err(YdError::SupportNotContained);
        }
    }
    let gens: Vec<(String, GroupElement)> = g
        .canonical_generators(h)
        .into_iter()
        .enumerate()
        .map(|(k, x)| (format!("h{}", k + 1), x))
        .collect();
    let (sub, to_parent) = restrict_group(g, &gens)?;
    let sub = Arc::new(sub);
    let mut from_parent = HashMap::new();
    for (k, &x) in to_parent.iter().enumerate() {
        from_parent.insert(x, k);
    }
    let mut modules = Vec::with_capacity(m.rank());
    for module in &m.modules {
        let d = module.dim();
        let degrees = module.degrees.iter().map(|x| from_parent[x]).collect();
        let mut act = Vec::with_capacity(sub.order() * d);
        for k in 0..sub.order() {
            for i in 0..d {
                act.push(module.act[to_parent[k] * d + i]);
            }
        }
        let r = YDModule::from_parts(&sub, degrees, act)?;
        r.simple_data()?;
        modules.push(r);
    }
    YDTuple::new(sub, modules, m.ch)
}

/// Subgroup as a standalone group plus the embedding into the parent.
pub fn restrict_group(
    g: &FiniteGroup,
    gens: &[(String, GroupElement)],
) -> Result<(FiniteGroup, Vec<GroupElement>), YdError> {
    let sub = g.restrict_to(&format!("{}|sub", g.name()), gens)?;
    // Recompute the embedding by replaying the generator words.
    let mut to_parent = vec![0usize; sub.order()];
    let images: Vec<GroupElement> = gens.iter().map(|&(_, x)| x).collect();
    let mut seen = vec![false; sub.order()];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (gi, &(_, sg)) in sub.generators().iter().enumerate() {
            let k2 = sub.mul(k, sg);
            if !seen[k2] {
                seen[k2] = true;
                to_parent[k2] = g.mul(to_parent[k], images[gi]);
                queue.push_back(k2);
            }
        }
    }
    Ok((sub, to_parent))
}

#[cfg(test)]
mod tests;
