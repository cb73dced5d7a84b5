//! Hilbert series and dimensions of Nichols algebras.
//!
//! Graded dimensions are computed directly as ranks of the quantum
//! symmetrizer, using the factorization
//! `Omega_n = (sum_k c_k c_(k+1) ... c_(n-1)) (Omega_(n-1) (x) id)`, so the image
//! in degree `n` is spanned by the images of `Omega_(n-1)(V^(n-1)) (x) V`. For
//! finite Cartan graphs the series is also the product of rank-one series
//! over the positive roots, which the oracle then cross-checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{beta_sequence, longest_word, CartanError, Exploration, Root};
use crate::exec;
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::{field_for, Echelon, SparseVec};
use crate::scalars::{height, FieldElement, ScalarError, SplittingField};
use crate::ydmod::{YDModule, YDTuple, YdError, TENSOR_BUDGET};

/// Default number of degrees the rank-one oracle tries before giving up.
pub const DEFAULT_RANK_ONE_DEGREE: u32 = 24;
pub const DEFAULT_ORACLE_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NicholsError {
    #[error(transparent)]
    Yd(#[from] YdError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("tensor power of dimension {dim}^{n} exceeds the budget")]
    Budget { dim: usize, n: u32 },
    #[error("no vanishing degree up to {0}")]
    NoTermination(u32),
    #[error("root module at beta = {beta:?}: {reason}")]
    RootModule { beta: Root, reason: String },
    #[error("Cartan graph is not known to be finite")]
    NotFinite,
}

/// Polynomial in `theta` commuting variables with non-negative coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    theta: usize,
    coeffs: BTreeMap<Vec<u32>, u128>,
    /// Set when only total degrees up to this bound are known.
    pub truncated_at: Option<u32>,
}

impl HilbertSeries {
    pub fn one(theta: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; theta], 1);
        HilbertSeries {
            theta,
            coeffs,
            truncated_at: None,
        }
    }

    /// `sum_k poly[k] t^(k alpha)`.
    pub fn substitute(poly: &[u128], alpha: &[u32]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, &c) in poly.iter().enumerate() {
            if c != 0 {
                let e: Vec<u32> = alpha.iter().map(|a| a * k as u32).collect();
                *coeffs.entry(e).or_insert(0) += c;
            }
        }
        HilbertSeries {
            theta: alpha.len(),
            coeffs,
            truncated_at: None,
        }
    }

    /// `(n)_(t^alpha)`.
    pub fn q_integer(n: u32, alpha: &[u32]) -> Self {
        Self::substitute(&vec![1; n as usize], alpha)
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn coefficient(&self, e: &[u32]) -> u128 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u128)> {
        self.coeffs.iter()
    }

    pub fn mul(&self, other: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.theta, other.theta, "series in different numbers of variables");
        let mut coeffs = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let e: Vec<u32> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                *coeffs.entry(e).or_insert(0) += x * y;
            }
        }
        HilbertSeries {
            theta: self.theta,
            coeffs,
            truncated_at: None,
        }
    }

    pub fn pow(&self, k: u32) -> HilbertSeries {
        (0..k).fold(HilbertSeries::one(self.theta), |acc, _| acc.mul(self))
    }

    /// Specialization `t_i -> t`.
    pub fn collapse(&self) -> Vec<u128> {
        let mut out = Vec::new();
        for (e, c) in &self.coeffs {
            let d = e.iter().sum::<u32>() as usize;
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += c;
        }
        out
    }

    /// Value at `t = 1`.
    pub fn total(&self) -> u128 {
        self.coeffs.values().sum()
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.coeffs {
            let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            writeln!(f, "({}) : {}", e.join(","), c)?;
        }
        Ok(())
    }
}

/// `2^12 * 3^6`-style factorization.
pub fn factored(mut n: u128) -> String {
    if n <= 1 {
        return n.to_string();
    }
    let mut parts = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            parts.push(if e == 1 { p.to_string() } else { format!("{p}^{e}") });
        }
        p += 1;
    }
    if n > 1 {
        parts.push(n.to_string());
    }
    parts.join(" * ")
}

// ---------------------------------------------------------------------------
// Symmetrizer oracle

/// Braided vector space `V` with basis labels in `0..theta`, prepared for
/// rank computations in tensor powers.
struct Braided {
    field: Arc<SplittingField>,
    dim: usize,
    /// `c(e_x (x) e_y) = q e_y' (x) e_x` stored at `x * dim + y` as `(y', q)`.
    braid: Vec<(usize, FieldElement)>,
    labels: Vec<usize>,
    theta: usize,
    group: Arc<FiniteGroup>,
    degrees: Vec<GroupElement>,
}

impl Braided {
    fn new(v: &YDModule, labels: Vec<usize>, theta: usize, ch: crate::scalars::Characteristic) -> Result<Self, NicholsError> {
        let field = field_for(ch, v.conductor())?;
        let dim = v.dim();
        let mut braid = Vec::with_capacity(dim * dim);
        for x in 0..dim {
            for y in 0..dim {
                let (y2, q) = v.act(v.degrees()[x], y);
                braid.push((y2, field.embed(q)?));
            }
        }
        Ok(Braided {
            field,
            dim,
            braid,
            labels,
            theta,
            group: v.group().clone(),
            degrees: v.degrees().to_vec(),
        })
    }

    /// `c` on tensor slots `pos, pos + 1` of `V^(x)n`.
    fn braid_at(&self, v: &SparseVec, n: u32, pos: u32) -> SparseVec {
        let d = self.dim;
        let hi = d.pow(n - 1 - pos);
        let lo = d.pow(n - 2 - pos);
        let f = &*self.field;
        let mut out = SparseVec::new();
        for (&idx, c) in v {
            let x = idx / hi % d;
            let y = idx / lo % d;
            let (y2, q) = &self.braid[x * d + y];
            let j = idx - x * hi - y * lo + y2 * hi + x * lo;
            out.insert(j, f.mul(c, q));
        }
        out
    }

    fn multidegree(&self, mut idx: usize, n: u32) -> Vec<u32> {
        let mut e = vec![0u32; self.theta];
        for _ in 0..n {
            e[self.labels[idx % self.dim]] += 1;
            idx /= self.dim;
        }
        e
    }

    /// Dimensions of the homogeneous components of the Nichols algebra in
    /// degrees `0..=max_n`, by multidegree. Stops early after a zero degree.
    fn graded(&self, max_n: u32) -> Result<Vec<BTreeMap<Vec<u32>, u128>>, NicholsError> {
        let mut out = vec![BTreeMap::from([(vec![0; self.theta], 1u128)])];
        if max_n == 0 {
            return Ok(out);
        }
        let mut basis: Vec<SparseVec> = (0..self.dim)
            .map(|i| SparseVec::from([(i, self.field.one())]))
            .collect();
        let mut first = BTreeMap::new();
        for i in 0..self.dim {
            *first.entry(self.multidegree(i, 1)).or_insert(0) += 1;
        }
        out.push(first);
        let f = &*self.field;
        for n in 2..=max_n {
            if basis.is_empty() {
                out.push(BTreeMap::new());
                continue;
            }
            let size = (self.dim as u128).checked_pow(n).unwrap_or(u128::MAX);
            if size > TENSOR_BUDGET as u128 {
                return Err(NicholsError::Budget { dim: self.dim, n });
            }
            let jobs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|b| (0..self.dim).map(move |k| (b, k))).collect();
            let images: Vec<SparseVec> = exec::par_map(&jobs, |&(b, k)| {
                let v: SparseVec = basis[b].iter().map(|(i, c)| (i * self.dim + k, c.clone())).collect();
                let mut acc = v.clone();
                let mut cur = v;
                for pos in (0..n - 1).rev() {
                    cur = self.braid_at(&cur, n, pos);
                    for (i, c) in &cur {
                        let e = acc.entry(*i).or_insert_with(|| f.zero());
                        *e = f.add(e, c);
                    }
                }
                acc.retain(|_, c| !f.is_zero(c));
                acc
            });
            let mut blocks: BTreeMap<(Vec<u32>, usize), Vec<SparseVec>> = BTreeMap::new();
            for w in images {
                let Some((&i0, _)) = w.iter().next() else { continue };
                blocks.entry((self.multidegree(i0, n), self.degree_key(i0, n))).or_default().push(w);
            }
            let blocks: Vec<((Vec<u32>, usize), Vec<SparseVec>)> = blocks.into_iter().collect();
            let reduced: Vec<(Vec<u32>, Vec<SparseVec>)> = exec::par_map(&blocks, |(key, vecs)| {
                let mut ech = Echelon::new(self.field.clone());
                for w in vecs {
                    ech.insert(w.clone());
                }
                let rows = ech.rows().map(|(_, r)| r.iter().cloned().collect::<SparseVec>()).collect();
                (key.0.clone(), rows)
            });
            let mut dims = BTreeMap::new();
            basis = Vec::new();
            for (e, rows) in reduced {
                if !rows.is_empty() {
                    *dims.entry(e).or_insert(0) += rows.len() as u128;
                }
                basis.extend(rows);
            }
            out.push(dims);
        }
        Ok(out)
    }

    /// Group degree of a basis tensor; the braiding preserves it.
    fn degree_key(&self, mut idx: usize, n: u32) -> usize {
        let mut digits = Vec::with_capacity(n as usize);
        for _ in 0..n {
            digits.push(idx % self.dim);
            idx /= self.dim;
        }
        digits.iter().rev().fold(self.group.identity(), |a, &x| self.group.mul(a, self.degrees[x]))
    }
}

fn braided_sum(m: &YDTuple) -> Result<Braided, NicholsError> {
    let v = YDModule::direct_sum(m.modules())?;
    let labels = m
        .modules()
        .iter()
        .enumerate()
        .flat_map(|(i, x)| std::iter::repeat(i).take(x.dim()))
        .collect();
    Braided::new(&v, labels, m.rank(), m.characteristic())
}

/// `dim B^n(V)`: rank of the quantum symmetrizer on `V^(x)n`.
pub fn symmetrizer_graded_dim(v: &YDModule, n: u32, ch: crate::scalars::Characteristic) -> Result<u128, NicholsError> {
    let b = Braided::new(v, vec![0; v.dim()], 1, ch)?;
    let dims = b.graded(n)?;
    Ok(dims.get(n as usize).map_or(0, |d| d.values().sum()))
}

/// Graded dimensions of `B(M_1 + ... + M_theta)` by multidegree, for total
/// degrees up to `max_n`.
pub fn tuple_graded_dims(m: &YDTuple, max_n: u32) -> Result<Vec<BTreeMap<Vec<u32>, u128>>, NicholsError> {
    braided_sum(m)?.graded(max_n)
}

/// Hilbert series of `B(V)` in one variable. One-dimensional modules use
/// `(h)_t` with `h` the height of the self-braiding, checked against the
/// oracle in low degrees; everything else runs the oracle until a degree
/// vanishes.
pub fn rank_one_hilbert(v: &YDModule, max_degree: u32, ch: crate::scalars::Characteristic) -> Result<Vec<u128>, NicholsError> {
    let b = Braided::new(v, vec![0; v.dim()], 1, ch)?;
    if v.dim() == 1 {
        let (_, q) = v.act(v.degrees()[0], 0);
        let h = height(q, ch).ok_or(NicholsError::NoTermination(max_degree))?;
        let check = h.min(4);
        let dims = b.graded(check)?;
        for n in 0..=check {
            let want = u128::from(n < h);
            let got: u128 = dims[n as usize].values().sum();
            if got != want {
                return Err(NicholsError::RootModule {
                    beta: vec![],
                    reason: format!("closed form and oracle differ in degree {n}"),
                });
            }
        }
        return Ok(vec![1; h as usize]);
    }
    let mut degree = 2u32.min(max_degree);
    loop {
        let dims = b.graded(degree)?;
        if let Some(z) = dims.iter().position(|d| d.values().sum::<u128>() == 0) {
            return Ok(dims[..z].iter().map(|d| d.values().sum()).collect());
        }
        if degree >= max_degree {
            return Err(NicholsError::NoTermination(max_degree));
        }
        degree = (degree * 2).min(max_degree);
    }
}

/// A root with its root module and the module's rank-one series.
#[derive(Debug, Clone)]
pub struct RootFactor {
    pub beta: Root,
    pub module: YDModule,
    pub series: Vec<u128>,
}

/// PBW data of a tuple with finite Cartan graph: positive roots in the order
/// of a reduced longest word, each with its root module and series.
pub fn root_factors(ex: &Exploration, max_degree: u32) -> Result<Vec<RootFactor>, NicholsError> {
    if !ex.flags.is_finite {
        return Err(NicholsError::NotFinite);
    }
    let reduced = ex.graph()?;
    let full = ex.full.as_ref().ok_or(NicholsError::NotFinite)?;
    let x = ex.class_of[0];
    let count = ex.root_set(x).ok_or(NicholsError::NotFinite)?.positive.len();
    let word = longest_word(reduced, x, count)?;
    let betas = beta_sequence(reduced, x, &word)?;
    let ch = ex.tuples[0].characteristic();
    let mut y = 0usize;
    let mut out = Vec::with_capacity(word.len());
    let mut cache: HashMap<String, Vec<u128>> = HashMap::new();
    for (&i, beta) in word.iter().zip(betas) {
        let module = ex.tuples[y].module(i).clone();
        let key = module.fingerprint().map_err(|e| NicholsError::RootModule {
            beta: beta.clone(),
            reason: e.to_string(),
        })?;
        let series = match cache.get(&key) {
            Some(s) => s.clone(),
            None => {
                let s = rank_one_hilbert(&module, max_degree, ch).map_err(|e| NicholsError::RootModule {
                    beta: beta.clone(),
                    reason: e.to_string(),
                })?;
                cache.insert(key, s.clone());
                s
            }
        };
        out.push(RootFactor { beta, module, series });
        y = full.reflection(y, i);
    }
    Ok(out)
}

/// `prod_beta H_(B(M_beta))(t^beta)` over the positive roots.
pub fn hilbert_series(ex: &Exploration, max_degree: u32) -> Result<HilbertSeries, NicholsError> {
    let factors = root_factors(ex, max_degree)?;
    let theta = ex.tuples[0].rank();
    let mut h = HilbertSeries::one(theta);
    for f in &factors {
        let alpha: Vec<u32> = f.beta.iter().map(|&b| b as u32).collect();
        h = h.mul(&HilbertSeries::substitute(&f.series, &alpha));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NicholsDimension {
    Finite(u128),
    Infinite(String),
}

impl fmt::Display for NicholsDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NicholsDimension::Finite(n) => write!(f, "{n} = {}", factored(*n)),
            NicholsDimension::Infinite(why) => write!(f, "infinite ({why})"),
        }
    }
}

/// Product of the rank-one dimensions over the positive roots, or
/// `Infinite` when the graph is not finite or a rank-one factor does not
/// terminate.
pub fn nichols_dimension(ex: &Exploration, max_degree: u32) -> Result<NicholsDimension, NicholsError> {
    match root_factors(ex, max_degree) {
        Ok(fs) => Ok(NicholsDimension::Finite(
            fs.iter().map(|f| f.series.iter().sum::<u128>()).product(),
        )),
        Err(NicholsError::NotFinite) => Ok(NicholsDimension::Infinite("Cartan graph not finite".into())),
        Err(NicholsError::RootModule { beta, reason }) if reason.contains("no vanishing degree") => Ok(
            NicholsDimension::Infinite(format!("root module at {beta:?} does not terminate")),
        ),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckLine {
    pub degree: u32,
    pub predicted: BTreeMap<Vec<u32>, u128>,
    pub computed: BTreeMap<Vec<u32>, u128>,
}

impl CrosscheckLine {
    pub fn ok(&self) -> bool {
        self.predicted == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub lines: Vec<CrosscheckLine>,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(CrosscheckLine::ok)
    }
}

/// Compares the product series with direct symmetrizer ranks on
/// `M_1 + ... + M_theta`, multidegree by multidegree, up to total degree `d`.
pub fn hilbert_oracle_crosscheck(m: &YDTuple, series: &HilbertSeries, d: u32) -> Result<CrosscheckReport, NicholsError> {
    let dims = tuple_graded_dims(m, d)?;
    let mut lines = Vec::new();
    for n in 0..=d {
        let predicted: BTreeMap<Vec<u32>, u128> = series
            .terms()
            .filter(|(e, c)| e.iter().sum::<u32>() == n && **c != 0)
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        let computed = dims.get(n as usize).cloned().unwrap_or_default();
        lines.push(CrosscheckLine {
            degree: n,
            predicted,
            computed,
        });
    }
    Ok(CrosscheckReport { lines })
}
