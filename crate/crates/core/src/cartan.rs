//! Generalized Cartan matrices, semi-Cartan graphs and their real roots.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exec;
use crate::ydmod::{iso_fingerprint, reflect_with_row, YDTuple, YdError};

pub type IntMatrix = Vec<Vec<i64>>;
pub type Root = Vec<i64>;

pub const DEFAULT_MAX_OBJECTS: usize = 1024;
pub const DEFAULT_MAX_ROOTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is decomposable")]
    Decomposable,
    #[error("graph is not a finite Cartan graph")]
    NotFinite,
    #[error("expected rank {expected}, got {got}")]
    Rank { expected: usize, got: usize },
    #[error("hypothesis not verified: {0}")]
    Unverified(String),
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("object index out of range")]
    Index,
    #[error(transparent)]
    Yd(#[from] YdError),
}

/// Square integer matrix with `a_ii = 2`, nonpositive off-diagonal entries
/// and symmetric zero pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralizedCartanMatrix {
    a: IntMatrix,
}

impl GeneralizedCartanMatrix {
    pub fn new(a: IntMatrix) -> Result<Self, CartanError> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(CartanError::NotGcm("not a nonempty square matrix".into()));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(CartanError::NotGcm(format!("a_{i}{i} != 2")));
            }
            for j in 0..n {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return Err(CartanError::NotGcm(format!("bad off-diagonal pair at ({i},{j})")));
                }
            }
        }
        Ok(GeneralizedCartanMatrix { a })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.a
    }

    pub fn transpose(&self) -> Self {
        let n = self.rank();
        GeneralizedCartanMatrix {
            a: (0..n).map(|i| (0..n).map(|j| self.a[j][i]).collect()).collect(),
        }
    }

    /// `b[i][j] = a[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        GeneralizedCartanMatrix {
            a: perm.iter().map(|&i| perm.iter().map(|&j| self.a[i][j]).collect()).collect(),
        }
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        self.permuted(idx)
    }
}

impl fmt::Display for GeneralizedCartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .a
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GCMType {
    Fin,
    Aff,
    Ind,
}

impl fmt::Display for GCMType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GCMType::Fin => "finite",
            GCMType::Aff => "affine",
            GCMType::Ind => "indefinite",
        };
        write!(f, "{s}")
    }
}

/// Connected components of the off-diagonal support graph.
pub fn components(a: &GeneralizedCartanMatrix) -> Vec<Vec<usize>> {
    let n = a.rank();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && a.a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_indecomposable(a: &GeneralizedCartanMatrix) -> bool {
    components(a).len() == 1
}

/// Positive diagonal `d` with `d_i a_ij = d_j a_ji`, scaled to integers,
/// or `None` when the matrix is not symmetrizable.
pub fn symmetrizer(a: &GeneralizedCartanMatrix) -> Option<Vec<BigInt>> {
    let n = a.rank();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for comp in components(a) {
        d[comp[0]] = Some(BigRational::one());
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j == i || a.a[i][j] == 0 {
                    continue;
                }
                let dj = d[i].clone().unwrap() * BigRational::new(a.a[i][j].into(), a.a[j][i].into());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(x) if *x != dj => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.unwrap()).collect();
    let l = d.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    Some(d.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect())
}

fn symmetrized(a: &GeneralizedCartanMatrix, d: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.rank();
    (0..n)
        .map(|i| (0..n).map(|j| &d[i] * BigInt::from(a.a[i][j])).collect())
        .collect()
}

/// Fraction-free determinant.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn matrix_rank(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Kac trichotomy for an indecomposable matrix. Finite and affine type are
/// read off the symmetrized matrix; non-symmetrizable matrices are
/// indefinite.
pub fn classify_gcm(a: &GeneralizedCartanMatrix) -> Result<GCMType, CartanError> {
    if !is_indecomposable(a) {
        return Err(CartanError::Decomposable);
    }
    let Some(d) = symmetrizer(a) else {
        return Ok(GCMType::Ind);
    };
    let b = symmetrized(a, &d);
    let n = a.rank();
    let leading_positive = (1..=n).all(|k| {
        let sub: Vec<Vec<BigInt>> = b[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&sub).is_positive()
    });
    let psd = (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| b[i][j].clone()).collect()).collect();
        !determinant(&sub).is_negative()
    });
    let corank_one = matrix_rank(&b) + 1 == n;
    let ty = match (leading_positive, psd && corank_one) {
        (true, false) => GCMType::Fin,
        (false, true) => GCMType::Aff,
        (false, false) => GCMType::Ind,
        (true, true) => unreachable!("positive definite matrix has full rank"),
    };
    Ok(ty)
}

/// Cartan type letter and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteTypeName {
    pub family: char,
    pub rank: usize,
}

impl fmt::Display for FiniteTypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Standard matrices with Bourbaki numbering: in `B_n` the last simple root
/// is short (`a_{n-1,n} = -1`, `a_{n,n-1} = -2`), in `C_n` it is long, and
/// in `F_4` roots 1, 2 are long (`a_32 = -2`).
pub fn standard_matrix(family: char, n: usize) -> Option<GeneralizedCartanMatrix> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    let link = |a: &mut IntMatrix, i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match (family, n) {
        ('A', n) if n >= 1 => {
            for i in 1..n {
                link(&mut a, i - 1, i, -1, -1);
            }
        }
        ('B', n) if n >= 2 => {
            for i in 1..n - 1 {
                link(&mut a, i - 1, i, -1, -1);
            }
            link(&mut a, n - 2, n - 1, -1, -2);
        }
        ('C', n) if n >= 3 => {
            for i in 1..n - 1 {
                link(&mut a, i - 1, i, -1, -1);
            }
            link(&mut a, n - 2, n - 1, -2, -1);
        }
        ('D', n) if n >= 4 => {
            for i in 1..n - 1 {
                link(&mut a, i - 1, i, -1, -1);
            }
            link(&mut a, n - 3, n - 1, -1, -1);
        }
        ('E', n) if (6..=8).contains(&n) => {
            // 1-3-4-5-..., 2 attached to 4
            link(&mut a, 0, 2, -1, -1);
            link(&mut a, 1, 3, -1, -1);
            for i in 3..n {
                link(&mut a, i - 1, i, -1, -1);
            }
        }
        ('F', 4) => {
            link(&mut a, 0, 1, -1, -1);
            link(&mut a, 1, 2, -1, -2);
            link(&mut a, 2, 3, -1, -1);
        }
        ('G', 2) => link(&mut a, 0, 1, -1, -3),
        _ => return None,
    }
    GeneralizedCartanMatrix::new(a).ok()
}

fn families_of_rank(n: usize) -> Vec<FiniteTypeName> {
    let mut out = Vec::new();
    for family in ['A', 'B', 'C', 'D', 'E', 'F', 'G'] {
        if standard_matrix(family, n).is_some() {
            out.push(FiniteTypeName { family, rank: n });
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn entry_signature(a: &GeneralizedCartanMatrix) -> Vec<i64> {
    let mut v: Vec<i64> = a.a.iter().flatten().copied().collect();
    v.sort_unstable();
    v
}

/// Permutation `p` with `a.permuted(p) == b`, if any.
pub fn find_permutation(a: &GeneralizedCartanMatrix, b: &GeneralizedCartanMatrix) -> Option<Vec<usize>> {
    if a.rank() != b.rank() || entry_signature(a) != entry_signature(b) {
        return None;
    }
    permutations(a.rank()).into_iter().find(|p| a.permuted(p) == *b)
}

/// Name of an indecomposable finite-type matrix, by matching against the
/// standard matrices up to simultaneous permutation.
pub fn finite_type_name(a: &GeneralizedCartanMatrix) -> Option<FiniteTypeName> {
    if !is_indecomposable(a) {
        return None;
    }
    families_of_rank(a.rank())
        .into_iter()
        .find(|name| find_permutation(a, &standard_matrix(name.family, name.rank).unwrap()).is_some())
}

/// Whether every indecomposable block is of finite type; returns the
/// sorted block names.
pub fn is_finite_type(a: &GeneralizedCartanMatrix) -> Option<Vec<FiniteTypeName>> {
    let mut names = Vec::new();
    for comp in components(a) {
        let sub = a.submatrix(&comp);
        if classify_gcm(&sub).ok()? != GCMType::Fin {
            return None;
        }
        names.push(finite_type_name(&sub)?);
    }
    names.sort();
    Some(names)
}

pub fn identity_matrix(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Root {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Matrix of `s_i`: `alpha_j -> alpha_j - a_ij alpha_i`, columns are images.
pub fn simple_reflection_matrix(a: &GeneralizedCartanMatrix, i: usize) -> IntMatrix {
    let n = a.rank();
    let mut s = identity_matrix(n);
    for j in 0..n {
        s[i][j] -= a.a[i][j];
    }
    debug_assert_eq!(mat_mul(&s, &s), identity_matrix(n));
    s
}

/// `s_i` applied to a vector.
pub fn reflect_vector(a: &GeneralizedCartanMatrix, i: usize, v: &[i64]) -> Root {
    let mut out = v.to_vec();
    let c: i64 = (0..a.rank()).map(|j| a.a[i][j] * v[j]).sum();
    out[i] -= c;
    out
}

pub fn simple_root(n: usize, i: usize) -> Root {
    (0..n).map(|k| i64::from(k == i)).collect()
}

pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

pub fn is_positive(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

/// Display order of roots: by height, then lexicographically descending.
pub fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
}

/// Objects with Cartan matrices and reflection maps `r_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCartanGraph {
    rank: usize,
    matrices: Vec<GeneralizedCartanMatrix>,
    r: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl SemiCartanGraph {
    pub fn new(
        matrices: Vec<GeneralizedCartanMatrix>,
        r: Vec<Vec<usize>>,
        labels: Vec<String>,
    ) -> Result<Self, CartanError> {
        let rank = matrices.first().ok_or(CartanError::Index)?.rank();
        let n = matrices.len();
        if matrices.iter().any(|a| a.rank() != rank)
            || r.len() != n
            || labels.len() != n
            || r.iter().any(|row| row.len() != rank || row.iter().any(|&y| y >= n))
        {
            return Err(CartanError::Unverified("inconsistent graph data".into()));
        }
        Ok(SemiCartanGraph { rank, matrices, r, labels })
    }

    /// One object whose reflections are all trivial.
    pub fn standard(a: GeneralizedCartanMatrix) -> Self {
        let rank = a.rank();
        SemiCartanGraph {
            rank,
            matrices: vec![a],
            r: vec![vec![0; rank]],
            labels: vec!["X".into()],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_objects(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, x: usize) -> &GeneralizedCartanMatrix {
        &self.matrices[x]
    }

    pub fn matrices(&self) -> &[GeneralizedCartanMatrix] {
        &self.matrices
    }

    pub fn reflection(&self, x: usize, i: usize) -> usize {
        self.r[x][i]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn is_standard(&self) -> bool {
        self.matrices.iter().all(|a| *a == self.matrices[0])
    }

    pub fn distinct_matrices(&self) -> Vec<GeneralizedCartanMatrix> {
        let s: BTreeSet<_> = self.matrices.iter().cloned().collect();
        s.into_iter().collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_objects()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &self.r[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// `r_i^2 = id` and `a_ij^X = a_ij^{r_i(X)}`; returns the first failure.
    pub fn check_cartan_axioms(&self) -> Result<(), String> {
        for x in 0..self.num_objects() {
            for i in 0..self.rank {
                let y = self.r[x][i];
                if self.r[y][i] != x {
                    return Err(format!("r_{} is not an involution at object {x}", i + 1));
                }
                if self.matrices[x].a[i] != self.matrices[y].a[i] {
                    return Err(format!("row {} differs between object {x} and its reflection", i + 1));
                }
            }
        }
        Ok(())
    }

    /// Coarsest quotient with equal matrices and compatible reflections.
    /// Returns the reduced graph and the class of every object.
    pub fn reduce(&self) -> (SemiCartanGraph, Vec<usize>) {
        let n = self.num_objects();
        let mut keys: BTreeMap<&GeneralizedCartanMatrix, usize> = BTreeMap::new();
        let mut block: Vec<usize> = self
            .matrices
            .iter()
            .map(|a| {
                let k = keys.len();
                *keys.entry(a).or_insert(k)
            })
            .collect();
        loop {
            let mut sig_ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for x in 0..n {
                let sig = (block[x], self.r[x].iter().map(|&y| block[y]).collect::<Vec<_>>());
                let k = sig_ids.len();
                next[x] = *sig_ids.entry(sig).or_insert(k);
            }
            let changed = sig_ids.len() != block.iter().collect::<BTreeSet<_>>().len();
            block = next;
            if !changed {
                break;
            }
        }
        // Renumber blocks by their smallest member.
        let mut renum: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        for x in 0..n {
            if !renum.contains_key(&block[x]) {
                renum.insert(block[x], reps.len());
                reps.push(x);
            }
        }
        let class_of: Vec<usize> = block.iter().map(|b| renum[b]).collect();
        let matrices = reps.iter().map(|&x| self.matrices[x].clone()).collect();
        let r = reps
            .iter()
            .map(|&x| self.r[x].iter().map(|&y| class_of[y]).collect())
            .collect();
        let labels = reps.iter().map(|&x| self.labels[x].clone()).collect();
        (
            SemiCartanGraph {
                rank: self.rank,
                matrices,
                r,
                labels,
            },
            class_of,
        )
    }

    /// Real roots of every object, by closing `(X, alpha_j)` under
    /// `(X, v) -> (r_i(X), s_i^X v)`. `None` when some object exceeds
    /// `max_roots`.
    pub fn real_roots(&self, max_roots: usize) -> Option<Vec<BTreeSet<Root>>> {
        let n = self.num_objects();
        let mut roots: Vec<BTreeSet<Root>> = vec![BTreeSet::new(); n];
        let mut queue = VecDeque::new();
        for x in 0..n {
            for j in 0..self.rank {
                let v = simple_root(self.rank, j);
                roots[x].insert(v.clone());
                queue.push_back((x, v));
            }
        }
        while let Some((x, v)) = queue.pop_front() {
            for i in 0..self.rank {
                let y = self.r[x][i];
                let w = reflect_vector(&self.matrices[x], i, &v);
                if roots[y].insert(w.clone()) {
                    if roots[y].len() > 2 * max_roots {
                        return None;
                    }
                    queue.push_back((y, w));
                }
            }
        }
        Some(roots)
    }

    /// Morphism `id_X s_{i_1} s_{i_2} ... s_{i_k}` ending at `X`.
    pub fn word_element(&self, x: usize, word: &[usize]) -> GroupoidElement {
        let mut m = identity_matrix(self.rank);
        let mut y = x;
        for &i in word {
            m = mat_mul(&m, &simple_reflection_matrix(&self.matrices[y], i));
            y = self.r[y][i];
        }
        GroupoidElement {
            source: y,
            target: x,
            matrix: m,
        }
    }
}

/// Morphism from `source` to `target` with its matrix in the standard bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupoidElement {
    pub source: usize,
    pub target: usize,
    pub matrix: IntMatrix,
}

/// Positive real roots of one object, sorted for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSet {
    pub object: usize,
    pub positive: Vec<Root>,
}

impl RootSet {
    pub fn contains(&self, v: &[i64]) -> bool {
        let neg: Root = v.iter().map(|x| -x).collect();
        self.positive.iter().any(|r| r == v || *r == neg)
    }
}

/// Checks root-system axioms on a finite root family; returns the first
/// failure.
pub fn check_root_axioms(g: &SemiCartanGraph, roots: &[BTreeSet<Root>]) -> Result<(), String> {
    let n = g.rank();
    for x in 0..g.num_objects() {
        for v in &roots[x] {
            let neg: Root = v.iter().map(|a| -a).collect();
            if !is_positive(v) && !is_positive(&neg) {
                return Err(format!("root {v:?} at object {x} is neither positive nor negative"));
            }
            if !roots[x].contains(&neg) {
                return Err(format!("root set at object {x} is not closed under negation"));
            }
        }
        for i in 0..n {
            let multiples: Vec<&Root> = roots[x]
                .iter()
                .filter(|v| v.iter().enumerate().all(|(k, &a)| k == i || a == 0))
                .collect();
            if multiples.len() != 2 || multiples.iter().any(|v| v[i].abs() != 1) {
                return Err(format!("object {x}: multiples of alpha_{} are not exactly +-alpha", i + 1));
            }
            let y = g.reflection(x, i);
            let image: BTreeSet<Root> = roots[x].iter().map(|v| reflect_vector(g.matrix(x), i, v)).collect();
            if image != roots[y] {
                return Err(format!("s_{} does not map roots of object {x} onto roots of its reflection", i + 1));
            }
            let pos_x: BTreeSet<Root> = roots[x]
                .iter()
                .filter(|v| is_positive(v) && **v != simple_root(n, i))
                .map(|v| reflect_vector(g.matrix(x), i, v))
                .collect();
            let pos_y: BTreeSet<Root> = roots[y]
                .iter()
                .filter(|v| is_positive(v) && **v != simple_root(n, i))
                .cloned()
                .collect();
            if pos_x != pos_y {
                return Err(format!("s_{} does not permute the positive roots at object {x}", i + 1));
            }
            for j in 0..n {
                if j == i {
                    continue;
                }
                let m = roots[x]
                    .iter()
                    .filter(|v| is_positive(v) && v.iter().enumerate().all(|(k, &a)| k == i || k == j || a == 0))
                    .count();
                let mut z = x;
                for _ in 0..m {
                    z = g.reflection(g.reflection(z, j), i);
                }
                if z != x {
                    return Err(format!("(r_{} r_{})^{m} does not fix object {x}", i + 1, j + 1));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreCaps {
    pub max_objects: usize,
    pub max_roots: usize,
    pub adjoint_cap: u32,
}

impl Default for ExploreCaps {
    fn default() -> Self {
        ExploreCaps {
            max_objects: DEFAULT_MAX_OBJECTS,
            max_roots: DEFAULT_MAX_ROOTS,
            adjoint_cap: crate::ydmod::DEFAULT_ADJOINT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExploreStatus {
    Complete,
    ObjectCap,
    RootCap,
    ReflectionFailed { object: usize, index: usize, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExploreFlags {
    pub is_finite: bool,
    pub is_cartan_graph: bool,
    pub is_standard: bool,
    pub is_indecomposable: bool,
    pub admits_all_reflections_up_to_cap: bool,
    pub root_axioms: bool,
}

/// Result of closing a seed under all reflections.
#[derive(Debug, Clone)]
pub struct Exploration {
    pub status: ExploreStatus,
    /// Number of objects discovered, complete or not.
    pub objects_seen: usize,
    /// Graph on isomorphism classes; `None` unless every reflection exists.
    pub full: Option<SemiCartanGraph>,
    pub tuples: Vec<YDTuple>,
    /// Minimal quotient of `full`.
    pub reduced: Option<SemiCartanGraph>,
    pub class_of: Vec<usize>,
    /// Real roots of every reduced object.
    pub roots: Option<Vec<BTreeSet<Root>>>,
    pub flags: ExploreFlags,
    pub diagnostics: Vec<String>,
}

impl Exploration {
    pub fn graph(&self) -> Result<&SemiCartanGraph, CartanError> {
        self.reduced.as_ref().ok_or(CartanError::NotFinite)
    }

    pub fn root_set(&self, x: usize) -> Option<RootSet> {
        let roots = self.roots.as_ref()?;
        let mut positive: Vec<Root> = roots.get(x)?.iter().filter(|v| is_positive(v)).cloned().collect();
        sort_roots(&mut positive);
        Some(RootSet { object: x, positive })
    }

    fn finish(
        status: ExploreStatus,
        objects_seen: usize,
        full: Option<SemiCartanGraph>,
        tuples: Vec<YDTuple>,
        caps: ExploreCaps,
    ) -> Self {
        let mut ex = Exploration {
            status,
            objects_seen,
            full: None,
            tuples,
            reduced: None,
            class_of: Vec::new(),
            roots: None,
            flags: ExploreFlags::default(),
            diagnostics: Vec::new(),
        };
        let Some(full) = full else { return ex };
        ex.flags.admits_all_reflections_up_to_cap = true;
        ex.flags.is_standard = full.is_standard();
        ex.flags.is_indecomposable = is_indecomposable(full.matrix(0));
        match full.check_cartan_axioms() {
            Ok(()) => ex.flags.is_cartan_graph = true,
            Err(e) => ex.diagnostics.push(e),
        }
        let (reduced, class_of) = full.reduce();
        match reduced.real_roots(caps.max_roots) {
            Some(roots) => {
                match check_root_axioms(&reduced, &roots) {
                    Ok(()) => ex.flags.root_axioms = true,
                    Err(e) => ex.diagnostics.push(e),
                }
                ex.flags.is_finite = ex.flags.is_cartan_graph && ex.flags.root_axioms;
                ex.roots = Some(roots);
            }
            None => {
                ex.status = ExploreStatus::RootCap;
                ex.diagnostics.push(format!("more than {} roots at some object", caps.max_roots));
            }
        }
        ex.full = Some(full);
        ex.reduced = Some(reduced);
        ex.class_of = class_of;
        ex
    }
}

/// Closes an abstract seed under a reflection rule.
pub fn explore_abstract<L, FM, FR>(seed: L, matrix: FM, reflect: FR, caps: ExploreCaps) -> Exploration
where
    L: Clone + Ord + fmt::Debug,
    FM: Fn(&L) -> GeneralizedCartanMatrix,
    FR: Fn(&L, usize) -> L,
{
    let rank = matrix(&seed).rank();
    let mut ids: BTreeMap<L, usize> = BTreeMap::new();
    let mut objects = vec![seed.clone()];
    ids.insert(seed, 0);
    let mut r: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < objects.len() {
        let mut row = Vec::with_capacity(rank);
        for i in 0..rank {
            let y = reflect(&objects[k], i);
            let id = match ids.get(&y) {
                Some(&id) => id,
                None => {
                    if objects.len() >= caps.max_objects {
                        return Exploration::finish(ExploreStatus::ObjectCap, objects.len(), None, Vec::new(), caps);
                    }
                    ids.insert(y.clone(), objects.len());
                    objects.push(y);
                    objects.len() - 1
                }
            };
            row.push(id);
        }
        r.push(row);
        k += 1;
    }
    let matrices: Vec<_> = objects.iter().map(&matrix).collect();
    let labels = objects.iter().map(|o| format!("{o:?}")).collect();
    match SemiCartanGraph::new(matrices, r, labels) {
        Ok(g) => Exploration::finish(ExploreStatus::Complete, objects.len(), Some(g), Vec::new(), caps),
        Err(e) => {
            let mut ex = Exploration::finish(ExploreStatus::Complete, objects.len(), None, Vec::new(), caps);
            ex.diagnostics.push(e.to_string());
            ex
        }
    }
}

/// The one-object graph of a matrix.
pub fn explore_standard(a: &GeneralizedCartanMatrix, caps: ExploreCaps) -> Exploration {
    let a = a.clone();
    explore_abstract((), move |_| a.clone(), |_, _| (), caps)
}

/// Closes a tuple under the reflections `R_i`, keyed by isomorphism class.
/// Each breadth-first layer is reflected in parallel and inserted in a
/// fixed order.
pub fn explore(seed: &YDTuple, caps: ExploreCaps) -> Result<Exploration, CartanError> {
    let rank = seed.rank();
    let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
    ids.insert(iso_fingerprint(seed)?, 0);
    let mut tuples = vec![seed.clone()];
    let mut rows: Vec<Option<IntMatrix>> = vec![None];
    let mut r: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let jobs: Vec<(usize, usize)> = layer.iter().flat_map(|&x| (0..rank).map(move |i| (x, i))).collect();
        let results = exec::par_map(&jobs, |&(x, i)| reflect_with_row(&tuples[x], i, caps.adjoint_cap));
        let mut next = Vec::new();
        for (&(x, i), res) in jobs.iter().zip(results) {
            let (row, t) = match res {
                Ok(v) => v,
                Err(e) => {
                    return Ok(Exploration::finish(
                        ExploreStatus::ReflectionFailed {
                            object: x,
                            index: i,
                            reason: e.to_string(),
                        },
                        tuples.len(),
                        None,
                        tuples,
                        caps,
                    ))
                }
            };
            rows[x].get_or_insert_with(|| vec![Vec::new(); rank])[i] = row;
            let key = iso_fingerprint(&t)?;
            let y = match ids.get(&key) {
                Some(&y) => y,
                None => {
                    if tuples.len() >= caps.max_objects {
                        return Ok(Exploration::finish(ExploreStatus::ObjectCap, tuples.len(), None, tuples, caps));
                    }
                    let y = tuples.len();
                    ids.insert(key, y);
                    tuples.push(t);
                    rows.push(None);
                    r.push(Vec::new());
                    next.push(y);
                    y
                }
            };
            r[x].push(y);
        }
        layer = next;
    }
    let mut matrices = Vec::with_capacity(tuples.len());
    for rows in rows {
        let a = rows.expect("every object was reflected");
        match GeneralizedCartanMatrix::new(a) {
            Ok(m) => matrices.push(m),
            Err(e) => {
                let mut ex = Exploration::finish(ExploreStatus::Complete, tuples.len(), None, tuples, caps);
                ex.diagnostics.push(e.to_string());
                return Ok(ex);
            }
        }
    }
    let labels = tuples.iter().map(|t| String::from_utf8_lossy(&iso_fingerprint(t).unwrap()).into_owned()).collect();
    let g = SemiCartanGraph::new(matrices, r, labels)?;
    let n = tuples.len();
    Ok(Exploration::finish(ExploreStatus::Complete, n, Some(g), tuples, caps))
}

/// An object whose matrix is of finite type. Such an object exists in every
/// finite connected indecomposable Cartan graph; its absence is an error.
pub fn finite_type_witness(ex: &Exploration) -> Result<usize, CartanError> {
    let g = ex.graph()?;
    if !ex.flags.is_finite {
        return Err(CartanError::Unverified("graph is not known to be finite".into()));
    }
    if !ex.flags.is_indecomposable || !g.is_connected() {
        return Err(CartanError::Unverified("graph is not connected and indecomposable".into()));
    }
    (0..g.num_objects())
        .find(|&x| classify_gcm(g.matrix(x)) == Ok(GCMType::Fin))
        .ok_or_else(|| CartanError::Unverified("no object has a matrix of finite type".into()))
}

/// Reduced word of a longest element ending at `x`: repeatedly append the
/// smallest `i` with `w(alpha_i)` positive.
pub fn longest_word(g: &SemiCartanGraph, x: usize, positive_roots: usize) -> Result<Vec<usize>, CartanError> {
    let n = g.rank();
    let mut w = identity_matrix(n);
    let mut y = x;
    let mut word = Vec::new();
    loop {
        let next = (0..n).find(|&i| is_positive(&mat_vec(&w, &simple_root(n, i))));
        let Some(i) = next else { break };
        w = mat_mul(&w, &simple_reflection_matrix(g.matrix(y), i));
        y = g.reflection(y, i);
        word.push(i);
        if word.len() > positive_roots {
            return Err(CartanError::NotFinite);
        }
    }
    if word.len() != positive_roots {
        return Err(CartanError::Unverified(format!(
            "longest word has length {} but there are {positive_roots} positive roots",
            word.len()
        )));
    }
    Ok(word)
}

/// `beta_m = id_X s_{i_1} ... s_{i_{m-1}} alpha_{i_m}`.
pub fn beta_sequence(g: &SemiCartanGraph, x: usize, word: &[usize]) -> Result<Vec<Root>, CartanError> {
    let n = g.rank();
    let mut w = identity_matrix(n);
    let mut y = x;
    let mut out: Vec<Root> = Vec::with_capacity(word.len());
    for (k, &i) in word.iter().enumerate() {
        let beta = mat_vec(&w, &simple_root(n, i));
        if !is_positive(&beta) || out.contains(&beta) {
            return Err(CartanError::NotReduced(k));
        }
        out.push(beta);
        w = mat_mul(&w, &simple_reflection_matrix(g.matrix(y), i));
        y = g.reflection(y, i);
    }
    Ok(out)
}

/// All morphisms ending at `x`, by breadth-first search over
/// `(source, matrix)`. `None` when more than `cap` morphisms exist.
pub fn morphisms_into(g: &SemiCartanGraph, x: usize, cap: usize) -> Option<Vec<GroupoidElement>> {
    let n = g.rank();
    let start = GroupoidElement {
        source: x,
        target: x,
        matrix: identity_matrix(n),
    };
    let mut seen: BTreeSet<(usize, IntMatrix)> = BTreeSet::new();
    seen.insert((x, start.matrix.clone()));
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(e) = queue.pop_front() {
        for i in 0..n {
            let m = mat_mul(&e.matrix, &simple_reflection_matrix(g.matrix(e.source), i));
            let s = g.reflection(e.source, i);
            if seen.insert((s, m.clone())) {
                if out.len() >= cap {
                    return None;
                }
                let f = GroupoidElement {
                    source: s,
                    target: x,
                    matrix: m,
                };
                out.push(f.clone());
                queue.push_back(f);
            }
        }
    }
    Some(out)
}

/// Orbits of the real roots of `x` under `Hom(x, x)`. Each orbit is sorted
/// for display; orbits are ordered by their first positive root.
pub fn weyl_orbits(g: &SemiCartanGraph, x: usize, roots: &BTreeSet<Root>, cap: usize) -> Option<Vec<Vec<Root>>> {
    let autos: Vec<IntMatrix> = morphisms_into(g, x, cap)?
        .into_iter()
        .filter(|e| e.source == x)
        .map(|e| e.matrix)
        .collect();
    let mut left: BTreeSet<Root> = roots.clone();
    let mut orbits = Vec::new();
    while let Some(v) = left.iter().next().cloned() {
        let orbit: BTreeSet<Root> = autos.iter().map(|m| mat_vec(m, &v)).collect();
        for w in &orbit {
            left.remove(w);
        }
        let mut orbit: Vec<Root> = orbit.into_iter().collect();
        orbit.sort_by(|a, b| {
            is_positive(b)
                .cmp(&is_positive(a))
                .then_with(|| height(&a.iter().map(|x| x.abs()).collect::<Vec<_>>()).cmp(&height(&b.iter().map(|x| x.abs()).collect::<Vec<_>>())))
                .then_with(|| b.cmp(a))
        });
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| {
        let ka = &a[0];
        let kb = &b[0];
        height(ka).cmp(&height(kb)).then_with(|| kb.cmp(ka))
    });
    Some(orbits)
}

/// Position in the rank-three list of finite Cartan graphs without a point
/// of type `A_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank3Case {
    A3PointPresent,
    StdC3,
    StdB3,
    Case3,
    Case4,
    Case5,
    Case6,
    None,
}

impl fmt::Display for Rank3Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rank3Case::A3PointPresent => "A3-point-present",
            Rank3Case::StdC3 => "std-C3",
            Rank3Case::StdB3 => "std-B3",
            Rank3Case::Case3 => "case3",
            Rank3Case::Case4 => "case4",
            Rank3Case::Case5 => "case5",
            Rank3Case::Case6 => "case6",
            Rank3Case::None => "none",
        };
        write!(f, "{s}")
    }
}

fn m3(rows: [[i64; 3]; 3]) -> GeneralizedCartanMatrix {
    GeneralizedCartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).expect("catalog matrix")
}

/// Matrix lists of the four non-standard rank-three cases.
pub fn rank3_case_matrices(case: Rank3Case) -> Vec<GeneralizedCartanMatrix> {
    let b3 = [[2, -1, 0], [-1, 2, -1], [0, -2, 2]];
    match case {
        Rank3Case::Case3 => vec![
            m3([[2, -1, 0], [-1, 2, -2], [0, -1, 2]]),
            m3([[2, -1, 0], [-2, 2, -2], [0, -1, 2]]),
        ],
        Rank3Case::Case4 => vec![m3(b3), m3([[2, -1, 0], [-2, 2, -1], [0, -2, 2]])],
        Rank3Case::Case5 => vec![
            m3(b3),
            m3([[2, -1, 0], [-1, 2, -1], [0, -4, 2]]),
            m3([[2, -1, 0], [-1, 2, -2], [0, -2, 2]]),
            m3([[2, -1, -1], [-1, 2, -1], [-1, -2, 2]]),
            m3([[2, 0, -1], [0, 2, -1], [-1, -2, 2]]),
            m3([[2, 0, -1], [0, 2, -1], [-1, -3, 2]]),
        ],
        Rank3Case::Case6 => vec![
            m3(b3),
            m3([[2, -1, 0], [-1, 2, -1], [0, -3, 2]]),
            m3([[2, -1, 0], [-1, 2, -2], [0, -2, 2]]),
            m3([[2, -1, 0], [-1, 2, -2], [0, -1, 2]]),
            m3([[2, -1, 0], [-2, 2, -3], [0, -1, 2]]),
            m3([[2, -1, 0], [-2, 2, -2], [0, -1, 2]]),
        ],
        _ => Vec::new(),
    }
}

/// Whether every column has at most one entry below `-1`.
pub fn columns_property(a: &GeneralizedCartanMatrix) -> bool {
    (0..a.rank()).all(|j| (0..a.rank()).filter(|&i| a.entry(i, j) < -1).count() <= 1)
}

/// Catalog case of a finite connected indecomposable rank-three graph, the
/// permutation used (`None` for standard cases) and whether every object
/// has the column property.
pub fn rank3_catalog_match(g: &SemiCartanGraph) -> Result<(Rank3Case, Option<Vec<usize>>, bool), CartanError> {
    if g.rank() != 3 {
        return Err(CartanError::Rank { expected: 3, got: g.rank() });
    }
    let distinct = g.distinct_matrices();
    let columns = distinct.iter().all(columns_property);
    let named: Vec<Option<FiniteTypeName>> = distinct.iter().map(finite_type_name).collect();
    if named.iter().any(|n| matches!(n, Some(FiniteTypeName { family: 'A', rank: 3 }))) {
        return Ok((Rank3Case::A3PointPresent, None, columns));
    }
    if distinct.len() == 1 {
        match named[0] {
            Some(FiniteTypeName { family: 'C', rank: 3 }) => return Ok((Rank3Case::StdC3, None, columns)),
            Some(FiniteTypeName { family: 'B', rank: 3 }) => return Ok((Rank3Case::StdB3, None, columns)),
            _ => {}
        }
    }
    let cases = [Rank3Case::Case3, Rank3Case::Case4, Rank3Case::Case5, Rank3Case::Case6];
    let ours: BTreeSet<_> = distinct.iter().cloned().collect();
    for exact in [true, false] {
        for &case in &cases {
            let list: BTreeSet<_> = rank3_case_matrices(case).into_iter().collect();
            for p in permutations(3) {
                let image: BTreeSet<_> = ours.iter().map(|a| a.permuted(&p)).collect();
                if (exact && image == list) || (!exact && image.is_subset(&list)) {
                    return Ok((case, Some(p), columns));
                }
            }
        }
    }
    Ok((Rank3Case::None, None, columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(rows: &[&[i64]]) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn trichotomy_small_cases() {
        assert_eq!(classify_gcm(&standard_matrix('A', 2).unwrap()), Ok(GCMType::Fin));
        assert_eq!(classify_gcm(&gcm(&[&[2, -2], &[-2, 2]])), Ok(GCMType::Aff));
        assert_eq!(classify_gcm(&gcm(&[&[2, -1], &[-5, 2]])), Ok(GCMType::Ind));
        assert_eq!(classify_gcm(&gcm(&[&[2, 0], &[0, 2]])), Err(CartanError::Decomposable));
    }

    #[test]
    fn naming_follows_bourbaki() {
        let c3 = gcm(&[&[2, -1, 0], &[-1, 2, -2], &[0, -1, 2]]);
        assert_eq!(finite_type_name(&c3).unwrap().to_string(), "C3");
        let f4 = gcm(&[&[2, -1, 0, 0], &[-1, 2, -1, 0], &[0, -2, 2, -1], &[0, 0, -1, 2]]);
        assert_eq!(finite_type_name(&f4).unwrap().to_string(), "F4");
        assert_eq!(finite_type_name(&standard_matrix('C', 3).unwrap().transpose()).unwrap().to_string(), "B3");
        let c2 = gcm(&[&[2, -2], &[-1, 2]]);
        assert_eq!(finite_type_name(&c2).unwrap().to_string(), "B2");
    }

    #[test]
    fn reflection_matrix_basics() {
        let a2 = standard_matrix('A', 2).unwrap();
        let s = simple_reflection_matrix(&a2, 0);
        assert_eq!(mat_vec(&s, &[0, 1]), vec![1, 1]);
        let det = determinant(&s.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>());
        assert_eq!(det, BigInt::from(-1));
    }

    #[test]
    fn standard_graphs_have_classical_root_counts() {
        for (f, n, count) in [('A', 2, 3), ('A', 3, 6), ('B', 3, 9), ('C', 3, 9), ('F', 4, 24), ('G', 2, 6)] {
            let ex = explore_standard(&standard_matrix(f, n).unwrap(), ExploreCaps::default());
            assert!(ex.flags.is_finite, "{f}{n}");
            let rs = ex.root_set(0).unwrap();
            assert_eq!(rs.positive.len(), count);
            let g = ex.graph().unwrap();
            let w = longest_word(g, 0, count).unwrap();
            let betas: BTreeSet<Root> = beta_sequence(g, 0, &w).unwrap().into_iter().collect();
            assert_eq!(betas, rs.positive.iter().cloned().collect());
        }
    }

    #[test]
    fn a2_word_and_orbit() {
        let ex = explore_standard(&standard_matrix('A', 2).unwrap(), ExploreCaps::default());
        let g = ex.graph().unwrap();
        assert_eq!(longest_word(g, 0, 3).unwrap(), vec![0, 1, 0]);
        assert_eq!(
            beta_sequence(g, 0, &[0, 1, 0]).unwrap(),
            vec![vec![1, 0], vec![1, 1], vec![0, 1]]
        );
        let orbits = weyl_orbits(g, 0, &ex.roots.as_ref().unwrap()[0], 1000).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 6);
    }

    #[test]
    fn affine_graph_hits_root_cap() {
        let caps = ExploreCaps {
            max_roots: 200,
            ..ExploreCaps::default()
        };
        let ex = explore_standard(&gcm(&[&[2, -2], &[-2, 2]]), caps);
        assert_eq!(ex.status, ExploreStatus::RootCap);
        assert!(!ex.flags.is_finite);
        assert!(finite_type_witness(&ex).is_err());
    }

    #[test]
    fn case4_graph_matches_catalog() {
        let ax = rank3_case_matrices(Rank3Case::Case4);
        // X has r3 = Y, all other reflections fixed.
        let g = SemiCartanGraph::new(
            ax.clone(),
            vec![vec![0, 0, 1], vec![1, 1, 0]],
            vec!["X".into(), "Y".into()],
        )
        .unwrap();
        assert!(g.check_cartan_axioms().is_ok());
        let roots = g.real_roots(1000).unwrap();
        check_root_axioms(&g, &roots).unwrap();
        assert_eq!(roots[0].iter().filter(|v| is_positive(v)).count(), 13);
        assert_eq!(rank3_catalog_match(&g).unwrap().0, Rank3Case::Case4);
    }

    #[test]
    fn quotient_merges_bisimilar_objects() {
        let a = standard_matrix('A', 2).unwrap();
        let g = SemiCartanGraph::new(
            vec![a.clone(), a.clone(), a],
            vec![vec![1, 0], vec![0, 2], vec![2, 1]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let (q, class_of) = g.reduce();
        assert_eq!(q.num_objects(), 1);
        assert_eq!(class_of, vec![0, 0, 0]);
    }
}
