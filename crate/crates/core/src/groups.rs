//! Finite groups given by full multiplication tables.
//!
//! Elements are indices `0..order`; index 0 is always the identity. The
//! constructors cover the families used throughout: quotients of the group
//! generated by `a, b, nu` with `ba = nu ab`, `nu a = a nu^-1`, `nu b = b nu`,
//! central extensions by a twist element of order 2, cyclic groups and
//! direct products.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Characteristic, RootOfUnity};

pub type GroupElement = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {0} exceeds the table cap {1}")]
    TooLarge(usize, usize),
    #[error("relations collapse the order of nu: {0}")]
    Collapse(String),
    #[error("invalid twist data: {0}")]
    Degenerate(String),
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("subgroup of order {0} exceeds the character cap {1}")]
    CharacterCap(usize, usize),
    #[error("character values are inconsistent: {0}")]
    InconsistentCharacter(String),
    #[error("character count {found} differs from the abelianization bound {expected}")]
    CharacterCount { found: usize, expected: usize },
}

pub const MAX_GROUP_ORDER: usize = 4096;
pub const MAX_CHARACTER_DOMAIN: usize = 4096;

/// Subset of a group closed under products; `mask` is indexed by element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<GroupElement>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    table: Vec<u32>,
    n: usize,
    inverse: Vec<GroupElement>,
    generators: Vec<(String, GroupElement)>,
    elem_order: Vec<u32>,
    classes: Vec<Vec<GroupElement>>,
    class_of: Vec<usize>,
    words: Vec<Vec<(usize, i32)>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.generators == other.generators
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Closure of the generators under `mul`, elements numbered in
    /// breadth-first order starting from the identity.
    pub fn generate<T, F>(name: &str, identity: T, gens: Vec<(String, T)>, mul: F) -> Result<Self, GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (_, g) in &gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge(elems.len() + 1, MAX_GROUP_ORDER));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let x = mul(&elems[i], &elems[j]);
                let k = *index
                    .get(&x)
                    .ok_or_else(|| GroupError::NotAGroup("products leave the generated set".into()))?;
                table[i * n + j] = k as u32;
            }
        }
        let gen_idx = gens.iter().map(|(s, g)| (s.clone(), index[g])).collect();
        Self::from_table(name, n, table, gen_idx)
    }

    /// Builds a group from a raw table (row-major, identity at index 0).
    pub fn from_table(
        name: &str,
        n: usize,
        table: Vec<u32>,
        generators: Vec<(String, GroupElement)>,
    ) -> Result<Self, GroupError> {
        if n == 0 || table.len() != n * n {
            return Err(GroupError::NotAGroup("table shape".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n, MAX_GROUP_ORDER));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        for i in 0..n {
            if table[i] as usize != i || table[i * n] as usize != i {
                return Err(GroupError::NotAGroup("index 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if table[i * n + j] == 0 {
                    inverse[i] = j;
                    break;
                }
            }
            if inverse[i] == usize::MAX {
                return Err(GroupError::NotAGroup(format!("element {i} has no inverse")));
            }
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            table,
            n,
            inverse,
            generators,
            elem_order: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            words: Vec::new(),
        };
        g.check_light()?;
        g.compute_words()?;
        g.elem_order = (0..n).map(|x| g.compute_order(x)).collect();
        g.compute_classes();
        Ok(g)
    }

    /// Light's associativity test over the named generators, which suffices
    /// once the generators are known to generate.
    fn check_light(&self) -> Result<(), GroupError> {
        for &(_, s) in &self.generators {
            for x in 0..self.n {
                for y in 0..self.n {
                    if self.mul(self.mul(x, y), s) != self.mul(x, self.mul(y, s)) {
                        return Err(GroupError::NotAGroup(format!("associativity fails at ({x},{y},{s})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_words(&mut self) -> Result<(), GroupError> {
        let mut words: Vec<Option<Vec<(usize, i32)>>> = vec![None; self.n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &(_, g)) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    match w.last_mut() {
                        Some((last, e)) if *last == gi => *e += 1,
                        _ => w.push((gi, 1)),
                    }
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        if words.iter().any(|w| w.is_none()) {
            return Err(GroupError::NotAGroup("named generators do not generate".into()));
        }
        self.words = words.into_iter().map(|w| w.unwrap()).collect();
        Ok(())
    }

    fn compute_order(&self, x: GroupElement) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut orbit = vec![x];
            class_of[x] = id;
            let mut k = 0;
            while k < orbit.len() {
                let y = orbit[k];
                for &(_, g) in &self.generators {
                    let z = self.conj(g, y);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        orbit.push(z);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> GroupElement {
        0
    }

    pub fn mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.table[x * self.n + y] as usize
    }

    pub fn inv(&self, x: GroupElement) -> GroupElement {
        self.inverse[x]
    }

    pub fn pow(&self, x: GroupElement, e: i64) -> GroupElement {
        let o = self.elem_order[x] as i64;
        let e = e.rem_euclid(o);
        (0..e).fold(0, |acc, _| self.mul(acc, x))
    }

    /// `x y x^-1`.
    pub fn conj(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.mul(self.mul(x, y), self.inverse[x])
    }

    pub fn commutator(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.mul(self.mul(x, y), self.mul(self.inverse[x], self.inverse[y]))
    }

    pub fn product<I: IntoIterator<Item = GroupElement>>(&self, it: I) -> GroupElement {
        it.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    pub fn element_order(&self, x: GroupElement) -> u32 {
        self.elem_order[x]
    }

    pub fn exponent(&self) -> u32 {
        self.elem_order.iter().fold(1u32, |a, &b| a.lcm(&b))
    }

    pub fn generators(&self) -> &[(String, GroupElement)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<GroupElement, GroupError> {
        self.generators
            .iter()
            .find(|(s, _)| s == name)
            .map(|&(_, g)| g)
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    pub fn commute(&self, x: GroupElement, y: GroupElement) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Conjugacy class of `g`, sorted by index.
    pub fn conjugacy_class(&self, g: GroupElement) -> &[GroupElement] {
        &self.classes[self.class_of[g]]
    }

    pub fn class_index(&self, g: GroupElement) -> usize {
        self.class_of[g]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<GroupElement>] {
        &self.classes
    }

    /// Smallest element of the class of `g`.
    pub fn class_rep(&self, g: GroupElement) -> GroupElement {
        self.classes[self.class_of[g]][0]
    }

    pub fn is_central(&self, g: GroupElement) -> bool {
        self.conjugacy_class(g).len() == 1
    }

    pub fn centralizer(&self, g: GroupElement) -> Subgroup {
        let elements: Vec<_> = (0..self.n).filter(|&x| self.commute(x, g)).collect();
        assert_eq!(
            elements.len() * self.conjugacy_class(g).len(),
            self.n,
            "orbit-stabilizer violated"
        );
        self.subset(elements)
    }

    /// Centralizer of a set of elements.
    pub fn centralizer_of_set(&self, gs: &[GroupElement]) -> Subgroup {
        let elements = (0..self.n).filter(|&x| gs.iter().all(|&g| self.commute(x, g))).collect();
        self.subset(elements)
    }

    pub fn center(&self) -> Subgroup {
        self.subset((0..self.n).filter(|&x| self.is_central(x)).collect())
    }

    pub fn whole(&self) -> Subgroup {
        self.subset((0..self.n).collect())
    }

    fn subset(&self, mut elements: Vec<GroupElement>) -> Subgroup {
        elements.sort_unstable();
        let mut mask = vec![false; self.n];
        for &x in &elements {
            mask[x] = true;
        }
        Subgroup { elements, mask }
    }

    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Subgroup {
        let mut mask = vec![false; self.n];
        mask[0] = true;
        let mut elems = vec![0usize];
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    elems.push(y);
                }
            }
            k += 1;
        }
        elems.sort_unstable();
        Subgroup { elements: elems, mask }
    }

    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms: Vec<GroupElement> = Vec::new();
        let mut seen = vec![false; self.n];
        for &x in h.elements() {
            for &y in h.elements() {
                let c = self.commutator(x, y);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    /// Greedy generating set: repeatedly adds the smallest element of `h`
    /// not yet generated.
    pub fn canonical_generators(&self, h: &Subgroup) -> Vec<GroupElement> {
        let mut gens = Vec::new();
        let mut cur = self.subgroup_generated(&[]);
        for &x in h.elements() {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.subgroup_generated(&gens);
                if cur.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// New group on the elements of `h`, with the given named generators
    /// (elements of `self`).
    pub fn restrict_to(&self, name: &str, gens: &[(String, GroupElement)]) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::generate(name, 0usize, gens.to_vec(), |x, y| self.mul(*x, *y))
    }

    /// Parses a word such as `s1*s2^-1*eps` (also whitespace separated); `1`
    /// is the identity.
    pub fn parse_word(&self, word: &str) -> Result<GroupElement, GroupError> {
        let mut acc = 0;
        let tokens: Vec<&str> = word
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            return Err(GroupError::BadWord(word.to_string()));
        }
        for tok in tokens {
            if tok == "1" {
                continue;
            }
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.trim_start_matches('(')
                        .trim_end_matches(')')
                        .parse::<i64>()
                        .map_err(|_| GroupError::BadWord(word.to_string()))?,
                ),
                None => (tok, 1),
            };
            let g = self.generator(name)?;
            acc = self.mul(acc, self.pow(g, e));
        }
        Ok(acc)
    }

    /// Shortest word (positive powers of named generators) for `g`.
    pub fn word(&self, g: GroupElement) -> String {
        let w = &self.words[g];
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|&(gi, e)| {
                let name = &self.generators[gi].0;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Cyclic group of order `m` with generator `name`.
    pub fn cyclic(name: &str, m: u32) -> Result<FiniteGroup, GroupError> {
        if m == 0 {
            return Err(GroupError::Degenerate("cyclic group of order 0".into()));
        }
        FiniteGroup::generate(&format!("C{m}"), 0u32, vec![(name.to_string(), 1 % m)], |x, y| (x + y) % m)
    }

    /// Direct product; generators of both factors are kept, names of the
    /// second factor are suffixed with `'` on a clash.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let mut gens: Vec<(String, (usize, usize))> =
            g1.generators.iter().map(|(s, g)| (s.clone(), (*g, 0))).collect();
        for (s, g) in &g2.generators {
            let mut name = s.clone();
            while gens.iter().any(|(t, _)| *t == name) {
                name.push('\'');
            }
            gens.push((name, (0, *g)));
        }
        FiniteGroup::generate(&format!("{}x{}", g1.name, g2.name), (0usize, 0usize), gens, |x, y| {
            (g1.mul(x.0, y.0), g2.mul(x.1, y.1))
        })
    }

    /// All linear characters of `h` with values in characteristic `ch`,
    /// sorted by their values on the canonical generators of `h`.
    pub fn linear_characters(&self, h: &Subgroup, ch: Characteristic) -> Result<Vec<LinearCharacter>, GroupError> {
        if h.order() > MAX_CHARACTER_DOMAIN {
            return Err(GroupError::CharacterCap(h.order(), MAX_CHARACTER_DOMAIN));
        }
        let gens = self.canonical_generators(h);
        // Partial characters on the chain <g_1> <= <g_1,g_2> <= ...
        let mut partial: Vec<(Vec<RootOfUnity>, Vec<Option<RootOfUnity>>)> = {
            let mut vals = vec![None; self.n];
            vals[0] = Some(RootOfUnity::ONE);
            vec![(Vec::new(), vals)]
        };
        for k in 0..gens.len() {
            let o = ch.coprime_part(self.elem_order[gens[k]]);
            let mut next = Vec::new();
            for (gv, vals) in &partial {
                for e in 0..o {
                    let mut gv2 = gv.clone();
                    gv2.push(RootOfUnity::new(o, e as i64));
                    if let Some(v2) = self.extend_values(&gens[..=k], &gv2, vals) {
                        next.push((gv2, v2));
                    }
                }
            }
            partial = next;
        }
        let abel = h.order() / self.derived_subgroup(h).order();
        let expected = ch.coprime_part(abel as u32) as usize;
        if partial.len() != expected {
            return Err(GroupError::CharacterCount {
                found: partial.len(),
                expected,
            });
        }
        let mut out: Vec<LinearCharacter> = partial
            .into_iter()
            .map(|(gv, vals)| LinearCharacter {
                domain: h.clone(),
                generators: gens.clone(),
                generator_values: gv,
                values: vals.into_iter().map(|v| v.unwrap_or(RootOfUnity::ONE)).collect(),
            })
            .collect();
        out.sort_by(|a, b| a.generator_values.cmp(&b.generator_values));
        Ok(out)
    }

    /// Extends values known on `<gens[..k-1]>` to `<gens[..k]>`; `None` if
    /// the assignment is not multiplicative.
    fn extend_values(
        &self,
        gens: &[GroupElement],
        gen_vals: &[RootOfUnity],
        known: &[Option<RootOfUnity>],
    ) -> Option<Vec<Option<RootOfUnity>>> {
        let mut vals = known.to_vec();
        let mut queue: VecDeque<GroupElement> = (0..self.n).filter(|&x| vals[x].is_some()).collect();
        while let Some(x) = queue.pop_front() {
            let vx = vals[x].unwrap();
            for (g, &vg) in gens.iter().zip(gen_vals) {
                let y = self.mul(x, *g);
                let vy = vx.mul(vg);
                match vals[y] {
                    Some(v) if v != vy => return None,
                    Some(_) => {}
                    None => {
                        vals[y] = Some(vy);
                        queue.push_back(y);
                    }
                }
            }
        }
        // Every edge x -> x g was checked above, so vals is multiplicative.
        Some(vals)
    }

    /// The character of `h` with prescribed values on the given generators
    /// of `h`; the generators must generate `h`.
    pub fn character_from_values(
        &self,
        h: &Subgroup,
        gens: &[GroupElement],
        values: &[RootOfUnity],
    ) -> Result<LinearCharacter, GroupError> {
        let mut known = vec![None; self.n];
        known[0] = Some(RootOfUnity::ONE);
        let vals = self
            .extend_values(gens, values, &known)
            .ok_or_else(|| GroupError::InconsistentCharacter("values violate a relation".into()))?;
        let covered = (0..self.n).filter(|&x| vals[x].is_some()).count();
        if covered != h.order() || (0..self.n).any(|x| vals[x].is_some() != h.contains(x)) {
            return Err(GroupError::InconsistentCharacter(
                "generators do not generate the domain".into(),
            ));
        }
        for (&g, &v) in gens.iter().zip(values) {
            if self.elem_order[g] % v.order() != 0 {
                return Err(GroupError::InconsistentCharacter(format!(
                    "value order {} does not divide element order {}",
                    v.order(),
                    self.elem_order[g]
                )));
            }
        }
        let canon = self.canonical_generators(h);
        let values: Vec<RootOfUnity> = vals.into_iter().map(|v| v.unwrap_or(RootOfUnity::ONE)).collect();
        Ok(LinearCharacter {
            domain: h.clone(),
            generator_values: canon.iter().map(|&g| values[g]).collect(),
            generators: canon,
            values,
        })
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.n)
    }
}

/// A homomorphism from a subgroup to the roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCharacter {
    domain: Subgroup,
    generators: Vec<GroupElement>,
    generator_values: Vec<RootOfUnity>,
    values: Vec<RootOfUnity>,
}

impl LinearCharacter {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Value at `g`; panics outside the domain.
    pub fn value(&self, g: GroupElement) -> RootOfUnity {
        assert!(self.domain.contains(g), "element {g} outside the character domain");
        self.values[g]
    }

    pub fn try_value(&self, g: GroupElement) -> Option<RootOfUnity> {
        self.domain.contains(g).then(|| self.values[g])
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn generator_values(&self) -> &[RootOfUnity] {
        &self.generator_values
    }

    /// Exhaustive homomorphism check.
    pub fn is_homomorphism(&self, group: &FiniteGroup) -> bool {
        let d = self.domain.elements();
        self.values[0].is_one()
            && d.iter().all(|&x| {
                d.iter()
                    .all(|&y| self.values[group.mul(x, y)] == self.values[x].mul(self.values[y]))
            })
    }
}

/// Quotient of the group generated by `a, b, nu` with `ba = nu ab`,
/// `nu a = a nu^-1`, `nu b = b nu`, `nu^n = 1` by `a^m_a = b^m_b = 1`.
/// Elements are the normal forms `nu^c a^x b^y`.
pub fn make_gamma_quotient(n: u32, m_a: u32, m_b: u32) -> Result<FiniteGroup, GroupError> {
    if n < 2 || m_a < 1 || m_b < 1 {
        return Err(GroupError::Degenerate(format!("parameters ({n},{m_a},{m_b})")));
    }
    // b a^m = nu^m a^m b and a^m nu = nu^(-1)^m a^m: trivial a^m_a forces
    // nu^m_a = 1 and nu^2 = 1 for odd m_a; trivial b^m_b forces nu^m_b = 1.
    if m_a % 2 == 1 {
        return Err(GroupError::Collapse(format!(
            "a^{m_a} = 1 with m_a odd forces nu = 1, but nu should have order {n}"
        )));
    }
    if m_b % n != 0 {
        return Err(GroupError::Collapse(format!(
            "b^{m_b} = 1 forces nu^{m_b} = 1, but nu should have order {n}"
        )));
    }
    let (n, ma, mb) = (n as i64, m_a as i64, m_b as i64);
    let mul = move |p: &(i64, i64, i64), q: &(i64, i64, i64)| {
        let sign = if p.1 % 2 == 1 { -1 } else { 1 };
        let shift = q.0 + p.2 * (q.1 % 2);
        (
            (p.0 + sign * shift).rem_euclid(n),
            (p.1 + q.1).rem_euclid(ma),
            (p.2 + q.2).rem_euclid(mb),
        )
    };
    let g = FiniteGroup::generate(
        &format!("Gamma{n}({m_a},{m_b})"),
        (0, 0, 0),
        vec![
            ("a".to_string(), (0, 1 % ma, 0)),
            ("b".to_string(), (0, 0, 1 % mb)),
            ("nu".to_string(), (1, 0, 0)),
        ],
        mul,
    )?;
    let (a, b, nu) = (g.generator("a")?, g.generator("b")?, g.generator("nu")?);
    let checks = [
        g.mul(b, a) == g.product([nu, a, b]),
        g.mul(nu, a) == g.mul(a, g.inv(nu)),
        g.commute(nu, b),
        g.element_order(nu) as i64 == n,
        g.order() as i64 == n * ma * mb,
    ];
    if checks.iter().any(|ok| !ok) {
        return Err(GroupError::Collapse("defining relations fail on the table".into()));
    }
    Ok(g)
}

/// Central extension with generators `s1..s_theta` and `eps`, where `eps` is
/// central of order 2, `s_i^2 = eps^square_flags[i]` and
/// `s_i s_j = eps^commutation[i][j] s_j s_i`.
pub fn make_epsilon_twisted(
    theta: usize,
    commutation: &[Vec<u8>],
    square_flags: &[u8],
) -> Result<FiniteGroup, GroupError> {
    if theta == 0 || theta > 10 {
        return Err(GroupError::Degenerate(format!("rank {theta}")));
    }
    if commutation.len() != theta || commutation.iter().any(|r| r.len() != theta) || square_flags.len() != theta {
        return Err(GroupError::Degenerate("matrix shape".into()));
    }
    for i in 0..theta {
        if commutation[i][i] != 0 {
            return Err(GroupError::Degenerate("nonzero diagonal".into()));
        }
        for j in 0..theta {
            if commutation[i][j] > 1 || commutation[i][j] != commutation[j][i] {
                return Err(GroupError::Degenerate("commutation must be a symmetric 0/1 matrix".into()));
            }
        }
        if square_flags[i] > 1 {
            return Err(GroupError::Degenerate("square flags must be 0/1".into()));
        }
    }
    let comm: Vec<Vec<u32>> = commutation
        .iter()
        .map(|r| r.iter().map(|&c| c as u32).collect())
        .collect();
    let sq: Vec<u32> = square_flags.iter().map(|&c| c as u32).collect();
    let mul = move |p: &(u32, u32), q: &(u32, u32)| {
        let (x, y) = (p.1, q.1);
        let mut e = p.0 + q.0;
        for i in 0..theta {
            if x >> i & 1 == 0 {
                continue;
            }
            for j in 0..i {
                if y >> j & 1 == 1 {
                    e += comm[i][j];
                }
            }
            if y >> i & 1 == 1 {
                e += sq[i];
            }
        }
        (e % 2, x ^ y)
    };
    let mut gens: Vec<(String, (u32, u32))> = (0..theta).map(|i| (format!("s{}", i + 1), (0, 1 << i))).collect();
    gens.push(("eps".to_string(), (1, 0)));
    let g = FiniteGroup::generate(&format!("Eps{theta}"), (0, 0), gens, mul)?;
    let eps = g.generator("eps")?;
    if g.order() != 1 << (theta + 1) || eps == 0 {
        return Err(GroupError::Degenerate("twist forces eps = 1".into()));
    }
    for i in 0..theta {
        let si = g.generator(&format!("s{}", i + 1))?;
        for j in 0..theta {
            let sj = g.generator(&format!("s{}", j + 1))?;
            let expect = if commutation[i][j] == 1 { eps } else { 0 };
            if g.commutator(si, sj) != expect {
                return Err(GroupError::Degenerate("commutators differ from the twist".into()));
            }
        }
    }
    Ok(g)
}

/// Serializable recipe for a group, as used in tuple files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    GammaQuotient {
        n: u32,
        m_a: u32,
        m_b: u32,
    },
    EpsilonTwisted {
        theta: usize,
        commutation: Vec<Vec<u8>>,
        #[serde(default)]
        square_flags: Option<Vec<u8>>,
    },
    Cyclic {
        name: String,
        order: u32,
    },
    Product {
        factors: Vec<GroupSpec>,
    },
    /// Subgroup of `of` generated by the named words, which become the
    /// generators of the result.
    Subgroup {
        of: Box<GroupSpec>,
        generators: Vec<String>,
    },
    /// Explicit table: `table[i][j]` is the index of `i * j`, index 0 the
    /// identity.
    Table {
        table: Vec<Vec<u32>>,
        generators: BTreeMap<String, usize>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::GammaQuotient { n, m_a, m_b } => make_gamma_quotient(*n, *m_a, *m_b),
            GroupSpec::EpsilonTwisted {
                theta,
                commutation,
                square_flags,
            } => {
                let sq = square_flags.clone().unwrap_or_else(|| vec![0; *theta]);
                make_epsilon_twisted(*theta, commutation, &sq)
            }
            GroupSpec::Cyclic { name, order } => FiniteGroup::cyclic(name, *order),
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| GroupError::Degenerate("empty product".into()))?;
                let mut g = first.build()?;
                for f in it {
                    g = FiniteGroup::direct_product(&g, &f.build()?)?;
                }
                Ok(g)
            }
            GroupSpec::Subgroup { of, generators } => {
                let g = of.build()?;
                let gens = generators
                    .iter()
                    .map(|w| Ok((w.clone(), g.parse_word(w)?)))
                    .collect::<Result<Vec<_>, GroupError>>()?;
                g.restrict_to(&format!("<{}>", generators.join(",")), &gens)
            }
            GroupSpec::Table { table, generators } => {
                let n = table.len();
                if table.iter().any(|r| r.len() != n) {
                    return Err(GroupError::NotAGroup("table is not square".into()));
                }
                if generators.values().any(|&v| v >= n) {
                    return Err(GroupError::NotAGroup("generator index out of range".into()));
                }
                let flat = table.iter().flatten().copied().collect();
                let gens = generators.iter().map(|(k, v)| (k.clone(), *v)).collect();
                FiniteGroup::from_table("table", n, flat, gens)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch0() -> Characteristic {
        Characteristic::ZERO
    }

    fn s3() -> FiniteGroup {
        let g = make_gamma_quotient(3, 2, 3).unwrap();
        let h = g.subgroup_generated(&[g.generator("a").unwrap(), g.generator("nu").unwrap()]);
        let gens = vec![
            ("a".to_string(), g.generator("a").unwrap()),
            ("nu".to_string(), g.generator("nu").unwrap()),
        ];
        assert_eq!(h.order(), 6);
        g.restrict_to("S3", &gens).unwrap()
    }

    #[test]
    fn gamma_quotient_orders() {
        assert_eq!(make_gamma_quotient(2, 2, 2).unwrap().order(), 8);
        assert_eq!(make_gamma_quotient(3, 2, 3).unwrap().order(), 18);
        assert!(matches!(make_gamma_quotient(3, 3, 3), Err(GroupError::Collapse(_))));
        assert!(matches!(make_gamma_quotient(3, 2, 4), Err(GroupError::Collapse(_))));
    }

    #[test]
    fn gamma_relations_on_table() {
        let g = make_gamma_quotient(3, 2, 6).unwrap();
        let (a, b, nu) = (
            g.parse_word("a").unwrap(),
            g.parse_word("b").unwrap(),
            g.parse_word("nu").unwrap(),
        );
        assert_eq!(g.mul(b, a), g.product([nu, a, b]));
        assert_eq!(g.conjugacy_class(b), {
            let mut v = vec![b, g.mul(g.inv(nu), b)];
            v.sort();
            v
        });
        assert_eq!(g.conjugacy_class(a).len(), 3);
    }

    #[test]
    fn epsilon_twisted_basics() {
        let comm = vec![vec![0, 1], vec![1, 0]];
        let g = make_epsilon_twisted(2, &comm, &[0, 0]).unwrap();
        assert_eq!(g.order(), 8);
        let s1 = g.generator("s1").unwrap();
        let eps = g.generator("eps").unwrap();
        let mut cls = vec![s1, g.mul(eps, s1)];
        cls.sort();
        assert_eq!(g.conjugacy_class(s1), cls.as_slice());
        assert_eq!(g.centralizer(s1).order(), 4);

        let abelian = make_epsilon_twisted(2, &[vec![0, 0], vec![0, 0]], &[0, 0]).unwrap();
        assert_eq!(abelian.center().order(), 8);
        assert_eq!(abelian.element_order(abelian.generator("eps").unwrap()), 2);

        let path = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        let g3 = make_epsilon_twisted(3, &path, &[0, 0, 0]).unwrap();
        assert_eq!(g3.order(), 16);
        // Brute-force center: eps and s1*s3.
        let brute: Vec<_> = (0..16).filter(|&x| (0..16).all(|y| g3.commute(x, y))).collect();
        assert_eq!(g3.center().elements(), brute.as_slice());
        assert_eq!(brute.len(), 4);
    }

    #[test]
    fn rejects_bad_twist() {
        assert!(make_epsilon_twisted(2, &[vec![1, 0], vec![0, 0]], &[0, 0]).is_err());
        assert!(make_epsilon_twisted(2, &[vec![0, 1], vec![0, 0]], &[0, 0]).is_err());
    }

    #[test]
    fn character_counts() {
        let c2c2 = FiniteGroup::direct_product(
            &FiniteGroup::cyclic("x", 2).unwrap(),
            &FiniteGroup::cyclic("y", 2).unwrap(),
        )
        .unwrap();
        assert_eq!(c2c2.linear_characters(&c2c2.whole(), ch0()).unwrap().len(), 4);
        let s3 = s3();
        assert_eq!(s3.linear_characters(&s3.whole(), ch0()).unwrap().len(), 2);
        assert_eq!(s3.center().order(), 1);
        let c6 = FiniteGroup::cyclic("t", 6).unwrap();
        let chars = c6.linear_characters(&c6.whole(), Characteristic::new(3).unwrap()).unwrap();
        assert_eq!(chars.len(), 2);
        for c in &chars {
            assert!(c.is_homomorphism(&c6));
        }
    }

    #[test]
    fn words_round_trip() {
        let g = make_gamma_quotient(3, 2, 6).unwrap();
        for x in 0..g.order() {
            assert_eq!(g.parse_word(&g.word(x)).unwrap(), x);
        }
        assert_eq!(g.parse_word("nu^-1*nu").unwrap(), 0);
        assert!(g.parse_word("q").is_err());
    }

    #[test]
    fn trivial_subgroup_and_products() {
        let g = s3();
        assert_eq!(g.subgroup_generated(&[0]).order(), 1);
        let c4 = FiniteGroup::cyclic("t", 4).unwrap();
        assert_eq!(FiniteGroup::direct_product(&g, &c4).unwrap().order(), 24);
    }

    #[test]
    fn character_from_generator_values() {
        let c6 = FiniteGroup::cyclic("t", 6).unwrap();
        let t = c6.generator("t").unwrap();
        let chi = c6
            .character_from_values(&c6.whole(), &[t], &[RootOfUnity::zeta(6)])
            .unwrap();
        assert!(chi.is_homomorphism(&c6));
        assert_eq!(chi.value(c6.pow(t, 3)), RootOfUnity::new(2, 1));
        assert!(c6.character_from_values(&c6.whole(), &[t], &[RootOfUnity::zeta(4)]).is_err());
    }
}
