//! Sparse row echelon forms over a [`SplittingField`].

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scalars::{Characteristic, FieldElement, ScalarError, SplittingField};

pub type SparseVec = BTreeMap<usize, FieldElement>;

/// Shared splitting field for `(characteristic, conductor)`.
pub fn field_for(ch: Characteristic, conductor: u32) -> Result<Arc<SplittingField>, ScalarError> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<SplittingField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (ch.p(), conductor);
    if let Some(f) = cache.lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let f = Arc::new(SplittingField::new(ch, conductor)?);
    cache.lock().unwrap().insert(key, f.clone());
    Ok(f)
}

/// Rows with distinct pivots; each row is normalized so its pivot entry is 1.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Arc<SplittingField>,
    rows: BTreeMap<usize, Vec<(usize, FieldElement)>>,
}

impl Echelon {
    pub fn new(field: Arc<SplittingField>) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &SplittingField {
        &self.field
    }

    /// Reduces `v` against the stored rows; afterwards `v` vanishes on all
    /// pivot columns.
    pub fn reduce(&self, v: &mut SparseVec) {
        let f = &*self.field;
        let mut cursor = 0usize;
        loop {
            let hit = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = hit else { break };
            for (col, x) in &self.rows[&k] {
                let t = f.mul(&c, x);
                let entry = v.entry(*col).or_insert_with(|| f.zero());
                *entry = f.sub(entry, &t);
                if f.is_zero(entry) {
                    v.remove(col);
                }
            }
            cursor = k + 1;
        }
    }

    /// Adds `v` to the span; returns its new pivot if it was independent.
    pub fn insert(&mut self, mut v: SparseVec) -> Option<usize> {
        let f = self.field.clone();
        v.retain(|_, x| !f.is_zero(x));
        self.reduce(&mut v);
        let (&pivot, lead) = v.iter().next()?;
        let inv = f.inv(lead).expect("nonzero pivot");
        let row: Vec<(usize, FieldElement)> = v.iter().map(|(k, x)| (*k, f.mul(&inv, x))).collect();
        self.rows.insert(pivot, row);
        Some(pivot)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &Vec<(usize, FieldElement)>)> {
        self.rows.iter()
    }
}
