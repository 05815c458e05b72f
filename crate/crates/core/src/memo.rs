use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Mutex, OnceLock};

/// A process-wide memo table. Values are computed outside the lock, so two
/// threads may race on the same key; both compute the same value and the
/// first insert wins.
pub(crate) struct Memo<K, V>(OnceLock<Mutex<HashMap<K, V>>>);

impl<K: Hash + Eq, V: Clone> Memo<K, V> {
    pub(crate) const fn new() -> Self {
        Self(OnceLock::new())
    }

    pub(crate) fn get_or_insert_with(&self, key: K, f: impl FnOnce() -> V) -> V {
        let cell = self.0.get_or_init(Default::default);
        if let Some(v) = cell.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = f();
        cell.lock().unwrap().entry(key).or_insert(v).clone()
    }
}
