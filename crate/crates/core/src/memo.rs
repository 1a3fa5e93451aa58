use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

/// Environment variable capping the number of entries of each memo table.
pub const MEMO_CAP_VAR: &str = "CUMULANTS_MEMO_CAP";

pub(crate) fn cap_from_env() -> Option<usize> {
    std::env::var(MEMO_CAP_VAR).ok().and_then(|v| v.trim().parse().ok())
}

/// A synchronized memo table. Lookups clone the value out so that no lock is
/// held while the caller recurses.
#[derive(Debug)]
pub(crate) struct Memo<K, V> {
    map: Mutex<HashMap<K, V>>,
    cap: Option<usize>,
}

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    pub fn new(cap: Option<usize>) -> Self {
        Memo { map: Mutex::new(HashMap::new()), cap }
    }

    pub fn get(&self, key: &K) -> Option<V> {
        self.map.lock().expect("memo lock poisoned").get(key).cloned()
    }

    pub fn insert(&self, key: K, value: V) {
        let mut map = self.map.lock().expect("memo lock poisoned");
        if self.cap.is_none_or(|cap| map.len() < cap) {
            map.insert(key, value);
        }
    }

    #[allow(dead_code)]
    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock poisoned").len()
    }
}
