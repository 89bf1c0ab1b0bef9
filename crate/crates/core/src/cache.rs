//! Process-wide cache for expensive immutable artifacts (quadrature rules,
//! normalization integrals), keyed by value type plus a small integer key.

use crate::error::Result;
use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Key = (TypeId, &'static str, u64);
type Store = Mutex<HashMap<Key, Arc<dyn Any + Send + Sync>>>;

fn store() -> &'static Store {
    static STORE: OnceLock<Store> = OnceLock::new();
    STORE.get_or_init(Default::default)
}

/// Returns the cached value for (V, tag, key), building it on a miss. A
/// concurrent duplicate build is possible but harmless: builders are pure and
/// deterministic, and the first insert wins.
pub(crate) fn get_or_build<V, F>(tag: &'static str, key: u64, build: F) -> Result<Arc<V>>
where
    V: Any + Send + Sync,
    F: FnOnce() -> Result<V>,
{
    let k = (TypeId::of::<V>(), tag, key);
    if let Some(hit) = store().lock().unwrap().get(&k) {
        return Ok(hit.clone().downcast::<V>().unwrap());
    }
    let built: Arc<V> = Arc::new(build()?);
    let mut guard = store().lock().unwrap();
    let entry = guard
        .entry(k)
        .or_insert_with(|| built.clone() as Arc<dyn Any + Send + Sync>);
    Ok(entry.clone().downcast::<V>().unwrap())
}
