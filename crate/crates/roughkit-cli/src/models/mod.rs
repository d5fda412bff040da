pub mod approx;
pub mod decision;
pub mod hyper;
pub mod multiview;
pub mod structures;
pub mod valued;

use serde_json::Value;

/// Add extra keys to an object payload.
pub(crate) fn with(mut v: Value, extra: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    if let Some(o) = v.as_object_mut() {
        for (k, x) in extra {
            o.insert(k.to_string(), x);
        }
    }
    v
}
