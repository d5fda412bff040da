//! Reading config values against a named universe, and writing results back.

use roughkit_core::approx::{regions, ApproximationPair};
use roughkit_core::{BinaryRel, InformationTable, Partition, Rational, Subset};
use serde_json::{json, Map, Value};

use crate::CliError;

pub type Res<T> = std::result::Result<T, CliError>;

pub fn cfg_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Element names of one universe.
#[derive(Debug, Clone)]
pub struct Names(pub Vec<String>);

impl Names {
    pub fn from_value(v: &Value, what: &str) -> Res<Names> {
        let names = str_list(v, what)?;
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(CliError::Core(roughkit_core::Error::DuplicateElement(n.clone())));
            }
        }
        Ok(Names(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn idx(&self, name: &str) -> Res<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CliError::Core(roughkit_core::Error::UnknownElement(name.to_string())))
    }

    pub fn set(&self, v: &Value) -> Res<Subset> {
        let items = str_list(v, "set")?;
        let idx: Vec<usize> = items.iter().map(|s| self.idx(s)).collect::<Res<_>>()?;
        Ok(Subset::from_indices(self.len(), idx))
    }

    pub fn blocks(&self, v: &Value) -> Res<Vec<Subset>> {
        v.as_array().ok_or_else(|| cfg_err("expected a list of blocks"))?.iter().map(|b| self.set(b)).collect()
    }

    pub fn partition(&self, v: &Value) -> Res<Partition> {
        Ok(Partition::from_blocks(self.len(), self.blocks(v)?)?)
    }

    /// `{name: value}` in universe order; every element must appear.
    pub fn per_element<'a>(&self, v: &'a Value, what: &str) -> Res<Vec<&'a Value>> {
        let obj = v.as_object().ok_or_else(|| cfg_err(format!("`{what}` must map element names to values")))?;
        for k in obj.keys() {
            self.idx(k)?;
        }
        self.0
            .iter()
            .map(|n| obj.get(n).ok_or_else(|| cfg_err(format!("`{what}` has no entry for `{n}`"))))
            .collect()
    }

    pub fn out(&self, s: &Subset) -> Value {
        Value::from(s.iter().map(|i| self.0[i].clone()).collect::<Vec<_>>())
    }

    pub fn per_elem_out(&self, vals: impl IntoIterator<Item = Value>) -> Value {
        Value::Object(self.0.iter().cloned().zip(vals).collect())
    }

    /// Lower/upper pair with its regions and accuracy.
    pub fn pair(&self, p: &ApproximationPair) -> Res<Value> {
        let rep = regions(p)?;
        Ok(json!({
            "lower": self.out(&p.lower),
            "upper": self.out(&p.upper),
            "boundary": self.out(&p.boundary()),
            "regions": {
                "pos": self.out(&rep.regions.pos),
                "bnd": self.out(&rep.regions.bnd),
                "neg": self.out(&rep.regions.neg),
            },
            "accuracy": rep.accuracy.to_string(),
            "definable": rep.definable,
        }))
    }
}

pub fn str_list(v: &Value, what: &str) -> Res<Vec<String>> {
    v.as_array()
        .ok_or_else(|| cfg_err(format!("`{what}` must be a list of names")))?
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(cfg_err(format!("`{what}` must hold names"))),
        })
        .collect()
}

pub fn f64_of(v: &Value, what: &str) -> Res<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| cfg_err(format!("`{what}` is not a number"))),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) => s
            .parse::<Rational>()
            .map(|r| r.to_f64())
            .or_else(|_| s.parse::<f64>().map_err(|_| cfg_err(format!("`{what}` is not a number")))),
        _ => Err(cfg_err(format!("`{what}` is not a number"))),
    }
}

/// Exact rationals come from strings ("3/5", "0.2") or integers, never floats.
pub fn rational_of(v: &Value, what: &str) -> Res<Rational> {
    match v {
        Value::String(s) => Ok(s.parse::<Rational>()?),
        Value::Number(n) if n.is_u64() => Ok(Rational::of(n.as_u64().unwrap() as usize, 1)),
        _ => Err(cfg_err(format!("`{what}` must be a rational string such as \"1/5\""))),
    }
}

pub fn f64_list(v: &Value, what: &str) -> Res<Vec<f64>> {
    v.as_array().ok_or_else(|| cfg_err(format!("`{what}` must be a list")))?.iter().map(|x| f64_of(x, what)).collect()
}

pub fn matrix(v: &Value, what: &str) -> Res<Vec<Vec<f64>>> {
    v.as_array().ok_or_else(|| cfg_err(format!("`{what}` must be a matrix")))?.iter().map(|r| f64_list(r, what)).collect()
}

pub fn rat(r: Rational) -> Value {
    Value::String(r.to_string())
}

/// One model invocation: config, optional table, and the primary universe.
pub struct Ctx<'a> {
    pub cfg: &'a Map<String, Value>,
    pub table: Option<&'a InformationTable>,
    pub names: Names,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a Value, table: Option<&'a InformationTable>) -> Res<Ctx<'a>> {
        let cfg = cfg.as_object().ok_or_else(|| cfg_err("config must be a JSON object"))?;
        let names = match (table, cfg.get("universe")) {
            (Some(t), _) => Names(t.universe().ids().to_vec()),
            (None, Some(u)) => Names::from_value(u, "universe")?,
            (None, None) => Names(Vec::new()),
        };
        Ok(Ctx { cfg, table, names })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, key: &str) -> Res<&'a Value> {
        self.cfg.get(key).ok_or_else(|| cfg_err(format!("missing `{key}`")))
    }

    pub fn opt(&self, key: &str) -> Option<&'a Value> {
        self.cfg.get(key)
    }

    pub fn table(&self) -> Res<&'a InformationTable> {
        self.table.ok_or_else(|| cfg_err("this model needs --table"))
    }

    pub fn set(&self, key: &str) -> Res<Subset> {
        self.names.set(self.get(key)?)
    }

    /// A name list, or `{"attr": .., "value": ..}` against the table.
    pub fn target_of(&self, v: &Value) -> Res<Subset> {
        if let Some(o) = v.as_object() {
            let attr = o.get("attr").and_then(Value::as_str).ok_or_else(|| cfg_err("target needs `attr`"))?;
            let val = match o.get("value") {
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
                None => return Err(cfg_err("target needs `value`")),
            };
            return Ok(self.table()?.select(attr, &val)?);
        }
        self.names.set(v)
    }

    pub fn target(&self) -> Res<Subset> {
        self.target_of(self.get("target")?)
    }

    /// Block list, or `{"attributes": [..]}` read from the table.
    pub fn partition_of(&self, v: &Value) -> Res<Partition> {
        if let Some(attrs) = v.as_object().and_then(|o| o.get("attributes")) {
            let attrs = str_list(attrs, "attributes")?;
            return Ok(roughkit_core::indiscernibility(self.table()?, &attrs)?);
        }
        self.names.partition(v)
    }

    pub fn partition(&self, key: &str) -> Res<Partition> {
        self.partition_of(self.get(key)?)
    }

    /// `[{"key": .., "partition": ..}, ..]` keeping the given order.
    pub fn keyed_partitions(&self, key: &str) -> Res<Vec<(String, Partition)>> {
        self.get(key)?
            .as_array()
            .ok_or_else(|| cfg_err(format!("`{key}` must be a list of keyed partitions")))?
            .iter()
            .map(|e| {
                let k = e.get("key").and_then(Value::as_str).ok_or_else(|| cfg_err("relation entry needs `key`"))?;
                let p = self.partition_of(e.get("partition").ok_or_else(|| cfg_err("relation entry needs `partition`"))?)?;
                Ok((k.to_string(), p))
            })
            .collect()
    }

    /// `{name: [successors]}` (missing names have none) or `[[x, y], ..]`.
    pub fn relation_of(&self, v: &Value) -> Res<BinaryRel> {
        let n = self.n();
        if let Some(obj) = v.as_object() {
            let mut succ = vec![Subset::empty(n); n];
            for (k, s) in obj {
                succ[self.names.idx(k)?] = self.names.set(s)?;
            }
            return Ok(BinaryRel::from_fn(n, |x, y| succ[x].contains(y)));
        }
        let pairs = v
            .as_array()
            .ok_or_else(|| cfg_err("relation must be a successor map or a pair list"))?
            .iter()
            .map(|p| match str_list(p, "pair")?.as_slice() {
                [a, b] => Ok((self.names.idx(a)?, self.names.idx(b)?)),
                _ => Err(cfg_err("relation pairs need exactly two names")),
            })
            .collect::<Res<Vec<_>>>()?;
        Ok(BinaryRel::from_pairs(n, &pairs)?)
    }

    pub fn relation(&self, key: &str) -> Res<BinaryRel> {
        self.relation_of(self.get(key)?)
    }

    pub fn f64(&self, key: &str) -> Res<f64> {
        f64_of(self.get(key)?, key)
    }

    pub fn rational(&self, key: &str) -> Res<Rational> {
        rational_of(self.get(key)?, key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Res<f64> {
        self.opt(key).map_or(Ok(default), |v| f64_of(v, key))
    }

    pub fn usize(&self, key: &str) -> Res<usize> {
        self.get(key)?.as_u64().map(|v| v as usize).ok_or_else(|| cfg_err(format!("`{key}` must be a whole number")))
    }

    pub fn str(&self, key: &str) -> Res<&'a str> {
        self.get(key)?.as_str().ok_or_else(|| cfg_err(format!("`{key}` must be a string")))
    }

    pub fn str_or(&self, key: &str, default: &'a str) -> Res<&'a str> {
        match self.opt(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| cfg_err(format!("`{key}` must be a string"))),
        }
    }

    /// Square matrix given as `{row_name: {col_name: value}}` or a nested list.
    pub fn elem_matrix(&self, key: &str) -> Res<Vec<Vec<f64>>> {
        let v = self.get(key)?;
        if v.is_array() {
            return matrix(v, key);
        }
        self.names
            .per_element(v, key)?
            .into_iter()
            .map(|row| self.names.per_element(row, key)?.into_iter().map(|x| f64_of(x, key)).collect())
            .collect()
    }

    /// Full matrix, or `{"pairs": [[x, y, v], ..], "default": d}` for a
    /// symmetric matrix with `diag` on the diagonal.
    pub fn sym_matrix(&self, key: &str, diag: f64) -> Res<Vec<Vec<f64>>> {
        let Some(sparse) = self.get(key)?.as_object().filter(|o| o.contains_key("pairs")) else {
            return self.elem_matrix(key);
        };
        let n = self.n();
        let d = f64_of(sparse.get("default").ok_or_else(|| cfg_err(format!("`{key}` needs `default`")))?, key)?;
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { diag } else { d }).collect()).collect();
        for e in sparse["pairs"].as_array().ok_or_else(|| cfg_err(format!("`{key}.pairs` must be a list")))? {
            let row = e.as_array().filter(|r| r.len() == 3).ok_or_else(|| cfg_err("pairs are [x, y, value]"))?;
            let ends = str_list(&Value::from(row[..2].to_vec()), key)?;
            let (i, j) = (self.names.idx(&ends[0])?, self.names.idx(&ends[1])?);
            let v = f64_of(&row[2], key)?;
            m[i][j] = v;
            m[j][i] = v;
        }
        Ok(m)
    }

    pub fn elem_f64(&self, key: &str) -> Res<Vec<f64>> {
        self.names.per_element(self.get(key)?, key)?.into_iter().map(|x| f64_of(x, key)).collect()
    }
}
