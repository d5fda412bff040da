use roughkit_core::hyper::{
    param_family_approx, soft_rough, strait_approx, superhyper_approx, superhyper_lift, Level, Param, ParamFamily,
    ParamKind,
};
use serde_json::{json, Value};

use super::multiview::keyed;
use super::with;
use crate::ctx::{cfg_err, str_list, Ctx, Names, Res};
use crate::unknown_model;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    match model {
        "hyper" => {
            let fam = match c.opt("attributes") {
                Some(a) => {
                    let attrs = str_list(a, "attributes")?;
                    let refs: Vec<&str> = attrs.iter().map(String::as_str).collect();
                    ParamFamily::from_table(c.table()?, &refs)?
                }
                None => family(c, ParamKind::Hyper)?,
            };
            let mut pairs = param_family_approx(&fam, &c.partition("partition")?)?;
            if let Some(keep) = c.opt("parameters") {
                // restrict the report to the listed tuples
                let keep: Vec<String> = keep
                    .as_array()
                    .ok_or_else(|| cfg_err("`parameters` must be a list of tuples"))?
                    .iter()
                    .map(|t| str_list(t, "parameters").map(|v| v.join(",")))
                    .collect::<Res<_>>()?;
                if let Some(k) = keep.iter().find(|k| !pairs.iter().any(|(l, _)| l == *k)) {
                    return Err(cfg_err(format!("parameter `{k}` is not in the family")));
                }
                pairs.retain(|(l, _)| keep.contains(l));
            }
            let mut out = keyed(names, &pairs)?;
            for item in out["items"].as_array_mut().unwrap() {
                let label = item["key"].as_str().unwrap_or_default().to_string();
                if let Some(p) = fam.params().iter().find(|p| p.label() == label) {
                    item["image"] = names.out(&p.members);
                }
            }
            Ok(out)
        }
        "soft" | "soft_expert" => {
            let kind = if model == "soft" { ParamKind::Soft } else { ParamKind::Expert };
            let fam = family(c, kind)?;
            let b = c.target()?;
            let pair = soft_rough(&fam, &b)?;
            let witnesses: Vec<Value> =
                fam.params().iter().filter(|p| p.members.is_subset(&b)).map(|p| p.label().into()).collect();
            Ok(with(names.pair(&pair)?, [("witnesses", Value::from(witnesses))]))
        }
        "strait" => {
            let (pair, bnd) = strait_approx(&family(c, ParamKind::Strait)?, &c.target()?)?;
            Ok(with(names.pair(&pair)?, [("boundary", names.out(&bnd))]))
        }
        "superhyper" => {
            let k = c.usize("k")?;
            let lift = superhyper_lift(&c.partition("partition")?, k)?;
            let target = level_of(names, c.get("target")?)?;
            let (lo, up) = superhyper_approx(&lift, &target)?;
            let mut out = json!({
                "lower": lo.iter().map(|l| level_out(names, l)).collect::<Vec<_>>(),
                "upper": up.iter().map(|l| level_out(names, l)).collect::<Vec<_>>(),
            });
            if let Some(ps) = c.opt("probes") {
                // class and membership verdicts for level-k elements
                let ps = ps.as_array().ok_or_else(|| cfg_err("`probes` is a list of level-k elements"))?;
                let verdicts = ps
                    .iter()
                    .map(|p| {
                        let probe = level_of(names, p)?;
                        let class = lift.class_of(&probe)?;
                        Ok(json!({
                            "element": level_out(names, &probe),
                            "class": class.iter().map(|l| level_out(names, l)).collect::<Vec<_>>(),
                            "class_size": class.len(),
                            "in_lower": lo.contains(&probe),
                            "in_upper": up.contains(&probe),
                        }))
                    })
                    .collect::<Res<Vec<_>>>()?;
                out["probes"] = verdicts.into();
            }
            Ok(out)
        }
        _ => Err(unknown_model("hyper", model)),
    }
}

/// `{"e1": [..], ..}` or `[{"key": [..], "members": [..]}, ..]`.
fn family(c: &Ctx, kind: ParamKind) -> Res<ParamFamily> {
    family_of(&c.names, c.get("family")?, kind)
}

/// `{label: members}` or `[{key, members}]`.
pub(crate) fn family_of(names: &Names, v: &Value, kind: ParamKind) -> Res<ParamFamily> {
    let params = if let Some(o) = v.as_object() {
        o.iter().map(|(k, m)| Ok(Param { key: vec![k.clone()], members: names.set(m)? })).collect::<Res<Vec<_>>>()?
    } else {
        v.as_array()
            .ok_or_else(|| cfg_err("`family` must be an object or a list"))?
            .iter()
            .map(|p| {
                let key = match p.get("key") {
                    Some(Value::String(s)) => vec![s.clone()],
                    Some(k) => str_list(k, "key")?,
                    None => return Err(cfg_err("family entry needs `key`")),
                };
                Ok(Param { key, members: names.set(p.get("members").ok_or_else(|| cfg_err("family entry needs `members`"))?)? })
            })
            .collect::<Res<Vec<_>>>()?
    };
    Ok(ParamFamily::new(kind, names.len(), params)?)
}

fn level_of(names: &Names, v: &Value) -> Res<Level> {
    match v {
        Value::String(s) => Ok(Level::Base(names.idx(s)?)),
        Value::Array(items) => Ok(Level::set(items.iter().map(|x| level_of(names, x)).collect::<Res<_>>()?)),
        _ => Err(cfg_err("levels are names or nested lists of names")),
    }
}

fn level_out(names: &Names, l: &Level) -> Value {
    match l {
        Level::Base(x) => names.0[*x].clone().into(),
        Level::Set(v) => Value::from(v.iter().map(|x| level_out(names, x)).collect::<Vec<_>>()),
    }
}
