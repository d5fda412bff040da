use std::collections::BTreeMap;

use roughkit_core::structures::{
    functorial_rough, rough_graph, rough_group_check, rough_matroid, rough_subgroup_check, rough_topology, sheaf_rough_constant,
    simplicial_rough, soft_rough_graph, topological_approx, Arrow, CategoryData, ComplexData, FiniteTopology, GraphData,
    GraphPart, GroupReport, MagmaTable, SheafData,
};
use roughkit_core::Subset;
use serde_json::{json, Value};

use super::hyper::family_of;
use super::with;
use crate::ctx::{cfg_err, str_list, Ctx, Names, Res};
use crate::unknown_model;
use roughkit_core::hyper::ParamKind;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    match model {
        "rough_topology" => {
            let rt = rough_topology(&c.partition("partition")?)?;
            let probes = c
                .get("probes")?
                .as_array()
                .ok_or_else(|| cfg_err("`probes` is a list of sets"))?
                .iter()
                .map(|v| {
                    let s = names.set(v)?;
                    Ok(json!({
                        "set": names.out(&s),
                        "open": rt.is_open(&s)?,
                        "interior": names.out(&rt.interior(&s)?),
                        "closure": names.out(&rt.closure(&s)?),
                    }))
                })
                .collect::<Res<Vec<_>>>()?;
            let opens: Vec<Value> = rt.topology().opens().iter().map(|o| names.out(o)).collect();
            Ok(json!({"probes": probes, "opens": opens}))
        }
        "topological" => {
            let top = topology(c)?;
            names.pair(&topological_approx(&top, &c.target()?)?)
        }
        "rough_graph" | "soft_rough_graph" => {
            let (g, edges) = graph(c)?;
            if model == "rough_graph" {
                let g = g.with_edge_partition(edges.partition(c.get("edge_partition")?)?)?;
                let x = edges.set(c.get("target")?)?;
                let pair = rough_graph(&g, &x)?;
                return Ok(with(edges.pair(&pair)?, [("edges", Value::from(edges.0.clone()))]));
            }
            let vf = family_of(names, c.get("vertex_family")?, ParamKind::Soft)?;
            let ef = match c.opt("edge_family") {
                Some(v) => family_of(&edges, v, ParamKind::Soft)?,
                None => {
                    let params = vf.params().iter().map(|p| roughkit_core::hyper::Param { key: p.key.clone(), members: g.induced_edges(&p.members) }).collect();
                    roughkit_core::hyper::ParamFamily::new(ParamKind::Soft, edges.len(), params)?
                }
            };
            let g = g.with_soft_families(vf, ef)?;
            let x = names.set(c.get("target_vertices")?)?;
            let y = match c.opt("target_edges") {
                Some(v) => edges.set(v)?,
                None => g.induced_edges(&x),
            };
            let (lo, up) = soft_rough_graph(&g, &x, &y)?;
            let part = |p: &GraphPart| json!({"vertices": names.out(&p.vertices), "edges": edges.out(&p.edges)});
            Ok(json!({"lower": part(&lo), "upper": part(&up), "target_edges": edges.out(&y)}))
        }
        "rough_group" | "rough_subgroup" => {
            let m = magma(c)?;
            let rel = c.partition("partition")?;
            let g = c.set("group")?;
            if model == "rough_group" {
                return Ok(group_out(names, &rough_group_check(&m, &rel, &g)?));
            }
            let r = rough_subgroup_check(&m, &rel, &g, &c.set("subgroup")?)?;
            Ok(json!({
                "contained": r.contained,
                "group": group_out(names, &r.group),
                "subgroup": group_out(names, &r.subgroup),
                "is_rough_subgroup": r.is_rough_subgroup,
            }))
        }
        "matroid" => {
            let x = match c.opt("parameter") {
                Some(v) => names.set(v)?,
                None => Subset::empty(c.n()),
            };
            let m = rough_matroid(&c.partition("partition")?, &x)?;
            let probes = match c.opt("probes") {
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| cfg_err("`probes` is a list of sets"))?
                    .iter()
                    .map(|s| {
                        let s = names.set(s)?;
                        Ok(json!({"set": names.out(&s), "independent": m.is_independent(&s)?}))
                    })
                    .collect::<Res<Vec<_>>>()?,
                None => Vec::new(),
            };
            let circuits: Vec<Value> = m.circuits()?.iter().map(|s| names.out(s)).collect();
            let ex = m.exchange_check()?;
            let counter = ex.counterexample.map_or(Value::Null, |(i, j)| json!([names.out(&i), names.out(&j)]));
            Ok(json!({
                "probes": probes,
                "circuits": circuits,
                "independence_system": m.independence_system_check()?,
                "exchange": {"holds": ex.holds, "counterexample": counter},
            }))
        }
        "simplicial" => {
            let facets = names.blocks(c.get("facets")?)?;
            let cx = ComplexData::new(c.n(), facets)?;
            let classes: Vec<Value> = cx.partition().blocks().iter().map(|b| names.out(b)).collect();
            Ok(with(names.pair(&simplicial_rough(&cx, &c.target()?)?)?, [("classes", Value::from(classes))]))
        }
        "functorial" => functorial(c),
        "sheaf" => {
            let s = SheafData::constant(topology(c)?, str_list(c.get("labels")?, "labels")?)?;
            let m = s.sections().len();
            let mut a = Subset::empty(m);
            for e in c.get("target")?.as_array().ok_or_else(|| cfg_err("`target` lists [open, label] sections"))? {
                let (open, label) = section_of(names, e)?;
                a.insert(s.section_index(&open, &label)?);
            }
            let pair = sheaf_rough_constant(&s, &a)?;
            let out = |set: &Subset| {
                Value::from(set.iter().map(|i| {
                    let (o, l) = &s.sections()[i];
                    json!({"open": names.out(o), "label": s.labels[*l]})
                }).collect::<Vec<_>>())
            };
            Ok(json!({"lower": out(&pair.lower), "upper": out(&pair.upper)}))
        }
        _ => Err(unknown_model("structures", model)),
    }
}

fn section_of(names: &Names, e: &Value) -> Res<(Subset, String)> {
    match e.as_array().map(Vec::as_slice) {
        Some([o, Value::String(l)]) => Ok((names.set(o)?, l.clone())),
        _ => Err(cfg_err("sections are [open, label]")),
    }
}

fn topology(c: &Ctx) -> Res<FiniteTopology> {
    Ok(FiniteTopology::new(c.n(), c.names.blocks(c.get("opens")?)?)?)
}

/// Vertices are the universe; edges are `[name, u, v]` or `[u, v]` (named `uv`).
fn graph(c: &Ctx) -> Res<(GraphData, Names)> {
    let mut ids = Vec::new();
    let mut ends = Vec::new();
    for e in c.get("graph_edges")?.as_array().ok_or_else(|| cfg_err("`graph_edges` is a list"))? {
        let parts = str_list(e, "graph_edges")?;
        let (name, u, v) = match parts.as_slice() {
            [u, v] => (format!("{u}{v}"), u, v),
            [n, u, v] => (n.clone(), u, v),
            _ => return Err(cfg_err("edges are [u, v] or [name, u, v]")),
        };
        ids.push(name);
        ends.push((c.names.idx(u)?, c.names.idx(v)?));
    }
    let edges = Names::from_value(&Value::from(ids), "graph_edges")?;
    Ok((GraphData::new(c.n(), ends)?, edges))
}

/// `"cyclic"` for addition modulo |U|, else rows of product names.
fn magma(c: &Ctx) -> Res<MagmaTable> {
    match c.get("operation")? {
        Value::String(s) if s == "cyclic" => Ok(MagmaTable::cyclic(c.n())),
        Value::Array(rows) => {
            let t = rows
                .iter()
                .map(|r| str_list(r, "operation")?.iter().map(|n| c.names.idx(n)).collect())
                .collect::<Res<Vec<Vec<_>>>>()?;
            Ok(MagmaTable::new(t)?)
        }
        _ => Err(cfg_err("`operation` is \"cyclic\" or a Cayley table")),
    }
}

fn group_out(names: &Names, r: &GroupReport) -> Value {
    let nm = |i: usize| Value::from(names.0[i].clone());
    json!({
        "upper": names.out(&r.upper),
        "nonempty": r.nonempty,
        "closure_in_upper": r.closure_in_upper,
        "associative_on_upper": r.associative_on_upper,
        "identity": r.identity.map_or(Value::Null, nm),
        "inverses": r.inverses.as_ref().map_or(Value::Null, |v| v.iter().map(|&(a, b)| json!([nm(a), nm(b)])).collect()),
        "is_rough_group": r.is_rough_group,
    })
}

/// Objects carry their own fiber, partition and target; identities are
/// added as `id_<object>` unless listed. `compose` entries `[g, f, g∘f]`
/// cover the non-identity pairs.
fn functorial(c: &Ctx) -> Res<Value> {
    let objs = c.get("objects")?.as_array().ok_or_else(|| cfg_err("`objects` is a list"))?;
    let mut objects = Vec::new();
    let mut fibers = Vec::new();
    let mut relations = Vec::new();
    let mut targets = Vec::new();
    for o in objs {
        let name = o.get("name").and_then(Value::as_str).ok_or_else(|| cfg_err("object needs `name`"))?;
        let fiber = Names::from_value(o.get("fiber").ok_or_else(|| cfg_err("object needs `fiber`"))?, "fiber")?;
        relations.push(fiber.partition(o.get("partition").ok_or_else(|| cfg_err("object needs `partition`"))?)?);
        targets.push(fiber.set(o.get("target").ok_or_else(|| cfg_err("object needs `target`"))?)?);
        objects.push(name.to_string());
        fibers.push(fiber);
    }
    let obj_idx = |s: &str| objects.iter().position(|o| o == s).ok_or_else(|| cfg_err(format!("unknown object `{s}`")));
    let mut arrows = Vec::new();
    let mut transports = Vec::new();
    for a in c.get("arrows")?.as_array().ok_or_else(|| cfg_err("`arrows` is a list"))? {
        let get = |k: &str| a.get(k).and_then(Value::as_str).ok_or_else(|| cfg_err(format!("arrow needs `{k}`")));
        let (s, t) = (obj_idx(get("source")?)?, obj_idx(get("target")?)?);
        let map = fibers[s].per_element(a.get("map").ok_or_else(|| cfg_err("arrow needs `map`"))?, "map")?;
        transports.push(
            map.into_iter()
                .map(|y| fibers[t].idx(y.as_str().ok_or_else(|| cfg_err("arrow images are names"))?))
                .collect::<Res<Vec<_>>>()?,
        );
        arrows.push(Arrow { name: get("name")?.to_string(), source: s, target: t });
    }
    let mut identities = Vec::new();
    for (o, name) in objects.iter().enumerate() {
        let id = format!("id_{name}");
        let i = match arrows.iter().position(|a| a.name == id) {
            Some(i) => i,
            None => {
                arrows.push(Arrow { name: id, source: o, target: o });
                transports.push((0..fibers[o].len()).collect());
                arrows.len() - 1
            }
        };
        identities.push(i);
    }
    let arrow_idx = |s: &str| arrows.iter().position(|a| a.name == s).ok_or_else(|| cfg_err(format!("unknown arrow `{s}`")));
    let mut compose = BTreeMap::new();
    for (f, af) in arrows.iter().enumerate() {
        compose.insert((f, identities[af.source]), f);
        compose.insert((identities[af.target], f), f);
    }
    if let Some(v) = c.opt("compose") {
        for e in v.as_array().ok_or_else(|| cfg_err("`compose` lists [g, f, g∘f]"))? {
            match str_list(e, "compose")?.as_slice() {
                [g, f, h] => {
                    compose.insert((arrow_idx(g)?, arrow_idx(f)?), arrow_idx(h)?);
                }
                _ => return Err(cfg_err("`compose` entries are [g, f, g∘f]")),
            }
        }
    }
    let cat = CategoryData { objects, arrows, identities, compose, fibers: fibers.iter().map(Names::len).collect(), transports, relations, targets };
    let r = functorial_rough(&cat)?;
    let items = r
        .approximations
        .iter()
        .zip(&fibers)
        .map(|((k, p), names)| Ok(with(names.pair(p)?, [("key", Value::from(k.clone()))])))
        .collect::<Res<Vec<_>>>()?;
    Ok(json!({
        "items": items,
        "functor_laws_ok": r.functor_laws_ok,
        "functor_violations": r.functor_violations,
        "relation_compatible": r.relation_compatible,
        "incompatible_arrows": r.incompatible_arrows,
    }))
}
