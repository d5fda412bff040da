use roughkit_core::granulation::{DistanceMatrix, MetricSpaceData};
use roughkit_core::multiview::{
    boundary_cardinality, graphic_rough, iterated_multirough, metarough, mgrs, multirough, persistent,
    refined_chain, AttributeGraph, IndexedApproximation, MetricSource, MgrsMode, Nested, RoughObject,
    RoughObjectSpace, ScaleFamily, Subgraph, Targets,
};
use roughkit_core::indiscernibility;
use serde_json::{json, Map, Value};

use crate::ctx::{cfg_err, f64_list, matrix, str_list, Ctx, Names, Res};
use crate::unknown_model;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    match model {
        // dynamic, tree and cluster views are keyed families of the same shape
        "multirough" | "dynamic" | "tree" | "cluster" => {
            let rels = c.keyed_partitions("relations")?;
            let pairs = match c.opt("targets") {
                Some(t) => {
                    let ts = t
                        .as_object()
                        .ok_or_else(|| cfg_err("`targets` maps relation keys to target sets"))?
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), c.target_of(v)?)))
                        .collect::<Res<Vec<_>>>()?;
                    multirough(&rels, Targets::PerKey(&ts))?
                }
                None => multirough(&rels, Targets::Single(&c.target()?))?,
            };
            keyed(names, &pairs)
        }
        "graphic" => {
            let t = c.table()?;
            let verts = str_list(c.get("vertices")?, "vertices")?;
            let vidx = |v: &str| verts.iter().position(|x| x == v).ok_or_else(|| cfg_err(format!("`{v}` is not a graph vertex")));
            let edge_list = |v: &Value| -> Res<Vec<(usize, usize)>> {
                v.as_array()
                    .ok_or_else(|| cfg_err("edges are a list of [a, b] pairs"))?
                    .iter()
                    .map(|e| match str_list(e, "edge")?.as_slice() {
                        [a, b] => Ok((vidx(a)?, vidx(b)?)),
                        _ => Err(cfg_err("edges are [a, b] pairs")),
                    })
                    .collect()
            };
            let edges = edge_list(c.get("edges")?)?;
            let partitions = verts.iter().map(|v| indiscernibility(t, &[v])).collect::<Result<Vec<_>, _>>()?;
            let g = AttributeGraph { names: verts.clone(), partitions, edges };
            let subs = c
                .get("subgraphs")?
                .as_array()
                .ok_or_else(|| cfg_err("`subgraphs` must be a list"))?
                .iter()
                .map(|s| {
                    let key = s.get("key").and_then(Value::as_str).ok_or_else(|| cfg_err("subgraph needs `key`"))?;
                    let vs = str_list(s.get("vertices").ok_or_else(|| cfg_err("subgraph needs `vertices`"))?, "vertices")?
                        .iter()
                        .map(|v| vidx(v))
                        .collect::<Res<Vec<_>>>()?;
                    // induced edges unless listed
                    let es = match s.get("edges") {
                        Some(e) => edge_list(e)?,
                        None => g.edges.iter().copied().filter(|(a, b)| vs.contains(a) && vs.contains(b)).collect(),
                    };
                    Ok((key.to_string(), Subgraph { vertices: vs, edges: es }))
                })
                .collect::<Res<Vec<_>>>()?;
            keyed(names, &graphic_rough(&g, &subs, &c.target()?)?)
        }
        "iterated" => {
            let rels = c.keyed_partitions("relations")?;
            let keys: Vec<&str> = rels.iter().map(|(k, _)| k.as_str()).collect();
            let nested = iterated_multirough(&rels, &c.target()?, c.usize("depth")?)?;
            Ok(json!({"value": nested_out(names, &keys, &nested)}))
        }
        "mgrs" => {
            let mode = match c.str_or("mode", "optimistic")? {
                "optimistic" => MgrsMode::Optimistic,
                "pessimistic" => MgrsMode::Pessimistic,
                m => return Err(cfg_err(format!("unknown mgrs mode `{m}`"))),
            };
            let rels = c.keyed_partitions("relations")?;
            names.pair(&mgrs(&rels, &c.target()?, mode)?)
        }
        "refined" => {
            let (pairs, rep) = refined_chain(&c.keyed_partitions("relations")?, &c.target()?)?;
            let mut out = keyed(names, &pairs)?;
            out["nesting"] = json!({"lowers_shrink": rep.lowers_shrink, "uppers_grow": rep.uppers_grow, "passed": rep.passed()});
            Ok(out)
        }
        "persistent" => {
            let metric = match c.opt("vectors") {
                Some(v) => MetricSource::Vectors(MetricSpaceData::new(
                    if v.is_array() { matrix(v, "vectors")? } else { per_vectors(names, v)? },
                    c.f64_or("p", 2.0)?,
                )?),
                None => MetricSource::Distances(DistanceMatrix::new(c.sym_matrix("distances", 0.0)?)?),
            };
            let family = ScaleFamily { metric, grid: f64_list(c.get("grid")?, "grid")? };
            keyed(names, &persistent(&family, &c.target()?)?)
        }
        "metarough" => {
            let space = RoughObjectSpace::new(c.partition("partition")?)?;
            match c.str_or("descriptor", "boundary_cardinality")? {
                "boundary_cardinality" => {}
                d => return Err(cfg_err(format!("unknown meta-descriptor `{d}`"))),
            }
            // the target family is given by the sets whose rough objects it holds
            let fam = c
                .get("family")?
                .as_array()
                .ok_or_else(|| cfg_err("`family` must be a list of sets"))?
                .iter()
                .map(|s| {
                    let p = roughkit_core::approx::pawlak(&space.base, &names.set(s)?)?;
                    Ok((p.lower, p.upper))
                })
                .collect::<Res<Vec<RoughObject>>>()?;
            let (lo, up) = metarough(&space, &fam, &boundary_cardinality)?;
            let mut classes = Map::new();
            for r in &space.objects {
                let k = boundary_cardinality(r);
                let n = classes.get(&k).and_then(Value::as_u64).unwrap_or(0);
                classes.insert(k, (n + 1).into());
            }
            let objs = |v: &[RoughObject]| Value::from(v.iter().map(|r| json!({"lower": names.out(&r.0), "upper": names.out(&r.1)})).collect::<Vec<_>>());
            Ok(json!({
                "objects": space.objects.len(),
                "class_sizes": classes,
                "lower": objs(&lo),
                "upper": objs(&up),
                "lower_count": lo.len(),
                "upper_count": up.len(),
            }))
        }
        _ => Err(unknown_model("multiview", model)),
    }
}

pub(crate) fn keyed(names: &Names, pairs: &IndexedApproximation) -> Res<Value> {
    let items = pairs
        .iter()
        .map(|(k, p)| {
            let mut v = names.pair(p)?;
            v["key"] = k.clone().into();
            Ok(v)
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(json!({"items": items}))
}

fn nested_out(names: &Names, keys: &[&str], n: &Nested) -> Value {
    match n {
        Nested::Leaf(s) => names.out(s),
        Nested::Node(v) => Value::Object(
            keys.iter()
                .zip(v)
                .map(|(k, (lo, up))| (k.to_string(), json!({"lower": nested_out(names, keys, lo), "upper": nested_out(names, keys, up)})))
                .collect(),
        ),
    }
}

fn per_vectors(names: &Names, v: &Value) -> Res<Vec<Vec<f64>>> {
    names.per_element(v, "vectors")?.into_iter().map(|r| f64_list(r, "vectors")).collect()
}

