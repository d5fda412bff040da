use roughkit_core::approx::{
    block_approx, block_ratio, contra_from_kernels, dp_robust, hesitant_two_tier, pawlak, pointwise_approx,
    ratio_approx, regions, s_transfer_approx, sequential_approx, split_entropy, two_tier_approx, BlockMode,
    ContraKernels, RatioScheme, TwoTierData,
};
use roughkit_core::granulation::{
    maximal_tolerance_classes, DistanceMatrix, GranuleFamily, IntervalData, MetricSpaceData, NeighborhoodOperator,
    SimilarityMatrix,
};
use roughkit_core::Subset;
use serde_json::{json, Value};

use super::with;
use crate::ctx::{cfg_err, f64_list, f64_of, matrix, rat, rational_of, Ctx, Names, Res};
use crate::unknown_model;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    match model {
        "pawlak" | "complex_code" => {
            let pair = pawlak(&c.partition("partition")?, &c.target()?)?;
            let code = regions(&pair)?.code;
            Ok(with(names.pair(&pair)?, [("code", names.per_elem_out((0..c.n()).map(|e| code.symbol(e).into())))]))
        }
        "graded" => ratio(c, RatioScheme::Graded { k: c.usize("k")? }),
        "vprs" => ratio(c, RatioScheme::Vprs { beta: c.rational("beta")? }),
        "probabilistic" => ratio(c, RatioScheme::Probabilistic { alpha: c.rational("alpha")?, beta: c.rational("beta")? }),
        "local" => ratio(c, RatioScheme::Local { alpha: c.rational("alpha")?, beta: c.rational("beta")? }),
        "entropy" => {
            let (p, x) = (c.partition("partition")?, c.target()?);
            let pair = ratio_approx(&p, &x, &RatioScheme::Entropy { alpha: c.rational("alpha")?, theta: c.f64("theta")? })?;
            let blocks: Vec<Value> = p
                .blocks()
                .iter()
                .map(|b| {
                    let r = block_ratio(b, &x);
                    json!({"block": names.out(b), "ratio": rat(r), "entropy": split_entropy(r)})
                })
                .collect();
            Ok(with(names.pair(&pair)?, [("blocks", Value::from(blocks))]))
        }
        "covering" => {
            let fam = GranuleFamily::new(c.n(), names.blocks(c.get("covering")?)?)?;
            let mode = match c.str_or("mode", "tight")? {
                "tight" => BlockMode::Tight,
                "loose" => BlockMode::Loose,
                "generated" => BlockMode::Generated,
                m => return Err(cfg_err(format!("unknown covering mode `{m}`"))),
            };
            let pair = block_approx(&fam, &c.target()?, mode)?;
            Ok(with(names.pair(&pair)?, [("is_covering", fam.is_covering().into())]))
        }
        "near" => {
            let data = MetricSpaceData::new(vectors(c, "probes")?, c.f64_or("p", 2.0)?)?;
            let op = NeighborhoodOperator::descriptive_tolerance(&data, c.f64("eps")?)?;
            let classes = maximal_tolerance_classes(&op)?;
            let pair = block_approx(&classes, &c.target()?, BlockMode::Generated)?;
            Ok(with(names.pair(&pair)?, [("classes", granules(names, classes.blocks()))]))
        }
        "directed" => {
            let fam = GranuleFamily::directed_granules(&c.relation("relation")?)?;
            let pair = block_approx(&fam, &c.target()?, BlockMode::Generated)?;
            Ok(with(names.pair(&pair)?, [("granules", names.per_elem_out(fam.blocks().iter().map(|b| names.out(b))))]))
        }
        "tolerance" | "metric" => {
            let data = MetricSpaceData::new(vectors(c, "vectors")?, c.f64_or("p", 2.0)?)?;
            pointwise(c, NeighborhoodOperator::metric_ball(&data, c.f64("delta")?)?)
        }
        "distance" => pointwise(c, NeighborhoodOperator::distance_ball(&DistanceMatrix::new(c.sym_matrix("distances", 0.0)?)?, c.f64("delta")?)?),
        "similarity" => {
            let s = SimilarityMatrix::new(c.elem_matrix("similarity")?)?;
            pointwise(c, NeighborhoodOperator::similarity_threshold(&s, c.f64("tau")?)?)
        }
        "interval" => {
            let cells = names
                .per_element(c.get("intervals")?, "intervals")?
                .into_iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| cfg_err("each element needs a list of [low, high] intervals"))?
                        .iter()
                        .map(|iv| match f64_list(iv, "interval")?.as_slice() {
                            [l, u] => Ok((*l, *u)),
                            _ => Err(cfg_err("an interval is [low, high]")),
                        })
                        .collect::<Res<Vec<_>>>()
                })
                .collect::<Res<Vec<_>>>()?;
            pointwise(c, NeighborhoodOperator::interval_overlap(&IntervalData::new(cells)?))
        }
        "preorder" => {
            let rel = match c.opt("order_by") {
                Some(v) => {
                    let key = names.per_element(v, "order_by")?.into_iter().map(|x| f64_of(x, "order_by")).collect::<Res<Vec<_>>>()?;
                    roughkit_core::BinaryRel::from_fn(c.n(), |x, y| key[x] <= key[y])
                }
                None => c.relation("relation")?,
            };
            let op = match c.str_or("direction", "up")? {
                "up" => NeighborhoodOperator::preorder_up(&rel)?,
                "down" => NeighborhoodOperator::preorder_down(&rel)?,
                d => return Err(cfg_err(format!("direction must be up or down, got `{d}`"))),
            };
            pointwise(c, op)
        }
        "relation" => pointwise(c, NeighborhoodOperator::successor(&c.relation("relation")?)),
        "cross" => {
            // elements of `universe` map into a second universe `codomain`
            let cod = Names::from_value(c.get("codomain")?, "codomain")?;
            let images = names
                .per_element(c.get("images")?, "images")?
                .into_iter()
                .map(|s| cod.set(s))
                .collect::<Res<Vec<_>>>()?;
            let op = NeighborhoodOperator::cross(cod.len(), images)?;
            let pair = pointwise_approx(&op, &cod.set(c.get("target")?)?)?;
            Ok(json!({
                "lower": names.out(&pair.lower),
                "upper": names.out(&pair.upper),
                "boundary": names.out(&pair.boundary()),
            }))
        }
        "sequential" => {
            let rels = c
                .get("relations")?
                .as_array()
                .ok_or_else(|| cfg_err("`relations` must be a list of partitions"))?
                .iter()
                .map(|p| c.partition_of(p))
                .collect::<Res<Vec<_>>>()?;
            names.pair(&sequential_approx(&rels, &c.target()?)?)
        }
        "s_transfer" => {
            let mut f = vec![None; c.n()];
            let map = c.get("transfer")?.as_object().ok_or_else(|| cfg_err("`transfer` maps names to names"))?;
            for (k, v) in map {
                let to = v.as_str().ok_or_else(|| cfg_err("transfer images are names"))?;
                f[names.idx(k)?] = Some(names.idx(to)?);
            }
            let r = s_transfer_approx(&c.partition("partition")?, &f, &c.target()?)?;
            Ok(with(names.pair(&r.pair)?, [("x_f", names.out(&r.x_f)), ("x_circ", names.out(&r.x_circ))]))
        }
        "contra" => {
            let c_r = c.sym_matrix("c_r", 0.0)?;
            let k = ContraKernels { c_r, c_u: c.elem_f64("c_u")?, alpha: c.f64("alpha")?, beta: c.f64("beta")?, gamma: c.f64("gamma")? };
            two_tier(names, &contra_from_kernels(&k)?)
        }
        "indeterminate" | "two_tier" => {
            let d = TwoTierData::new(
                NeighborhoodOperator::from_partition(&c.partition("def_partition")?),
                NeighborhoodOperator::from_partition(&c.partition("pos_partition")?),
                c.target_of(c.get("x_def")?)?,
                c.target_of(c.get("x_pos")?)?,
            )?;
            two_tier(names, &d)
        }
        "hesitant" => {
            let n = c.n();
            // missing relation entries default to {0}, the diagonal to {1}
            let mut h_r: Vec<Vec<Vec<f64>>> = (0..n).map(|i| (0..n).map(|j| vec![if i == j { 1.0 } else { 0.0 }]).collect()).collect();
            let rows = c.get("h_r")?.as_object().ok_or_else(|| cfg_err("`h_r` maps names to {name: degrees}"))?;
            for (x, row) in rows {
                let row = row.as_object().ok_or_else(|| cfg_err("`h_r` rows map names to degree lists"))?;
                for (y, h) in row {
                    let (i, j) = (names.idx(x)?, names.idx(y)?);
                    h_r[i][j] = f64_list(h, "h_r")?;
                }
            }
            let h_u = names.per_element(c.get("h_u")?, "h_u")?.into_iter().map(|h| f64_list(h, "h_u")).collect::<Res<Vec<_>>>()?;
            two_tier(names, &hesitant_two_tier(&h_r, &h_u)?)
        }
        "dp" => {
            let per = |key: &str| -> Res<Vec<_>> {
                names.per_element(c.get(key)?, key)?.into_iter().map(|v| rational_of(v, key)).collect()
            };
            names.pair(&dp_robust(&per("p_lower")?, &per("p_upper")?, c.rational("eta")?)?)
        }
        _ => Err(unknown_model("approx", model)),
    }
}

fn ratio(c: &Ctx, scheme: RatioScheme) -> Res<Value> {
    c.names.pair(&ratio_approx(&c.partition("partition")?, &c.target()?, &scheme)?)
}

fn pointwise(c: &Ctx, op: NeighborhoodOperator) -> Res<Value> {
    let pair = pointwise_approx(&op, &c.target()?)?;
    let nb = c.names.per_elem_out(op.sets().iter().map(|s| c.names.out(s)));
    Ok(with(c.names.pair(&pair)?, [("neighborhoods", nb)]))
}

fn two_tier(names: &Names, d: &TwoTierData) -> Res<Value> {
    let nb = |op: &NeighborhoodOperator| names.per_elem_out(op.sets().iter().map(|s| names.out(s)));
    Ok(with(
        names.pair(&two_tier_approx(d))?,
        [("x_def", names.out(&d.x_def)), ("x_pos", names.out(&d.x_pos)), ("n_def", nb(&d.n_def)), ("n_pos", nb(&d.n_pos))],
    ))
}

fn vectors(c: &Ctx, key: &str) -> Res<Vec<Vec<f64>>> {
    let v = c.get(key)?;
    if v.is_array() {
        return matrix(v, key);
    }
    c.names.per_element(v, key)?.into_iter().map(|r| if r.is_array() { f64_list(r, key) } else { Ok(vec![f64_of(r, key)?]) }).collect()
}

pub(crate) fn granules(names: &Names, blocks: &[Subset]) -> Value {
    Value::from(blocks.iter().map(|b| names.out(b)).collect::<Vec<_>>())
}
