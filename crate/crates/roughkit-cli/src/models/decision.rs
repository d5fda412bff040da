use roughkit_core::approx::ThreeWayRegions;
use roughkit_core::decision::{
    d_rough, dependency, drsa, dtrs, gtrs_equilibrium, rough_membership, threshold_regions, weighted_rough,
    DominanceData, Direction, GameSpec, GtrsResult, LossTable, Measure, Player, ProfileOutcome, Strategy,
};
use roughkit_core::Rational;
use serde_json::{json, Value};

use crate::ctx::{cfg_err, rat, rational_of, str_list, Ctx, Names, Res};
use crate::unknown_model;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    match model {
        "membership" => {
            let mu = rough_membership(&c.partition("partition")?, &c.target()?)?;
            let mut out = json!({"membership": names.per_elem_out(mu.iter().map(|r| rat(*r)))});
            if c.opt("alpha").is_some() {
                let r = threshold_regions(&mu, c.rational("alpha")?, c.rational("beta")?);
                out["regions"] = regions(names, &r);
            }
            Ok(out)
        }
        "dtrs" => {
            let raw = c.get("losses")?.as_array().filter(|l| l.len() == 6).ok_or_else(|| cfg_err("`losses` needs six entries"))?;
            let mut l = [Rational::zero(); 6];
            for (slot, v) in l.iter_mut().zip(raw) {
                *slot = rational_of(v, "losses")?;
            }
            let table = LossTable::new(l)?;
            let (alpha, beta) = table.thresholds();
            let mut out = json!({"alpha": rat(alpha), "beta": rat(beta)});
            // regions only when there is data to split
            if c.opt("partition").is_some() {
                let r = dtrs(&table, &c.partition("partition")?, &c.target()?)?;
                out["regions"] = regions(names, &r.regions);
            }
            Ok(out)
        }
        "dependency" => {
            let attrs = str_list(c.get("attributes")?, "attributes")?;
            Ok(json!({"gamma": rat(dependency(c.table()?, &attrs, c.str("decision")?)?)}))
        }
        "weighted" => {
            let attrs = str_list(c.get("attributes")?, "attributes")?;
            let r = weighted_rough(c.table()?, &attrs, c.str("decision")?, &c.target()?, c.rational("alpha")?)?;
            let keyed = |v: &[(String, Rational)]| Value::Object(v.iter().map(|(k, r)| (k.clone(), rat(*r))).collect());
            Ok(json!({
                "gamma_all": rat(r.gamma_all),
                "gamma_without": keyed(&r.gamma_without),
                "theta": keyed(&r.theta),
                "weights": keyed(&r.weights),
                "sigma": names.per_elem_out(r.sigma.iter().map(|s| rat(*s))),
                "lower": names.out(&r.lower),
            }))
        }
        "drsa" => {
            let t = c.table()?;
            let crit = c.get("criteria")?.as_object().ok_or_else(|| cfg_err("`criteria` maps attributes to benefit/cost"))?;
            let mut dirs = Vec::new();
            let mut cols = Vec::new();
            for (a, d) in crit {
                dirs.push(match d.as_str() {
                    Some("benefit") => Direction::Benefit,
                    Some("cost") => Direction::Cost,
                    _ => return Err(cfg_err(format!("criterion `{a}` must be benefit or cost"))),
                });
                let col = t
                    .column(a)?
                    .iter()
                    .map(|v| v.as_f64().ok_or_else(|| cfg_err(format!("criterion `{a}` has a non-numeric value"))))
                    .collect::<Res<Vec<f64>>>()?;
                cols.push(col);
            }
            let order = str_list(c.get("class_order")?, "class_order")?;
            let classes = t
                .column(c.str("decision")?)?
                .iter()
                .map(|v| {
                    let s = v.to_string();
                    order.iter().position(|o| *o == s).map(|i| i + 1).ok_or_else(|| cfg_err(format!("class `{s}` is not in `class_order`")))
                })
                .collect::<Res<Vec<_>>>()?;
            let values = (0..c.n()).map(|e| cols.iter().map(|col| col[e]).collect()).collect();
            let d = DominanceData::new(values, &dirs, classes, order.len())?;
            let mut per = serde_json::Map::new();
            for (i, label) in order.iter().enumerate() {
                let r = drsa(&d, i + 1)?;
                let opt = |s: &Option<roughkit_core::Subset>| s.as_ref().map_or(Value::Null, |s| names.out(s));
                per.insert(
                    label.clone(),
                    json!({
                        "lower_ge": names.out(&r.lower_ge), "upper_ge": opt(&r.upper_ge), "bnd_ge": opt(&r.bnd_ge),
                        "lower_le": names.out(&r.lower_le), "upper_le": opt(&r.upper_le), "bnd_le": opt(&r.bnd_le),
                    }),
                );
            }
            Ok(json!({"classes": per}))
        }
        "d_rough" => {
            let (ds, r) = d_rough(&c.partition("partition")?, &c.target()?, c.rational("alpha")?, c.rational("beta")?)?;
            let dn = names.per_elem_out(ds.iter().map(|d| json!({"plus": rat(d.plus), "minus": rat(d.minus), "frame": rat(d.frame)})));
            Ok(json!({
                "d_numbers": dn,
                "lower": names.out(&r.pos),
                "upper": names.out(&r.pos.union(&r.bnd)),
                "regions": regions(names, &r),
            }))
        }
        "gtrs" => {
            let game = game_spec(c)?;
            let r = gtrs_equilibrium(&game, &c.partition("partition")?, &c.target()?)?;
            let outcome = |o: &ProfileOutcome| {
                let profile: Vec<Value> =
                    o.profile.iter().zip(&game.players).map(|(&s, p)| p.strategies[s].name.clone().into()).collect();
                json!({"profile": profile, "alpha": rat(o.alpha), "beta": rat(o.beta), "payoffs": o.payoffs})
            };
            Ok(match r {
                GtrsResult::Equilibrium { outcome: o, regions: rg } => {
                    json!({"equilibrium": outcome(&o), "regions": regions(names, &rg)})
                }
                GtrsResult::None { matrix } => {
                    json!({"equilibrium": Value::Null, "matrix": matrix.iter().map(outcome).collect::<Vec<_>>()})
                }
            })
        }
        _ => Err(unknown_model("decision", model)),
    }
}

pub(crate) fn regions(names: &Names, r: &ThreeWayRegions) -> Value {
    json!({"pos": names.out(&r.pos), "bnd": names.out(&r.bnd), "neg": names.out(&r.neg)})
}

fn game_spec(c: &Ctx) -> Res<GameSpec> {
    let players = c
        .get("players")?
        .as_array()
        .ok_or_else(|| cfg_err("`players` must be a list"))?
        .iter()
        .map(|p| {
            let name = p.get("name").and_then(Value::as_str).ok_or_else(|| cfg_err("player needs `name`"))?;
            let measure = match p.get("measure").and_then(Value::as_str) {
                Some("precision") => Measure::Precision,
                Some("recall") => Measure::Recall,
                Some("decisiveness") => Measure::Decisiveness,
                _ => return Err(cfg_err(format!("player `{name}` needs measure precision, recall or decisiveness"))),
            };
            let strategies = p
                .get("strategies")
                .and_then(Value::as_array)
                .ok_or_else(|| cfg_err(format!("player `{name}` needs `strategies`")))?
                .iter()
                .map(|s| {
                    let step = |k: &str| -> Res<i64> {
                        s.get(k).and_then(Value::as_i64).ok_or_else(|| cfg_err(format!("strategy needs integer `{k}`")))
                    };
                    Ok(Strategy {
                        name: s.get("name").and_then(Value::as_str).ok_or_else(|| cfg_err("strategy needs `name`"))?.into(),
                        d_alpha: step("d_alpha")?,
                        d_beta: step("d_beta")?,
                    })
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(Player { name: name.into(), strategies, measure })
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(GameSpec {
        players,
        alpha0: c.rational("alpha0")?,
        beta0: c.rational("beta0")?,
        step_alpha: c.rational("step_alpha")?,
        step_beta: c.rational("step_beta")?,
    })
}

