use roughkit_core::approx::pawlak;
use roughkit_core::valued::{
    fuzzy_rough, granulewise_lattice, if_rough, linguistic_at, linguistic_rough, lvalued_approx, mod_approx,
    neutrosophic_approx, plithogenic_approx, triangular, uncertain_approx, vague_rough, z_rough, Degree, DegreeDomain,
    IfRelation, IfSet, Implicator, LinguisticOutcome, LinguisticSpace, PiecewiseLinearFn, PlDomain, PlithogenicData,
    ResiduatedChain, TNorm, ZNumber,
};
use serde_json::{json, Value};

use crate::ctx::{cfg_err, f64_list, f64_of, rat, str_list, Ctx, Res};
use crate::unknown_model;

pub fn run(model: &str, c: &Ctx) -> Res<Value> {
    let names = &c.names;
    let reals = |v: &[f64]| names.per_elem_out(v.iter().map(|&x| x.into()));
    match model {
        "uncertain" => {
            let dom = domain_of(c.get("domain")?)?;
            let rel = rows(c, "relation")?.iter().map(|r| r.iter().map(|v| degree_of(&dom, v)).collect()).collect::<Res<Vec<Vec<_>>>>()?;
            let a = names.per_element(c.get("membership")?, "membership")?.into_iter().map(|v| degree_of(&dom, v)).collect::<Res<Vec<_>>>()?;
            let r = uncertain_approx(&dom, &rel, &a)?;
            let out = |v: &[Degree]| names.per_elem_out(v.iter().map(|d| degree_out(&dom, d)));
            Ok(json!({"lower": out(&r.lower), "upper": out(&r.upper), "pos": out(&r.pos), "neg": out(&r.neg), "bnd": out(&r.bnd)}))
        }
        "fuzzy" => {
            let tnorm = match c.str_or("tnorm", "min")? {
                "min" => TNorm::Min,
                "product" => TNorm::Product,
                t => return Err(cfg_err(format!("unknown t-norm `{t}`"))),
            };
            let imp = match c.str_or("implicator", "kleene_dienes")? {
                "kleene_dienes" => Implicator::KleeneDienes,
                "from_conorm" => Implicator::FromConorm,
                i => return Err(cfg_err(format!("unknown implicator `{i}`"))),
            };
            let (lo, up) = fuzzy_rough(&c.elem_matrix("relation")?, &c.elem_f64("membership")?, tnorm, imp)?;
            Ok(json!({"lower": reals(&lo), "upper": reals(&up)}))
        }
        "intuitionistic" => {
            let rel = IfRelation::new(c.elem_matrix("relation_mu")?, c.elem_matrix("relation_gamma")?)?;
            let x = IfSet::new(c.elem_f64("mu")?, c.elem_f64("gamma")?)?;
            let (lo, up) = if_rough(&rel, &x)?;
            let out = |s: &IfSet| names.per_elem_out(s.mu.iter().zip(&s.gamma).map(|(m, g)| json!({"mu": m, "gamma": g})));
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        "lvalued" => {
            let chain = ResiduatedChain::new(str_list(c.get("chain")?, "chain")?)?;
            let label = |v: &Value| -> Res<usize> { Ok(chain.index_of(&label_str(v))?) };
            let u_val = match c.opt("universe_degrees") {
                Some(v) => names.per_element(v, "universe_degrees")?.into_iter().map(label).collect::<Res<Vec<_>>>()?,
                None => vec![chain.top(); c.n()],
            };
            let rel = rows(c, "relation")?.iter().map(|r| r.iter().map(|v| label(v)).collect()).collect::<Res<Vec<Vec<_>>>>()?;
            let q = names.per_element(c.get("subset")?, "subset")?.into_iter().map(label).collect::<Res<Vec<_>>>()?;
            let (lo, up) = lvalued_approx(&chain, &u_val, &rel, &q)?;
            let out = |v: &[usize]| names.per_elem_out(v.iter().map(|&i| chain_label(&chain, i)));
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        "linguistic" => {
            let labels = str_list(c.get("labels")?, "labels")?;
            let idx = |v: &Value| {
                let s = label_str(v);
                labels.iter().position(|l| *l == s).ok_or_else(|| cfg_err(format!("`{s}` is not a label")))
            };
            let concepts = c
                .get("concepts")?
                .as_object()
                .ok_or_else(|| cfg_err("`concepts` maps names to per-element labels"))?
                .iter()
                .map(|(k, v)| Ok((k.clone(), names.per_element(v, k)?.into_iter().map(idx).collect::<Res<Vec<_>>>()?)))
                .collect::<Res<Vec<_>>>()?;
            let decision = names.per_element(c.get("decision")?, "decision")?.into_iter().map(idx).collect::<Res<Vec<_>>>()?;
            let space = LinguisticSpace::new(labels.clone(), concepts, decision)?;
            let k = c.rational("k")?;
            let out = |v: &[usize]| names.per_elem_out(v.iter().map(|&i| labels[i].clone().into()));
            if let (Some(ks), Some(ls)) = (c.opt("k_set"), c.opt("l_set")) {
                let (ks, ls) = (str_list(ks, "k_set")?, str_list(ls, "l_set")?);
                let kr: Vec<&str> = ks.iter().map(String::as_str).collect();
                let lr: Vec<&str> = ls.iter().map(String::as_str).collect();
                let (lo, up, gap) = linguistic_at(&space, k, &kr, &lr)?;
                return Ok(json!({"lower": out(&lo), "upper": out(&up), "gap": gap}));
            }
            let r = linguistic_rough(&space, k)?;
            let opt = |r: Option<roughkit_core::Rational>| r.map_or(Value::Null, rat);
            let mut res = json!({"k_l": opt(r.k_l), "k_u": opt(r.k_u)});
            match r.outcome {
                LinguisticOutcome::Approximable { k_star, l_star, lower, upper, gap } => {
                    res["approximable"] = true.into();
                    res["k_star"] = k_star.into();
                    res["l_star"] = l_star.into();
                    res["lower"] = out(&lower);
                    res["upper"] = out(&upper);
                    res["gap"] = gap.into();
                }
                LinguisticOutcome::NotApproximable { p_empty, q_empty } => {
                    res["approximable"] = false.into();
                    res["p_empty"] = p_empty.into();
                    res["q_empty"] = q_empty.into();
                }
            }
            Ok(res)
        }
        "vague" => {
            let pair = pawlak(&c.partition("partition")?, &c.target()?)?;
            let iv = vague_rough(&pair, &c.elem_f64("mu")?, &c.elem_f64("nu")?)?;
            Ok(json!({
                "lower": names.out(&pair.lower),
                "upper": names.out(&pair.upper),
                "intervals": names.per_elem_out(iv.iter().map(|(a, b)| json!([a, b]))),
            }))
        }
        "lattice" => {
            let dom = domain_of(c.get("domain")?)?;
            let a = names.per_element(c.get("membership")?, "membership")?.into_iter().map(|v| degree_of(&dom, v)).collect::<Res<Vec<_>>>()?;
            let (lo, up) = granulewise_lattice(&c.partition("partition")?, &a, &dom)?;
            let out = |v: &[Degree]| names.per_elem_out(v.iter().map(|d| degree_out(&dom, d)));
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        "mod" => {
            let dom = DegreeDomain::Powerset(str_list(c.get("tag_atoms")?, "tag_atoms")?);
            let tags = names.per_element(c.get("tags")?, "tags")?.into_iter().map(|v| degree_of(&dom, v)).collect::<Res<Vec<_>>>()?;
            let r = mod_approx(&c.partition("partition")?, &c.elem_f64("scores")?, &tags, &dom)?;
            let out = |v: &[(f64, Degree)]| names.per_elem_out(v.iter().map(|(s, t)| json!({"score": s, "tags": degree_out(&dom, t)})));
            Ok(json!({"lower": out(&r.lower), "upper": out(&r.upper)}))
        }
        "plithogenic" => {
            let values = str_list(c.get("values")?, "values")?;
            let pdf = names
                .per_element(c.get("pdf")?, "pdf")?
                .into_iter()
                .map(|row| {
                    let o = row.as_object().ok_or_else(|| cfg_err("`pdf` rows map values to vectors"))?;
                    values.iter().map(|v| f64_list(o.get(v).ok_or_else(|| cfg_err(format!("`pdf` row lacks `{v}`")))?, "pdf")).collect()
                })
                .collect::<Res<Vec<Vec<Vec<f64>>>>>()?;
            let m = values.len();
            let vidx = |s: &str| values.iter().position(|v| v == s).ok_or_else(|| cfg_err(format!("`{s}` is not an attribute value")));
            let mut pcf: Vec<Vec<Vec<f64>>> = Vec::new();
            for e in c.get("pcf")?.as_array().ok_or_else(|| cfg_err("`pcf` is a list of [v, w, degree]"))? {
                let row = e.as_array().filter(|r| r.len() == 3).ok_or_else(|| cfg_err("`pcf` entries are [v, w, degree]"))?;
                let ends = str_list(&Value::from(row[..2].to_vec()), "pcf")?;
                let d = if row[2].is_array() { f64_list(&row[2], "pcf")? } else { vec![f64_of(&row[2], "pcf")?] };
                if pcf.is_empty() {
                    pcf = vec![vec![vec![0.0; d.len()]; m]; m];
                }
                let (i, j) = (vidx(&ends[0])?, vidx(&ends[1])?);
                pcf[i][j] = d.clone();
                pcf[j][i] = d;
            }
            if pcf.is_empty() {
                pcf = vec![vec![vec![0.0]; m]; m];
            }
            let data = PlithogenicData::new(values.clone(), pdf, pcf)?;
            let (lo, up) = plithogenic_approx(&c.partition("partition")?, &data)?;
            let out = |d: &PlithogenicData| {
                names.per_elem_out(d.pdf.iter().map(|row| Value::Object(values.iter().cloned().zip(row.iter().map(|v| json!(v))).collect())))
            };
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        "neutrosophic" => {
            let a = names
                .per_element(c.get("membership")?, "membership")?
                .into_iter()
                .map(|v| match f64_list(v, "membership")?.as_slice() {
                    [t, i, f] => Ok((*t, *i, *f)),
                    _ => Err(cfg_err("neutrosophic degrees are [T, I, F]")),
                })
                .collect::<Res<Vec<_>>>()?;
            let (lo, up) = neutrosophic_approx(&c.partition("partition")?, &a)?;
            let out = |v: &[(f64, f64, f64)]| names.per_elem_out(v.iter().map(|(t, i, f)| json!([t, i, f])));
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        "z" => {
            let tri = |v: Option<&Value>, dom: PlDomain| -> Res<PiecewiseLinearFn> {
                match f64_list(v.ok_or_else(|| cfg_err("Z-number needs `value` and `reliability`"))?, "z")?.as_slice() {
                    [a, b, c] => Ok(triangular(*a, *b, *c, dom)?.membership),
                    _ => Err(cfg_err("triangular numbers are [a, b, c]")),
                }
            };
            let zs = names
                .per_element(c.get("z")?, "z")?
                .into_iter()
                .map(|z| Ok(ZNumber::new(tri(z.get("value"), PlDomain::Real)?, tri(z.get("reliability"), PlDomain::Unit)?)?))
                .collect::<Res<Vec<_>>>()?;
            let (lo, up) = z_rough(&c.partition("partition")?, &zs)?;
            let pts = |f: &PiecewiseLinearFn| json!(f.points().iter().map(|(x, y)| [*x, *y]).collect::<Vec<_>>());
            let out = |v: &[ZNumber]| names.per_elem_out(v.iter().map(|z| json!({"value": pts(&z.value), "reliability": pts(&z.reliability)})));
            Ok(json!({"lower": out(&lo), "upper": out(&up)}))
        }
        _ => Err(unknown_model("valued", model)),
    }
}

fn label_str(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn chain_label(chain: &ResiduatedChain, i: usize) -> Value {
    chain.labels[i].clone().into()
}

/// `"unit"`, `"boolean"`, `{"chain": [..]}`, `{"product": [..]}` or `{"powerset": [..]}`.
fn domain_of(v: &Value) -> Res<DegreeDomain> {
    match v {
        Value::String(s) if s == "unit" => Ok(DegreeDomain::Unit),
        Value::String(s) if s == "boolean" => Ok(DegreeDomain::boolean()),
        Value::Object(o) if o.len() == 1 => {
            let (k, x) = o.iter().next().unwrap();
            match k.as_str() {
                "chain" => Ok(DegreeDomain::Chain(str_list(x, "chain")?)),
                "powerset" => Ok(DegreeDomain::Powerset(str_list(x, "powerset")?)),
                "product" => Ok(DegreeDomain::Product(
                    x.as_array().ok_or_else(|| cfg_err("`product` lists factor domains"))?.iter().map(domain_of).collect::<Res<_>>()?,
                )),
                _ => Err(cfg_err(format!("unknown degree domain `{k}`"))),
            }
        }
        _ => Err(cfg_err("unrecognised degree domain")),
    }
}

fn degree_of(dom: &DegreeDomain, v: &Value) -> Res<Degree> {
    let d = match dom {
        DegreeDomain::Unit => Degree::Real(f64_of(v, "degree")?),
        DegreeDomain::Chain(l) => {
            let s = label_str(v);
            Degree::Idx(l.iter().position(|x| *x == s).ok_or_else(|| cfg_err(format!("`{s}` is not on the chain")))?)
        }
        DegreeDomain::Product(ds) => {
            let items = v.as_array().filter(|a| a.len() == ds.len()).ok_or_else(|| cfg_err("product degree has the wrong arity"))?;
            Degree::Tuple(ds.iter().zip(items).map(|(d, x)| degree_of(d, x)).collect::<Res<_>>()?)
        }
        DegreeDomain::Powerset(atoms) => {
            let mut m = 0u64;
            for a in str_list(v, "atoms")? {
                m |= 1 << atoms.iter().position(|x| *x == a).ok_or_else(|| cfg_err(format!("`{a}` is not an atom")))?;
            }
            Degree::Mask(m)
        }
    };
    dom.check(&d)?;
    Ok(d)
}

fn degree_out(dom: &DegreeDomain, d: &Degree) -> Value {
    match (dom, d) {
        (DegreeDomain::Chain(l), Degree::Idx(i)) => l[*i].clone().into(),
        (DegreeDomain::Product(ds), Degree::Tuple(t)) => Value::from(ds.iter().zip(t).map(|(d, x)| degree_out(d, x)).collect::<Vec<_>>()),
        (DegreeDomain::Powerset(atoms), Degree::Mask(m)) => {
            Value::from(atoms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| a.clone()).collect::<Vec<_>>())
        }
        (_, Degree::Real(x)) => (*x).into(),
        _ => Value::Null,
    }
}

/// Square matrix of raw values, nested list or `{row: {col: v}}`.
fn rows<'a>(c: &Ctx<'a>, key: &str) -> Res<Vec<Vec<&'a Value>>> {
    let v = c.get(key)?;
    if let Some(rs) = v.as_array() {
        return rs.iter().map(|r| Ok(r.as_array().ok_or_else(|| cfg_err(format!("`{key}` rows must be lists")))?.iter().collect())).collect();
    }
    c.names.per_element(v, key)?.into_iter().map(|r| c.names.per_element(r, key)).collect()
}

