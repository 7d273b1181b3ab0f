use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use powerops::acceptance;
use powerops::homalg::interchange::contraction_to_json;
use powerops::homalg::{homology_all, transfer_k_contraction, CoeffRing, Degree, ModulePresentation};
use powerops::koszul::{self, koszul_check, koszul_dual_ranks, quadratic_presentation, GradedRing};
use powerops::linearize::{self, chain_rule_suite, check_functor_laws, linearize, perp_and_gamma, sym_linearization_dims};
use powerops::partition::setpart::all_partitions;
use powerops::partition::{
    complete_filtrations, fixed_poset_iso, partition_homology, transitive_abelian_classes, Uniform,
};
use powerops::qfunctors;
use powerops::shelling::{build_k_contraction_on, verify_all_pushouts, verify_completion_uniqueness, verify_jump_properties};

use crate::report::{homology_string, Report, Table};
use crate::Opts;

pub const DEFAULT_SEED: u64 = acceptance::LINEARIZE_SEED;

/// `m = p^k` when `m` is a prime power.
fn prime_power(m: usize) -> Option<(usize, usize)> {
    let p = (2..=m).find(|d| m % d == 0)?;
    let mut k = 0;
    let mut x = m;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some((p, k))
}

fn primes_of(m: usize) -> Vec<usize> {
    (2..=m).filter(|&d| m % d == 0 && (2..d).all(|e| d % e != 0)).collect()
}

fn binom2(k: usize) -> u32 {
    (k * k.saturating_sub(1) / 2) as u32
}

fn degree_m(o: &Opts) -> Result<usize> {
    match (o.m, o.p, o.k) {
        (Some(m), _, _) => Ok(m),
        (None, Some(p), Some(k)) => Ok(p.pow(k as u32)),
        _ => bail!("give --m, or --p and --k"),
    }
}

fn p_and_k(o: &Opts) -> Result<(usize, usize)> {
    match (o.p, o.k, o.m) {
        (Some(p), Some(k), _) => Ok((p, k)),
        (_, _, Some(m)) => prime_power(m).ok_or_else(|| anyhow!("m = {m} is not a prime power")),
        _ => bail!("give --p and --k (or a prime power --m)"),
    }
}

/// The desk-scale guard `m ≤ 9`, lifted by `--unsafe-large`.
fn guard(o: &Opts, m: usize) -> Result<()> {
    if m > 9 && !o.unsafe_large {
        bail!("m = {m} exceeds the desk-scale limit 9; pass --unsafe-large to try anyway");
    }
    if o.unsafe_large && std::env::var_os("POWEROPS_MAX_PARTITION_M").is_none() {
        std::env::set_var("POWEROPS_MAX_PARTITION_M", "12");
    }
    Ok(())
}

fn type_label(t: &[usize]) -> String {
    t.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join("×")
}

fn parse_type(s: &str) -> Result<Vec<usize>> {
    let mut t: Vec<usize> = s
        .split(['x', '×', ','])
        .map(|d| d.trim().trim_start_matches("Z/").parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad group type {s:?} (e.g. 2x2, 4, 4x2)"))?;
    t.sort_unstable();
    Ok(t)
}

fn sorted(t: &[usize]) -> Vec<usize> {
    let mut t = t.to_vec();
    t.sort_unstable();
    t
}

pub fn partition_homology_cmd(o: &Opts) -> Result<Report> {
    let m = degree_m(o)?;
    guard(o, m)?;
    let filter = o.group.as_deref().map(parse_type).transpose()?;
    let mut rep = Report::new("partition-homology", json!({ "m": m, "group": o.group }));
    let pk = prime_power(m);
    let primes: Vec<usize> = match o.p {
        Some(p) => vec![p],
        None => primes_of(m),
    };
    let mut rings = vec![CoeffRing::Integers];
    rings.extend(primes.iter().map(|&p| CoeffRing::prime_field(p as u64)));

    let mut t = Table::new("reduced homology", &["complex", "class size", "ring", "homology", "expected", "ok"]);
    let mut data = Vec::new();
    if filter.is_none() {
        match partition_homology(m, None, CoeffRing::Integers) {
            Ok(h) => {
                t.row(vec![format!("P̄_{m}"), "-".into(), "Z".into(), homology_string(&h), "-".into(), "-".into()]);
                data.push(json!({ "complex": format!("P_{m}"), "ring": "Z", "homology": h }));
            }
            Err(powerops::Error::Guard(msg)) => {
                t.row(vec![format!("P̄_{m}"), "-".into(), "Z".into(), format!("skipped: {msg}"), "-".into(), "-".into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    for class in transitive_abelian_classes(m)? {
        let ty = sorted(&class.abstract_type);
        if filter.as_ref().is_some_and(|f| *f != ty) {
            continue;
        }
        let a = &class.members[0];
        for &ring in &rings {
            let h = partition_homology(m, Some(a), ring)?;
            // for m = p^k the elementary group gives a wedge of p^binom(k,2) k-spheres, the rest vanish
            let expected = pk.map(|(p, k)| {
                if ty.iter().all(|&d| d == p) {
                    BTreeMap::from([(k as Degree, ModulePresentation::free(p.pow(binom2(k))))])
                } else {
                    BTreeMap::new()
                }
            });
            let ok = expected.as_ref().map(|e| rep.check(h == *e, format!("P̄^A for A = {} over {ring}", type_label(&ty))));
            t.row(vec![
                format!("P̄_{m}^A, A = {}", type_label(&ty)),
                class.members.len().to_string(),
                ring.to_string(),
                homology_string(&h),
                expected.as_ref().map_or("-".into(), homology_string),
                ok.map_or("-".into(), |b| b.to_string()),
            ]);
            data.push(json!({ "type": ty, "ring": ring.to_string(), "homology": h }));
        }
    }
    if filter.is_some() && t.rows.is_empty() {
        bail!("no transitive abelian subgroup of type {:?} on {m} points", o.group.as_deref().unwrap_or(""));
    }
    rep.tables.push(t);
    rep.data = Value::Array(data);
    Ok(rep)
}

pub fn uniform_contract_cmd(o: &Opts) -> Result<Report> {
    let (p, k) = p_and_k(o)?;
    let m = p.pow(k as u32);
    guard(o, m)?;
    let functor = o.functor.clone().unwrap_or_else(|| "free".into());
    let ring = if o.field { CoeffRing::prime_field(p as u64) } else { CoeffRing::Integers };
    let mut rep = Report::new(
        "uniform-contract",
        json!({ "p": p, "k": k, "functor": functor, "ring": ring.to_string(), "transfer": o.transfer }),
    );
    let q = qfunctors::functor_by_name(m, &functor)?;
    let u = Arc::new(Uniform::build(p, k)?);
    let sc = build_k_contraction_on(u.clone(), q.as_ref(), ring)?;
    let h = homology_all(&sc.contraction.complex)?;
    rep.check(sc.residual.pass, "residual f_i ≠ 0 outside degree k");
    let concentrated = h.iter().all(|(&d, x)| d == k as Degree || x.is_zero());
    rep.check(concentrated, "homology of NQ̃(Ū) is not concentrated in degree k");

    let mut t = Table::new("chains of NQ̃(Ū)", &["degree", "rank", "residual nnz", "homology"]);
    for (&d, &n) in sc.contraction.complex.ranks() {
        t.row(vec![
            d.to_string(),
            n.to_string(),
            sc.residual.residual_nnz.get(&d).map_or("0".into(), |x| x.to_string()),
            h.get(&d).map_or("0".into(), |x| x.to_string()),
        ]);
    }
    rep.tables.push(t);
    let mut s = Table::new("disorder strata", &["r", "ranks", "cone vertices"]);
    for st in &sc.strata {
        s.row(vec![
            st.r.to_string(),
            format!("{:?}", st.ranks),
            st.cone_vertices
                .iter()
                .map(|(seq, v)| format!("{seq:?}→{}", v.map_or("-".into(), |v| v.to_string())))
                .collect::<Vec<_>>()
                .join(" "),
        ]);
    }
    rep.tables.push(s);

    let mut transfer = Value::Null;
    if o.transfer {
        if functor != "free" || ring != CoeffRing::Integers {
            bail!("--transfer builds the reduction data for the free functor over Z only");
        }
        let r = acceptance::reduction_data(p, k)?;
        let verdict = match transfer_k_contraction(&r.d, &r.retract, &r.h_c, p as i128) {
            Ok(kc) => {
                if let Some(path) = &o.contraction {
                    write_json(path.with_extension("transfer.json").as_path(), &contraction_to_json(&kc))?;
                }
                "verified k-contraction of NQ̃(P̄)".to_string()
            }
            Err(e) => e.to_string(),
        };
        rep.check(verdict.starts_with("verified"), format!("transfer to NQ̃(P̄_{m}): {verdict}"));
        let mut t = Table::new("transfer to NQ̃(P̄)", &["verdict"]);
        t.row(vec![verdict.clone()]);
        rep.tables.push(t);
        transfer = json!({ "verdict": verdict });
    }
    if let Some(path) = &o.contraction {
        write_json(path, &contraction_to_json(&sc.contraction))?;
    }
    rep.data = json!({ "residual": sc.residual, "homology": h, "strata": sc.strata, "transfer": transfer });
    Ok(rep)
}

fn load_ring(spec: &str) -> Result<GradedRing> {
    if let Some(name) = spec.strip_prefix("bundled:") {
        return Ok(koszul::bundled_ring(name)?);
    }
    let path = Path::new(spec);
    if !path.exists() && koszul::BUNDLED.iter().any(|(n, _)| *n == spec) {
        return Ok(koszul::bundled_ring(spec)?);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading ring file {spec}"))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    Ok(GradedRing::from_json(&v)?)
}

/// The koszul pipeline on one ring, appended to `rep`.
fn koszul_into(rep: &mut Report, label: &str, ring: &GradedRing, m_max: Option<usize>) -> Result<Value> {
    let v = ring.validate();
    let mut t = Table::new(format!("{label}: validation"), &["ranks", "central", "valid", "failures"]);
    t.row(vec![format!("{:?}", v.ranks), v.central.to_string(), v.valid.to_string(), v.failures.join("; ")]);
    rep.tables.push(t);
    if !rep.check(v.valid, format!("{label}: ring axioms")) {
        return Ok(json!({ "validation": v }));
    }
    let m_max = m_max.unwrap_or(ring.w_max.min(5)).min(ring.w_max);
    let k = koszul_check(ring, m_max)?;
    rep.check(k.h0_is_base, format!("{label}: H₀B̄(A) ≇ R"));
    rep.check(k.vanishing_above_diagonal, format!("{label}: H_qB̄(A)[m] ≠ 0 for some q > m"));
    let mut t = Table::new(format!("{label}: H_q B̄(A)[m]"), &["m", "q", "H"]);
    for c in &k.table {
        t.row(vec![c.m.to_string(), c.q.to_string(), c.h.to_string()]);
    }
    rep.tables.push(t);
    // dual ranks are only defined for Koszul rings
    let d = if k.koszul { Some(koszul_dual_ranks(ring, m_max)?) } else { None };
    let qd = quadratic_presentation(ring, m_max)?;
    if let Some(d) = &d {
        rep.check(d.pass(), format!("{label}: generating-function identity"));
        rep.check(qd.quadratic && qd.reconstruction_matches, format!("{label}: Koszul but not reconstructed from its quadratic data"));
    }
    let mut t = Table::new(format!("{label}: verdict"), &["koszul", "obstruction", "quadratic", "dual ranks", "series match"]);
    t.row(vec![
        k.koszul.to_string(),
        k.obstruction.map_or("-".into(), |(m, q)| format!("H{q}B̄[{m}]")),
        qd.quadratic.to_string(),
        d.as_ref().map_or("-".into(), |d| {
            d.local.iter().map(|l| format!("p={}: {:?}", l.prime, l.c_ranks)).collect::<Vec<_>>().join("; ")
        }),
        d.as_ref().map_or("-".into(), |d| d.local.iter().all(|l| l.matches).to_string()),
    ]);
    rep.tables.push(t);
    Ok(json!({ "validation": v, "koszul": k, "dual": d, "quadratic": qd }))
}

pub fn koszul_check_cmd(o: &Opts) -> Result<Report> {
    let spec = o.ring.clone().ok_or_else(|| anyhow!("give --ring <file or bundled name>"))?;
    let ring = load_ring(&spec)?;
    let mut rep = Report::new("koszul-check", json!({ "ring": spec, "m_max": o.m_max }));
    rep.data = koszul_into(&mut rep, &spec, &ring, o.m_max)?;
    Ok(rep)
}

pub fn shelling_verify_cmd(o: &Opts) -> Result<Report> {
    let (p, k) = p_and_k(o)?;
    guard(o, p.pow(k as u32))?;
    let u = Uniform::build(p, k)?;
    let mut rep = Report::new("shelling-verify", json!({ "p": p, "k": k }));
    let uniq = verify_completion_uniqueness(&u)?;
    rep.check(uniq.failures == 0, format!("completion uniqueness: {:?}", uniq.first_failure));
    let push = verify_all_pushouts(&u)?;
    rep.check(push.pass(), "pushout squares");
    let jumps = verify_jump_properties(&u.groups, p, true);
    rep.check(jumps.pass(), format!("jump properties: {:?}", jumps.failures.first()));

    let mut t = Table::new("summary", &["check", "count", "failures"]);
    t.row(vec!["unique completions".into(), uniq.simplices.to_string(), uniq.failures.to_string()]);
    t.row(vec!["jump properties".into(), jumps.checks.to_string(), jumps.failures.len().to_string()]);
    rep.tables.push(t);
    let mut s = Table::new("disorder strata", &["r", "σ-classes", "Σ|S_σ|", "Λ_σ proper", "pushout"]);
    for r in &push.rows {
        s.row(vec![
            r.r.to_string(),
            r.sigma_classes.to_string(),
            r.s_total.to_string(),
            r.lambda_proper.to_string(),
            if r.pushout_ok { "ok".into() } else { r.detail.clone().unwrap_or_default() },
        ]);
    }
    rep.tables.push(s);
    rep.data = json!({ "uniqueness": uniq, "pushouts": push, "jumps": jumps });
    Ok(rep)
}

pub fn linearize_demo_cmd(o: &Opts) -> Result<Report> {
    let p = o.p.unwrap_or(2) as u64;
    let e = o.k.unwrap_or(1) as u32;
    let field = CoeffRing::field(p, e)?;
    let name = o.functor.clone().unwrap_or_else(|| "sym2".into());
    let x = o.m.unwrap_or(1);
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let mut rep = Report::new("linearize-demo", json!({ "functor": name, "field": field.to_string(), "x": x }));
    rep.seed = Some(seed);

    let f = linearize::functor_by_name(&name, field)?;
    let laws = check_functor_laws(f.as_ref(), &mut ChaCha8Rng::seed_from_u64(seed), 3, 8);
    rep.check(laws.pass(), format!("{name} is not a reduced functor: {:?}", laws.failures));
    let lin = linearize(f.as_ref(), x)?;
    let perp = perp_and_gamma(f.as_ref(), x)?;
    rep.check(perp.exact, format!("⊥F → F → L_F → 0 is not exact for {name}"));
    let mut t = Table::new(format!("{name} on {field}^{x}"), &["dim F(X)", "dim L_F(X)", "dim ⊥F(X)", "rank γ", "exact"]);
    t.row(vec![
        lin.dim_fx.to_string(),
        lin.dim.to_string(),
        perp.dim_perp.to_string(),
        perp.rank_gamma.to_string(),
        perp.exact.to_string(),
    ]);
    rep.tables.push(t);

    let m_max = o.m_max.unwrap_or(9);
    let dims = sym_linearization_dims(p, m_max)?;
    let mut t = Table::new(format!("dim L_sym(m)(F_{p})"), &["m", "dim", "m a power of p"]);
    for (i, d) in dims.iter().enumerate() {
        let m = (i + 1) as u64;
        let power = (0..8).any(|j| p.pow(j) == m);
        rep.check((*d == 1) == power, format!("L_sym{m}(F_{p}) has dimension {d}"));
        t.row(vec![m.to_string(), d.to_string(), power.to_string()]);
    }
    rep.tables.push(t);

    let suite = chain_rule_suite(seed, 20)?;
    rep.check(suite.pass(), "chain-rule suite");
    let mut t = Table::new("chain rule", &["field", "F", "G", "X", "dim L_{F∘G}", "c iso", "factorizes", "exact"]);
    for r in &suite.triples {
        t.row(vec![
            r.field.clone(),
            r.f.clone(),
            r.g.clone(),
            r.x.to_string(),
            r.dim_lfg.to_string(),
            r.iso.to_string(),
            r.factorizes.to_string(),
            r.exact.to_string(),
        ]);
    }
    rep.tables.push(t);
    rep.data = json!({ "laws": laws, "linearization_dim": lin.dim, "perp": { "dim": perp.dim_perp, "exact": perp.exact }, "sym_dims": dims, "suite": suite });
    Ok(rep)
}

pub fn enumerate_cmd(o: &Opts) -> Result<Report> {
    let m = degree_m(o)?;
    guard(o, m)?;
    let mut rep = Report::new("enumerate", json!({ "m": m }));
    let mut t = Table::new("counts", &["object", "count"]);
    if m <= powerops::partition::setpart::partition_guard() {
        t.row(vec![format!("|P_{m}|"), all_partitions(m).len().to_string()]);
    }
    let mut data = json!({ "m": m });
    if let Some((p, k)) = prime_power(m) {
        let cf = complete_filtrations(p, k)?.len();
        t.row(vec![format!("|CF_{m}|"), cf.to_string()]);
        let u = Uniform::build(p, k)?;
        t.row(vec![format!("simplices of U_{m} per degree"), format!("{:?}", u.counts())]);
        t.row(vec![format!("essential simplices of U_{m}"), format!("{:?}", u.essential_counts())]);
        data["cf"] = json!(cf);
        data["uniform_counts"] = json!(u.counts());
    }
    rep.tables.push(t);
    let mut c = Table::new("transitive abelian subgroups", &["type", "class size", "|N(A)|", "|P^A|", "P^A ≅ subgroups(A)"]);
    let mut classes = Vec::new();
    for class in transitive_abelian_classes(m)? {
        let iso = fixed_poset_iso(&class.members[0])?;
        rep.check(iso.pass(), format!("P^A vs subgroup lattice for {}", type_label(&class.abstract_type)));
        rep.check(class.normalizer_matches(), format!("|N(A)| = m·|Aut A| for {}", type_label(&class.abstract_type)));
        c.row(vec![
            type_label(&sorted(&class.abstract_type)),
            class.members.len().to_string(),
            class.normalizer_order.to_string(),
            iso.fixed_count.to_string(),
            iso.pass().to_string(),
        ]);
        classes.push(json!({ "type": class.abstract_type, "members": class.members.len(), "fixed_count": iso.fixed_count }));
    }
    rep.tables.push(c);
    data["classes"] = Value::Array(classes);
    rep.data = data;
    Ok(rep)
}

pub fn elementary_union_cmd(o: &Opts) -> Result<Report> {
    let m = degree_m(o)?;
    if ![4, 8, 9].contains(&m) && !o.unsafe_large {
        bail!("the experiment is defined for m ∈ {{4, 8, 9}}");
    }
    let (p, k) = prime_power(m).ok_or_else(|| anyhow!("m = {m} is not a prime power"))?;
    let u = Uniform::build(p, k)?;
    let r = u.elementary_union_experiment();
    let mut rep = Report::new("experiment-elementary-union", json!({ "m": m }));
    let mut t = Table::new("⋃_A U^A against elementary A only", &["degree", "|U_q|", "elementary union"]);
    for (q, (a, b)) in r.per_dim.iter().enumerate() {
        t.row(vec![q.to_string(), a.to_string(), b.to_string()]);
    }
    rep.tables.push(t);
    let verdict = if r.equal() {
        "equal in every degree (exhaustive)".to_string()
    } else {
        format!("differ; witness {:?}", r.witness)
    };
    let mut v = Table::new("verdict", &["verdict", "chains of ⋃P^A missed"]);
    v.row(vec![verdict.clone(), r.p_chains_missing.to_string()]);
    rep.tables.push(v);
    rep.data = json!({ "per_dim": r.per_dim, "equal": r.equal(), "witness": r.witness.map(|w| format!("{w:?}")), "verdict": verdict });
    Ok(rep)
}

pub fn report_cmd(o: &Opts) -> Result<Report> {
    let mut rep = Report::new("report", json!({ "ring": o.ring }));
    rep.seed = Some(acceptance::LINEARIZE_SEED);
    let mut t = Table::new("acceptance", &["criterion", "title", "result", "seconds", "budget", "sha256", "detail"]);
    let mut data = Vec::new();
    for mut r in acceptance::run_all() {
        // an extra ring file joins the bar-complex suite
        if r.id == 7 {
            if let Some(spec) = &o.ring {
                let mut sub = Report::new("ring", Value::Null);
                let extra = load_ring(spec).and_then(|ring| koszul_into(&mut sub, spec, &ring, None));
                let problem = match extra {
                    Err(e) => Some(format!("{spec}: {e}")),
                    Ok(_) if !sub.pass => Some(sub.failures.join("; ")),
                    Ok(_) => None,
                };
                if let Some(msg) = problem {
                    r.checks = false;
                    r.pass = false;
                    r.detail = format!("{}; {msg}", r.detail);
                }
            }
        }
        let hash = format!("{:x}", Sha256::digest(serde_json::to_vec(&r.data)?));
        rep.check(r.pass, format!("criterion {}: {}", r.id, r.title));
        t.row(vec![
            r.id.to_string(),
            r.title.to_string(),
            if r.pass { "PASS".into() } else { "FAIL".into() },
            format!("{:.2}", r.seconds),
            format!("{:.0}", r.budget_seconds),
            hash[..16].to_string(),
            r.detail.clone(),
        ]);
        data.push(json!({ "result": r, "sha256": hash }));
    }
    rep.tables.push(t);
    rep.data = Value::Array(data);
    Ok(rep)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("writing {}", path.display()))
}
