//! Machine-readable reports for every verification, build, sweep and search.
//!
//! Exact values are `"a/b"` strings in lowest terms, integers are plain
//! numbers, and decimals appear only as display columns next to the exact
//! value. Every verdict is computed from exact values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::bounds::{
    bound_maximizer, independent_value, lp_max_s1, occupancy_bound, optimal_profile,
};
use crate::constructions::{
    kahn_triple, q5_triple, q_binomial_split, q_formula, ConstructionParams, TripleSystem,
};
use crate::error::Result;
use crate::harness::{hk_random, HkRandomConfig};
use crate::lift::{build_q21, LiftReport};
use crate::posets::{
    five_point_extremal_triple, five_point_poset, five_point_size_three_upsets, poset_defect,
    poset_hk_scan, poset_occupancy, WeightedPoset,
};
use crate::rational::{fmt_ratio, int, ratio, to_decimal, Bias};
use crate::search::SearchResult;
use crate::setcube::{measure, occupancy, write_upset, Family};

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub verb: String,
    /// `None` for purely informational reports.
    pub verdict: Option<bool>,
    pub provenance: String,
    pub body: Map<String, Value>,
}

fn exact(r: &BigRational) -> Value {
    Value::String(fmt_ratio(r))
}

fn decimal(r: &BigRational) -> Value {
    Value::String(to_decimal(r, 10))
}

impl Report {
    fn new(verb: &str, provenance: impl Into<String>) -> Self {
        Report {
            verb: verb.into(),
            verdict: None,
            provenance: provenance.into(),
            body: Map::new(),
        }
    }

    /// A report without checks; its verdict stays `null` until one fails.
    pub fn informational(verb: &str, provenance: impl Into<String>) -> Self {
        Self::new(verb, provenance)
    }

    pub fn insert(&mut self, key: &str, v: Value) {
        self.body.insert(key.into(), v);
    }

    /// Nests each part under its `target` (or provenance) and ANDs verdicts.
    pub fn combine(verb: &str, parts: impl IntoIterator<Item = Report>) -> Self {
        let mut r = Self::new(verb, "all");
        for part in parts {
            let key = part
                .body
                .get("target")
                .and_then(Value::as_str)
                .map_or_else(|| part.provenance.clone(), str::to_string);
            let ok = part.passed();
            r.body.insert(key.clone(), part.to_json());
            r.check(&key, ok);
        }
        r
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.body.insert(key.into(), v.into());
        self
    }

    /// Stores `key` as an exact rational plus a `key_decimal` column.
    fn set_ratio(&mut self, key: &str, r: &BigRational) -> &mut Self {
        self.body.insert(key.into(), exact(r));
        self.body.insert(format!("{key}_decimal"), decimal(r));
        self
    }

    /// Records a named check; the report verdict is the conjunction.
    fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        let checks = self
            .body
            .entry("checks")
            .or_insert_with(|| Value::Object(Map::new()));
        checks
            .as_object_mut()
            .expect("checks is an object")
            .insert(name.into(), Value::Bool(ok));
        self.verdict = Some(self.verdict.unwrap_or(true) && ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.unwrap_or(true)
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.body
            .get("checks")
            .and_then(Value::as_object)
            .map(|m| {
                m.iter()
                    .filter(|(_, v)| *v == &Value::Bool(false))
                    .map(|(k, _)| k.clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.insert("verb".into(), json!(self.verb));
        out.insert("verdict".into(), json!(self.verdict));
        out.insert("provenance".into(), json!(self.provenance));
        for (k, v) in &self.body {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    /// `key: value` lines with nested objects flattened by dotted paths.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in flatten(&self.to_json()) {
            let _ = writeln!(out, "{k}: {}", v.trim_end().replace('\n', " | "));
        }
        out
    }

    /// Two-column `key,value` CSV of the flattened report.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in flatten(&self.to_json()) {
            let v = if v.contains([',', '"', '\n']) {
                format!("\"{}\"", v.replace('"', "\"\""))
            } else {
                v
            };
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }
}

fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.into(), s.clone())),
            other => out.push((prefix.into(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn triple_json(t: &TripleSystem) -> Result<Value> {
    Ok(json!({
        "x": write_upset(&t.x)?,
        "y": write_upset(&t.y)?,
        "z": write_upset(&t.z)?,
    }))
}

/// The five-dimensional triple: occupancy `(5, 13, 7, 7)`, three upsets of
/// 16 members, and `13/32 > 3ρ(1-ρ)² = 3/8` at `ρ = 1/2`.
pub fn verify_q5() -> Result<Report> {
    let t = q5_triple();
    let half = Bias::uniform();
    let prof = occupancy(&t.x, &t.y, &t.z, &half)?;
    let rho = ratio(1, 2);
    let indep = independent_value(&rho);
    let four_ninths = ratio(4, 9);
    let parts_x = t.x.difference(&t.y.union(&t.z)?)?.count();
    let mut r = Report::new("verify", "q5");
    r.set("target", "q5")
        .set("occupancy", prof.to_json())
        .set("counts", t.counts().to_vec())
        .set_ratio("s1", prof.s1())
        .set_ratio("independent_value", &indep)
        .set("four_ninths", exact(&four_ninths))
        .set("s1_above_four_ninths", *prof.s1() > four_ninths)
        .set("x_only_count", parts_x)
        .set("families", triple_json(&t)?);
    r.check("occupancy_counts", prof.counts == [5, 13, 7, 7])
        .check(
            "upward_closed",
            t.families().iter().all(|f| f.is_upward_closed()),
        )
        .check("equal_sizes_16", t.counts() == [16, 16, 16])
        .check("x_only_is_5", parts_x == 5)
        .check("s1_exceeds_independent_value", *prof.s1() > indep);
    Ok(r)
}

/// `q(1/3) = 4/9` and `q(3/8) = 937950/2097152` for `(n, l) = (7, 3)`, the
/// latter matched by direct occupancy of the level-threshold triple.
pub fn verify_kahn() -> Result<Report> {
    let p13 = Bias::from_ratio(1, 3)?;
    let p38 = Bias::from_ratio(3, 8)?;
    let q13 = q_formula(&ConstructionParams::new(7, 3, p13.clone())?)?;
    let params = ConstructionParams::new(7, 3, p38.clone())?;
    let q38 = q_formula(&params)?;
    let (a, b) = q_binomial_split(&params)?;
    let t = kahn_triple(7, 3)?;
    let prof = occupancy(&t.x, &t.y, &t.z, &p38)?;
    let mu_z = measure(&t.z, &p38);
    let expected = ratio(937950, 2097152);
    let mut r = Report::new("verify", "kahn(n=7,l=3)");
    r.set("target", "kahn")
        .set_ratio("q_one_third", &q13)
        .set_ratio("q_three_eighths", &q38)
        .set_ratio("occupancy_s1", prof.s1())
        .set_ratio("z_measure", &mu_z)
        .set("occupancy", prof.to_json());
    let one = ratio(1, 1);
    let p = ratio(3, 8);
    r.check("q_at_one_third_is_four_ninths", q13 == ratio(4, 9))
        .check("q_at_three_eighths_exact", q38 == expected)
        .check("formula_matches_occupancy", *prof.s1() == q38)
        .check("q_exceeds_0_447", q38 > ratio(447, 1000))
        .check("binomial_split_sums_to_one", &a + &b == one)
        .check(
            "binomial_split_recombines",
            int(2) * &p * (&one - &p) * &a + (&one - &p) * (&one - &p) * &b == q38,
        )
        .check("z_measure_exact", mu_z == ratio(678402, 2097152));
    Ok(r)
}

/// LP optimum equals `3ρ(1-ρ)/(1+ρ)` on `ρ = k/grid`, plus the certified
/// maximizer of the bound.
pub fn verify_lp(grid: u32, tolerance: &BigRational) -> Result<Report> {
    let mut mismatches = Vec::new();
    let mut structure = true;
    for k in 1..grid {
        let rho = ratio(i64::from(k), i64::from(grid));
        let sol = lp_max_s1(&rho)?;
        if sol.objective != occupancy_bound(&rho) {
            mismatches.push(fmt_ratio(&rho));
        }
        let one = ratio(1, 1);
        structure &= sol.profile[2].is_zero()
            && int(3) * &rho * &sol.profile[0] == (&one - &rho) * &sol.profile[1];
    }
    let max = bound_maximizer(tolerance)?;
    let mut r = Report::new("verify", format!("lp(grid={grid})"));
    r.set("target", "lp")
        .set("grid", grid)
        .set("mismatches", mismatches.clone())
        .set("tolerance", exact(tolerance))
        .set_ratio("argmax_rho", &max.rho)
        .set_ratio("max_value", &max.value)
        .set("iterations", max.iterations);
    r.check("lp_equals_bound_on_grid", mismatches.is_empty())
        .check("optimal_vertex_structure", structure)
        .check(
            "argmax_within_tolerance_of_sqrt2_minus_1",
            max.rho_certified,
        )
        .check(
            "max_within_tolerance_of_9_minus_6sqrt2",
            max.value_certified,
        )
        .check("maximizer_identity", max.identity_holds);
    Ok(r)
}

/// The five-element poset over `p = k/grid`: normalization, nonnegative
/// correlation defects, the defect `p - (2p/(1+p))²` of two size-three
/// upsets, and the occupancy of `{p_i, A}` against the LP optimum.
pub fn verify_poset(grid: u32) -> Result<Report> {
    let mut failures: Vec<String> = Vec::new();
    let mut min_seen: Option<BigRational> = None;
    for k in 1..grid {
        let p = Bias::from_ratio(i64::from(k), i64::from(grid))?;
        let pv = p.value().clone();
        let poset = five_point_poset(&p)?;
        let scan = poset_hk_scan(&poset)?;
        let [u, v, w] = five_point_extremal_triple(&poset)?;
        let [big_u, big_v, _] = five_point_size_three_upsets(&poset)?;
        let one = ratio(1, 1);
        let frac = int(2) * &pv / (&one + &pv);
        let defect_ok = poset_defect(&poset, big_u, big_v) == &pv - &frac * &frac;
        let occ = poset_occupancy(&poset, u, v, w)?;
        let occ_ok =
            occ.densities == optimal_profile(&pv) && occ.densities == lp_max_s1(&pv)?.profile;
        let weights_ok = poset.weights().iter().sum::<BigRational>() == one;
        if !(defect_ok && occ_ok && weights_ok && !scan.min_defect.is_negative()) {
            failures.push(p.to_string());
        }
        if min_seen.as_ref().is_none_or(|m| scan.min_defect < *m) {
            min_seen = Some(scan.min_defect);
        }
    }
    let mut r = Report::new("verify", format!("poset(grid={grid})"));
    r.set("target", "poset")
        .set("grid", grid)
        .set("failures", failures.clone());
    if let Some(m) = &min_seen {
        r.set("min_defect", exact(m));
    }
    r.check("all_grid_points_pass", failures.is_empty());
    Ok(r)
}

pub fn measure_report(f: &Family, p: &Bias, source: &str) -> Result<Report> {
    let mu = measure(f, p);
    let mut r = Report::new("measure", source);
    r.set("n", f.n())
        .set("count", f.count())
        .set("p", p.to_string())
        .set_ratio("measure", &mu)
        .set("upward_closed", f.is_upward_closed())
        .set("level_histogram", f.level_histogram());
    Ok(r)
}

pub fn closure_report(f: &Family, source: &str) -> Result<Report> {
    let closed = f.up_closure();
    let mut r = Report::new("closure", source);
    r.set("n", closed.n())
        .set("count", closed.count())
        .set("minimal_elements", closed.minimal_elements()?.len())
        .set("upset", write_upset(&closed)?);
    Ok(r)
}

pub fn bound_report(rho: &BigRational) -> Report {
    let b = occupancy_bound(rho);
    let indep = independent_value(rho);
    let mut r = Report::new("bound", format!("rho={}", fmt_ratio(rho)));
    r.set("rho", exact(rho))
        .set_ratio("bound", &b)
        .set_ratio("independent_value", &indep)
        .set("bound_dominates", b >= indep);
    r
}

pub fn bound_maximum_report(tolerance: &BigRational) -> Result<Report> {
    let max = bound_maximizer(tolerance)?;
    let mut r = Report::new("bound", format!("maximize(tol={})", fmt_ratio(tolerance)));
    r.set("tolerance", exact(tolerance))
        .set_ratio("argmax_rho", &max.rho)
        .set_ratio("max_value", &max.value)
        .set("iterations", max.iterations);
    r.check(
        "argmax_within_tolerance_of_sqrt2_minus_1",
        max.rho_certified,
    )
    .check(
        "max_within_tolerance_of_9_minus_6sqrt2",
        max.value_certified,
    )
    .check("maximizer_identity", max.identity_holds);
    Ok(r)
}

pub fn lp_report(rho: &BigRational) -> Result<Report> {
    let sol = lp_max_s1(rho)?;
    let mut r = Report::new("lp", format!("rho={}", fmt_ratio(rho)));
    if let Value::Object(m) = sol.to_json() {
        r.body.extend(m);
    }
    r.check(
        "objective_equals_bound",
        sol.objective == occupancy_bound(rho),
    );
    Ok(r)
}

/// The lifted 21-dimensional triple, with its report and (optionally) the
/// three families in `.upset` form.
pub fn build_q21_report(include_families: bool) -> Result<(Report, TripleSystem, LiftReport)> {
    let (t, lift) = build_q21()?;
    let mut r = Report::new("build", "q21");
    r.set("target", "q21");
    if let Value::Object(m) = lift.to_json() {
        r.body.extend(m);
    }
    if include_families {
        r.set("families", triple_json(&t)?);
    }
    let universe = BigInt::from(1u8) << lift.n as usize;
    let all_closed = t.families().iter().all(|f| f.is_upward_closed());
    r.check("upward_closed", all_closed)
        .check("equal_sizes", lift.equal_sizes())
        .check(
            "size_is_three_eighths",
            BigInt::from(lift.target) * 8 == &universe * 3,
        )
        .check("deficit_within_pool", lift.deficit <= lift.pool_size)
        .check(
            "s1_unchanged_by_topup",
            lift.occupancy_before.counts[1] == lift.s1_count(),
        )
        .check("s1_matches_base_q", *lift.s1_density() == lift.base_q)
        .check("s1_exceeds_four_ninths", lift.exceeds_four_ninths());
    Ok((r, t, lift))
}

pub fn search_report(res: &SearchResult, provenance: &str) -> Report {
    let mut r = Report::new("search", provenance);
    if let Value::Object(m) = res.to_json() {
        r.body.extend(m);
    }
    r.check("sound", res.is_sound());
    r
}

pub fn poset_report(p: &WeightedPoset, five_point_bias: Option<&Bias>) -> Result<Report> {
    let scan = poset_hk_scan(p)?;
    let prov = match five_point_bias {
        Some(b) => format!("five-point(p={b})"),
        None => "file".to_string(),
    };
    let mut r = Report::new("poset", prov);
    r.set("elements", p.labels().to_vec())
        .set(
            "weights",
            p.weights().iter().map(fmt_ratio).collect::<Vec<_>>(),
        )
        .set("upsets", scan.upsets)
        .set_ratio("min_defect", &scan.min_defect)
        .set("witness_u", p.label_set(scan.witness.0))
        .set("witness_v", p.label_set(scan.witness.1));
    r.check(
        "weights_sum_to_one",
        p.weights().iter().sum::<BigRational>() == ratio(1, 1),
    )
    .check("min_defect_nonnegative", !scan.min_defect.is_negative());
    if let Some(b) = five_point_bias {
        let [u, v, w] = five_point_extremal_triple(p)?;
        let occ = poset_occupancy(p, u, v, w)?;
        let [big_u, big_v, _] = five_point_size_three_upsets(p)?;
        let pv = b.value();
        r.set("extremal_occupancy", occ.to_json())
            .set_ratio("size_three_defect", &poset_defect(p, big_u, big_v));
        r.check(
            "extremal_occupancy_is_lp_optimum",
            occ.densities == optimal_profile(pv),
        );
    }
    Ok(r)
}

pub fn hk_random_report(cfg: &HkRandomConfig) -> Result<Report> {
    let rep = hk_random(cfg)?;
    let mut r = Report::new("hk-random", format!("seed={}", cfg.seed));
    if let Value::Object(m) = rep.to_json() {
        r.body.extend(m);
    }
    r.check("all_defects_nonnegative", rep.all_nonnegative());
    Ok(r)
}
