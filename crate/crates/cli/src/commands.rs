//! Dispatch from a validated configuration to the library.

use serde::Serialize;
use serde_json::{json, Map, Value};

use fracpoly::counting::{
    check_a_set_bound, check_congruence_bound, check_mk_bounds, check_nk_bounds,
    check_pairs_bound, count_congruence, count_nk, enumerate_a, ASetQuery, IntervalConvention,
    MkQuery, NkQuery, PairQuery,
};
use fracpoly::expsum::{
    cochrane_check, complete_sum, major_arc_error, simultaneous_approx, type_i_experiment,
    type_ii_experiment, weyl_sum, IntPoly, MajorArcOptions, RealPoly, Weights,
};
use fracpoly::rational::{
    approximation_error, cf_convergents, j_invariant, rho, schedule, schedule_strict,
    select_modulus_for_n, verify_rho_inequalities, ModulusChoice, ParamSchedule,
};
use fracpoly::search::{compare_for, construct_a, convergent_poly, density_report, prime_scan, FracPolynomial};
use fracpoly::sieve::{
    buchstab_identity_check, buchstab_omega, critical_constant, decompose_s1_s4, sieve_integral,
    sift, SiftSet, OMEGA_LIMIT,
};
use fracpoly::expsum::Coef;
use fracpoly::Result;

use crate::config::{Args, Subcommand};
use crate::sets::parse_set;

/// Which array of the result becomes the CSV table, and its columns.
#[derive(Debug, Clone, Copy)]
pub struct Table {
    pub key: &'static str,
    pub columns: Option<&'static [&'static str]>,
}

pub struct Output {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn table(key: &'static str) -> Option<Table> {
    Some(Table { key, columns: None })
}

/// `unimodular` (seeded), `ones` or `zeros`.
pub fn parse_weights(text: &str, seed: u64) -> Option<Weights> {
    match text {
        "unimodular" => Some(Weights::Unimodular(seed)),
        "ones" => Some(Weights::Ones),
        "zeros" => Some(Weights::Zeros),
        _ => None,
    }
}

fn sched_of(a: &Args) -> Result<ParamSchedule> {
    schedule(a.uint("N"), a.uint("k") as u32, a.boolean("monomial"), a.real("eps"), a.eta_or_default())
}

fn modulus(a: &Args, sched: &ParamSchedule) -> Result<ModulusChoice> {
    select_modulus_for_n(&a.alpha("alpha"), sched)
}

pub fn run_command(cmd: Subcommand, a: &Args, seed: u64) -> Result<Output> {
    use Subcommand::*;
    let mut t = None;
    let fields: Value = match cmd {
        Convergents => {
            let alpha = a.alpha("alpha");
            let cs = cf_convergents(&alpha, a.uint("qmax") as u128)?;
            let rows: Vec<Value> = cs
                .iter()
                .map(|c| json!({"a": c.a, "q": c.q, "error": approximation_error(&alpha, c)}))
                .collect();
            t = table("convergents");
            json!({"alpha": alpha.to_string(), "convergents": rows})
        }
        Schedule => {
            let (n, k, m, eps, eta) = (a.uint("N"), a.uint("k") as u32, a.boolean("monomial"), a.real("eps"), a.eta_or_default());
            let s = if a.boolean("strict") {
                schedule_strict(n, k, m, eps, eta)?
            } else {
                schedule(n, k, m, eps, eta)?
            };
            let choice = if a.has("alpha") { Some(modulus(a, &s)?) } else { None };
            json!({"schedule": s, "modulus": choice})
        }
        Inequalities => {
            let r = verify_rho_inequalities(a.uint("k") as u32, a.boolean("monomial"))?;
            t = table("checks");
            let mut m = object(to_value(&r));
            m.insert("all_hold".into(), Value::Bool(r.all_hold()));
            Value::Object(m)
        }
        CountNk => {
            let q = NkQuery {
                k: a.uint("k") as u32,
                y: a.uint("Y"),
                d: a.uint("D"),
                z: a.real("Z"),
                s: a.uint("s"),
                a: a.int("a"),
                q: a.uint("q"),
            };
            let count = count_nk(&q)?;
            let reports = check_nk_bounds(&q, a.real("eta"), a.opt_uint("N"))?;
            t = table("reports");
            json!({"count": count, "reports": reports})
        }
        CountMk => {
            let k = a.uint("k") as u32;
            let q = MkQuery {
                k,
                y: a.uint("Y"),
                z: a.real("Z"),
                s0: a.real("S0"),
                s1: a.real("S1"),
                a: a.int("a"),
                q: a.uint("q"),
                gcd_cap: a.uint("gcd_cap"),
            };
            let r_k = match a.opt_real("rho") {
                Some(r) => r,
                None => rho(k, j_invariant(k, true)?)?.to_f64(),
            };
            let r = check_mk_bounds(&q, a.uint("N"), a.real("eta"), r_k, a.uint("cap") as u128)?;
            t = table("reports");
            json!({
                "count": r.count.count,
                "a_size": r.count.a_size,
                "a_empty": r.count.a_empty,
                "side_condition": r.side_condition,
                "rho": r_k,
                "reports": r.reports,
            })
        }
        EnumA => {
            let q = ASetQuery::new(a.real("S0"), a.real("S1"), a.uint("d0"), a.uint("d1"));
            let cap = a.uint("cap") as u128;
            let elements = enumerate_a(&q, cap)?;
            let report = match a.opt_uint("N") {
                Some(n) => Some(check_a_set_bound(&q, n, a.real("eta"), cap)?),
                None => None,
            };
            t = table("elements");
            json!({"count": elements.len(), "elements": elements, "report": report})
        }
        Lemma6 => {
            let (u, d, l, b) = (a.int("u"), a.uint("d"), a.uint("L"), a.uint("B"));
            let r = check_congruence_bound(u, d, l, b);
            json!({"count": count_congruence(u, d, l, b), "bound": r.bound_value, "passes": r.passes, "report": r})
        }
        Lemma10 => {
            let q = PairQuery {
                w: a.uint("W"),
                x: a.uint("X"),
                y: a.uint("Y"),
                a: a.int("a"),
                q: a.uint("q"),
                convention: a.text("convention").parse::<IntervalConvention>()?,
            };
            let r = check_pairs_bound(&q, a.real("eta"))?;
            json!({"count": r.exact_count, "report": r})
        }
        Expsum => {
            let g = IntPoly::new(a.int_list("g"))?;
            let (s, ell) = (a.uint("s"), a.uint("ell"));
            let z = complete_sum::<f64>(s, &g, ell)?;
            let r = cochrane_check(s, &g, ell)?;
            json!({"re": z.re, "im": z.im, "abs": z.norm(), "report": r})
        }
        Weyl => {
            let f = RealPoly::new(a.coef_list("f"), a.uint("bits") as u32)?;
            let (lo, hi, m) = (a.int("lo"), a.int("hi"), a.int("m"));
            let w = weyl_sum(&f, lo, hi, m)?;
            let approx = match a.opt_real("L") {
                Some(l) => {
                    let x = hi.unsigned_abs().max(lo.unsigned_abs()).max(2) as f64;
                    let r = simultaneous_approx(&f, x, l, a.uint("smax"))?;
                    let cond = r.gcd_condition(m.unsigned_abs() as f64, x, a.real("eta"));
                    Some(json!({"result": r, "gcd_condition": cond}))
                }
                None => None,
            };
            json!({"sum": w, "abs": w.value.norm(), "approximation": approx})
        }
        Lemma7 => {
            let f = RealPoly::new(a.coef_list("f"), a.uint("bits") as u32)?;
            let g = IntPoly::new(a.int_list("g"))?;
            let opts = MajorArcOptions {
                n_2eta: a.real("n2eta"),
                quad_tol: a.real("tol"),
                ..MajorArcOptions::default()
            };
            let r = major_arc_error(&f, a.uint("s"), &g, a.int("lo"), a.int("hi"), a.uint("L"), opts)?;
            to_value(&r)
        }
        Type1 => {
            let s = sched_of(a)?;
            let m = modulus(a, &s)?;
            let r = type_i_experiment(&s, &m.convergent, a.uint("Y"), seed, a.uint("opcap") as u128)?;
            json!({"schedule": s, "modulus": m, "report": r})
        }
        Type2 => {
            let s = sched_of(a)?;
            let m = modulus(a, &s)?;
            let aw = parse_weights(a.text("a_weights"), seed).expect("validated");
            let bw = parse_weights(a.text("b_weights"), seed.wrapping_add(1)).expect("validated");
            let r = type_ii_experiment(&s, &m.convergent, a.uint("Y"), aw, bw, a.uint("opcap") as u128)?;
            json!({"schedule": s, "modulus": m, "report": r})
        }
        Omega => {
            let u = a.real("u");
            json!({"u": u, "value": buchstab_omega(u, a.real("tol"))?, "limit": OMEGA_LIMIT})
        }
        Integral => {
            let r = sieve_integral(a.real("c"), a.real("tol"))?;
            let mut m = object(to_value(&r));
            m.insert("tol".into(), json!(a.real("tol")));
            m.insert("lt_one".into(), json!(r.value + r.error_certificate < 1.0));
            Value::Object(m)
        }
        Critical => {
            let r = critical_constant(a.real("tol"))?;
            let mut m = object(to_value(&r));
            m.insert("reference".into(), json!(0.1842));
            m.insert("reference_minus_c".into(), json!(0.1842 - r.c));
            Value::Object(m)
        }
        Sift => {
            let e = parse_set(a.text("set"))?;
            json!({"count": sift(&e, a.real("z")), "size": e.len()})
        }
        Identity => {
            let e = parse_set(a.text("set"))?;
            to_value(&buchstab_identity_check(&e, a.real("z1"), a.real("z2"))?)
        }
        Decompose => {
            let s = sched_of(a)?;
            let n = s.n;
            let (set, choice) = if a.text("set") == "a" {
                let m = modulus(a, &s)?;
                let g = convergent_poly(m.convergent, s.k, Coef::zero(), n)?;
                (construct_a(n, &s, &g)?, Some(m))
            } else {
                (SiftSet::b_set(n)?, None)
            };
            let alpha_exp = a.opt_real("alpha_exp").unwrap_or(s.sieve_alpha);
            let beta_exp = a.opt_real("beta_exp").unwrap_or(s.sieve_alpha_beta - s.sieve_alpha);
            let d = decompose_s1_s4(&set, n, alpha_exp, beta_exp)?;
            json!({
                "schedule": s,
                "modulus": choice,
                "set_size": set.len(),
                "alpha_exp": alpha_exp,
                "beta_exp": beta_exp,
                "decomposition": d,
            })
        }
        Search => {
            let f = FracPolynomial::with_alpha(a.alpha("alpha"), a.uint("k") as u32, a.coef("beta"), a.uint("pmax"))?;
            let r = prime_scan(&f, a.real("nu"), a.uint("pmax"))?;
            t = Some(Table {
                key: "records",
                columns: Some(&["p", "fracpart", "threshold", "is_record"]),
            });
            let mut m = object(to_value(&r));
            m.insert("polynomial".into(), to_value(&f.info()));
            Value::Object(m)
        }
        Density => {
            let s = sched_of(a)?;
            let m = modulus(a, &s)?;
            let g = convergent_poly(m.convergent, s.k, Coef::zero(), s.n)?;
            let d = density_report(s.n, &s, &g)?;
            let comparison = if a.boolean("compare") {
                Some(compare_for(s.n, &s, &g)?)
            } else {
                None
            };
            json!({"schedule": s, "modulus": m, "report": d, "comparison": comparison})
        }
    };
    Ok(Output {
        fields: object(fields),
        table: t,
    })
}
