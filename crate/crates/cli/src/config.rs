//! Run configuration: subcommands, their parameter tables and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use fracpoly::expsum::Coef;
use fracpoly::rational::AlphaSpec;

macro_rules! subcommands {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum Subcommand { $($variant),* }

        impl Subcommand {
            pub const ALL: &'static [Subcommand] = &[$(Subcommand::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Subcommand::$variant => $name),* }
            }
        }

        impl FromStr for Subcommand {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($name => Ok(Subcommand::$variant),)*
                    other => Err(format!("unknown subcommand {other:?}")),
                }
            }
        }
    };
}

subcommands! {
    Convergents => "convergents",
    Schedule => "schedule",
    Inequalities => "inequalities",
    CountNk => "count-nk",
    CountMk => "count-mk",
    EnumA => "enum-a",
    Lemma6 => "lemma6",
    Lemma10 => "lemma10",
    Expsum => "expsum",
    Weyl => "weyl",
    Lemma7 => "lemma7",
    Type1 => "type1",
    Type2 => "type2",
    Omega => "omega",
    Integral => "integral",
    Critical => "critical",
    Sift => "sift",
    Identity => "identity",
    Decompose => "decompose",
    Search => "search",
    Density => "density",
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Subcommand {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (json|csv)")),
        }
    }
}

/// A fully specified run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub params: BTreeMap<String, String>,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Non-negative integer.
    UInt,
    Int,
    Real,
    Bool,
    Alpha,
    Coef,
    /// Comma-separated integers.
    IntList,
    /// Comma-separated coefficients.
    CoefList,
    Text,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::UInt => "a non-negative integer",
            Kind::Int => "an integer",
            Kind::Real => "a real number",
            Kind::Bool => "true or false",
            Kind::Alpha => "an alpha spec (sqrt:D, surd:(p+r*sqrtD)/s, dec:..., rat:a/b)",
            Kind::Coef => "a coefficient (integer, a/b, decimal or alpha spec)",
            Kind::IntList => "comma-separated integers",
            Kind::CoefList => "comma-separated coefficients",
            Kind::Text => "text",
        }
    }

    fn check(self, v: &str) -> bool {
        let list = |f: &dyn Fn(&str) -> bool| v.split(',').all(|x| f(x.trim()));
        match self {
            Kind::UInt => parse_uint(v).is_some(),
            Kind::Int => v.trim().parse::<i64>().is_ok(),
            Kind::Real => v.trim().parse::<f64>().is_ok_and(f64::is_finite),
            Kind::Bool => parse_bool(v).is_some(),
            Kind::Alpha => v.parse::<AlphaSpec>().is_ok(),
            Kind::Coef => v.parse::<Coef>().is_ok(),
            Kind::IntList => list(&|x| x.parse::<i64>().is_ok()),
            Kind::CoefList => list(&|x| x.parse::<Coef>().is_ok()),
            Kind::Text => true,
        }
    }
}

/// Integers may be written as `1000000`, `1e6` or `10^6`.
pub fn parse_uint(v: &str) -> Option<u64> {
    let t = v.trim();
    if let Ok(n) = t.parse::<u64>() {
        return Some(n);
    }
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().ok()?;
        return b.checked_pow(e.parse().ok()?);
    }
    let f: f64 = t.parse().ok()?;
    (f >= 0.0 && f.fract() == 0.0 && f < 1.8e19).then_some(f as u64)
}

pub fn parse_bool(v: &str) -> Option<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// One accepted parameter.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub name: &'static str,
    pub kind: Kind,
    /// `None` means required.
    pub default: Option<&'static str>,
}

const fn req(name: &'static str, kind: Kind) -> Param {
    Param { name, kind, default: None }
}

const fn opt(name: &'static str, kind: Kind, default: &'static str) -> Param {
    Param { name, kind, default: Some(default) }
}

/// Optional with no default: absent stays absent.
const fn maybe(name: &'static str, kind: Kind) -> Param {
    Param { name, kind, default: Some("") }
}

use Kind::*;

const SCHEDULE_PARAMS: [Param; 5] = [
    req("N", UInt),
    req("k", UInt),
    opt("monomial", Bool, "true"),
    opt("eps", Real, "0.01"),
    maybe("eta", Real),
];

pub fn params(cmd: Subcommand) -> Vec<Param> {
    use Subcommand::*;
    let sched = SCHEDULE_PARAMS.to_vec();
    match cmd {
        Convergents => vec![req("alpha", Alpha), opt("qmax", UInt, "1000000000000")],
        Schedule => [sched, vec![maybe("alpha", Alpha), opt("strict", Bool, "false")]].concat(),
        Inequalities => vec![req("k", UInt), opt("monomial", Bool, "true")],
        CountNk => vec![
            req("k", UInt),
            req("q", UInt),
            req("a", Int),
            req("s", UInt),
            req("Y", UInt),
            req("D", UInt),
            req("Z", Real),
            opt("eta", Real, "0.01"),
            maybe("N", UInt),
        ],
        CountMk => vec![
            req("k", UInt),
            req("q", UInt),
            req("a", Int),
            req("Y", UInt),
            req("Z", Real),
            req("S0", Real),
            req("S1", Real),
            req("gcd_cap", UInt),
            req("N", UInt),
            opt("eta", Real, "0.01"),
            maybe("rho", Real),
            opt("cap", UInt, "10000000"),
        ],
        EnumA => vec![
            req("S0", Real),
            req("S1", Real),
            opt("d0", UInt, "1"),
            opt("d1", UInt, "1"),
            maybe("N", UInt),
            opt("eta", Real, "0.01"),
            opt("cap", UInt, "10000000"),
        ],
        Lemma6 => vec![req("u", Int), req("d", UInt), req("L", UInt), req("B", UInt)],
        Lemma10 => vec![
            req("W", UInt),
            req("X", UInt),
            req("Y", UInt),
            req("a", Int),
            req("q", UInt),
            opt("eta", Real, "0.01"),
            opt("convention", Text, "closed-open"),
        ],
        Expsum => vec![req("s", UInt), req("g", IntList), opt("ell", UInt, "1")],
        Weyl => vec![
            req("f", CoefList),
            req("lo", Int),
            req("hi", Int),
            opt("m", Int, "1"),
            opt("bits", UInt, "128"),
            maybe("L", Real),
            opt("smax", UInt, "100000"),
            opt("eta", Real, "0.01"),
        ],
        Lemma7 => vec![
            req("f", CoefList),
            req("s", UInt),
            req("g", IntList),
            req("lo", Int),
            req("hi", Int),
            req("L", UInt),
            opt("bits", UInt, "128"),
            opt("n2eta", Real, "1"),
            opt("tol", Real, "1e-13"),
        ],
        Type1 => [
            sched,
            vec![req("alpha", Alpha), req("Y", UInt), opt("opcap", UInt, "2000000000")],
        ]
        .concat(),
        Type2 => [
            sched,
            vec![
                req("alpha", Alpha),
                req("Y", UInt),
                opt("a_weights", Text, "unimodular"),
                opt("b_weights", Text, "unimodular"),
                opt("opcap", UInt, "2000000000"),
            ],
        ]
        .concat(),
        Omega => vec![req("u", Real), opt("tol", Real, "1e-9")],
        Integral => vec![req("c", Real), opt("tol", Real, "1e-5")],
        Critical => vec![opt("tol", Real, "1e-5")],
        Sift => vec![req("set", Text), req("z", Real)],
        Identity => vec![req("set", Text), req("z1", Real), req("z2", Real)],
        Decompose => [
            sched,
            vec![
                opt("set", Text, "b"),
                opt("alpha", Alpha, "sqrt:2"),
                maybe("alpha_exp", Real),
                maybe("beta_exp", Real),
            ],
        ]
        .concat(),
        Search => vec![
            req("alpha", Alpha),
            req("k", UInt),
            opt("beta", Coef, "0"),
            req("nu", Real),
            req("pmax", UInt),
        ],
        Density => [sched, vec![opt("alpha", Alpha, "sqrt:2"), opt("compare", Bool, "false")]].concat(),
    }
}

/// A broken precondition: which parameter and which rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub param: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.param, self.rule)
    }
}

fn v(param: &str, rule: &str) -> Violation {
    Violation {
        param: param.into(),
        rule: rule.into(),
    }
}

/// Fill defaults into `params`; returns the resolved map and any
/// structural violations (unknown, missing or unparsable keys).
pub fn resolve(cmd: Subcommand, given: &BTreeMap<String, String>) -> (BTreeMap<String, String>, Vec<Violation>) {
    let table = params(cmd);
    let mut out = BTreeMap::new();
    let mut bad = Vec::new();
    for key in given.keys() {
        if !table.iter().any(|p| p.name == key) {
            bad.push(v(key, &format!("unknown parameter for {cmd}")));
        }
    }
    for p in &table {
        match (given.get(p.name), p.default) {
            (Some(val), _) => {
                if !p.kind.check(val) {
                    bad.push(v(p.name, &format!("expected {}", p.kind.describe())));
                }
                out.insert(p.name.to_string(), val.clone());
            }
            (None, Some("")) => {}
            (None, Some(d)) => {
                out.insert(p.name.to_string(), d.to_string());
            }
            (None, None) => bad.push(v(p.name, "required")),
        }
    }
    (out, bad)
}

/// Typed access to resolved, structurally valid parameters.
pub struct Args<'a>(pub &'a BTreeMap<String, String>);

impl Args<'_> {
    pub fn has(&self, k: &str) -> bool {
        self.0.contains_key(k)
    }
    fn raw(&self, k: &str) -> &str {
        self.0.get(k).map(String::as_str).unwrap_or_else(|| panic!("parameter {k} resolved"))
    }
    pub fn uint(&self, k: &str) -> u64 {
        parse_uint(self.raw(k)).expect("validated")
    }
    pub fn int(&self, k: &str) -> i64 {
        self.raw(k).trim().parse().expect("validated")
    }
    pub fn real(&self, k: &str) -> f64 {
        self.raw(k).trim().parse().expect("validated")
    }
    pub fn opt_real(&self, k: &str) -> Option<f64> {
        self.has(k).then(|| self.real(k))
    }
    pub fn opt_uint(&self, k: &str) -> Option<u64> {
        self.has(k).then(|| self.uint(k))
    }
    pub fn boolean(&self, k: &str) -> bool {
        parse_bool(self.raw(k)).expect("validated")
    }
    pub fn alpha(&self, k: &str) -> AlphaSpec {
        self.raw(k).parse().expect("validated")
    }
    pub fn coef(&self, k: &str) -> Coef {
        self.raw(k).parse().expect("validated")
    }
    pub fn int_list(&self, k: &str) -> Vec<i64> {
        self.raw(k).split(',').map(|x| x.trim().parse().expect("validated")).collect()
    }
    pub fn coef_list(&self, k: &str) -> Vec<Coef> {
        self.raw(k).split(',').map(|x| x.trim().parse().expect("validated")).collect()
    }
    pub fn text(&self, k: &str) -> &str {
        self.raw(k)
    }
    /// `eta`, defaulting to `eps / 1000`.
    pub fn eta_or_default(&self) -> f64 {
        self.opt_real("eta").unwrap_or_else(|| self.real("eps") / 1000.0)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    fracpoly::primes::gcd(a, b)
}

/// Semantic preconditions on structurally valid parameters.
fn rules(cmd: Subcommand, a: &Args) -> Vec<Violation> {
    use Subcommand::*;
    let mut out = Vec::new();
    let mut need = |ok: bool, p: &str, rule: &str| {
        if !ok {
            out.push(v(p, rule));
        }
    };
    let sched_rules = |need: &mut dyn FnMut(bool, &str, &str)| {
        need(a.uint("N") >= 10, "N", "N ≥ 10");
        need(a.uint("k") >= 2, "k", "k ≥ 2");
        let eps = a.real("eps");
        need(eps > 0.0 && eps < 0.1, "eps", "0 < ε < 0.1");
        let eta = a.eta_or_default();
        need(eta > 0.0 && eta < eps, "eta", "0 < η < ε");
    };
    match cmd {
        Convergents => need(a.uint("qmax") >= 1, "qmax", "qmax ≥ 1"),
        Schedule | Type1 | Type2 | Density => sched_rules(&mut need),
        Decompose => {
            sched_rules(&mut need);
            let set = a.text("set");
            need(set == "a" || set == "b", "set", "set is a or b");
        }
        Inequalities => need(a.uint("k") >= 2, "k", "k ≥ 2"),
        CountNk => {
            let q = a.uint("q");
            need(a.uint("k") >= 2, "k", "k ≥ 2");
            need(q >= 2, "q", "q ≥ 2");
            need(a.real("Z") >= 2.0, "Z", "Z ≥ 2");
            need(a.uint("s") >= 1 && a.uint("s") < q, "s", "1 ≤ s < q");
            need(a.uint("Y") >= 1 && a.uint("Y") < q, "Y", "1 ≤ Y < q");
            need(a.uint("D") >= 1 && a.uint("D") < q, "D", "1 ≤ D < q");
            if q >= 2 {
                need(gcd(a.int("a").rem_euclid(q as i64) as u64, q) == 1, "a", "gcd(a, q) = 1");
            }
        }
        CountMk => {
            let q = a.uint("q");
            need(a.uint("k") >= 2, "k", "k ≥ 2");
            need(q >= 2, "q", "q ≥ 2");
            need(a.real("Z") >= 2.0, "Z", "Z ≥ 2");
            need(a.uint("Y") >= 1 && a.uint("Y") < q, "Y", "1 ≤ Y < q");
            need(a.real("S0") >= 1.0, "S0", "S0 ≥ 1");
            need(a.real("S1") >= 1.0, "S1", "S1 ≥ 1");
            need(a.uint("gcd_cap") >= 1, "gcd_cap", "gcd_cap ≥ 1");
        }
        EnumA => {
            need(a.real("S0") >= 1.0, "S0", "S0 ≥ 1");
            need(a.real("S1") >= 1.0, "S1", "S1 ≥ 1");
            need(a.uint("d0") >= 1, "d0", "d0 ≥ 1");
            need(a.uint("d1") >= 1, "d1", "d1 ≥ 1");
        }
        Lemma6 => need(a.uint("d") >= 1, "d", "d ≥ 1"),
        Lemma10 => {
            let q = a.uint("q");
            need(q >= 2, "q", "q ≥ 2");
            need(a.uint("W") >= 2, "W", "W ≥ 2");
            need(a.uint("X") >= 2, "X", "X ≥ 2");
            need(a.uint("Y") >= 2, "Y", "Y ≥ 2");
            need(a.text("convention").parse::<fracpoly::counting::IntervalConvention>().is_ok(), "convention", "closed-open or open-closed");
        }
        Expsum => {
            need(a.uint("s") >= 1, "s", "s ≥ 1");
        }
        Weyl => need(a.int("lo") <= a.int("hi"), "hi", "lo ≤ hi"),
        Lemma7 => {
            need(a.uint("s") >= 1, "s", "s ≥ 1");
            need(a.int("lo") < a.int("hi"), "hi", "lo < hi");
            need(a.uint("L") >= 1, "L", "L ≥ 1");
        }
        Omega => need(a.real("u") >= 1.0, "u", "u ≥ 1"),
        Integral => {
            need(a.real("c") > 0.0, "c", "c > 0");
            need(a.real("tol") > 0.0, "tol", "tol > 0");
        }
        Critical => {
            let t = a.real("tol");
            need(t > 0.0 && t <= 1e-5, "tol", "0 < tol ≤ 1e-5");
        }
        Sift => {
            need(crate::sets::parse_set(a.text("set")).is_ok(), "set", "lo..hi, b:N or list:n1,n2,...");
            need(a.real("z") >= 2.0, "z", "z ≥ 2");
        }
        Identity => {
            need(crate::sets::parse_set(a.text("set")).is_ok(), "set", "lo..hi, b:N or list:n1,n2,...");
            let (z1, z2) = (a.real("z1"), a.real("z2"));
            need(z1 >= 2.0 && z1 <= z2, "z1", "2 ≤ z1 ≤ z2");
        }
        Search => {
            let nu = a.real("nu");
            need(nu > 0.0 && nu < 1.0, "nu", "0 < ν < 1");
            need(a.uint("k") >= 1, "k", "k ≥ 1");
            need(a.uint("pmax") <= 1_000_000_000, "pmax", "pmax ≤ 10^9");
        }
    }
    for w in ["a_weights", "b_weights"] {
        if cmd == Subcommand::Type2 && crate::commands::parse_weights(a.text(w), 0).is_none() {
            out.push(v(w, "unimodular, ones or zeros"));
        }
    }
    out
}

/// Every violation of `config`; empty iff the run would pass its
/// precondition checks.
pub fn validate(config: &RunConfig) -> Vec<Violation> {
    let (resolved, mut bad) = resolve(config.subcommand, &config.params);
    if config.threads == 0 {
        bad.push(v("threads", "threads ≥ 1"));
    }
    if bad.is_empty() {
        bad.extend(rules(config.subcommand, &Args(&resolved)));
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(cmd: Subcommand, pairs: &[(&str, &str)]) -> RunConfig {
        RunConfig {
            subcommand: cmd,
            params: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            format: Format::Json,
            threads: 1,
            seed: 0,
        }
    }

    const NK: [(&str, &str); 7] = [("k", "2"), ("q", "7"), ("a", "3"), ("s", "2"), ("Y", "3"), ("D", "1"), ("Z", "2")];

    #[test]
    fn integers() {
        assert_eq!(parse_uint("1e6"), Some(1_000_000));
        assert_eq!(parse_uint("10^6"), Some(1_000_000));
        assert_eq!(parse_uint("42"), Some(42));
        assert_eq!(parse_uint("1.5"), None);
        assert_eq!(parse_uint("-3"), None);
    }

    #[test]
    fn subcommand_names_round_trip() {
        for &c in Subcommand::ALL {
            assert_eq!(c.name().parse::<Subcommand>().unwrap(), c);
        }
        assert!("lemma99".parse::<Subcommand>().is_err());
    }

    #[test]
    fn well_formed_is_clean() {
        assert!(validate(&cfg(Subcommand::CountNk, &NK)).is_empty());
        assert!(validate(&cfg(Subcommand::Integral, &[("c", "0.1842")])).is_empty());
    }

    #[test]
    fn z_below_two() {
        let mut p = NK.to_vec();
        p[6] = ("Z", "1");
        let bad = validate(&cfg(Subcommand::CountNk, &p));
        assert_eq!(bad, vec![Violation { param: "Z".into(), rule: "Z ≥ 2".into() }]);
    }

    #[test]
    fn s_at_least_q() {
        let mut p = NK.to_vec();
        p[3] = ("s", "7");
        let bad = validate(&cfg(Subcommand::CountNk, &p));
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].param, "s");
    }

    #[test]
    fn structural_violations() {
        let bad = validate(&cfg(Subcommand::CountNk, &[("k", "x"), ("bogus", "1")]));
        let params: Vec<&str> = bad.iter().map(|v| v.param.as_str()).collect();
        assert!(params.contains(&"bogus"));
        assert!(params.contains(&"k"));
        assert!(params.contains(&"q"));
    }

    #[test]
    fn defaults_resolved() {
        let (r, bad) = resolve(Subcommand::Schedule, &[("N".to_string(), "1e6".to_string()), ("k".into(), "2".into())].into());
        assert!(bad.is_empty());
        assert_eq!(r["eps"], "0.01");
        assert_eq!(Args(&r).eta_or_default(), 1e-5);
    }
}
