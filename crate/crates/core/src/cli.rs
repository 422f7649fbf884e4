//! Command-line front end: session flags, subcommands and report rendering.

use std::fmt::Display;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::capacity::{
    adelic_capacity_log, capacity_log, green_estimate, green_sum, green_values, membership,
    param_height, Membership,
};
use crate::family::FamilyModule;
use crate::field::{
    factor_univariate_with_rng, rational_roots, render_rational, Field, FqElem, FqPoly, ParamPoly,
    Place, RatFunc, Rational, RootError, DEFAULT_DIVISOR_BUDGET, DEFAULT_SEED,
};
use crate::heights::{
    canonical_height, is_torsion, local_orbit, HeightValue, LocalOutcome, TorsionCertificate,
    DEFAULT_BUDGET,
};
use crate::ore::{DrinfeldModule, OrePoly};
use crate::paramsearch::{
    case_analysis_verify, common_param_gcd, common_param_resultant, dependence_check, lambda0,
    torsion_param_poly,
};
use crate::parse::{
    parse_constant, parse_family, parse_fqpoly, parse_param, parse_place, parse_ratfunc,
};

/// Largest number of parameters a sweep will visit.
pub const MAX_SWEEP: u64 = 4096;

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Exact arithmetic dynamics of Drinfeld module families")]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SessionArgs {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// q = p^e.
    #[arg(long, global = true, default_value_t = 1)]
    pub e: u32,
    /// Constant field F_{q^s}.
    #[arg(long, global = true, default_value_t = 1)]
    pub s: u32,
    /// Monic irreducible modulus over F_p written in u, e.g. "u^2+u+1".
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    #[arg(long, global = true, default_value = "r=2;g1=z")]
    pub family: String,
    /// Iteration budget for orbit computations.
    #[arg(long = "budget-iter", global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget_iter: usize,
    /// Candidate budget for root searches.
    #[arg(long = "budget-div", global = true, default_value_t = DEFAULT_DIVISOR_BUDGET)]
    pub budget_div: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Product of two Ore polynomials given as comma-separated coefficients.
    OreMul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Φ_f, for the family or for the specialization at λ.
    Phi {
        #[arg(long)]
        f: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Φ_f(x).
    Act {
        #[arg(long)]
        f: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// f_{c,n} = Φ_{t^n}(c) in K[z].
    Iterate {
        #[arg(long)]
        c: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: Option<String>,
    },
    DegreeLaw {
        #[arg(long)]
        c: String,
        #[arg(long)]
        n: usize,
    },
    /// Canonical height of x under Φ^λ.
    Height {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        x: String,
    },
    LocalHeight {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        place: String,
    },
    TorsionTest {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        x: String,
    },
    /// Parameters λ ∈ K with Φ^λ_f(a(λ)) = 0.
    TorsionParams {
        #[arg(long)]
        a: String,
        #[arg(long)]
        f: String,
    },
    /// Common torsion parameters of a (killed by f) and b (killed by g).
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    Lambda0 {
        #[arg(long)]
        a: String,
    },
    CaseVerify {
        #[arg(long)]
        a: String,
        #[arg(long)]
        gamma: String,
    },
    Green {
        #[arg(long)]
        c: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    Capacity {
        #[arg(long)]
        c: String,
        #[arg(long)]
        place: String,
    },
    Adelic {
        #[arg(long)]
        c: String,
    },
    Membership {
        #[arg(long)]
        c: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        lambda: String,
    },
    ParamHeight {
        #[arg(long)]
        c: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Green values and membership over all polynomial λ of bounded degree.
    Sweep {
        #[arg(long)]
        c: String,
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "max-degree", default_value_t = 1)]
        max_degree: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::OreMul { .. } => "ore-mul",
            Command::Phi { .. } => "phi",
            Command::Act { .. } => "act",
            Command::Iterate { .. } => "iterate",
            Command::DegreeLaw { .. } => "degree-law",
            Command::Height { .. } => "height",
            Command::LocalHeight { .. } => "local-height",
            Command::TorsionTest { .. } => "torsion-test",
            Command::TorsionParams { .. } => "torsion-params",
            Command::Compare { .. } => "compare",
            Command::Lambda0 { .. } => "lambda0",
            Command::CaseVerify { .. } => "case-verify",
            Command::Green { .. } => "green",
            Command::Capacity { .. } => "capacity",
            Command::Adelic { .. } => "adelic",
            Command::Membership { .. } => "membership",
            Command::ParamHeight { .. } => "param-height",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// An input error; the process exits with status 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn input_err(e: impl Display) -> InputError {
    InputError(e.to_string())
}

/// The outcome of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub certificates: Value,
    /// False when a budget ran out or an answer is only a bound.
    pub complete: bool,
    /// Tabular output for CSV, when the command produces rows.
    pub table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.complete {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "result": self.result,
            "certificates": self.certificates,
            "budget_status": if self.complete { "complete" } else { "exhausted" },
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some((header, rows)) => {
                w.write_record(header).expect("in-memory write");
                for row in rows {
                    w.write_record(row).expect("in-memory write");
                }
            }
            None => {
                w.write_record(["key", "value"]).expect("in-memory write");
                let mut flat = Vec::new();
                flatten("command", &Value::String(self.command.into()), &mut flat);
                flatten("result", &self.result, &mut flat);
                flatten("certificates", &self.certificates, &mut flat);
                let status = if self.complete { "complete" } else { "exhausted" };
                flat.push(("budget_status".into(), status.into()));
                for (k, v) in flat {
                    w.write_record([k, v]).expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Null => out.push((prefix.into(), String::new())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

fn s(x: impl Display) -> Value {
    Value::String(x.to_string())
}

fn rat(x: &Rational) -> Value {
    Value::String(render_rational(x))
}

/// Field and family of a session.
pub struct Session {
    pub field: Field,
    pub family: FamilyModule,
    pub args: SessionArgs,
}

impl Session {
    pub fn new(args: &SessionArgs) -> Result<Session, InputError> {
        let modulus = match &args.modulus {
            None => None,
            Some(text) => {
                let fp = Field::prime(args.p).map_err(input_err)?;
                let poly = parse_fqpoly(&fp, &text.replace('u', "t")).map_err(input_err)?;
                Some(poly.coeffs().iter().map(|&c| fp.coords(c)[0]).collect())
            }
        };
        let field = Field::new(args.p, args.e, args.s, modulus).map_err(input_err)?;
        let family = parse_family(&field, &args.family).map_err(input_err)?;
        Ok(Session { field, family, args: args.clone() })
    }

    fn base_inputs(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("p".into(), s(self.args.p));
        m.insert("e".into(), s(self.args.e));
        m.insert("s".into(), s(self.args.s));
        m.insert("family".into(), s(&self.family));
        m
    }

    fn param(&self, text: &str) -> Result<ParamPoly, InputError> {
        parse_param(&self.field, text).map_err(input_err)
    }

    fn ratfunc(&self, text: &str) -> Result<RatFunc, InputError> {
        parse_ratfunc(&self.field, text).map_err(input_err)
    }

    fn fqpoly(&self, text: &str) -> Result<FqPoly, InputError> {
        parse_fqpoly(&self.field, text).map_err(input_err)
    }

    fn place(&self, text: &str) -> Result<Place, InputError> {
        parse_place(&self.field, text).map_err(input_err)
    }

    fn ore(&self, text: &str) -> Result<OrePoly<ParamPoly>, InputError> {
        let coeffs = text.split(',').map(|c| self.param(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(OrePoly::new(&self.field, coeffs))
    }

    fn annihilator(&self, text: &str) -> Result<FqPoly, InputError> {
        let f = self.fqpoly(text)?;
        if f.is_zero() {
            return Err(InputError("the annihilator must be nonzero".into()));
        }
        if f.coeffs().iter().any(|&c| !self.field.in_base_field(c)) {
            return Err(InputError(format!("{f} does not have coefficients in F_q")));
        }
        Ok(f)
    }

    /// c must satisfy the degree hypothesis.
    fn marked(&self, text: &str) -> Result<ParamPoly, InputError> {
        let c = self.param(text)?;
        if !self.family.hypothesis_check(&c).holds {
            return Err(InputError(format!("{c} fails the degree hypothesis for {}", self.family)));
        }
        Ok(c)
    }

    /// Render an element of K with numerator and denominator factored.
    fn factored(&self, r: &RatFunc) -> String {
        if r.is_zero() {
            return "0".into();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.args.seed);
        let num = factor_univariate_with_rng(r.num(), &mut rng).expect("nonzero").render(&self.field);
        if r.den().is_one() {
            return num;
        }
        let den = factor_univariate_with_rng(r.den(), &mut rng).expect("nonzero").render(&self.field);
        let wrap = |x: String| if x.contains(['+', '*']) { format!("({x})") } else { x };
        format!("{}/{}", if num.contains('+') { format!("({num})") } else { num }, wrap(den))
    }
}

fn certificate_json(c: &TorsionCertificate, verified: bool) -> Value {
    match c {
        TorsionCertificate::Torsion { annihilator } => json!({
            "annihilator": s(annihilator),
            "verified": verified,
        }),
        TorsionCertificate::NonTorsion { place, step, log_abs } => json!({
            "place": s(place),
            "step": s(step),
            "log_abs": rat(log_abs),
            "verified": verified,
        }),
    }
}

fn roots_json(search: &Result<crate::field::RootSearch, RootError>) -> (Value, Value, bool) {
    match search {
        Ok(rs) => (Value::Array(rs.roots.iter().map(s).collect()), s(rs.candidates), true),
        Err(RootError::ZeroPolynomial) => (s("all"), s(0), true),
        Err(RootError::BudgetExceeded { needed, .. }) => (s("unknown"), s(needed), false),
    }
}

fn outcome_json(o: &LocalOutcome) -> Value {
    match o {
        LocalOutcome::Escaped { step, log_abs } => {
            json!({"kind": "escaped", "step": s(step), "log_abs": s(log_abs)})
        }
        LocalOutcome::Integral { step } => json!({"kind": "integral", "step": s(step)}),
        LocalOutcome::Cycle { start, period } => {
            json!({"kind": "cycle", "start": s(start), "period": s(period)})
        }
        LocalOutcome::Torsion => json!({"kind": "torsion"}),
        LocalOutcome::Exhausted { steps, bound } => {
            json!({"kind": "exhausted", "steps": s(steps), "bound": rat(bound)})
        }
    }
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Result<Report, InputError> {
    let ss = Session::new(&cli.session)?;
    let fam = &ss.family;
    let field = &ss.field;
    let budget = ss.args.budget_iter;
    let mut inputs = ss.base_inputs();
    let mut put = |k: &str, v: Value| {
        inputs.insert(k.into(), v);
    };
    let mut complete = true;
    let mut certificates = json!({});
    let mut table = None;

    let result = match &cli.command {
        Command::OreMul { a, b } => {
            let (a, b) = (ss.ore(a)?, ss.ore(b)?);
            put("a", s(&a));
            put("b", s(&b));
            let prod = a.mul(&b);
            json!({
                "product": s(&prod),
                "coefficients": prod.coeffs().iter().map(s).collect::<Vec<_>>(),
            })
        }
        Command::Phi { f, lambda } => {
            let f = ss.annihilator(f)?;
            put("f", s(&f));
            let image = match lambda {
                Some(l) => {
                    let l = ss.ratfunc(l)?;
                    put("lambda", s(&l));
                    fam.specialize(&l).phi_image(&f).map_err(input_err)?.to_string()
                }
                None => fam.module().phi_image(&f).map_err(input_err)?.to_string(),
            };
            json!({ "phi_f": image })
        }
        Command::Act { f, x, lambda } => {
            let f = ss.annihilator(f)?;
            put("f", s(&f));
            let value = match lambda {
                Some(l) => {
                    let l = ss.ratfunc(l)?;
                    let x = ss.ratfunc(x)?;
                    put("lambda", s(&l));
                    put("x", s(&x));
                    fam.specialize(&l).phi_image(&f).map_err(input_err)?.act(&x).to_string()
                }
                None => {
                    let x = ss.param(x)?;
                    put("x", s(&x));
                    fam.module().phi_image(&f).map_err(input_err)?.act(&x).to_string()
                }
            };
            json!({ "value": value })
        }
        Command::Iterate { c, n, lambda } => {
            let c = ss.param(c)?;
            put("c", s(&c));
            put("n", s(n));
            let y = fam.iterate_point(&c, *n);
            let mut out = json!({
                "iterate": s(&y),
                "degree": y.degree().map_or(Value::Null, s),
                "leading": s(y.leading_coeff()),
            });
            if let Some(l) = lambda {
                let l = ss.ratfunc(l)?;
                put("lambda", s(&l));
                out["specialized"] = s(y.evaluate(&l));
            }
            out
        }
        Command::DegreeLaw { c, n } => {
            let c = ss.param(c)?;
            put("c", s(&c));
            put("n", s(n));
            let hyp = fam.hypothesis_check(&c);
            let law = fam.degree_law_check(&c, *n).map_err(input_err)?;
            json!({
                "holds": law.holds(),
                "degree": s(law.degree),
                "expected_degree": s(law.expected_degree),
                "leading": s(&law.leading),
                "expected_leading": s(&law.expected_leading),
                "hypothesis_bound": rat(&hyp.bound),
                "hypothesis_margin": hyp.margin.as_ref().map_or(Value::Null, rat),
            })
        }
        Command::Height { lambda, x } => {
            let (l, x) = (ss.ratfunc(lambda)?, ss.ratfunc(x)?);
            put("lambda", s(&l));
            put("x", s(&x));
            let phi = fam.specialize(&l);
            let report = canonical_height(&phi, &x, budget);
            complete = report.value.is_exact();
            let verified = report.certificate.verify(&phi, &x);
            certificates = certificate_json(&report.certificate, verified);
            json!({
                "height": s(&report.value),
                "exact": report.value.is_exact(),
                "local": report.local.iter().map(|(v, h)| json!({"place": s(v), "value": s(h)})).collect::<Vec<_>>(),
            })
        }
        Command::LocalHeight { lambda, x, place } => {
            let (l, x, v) = (ss.ratfunc(lambda)?, ss.ratfunc(x)?, ss.place(place)?);
            put("lambda", s(&l));
            put("x", s(&x));
            put("place", s(&v));
            let phi = fam.specialize(&l);
            let orbit = local_orbit(&phi, &v, &x, budget);
            let h = orbit.height(field.q(), phi.rank());
            complete = h.is_exact();
            json!({
                "local_height": s(&h),
                "log_escape_radius": rat(&orbit.log_rv),
                "outcome": outcome_json(&orbit.outcome),
            })
        }
        Command::TorsionTest { lambda, x } => {
            let (l, x) = (ss.ratfunc(lambda)?, ss.ratfunc(x)?);
            put("lambda", s(&l));
            put("x", s(&x));
            let phi = fam.specialize(&l);
            let cert = is_torsion(&phi, &x);
            certificates = certificate_json(&cert, cert.verify(&phi, &x));
            s(if cert.is_torsion() { "torsion" } else { "non-torsion" })
        }
        Command::TorsionParams { a, f } => {
            let (a, f) = (ss.param(a)?, ss.annihilator(f)?);
            put("a", s(&a));
            put("f", s(&f));
            let poly = torsion_param_poly(fam, &a, &f).map_err(input_err)?;
            let search = rational_roots(&poly, ss.args.budget_div);
            let (roots, candidates, done) = roots_json(&search);
            complete = done;
            if let Ok(rs) = &search {
                let ok = rs.roots.iter().all(|l| {
                    let phi = fam.specialize(l);
                    phi.phi_image(&f).map(|op| op.act(&a.evaluate(l)).is_zero()).unwrap_or(false)
                });
                certificates = json!({ "roots_verified": ok });
            }
            json!({
                "polynomial": s(&poly),
                "degree": poly.degree().map_or(Value::Null, s),
                "roots": roots,
                "candidates": candidates,
            })
        }
        Command::Compare { a, b, f, g } => {
            let (a, b) = (ss.param(a)?, ss.param(b)?);
            let (f, g) = (ss.annihilator(f)?, ss.annihilator(g)?);
            put("a", s(&a));
            put("b", s(&b));
            put("f", s(&f));
            put("g", s(&g));
            let p = torsion_param_poly(fam, &a, &f).map_err(input_err)?;
            let q = torsion_param_poly(fam, &b, &g).map_err(input_err)?;
            let res = common_param_resultant(&p, &q).map_err(input_err)?;
            let gcd = common_param_gcd(&p, &q).map_err(input_err)?;
            let common = if !res.is_zero() {
                s("none")
            } else {
                let search = rational_roots(&gcd, ss.args.budget_div);
                let (roots, _, done) = roots_json(&search);
                complete = done;
                roots
            };
            let dep = dependence_check(&a, &b);
            json!({
                "P": s(&p),
                "Q": s(&q),
                "resultant": ss.factored(&res),
                "gcd": s(&gcd),
                "common_roots": common,
                "dependence": {
                    "gamma": dep.gamma.map_or(Value::Null, |x| s(field.render(x))),
                    "unit": dep.unit.as_ref().map_or(Value::Null, s),
                    "unit_is_constant": dep.unit_is_constant,
                },
            })
        }
        Command::Lambda0 { a } => {
            let a = ss.ratfunc(a)?;
            put("a", s(&a));
            let r = fam.rank();
            put("r", s(r));
            let lam = lambda0(&a, r).map_err(input_err)?;
            let phi = standard_module(field, r, &lam);
            let cert = TorsionCertificate::Torsion { annihilator: FqPoly::t(field) };
            certificates = certificate_json(&cert, cert.verify(&phi, &a));
            json!({ "lambda0": s(&lam) })
        }
        Command::CaseVerify { a, gamma } => {
            let a = ss.ratfunc(a)?;
            let gamma = parse_constant(field, gamma).map_err(input_err)?;
            put("a", s(&a));
            put("gamma", s(field.render(gamma)));
            let r = fam.rank();
            put("r", s(r));
            let rep = case_analysis_verify(field, r, &a, gamma).map_err(input_err)?;
            let phi = standard_module(field, r, &rep.lambda0);
            let cert = is_torsion(&phi, &rep.b);
            certificates = json!({
                "independent": certificate_json(&cert, cert.verify(&phi, &rep.b)),
                "agrees": cert.is_torsion() != rep.non_torsion,
            });
            json!({
                "case": s(rep.case),
                "place": s(&rep.place),
                "lambda0": s(&rep.lambda0),
                "b": s(&rep.b),
                "step": s(rep.step),
                "log_value": rat(&rep.log_value),
                "threshold": rat(&rep.threshold),
                "lower_bound": rep.lower_bound.as_ref().map_or(Value::Null, rat),
                "verdict": if rep.non_torsion { "non-torsion" } else { "inconclusive" },
            })
        }
        Command::Green { c, place, lambda, n } => {
            let (c, v, l) = (ss.marked(c)?, ss.place(place)?, ss.ratfunc(lambda)?);
            put("c", s(&c));
            put("place", s(&v));
            put("lambda", s(&l));
            put("n", s(n));
            let vals = green_values(fam, &c, &v, &l, *n).map_err(input_err)?;
            let est = green_estimate(fam, &c, &v, &l, *n).map_err(input_err)?;
            complete = est.stabilized;
            json!({
                "green": rat(&est.value),
                "stabilized": est.stabilized,
                "values": vals.iter().map(rat).collect::<Vec<_>>(),
            })
        }
        Command::Capacity { c, place } => {
            let (c, v) = (ss.marked(c)?, ss.place(place)?);
            put("c", s(&c));
            put("place", s(&v));
            let rep = capacity_log(fam, &c, &v).map_err(input_err)?;
            certificates = json!({
                "sample": s(&rep.sample),
                "green": rat(&rep.green.value),
                "expected_green": rat(&rep.expected),
                "confirmed": rep.confirmed(),
            });
            json!({
                "capacity_log": rat(&rep.capacity_log),
                "log_escape_bound": rat(&rep.log_m),
            })
        }
        Command::Adelic { c } => {
            let c = ss.marked(c)?;
            put("c", s(&c));
            let rep = adelic_capacity_log(fam, &c).map_err(input_err)?;
            json!({
                "total": rat(&rep.total),
                "per_place": rep.per_place.iter().map(|(v, x)| json!({"place": s(v), "capacity_log": rat(x)})).collect::<Vec<_>>(),
                "exceptional": rep.exceptional.iter().map(s).collect::<Vec<_>>(),
            })
        }
        Command::Membership { c, place, lambda } => {
            let (c, v, l) = (ss.marked(c)?, ss.place(place)?, ss.ratfunc(lambda)?);
            put("c", s(&c));
            put("place", s(&v));
            put("lambda", s(&l));
            let m = membership(fam, &c, &v, &l, budget).map_err(input_err)?;
            complete = !matches!(m, Membership::Unknown(_));
            s(m)
        }
        Command::ParamHeight { c, lambda, n } => {
            let (c, l) = (ss.marked(c)?, ss.ratfunc(lambda)?);
            put("c", s(&c));
            put("lambda", s(&l));
            put("n", s(n));
            let ph = param_height(fam, &c, &l, budget).map_err(input_err)?;
            let gs = green_sum(fam, &c, &l, *n).map_err(input_err)?;
            complete = ph.value.is_exact();
            let agree = match &ph.value {
                HeightValue::Exact(h) => gs.stabilized && *h == gs.total,
                HeightValue::UpperBound(_) => false,
            };
            certificates = json!({
                "green_sum": rat(&gs.total),
                "green_stabilized": gs.stabilized,
                "agree": agree,
            });
            json!({
                "param_height": s(&ph.value),
                "canonical_height": s(&ph.report.value),
            })
        }
        Command::Sweep { c, place, n, max_degree } => {
            let (c, v) = (ss.marked(c)?, ss.place(place)?);
            put("c", s(&c));
            put("place", s(&v));
            put("n", s(n));
            put("max_degree", s(max_degree));
            let lambdas = polynomials_up_to(field, *max_degree)?;
            let mut rows: Vec<(FqPoly, Vec<String>, bool)> = lambdas
                .into_par_iter()
                .map(|poly| {
                    let l = RatFunc::from(poly.clone());
                    let est = green_estimate(fam, &c, &v, &l, *n).expect("hypothesis checked");
                    let m = membership(fam, &c, &v, &l, budget).expect("hypothesis checked");
                    let definite = !matches!(m, Membership::Unknown(_));
                    let row = vec![
                        l.to_string(),
                        v.to_string(),
                        n.to_string(),
                        render_rational(&est.value),
                        est.stabilized.to_string(),
                        m.to_string(),
                    ];
                    (poly, row, definite)
                })
                .collect();
            rows.sort_by(|a, b| a.0.cmp(&b.0));
            complete = rows.iter().all(|r| r.2);
            let header = vec!["lambda", "place", "n", "green", "stabilized", "membership"];
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|(_, r, _)| {
                    let obj: Map<String, Value> =
                        header.iter().zip(r).map(|(k, x)| (k.to_string(), s(x))).collect();
                    Value::Object(obj)
                })
                .collect();
            table = Some((header, rows.into_iter().map(|r| r.1).collect()));
            json!({ "rows": json_rows })
        }
    };

    Ok(Report { command: cli.command.name(), inputs, result, certificates, complete, table })
}

/// t + λτ + τ^r.
fn standard_module(field: &Field, r: usize, lambda: &RatFunc) -> DrinfeldModule {
    let mut coeffs = vec![RatFunc::zero(field); r - 1];
    coeffs[0] = lambda.clone();
    DrinfeldModule::new(field, coeffs)
}

/// Every polynomial over F_{q^s} of degree at most d, zero included.
fn polynomials_up_to(field: &Field, d: usize) -> Result<Vec<FqPoly>, InputError> {
    let order = field.order() as u64;
    let count = u32::try_from(d + 1)
        .ok()
        .and_then(|k| order.checked_pow(k))
        .filter(|&n| n <= MAX_SWEEP)
        .ok_or_else(|| InputError(format!("sweep exceeds {MAX_SWEEP} parameters")))?;
    let elems: Vec<FqElem> = field.elements().collect();
    Ok((0..count)
        .map(|mut k| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                coeffs.push(elems[(k % order) as usize]);
                k /= order;
            }
            FqPoly::new(field, coeffs)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Report {
        let cli = Cli::try_parse_from(std::iter::once("drinfeld").chain(args.iter().copied())).unwrap();
        run(&cli).unwrap()
    }

    #[test]
    fn torsion_test_example() {
        let r = exec(&["torsion-test", "--family", "r=2;g1=z", "--lambda", "t+1", "--x", "1"]);
        assert_eq!(r.result, json!("torsion"));
        assert_eq!(r.certificates["annihilator"], json!("t"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn capacity_example() {
        let r = exec(&["capacity", "--c", "z", "--place", "inf"]);
        assert_eq!(r.result["capacity_log"], json!("0"));
        assert_eq!(r.certificates["confirmed"], json!(true));
    }

    #[test]
    fn compare_example() {
        let r = exec(&["compare", "--a", "1", "--b", "t", "--f", "t", "--g", "t"]);
        assert_eq!(r.result["resultant"], json!("t^3*(t+1)"));
        assert_eq!(r.result["common_roots"], json!("none"));
    }

    #[test]
    fn exit_codes() {
        let r = exec(&["--budget-iter", "0", "height", "--lambda", "0", "--x", "1/t"]);
        assert_eq!(r.exit_code(), 2);
        let cli = Cli::try_parse_from(["drinfeld", "height", "--lambda", "t+", "--x", "1"]).unwrap();
        assert!(run(&cli).is_err());
    }

    #[test]
    fn sweep_rows_are_sorted() {
        let r = exec(&["--format", "csv", "sweep", "--c", "z", "--place", "inf", "--max-degree", "1"]);
        let csv = r.render(Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lambda,place,n,green,stabilized,membership");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,inf,2,"));
    }

    #[test]
    fn ore_mul_and_phi() {
        let r = exec(&["ore-mul", "--a", "t,z,1", "--b", "t,z,1"]);
        assert_eq!(r.result["product"], json!("t^2+((t^2+t)*z)*tau+(z^3+t^4+t)*tau^2+(z^4+z)*tau^3+tau^4"));
        let r = exec(&["phi", "--f", "t"]);
        assert_eq!(r.result["phi_f"], json!("t+z*tau+tau^2"));
        let r = exec(&["act", "--f", "t", "--x", "1", "--lambda", "t+1"]);
        assert_eq!(r.result["value"], json!("0"));
    }
}
