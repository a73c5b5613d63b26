//! Command-line front end: argument handling, JSON rendering and certificate
//! re-checking for every decision procedure of `retractlab-core`.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use retractlab_core::endo::{check_fixed, substitute, verify_corollary_instance};
use retractlab_core::estimates::{lemma_instance, phi_infinity_probe_with_budget, su_lower_bound};
use retractlab_core::groebner::{subalgebra_membership, Budget, DEFAULT_MAX_STEPS};
use retractlab_core::reduction::{
    default_mate_bound, elementary_reduce, is_automorphism, is_coordinate_with_bound, is_stall,
};
use retractlab_core::retracts::{
    decompose_poly, is_retract_generator_with_budget, is_test_polynomial_with_budget, retract_membership_report,
    DEFAULT_B_PARAM,
};
use retractlab_core::{Endomorphism, Error, Polynomial, Verdict};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variable capping the step budget of bounded searches.
pub const MAX_STEPS_ENV: &str = "RETRACTLAB_MAX_STEPS";

pub const DEFAULT_PROBE_DEG: u32 = 4;
pub const DEFAULT_PROBE_ITERS: u32 = 3;

#[derive(Parser, Debug)]
#[command(name = "retractlab", version, about = "Exact analysis of polynomial endomorphisms of Q[x, y]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Re-check every certificate in the result; exit 4 if one fails.
    #[arg(long, global = true)]
    verify: bool,
    /// Emit JSON (the only output mode).
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct Phi {
    /// Image of x.
    #[arg(long = "fx", allow_hyphen_values = true)]
    fx: String,
    /// Image of y.
    #[arg(long = "fy", allow_hyphen_values = true)]
    fy: String,
}

#[derive(Args, Debug, Clone)]
struct Psi {
    #[arg(long = "gx", allow_hyphen_values = true)]
    gx: String,
    #[arg(long = "gy", allow_hyphen_values = true)]
    gy: String,
}

#[derive(Args, Debug, Clone)]
struct Poly {
    #[arg(short = 'p', long = "poly", allow_hyphen_values = true)]
    p: String,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    #[arg(short = 'p', long = "poly", allow_hyphen_values = true)]
    p: String,
    #[arg(short = 'q', allow_hyphen_values = true)]
    q: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobian determinant of (fx, fy).
    Jacobian {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        common: Common,
    },
    /// p(fx, fy).
    Apply {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        poly: Poly,
        #[command(flatten)]
        common: Common,
    },
    /// (fx, fy) after (gx, gy): x is sent to gx(fx, fy).
    Compose {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        psi: Psi,
        #[command(flatten)]
        common: Common,
    },
    /// k-th iterate.
    Iterate {
        #[command(flatten)]
        phi: Phi,
        #[arg(short = 'k')]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Elementary reduction of the pair (p, q).
    ReducePair {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Is (fx, fy) an automorphism? Certificate: reduction steps to an affine map
    IsAutomorphism {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        common: Common,
    },
    /// Is p a coordinate? Certificate: a mate q with Jacobian 1
    IsCoordinate {
        #[command(flatten)]
        poly: Poly,
        /// Mate degree bound B_mate (default: deg p).
        #[arg(long)]
        bound: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Is p in Q[fx, fy]?
    InSubalgebra {
        #[command(flatten)]
        poly: Poly,
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        common: Common,
    },
    /// p = g(q) with deg g = d.
    Decompose {
        #[command(flatten)]
        poly: Poly,
        #[arg(short = 'd')]
        d: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Does p generate a retract of Q[x, y]?
    IsRetractGenerator {
        #[command(flatten)]
        poly: Poly,
        /// Parametrization degree bound B_param.
        #[arg(long, default_value_t = DEFAULT_B_PARAM)]
        bound: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Does p lie in some proper retract?
    RetractMembership {
        #[command(flatten)]
        poly: Poly,
        #[arg(long, default_value_t = DEFAULT_B_PARAM)]
        bound: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Is p a test polynomial? Witness: a non-automorphism fixing p
    IsTest {
        #[command(flatten)]
        poly: Poly,
        #[arg(long, default_value_t = DEFAULT_B_PARAM)]
        bound: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Does (fx, fy) fix p?
    FixedCheck {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        poly: Poly,
        #[command(flatten)]
        common: Common,
    },
    /// Hypotheses and conclusion of the one-polynomial criterion for
    /// phi = (fx, fy), psi = (gx, gy) and p.
    CorollaryCheck {
        #[command(flatten)]
        phi: Phi,
        #[command(flatten)]
        psi: Psi,
        #[command(flatten)]
        poly: Poly,
        #[command(flatten)]
        common: Common,
    },
    /// Lower bound on deg w(p, q); w is written in x (for p) and y (for q).
    SuBound {
        #[arg(short = 'w', allow_hyphen_values = true)]
        w: String,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Checks deg w(p, q) > min(n, k) on a reduced pair.
    LemmaCheck {
        #[arg(short = 'w', allow_hyphen_values = true)]
        w: String,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Degree-bounded part of the intersection of the iterate images.
    PhiInfinity {
        #[command(flatten)]
        phi: Phi,
        #[arg(long, default_value_t = DEFAULT_PROBE_DEG)]
        deg: u32,
        #[arg(long, default_value_t = DEFAULT_PROBE_ITERS)]
        iters: u32,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        use Command::*;
        match self {
            Jacobian { common, .. }
            | Apply { common, .. }
            | Compose { common, .. }
            | Iterate { common, .. }
            | ReducePair { common, .. }
            | IsAutomorphism { common, .. }
            | IsCoordinate { common, .. }
            | InSubalgebra { common, .. }
            | Decompose { common, .. }
            | IsRetractGenerator { common, .. }
            | RetractMembership { common, .. }
            | IsTest { common, .. }
            | FixedCheck { common, .. }
            | CorollaryCheck { common, .. }
            | SuBound { common, .. }
            | LemmaCheck { common, .. }
            | PhiInfinity { common, .. } => common,
        }
    }
}

enum Failure {
    Parse { flag: String, error: Error },
    Usage(String),
    Precondition(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e)
    }
}

/// Result JSON plus the outcome of each certificate re-check.
struct Outcome {
    result: Value,
    checks: Vec<(&'static str, bool)>,
    stalled: bool,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome {
            result,
            checks: Vec::new(),
            stalled: false,
        }
    }
}

struct Ctx {
    inputs: Map<String, Value>,
    verify: bool,
}

impl Ctx {
    fn poly(&mut self, flag: &str, text: &str) -> Result<Polynomial, Failure> {
        let p = text.parse::<Polynomial>().map_err(|error| Failure::Parse {
            flag: flag.to_string(),
            error,
        })?;
        self.inputs.insert(flag.to_string(), Value::String(p.to_string()));
        Ok(p)
    }

    fn phi(&mut self, phi: &Phi) -> Result<Endomorphism, Failure> {
        Ok(Endomorphism::new(self.poly("fx", &phi.fx)?, self.poly("fy", &phi.fy)?))
    }

    fn psi(&mut self, psi: &Psi) -> Result<Endomorphism, Failure> {
        Ok(Endomorphism::new(self.poly("gx", &psi.gx)?, self.poly("gy", &psi.gy)?))
    }

    fn int(&mut self, name: &str, value: u32) -> u32 {
        self.inputs.insert(name.to_string(), json!(value));
        value
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize to JSON")
}

fn budget_from_env() -> Result<Budget, Failure> {
    match std::env::var(MAX_STEPS_ENV) {
        Err(_) => Ok(Budget::new(DEFAULT_MAX_STEPS)),
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Budget::new)
            .map_err(|_| Failure::Usage(format!("{MAX_STEPS_ENV} must be a non-negative integer, got {text:?}"))),
    }
}

/// Merges `extra` into the verdict object.
fn verdict_with<C: serde::Serialize>(verdict: &Verdict<C>, extra: Vec<(&str, Value)>) -> Value {
    let mut v = to_value(verdict);
    let obj = v.as_object_mut().expect("verdicts serialize to objects");
    for (k, val) in extra {
        obj.insert(k.to_string(), val);
    }
    v
}

fn execute(command: &Command, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    use Command::*;
    let out = match command {
        Jacobian { phi, .. } => {
            let phi = ctx.phi(phi)?;
            Outcome::plain(to_value(&phi.jacobian_det()))
        }
        Apply { phi, poly, .. } => {
            let phi = ctx.phi(phi)?;
            let p = ctx.poly("p", &poly.p)?;
            Outcome::plain(to_value(&phi.apply(&p)))
        }
        Compose { phi, psi, .. } => {
            let phi = ctx.phi(phi)?;
            let psi = ctx.psi(psi)?;
            Outcome::plain(to_value(&phi.compose(&psi)))
        }
        Iterate { phi, k, .. } => {
            let phi = ctx.phi(phi)?;
            let k = ctx.int("k", *k);
            if k == 0 {
                return Err(Failure::Precondition(Error::InvalidArgument("k must be positive".into())));
            }
            Outcome::plain(to_value(&phi.iterate(k)))
        }
        ReducePair { pair, .. } => {
            let p = ctx.poly("p", &pair.p)?;
            let q = ctx.poly("q", &pair.q)?;
            let reduced = elementary_reduce(&p, &q)?;
            let mut checks = Vec::new();
            if ctx.verify {
                let (mut a, mut b) = (p.clone(), q.clone());
                for step in &reduced.steps {
                    (a, b) = step.apply(&a, &b);
                }
                checks.push(("step replay", a == reduced.first && b == reduced.second));
            }
            Outcome {
                result: to_value(&reduced),
                checks,
                stalled: false,
            }
        }
        IsAutomorphism { phi, .. } => {
            let phi = ctx.phi(phi)?;
            let verdict = is_automorphism(&phi);
            let mut checks = Vec::new();
            if ctx.verify {
                if let Verdict::Yes(dec) = &verdict {
                    checks.push(("decomposition replay", dec.verify(&phi)));
                }
            }
            Outcome {
                stalled: is_stall(&verdict),
                result: to_value(&verdict),
                checks,
            }
        }
        IsCoordinate { poly, bound, .. } => {
            let p = ctx.poly("p", &poly.p)?;
            if p.is_constant() {
                return Err(Error::ConstantInput.into());
            }
            let bound = ctx.int("bound", bound.unwrap_or_else(|| default_mate_bound(&p)));
            let verdict = is_coordinate_with_bound(&p, bound)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Verdict::Yes(cert) = &verdict {
                    checks.push(("mate certificate", cert.verify(&p)));
                }
            }
            Outcome {
                result: to_value(&verdict),
                checks,
                stalled: false,
            }
        }
        InSubalgebra { poly, phi, .. } => {
            let f = ctx.poly("p", &poly.p)?;
            let (u, v) = (ctx.poly("fx", &phi.fx)?, ctx.poly("fy", &phi.fy)?);
            let expr = subalgebra_membership(&f, &u, &v)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Some(w) = &expr {
                    checks.push(("membership expression", substitute(w, &u, &v) == f));
                }
            }
            Outcome {
                result: json!({ "member": expr.is_some(), "expression": expr.as_ref().map(to_value) }),
                checks,
                stalled: false,
            }
        }
        Decompose { poly, d, .. } => {
            let p = ctx.poly("p", &poly.p)?;
            let d = ctx.int("d", *d);
            let found = decompose_poly(&p, d)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Some((g, q)) = &found {
                    checks.push(("decomposition identity", g.eval_poly(q) == p));
                }
            }
            let result = match &found {
                Some((g, q)) => json!({ "decomposable": true, "g": to_value(g), "q": to_value(q) }),
                None => json!({ "decomposable": false }),
            };
            Outcome {
                result,
                checks,
                stalled: false,
            }
        }
        IsRetractGenerator { poly, bound, .. } => {
            let q = ctx.poly("p", &poly.p)?;
            let bound = ctx.int("bound", *bound);
            let mut budget = budget_from_env()?;
            let verdict = is_retract_generator_with_budget(&q, bound, &mut budget)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Verdict::Yes(cert) = &verdict {
                    checks.push(("retract certificate", cert.generator == q && cert.verify()));
                }
            }
            Outcome {
                result: to_value(&verdict),
                checks,
                stalled: false,
            }
        }
        RetractMembership { poly, bound, .. } => {
            let p = ctx.poly("p", &poly.p)?;
            let bound = ctx.int("bound", *bound);
            let mut budget = budget_from_env()?;
            let report = retract_membership_report(&p, bound, &mut budget)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Verdict::Yes(m) = &report.verdict {
                    checks.push(("membership certificate", m.verify(&p)));
                }
            }
            Outcome {
                result: verdict_with(&report.verdict, vec![("branches", to_value(&report.branches))]),
                checks,
                stalled: false,
            }
        }
        IsTest { poly, bound, .. } => {
            let p = ctx.poly("p", &poly.p)?;
            let bound = ctx.int("bound", *bound);
            let mut budget = budget_from_env()?;
            let report = is_test_polynomial_with_budget(&p, bound, &mut budget)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Some(w) = &report.witness {
                    checks.push(("degenerate fixer", check_fixed(w, &p) && w.jacobian_det().is_zero()));
                }
                if let Some(cert) = &report.retract_found {
                    checks.push(("retract certificate", cert.verify()));
                }
            }
            let mut extra = vec![("branches", to_value(&report.branches))];
            if let Some(w) = &report.witness {
                extra.push(("witness", to_value(w)));
            }
            if let Some(cert) = &report.retract_found {
                extra.push(("retract", to_value(cert)));
            }
            Outcome {
                result: verdict_with(&report.verdict, extra),
                checks,
                stalled: false,
            }
        }
        FixedCheck { phi, poly, .. } => {
            let phi = ctx.phi(phi)?;
            let p = ctx.poly("p", &poly.p)?;
            Outcome::plain(json!({ "fixed": check_fixed(&phi, &p), "image": to_value(&phi.apply(&p)) }))
        }
        CorollaryCheck { phi, psi, poly, .. } => {
            let phi = ctx.phi(phi)?;
            let psi = ctx.psi(psi)?;
            let p = ctx.poly("p", &poly.p)?;
            let report = verify_corollary_instance(&phi, &psi, &p)?;
            let mut checks = Vec::new();
            if ctx.verify {
                if let Verdict::Yes(dec) = &report.phi_automorphism_verdict {
                    checks.push(("decomposition replay", dec.verify(&phi)));
                }
            }
            Outcome {
                stalled: is_stall(&report.phi_automorphism_verdict),
                result: to_value(&report),
                checks,
            }
        }
        SuBound { w, pair, .. } => {
            let w = ctx.poly("w", w)?;
            let p = ctx.poly("p", &pair.p)?;
            let q = ctx.poly("q", &pair.q)?;
            Outcome::plain(to_value(&su_lower_bound(&w, &p, &q)?))
        }
        LemmaCheck { w, pair, .. } => {
            let w = ctx.poly("w", w)?;
            let p = ctx.poly("p", &pair.p)?;
            let q = ctx.poly("q", &pair.q)?;
            let inst = lemma_instance(&w, &p, &q)?;
            let mut checks = Vec::new();
            if ctx.verify {
                checks.push(("expanded value", substitute(&w, &p, &q) == inst.value));
            }
            Outcome {
                result: to_value(&inst),
                checks,
                stalled: false,
            }
        }
        PhiInfinity { phi, deg, iters, .. } => {
            let phi = ctx.phi(phi)?;
            let deg = ctx.int("deg", *deg);
            let iters = ctx.int("iters", *iters);
            if iters == 0 {
                return Err(Failure::Precondition(Error::InvalidArgument("iters must be positive".into())));
            }
            let mut budget = budget_from_env()?;
            Outcome::plain(to_value(&phi_infinity_probe_with_budget(&phi, deg, iters, &mut budget)?))
        }
    };
    Ok(out)
}

fn command_name(argv: &[String]) -> String {
    argv.first().cloned().unwrap_or_default()
}

fn render(doc: Value) -> String {
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values render");
    s.push('\n');
    s
}

fn error_doc(command: &str, inputs: Map<String, Value>, error: Value) -> Value {
    json!({ "command": command, "inputs": inputs, "result": Value::Null, "error": error })
}

/// Runs one invocation. `argv` excludes the program name. Returns the exit
/// code and the complete stdout text.
pub fn run<S: AsRef<str>>(argv: &[S]) -> (i32, String) {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let name = command_name(&argv);
    let cli = match Cli::try_parse_from(std::iter::once("retractlab".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return (EXIT_OK, e.render().to_string());
        }
        Err(e) => {
            let message = e.render().to_string().trim().to_string();
            return (
                EXIT_PARSE,
                render(error_doc(&name, Map::new(), json!({ "kind": "usage", "message": message }))),
            );
        }
    };
    let mut ctx = Ctx {
        inputs: Map::new(),
        verify: cli.command.common().verify,
    };
    match execute(&cli.command, &mut ctx) {
        Ok(out) => {
            let mut doc = Map::new();
            doc.insert("command".into(), Value::String(name));
            doc.insert("inputs".into(), Value::Object(ctx.inputs));
            doc.insert("result".into(), out.result);
            let mut code = EXIT_OK;
            if ctx.verify {
                let passed = out.checks.iter().all(|(_, ok)| *ok);
                let checks: Vec<Value> = out
                    .checks
                    .iter()
                    .map(|(what, ok)| json!({ "check": what, "passed": ok }))
                    .collect();
                doc.insert("verify".into(), json!({ "checks": checks, "passed": passed }));
                if !passed {
                    code = EXIT_INTERNAL;
                }
            }
            if out.stalled {
                code = EXIT_INTERNAL;
            }
            (code, render(Value::Object(doc)))
        }
        Err(failure) => {
            let (code, error) = match failure {
                Failure::Parse { flag, error } => {
                    let position = match &error {
                        Error::Parse { position, .. } => json!(position),
                        _ => Value::Null,
                    };
                    (
                        EXIT_PARSE,
                        json!({ "kind": "parse", "flag": flag, "position": position, "message": error.to_string() }),
                    )
                }
                Failure::Usage(message) => (EXIT_PARSE, json!({ "kind": "usage", "message": message })),
                Failure::Precondition(error) => (
                    EXIT_PRECONDITION,
                    json!({ "kind": "precondition", "message": error.to_string() }),
                ),
            };
            (code, render(error_doc(&name, ctx.inputs, error)))
        }
    }
}
