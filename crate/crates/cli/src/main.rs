use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qglp::ergodic::{cesaro_limit, hopf_image};
use qglp::fdalgebra::Functional;
use qglp::fourier::{fourier_transform, Operand};
use qglp::freeprod::{choose_q, verify_free_improving, Component, FreeMap, FreeProductSpec};
use qglp::group::GroupTable;
use qglp::improving::{check_conditions, ritter_check, schur_check, CheckOptions};
use qglp::io::{
    read_json, state_from_json, AlgebraJson, CayleyJson, FourierJson, GroupFunctionJson, HomJson, MapJson,
    QuantumGroupJson,
};
use qglp::linalg::CVec;
use qglp::qgroup::QuantumGroupSummary;
use qglp::qgroup::{build_function_algebra, build_group_algebra, tensor_product, validate_quantum_group, QuantumGroup};
use qglp::{selftest, Error};

const SLACK_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "qglp",
    version,
    about = "L_p-improving convolution operators on finite quantum groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    report: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone, Copy)]
struct Sampling {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0x1a7e_5eed)]
    seed: u64,
    /// Allowed negative slack in sampled norm inequalities.
    #[arg(long, env = "QGLP_TOL", default_value_t = SLACK_TOL)]
    tol: f64,
}

impl Sampling {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the quantum-group axioms of a JSON description.
    Validate { qg: PathBuf },
    /// Print the Haar state.
    Haar { qg: PathBuf },
    /// Print the irreducible corepresentations.
    Irreps { qg: PathBuf },
    /// Fourier coefficients of an element, or of a state with --state.
    Fourier {
        qg: PathBuf,
        input: PathBuf,
        #[arg(long)]
        state: bool,
    },
    /// Five-condition report for a state.
    Improve {
        qg: PathBuf,
        state: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Does the support of a measure generate the group?
    Ritter {
        group: PathBuf,
        /// Comma-separated group elements.
        #[arg(long, value_delimiter = ',', required = true)]
        support: Vec<usize>,
    },
    /// |φ(γ)| < 1 off the identity, against the five conditions on C*(Γ).
    Schur {
        group: PathBuf,
        values: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cesàro limit of the convolution powers of a state.
    Cesaro { qg: PathBuf, state: PathBuf },
    /// Hopf image of a *-homomorphism and its idempotent state.
    HopfImage {
        qg: PathBuf,
        hom: PathBuf,
        /// Faithful state on the target algebra (default: normalized trace).
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Free-product constructions.
    Freeprod {
        #[command(subcommand)]
        action: FreeprodCommand,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Write the JSON description of a standard quantum group.
    Generate {
        /// cyclic:N, symmetric:N, or two of these joined by '*' for a tensor product.
        group: String,
        /// Use the group algebra C*(Γ) instead of C(Γ).
        #[arg(long)]
        dual: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FreeprodCommand {
    /// Sample the free L_q-improving inequality for a letterwise map.
    Verify {
        #[arg(long, num_args = 1.., required = true)]
        components: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        maps: Vec<PathBuf>,
        /// Even exponent, or "auto".
        #[arg(long, default_value = "auto")]
        q: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x1a7e_5eed)]
        seed: u64,
    },
}

/// Exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Success = 0,
    Error = 1,
    Negative = 2,
    Inconsistent = 3,
}

struct Report {
    status: Status,
    json: Value,
    text: String,
}

fn pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn load_qg(path: &Path) -> anyhow::Result<QuantumGroup> {
    let json: QuantumGroupJson = read_json(path)?;
    json.build().with_context(|| format!("loading {}", path.display()))
}

fn load_state(path: &Path, g: &QuantumGroup) -> anyhow::Result<Functional> {
    let json: AlgebraJson = read_json(path)?;
    state_from_json(&json, g.structure().clone()).with_context(|| format!("loading {}", path.display()))
}

/// Accepts either a bare Cayley table or a quantum-group file with a `cayley` field.
fn load_group(path: &Path) -> anyhow::Result<GroupTable> {
    let value: Value = read_json(path)?;
    let cayley: CayleyJson = match value.get("cayley") {
        Some(c) => serde_json::from_value(c.clone())?,
        None => serde_json::from_value(value)?,
    };
    Ok(cayley.group()?)
}

fn parse_group(spec: &str) -> anyhow::Result<GroupTable> {
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("expected cyclic:N or symmetric:N, got \"{spec}\""))?;
    let n: usize = n.parse().with_context(|| format!("bad order in \"{spec}\""))?;
    match kind {
        "cyclic" if n >= 1 => Ok(GroupTable::cyclic(n)),
        "symmetric" if (1..=5).contains(&n) => Ok(GroupTable::symmetric(n)),
        _ => Err(anyhow!("unsupported group \"{spec}\"")),
    }
}

fn validate(qg: &Path) -> anyhow::Result<Report> {
    let json: QuantumGroupJson = read_json(qg)?;
    let (blocks, weights, delta) = json.raw()?;
    let report = validate_quantum_group(&blocks, weights.as_deref(), &delta);
    let mut text = String::new();
    for c in &report.checks {
        writeln!(
            text,
            "{:<28} {} residual {:.3e}  {}",
            c.name,
            if c.passed { "ok  " } else { "FAIL" },
            c.residual,
            c.detail
        )?;
    }
    let status = if report.passed() {
        Status::Success
    } else {
        eprintln!("{}", report.failure_summary());
        Status::Error
    };
    Ok(Report {
        status,
        json: json!({ "command": "validate", "passed": report.passed(), "report": report }),
        text,
    })
}

fn haar(qg: &Path) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let h = g.haar();
    let values = h.basis_values();
    let mut text = format!("Haar state of {} (dim {})\n", g.name(), g.dim());
    for (k, z) in values.iter().enumerate() {
        let (b, i, j) = g.structure().label(k);
        writeln!(text, "  h(e[{b}]_{i}{j}) = {:.12}{:+.12}i", z.re, z.im)?;
    }
    Ok(Report {
        status: Status::Success,
        json: json!({
            "command": "haar",
            "quantum_group": QuantumGroupSummary::from(&g),
            "basis_values": pairs(&values),
            "tracial": h.density().max_abs_diff(&qglp::fdalgebra::AlgebraElement::identity(g.structure().clone())) < 1e-10,
        }),
        text,
    })
}

fn irreps(qg: &Path) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let mut text = format!("{} irreducible corepresentations of {}\n", g.irreps().len(), g.name());
    let mut list = Vec::new();
    for (k, u) in g.irreps().iter().enumerate() {
        let n = u.dim();
        let entries: Vec<Vec<Vec<[f64; 2]>>> = (0..n)
            .map(|i| (0..n).map(|j| pairs(&u.entry(i, j).coords())).collect())
            .collect();
        writeln!(text, "  α={k}: dim {n}, quantum dim {:.6}", u.quantum_dim())?;
        list.push(json!({ "index": k, "dim": n, "quantum_dim": u.quantum_dim(), "entries": entries }));
    }
    let total: usize = g.irreps().iter().map(|u| u.dim() * u.dim()).sum();
    writeln!(text, "Σ n_α² = {total}, dim A = {}", g.dim())?;
    Ok(Report {
        status: Status::Success,
        json: json!({ "command": "irreps", "quantum_group": QuantumGroupSummary::from(&g), "irreps": list, "sum_of_squares": total }),
        text,
    })
}

fn fourier(qg: &Path, input: &Path, state: bool) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let json: AlgebraJson = read_json(input)?;
    let hat = if state {
        let phi = state_from_json(&json, g.structure().clone())?;
        fourier_transform(&g, Operand::Functional(&phi))?
    } else {
        let x = json.element_on(g.structure().clone())?;
        fourier_transform(&g, Operand::Element(&x))?
    };
    let norms = hat.op_norms();
    let mut text = format!("Fourier coefficients on {}\n", g.name());
    for (k, m) in hat.matrices.iter().enumerate() {
        writeln!(text, "  α={k} (dim {}), ‖·‖_op = {:.10}", hat.alpha_dims[k], norms[k])?;
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|c| format!("{:>10.6}{:+.6}i", m[(r, c)].re, m[(r, c)].im))
                .collect();
            writeln!(text, "    {}", row.join("  "))?;
        }
    }
    let mut out = json!({
        "command": "fourier",
        "kind": if state { "state" } else { "element" },
        "coefficients": FourierJson::from(&hat),
        "op_norms": norms,
    });
    if !state {
        let l2 = hat.dual_l2_norm(&g)?;
        writeln!(text, "dual ℓ₂ norm {l2:.12}")?;
        out["dual_l2_norm"] = json!(l2);
    }
    Ok(Report {
        status: Status::Success,
        json: out,
        text,
    })
}

fn improve(qg: &Path, state: &Path, sampling: Sampling) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let phi = load_state(state, &g)?;
    let r = check_conditions(&g, &phi, sampling.options())?;
    let labels = [
        "(1) left L_p-improving",
        "(2) right L_p-improving",
        "(3) ‖φ̂(α)‖ < 1 for α ≠ 1",
        "(4) Cesàro means → h",
        "(5) non-degenerate",
    ];
    let mut text = String::new();
    for (label, v) in labels.iter().zip(r.verdicts()) {
        writeln!(text, "{label:<28} {}", if v { "TRUE" } else { "FALSE" })?;
    }
    let status = if r.all_true() {
        let w = r.witness.as_ref().map_or("none".to_string(), |w| format!("{:.6}", w.p));
        writeln!(text, "all five conditions TRUE, λ={}, witness p={w}", r.lambda)?;
        Status::Success
    } else if r.all_false() {
        let k = r.worst_irrep.map_or("-".to_string(), |k| k.to_string());
        writeln!(text, "not improving; |φ̂| = 1 at irrep k={k}")?;
        Status::Negative
    } else {
        writeln!(text, "conditions disagree: {:?}", r.verdicts())?;
        Status::Inconsistent
    };
    writeln!(text, "seed {} samples {}", r.seed, r.samples)?;
    let labelled: serde_json::Map<String, Value> = labels
        .iter()
        .zip(r.verdicts())
        .map(|(l, v)| (l.to_string(), json!(v)))
        .collect();
    Ok(Report {
        status,
        json: json!({ "command": "improve", "conditions": labelled, "report": r, "seed": r.seed, "samples": r.samples }),
        text,
    })
}

fn ritter(group: &Path, support: &[usize]) -> anyhow::Result<Report> {
    let table = load_group(group)?;
    if let Some(&bad) = support.iter().find(|&&s| s >= table.order()) {
        return Err(anyhow!(
            "support element {bad} outside a group of order {}",
            table.order()
        ));
    }
    let holds = ritter_check(&table, support)?;
    Ok(Report {
        status: if holds { Status::Success } else { Status::Negative },
        json: json!({ "command": "ritter", "support": support, "generates": holds }),
        text: format!(
            "{{s⁻¹t : s,t ∈ {support:?}}} {} the group\n",
            if holds { "generates" } else { "does not generate" }
        ),
    })
}

fn schur(group: &Path, values: &Path, sampling: Sampling) -> anyhow::Result<Report> {
    let table = load_group(group)?;
    let values = read_json::<GroupFunctionJson>(values)?.values();
    let r = schur_check(&table, &values, sampling.options())?;
    let text = format!(
        "max_(γ≠e) |φ(γ)| = {:.10}: {}\nfive conditions {}\n",
        r.max_nontrivial,
        if r.holds { "strictly below 1" } else { "equal to 1" },
        if r.conditions.all_true() { "TRUE" } else { "FALSE" }
    );
    Ok(Report {
        status: if r.holds { Status::Success } else { Status::Negative },
        json: json!({ "command": "schur", "report": r, "seed": sampling.seed, "samples": sampling.samples }),
        text,
    })
}

fn cesaro(qg: &Path, state: &Path) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let psi = load_state(state, &g)?;
    let r = cesaro_limit(&g, &psi)?;
    if !r.iterative_agrees() {
        return Err(Error::Consistency(format!(
            "iterative Cesàro average differs by {:.3e} (tolerance {:.3e})",
            r.iterative_residual, r.iterative_tolerance
        ))
        .into());
    }
    let text = format!(
        "Cesàro limit {} the Haar state (distance {:.3e}); fixed space dimension {}\n",
        if r.is_haar { "is" } else { "is not" },
        r.haar_distance,
        r.fixed_space_dim
    );
    Ok(Report {
        status: if r.is_haar { Status::Success } else { Status::Negative },
        json: json!({ "command": "cesaro", "report": r }),
        text,
    })
}

fn hopf(qg: &Path, hom: &Path, state: Option<&Path>) -> anyhow::Result<Report> {
    let g = load_qg(qg)?;
    let pi = read_json::<HomJson>(hom)?.build(g.structure().clone())?;
    let phi = match state {
        Some(p) => {
            let json: AlgebraJson = read_json(p)?;
            state_from_json(&json, pi.target().clone())?
        }
        None => Functional::trace_state(pi.target().clone()),
    };
    let d = hopf_image(&g, &pi, &phi)?;
    if d.eta_agreement > 1e-7 {
        return Err(Error::Consistency(format!("the two idempotent states differ by {:.3e}", d.eta_agreement)).into());
    }
    let text = format!(
        "kernel dimensions {:?}, stable after {} steps\nquotient dimension {} (blocks {:?})\nη = {:?}\nη agreement {:.3e}, η⋆η − η {:.3e}\n",
        d.kernel_dims,
        d.stabilization_index,
        d.quotient.dim(),
        d.kept_blocks,
        d.eta.basis_values().iter().map(|z| (z.re * 1e12).round() / 1e12).collect::<Vec<_>>(),
        d.eta_agreement,
        d.idempotence_residual
    );
    Ok(Report {
        status: Status::Success,
        json: json!({
            "command": "hopf-image",
            "kernel_dims": d.kernel_dims,
            "stabilization_index": d.stabilization_index,
            "kept_blocks": d.kept_blocks,
            "quotient": QuantumGroupJson::from_quantum_group(&d.quotient),
            "quotient_residual": d.quotient_residual,
            "eta": pairs(&d.eta.basis_values()),
            "eta_cesaro": pairs(&d.eta_cesaro.basis_values()),
            "eta_agreement": d.eta_agreement,
            "idempotence_residual": d.idempotence_residual,
        }),
        text,
    })
}

fn freeprod_verify(
    components: &[PathBuf],
    maps: &[PathBuf],
    q: &str,
    len: usize,
    samples: usize,
    seed: u64,
) -> anyhow::Result<Report> {
    let comps = components
        .iter()
        .map(|p| {
            let json: AlgebraJson = read_json(p)?;
            let s = json.structure()?;
            let state = match json.matrices {
                Some(_) => Some(state_from_json(&json, s.clone())?),
                None => None,
            };
            Ok(Component::new(s, state)?)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let maps = maps
        .iter()
        .map(|p| Ok(read_json::<MapJson>(p)?.build()?))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let spec = FreeProductSpec::new(comps)?;
    let f = FreeMap::new(&spec, &maps)?;
    let q = match q {
        "auto" => match choose_q(f.lambda, spec.c(), spec.n(), spec.m())? {
            Some(q) => q,
            None => {
                return Ok(Report {
                    status: Status::Negative,
                    json: json!({ "command": "freeprod verify", "lambda": f.lambda, "q": Value::Null, "seed": seed, "samples": samples }),
                    text: format!("no even q ≤ 64 satisfies the free criterion for λ = {}\n", f.lambda),
                })
            }
        },
        other => other
            .parse()
            .with_context(|| format!("--q must be an even integer or auto, got \"{other}\""))?,
    };
    let r = verify_free_improving(&spec, &f, q, len, samples, seed)?;
    let text = format!(
        "λ = {}, C = {}, n = {}, m = {}, q = {}\nwords up to length {}, {} samples: {}\nmin slack {:.3e}\n",
        r.lambda,
        r.c,
        r.n,
        r.m,
        r.q,
        r.max_len,
        r.samples,
        r.violation.as_deref().unwrap_or("no violation"),
        r.min_slack
    );
    Ok(Report {
        status: if r.passed() { Status::Success } else { Status::Negative },
        json: json!({ "command": "freeprod verify", "report": r, "seed": seed, "samples": samples }),
        text,
    })
}

fn run_selftest(samples: usize, seed: u64) -> anyhow::Result<Report> {
    let results = selftest::run_all(samples, seed);
    let mut text = String::new();
    for r in &results {
        writeln!(
            text,
            "{} {:<24} {:>6} checks  worst {:.2e}  {:.1}s  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.checks,
            r.worst,
            r.seconds,
            r.detail
        )?;
    }
    let passed = results.iter().all(|r| r.passed);
    // timings vary run to run, so the JSON form leaves them out
    let suites: Vec<Value> = results
        .iter()
        .map(
            |r| json!({ "name": r.name, "passed": r.passed, "checks": r.checks, "worst": r.worst, "detail": r.detail }),
        )
        .collect();
    Ok(Report {
        status: if passed { Status::Success } else { Status::Error },
        json: json!({ "command": "selftest", "passed": passed, "suites": suites, "seed": seed, "samples": samples }),
        text,
    })
}

fn generate(group: &str, dual: bool) -> anyhow::Result<Report> {
    let build = |t: &GroupTable| {
        if dual {
            build_group_algebra(t)
        } else {
            build_function_algebra(t)
        }
    };
    let g = match group.split_once('*') {
        Some((a, b)) => tensor_product(&build(&parse_group(a)?)?, &build(&parse_group(b)?)?)?,
        None => build(&parse_group(group)?)?,
    };
    let json = serde_json::to_value(QuantumGroupJson::from_quantum_group(&g))?;
    Ok(Report {
        status: Status::Success,
        text: serde_json::to_string_pretty(&json)? + "\n",
        json,
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Validate { qg } => validate(qg),
        Command::Haar { qg } => haar(qg),
        Command::Irreps { qg } => irreps(qg),
        Command::Fourier { qg, input, state } => fourier(qg, input, *state),
        Command::Improve { qg, state, sampling } => improve(qg, state, *sampling),
        Command::Ritter { group, support } => ritter(group, support),
        Command::Schur {
            group,
            values,
            sampling,
        } => schur(group, values, *sampling),
        Command::Cesaro { qg, state } => cesaro(qg, state),
        Command::HopfImage { qg, hom, state } => hopf(qg, hom, state.as_deref()),
        Command::Freeprod {
            action:
                FreeprodCommand::Verify {
                    components,
                    maps,
                    q,
                    len,
                    samples,
                    seed,
                },
        } => freeprod_verify(components, maps, q, *len, *samples, *seed),
        Command::Selftest { samples, seed } => run_selftest(*samples, *seed),
        Command::Generate { group, dual } => generate(group, *dual),
    }
}

fn emit(cli: &Cli, body: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match dispatch(&cli) {
        Ok(report) => {
            let body = match cli.report {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
                Format::Text => report.text,
            };
            match emit(&cli, &body) {
                Ok(()) => report.status,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    Status::Error
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Consistency(_)) => Status::Inconsistent,
                _ => Status::Error,
            }
        }
    };
    ExitCode::from(status as u8)
}
