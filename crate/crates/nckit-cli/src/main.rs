mod report;

use clap::{Parser, Subcommand};
use nckit::io::{
    load_json, AlgebraFile, BooleanFile, ElementFile, MatricesFile, MeasureFile, OrliczFile,
    PartitionFile, StateFile,
};
use nckit::{Error, Tol};
use report::RunReport;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nckit", about = "Finite-dimensional W*-algebra toolkit", version)]
struct Cli {
    /// Relative tolerance for structural identities.
    #[arg(long, global = true)]
    tol_spec: Option<f64>,
    /// Relative support/rank threshold.
    #[arg(long, global = true)]
    tol_supp: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe an algebra, element or state file.
    Info { file: PathBuf },
    /// GNS representation data of a state.
    Gns { state: PathBuf },
    /// Modular operator spectrum of a state.
    Modular { state: PathBuf },
    /// Modular flow σ_t(x).
    Flow {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        state: PathBuf,
        element: PathBuf,
    },
    /// Connes cocycle (Dφ:Dψ)_t.
    Cocycle {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        phi: PathBuf,
        psi: PathBuf,
    },
    /// Analytic continuation (Dφ:Dψ)_z, Im z ∈ [-1/2, 0].
    CocycleAnalytic {
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
        phi: PathBuf,
        psi: PathBuf,
    },
    /// KMS boundary-condition check at β = 1.
    KmsCheck {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-1,-0.3,0,0.7,2")]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        state: PathBuf,
        x: PathBuf,
        y: PathBuf,
    },
    /// Pedersen–Takesaki density of ψ relative to faithful φ.
    PtDensity { psi: PathBuf, phi: PathBuf },
    /// Dye–Segal density of a state for a chosen trace.
    RnDensity {
        #[arg(long, default_value = "can")]
        trace: String,
        state: PathBuf,
    },
    /// Standard liouvillean of a self-adjoint element.
    Liouvillean { element: PathBuf },
    /// Trace Lp norm of an element.
    LpNorm {
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "can")]
        trace: String,
        element: PathBuf,
    },
    /// Luxemburg norm for an Orlicz gauge.
    OrliczNorm {
        #[arg(long)]
        orlicz: PathBuf,
        #[arg(long, default_value = "can")]
        trace: String,
        element: PathBuf,
    },
    /// Rearrangement step function of an element.
    Rearrange {
        #[arg(long, default_value = "can")]
        trace: String,
        element: PathBuf,
    },
    /// Commutant basis of represented operators (or of an algebra's units).
    Commutant { file: PathBuf },
    /// Minimal central projections and factor types of an algebra.
    Classify { algebra: PathBuf },
    /// Pinching conditional expectation.
    CondExp {
        #[arg(long)]
        partition: PathBuf,
        element: PathBuf,
    },
    /// Boolean-algebra operations.
    Bool {
        #[command(subcommand)]
        op: BoolOp,
    },
    /// Run the full verification suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Algebras, e.g. "2,3;2x2" = (M2 ⊕ M3) and (M2 with mult 2).
        #[arg(long, default_value = "2,3;2x2")]
        dims: String,
        /// Injected defect for negative-control runs.
        #[arg(long)]
        poison: Option<String>,
    },
}

#[derive(Subcommand)]
enum BoolOp {
    /// Stone spectrum of a finite boolean algebra.
    Spectrum { boolean: PathBuf },
    /// Radon–Nikodym quotient μ₂/μ₁.
    Rn { mu2: PathBuf, mu1: PathBuf },
    /// Weighted Lp(B, μ) norm of a per-atom function.
    LpNorm {
        #[arg(long)]
        p: String,
        /// JSON array of per-atom values.
        #[arg(long)]
        values: String,
        measure: PathBuf,
    },
    /// Canonical Lp(B) class norm and (γ=1) integral.
    Canonical {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        values: String,
        measure: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut tol = Tol::default();
    if let Some(s) = cli.tol_spec {
        tol.spec = s;
    }
    if let Some(s) = cli.tol_supp {
        tol.supp = s;
    }
    match run(cli.command, &tol) {
        Ok(report) => {
            println!("{}", report.render());
            eprintln!("{}", report.summary());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = err.exit_code();
            let diag = serde_json::json!({
                "error": err.to_string(),
                "exit_code": code,
            });
            println!("{}", serde_json::to_string_pretty(&diag).unwrap());
            eprintln!("error: {err}");
            ExitCode::from(code as u8)
        }
    }
}

fn parse_p(p: &str) -> Result<f64, Error> {
    match p {
        "inf" | "Inf" | "INF" | "∞" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad exponent `{other}`"))),
    }
}

fn run(cmd: Command, tol: &Tol) -> Result<RunReport, Error> {
    match cmd {
        Command::Info { file } => cmd_info(&file, tol),
        Command::Gns { state } => cmd_gns(&state, tol),
        Command::Modular { state } => cmd_modular(&state, tol),
        Command::Flow { t, state, element } => cmd_flow(t, &state, &element, tol),
        Command::Cocycle { t, phi, psi } => cmd_cocycle(t, &phi, &psi, tol),
        Command::CocycleAnalytic { re, im, phi, psi } => {
            cmd_cocycle_analytic(re, im, &phi, &psi, tol)
        }
        Command::KmsCheck { t, rel_tol, state, x, y } => {
            cmd_kms(&t, rel_tol, &state, &x, &y, tol)
        }
        Command::PtDensity { psi, phi } => cmd_pt(&psi, &phi, tol),
        Command::RnDensity { trace, state } => cmd_rn_density(&trace, &state, tol),
        Command::Liouvillean { element } => cmd_liouvillean(&element, tol),
        Command::LpNorm { p, trace, element } => cmd_lp_norm(&p, &trace, &element, tol),
        Command::OrliczNorm { orlicz, trace, element } => {
            cmd_orlicz_norm(&orlicz, &trace, &element, tol)
        }
        Command::Rearrange { trace, element } => cmd_rearrange(&trace, &element, tol),
        Command::Commutant { file } => cmd_commutant(&file, tol),
        Command::Classify { algebra } => cmd_classify(&algebra),
        Command::CondExp { partition, element } => cmd_cond_exp(&partition, &element, tol),
        Command::Bool { op } => cmd_bool(op, tol),
        Command::Verify { seed, trials, dims, poison } => {
            cmd_verify(seed, trials, &dims, poison.as_deref(), tol)
        }
    }
}

fn trace_spec(name: &str) -> Result<nckit::TraceSpec, Error> {
    Ok(nckit::TraceSpec {
        flavor: nckit::io::trace_flavor_from_str(name)?,
    })
}

fn cmd_info(path: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let mut report = RunReport::new("info", &[path]);
    // element file, state file, or bare algebra file
    if let Ok(el_file) = load_json::<ElementFile>(path) {
        if let Ok(el) = el_file.to_core() {
            report.push_num("operator_norm", el.operator_norm());
            report.push_num("trace_can_re", el.trace_can().re);
            report.push_num("trace_rep_re", el.trace_rep().re);
            report.push_bool("self_adjoint", el.is_self_adjoint(tol));
            report.push_bool("positive", el.is_positive(tol));
            report.push_bool("projection", el.is_projection(tol));
            report.push_bool("partial_isometry", el.is_partial_isometry(tol));
            return Ok(report);
        }
    }
    if let Ok(st_file) = load_json::<StateFile>(path) {
        if let Ok(st) = st_file.to_core(tol) {
            report.push_num("norm", st.norm());
            report.push_bool("faithful", st.is_faithful(tol));
            report.push_bool("normalized", st.is_normalized());
            return Ok(report);
        }
    }
    let alg = load_json::<AlgebraFile>(path)?.to_core()?;
    report.push_num("blocks", alg.num_blocks() as f64);
    report.push_num("represented_dim", alg.represented_dim() as f64);
    report.push_num("hs_dim", alg.hs_dim() as f64);
    report.push_num("commutant_dim", alg.commutant_dim() as f64);
    Ok(report)
}

fn cmd_gns(path: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let state = load_json::<StateFile>(path)?.to_core(tol)?;
    let g = nckit::gns(&state, tol);
    let mut report = RunReport::new("gns", &[path]);
    report.push_num("dimension", g.dim as f64);
    report.push_num("commutant_dim", g.commutant_dim(tol) as f64);
    let mut worst: f64 = 0.0;
    for unit in state.algebra().matrix_units() {
        let lhs = g.expectation(&unit);
        let rhs = state.evaluate(&unit)?;
        worst = worst.max((lhs - rhs).norm());
    }
    report.push_verdict("gns-expectation", worst, 1e-10);
    Ok(report)
}

fn cmd_modular(path: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let state = load_json::<StateFile>(path)?.to_core(tol)?;
    let md = nckit::modular_operator(&state, tol);
    let mut report = RunReport::new("modular", &[path]);
    report.push_bool("faithful", md.is_faithful());
    report.push_bool("tracial", md.is_identity(tol));
    report.push_num_list("delta_eigenvalues", &md.eigenvalues());
    report.push_num_list("modular_hamiltonian", &md.hamiltonian_eigenvalues());
    Ok(report)
}

fn cmd_flow(t: f64, state: &PathBuf, element: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let st = load_json::<StateFile>(state)?.to_core(tol)?;
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let moved = nckit::modular_flow(&st, &el, t, tol)?;
    let mut report = RunReport::new("flow", &[state, element]);
    report.push_element("result", &moved);
    let invariance = (st.evaluate(&moved)? - st.evaluate(&el)?).norm();
    report.push_verdict("state-invariance", invariance, 1e-9 * (1.0 + el.operator_norm()));
    Ok(report)
}

fn cmd_cocycle(t: f64, phi: &PathBuf, psi: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let sphi = load_json::<StateFile>(phi)?.to_core(tol)?;
    let spsi = load_json::<StateFile>(psi)?.to_core(tol)?;
    let u = nckit::connes_cocycle(&sphi, &spsi, t, tol)?;
    let mut report = RunReport::new("cocycle", &[phi, psi]);
    report.push_element("u_t", &u);
    report.push_bool("partial_isometry", u.is_partial_isometry(tol));
    Ok(report)
}

fn cmd_cocycle_analytic(
    re: f64,
    im: f64,
    phi: &PathBuf,
    psi: &PathBuf,
    tol: &Tol,
) -> Result<RunReport, Error> {
    let sphi = load_json::<StateFile>(phi)?.to_core(tol)?;
    let spsi = load_json::<StateFile>(psi)?.to_core(tol)?;
    let u = nckit::cocycle_analytic(&sphi, &spsi, nckit::la::c(re, im), tol)?;
    let mut report = RunReport::new("cocycle-analytic", &[phi, psi]);
    report.push_element("u_z", &u);
    report.push_num("norm", u.operator_norm());
    Ok(report)
}

fn cmd_kms(
    ts: &[f64],
    rel_tol: f64,
    state: &PathBuf,
    x: &PathBuf,
    y: &PathBuf,
    tol: &Tol,
) -> Result<RunReport, Error> {
    let st = load_json::<StateFile>(state)?.to_core(tol)?;
    let xe = load_json::<ElementFile>(x)?.to_core()?;
    let ye = load_json::<ElementFile>(y)?.to_core()?;
    let rep = nckit::kms_check(&st, &xe, &ye, ts, rel_tol, tol)?;
    let mut report = RunReport::new("kms-check", &[state, x, y]);
    report.push_bool("pass", rep.pass);
    report.push_num("max_residual", rep.max_residual);
    report.push_num("threshold", rep.threshold);
    let samples: Vec<serde_json::Value> = rep
        .samples
        .iter()
        .map(|s| {
            serde_json::json!({
                "t": report::fmt_sig(s.t),
                "f_t": [report::fmt_sig(s.f_t.re), report::fmt_sig(s.f_t.im)],
                "f_t_plus_i": [report::fmt_sig(s.f_t_plus_i.re), report::fmt_sig(s.f_t_plus_i.im)],
                "target": [report::fmt_sig(s.target.re), report::fmt_sig(s.target.im)],
                "residual": report::fmt_sig(s.residual),
            })
        })
        .collect();
    report.push_raw("samples", serde_json::Value::Array(samples));
    report.push_verdict("kms-boundary", rep.max_residual, rep.threshold);
    Ok(report)
}

fn cmd_pt(psi: &PathBuf, phi: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let spsi = load_json::<StateFile>(psi)?.to_core(tol)?;
    let sphi = load_json::<StateFile>(phi)?.to_core(tol)?;
    let mut report = RunReport::new("pt-density", &[psi, phi]);
    match nckit::pedersen_takesaki(&spsi, &sphi, tol)? {
        nckit::PtOutcome::Density(h) => {
            report.push_bool("pass", true);
            report.push_element("density", &h);
        }
        nckit::PtOutcome::InvarianceFailure { max_deviation, samples } => {
            report.push_bool("pass", false);
            report.push_num("max_residual", max_deviation);
            let rows: Vec<serde_json::Value> = samples
                .iter()
                .map(|(t, dev)| {
                    serde_json::json!({
                        "t": report::fmt_sig(*t),
                        "deviation": report::fmt_sig(*dev),
                    })
                })
                .collect();
            report.push_raw("samples", serde_json::Value::Array(rows));
        }
    }
    Ok(report)
}

fn cmd_rn_density(trace: &str, state: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let st = load_json::<StateFile>(state)?.to_core(tol)?;
    let flavor = nckit::io::trace_flavor_from_str(trace)?;
    let h = st.dye_segal_density(flavor);
    let mut report = RunReport::new("rn-density", &[state]);
    report.push_element("density", &h);
    Ok(report)
}

fn cmd_liouvillean(element: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let k = nckit::standard_liouvillean(&el, tol)?;
    let mut report = RunReport::new("liouvillean", &[element]);
    report.push_num_list("spectrum", &k.spectrum());
    report.push_verdict(
        "anticommutation-with-j",
        k.anticommutator_residual(),
        1e-10 * el.operator_norm().max(1.0),
    );
    Ok(report)
}

fn cmd_lp_norm(p: &str, trace: &str, element: &PathBuf, _tol: &Tol) -> Result<RunReport, Error> {
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let pe = parse_p(p)?;
    let tr = trace_spec(trace)?;
    let norm = nckit::lp_norm(&el, pe, &tr)?;
    let mut report = RunReport::new("lp-norm", &[element]);
    report.push_num("norm", norm);
    Ok(report)
}

fn cmd_orlicz_norm(
    orlicz: &PathBuf,
    trace: &str,
    element: &PathBuf,
    tol: &Tol,
) -> Result<RunReport, Error> {
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let ups = load_json::<OrliczFile>(orlicz)?.to_core()?;
    let tr = trace_spec(trace)?;
    let norm = nckit::luxemburg_norm(&el, &ups, &tr, tol)?;
    let mut report = RunReport::new("orlicz-norm", &[orlicz, element]);
    report.push_num("norm", norm);
    report.push_num("modular_at_norm", nckit::orlicz_modular(&el.scale_re(1.0 / norm.max(1e-300)), &ups, &tr));
    Ok(report)
}

fn cmd_rearrange(trace: &str, element: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let tr = trace_spec(trace)?;
    let sf = nckit::rearrangement(&el, &tr, tol);
    let mut report = RunReport::new("rearrange", &[element]);
    let widths: Vec<f64> = sf.steps().iter().map(|s| s.0).collect();
    let values: Vec<f64> = sf.steps().iter().map(|s| s.1).collect();
    report.push_num_list("widths", &widths);
    report.push_num_list("values", &values);
    Ok(report)
}

fn cmd_commutant(file: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    // dense generator list, or an algebra whose represented units generate
    let generators = if let Ok(mats) = load_json::<MatricesFile>(file) {
        mats.matrices
            .iter()
            .map(nckit::io::matrix_from_file)
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let alg = load_json::<AlgebraFile>(file)?.to_core()?;
        alg.matrix_units().iter().map(|u| u.represent()).collect()
    };
    let basis = nckit::commutant(&generators, tol)?;
    let mut report = RunReport::new("commutant", &[file]);
    report.push_num("dimension", basis.len() as f64);
    Ok(report)
}

fn cmd_classify(algebra: &PathBuf) -> Result<RunReport, Error> {
    let alg = load_json::<AlgebraFile>(algebra)?.to_core()?;
    let factors = nckit::center_and_classify(&alg);
    let mut report = RunReport::new("classify", &[algebra]);
    let labels: Vec<String> = factors.iter().map(|f| f.label()).collect();
    report.push_str_list("types", &labels);
    report.push_num("factors", factors.len() as f64);
    Ok(report)
}

fn cmd_cond_exp(partition: &PathBuf, element: &PathBuf, tol: &Tol) -> Result<RunReport, Error> {
    let el = load_json::<ElementFile>(element)?.to_core()?;
    let part_file = load_json::<PartitionFile>(partition)?;
    let alg = part_file.algebra.to_core()?;
    let mut projections = Vec::new();
    for blocks in &part_file.projections {
        let mats = blocks
            .iter()
            .map(nckit::io::matrix_from_file)
            .collect::<Result<Vec<_>, _>>()?;
        projections.push(nckit::AlgebraElement::new(alg.clone(), mats)?);
    }
    let e = nckit::pinch_expectation(&el, &projections, tol)?;
    let mut report = RunReport::new("cond-exp", &[partition, element]);
    report.push_element("result", &e);
    let trace_dev = (e.trace_can() - el.trace_can()).norm();
    report.push_verdict("trace-preservation", trace_dev, 1e-10 * (1.0 + el.trace_can().norm()));
    Ok(report)
}

fn cmd_bool(op: BoolOp, tol: &Tol) -> Result<RunReport, Error> {
    match op {
        BoolOp::Spectrum { boolean } => {
            let b = load_json::<BooleanFile>(&boolean)?.to_core()?;
            let homs = nckit::boolean::stone_spectrum(&b);
            let mut report = RunReport::new("bool-spectrum", &[&boolean]);
            report.push_num("points", homs.len() as f64);
            Ok(report)
        }
        BoolOp::Rn { mu2, mu1 } => {
            let m2 = load_json::<MeasureFile>(&mu2)?.to_core()?;
            let m1 = load_json::<MeasureFile>(&mu1)?.to_core()?;
            let f = nckit::boolean::rn_quotient(&m2, &m1)?;
            let mut report = RunReport::new("bool-rn", &[&mu2, &mu1]);
            report.push_num_list("quotient", &f);
            Ok(report)
        }
        BoolOp::LpNorm { p, values, measure } => {
            let mu = load_json::<MeasureFile>(&measure)?.to_core()?;
            let f: Vec<f64> = serde_json::from_str(&values)
                .map_err(|e| Error::InvalidInput(format!("bad values: {e}")))?;
            let pe = parse_p(&p)?;
            let norm = nckit::boolean::lp_b_norm(&f, pe, &mu)?;
            let mut report = RunReport::new("bool-lp-norm", &[&measure]);
            report.push_num("norm", norm);
            Ok(report)
        }
        BoolOp::Canonical { gamma, values, measure } => {
            let mu = load_json::<MeasureFile>(&measure)?.to_core()?;
            let f: Vec<f64> = serde_json::from_str(&values)
                .map_err(|e| Error::InvalidInput(format!("bad values: {e}")))?;
            let x = nckit::boolean::CanonicalLpElement::new(f, mu, gamma)?;
            let mut report = RunReport::new("bool-canonical", &[&measure]);
            report.push_num("norm", x.norm());
            if gamma == 1.0 {
                report.push_num("integral", x.integral()?);
            }
            let _ = tol;
            Ok(report)
        }
    }
}

fn cmd_verify(
    seed: u64,
    trials: usize,
    dims: &str,
    poison: Option<&str>,
    tol: &Tol,
) -> Result<RunReport, Error> {
    let algebras = nckit::verify::parse_dims(dims)?;
    let poison = match poison {
        None => None,
        Some("flip-sign-in-J") => Some(nckit::verify::Poison::FlipSignInJ),
        Some(other) => {
            return Err(Error::InvalidInput(format!("unknown poison `{other}`")));
        }
    };
    let cfg = nckit::verify::VerifyConfig {
        seed,
        trials,
        algebras,
        poison,
        tol: *tol,
    };
    // suites are pure; run them in parallel and concatenate in order
    let results: Vec<nckit::verify::CheckResult> = {
        use rayon::prelude::*;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("NCKIT_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
        {
            builder = builder.num_threads(n.max(1));
        }
        let pool = builder.build().map_err(|e| Error::InvalidInput(e.to_string()))?;
        pool.install(|| {
            nckit::verify::suites()
                .into_par_iter()
                .map(|(_, f)| f(&cfg))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        })
    };
    let mut report = RunReport::new("verify", &[] as &[&PathBuf]);
    report.push_num("seed", seed as f64);
    report.push_num("trials", trials as f64);
    if trials == 0 {
        report.push_str("warning", "trials = 0: vacuous pass");
    }
    for r in &results {
        report.push_verdict(&r.name, r.max_residual, r.tolerance);
    }
    Ok(report)
}
