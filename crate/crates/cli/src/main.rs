mod args;
mod config;

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;
use pauli_access::cases::MeasurementCase;
use pauli_access::closure::set_from_json;
use pauli_access::dense::CMatrix;
use pauli_access::hamiltonian::{parse_hamiltonian, parse_spec_json};
use pauli_access::pauli::max_site;
use pauli_access::pipeline::{generate_ordered, order_set, OrderedSet};
use pauli_access::statespace::{initial_state_vector, InitialState, Integrator, TimeGrid};
use pauli_access::verify::{run_suite, Options, Suite};
use pauli_access::{
    build_exchange_chain, build_model, simulate, Error, HamiltonianSpec, MeasurementSpec, Result,
    StateSpaceModel,
};

use args::{
    ChainArgs, Cli, Command, Format, GenArgs, GraphArgs, HamiltonianArgs, IntegratorKind,
    MeasurementArgs, ModelArgs, SimulateArgs, StateArgs, VerifyArgs,
};

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            return fail(&Error::InvalidInput("--threads must be at least 1".into()));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            return fail(&Error::InvalidInput(e.to_string()));
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, cli.quiet),
        Command::Graph(a) => cmd_graph(a, cli.quiet),
        Command::Model(a) => cmd_model(a, cli.quiet),
        Command::Simulate(a) => cmd_simulate(a, cli.quiet),
        Command::Verify(a) => cmd_verify(a),
        Command::Chain(a) => cmd_chain(a, cli.quiet),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn note(quiet: bool, text: &str) {
    if !quiet {
        eprint!("{text}");
    }
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn require_format(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{command} does not support --format {format:?}"
        )))
    }
}

/// The Hamiltonian and any measurements listed in its spec file.
fn load_hamiltonian(a: &HamiltonianArgs) -> Result<(HamiltonianSpec, Option<MeasurementSpec>)> {
    if let Some(n) = a.chain {
        let couplings = a
            .couplings
            .clone()
            .unwrap_or_else(|| vec![1.0; n.saturating_sub(1)]);
        return Ok((build_exchange_chain(n, &couplings)?, None));
    }
    let Some(path) = &a.hamiltonian else {
        return Err(Error::InvalidInput(
            "give --hamiltonian FILE or --chain N".into(),
        ));
    };
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let spec = parse_spec_json(&text)?;
        return Ok((spec.hamiltonian, spec.measurements));
    }
    let n = match a.n_qubits {
        Some(n) => n,
        None => max_site(&text)?,
    };
    Ok((parse_hamiltonian(&text, n)?, None))
}

fn load_measurements(
    a: &MeasurementArgs,
    n: usize,
    from_spec: Option<MeasurementSpec>,
) -> Result<MeasurementSpec> {
    if let Some(text) = &a.meas {
        return MeasurementSpec::parse(text, n);
    }
    if let Some(path) = &a.meas_file {
        return MeasurementSpec::parse(&read(path)?, n);
    }
    if let Some(c) = a.case {
        let case = MeasurementCase::from_letter(c)
            .ok_or_else(|| Error::InvalidInput(format!("unknown case '{c}', expected a-f")))?;
        return MeasurementSpec::from_strings(&[case.seed_checked(n)?]);
    }
    from_spec.ok_or_else(|| Error::InvalidInput("give --meas, --meas-file or --case".into()))
}

fn load_problem(
    h: &HamiltonianArgs,
    m: &MeasurementArgs,
) -> Result<(HamiltonianSpec, MeasurementSpec)> {
    let (spec, listed) = load_hamiltonian(h)?;
    let meas = load_measurements(m, spec.n_qubits(), listed)?;
    Ok((spec, meas))
}

fn load_ordered_set(
    path: &Path,
    h: &HamiltonianArgs,
) -> Result<(OrderedSet, Option<HamiltonianSpec>)> {
    let (set, digamma) = set_from_json(&read(path)?)?;
    let given = h.chain.is_some() || h.hamiltonian.is_some();
    let spec = if given {
        Some(load_hamiltonian(h)?.0)
    } else {
        None
    };
    let digamma = match (digamma, &spec) {
        (_, Some(spec)) => spec.digamma(),
        (Some(d), None) => d,
        (None, None) => {
            return Err(Error::InvalidInput(
                "the set file has no Hamiltonian strings; give --hamiltonian or --chain".into(),
            ))
        }
    };
    for d in &digamma {
        if d.n_qubits() != set.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: set.n_qubits(),
                right: d.n_qubits(),
            });
        }
    }
    Ok((order_set(&set, &digamma)?, spec))
}

fn cmd_gen(a: &GenArgs, quiet: bool) -> Result<()> {
    require_format(a.format, &[Format::Json, Format::Text], "gen")?;
    let (spec, meas) = load_problem(&a.hamiltonian, &a.meas)?;
    let ordered = generate_ordered(&spec, &meas)?;
    let text = match a.format {
        Format::Text => ordered.set.to_text(),
        _ => ordered.set.to_json(Some(&ordered.digamma)),
    };
    emit(a.output.as_deref(), &text)?;
    warn(&ordered.warnings);
    note(quiet, &ordered.summary());
    Ok(())
}

fn cmd_graph(a: &GraphArgs, quiet: bool) -> Result<()> {
    require_format(a.format, &[Format::Dot, Format::Json], "graph")?;
    let (ordered, _) = load_ordered_set(&a.set, &a.hamiltonian)?;
    let text = match a.format {
        Format::Json => ordered.graph_json(),
        _ => ordered.dot(),
    };
    emit(a.output.as_deref(), &text)?;
    warn(&ordered.warnings);
    note(
        quiet,
        &format!(
            "vertices {}\nedges {}\n",
            ordered.set.len(),
            ordered.graph.edges().len()
        ),
    );
    Ok(())
}

fn cmd_model(a: &ModelArgs, quiet: bool) -> Result<()> {
    require_format(a.format, &[Format::Json], "model")?;
    let (spec, listed) = load_hamiltonian(&a.hamiltonian)?;
    let meas = load_measurements(&a.meas, spec.n_qubits(), listed)?;
    let ordered = match &a.set {
        Some(path) => load_ordered_set(path, &a.hamiltonian)?.0,
        None => generate_ordered(&spec, &meas)?,
    };
    let model = build_model(&ordered.set, &spec, &meas)?;
    emit(a.output.as_deref(), &model.to_json())?;
    warn(&ordered.warnings);
    note(
        quiet,
        &format!(
            "states {}\noutputs {}\nA nonzeros {}\n",
            model.dim(),
            model.n_outputs(),
            model.a().len()
        ),
    );
    Ok(())
}

#[derive(serde::Deserialize)]
struct DenseDocument {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Vec<Vec<f64>>,
}

fn load_state(a: &StateArgs) -> Result<InitialState> {
    if let Some(text) = &a.rho0 {
        return InitialState::parse_product(text);
    }
    let Some(path) = &a.rho0_file else {
        return Err(Error::InvalidInput("give --rho0 or --rho0-file".into()));
    };
    let doc: DenseDocument = serde_json::from_str(&read(path)?)?;
    let dim = doc.re.len();
    if doc.re.iter().any(|r| r.len() != dim) || !(doc.im.is_empty() || doc.im.len() == dim) {
        return Err(Error::InvalidDensity(
            "matrix rows have inconsistent lengths".into(),
        ));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let im = doc.im.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0);
            m[(i, j)] = Complex64::new(doc.re[i][j], im);
        }
    }
    InitialState::dense(m)
}

fn integrator(a: &StateArgs) -> Integrator {
    match a.integrator {
        IntegratorKind::Exp => Integrator::Exponential,
        IntegratorKind::Rk4 => Integrator::RungeKutta { max_step: a.step },
    }
}

fn cmd_simulate(a: &SimulateArgs, quiet: bool) -> Result<()> {
    require_format(a.format, &[Format::Csv], "simulate")?;
    let model = StateSpaceModel::from_json(&read(&a.model)?)?;
    let state = load_state(&a.state)?;
    let x0 = initial_state_vector(&state, model.ordering())?;
    let times = TimeGrid::parse(&a.state.times)?.points()?;
    let traj = simulate(&model, &x0, &times, integrator(&a.state))?;
    emit(a.output.as_deref(), &traj.to_csv())?;
    warn(&traj.diagnostics);
    note(quiet, &format!("samples {}\n", times.len()));
    Ok(())
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad size '{s}' in range '{text}'")))
    };
    let range = match text.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi.trim_start_matches('='))?,
        None => {
            let n = num(text)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(Error::InvalidInput(format!("empty range '{text}'")));
    }
    Ok(range)
}

fn cmd_verify(a: &VerifyArgs) -> Result<()> {
    require_format(a.format, &[Format::Text, Format::Json], "verify")?;
    let suite = Suite::parse(&a.suite)?;
    let range = match &a.n {
        Some(t) => parse_range(t)?,
        None => suite.default_range(),
    };
    let opts = Options {
        seed: a.seed,
        samples: a.samples,
        ..Options::default()
    };
    let report = run_suite(suite, range, &opts)?;
    let text = match a.format {
        Format::Json => {
            let checks: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|c| serde_json::json!({"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            serde_json::to_string_pretty(&checks)? + "\n"
        }
        _ => report.to_string(),
    };
    emit(None, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Inconsistency(format!(
            "{} checks failed",
            report.failures().count()
        )))
    }
}

fn cmd_chain(a: &ChainArgs, quiet: bool) -> Result<()> {
    let (spec, meas) = load_problem(&a.hamiltonian, &a.meas)?;
    let state = load_state(&a.state)?;
    let times = TimeGrid::parse(&a.state.times)?.points()?;
    let out = pauli_access::pipeline::run(&spec, &meas, &state, &times, integrator(&a.state))?;
    let art = out.artifacts();
    fs::create_dir_all(&a.out_dir)?;
    for (name, text) in [
        ("set.json", &art.set_json),
        ("graph.dot", &art.graph_dot),
        ("graph.json", &art.graph_json),
        ("model.json", &art.model_json),
        ("trajectory.csv", &art.trajectory_csv),
        ("summary.txt", &art.summary),
    ] {
        fs::write(a.out_dir.join(name), text)?;
    }
    warn(&art.warnings);
    note(quiet, &art.summary);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..12").unwrap(), 2..=12);
        assert_eq!(parse_range("2..=4").unwrap(), 2..=4);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }
}
