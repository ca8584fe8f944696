use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use teamgame_core::dynamics::{simulate, IntegratorConfig, Method, Trajectory};
use teamgame_core::experiments::{
    branch, discrete_preset, gradient_demo, reverse, sampled_preset, spectrum_report, Preset,
    PresetParams,
};
use teamgame_core::io::{
    read_strategy_csv, write_charpoly, write_spectrum_csv, write_strategy_csv,
    write_trajectory_csv, write_vectors_csv, StrategyKind,
};
use teamgame_core::operators::{DiscreteOperators, SampledOperators};
use teamgame_core::spectral::EXACT_SIZE_LIMIT;
use teamgame_core::strategy::{SampledStrategy, Strategy};

use crate::config::RunArgs;
use crate::error::{CliError, CliResult};
use crate::svg::{line_plot, Series};

struct Output {
    dir: PathBuf,
    svg: bool,
    header: Vec<String>,
}

impl Output {
    fn new(command: &str, args: &RunArgs) -> CliResult<Self> {
        let dir = args.out_dir();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self {
            dir,
            svg: args.svg,
            header: vec![format!("teamgame {command}")],
        })
    }

    fn note(&mut self, line: String) {
        self.header.push(line);
    }

    fn write(
        &self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>, &[String]) -> teamgame_core::Result<()>,
    ) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w, &self.header).map_err(|e| match e {
            teamgame_core::Error::Io(source) => CliError::io(&path, source),
            other => other.into(),
        })?;
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    fn plot(&self, name: &str, title: &str, series: &[Series]) -> CliResult<()> {
        if !self.svg {
            return Ok(());
        }
        let path = self.dir.join(name);
        fs::write(&path, line_plot(title, series)).map_err(|e| CliError::io(&path, e))
    }
}

fn integrator(args: &RunArgs, dt: f64, horizon: f64) -> CliResult<IntegratorConfig> {
    let method: Method = args.method.as_deref().unwrap_or("rk4").parse()?;
    let cfg = IntegratorConfig {
        method,
        dt: args.dt.unwrap_or(dt),
        horizon: args.T.unwrap_or(horizon),
        record_every: args.record_every.unwrap_or(10),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn preset_params(args: &RunArgs) -> PresetParams {
    let d = PresetParams::default();
    PresetParams {
        r: args.r.unwrap_or(d.r),
        delta: args.delta.unwrap_or(d.delta),
        k: args.k,
        seed: args.seed.unwrap_or(d.seed),
    }
}

enum Initial {
    Discrete(Strategy),
    Sampled(SampledStrategy),
}

fn initial_state(args: &RunArgs, out: &mut Output, default_preset: &str) -> CliResult<Initial> {
    if args.M.is_some() && args.N.is_some() {
        return Err(CliError::Config("give either --M or --N, not both".into()));
    }
    if let Some(path) = &args.file {
        if args.preset.is_some() {
            return Err(CliError::Config(
                "give either --preset or --file, not both".into(),
            ));
        }
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let parsed = read_strategy_csv(BufReader::new(file)).map_err(|e| match e {
            teamgame_core::Error::Io(source) => CliError::io(path, source),
            other => CliError::Config(format!("{}: {other}", path.display())),
        })?;
        out.note(format!("file {}", path.display()));
        return Ok(match parsed.kind {
            StrategyKind::Discrete => Initial::Discrete(parsed.into_discrete()?),
            StrategyKind::Sampled => Initial::Sampled(parsed.into_sampled()?),
        });
    }
    let preset: Preset = args.preset.as_deref().unwrap_or(default_preset).parse()?;
    let params = preset_params(args);
    out.note(format!("preset {preset}"));
    if preset.is_seeded() {
        out.note(format!("seed {}", params.seed));
    }
    match preset {
        Preset::Tent => out.note(format!("r {}", params.r)),
        Preset::PerturbedConstant => out.note(format!("delta {}", params.delta)),
        _ => {}
    }
    Ok(match args.N {
        Some(n) => {
            out.note(format!("N {n}"));
            Initial::Sampled(sampled_preset(preset, n, &params)?)
        }
        None => {
            let m = args.M.unwrap_or(50);
            out.note(format!("M {m}"));
            Initial::Discrete(discrete_preset(preset, m, &params)?)
        }
    })
}

fn note_integrator(out: &mut Output, cfg: &IntegratorConfig) {
    out.note(format!(
        "method {} dt {} T {} record_every {}",
        cfg.method, cfg.dt, cfg.horizon, cfg.record_every
    ));
}

fn component_plot(
    out: &Output,
    name: &str,
    title: &str,
    xs: &[f64],
    curves: &[(&str, &[f64])],
) -> CliResult<()> {
    let series: Vec<Series> = curves
        .iter()
        .map(|(label, ys)| Series { label, xs, ys })
        .collect();
    out.plot(name, title, &series)
}

fn index_axis(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64).collect()
}

fn diagnostics_plot(out: &Output, traj: &Trajectory) -> CliResult<()> {
    let mca = traj.mca_series();
    out.plot(
        "diagnostics.svg",
        "mean competitive ability",
        &[Series {
            label: "mca",
            xs: &traj.times,
            ys: &mca,
        }],
    )
}

pub fn cmd_simulate(args: &RunArgs) -> CliResult<()> {
    let mut out = Output::new("simulate", args)?;
    let initial = initial_state(args, &mut out, "constant")?;
    let cfg = integrator(args, 1e-3, 1.0)?;
    note_integrator(&mut out, &cfg);
    let (traj, kind, xs) = match &initial {
        Initial::Discrete(y) => {
            let ops = DiscreteOperators::new(y.order())?;
            (
                simulate(&ops, y.values(), &cfg)?,
                StrategyKind::Discrete,
                index_axis(y.values().len()),
            )
        }
        Initial::Sampled(f) => {
            let ops = SampledOperators::for_strategy(f);
            (
                simulate(&ops, f.samples(), &cfg)?,
                StrategyKind::Sampled,
                f.grid(),
            )
        }
    };
    out.write("initial.csv", |w, h| {
        write_strategy_csv(w, kind, traj.initial_state(), h)
    })?;
    let path = out.write("trajectory.csv", |w, h| write_trajectory_csv(w, &traj, h))?;
    component_plot(
        &out,
        "profile.svg",
        "initial and final strategy",
        &xs,
        &[
            ("initial", traj.initial_state()),
            ("final", traj.final_state()),
        ],
    )?;
    diagnostics_plot(&out, &traj)?;

    let last = traj.diagnostics.last().expect("initial state recorded");
    println!("wrote {}", path.display());
    println!("records {}", traj.len());
    match traj.switch_time {
        Some(t) => println!("switch time {t}"),
        None => println!("switch time none"),
    }
    println!("final mca {}", last.mca);
    println!("final mass {}", last.mass);
    if let Some(i) = traj.first_invalid() {
        println!(
            "note: state leaves the nonnegative cone at t = {}",
            traj.times[i]
        );
    }
    Ok(())
}

pub fn cmd_branch(args: &RunArgs) -> CliResult<()> {
    let mut out = Output::new("branch", args)?;
    let m = args.M.unwrap_or(50);
    let delta = args.delta.unwrap_or(0.01);
    let k = args.k.unwrap_or(m / 2);
    if k > m {
        return Err(CliError::Config(format!("k = {k} must be at most M = {m}")));
    }
    let cfg = integrator(args, 1e-3, 10.0)?;
    out.note(format!("M {m} delta {delta} k {k}"));
    note_integrator(&mut out, &cfg);
    let report = branch(m, delta, k, &cfg)?;
    out.write("branch_plus.csv", |w, h| {
        write_trajectory_csv(w, &report.plus, h)
    })?;
    out.write("branch_minus.csv", |w, h| {
        write_trajectory_csv(w, &report.minus, h)
    })?;
    out.write("mirror.csv", |w, h| {
        for line in h {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "t,residual")?;
        for (t, r) in report.plus.times.iter().zip(&report.mirror_residual) {
            writeln!(w, "{t},{r}")?;
        }
        Ok(())
    })?;
    component_plot(
        &out,
        "branch.svg",
        "final states of the two branches",
        &index_axis(m + 1),
        &[
            ("+delta", report.plus.final_state()),
            ("-delta", report.minus.final_state()),
        ],
    )?;
    println!("max mirror residual {}", report.max_mirror_residual());
    println!(
        "min distance from constant {}",
        report.min_distance_from_constant
    );
    Ok(())
}

pub fn cmd_reverse(args: &RunArgs) -> CliResult<()> {
    let mut out = Output::new("reverse", args)?;
    let m = args.M.unwrap_or(9);
    let cfg = integrator(args, 1e-3, 0.5)?;
    if cfg.horizon <= 0.0 {
        return Err(CliError::Config("reverse needs T > 0".into()));
    }
    out.note(format!("M {m}"));
    note_integrator(&mut out, &cfg);
    let report = reverse(m, &cfg)?;
    out.write("reverse_initial.csv", |w, h| {
        write_strategy_csv(w, StrategyKind::Discrete, report.initial(), h)
    })?;
    out.write("reverse_path.csv", |w, h| {
        write_trajectory_csv(w, &report.reverse, h)
    })?;
    out.write("forward.csv", |w, h| {
        write_trajectory_csv(w, &report.forward, h)
    })?;
    component_plot(
        &out,
        "reverse.svg",
        "start found by time reversal",
        &index_axis(m + 1),
        &[("y0", report.initial()), ("target", &vec![1.0; m + 1])],
    )?;
    println!("round trip error {}", report.round_trip_error);
    println!("min component {}", report.min_component);
    if !report.stays_positive() {
        println!(
            "warning: negative components along the path; T is too large for a valid strategy"
        );
    }
    Ok(())
}

pub fn cmd_spectrum(args: &RunArgs) -> CliResult<()> {
    let mut out = Output::new("spectrum", args)?;
    let m = args.M.unwrap_or(11);
    out.note(format!("M {m}"));
    let report = spectrum_report(m)?;
    out.write("charpoly.txt", |w, h| {
        write_charpoly(w, &report.binomial, h)
    })?;
    out.write("eigenvalues_L.csv", |w, h| {
        write_spectrum_csv(w, &report.unconstrained, h)
    })?;
    out.write("eigenvalues_constrained.csv", |w, h| {
        write_spectrum_csv(w, &report.constrained, h)
    })?;
    out.write("kernel_basis.csv", |w, h| {
        write_vectors_csv(w, &report.constrained.kernel_basis, h)
    })?;
    if let Some(chain) = &report.constrained.jordan_chain {
        out.write("jordan_chain.csv", |w, h| {
            write_vectors_csv(w, &[chain.lead.clone(), chain.eigvec.clone()], h)
        })?;
    }
    println!("charpoly {}", report.binomial);
    match report.identity_holds() {
        Some(true) => println!("binomial identity PASS"),
        Some(false) => println!("binomial identity FAIL"),
        None => println!(
            "binomial identity SKIPPED (size {} > {EXACT_SIZE_LIMIT})",
            m + 1
        ),
    }
    println!("kernel dim L {}", report.unconstrained.kernel_dim);
    println!("kernel dim constrained {}", report.constrained.kernel_dim);
    println!(
        "zero multiplicity constrained {}",
        report.constrained.zero_multiplicity
    );
    if report.identity_holds() == Some(false) {
        return Err(CliError::Numerical(
            "direct and binomial polynomials differ".into(),
        ));
    }
    Ok(())
}

pub fn cmd_gradient_demo(args: &RunArgs) -> CliResult<()> {
    let mut out = Output::new("gradient-demo", args)?;
    if args.M.is_some() {
        return Err(CliError::Config(
            "gradient-demo works on sampled strategies; use --N".into(),
        ));
    }
    let args = RunArgs {
        N: Some(args.N.unwrap_or(4096)),
        ..args.clone()
    };
    let Initial::Sampled(f0) = initial_state(&args, &mut out, "parabola")? else {
        return Err(CliError::Config(
            "gradient-demo needs a sampled strategy (`x,value` file)".into(),
        ));
    };
    let epsilon = args.epsilon.unwrap_or(0.01);
    out.note(format!("epsilon {epsilon}"));
    let demo = gradient_demo(&f0, epsilon)?;
    out.write("gradient.csv", |w, h| {
        for line in h {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "x,f0,gradient,updated")?;
        for i in 0..demo.x.len() {
            writeln!(
                w,
                "{},{},{},{}",
                demo.x[i], demo.f0[i], demo.gradient[i], demo.updated[i]
            )?;
        }
        Ok(())
    })?;
    component_plot(
        &out,
        "gradient.svg",
        "strategy, constrained gradient and one Euler step",
        &demo.x,
        &[
            ("f0", &demo.f0),
            ("A f0", &demo.gradient),
            ("f0 + eps A f0", &demo.updated),
        ],
    )?;
    println!("gradient at x=2/3 {}", demo.gradient_at(2.0 / 3.0));
    if let Some(r) = args
        .r
        .or((args.preset.as_deref() == Some("tent")).then_some(0.75))
    {
        println!("gradient at x=r {}", demo.gradient_at(r));
    }
    println!(
        "negative points after update {}",
        demo.negative_points.len()
    );
    Ok(())
}
