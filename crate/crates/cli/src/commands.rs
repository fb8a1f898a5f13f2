use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use spinmediate::geometry::Layout;
use spinmediate::logical::decoupling_schedule;
use spinmediate::noise::{noisy_fidelity, Estimator, NoisyGateSequence, PositionNoiseModel, ReproduceOptions, TableId};
use spinmediate::pattern::{
    compile_flip_schedule, discretized_robust_solve, max_coupling, regions_at_targets, solve_pattern_with,
    taylor_robust_solve, InteractionPattern, RegionMethod, Selection, SubspaceVector,
};
use spinmediate::presets;
use spinmediate::protocols::{run_protocol, Branching, Device, Mode, ProtocolSpec};

use crate::args::*;
use crate::error::CliError;
use crate::parse;

type Result<T> = std::result::Result<T, CliError>;

/// Tolerance for calling a noiseless protocol run a match.
pub const PROTOCOL_TOL: f64 = 1e-9;

/// One artifact set: `<stem>.json`, optional `<stem>.csv`, and extra files.
#[derive(Debug, Clone)]
pub struct Report {
    pub stem: String,
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
    pub extra: Vec<(String, String)>,
    /// False when a reproduction misses its tolerance.
    pub pass: bool,
}

impl Report {
    fn new(stem: &str, json: Value, text: String) -> Self {
        Report {
            stem: stem.to_string(),
            json,
            csv: None,
            text,
            extra: Vec::new(),
            pass: true,
        }
    }
}

fn config_value<T: Serialize>(command: &str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        // Where artifacts go does not change them.
        m.retain(|k, x| !x.is_null() && k != "out" && k != "format");
        m.insert("command".into(), json!(command));
    }
    v
}

/// Short decimal form: up to ten places, trailing zeros dropped.
pub fn num(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn nums(xs: &[f64]) -> String {
    format!("({})", xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", "))
}

struct Loaded {
    name: String,
    layout: Layout,
    gate_time: Option<f64>,
}

fn load_layout(args: &LayoutArgs, default: Option<&str>) -> Result<Loaded> {
    match (&args.preset, &args.layout) {
        (Some(_), Some(_)) => Err(CliError::Config("give either a preset or a layout file".into())),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            Ok(Loaded {
                name: path.display().to_string(),
                layout: Layout::from_json(&text)?,
                gate_time: None,
            })
        }
        (preset, None) => {
            let name = preset
                .as_deref()
                .or(default)
                .ok_or_else(|| CliError::Config("a --preset or --layout is required".into()))?;
            let p = presets::preset(name)?;
            Ok(Loaded {
                name: p.name.to_string(),
                layout: p.layout,
                gate_time: p.gate_time,
            })
        }
    }
}

fn pattern(s: &str) -> Result<InteractionPattern> {
    Ok(InteractionPattern::new(parse::floats(s)?)?)
}

fn required<'a>(v: &'a Option<String>, flag: &str, what: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Config(format!("{what} needs --{flag}")))
}

pub fn solve(a: &SolveArgs) -> Result<Report> {
    let loaded = load_layout(&a.layout, None)?;
    let layout = &loaded.layout;
    let target = pattern(required(&a.pattern, "pattern", "solve")?)?;
    let selection = match a.selection {
        Some(SelectionArg::MaxCoupling) => Selection::MaxCoupling,
        _ => Selection::MinNorm,
    };
    let f = layout.coupling_matrix();
    let method = a.region.as_deref().map(|r| parse::region(r, layout.dim())).transpose()?;
    let v = match &method {
        None | Some(RegionMethod::Point) => solve_pattern_with(&f, &target, selection)?,
        Some(m @ RegionMethod::Taylor { .. }) => {
            taylor_robust_solve(layout, &regions_at_targets(layout, m), &target, selection)?
        }
        Some(m @ RegionMethod::Discretize { .. }) => {
            discretized_robust_solve(layout, &regions_at_targets(layout, m), &target, selection)?
        }
    };
    let lambda_max = max_coupling(&f, &target).ok();
    let realized = f.pattern(v.c());
    let json = json!({
        "config": config_value("solve", a),
        "layout": loaded.name,
        "pattern": target.lambdas(),
        "c": v.c(),
        "scale": v.scale(),
        "coupling_gain": v.coupling_gain(),
        "realized_pattern": realized,
        "lambda_max": lambda_max,
    });
    let mut text = String::new();
    let _ = writeln!(text, "layout           {}", loaded.name);
    let _ = writeln!(text, "c                {}", nums(v.c()));
    let _ = writeln!(text, "realized pattern {}", nums(&realized));
    let _ = writeln!(text, "coupling gain    {}", num(v.coupling_gain()));
    if let Some(l) = lambda_max {
        let _ = writeln!(text, "lambda_max       {}", num(l));
    }
    let mut r = Report::new("solve", json, text);
    r.csv = Some(format!(
        "control,c\n{}",
        v.c().iter().enumerate().map(|(i, c)| format!("{},{c}\n", i + 1)).collect::<String>()
    ));
    Ok(r)
}

pub fn compile_flips(a: &CompileFlipsArgs) -> Result<Report> {
    let loaded = load_layout(&a.layout, None)?;
    let tau = a.tau.unwrap_or(1.0);
    if a.decouple {
        let d = decoupling_schedule(loaded.layout.n_controls(), tau)?;
        let json = json!({
            "config": config_value("compile-flips", a),
            "layout": loaded.name,
            "levels": d.levels,
            "flip_count": d.schedule.flip_count(),
            "cancels_external": d.cancels_external,
            "schedule": d.schedule,
        });
        let text = format!(
            "decoupling {} controls: {} levels, {} flips over {}\n",
            loaded.layout.n_controls(),
            d.levels,
            d.schedule.flip_count(),
            num(d.schedule.duration())
        );
        return Ok(Report::new("compile-flips", json, text));
    }
    let v = match (&a.vector, &a.pattern) {
        (Some(c), None) => SubspaceVector::new(parse::floats(c)?, 1.0)?,
        (None, Some(p)) => solve_pattern_with(&loaded.layout.coupling_matrix(), &pattern(p)?, Selection::MinNorm)?,
        _ => return Err(CliError::Config("compile-flips needs exactly one of --vector, --pattern".into())),
    };
    if v.c().len() != loaded.layout.n_controls() {
        return Err(CliError::Config(format!(
            "vector has {} entries for {} controls",
            v.c().len(),
            loaded.layout.n_controls()
        )));
    }
    let s = compile_flip_schedule(&v, tau)?;
    let effective = s.effective_vector();
    let json = json!({
        "config": config_value("compile-flips", a),
        "layout": loaded.name,
        "c": v.c(),
        "tau": tau,
        "flip_count": s.flip_count(),
        "effective_vector": effective,
        "schedule": s,
    });
    let mut text = format!("c {}\n{} flips over {}\n", nums(v.c()), s.flip_count(), num(tau));
    let mut csv = String::from("t,control\n");
    for e in s.events() {
        let _ = writeln!(text, "  t = {:<14} flip control {}", num(e.t), e.qubit + 1);
        let _ = writeln!(csv, "{},{}", e.t, e.qubit + 1);
    }
    let mut r = Report::new("compile-flips", json, text);
    r.csv = Some(csv);
    Ok(r)
}

fn protocol_spec(a: &RunArgs, n: usize) -> Result<ProtocolSpec> {
    let name = a
        .protocol
        .ok_or_else(|| CliError::Config("run needs --protocol".into()))?;
    let all: Vec<usize> = (0..n).collect();
    let list = |v: &Option<String>| -> Result<Vec<usize>> {
        v.as_deref().map(parse::indices).transpose().map(|x| x.unwrap_or_else(|| all.clone()))
    };
    let pair = || -> Result<(usize, usize)> { a.pair.as_deref().map(parse::pair).unwrap_or(Ok((0, 1))) };
    Ok(match name {
        ProtocolName::GateSequence => ProtocolSpec::GateSequence {
            subset: list(&a.subset)?,
            omega: a.omega.unwrap_or(FRAC_PI_4),
        },
        ProtocolName::Synthesis => ProtocolSpec::Synthesis {
            table: parse::phases(required(&a.phases, "phases", "synthesis")?, n)?,
        },
        ProtocolName::MeasurementCz => ProtocolSpec::MeasurementCz {
            subset: list(&a.subset)?,
        },
        ProtocolName::Graph => ProtocolSpec::Graph {
            edges: parse::edges(required(&a.edges, "edges", "graph")?)?,
        },
        ProtocolName::DfGhz => ProtocolSpec::DfGhz { order: list(&a.order)? },
        ProtocolName::ControlRotation => ProtocolSpec::ControlRotation {
            pair: pair()?,
            phi: a.phi.unwrap_or(FRAC_PI_4),
            trotter_steps: a.trotter_steps,
        },
        ProtocolName::ControlRotationThree => {
            let t = list(&a.triple)?;
            let triple: [usize; 3] = t
                .try_into()
                .map_err(|_| CliError::Config("--triple takes three targets".into()))?;
            ProtocolSpec::ControlRotationThree { triple }
        }
        ProtocolName::AlternatingBell => ProtocolSpec::AlternatingBell { pair: pair()? },
        ProtocolName::Commutator => ProtocolSpec::Commutator {
            lambda: parse::floats(required(&a.lambda, "lambda", "commutator")?)?,
            mu: parse::floats(required(&a.mu, "mu", "commutator")?)?,
            time: a.time.unwrap_or(0.1),
            cycles: a.cycles.unwrap_or(100),
        },
        ProtocolName::SelfInteraction => ProtocolSpec::SelfInteraction {
            time: a.time.unwrap_or(1.0),
            modular: !a.non_modular,
        },
    })
}

pub fn run(a: &RunArgs) -> Result<Report> {
    let loaded = load_layout(&a.layout, None)?;
    let mut device = Device::from_layout(&loaded.name, &loaded.layout)?;
    if let Some(t) = loaded.gate_time {
        device.timing = device.timing.with_logical_gate(t);
    }
    if let Some(w) = a.drive {
        device = device.clone().with_timing(device.timing.with_drive(w))?;
    }
    device = device.with_target_self(a.target_self);
    let spec = protocol_spec(a, device.n_targets())?;
    let forced = a.outcomes.as_deref().map(parse::outcomes).transpose()?;
    let modes: &[Mode] = match a.mode.unwrap_or(ModeArg::Both) {
        ModeArg::Logical => &[Mode::Logical],
        ModeArg::Physical => &[Mode::Physical],
        ModeArg::Both => &[Mode::Logical, Mode::Physical],
    };
    let mut runs = Vec::new();
    let mut text = format!("{} on {}\n", spec.name(), loaded.name);
    let mut extra = Vec::new();
    for &mode in modes {
        let branching = match (&forced, a.seed) {
            (Some(o), _) => Branching::forced(o.iter().copied()),
            (None, Some(seed)) => Branching::seeded(seed),
            (None, None) => Branching::forced([]),
        };
        let r = run_protocol(&device, mode, branching, &spec)?;
        let stabilizers_ok = r
            .stabilizers
            .as_ref()
            .map_or(true, |s| s.iter().all(|x| *x >= 1.0 - PROTOCOL_TOL));
        let matches = r.fidelity >= 1.0 - PROTOCOL_TOL && stabilizers_ok;
        let label = match mode {
            Mode::Logical => "logical",
            Mode::Physical => "physical",
        };
        let _ = writeln!(
            text,
            "  {label:<9} fidelity {:.12}  {}  time {}  flips {}",
            r.fidelity,
            if matches { "matches ideal" } else { "DIFFERS from ideal" },
            num(r.trace.elapsed),
            r.trace.total_flips()
        );
        if let Some(s) = &r.stabilizers {
            let _ = writeln!(text, "            stabilizers {}", nums(s));
        }
        if let Some(s) = &r.spins {
            let _ = writeln!(text, "            spins {s:?}");
        }
        let l = &r.ledger;
        let _ = writeln!(
            text,
            "            flips: pattern {} logical {} correction {} idle {} readout {}; bounds hold: {}",
            l.eta_lambda,
            l.eta_logical,
            l.eta_correction,
            l.eta_idle,
            l.eta_readout,
            l.bound_check.all_hold()
        );
        extra.push((format!("trace_{label}.json"), r.trace.to_json()));
        let mut v = serde_json::to_value(&r)?;
        v["mode"] = json!(label);
        v["matches_ideal"] = json!(matches);
        runs.push(v);
    }
    let json = json!({
        "config": config_value("run", a),
        "layout": loaded.name,
        "protocol": spec,
        "runs": runs,
    });
    let mut r = Report::new("run", json, text);
    r.extra = extra;
    Ok(r)
}

pub fn noise(a: &NoiseArgs) -> Result<Report> {
    let loaded = load_layout(&a.layout, Some("cross7"))?;
    let layout = loaded.layout;
    let n = layout.n_targets();
    let c = match (&a.vector, &a.pattern) {
        (Some(v), _) => parse::floats(v)?,
        (None, p) => {
            let target = match p {
                Some(p) => pattern(p)?,
                None => InteractionPattern::indicator(n, &[0, 1])?,
            };
            solve_pattern_with(&layout.coupling_matrix(), &target, Selection::MinNorm)?
                .c()
                .to_vec()
        }
    };
    let sigmas = parse::floats(a.sigma.as_deref().unwrap_or("0.15,0.1,0.05,0.01"))?;
    let method = match a.method.unwrap_or(MethodArg::Quadrature) {
        MethodArg::Quadrature => Estimator::GaussHermite {
            points: a.points.unwrap_or(9),
        },
        MethodArg::MonteCarlo => Estimator::MonteCarlo {
            samples: a.samples.unwrap_or(100_000),
            seed: a
                .seed
                .ok_or_else(|| CliError::Config("monte-carlo sampling needs --seed".into()))?,
        },
    };
    let protocol = NoisyGateSequence::bell(layout, c.clone())?;
    let mut rows = Vec::new();
    let mut csv = String::from("sigma,fidelity,std_error\n");
    let mut text = format!("two-target Bell preparation on {}, c = {}\n", loaded.name, nums(&c));
    for &sigma in &sigmas {
        let model = PositionNoiseModel::new(sigma)?;
        let est = noisy_fidelity(&protocol, &model, &protocol.target(), &protocol.keep(), &method)?;
        let _ = writeln!(csv, "{sigma},{},{}", est.fidelity, est.std_error);
        let _ = writeln!(text, "  sigma {:<8} F = {:.6}  (std error {:.1e})", num(sigma), est.fidelity, est.std_error);
        rows.push(json!({ "sigma": sigma, "fidelity": est.fidelity, "std_error": est.std_error }));
    }
    let json = json!({
        "config": config_value("noise", a),
        "layout": loaded.name,
        "c": c,
        "time": protocol.time,
        "estimator": method,
        "rows": rows,
    });
    let mut r = Report::new("noise", json, text);
    r.csv = Some(csv);
    Ok(r)
}

pub fn reproduce(a: &ReproduceArgs) -> Result<Vec<Report>> {
    let which = a
        .table
        .as_deref()
        .ok_or_else(|| CliError::Config("reproduce needs a table: table1, table2, table3, appG, appH or all".into()))?;
    let ids: Vec<TableId> = if which.eq_ignore_ascii_case("all") {
        TableId::ALL.to_vec()
    } else {
        vec![which.parse::<TableId>().map_err(|e| CliError::Config(e.to_string()))?]
    };
    if a.samples.is_some() && a.seed.is_none() {
        return Err(CliError::Config("monte-carlo rows need --seed".into()));
    }
    let opts = ReproduceOptions {
        points: a.points.unwrap_or(9),
        mc_samples: a.samples,
        seed: a.seed.unwrap_or(0),
    };
    let mut out = Vec::new();
    for id in ids {
        let report = spinmediate::noise::reproduce_table(id, &opts)?;
        let json = json!({ "config": config_value("reproduce", a), "table": report });
        let passed = report.rows.iter().filter(|r| r.pass).count();
        let text = format!(
            "{}: {passed}/{} within tolerance\n{}",
            id.as_str(),
            report.rows.len(),
            report.summary()
        );
        let mut r = Report::new(id.as_str(), json, text);
        r.csv = Some(report.to_csv());
        r.pass = report.all_pass();
        out.push(r);
    }
    Ok(out)
}

pub fn list_presets(a: &ListArgs) -> Result<Report> {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("name,dim,controls,targets,gate_time,description\n");
    for name in presets::NAMES {
        let p = presets::preset(name)?;
        let l = &p.layout;
        let _ = writeln!(
            text,
            "{:<11} {}D  {} controls  {} targets  {}",
            p.name,
            l.dim(),
            l.n_controls(),
            l.n_targets(),
            p.description
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},\"{}\"",
            p.name,
            l.dim(),
            l.n_controls(),
            l.n_targets(),
            p.gate_time.map(|t| t.to_string()).unwrap_or_default(),
            p.description
        );
        rows.push(json!({
            "name": p.name,
            "description": p.description,
            "dim": l.dim(),
            "controls": l.n_controls(),
            "targets": l.n_targets(),
            "gate_time": p.gate_time,
            "layout": serde_json::from_str::<Value>(&l.to_json())?,
        }));
    }
    let mut r = Report::new("presets", json!({ "config": config_value("list-presets", a), "presets": rows }), text);
    r.csv = Some(csv);
    Ok(r)
}
