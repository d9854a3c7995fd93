use aacc::attack::averaging_attack;
use aacc::concat::{concatenate, decompose};
use aacc::props::{code_rate, CheckConfig, Checker, Property};
use aacc::scaling::{self, ScalingConfig};
use aacc::search::{search, SearchConfig, SearchMode};
use aacc::specsim::{simulate, write_signal, EmbeddingParams};
use aacc::trace::{soft_trace, two_stage_trace, TraceStep};
use aacc::{serialize_code, IndexSet, TraceOutcome, VERSION};
use serde_json::{json, Value};

use crate::args::{
    AttackArgs, BenchArgs, Cli, Command, ConcatArgs, SearchArgs, SimulateArgs, TraceArgs,
    VerifyArgs,
};
use crate::io::{read_code, read_word, write_atomic};
use crate::{CliError, Outcome, Status};

const ALL_PROPERTIES: [&str; 6] = ["fpc", "sc", "scld", "ssc", "smippc", "udc"];

/// Runs one command, writing its payload to `--out` or stdout.
pub fn run(cli: Cli) -> Result<Status, CliError> {
    let (outcome, out) = match cli.command {
        Command::Verify(a) => (verify(&a)?, a.output.out),
        Command::Attack(a) => (attack(&a)?, a.output.out),
        Command::Trace(a) => (trace(&a)?, a.output.out),
        Command::Concat(a) => (concat(&a)?, a.output.out),
        Command::Search(a) => (search_cmd(&a)?, a.output.out),
        Command::Simulate(a) => (simulate_cmd(&a)?, a.output.out),
        Command::Bench(a) => (bench(&a)?, a.output.out),
    };
    match out {
        Some(path) => write_atomic(&path, outcome.body.as_bytes())?,
        None => print!("{}", outcome.body),
    }
    Ok(outcome.status)
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn index_set(indices: &[usize]) -> Result<IndexSet, CliError> {
    Ok(IndexSet::new(indices.iter().copied())?)
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    if a.t == 0 {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    let list_cap = a.list_cap.unwrap_or(code.m());
    let required: Vec<String> = if a.properties.is_empty() {
        ALL_PROPERTIES.iter().map(|s| s.to_string()).collect()
    } else {
        a.properties
            .iter()
            .map(|s| s.to_ascii_lowercase())
            .collect()
    };
    for p in &required {
        Property::parse(p, list_cap)?;
    }
    let checker = Checker::with_config(
        &code,
        CheckConfig {
            budget: a.budget,
            ..CheckConfig::default()
        },
    );
    let mut verdicts = serde_json::Map::new();
    let mut all_hold = true;
    for name in ALL_PROPERTIES {
        let verdict = checker.check(Property::parse(name, list_cap)?, a.t)?;
        if required.iter().any(|r| r == name) && !verdict.holds {
            all_hold = false;
        }
        verdicts.insert(
            name.into(),
            serde_json::to_value(&verdict).expect("verdict"),
        );
    }
    let report = json!({
        "version": VERSION,
        "code": { "n": code.n(), "m": code.m(), "q": code.q() },
        "t": a.t,
        "list_cap": list_cap,
        "budget": a.budget,
        "rate": code_rate(&code),
        "required": required,
        "holds": all_hold,
        "verdicts": verdicts,
    });
    Ok(Outcome {
        body: json_body(&report),
        status: if all_hold {
            Status::Ok
        } else {
            Status::PropertyFails
        },
    })
}

fn attack(a: &AttackArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    let x = averaging_attack(&code, &index_set(&a.colluders)?)?;
    Ok(Outcome {
        body: json_body(&serde_json::to_value(&x).expect("word")),
        status: Status::Ok,
    })
}

fn steps_json(steps: &[TraceStep]) -> Value {
    steps
        .iter()
        .map(|s| {
            json!({
                "residual": s.residual.to_string(),
                "descendant": s.descendant,
                "suspects": s.suspects,
                "found": s.found,
            })
        })
        .collect()
}

fn trace(a: &TraceArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    let x = read_word(&a.word)?;
    if a.t_cap == 0 {
        return Err(CliError::Usage("--t-cap must be at least 1".into()));
    }
    let outcome: TraceOutcome<IndexSet> = if a.two_stage {
        let (outer, inner) = match (&a.n1, &a.outer, &a.inner) {
            (Some(n1), None, None) => decompose(&code, *n1)?,
            (None, Some(o), Some(i)) => {
                let (outer, inner) = (read_code(o)?, read_code(i)?);
                if concatenate(&outer, &inner)? != code {
                    return Err(CliError::Usage(
                        "--code is not the concatenation of --outer and --inner".into(),
                    ));
                }
                (outer, inner)
            }
            _ => {
                return Err(CliError::Usage(
                    "--two-stage needs --n1 or both --outer and --inner".into(),
                ))
            }
        };
        two_stage_trace(&outer, &inner, &x, a.t_cap)?
    } else {
        soft_trace(&code, &x, a.t_cap)?
    };
    let mut report = serde_json::to_value(&outcome).expect("outcome");
    if a.steps {
        report["steps"] = steps_json(&outcome.steps);
    }
    Ok(Outcome {
        body: json_body(&report),
        status: if outcome.is_success() {
            Status::Ok
        } else {
            Status::ConditionsViolated
        },
    })
}

fn concat(a: &ConcatArgs) -> Result<Outcome, CliError> {
    let code = concatenate(&read_code(&a.outer)?, &read_code(&a.inner)?)?;
    Ok(Outcome {
        body: serialize_code(&code),
        status: Status::Ok,
    })
}

fn search_cmd(a: &SearchArgs) -> Result<Outcome, CliError> {
    let property = Property::parse(&a.property, 0)?;
    if matches!(property, Property::Scld { .. }) {
        return Err(CliError::Usage(
            "search supports fpc, sc, ssc, smippc and udc".into(),
        ));
    }
    let mut cfg = if a.exhaustive {
        SearchConfig::exhaustive(a.n, a.q, a.t, property)
    } else {
        let seed = a
            .seed
            .ok_or_else(|| CliError::Usage("greedy search needs --seed".into()))?;
        SearchConfig::greedy(a.n, a.q, a.t, property, seed)
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    cfg.trials = a.trials;
    cfg.node_budget = a.node_budget;
    cfg.check.budget = a.budget;
    let report = search(&cfg)?;
    if let Some(path) = &a.code_out {
        write_atomic(path, serialize_code(&report.code).as_bytes())?;
    }
    let partial = cfg.mode == SearchMode::Exhaustive && !report.optimal;
    let body = json!({
        "version": VERSION,
        "trials": cfg.trials,
        "node_budget": cfg.node_budget,
        "budget": cfg.check.budget,
        "report": report,
    });
    Ok(Outcome {
        body: json_body(&body),
        status: if partial {
            Status::BudgetExceeded
        } else {
            Status::Ok
        },
    })
}

fn simulate_cmd(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let code = read_code(&a.code)?;
    let colluders = index_set(&a.colluders)?;
    let params = EmbeddingParams::new(a.dim, a.alpha, a.seed)?.with_noise(a.noise)?;
    let t_max = a.t_max.unwrap_or(colluders.len() as u64);
    let sim = simulate(&code, &colluders, &params, t_max, a.tol)?;
    if let Some(path) = &a.signal_out {
        let mut bytes = Vec::new();
        write_signal(&mut bytes, &sim.signal)?;
        write_atomic(path, &bytes)?;
    }
    let body = json!({
        "version": VERSION,
        "t_max": t_max,
        "tol": a.tol,
        "exact": sim.exact(),
        "recovered_text": sim.recovered.to_string(),
        "simulation": sim,
    });
    Ok(Outcome {
        body: json_body(&body),
        status: if sim.exact() {
            Status::Ok
        } else {
            Status::PropertyFails
        },
    })
}

fn bench(a: &BenchArgs) -> Result<Outcome, CliError> {
    let cfg = ScalingConfig {
        n: a.n,
        t: a.t,
        sizes: a.sizes.clone(),
        attacks: a.attacks,
        reps: a.reps,
        seed: a.seed,
    };
    let report = scaling::run(&cfg)?;
    let body = json!({
        "version": VERSION,
        "max_ratio": report.max_ratio(),
        "report": report,
    });
    Ok(Outcome {
        body: json_body(&body),
        status: Status::Ok,
    })
}
