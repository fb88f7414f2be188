//! The four subcommands.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use lwe_core::lwe::{
    gen_first_errorless_batch, gen_first_errorless_uniform, gen_lwe_batch, gen_secret, gen_uniform_batch, read_batch,
    read_challenge, write_batch, write_challenge,
};
use lwe_core::reductions::{compose_pipeline, Instance, ReductionReport, Shape};
use lwe_core::seed::SeedStream;
use lwe_core::stats::{fmt12, Report};
use lwe_core::Outcome;

use crate::config::Loaded;
use crate::suites::{run_criterion, suite_criteria, Criterion, Opts};
use crate::{Cli, CliError, Command, Format};

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?,
        None => String::new(),
    };
    let overrides = match &cli.command {
        Command::Sample { overrides }
        | Command::Reduce { overrides }
        | Command::Pipeline { overrides }
        | Command::Verify { overrides, .. } => overrides,
    };
    let mut loaded = Loaded::parse(&text, overrides)?;
    if let Some(s) = cli.seed {
        loaded.config.seed = Some(s);
    }
    // The embedded copy is the effective config, overrides included.
    loaded.source = toml::to_string(&loaded.config).map_err(|e| CliError::Config(e.to_string()))?;
    match &cli.command {
        Command::Sample { .. } => sample(cli, &loaded, stdout),
        Command::Reduce { .. } => {
            if loaded.config.stages.len() != 1 {
                return Err(CliError::Config(format!(
                    "reduce takes exactly one [[stage]], found {}",
                    loaded.config.stages.len()
                )));
            }
            pipeline(cli, &loaded, stdout)
        }
        Command::Pipeline { .. } => pipeline(cli, &loaded, stdout),
        Command::Verify { suite, .. } => verify(cli, &loaded, suite, stdout),
    }
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, data: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, data).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn emit(cli: &Cli, data: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => write_atomic(p, data),
        None => stdout
            .write_all(data.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}

fn generate(loaded: &Loaded, seeds: &SeedStream) -> Result<Instance, CliError> {
    let p = loaded.params()?;
    let c = &loaded.config;
    let mut rng = seeds.named("input").rng();
    let err = |e| loaded.core_error(e);
    let batch = match (c.uniform, c.first_errorless) {
        (true, false) => gen_uniform_batch(&p, &mut rng).map_err(err)?,
        (true, true) => gen_first_errorless_uniform(&p, &mut rng).map_err(err)?,
        (false, fe) => {
            let s = gen_secret(loaded.secret()?, p.n, &p.q, &mut rng).map_err(err)?;
            if fe {
                gen_first_errorless_batch(&p, &s, &mut rng).map_err(err)?
            } else {
                gen_lwe_batch(&p, &s, &mut rng).map_err(err)?
            }
        }
    };
    Ok(Instance::Lwe(batch))
}

fn sample(cli: &Cli, loaded: &Loaded, stdout: &mut dyn Write) -> Result<(), CliError> {
    let seeds = SeedStream::new(loaded.seed()?);
    let Instance::Lwe(batch) = generate(loaded, &seeds)? else {
        unreachable!("generate emits LWE batches")
    };
    let batch = if cli.transparent { batch } else { batch.opaque() };
    emit(cli, &write_batch(&batch), stdout)
}

fn load_input(loaded: &Loaded, seeds: &SeedStream) -> Result<Instance, CliError> {
    let Some(path) = &loaded.config.input else {
        return generate(loaded, seeds);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read input {}: {e}", path.display())))?;
    let located = |e: lwe_core::Error| CliError::Config(format!("input {}: {e}", path.display()));
    if text.starts_with("extlwe ") {
        let challenge = read_challenge(&text).map_err(located)?;
        Ok(Instance::ExtLwe {
            challenge,
            chi: loaded.noise()?,
        })
    } else {
        Ok(Instance::Lwe(read_batch(&text).map_err(located)?))
    }
}

fn pipeline(cli: &Cli, loaded: &Loaded, stdout: &mut dyn Write) -> Result<(), CliError> {
    let seeds = SeedStream::new(loaded.seed()?);
    let input = load_input(loaded, &seeds)?;
    let stages = loaded.stages()?;
    let (pipe, total) = compose_pipeline(stages, Shape::of(&input), loaded.eps()).map_err(|e| loaded.core_error(e))?;
    let outcome = pipe
        .run(input, &seeds.named("pipeline"))
        .map_err(|e| loaded.core_error(e))?;
    let mut report = render_header("pipeline", loaded, cli.format);
    let result = match outcome {
        Outcome::Done(run) => {
            let data = match run.output {
                Instance::Lwe(b) => write_batch(&if cli.transparent { b } else { b.opaque() }),
                Instance::ExtLwe { mut challenge, .. } => {
                    if !cli.transparent {
                        challenge.transparent = None;
                    }
                    write_challenge(&challenge)
                }
            };
            render_stages(&mut report, &run.reports, &total, cli.format);
            report.push_str(&status_line("done", cli.format));
            Ok(data)
        }
        Outcome::Aborted(a) => {
            render_stages(&mut report, &pipe.reports, &total, cli.format);
            let why = format!("{}: {}", a.step, a.reason);
            report.push_str(&status_line(&format!("abort ({why})"), cli.format));
            Err(CliError::Abort(why))
        }
    };
    match &cli.out {
        Some(p) => {
            let mut rp = p.as_os_str().to_owned();
            rp.push(".report");
            write_atomic(Path::new(&rp), &report)?;
            if let Ok(data) = &result {
                write_atomic(p, data)?;
            }
        }
        None => {
            let mut all = report;
            if let Ok(data) = &result {
                all.push_str(data);
            }
            emit(cli, &all, stdout)?;
        }
    }
    result.map(|_| ())
}

fn render_header(what: &str, loaded: &Loaded, format: Format) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# lwe-xform {what} report");
    let _ = writeln!(out, "# config:");
    for l in loaded.source.lines() {
        let _ = writeln!(out, "#   {l}");
    }
    if format == Format::Text {
        let _ = writeln!(out);
    }
    out
}

fn render_stages(out: &mut String, reports: &[ReductionReport], total: &ReductionReport, format: Format) {
    let extras = |r: &ReductionReport| {
        r.extra
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt12(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    match format {
        Format::Csv => {
            out.push_str("stage,step,input,output,noise,scale,loss,extra\n");
            for r in reports.iter().chain(std::iter::once(total)) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.stage,
                    r.step,
                    r.input,
                    r.output,
                    fmt12(r.noise),
                    fmt12(r.advantage.scale),
                    fmt12(r.advantage.loss),
                    extras(r)
                );
            }
        }
        Format::Text => {
            for (i, r) in reports.iter().enumerate() {
                let _ = writeln!(out, "stage {i}: {} ({})", r.stage, r.step);
                let _ = writeln!(out, "  {} -> {}", r.input, r.output);
                let _ = writeln!(
                    out,
                    "  noise {}  advantage {} * zeta - {}",
                    fmt12(r.noise),
                    fmt12(r.advantage.scale),
                    fmt12(r.advantage.loss)
                );
                if !r.extra.is_empty() {
                    let _ = writeln!(out, "  {}", extras(r));
                }
            }
            let _ = writeln!(
                out,
                "total: advantage {} * zeta - {}",
                fmt12(total.advantage.scale),
                fmt12(total.advantage.loss)
            );
        }
    }
}

fn status_line(status: &str, format: Format) -> String {
    match format {
        Format::Csv => format!("# status: {status}\n"),
        Format::Text => format!("status: {status}\n"),
    }
}

fn verify(cli: &Cli, loaded: &Loaded, suite: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ids = suite_criteria(suite).ok_or_else(|| {
        CliError::Config(format!(
            "unknown suite {suite:?} (expected gauss, reductions, hybrids or endtoend)"
        ))
    })?;
    let opts = Opts {
        seed: loaded.seed()?,
        quick: loaded.config.quick,
    };
    let mut out = render_header(&format!("verify {suite}"), loaded, cli.format);
    let mut report = Report::default();
    let mut crits = Vec::new();
    for &id in ids {
        let c = run_criterion(id, &opts).map_err(|e| loaded.core_error(e))?;
        if cli.format == Format::Text {
            let _ = writeln!(
                out,
                "# criterion {}: {} [{}]",
                c.id,
                c.title,
                if c.passed() { "pass" } else { "FAIL" }
            );
        }
        report.rows.extend(c.rows.iter().cloned());
        crits.push(c);
    }
    out.push_str(&match cli.format {
        Format::Text => {
            let mut t = String::from("\n");
            t.push_str(&report.to_text());
            t
        }
        Format::Csv => report.to_csv(),
    });
    emit(cli, &out, stdout)?;
    match first_failure(&crits) {
        Some(f) => Err(CliError::Acceptance(f)),
        None => Ok(()),
    }
}

/// Names the first failing row, in suite order.
pub fn first_failure(crits: &[Criterion]) -> Option<String> {
    crits.iter().find_map(|c| {
        c.rows
            .iter()
            .find(|r| r.pass == Some(false))
            .map(|r| format!("criterion {} ({}): {}", c.id, c.title, r.name))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lwe_core::stats::Row;

    fn row(name: &str, pass: Option<bool>) -> Row {
        Row {
            name: name.into(),
            check: String::new(),
            value: 0.0,
            ci: 0.0,
            bound: None,
            trials: 1,
            seed: 0,
            pass,
        }
    }

    #[test]
    fn first_failing_row_is_named() {
        let c = |id, rows| Criterion {
            id,
            title: "t",
            limit: std::time::Duration::from_secs(1),
            rows,
        };
        let crits = [
            c(1, vec![row("a", Some(true)), row("info", None)]),
            c(2, vec![row("b", Some(false)), row("c", Some(false))]),
        ];
        assert_eq!(first_failure(&crits).as_deref(), Some("criterion 2 (t): b"));
        assert_eq!(first_failure(&crits[..1]), None);
        let err = CliError::Acceptance(first_failure(&crits).unwrap());
        assert_eq!(err.exit_code(), 1);
    }
}
