use std::fs;
use std::io::Write;
use std::path::Path;

use scalecalc_core::fmt::sig;
use scalecalc_core::fourier::{analyze, sobolev_report};
use scalecalc_core::growth::star;
use scalecalc_core::scale::{invariant_table, locally_isomorphic, Certificate, Decision};
use scalecalc_core::spectral::{enumerate_spectrum, weyl_fit};
use scalecalc_core::{CircleFunction, GrowthClass};
use serde_json::json;

use crate::args::{Cli, Command, Format};
use crate::output::{write_csv, write_json, write_table};
use crate::{specs, verify, CliError, Status};

type Out<'a> = &'a mut dyn Write;

/// Rows rendered as a table or CSV, or `json` for JSON.
fn emit<T: serde::Serialize>(
    out: Out,
    format: Format,
    headers: &[&str],
    rows: &[Vec<String>],
    json: &T,
) -> Result<(), CliError> {
    match format {
        Format::Table => write_table(out, headers, rows),
        Format::Csv => write_csv(out, headers, rows),
        Format::Json => write_json(out, json),
    }
}

fn class_name(c: &GrowthClass) -> String {
    format!("[μ^{}]", sig(c.exponent))
}

pub fn run(cli: &Cli, out: Out) -> Result<Status, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Spectrum { model, count } => {
            let s = enumerate_spectrum(specs::model(model)?, *count as usize)?;
            match format {
                Format::Csv => s.write_csv(out)?,
                Format::Json => write_json(out, &s)?,
                Format::Table => {
                    let rows: Vec<Vec<String>> = s
                        .expanded()
                        .enumerate()
                        .map(|(i, v)| {
                            let m = s.level_multiplicity(i + 1).unwrap_or_default();
                            vec![(i + 1).to_string(), sig(v), m.to_string()]
                        })
                        .collect();
                    write_table(out, &["rank", "eigenvalue", "multiplicity"], &rows)?;
                }
            }
        }
        Command::Fit { model, count, tail } => {
            let m = specs::model(model)?;
            let s = enumerate_spectrum(m, *count as usize)?;
            let fit = weyl_fit(&s, *tail)?;
            let row = vec![
                m.to_string(),
                fit.count.to_string(),
                sig(fit.tail_fraction),
                sig(fit.exponent),
                sig(m.weyl_exponent()),
                sig(fit.constant),
                sig(fit.residual),
            ];
            let json = json!({ "model": m.to_string(), "expected_q": m.weyl_exponent(), "fit": fit });
            emit(out, format, &["model", "count", "tail", "q", "expected_q", "C", "residual"], &[row], &json)?;
        }
        Command::Star { left, right, count, materialize } => {
            let f = specs::growth(left, *materialize as usize)?;
            let h = specs::growth(right, *materialize as usize)?;
            let merged = star(&f, &h, *count as usize)?;
            match format {
                Format::Csv => merged.write_csv(out)?,
                _ => {
                    let rows: Vec<Vec<String>> = merged
                        .values()
                        .iter()
                        .zip(merged.origins())
                        .enumerate()
                        .map(|(i, (v, (src, nu)))| {
                            vec![(i + 1).to_string(), sig(*v), src.name().to_string(), nu.to_string()]
                        })
                        .collect();
                    let origins: Vec<_> = merged
                        .origins()
                        .iter()
                        .map(|(src, nu)| json!({ "source": src.name(), "index": nu }))
                        .collect();
                    let json = json!({
                        "left": left,
                        "right": right,
                        "values": merged.values(),
                        "origins": origins,
                        "tail": merged.tail().map(|t| json!({ "a": t.coefficient, "p": t.exponent })),
                    });
                    emit(out, format, &["index", "value", "source", "slot"], &rows, &json)?;
                }
            }
        }
        Command::Invariant { space, j_max, entry } => {
            let model = specs::scale_space(space)?;
            let table = invariant_table(&model, *j_max)?;
            let entries: Vec<(u32, u32, GrowthClass)> = match entry {
                Some((i, j)) => vec![(*i, *j, table.get(*i, *j).map_err(|e| CliError::Usage(e.to_string()))?)],
                None => table.entries().collect(),
            };
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|(i, j, c)| vec![i.to_string(), j.to_string(), sig(c.exponent), class_name(c)])
                .collect();
            let json = match entry {
                Some(_) => {
                    let (i, j, c) = entries[0];
                    json!({ "space": model.label, "i": i, "j": j, "exponent": c.exponent })
                }
                None => json!({ "space": model.label, "table": table }),
            };
            emit(out, format, &["i", "j", "exponent", "class"], &rows, &json)?;
        }
        Command::Isom { left, right } => {
            let (a, b) = (specs::scale_space(left)?, specs::scale_space(right)?);
            let verdict = locally_isomorphic(&a, &b);
            let decision = match verdict.decision {
                Decision::Isomorphic => "isomorphic",
                Decision::NotIsomorphic => "not isomorphic",
                Decision::Undecided => "undecided",
            };
            let (lc, rc, note) = match &verdict.certificate {
                Certificate::SharedClass { class } => (class_name(class), class_name(class), String::new()),
                Certificate::DifferingInvariant { left, right } => (
                    class_name(left),
                    class_name(right),
                    format!("(0,1) entries differ: {} vs {}", sig(left.exponent), sig(right.exponent)),
                ),
                Certificate::Undecided { reason, .. } => ("?".into(), "?".into(), reason.clone()),
            };
            match format {
                Format::Json => {
                    write_json(out, &json!({ "left": a.label, "right": b.label, "verdict": verdict }))?
                }
                Format::Csv => write_csv(
                    out,
                    &["left", "right", "left_class", "right_class", "decision"],
                    &[vec![a.label.clone(), b.label.clone(), lc, rc, decision.into()]],
                )?,
                Format::Table => {
                    writeln!(out, "{decision}")?;
                    writeln!(out, "  {}  {lc}", a.label)?;
                    writeln!(out, "  {}  {rc}", b.label)?;
                    if !note.is_empty() {
                        writeln!(out, "  {note}")?;
                    }
                }
            }
            if !verdict.is_isomorphic() {
                return Ok(Status::Negative);
            }
        }
        Command::Sobolev { samples, max_frequency, k_max, coefficients } => {
            let u = CircleFunction::samples(read_samples(samples)?)?;
            if *coefficients {
                let c = analyze(&u, *max_frequency)?;
                match format {
                    Format::Json => write_json(out, &c)?,
                    Format::Csv => c.write_csv(out)?,
                    Format::Table => {
                        let rows: Vec<Vec<String>> = c
                            .iter()
                            .map(|(m, v)| {
                                vec![m.index().to_string(), m.type_name().into(), m.frequency().to_string(), sig(v)]
                            })
                            .collect();
                        write_table(out, &["mode", "type", "frequency", "value"], &rows)?;
                    }
                }
            } else {
                let r = sobolev_report(&u, *k_max, *max_frequency)?;
                let rows: Vec<Vec<String>> = r
                    .levels
                    .iter()
                    .map(|l| vec![l.k.to_string(), sig(l.derivative_norm), sig(l.weight_norm), sig(l.ratio)])
                    .collect();
                emit(out, format, &["k", "derivative_norm", "weight_norm", "ratio"], &rows, &r)?;
            }
        }
        Command::Verify(args) => {
            let report = verify::run(args)?;
            report.write(out, format)?;
            if let Some(first) = report.first_failure() {
                eprintln!(
                    "verification failed: {}: measured {}, target {}. {}",
                    first.property,
                    sig(first.measured),
                    sig(first.target),
                    first.detail
                );
                return Ok(Status::Negative);
            }
        }
    }
    Ok(Status::Ok)
}

/// One sample per line; blank lines and `#` comments are skipped.
fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{}: sample {} is `{l}`", path.display(), i + 1)))
        })
        .collect()
}
