//! Grid sweeps of a single subcommand over one or two parameters.

use abext_core::overlap::QuadratureConfig;
use clap::Parser;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::args::{Command, RowCli};
use crate::commands::execute;
use crate::report::{CliError, Report};

/// One swept parameter, `name=start:stop:count[:log]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid --vary `{spec}`: {why}"));
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| bad("expected name=start:stop:count"))?;
    let name = name.trim().trim_start_matches("--");
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
    {
        return Err(bad("parameter name"));
    }
    let parts: Vec<&str> = range.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3] == "log" => true,
        4 if parts[3] == "lin" => false,
        _ => return Err(bad("expected start:stop:count with optional :log")),
    };
    let start: f64 = parts[0].parse().map_err(|_| bad("start"))?;
    let stop: f64 = parts[1].parse().map_err(|_| bad("stop"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("count"))?;
    if !(start.is_finite() && stop.is_finite()) || count == 0 || count > 100_000 {
        return Err(bad("range must be finite with 1 <= count <= 100000"));
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(bad("log spacing needs positive bounds"));
    }
    let values = (0..count)
        .map(|k| {
            if k == 0 {
                return start;
            }
            if k == count - 1 {
                return stop;
            }
            let t = k as f64 / (count - 1) as f64;
            if log {
                // base 10 keeps decade grids on exact powers of ten
                10f64.powf(start.log10() + t * (stop.log10() - start.log10()))
            } else {
                start + t * (stop - start)
            }
        })
        .collect();
    Ok(Axis {
        name: name.to_string(),
        values,
    })
}

/// Text for a swept value that parses back to the same number; integral
/// values print without a fraction so integer flags accept them.
fn format_value(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

/// Replaces (or appends) `--name value` in a subcommand argv.
fn with_value(base: &[String], name: &str, value: &str) -> Vec<String> {
    let flag = format!("--{name}");
    let prefix = format!("{flag}=");
    let mut out = Vec::with_capacity(base.len() + 2);
    let mut skip_next = false;
    for arg in base {
        if skip_next {
            skip_next = false;
            continue;
        }
        if *arg == flag {
            skip_next = true;
            continue;
        }
        if arg.starts_with(&prefix) {
            continue;
        }
        out.push(arg.clone());
    }
    out.push(flag);
    out.push(value.to_string());
    out
}

pub struct Row {
    pub report: Report,
    pub error: Option<CliError>,
}

pub fn run_scan(
    vary: &[String],
    base: &[String],
    cfg: &QuadratureConfig,
) -> Result<(Vec<Axis>, Vec<Row>), CliError> {
    if vary.len() > 2 {
        return Err(CliError::Usage("scan sweeps at most two parameters".into()));
    }
    let axes: Vec<Axis> = vary
        .iter()
        .map(|s| parse_axis(s))
        .collect::<Result<_, _>>()?;
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(CliError::Usage(
            "the two swept parameters must differ".into(),
        ));
    }
    let mut points: Vec<Vec<f64>> = axes[0].values.iter().map(|&v| vec![v]).collect();
    if let Some(second) = axes.get(1) {
        points = points
            .into_iter()
            .flat_map(|p| {
                second
                    .values
                    .iter()
                    .map(move |&v| [p.clone(), vec![v]].concat())
            })
            .collect();
    }

    // parse every row first so that grammar errors fail the whole scan
    let commands: Vec<Command> = points
        .iter()
        .map(|point| {
            let mut argv = base.to_vec();
            for (axis, &v) in axes.iter().zip(point) {
                argv = with_value(&argv, &axis.name, &format_value(v));
            }
            let parsed =
                RowCli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
            if matches!(parsed.command, Command::Scan { .. }) {
                return Err(CliError::Usage("scan cannot be nested".into()));
            }
            Ok(parsed.command)
        })
        .collect::<Result<_, _>>()?;

    let rows = commands
        .par_iter()
        .map(|command| {
            let mut report = Report::default();
            let error = execute(command, cfg, &mut report).err();
            if error.is_some() {
                // a failed row keeps only its inputs, like a failed single run
                report.outputs.clear();
                report.diagnostics.clear();
            }
            Row { report, error }
        })
        .collect();
    Ok((axes, rows))
}

fn union_keys<'a>(maps: impl Iterator<Item = &'a Map<String, Value>>) -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    for map in maps {
        for key in map.keys() {
            if !keys.contains(key) {
                keys.push(key.clone());
            }
        }
    }
    keys
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// Header of input names, then output names, then `error`.
pub fn to_csv(rows: &[Row]) -> Result<String, CliError> {
    let inputs = union_keys(rows.iter().map(|r| &r.report.inputs));
    let outputs = union_keys(rows.iter().map(|r| &r.report.outputs));
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let header: Vec<&str> = inputs
        .iter()
        .chain(outputs.iter())
        .map(String::as_str)
        .chain(std::iter::once("error"))
        .collect();
    writer.write_record(&header).map_err(io)?;
    for row in rows {
        let mut record: Vec<String> = inputs
            .iter()
            .map(|k| cell(row.report.inputs.get(k)))
            .collect();
        record.extend(outputs.iter().map(|k| cell(row.report.outputs.get(k))));
        record.push(
            row.error
                .as_ref()
                .map(|e| e.kind().to_string())
                .unwrap_or_default(),
        );
        writer.write_record(&record).map_err(io)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_report(vary: &[String], base: &[String], rows: &[Row]) -> Report {
    let mut report = Report::default();
    report.input("vary", vary.to_vec());
    report.input("command", base.to_vec());
    let list: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert("inputs".into(), Value::Object(row.report.inputs.clone()));
            obj.insert("outputs".into(), Value::Object(row.report.outputs.clone()));
            let error = match &row.error {
                Some(e) => {
                    let mut err = Map::new();
                    err.insert("error".into(), e.kind().into());
                    err.insert("message".into(), e.to_string().into());
                    Value::Object(err)
                }
                None => Value::Null,
            };
            obj.insert("error".into(), error);
            Value::Object(obj)
        })
        .collect();
    report.output("rows", list);
    report.diagnostic("points", rows.len() as u64);
    report.diagnostic(
        "failed",
        rows.iter().filter(|r| r.error.is_some()).count() as u64,
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes() {
        let a = parse_axis("rho0=1e-4:1e-1:4:log").unwrap();
        assert_eq!(a.name, "rho0");
        assert_eq!(a.values.len(), 4);
        assert_eq!(a.values[0], 1e-4);
        assert_eq!(a.values[3], 1e-1);
        assert_eq!(a.values[1], 1e-3);
        assert_eq!(a.values[2], 1e-2);
        let a = parse_axis("l=-1:2:4").unwrap();
        assert_eq!(a.values, vec![-1.0, 0.0, 1.0, 2.0]);
        assert!(parse_axis("l=0:1").is_err());
        assert!(parse_axis("x=-1:1:3:log").is_err());
    }

    #[test]
    fn values_round_trip() {
        for x in [0.1, 1e-300, 3.0, -2.0, 1.0 / 3.0, 12345.678] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_value(-2.0), "-2");
    }

    #[test]
    fn substitution() {
        let base: Vec<String> = ["gfactor", "--alpha", "1", "--rho0=0.5"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let out = with_value(&base, "rho0", "0.25");
        assert_eq!(out, ["gfactor", "--alpha", "1", "--rho0", "0.25"]);
        let out = with_value(&base, "alpha", "2");
        assert_eq!(out, ["gfactor", "--rho0=0.5", "--alpha", "2"]);
    }
}
