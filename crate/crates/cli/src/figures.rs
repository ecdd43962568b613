//! Curve families of the result figures, ids 2 to 9.

use std::fs;
use std::path::{Path, PathBuf};

use plcrf_core::analytic::{AnalyticConfig, Metric};
use plcrf_core::channel::Protocol;

use crate::output::{fmt_num, write_table};
use crate::scenario::{Family, FamilyParam, RelaySection, Scenario, SweepRange, Variant};
use crate::sweep::{run_sweep, SweepResult};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub title: &'static str,
    pub protocols: Vec<Protocol>,
    pub metric: Metric,
    pub variants: Vec<Variant>,
    pub family: Family,
}

fn family(param: FamilyParam, values: &[f64]) -> Family {
    Family {
        param,
        values: values.to_vec(),
    }
}

const K_VALUES: [f64; 3] = [2.0, 4.0, 6.0];
const P_I_VALUES: [f64; 3] = [0.05, 0.2, 0.5];
const ETA_VALUES: [f64; 3] = [1.0, 5.0, 10.0];
const GAMMA_TH_VALUES: [f64; 3] = [0.0, 5.0, 10.0];

pub fn figure_spec(id: u8) -> Result<FigureSpec, CliError> {
    use Variant::*;
    let df = vec![Protocol::Df];
    let af = vec![Protocol::Af];
    let both = vec![Protocol::Df, Protocol::Af];
    let (title, protocols, metric, variants, fam) = match id {
        2 => ("Outage probability vs K (DF)", df, Metric::Op, vec![Exact, Asymptotic, MonteCarlo], family(FamilyParam::KDb, &K_VALUES)),
        3 => ("Outage probability vs P_i (AF)", af, Metric::Op, vec![Exact, MonteCarlo], family(FamilyParam::PI, &P_I_VALUES)),
        4 => (
            "Outage probability vs threshold (DF and AF)",
            both,
            Metric::Op,
            vec![Exact, MonteCarlo],
            family(FamilyParam::GammaThDb, &GAMMA_TH_VALUES),
        ),
        5 => ("BER vs K (DF)", df, Metric::Ber, vec![Exact, Asymptotic, MonteCarlo], family(FamilyParam::KDb, &K_VALUES)),
        6 => ("BER vs P_i (AF)", af, Metric::Ber, vec![Exact, MonteCarlo], family(FamilyParam::PI, &P_I_VALUES)),
        7 => ("BER vs eta (DF and AF)", both, Metric::Ber, vec![Exact, MonteCarlo], family(FamilyParam::Eta, &ETA_VALUES)),
        8 => ("Ergodic capacity vs K (DF)", df, Metric::Acc, vec![Exact, UpperBound, MonteCarlo], family(FamilyParam::KDb, &K_VALUES)),
        9 => ("Ergodic capacity vs P_i (AF)", af, Metric::Acc, vec![Exact, UpperBound, MonteCarlo], family(FamilyParam::PI, &P_I_VALUES)),
        _ => return Err(CliError::Usage(format!("figure id {id} is not in 2..=9"))),
    };
    Ok(FigureSpec {
        id,
        title,
        protocols,
        metric,
        variants,
        family: fam,
    })
}

/// Parses `name=v1,v2,...` into a family override.
pub fn parse_sweep_param(s: &str) -> Result<Family, CliError> {
    let usage = || CliError::Usage(format!("--sweep-param expects name=v1,v2,... (got {s:?})"));
    let (name, values) = s.split_once('=').ok_or_else(usage)?;
    let param = FamilyParam::parse(name.trim()).ok_or_else(|| {
        CliError::Usage(format!("unknown sweep parameter {name:?}; use k_db, p_i, eta, gamma_th_db or c"))
    })?;
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| usage()))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(usage());
    }
    Ok(Family { param, values })
}

pub fn figure_scenario(spec: &FigureSpec, quick: bool, family_override: Option<Family>) -> Scenario {
    let mut s = Scenario {
        relay: RelaySection {
            protocols: spec.protocols.clone(),
            ..RelaySection::default()
        },
        metrics: vec![spec.metric],
        variants: spec.variants.clone(),
        family: Some(family_override.unwrap_or_else(|| spec.family.clone())),
        ..Scenario::default()
    };
    if quick {
        s.sweep = SweepRange::new(0.0, 30.0, 10.0);
        s.mc.n_samples = 100_000;
    }
    s
}

fn column_name(metric: Metric, variant: Variant) -> String {
    let v = match variant {
        Variant::MonteCarlo => "mc",
        other => other.as_str(),
    };
    format!("{}_{v}", metric.as_str())
}

/// Wide table: one row per (family value, protocol, grid point).
pub fn figure_table(spec: &FigureSpec, scenario: &Scenario, result: &SweepResult) -> (Vec<String>, Vec<Vec<String>>) {
    let fam = scenario.family.as_ref().expect("figure scenarios carry a family");
    let multi = spec.protocols.len() > 1;
    let mut header = vec!["gamma_bar_db".to_string(), fam.param.as_str().to_string()];
    if multi {
        header.push("protocol".into());
    }
    for &v in &spec.variants {
        header.push(column_name(spec.metric, v));
        if v == Variant::MonteCarlo {
            header.push(format!("{}_stderr", column_name(spec.metric, v)));
        }
    }
    let mut rows = Vec::new();
    for &fv in &fam.values {
        for &p in &spec.protocols {
            for g in scenario.sweep.points() {
                let mut row = vec![fmt_num(Some(g)), fmt_num(Some(fv))];
                if multi {
                    row.push(p.as_str().into());
                }
                for &v in &spec.variants {
                    let hit = result.get(g, p, spec.metric, v, Some(fv));
                    row.push(match hit {
                        Some(r) => fmt_num(Some(r.value.unwrap_or(f64::NAN))),
                        None => String::new(),
                    });
                    if v == Variant::MonteCarlo {
                        row.push(fmt_num(hit.and_then(|r| r.std_error)));
                    }
                }
                rows.push(row);
            }
        }
    }
    (header, rows)
}

fn gnuplot_script(spec: &FigureSpec, scenario: &Scenario, header: &[String], csv_name: &str) -> String {
    let fam = scenario.family.as_ref().expect("figure scenarios carry a family");
    let multi = spec.protocols.len() > 1;
    let first_value_col = if multi { 4 } else { 3 };
    let ylabel = match spec.metric {
        Metric::Op => "outage probability",
        Metric::Ber => "average BER",
        Metric::Acc => "ergodic capacity (bit/s/Hz)",
    };
    let values = fam.values.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    s.push_str(&format!("# {}\n", spec.title));
    s.push_str("set datafile separator \",\"\n");
    s.push_str(&format!("set title \"{}\"\n", spec.title));
    s.push_str("set xlabel \"average SNR (dB)\"\n");
    s.push_str(&format!("set ylabel \"{ylabel}\"\n"));
    if spec.metric != Metric::Acc {
        s.push_str("set logscale y\nset format y \"10^{%L}\"\n");
    }
    s.push_str("set key outside right\n");
    s.push_str("set terminal pngcairo size 900,600\n");
    s.push_str(&format!("set output \"fig{}.png\"\n", spec.id));
    let mut plots = Vec::new();
    for &p in &spec.protocols {
        let sel = if multi {
            format!("abs($2-real(v))<1e-9 && strcol(3) eq \"{}\"", p.as_str())
        } else {
            "abs($2-real(v))<1e-9".to_string()
        };
        let mut col = first_value_col;
        for &var in &spec.variants {
            let name = &header[col - 1];
            let style = match var {
                Variant::MonteCarlo => "points pt 6",
                Variant::Exact => "lines lw 2",
                _ => "lines dt 2",
            };
            let label = if multi {
                format!("{} {name}", p.as_str().to_uppercase())
            } else {
                name.clone()
            };
            plots.push(format!(
                "for [v in \"{values}\"] '{csv_name}' skip 1 using 1:(({sel}) ? ${col} : 1/0) with {style} title sprintf(\"{}=%s {label}\", v)",
                fam.param.as_str()
            ));
            col += if var == Variant::MonteCarlo { 2 } else { 1 };
        }
    }
    s.push_str("plot ");
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    s
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub csv_path: PathBuf,
    pub script_path: PathBuf,
    pub result: SweepResult,
}

pub fn emit_figure(
    id: u8,
    out_dir: &Path,
    quick: bool,
    family_override: Option<Family>,
    cfg: &AnalyticConfig,
) -> Result<FigureOutput, CliError> {
    let spec = figure_spec(id)?;
    let scenario = figure_scenario(&spec, quick, family_override);
    scenario.validate()?;
    let result = run_sweep(&scenario, cfg);
    let (header, rows) = figure_table(&spec, &scenario, &result);
    fs::create_dir_all(out_dir)?;
    let csv_name = format!("fig{id}.csv");
    let csv_path = out_dir.join(&csv_name);
    write_table(&header, &rows, fs::File::create(&csv_path)?)?;
    let script_path = out_dir.join(format!("fig{id}.gp"));
    fs::write(&script_path, gnuplot_script(&spec, &scenario, &header, &csv_name))?;
    Ok(FigureOutput {
        csv_path,
        script_path,
        result,
    })
}
