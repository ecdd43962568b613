use std::io::Write;

use crate::sweep::SweepResult;
use crate::CliError;

pub const SWEEP_HEADER: [&str; 8] = [
    "gamma_bar_db",
    "protocol",
    "metric",
    "variant",
    "family_param_name",
    "family_param_value",
    "value",
    "std_error",
];

/// Ten significant digits in scientific notation; failed values print as NaN.
pub fn fmt_num(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.9e}"),
        Some(_) => "NaN".into(),
        None => String::new(),
    }
}

fn fmt_opt_num(v: Option<f64>, present: bool) -> String {
    if present {
        fmt_num(Some(v.unwrap_or(f64::NAN)))
    } else {
        String::new()
    }
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in &result.rows {
        w.write_record([
            fmt_num(Some(r.gamma_bar_db)),
            r.protocol.as_str().to_string(),
            r.metric.as_str().to_string(),
            r.variant.as_str().to_string(),
            r.family_param_name.unwrap_or_default().to_string(),
            fmt_num(r.family_param_value),
            fmt_opt_num(r.value, true),
            fmt_opt_num(r.std_error, r.std_error.is_some()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv_string(result: &SweepResult) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_sweep_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

/// Writes a table with a header row, LF line endings.
pub fn write_table<W: Write>(header: &[String], rows: &[Vec<String>], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Variant;
    use crate::sweep::Row;
    use plcrf_core::analytic::Metric;
    use plcrf_core::channel::Protocol;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(fmt_num(Some(0.123456789012)), "1.234567890e-1");
        assert_eq!(fmt_num(Some(20.0)), "2.000000000e1");
        assert_eq!(fmt_num(None), "");
    }

    #[test]
    fn csv_layout() {
        let r = SweepResult {
            rows: vec![Row {
                gamma_bar_db: 10.0,
                protocol: Protocol::Af,
                metric: Metric::Ber,
                variant: Variant::MonteCarlo,
                family_param_name: Some("P_i"),
                family_param_value: Some(0.2),
                value: Some(0.03),
                std_error: Some(1e-5),
                error: None,
            }],
        };
        let s = sweep_csv_string(&r).unwrap();
        assert_eq!(
            s,
            "gamma_bar_db,protocol,metric,variant,family_param_name,family_param_value,value,std_error\n\
             1.000000000e1,af,ber,monte_carlo,P_i,2.000000000e-1,3.000000000e-2,1.000000000e-5\n"
        );
        assert!(!s.contains('\r'));
    }
}
