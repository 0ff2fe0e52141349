//! Number formatting shared by the text reports.

use crate::aggregation::{AggregateReport, DesignComparison, ReportDelta};

pub const SIGNIFICANT_DIGITS: usize = 6;

/// Rounds to `SIGNIFICANT_DIGITS` significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// `%g`-style rendering with `SIGNIFICANT_DIGITS` significant digits:
/// fixed notation for moderate magnitudes, exponent form otherwise,
/// trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = SIGNIFICANT_DIGITS as i32;
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_opt(x: Option<f64>) -> Option<f64> {
    x.map(round_sig)
}

/// Copy of the report with every derived figure rounded for presentation.
pub fn rounded_report(report: &AggregateReport) -> AggregateReport {
    AggregateReport {
        pi: round_opt(report.pi),
        q: round_sig(report.q),
        tms: round_opt(report.tms),
        sms: round_opt(report.sms),
        area_module: round_opt(report.area_module),
        directions: report
            .directions
            .iter()
            .map(|(&id, v)| {
                (
                    id,
                    crate::geometry::Vec2::new(round_sig(v.x), round_sig(v.y)),
                )
            })
            .collect(),
        ..report.clone()
    }
}

pub fn rounded_comparison(c: &DesignComparison) -> DesignComparison {
    DesignComparison {
        before: rounded_report(&c.before),
        after: rounded_report(&c.after),
        delta: ReportDelta {
            pi: round_sig(c.delta.pi),
            q: round_sig(c.delta.q),
            tms: round_opt(c.delta.tms),
            sms: round_opt(c.delta.sms),
            area_module: round_opt(c.delta.area_module),
        },
        verdict: c.verdict,
    }
}
