//! Markdown tables. Numbers are rounded here and nowhere else; the CSV and
//! JSON twins carry full precision.

pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", headers.join(" | ")));
    out.push_str(&format!("|{}\n", headers.iter().map(|_| "---|").collect::<String>()));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out
}

/// Two decimals, without a negative zero.
pub fn dec2(x: f64) -> String {
    let s = format!("{:.2}", x);
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Nearest integer, halves away from zero.
pub fn int(x: f64) -> String {
    let r = x.round();
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

pub fn opt_dec2(x: Option<f64>) -> String {
    x.map(dec2).unwrap_or_else(|| "-".into())
}
