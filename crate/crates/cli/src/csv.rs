//! Locale-free number formatting for CSV and `.dat` output.

/// A real with 12 significant digits: fixed notation for moderate
/// magnitudes, scientific otherwise, trailing zeros trimmed.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (m, e) = s.split_once('e').expect("scientific");
        format!("{}e{e}", trim(m.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Joins already-formatted fields with commas.
pub fn row(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}
