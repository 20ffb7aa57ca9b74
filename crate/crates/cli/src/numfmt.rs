//! Deterministic number formatting for CSV output: shortest representation
//! that round-trips, capped at 12 significant digits.

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect::<String>()
        .trim_start_matches('0')
        .len()
}

pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let shortest = format!("{x}");
    if significant_digits(&shortest) <= 12 {
        shortest
    } else {
        // Round to 12 significant digits, then print that value's shortest
        // round-trip form.
        let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float reparses");
        format!("{rounded}")
    }
}

pub fn fmt_bool(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}
