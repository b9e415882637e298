//! Number formatting shared by every CSV writer.

/// Fixed 9-significant-digit rendering; non-finite values print as `NA`.
pub fn fmt9(x: f64) -> String {
    if !x.is_finite() {
        return "NA".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new digit (9.99999999996 → 10.0000000)
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
        let lead_zeros = if exp < 0 { (-exp) as usize } else { 0 };
        if digits - lead_zeros > 9 && decimals > 0 {
            let d = decimals - 1;
            return format!("{x:.d$}");
        }
        s
    } else {
        format!("{x:.8e}")
    }
}

/// Joins formatted values with commas.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| fmt9(v)).collect::<Vec<_>>().join(",")
}
