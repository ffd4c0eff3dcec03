//! Output formatting: significant-digit number rendering, table/CSV
//! writers, and a JSON builder with controlled numeric precision.
//!
//! All numeric output is locale-independent and deterministic. JSON
//! documents are built with `serde_json` in arbitrary-precision mode so
//! that numbers carry exactly the digits chosen here; parsing and
//! re-serializing such a document reproduces it byte for byte.

use serde_json::{Map, Number, Value};

/// Default significant digits for table and CSV output.
pub const DEFAULT_TEXT_DIGITS: usize = 12;
/// Default significant digits for JSON output (round-trip safe at binary64).
pub const DEFAULT_JSON_DIGITS: usize = 17;

/// Renders `x` with `digits` significant digits, trimming trailing zeros,
/// in the spirit of printf's %g: plain decimal notation when the exponent
/// is moderate, scientific notation otherwise.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // correct rounding to the requested digit count comes from {:.*e}
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp_str) = sci.split_once('e').expect("e-notation");
    let exp: i32 = exp_str.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if exp >= -4 && (exp as i64) < digits as i64 {
        let e = exp as i64;
        if e >= 0 {
            let int_len = (e + 1) as usize;
            let mut s: String = digits_only.clone();
            while s.len() < int_len {
                s.push('0');
            }
            let (int_part, frac_part) = s.split_at(int_len);
            let frac = frac_part.trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            let frac = format!("{zeros}{digits_only}");
            let frac = frac.trim_end_matches('0');
            format!("0.{frac}")
        }
    } else {
        let trimmed = digits_only.trim_end_matches('0');
        let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
        if trimmed.len() == 1 {
            format!("{trimmed}e{exp}")
        } else {
            let (first, rest) = trimmed.split_at(1);
            format!("{first}.{rest}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// JSON number with the crate's digit policy. Non-finite values (possible
/// when a quantity overflows binary64 at extreme arguments) become null,
/// since JSON has no representation for them.
pub fn json_num(x: f64, digits: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // arbitrary_precision keeps the literal digits as written
    Number::from_string_unchecked(fmt_sig(x, digits)).into()
}

/// Builds a JSON object from (key, value) pairs. Keys end up sorted
/// (serde_json's default map), which keeps serialization canonical.
pub fn json_object(fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Space-aligned table with a header row. Columns are left-aligned and
/// separated by two spaces.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let ncols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: Vec<&str>, widths: &[usize]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i + 1 == ncols {
                line.push_str(cell); // no trailing padding
            } else {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
        }
        line
    };
    out.push_str(&fmt_row(header.to_vec(), &widths));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row.iter().map(|s| s.as_str()).collect(), &widths));
        out.push('\n');
    }
    out
}

/// CSV with LF line endings. Cells here never contain commas or quotes.
pub fn render_csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(fmt_sig(7.5, 12), "7.5");
        assert_eq!(fmt_sig(7.500000000000002, 12), "7.5");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(0.25, 12), "0.25");
        assert_eq!(fmt_sig(-3.75, 12), "-3.75");
        assert_eq!(fmt_sig(1234.5, 3), "1.23e3");
        assert_eq!(fmt_sig(1234.5, 5), "1234.5");
        assert_eq!(fmt_sig(1e-7, 12), "1e-7");
        assert_eq!(fmt_sig(-1.5e-7, 12), "-1.5e-7");
        assert_eq!(fmt_sig(1e15, 12), "1e15");
        assert_eq!(fmt_sig(6.731486396483357, 14), "6.7314863964834");
        assert_eq!(fmt_sig(-32.0 / 105.0, 17), "-0.30476190476190479");
    }

    #[test]
    fn json_numbers_round_trip() {
        let v = json_object(vec![
            ("a", json_num(6.731486396483357, 17)),
            ("b", json_num(-0.0001, 17)),
        ]);
        let s = serde_json::to_string(&v).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), s);
    }

    #[test]
    fn seventeen_digits_reproduce_binary64() {
        for &x in &[std::f64::consts::PI, -2.178287974844518, 1.0 / 3.0, 4.0 / 525.0] {
            let s = fmt_sig(x, 17);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn table_alignment() {
        let t = render_table(
            &["a", "long"],
            &[vec!["1".into(), "2".into()], vec!["333".into(), "4".into()]],
        );
        assert_eq!(t, "a    long\n1    2\n333  4\n");
    }
}
