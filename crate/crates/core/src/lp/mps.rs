//! Fixed-format MPS writer.
//!
//! Field layout follows the classical columns: 2-3 (type), 5-12 (name),
//! 15-22 (name), 25-36 (value). Each data line carries a single name/value
//! pair, so fields 5-6 are never used. Values are printed with 12 significant
//! digits; the longest of them run past column 36, which whitespace-tokenizing
//! readers accept.

use std::fmt::Write;

use crate::scalar::LpScalar;

use super::LinearProgram;

const OBJECTIVE_ROW: &str = "OBJ";

/// Fits `name` into the 8-character name field.
///
/// Longer names keep their first three characters, then `_`, then four hex
/// digits of an FNV-1a hash of the full name.
pub fn mps_name(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_graphic() { c } else { '_' })
        .collect();
    if cleaned.len() <= 8 && !cleaned.is_empty() {
        return cleaned;
    }
    let mut hash: u32 = 0x811c_9dc5;
    for b in name.bytes() {
        hash ^= u32::from(b);
        hash = hash.wrapping_mul(0x0100_0193);
    }
    let prefix: String = cleaned
        .chars()
        .chain(std::iter::repeat('_'))
        .take(3)
        .collect();
    format!("{prefix}_{:04X}", (hash ^ (hash >> 16)) & 0xFFFF)
}

fn row_name(r: usize) -> String {
    format!("R{r:07}")
}

fn col_name(j: usize) -> String {
    format!("C{j:07}")
}

/// `%.12g`-style rendering.
fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_fraction(&format!("{v:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn data_line(out: &mut String, kind: &str, name: &str, name2: &str, value: f64) {
    writeln!(
        out,
        " {kind:<2} {name:<8}  {name2:<8}  {}",
        format_number(value)
    )
    .expect("string write");
}

/// Renders `lp` as a fixed-format MPS file named `name`.
///
/// The objective is written as-is under an `N` row; MPS has no sense marker,
/// so the header comment records that it is to be maximized.
pub fn export_mps<T: LpScalar>(lp: &LinearProgram<T>, name: &str) -> String {
    let mut out = String::new();
    let n = lp.num_vars();
    let m = lp.num_constraints();
    writeln!(out, "* objective sense: MAXIMIZE row {OBJECTIVE_ROW}").unwrap();
    writeln!(out, "* {m} equality rows, {n} columns").unwrap();
    if mps_name(name) != name {
        writeln!(out, "* full name: {name}").unwrap();
    }
    writeln!(out, "NAME          {}", mps_name(name)).unwrap();

    writeln!(out, "ROWS").unwrap();
    writeln!(out, " N  {OBJECTIVE_ROW}").unwrap();
    for r in 0..m {
        writeln!(out, " E  {}", row_name(r)).unwrap();
    }

    writeln!(out, "COLUMNS").unwrap();
    let cols = lp.columns();
    for (j, col) in cols.iter().enumerate() {
        let name = col_name(j);
        let c = lp.objective()[j].to_f64();
        if c != 0.0 || col.is_empty() {
            data_line(&mut out, "", &name, OBJECTIVE_ROW, c);
        }
        for (r, a) in col {
            data_line(&mut out, "", &name, &row_name(*r), a.to_f64());
        }
    }

    writeln!(out, "RHS").unwrap();
    for (r, c) in lp.constraints().iter().enumerate() {
        let v = c.rhs.to_f64();
        if v != 0.0 {
            data_line(&mut out, "", "RHS", &row_name(r), v);
        }
    }

    let bound_lines: Vec<(usize, &T, &Option<T>)> = (0..n)
        .map(|j| (j, &lp.lower_bounds()[j], &lp.upper_bounds()[j]))
        .filter(|(_, l, u)| !l.is_zero() || u.is_some())
        .collect();
    if !bound_lines.is_empty() {
        writeln!(out, "BOUNDS").unwrap();
        for (j, l, u) in bound_lines {
            let name = col_name(j);
            match u {
                Some(u) if u == l => data_line(&mut out, "FX", "BND", &name, u.to_f64()),
                _ => {
                    if !l.is_zero() {
                        data_line(&mut out, "LO", "BND", &name, l.to_f64());
                    }
                    if let Some(u) = u {
                        data_line(&mut out, "UP", "BND", &name, u.to_f64());
                    }
                }
            }
        }
    }
    writeln!(out, "ENDATA").unwrap();
    out
}
