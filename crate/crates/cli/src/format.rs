//! Deterministic number and table formatting.

use std::fmt::Write;

use nalgebra::DMatrix;

/// 17 significant digits in scientific notation; non-finite values print as
/// `nan`, `inf` or `-inf`, and `-0` prints as `0`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.16e}", v + 0.0)
    }
}

/// Headerless CSV dump of a matrix, one row per line.
pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Rows of a `quantity,index,value` table.
#[derive(Debug, Default)]
pub struct QuantityTable {
    body: String,
}

impl QuantityTable {
    pub const HEADER: &'static str = "quantity,index,value";

    pub fn push(&mut self, quantity: &str, index: usize, value: f64) {
        let _ = writeln!(self.body, "{quantity},{index},{}", num(value));
    }

    pub fn push_all(&mut self, quantity: &str, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            self.push(quantity, i, *v);
        }
    }

    pub fn finish(self) -> String {
        format!("{}\n{}", Self::HEADER, self.body)
    }
}
