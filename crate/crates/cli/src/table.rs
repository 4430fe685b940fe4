//! The coefficient table: recognized exact values next to the truncated
//! approximations `1728J~` and `s2~`.

use chudnovsky::cmcoeffs::{cm_point, coefficient_table, CoeffRow};
use chudnovsky::qseries::{approx_j, approx_s2};
use chudnovsky::{PrecisionCtx, Result};
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::output::Record;

#[derive(Clone, Debug)]
pub struct TableRow {
    pub row: CoeffRow,
    /// `1728J~` to 5 places.
    pub approx_j: String,
    /// `s2~` to 20 places.
    pub approx_s2: String,
}

/// `x` rounded half away from zero to `places` decimals.
pub fn fixed(x: &Float, places: u32) -> String {
    let scaled = Float::with_val(x.prec(), x * Integer::from(10).pow(places));
    let int = scaled.round().to_integer().expect("finite");
    let digits = int.clone().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (whole, frac) = digits.split_at(digits.len() - places as usize);
    let sign = if int < 0 { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

pub fn build(ctx: PrecisionCtx) -> Result<Vec<TableRow>> {
    coefficient_table(ctx)?
        .into_iter()
        .map(|row| {
            let p = cm_point(row.n)?.qpoint(ctx)?;
            let j = Complex::with_val(ctx.prec(), approx_j(&p, ctx) * 1728u32);
            let s2 = approx_s2(&p, ctx);
            Ok(TableRow { approx_j: fixed(j.real(), 5), approx_s2: fixed(s2.real(), 20), row })
        })
        .collect()
}

fn tau_text(t: (f64, f64)) -> String {
    if t.0 == 0.0 {
        format!("{:.6}i", t.1)
    } else {
        format!("{}+{:.6}i", t.0, t.1)
    }
}

pub fn plain(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for t in rows {
        let r = &t.row;
        out += &format!("N = {}   tau = {}\n", r.n, tau_text(r.tau));
        out += &format!("  1728J({}) = {}  ~  {}   (radius {:.2e})\n", r.n, t.approx_j, r.j, r.j_radius.to_f64());
        out += &format!("  s2({}) = {}  ~  {}\n", r.n, t.approx_s2, r.s2);
        out += &format!(
            "  c = {}   b = {}   a = {}   (1-s2)/6 = {}   (radius {:.2e})\n",
            r.c,
            r.b,
            r.a,
            r.frac,
            r.a_radius.to_f64()
        );
    }
    out
}

pub fn record(t: &TableRow) -> Record {
    let r = &t.row;
    Record::Row {
        n: r.n,
        tau_re: r.tau.0,
        tau_im: r.tau.1,
        j: r.j.to_string(),
        approx_j: t.approx_j.clone(),
        c: r.c,
        b: r.b.to_string(),
        a: r.a.to_string(),
        s2: r.s2.to_string(),
        approx_s2: t.approx_s2.clone(),
        frac: r.frac.to_string(),
        j_radius: r.j_radius.to_f64(),
        a_radius: r.a_radius.to_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounds_half_away_from_zero() {
        let f = |x: f64| Float::with_val(128, x);
        assert_eq!(fixed(&f(-3375.001074), 5), "-3375.00107");
        assert_eq!(fixed(&f(0.125), 2), "0.13");
        assert_eq!(fixed(&f(-0.125), 2), "-0.13");
        assert_eq!(fixed(&f(0.00004), 3), "0.000");
        assert_eq!(fixed(&f(42.6), 0), "43");
    }
}
