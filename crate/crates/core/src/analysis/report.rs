//! CSV rendering of experiment results.

use std::fmt::Write as _;

use super::BerPoint;

pub const PC_HEADER: &str = "l,p_c,w_c";
pub const SWEEP_HEADER: &str = "scheme,metric,tb_seconds,frames,bits,bit_errors,decode_failures,ber,stderr";
pub const APPROX_HEADER: &str = "scheme,tb_seconds,ber_approx";

/// Twelve significant digits, scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn pc_csv(probabilities: &[f64], weights: &[f64]) -> String {
    let mut out = format!("{PC_HEADER}\n");
    for (l, (p, w)) in probabilities.iter().zip(weights).enumerate() {
        writeln!(out, "{l},{},{}", num(*p), num(*w)).unwrap();
    }
    out
}

pub fn sweep_csv(points: &[BerPoint]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            p.scheme,
            p.metric,
            num(p.tb_seconds),
            p.frames,
            p.bits,
            p.bit_errors,
            p.decode_failures,
            num(p.ber),
            num(p.stderr)
        )
        .unwrap();
    }
    out
}

/// Rows of `(T_b, approximate BER)` for one scheme.
pub fn approx_csv(scheme: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{APPROX_HEADER}\n");
    for (tb, ber) in rows {
        writeln!(out, "{scheme},{},{}", num(*tb), num(*ber)).unwrap();
    }
    out
}
