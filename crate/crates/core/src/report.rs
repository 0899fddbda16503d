//! CSV output with 9 significant digits.

use std::io::Write;

use crate::error::Result;
use crate::inference::Surface;
use crate::simulation::{SimResult, SweepResult};

/// Formats `x` with 9 significant digits: fixed notation for moderate
/// magnitudes, scientific otherwise. Zero (either sign) is `0.000000000`.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        format!("{x:.*}", (8 - exp) as usize)
    } else {
        sci
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig9).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

/// Header `phi,phidot,u`, row-major over the surface grid.
pub fn write_surface_csv<W: Write>(out: W, s: &Surface) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["phi", "phidot", "u"]).map_err(csv_io)?;
    for (p, d, u) in s.points() {
        w.write_record([fmt_sig9(p), fmt_sig9(d), fmt_sig9(u)]).map_err(csv_io)?;
    }
    finish(w)
}

/// Header `t,phi,phidot,u`; `u` is 0 throughout an open-loop run.
pub fn write_series_csv<W: Write>(out: W, r: &SimResult) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["t", "phi", "phidot", "u"]).map_err(csv_io)?;
    for k in 0..r.times.len() {
        let u = r.controls.get(k).copied().unwrap_or(0.0);
        w.write_record([
            fmt_sig9(r.times[k]),
            fmt_sig9(r.phis[k]),
            fmt_sig9(r.phidots[k]),
            fmt_sig9(u),
        ])
        .map_err(csv_io)?;
    }
    finish(w)
}

/// Header `l,V,t_pp`; `t_pp` is empty when the closed loop never settled.
pub fn write_sweep_csv<W: Write>(out: W, s: &SweepResult) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["l", "V", "t_pp"]).map_err(csv_io)?;
    for (l, v, t) in s.rows() {
        w.write_record([fmt_sig9(l), fmt_sig9(v), opt(t)]).map_err(csv_io)?;
    }
    finish(w)
}

fn csv_io(e: csv::Error) -> crate::error::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => std::io::Error::other(format!("{other:?}")).into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.0), "0.000000000");
        assert_eq!(fmt_sig9(-0.0), "0.000000000");
        assert_eq!(fmt_sig9(0.193), "0.193000000");
        assert_eq!(fmt_sig9(-0.25), "-0.250000000");
        assert_eq!(fmt_sig9(1.0), "1.00000000");
        assert_eq!(fmt_sig9(std::f64::consts::PI * 2.0), "6.28318531");
        assert_eq!(fmt_sig9(62.831853071), "62.8318531");
        assert_eq!(fmt_sig9(0.0123456789012), "0.0123456789");
        assert_eq!(fmt_sig9(9.9999999999), "10.0000000");
        assert_eq!(fmt_sig9(1.5e-7), "1.50000000e-7");
        assert_eq!(fmt_sig9(2.5e12), "2.50000000e12");
    }

    #[test]
    fn sweep_csv_leaves_unsettled_empty() {
        let s = SweepResult {
            lengths: vec![1.0, 2.0],
            v: vec![0.5, 0.75],
            t_pp: vec![Some(1.5), None],
        };
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &s).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "l,V,t_pp\n1.00000000,0.500000000,1.50000000\n2.00000000,0.750000000,\n"
        );
    }

    #[test]
    fn series_csv_open_loop_has_zero_control() {
        let r = SimResult {
            times: vec![0.0, 0.5],
            phis: vec![0.1, 0.05],
            phidots: vec![0.0, -0.1],
            controls: vec![],
            amplitude: 0.1,
            settle_time: None,
        };
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,phi,phidot,u\n0.000000000,0.100000000,0.000000000,0.000000000\n"));
    }
}
