use std::collections::BTreeMap;

use crate::complex::{Grade, NodeId};
use crate::error::{Error, Result};
use crate::homology::BettiVector;
use crate::spectral::{Laplacian, RankedHub};

/// Formats `x` with 6 significant digits, dropping trailing zeros.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').expect("exponent present");
        return format!("{}e{e}", trim_zeros(mant));
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding may carry into a new digit, e.g. 9.999996 -> 10.00000.
    let digits = s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len();
    if digits > 6 && decimals > 0 {
        let d = decimals - 1;
        return trim_zeros(&format!("{x:.d$}")).to_string();
    }
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `grade,beta_top,beta_bottom` rows.
pub fn betti_csv(rows: &[(Grade, BettiVector)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["grade", "beta_top", "beta_bottom"])?;
    for (g, b) in rows {
        w.write_record([g.to_string(), b.top.to_string(), b.bottom.to_string()])?;
    }
    finish(w)
}

/// Non-zero entries of the symmetric form as `row,col,value`, with
/// crossimplices written out.
pub fn laplacian_csv(lap: &Laplacian) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "col", "value"])?;
    let basis = lap.basis();
    for i in 0..lap.len() {
        for &(j, v) in lap.matrix().row(i) {
            w.write_record([basis.get(i).to_string(), basis.get(j).to_string(), format_sig6(v)])?;
        }
    }
    finish(w)
}

/// One stage's hubs, by descending hubness then node id.
pub fn hub_map_csv(hubs: &BTreeMap<NodeId, f64>, label: impl Fn(NodeId) -> Option<String>) -> Result<String> {
    let mut rows: Vec<(NodeId, f64)> = hubs.iter().map(|(&n, &h)| (n, h)).collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "node", "label", "hubness"])?;
    for (i, (n, h)) in rows.into_iter().enumerate() {
        w.write_record([(i + 1).to_string(), n.to_string(), label(n).unwrap_or_default(), format_sig6(h)])?;
    }
    finish(w)
}

/// Persistence ranking rows.
pub fn ranking_csv(rows: &[RankedHub]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "node", "label", "persistence", "last_stage", "hubness"])?;
    for r in rows {
        w.write_record([
            r.rank.to_string(),
            r.node.to_string(),
            r.label.clone().unwrap_or_default(),
            r.persistence.to_string(),
            r.last_stage.to_string(),
            format_sig6(r.hubness),
        ])?;
    }
    finish(w)
}
