use std::fmt::Write as _;

use crate::complex::NodeId;
use crate::error::{Error, Result};
use crate::spectral::PersistenceBars;

const ROW: f64 = 18.0;
const LEFT: f64 = 90.0;
const TOP: f64 = 30.0;
const CELL: f64 = 14.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Barcode of spectral persistence: one row per node in ranking order, one
/// rectangle per maximal run of stages.
pub fn render_barcode_svg(bars: &PersistenceBars, label: impl Fn(NodeId) -> Option<String>) -> Result<String> {
    if bars.is_empty() {
        return Err(Error::EmptyReport);
    }
    let cell = (CELL * 40.0 / bars.n_stages.max(40) as f64).max(2.0);
    let width = LEFT + cell * bars.n_stages as f64 + 20.0;
    let height = TOP + ROW * bars.ranking.len() as f64 + 30.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let axis_y = TOP + ROW * bars.ranking.len() as f64 + 4.0;
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT:.1}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
        LEFT + cell * bars.n_stages as f64
    );
    let tick_every = (bars.n_stages / 10).max(1);
    for k in (0..bars.n_stages).step_by(tick_every) {
        let x = LEFT + cell * (k as f64 + 0.5);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{k}</text>"#, axis_y + 14.0);
    }
    let _ = writeln!(s, r#"<text x="{LEFT:.1}" y="{:.1}">stage</text>"#, TOP - 12.0);
    let all = bars.bars();
    for (row, &node) in bars.ranking.iter().enumerate() {
        let y = TOP + ROW * row as f64;
        let name = label(node).unwrap_or_else(|| node.to_string());
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + ROW * 0.65,
            escape(&name)
        );
        for b in all.iter().filter(|b| b.node == node) {
            let x = LEFT + cell * b.start as f64;
            let w = cell * (b.end - b.start + 1) as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="{w:.1}" height="{:.1}" fill="steelblue"/>"#,
                y + 3.0,
                ROW - 6.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Stage;
    use std::collections::BTreeMap;

    fn bars_for(stages_of_node: &[usize], n: usize) -> PersistenceBars {
        let stages: Vec<Stage> = (0..n)
            .map(|i| Stage {
                index: i,
                lambda: i as f64,
                members: vec![i],
                intensities: BTreeMap::new(),
                hubs: if stages_of_node.contains(&i) { [(7, 1.0)].into_iter().collect() } else { BTreeMap::new() },
            })
            .collect();
        PersistenceBars::from_stages(&stages)
    }

    #[test]
    fn one_run_one_rect() {
        let svg = render_barcode_svg(&bars_for(&[0, 1, 2], 3), |_| Some("A&B".into())).unwrap();
        assert_eq!(svg.matches("fill=\"steelblue\"").count(), 1);
        assert!(svg.contains("A&amp;B"));
    }

    #[test]
    fn gap_splits_bar() {
        let svg = render_barcode_svg(&bars_for(&[0, 2], 3), |_| None).unwrap();
        assert_eq!(svg.matches("fill=\"steelblue\"").count(), 2);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(render_barcode_svg(&bars_for(&[], 3), |_| None), Err(Error::EmptyReport)));
    }
}
