//! Lattice renderings of point sets: points as filled dots on the
//! `|R| x |R|` grid, origin at the bottom left.

use std::fmt::Write;

use crate::plane::PointSet;

/// Pixel size of one lattice cell in SVG output.
pub const SVG_CELL: u32 = 20;

/// One text row per `y`, top row `y = |R| - 1`; `o` marks a point and `.`
/// an empty lattice site, separated by spaces.
pub fn ascii(set: &PointSet) -> String {
    let n = set.ring().order() as usize;
    let mut grid = vec![vec!['.'; n]; n];
    for p in set.points() {
        grid[p.y.rep() as usize][p.x.rep() as usize] = 'o';
    }
    let mut out = String::with_capacity(2 * n * n + n);
    for row in grid.iter().rev() {
        let line: Vec<String> = row.iter().map(char::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Points recovered from [`ascii`] output as `(x, y)` representatives.
pub fn parse_ascii(text: &str) -> Vec<(u32, u32)> {
    let rows: Vec<&str> = text.lines().collect();
    let n = rows.len();
    let mut pts = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (x, c) in row.split(' ').enumerate() {
            if c == "o" {
                pts.push((x as u32, (n - 1 - i) as u32));
            }
        }
    }
    pts.sort();
    pts
}

pub fn svg(set: &PointSet) -> String {
    let n = set.ring().order();
    let size = n * SVG_CELL;
    let half = SVG_CELL / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g stroke="#cccccc" stroke-width="1">"##);
    for i in 0..n {
        let c = i * SVG_CELL + half;
        let _ = writeln!(out, r#"<line x1="{c}" y1="{half}" x2="{c}" y2="{}"/>"#, size - half);
        let _ = writeln!(out, r#"<line x1="{half}" y1="{c}" x2="{}" y2="{c}"/>"#, size - half);
    }
    out.push_str("</g>\n");
    out.push_str("<g fill=\"#000000\">\n");
    for p in set.sorted_points() {
        let cx = p.x.rep() * SVG_CELL + half;
        let cy = (n - 1 - p.y.rep()) * SVG_CELL + half;
        let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="{}"/>"#, SVG_CELL * 3 / 10);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    fn sample() -> PointSet {
        PointSet::from_reps(Ring::prime_field(5).unwrap(), &[(0, 0), (4, 1), (2, 4)]).unwrap()
    }

    #[test]
    fn ascii_puts_origin_bottom_left() {
        let text = ascii(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "o . . . .");
        assert_eq!(lines[3], ". . . . o");
        assert_eq!(lines[0], ". . o . .");
        assert_eq!(parse_ascii(&text), vec![(0, 0), (2, 4), (4, 1)]);
    }

    #[test]
    fn svg_places_dots_on_cell_centres() {
        let s = svg(&sample());
        assert!(s.starts_with("<svg"));
        assert!(s.contains(r#"width="100""#));
        assert!(s.contains(r#"<circle cx="10" cy="90" r="6"/>"#));
        assert!(s.contains(r#"<circle cx="90" cy="70" r="6"/>"#));
        assert!(s.contains(r#"<circle cx="50" cy="10" r="6"/>"#));
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s, svg(&sample()));
    }
}
