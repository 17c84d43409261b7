//! Deterministic SVG pictures of rank-2 polytopes and projections of rank-3 ones.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::intmat::{mat_vec, IntMatrix};
use crate::laurent::Poly;
use crate::lattice::{LatticePolytope, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot render rank {0}; only ranks 2 and 3 are supported")]
    UnsupportedRank(usize),
    #[error("projection must be a 2x{expected} integer matrix")]
    BadProjection { expected: usize },
    #[error("scale must be at least 1")]
    BadScale,
    #[error("potential has rank {potential} but the polytope has rank {polytope}")]
    RankMismatch { potential: usize, polytope: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderConfig {
    pub grid: bool,
    /// Pixels per lattice unit.
    pub scale: u32,
    /// Rows of the linear map to the plane; for rank 3 defaults to dropping
    /// the first coordinate.
    pub projection: Option<IntMatrix>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self { grid: true, scale: 24, projection: None }
    }
}

/// Parse a projection given as `"r1;r2"` with comma-separated rows.
pub fn parse_projection(s: &str) -> Option<IntMatrix> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| r.split(',').map(|x| x.trim().parse::<i64>().ok()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    (rows.len() == 2 && !rows[0].is_empty() && rows[0].len() == rows[1].len()).then_some(rows)
}

fn projection_for(rank: usize, cfg: &RenderConfig) -> Result<IntMatrix, RenderError> {
    match (rank, &cfg.projection) {
        (2 | 3, Some(m)) => {
            if m.len() != 2 || m.iter().any(|r| r.len() != rank) {
                return Err(RenderError::BadProjection { expected: rank });
            }
            Ok(m.clone())
        }
        (2, None) => Ok(vec![vec![1, 0], vec![0, 1]]),
        (3, None) => Ok(vec![vec![0, 1, 0], vec![0, 0, 1]]),
        (r, _) => Err(RenderError::UnsupportedRank(r)),
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Cyclic vertex order of a polygon, from its edge graph.
fn boundary_cycle(p: &LatticePolytope) -> Vec<Vec<i64>> {
    let v = p.vertices();
    if p.dim() < 2 {
        return v.to_vec();
    }
    let edges = p.edges();
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    loop {
        let cur = *order.last().expect("nonempty");
        let next = edges
            .iter()
            .filter_map(|&(a, b)| if a == cur { Some(b) } else if b == cur { Some(a) } else { None })
            .find(|&x| x != prev && (order.len() < 2 || x != order[order.len() - 2]));
        match next {
            Some(0) | None => break,
            Some(x) => {
                prev = cur;
                order.push(x);
            }
        }
    }
    order.into_iter().map(|i| v[i].clone()).collect()
}

/// Render `p` with its lattice points grid, hull, edges and vertices. When a
/// potential is supplied its exponents are marked separately.
pub fn render(p: &LatticePolytope, potential: Option<&Poly>, cfg: &RenderConfig) -> Result<String, RenderError> {
    if cfg.scale == 0 {
        return Err(RenderError::BadScale);
    }
    let rank = p.rank();
    let proj = projection_for(rank, cfg)?;
    if let Some(w) = potential {
        if w.rank() != rank {
            return Err(RenderError::RankMismatch { potential: w.rank(), polytope: rank });
        }
    }
    let to_plane = |e: &[i64]| -> [i64; 2] {
        let q = mat_vec(&proj, e);
        [q[0], q[1]]
    };
    let support = potential.map(|w| w.support()).unwrap_or_default();
    let mut xs: Vec<[i64; 2]> = p.vertices().iter().map(|v| to_plane(v)).collect();
    xs.extend(support.iter().map(|e| to_plane(e)));
    let (x0, x1) = (xs.iter().map(|q| q[0]).min().expect("nonempty") - 1, xs.iter().map(|q| q[0]).max().expect("nonempty") + 1);
    let (y0, y1) = (xs.iter().map(|q| q[1]).min().expect("nonempty") - 1, xs.iter().map(|q| q[1]).max().expect("nonempty") + 1);
    let s = cfg.scale as i64;
    let px = |q: [i64; 2]| ((q[0] - x0) * s, (y1 - q[1]) * s);
    let (w, h) = ((x1 - x0) * s, (y1 - y0) * s);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    if cfg.grid {
        writeln!(out, r##"<g class="grid" fill="#bbbbbb">"##).unwrap();
        for y in (y0..=y1).rev() {
            for x in x0..=x1 {
                let (cx, cy) = px([x, y]);
                writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="1.5"/>"#).unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }

    let shadow = Polytope::from_points(&p.vertices().iter().map(|v| to_plane(v).to_vec()).collect::<Vec<_>>())
        .expect("nonempty vertex set");
    let cycle: Vec<String> = boundary_cycle(&shadow).into_iter().map(|q| {
        let (cx, cy) = px([q[0], q[1]]);
        format!("{cx},{cy}")
    }).collect();
    if shadow.dim() == 2 {
        writeln!(out, r##"<polygon class="hull" points="{}" fill="#cfe3f7" stroke="none"/>"##, cycle.join(" ")).unwrap();
    }

    let edges: BTreeSet<([i64; 2], [i64; 2])> = if p.dim() == 0 {
        BTreeSet::new()
    } else {
        p.edges()
            .into_iter()
            .map(|(a, b)| {
                let (u, v) = (to_plane(&p.vertices()[a]), to_plane(&p.vertices()[b]));
                if u <= v { (u, v) } else { (v, u) }
            })
            .filter(|(u, v)| u != v)
            .collect()
    };
    writeln!(out, r##"<g class="edges" stroke="#1f4e79" stroke-width="2">"##).unwrap();
    for (u, v) in &edges {
        let ((ax, ay), (bx, by)) = (px(*u), px(*v));
        writeln!(out, r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r##"<g class="vertices" fill="#1f4e79">"##).unwrap();
    for v in p.vertices() {
        let (cx, cy) = px(to_plane(v));
        writeln!(out, r#"<circle class="vertex" data-e="{}" cx="{cx}" cy="{cy}" r="5"/>"#, join(v)).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if potential.is_some() {
        writeln!(out, r##"<g class="support" fill="#d62728">"##).unwrap();
        for e in &support {
            let (cx, cy) = px(to_plane(e));
            writeln!(out, r#"<circle class="support" data-e="{}" cx="{cx}" cy="{cy}" r="3"/>"#, join(e)).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// The `data-e` coordinates of all markers of one class in an SVG produced by [`render`].
pub fn marker_coordinates(svg: &str, class: &str) -> BTreeSet<Vec<i64>> {
    let tag = format!(r#"class="{class}" data-e=""#);
    svg.lines()
        .filter_map(|l| {
            let rest = &l[l.find(&tag)? + tag.len()..];
            let coords = &rest[..rest.find('"')?];
            coords.split(',').map(|x| x.parse().ok()).collect()
        })
        .collect()
}
