//! Node coordinates for rendering.
//!
//! Circular: `k` equidistant points with state 0 at the top right and the
//! last state at the top left, so the chord between them is horizontal.
//! Cone: one squashed circle per section, stacked downward from the tip.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Circular,
    Cone,
    Layered,
}

impl std::str::FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circular" => Ok(Layout::Circular),
            "cone" => Ok(Layout::Cone),
            "layered" => Ok(Layout::Layered),
            other => Err(format!("unknown layout {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub layout: Layout,
    pub radius_scale: f64,
    /// Draw terminal words as arrows to point nodes.
    pub show_terminal: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            layout: Layout::Circular,
            radius_scale: 1.0,
            show_terminal: true,
        }
    }
}

pub type Point = (f64, f64);

/// Angle of point `k` among `count`.
pub fn circular_angle(k: usize, count: usize) -> f64 {
    let step = 2.0 * PI / count as f64;
    PI / 2.0 - step / 2.0 - step * k as f64
}

pub fn circle_radius(count: usize, scale: f64) -> f64 {
    scale * (count as f64 * 0.35).max(1.0)
}

pub fn circular_positions(count: usize, scale: f64) -> Vec<Point> {
    if count == 1 {
        return vec![(0.0, 0.0)];
    }
    let r = circle_radius(count, scale);
    (0..count)
        .map(|k| {
            let t = circular_angle(k, count);
            (r * t.cos(), r * t.sin())
        })
        .collect()
}

/// Section `n` of a cone whose sections have `sizes[n]` states.
pub fn cone_positions(sizes: &[usize], scale: f64) -> Vec<Vec<Point>> {
    let gap = 2.5 * scale;
    sizes
        .iter()
        .enumerate()
        .map(|(n, &count)| {
            let y0 = -gap * n as f64;
            if count == 1 {
                return vec![(0.0, y0)];
            }
            let rx = circle_radius(count, scale).max(scale * (1.0 + n as f64));
            let ry = rx * 0.3;
            (0..count)
                .map(|k| {
                    let t = circular_angle(k, count);
                    (rx * t.cos(), y0 + ry * t.sin())
                })
                .collect()
        })
        .collect()
}

/// Breadth-first layers from `roots`; unreachable states go to a last layer.
pub fn layered_positions(count: usize, roots: &[usize], successors: &[Vec<usize>], scale: f64) -> Vec<Point> {
    let mut depth = vec![usize::MAX; count];
    let mut queue = VecDeque::new();
    for &r in roots {
        if depth[r] == usize::MAX {
            depth[r] = 0;
            queue.push_back(r);
        }
    }
    while let Some(q) = queue.pop_front() {
        for &s in &successors[q] {
            if depth[s] == usize::MAX {
                depth[s] = depth[q] + 1;
                queue.push_back(s);
            }
        }
    }
    let last = depth.iter().filter(|&&x| x != usize::MAX).max().map_or(0, |m| m + 1);
    let mut row = vec![0usize; last + 1];
    (0..count)
        .map(|q| {
            let layer = if depth[q] == usize::MAX { last } else { depth[q] };
            let x = row[layer];
            row[layer] += 1;
            (2.0 * scale * layer as f64, -1.5 * scale * x as f64)
        })
        .collect()
}
