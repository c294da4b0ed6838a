//! Decreasing middle-thirds staircase: `1 - C_k(x)` where `C_k` is the
//! depth-`k` piecewise linear approximation of the Cantor function.

use crate::error::{Error, Result};

/// Deepest staircase whose polyline is materialised (`2^(k+1)` vertices).
pub const MAX_STAIRCASE_DEPTH: u32 = 20;

fn cantor(depth: u32, x: f64) -> f64 {
    if depth == 0 {
        return x;
    }
    if x < 1.0 / 3.0 {
        0.5 * cantor(depth - 1, 3.0 * x)
    } else if x <= 2.0 / 3.0 {
        0.5
    } else {
        0.5 + 0.5 * cantor(depth - 1, 3.0 * x - 2.0)
    }
}

pub(crate) fn staircase_value(depth: u32, x: f64) -> f64 {
    1.0 - cantor(depth, x.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    pub depth: u32,
    pub vertices: Vec<(f64, f64)>,
    pub length: f64,
}

/// Polyline through the ends of the `2^k` steep pieces, flat in between.
pub fn singular_staircase(depth: u32) -> Result<Staircase> {
    if depth > MAX_STAIRCASE_DEPTH {
        return Err(Error::OutOfRange {
            name: "depth",
            value: depth as f64,
            range: "[0, 20]",
        });
    }
    let pieces = 1usize << depth;
    let width = 3f64.powi(-(depth as i32));
    let drop = 0.5f64.powi(depth as i32);
    let mut vertices = Vec::with_capacity(2 * pieces);
    for j in 0..pieces {
        // Left end of the j-th surviving interval: ternary digits 0/2 from
        // the binary digits of j.
        let mut left = 0.0;
        let mut scale = 1.0;
        for bit in (0..depth).rev() {
            scale /= 3.0;
            if j >> bit & 1 == 1 {
                left += 2.0 * scale;
            }
        }
        let top = 1.0 - j as f64 * drop;
        vertices.push((left, top));
        vertices.push((left + width, top - drop));
    }
    let length = vertices
        .windows(2)
        .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
        .sum();
    Ok(Staircase {
        depth,
        vertices,
        length,
    })
}

/// `1 - (2/3)^k + sqrt(1 + (4/9)^k)`.
pub fn staircase_length_closed_form(depth: u32) -> f64 {
    let k = depth as i32;
    1.0 - (2.0f64 / 3.0).powi(k) + (1.0 + (4.0f64 / 9.0).powi(k)).sqrt()
}
