//! Named example layouts.
//!
//! All distances are in units of the base spacing `d` with `J = 1` and
//! `alpha = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::geometry::{Layout, Position};

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub layout: Layout,
    /// Published duration of a general logical gate, when one is quoted for
    /// this layout; otherwise it is derived from the control couplings.
    pub gate_time: Option<f64>,
}

pub const NAMES: [&str; 6] = ["linear4", "cross8", "cross7", "grid12", "grid12-min", "triangle4"];

fn p(v: &[f64]) -> Position {
    Position::new(v.to_vec())
}

/// Chain `S1 C1 C2 S2` with unit spacing.
pub fn linear4() -> Layout {
    Layout::new(vec![p(&[1.0]), p(&[2.0])], vec![p(&[0.0]), p(&[3.0])]).expect("valid preset")
}

/// Chain `S1 C1 C2 S2` with spacings `d1`, `d2`, `d3`.
pub fn linear4_spaced(d1: f64, d2: f64, d3: f64) -> Result<Layout> {
    Layout::new(
        vec![p(&[d1]), p(&[d1 + d2])],
        vec![p(&[0.0]), p(&[d1 + d2 + d3])],
    )
}

/// Four controls on a diamond of radius 1/2 with four targets at radius 3/2
/// on the same axes.
pub fn cross8() -> Layout {
    Layout::new(
        vec![p(&[-0.5, 0.0]), p(&[0.0, 0.5]), p(&[0.5, 0.0]), p(&[0.0, -0.5])],
        vec![p(&[-1.5, 0.0]), p(&[0.0, 1.5]), p(&[1.5, 0.0]), p(&[0.0, -1.5])],
    )
    .expect("valid preset")
}

/// [`cross8`] without the fourth target.
pub fn cross7() -> Layout {
    cross8().select_targets(&[0, 1, 2]).expect("valid preset")
}

/// Nine controls on a unit square grid (row-major from the top-left) and
/// three targets at distance 3 from the center.
pub fn grid12() -> Layout {
    let mut controls = Vec::new();
    for y in [1.0, 0.0, -1.0] {
        for x in [-1.0, 0.0, 1.0] {
            controls.push(p(&[x, y]));
        }
    }
    let a = 3.0 * FRAC_1_SQRT_2;
    Layout::new(controls, vec![p(&[-a, a]), p(&[a, a]), p(&[0.0, -3.0])]).expect("valid preset")
}

/// [`grid12`] restricted to the three controls `C1`, `C3`, `C8`.
pub fn grid12_min() -> Layout {
    grid12().select_controls(&[0, 2, 7]).expect("valid preset")
}

/// One control at the centroid of an equilateral triangle of targets.
pub fn triangle4() -> Layout {
    let targets = (0..3)
        .map(|k| {
            let a = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
            p(&[a.cos(), a.sin()])
        })
        .collect();
    Layout::new(vec![p(&[0.0, 0.0])], targets).expect("valid preset")
}

pub fn preset(name: &str) -> Result<Preset> {
    let (description, layout, gate_time) = match name {
        "linear4" => ("1D chain S1 C1 C2 S2, unit spacing", linear4(), None),
        "cross8" => (
            "2D cross: 4 controls at radius 1/2, 4 targets at radius 3/2",
            cross8(),
            Some(3.0 * SQRT_2 * PI),
        ),
        "cross7" => (
            "2D cross without the fourth target",
            cross7(),
            Some(3.0 * SQRT_2 * PI),
        ),
        "grid12" => ("3x3 control grid with 3 targets at radius 3", grid12(), None),
        "grid12-min" => ("grid12 restricted to controls C1, C3, C8", grid12_min(), None),
        "triangle4" => ("one control at the centroid of 3 targets", triangle4(), None),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(Preset {
        name: NAMES.iter().find(|n| **n == name).copied().unwrap_or("custom"),
        description,
        layout,
        gate_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, name);
        }
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(cross8().n_controls(), 4);
        assert_eq!(cross7().n_targets(), 3);
        assert_eq!(grid12().n_controls(), 9);
        assert_eq!(grid12_min().n_controls(), 3);
        assert_eq!(triangle4().n_targets(), 3);
    }

    #[test]
    fn grid_targets_at_radius_three() {
        for t in grid12().targets() {
            let r = t.coords().iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 3.0).abs() < 1e-14);
        }
    }
}
