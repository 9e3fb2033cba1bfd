//! Binary PGM (P5) rendering of scalar lattice fields.
//!
//! Two linear 8-bit mappings: positive-clip sends max(v, 0) to [0, 255]
//! (the production H_z > 0 rendering), signed centers zero on 128. Image
//! rows run top-to-bottom with the highest-y lattice row first, so +y is
//! up in the picture.

use crate::lattice::LatticeGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapMode {
    PositiveClip,
    Signed,
}

/// Render a scalar field as a binary PGM. Degenerate (all-equal) fields
/// render uniform mid-gray, except an all-zero (or non-positive) field
/// under positive-clip, which renders black.
pub fn render_pgm(geom: LatticeGeometry, data: &[f64], mode: HeatmapMode) -> Vec<u8> {
    assert_eq!(data.len(), geom.sites());
    let (nx, ny) = (geom.nx(), geom.ny());
    let mut out = Vec::with_capacity(32 + geom.sites());
    out.extend_from_slice(format!("P5\n{nx} {ny}\n255\n").as_bytes());

    let min = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = min == max;

    let pixel: Box<dyn Fn(f64) -> u8> = match mode {
        HeatmapMode::PositiveClip => {
            let peak = max.max(0.0);
            if degenerate {
                if min > 0.0 {
                    Box::new(|_| 128u8)
                } else {
                    Box::new(|_| 0u8)
                }
            } else if peak == 0.0 {
                Box::new(|_| 0u8)
            } else {
                Box::new(move |v: f64| ((v.max(0.0) / peak) * 255.0).round() as u8)
            }
        }
        HeatmapMode::Signed => {
            let peak = min.abs().max(max.abs());
            if degenerate || peak == 0.0 {
                Box::new(|_| 128u8)
            } else {
                Box::new(move |v: f64| {
                    (128.0 + (v / peak) * 127.0).round().clamp(0.0, 255.0) as u8
                })
            }
        }
    };

    for j in (0..ny).rev() {
        for i in 0..nx {
            out.push(pixel(data[j * nx + i]));
        }
    }
    out
}
