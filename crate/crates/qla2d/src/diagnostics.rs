//! Conserved and monitored quantities: total energy (the lattice 2-norm of
//! the qubit field, which in Dyson variables is the electromagnetic energy),
//! divergence metrics, the Poynting field, per-region energy partition and
//! energy centroids, plus the CSV ledger.
//!
//! All reductions run over a fixed tree shape (sequential within a row,
//! sequential over row partials) so results are bit-identical for any
//! worker count.

use crate::error::{QlaError, Result};
use crate::lattice::{Axis, DielectricMap, LatticeGeometry, QubitField};
use rayon::prelude::*;
use std::io::Write;

/// Boolean site mask for region bookkeeping.
#[derive(Debug, Clone)]
pub struct RegionMask {
    geom: LatticeGeometry,
    mask: Vec<bool>,
}

impl RegionMask {
    pub fn full(geom: LatticeGeometry) -> Self {
        RegionMask {
            geom,
            mask: vec![true; geom.sites()],
        }
    }

    pub fn empty(geom: LatticeGeometry) -> Self {
        RegionMask {
            geom,
            mask: vec![false; geom.sites()],
        }
    }

    pub fn from_fn(geom: LatticeGeometry, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut mask = vec![false; geom.sites()];
        for j in 0..geom.ny() {
            for i in 0..geom.nx() {
                mask[j * geom.nx() + i] = f(i, j);
            }
        }
        RegionMask { geom, mask }
    }

    /// Sites on the low-coordinate side of a halfspace split (region 1).
    pub fn halfspace(geom: LatticeGeometry, axis: Axis, split_fraction: f64) -> Self {
        match axis {
            Axis::X => {
                let split = split_fraction * geom.nx() as f64;
                Self::from_fn(geom, |i, _| (i as f64) < split)
            }
            Axis::Y => {
                let split = split_fraction * geom.ny() as f64;
                Self::from_fn(geom, |_, j| (j as f64) < split)
            }
        }
    }

    pub fn complement(&self) -> Self {
        RegionMask {
            geom: self.geom,
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geom
    }

    #[inline]
    pub fn contains(&self, k: usize) -> bool {
        self.mask[k]
    }
}

/// Permutation-invariant sum of squares: square, sort ascending, fold
/// sequentially. Sorting makes the result independent of the site order, so
/// streaming (a pure permutation of a component) leaves energies bit-exactly
/// unchanged, and the result is identical for any worker count.
fn sorted_sum_of_squares(values: &[f64], mask: Option<&[bool]>) -> f64 {
    let mut squares: Vec<f64> = match mask {
        None => values.par_iter().map(|v| v * v).collect(),
        Some(m) => values
            .par_iter()
            .zip(m.par_iter())
            .filter(|(_, keep)| **keep)
            .map(|(v, _)| v * v)
            .collect(),
    };
    squares.par_sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    squares.iter().sum()
}

/// Total energy: sum over sites of Σᵢ qᵢ².
pub fn total_energy(field: &QubitField) -> f64 {
    (0..6)
        .map(|c| sorted_sum_of_squares(field.component(c), None))
        .sum()
}

/// Energy restricted to masked sites.
pub fn region_energy(field: &QubitField, mask: &RegionMask) -> f64 {
    assert_eq!(field.geometry(), mask.geometry());
    (0..6)
        .map(|c| sorted_sum_of_squares(field.component(c), Some(&mask.mask)))
        .sum()
}

/// Energy-weighted mean site position over masked sites.
pub fn energy_centroid(field: &QubitField, mask: &RegionMask) -> Result<(f64, f64)> {
    assert_eq!(field.geometry(), mask.geometry());
    let geom = field.geometry();
    let nx = geom.nx();
    let rows: Vec<(f64, f64, f64)> = (0..geom.ny())
        .into_par_iter()
        .map(|j| {
            let (mut w, mut wx) = (0.0, 0.0);
            for i in 0..nx {
                if !mask.mask[j * nx + i] {
                    continue;
                }
                let mut e = 0.0;
                for c in 0..6 {
                    let v = field.component(c)[j * nx + i];
                    e += v * v;
                }
                w += e;
                wx += e * i as f64;
            }
            (w, wx, w * j as f64)
        })
        .collect();
    let (mut w, mut wx, mut wy) = (0.0, 0.0, 0.0);
    for (a, b, c) in rows {
        w += a;
        wx += b;
        wy += c;
    }
    if w <= 0.0 {
        return Err(QlaError::ZeroMaskedEnergy);
    }
    Ok((wx / w, wy / w))
}

/// Divergence diagnostics from centered differences on the periodic lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceMetrics {
    /// max |∇·H|
    pub div_h_max: f64,
    /// max |∇·(εE)| / max |E_i| (0 when the field vanishes)
    pub div_e_rel: f64,
}

pub fn divergence_metrics(field: &QubitField, map: &DielectricMap) -> DivergenceMetrics {
    assert_eq!(field.geometry(), map.geometry());
    let geom = field.geometry();
    let rows: Vec<(f64, f64, f64)> = (0..geom.ny() as isize)
        .into_par_iter()
        .map(|j| {
            let mut div_h = 0.0f64;
            let mut div_e = 0.0f64;
            let mut e_max = 0.0f64;
            for i in 0..geom.nx() as isize {
                // H = (q3, q4); dHx/dx + dHy/dy
                let dh = 0.5 * (field.get(3, i + 1, j) - field.get(3, i - 1, j))
                    + 0.5 * (field.get(4, i, j + 1) - field.get(4, i, j - 1));
                div_h = div_h.max(dh.abs());
                // eps_i E_i = n_i^2 E_i = n_i q_i
                let exq = |ii: isize, jj: isize| {
                    map.n(0)[geom.idx(ii, jj)] * field.get(0, ii, jj)
                };
                let eyq = |ii: isize, jj: isize| {
                    map.n(1)[geom.idx(ii, jj)] * field.get(1, ii, jj)
                };
                let de = 0.5 * (exq(i + 1, j) - exq(i - 1, j))
                    + 0.5 * (eyq(i, j + 1) - eyq(i, j - 1));
                div_e = div_e.max(de.abs());
                let k = geom.idx(i, j);
                for c in 0..3 {
                    e_max = e_max.max((field.component(c)[k] * map.inv_n(c)[k]).abs());
                }
            }
            (div_h, div_e, e_max)
        })
        .collect();
    let (mut div_h, mut div_e, mut e_max) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b, c) in rows {
        div_h = div_h.max(a);
        div_e = div_e.max(b);
        e_max = e_max.max(c);
    }
    DivergenceMetrics {
        div_h_max: div_h,
        div_e_rel: if e_max > 0.0 { div_e / e_max } else { 0.0 },
    }
}

/// In-plane Poynting vector S = E × H per site: (S_x, S_y).
pub fn poynting_field(field: &QubitField, map: &DielectricMap) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(field.geometry(), map.geometry());
    let sites = field.geometry().sites();
    let mut sx = vec![0.0; sites];
    let mut sy = vec![0.0; sites];
    let (q0, q1, q2) = (field.component(0), field.component(1), field.component(2));
    let (q3, q4, q5) = (field.component(3), field.component(4), field.component(5));
    let (inx, iny, inz) = (map.inv_n(0), map.inv_n(1), map.inv_n(2));
    sx.par_iter_mut()
        .zip(sy.par_iter_mut())
        .enumerate()
        .for_each(|(k, (px, py))| {
            let ex = q0[k] * inx[k];
            let ey = q1[k] * iny[k];
            let ez = q2[k] * inz[k];
            let (hx, hy, hz) = (q3[k], q4[k], q5[k]);
            *px = ey * hz - ez * hy;
            *py = ez * hx - ex * hz;
        });
    (sx, sy)
}

/// One diagnostics row of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub t: u64,
    pub e_total: f64,
    pub e_region1: f64,
    pub e_region2: f64,
    pub div_h_max: f64,
    pub div_e_rel: f64,
    pub cx: f64,
    pub cy: f64,
}

/// Time series of monitored quantities; rows strictly increasing in t and
/// E_total always the exact sum of the two region energies.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    rows: Vec<LedgerRow>,
}

pub const LEDGER_HEADER: &str = "t,E_total,E_region1,E_region2,divH_max,divE_rel,cx,cy";

impl EnergyLedger {
    pub fn new() -> Self {
        EnergyLedger { rows: Vec::new() }
    }

    /// Measure the field and append a row.
    pub fn record(
        &mut self,
        t: u64,
        field: &QubitField,
        map: &DielectricMap,
        region1: &RegionMask,
    ) {
        let e1 = region_energy(field, region1);
        let e2 = region_energy(field, &region1.complement());
        let div = divergence_metrics(field, map);
        let (cx, cy) = energy_centroid(field, &RegionMask::full(field.geometry()))
            .unwrap_or((f64::NAN, f64::NAN));
        self.push(LedgerRow {
            t,
            e_total: e1 + e2,
            e_region1: e1,
            e_region2: e2,
            div_h_max: div.div_h_max,
            div_e_rel: div.div_e_rel,
            cx,
            cy,
        });
    }

    pub fn push(&mut self, row: LedgerRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "ledger rows must be strictly increasing in t");
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[LedgerRow] {
        &self.rows
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{LEDGER_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, r.e_total, r.e_region1, r.e_region2, r.div_h_max, r.div_e_rel, r.cx, r.cy
            )?;
        }
        Ok(())
    }
}
