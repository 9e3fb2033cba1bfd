//! Lattice geometry, the six-amplitude qubit field, the dielectric map and
//! conversions to physical fields.
//!
//! The evolved state is a set of six real amplitudes per site,
//! `q0..q2` holding the index-scaled electric field (`q_i = n_i E_i`) and
//! `q3..q5` the magnetic field, so that the lattice 2-norm of the field is
//! the total electromagnetic energy. Storage is structure-of-arrays: one
//! scalar lattice per amplitude, row-major with x fastest, periodic in both
//! axes.

use crate::error::{QlaError, Result};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub const MIN_SITES: usize = 8;
pub const NUM_COMPONENTS: usize = 6;

/// Principal axes of the 2D lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Periodic rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeGeometry {
    nx: usize,
    ny: usize,
}

impl LatticeGeometry {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < MIN_SITES || ny < MIN_SITES {
            return Err(QlaError::LatticeTooSmall {
                nx,
                ny,
                min: MIN_SITES,
            });
        }
        Ok(LatticeGeometry { nx, ny })
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.nx * self.ny
    }

    /// Flat index of site (i, j) with periodic wrapping.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    #[inline]
    pub fn site(&self, flat: usize) -> (usize, usize) {
        (flat % self.nx, flat / self.nx)
    }
}

/// The six qubit amplitudes over the lattice, one scalar field each.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitField {
    geom: LatticeGeometry,
    q: [Vec<f64>; 6],
}

impl QubitField {
    /// All-zero field.
    pub fn new(geom: LatticeGeometry) -> Self {
        let zeros = || vec![0.0; geom.sites()];
        QubitField {
            geom,
            q: [zeros(), zeros(), zeros(), zeros(), zeros(), zeros()],
        }
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geom
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[f64] {
        &self.q[c]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.q[c]
    }

    /// Mutable access to two distinct components at once (collision pairs).
    #[inline]
    pub fn pair_mut(&mut self, a: usize, b: usize) -> (&mut [f64], &mut [f64]) {
        assert!(a != b);
        if a < b {
            let (lo, hi) = self.q.split_at_mut(b);
            (&mut lo[a], &mut hi[0])
        } else {
            let (lo, hi) = self.q.split_at_mut(a);
            (&mut hi[0], &mut lo[b])
        }
    }

    #[inline]
    pub fn get(&self, c: usize, i: isize, j: isize) -> f64 {
        self.q[c][self.geom.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: isize, j: isize, value: f64) {
        let k = self.geom.idx(i, j);
        self.q[c][k] = value;
    }

    /// First non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<QlaError> {
        for (c, comp) in self.q.iter().enumerate() {
            if let Some(k) = comp.iter().position(|v| !v.is_finite()) {
                let (i, j) = self.geom.site(k);
                return Some(QlaError::NonFiniteField { component: c, i, j });
            }
        }
        None
    }

    pub fn max_abs_diff(&self, other: &QubitField) -> f64 {
        let mut m = 0.0f64;
        for c in 0..6 {
            for (a, b) in self.q[c].iter().zip(other.q[c].iter()) {
                m = m.max((a - b).abs());
            }
        }
        m
    }

    /// Write the snapshot format: one ASCII header line
    /// `QLA2D v1 <nx> <ny> <ncomp> <t>` followed by row-major little-endian
    /// f64 payload, components outermost (x varies fastest within a row).
    pub fn write_snapshot<W: Write>(&self, mut w: W, t: u64) -> std::io::Result<()> {
        write_snapshot_header(&mut w, self.geom, 6, t)?;
        for comp in &self.q {
            write_f64_le(&mut w, comp)?;
        }
        Ok(())
    }

    pub fn read_snapshot<R: Read>(r: R, path: &Path) -> Result<(QubitField, u64)> {
        let (geom, ncomp, t, mut reader) = read_snapshot_header(r, path)?;
        if ncomp != 6 {
            return Err(QlaError::BadSnapshot {
                path: path.to_path_buf(),
                reason: format!("expected 6 components, found {ncomp}"),
            });
        }
        let mut field = QubitField::new(geom);
        for c in 0..6 {
            read_f64_le(&mut reader, &mut field.q[c], path)?;
        }
        Ok((field, t))
    }
}

/// Write a single-component lattice (e.g. derived H_z) in the snapshot format.
pub fn write_scalar_snapshot<W: Write>(
    mut w: W,
    geom: LatticeGeometry,
    data: &[f64],
    t: u64,
) -> std::io::Result<()> {
    assert_eq!(data.len(), geom.sites());
    write_snapshot_header(&mut w, geom, 1, t)?;
    write_f64_le(&mut w, data)
}

/// Read any snapshot (6-component or scalar); returns components, geometry, t.
pub fn read_any_snapshot<R: Read>(
    r: R,
    path: &Path,
) -> Result<(LatticeGeometry, Vec<Vec<f64>>, u64)> {
    let (geom, ncomp, t, mut reader) = read_snapshot_header(r, path)?;
    let mut comps = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        let mut data = vec![0.0; geom.sites()];
        read_f64_le(&mut reader, &mut data, path)?;
        comps.push(data);
    }
    Ok((geom, comps, t))
}

fn write_snapshot_header<W: Write>(
    w: &mut W,
    geom: LatticeGeometry,
    ncomp: usize,
    t: u64,
) -> std::io::Result<()> {
    writeln!(w, "QLA2D v1 {} {} {} {}", geom.nx(), geom.ny(), ncomp, t)
}

fn read_snapshot_header<R: Read>(
    r: R,
    path: &Path,
) -> Result<(LatticeGeometry, usize, u64, BufReader<R>)> {
    let mut reader = BufReader::new(r);
    let mut header = String::new();
    reader
        .read_line(&mut header)
        .map_err(|e| QlaError::io(path, e))?;
    let bad = |reason: &str| QlaError::BadSnapshot {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 6 || parts[0] != "QLA2D" || parts[1] != "v1" {
        return Err(bad("header is not 'QLA2D v1 <nx> <ny> <ncomp> <t>'"));
    }
    let nx: usize = parts[2].parse().map_err(|_| bad("bad nx"))?;
    let ny: usize = parts[3].parse().map_err(|_| bad("bad ny"))?;
    let ncomp: usize = parts[4].parse().map_err(|_| bad("bad ncomp"))?;
    let t: u64 = parts[5].parse().map_err(|_| bad("bad t"))?;
    let geom = LatticeGeometry::new(nx, ny)?;
    Ok((geom, ncomp, t, reader))
}

fn write_f64_le<W: Write>(w: &mut W, data: &[f64]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(data.len() * 8);
    for v in data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)
}

fn read_f64_le<R: Read>(r: &mut R, out: &mut [f64], path: &Path) -> Result<()> {
    let mut buf = vec![0u8; out.len() * 8];
    r.read_exact(&mut buf).map_err(|e| QlaError::io(path, e))?;
    for (k, chunk) in buf.chunks_exact(8).enumerate() {
        out[k] = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Ok(())
}

/// Per-site diagonal refractive index with cached reciprocals and centered
/// axis differences of the reciprocals. Caches are recomputed on every
/// mutation so they are never stale.
#[derive(Debug, Clone)]
pub struct DielectricMap {
    geom: LatticeGeometry,
    /// n_x, n_y, n_z
    n: [Vec<f64>; 3],
    /// 1/n_i
    inv_n: [Vec<f64>; 3],
    /// centered d/dx of 1/n_i
    dx_inv_n: [Vec<f64>; 3],
    /// centered d/dy of 1/n_i
    dy_inv_n: [Vec<f64>; 3],
}

impl DielectricMap {
    /// Homogeneous medium of scalar index `n`.
    pub fn uniform(geom: LatticeGeometry, n: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(QlaError::NonPositiveIndex { value: n });
        }
        let mut map = DielectricMap {
            geom,
            n: [
                vec![n; geom.sites()],
                vec![n; geom.sites()],
                vec![n; geom.sites()],
            ],
            inv_n: [vec![], vec![], vec![]],
            dx_inv_n: [vec![], vec![], vec![]],
            dy_inv_n: [vec![], vec![], vec![]],
        };
        map.recompute_caches();
        Ok(map)
    }

    /// Scalar index from an arbitrary per-site function (applied to all three
    /// axes). Rejects non-positive values.
    pub fn from_fn(geom: LatticeGeometry, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut map = DielectricMap::uniform(geom, 1.0)?;
        for j in 0..geom.ny() {
            for i in 0..geom.nx() {
                let v = f(i, j);
                if !(v > 0.0) || !v.is_finite() {
                    return Err(QlaError::NonPositiveIndex { value: v });
                }
                let k = j * geom.nx() + i;
                map.n[0][k] = v;
                map.n[1][k] = v;
                map.n[2][k] = v;
            }
        }
        map.recompute_caches();
        Ok(map)
    }

    /// Two half-spaces of scalar index split along `axis` at `split_fraction`
    /// of the lattice extent, with an optional tanh ramp of `smoothing_width`
    /// sites across the interface.
    ///
    /// The ramp is centered on the boundary between the last "left" site and
    /// the first "right" site, so a width of zero gives exactly two distinct
    /// index values and widths below one site act as sub-site interface
    /// averaging.
    pub fn set_halfspace(
        &mut self,
        axis: Axis,
        split_fraction: f64,
        n_left: f64,
        n_right: f64,
        smoothing_width: f64,
    ) -> Result<()> {
        if !(n_left > 0.0) || !n_left.is_finite() {
            return Err(QlaError::NonPositiveIndex { value: n_left });
        }
        if !(n_right > 0.0) || !n_right.is_finite() {
            return Err(QlaError::NonPositiveIndex { value: n_right });
        }
        if !(split_fraction > 0.0 && split_fraction < 1.0) {
            return Err(QlaError::InvalidSplitFraction {
                value: split_fraction,
            });
        }
        if !(smoothing_width >= 0.0) || !smoothing_width.is_finite() {
            return Err(QlaError::NegativeSmoothingWidth {
                value: smoothing_width,
            });
        }
        let extent = match axis {
            Axis::X => self.geom.nx(),
            Axis::Y => self.geom.ny(),
        };
        let split_site = split_fraction * extent as f64;
        // Ramp center sits between sites; split_site counts sites on the left.
        let center = split_site - 0.5;
        let profile: Vec<f64> = (0..extent)
            .map(|s| {
                if smoothing_width == 0.0 {
                    if (s as f64) < split_site {
                        n_left
                    } else {
                        n_right
                    }
                } else {
                    let u = (s as f64 - center) / smoothing_width;
                    n_left + (n_right - n_left) * 0.5 * (1.0 + u.tanh())
                }
            })
            .collect();
        for j in 0..self.geom.ny() {
            for i in 0..self.geom.nx() {
                let v = match axis {
                    Axis::X => profile[i],
                    Axis::Y => profile[j],
                };
                let k = j * self.geom.nx() + i;
                self.n[0][k] = v;
                self.n[1][k] = v;
                self.n[2][k] = v;
            }
        }
        self.recompute_caches();
        Ok(())
    }

    fn recompute_caches(&mut self) {
        let sites = self.geom.sites();
        for c in 0..3 {
            self.inv_n[c] = self.n[c].iter().map(|v| 1.0 / v).collect();
            let mut dx = vec![0.0; sites];
            let mut dy = vec![0.0; sites];
            for j in 0..self.geom.ny() as isize {
                for i in 0..self.geom.nx() as isize {
                    let k = self.geom.idx(i, j);
                    dx[k] = 0.5
                        * (self.inv_n[c][self.geom.idx(i + 1, j)]
                            - self.inv_n[c][self.geom.idx(i - 1, j)]);
                    dy[k] = 0.5
                        * (self.inv_n[c][self.geom.idx(i, j + 1)]
                            - self.inv_n[c][self.geom.idx(i, j - 1)]);
                }
            }
            self.dx_inv_n[c] = dx;
            self.dy_inv_n[c] = dy;
        }
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geom
    }

    /// Index component along lattice axis 0=x, 1=y, 2=z.
    #[inline]
    pub fn n(&self, c: usize) -> &[f64] {
        &self.n[c]
    }

    #[inline]
    pub fn inv_n(&self, c: usize) -> &[f64] {
        &self.inv_n[c]
    }

    /// Centered difference of 1/n_c along `axis`.
    #[inline]
    pub fn d_inv_n(&self, axis: Axis, c: usize) -> &[f64] {
        match axis {
            Axis::X => &self.dx_inv_n[c],
            Axis::Y => &self.dy_inv_n[c],
        }
    }
}

/// Electric and magnetic fields in lattice units (eps0 = mu0 = 1).
#[derive(Debug, Clone)]
pub struct PhysicalFields {
    geom: LatticeGeometry,
    /// E_x, E_y, E_z, H_x, H_y, H_z
    pub f: [Vec<f64>; 6],
}

impl PhysicalFields {
    pub fn new(geom: LatticeGeometry) -> Self {
        let zeros = || vec![0.0; geom.sites()];
        PhysicalFields {
            geom,
            f: [zeros(), zeros(), zeros(), zeros(), zeros(), zeros()],
        }
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geom
    }
}

fn check_same_geometry(a: LatticeGeometry, b: LatticeGeometry) -> Result<()> {
    if a != b {
        return Err(QlaError::GeometryMismatch {
            expected_nx: a.nx(),
            expected_ny: a.ny(),
            nx: b.nx(),
            ny: b.ny(),
        });
    }
    Ok(())
}

/// Invert the index scaling: `E_i = q_i / n_i`, `H = (q3, q4, q5)`.
pub fn to_physical(field: &QubitField, map: &DielectricMap) -> Result<PhysicalFields> {
    check_same_geometry(field.geometry(), map.geometry())?;
    let mut phys = PhysicalFields::new(field.geometry());
    for c in 0..3 {
        let inv = map.inv_n(c);
        for (k, v) in field.component(c).iter().enumerate() {
            phys.f[c][k] = v * inv[k];
        }
        phys.f[c + 3].copy_from_slice(field.component(c + 3));
    }
    Ok(phys)
}

/// Apply the index scaling: `q_i = n_i E_i` for i = 0..2, `q3..q5 = H`.
pub fn from_physical(phys: &PhysicalFields, map: &DielectricMap) -> Result<QubitField> {
    check_same_geometry(phys.geometry(), map.geometry())?;
    let mut field = QubitField::new(phys.geometry());
    for c in 0..3 {
        let n = map.n(c);
        for (k, v) in phys.f[c].iter().enumerate() {
            field.q[c][k] = v * n[k];
        }
        field.q[c + 3].copy_from_slice(&phys.f[c + 3]);
    }
    Ok(field)
}
