//! Triangle meshes of the formed surfaces.
//!
//! Each piece is triangulated in its flat frame and then mapped through the
//! forming map, so the mesh is exact at its vertices. The rolled band is
//! meshed column by column in `x` (a column is the ruling segment between the
//! lower and upper boundary); the flat band is a bilinear grid over its four
//! straight sides. Both share the vertices on the tangent line. Columns that
//! shrink to a point become fans.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::Point2;

use crate::curves::{eval_plane_cylinder, eval_two_cylinder, OffsetSign};
use crate::error::{Error, Result};
use crate::forming::FormedModel;
use crate::geom::{P2, V3};
use crate::pattern::Piece;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Stl,
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Stl => "stl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshOptions {
    /// Columns across the rolled band.
    pub columns: usize,
    /// Vertices per column minus one.
    pub rows: usize,
    /// Subdivisions across the flat band.
    pub flat_steps: usize,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            columns: 96,
            rows: 24,
            flat_steps: 12,
        }
    }
}

/// A named group of triangles sharing one vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub name: String,
    pub vertices: Vec<V3>,
    pub triangles: Vec<[u32; 3]>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub groups: Vec<Group>,
}

impl Mesh {
    pub fn triangle_count(&self) -> usize {
        self.groups.iter().map(|g| g.triangles.len()).sum()
    }

    /// Adds every group of `other` with `prefix` prepended to its name.
    pub fn append(&mut self, other: Mesh, prefix: &str) {
        for mut g in other.groups {
            g.name = format!("{prefix}{}", g.name);
            self.groups.push(g);
        }
    }
}

/// Flat-frame triangulation of one piece.
struct FlatMesh {
    vertices: Vec<P2>,
    triangles: Vec<[u32; 3]>,
}

impl FlatMesh {
    fn push(&mut self, p: P2) -> u32 {
        self.vertices.push(p);
        (self.vertices.len() - 1) as u32
    }

    /// A column of `rows + 1` vertices, or one vertex when it has no height.
    fn column(&mut self, x: f64, lo: f64, hi: f64, rows: usize, eps: f64) -> Vec<u32> {
        if hi - lo <= eps {
            return vec![self.push(Point2::new(x, 0.5 * (lo + hi)))];
        }
        (0..=rows)
            .map(|i| self.push(Point2::new(x, lo + (hi - lo) * i as f64 / rows as f64)))
            .collect()
    }

    /// Joins two columns with `a` on the left.
    fn stitch(&mut self, a: &[u32], b: &[u32]) {
        match (a.len(), b.len()) {
            (1, 1) => {}
            (1, _) => {
                for i in 0..b.len() - 1 {
                    self.triangles.push([a[0], b[i], b[i + 1]]);
                }
            }
            (_, 1) => {
                for i in 0..a.len() - 1 {
                    self.triangles.push([a[i], b[0], a[i + 1]]);
                }
            }
            _ => {
                for i in 0..a.len() - 1 {
                    self.triangles.push([a[i], b[i], b[i + 1]]);
                    self.triangles.push([a[i], b[i + 1], a[i + 1]]);
                }
            }
        }
    }

    /// Bilinear grid over the quad with the shared column `edge` (running
    /// from `c0` to `c1`) on its right and `far0 → far1` on its left.
    fn flat_band(&mut self, edge: &[u32], c0: P2, c1: P2, far0: P2, far1: P2, steps: usize) {
        let rows = edge.len() - 1;
        let mut prev: Vec<u32> = edge.to_vec();
        for j in 1..=steps {
            let v = j as f64 / steps as f64;
            let col: Vec<u32> = (0..=rows)
                .map(|i| {
                    let u = i as f64 / rows as f64;
                    let near = c0 + (c1 - c0) * u;
                    let far = far0 + (far1 - far0) * u;
                    self.push(near + (far - near) * v)
                })
                .collect();
            // `col` lies left of `prev`.
            self.stitch(&col, &prev);
            prev = col;
        }
    }
}

/// `x` positions from 0 to `x_max` hitting every breakpoint exactly.
fn column_positions(breaks: &[f64], columns: usize) -> Vec<f64> {
    let total = breaks.last().copied().unwrap_or(0.0);
    let mut xs = vec![0.0];
    let mut start = 0.0;
    for &b in breaks {
        let n = ((columns as f64 * (b - start) / total).ceil() as usize).max(1);
        for k in 1..=n {
            xs.push(if k == n {
                b
            } else {
                start + (b - start) * k as f64 / n as f64
            });
        }
        start = b;
    }
    xs
}

fn primary_flat(m: &FormedModel, opts: &MeshOptions) -> Result<FlatMesh> {
    let p = &m.pattern;
    let fp = &p.forming_parameters;
    let r = p.inputs.r;
    let lo = -p.inputs.apex_distance;
    let mut fm = FlatMesh {
        vertices: Vec::new(),
        triangles: Vec::new(),
    };
    let xs = column_positions(&[fp.x_end], opts.columns);
    let mut cols = Vec::with_capacity(xs.len());
    for &x in &xs {
        let hi = eval_two_cylinder(x, r, fp.alpha_int, fp.beta_int, fp.offset_a)?;
        cols.push(fm.column(x, lo, hi, opts.rows, 1e-9 * r));
    }
    for w in cols.windows(2) {
        fm.stitch(&w[0], &w[1]);
    }
    let q = p.landmarks.bend_top;
    fm.flat_band(
        &cols[0].clone(),
        Point2::new(0.0, lo),
        Point2::origin(),
        Point2::new(q.x, lo),
        q,
        opts.flat_steps,
    );
    Ok(fm)
}

fn wing_flat(m: &FormedModel, opts: &MeshOptions) -> Result<FlatMesh> {
    let p = &m.pattern;
    let fp = &p.forming_parameters;
    let r = p.inputs.r;
    let x_end = fp.x_end;
    let xc = p.landmarks.corner_x;
    let interior = |x: f64| eval_two_cylinder(x, r, fp.alpha_int, fp.beta_int, fp.offset_a).map(|y| -y);
    let end = |x: f64| eval_plane_cylinder(x, r, fp.phi_end, fp.rho_end, fp.offset_b, OffsetSign::PlusB);
    let bottom = |x: f64| match fp.offset_c {
        Some(c) => eval_plane_cylinder(x, r, fp.psi_bot, fp.nu_bot, c, OffsetSign::MinusC),
        None => Ok(f64::NAN),
    };

    let breaks = if (xc - x_end).abs() < 1e-9 * r {
        vec![x_end]
    } else {
        vec![xc.min(x_end), xc.max(x_end)]
    };
    let xs = column_positions(&breaks, opts.columns);
    let mut fm = FlatMesh {
        vertices: Vec::new(),
        triangles: Vec::new(),
    };
    let mut cols = Vec::with_capacity(xs.len());
    for &x in &xs {
        let lo = if x <= x_end { interior(x)? } else { bottom(x)? };
        let hi = if x <= xc { end(x)? } else { bottom(x)? };
        if !(lo.is_finite() && hi.is_finite()) || hi < lo - 1e-9 * r {
            return Err(Error::geometry("mesh", format!("wing column at x′ = {x} is inverted")));
        }
        cols.push(fm.column(x, lo, hi, opts.rows, 1e-9 * r));
    }
    for w in cols.windows(2) {
        fm.stitch(&w[0], &w[1]);
    }
    let cs2 = &p.frames.cs2;
    let top = cs2.to_local(p.landmarks.wing_top_end);
    let bend = cs2.to_local(p.landmarks.bend_top);
    fm.flat_band(
        &cols[0].clone(),
        Point2::origin(),
        Point2::new(0.0, fp.wing_width),
        bend,
        top,
        opts.flat_steps,
    );
    Ok(fm)
}

pub fn build_mesh(m: &FormedModel, opts: &MeshOptions) -> Result<Mesh> {
    let mut groups = Vec::new();
    for (piece, flat) in [
        (Piece::Primary, primary_flat(m, opts)?),
        (Piece::Wing, wing_flat(m, opts)?),
    ] {
        groups.push(Group {
            name: match piece {
                Piece::Primary => "primary".into(),
                Piece::Wing => "wing".into(),
            },
            vertices: flat.vertices.iter().map(|&q| m.map(piece, q)).collect(),
            triangles: flat.triangles,
        });
    }
    Ok(Mesh { groups })
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".into()
    } else {
        s
    }
}

pub fn obj_string(mesh: &Mesh) -> String {
    let mut s = String::from("# units: mm\n");
    let mut base = 1u32;
    for g in &mesh.groups {
        let _ = writeln!(s, "g {}", g.name);
        for v in &g.vertices {
            let _ = writeln!(s, "v {} {} {}", num(v.x), num(v.y), num(v.z));
        }
        for t in &g.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + base, t[1] + base, t[2] + base);
        }
        base += g.vertices.len() as u32;
    }
    s
}

pub fn stl_bytes(mesh: &Mesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangle_count());
    let mut header = [0u8; 80];
    let tag = b"cyl-unwrap binary STL, units mm";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.triangle_count() as u32).to_le_bytes());
    for g in &mesh.groups {
        for t in &g.triangles {
            let [a, b, c] = t.map(|i| g.vertices[i as usize]);
            let n = (b - a).cross(&(c - a));
            let n = if n.norm() > 0.0 { n.normalize() } else { n };
            for v in [n, a, b, c] {
                for k in 0..3 {
                    out.extend_from_slice(&(v[k] as f32).to_le_bytes());
                }
            }
            out.extend_from_slice(&0u16.to_le_bytes());
        }
    }
    out
}

pub fn export_mesh(mesh: &Mesh, path: impl AsRef<Path>, format: MeshFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        MeshFormat::Obj => obj_string(mesh).into_bytes(),
        MeshFormat::Stl => stl_bytes(mesh),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
