//! Report, eigenfield and mesh writers.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lightlike_core::linalg;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::sweep::{Branch, Report};

/// Pretty JSON whose reals are written with 17 significant digits.
struct ExactFloats<'a>(PrettyFormatter<'a>);

fn write_real<W: ?Sized + Write>(w: &mut W, v: f64) -> io::Result<()> {
    if v.is_finite() {
        write!(w, "{v:.16e}")
    } else {
        w.write_all(b"null")
    }
}

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write_real(w, v)
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write_real(w, v as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    out.push(b'\n');
    out
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_report(path: &Path) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Eigenfield table: one row per node, parameter columns then the sorted
/// roots `s_1 … s_{n−1}` (blank where undefined).
pub fn eigenfields_csv(report: &Report) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = report.axis_names();
    header.extend((1..report.n).map(|h| format!("s_{h}")));
    w.write_record(&header).expect("in-memory CSV write");
    let real = |v: f64| format!("{v:.16e}");
    for node in &report.nodes {
        let mut row: Vec<String> = node.u.iter().map(|&v| real(v)).collect();
        let roots = node.maximal.as_ref().map(|m| m.roots.as_slice()).unwrap_or(&[]);
        for h in 0..report.n - 1 {
            row.push(roots.get(h).map(|&v| real(v)).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory CSV write");
    }
    w.into_inner().expect("in-memory CSV flush")
}

/// Point cloud over the grid with optional quad faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub coords: usize,
    pub vertices: Vec<Vec<f64>>,
    /// Focus index (`-1` for slices).
    pub focus: Vec<i32>,
    /// 0 fold, 1 conic, 2 unresolved, -1 none.
    pub label: Vec<i32>,
    pub node: Vec<usize>,
    pub faces: Vec<[usize; 4]>,
}

fn label_code(label: Option<&str>) -> i32 {
    match label {
        Some("fold") => 0,
        Some("conic") => 1,
        Some("unresolved") => 2,
        _ => -1,
    }
}

impl Mesh {
    fn new(coords: usize) -> Self {
        Self { coords, vertices: Vec::new(), focus: Vec::new(), label: Vec::new(), node: Vec::new(), faces: Vec::new() }
    }

    fn push(&mut self, point: &[f64], focus: i32, label: i32, node: usize) -> bool {
        match linalg::projective_normalize(point) {
            Ok(p) => {
                self.vertices.push(p);
                self.focus.push(focus);
                self.label.push(label);
                self.node.push(node);
                true
            }
            Err(_) => false,
        }
    }

    /// Quads between grid neighbours whose four corners all carry a vertex.
    fn grid_faces(&mut self, report: &Report) {
        let axes = report.grid_axes();
        if axes.len() != 2 {
            return;
        }
        let (r0, r1) = (axes[0].resolution, axes[1].resolution);
        let mut at = vec![None; r0 * r1];
        for (v, &node) in self.node.iter().enumerate() {
            at[node] = Some(v);
        }
        let span = |a: &lightlike_core::frames::GridAxis| if a.periodic { a.resolution } else { a.resolution - 1 };
        for j in 0..span(&axes[1]) {
            for i in 0..span(&axes[0]) {
                let (i1, j1) = ((i + 1) % r0, (j + 1) % r1);
                let corners = [i + r0 * j, i1 + r0 * j, i1 + r0 * j1, i + r0 * j1].map(|k| at[k]);
                if let [Some(a), Some(b), Some(c), Some(d)] = corners {
                    self.faces.push([a, b, c, d]);
                }
            }
        }
    }

    pub fn to_ply(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str("ply\nformat ascii 1.0\ncomment lightlike projective rows, unit norm\n");
        out.push_str(&format!("element vertex {}\n", self.vertices.len()));
        for name in coordinate_names(self.coords) {
            out.push_str(&format!("property double {name}\n"));
        }
        out.push_str("property int focus\nproperty int label\nproperty int node\n");
        out.push_str(&format!("element face {}\nproperty list uchar int vertex_indices\nend_header\n", self.faces.len()));
        for (k, v) in self.vertices.iter().enumerate() {
            let coords: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&format!("{} {} {} {}\n", coords.join(" "), self.focus[k], self.label[k], self.node[k]));
        }
        for f in &self.faces {
            out.push_str(&format!("4 {} {} {} {}\n", f[0], f[1], f[2], f[3]));
        }
        out.into_bytes()
    }
}

pub fn coordinate_names(count: usize) -> Vec<String> {
    const FIRST: [&str; 4] = ["x", "y", "z", "w"];
    (0..count).map(|k| if k < 4 { FIRST[k].to_string() } else { format!("p{k}") }).collect()
}

/// One focal manifold per root index `h`; nodes without a resolved root or
/// inside a near-umbilic dead band are left out.
pub fn focal_meshes(report: &Report) -> Vec<(String, Mesh)> {
    if report.axes.len() + 1 != report.n {
        return Vec::new();
    }
    (0..report.n - 1)
        .map(|h| {
            let mut mesh = Mesh::new(report.n + 2);
            for node in &report.nodes {
                let Some(mx) = node.maximal.as_ref().filter(|_| node.branch == Branch::Maximal) else { continue };
                let mut start = 0;
                for f in &mx.foci {
                    if h < start + f.multiplicity {
                        if !f.near_umbilic {
                            mesh.push(&f.point, h as i32, label_code(f.label.as_deref()), node.index);
                        }
                        break;
                    }
                    start += f.multiplicity;
                }
            }
            mesh.grid_faces(report);
            (format!("focal_{}.ply", h + 1), mesh)
        })
        .collect()
}

/// Slices `{A_n + s A_0}` of `U^n` at each configured gauge value.
pub fn slice_meshes(report: &Report) -> Vec<(String, Mesh)> {
    report
        .config
        .outputs
        .slices
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let mut mesh = Mesh::new(report.n + 2);
            for node in &report.nodes {
                if let Some(g) = &node.generator {
                    let z: Vec<f64> = g.an.iter().zip(&g.a0).map(|(x, y)| x + s * y).collect();
                    mesh.push(&z, -1, -1, node.index);
                }
            }
            mesh.grid_faces(report);
            (format!("slice_{k}.ply"), mesh)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Report,
    Eigenfields,
    Mesh,
}

/// Writes one artifact kind into `dir`, returning the written paths.
pub fn export(report: &Report, kind: ExportKind, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, bytes: Vec<u8>| -> Result<(), CliError> {
        let path = dir.join(name);
        write_file(&path, &bytes)?;
        written.push(path);
        Ok(())
    };
    match kind {
        ExportKind::Report => emit("report.json", to_json(report))?,
        ExportKind::Eigenfields => emit("eigenfields.csv", eigenfields_csv(report))?,
        ExportKind::Mesh => {
            for (name, mesh) in focal_meshes(report).into_iter().chain(slice_meshes(report)) {
                emit(&name, mesh.to_ply())?;
            }
        }
    }
    Ok(written)
}

/// Writes every artifact selected by the report's configuration.
pub fn export_selected(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let o = &report.config.outputs;
    let mut written = Vec::new();
    for (on, kind) in [(o.report, ExportKind::Report), (o.eigenfields, ExportKind::Eigenfields), (o.meshes, ExportKind::Mesh)] {
        if on {
            written.extend(export(report, kind, dir)?);
        }
    }
    Ok(written)
}
