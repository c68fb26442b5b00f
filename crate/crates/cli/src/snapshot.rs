//! Plane snapshots: a 2D slice of the field including boundary nodes,
//! written as little-endian f32 (row-major) with a plain-text sidecar.

use acwave::compact::{FaceData, FaceId};
use acwave::grid::{Axis, Field3D, Grid};
use acwave::{Error, Result};
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// A slice through the full grid (boundary included).
#[derive(Debug, Clone, PartialEq)]
pub struct Slice2D {
    pub axis: Axis,
    /// Full-grid index along `axis`, `0..=n+1`.
    pub index: usize,
    pub t: f64,
    /// Row and column counts; rows run along the first remaining axis.
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

/// Row/column axes of a slice normal to `axis`.
pub fn slice_axes(axis: Axis) -> (Axis, Axis) {
    match axis {
        Axis::X => (Axis::Y, Axis::Z),
        Axis::Y => (Axis::X, Axis::Z),
        Axis::Z => (Axis::X, Axis::Y),
    }
}

/// Full-grid node counts of a slice normal to `axis` (boundary rows and
/// columns included).
pub fn slice_dims(grid: &Grid, axis: Axis) -> (usize, usize) {
    let (ra, ca) = slice_axes(axis);
    (grid.n(ra) + 2, grid.n(ca) + 2)
}

/// Extract the plane `axis = index` of the field, using the face data
/// for boundary nodes. Lower-axis faces win on edges and corners.
pub fn snapshot_slice(
    field: &Field3D,
    faces: &FaceData,
    grid: &Grid,
    axis: Axis,
    index: usize,
    t: f64,
) -> Result<Slice2D> {
    assert_eq!(field.dims(), grid.dims());
    if index > grid.n(axis) + 1 {
        return Err(Error::InvalidArgument(format!(
            "slice index {index} out of range 0..={}",
            grid.n(axis) + 1
        )));
    }
    let (rows, cols) = slice_dims(grid, axis);
    let mut data = vec![0.0; rows * cols];
    let [nx, ny, nz] = grid.dims();
    for r in 0..rows {
        for c in 0..cols {
            // full-grid indices of this point
            let (fi, fj, fk) = match axis {
                Axis::X => (index, r, c),
                Axis::Y => (r, index, c),
                Axis::Z => (r, c, index),
            };
            let x = grid.coord(Axis::X, fi);
            let y = grid.coord(Axis::Y, fj);
            let z = grid.coord(Axis::Z, fk);
            let v = if fi == 0 {
                (faces.face(FaceId::XMin).value)(t, y, z)
            } else if fi == nx + 1 {
                (faces.face(FaceId::XMax).value)(t, y, z)
            } else if fj == 0 {
                (faces.face(FaceId::YMin).value)(t, x, z)
            } else if fj == ny + 1 {
                (faces.face(FaceId::YMax).value)(t, x, z)
            } else if fk == 0 {
                (faces.face(FaceId::ZMin).value)(t, x, y)
            } else if fk == nz + 1 {
                (faces.face(FaceId::ZMax).value)(t, x, y)
            } else {
                field.get(fi - 1, fj - 1, fk - 1)
            };
            data[r * cols + c] = v;
        }
    }
    Ok(Slice2D {
        axis,
        index,
        t,
        rows,
        cols,
        data,
    })
}

fn axis_letter(axis: Axis) -> char {
    match axis {
        Axis::X => 'x',
        Axis::Y => 'y',
        Axis::Z => 'z',
    }
}

/// Write `<dir>/slice_<axis><index>_t<time>.f32` plus its `.meta`
/// sidecar; values are downcast to little-endian f32, row-major.
pub fn write_slice(dir: &Path, slice: &Slice2D, grid: &Grid) -> std::io::Result<(PathBuf, PathBuf)> {
    let stem = format!(
        "slice_{}{}_t{:.6}",
        axis_letter(slice.axis),
        slice.index,
        slice.t
    );
    let bin_path = dir.join(format!("{stem}.f32"));
    let meta_path = dir.join(format!("{stem}.meta"));

    let mut bytes = Vec::with_capacity(slice.data.len() * 4);
    for &v in &slice.data {
        bytes.extend_from_slice(&(v as f32).to_le_bytes());
    }
    std::fs::write(&bin_path, bytes)?;

    let (ra, ca) = slice_axes(slice.axis);
    let mut meta = std::fs::File::create(&meta_path)?;
    writeln!(meta, "t = {:.15e}", slice.t)?;
    writeln!(meta, "axis = {}", axis_letter(slice.axis))?;
    writeln!(meta, "index = {}", slice.index)?;
    writeln!(meta, "rows = {}", slice.rows)?;
    writeln!(meta, "cols = {}", slice.cols)?;
    writeln!(meta, "row_axis = {}", axis_letter(ra))?;
    writeln!(meta, "col_axis = {}", axis_letter(ca))?;
    writeln!(meta, "h_row = {:.15e}", grid.h(ra))?;
    writeln!(meta, "h_col = {:.15e}", grid.h(ca))?;
    writeln!(meta, "format = f32le row-major")?;
    Ok((bin_path, meta_path))
}
