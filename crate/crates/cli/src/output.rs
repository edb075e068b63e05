//! CSV and Wavefront OBJ writers for realized immersions.

use std::collections::HashMap;

use sksphere::{Grid, ImmersionSample};

use crate::json::format_float;

/// Column names for arity `m`.
pub fn csv_header(m: usize) -> Vec<String> {
    let mut h = vec!["sample_index".to_string()];
    for k in 1..=m {
        h.push(format!("re_z{k}"));
        h.push(format!("im_z{k}"));
    }
    h.extend((1..=m).map(|k| format!("x{k}")));
    h.extend((1..=m).map(|k| format!("y{k}")));
    h.push("u".into());
    h.push("detG".into());
    for i in 1..=2 * m {
        for j in i..=2 * m {
            h.push(format!("g_{i}_{j}"));
        }
    }
    h.push("flags".into());
    h
}

fn csv_row(s: &ImmersionSample) -> Vec<String> {
    let n = s.g.order();
    let mut row = vec![s.index.to_string()];
    for z in &s.z {
        row.push(format_float(z.re));
        row.push(format_float(z.im));
    }
    row.extend(s.x.iter().chain(&s.y).map(|v| format_float(*v)));
    row.push(format_float(s.u));
    row.push(format_float(s.det_g));
    for i in 0..n {
        for j in i..n {
            row.push(format_float(s.g.get(i, j)));
        }
    }
    row.push(s.flags.to_string());
    row
}

pub fn samples_csv(m: usize, samples: &[ImmersionSample]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(m))?;
    for s in samples {
        w.write_record(csv_row(s))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ASCII output"))
}

/// Surface mesh of `Φ = (x, y, u)` for a one-dimensional grid: one vertex per
/// sample in grid order and two triangles per cell whose four corners were
/// all emitted.
pub fn surface_obj(grid: &Grid, samples: &[ImmersionSample]) -> String {
    assert_eq!(grid.arity(), 1, "mesh export needs m = 1");
    let mut out = String::new();
    let mut vertex: HashMap<usize, usize> = HashMap::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        out.push_str(&format!("v {} {} {}\n", format_float(s.x[0]), format_float(s.y[0]), format_float(s.u)));
        vertex.insert(s.index, k + 1);
    }
    let (nx, nv) = (grid.axes()[0].n, grid.axes()[1].n);
    for i in 0..nx - 1 {
        for j in 0..nv - 1 {
            let corner = |a: usize, b: usize| vertex.get(&grid.flat_index(&[a, b])).copied();
            if let (Some(a), Some(b), Some(c), Some(d)) =
                (corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1))
            {
                out.push_str(&format!("f {a} {b} {c}\nf {a} {c} {d}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        assert_eq!(
            csv_header(1),
            ["sample_index", "re_z1", "im_z1", "x1", "y1", "u", "detG", "g_1_1", "g_1_2", "g_2_2", "flags"]
        );
        assert_eq!(csv_header(2).len(), 1 + 4 + 4 + 2 + 10 + 1);
    }
}
