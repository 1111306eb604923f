//! Plain point files: a count `n` on the first line, then `n` lines of
//! `x y w`.

use std::io::BufRead;

use fmclp_core::{CrispInstance, DemandPoint};

use crate::error::{FormatError, Result};

pub fn load_points(reader: impl BufRead) -> Result<CrispInstance> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (first, header) = lines.next().ok_or(FormatError::EmptyInstance)?;
    let header = header?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| FormatError::at(first, format!("expected a point count, got {header:?}")))?;
    if n == 0 {
        return Err(FormatError::EmptyInstance);
    }
    let mut points = Vec::with_capacity(n);
    let mut last = first;
    for (line, text) in lines.by_ref().take(n) {
        let text = text?;
        last = line;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(FormatError::at(
                line,
                format!("expected `x y w`, got {} fields", fields.len()),
            ));
        }
        let mut v = [0.0; 3];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| FormatError::at(line, format!("not a number: {f:?}")))?;
        }
        points.push(DemandPoint {
            x: v[0],
            y: v[1],
            demand: v[2],
        });
    }
    if points.len() < n {
        return Err(FormatError::at(
            last + 1,
            format!("expected {n} points, found {}", points.len()),
        ));
    }
    CrispInstance::from_points(points).map_err(|e| match e {
        fmclp_core::Error::EmptyInstance => FormatError::EmptyInstance,
        e => e.into(),
    })
}

/// Inverse of [`load_points`] for the point list.
pub fn write_points(inst: &CrispInstance) -> String {
    let mut out = format!("{}\n", inst.points.len());
    for p in &inst.points {
        out.push_str(&format!("{} {} {}\n", p.x, p.y, p.demand));
    }
    out
}
