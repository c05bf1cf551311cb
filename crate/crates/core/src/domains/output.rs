//! Map serialisation in the three artifact formats.
//!
//! CSV and PGM carry the resolved run configuration as a `#` comment line so
//! that every artifact is self-describing.

use std::io::{self, Write};

use serde_json::{json, Value};

use super::{region_stats, DomainMap, CLASS_WRONG_SIGN};

/// Gray level of a class. Feasible cells are white and each extra root darkens
/// the cell; the top root count and "wrong sign, no root" are both black.
pub fn class_gray(class: u8, max_roots: u32) -> u8 {
    if class == 0 {
        return 255;
    }
    if class == CLASS_WRONG_SIGN || max_roots == 0 {
        return 0;
    }
    let k = u32::from(class).min(max_roots);
    (255 * (max_roots - k) / max_roots) as u8
}

/// Binary P5 PGM; row 0 of the image is the largest `β` so `β` grows upward.
pub fn write_pgm<W: Write>(map: &DomainMap, config: &Value, mut w: W) -> io::Result<()> {
    let (width, height) = (map.width(), map.height());
    let max_roots = map.problem.max_root_count();
    writeln!(w, "P5")?;
    writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
    writeln!(w, "{width} {height}")?;
    writeln!(w, "255")?;
    let mut row = Vec::with_capacity(width);
    for j in (0..height).rev() {
        row.clear();
        row.extend((0..width).map(|i| class_gray(map.cell(i, j).class, max_roots)));
        w.write_all(&row)?;
    }
    w.flush()
}

pub fn write_csv<W: Write>(map: &DomainMap, config: &Value, mut w: W) -> io::Result<()> {
    writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
    let names: Vec<&str> = map.problem.constraints.as_slice().iter().map(|c| c.name()).collect();
    write!(w, "alpha,beta,gamma,class")?;
    for n in &names {
        write!(w, ",{n}_roots,{n}_sign")?;
    }
    writeln!(w, ",boundary_uncertain,degenerate")?;
    let gamma = map.spec.gamma.map(|g| g.to_string()).unwrap_or_default();
    for j in 0..map.height() {
        for i in 0..map.width() {
            let cell = map.cell(i, j);
            write!(
                w,
                "{},{},{},{}",
                map.spec.alpha.center(i),
                map.spec.beta.center(j),
                gamma,
                cell.class
            )?;
            for o in &cell.outcomes {
                write!(w, ",{},{}", o.roots, o.sign_at_start)?;
            }
            writeln!(w, ",{},{}", u8::from(cell.boundary_uncertain), u8::from(cell.degenerate))?;
        }
    }
    w.flush()
}

/// Sidecar metadata with the configuration and region statistics.
pub fn metadata(map: &DomainMap, config: &Value) -> Value {
    let stats = region_stats(map);
    let max_roots = map.problem.max_root_count();
    let legend: Vec<Value> = (0..=max_roots)
        .map(|k| json!({ "class": k, "gray": class_gray(k as u8, max_roots) }))
        .chain(std::iter::once(json!({
            "class": CLASS_WRONG_SIGN,
            "gray": class_gray(CLASS_WRONG_SIGN, max_roots),
            "meaning": "constraint fails without a root"
        })))
        .collect();
    json!({
        "config": config,
        "problem": map.problem,
        "grid": map.spec,
        "image_orientation": "rows top to bottom are beta descending, columns are alpha ascending",
        "max_root_count": max_roots,
        "legend": legend,
        "stats": stats,
        "degenerate": map.degenerate,
    })
}
