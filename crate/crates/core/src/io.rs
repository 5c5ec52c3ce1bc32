//! Text formats: point-set files, matrix exports, IDS curves, jump reports.
//!
//! Point-set files are plain text, one point per line with space-separated
//! decimal coordinates, preceded by a `# delone d=<d>` header. Writers add
//! informational `#` lines (generator, window, margin, decoration scale) that
//! readers may use or skip; coordinates are printed with the shortest
//! round-tripping decimal representation, so files carry full double
//! precision.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::{DeloneSet, GeneratorTag, Point, Window};
use crate::operators::AssembledOperator;
use crate::spectra::{IdsApproximant, JumpReport};

/// Writes a point-set file.
pub fn write_point_set(w: &mut impl Write, omega: &DeloneSet) -> Result<()> {
    writeln!(w, "# delone d={}", omega.dim())?;
    writeln!(w, "# generator {}", omega.generator().label())?;
    match omega.window() {
        Window::Box { center, half } => writeln!(w, "# window box half={half} center={center}")?,
        Window::Ball { center, radius } => {
            writeln!(w, "# window ball radius={radius} center={center}")?
        }
    }
    writeln!(w, "# margin {}", omega.margin())?;
    if let GeneratorTag::Decorated { r, pattern } = omega.generator() {
        writeln!(w, "# decorated r={r} pattern={pattern}")?;
    }
    for p in omega.points() {
        writeln!(w, "{p}")?;
    }
    Ok(())
}

fn parse_kv(line: &str, key: &str) -> Option<String> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")).map(str::to_string))
}

fn parse_f64(tok: &str, line_no: usize) -> Result<f64> {
    tok.parse().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("bad number {tok:?}"),
    })
}

/// Reads a point-set file. Window and margin headers are honored when
/// present; otherwise the window is the tight bounding box of the points and
/// the margin is zero. A decoration header restores the decorated tag so the
/// inverse derivation can recover the scale.
pub fn read_point_set(r: impl BufRead) -> Result<DeloneSet> {
    let mut dim: Option<usize> = None;
    let mut points: Vec<Point> = Vec::new();
    let mut window: Option<Window> = None;
    let mut window_half: Option<f64> = None;
    let mut window_radius: Option<f64> = None;
    let mut window_center: Option<Vec<f64>> = None;
    let mut margin = 0.0_f64;
    let mut decorated: Option<(f64, String)> = None;

    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(d) = parse_kv(rest, "d") {
                if rest.starts_with("delone") {
                    dim = Some(d.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad dimension {d:?}"),
                    })?);
                }
            }
            if rest.starts_with("window") {
                if let Some(h) = parse_kv(rest, "half") {
                    window_half = Some(parse_f64(&h, line_no)?);
                }
                if let Some(rad) = parse_kv(rest, "radius") {
                    window_radius = Some(parse_f64(&rad, line_no)?);
                }
                if let Some(pos) = rest.find("center=") {
                    let coords: Vec<f64> = rest[pos + 7..]
                        .split_whitespace()
                        .map(|t| parse_f64(t, line_no))
                        .collect::<Result<_>>()?;
                    window_center = Some(coords);
                }
            }
            if rest.starts_with("margin") {
                if let Some(tok) = rest.split_whitespace().nth(1) {
                    margin = parse_f64(tok, line_no)?;
                }
            }
            if rest.starts_with("decorated") {
                let r_val = parse_kv(rest, "r")
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: "decorated header without r=".into(),
                    })
                    .and_then(|t| parse_f64(&t, line_no))?;
                let pattern = parse_kv(rest, "pattern").unwrap_or_default();
                decorated = Some((r_val, pattern));
            }
            continue;
        }
        let coords: Vec<f64> = trimmed
            .split_whitespace()
            .map(|t| parse_f64(t, line_no))
            .collect::<Result<_>>()?;
        if let Some(d) = dim {
            if coords.len() != d {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {d} coordinates, found {}", coords.len()),
                });
            }
        } else {
            dim = Some(coords.len());
        }
        points.push(Point::new(coords));
    }

    let dim = dim.ok_or(Error::Parse {
        line: 0,
        msg: "empty point-set file".into(),
    })?;
    if let (Some(h), Some(c)) = (window_half, window_center.as_ref()) {
        window = Some(Window::box_at(Point::new(c.clone()), h));
    } else if let (Some(rad), Some(c)) = (window_radius, window_center.as_ref()) {
        window = Some(Window::ball(Point::new(c.clone()), rad));
    }
    let window = window.unwrap_or_else(|| bounding_box(&points, dim));
    let tag = match decorated {
        Some((r, pattern)) => GeneratorTag::Decorated { r, pattern },
        None => GeneratorTag::FromFile,
    };
    DeloneSet::from_points(points, window, margin, tag)
}

/// Tight bounding box (as a centered cube around the midrange point).
fn bounding_box(points: &[Point], dim: usize) -> Window {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for (a, c) in p.coords().iter().enumerate() {
            lo[a] = lo[a].min(*c);
            hi[a] = hi[a].max(*c);
        }
    }
    let center: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let half = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| 0.5 * (h - l))
        .fold(0.0_f64, f64::max);
    Window::box_at(Point::new(center), half.max(1e-9))
}

/// Writes the symmetric matrix in coordinate-list form: `i j value` with
/// 0-based indices, one line per unordered pair with a nonzero entry.
pub fn write_matrix_coo(w: &mut impl Write, a: &AssembledOperator) -> Result<()> {
    writeln!(w, "# symmetric n={}", a.dim())?;
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let v = a.matrix()[[i, j]];
            if v != 0.0 {
                writeln!(w, "{i} {j} {v}")?;
            }
        }
    }
    Ok(())
}

/// Writes the normalized counting function as a two-column `E N(E)` text
/// file, with both one-sided values at every jump point.
pub fn write_ids_curve(w: &mut impl Write, ids: &IdsApproximant) -> Result<()> {
    writeln!(w, "# ids curve {} volume={}", ids.label(), ids.volume())?;
    let mut prev: Option<f64> = None;
    for &e in ids.eigenvalues() {
        if prev == Some(e) {
            continue;
        }
        writeln!(w, "{e} {}", ids.counting_left(e))?;
        writeln!(w, "{e} {}", ids.counting(e))?;
        prev = Some(e);
    }
    Ok(())
}

/// Writes a jump report, one line per jump: energy, weight, multiplicity,
/// volume.
pub fn write_jump_report(w: &mut impl Write, report: &JumpReport) -> Result<()> {
    writeln!(
        w,
        "# jumps cluster_tol={} volume={}",
        report.cluster_tol, report.volume
    )?;
    for j in &report.jumps {
        writeln!(
            w,
            "E*={} weight={} multiplicity={} volume={}",
            j.energy, j.weight, j.multiplicity, report.volume
        )?;
    }
    Ok(())
}
