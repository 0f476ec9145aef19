//! The shared coefficient file format.
//!
//! Text, line oriented: a header `N <half_width>` followed by one line
//! `n1 n2 re im` per stored mode, written in lattice order with full
//! round-trip float formatting. Readers reject frequencies outside the
//! declared box.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{fp, FourierCoeffs};

/// Serialize to the text format.
pub fn coeffs_to_string(coeffs: &FourierCoeffs) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N {}", coeffs.half_width());
    for (n, c) in coeffs.iter() {
        let _ = writeln!(out, "{} {} {} {}", n.n1, n.n2, c.re, c.im);
    }
    out
}

pub fn write_coeffs(coeffs: &FourierCoeffs, path: &Path) -> Result<()> {
    std::fs::write(path, coeffs_to_string(coeffs)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse the text format; `label` names the source in error messages.
pub fn coeffs_from_str(text: &str, label: &str) -> Result<FourierCoeffs> {
    let parse_err = |line: usize, reason: &str| Error::Parse {
        path: label.to_string(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty coefficient file"))?;
    let mut header_parts = header.split_whitespace();
    if header_parts.next() != Some("N") {
        return Err(parse_err(1, "expected header `N <half_width>`"));
    }
    let half_width: u32 = header_parts
        .next()
        .and_then(|tok| tok.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| parse_err(1, "half-width must be a positive integer"))?;

    let mut coeffs = FourierCoeffs::new(half_width);
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(parse_err(line_no, "expected `n1 n2 re im`"));
        }
        let n1: i64 = parts[0]
            .parse()
            .map_err(|_| parse_err(line_no, "bad integer frequency"))?;
        let n2: i64 = parts[1]
            .parse()
            .map_err(|_| parse_err(line_no, "bad integer frequency"))?;
        let re: f64 = parts[2]
            .parse()
            .map_err(|_| parse_err(line_no, "bad amplitude"))?;
        let im: f64 = parts[3]
            .parse()
            .map_err(|_| parse_err(line_no, "bad amplitude"))?;
        coeffs.insert(fp(n1, n2), Complex64::new(re, im))?;
    }
    Ok(coeffs)
}

pub fn read_coeffs(path: &Path) -> Result<FourierCoeffs> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    coeffs_from_str(&text, &path.display().to_string())
}
