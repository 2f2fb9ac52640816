//! Text formats.
//!
//! A matrix file holds `n` on the first line followed by `n` rows of `n`
//! space-separated entries. Binary adjacencies are written as `0`/`1`; weighted
//! matrices use 12 significant digits (see [`format_sig`]).
//!
//! A sample directory contains `network_00000.txt`, `network_00001.txt`, … and a
//! `manifest.json` recording the model parameters, sample size and seed.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frechet::BarycenterResult;
use crate::graph::{BinaryAdjacency, NetworkSample, SbmParams, WeightedAdjacency};

pub const SIGNIFICANT_DIGITS: usize = 12;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Formats `x` with `digits` significant digits, `%g` style but keeping
/// trailing zeros: fixed notation for decimal exponents in `[-5, digits)`,
/// scientific otherwise. Always uses `.` as the decimal separator.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn write_binary_matrix<W: Write>(mut w: W, g: &BinaryAdjacency) -> Result<()> {
    writeln!(w, "{}", g.n())?;
    for i in 0..g.n() {
        let row: Vec<String> = (0..g.n()).map(|j| g.get(i, j).to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn write_weighted_matrix<W: Write>(mut w: W, m: &DMatrix<f64>) -> Result<()> {
    writeln!(w, "{}", m.nrows())?;
    for row in m.row_iter() {
        let row: Vec<String> = row
            .iter()
            .map(|&x| format_sig(x, SIGNIFICANT_DIGITS))
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Parses the matrix text format into a dense matrix of raw entries.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad entry {t:?} in row {i}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        values.extend(row);
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("trailing content after {n} rows")));
    }
    Ok(DMatrix::from_row_slice(n, n, &values))
}

pub fn parse_binary_matrix(text: &str) -> Result<BinaryAdjacency> {
    let m = parse_matrix(text)?;
    let rows: Vec<Vec<u8>> = m
        .row_iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .map(|&x| match x {
                    0.0 => Ok(0),
                    1.0 => Ok(1),
                    x => Err(Error::Parse(format!("entry {x} in row {i} is not 0/1"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    BinaryAdjacency::from_rows(&rows)
}

pub fn parse_weighted_matrix(text: &str) -> Result<WeightedAdjacency> {
    WeightedAdjacency::new(parse_matrix(text)?)
}

pub fn read_binary_matrix(path: &Path) -> Result<BinaryAdjacency> {
    parse_binary_matrix(&fs::read_to_string(path)?)
}

pub fn read_weighted_matrix(path: &Path) -> Result<WeightedAdjacency> {
    parse_weighted_matrix(&fs::read_to_string(path)?)
}

pub fn save_binary_matrix(path: &Path, g: &BinaryAdjacency) -> Result<()> {
    let mut buf = Vec::new();
    write_binary_matrix(&mut buf, g)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn save_weighted_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let mut buf = Vec::new();
    write_weighted_matrix(&mut buf, m)?;
    fs::write(path, buf)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub params: Option<SbmParams>,
    pub sample_size: usize,
    pub seed: Option<u64>,
    pub files: Vec<String>,
}

pub fn network_file_name(k: usize) -> String {
    format!("network_{k:05}.txt")
}

/// Writes every network of `sample` plus the manifest into `dir` (created if needed).
pub fn write_sample_dir(
    dir: &Path,
    sample: &NetworkSample,
    params: Option<&SbmParams>,
) -> Result<SampleManifest> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(sample.len());
    for (k, g) in sample.iter().enumerate() {
        let name = network_file_name(k);
        save_binary_matrix(&dir.join(&name), g)?;
        files.push(name);
    }
    let manifest = SampleManifest {
        params: params.copied(),
        sample_size: sample.len(),
        seed: sample.seed(),
        files,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(manifest)
}

pub fn read_sample_dir(dir: &Path) -> Result<(NetworkSample, SampleManifest)> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    let manifest: SampleManifest =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if manifest.files.len() != manifest.sample_size {
        return Err(Error::Parse(format!(
            "manifest lists {} files for sample_size {}",
            manifest.files.len(),
            manifest.sample_size
        )));
    }
    let networks = manifest
        .files
        .iter()
        .map(|f| read_binary_matrix(&dir.join(f)))
        .collect::<Result<Vec<_>>>()?;
    Ok((NetworkSample::new(networks, manifest.seed)?, manifest))
}

/// JSON sidecar written next to a reconstructed barycenter matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarycenterSidecar {
    pub alpha: f64,
    pub round_trip_residual: f64,
    pub min_entry: f64,
    pub max_entry: f64,
}

impl From<&BarycenterResult> for BarycenterSidecar {
    fn from(r: &BarycenterResult) -> Self {
        Self {
            alpha: r.alpha,
            round_trip_residual: r.round_trip_residual,
            min_entry: r.min_entry(),
            max_entry: r.max_entry(),
        }
    }
}

/// Writes `barycenter.txt`, `mean_resistance.txt` and `barycenter.json` into `dir`.
pub fn write_barycenter(dir: &Path, result: &BarycenterResult) -> Result<()> {
    fs::create_dir_all(dir)?;
    save_weighted_matrix(
        &dir.join("barycenter.txt"),
        result.reconstructed.as_matrix(),
    )?;
    save_weighted_matrix(
        &dir.join("mean_resistance.txt"),
        result.mean_resistance.as_matrix(),
    )?;
    let json = serde_json::to_string_pretty(&BarycenterSidecar::from(result))
        .map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(dir.join("barycenter.json"), json + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.5, 12), "0.500000000000");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(-1.25, 12), "-1.25000000000");
        assert_eq!(format_sig(123456.0, 12), "123456.000000");
        assert_eq!(format_sig(1e-7, 12), "1.00000000000e-7");
        assert_eq!(format_sig(3e15, 12), "3.00000000000e15");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(9.9999999999999, 12), "10.0000000000");
        let x = 0.0693333333333333;
        let back: f64 = format_sig(x, 12).parse().unwrap();
        assert!((back - x).abs() <= 1e-12 * x);
    }

    #[test]
    fn binary_matrix_text() {
        let g = BinaryAdjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut buf = Vec::new();
        write_binary_matrix(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "3\n0 1 0\n1 0 1\n0 1 0\n");
        assert_eq!(parse_binary_matrix(&text).unwrap(), g);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2\n0 1\n").is_err());
        assert!(parse_matrix("2\n0 1\n1 0 0\n").is_err());
        assert!(parse_matrix("2\n0 x\n1 0\n").is_err());
        assert!(parse_matrix("1\n0\n0\n").is_err());
        assert!(parse_binary_matrix("2\n0 0.5\n0.5 0\n").is_err());
        assert!(parse_binary_matrix("2\n0 1\n0 0\n").is_err());
    }

    #[test]
    fn sample_directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let params = SbmParams::new(6, 0.7, 0.2).unwrap();
        let sample = crate::graph::sample_sbm(&params, 4, 9).unwrap();
        let manifest = write_sample_dir(dir.path(), &sample, Some(&params)).unwrap();
        assert_eq!(manifest.files[3], "network_00003.txt");
        let (back, m) = read_sample_dir(dir.path()).unwrap();
        assert_eq!(back, sample);
        assert_eq!(m.params, Some(params));
        assert_eq!(m.seed, Some(9));
    }
}
