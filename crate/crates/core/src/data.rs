// SPDX-License-Identifier: Apache-2.0

//! Binary datasets: CSV rows of `0`/`1` cells, grayscale thresholding and
//! bag-of-words presence vectors.
//!
//! In a labelled CSV the last column is the class label; blank lines are
//! skipped. The first row fixes the dimension.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tm::BitInput;

const CSV: &str = "CSV";
const PGM: &str = "PGM";

fn parse_rows(text: &str, labelled: bool) -> Result<Vec<BitInput>> {
    let mut out = Vec::new();
    let mut width = None;
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells = line
            .split(',')
            .map(|c| match c.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::parse(CSV, row, format!("cell `{other}` is not 0 or 1"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        match width {
            None => {
                if labelled && cells.len() < 2 {
                    return Err(Error::parse(CSV, row, "need at least one feature and a label"));
                }
                width = Some(cells.len());
            }
            Some(w) if w != cells.len() => {
                return Err(Error::parse(CSV, row, format!("expected {w} columns, found {}", cells.len())))
            }
            _ => {}
        }
        out.push(if labelled {
            let (label, bits) = cells.split_last().unwrap();
            BitInput::labeled(bits.to_vec(), *label as u8)
        } else {
            BitInput::new(cells)
        });
    }
    if out.is_empty() {
        return Err(Error::parse(CSV, 1, "no rows"));
    }
    Ok(out)
}

pub fn parse_binary_csv(text: &str) -> Result<Vec<BitInput>> {
    parse_rows(text, true)
}

/// Rows of features only, no label column.
pub fn parse_feature_csv(text: &str) -> Result<Vec<BitInput>> {
    parse_rows(text, false)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_binary_csv(path: impl AsRef<Path>) -> Result<Vec<BitInput>> {
    parse_binary_csv(&read(path.as_ref())?)
}

pub fn load_feature_csv(path: impl AsRef<Path>) -> Result<Vec<BitInput>> {
    parse_feature_csv(&read(path.as_ref())?)
}

/// Labelled CSV text; every row must carry a label.
pub fn to_binary_csv(data: &[BitInput]) -> Result<String> {
    let mut out = String::new();
    for (i, x) in data.iter().enumerate() {
        let label = x
            .label
            .ok_or_else(|| Error::Config(format!("row {} has no label", i + 1)))?;
        for &b in &x.bits {
            out.push(if b { '1' } else { '0' });
            out.push(',');
        }
        writeln!(out, "{label}").unwrap();
    }
    Ok(out)
}

pub fn save_binary_csv(path: impl AsRef<Path>, data: &[BitInput]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_binary_csv(data)?).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// Row-major intensities in 0..=255.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension {
                expected: width * height,
                got: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }
}

/// Bit `i` is 1 iff pixel `i` is strictly brighter than `threshold`.
pub fn binarize_grayscale(img: &GrayImage, threshold: u8) -> BitInput {
    BitInput::new(img.pixels.iter().map(|&p| p > threshold).collect())
}

/// Presence vector over `0..vocab_size`; repeated ids count once.
pub fn bag_of_words(tokens: &[usize], vocab_size: usize) -> Result<BitInput> {
    let mut bits = vec![false; vocab_size];
    for &t in tokens {
        *bits.get_mut(t).ok_or_else(|| {
            Error::Config(format!("word id {t} outside a vocabulary of {vocab_size}"))
        })? = true;
    }
    Ok(BitInput::new(bits))
}

/// Reads plain (`P2`) or raw (`P5`) PGM with maxval ≤ 255. Intensities are
/// rescaled to 0..=255 when maxval is smaller.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let mut line = 1;
    // Header tokens are whitespace separated; `#` starts a comment.
    let mut token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                if bytes[*pos] == b'\n' {
                    line += 1;
                }
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::parse(PGM, line, "unexpected end of data"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let magic = token(&mut pos)?;
    let number = |s: String, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::parse(PGM, 1, format!("bad {what} `{s}`")))
    };
    let width = number(token(&mut pos)?, "width")?;
    let height = number(token(&mut pos)?, "height")?;
    let maxval = number(token(&mut pos)?, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::parse(PGM, 1, format!("maxval {maxval} outside 1..=255")));
    }
    let count = width * height;
    let raw: Vec<usize> = match magic.as_str() {
        "P2" => (0..count)
            .map(|_| number(token(&mut pos)?, "pixel"))
            .collect::<Result<_>>()?,
        "P5" => {
            // exactly one whitespace byte separates maxval from the raster
            let start = pos + 1;
            let data = bytes
                .get(start..start + count)
                .ok_or_else(|| Error::parse(PGM, 1, format!("raster shorter than {count} bytes")))?;
            data.iter().map(|&b| b as usize).collect()
        }
        other => return Err(Error::parse(PGM, 1, format!("unsupported magic `{other}`"))),
    };
    let pixels = raw
        .into_iter()
        .map(|v| {
            if v > maxval {
                Err(Error::parse(PGM, 1, format!("pixel {v} exceeds maxval {maxval}")))
            } else {
                Ok((v * 255 / maxval) as u8)
            }
        })
        .collect::<Result<_>>()?;
    GrayImage::new(width, height, pixels)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    parse_pgm(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}
