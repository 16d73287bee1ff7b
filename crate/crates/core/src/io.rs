//! Reading and writing phase data.
//!
//! Four formats are supported:
//!
//! * `csv`: one value per line, read back as a `1 × N` image.
//! * `mat-text`: one image row per line, values separated by whitespace.
//! * `f64-binary`: the bytes `S1PH`, `u32` rows, `u32` cols (little endian),
//!   then row-major little-endian `f64`.
//! * `png-hue`: 8-bit RGB with hue `(v + π) / 2π` and full saturation and
//!   value. Write only.
//!
//! Writes go to a temporary file in the target directory which is then
//! renamed over the destination.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::phase::PhaseImage;

pub const BINARY_MAGIC: &[u8; 4] = b"S1PH";
const BINARY_HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    MatText,
    F64Binary,
    PngHue,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(Format::Csv),
            "txt" | "mat" | "dat" => Some(Format::MatText),
            "bin" | "s1ph" | "f64" => Some(Format::F64Binary),
            "png" => Some(Format::PngHue),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::MatText => "mat-text",
            Format::F64Binary => "f64-binary",
            Format::PngHue => "png-hue",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "mat-text" => Ok(Format::MatText),
            "f64-binary" => Ok(Format::F64Binary),
            "png-hue" => Ok(Format::PngHue),
            other => Err(Error::invalid(format!(
                "unknown format {other:?} (expected csv, mat-text, f64-binary or png-hue)"
            ))),
        }
    }
}

fn parse_error(path: &Path, location: String, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        location,
        message: message.into(),
    }
}

/// Builds the image, wrapping out-of-range entries with a warning.
fn finish(path: &Path, rows: usize, cols: usize, values: Vec<f64>) -> Result<PhaseImage> {
    let outside = values
        .iter()
        .filter(|v| !(-std::f64::consts::PI..std::f64::consts::PI).contains(*v))
        .count();
    if outside > 0 {
        warn!(
            "{}: {outside} value(s) outside [-pi, pi) were wrapped",
            path.display()
        );
    }
    PhaseImage::new(rows, cols, values)
}

fn parse_value(path: &Path, token: &str, line: usize, column: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(path, format!("line {line}, column {column}"), format!("not a number: {token:?}")))?;
    if !v.is_finite() {
        return Err(parse_error(path, format!("line {line}, column {column}"), "value is not finite"));
    }
    Ok(v)
}

/// Parses the csv format from text.
pub fn parse_csv(path: &Path, text: &str) -> Result<PhaseImage> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let token = line.trim_end_matches(',').trim();
        if token.contains(',') {
            return Err(parse_error(path, format!("line {}", idx + 1), "expected one value per line"));
        }
        values.push(parse_value(path, token, idx + 1, 1)?);
    }
    if values.is_empty() {
        return Err(parse_error(path, "line 1".into(), "no values"));
    }
    let n = values.len();
    finish(path, 1, n, values)
}

/// Parses the mat-text format from text.
pub fn parse_mat_text(path: &Path, text: &str) -> Result<PhaseImage> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let before = values.len();
        for (c, token) in line.split_whitespace().enumerate() {
            values.push(parse_value(path, token, idx + 1, c + 1)?);
        }
        let width = values.len() - before;
        match cols {
            None => cols = Some(width),
            Some(w) if w != width => {
                return Err(parse_error(
                    path,
                    format!("line {}", idx + 1),
                    format!("expected {w} values, found {width}"),
                ))
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_error(path, "line 1".into(), "no values"))?;
    finish(path, rows, cols, values)
}

/// Parses the f64-binary format.
pub fn parse_binary(path: &Path, bytes: &[u8]) -> Result<PhaseImage> {
    if bytes.len() < BINARY_HEADER_LEN {
        return Err(parse_error(path, format!("offset {}", bytes.len()), "truncated header"));
    }
    if &bytes[0..4] != BINARY_MAGIC {
        return Err(parse_error(path, "offset 0".into(), "bad magic, expected S1PH"));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let body = &bytes[BINARY_HEADER_LEN..];
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| parse_error(path, "offset 4".into(), "dimensions overflow"))?;
    if body.len() != expected {
        return Err(parse_error(
            path,
            format!("offset {}", BINARY_HEADER_LEN + body.len().min(expected)),
            format!("expected {expected} data bytes for {rows}x{cols}, found {}", body.len()),
        ));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (k, chunk) in body.chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(parse_error(
                path,
                format!("offset {}", BINARY_HEADER_LEN + 8 * k),
                "value is not finite",
            ));
        }
        values.push(v);
    }
    finish(path, rows, cols, values)
}

/// Reads phase data; `format` defaults to the one implied by the extension.
pub fn read_phase_data(path: &Path, format: Option<Format>) -> Result<PhaseImage> {
    let format = resolve_format(path, format)?;
    match format {
        Format::Csv | Format::MatText => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let text = std::str::from_utf8(&bytes).map_err(|e| {
                parse_error(path, format!("offset {}", e.valid_up_to()), "not valid UTF-8 text")
            })?;
            if format == Format::Csv {
                parse_csv(path, text)
            } else {
                parse_mat_text(path, text)
            }
        }
        Format::F64Binary => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            parse_binary(path, &bytes)
        }
        Format::PngHue => Err(Error::Unsupported(
            "png-hue is an export format; 8-bit hue cannot be read back as phase".into(),
        )),
    }
}

fn resolve_format(path: &Path, format: Option<Format>) -> Result<Format> {
    format.or_else(|| Format::from_path(path)).ok_or_else(|| {
        Error::invalid(format!(
            "cannot infer the format of {}; pass --format",
            path.display()
        ))
    })
}

/// Serialises an image in the given format.
pub fn encode(img: &PhaseImage, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            if img.rows() != 1 && img.cols() != 1 {
                return Err(Error::invalid(format!(
                    "csv holds a single signal, got a {}x{} image; use mat-text",
                    img.rows(),
                    img.cols()
                )));
            }
            let mut out = String::with_capacity(img.as_slice().len() * 24);
            for v in img.as_slice() {
                out.push_str(&format!("{v:?}\n"));
            }
            Ok(out.into_bytes())
        }
        Format::MatText => {
            let mut out = String::with_capacity(img.as_slice().len() * 24);
            for i in 0..img.rows() {
                let row: Vec<String> = img.row(i).iter().map(|v| format!("{v:?}")).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        Format::F64Binary => {
            let rows = u32::try_from(img.rows()).map_err(|_| Error::invalid("too many rows for f64-binary"))?;
            let cols = u32::try_from(img.cols()).map_err(|_| Error::invalid("too many columns for f64-binary"))?;
            let mut out = Vec::with_capacity(BINARY_HEADER_LEN + 8 * img.as_slice().len());
            out.extend_from_slice(BINARY_MAGIC);
            out.extend_from_slice(&rows.to_le_bytes());
            out.extend_from_slice(&cols.to_le_bytes());
            out.extend_from_slice(&[0u8; 4]);
            for v in img.as_slice() {
                out.extend_from_slice(&v.to_le_bytes());
            }
            Ok(out)
        }
        Format::PngHue => encode_png(img),
    }
}

/// HSV to 8-bit RGB with saturation and value fixed at one.
pub fn hue_to_rgb(hue: f64) -> [u8; 3] {
    let h = (hue.rem_euclid(1.0)) * 6.0;
    let sector = h.floor();
    let f = h - sector;
    let (r, g, b) = match sector as u8 {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    let q = |c: f64| (c * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

/// Hue assigned to a canonical angle.
pub fn phase_hue(v: f64) -> f64 {
    (v + std::f64::consts::PI) / std::f64::consts::TAU
}

fn encode_png(img: &PhaseImage) -> Result<Vec<u8>> {
    let width = u32::try_from(img.cols()).map_err(|_| Error::invalid("image too wide for png"))?;
    let height = u32::try_from(img.rows()).map_err(|_| Error::invalid("image too tall for png"))?;
    let mut data = Vec::with_capacity(3 * img.as_slice().len());
    for &v in img.as_slice() {
        data.extend_from_slice(&hue_to_rgb(phase_hue(v)));
    }
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, width, height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::invalid(format!("png encoding failed: {e}")))?;
        writer
            .write_image_data(&data)
            .map_err(|e| Error::invalid(format!("png encoding failed: {e}")))?;
    }
    Ok(out)
}

/// Writes bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Writes phase data; `format` defaults to the one implied by the extension.
pub fn write_phase_data(path: &Path, img: &PhaseImage, format: Option<Format>) -> Result<()> {
    let format = resolve_format(path, format)?;
    write_atomic(path, &encode(img, format)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn hue_colors() {
        assert_eq!(hue_to_rgb(0.0), [255, 0, 0]);
        assert_eq!(hue_to_rgb(1.0 / 3.0), [0, 255, 0]);
        assert_eq!(hue_to_rgb(0.5), [0, 255, 255]);
        assert_eq!(hue_to_rgb(2.0 / 3.0), [0, 0, 255]);
        assert_eq!(phase_hue(0.0), 0.5);
        assert_eq!(phase_hue(-PI), 0.0);
    }

    #[test]
    fn csv_parse_errors_carry_lines() {
        let err = parse_csv(p(), "0.1\n0.2\nabc\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_csv(p(), "\n\n").is_err());
        let ok = parse_csv(p(), "# header\n0.5\n\n4.0\n").unwrap();
        assert_eq!(ok.shape(), (1, 2));
        assert!((ok.as_slice()[1] - (4.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn mat_text_ragged_rows() {
        let err = parse_mat_text(p(), "1 2 3\n1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let img = parse_mat_text(p(), "0.1 0.2\n0.3 0.4\n0.5 0.6\n").unwrap();
        assert_eq!(img.shape(), (3, 2));
    }

    #[test]
    fn binary_header_checks() {
        let img = PhaseImage::from_fn(2, 3, |i, j| 0.1 * (i + j) as f64).unwrap();
        let bytes = encode(&img, Format::F64Binary).unwrap();
        assert_eq!(&bytes[..4], b"S1PH");
        assert_eq!(bytes.len(), 16 + 48);
        assert_eq!(parse_binary(p(), &bytes).unwrap(), img);
        assert!(parse_binary(p(), &bytes[..20]).unwrap_err().to_string().contains("offset"));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(parse_binary(p(), &bad).is_err());
    }

    #[test]
    fn csv_rejects_images() {
        let img = PhaseImage::constant(2, 2, 0.0).unwrap();
        assert!(encode(&img, Format::Csv).is_err());
    }

    #[test]
    fn format_names() {
        for f in [Format::Csv, Format::MatText, Format::F64Binary, Format::PngHue] {
            assert_eq!(f.name().parse::<Format>().unwrap(), f);
        }
        assert_eq!(Format::from_path(Path::new("a/b.CSV")), Some(Format::Csv));
        assert_eq!(Format::from_path(Path::new("a/b")), None);
    }
}
