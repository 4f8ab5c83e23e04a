use crate::error::{Error, Result};

/// A grayscale image with intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidArgument(format!("intensity {p} outside [0, 1]")));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// 8-bit binary PGM encoding, intensities rounded to the nearest level.
    pub fn to_pgm(&self) -> Vec<u8> {
        let levels: Vec<u8> = self
            .pixels
            .iter()
            .map(|p| (p * 255.0).round() as u8)
            .collect();
        encode_pgm_p5(self.width, self.height, &levels)
    }
}

/// Binary PGM with `maxval = 255`.
pub fn encode_pgm_p5(width: usize, height: usize, levels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(levels);
    out
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(|c| !c.is_ascii_whitespace() && *c != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| std::str::from_utf8(&self.data[start..self.pos]).ok())
            .flatten()
    }

    fn header_number(&mut self, what: &str) -> Result<u64> {
        let tok = self
            .token()
            .ok_or_else(|| Error::BadHeader(format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| Error::BadHeader(format!("invalid {what} {tok:?}")))
    }
}

/// Decodes ASCII (`P2`) or binary (`P5`) PGM, 8- or 16-bit, scaling samples
/// by `1/maxval`.
pub fn parse_pgm(data: &[u8]) -> Result<Image> {
    let mut cur = Cursor { data, pos: 0 };
    let magic = cur.token().unwrap_or("");
    let binary = match magic {
        "P2" => false,
        "P5" => true,
        other => return Err(Error::BadMagic(other.chars().take(16).collect())),
    };
    let width = cur.header_number("width")? as usize;
    let height = cur.header_number("height")? as usize;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::BadHeader(format!("empty image {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::BadMaxval(maxval));
    }
    let expected = width * height;
    let mut samples = Vec::with_capacity(expected);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if !data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(Error::BadHeader("missing separator after maxval".into()));
        }
        let raster = &data[cur.pos + 1..];
        let bytes_per = if maxval < 256 { 1 } else { 2 };
        let found = raster.len() / bytes_per;
        if found < expected {
            return Err(Error::Truncated { expected, found });
        }
        for chunk in raster.chunks_exact(bytes_per).take(expected) {
            let v = if bytes_per == 1 {
                chunk[0] as u64
            } else {
                u16::from_be_bytes([chunk[0], chunk[1]]) as u64
            };
            samples.push(v);
        }
    } else {
        while samples.len() < expected {
            match cur.token() {
                Some(tok) => samples.push(
                    tok.parse()
                        .map_err(|_| Error::BadHeader(format!("invalid sample {tok:?}")))?,
                ),
                None => {
                    return Err(Error::Truncated {
                        expected,
                        found: samples.len(),
                    })
                }
            }
        }
    }
    if let Some(v) = samples.iter().find(|v| **v > maxval) {
        return Err(Error::BadHeader(format!("sample {v} exceeds maxval {maxval}")));
    }
    let scale = maxval as f64;
    Image::new(width, height, samples.iter().map(|&v| v as f64 / scale).collect())
}
