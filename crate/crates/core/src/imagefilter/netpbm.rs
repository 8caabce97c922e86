//! PGM/PPM in both ASCII (P2/P3) and binary (P5/P6) flavors, maxval <= 255.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use super::Channel;
use crate::error::{Error, Result};

/// Color plane of a PPM image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChannelSelect {
    Red,
    #[default]
    Green,
    Blue,
}

impl ChannelSelect {
    fn index(self) -> usize {
        match self {
            ChannelSelect::Red => 0,
            ChannelSelect::Green => 1,
            ChannelSelect::Blue => 2,
        }
    }
}

impl FromStr for ChannelSelect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "r" => Ok(ChannelSelect::Red),
            "green" | "g" => Ok(ChannelSelect::Green),
            "blue" | "b" => Ok(ChannelSelect::Blue),
            _ => Err(Error::arg(format!("unknown channel {s:?}; expected red, green or blue"))),
        }
    }
}

impl fmt::Display for ChannelSelect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelSelect::Red => "red",
            ChannelSelect::Green => "green",
            ChannelSelect::Blue => "blue",
        })
    }
}

/// A decoded image: one plane for PGM, three for PPM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub planes: Vec<Channel>,
}

impl Image {
    pub fn is_color(&self) -> bool {
        self.planes.len() == 3
    }

    /// The requested plane. Grayscale images have only one, which is
    /// returned whatever `sel` says.
    pub fn channel(&self, sel: ChannelSelect) -> &Channel {
        if self.is_color() {
            &self.planes[sel.index()]
        } else {
            &self.planes[0]
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::arg(format!("netpbm: expected {what} at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::arg(format!("netpbm: {what} out of range")))
    }
}

pub fn read_netpbm<R: Read>(mut reader: R) -> Result<Image> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let magic = bytes.get(..2).ok_or_else(|| Error::arg("netpbm: file too short"))?;
    let (planes, binary) = match magic {
        b"P2" => (1, false),
        b"P3" => (3, false),
        b"P5" => (1, true),
        b"P6" => (3, true),
        _ => return Err(Error::arg("netpbm: unsupported magic number; expected P2, P3, P5 or P6")),
    };
    let mut cur = Cursor { bytes: &bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::arg("netpbm: empty image"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::arg(format!("netpbm: maxval {maxval} unsupported (1..=255)")));
    }
    let count = width
        .checked_mul(height)
        .and_then(|x| x.checked_mul(planes))
        .ok_or_else(|| Error::arg("netpbm: dimensions overflow"))?;

    let samples: Vec<u8> = if binary {
        // exactly one whitespace byte separates the header from the raster
        if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(Error::arg("netpbm: missing whitespace before raster"));
        }
        let start = cur.pos + 1;
        let raster = bytes
            .get(start..start + count)
            .ok_or_else(|| Error::arg(format!("netpbm: raster truncated, expected {count} bytes")))?;
        raster.to_vec()
    } else {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let v = cur.number("sample")?;
            out.push(u8::try_from(v).map_err(|_| Error::arg(format!("netpbm: sample {v} exceeds 255")))?);
        }
        out
    };
    if let Some(&bad) = samples.iter().find(|&&s| s as usize > maxval) {
        return Err(Error::arg(format!("netpbm: sample {bad} exceeds maxval {maxval}")));
    }

    let planes = (0..planes)
        .map(|p| Channel { width, height, pixels: samples.iter().skip(p).step_by(planes).copied().collect() })
        .collect();
    Ok(Image { width, height, maxval: maxval as u16, planes })
}

/// Binary PGM with maxval 255.
pub fn write_pgm<W: Write>(ch: &Channel, mut out: W) -> Result<()> {
    write!(out, "P5\n{} {}\n255\n", ch.width, ch.height)?;
    out.write_all(&ch.pixels)?;
    Ok(())
}
