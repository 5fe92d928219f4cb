//! Text format for a gallery and its named sites:
//!
//! ```text
//! # comments run to end of line
//! polygon = [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)]
//! sites = {arm: (4, 1), top: (1/2, 3.75)}
//! ```
//!
//! Coordinates are integers, decimals or exact fractions `p/q`. Output always
//! uses integers or `p/q`, so a written file reads back to identical values.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::decomposition::{GuardSiteSet, Site, SiteError};
use crate::geom::{Point, Q};
use crate::polygon::{PolygonError, SimplePolygon};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryFile {
    pub polygon: Vec<Point>,
    pub sites: Vec<(String, Point)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `polygon = [...]`")]
    MissingPolygon,
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Site(#[from] SiteError),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { line: self.line, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                b' ' | b'\t' | b'\r' => self.pos += 1,
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected `{}`, found `{}`", c as char, x as char)),
            None => self.err(format!("expected `{}`, found end of input", c as char)),
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'"') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos] != b'"' {
                self.pos += 1;
            }
            if self.pos == self.src.len() {
                return self.err("unterminated string");
            }
            let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            self.pos += 1;
            return Ok(s);
        }
        let start = self.pos;
        while self.pos < self.src.len() && is_name_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<Q, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'0'..=b'9' | b'-' | b'+' | b'.' | b'/') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match parse_number(text) {
            Some(v) => Ok(v),
            None => self.err(format!("bad number `{text}`")),
        }
    }

    fn point(&mut self) -> Result<Point, ParseError> {
        self.expect(b'(')?;
        let x = self.number()?;
        self.expect(b',')?;
        let y = self.number()?;
        self.expect(b')')?;
        Ok(Point::new(x, y))
    }
}

fn is_name_byte(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'-' || c == b'\''
}

/// Integer, decimal (`-1.25`) or fraction (`3/4`, `-7/2`).
pub fn parse_number(text: &str) -> Option<Q> {
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let v = Q::new(digits, scale);
    Some(if neg { -v } else { v })
}

pub fn format_number(v: &Q) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn format_point(p: &Point) -> String {
    format!("({}, {})", format_number(&p.x), format_number(&p.y))
}

impl GalleryFile {
    pub fn parse(text: &str) -> Result<GalleryFile, ParseError> {
        let mut lx = Lexer { src: text.as_bytes(), pos: 0, line: 1 };
        let mut polygon = None;
        let mut sites = Vec::new();
        while lx.peek().is_some() {
            let key = lx.word()?;
            lx.expect(b'=')?;
            match key.as_str() {
                "polygon" => {
                    lx.expect(b'[')?;
                    let mut pts = Vec::new();
                    while lx.peek() != Some(b']') {
                        pts.push(lx.point()?);
                        if lx.peek() == Some(b',') {
                            lx.pos += 1;
                        }
                    }
                    lx.expect(b']')?;
                    polygon = Some(pts);
                }
                "sites" => {
                    lx.expect(b'{')?;
                    while lx.peek() != Some(b'}') {
                        let name = lx.word()?;
                        lx.expect(b':')?;
                        sites.push((name, lx.point()?));
                        if lx.peek() == Some(b',') {
                            lx.pos += 1;
                        }
                    }
                    lx.expect(b'}')?;
                }
                other => return lx.err(format!("unknown key `{other}`")),
            }
        }
        let polygon = polygon.ok_or(ParseError::MissingPolygon)?;
        Ok(GalleryFile { polygon, sites })
    }

    /// Validated gallery and site set.
    pub fn build(&self) -> Result<(SimplePolygon, GuardSiteSet), ParseError> {
        let poly = SimplePolygon::new(self.polygon.clone())?;
        let sites = self.sites.iter().map(|(n, p)| Site::new(n.clone(), p.clone())).collect();
        let sites = GuardSiteSet::new(&poly, sites)?;
        Ok((poly, sites))
    }

    pub fn from_gallery(poly: &SimplePolygon, sites: &GuardSiteSet) -> GalleryFile {
        GalleryFile {
            polygon: poly.vertices().to_vec(),
            sites: sites.sites().iter().map(|s| (s.name.clone(), s.point.clone())).collect(),
        }
    }
}

impl fmt::Display for GalleryFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.polygon.iter().map(format_point).collect();
        writeln!(f, "polygon = [{}]", pts.join(", "))?;
        let mut s = String::new();
        for (i, (name, p)) in self.sites.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            if !name.is_empty() && name.bytes().all(is_name_byte) {
                s.push_str(name);
            } else {
                write!(s, "\"{name}\"")?;
            }
            write!(s, ": {}", format_point(p))?;
        }
        writeln!(f, "sites = {{{s}}}")
    }
}
