//! Text front end for link constructions.
//!
//! Grammar (integers may be negative):
//!
//! ```text
//! link := torus(m, n)
//!       | torus_in_solid(e, p, q)
//!       | torus_in_thick(e, p, q)
//!       | keychain(e)
//!       | parallel_in_solid(e, k)
//!       | unknot | hopf
//!       | sum(link, idx, link, idx)
//!       | cable(link, idx, e, p, q)
//!       | delete(link, idx)
//! ```
//!
//! `torus(m, n)` is gcd-split into `T(ep, eq)` at parse time; all other
//! semantic validation is deferred to `build_link`.

use std::fmt;

use num_integer::Integer;

use crate::link::LinkSpec;

/// A parsed program: source text, the link tree, optional coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslProgram {
    pub source: String,
    pub spec: LinkSpec,
    pub coeffs: Option<Vec<i64>>,
}

/// Largest integer accepted by the parser; keeps every downstream product of
/// two parameters inside 64 bits.
pub const MAX_INT: i64 = 1_000_000;

/// Syntax error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '(' | ')' | ',' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Spanned {
                    tok: match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        _ => Tok::Comma,
                    },
                    line: tline,
                    col: tcol,
                });
            }
            '-' | '0'..='9' => {
                let mut text = String::new();
                if c == '-' {
                    text.push(c);
                    chars.next();
                    bump(c, &mut line, &mut col);
                }
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let value = text.parse::<i64>().ok().filter(|v| v.abs() <= MAX_INT).ok_or(
                    ParseError {
                        line: tline,
                        col: tcol,
                        message: format!("integer `{text}` outside the supported range ±{MAX_INT}"),
                    },
                )?;
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: tline,
                    col: tcol,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        text.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(text),
                    line: tline,
                    col: tcol,
                });
            }
            _ => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn error_here(&self, message: String) -> ParseError {
        let (line, col) = self
            .tokens
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .or_else(|| self.tokens.last().map(|s| (s.line, s.col + 1)))
            .unwrap_or((1, 1));
        ParseError { line, col, message }
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        let s = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.error_here("unexpected end of input".to_string()))?;
        self.pos += 1;
        Ok(s)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let s = self.next()?;
        if s.tok == tok {
            Ok(())
        } else {
            Err(ParseError {
                line: s.line,
                col: s.col,
                message: format!("expected {what}"),
            })
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let s = self.next()?;
        match s.tok {
            Tok::Int(v) => Ok(v),
            _ => Err(ParseError {
                line: s.line,
                col: s.col,
                message: "expected an integer".to_string(),
            }),
        }
    }

    fn comma(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Comma, "`,`")
    }

    fn link(&mut self) -> Result<LinkSpec, ParseError> {
        let s = self.next()?;
        let name = match s.tok {
            Tok::Ident(name) => name,
            _ => {
                return Err(ParseError {
                    line: s.line,
                    col: s.col,
                    message: "expected a link constructor".to_string(),
                })
            }
        };
        match name.as_str() {
            "unknot" => Ok(LinkSpec::unknot()),
            "hopf" => Ok(LinkSpec::hopf()),
            "torus" => {
                self.expect(Tok::LParen, "`(`")?;
                let m = self.int()?;
                self.comma()?;
                let n = self.int()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(split_torus(m, n))
            }
            "torus_in_solid" => {
                let (e, p, q) = self.three_ints()?;
                Ok(LinkSpec::TorusInSolidTorus { e, p, q })
            }
            "torus_in_thick" => {
                let (e, p, q) = self.three_ints()?;
                Ok(LinkSpec::TorusInThickenedTorus { e, p, q })
            }
            "keychain" => {
                self.expect(Tok::LParen, "`(`")?;
                let e = self.int()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LinkSpec::Keychain { e })
            }
            "parallel_in_solid" => {
                self.expect(Tok::LParen, "`(`")?;
                let e = self.int()?;
                self.comma()?;
                let k = self.int()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LinkSpec::ParallelInSolidTorus { e, k })
            }
            "sum" => {
                self.expect(Tok::LParen, "`(`")?;
                let left = self.link()?;
                self.comma()?;
                let lc = self.index()?;
                self.comma()?;
                let right = self.link()?;
                self.comma()?;
                let rc = self.index()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LinkSpec::sum(left, lc, right, rc))
            }
            "cable" => {
                self.expect(Tok::LParen, "`(`")?;
                let base = self.link()?;
                self.comma()?;
                let comp = self.index()?;
                self.comma()?;
                let e = self.int()?;
                self.comma()?;
                let p = self.int()?;
                self.comma()?;
                let q = self.int()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LinkSpec::cable(base, comp, e, p, q))
            }
            "delete" => {
                self.expect(Tok::LParen, "`(`")?;
                let base = self.link()?;
                self.comma()?;
                let comp = self.index()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LinkSpec::delete(base, comp))
            }
            other => Err(ParseError {
                line: s.line,
                col: s.col,
                message: format!("unknown constructor `{other}`"),
            }),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let s = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.error_here("unexpected end of input".to_string()))?;
        let v = self.int()?;
        if v < 1 {
            return Err(ParseError {
                line: s.line,
                col: s.col,
                message: format!("component index must be positive, got {v}"),
            });
        }
        Ok(v as usize)
    }

    fn three_ints(&mut self) -> Result<(i64, i64, i64), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let a = self.int()?;
        self.comma()?;
        let b = self.int()?;
        self.comma()?;
        let c = self.int()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((a, b, c))
    }
}

fn split_torus(m: i64, n: i64) -> LinkSpec {
    let e = m.gcd(&n);
    if e == 0 {
        // torus(0,0): carried through so build_link reports the gcd violation
        LinkSpec::TorusLink { e: 1, p: 0, q: 0 }
    } else {
        LinkSpec::TorusLink {
            e,
            p: m / e,
            q: n / e,
        }
    }
}

/// Parses a link expression.
pub fn parse(source: &str) -> Result<DslProgram, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0 };
    let spec = p.link()?;
    if p.pos != p.tokens.len() {
        return Err(p.error_here("trailing input after the link expression".to_string()));
    }
    Ok(DslProgram {
        source: source.to_string(),
        spec,
        coeffs: None,
    })
}

/// Faithful, reparsable rendering of a constructor tree.
pub fn to_source(spec: &LinkSpec) -> String {
    let mut out = String::new();
    write_spec(spec, &mut out);
    out
}

fn write_spec(spec: &LinkSpec, out: &mut String) {
    use fmt::Write;
    match spec {
        LinkSpec::TorusLink { e, p, q } => write!(out, "torus({}, {})", e * p, e * q).unwrap(),
        LinkSpec::TorusInSolidTorus { e, p, q } => {
            write!(out, "torus_in_solid({e}, {p}, {q})").unwrap()
        }
        LinkSpec::TorusInThickenedTorus { e, p, q } => {
            write!(out, "torus_in_thick({e}, {p}, {q})").unwrap()
        }
        LinkSpec::Keychain { e } => write!(out, "keychain({e})").unwrap(),
        LinkSpec::ParallelInSolidTorus { e, k } => {
            write!(out, "parallel_in_solid({e}, {k})").unwrap()
        }
        LinkSpec::ConnectedSum {
            left,
            left_comp,
            right,
            right_comp,
        } => {
            out.push_str("sum(");
            write_spec(left, out);
            write!(out, ", {}, ", left_comp.0).unwrap();
            write_spec(right, out);
            write!(out, ", {})", right_comp.0).unwrap();
        }
        LinkSpec::Cable {
            base,
            comp,
            e,
            p,
            q,
        } => {
            out.push_str("cable(");
            write_spec(base, out);
            write!(out, ", {}, {e}, {p}, {q})", comp.0).unwrap();
        }
        LinkSpec::Delete { base, comp } => {
            out.push_str("delete(");
            write_spec(base, out);
            write!(out, ", {})", comp.0).unwrap();
        }
    }
}

/// Normalizes alias constructors: keychains and parallel strands are both
/// torus links in a solid torus. Construction-level duplicates then share one
/// canonical spelling (and one cache key); no deeper link equivalence is used.
pub fn canonical_form(spec: &LinkSpec) -> LinkSpec {
    match spec {
        LinkSpec::Keychain { e } => LinkSpec::TorusInSolidTorus { e: *e, p: 1, q: 0 },
        LinkSpec::ParallelInSolidTorus { e, k } => {
            LinkSpec::TorusInSolidTorus { e: *e, p: 1, q: *k }
        }
        LinkSpec::ConnectedSum {
            left,
            left_comp,
            right,
            right_comp,
        } => LinkSpec::ConnectedSum {
            left: Box::new(canonical_form(left)),
            left_comp: *left_comp,
            right: Box::new(canonical_form(right)),
            right_comp: *right_comp,
        },
        LinkSpec::Cable {
            base,
            comp,
            e,
            p,
            q,
        } => LinkSpec::Cable {
            base: Box::new(canonical_form(base)),
            comp: *comp,
            e: *e,
            p: *p,
            q: *q,
        },
        LinkSpec::Delete { base, comp } => LinkSpec::Delete {
            base: Box::new(canonical_form(base)),
            comp: *comp,
        },
        other => other.clone(),
    }
}

/// Deterministic canonical serialization, the cache-key preimage.
pub fn canonical_source(spec: &LinkSpec) -> String {
    to_source(&canonical_form(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_parameters_are_gcd_split() {
        let program = parse("torus(2,3)").unwrap();
        assert_eq!(program.spec, LinkSpec::TorusLink { e: 1, p: 2, q: 3 });
        let program = parse("torus(4, 2)").unwrap();
        assert_eq!(program.spec, LinkSpec::TorusLink { e: 2, p: 2, q: 1 });
        let program = parse("torus(-4, 2)").unwrap();
        assert_eq!(program.spec, LinkSpec::TorusLink { e: 2, p: -2, q: 1 });
    }

    #[test]
    fn nested_constructions_parse() {
        let program = parse("cable(torus(2,3), 1, 1, 2, 3)").unwrap();
        assert_eq!(
            program.spec,
            LinkSpec::cable(LinkSpec::TorusLink { e: 1, p: 2, q: 3 }, 1, 1, 2, 3)
        );
        let program = parse("delete(torus_in_solid(2,2,1), 3)").unwrap();
        assert_eq!(
            program.spec,
            LinkSpec::delete(LinkSpec::TorusInSolidTorus { e: 2, p: 2, q: 1 }, 3)
        );
    }

    #[test]
    fn aliases_parse() {
        assert_eq!(parse("unknot").unwrap().spec, LinkSpec::unknot());
        assert_eq!(parse("hopf").unwrap().spec, LinkSpec::hopf());
    }

    #[test]
    fn oversized_integers_are_rejected() {
        assert!(parse("torus(1000001, 1)").is_err());
        assert!(parse("keychain(9223372036854775807)").is_err());
        assert!(parse("torus(1000000, 1)").is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("torus(2 3)").unwrap_err();
        assert_eq!((err.line, err.col), (1, 9));
        let err = parse("torus(2,\n?)").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        assert!(parse("sum(unknot, 1, unknot, 0)").is_err());
        assert!(parse("torus(2,3) torus(2,3)").is_err());
        assert!(parse("wibble(2)").is_err());
    }

    #[test]
    fn print_then_parse_is_identity() {
        let sources = [
            "torus(4, 2)",
            "keychain(3)",
            "parallel_in_solid(2, -1)",
            "sum(torus(2, 3), 1, delete(torus_in_thick(2, 3, 1), 4), 2)",
            "cable(hopf, 2, 2, 1, 5)",
        ];
        for src in sources {
            let spec = parse(src).unwrap().spec;
            assert_eq!(parse(&to_source(&spec)).unwrap().spec, spec);
        }
    }

    #[test]
    fn canonical_form_identifies_aliases() {
        let keychain = parse("keychain(2)").unwrap().spec;
        let parallel = parse("parallel_in_solid(2, 0)").unwrap().spec;
        let solid = parse("torus_in_solid(2, 1, 0)").unwrap().spec;
        assert_eq!(canonical_source(&keychain), canonical_source(&parallel));
        assert_eq!(canonical_source(&keychain), canonical_source(&solid));
        // canonical text reparses to its own canonical form
        let canon = canonical_source(&keychain);
        assert_eq!(canonical_source(&parse(&canon).unwrap().spec), canon);
    }
}
