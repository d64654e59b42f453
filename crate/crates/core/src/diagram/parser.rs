//! Recursive-descent parser for the diagram language.
//!
//! ```text
//! diagram := par (";" par)*
//! par     := atom ("*" atom)*
//! atom    := "id" "(" nat ")" | "spider" "(" nat "," nat ("," phase)? ")"
//!          | "cup" | "cap" | "swap" | "box" "(" ident ")" | "ket" "(" digits ")"
//!          | "(" diagram ")"
//! phase   := "-"? (real | real "pi" | "pi") ("/" nat)?
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to end of line.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use super::ast::{DiagramTerm, PhaseElement};

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if "();,*-/".contains(c) {
            bump(&mut chars);
            out.push(Spanned {
                tok: Tok::Punct(c),
                line: l,
                column: col,
            });
        } else if is_word_char(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                let exponent_sign = (c == '-' || c == '+')
                    && w.starts_with(|c: char| c.is_ascii_digit())
                    && w.ends_with(['e', 'E']);
                if is_word_char(c) || exponent_sign {
                    w.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Word(w),
                line: l,
                column: col,
            });
        } else {
            return Err(ParseError {
                line: l,
                column: col,
                expected: vec!["a diagram token".into()],
                found: format!("`{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn word(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Word(w) => {
                let w = w.clone();
                self.advance();
                Ok(w)
            }
            _ => Err(self.error(&[expected])),
        }
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Tok::Word(w) if w.chars().all(|c| c.is_ascii_digit()) => {
                let n = w.parse().map_err(|_| self.error(&["a natural number"]))?;
                self.advance();
                Ok(n)
            }
            _ => Err(self.error(&["a natural number"])),
        }
    }

    fn diagram(&mut self) -> Result<DiagramTerm, ParseError> {
        let mut stages = vec![self.par()?];
        while self.eat_punct(';') {
            stages.push(self.par()?);
        }
        Ok(if stages.len() == 1 {
            stages.pop().unwrap()
        } else {
            DiagramTerm::Seq(stages)
        })
    }

    fn par(&mut self) -> Result<DiagramTerm, ParseError> {
        let mut factors = vec![self.atom()?];
        while self.eat_punct('*') {
            factors.push(self.atom()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            DiagramTerm::Par(factors)
        })
    }

    fn atom(&mut self) -> Result<DiagramTerm, ParseError> {
        const ATOMS: &[&str] = &[
            "`id`", "`spider`", "`cup`", "`cap`", "`swap`", "`box`", "`ket`", "`(`",
        ];
        match self.peek().clone() {
            Tok::Punct('(') => {
                self.advance();
                let inner = self.diagram()?;
                self.expect_punct(')')?;
                Ok(inner)
            }
            Tok::Word(w) => match w.as_str() {
                "id" => {
                    self.advance();
                    self.expect_punct('(')?;
                    let n = self.nat()?;
                    self.expect_punct(')')?;
                    Ok(DiagramTerm::Id(n))
                }
                "spider" => {
                    self.advance();
                    self.expect_punct('(')?;
                    let inputs = self.nat()?;
                    self.expect_punct(',')?;
                    let outputs = self.nat()?;
                    let phase = if self.eat_punct(',') {
                        PhaseElement::qubit(self.phase()?)
                    } else {
                        PhaseElement::zero()
                    };
                    self.expect_punct(')')?;
                    Ok(DiagramTerm::Spider {
                        inputs,
                        outputs,
                        phase,
                    })
                }
                "cup" => {
                    self.advance();
                    Ok(DiagramTerm::Cup)
                }
                "cap" => {
                    self.advance();
                    Ok(DiagramTerm::Cap)
                }
                "swap" => {
                    self.advance();
                    Ok(DiagramTerm::Swap)
                }
                "box" => {
                    self.advance();
                    self.expect_punct('(')?;
                    let name = match self.peek() {
                        Tok::Word(w) if w.starts_with(|c: char| c.is_alphabetic() || c == '_') => {
                            self.word("an identifier")?
                        }
                        _ => return Err(self.error(&["an identifier"])),
                    };
                    self.expect_punct(')')?;
                    Ok(DiagramTerm::Box(name))
                }
                "ket" => {
                    self.advance();
                    self.expect_punct('(')?;
                    let bits = match self.peek() {
                        Tok::Word(w) if w.chars().all(|c| c.is_ascii_alphanumeric()) => {
                            self.word("digits")?
                        }
                        _ => return Err(self.error(&["digits"])),
                    };
                    self.expect_punct(')')?;
                    Ok(DiagramTerm::Ket(bits))
                }
                _ => Err(self.error(ATOMS)),
            },
            _ => Err(self.error(ATOMS)),
        }
    }

    fn phase(&mut self) -> Result<f64, ParseError> {
        const PHASE: &[&str] = &["a real number", "`pi`"];
        let sign = if self.eat_punct('-') { -1.0 } else { 1.0 };
        let w = match self.peek() {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.error(PHASE)),
        };
        let mut value = match split_pi(&w) {
            Some(v) => v,
            None => return Err(self.error(PHASE)),
        };
        self.advance();
        if !w.ends_with("pi") && *self.peek() == Tok::Word("pi".into()) {
            self.advance();
            value *= PI;
        }
        if self.eat_punct('/') {
            let d = self.nat()?;
            if d == 0 {
                self.pos -= 1;
                return Err(self.error(&["a nonzero divisor"]));
            }
            value /= d as f64;
        }
        Ok(sign * value)
    }
}

/// Reads `pi`, `<real>pi` or `<real>` from a single word.
fn split_pi(w: &str) -> Option<f64> {
    if w == "pi" {
        return Some(PI);
    }
    match w.strip_suffix("pi") {
        Some(coeff) => coeff.parse::<f64>().ok().map(|c| c * PI),
        None => w.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

/// Parses diagram text into a term.
pub fn parse(text: &str) -> Result<DiagramTerm, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let term = p.diagram()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`;`", "`*`", "end of input"]));
    }
    Ok(term)
}

/// Parses a single angle in radians: `1.5`, `-0.25pi`, `pi/2`, `3pi/4`, `3*pi/4`.
pub fn parse_angle(text: &str) -> Result<f64, ParseError> {
    let cleaned = text.replace('*', " ");
    let mut p = Parser {
        toks: lex(&cleaned)?,
        pos: 0,
    };
    let v = p.phase()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of angle"]));
    }
    Ok(v)
}
