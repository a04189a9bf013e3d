//! Text syntax for diagrams.
//!
//! ```text
//! diagram   := seq
//! seq       := par (';' par)*
//! par       := atom (TENSOR atom)*          TENSOR is "(x)", "⊗" or "*"
//! atom      := '(' seq ')' | generator
//! generator := 'id' | 'swap' | 'copy' | 'discard' | 'cocopy' | 'codiscard' | 'empty'
//!            | family '[' nat (',' nat)? ']'
//!            | NAME | NAME '@fun' | NAME '@pred'
//! family    := 'id' | 'copy' | 'discard' | 'cocopy' | 'codiscard'
//!            | 'swap' | 'cup' | 'cap' | 'top'
//! ```
//!
//! Tensor binds tighter than `;`; both associate to the left. Families take
//! one width (`copy[2]`) except `swap[n,m]` and `top[n,m]`. A bare `NAME`
//! resolves against the signature; the `@fun` / `@pred` suffix is required
//! only when a symbol shares its name with a keyword. The token `(x)` is
//! always the tensor operator.

use std::fmt;

use thiserror::Error;

use super::{compose, tensor, Diagram, DiagramError, Generator, Node};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at byte {pos}: {source}")]
    Typing { pos: usize, source: DiagramError },
}

const KEYWORDS: &[&str] =
    &["id", "swap", "copy", "discard", "cocopy", "codiscard", "empty", "cup", "cap", "top"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Suffix(String),
    Semi,
    Tensor,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Nat(usize),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, DiagramParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        if text[i..].starts_with("(x)") {
            toks.push((start, Tok::Tensor));
            i += 3;
        } else if c == '⊗' || c == '*' {
            toks.push((start, Tok::Tensor));
            i += c.len_utf8();
        } else if c == ';' {
            toks.push((start, Tok::Semi));
            i += 1;
        } else if c == '(' {
            toks.push((start, Tok::LParen));
            i += 1;
        } else if c == ')' {
            toks.push((start, Tok::RParen));
            i += 1;
        } else if c == '[' {
            toks.push((start, Tok::LBrack));
            i += 1;
        } else if c == ']' {
            toks.push((start, Tok::RBrack));
            i += 1;
        } else if c == ',' {
            toks.push((start, Tok::Comma));
            i += 1;
        } else if c == '@' {
            i += 1;
            let s = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((start, Tok::Suffix(text[s..i].to_string())));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| DiagramParseError::Syntax {
                pos: start,
                msg: "number too large".into(),
            })?;
            toks.push((start, Tok::Nat(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() {
                let ch = bytes[i] as char;
                if ch.is_ascii_alphanumeric() || ch == '_' || ch == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            toks.push((start, Tok::Name(text[start..i].to_string())));
        } else {
            return Err(DiagramParseError::Syntax { pos: start, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramParseError> {
        Err(DiagramParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DiagramParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn seq(&mut self) -> Result<Diagram, DiagramParseError> {
        let mut acc = self.par()?;
        while self.peek() == Some(&Tok::Semi) {
            self.at += 1;
            let pos = self.pos();
            let rhs = self.par()?;
            acc = compose(&acc, &rhs).map_err(|source| DiagramParseError::Typing { pos, source })?;
        }
        Ok(acc)
    }

    fn par(&mut self) -> Result<Diagram, DiagramParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Tensor) {
            self.at += 1;
            let rhs = self.atom()?;
            acc = tensor(&acc, &rhs);
        }
        Ok(acc)
    }

    fn params(&mut self) -> Result<Option<Vec<usize>>, DiagramParseError> {
        if self.peek() != Some(&Tok::LBrack) {
            return Ok(None);
        }
        self.at += 1;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Nat(n)) => {
                    out.push(*n);
                    self.at += 1;
                }
                _ => return self.err("expected a width"),
            }
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RBrack) => {
                    self.at += 1;
                    return Ok(Some(out));
                }
                _ => return self.err("expected `,` or `]`"),
            }
        }
    }

    fn atom(&mut self) -> Result<Diagram, DiagramParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let d = self.seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(d)
            }
            Some(Tok::Name(name)) => {
                let pos = self.pos();
                self.at += 1;
                if let Some(Tok::Suffix(suffix)) = self.peek().cloned() {
                    self.at += 1;
                    return self.symbol(&name, Some(&suffix), pos);
                }
                if KEYWORDS.contains(&name.as_str()) {
                    let params = self.params()?;
                    return self.keyword(&name, params, pos);
                }
                self.symbol(&name, None, pos)
            }
            Some(_) => self.err("expected a generator or `(`"),
            None => self.err("unexpected end of input"),
        }
    }

    fn keyword(&self, name: &str, params: Option<Vec<usize>>, pos: usize) -> Result<Diagram, DiagramParseError> {
        let bad = |msg: &str| Err(DiagramParseError::Syntax { pos, msg: msg.into() });
        let one = |p: &Option<Vec<usize>>| -> Option<Option<usize>> {
            match p {
                None => Some(None),
                Some(v) if v.len() == 1 => Some(Some(v[0])),
                _ => None,
            }
        };
        let two = |p: &Option<Vec<usize>>| -> Option<(usize, usize)> {
            match p {
                Some(v) if v.len() == 2 => Some((v[0], v[1])),
                _ => None,
            }
        };
        let d = match name {
            "empty" if params.is_none() => Diagram::empty(),
            "id" | "copy" | "discard" | "cocopy" | "codiscard" => match one(&params) {
                Some(None) => Diagram::generator(match name {
                    "id" => Generator::Id,
                    "copy" => Generator::Copy,
                    "discard" => Generator::Discard,
                    "cocopy" => Generator::Cocopy,
                    _ => Generator::Codiscard,
                }),
                Some(Some(n)) => match name {
                    "id" => Diagram::identity(n),
                    "copy" => Diagram::copy_n(n),
                    "discard" => Diagram::discard_n(n),
                    "cocopy" => Diagram::cocopy_n(n),
                    _ => Diagram::codiscard_n(n),
                },
                None => return bad("expected one width"),
            },
            "swap" => match &params {
                None => Diagram::swap(),
                p => match two(p) {
                    Some((n, m)) => Diagram::swap_nm(n, m),
                    None => return bad("swap takes two widths"),
                },
            },
            "top" => match two(&params) {
                Some((n, m)) => Diagram::top(n, m),
                None => return bad("top takes two widths"),
            },
            "cup" | "cap" => match one(&params) {
                Some(Some(n)) if name == "cup" => Diagram::cup(n),
                Some(Some(n)) => Diagram::cap(n),
                _ => return bad("expected one width"),
            },
            _ => return bad("unexpected parameters"),
        };
        Ok(d)
    }

    fn symbol(&self, name: &str, suffix: Option<&str>, pos: usize) -> Result<Diagram, DiagramParseError> {
        let unknown = || DiagramParseError::Typing { pos, source: DiagramError::UnknownSymbol(name.into()) };
        let fun = || self.sig.function_arity(name).map(|a| Diagram::generator(Generator::func(name, a)));
        let pred = || self.sig.predicate_arity(name).map(|a| Diagram::generator(Generator::pred(name, a)));
        match suffix {
            Some("fun") => fun().ok_or_else(unknown),
            Some("pred") => pred().ok_or_else(unknown),
            Some(other) => Err(DiagramParseError::Syntax { pos, msg: format!("unknown suffix `@{other}`") }),
            None => fun().or_else(pred).ok_or_else(unknown),
        }
    }
}

/// Parses diagram text against a signature.
pub fn parse_diagram(text: &str, sig: &Signature) -> Result<Diagram, DiagramParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), sig };
    let d = p.seq()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(d)
}

fn write_generator(g: &Generator, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Generator::Func { name, .. } if KEYWORDS.contains(&&**name) => write!(f, "{name}@fun"),
        Generator::Pred { name, .. } if KEYWORDS.contains(&&**name) => write!(f, "{name}@pred"),
        Generator::Func { name, .. } | Generator::Pred { name, .. } => write!(f, "{name}"),
        other => write!(f, "{}", other.label()),
    }
}

impl fmt::Display for Diagram {
    /// Prints in the concrete syntax; parsing the output rebuilds the same term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Empty => write!(f, "empty"),
            Node::Gen(g) => write_generator(g, f),
            Node::Seq(a, b) => {
                write!(f, "{a} ; ")?;
                match b.node() {
                    Node::Seq(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Node::Tensor(a, b) => {
                match a.node() {
                    Node::Seq(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " (x) ")?;
                match b.node() {
                    Node::Seq(..) | Node::Tensor(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("f", 1), ("copy", 1)], [("P", 2)]).unwrap()
    }

    #[test]
    fn parses_and_types() {
        let d = parse_diagram("(id (x) codiscard) ; swap ; P", &sig()).unwrap();
        assert_eq!((d.dom(), d.cod()), (1, 0));
        let e = parse_diagram("copy ; (id ⊗ discard)", &sig()).unwrap();
        assert_eq!((e.dom(), e.cod()), (1, 1));
    }

    #[test]
    fn families() {
        let d = parse_diagram("cup[2] ; cap[2]", &sig()).unwrap();
        assert_eq!((d.dom(), d.cod()), (0, 0));
        let s = parse_diagram("swap[1,2]", &sig()).unwrap();
        assert!(s.iso_equal(&Diagram::swap_nm(1, 2)));
    }

    #[test]
    fn keyword_symbols_need_suffix() {
        let d = parse_diagram("copy@fun", &sig()).unwrap();
        assert_eq!((d.dom(), d.cod()), (1, 1));
        let c = parse_diagram("copy", &sig()).unwrap();
        assert_eq!(c.cod(), 2);
        let printed = d.to_string();
        assert_eq!(printed, "copy@fun");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_diagram("copy ; copy", &sig()) {
            Err(DiagramParseError::Typing { pos, source }) => {
                assert_eq!(pos, 7);
                assert_eq!(source, DiagramError::WidthMismatch(2, 1));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_diagram("copy ;", &sig()), Err(DiagramParseError::Syntax { pos: 6, .. })));
        assert!(matches!(
            parse_diagram("g", &sig()),
            Err(DiagramParseError::Typing { source: DiagramError::UnknownSymbol(_), .. })
        ));
    }

    #[test]
    fn printing_round_trips_term_shape() {
        let s = sig();
        for text in ["copy ; (id (x) (f ; f)) ; cocopy", "(swap ; swap) (x) empty", "id (x) (id (x) id)", "a"] {
            if let Ok(d) = parse_diagram(text, &s) {
                assert_eq!(parse_diagram(&d.to_string(), &s).unwrap(), d);
            }
        }
        let d = Diagram::copy_n(3).seq(&Diagram::cocopy_n(3));
        assert_eq!(parse_diagram(&d.to_string(), &s).unwrap(), d);
    }
}
