//! Concrete syntax for terms, tuples and formulas.
//!
//! ```text
//! formula := unary (('&' | '∧') formula)?
//! unary   := ('exists' | '∃') 'x' k '.' formula
//!          | '(' formula ')' | 'T' | '⊤'
//!          | Pred '(' terms ')' | Pred
//!          | term '=' term
//! term    := 'x' k | fun '(' terms ')' | fun
//! tuple   := ('<' | '⟨') terms? ('>' | '⟩')
//! ```
//!
//! Variables are `x1, x2, ...` and a quantifier in context `n` must bind `x{n+1}`.

use std::sync::Arc;

use super::{Formula, LogicError, SortRule, SortedFormula, Term, TermTuple};
use crate::signature::Signature;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    sig: &'a Signature,
}

enum Name<'a> {
    Var(usize),
    Ident(&'a str),
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tokens: &[&str]) -> Result<(), LogicError> {
        if tokens.iter().any(|t| self.eat(t)) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{}`", tokens.join("` or `"))))
        }
    }

    fn syntax(&self, msg: String) -> LogicError {
        LogicError::Syntax { pos: self.pos, msg }
    }

    fn ident(&mut self) -> Result<(usize, Name<'a>), LogicError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || (i > 0 && c == '\'')))
            .map_or(rest.len(), |(i, _)| i);
        let word = &rest[..len];
        if len == 0 || word.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.syntax("expected a name".into()));
        }
        self.pos += len;
        if let Some(digits) = word.strip_prefix('x') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                let k = digits.parse().map_err(|_| LogicError::Syntax { pos: start, msg: "variable index too large".into() })?;
                if k == 0 {
                    return Err(LogicError::Syntax { pos: start, msg: "variables start at x1".into() });
                }
                return Ok((start, Name::Var(k)));
            }
        }
        Ok((start, Name::Ident(word)))
    }

    fn args(&mut self, n: usize) -> Result<Vec<Term>, LogicError> {
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.term(n)?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(&[","])?;
        }
    }

    fn var(&self, start: usize, k: usize, n: usize) -> Result<Term, LogicError> {
        if k > n {
            return Err(LogicError::Sort { rule: SortRule::Var, pos: start, msg: format!("x{k} is not in context {n}") });
        }
        Ok(Term::Var(k))
    }

    /// Rest of a function application once its name has been read.
    fn application(&mut self, start: usize, name: &str, n: usize) -> Result<Term, LogicError> {
        let arity = self
            .sig
            .function_arity(name)
            .ok_or_else(|| LogicError::UnknownSymbol { name: name.into(), pos: start })?;
        let args = if self.eat("(") { self.args(n)? } else { vec![] };
        if args.len() != arity {
            return Err(LogicError::Sort {
                rule: SortRule::Fun,
                pos: start,
                msg: format!("`{name}` has arity {arity} but got {} arguments", args.len()),
            });
        }
        Ok(Term::App(Arc::from(name), args))
    }

    fn term(&mut self, n: usize) -> Result<Term, LogicError> {
        match self.ident()? {
            (start, Name::Var(k)) => self.var(start, k, n),
            (start, Name::Ident(name)) => self.application(start, name, n),
        }
    }

    fn tuple(&mut self, n: usize) -> Result<Vec<Term>, LogicError> {
        self.expect(&["<", "⟨"])?;
        let mut out = Vec::new();
        if self.eat(">") || self.eat("⟩") {
            return Ok(out);
        }
        loop {
            out.push(self.term(n)?);
            if self.eat(">") || self.eat("⟩") {
                return Ok(out);
            }
            self.expect(&[","])?;
        }
    }

    fn formula(&mut self, n: usize) -> Result<Formula, LogicError> {
        let left = self.unary(n)?;
        if self.eat("&") || self.eat("∧") {
            let right = self.formula(n)?;
            return Ok(Formula::and(left, right));
        }
        Ok(left)
    }

    fn equation_rest(&mut self, left: Term, n: usize) -> Result<Formula, LogicError> {
        self.expect(&["="])?;
        let right = self.term(n)?;
        Ok(Formula::Eq(left, right))
    }

    fn unary(&mut self, n: usize) -> Result<Formula, LogicError> {
        if self.eat("(") {
            let inner = self.formula(n)?;
            self.expect(&[")"])?;
            return Ok(inner);
        }
        if self.eat("⊤") {
            return Ok(Formula::Top);
        }
        if self.eat("∃") {
            return self.quantifier(n);
        }
        let save = self.pos;
        let (start, name) = self.ident()?;
        match name {
            Name::Ident("exists") => self.quantifier(n),
            Name::Ident("T") => Ok(Formula::Top),
            Name::Var(k) => {
                let left = self.var(start, k, n)?;
                self.equation_rest(left, n)
            }
            Name::Ident(word) => {
                if let Some(arity) = self.sig.predicate_arity(word) {
                    let args = if self.eat("(") { self.args(n)? } else { vec![] };
                    if args.len() != arity {
                        return Err(LogicError::Sort {
                            rule: SortRule::Pred,
                            pos: start,
                            msg: format!("`{word}` has arity {arity} but got {} arguments", args.len()),
                        });
                    }
                    Ok(Formula::Pred(Arc::from(word), args))
                } else if self.sig.function_arity(word).is_some() {
                    let left = self.application(start, word, n)?;
                    self.equation_rest(left, n)
                } else {
                    self.pos = save;
                    Err(LogicError::UnknownSymbol { name: word.into(), pos: start })
                }
            }
        }
    }

    fn quantifier(&mut self, n: usize) -> Result<Formula, LogicError> {
        let (start, name) = self.ident()?;
        match name {
            Name::Var(k) if k == n + 1 => {}
            Name::Var(k) => {
                return Err(LogicError::Sort {
                    rule: SortRule::Exists,
                    pos: start,
                    msg: format!("a quantifier in context {n} binds x{}, not x{k}", n + 1),
                })
            }
            Name::Ident(_) => return Err(LogicError::Syntax { pos: start, msg: "expected a bound variable".into() }),
        }
        self.expect(&["."])?;
        Ok(Formula::exists(self.formula(n + 1)?))
    }

    fn finish(&mut self) -> Result<(), LogicError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }
}

fn parser<'a>(text: &'a str, sig: &'a Signature) -> Parser<'a> {
    Parser { text, pos: 0, sig }
}

/// Parses a formula in context `n` and derives its sort.
pub fn parse_formula(text: &str, sig: &Signature, n: usize) -> Result<SortedFormula, LogicError> {
    let mut p = parser(text, sig);
    let formula = p.formula(n)?;
    p.finish()?;
    SortedFormula::new(sig, n, formula)
}

/// Parses a single term in context `n`.
pub fn parse_term(text: &str, sig: &Signature, n: usize) -> Result<Term, LogicError> {
    let mut p = parser(text, sig);
    let t = p.term(n)?;
    p.finish()?;
    Ok(t)
}

/// Parses `<t1, .., tm>` as a tuple `n -> m`.
pub fn parse_tuple(text: &str, sig: &Signature, n: usize) -> Result<TermTuple, LogicError> {
    let mut p = parser(text, sig);
    let terms = p.tuple(n)?;
    p.finish()?;
    TermTuple::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("f", 1), ("c", 0), ("m", 2)], [("P", 2), ("Q", 1), ("R", 0)]).unwrap()
    }

    #[test]
    fn parses_and_prints() {
        let s = sig();
        for (n, text) in [
            (1, "exists x2. P(x2,x1)"),
            (2, "x1 = x2"),
            (3, "T"),
            (1, "Q(f(x1)) & exists x2. P(x2,x1) & f(x2) = x1"),
            (0, "R & c = c"),
            (2, "(Q(x1) & Q(x2)) & m(x1,x2) = c"),
            (1, "(exists x2. Q(x2)) & Q(x1)"),
        ] {
            let phi = parse_formula(text, &s, n).unwrap();
            assert_eq!(phi.to_string(), text);
            assert_eq!(phi.derivation.sort, (n, 0));
        }
    }

    #[test]
    fn unicode_tokens() {
        let s = sig();
        let a = parse_formula("∃x2. P(x2,x1) ∧ ⊤", &s, 1).unwrap();
        let b = parse_formula("exists x2. P(x2,x1) & T", &s, 1).unwrap();
        assert_eq!(a.formula, b.formula);
        assert_eq!(parse_tuple("⟨x1, f(x1)⟩", &s, 1).unwrap(), parse_tuple("<x1,f(x1)>", &s, 1).unwrap());
    }

    #[test]
    fn rejects_out_of_context_variables() {
        let s = sig();
        match parse_formula("Q(x3)", &s, 1) {
            Err(LogicError::Sort { rule: SortRule::Var, pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("exists x3. Q(x3)", &s, 1),
            Err(LogicError::Sort { rule: SortRule::Exists, .. })
        ));
        assert!(matches!(parse_formula("Q(x1,x1)", &s, 1), Err(LogicError::Sort { rule: SortRule::Pred, .. })));
        assert!(matches!(parse_formula("S(x1)", &s, 1), Err(LogicError::UnknownSymbol { .. })));
        assert!(matches!(parse_formula("Q(x1) &", &s, 1), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse_formula("Q(x1))", &s, 1), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn derivation_shape() {
        let s = sig();
        let phi = parse_formula("exists x2. P(x2,x1)", &s, 1).unwrap();
        let d = &phi.derivation;
        assert_eq!(d.rule, SortRule::Exists);
        assert_eq!(d.premises[0].rule, SortRule::Pred);
        assert_eq!(d.premises[0].sort, (2, 0));
        assert_eq!(d.premises[0].premises[0].sort, (2, 2));
    }
}
