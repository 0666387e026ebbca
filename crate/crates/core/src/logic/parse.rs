//! Parser for the prefix formula syntax.
//!
//! Grammar (whitespace-separated, fully parenthesized):
//!
//! ```text
//! formula := (true) | (false)
//!          | (not f) | (and f…) | (or f…) | (xor f…)
//!          | (implies f f) | (iff f f)
//!          | (exists v f) | (forall v f)
//!          | (existsSet V f) | (forallSet V f)
//!          | (E v v) | (< v v) | (= v v) | (color k v)
//!          | (in V v) | (card r k V)
//!          | (conn v v) | (connVia V v v)
//! ```
//!
//! Element variables `v` start with a lowercase letter, set variables `V`
//! with an uppercase letter; `r`, `k` are decimal numbers with `0 ≤ r < k`.

use super::ast::Formula;
use super::LogicError;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open(usize),
    Close(usize),
    Word(usize, String),
}

impl Token {
    fn pos(&self) -> usize {
        match self {
            Token::Open(p) | Token::Close(p) | Token::Word(p, _) => *p,
        }
    }
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut word_start = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = word_start.take() {
                out.push(Token::Word(s, text[s..i].to_string()));
            }
            if c == '(' {
                out.push(Token::Open(i));
            } else if c == ')' {
                out.push(Token::Close(i));
            }
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    if let Some(s) = word_start {
        out.push(Token::Word(s, text[s..].to_string()));
    }
    out
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    end: usize,
}

impl Parser {
    fn err<T>(&self, pos: usize, msg: &str) -> Result<T, LogicError> {
        Err(LogicError::Syntax { pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect_close(&mut self) -> Result<(), LogicError> {
        match self.next() {
            Some(Token::Close(_)) => Ok(()),
            Some(t) => self.err(t.pos(), "expected ')'"),
            None => self.err(self.end, "expected ')', found end of input"),
        }
    }

    fn word(&mut self, what: &str) -> Result<(usize, String), LogicError> {
        match self.next() {
            Some(Token::Word(p, w)) => Ok((p, w)),
            Some(t) => self.err(t.pos(), &format!("expected {what}")),
            None => self.err(self.end, &format!("expected {what}, found end of input")),
        }
    }

    fn elem_var(&mut self) -> Result<String, LogicError> {
        let (p, w) = self.word("an element variable")?;
        if is_elem_var(&w) {
            Ok(w)
        } else {
            self.err(p, &format!("'{w}' is not an element variable (must start lowercase)"))
        }
    }

    fn set_var(&mut self) -> Result<String, LogicError> {
        let (p, w) = self.word("a set variable")?;
        if is_set_var(&w) {
            Ok(w)
        } else {
            self.err(p, &format!("'{w}' is not a set variable (must start uppercase)"))
        }
    }

    fn number(&mut self) -> Result<u64, LogicError> {
        let (p, w) = self.word("a number")?;
        w.parse::<u64>().or_else(|_| self.err(p, &format!("'{w}' is not a number")))
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.next() {
            Some(Token::Open(_)) => {}
            Some(t) => return self.err(t.pos(), "expected '('"),
            None => return self.err(self.end, "expected '(', found end of input"),
        }
        let (hp, head) = self.word("an operator")?;
        let f = match head.as_str() {
            "true" => Formula::True,
            "false" => Formula::False,
            "not" => Formula::Not(alloc::boxed::Box::new(self.formula()?)),
            "and" | "or" | "xor" => {
                let mut fs = Vec::new();
                while !matches!(self.peek(), Some(Token::Close(_)) | None) {
                    fs.push(self.formula()?);
                }
                match head.as_str() {
                    "and" => Formula::And(fs),
                    "or" => Formula::Or(fs),
                    _ => {
                        if fs.len() < 2 {
                            return self.err(hp, "xor takes at least two operands");
                        }
                        Formula::Xor(fs)
                    }
                }
            }
            "implies" | "iff" => {
                let a = alloc::boxed::Box::new(self.formula()?);
                let b = alloc::boxed::Box::new(self.formula()?);
                if head == "implies" {
                    Formula::Implies(a, b)
                } else {
                    Formula::Iff(a, b)
                }
            }
            "exists" | "forall" => {
                let var = self.elem_var()?;
                let body = alloc::boxed::Box::new(self.formula()?);
                if head == "exists" {
                    Formula::Exists { var, body }
                } else {
                    Formula::Forall { var, body }
                }
            }
            "existsSet" | "forallSet" => {
                let var = self.set_var()?;
                let body = alloc::boxed::Box::new(self.formula()?);
                if head == "existsSet" {
                    Formula::ExistsSet { var, body }
                } else {
                    Formula::ForallSet { var, body }
                }
            }
            "E" | "<" => {
                let x = self.elem_var()?;
                let y = self.elem_var()?;
                Formula::Atom { rel: head, args: alloc::vec![x, y] }
            }
            "=" => {
                let x = self.elem_var()?;
                let y = self.elem_var()?;
                Formula::Eq(x, y)
            }
            "color" => {
                let k = self.number()?;
                let x = self.elem_var()?;
                Formula::Atom { rel: format!("C{k}"), args: alloc::vec![x] }
            }
            "in" => {
                let set = self.set_var()?;
                let elem = self.elem_var()?;
                Formula::In { set, elem }
            }
            "card" => {
                let r = self.number()?;
                let k = self.number()?;
                if k == 0 || r >= k {
                    return Err(LogicError::InvalidCard { r, k });
                }
                let set = self.set_var()?;
                Formula::Card { r, k, set }
            }
            "conn" => {
                let x = self.elem_var()?;
                let y = self.elem_var()?;
                Formula::Conn { x, y, via: None }
            }
            "connVia" => {
                let via = self.set_var()?;
                let x = self.elem_var()?;
                let y = self.elem_var()?;
                Formula::Conn { x, y, via: Some(via) }
            }
            other => return self.err(hp, &format!("unknown operator '{other}'")),
        };
        self.expect_close()?;
        Ok(f)
    }
}

/// True if `w` is a valid element variable name.
pub fn is_elem_var(w: &str) -> bool {
    let mut chars = w.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// True if `w` is a valid set variable name.
pub fn is_set_var(w: &str) -> bool {
    let mut chars = w.chars();
    chars.next().is_some_and(|c| c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses a formula from the documented prefix syntax.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let tokens = tokenize(text);
    let mut p = Parser { tokens, at: 0, end: text.len() };
    let f = p.formula()?;
    match p.peek() {
        None => Ok(f),
        Some(t) => p.err(t.pos(), "trailing input after formula"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::{self, LogicClass};

    #[test]
    fn spec_examples() {
        let f = parse_formula("(exists x (E x x))").unwrap();
        assert_eq!(f.quantifier_rank(), 1);
        assert_eq!(f.logic_class(), LogicClass::Fo);

        let g = parse_formula("(existsSet X (card 0 2 X))").unwrap();
        assert_eq!(g.quantifier_rank(), 1);
        assert_eq!(g.logic_class(), LogicClass::Cmso);
    }

    #[test]
    fn round_trip_through_printer() {
        let texts = [
            "(forall x (not (E x x)))",
            "(exists x (and (E x y) (or (= x z) (in X x))))",
            "(existsSet X (forallSet Y (implies (card 1 3 X) (iff (in X x) (in Y x)))))",
            "(xor (true) (false) (conn a b))",
            "(connVia S x y)",
            "(color 2 x)",
        ];
        for t in texts {
            let f = parse_formula(t).unwrap();
            assert_eq!(f.to_text(), t);
            assert_eq!(parse_formula(&f.to_text()).unwrap(), f);
        }
    }

    #[test]
    fn twins_parses_with_expected_shape() {
        let f = crate::logic::named::twins("x", "y");
        let round = parse_formula(&f.to_text()).unwrap();
        assert_eq!(round, f);
        assert_eq!(f.quantifier_rank(), 1);
        assert_eq!(f.free_element_vars(), alloc::vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("(and (E x y) (bogus))") {
            Err(LogicError::Syntax { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_formula("(exists X (E x y))") {
            Err(LogicError::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_formula("(card 3 2 X)"),
            Err(LogicError::InvalidCard { r: 3, k: 2 })
        ));
        assert!(matches!(
            parse_formula("(E x y) junk"),
            Err(LogicError::Syntax { .. })
        ));
        // Variable names may carry primes.
        assert!(parse_formula("(E x' y)").is_ok());
    }

    #[test]
    fn builders_match_parser() {
        assert_eq!(
            parse_formula("(implies (E x y) (= x y))").unwrap(),
            ast::implies(ast::edge("x", "y"), ast::eq("x", "y"))
        );
    }
}
