//! Concrete syntax for formulas.
//!
//! ```text
//! formula := unary ( ("&" | "|" | "->") unary )*     precedence: & > | > ->
//! unary   := ("~" | "!" | "¬") unary
//!          | quant var+ "." formula                   body extends to the right
//!          | quant var+ unary
//!          | "(" formula ")" | "true" | "false" | atom
//! quant   := "A" | "E" | "∀" | "∃" | "forall" | "exists"
//! atom    := x "<" y | y "=" x "+" "1" | x ("in" | "∈") X
//! ```
//!
//! `Ax.` is accepted as shorthand for `A x.`. After `∀`, `∃`, `forall` or
//! `exists` the dot may be omitted, in which case the body is a single
//! unary formula. `->` associates to the right.
//! Names starting with a lowercase letter are first-order, the others
//! second-order.

use super::ast::{is_first_order, Formula};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Dot,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Less,
    Eq,
    Plus,
    In,
    Forall,
    Exists,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Token>| {
            out.push(Token {
                tok,
                line: l0,
                column: c0,
            })
        };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "in" => Tok::In,
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word),
            };
            push(tok, &mut out);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let n = word.parse().map_err(|_| Error::Syntax {
                line: l0,
                column: c0,
                message: format!("number {word} is too large"),
            })?;
            push(Tok::Num(n), &mut out);
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            (_, "->") => (Tok::Implies, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('.', _) => (Tok::Dot, 1),
            (',', _) => (Tok::Comma, 1),
            ('~' | '!' | '¬', _) => (Tok::Not, 1),
            ('&' | '∧', _) => (Tok::And, 1),
            ('|' | '∨', _) => (Tok::Or, 1),
            ('→', _) => (Tok::Implies, 1),
            ('<', _) => (Tok::Less, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('∈', _) => (Tok::In, 1),
            ('∀', _) => (Tok::Forall, 1),
            ('∃', _) => (Tok::Exists, 1),
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        push(tok, &mut out);
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

#[derive(Clone, Copy)]
enum Quant {
    All,
    Some,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    /// Recognizes `A x.`, `Ax.`, `forall x y.` and friends.
    /// The flag tells whether the head ended in a dot.
    fn quantifier_head(&mut self) -> Option<(Quant, Vec<String>, bool)> {
        let quant_word = |name: &str| match name {
            "A" => Some(Quant::All),
            "E" => Some(Quant::Some),
            _ => None,
        };
        let symbolic = matches!(self.peek(), Tok::Forall | Tok::Exists);
        let (q, mut vars, skip) = match self.peek().clone() {
            Tok::Forall => (Quant::All, vec![], 1),
            Tok::Exists => (Quant::Some, vec![], 1),
            Tok::Ident(name) if quant_word(&name).is_some() && matches!(self.peek_at(1), Tok::Ident(_)) => {
                (quant_word(&name)?, vec![], 1)
            }
            Tok::Ident(name) if name.len() > 1 && matches!(self.peek_at(1), Tok::Dot | Tok::Ident(_) | Tok::Comma) => {
                let q = quant_word(&name[..1])?;
                (q, vec![name[1..].to_string()], 1)
            }
            _ => return None,
        };
        let mut k = skip;
        loop {
            match self.peek_at(k) {
                Tok::Ident(v) => vars.push(v.clone()),
                Tok::Comma => {}
                Tok::Dot if !vars.is_empty() => {
                    self.pos += k + 1;
                    return Some((q, vars, true));
                }
                _ if symbolic && !vars.is_empty() => {
                    self.pos += k;
                    return Some((q, vars, false));
                }
                _ => return None,
            }
            k += 1;
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if let Some((q, vars, dotted)) = self.quantifier_head() {
            let mut body = if dotted { self.formula()? } else { self.unary()? };
            for v in vars.iter().rev() {
                body = match q {
                    Quant::All => Formula::forall(v, body),
                    Quant::Some => Formula::exists(v, body),
                };
            }
            return Ok(body);
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(name) if name == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(_) => self.atom(),
            Tok::Eof => self.error("unexpected end of formula"),
            _ => self.error("expected a formula"),
        }
    }

    fn first_order(&self, name: &str) -> Result<()> {
        if is_first_order(name) {
            Ok(())
        } else {
            self.error(format!("{name} is not a first-order variable"))
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        let x = self.ident("a variable")?;
        match self.bump() {
            Tok::Less => {
                let y = self.ident("a variable")?;
                self.check_at(
                    start,
                    || [&x, &y].iter().all(|v| is_first_order(v)),
                    "order compares first-order variables",
                )?;
                Ok(Formula::Less(x, y))
            }
            Tok::In => {
                let set = self.ident("a set variable")?;
                self.check_at(
                    start,
                    || is_first_order(&x) && !is_first_order(&set),
                    "membership needs a position and a set",
                )?;
                Ok(Formula::Member(x, set))
            }
            Tok::Eq => {
                let y = self.ident("a variable")?;
                self.expect(Tok::Plus, "'+'")?;
                if self.bump() != Tok::Num(1) {
                    self.pos -= 1;
                    return self.error("only successor `x + 1` is supported");
                }
                self.first_order(&x)?;
                self.first_order(&y)?;
                Ok(Formula::Succ(y, x))
            }
            _ => {
                self.pos -= 1;
                self.error("expected '<', '=' or 'in'")
            }
        }
    }

    fn check_at(&mut self, pos: usize, ok: impl Fn() -> bool, message: &str) -> Result<()> {
        if ok() {
            return Ok(());
        }
        self.pos = pos;
        self.error(message)
    }
}

/// Parses a formula in the grammar above.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error("unexpected trailing input");
    }
    Ok(f)
}
