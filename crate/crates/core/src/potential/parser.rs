//! Lexer and recursive-descent parser for the potential language.
//!
//! Precedence, loosest first: `+ -`, then `* /` and juxtaposition, then `^`
//! (right associative), then unary minus. `0.5i` is shorthand for `0.5*i`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::expr::{BinOp, Expr, Func};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Var,
    ImagUnit,
    Pi,
    Func(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Imag(v) => format!("number {v}i"),
            Tok::Var => "'x'".to_string(),
            Tok::ImagUnit => "'i'".to_string(),
            Tok::Pi => "'pi'".to_string(),
            Tok::Func(f) => format!("'{}'", f.name()),
            Tok::Plus => "'+'".to_string(),
            Tok::Minus => "'-'".to_string(),
            Tok::Star => "'*'".to_string(),
            Tok::Slash => "'/'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::Comma => "','".to_string(),
        }
    }

    fn operator_char(&self) -> Option<char> {
        Some(match self {
            Tok::Plus => '+',
            Tok::Minus => '-',
            Tok::Star => '*',
            Tok::Slash => '/',
            Tok::Caret => '^',
            _ => return None,
        })
    }

    fn starts_operand(&self) -> bool {
        matches!(
            self,
            Tok::Num(_) | Tok::Imag(_) | Tok::Var | Tok::ImagUnit | Tok::Pi | Tok::Func(_) | Tok::LParen
        )
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    if let Some((idx, _)) = text.char_indices().find(|(_, c)| !c.is_ascii()) {
        return Err(ParseError::NonAscii {
            pos: text[..idx].chars().count() + 1,
        });
    }
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, pos });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // Exponent only when a digit follows, so `2exp(x)` stays `2 * exp(x)`.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let literal = &text[start..i];
            let value: f64 = literal
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| ParseError::InvalidNumber {
                    text: literal.to_string(),
                    pos,
                })?;
            let imaginary =
                i < bytes.len() && bytes[i] == b'i' && !(i + 1 < bytes.len() && is_ident_char(bytes[i + 1]));
            if imaginary {
                i += 1;
                out.push(Spanned { tok: Tok::Imag(value), pos });
            } else {
                out.push(Spanned { tok: Tok::Num(value), pos });
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && is_ident_char(bytes[i]) {
                i += 1;
            }
            let name = &text[start..i];
            let tok = match name {
                "x" => Tok::Var,
                "i" => Tok::ImagUnit,
                "pi" => Tok::Pi,
                _ => match Func::from_name(name) {
                    Some(f) => Tok::Func(f),
                    None => {
                        return Err(ParseError::UnknownIdentifier {
                            name: name.to_string(),
                            pos,
                        })
                    }
                },
            };
            out.push(Spanned { tok, pos });
            continue;
        }
        return Err(ParseError::UnexpectedChar { found: c as char, pos });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
    end_pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end_pos, |s| s.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let op_tok = self.bump().expect("peeked");
            let rhs = self.operand_after(&op_tok, Self::term)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) | Some(Tok::Slash) => {
                    let op_tok = self.bump().expect("peeked");
                    let op = if op_tok.tok == Tok::Star { BinOp::Mul } else { BinOp::Div };
                    let rhs = self.operand_after(&op_tok, Self::power)?;
                    lhs = Expr::binary(op, lhs, rhs);
                }
                Some(t) if t.starts_operand() => {
                    let rhs = self.power()?;
                    lhs = Expr::binary(BinOp::Mul, lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(&Tok::Caret) {
            let op_tok = self.bump().expect("peeked");
            let exponent = self.operand_after(&op_tok, Self::power)?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                let op_tok = self.bump().expect("peeked");
                let inner = self.operand_after(&op_tok, Self::unary)?;
                Ok(Expr::Neg(inner.into()))
            }
            Some(Tok::Plus) => {
                let op_tok = self.bump().expect("peeked");
                self.operand_after(&op_tok, Self::unary)
            }
            _ => self.primary(),
        }
    }

    /// Parses the operand following `op`, reporting a dangling operator when
    /// nothing usable follows it.
    fn operand_after(
        &mut self,
        op: &Spanned,
        rule: fn(&mut Self) -> Result<Expr, ParseError>,
    ) -> Result<Expr, ParseError> {
        let dangling = match self.peek() {
            None | Some(Tok::RParen) | Some(Tok::Comma) => true,
            Some(t) => matches!(t, Tok::Star | Tok::Slash | Tok::Caret),
        };
        if dangling {
            return Err(ParseError::DanglingOperator {
                op: op.tok.operator_char().unwrap_or('?'),
                pos: op.pos,
            });
        }
        rule(self)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(Spanned { tok, .. }) = self.bump() else {
            return Err(ParseError::UnexpectedToken {
                found: "end of input".to_string(),
                pos,
            });
        };
        match tok {
            Tok::Num(v) => Ok(Expr::Real(v)),
            Tok::Imag(v) => Ok(Expr::binary(BinOp::Mul, Expr::Real(v), Expr::ImagUnit)),
            Tok::Var => Ok(Expr::Var),
            Tok::ImagUnit => Ok(Expr::ImagUnit),
            Tok::Pi => Ok(Expr::Pi),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            Tok::Func(f) => {
                if self.peek() != Some(&Tok::LParen) {
                    return Err(ParseError::MissingCallParens { name: f.name(), pos });
                }
                self.bump();
                if self.peek() == Some(&Tok::RParen) {
                    return Err(ParseError::Arity {
                        name: f.name(),
                        given: 0,
                        pos,
                    });
                }
                let arg = self.expr()?;
                let mut given = 1;
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    self.expr()?;
                    given += 1;
                }
                if given != 1 {
                    return Err(ParseError::Arity {
                        name: f.name(),
                        given,
                        pos,
                    });
                }
                self.close_paren()?;
                Ok(Expr::call(f, arg))
            }
            Tok::RParen => Err(ParseError::UnbalancedParen { pos }),
            other => match other.operator_char() {
                Some(op) => Err(ParseError::DanglingOperator { op, pos }),
                None => Err(ParseError::UnexpectedToken {
                    found: other.describe(),
                    pos,
                }),
            },
        }
    }

    fn close_paren(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.bump();
                Ok(())
            }
            None => Err(ParseError::UnbalancedParen { pos: self.pos() }),
            Some(t) => Err(ParseError::UnexpectedToken {
                found: t.describe(),
                pos: self.pos(),
            }),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks,
        idx: 0,
        end_pos: text.len() + 1,
    };
    let e = p.expr()?;
    match p.bump() {
        None => Ok(e),
        Some(Spanned { tok: Tok::RParen, pos }) => Err(ParseError::UnbalancedParen { pos }),
        Some(Spanned { tok: Tok::Comma, pos }) => Err(ParseError::UnexpectedToken {
            found: "','".to_string(),
            pos,
        }),
        Some(Spanned { tok, pos }) => Err(ParseError::UnexpectedToken {
            found: tok.describe(),
            pos,
        }),
    }
}
