//! Recursive-descent parser for ring elements, orientation series, and
//! operation expressions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' uint]
//! atom   := uint ['/' uint] | 'b' uint | 'u' | 'd' uint | '(' expr ')'
//! ```
//!
//! `bN` is a ring generator, `u` the series variable, `dK` the operation
//! `∂K`. Plain ring literals use only the first two atoms; series add `u`;
//! operation expressions add `dK`. Fractions cover the printed form of
//! non-integral coefficients.

use crate::ops::SuOp;
use crate::poly::{GradedPoly, Rational};
use crate::series::{PolyRing, Series};
use crate::{Error, Result};

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Gen(u32),
    Var,
    Op(u32),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                toks.push((start, Tok::Int(n)));
            }
            'b' | 'd' => {
                let start = i;
                i += 1;
                let num_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if num_start == i {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("expected an index after '{c}'"),
                    });
                }
                let n: u32 = text[num_start..i].parse().map_err(|_| Error::Parse {
                    pos: num_start,
                    msg: "index out of range".into(),
                })?;
                toks.push((start, if c == 'b' { Tok::Gen(n) } else { Tok::Op(n) }));
            }
            'u' => {
                toks.push((i, Tok::Var));
                i += 1;
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

/// Values an expression can evaluate to.
#[derive(Clone, Debug)]
enum Value {
    Scalar(GradedPoly),
    Ser(Series<PolyRing>),
    Operation(SuOp),
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    cap: u32,
    order: u32,
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn ring(&self) -> PolyRing {
        PolyRing { cap: self.cap }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.neg_value(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add_values(acc, rhs)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    let rhs = self.neg_value(rhs);
                    acc = self.add_values(acc, rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = self.mul_values(acc, rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let e = match self.bump() {
                Some(Tok::Int(n)) => n.clone(),
                _ => return self.err("expected an integer exponent after '^'"),
            };
            let e: u32 = e.try_into().map_err(|_| Error::Parse {
                pos: self.here(),
                msg: "exponent must be a small nonnegative integer".into(),
            })?;
            return self.pow_value(base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        let pos = self.here();
        match self.bump().cloned() {
            Some(Tok::Int(n)) => {
                // optional '/ uint' fraction
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump().cloned() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                return self.err("zero denominator");
                            }
                            Ok(Value::Scalar(GradedPoly::constant(
                                Rational::new(n, d),
                                self.cap,
                            )))
                        }
                        _ => self.err("expected a denominator after '/'"),
                    }
                } else {
                    Ok(Value::Scalar(GradedPoly::constant(
                        Rational::from_integer(n),
                        self.cap,
                    )))
                }
            }
            Some(Tok::Gen(n)) => GradedPoly::generator(n, self.cap)
                .map(Value::Scalar)
                .map_err(|e| Error::Parse {
                    pos,
                    msg: e.to_string(),
                }),
            Some(Tok::Var) => Ok(Value::Ser(Series::var(self.ring(), 0, 1, self.order))),
            Some(Tok::Op(k)) => Ok(Value::Operation(SuOp::partial(k, self.cap))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => self.err("expected ')'"),
                }
            }
            _ => Err(Error::Parse {
                pos,
                msg: "expected a number, generator, or '('".into(),
            }),
        }
    }

    fn neg_value(&self, v: Value) -> Value {
        match v {
            Value::Scalar(p) => Value::Scalar(p.neg()),
            Value::Ser(s) => Value::Ser(s.neg()),
            Value::Operation(o) => Value::Operation(o.scale_int(-1)),
        }
    }

    fn to_series(&self, p: GradedPoly) -> Series<PolyRing> {
        Series::constant(self.ring(), p, 1, self.order)
    }

    fn add_values(&self, a: Value, b: Value) -> Result<Value> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(x.add(&y)?),
            (Ser(x), Ser(y)) => Ser(x.add(&y)?),
            (Scalar(x), Ser(y)) => Ser(self.to_series(x).add(&y)?),
            (Ser(x), Scalar(y)) => Ser(x.add(&self.to_series(y))?),
            (Operation(x), Operation(y)) => Operation(x.add(&y)?),
            (Scalar(x), Operation(y)) | (Operation(y), Scalar(x)) => {
                // scalar as multiple of the identity operation
                let id = SuOp::identity(self.cap).scale_poly(&x)?;
                Operation(id.add(&y)?)
            }
            _ => return self.err("cannot add a series and an operation"),
        })
    }

    fn mul_values(&self, a: Value, b: Value) -> Result<Value> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(x.mul(&y)?),
            (Ser(x), Ser(y)) => Ser(x.mul(&y)?),
            (Scalar(x), Ser(y)) | (Ser(y), Scalar(x)) => Ser(y.scale_elem(&x)),
            (Scalar(x), Operation(y)) | (Operation(y), Scalar(x)) => Operation(y.scale_poly(&x)?),
            (Operation(_), _) | (_, Operation(_)) => {
                return self.err("operations multiply only by ring elements (use compose)")
            }
        })
    }

    fn pow_value(&self, v: Value, e: u32) -> Result<Value> {
        match v {
            Value::Scalar(p) => {
                let mut acc = GradedPoly::one(self.cap);
                for _ in 0..e {
                    acc = acc.mul(&p)?;
                }
                Ok(Value::Scalar(acc))
            }
            Value::Ser(s) => Ok(Value::Ser(s.pow(e)?)),
            Value::Operation(_) => self.err("operations cannot be raised to powers"),
        }
    }
}

fn run_parser(text: &str, cap: u32, order: u32) -> Result<Value> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        cap,
        order,
        text_len: text.len(),
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Parse a ring-element literal like `9*b1^2 - 8*b2`.
pub fn parse_poly(text: &str, cap: u32) -> Result<GradedPoly> {
    match run_parser(text, cap, 1)? {
        Value::Scalar(p) => Ok(p),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected a ring element, found a series or operation".into(),
        }),
    }
}

/// Parse a one-variable series literal like `u + b1*u^2`.
pub fn parse_series(text: &str, cap: u32, order: u32) -> Result<Series<PolyRing>> {
    match run_parser(text, cap, order)? {
        Value::Ser(s) => Ok(s),
        Value::Scalar(p) => Ok(Series::constant(PolyRing { cap }, p, 1, order)),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected a series, found an operation".into(),
        }),
    }
}

/// Parse an operation literal like `d0 + (b1^2-b2)*d2`.
pub fn parse_op(text: &str, cap: u32) -> Result<SuOp> {
    match run_parser(text, cap, 1)? {
        Value::Operation(o) => Ok(o),
        Value::Scalar(p) => SuOp::identity(cap).scale_poly(&p),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected an operation, found a series".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Monomial};

    #[test]
    fn poly_literal() {
        let p = parse_poly("9*b1^2 - 8*b2", 8).unwrap();
        assert_eq!(p.to_string(), "9*b1^2 - 8*b2");
        assert_eq!(
            p.coeff(&Monomial::from_pairs(&[(1, 2)], 8).unwrap()),
            rat(9)
        );
        assert_eq!(parse_poly("-3/2*b3", 8).unwrap().to_string(), "-3/2*b3");
        assert_eq!(parse_poly("0", 8).unwrap(), GradedPoly::zero(8));
        assert_eq!(
            parse_poly("(b1 + b2)*(b1 - b2)", 8).unwrap(),
            parse_poly("b1^2 - b2^2", 8).unwrap()
        );
    }

    #[test]
    fn series_literal() {
        let s = parse_series("u + b1*u^2", 8, 10).unwrap();
        assert_eq!(s.coeff1(1), GradedPoly::one(8));
        assert_eq!(s.coeff1(2), GradedPoly::generator(1, 8).unwrap());
    }

    #[test]
    fn op_literal() {
        let o = parse_op("d0 + (b1^2-b2)*d2", 8).unwrap();
        assert_eq!(o.coeff(0), GradedPoly::one(8));
        assert_eq!(o.coeff(2), parse_poly("b1^2-b2", 8).unwrap());
        assert!(o.coeff(1).is_zero());
    }

    #[test]
    fn printer_parser_roundtrip() {
        for text in [
            "9*b1^2 - 8*b2",
            "b1",
            "-3/2*b3 + b1*b2",
            "5",
            "-7",
            "b1^3 - 2*b1*b2 + b3",
        ] {
            let p = parse_poly(text, 8).unwrap();
            let back = parse_poly(&p.to_string(), 8).unwrap();
            assert_eq!(p, back, "roundtrip of {text}");
        }
        let s = parse_series("u + (-1*b1)*u^2 + 2*b2*u^3", 8, 10).unwrap();
        let back = parse_series(&s.to_string(), 8, 10).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("b1 + $", 8) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("b1 + + b2", 8) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        // unknown generator index / weight over cap
        assert!(parse_poly("b9", 8).is_err());
        assert!(parse_poly("b0", 8).is_err());
    }

    #[test]
    fn operations_do_not_multiply() {
        assert!(parse_op("d1*d2", 8).is_err());
        assert!(parse_op("d1^2", 8).is_err());
    }
}
