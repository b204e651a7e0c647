//! Text format for differential polynomials and series.
//!
//! Grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! poly   := [ '-' ] term { ('+' | '-') term }
//! term   := factor { '*' factor }
//! factor := atom [ '^' INT ]                    (nonnegative integer power)
//! atom   := RAT | IDENT derivs | '(' poly ')'
//! derivs := ε | "'" (1 to 3 primes) | '^' '(' INT ')'
//! RAT    := INT [ '/' INT ]
//! ```
//!
//! Derivative marks attach directly to an indeterminate name: `x''` is the
//! second derivative and `x^(5)` the fifth; a bare-integer caret is a power,
//! so `x^5` is the fifth power. Multiplication is always explicit. In time
//! mode the identifier `t` denotes the base-field element `t` (so it cannot
//! carry derivative marks and cannot be declared as an indeterminate).
//!
//! [`crate::poly::format_diffpoly`] emits exactly this grammar, and parsing
//! its output under the same name table returns the original polynomial.

use num::bigint::BigInt;
use num::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{DerivVar, DiffPoly, VarNames};
use crate::scalar::{DiffField, RatT};

/// Scalar domains the parser can target. The only difference is whether the
/// identifier `t` resolves to a base-field element.
pub trait ParseScalar: DiffField {
    fn t_element() -> Option<Self> {
        None
    }
}

impl ParseScalar for BigRational {}

impl ParseScalar for RatT {
    fn t_element() -> Option<Self> {
        Some(RatT::t())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Prime,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    pos: usize,
    end: usize,
}

fn lex(input: &str) -> Result<Vec<Lexed>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '\'' => {
                i += 1;
                Tok::Prime
            }
            c if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(input[start..i].parse().expect("digits parse"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(input[start..i].to_string())
            }
            c => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push(Lexed {
            tok,
            pos: start,
            end: i,
        });
    }
    Ok(out)
}

struct Parser<'a, K> {
    toks: Vec<Lexed>,
    k: usize,
    names: &'a VarNames,
    eof: usize,
    _marker: std::marker::PhantomData<K>,
}

impl<'a, K: ParseScalar> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|l| &l.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|l| l.pos).unwrap_or(self.eof)
    }

    fn bump(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.k).cloned();
        if t.is_some() {
            self.k += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Lexed> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().unwrap()),
            _ => Err(Error::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<DiffPoly<K>> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            self.term()?.neg_ref()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add_ref(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub_ref(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffPoly<K>> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul_ref(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly<K>> {
        let a = self.atom()?;
        // A caret followed by a bare integer is a power; a caret followed by
        // '(' was already consumed inside `atom` as a derivative mark.
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.pos();
            match self.bump().map(|l| l.tok) {
                Some(Tok::Int(n)) => {
                    let e = u32::try_from(&n).map_err(|_| Error::Syntax {
                        pos,
                        msg: "power too large".into(),
                    })?;
                    Ok(a.pow(e))
                }
                Some(Tok::Minus) => Err(Error::Syntax {
                    pos,
                    msg: "negative powers are not polynomial".into(),
                }),
                _ => Err(Error::Syntax {
                    pos,
                    msg: "expected integer power".into(),
                }),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<DiffPoly<K>> {
        let pos = self.pos();
        match self.bump().map(|l| (l.tok, l.pos, l.end)) {
            Some((Tok::Int(n), _, _)) => {
                // Rational literal: INT [ '/' INT ].
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump().map(|l| l.tok) {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(Error::Syntax {
                                    pos: dpos,
                                    msg: "zero denominator".into(),
                                });
                            }
                            Ok(DiffPoly::constant(K::from_rational(&BigRational::new(
                                n, d,
                            ))))
                        }
                        _ => Err(Error::Syntax {
                            pos: dpos,
                            msg: "expected integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(DiffPoly::constant(K::from_rational(
                        &BigRational::from_integer(n),
                    )))
                }
            }
            Some((Tok::Ident(name), _, end)) => self.ident_atom(name, pos, end),
            Some((Tok::LParen, _, _)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some((tok, _, _)) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn ident_atom(&mut self, name: String, pos: usize, mut end: usize) -> Result<DiffPoly<K>> {
        let indet = self.names.index(&name);
        let is_t = indet.is_none() && name == "t" && K::t_element().is_some();
        if indet.is_none() && !is_t {
            return Err(Error::Syntax {
                pos,
                msg: format!("unknown indeterminate {name:?}"),
            });
        }

        // Prime marks must sit directly against the name.
        let mut primes = 0u32;
        while matches!(self.peek(), Some(Tok::Prime)) && self.toks[self.k].pos == end {
            end = self.toks[self.k].end;
            self.bump();
            primes += 1;
            if primes > 3 {
                return Err(Error::Syntax {
                    pos: self.toks[self.k - 1].pos,
                    msg: "more than three primes; write the caret form x^(k)".into(),
                });
            }
        }

        // Caret-parenthesis derivative form, only without primes.
        let mut caret_order: Option<u32> = None;
        if primes == 0
            && matches!(self.peek(), Some(Tok::Caret))
            && matches!(self.toks.get(self.k + 1).map(|l| &l.tok), Some(Tok::LParen))
        {
            self.bump(); // ^
            self.bump(); // (
            if matches!(self.peek(), Some(Tok::Minus)) {
                return Err(Error::NegativeDerivativeOrder { pos: self.pos() });
            }
            let opos = self.pos();
            let order = match self.bump().map(|l| l.tok) {
                Some(Tok::Int(n)) => u32::try_from(&n).map_err(|_| Error::Syntax {
                    pos: opos,
                    msg: "derivative order too large".into(),
                })?,
                _ => {
                    return Err(Error::Syntax {
                        pos: opos,
                        msg: "expected derivative order".into(),
                    })
                }
            };
            self.expect(Tok::RParen, "closing parenthesis of derivative order")?;
            caret_order = Some(order);
        }

        if is_t {
            if primes > 0 || caret_order.is_some() {
                return Err(Error::Syntax {
                    pos,
                    msg: "t cannot carry derivative marks".into(),
                });
            }
            return Ok(DiffPoly::constant(K::t_element().expect("checked")));
        }

        let order = caret_order.unwrap_or(primes);
        Ok(DiffPoly::var(DerivVar::new(indet.unwrap(), order)))
    }
}

/// Parse one differential polynomial against a name table.
pub fn parse_diffpoly<K: ParseScalar>(input: &str, names: &VarNames) -> Result<DiffPoly<K>> {
    let toks = lex(input)?;
    let mut p = Parser::<K> {
        toks,
        k: 0,
        names,
        eof: input.len(),
        _marker: std::marker::PhantomData,
    };
    let poly = p.expr()?;
    if p.k != p.toks.len() {
        return Err(Error::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

/// Parse a single rational in `num` or `num/den` form (optional leading `-`).
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, s),
    };
    let (num_s, den_s) = match rest.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (rest, None),
    };
    let parse_int = |txt: &str| -> Result<BigInt> {
        if txt.is_empty() || !txt.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("invalid rational {input:?}"),
            });
        }
        Ok(txt.parse().expect("digits"))
    };
    let num = parse_int(num_s)?;
    let den = match den_s {
        Some(d) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            d
        }
        None => BigInt::from(1),
    };
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Parse a comma-separated list of rationals (series coefficients, lowest
/// degree first).
pub fn parse_rat_list(input: &str) -> Result<Vec<BigRational>> {
    let s = input.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::format_diffpoly;
    use num::BigRational;

    type Q = BigRational;

    fn names_xy() -> VarNames {
        VarNames::new(vec!["x".into(), "y".into()]).unwrap()
    }

    fn p(s: &str) -> DiffPoly<Q> {
        parse_diffpoly::<Q>(s, &names_xy()).unwrap()
    }

    #[test]
    fn parses_spec_shapes() {
        let poly = p("2*y*y'' - y*x + (x')^2");
        assert_eq!(poly.order_wrt(2), Some(2));
        assert_eq!(poly.order_wrt(1), Some(1));
        assert_eq!(poly.num_terms(), 3);

        // Caret derivative vs caret power.
        assert_eq!(p("x^(2)"), DiffPoly::var(DerivVar::new(1, 2)));
        assert_eq!(p("x^2"), DiffPoly::var(DerivVar::new(1, 0)).pow(2));
        assert_eq!(p("x^(4)^2"), DiffPoly::var(DerivVar::new(1, 4)).pow(2));
        assert_eq!(p("x'''"), DiffPoly::var(DerivVar::new(1, 3)));
    }

    #[test]
    fn rational_literals() {
        let poly = p("1/2*x - 3");
        let half = Q::new(1.into(), 2.into());
        let expect = DiffPoly::var(DerivVar::new(1, 0))
            .scale(&half)
            .sub_ref(&DiffPoly::from_int(3));
        assert_eq!(poly, expect);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_diffpoly::<Q>("x^(-1)", &names_xy()),
            Err(Error::NegativeDerivativeOrder { .. })
        ));
        assert!(matches!(
            parse_diffpoly::<Q>("x +", &names_xy()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_diffpoly::<Q>("z + 1", &names_xy()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_diffpoly::<Q>("x''''", &names_xy()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_diffpoly::<Q>("x y", &names_xy()),
            Err(Error::Syntax { .. })
        ));
        // t is not available in constant mode.
        assert!(matches!(
            parse_diffpoly::<Q>("t + x", &names_xy()),
            Err(Error::Syntax { .. })
        ));
        // Primes must touch the name.
        assert!(matches!(
            parse_diffpoly::<Q>("x '", &names_xy()),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn time_mode_resolves_t() {
        use crate::scalar::{RatT, TPoly};
        let poly = parse_diffpoly::<RatT>("t^2*x' - t + 1", &names_xy()).unwrap();
        assert_eq!(poly.num_terms(), 2); // t^2*x' and the constant (1 - t)
        let c = poly.coeff(&crate::poly::Monomial::one());
        let t = TPoly::t();
        let expect = TPoly::one().sub(&t);
        assert_eq!(c.as_tpoly(), Some(&expect));

        assert!(parse_diffpoly::<RatT>("t'", &names_xy()).is_err());
    }

    #[test]
    fn format_parse_round_trip() {
        let samples = [
            "2*y*y'' + x'^2 - x*y",
            "x^(5) - 1/3",
            "-x - y",
            "0",
            "7",
            "x*x'*y^3 - 2*x + 5/2",
        ];
        for s in samples {
            let poly = p(s);
            let text = format_diffpoly(&poly, &names_xy());
            assert_eq!(p(&text), poly, "round-trip through {text:?}");
        }
    }
}
