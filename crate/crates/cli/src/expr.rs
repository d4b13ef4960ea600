//! Polynomial expressions in `z1..zn`, `zb1..zbn`, `h` and `i`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | integer '/' integer | 'i' | 'h' | 'z'k | 'zb'k | '(' expr ')'
//! ```
//!
//! A rational literal such as `1/2` is a single token; there is no division
//! operator. Whitespace is ignored between tokens.

use std::cmp::Ordering;
use std::fmt::Write as _;

use kahlerq::{BaseMono, HalfInt, JetPoly, Key, Scalar, WeylForm, EXACT};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// Returns the token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        self.skip_ws();
        let at = self.pos;
        let Some(c) = self.src[at..].chars().next() else {
            return Ok((Tok::End, at));
        };
        if c.is_ascii_digit() {
            let p: BigInt = self.digits().parse().expect("ascii digits");
            let mut q = BigInt::one();
            if self.src[self.pos..].starts_with('/') {
                let slash = self.pos;
                self.pos += 1;
                let d = self.digits();
                if d.is_empty() {
                    return Err(ExprError::Syntax { offset: slash + 1, message: "expected a denominator".into() });
                }
                q = d.parse().expect("ascii digits");
                if q.is_zero() {
                    return Err(ExprError::Syntax { offset: slash + 1, message: "zero denominator".into() });
                }
            }
            return Ok((Tok::Num(BigRational::new(p, q)), at));
        }
        if c.is_ascii_alphabetic() {
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[at..self.pos].to_string()), at));
        }
        if "+-*^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), at));
        }
        Err(ExprError::Syntax { offset: at, message: format!("unexpected character `{c}`") })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ExprError> {
        let (t, at) = self.lex.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, message: &str) -> Result<T, ExprError> {
        let found = match &self.tok {
            Tok::End => "end of input".to_string(),
            Tok::Num(q) => format!("`{q}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
        };
        Err(ExprError::Syntax { offset: self.at, message: format!("{message}, found {found}") })
    }

    fn expr(&mut self) -> Result<WeylForm, ExprError> {
        let mut acc = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = self.tok {
            self.bump()?;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<WeylForm, ExprError> {
        let mut acc = self.unary()?;
        while self.tok == Tok::Op('*') {
            self.bump()?;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<WeylForm, ExprError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<WeylForm, ExprError> {
        let base = self.atom()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        let Tok::Num(q) = &self.tok else { return self.fail("expected an exponent") };
        let k = if q.is_integer() { q.to_integer().try_into().ok().filter(|k: &u32| *k <= MAX_EXPONENT) } else { None };
        let Some(k) = k else {
            return Err(ExprError::Syntax {
                offset: self.at,
                message: format!("exponent must be an integer between 0 and {MAX_EXPONENT}"),
            });
        };
        self.bump()?;
        let mut out = WeylForm::one(self.n);
        for _ in 0..k {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<WeylForm, ExprError> {
        let n = self.n;
        let out = match self.tok.clone() {
            Tok::Num(q) => WeylForm::scalar(n, Scalar::real(q)),
            Tok::Ident(s) => self.variable(&s)?,
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::Op(')') {
                    return self.fail("expected `)`");
                }
                e
            }
            _ => return self.fail("expected a number, variable or `(`"),
        };
        self.bump()?;
        Ok(out)
    }

    fn variable(&self, s: &str) -> Result<WeylForm, ExprError> {
        let n = self.n;
        match s {
            "i" => return Ok(WeylForm::scalar(n, Scalar::i())),
            "h" => return Ok(WeylForm::hbar(n)),
            _ => {}
        }
        let unknown = || ExprError::UnknownVariable { name: s.to_string(), offset: self.at };
        let (anti, digits) = if let Some(d) = s.strip_prefix("zb") {
            (true, d)
        } else if let Some(d) = s.strip_prefix('z') {
            (false, d)
        } else {
            return Err(unknown());
        };
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let k: usize = digits.parse().map_err(|_| unknown())?;
        if k == 0 || k > n {
            return Err(unknown());
        }
        let j = if anti { JetPoly::zb(n, k - 1) } else { JetPoly::z(n, k - 1) };
        Ok(WeylForm::from_jet(&j))
    }
}

/// Parses `text` as a polynomial in `n` complex variables with coefficients in `Q(i)[ħ]`.
pub fn parse(text: &str, n: usize) -> Result<WeylForm, ExprError> {
    let mut p = Parser { lex: Lexer { src: text, pos: 0 }, tok: Tok::End, at: 0, n };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail("expected an operator or end of input");
    }
    Ok(e)
}

/// The canonical text of `text`.
pub fn normalize(text: &str, n: usize) -> Result<String, ExprError> {
    Ok(print(&parse(text, n)?))
}

fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

/// The coefficient text for a nonnegative real or imaginary magnitude, or a
/// full complex number; the flag says whether a minus sign was pulled out.
fn coefficient(c: &Scalar) -> (bool, Option<String>) {
    let (re, im) = (&c.re, &c.im);
    if im.is_zero() {
        let a = re.abs();
        return (re.is_negative(), if a.is_one() { None } else { Some(rational(&a)) });
    }
    if re.is_zero() {
        let a = im.abs();
        let s = if a.is_one() { "i".to_string() } else { format!("{}*i", rational(&a)) };
        return (im.is_negative(), Some(s));
    }
    let sign = if im.is_negative() { '-' } else { '+' };
    let a = im.abs();
    let imag = if a.is_one() { "i".to_string() } else { format!("{}*i", rational(&a)) };
    let real = if re.is_integer() { re.numer().to_string() } else { format!("{}/{}", re.numer(), re.denom()) };
    (false, Some(format!("({real} {sign} {imag})")))
}

fn power(out: &mut Vec<String>, name: &str, e: u32) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        k => out.push(format!("{name}^{k}")),
    }
}

fn hbar_factor(h: HalfInt) -> Option<String> {
    match h.twice_value {
        0 => None,
        2 => Some("h".into()),
        t if t % 2 == 0 => Some(format!("h^{}", t / 2)),
        t => Some(format!("h^({t}/2)")),
    }
}

struct Term<'a> {
    key: &'a Key,
    mono: &'a BaseMono,
    coeff: &'a Scalar,
}

fn order(a: &Term, b: &Term) -> Ordering {
    (a.key.hbar, a.mono.degree(), a.key.weight(), a.mono, a.key).cmp(&(
        b.key.hbar,
        b.mono.degree(),
        b.key.weight(),
        b.mono,
        b.key,
    ))
}

/// Canonical text: terms by ascending ħ power, then degree; factors as
/// `z1..zn, zb1..zbn, h, y.., yb.., dz.., dzb..`.
pub fn print(w: &WeylForm) -> String {
    let n = w.n();
    let mut terms: Vec<Term> = Vec::new();
    for (key, jet) in w.iter() {
        for (mono, coeff) in jet.iter() {
            terms.push(Term { key, mono, coeff });
        }
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by(order);
    let mut s = String::new();
    for (idx, t) in terms.iter().enumerate() {
        let mut factors = Vec::new();
        for i in 0..n {
            power(&mut factors, &format!("z{}", i + 1), t.mono.z.get(i) as u32);
        }
        for i in 0..n {
            power(&mut factors, &format!("zb{}", i + 1), t.mono.zb.get(i) as u32);
        }
        factors.extend(hbar_factor(t.key.hbar));
        for i in 0..n {
            power(&mut factors, &format!("y{}", i + 1), t.key.y.get(i) as u32);
        }
        for i in 0..n {
            power(&mut factors, &format!("yb{}", i + 1), t.key.yb.get(i) as u32);
        }
        for i in 0..n {
            if t.key.form.has_dz(i) {
                factors.push(format!("dz{}", i + 1));
            }
        }
        for i in 0..n {
            if t.key.form.has_dzb(i) {
                factors.push(format!("dzb{}", i + 1));
            }
        }
        let (neg, c) = coefficient(t.coeff);
        let body = match (c, factors.is_empty()) {
            (None, true) => "1".to_string(),
            (None, false) => factors.join("*"),
            (Some(c), true) => c,
            (Some(c), false) => format!("{c}*{}", factors.join("*")),
        };
        match (idx, neg) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                let _ = write!(s, "-{body}");
            }
            (_, false) => {
                let _ = write!(s, " + {body}");
            }
            (_, true) => {
                let _ = write!(s, " - {body}");
            }
        }
    }
    s
}

/// Converts a parsed expression without `h` into a base polynomial.
pub fn to_jet(w: &WeylForm) -> Option<JetPoly> {
    let mut out = JetPoly::zero(w.n(), EXACT);
    for (k, j) in w.iter() {
        if *k != Key::ONE {
            return None;
        }
        out = out.add(j);
    }
    Some(out)
}
