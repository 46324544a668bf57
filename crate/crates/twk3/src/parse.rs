//! Text grammars for lattice references and B-field expressions.
//!
//! Lattices: `U`, `E8-`, `A<k>` for ⟨k⟩, `Lambda`, `LambdaTilde`,
//! `Lambda_d:<d>`, twists like `U(2)`, and sums like `U+U(2)+A4`.
//!
//! B-fields: sums of terms `c*basis`, `basis*c`, `basis/k`, `basis`, and
//! parenthesized sums with an overall divisor, e.g. `(f1*3 + e2 + f2*3)/3`.
//! Basis names: `e1,f1,e2,f2,e3,f3` for the hyperbolic pairs and
//! `a1..a8`, `b1..b8` for the two E8(−1) blocks. A bare rational constant
//! must be `0`.

use num::{BigRational, One, Signed, Zero};

use crate::lattice::Lattice;
use crate::mat::{Int, Rat};
use crate::mukai::{BField, LAMBDA_RANK};
use crate::{Error, Result};

/// Resolves a lattice reference string.
pub fn parse_lattice(s: &str) -> Result<Lattice> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty lattice reference".into()));
    }
    let mut terms = s.split('+').map(parse_lattice_term);
    let mut acc = terms.next().unwrap()?;
    for t in terms {
        acc = acc.direct_sum(&t?);
    }
    Ok(acc.with_label(s.to_string()))
}

fn parse_lattice_term(s: &str) -> Result<Lattice> {
    let s = s.trim();
    let (name, twist) = match s.find('(') {
        Some(open) => {
            let close = s
                .rfind(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parens in `{s}`")))?;
            let k: Int = s[open + 1..close]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid twist in `{s}`")))?;
            (&s[..open], Some(k))
        }
        None => (s, None),
    };
    let base = match name.trim() {
        "U" => Lattice::hyperbolic_u(),
        "E8-" => Lattice::e8_minus(),
        "Lambda" => Lattice::k3_lambda(),
        "LambdaTilde" => Lattice::extended_k3(),
        n if n.starts_with("Lambda_d:") => {
            let d: u64 = n["Lambda_d:".len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("invalid degree in `{n}`")))?;
            if d == 0 {
                return Err(Error::Parse("polarization degree must be positive".into()));
            }
            Lattice::lambda_d(d)
        }
        n if n.starts_with('A') => {
            let k: Int = n[1..]
                .parse()
                .map_err(|_| Error::Parse(format!("invalid rank-1 lattice `{n}`")))?;
            if k.is_zero() {
                return Err(Error::Parse("⟨0⟩ is degenerate".into()));
            }
            Lattice::rank_one(&k)?
        }
        other => return Err(Error::Parse(format!("unknown lattice name `{other}`"))),
    };
    match twist {
        Some(k) => {
            if k.is_zero() {
                return Err(Error::Parse("twist by 0 is degenerate".into()));
            }
            base.twist(&k)
        }
        None => Ok(base),
    }
}

const BASIS_NAMES: [(&str, usize); 22] = [
    ("a1", 0),
    ("a2", 1),
    ("a3", 2),
    ("a4", 3),
    ("a5", 4),
    ("a6", 5),
    ("a7", 6),
    ("a8", 7),
    ("b1", 8),
    ("b2", 9),
    ("b3", 10),
    ("b4", 11),
    ("b5", 12),
    ("b6", 13),
    ("b7", 14),
    ("b8", 15),
    ("e1", 16),
    ("f1", 17),
    ("e2", 18),
    ("f2", 19),
    ("e3", 20),
    ("f3", 21),
];

pub fn basis_name(idx: usize) -> &'static str {
    BASIS_NAMES[idx].0
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                toks.push(Tok::Open);
                i += 1;
            }
            ')' => {
                toks.push(Tok::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let n: Int = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse("invalid number".into()))?;
                toks.push(Tok::Num(Rat::from(n)));
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let idx = BASIS_NAMES
                    .iter()
                    .find(|(n, _)| *n == word)
                    .map(|(_, i)| *i)
                    .ok_or_else(|| Error::Parse(format!("unknown basis vector `{word}`")))?;
                toks.push(Tok::Ident(idx));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

type Vec22 = Vec<Rat>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Vec22> {
        let mut negate_first = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            for c in acc.iter_mut() {
                *c = -c.clone();
            }
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    for (a, b) in acc.iter_mut().zip(t) {
                        *a += b;
                    }
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    for (a, b) in acc.iter_mut().zip(t) {
                        *a -= b;
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := atom trailer*, where atom is a number, a basis vector, or a
    /// parenthesized expr; trailers are `*atom`, `/number`.
    fn term(&mut self) -> Result<Vec22> {
        let mut scalar = Rat::one();
        let mut vector: Option<Vec22> = None;

        let mut absorb = |val: Atom, scalar: &mut Rat, vector: &mut Option<Vec22>| -> Result<()> {
            match val {
                Atom::Scalar(c) => {
                    *scalar *= c;
                    Ok(())
                }
                Atom::Vector(v) => {
                    if vector.is_some() {
                        return Err(Error::Parse("product of two vectors in a term".into()));
                    }
                    *vector = Some(v);
                    Ok(())
                }
            }
        };

        let first = self.atom()?;
        absorb(first, &mut scalar, &mut vector)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let a = self.atom()?;
                    absorb(a, &mut scalar, &mut vector)?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    match self.atom()? {
                        Atom::Scalar(c) => {
                            if c.is_zero() {
                                return Err(Error::Parse("division by zero".into()));
                            }
                            scalar /= c;
                        }
                        Atom::Vector(_) => {
                            return Err(Error::Parse("division by a vector".into()))
                        }
                    }
                }
                _ => break,
            }
        }
        match vector {
            Some(v) => Ok(v.into_iter().map(|c| c * &scalar).collect()),
            None => {
                // a bare constant only denotes the zero vector
                if scalar.is_zero() {
                    Ok(vec![Rat::zero(); LAMBDA_RANK])
                } else {
                    Err(Error::Parse("constant term must be 0".into()))
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.next() {
            Some(Tok::Num(c)) => Ok(Atom::Scalar(c)),
            Some(Tok::Ident(idx)) => {
                let mut v = vec![Rat::zero(); LAMBDA_RANK];
                v[idx] = Rat::one();
                Ok(Atom::Vector(v))
            }
            Some(Tok::Open) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::Close) => Ok(Atom::Vector(inner)),
                    _ => Err(Error::Parse("expected `)`".into())),
                }
            }
            Some(Tok::Minus) => match self.atom()? {
                Atom::Scalar(c) => Ok(Atom::Scalar(-c)),
                Atom::Vector(v) => Ok(Atom::Vector(v.into_iter().map(|c| -c).collect())),
            },
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

enum Atom {
    Scalar(Rat),
    Vector(Vec22),
}

/// Parses a B-field expression into a Λ_Q vector.
pub fn parse_bfield(s: &str) -> Result<BField> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty B-field expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input in B-field expression".into()));
    }
    Ok(BField::new(v))
}

/// Renders a B-field as a symbolic sum; inverse of [`parse_bfield`] up to
/// formatting.
pub fn bfield_to_string(b: &BField) -> String {
    let mut parts = Vec::new();
    for (i, c) in b.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = basis_name(i);
        let part = if c.is_one() {
            name.to_string()
        } else if *c == -BigRational::one() {
            format!("-{name}")
        } else if c.is_integer() {
            format!("{name}*{}", c.numer())
        } else if c.numer().is_one() {
            format!("{name}/{}", c.denom())
        } else if c.numer() == &Int::from(-1) {
            format!("-{name}/{}", c.denom())
        } else {
            format!("{name}*{}/{}", c.numer(), c.denom())
        };
        parts.push(part);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(stripped) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::int;
    use crate::mukai::{E2, F1, F2, F3};

    #[test]
    fn lattice_references() {
        assert_eq!(parse_lattice("U").unwrap().signature(), (1, 1));
        assert_eq!(parse_lattice("E8-").unwrap().signature(), (0, 8));
        assert_eq!(parse_lattice("A4").unwrap().gram().get(0, 0), &int(4));
        assert_eq!(parse_lattice("A-2").unwrap().gram().get(0, 0), &int(-2));
        assert_eq!(parse_lattice("LambdaTilde").unwrap().signature(), (4, 20));
        assert_eq!(parse_lattice("Lambda_d:2").unwrap().rank(), 21);
        let l = parse_lattice("U+U(2)+A4").unwrap();
        assert_eq!(l.rank(), 5);
        assert_eq!(l.gram().get(2, 3), &int(2));
        assert!(parse_lattice("Q7").is_err());
        assert!(parse_lattice("U(0)").is_err());
    }

    #[test]
    fn bfield_expressions() {
        let b = parse_bfield("e2*7 + f3/7").unwrap();
        assert_eq!(b.coords()[E2], Rat::from(int(7)));
        assert_eq!(b.coords()[F3], Rat::new(int(1), int(7)));

        let b = parse_bfield("(f1*3 + e2 + f2*3)/3").unwrap();
        assert_eq!(b.coords()[F1], Rat::one());
        assert_eq!(b.coords()[E2], Rat::new(int(1), int(3)));
        assert_eq!(b.coords()[F2], Rat::one());

        let zero = parse_bfield("0").unwrap();
        assert_eq!(zero, BField::zero());

        assert!(parse_bfield("5").is_err());
        assert!(parse_bfield("e1*f1").is_err());
        assert!(parse_bfield("e9").is_err());
    }

    #[test]
    fn bfield_rendering_round_trips() {
        for s in ["e2*7 + f3/7", "0", "-e1/2 + f2*5", "a1 + b8*2/3"] {
            let b = parse_bfield(s).unwrap();
            let rendered = bfield_to_string(&b);
            assert_eq!(parse_bfield(&rendered).unwrap(), b, "via `{rendered}`");
        }
    }
}
