//! Polynomials on the Cartan subalgebra, and univariate polynomials in `t`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::Rational;
use crate::lie::{Generator, Weight};
use crate::text::{Cursor, ParseError, Tok};

/// Polynomial in `h1..hl`, stored as exponent vector -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl CartanPoly {
    pub fn zero(nvars: usize) -> Self {
        CartanPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `h_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!((1..=nvars).contains(&i), "h{i} out of range");
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Value at `h_i = mu_i`.
    pub fn evaluate(&self, mu: &Weight) -> Rational {
        assert_eq!(mu.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, &k) in mu.coords.iter().zip(e) {
                    v = &v * &x.pow(k);
                }
                v
            })
            .sum()
    }

    /// Restriction to the line `h_i = base_i + t * dir_i`.
    pub fn evaluate_line(&self, base: &Weight, dir: &Weight) -> TPoly {
        assert_eq!(base.len(), self.nvars);
        assert_eq!(dir.len(), self.nvars);
        let lin: Vec<TPoly> = base
            .coords
            .iter()
            .zip(&dir.coords)
            .map(|(b, d)| TPoly::new(vec![b.clone(), d.clone()]))
            .collect();
        let mut powers: Vec<Vec<TPoly>> = lin.iter().map(|l| vec![TPoly::one(), l.clone()]).collect();
        let mut out = TPoly::zero();
        for (e, c) in &self.terms {
            let mut v = TPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&lin[i]);
                    powers[i].push(next);
                }
                v = v.mul(&powers[i][k as usize]);
            }
            out = out.add(&v);
        }
        out
    }

    /// Parses expressions such as `h1 h3 (65 + 10 h1 - 8 h1 h2^2)`.
    pub fn parse(nvars: usize, src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(src)?;
        let p = parse_expr(&mut cur, nvars)?;
        if !cur.at_end() {
            return Err(cur.unexpected("expected end of input"));
        }
        Ok(p)
    }

    /// Rendering with `h1 .. hl` variable names, terms by total degree then
    /// lexicographically.
    pub fn render(&self) -> String {
        let mut terms: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("h{}", j + 1) } else { format!("h{}^{}", j + 1, k) })
                .collect();
            let a = c.abs();
            let body = match (mono.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => mono.join(" "),
                (false, false) => format!("{a} {}", mono.join(" ")),
            };
            match (i, c.is_negative()) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for CartanPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn starts_factor(cur: &Cursor) -> bool {
    matches!(cur.peek(), Tok::Num(_) | Tok::LParen) || cur.at_generator()
}

pub(crate) fn parse_expr(cur: &mut Cursor, nvars: usize) -> Result<CartanPoly, ParseError> {
    let mut acc = CartanPoly::zero(nvars);
    let mut first = true;
    loop {
        let neg = if cur.eat(&Tok::Minus) {
            true
        } else if cur.eat(&Tok::Plus) || first {
            false
        } else {
            return Ok(acc);
        };
        first = false;
        let t = parse_product(cur, nvars)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
    }
}

fn parse_product(cur: &mut Cursor, nvars: usize) -> Result<CartanPoly, ParseError> {
    if !starts_factor(cur) {
        return Err(cur.unexpected("expected a number, variable or `(`"));
    }
    let mut acc = parse_power(cur, nvars)?;
    loop {
        if cur.eat(&Tok::Star) || starts_factor(cur) {
            acc = acc.mul(&parse_power(cur, nvars)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(cur: &mut Cursor, nvars: usize) -> Result<CartanPoly, ParseError> {
    let base = match cur.peek() {
        Tok::Num(_) => CartanPoly::constant(nvars, cur.number()?),
        Tok::LParen => {
            cur.bump();
            let inner = parse_expr(cur, nvars)?;
            cur.expect(&Tok::RParen)?;
            inner
        }
        _ if cur.at_generator() => {
            let (g, pos) = cur.generator()?;
            match g {
                Generator::H(i) if (1..=nvars).contains(&i) => CartanPoly::var(nvars, i),
                _ => return Err(ParseError::new(pos, format!("`{g}` is not a variable h1..h{nvars}"))),
            }
        }
        _ => return Err(cur.unexpected("expected a number, variable or `(`")),
    };
    if cur.eat(&Tok::Caret) {
        let k = cur.small_int()?;
        return Ok(base.pow(k as u32));
    }
    Ok(base)
}

/// Univariate polynomial in `t`; `coeffs[i]` multiplies `t^i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: Vec<Rational>,
}

impl TPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| &(&acc * t) + c)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            let body = match i {
                0 => a.to_string(),
                _ => {
                    let t = if i == 1 { "t".to_string() } else { format!("t^{i}") };
                    if a.is_one() {
                        t
                    } else {
                        format!("{a} {t}")
                    }
                }
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn parse_forms() {
        let a = CartanPoly::parse(5, "h1*h3*(65 + 10 h1)").unwrap();
        let b = CartanPoly::parse(5, "65 h_1 h[3] + 10 h1^2 h3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff(&[1, 0, 1, 0, 0]), q(65, 1));
        let c = CartanPoly::parse(5, "h2 (7/2 + h1)(1 - h2)").unwrap();
        assert_eq!(c.coeff(&[0, 1, 0, 0, 0]), q(7, 2));
        assert_eq!(c.coeff(&[0, 2, 0, 0, 0]), q(-7, 2));
        assert_eq!(c.coeff(&[1, 2, 0, 0, 0]), q(-1, 1));
        assert!(CartanPoly::parse(5, "h6").is_err());
        assert!(CartanPoly::parse(5, "h1 +").is_err());
        assert!(CartanPoly::parse(2, "e[1,2]").is_err());
        assert!(CartanPoly::parse(2, "- h1 - h2").unwrap().coeff(&[1, 0]) == q(-1, 1));
    }

    #[test]
    fn evaluation() {
        let p = CartanPoly::parse(2, "h1^2 - 3 h1 h2 + 1/2").unwrap();
        assert_eq!(p.evaluate(&Weight::from_ints(&[2, 1])), q(-3, 2));
        let line = p.evaluate_line(&Weight::from_ints(&[0, 1]), &Weight::from_ints(&[1, 0]));
        assert_eq!(line, TPoly::new(vec![q(1, 2), q(-3, 1), q(1, 1)]));
        assert_eq!(line.to_string(), "t^2 - 3 t + 1/2");
        assert!(CartanPoly::zero(3).evaluate_line(&Weight::zero(3), &Weight::zero(3)).is_zero());
    }

    fn arb_poly() -> impl Strategy<Value = CartanPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -20i64..20, 1i64..5), 0..6).prop_map(|ts| {
            let mut p = CartanPoly::zero(3);
            for ((a, b, c), n, d) in ts {
                p.add_term(vec![a, b, c], q(n, d));
            }
            p
        })
    }

    fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-9i64..10, 1i64..4).prop_map(|(n, d)| q(n, d)), 3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn render_parse_round_trip(p in arb_poly()) {
            prop_assert_eq!(CartanPoly::parse(3, &p.render()).unwrap(), p);
        }

        #[test]
        fn evaluation_is_a_ring_map(p in arb_poly(), r in arb_poly(), x in arb_point()) {
            let w = Weight::new(x);
            prop_assert_eq!(p.mul(&r).evaluate(&w), &p.evaluate(&w) * &r.evaluate(&w));
            prop_assert_eq!(p.add(&r).evaluate(&w), &p.evaluate(&w) + &r.evaluate(&w));
        }

        #[test]
        fn line_restriction_agrees_pointwise(p in arb_poly(), b in arb_point(), d in arb_point(), t in -6i64..7) {
            let base = Weight::new(b);
            let dir = Weight::new(d);
            let t = q(t, 1);
            let at = base.add(&dir.scale(&t));
            prop_assert_eq!(p.evaluate_line(&base, &dir).eval(&t), p.evaluate(&at));
        }
    }
}
