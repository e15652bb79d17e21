//! Projection of U(sl_n) onto polynomials on the Cartan subalgebra, the
//! zero-weight generators obtained from adjoint chains, and checks of weight
//! families against them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{Integer, Rational};
use crate::lie::{Generator, LieElement, SlAlgebra, Weight};
use crate::linalg::{rank, RationalMatrix};
use crate::poly::{parse_expr, CartanPoly, TPoly};
use crate::text::{parse_sum, Cursor, ParseError, Pos, Tok};
use crate::uea::{Pbw, UeaElement};

/// Keeps the monomials made only of Cartan generators, read as polynomials
/// in `h1..hl`.
pub fn project_hc(alg: &SlAlgebra, u: &UeaElement) -> CartanPoly {
    let l = alg.rank();
    let mut out = CartanPoly::zero(l);
    'terms: for (w, c) in u.terms() {
        let mut e = vec![0u32; l];
        for &g in w {
            match alg.describe(g) {
                Generator::H(i) => e[i - 1] += 1,
                _ => continue 'terms,
            }
        }
        out.add_term(e, c.clone());
    }
    out
}

/// Line `t -> base + t * direction` in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFamily {
    pub base: Weight,
    pub direction: Weight,
}

impl WeightFamily {
    pub fn new(base: Weight, direction: Weight) -> Self {
        assert_eq!(base.len(), direction.len());
        WeightFamily { base, direction }
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn at(&self, t: &Rational) -> Weight {
        self.base.add(&self.direction.scale(t))
    }

    pub fn evaluate(&self, p: &CartanPoly) -> TPoly {
        p.evaluate_line(&self.base, &self.direction)
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.base, self.direction)
    }
}

impl FromStr for WeightFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (b, d) = s.split_once('|').ok_or_else(|| format!("expected `base | direction` in `{s}`"))?;
        let base: Weight = b.trim().parse().map_err(|e| format!("{e}"))?;
        let direction: Weight = d.trim().parse().map_err(|e| format!("{e}"))?;
        if base.len() != direction.len() {
            return Err(format!("base has {} coordinates, direction {}", base.len(), direction.len()));
        }
        Ok(WeightFamily { base, direction })
    }
}

/// One family per nonblank line; `#` starts a comment.
pub fn parse_families(src: &str) -> Result<Vec<WeightFamily>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fam = body.parse().map_err(|e| ParseError::new(Pos { line: i + 1, col: 1 }, e))?;
        out.push(fam);
    }
    Ok(out)
}

/// `name = expression` definitions, as in the generator fixture.
pub fn parse_named_polys(nvars: usize, src: &str) -> Result<Vec<(String, CartanPoly)>, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut out = Vec::new();
    while !cur.at_end() {
        let name = match cur.bump() {
            Tok::Ident(s) => s,
            _ => return Err(cur.unexpected("expected a polynomial name")),
        };
        cur.expect(&Tok::Eq)?;
        out.push((name, parse_expr(&mut cur, nvars)?));
    }
    Ok(out)
}

/// A signed sum of adjoint chains together with the rescaling that turns the
/// projected result into a named generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub name: String,
    pub scale: Rational,
    pub chains: Vec<(Rational, Vec<Generator>)>,
}

/// Lines `name scale : chain (+|- chain)*`, chains being products of generators.
pub fn parse_chain_specs(src: &str) -> Result<Vec<ChainSpec>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let shift = |e: ParseError| ParseError::new(Pos { line: i + 1, col: e.pos.col }, e.msg);
        let mut cur = Cursor::new(body).map_err(shift)?;
        let name = match cur.bump() {
            Tok::Ident(s) => s,
            _ => return Err(shift(cur.unexpected("expected a name"))),
        };
        let scale = cur.number().map_err(shift)?;
        if scale.is_zero() {
            return Err(shift(ParseError::new(cur.pos(), "scale must be nonzero")));
        }
        cur.expect(&Tok::Colon).map_err(shift)?;
        let terms = parse_sum(&mut cur, false, &[]).map_err(shift)?;
        let chains = terms.into_iter().map(|t| (t.coeff, t.letters.into_iter().map(|l| l.gen).collect())).collect();
        out.push(ChainSpec { name, scale, chains });
    }
    Ok(out)
}

/// Applies each chain sum to `v`, projects, and divides by the scale.
pub fn p0_generators(alg: &SlAlgebra, v: &UeaElement, specs: &[ChainSpec]) -> Result<Vec<CartanPoly>, crate::lie::LieError> {
    let mut pbw = Pbw::new(alg);
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut acc = UeaElement::zero();
        for (c, chain) in &spec.chains {
            let elems: Vec<LieElement> =
                chain.iter().map(|&g| alg.gen(g).map(|g| alg.element(g))).collect::<Result<_, _>>()?;
            let img = pbw.adjoint_chain(&elems, v);
            acc.add_scaled(&img, c);
        }
        let inv = spec.scale.inv().expect("nonzero scale");
        out.push(project_hc(alg, &acc).scale(&inv));
    }
    Ok(out)
}

/// Dimension of the span of `polys`.
pub fn span_dimension(polys: &[CartanPoly]) -> usize {
    let mut monos: Vec<&Vec<u32>> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    monos.sort();
    monos.dedup();
    if monos.is_empty() {
        return 0;
    }
    let rows = polys.iter().map(|p| monos.iter().map(|e| p.coeff(e)).collect()).collect();
    let m = RationalMatrix::from_rows(monos.len(), rows);
    rank(&m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairResult {
    pub poly: usize,
    pub family: usize,
    pub value: TPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassificationReport {
    /// Polynomial index major, family index minor.
    pub pairs: Vec<PairResult>,
}

impl ClassificationReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.value.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| !p.value.is_zero())
    }

    /// Families with at least one nonzero restriction.
    pub fn failing_families(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.failures().map(|p| p.family).collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

pub fn verify_classification(polys: &[CartanPoly], families: &[WeightFamily]) -> ClassificationReport {
    let grid: Vec<(usize, usize)> =
        (0..polys.len()).flat_map(|i| (0..families.len()).map(move |j| (i, j))).collect();
    let pairs = grid
        .into_par_iter()
        .map(|(i, j)| PairResult { poly: i, family: j, value: families[j].evaluate(&polys[i]) })
        .collect();
    ClassificationReport { pairs }
}

/// The values of `t` for which a family is dominant integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralMembers {
    None,
    /// A constant dominant integral family: every `t`.
    Everything,
    AllNonnegIntegers,
    Finite(Vec<Rational>),
    /// `{ s + k * period : s in first, k = 0, 1, 2, ... }`.
    Progression { first: Vec<Rational>, period: Rational },
}

impl fmt::Display for IntegralMembers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            IntegralMembers::None => f.write_str("none"),
            IntegralMembers::Everything => f.write_str("all t"),
            IntegralMembers::AllNonnegIntegers => f.write_str("t in Z>=0"),
            IntegralMembers::Finite(v) => write!(f, "t in {{{}}}", list(v)),
            IntegralMembers::Progression { first, period } => write!(f, "t in {{{}}} + {period} Z>=0", list(first)),
        }
    }
}

fn is_nonneg_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_negative()
}

pub fn integral_members(fam: &WeightFamily) -> IntegralMembers {
    let b = &fam.base.coords;
    let d = &fam.direction.coords;
    let Some(j) = d.iter().position(|x| !x.is_zero()) else {
        return if fam.base.is_dominant_integral() { IntegralMembers::Everything } else { IntegralMembers::None };
    };
    // Parametrize by n = coordinate j, a nonnegative integer: t = (n - b_j) / d_j.
    // Every coordinate becomes alpha_i + beta_i n.
    let dj_inv = d[j].inv().expect("nonzero");
    let mut lo = Integer::from(0);
    let mut hi: Option<Integer> = None;
    let mut modulus = Integer::one();
    let mut affine = Vec::new();
    for i in 0..b.len() {
        let beta = &d[i] * &dj_inv;
        let alpha = &b[i] - &(&beta * &b[j]);
        if beta.is_zero() {
            if !is_nonneg_integer(&alpha) {
                return IntegralMembers::None;
            }
            continue;
        }
        // alpha + beta n >= 0.
        let bound = (-&alpha).checked_div(&beta).expect("nonzero");
        if beta.is_negative() {
            let f = bound.floor();
            hi = Some(match hi {
                Some(h) if h < f => h,
                _ => f,
            });
        } else {
            let c = bound.ceil();
            if c > lo {
                lo = c;
            }
        }
        modulus = modulus.lcm(alpha.denom()).lcm(beta.denom());
        affine.push((alpha, beta));
    }
    let integral_at = |n: &Integer| {
        let n = Rational::from_integer(n.clone());
        affine.iter().all(|(a, bt)| (a + &(bt * &n)).is_integer())
    };
    let to_t = |n: &Integer| &(&Rational::from_integer(n.clone()) - &b[j]) * &dj_inv;
    if let Some(h) = hi {
        if h < lo {
            return IntegralMembers::None;
        }
        let span = (&h - &lo).to_u64().expect("bounded family range");
        let mut ts: Vec<Rational> = (0..=span)
            .map(|k| &lo + Integer::from(k))
            .filter(|n| integral_at(n))
            .map(|n| to_t(&n))
            .collect();
        ts.sort();
        return if ts.is_empty() { IntegralMembers::None } else { IntegralMembers::Finite(ts) };
    }
    let m = modulus.to_u64().expect("small modulus");
    let first: Vec<Integer> = (0..m).map(|k| &lo + Integer::from(k)).filter(|n| integral_at(n)).collect();
    if first.is_empty() {
        return IntegralMembers::None;
    }
    // In n order; a negative period means t decreases along the progression.
    let all = first.len() as u64 == m;
    let (first_t, period) = if all {
        (vec![to_t(&lo)], dj_inv.clone())
    } else {
        (first.iter().map(to_t).collect::<Vec<_>>(), &Rational::from_integer(modulus) * &dj_inv)
    };
    if first_t == [Rational::zero()] && period.is_one() {
        return IntegralMembers::AllNonnegIntegers;
    }
    IntegralMembers::Progression { first: first_t, period }
}
