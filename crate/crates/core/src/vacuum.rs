//! The universal affine vertex algebra V^k(sl_n) as the vacuum module of the
//! affine Lie algebra.
//!
//! A monomial `x1(m1) ... xr(mr)|0>` is stored as its letters in canonical
//! order: mode ascending (most negative first), ties broken by generator rank.
//! All stored modes are negative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::arith::Rational;
use crate::lie::{Gen, LieError, SlAlgebra, Weight};
use crate::text::{parse_sum, Cursor, ParseError};
use crate::uea::{group_powers, render_terms};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VacuumError {
    #[error("level {0} is critical for sl_{1}")]
    CriticalLevel(Rational, usize),
    #[error("mode {0} is not negative; use `act` for annihilation modes")]
    NonNegativeMode(i32),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// sl_n together with the level `k` at which the central element acts.
#[derive(Debug, Clone)]
pub struct VacuumContext {
    alg: SlAlgebra,
    level: Rational,
}

impl VacuumContext {
    pub fn new(n: usize, level: Rational) -> Result<Self, VacuumError> {
        let alg = SlAlgebra::new(n)?;
        if level == Rational::from_int(-(n as i64)) {
            return Err(VacuumError::CriticalLevel(level, n));
        }
        Ok(VacuumContext { alg, level })
    }

    pub fn algebra(&self) -> &SlAlgebra {
        &self.alg
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn with_level(&self, level: Rational) -> Result<Self, VacuumError> {
        Self::new(self.n(), level)
    }
}

/// A current `x(m)`. Field order gives the canonical letter order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub mode: i32,
    pub gen: Gen,
}

impl Letter {
    pub fn new(gen: Gen, mode: i32) -> Self {
        Letter { mode, gen }
    }
}

pub type VacuumMonomial = Vec<Letter>;

pub fn is_canonical(m: &[Letter]) -> bool {
    m.windows(2).all(|w| w[0] <= w[1]) && m.iter().all(|l| l.mode < 0)
}

pub fn degree(m: &[Letter]) -> i64 {
    m.iter().map(|l| -(l.mode as i64)).sum()
}

/// Weight of a monomial in simple-root coordinates.
pub fn root_weight(alg: &SlAlgebra, m: &[Letter]) -> Vec<i64> {
    let mut v = vec![0i64; alg.rank()];
    for l in m {
        for (a, b) in v.iter_mut().zip(alg.root_coords(l.gen)) {
            *a += b;
        }
    }
    v
}

/// Weight of a monomial in fundamental-weight coordinates.
pub fn hweight(alg: &SlAlgebra, m: &[Letter]) -> Weight {
    alg.root_to_weight(&root_weight(alg, m))
}

/// Finite linear combination of canonical vacuum monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VacuumElement {
    terms: BTreeMap<VacuumMonomial, Rational>,
}

impl VacuumElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The vacuum vector `|0>`.
    pub fn vacuum() -> Self {
        Self::monomial(Vec::new(), Rational::one())
    }

    pub fn scalar_vacuum(c: Rational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn monomial(m: VacuumMonomial, c: Rational) -> Self {
        debug_assert!(is_canonical(&m));
        let mut out = Self::zero();
        out.add_term(m, c);
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&VacuumMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[Letter]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: VacuumMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &VacuumElement, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// `(root weight, degree)` shared by every monomial, if homogeneous.
    /// The zero element has no grading and returns `None`.
    pub fn grading(&self, alg: &SlAlgebra) -> Option<(Vec<i64>, i64)> {
        let mut it = self.terms.keys().map(|m| (root_weight(alg, m), degree(m)));
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn render(&self, alg: &SlAlgebra) -> String {
        render_terms(
            self.terms.iter().map(|(m, c)| {
                let letters: Vec<String> = m
                    .iter()
                    .map(|l| format!("{}({})", alg.describe(l.gen), l.mode))
                    .collect();
                let body = group_powers(&letters);
                let mono = if body.is_empty() { "|0>".to_string() } else { format!("{body} |0>") };
                (c, mono)
            }),
            "|0>",
        )
    }

    /// Parses the vacuum text format and brings every term to normal order.
    pub fn parse(ctx: &VacuumContext, src: &str) -> Result<Self, ParseError> {
        let mut eng = VacuumEngine::new(ctx);
        let mut out = Self::zero();
        for (c, word) in parse_words(ctx, src)? {
            out.add_scaled(&eng.normalize_unchecked(&word), &c);
        }
        Ok(out)
    }
}

/// The terms of a vacuum expression as written, letters in their given order.
pub fn parse_words(ctx: &VacuumContext, src: &str) -> Result<Vec<(Rational, VacuumMonomial)>, ParseError> {
    let alg = ctx.algebra();
    let mut cur = Cursor::new(src)?;
    if matches!(cur.peek(), crate::text::Tok::Num(s) if s == "0") && *cur.peek_at(1) == crate::text::Tok::Eof {
        return Ok(Vec::new());
    }
    let raw = parse_sum(&mut cur, true, &[])?;
    if !cur.at_end() {
        return Err(cur.unexpected("expected end of input"));
    }
    let mut out = Vec::with_capacity(raw.len());
    for t in raw {
        let mut word = Vec::with_capacity(t.letters.len());
        for l in &t.letters {
            let g = alg.gen(l.gen).map_err(|e| ParseError::new(l.pos, e.to_string()))?;
            let mode = l.mode.unwrap_or(-1);
            if mode >= 0 {
                return Err(ParseError::new(l.pos, format!("mode {mode} must be negative")));
            }
            word.push(Letter::new(g, mode as i32));
        }
        out.push((t.coeff, word));
    }
    Ok(out)
}

impl fmt::Display for VacuumElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*")?;
            for l in m {
                write!(f, "g{}({})", l.gen.0, l.mode)?;
            }
        }
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        Ok(())
    }
}

type Terms = Rc<Vec<(VacuumMonomial, Rational)>>;

/// Rewriting engine for V^k(sl_n), memoizing creation products and mode actions.
pub struct VacuumEngine<'a> {
    ctx: &'a VacuumContext,
    mul_cache: HashMap<(Letter, VacuumMonomial), Terms>,
    act_cache: HashMap<(Gen, i32, VacuumMonomial), Terms>,
}

impl<'a> VacuumEngine<'a> {
    pub fn new(ctx: &'a VacuumContext) -> Self {
        VacuumEngine { ctx, mul_cache: HashMap::new(), act_cache: HashMap::new() }
    }

    pub fn context(&self) -> &'a VacuumContext {
        self.ctx
    }

    /// `a * m` for a creation letter `a` and a canonical monomial `m`.
    /// Two negative modes never produce a central term: `[x(p), y(q)] = [x,y](p+q)`.
    pub fn mul_letter(&mut self, a: Letter, m: &[Letter]) -> Terms {
        debug_assert!(a.mode < 0);
        if m.first().is_none_or(|&m0| a <= m0) {
            let mut w = Vec::with_capacity(m.len() + 1);
            w.push(a);
            w.extend_from_slice(m);
            return Rc::new(vec![(w, Rational::one())]);
        }
        let key = (a, m.to_vec());
        if let Some(hit) = self.mul_cache.get(&key) {
            return hit.clone();
        }
        let m0 = m[0];
        let rest = &m[1..];
        let mut acc: HashMap<VacuumMonomial, Rational> = HashMap::new();
        let inner = self.mul_letter(a, rest);
        for (t, c) in inner.iter() {
            for (w, d) in self.mul_letter(m0, t).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(c * d);
            }
        }
        let alg = self.ctx.algebra();
        let mode = a.mode + m0.mode;
        for &(g, s) in alg.bracket_gens(a.gen, m0.gen) {
            let s = Rational::from_int(s);
            for (w, d) in self.mul_letter(Letter::new(g, mode), rest).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(&s * d);
            }
        }
        let terms = collect_terms(acc);
        self.mul_cache.insert(key, terms.clone());
        terms
    }

    /// `x(p) m|0>` for any integer mode `p` and canonical `m`.
    pub fn act_monomial(&mut self, x: Gen, p: i32, m: &[Letter]) -> Terms {
        if p < 0 {
            return self.mul_letter(Letter::new(x, p), m);
        }
        if m.is_empty() {
            return Rc::new(Vec::new());
        }
        let key = (x, p, m.to_vec());
        if let Some(hit) = self.act_cache.get(&key) {
            return hit.clone();
        }
        let a = m[0];
        let rest = &m[1..];
        let mut acc: HashMap<VacuumMonomial, Rational> = HashMap::new();
        // x(p) a(q) rest = a(q) x(p) rest + [x,a](p+q) rest + p delta_{p+q,0} <x,a> k rest
        let inner = self.act_monomial(x, p, rest);
        for (t, c) in inner.iter() {
            for (w, d) in self.mul_letter(a, t).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(c * d);
            }
        }
        let alg = self.ctx.algebra();
        let mode = p + a.mode;
        for &(g, s) in alg.bracket_gens(x, a.gen) {
            let s = Rational::from_int(s);
            for (w, d) in self.act_monomial(g, mode, rest).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(&s * d);
            }
        }
        if mode == 0 {
            let form = alg.form_gens(x, a.gen);
            if form != 0 && p != 0 {
                let c = &Rational::from_int(p as i64 * form) * self.ctx.level();
                *acc.entry(rest.to_vec()).or_insert_with(Rational::zero) += &c;
            }
        }
        let terms = collect_terms(acc);
        self.act_cache.insert(key, terms.clone());
        terms
    }

    pub fn act(&mut self, x: Gen, p: i32, v: &VacuumElement) -> VacuumElement {
        let mut out = VacuumElement::zero();
        for (m, c) in v.terms() {
            for (w, d) in self.act_monomial(x, p, m).iter() {
                out.add_term(w.clone(), c * d);
            }
        }
        out
    }

    /// Normal form of a word of creation letters.
    pub fn normal_form(&mut self, word: &[Letter]) -> Result<VacuumElement, VacuumError> {
        if let Some(l) = word.iter().find(|l| l.mode >= 0) {
            return Err(VacuumError::NonNegativeMode(l.mode));
        }
        Ok(self.normalize_unchecked(word))
    }

    fn normalize_unchecked(&mut self, word: &[Letter]) -> VacuumElement {
        let mut cur = VacuumElement::vacuum();
        for &a in word.iter().rev() {
            let mut next = VacuumElement::zero();
            for (m, c) in cur.terms() {
                for (w, d) in self.mul_letter(a, m).iter() {
                    next.add_term(w.clone(), c * d);
                }
            }
            cur = next;
        }
        cur
    }
}

fn collect_terms(acc: HashMap<VacuumMonomial, Rational>) -> Terms {
    let mut terms: Vec<(VacuumMonomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort();
    Rc::new(terms)
}

pub fn normal_form(ctx: &VacuumContext, word: &[Letter]) -> Result<VacuumElement, VacuumError> {
    VacuumEngine::new(ctx).normal_form(word)
}

pub fn act(ctx: &VacuumContext, x: Gen, m: i32, v: &VacuumElement) -> VacuumElement {
    VacuumEngine::new(ctx).act(x, m, v)
}

/// All canonical monomials of the given weight and degree, in lexicographic
/// order of their letter sequences.
pub fn weight_basis(ctx: &VacuumContext, weight: &Weight, deg: i64) -> Result<Vec<VacuumMonomial>, LieError> {
    let alg = ctx.algebra();
    let Some(target) = alg.weight_to_root(weight)? else {
        return Ok(Vec::new());
    };
    Ok(weight_basis_root(alg, &target, deg))
}

pub fn weight_basis_root(alg: &SlAlgebra, target: &[i64], deg: i64) -> Vec<VacuumMonomial> {
    if deg < 0 {
        return Vec::new();
    }
    let mut letters = Vec::new();
    for mode in -deg..=-1 {
        for g in alg.generators() {
            letters.push(Letter::new(g, mode as i32));
        }
    }
    letters.sort();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut remaining = target.to_vec();
    enumerate(alg, &letters, 0, deg, &mut remaining, &mut stack, &mut out);
    out
}

fn enumerate(
    alg: &SlAlgebra,
    letters: &[Letter],
    from: usize,
    deg_left: i64,
    remaining: &mut Vec<i64>,
    stack: &mut Vec<Letter>,
    out: &mut Vec<VacuumMonomial>,
) {
    if deg_left == 0 {
        if remaining.iter().all(|&r| r == 0) {
            out.push(stack.clone());
        }
        return;
    }
    // Each further letter changes any root coordinate by at most one and
    // costs at least one unit of degree.
    if remaining.iter().any(|r| r.abs() > deg_left) {
        return;
    }
    for idx in from..letters.len() {
        let l = letters[idx];
        let d = -(l.mode as i64);
        if d > deg_left {
            continue;
        }
        for (r, c) in remaining.iter_mut().zip(alg.root_coords(l.gen)) {
            *r -= c;
        }
        stack.push(l);
        enumerate(alg, letters, idx, deg_left - d, remaining, stack, out);
        stack.pop();
        for (r, c) in remaining.iter_mut().zip(alg.root_coords(l.gen)) {
            *r += c;
        }
    }
}
