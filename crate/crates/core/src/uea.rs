//! PBW arithmetic in the universal enveloping algebra U(sl_n).
//!
//! Monomials are words of basis elements with nondecreasing rank, i.e. all
//! F's, then all H's, then all E's. Elements are finite linear combinations
//! of such monomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::arith::Rational;
use crate::lie::{Gen, LieElement, SlAlgebra};
use crate::text::{parse_sum, Cursor, ParseError, Tok};

pub type Word = Vec<Gen>;

pub fn is_canonical(word: &[Gen]) -> bool {
    word.windows(2).all(|w| w[0] <= w[1])
}

/// Finite linear combination of PBW monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<Word, Rational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Rational::one())
    }

    /// A single term. The word must already be canonical.
    pub fn monomial(word: Word, c: Rational) -> Self {
        debug_assert!(is_canonical(&word));
        let mut out = Self::zero();
        out.add_term(word, c);
        out
    }

    pub fn gen(g: Gen) -> Self {
        Self::monomial(vec![g], Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::monomial(Vec::new(), c)
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[Gen]) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UeaElement, c: &Rational) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
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

    /// Weight of a word in simple-root coordinates.
    pub fn word_root(alg: &SlAlgebra, word: &[Gen]) -> Vec<i64> {
        let mut v = vec![0i64; alg.rank()];
        for g in word {
            for (a, b) in v.iter_mut().zip(alg.root_coords(*g)) {
                *a += b;
            }
        }
        v
    }

    /// The common weight of all monomials, if the element is homogeneous.
    pub fn root_weight(&self, alg: &SlAlgebra) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|w| Self::word_root(alg, w));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn render(&self, alg: &SlAlgebra) -> String {
        render_terms(
            self.terms.iter().map(|(w, c)| {
                let letters: Vec<String> = w.iter().map(|g| alg.describe(*g).to_string()).collect();
                (c, group_powers(&letters))
            }),
            "",
        )
    }

    /// Parses the UEA text format and PBW-normalizes the result.
    pub fn parse(alg: &SlAlgebra, src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(src)?;
        if matches!(cur.peek(), Tok::Num(s) if s == "0") && *cur.peek_at(1) == Tok::Eof {
            return Ok(Self::zero());
        }
        let raw = parse_sum(&mut cur, false, &[])?;
        if !cur.at_end() {
            return Err(cur.unexpected("expected end of input"));
        }
        let mut pbw = Pbw::new(alg);
        let mut out = Self::zero();
        for t in raw {
            let word = t
                .letters
                .iter()
                .map(|l| alg.gen(l.gen).map_err(|e| ParseError::new(l.pos, e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            out.add_scaled(&pbw.normalize(&word), &t.coeff);
        }
        Ok(out)
    }
}

/// Collapses runs of equal letters into `x^k`.
pub(crate) fn group_powers(letters: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(letters[i].clone());
        } else {
            parts.push(format!("{}^{}", letters[i], j - i));
        }
        i = j;
    }
    parts.join(" ")
}

/// One term per line: `c m`, then `+ c m` / `- c m`. Unit coefficients are
/// omitted in front of nonempty monomials; `empty` stands for the empty word.
pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (&'a Rational, String)>, empty: &str) -> String {
    let mut out = String::new();
    for (i, (c, mono)) in terms.enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if mono.is_empty() {
            format!("{a} {empty}").trim_end().to_string()
        } else if a.is_one() {
            mono
        } else {
            format!("{a} {mono}")
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push_str("- ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str("\n+ ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str("\n- ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push('\n');
    out
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{:?}", w.iter().map(|g| g.0).collect::<Vec<_>>())?;
        }
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        Ok(())
    }
}

type Terms = Rc<Vec<(Word, Rational)>>;

/// PBW rewriting engine with a memo table for `generator * canonical word`.
pub struct Pbw<'a> {
    alg: &'a SlAlgebra,
    cache: HashMap<(Gen, Word), Terms>,
}

impl<'a> Pbw<'a> {
    pub fn new(alg: &'a SlAlgebra) -> Self {
        Pbw { alg, cache: HashMap::new() }
    }

    pub fn algebra(&self) -> &'a SlAlgebra {
        self.alg
    }

    /// `x * m` for a canonical word `m`, as canonical terms.
    ///
    /// If `x` is not already in place, `x m0 m' = m0 (x m') + [x, m0] m'`.
    pub fn mul_gen(&mut self, x: Gen, m: &[Gen]) -> Terms {
        if m.first().is_none_or(|&m0| x <= m0) {
            let mut w = Vec::with_capacity(m.len() + 1);
            w.push(x);
            w.extend_from_slice(m);
            return Rc::new(vec![(w, Rational::one())]);
        }
        let key = (x, m.to_vec());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let m0 = m[0];
        let rest = &m[1..];
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        let inner = self.mul_gen(x, rest);
        for (t, c) in inner.iter() {
            for (w, d) in self.mul_gen(m0, t).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(c * d);
            }
        }
        let alg = self.alg;
        for &(g, s) in alg.bracket_gens(x, m0) {
            let s = Rational::from_int(s);
            for (w, d) in self.mul_gen(g, rest).iter() {
                *acc.entry(w.clone()).or_insert_with(Rational::zero) += &(&s * d);
            }
        }
        let mut terms: Vec<(Word, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort();
        let terms = Rc::new(terms);
        self.cache.insert(key, terms.clone());
        terms
    }

    /// Left multiplication of an element by a word (applied right to left).
    pub fn left_mul_word(&mut self, word: &[Gen], u: &UeaElement) -> UeaElement {
        let mut cur = u.clone();
        for &g in word.iter().rev() {
            let mut next = UeaElement::zero();
            for (m, c) in cur.terms() {
                for (w, d) in self.mul_gen(g, m).iter() {
                    next.add_term(w.clone(), c * d);
                }
            }
            cur = next;
        }
        cur
    }

    /// PBW normal form of an arbitrary word.
    pub fn normalize(&mut self, word: &[Gen]) -> UeaElement {
        self.left_mul_word(word, &UeaElement::one())
    }

    pub fn multiply(&mut self, u: &UeaElement, v: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (w, c) in u.terms() {
            out.add_scaled(&self.left_mul_word(w, v), c);
        }
        out
    }

    /// `ad x (u) = x u - u x`, computed letter by letter with the Leibniz rule.
    pub fn adjoint(&mut self, x: Gen, u: &UeaElement) -> UeaElement {
        let alg = self.alg;
        let mut out = UeaElement::zero();
        for (m, c) in u.terms() {
            for i in 0..m.len() {
                let br = alg.bracket_gens(x, m[i]);
                if br.is_empty() {
                    continue;
                }
                let tail = UeaElement::monomial(m[i + 1..].to_vec(), c.clone());
                for &(g, s) in br {
                    let mut piece = self.left_mul_word(&[g], &tail);
                    piece = self.left_mul_word(&m[..i], &piece);
                    out.add_scaled(&piece, &Rational::from_int(s));
                }
            }
        }
        out
    }

    pub fn adjoint_lie(&mut self, x: &LieElement, u: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (g, c) in x.terms() {
            out.add_scaled(&self.adjoint(g, u), c);
        }
        out
    }

    /// `x1_L (x2_L ( ... (xr_L u)))`: the rightmost factor acts first.
    pub fn adjoint_chain(&mut self, chain: &[LieElement], u: &UeaElement) -> UeaElement {
        let mut cur = u.clone();
        for x in chain.iter().rev() {
            cur = self.adjoint_lie(x, &cur);
        }
        cur
    }
}

pub fn pbw_normalize(alg: &SlAlgebra, word: &[Gen]) -> UeaElement {
    Pbw::new(alg).normalize(word)
}

pub fn multiply(alg: &SlAlgebra, u: &UeaElement, v: &UeaElement) -> UeaElement {
    Pbw::new(alg).multiply(u, v)
}

pub fn adjoint(alg: &SlAlgebra, x: Gen, u: &UeaElement) -> UeaElement {
    Pbw::new(alg).adjoint(x, u)
}

pub fn adjoint_chain(alg: &SlAlgebra, chain: &[LieElement], u: &UeaElement) -> UeaElement {
    Pbw::new(alg).adjoint_chain(chain, u)
}

/// Normal form by plain adjacent-transposition rewriting, `xy -> yx + [x,y]`,
/// where `choose(k)` picks which of the `k` current descents to rewrite.
///
/// Every step either lowers the inversion count at equal length or shortens
/// the word, so the rewriting terminates under any schedule.
pub fn pbw_normalize_with(
    alg: &SlAlgebra,
    word: &[Gen],
    choose: &mut dyn FnMut(usize) -> usize,
) -> UeaElement {
    let inversions = |w: &[Gen]| {
        let mut k = 0usize;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    k += 1;
                }
            }
        }
        k
    };
    let mut out = UeaElement::zero();
    let mut work: Vec<(Word, Rational)> = vec![(word.to_vec(), Rational::one())];
    while let Some((w, c)) = work.pop() {
        let descents: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect();
        if descents.is_empty() {
            out.add_term(w, c);
            continue;
        }
        let i = descents[choose(descents.len()) % descents.len()];
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        debug_assert!(inversions(&swapped) < inversions(&w));
        for &(g, s) in alg.bracket_gens(w[i], w[i + 1]) {
            let mut shorter = Vec::with_capacity(w.len() - 1);
            shorter.extend_from_slice(&w[..i]);
            shorter.push(g);
            shorter.extend_from_slice(&w[i + 2..]);
            work.push((shorter, &c * &Rational::from_int(s)));
        }
        work.push((swapped, c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn sl(n: usize) -> SlAlgebra {
        SlAlgebra::new(n).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let alg = sl(4);
        let (e12, f12, h1, h2) = (alg.e(1, 2), alg.f(1, 2), alg.h(1), alg.h(2));
        assert_eq!(pbw_normalize(&alg, &[h1, h2]), UeaElement::monomial(vec![h1, h2], q(1, 1)));
        let mut want = UeaElement::monomial(vec![f12, e12], q(1, 1));
        want.add_term(vec![h1], q(1, 1));
        assert_eq!(pbw_normalize(&alg, &[e12, f12]), want);
        assert_eq!(pbw_normalize(&alg, &[e12, e12]), UeaElement::monomial(vec![e12, e12], q(1, 1)));
        assert_eq!(pbw_normalize(&alg, &[]), UeaElement::one());
    }

    #[test]
    fn multiply_examples() {
        let alg = sl(4);
        let (e12, f12, h1) = (alg.e(1, 2), alg.f(1, 2), alg.h(1));
        let v = UeaElement::parse(&alg, "f[1,3] h[2] + 2 e[2,3]").unwrap();
        assert_eq!(multiply(&alg, &UeaElement::one(), &v), v);
        let ef = multiply(&alg, &UeaElement::gen(e12), &UeaElement::gen(f12));
        let fe = multiply(&alg, &UeaElement::gen(f12), &UeaElement::gen(e12));
        assert_eq!(ef.minus(&fe), UeaElement::gen(h1));
        assert_eq!(
            multiply(&alg, &UeaElement::gen(h1), &UeaElement::gen(h1)),
            UeaElement::monomial(vec![h1, h1], q(1, 1))
        );
    }

    #[test]
    fn adjoint_examples() {
        let alg = sl(4);
        let (e12, f12, h1) = (alg.e(1, 2), alg.f(1, 2), alg.h(1));
        assert_eq!(adjoint(&alg, h1, &UeaElement::gen(e12)), UeaElement::gen(e12).scaled(&q(2, 1)));
        for x in alg.generators() {
            assert!(adjoint(&alg, x, &UeaElement::one()).is_zero());
        }
        // [e, f^2] = h f + f h, and h f = f h - 2 f.
        let ff = UeaElement::monomial(vec![f12, f12], q(1, 1));
        let mut want = UeaElement::monomial(vec![f12, h1], q(2, 1));
        want.add_term(vec![f12], q(-2, 1));
        assert_eq!(adjoint(&alg, e12, &ff), want);
    }

    #[test]
    fn adjoint_chain_examples() {
        let alg = sl(4);
        let u = UeaElement::gen(alg.e(1, 2));
        assert_eq!(adjoint_chain(&alg, &[], &u), u);
        let chain = [alg.element(alg.h(1))];
        assert_eq!(adjoint_chain(&alg, &chain, &u), u.scaled(&q(2, 1)));
        // Rightmost factor acts first: [e12, [f12, e13]] = [e12, e23] = e13,
        // while the other order gives [f12, [e12, e13]] = 0.
        let e13 = UeaElement::gen(alg.e(1, 3));
        let chain = [alg.element(alg.e(1, 2)), alg.element(alg.f(1, 2))];
        let got = adjoint_chain(&alg, &chain, &e13);
        let by_hand = adjoint(&alg, alg.e(1, 2), &adjoint(&alg, alg.f(1, 2), &e13));
        assert_eq!(got, by_hand);
        assert_eq!(got, e13);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let alg = sl(6);
        let u = UeaElement::parse(&alg, "7/2 e[1,5] e[2,6] - 2/3 f[1,2] e[1,5]^2 e[5,6] + h_1 - 3").unwrap();
        let text = u.render(&alg);
        assert_eq!(UeaElement::parse(&alg, &text).unwrap(), u);
        assert!(text.contains("e[1,5]^2"));
        assert_eq!(UeaElement::parse(&alg, "0").unwrap(), UeaElement::zero());
        assert_eq!(UeaElement::zero().render(&alg), "0\n");
        let err = UeaElement::parse(&alg, "e[1,7]").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (1, 1));
    }

    fn random_word(rng: &mut impl Rng, alg: &SlAlgebra, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        (0..len).map(|_| Gen(rng.gen_range(0..alg.dim() as u16))).collect()
    }

    fn random_element(rng: &mut impl Rng, alg: &SlAlgebra, pbw: &mut Pbw) -> UeaElement {
        let mut u = UeaElement::zero();
        for _ in 0..rng.gen_range(1..4) {
            let w = random_word(rng, alg, 3);
            u.add_scaled(&pbw.normalize(&w), &q(rng.gen_range(-4..5), rng.gen_range(1..4)));
        }
        u
    }

    #[test]
    fn confluence_under_random_schedules() {
        let alg = sl(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let w = random_word(&mut rng, &alg, 5);
            let fast = pbw_normalize(&alg, &w);
            for _ in 0..3 {
                let mut pick = |k: usize| rng.gen_range(0..k);
                assert_eq!(pbw_normalize_with(&alg, &w, &mut pick), fast);
            }
            let mut leftmost = |_k: usize| 0;
            assert_eq!(pbw_normalize_with(&alg, &w, &mut leftmost), fast);
            // Idempotence.
            let mut pbw = Pbw::new(&alg);
            let mut again = UeaElement::zero();
            for (m, c) in fast.terms() {
                assert!(is_canonical(m));
                again.add_scaled(&pbw.normalize(m), c);
            }
            assert_eq!(again, fast);
        }
    }

    #[test]
    fn adjoint_is_a_derivation_and_a_representation() {
        let alg = sl(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pbw = Pbw::new(&alg);
        for _ in 0..120 {
            let u = random_element(&mut rng, &alg, &mut pbw);
            let v = random_element(&mut rng, &alg, &mut pbw);
            let x = Gen(rng.gen_range(0..alg.dim() as u16));
            let y = Gen(rng.gen_range(0..alg.dim() as u16));
            // Commutator route.
            let xu = pbw.multiply(&UeaElement::gen(x), &u);
            let ux = pbw.multiply(&u, &UeaElement::gen(x));
            assert_eq!(pbw.adjoint(x, &u), xu.minus(&ux));
            // Leibniz.
            let uv = pbw.multiply(&u, &v);
            let (xu_ad, xv_ad) = (pbw.adjoint(x, &u), pbw.adjoint(x, &v));
            let rhs = pbw.multiply(&xu_ad, &v).plus(&pbw.multiply(&u, &xv_ad));
            assert_eq!(pbw.adjoint(x, &uv), rhs);
            // ad [x,y] = [ad x, ad y].
            let xy = alg.bracket(&alg.element(x), &alg.element(y)).unwrap();
            let lhs = pbw.adjoint_lie(&xy, &u);
            let (yu, xu_ad) = (pbw.adjoint(y, &u), pbw.adjoint(x, &u));
            let rhs = pbw.adjoint(x, &yu).minus(&pbw.adjoint(y, &xu_ad));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cartan_adjoint_reads_off_weights() {
        let alg = sl(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let w = random_word(&mut rng, &alg, 4);
            for (m, _) in pbw_normalize(&alg, &w).terms() {
                let mono = UeaElement::monomial(m.clone(), q(1, 1));
                let wt = alg.root_to_weight(&UeaElement::word_root(&alg, m));
                for i in 1..alg.n() {
                    assert_eq!(adjoint(&alg, alg.h(i), &mono), mono.scaled(&wt.coords[i - 1]));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn multiplication_is_associative(
            a in prop::collection::vec(0u16..15, 0..3),
            b in prop::collection::vec(0u16..15, 0..3),
            c in prop::collection::vec(0u16..15, 0..3),
        ) {
            let alg = sl(4);
            let mut pbw = Pbw::new(&alg);
            let to = |v: &Vec<u16>| v.iter().map(|&g| Gen(g)).collect::<Vec<_>>();
            let (a, b, c) = (pbw.normalize(&to(&a)), pbw.normalize(&to(&b)), pbw.normalize(&to(&c)));
            let (ab, bc) = (pbw.multiply(&a, &b), pbw.multiply(&b, &c));
            let left = pbw.multiply(&ab, &c);
            let right = pbw.multiply(&a, &bc);
            prop_assert_eq!(left, right);
        }
    }
}
