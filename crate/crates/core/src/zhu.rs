//! The Zhu-algebra image V^k(sl_n) -> U(sl_n).

use std::collections::HashMap;

use crate::arith::Rational;
use crate::uea::{Pbw, UeaElement};
use crate::vacuum::{Letter, VacuumContext, VacuumElement, VacuumEngine, VacuumMonomial};

/// `a1(-n1-1) ... ar(-nr-1)|0>  ->  (-1)^(n1+...+nr) ar ... a1`, PBW-normalized.
pub fn zhu_image(ctx: &VacuumContext, v: &VacuumElement) -> UeaElement {
    let mut pbw = Pbw::new(ctx.algebra());
    let mut out = UeaElement::zero();
    for (m, c) in v.terms() {
        let word: Vec<_> = m.iter().rev().map(|l| l.gen).collect();
        let n: i64 = m.iter().map(|l| -(l.mode as i64) - 1).sum();
        let c = if n % 2 == 0 { c.clone() } else { -c };
        out.add_scaled(&pbw.normalize(&word), &c);
    }
    out
}

/// Image of a single literal word of creation letters, in the order given.
pub fn zhu_image_word(ctx: &VacuumContext, word: &[Letter]) -> UeaElement {
    let mut m: VacuumMonomial = word.to_vec();
    m.reverse();
    let n: i64 = word.iter().map(|l| -(l.mode as i64) - 1).sum();
    let gens: Vec<_> = m.iter().map(|l| l.gen).collect();
    let u = Pbw::new(ctx.algebra()).normalize(&gens);
    if n % 2 == 0 {
        u
    } else {
        u.scaled(&-Rational::one())
    }
}

/// Recursive evaluation peeling off the leftmost letter:
/// `[a(-n-1) u] = (-1)^n (a [u] - [a(0) u])`, with `a(0) u` computed in the
/// vacuum module.
pub fn zhu_image_oracle(ctx: &VacuumContext, v: &VacuumElement) -> UeaElement {
    let mut st = Oracle { eng: VacuumEngine::new(ctx), pbw: Pbw::new(ctx.algebra()), memo: HashMap::new() };
    let mut out = UeaElement::zero();
    for (m, c) in v.terms() {
        let img = st.monomial(m);
        out.add_scaled(&img, c);
    }
    out
}

struct Oracle<'a> {
    eng: VacuumEngine<'a>,
    pbw: Pbw<'a>,
    memo: HashMap<VacuumMonomial, UeaElement>,
}

impl Oracle<'_> {
    fn monomial(&mut self, m: &[Letter]) -> UeaElement {
        if m.is_empty() {
            return UeaElement::one();
        }
        if let Some(hit) = self.memo.get(m) {
            return hit.clone();
        }
        let a = m[0];
        let rest = &m[1..];
        let u = self.monomial(rest);
        let left = self.pbw.multiply(&UeaElement::gen(a.gen), &u);
        let moved = self.eng.act_monomial(a.gen, 0, rest);
        let mut zero_mode = UeaElement::zero();
        for (w, c) in moved.iter() {
            let img = self.monomial(w);
            zero_mode.add_scaled(&img, c);
        }
        let mut out = left.minus(&zero_mode);
        if (-(a.mode as i64) - 1) % 2 == 1 {
            out = out.scaled(&-Rational::one());
        }
        self.memo.insert(m.to_vec(), out.clone());
        out
    }
}
