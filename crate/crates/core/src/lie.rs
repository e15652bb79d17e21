//! The Lie algebra sl_n in its Chevalley basis.
//!
//! The basis is realized by matrix units: `e[i,j] = E_ij`, `f[i,j] = E_ji`
//! (for `i < j`) and `h[i] = E_ii - E_(i+1)(i+1)`. Basis elements are totally
//! ordered F < H < E, lexicographically inside each kind, and addressed by
//! their position in that order (a [`Gen`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("rank mismatch: sl_{left} vs sl_{right}")]
    RankMismatch { left: usize, right: usize },
    #[error("weight has {got} coordinates, sl_{n} needs {}", n - 1)]
    WeightLength { n: usize, got: usize },
    #[error("generator {0} does not exist in sl_{1}")]
    NoSuchGenerator(Generator, usize),
    #[error("sl_n needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Position of a basis element in the total order F < H < E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(pub u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    F,
    H,
    E,
}

/// Human-facing name of a basis element, 1-based like the usual matrix notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    E(usize, usize),
    F(usize, usize),
    H(usize),
}

impl Generator {
    pub fn kind(&self) -> GenKind {
        match self {
            Generator::E(..) => GenKind::E,
            Generator::F(..) => GenKind::F,
            Generator::H(_) => GenKind::H,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i, j) => write!(f, "e[{i},{j}]"),
            Generator::F(i, j) => write!(f, "f[{i},{j}]"),
            Generator::H(i) => write!(f, "h[{i}]"),
        }
    }
}

impl FromStr for Generator {
    type Err = LieError;

    /// Accepts `e[i,j]`, `e_{i,j}`, `h[i]`, `h_i`, `h_{i}` and `hi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LieError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = t.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest: String = chars
            .as_str()
            .trim_start_matches('_')
            .trim_start_matches(['[', '{'])
            .trim_end_matches([']', '}'])
            .to_string();
        let nums: Vec<usize> = rest
            .split(',')
            .map(|x| x.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind, nums.as_slice()) {
            ('e', [i, j]) => Ok(Generator::E(*i, *j)),
            ('f', [i, j]) => Ok(Generator::F(*i, *j)),
            ('h', [i]) => Ok(Generator::H(*i)),
            _ => Err(bad()),
        }
    }
}

/// sl_n with cached structure constants, invariant form and root data.
#[derive(Debug, Clone)]
pub struct SlAlgebra {
    n: usize,
    gens: Vec<Generator>,
    /// `brackets[a * dim + b]` = [gen a, gen b] as (gen, coefficient) pairs.
    brackets: Vec<Vec<(Gen, i64)>>,
    /// `form[a * dim + b]` = trace(XY).
    form: Vec<i64>,
    /// Weight of each generator in simple-root coordinates.
    root_coords: Vec<Vec<i64>>,
}

impl SlAlgebra {
    pub fn new(n: usize) -> Result<Self, LieError> {
        if n < 2 {
            return Err(LieError::TooSmall(n));
        }
        let mut gens = Vec::with_capacity(n * n - 1);
        for i in 1..=n {
            for j in i + 1..=n {
                gens.push(Generator::F(i, j));
            }
        }
        for i in 1..n {
            gens.push(Generator::H(i));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                gens.push(Generator::E(i, j));
            }
        }
        let mut alg = SlAlgebra {
            n,
            gens,
            brackets: Vec::new(),
            form: Vec::new(),
            root_coords: Vec::new(),
        };
        let dim = alg.dim();
        let mats: Vec<Vec<i64>> = (0..dim).map(|a| alg.matrix_of(Gen(a as u16))).collect();
        for a in 0..dim {
            for b in 0..dim {
                let ab = matmul(n, &mats[a], &mats[b]);
                let ba = matmul(n, &mats[b], &mats[a]);
                let comm: Vec<i64> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
                alg.brackets.push(alg.decompose(&comm));
                alg.form.push((0..n).map(|i| ab[i * n + i]).sum());
            }
        }
        alg.root_coords = alg
            .gens
            .iter()
            .map(|g| {
                let mut v = vec![0i64; n - 1];
                match *g {
                    Generator::E(i, j) => (i..j).for_each(|k| v[k - 1] = 1),
                    Generator::F(i, j) => (i..j).for_each(|k| v[k - 1] = -1),
                    Generator::H(_) => {}
                }
                v
            })
            .collect();
        Ok(alg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the Cartan subalgebra, `n - 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.dim()).map(|a| Gen(a as u16))
    }

    pub fn describe(&self, g: Gen) -> Generator {
        self.gens[g.index()]
    }

    pub fn kind(&self, g: Gen) -> GenKind {
        self.gens[g.index()].kind()
    }

    pub fn gen(&self, g: Generator) -> Result<Gen, LieError> {
        let n = self.n;
        let ok = match g {
            Generator::E(i, j) | Generator::F(i, j) => 1 <= i && i < j && j <= n,
            Generator::H(i) => 1 <= i && i < n,
        };
        if !ok {
            return Err(LieError::NoSuchGenerator(g, n));
        }
        // Offset of (i, j) among the pairs i < j in lexicographic order.
        let pair = |i: usize, j: usize| (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
        let npairs = n * (n - 1) / 2;
        let idx = match g {
            Generator::F(i, j) => pair(i, j),
            Generator::H(i) => npairs + i - 1,
            Generator::E(i, j) => npairs + (n - 1) + pair(i, j),
        };
        Ok(Gen(idx as u16))
    }

    pub fn e(&self, i: usize, j: usize) -> Gen {
        self.gen(Generator::E(i, j)).expect("e index out of range")
    }

    pub fn f(&self, i: usize, j: usize) -> Gen {
        self.gen(Generator::F(i, j)).expect("f index out of range")
    }

    pub fn h(&self, i: usize) -> Gen {
        self.gen(Generator::H(i)).expect("h index out of range")
    }

    pub fn parse_gen(&self, s: &str) -> Result<Gen, LieError> {
        self.gen(s.parse()?)
    }

    /// Structure constants of two basis elements.
    pub fn bracket_gens(&self, a: Gen, b: Gen) -> &[(Gen, i64)] {
        &self.brackets[a.index() * self.dim() + b.index()]
    }

    pub fn form_gens(&self, a: Gen, b: Gen) -> i64 {
        self.form[a.index() * self.dim() + b.index()]
    }

    pub fn root_coords(&self, g: Gen) -> &[i64] {
        &self.root_coords[g.index()]
    }

    /// Weight of a basis element (its root, or zero for Cartan elements) in
    /// fundamental-weight coordinates.
    pub fn gen_weight(&self, g: Gen) -> Weight {
        self.root_to_weight(self.root_coords(g))
    }

    /// Converts simple-root coordinates into fundamental-weight coordinates
    /// through the Cartan matrix.
    pub fn root_to_weight(&self, root: &[i64]) -> Weight {
        let l = self.rank();
        let coords = (0..l)
            .map(|i| {
                let mut s = 2 * root[i];
                if i > 0 {
                    s -= root[i - 1];
                }
                if i + 1 < l {
                    s -= root[i + 1];
                }
                Rational::from_int(s)
            })
            .collect();
        Weight { coords }
    }

    /// Simple-root coordinates of a weight, when they are all integers.
    pub fn weight_to_root(&self, w: &Weight) -> Result<Option<Vec<i64>>, LieError> {
        self.check_weight(w)?;
        let l = self.rank();
        let n = self.n as i64;
        // Inverse Cartan matrix of A_l: (A^-1)_{ij} = min(i,j) - ij/n.
        let mut out = Vec::with_capacity(l);
        for i in 1..=l {
            let mut s = Rational::zero();
            for j in 1..=l {
                let entry = Rational::frac(i.min(j) as i64 * n - (i * j) as i64, n);
                s += &(&entry * &w.coords[j - 1]);
            }
            match s.to_i64() {
                Some(v) => out.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn check_weight(&self, w: &Weight) -> Result<(), LieError> {
        if w.coords.len() != self.rank() {
            return Err(LieError::WeightLength { n: self.n, got: w.coords.len() });
        }
        Ok(())
    }

    pub fn element(&self, g: Gen) -> LieElement {
        LieElement::basis(self.n, g)
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
        self.check_rank(x.n)?;
        self.check_rank(y.n)?;
        let mut out = LieElement::zero(self.n);
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let c = ca * cb;
                for (g, s) in self.bracket_gens(*a, *b) {
                    out.add_term(*g, &c * &Rational::from_int(*s));
                }
            }
        }
        Ok(out)
    }

    /// Normalized invariant form, equal to trace(XY) in the defining representation.
    pub fn invariant_form(&self, x: &LieElement, y: &LieElement) -> Result<Rational, LieError> {
        self.check_rank(x.n)?;
        self.check_rank(y.n)?;
        let mut s = Rational::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let f = self.form_gens(*a, *b);
                if f != 0 {
                    s += &(&(ca * cb) * &Rational::from_int(f));
                }
            }
        }
        Ok(s)
    }

    /// The form on h* dual to the invariant form.
    pub fn weight_inner(&self, mu: &Weight, nu: &Weight) -> Result<Rational, LieError> {
        self.lattice().inner(mu, nu)
    }

    pub fn lattice(&self) -> WeightLattice {
        WeightLattice { n: self.n }
    }

    pub fn rho(&self) -> Weight {
        self.lattice().rho()
    }

    /// Highest root.
    pub fn theta(&self) -> Weight {
        self.lattice().theta()
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        self.lattice().fundamental(i)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let mut root = vec![0i64; self.rank()];
        root[i - 1] = 1;
        self.root_to_weight(&root)
    }

    fn check_rank(&self, n: usize) -> Result<(), LieError> {
        if n != self.n {
            return Err(LieError::RankMismatch { left: self.n, right: n });
        }
        Ok(())
    }

    fn matrix_of(&self, g: Gen) -> Vec<i64> {
        let n = self.n;
        let mut m = vec![0i64; n * n];
        match self.describe(g) {
            Generator::E(i, j) => m[(i - 1) * n + (j - 1)] = 1,
            Generator::F(i, j) => m[(j - 1) * n + (i - 1)] = 1,
            Generator::H(i) => {
                m[(i - 1) * n + (i - 1)] = 1;
                m[i * n + i] = -1;
            }
        }
        m
    }

    /// Expresses a traceless matrix in the Chevalley basis.
    fn decompose(&self, m: &[i64]) -> Vec<(Gen, i64)> {
        let n = self.n;
        let mut out = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = m[r * n + c];
                if v == 0 || r == c {
                    continue;
                }
                let g = if r < c { self.e(r + 1, c + 1) } else { self.f(c + 1, r + 1) };
                out.push((g, v));
            }
        }
        // diag(d) = sum_k c_k h_k with c_k = d_1 + ... + d_k.
        let mut partial = 0i64;
        for k in 1..n {
            partial += m[(k - 1) * n + (k - 1)];
            if partial != 0 {
                out.push((self.h(k), partial));
            }
        }
        debug_assert_eq!(partial + m[n * n - 1], 0, "bracket must be traceless");
        out.sort();
        out
    }
}

fn matmul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// Finite linear combination of basis elements of sl_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    n: usize,
    terms: BTreeMap<Gen, Rational>,
}

impl LieElement {
    pub fn zero(n: usize) -> Self {
        LieElement { n, terms: BTreeMap::new() }
    }

    pub fn basis(n: usize, g: Gen) -> Self {
        let mut e = Self::zero(n);
        e.add_term(g, Rational::one());
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Gen, &Rational)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn coeff(&self, g: Gen) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, g: Gen, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (g, x) in &self.terms {
            out.add_term(*g, x * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, x) in &other.terms {
            out.add_term(*g, x.clone());
        }
        out
    }
}

/// A weight `mu` in fundamental-weight coordinates: `coords[i] = mu(h_(i+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Rational>,
}

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![Rational::zero(); rank] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight { coords: v.iter().map(|&x| Rational::from_int(x)).collect() }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// Every coordinate is a nonnegative integer.
    pub fn is_dominant_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer() && !c.is_negative())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Weight {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|x| x.trim().parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| LieError::Parse(s.to_string()))?;
        Ok(Weight { coords })
    }
}

pub fn dominant_integral(mu: &Weight) -> bool {
    mu.is_dominant_integral()
}

/// Weight geometry of sl_n in fundamental-weight coordinates, without the
/// structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightLattice {
    n: usize,
}

impl WeightLattice {
    pub fn new(n: usize) -> Result<Self, LieError> {
        if n < 2 {
            return Err(LieError::TooSmall(n));
        }
        Ok(WeightLattice { n })
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn check(&self, w: &Weight) -> Result<(), LieError> {
        if w.coords.len() != self.rank() {
            return Err(LieError::WeightLength { n: self.n, got: w.coords.len() });
        }
        Ok(())
    }

    /// `<w_i, w_j> = min(i,j) - ij/n`.
    pub fn inner(&self, mu: &Weight, nu: &Weight) -> Result<Rational, LieError> {
        self.check(mu)?;
        self.check(nu)?;
        let n = self.n as i64;
        let mut s = Rational::zero();
        for (i, a) in mu.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in nu.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let (i, j) = (i as i64 + 1, j as i64 + 1);
                let entry = Rational::frac(i.min(j) * n - i * j, n);
                s += &(&(&entry * a) * b);
            }
        }
        Ok(s)
    }

    pub fn rho(&self) -> Weight {
        Weight::new(vec![Rational::one(); self.rank()])
    }

    /// Highest root, the sum of the simple roots.
    pub fn theta(&self) -> Weight {
        let l = self.rank();
        let mut c = vec![0i64; l];
        for i in 0..l {
            c[i] += 2;
            if i > 0 {
                c[i - 1] -= 1;
            }
            if i + 1 < l {
                c[i + 1] -= 1;
            }
        }
        Weight::from_ints(&c)
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        let mut coords = vec![Rational::zero(); self.rank()];
        coords[i - 1] = Rational::one();
        Weight::new(coords)
    }
}
