//! Free Lie algebras on a finite ordered alphabet, in the Lyndon basis, and
//! the Baker–Campbell–Hausdorff series together with the symmetric
//! multibrace operations it induces.
//!
//! Elements are stored as Q-linear combinations of Lyndon words; each Lyndon
//! word stands for its standard bracketing `[w] = [[u], [v]]` where `w = uv`
//! and `v` is the longest proper Lyndon suffix. Conversions between bracket
//! expressions and this basis go through the free associative algebra, where
//! the Lyndon bracketings are triangular with unit diagonal with respect to
//! the lexicographically smallest word: eliminating smallest words therefore
//! both recognizes Lie elements and rewrites them in the basis.
//!
//! The alphabet is ungraded here; Koszul signs only appear when a multibrace
//! is evaluated on vectors of a graded space, which is the consumer's job.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::scalar::{factorial_q, todd_coefficient, Q};
use crate::symgroup::all_permutations;

/// A word over the alphabet `0..letters`.
pub type LieWord = Vec<u8>;

/// Is `w` strictly smaller than all of its proper rotations?
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    let n = w.len();
    for r in 1..n {
        let rotation = w[r..].iter().chain(w[..r].iter());
        if !(w.iter().lt(rotation)) {
            return false;
        }
    }
    true
}

/// All Lyndon words of the given length, lexicographically ordered.
pub fn lyndon_words(alphabet: usize, degree: usize) -> Vec<LieWord> {
    assert!(alphabet >= 1 && degree >= 1);
    crate::gvs::all_words(alphabet, degree)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .collect()
}

/// Standard factorization `w = uv` of a Lyndon word of length >= 2, with `v`
/// the longest proper Lyndon suffix; the bracketing is `[w] = [[u],[v]]`.
pub fn standard_factorization(w: &[u8]) -> (LieWord, LieWord) {
    assert!(w.len() >= 2 && is_lyndon(w), "needs a Lyndon word");
    for cut in 1..w.len() {
        if is_lyndon(&w[cut..]) {
            return (w[..cut].to_vec(), w[cut..].to_vec());
        }
    }
    unreachable!("the last letter is always a Lyndon suffix");
}

/// An element of the free associative algebra: words with exact coefficients.
/// Truncation is the caller's responsibility (`mul_trunc`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assoc {
    pub terms: BTreeMap<LieWord, Q>,
}

impl Assoc {
    pub fn zero() -> Self {
        Assoc::default()
    }

    pub fn unit() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Q::one());
        Assoc { terms }
    }

    pub fn letter(c: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![c], Q::one());
        Assoc { terms }
    }

    pub fn letter_sum(letters: std::ops::Range<u8>) -> Self {
        let mut out = Assoc::zero();
        for c in letters {
            out.add_term(vec![c], Q::one());
        }
        out
    }

    pub fn add_term(&mut self, w: LieWord, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Assoc) -> Assoc {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Assoc) -> Assoc {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Assoc {
        if c.is_zero() {
            return Assoc::zero();
        }
        Assoc {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Product truncated at total word length `max_deg`.
    pub fn mul_trunc(&self, other: &Assoc, max_deg: usize) -> Assoc {
        let mut out = Assoc::zero();
        for (w1, c1) in &self.terms {
            if w1.len() > max_deg {
                continue;
            }
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > max_deg {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn commutator_trunc(&self, other: &Assoc, max_deg: usize) -> Assoc {
        self.mul_trunc(other, max_deg)
            .sub(&other.mul_trunc(self, max_deg))
    }

    /// Homogeneous component of total degree `n`.
    pub fn degree_part(&self, n: usize) -> Assoc {
        Assoc {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Component where letter `i` appears exactly `multidegree[i]` times.
    pub fn multidegree_part(&self, multidegree: &[usize]) -> Assoc {
        Assoc {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| {
                    let mut counts = vec![0usize; multidegree.len()];
                    for &c in w.iter() {
                        if (c as usize) < counts.len() {
                            counts[c as usize] += 1;
                        }
                    }
                    counts == multidegree
                })
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// `exp(x)` truncated, for `x` with no constant term.
    pub fn exp_trunc(x: &Assoc, max_deg: usize) -> Assoc {
        assert!(x.terms.keys().all(|w| !w.is_empty()));
        let mut out = Assoc::unit();
        let mut power = Assoc::unit();
        for k in 1..=max_deg {
            power = power.mul_trunc(x, max_deg);
            out = out.add(&power.scale(&(Q::one() / factorial_q(k))));
        }
        out
    }

    /// `log(e)` truncated, for `e` with constant term 1.
    pub fn log_trunc(e: &Assoc, max_deg: usize) -> Assoc {
        let u = e.sub(&Assoc::unit());
        assert!(u.terms.keys().all(|w| !w.is_empty()));
        let mut out = Assoc::zero();
        let mut power = Assoc::unit();
        for k in 1..=max_deg {
            power = power.mul_trunc(&u, max_deg);
            let c = Q::new(
                if k % 2 == 1 { 1 } else { -1 }.into(),
                (k as i64).into(),
            );
            out = out.add(&power.scale(&c));
        }
        out
    }
}

/// `[[..[w_0, w_1], w_2], .., w_{n-1}]` expanded in the associative algebra:
/// the Dynkin left-normed bracketing of a word.
pub fn dynkin_bracketing(w: &[u8]) -> Assoc {
    assert!(!w.is_empty());
    let mut acc = Assoc::letter(w[0]);
    for &c in &w[1..] {
        acc = acc.commutator_trunc(&Assoc::letter(c), w.len());
    }
    acc
}

type LyndonCache = HashMap<LieWord, Assoc>;

/// Associative expansion of the standard bracketing of a Lyndon word.
fn expand_lyndon(w: &[u8], cache: &mut LyndonCache) -> Assoc {
    if let Some(hit) = cache.get(w) {
        return hit.clone();
    }
    let out = if w.len() == 1 {
        Assoc::letter(w[0])
    } else {
        let (u, v) = standard_factorization(w);
        let eu = expand_lyndon(&u, cache);
        let ev = expand_lyndon(&v, cache);
        eu.commutator_trunc(&ev, w.len())
    };
    cache.insert(w.to_vec(), out.clone());
    out
}

/// A free Lie element in the Lyndon basis. The alphabet size is implicit;
/// words must share one alphabet for binary operations to make sense.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeLieElem {
    pub terms: BTreeMap<LieWord, Q>,
}

impl FreeLieElem {
    pub fn zero() -> Self {
        FreeLieElem::default()
    }

    pub fn letter(c: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![c], Q::one());
        FreeLieElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: LieWord, c: Q) {
        debug_assert!(is_lyndon(&w));
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FreeLieElem) -> FreeLieElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FreeLieElem) -> FreeLieElem {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> FreeLieElem {
        if c.is_zero() {
            return FreeLieElem::zero();
        }
        FreeLieElem {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Expansion into the free associative algebra.
    pub fn expand_assoc(&self) -> Assoc {
        let mut cache = LyndonCache::new();
        let mut out = Assoc::zero();
        for (w, c) in &self.terms {
            out = out.add(&expand_lyndon(w, &mut cache).scale(c));
        }
        out
    }

    /// Component where each letter `i` appears exactly `multidegree[i]`
    /// times. Exact because the Lyndon basis is multigraded.
    pub fn multidegree_part(&self, multidegree: &[usize]) -> FreeLieElem {
        FreeLieElem {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| {
                    let mut counts = vec![0usize; multidegree.len()];
                    for &c in w.iter() {
                        if (c as usize) < counts.len() {
                            counts[c as usize] += 1;
                        }
                    }
                    counts == multidegree
                })
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Component of total degree `n`.
    pub fn degree_part(&self, n: usize) -> FreeLieElem {
        FreeLieElem {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

/// Rewrites a Lie element given in associative form into the Lyndon basis.
/// Returns `None` when the input is not a Lie element (the elimination gets
/// stuck on a non-Lyndon smallest word or leaves a residue).
pub fn assoc_to_lyndon(p: &Assoc) -> Option<FreeLieElem> {
    let mut cache = LyndonCache::new();
    let mut out = FreeLieElem::zero();
    let mut rest = p.clone();
    while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(&w) {
            return None;
        }
        out.add_term(w.clone(), c.clone());
        rest = rest.sub(&expand_lyndon(&w, &mut cache).scale(&c));
    }
    Some(out)
}

/// The bracket `[a, b]`, re-expanded in the Lyndon basis.
pub fn lie_bracket(a: &FreeLieElem, b: &FreeLieElem) -> FreeLieElem {
    let max_deg = a.max_degree() + b.max_degree();
    let p = a
        .expand_assoc()
        .commutator_trunc(&b.expand_assoc(), max_deg);
    assoc_to_lyndon(&p).expect("commutator of Lie elements is Lie")
}

/// Associative-algebra truncation of `log(exp(x) exp(y))` over the two-letter
/// alphabet `x = 0`, `y = 1`; the raw material both BCH routes start from.
pub fn bch_log_assoc(trunc: usize) -> Assoc {
    let ex = Assoc::exp_trunc(&Assoc::letter(0), trunc);
    let ey = Assoc::exp_trunc(&Assoc::letter(1), trunc);
    Assoc::log_trunc(&ex.mul_trunc(&ey, trunc), trunc)
}

/// BCH series over `{x, y}` truncated at total degree `trunc`, computed by
/// degreewise Dynkin projection of `log(exp(x) exp(y))`: on a homogeneous Lie
/// element of degree `n`, the left-normed bracketing map acts as `n · id`.
pub fn bch(trunc: usize) -> FreeLieElem {
    assert!(trunc >= 1);
    let log = bch_log_assoc(trunc);
    let mut out = FreeLieElem::zero();
    for n in 1..=trunc {
        let part = log.degree_part(n);
        let mut projected = Assoc::zero();
        for (w, c) in &part.terms {
            projected = projected.add(&dynkin_bracketing(w).scale(c));
        }
        let scaled = projected.scale(&Q::new(1.into(), (n as i64).into()));
        let lie = assoc_to_lyndon(&scaled)
            .expect("Dynkin projection of a Lie series is Lie");
        out = out.add(&lie);
    }
    out
}

/// Second, independent BCH computation: convert each homogeneous piece of the
/// associative logarithm directly into the Lyndon basis. Agreement with
/// [`bch`] is an acceptance-level check.
pub fn bch_direct(trunc: usize) -> FreeLieElem {
    assert!(trunc >= 1);
    let log = bch_log_assoc(trunc);
    let mut out = FreeLieElem::zero();
    for n in 1..=trunc {
        let lie = assoc_to_lyndon(&log.degree_part(n))
            .expect("log of a group-like product is a Lie series");
        out = out.add(&lie);
    }
    out
}

/// Substitutes Lie elements for the two letters of the BCH series, keeping
/// total degree at most `trunc`. Used to probe the associativity relation.
pub fn bch_substitute(a: &FreeLieElem, b: &FreeLieElem, trunc: usize) -> FreeLieElem {
    let series = bch(trunc);
    let mut out = FreeLieElem::zero();
    for (w, c) in &series.terms {
        let term = eval_word_with(w, &mut |letter| {
            if letter == 0 {
                a.clone()
            } else {
                b.clone()
            }
        });
        out = out.add(&term.scale(c));
    }
    FreeLieElem {
        terms: out
            .terms
            .into_iter()
            .filter(|(w, _)| w.len() <= trunc)
            .collect(),
    }
}

fn eval_word_with(w: &[u8], letter: &mut impl FnMut(u8) -> FreeLieElem) -> FreeLieElem {
    if w.len() == 1 {
        return letter(w[0]);
    }
    let (u, v) = standard_factorization(w);
    let eu = eval_word_with(&u, letter);
    let ev = eval_word_with(&v, letter);
    lie_bracket(&eu, &ev)
}

/// The multibrace `M_{p,q}`: the multilinear part of
/// `bch(x_1 + .. + x_p, y_1 + .. + y_q)`, over the alphabet
/// `x_1, .., x_p, y_1, .., y_q` numbered `0..p+q`. Conventions:
/// `M_{1,0} = x_1`, `M_{0,1} = y_1`, and `M_{p,0} = M_{0,q} = 0` otherwise.
pub fn mbrace(p: usize, q: usize) -> FreeLieElem {
    assert!(p + q >= 1);
    if q == 0 {
        return if p == 1 {
            FreeLieElem::letter(0)
        } else {
            FreeLieElem::zero()
        };
    }
    if p == 0 {
        return if q == 1 {
            FreeLieElem::letter(0)
        } else {
            FreeLieElem::zero()
        };
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), FreeLieElem>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(p, q)) {
        return hit.clone();
    }
    let n = p + q;
    let ex = Assoc::exp_trunc(&Assoc::letter_sum(0..p as u8), n);
    let ey = Assoc::exp_trunc(&Assoc::letter_sum(p as u8..n as u8), n);
    let log = Assoc::log_trunc(&ex.mul_trunc(&ey, n), n);
    let multilinear = log.multidegree_part(&vec![1; n]);
    let out = assoc_to_lyndon(&multilinear).expect("multilinear BCH part is Lie");
    cache.lock().unwrap().insert((p, q), out.clone());
    out
}

/// Closed formula for `M_{p,1}`:
/// `todd(p) · sum_{σ in S_p} [x_{σ(1)}, [.., [x_{σ(p)}, y]..]]`,
/// with `todd(p)` the `p`-th coefficient of `x/(1-exp(-x))`. The coefficient
/// table is pinned by `M_{1,1} = ½ [x_1, y]`: the table with `+1/2` at index
/// one is the Todd table (equivalently `(-1)^p` times the inverse-Todd one).
pub fn mbrace_p1_closed(p: usize) -> FreeLieElem {
    assert!(p >= 1);
    let coeff = todd_coefficient(p);
    if coeff.is_zero() {
        return FreeLieElem::zero();
    }
    let y = FreeLieElem::letter(p as u8);
    let mut out = FreeLieElem::zero();
    for sigma in all_permutations(p) {
        let mut acc = y.clone();
        for k in (0..p).rev() {
            acc = lie_bracket(&FreeLieElem::letter(sigma.apply(k) as u8), &acc);
        }
        out = out.add(&acc);
    }
    out.scale(&coeff)
}

/// Pretty form of a Lyndon word under a letter-naming function.
pub fn word_display(w: &[u8], name: impl Fn(u8) -> String) -> String {
    w.iter().map(|&c| name(c)).collect::<Vec<_>>().join("")
}
