//! The group algebra Q[S_n]: permutations, the total symmetrizer, and the
//! ideal decomposition `1 - pi_n = sum_i (1 - tau_i) a_i` over adjacent
//! transpositions that powers the partially-antisymmetric projectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::{factorial_q, Q};

/// A permutation of `{0, .., n-1}` in one-line notation: `images[i]` is where
/// slot `i` goes. Composition is `(f * g)(i) = f(g(i))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// One-line constructor; panics unless `images` is a bijection.
    pub fn from_images(images: Vec<u8>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            assert!((x as usize) < n && !seen[x as usize], "not a bijection");
            seen[x as usize] = true;
        }
        Permutation { images }
    }

    /// The adjacent transposition `tau_i` swapping slots `i` and `i+1`,
    /// with `i` 1-based as in the usual Coxeter indexing (`1 <= i <= n-1`).
    pub fn adjacent(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "adjacent transposition out of range");
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.arity(), other.arity());
        Permutation {
            images: (0..self.arity())
                .map(|i| self.images[other.images[i] as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.arity()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    /// A fixed reduced word: indices `i` (1-based) such that
    /// `self = tau_{i_last} ∘ ... ∘ tau_{i_first}`, obtained by bubble-sorting
    /// the one-line form. This is the canonical word used by
    /// [`ideal_decomposition`], so the decomposition is deterministic.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..w.arity().saturating_sub(1) {
                if w.images[i] > w.images[i + 1] {
                    w.images.swap(i, i + 1); // w := w ∘ tau_{i+1}
                    word.push(i + 1);
                    continue 'outer;
                }
            }
            break;
        }
        word
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let line: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", line.join(" "))
    }
}

/// Enumerates all permutations of `{0, .., n-1}` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut used = vec![false; n];
    fn rec(n: usize, depth: usize, current: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if depth == n {
            out.push(Permutation {
                images: current.clone(),
            });
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current[depth] = v as u8;
                rec(n, depth + 1, current, used, out);
                used[v] = false;
            }
        }
    }
    rec(n, 0, &mut current, &mut used, &mut out);
    out
}

/// A formal Q-linear combination of permutations of fixed arity.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgElem {
    pub n: usize,
    pub terms: BTreeMap<Permutation, Q>,
}

impl GroupAlgElem {
    pub fn zero(n: usize) -> Self {
        GroupAlgElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_perm(Permutation::identity(n))
    }

    pub fn from_perm(p: Permutation) -> Self {
        let n = p.arity();
        let mut terms = BTreeMap::new();
        terms.insert(p, Q::one());
        GroupAlgElem { n, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: Permutation, c: Q) {
        assert_eq!(p.arity(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
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

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GroupAlgElem) -> GroupAlgElem {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> GroupAlgElem {
        if c.is_zero() {
            return GroupAlgElem::zero(self.n);
        }
        GroupAlgElem {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(p, v)| (p.clone(), v * c))
                .collect(),
        }
    }

    /// Convolution product: `(a * b)(g) = sum over g = p ∘ q of a(p) b(q)`.
    pub fn convolve(&self, other: &GroupAlgElem) -> GroupAlgElem {
        assert_eq!(self.n, other.n);
        let mut out = GroupAlgElem::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.compose(q), a * b);
            }
        }
        out
    }

    /// Coefficient of a permutation (zero when absent).
    pub fn coeff(&self, p: &Permutation) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }
}

impl std::fmt::Display for GroupAlgElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{}·{}", crate::scalar::format_rat(c), p))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The total symmetrizer `pi_n = (1/n!) sum_g g`, an idempotent of Q[S_n].
pub fn symmetrizer(n: usize) -> GroupAlgElem {
    assert!(n >= 1, "symmetrizer needs arity >= 1");
    let c = Q::one() / factorial_q(n);
    let mut out = GroupAlgElem::zero(n);
    for p in all_permutations(n) {
        out.add_term(p, c.clone());
    }
    out
}

/// Canonical elements `(a_1, .., a_{n-1})` with
/// `sum_i (1 - tau_i) * a_i = 1 - pi_n` exactly.
///
/// Construction: write each `g` in its fixed bubble-sort reduced word
/// `g = t_1 ∘ t_2 ∘ ... ∘ t_d`, telescope
/// `1 - g = sum_j (1 - t_j) * (t_{j+1} ∘ ... ∘ t_d)`, and collect the suffix
/// terms onto the `a_i` indexed by `t_j = tau_i`, weighted by `1/n!`.
pub fn ideal_decomposition(n: usize) -> Vec<GroupAlgElem> {
    assert!(n >= 2, "decomposition needs arity >= 2");
    let weight = Q::one() / factorial_q(n);
    let mut a: Vec<GroupAlgElem> = (0..n - 1).map(|_| GroupAlgElem::zero(n)).collect();
    for g in all_permutations(n) {
        if g.is_identity() {
            continue;
        }
        // reduced_word returns (i_1, .., i_d) with g = tau_{i_d} ∘ ... ∘ tau_{i_1},
        // so as a composition product g = t_1 ∘ ... ∘ t_d with t_j = tau_{i_{d+1-j}}.
        let word = g.reduced_word();
        let ts: Vec<usize> = word.iter().rev().copied().collect();
        // suffix_j = t_{j+1} ∘ ... ∘ t_d, built from the right.
        let mut suffix = Permutation::identity(n);
        for j in (0..ts.len()).rev() {
            a[ts[j] - 1].add_term(suffix.clone(), weight.clone());
            suffix = Permutation::adjacent(n, ts[j]).compose(&suffix);
        }
    }
    a
}

/// Re-expands `sum_i (1 - tau_i) * a_i` for checking the defining identity.
pub fn expand_decomposition(n: usize, a: &[GroupAlgElem]) -> GroupAlgElem {
    let one = GroupAlgElem::one(n);
    let mut acc = GroupAlgElem::zero(n);
    for (idx, ai) in a.iter().enumerate() {
        let tau = GroupAlgElem::from_perm(Permutation::adjacent(n, idx + 1));
        acc = acc.add(&one.sub(&tau).convolve(ai));
    }
    acc
}

/// `1 - pi_n`, the target of the decomposition identity.
pub fn one_minus_symmetrizer(n: usize) -> GroupAlgElem {
    GroupAlgElem::one(n).sub(&symmetrizer(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};

    #[test]
    fn symmetrizer_small_arities() {
        let s1 = symmetrizer(1);
        assert_eq!(s1, GroupAlgElem::one(1));

        let s2 = symmetrizer(2);
        assert_eq!(s2.coeff(&Permutation::identity(2)), qr(1, 2));
        assert_eq!(s2.coeff(&Permutation::adjacent(2, 1)), qr(1, 2));

        let s3 = symmetrizer(3);
        assert_eq!(s3.terms.len(), 6);
        assert!(s3.terms.values().all(|c| *c == qr(1, 6)));
    }

    #[test]
    fn symmetrizer_is_idempotent_up_to_six() {
        for n in 1..=6 {
            let s = symmetrizer(n);
            assert_eq!(s.convolve(&s), s, "n = {n}");
        }
    }

    #[test]
    fn symmetrizer_absorbs_transpositions() {
        for n in 2..=5 {
            let s = symmetrizer(n);
            for i in 1..n {
                let tau = GroupAlgElem::from_perm(Permutation::adjacent(n, i));
                assert_eq!(s.convolve(&tau), s);
                assert_eq!(tau.convolve(&s), s);
                // (1 + tau_i) * pi_n = pi_n * (1 + tau_i) = 2 pi_n
                let one_plus = GroupAlgElem::one(n).add(&tau);
                assert_eq!(one_plus.convolve(&s), s.scale(&qi(2)));
                assert_eq!(s.convolve(&one_plus), s.scale(&qi(2)));
            }
        }
    }

    #[test]
    fn decomposition_identity_n2() {
        let a = ideal_decomposition(2);
        assert_eq!(a.len(), 1);
        assert_eq!(a[0], GroupAlgElem::one(2).scale(&qr(1, 2)));
        assert_eq!(expand_decomposition(2, &a), one_minus_symmetrizer(2));
    }

    #[test]
    fn decomposition_identity_up_to_six() {
        for n in 2..=6 {
            let a = ideal_decomposition(n);
            assert_eq!(
                expand_decomposition(n, &a),
                one_minus_symmetrizer(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn textbook_n3_choice_also_satisfies_identity() {
        // 6 a_1 = 3·id + tau_2 + tau_2 tau_1 and 3 a_2 = id + tau_1 is another
        // valid decomposition; the identity must accept it too.
        let tau1 = Permutation::adjacent(3, 1);
        let tau2 = Permutation::adjacent(3, 2);
        let mut a1 = GroupAlgElem::zero(3);
        a1.add_term(Permutation::identity(3), qr(3, 6));
        a1.add_term(tau2.clone(), qr(1, 6));
        a1.add_term(tau2.compose(&tau1), qr(1, 6));
        let mut a2 = GroupAlgElem::zero(3);
        a2.add_term(Permutation::identity(3), qr(1, 3));
        a2.add_term(tau1.clone(), qr(1, 3));
        assert_eq!(
            expand_decomposition(3, &[a1, a2]),
            one_minus_symmetrizer(3)
        );
    }

    #[test]
    fn reduced_word_reconstructs_permutation() {
        // word = (i_1, .., i_d) means g = tau_{i_d} ∘ ... ∘ tau_{i_1}
        for g in all_permutations(5) {
            let word = g.reduced_word();
            let mut rebuilt = Permutation::identity(5);
            for &i in word.iter() {
                rebuilt = Permutation::adjacent(5, i).compose(&rebuilt);
            }
            assert_eq!(rebuilt, g, "word {:?}", word);
        }
    }
}
