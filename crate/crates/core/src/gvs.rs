//! Graded vector spaces over Q with Koszul-signed symmetric-group actions on
//! tensor powers, the splitting `V^{⊗n} = S^n V ⊕ Λ̃^n V`, the embedding /
//! restriction pair `Ψ_n`, `Φ_n`, and the Jacobi-witness criterion.
//!
//! Conventions used everywhere in the crate:
//!
//! * Words of `V^{⊗n}` are indexed big-endian in the basis letters, i.e. the
//!   word `(w_0, .., w_{n-1})` has index `w_0 d^{n-1} + .. + w_{n-1}`.
//! * `S^n V` is the image of the symmetrizer inside `V^{⊗n}`; its monomial
//!   basis is the sorted multisets (odd letters at most once), the inclusion
//!   is the symmetrized embedding and the projection sorts a word with its
//!   Koszul sign (zero if an odd letter repeats).
//! * Koszul signs depend on degree parity only; full integer degrees are kept
//!   for grading bookkeeping.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::QMat;
use crate::scalar::{factorial_q, Q};
use crate::symgroup::{all_permutations, GroupAlgElem, Permutation};

/// A named basis vector with an integer degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVec {
    pub name: String,
    pub degree: i64,
}

/// A finite-dimensional Z-graded rational vector space given by an ordered
/// basis. Basis order is part of the data: PBW normal forms and all canonical
/// enumerations follow it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<BasisVec>,
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisVec>) -> Result<Self, Error> {
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.name.clone()) {
                return Err(Error::AlgebraLoad(format!(
                    "duplicate basis name `{}`",
                    b.name
                )));
            }
        }
        if basis.len() > u8::MAX as usize {
            return Err(Error::AlgebraLoad("basis too large".into()));
        }
        Ok(GradedSpace { basis })
    }

    pub fn from_names_degrees(pairs: &[(&str, i64)]) -> Self {
        GradedSpace::new(
            pairs
                .iter()
                .map(|(n, d)| BasisVec {
                    name: (*n).to_string(),
                    degree: *d,
                })
                .collect(),
        )
        .expect("valid basis")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVec] {
        &self.basis
    }

    pub fn name(&self, i: u8) -> &str {
        &self.basis[i as usize].name
    }

    pub fn degree(&self, i: u8) -> i64 {
        self.basis[i as usize].degree
    }

    /// Degree parity: the only part of the grading entering Koszul signs.
    pub fn odd(&self, i: u8) -> bool {
        self.basis[i as usize].degree.rem_euclid(2) == 1
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.basis.iter().position(|b| b.name == name).map(|i| i as u8)
    }

    pub fn word_degree(&self, w: &[u8]) -> i64 {
        w.iter().map(|&c| self.degree(c)).sum()
    }

    /// Restriction to a subset of the basis, preserving order.
    pub fn subspace(&self, letters: &[u8]) -> GradedSpace {
        GradedSpace {
            basis: letters.iter().map(|&i| self.basis[i as usize].clone()).collect(),
        }
    }
}

/// A basis word of `V^{⊗n}`: letter indices into the space's basis.
pub type Word = Vec<u8>;

/// Lexicographic enumeration of all length-`n` words over `d` letters.
pub fn all_words(d: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity(d.pow(n as u32));
    let mut w = vec![0u8; n];
    loop {
        out.push(w.clone());
        // increment big-endian
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (w[i] as usize) + 1 < d {
                w[i] += 1;
                for x in w.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
        if n == 0 {
            return out;
        }
    }
}

pub fn word_index(d: usize, w: &[u8]) -> usize {
    w.iter().fold(0usize, |acc, &c| acc * d + c as usize)
}

/// A multiset monomial of `S^k V`: letters sorted nondecreasing, odd letters
/// with multiplicity at most one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn letter(c: u8) -> Self {
        Monomial(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn multiplicity(&self, c: u8) -> usize {
        self.0.iter().filter(|&&x| x == c).count()
    }

    /// Removes one copy of `c`; panics if absent.
    pub fn without(&self, c: u8) -> Monomial {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&x| x == c).expect("letter present");
        v.remove(pos);
        Monomial(v)
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == c {
                j += 1;
            }
            let mult = j - i;
            if mult == 1 {
                parts.push(space.name(c).to_string());
            } else {
                parts.push(format!("{}^{}", space.name(c), mult));
            }
            i = j;
        }
        parts.join(" ")
    }
}

/// Sorts a word into its monomial with the Koszul sign; `None` when an odd
/// letter repeats (the symmetric projection kills the word).
pub fn sort_word(space: &GradedSpace, w: &[u8]) -> Option<(Monomial, i8)> {
    let mut v = w.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting odd-odd transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if space.odd(v[j - 1]) && space.odd(v[j]) {
                sign = -sign;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    // repeated odd letter => zero in S
    for i in 1..v.len() {
        if v[i] == v[i - 1] && space.odd(v[i]) {
            return None;
        }
    }
    Some((Monomial(v), sign))
}

/// All monomials of `S^k V` in lexicographic order.
pub fn sym_monomials(space: &GradedSpace, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    fn rec(space: &GradedSpace, k: usize, min: u8, current: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if current.len() == k {
            out.push(Monomial(current.clone()));
            return;
        }
        for c in min..space.dim() as u8 {
            if space.odd(c) && current.last() == Some(&c) {
                continue;
            }
            current.push(c);
            rec(space, k, c, current, out);
            current.pop();
        }
    }
    rec(space, k, 0, &mut current, &mut out);
    out
}

/// Canonical basis of `S^{<=N} V`: degrees ascending, lexicographic inside.
pub fn sym_monomials_up_to(space: &GradedSpace, n: usize) -> Vec<Monomial> {
    (0..=n).flat_map(|k| sym_monomials(space, k)).collect()
}

/// Position lookup for a monomial basis list.
pub fn monomial_index(list: &[Monomial]) -> BTreeMap<Monomial, usize> {
    list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// An element of `V^{⊗n}` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElem {
    pub n: usize,
    pub terms: BTreeMap<Word, Q>,
}

impl TensorElem {
    pub fn zero(n: usize) -> Self {
        TensorElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(w: Word) -> Self {
        let n = w.len();
        let mut terms = BTreeMap::new();
        terms.insert(w, Q::one());
        TensorElem { n, terms }
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        assert_eq!(w.len(), self.n);
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

    pub fn scale(&self, c: &Q) -> TensorElem {
        if c.is_zero() {
            return TensorElem::zero(self.n);
        }
        TensorElem {
            n: self.n,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &TensorElem) -> TensorElem {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coords(&self, d: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); d.pow(self.n as u32)];
        for (w, c) in &self.terms {
            v[word_index(d, w)] = c.clone();
        }
        v
    }
}

/// Koszul sign of the place action of `g` on a word: letters at slots `i, j`
/// (`i < j`) that end up inverted contribute `(-1)^{|w_i| |w_j|}`.
pub fn action_sign(space: &GradedSpace, g: &Permutation, w: &[u8]) -> i8 {
    let n = w.len();
    let mut sign = 1i8;
    for i in 0..n {
        if !space.odd(w[i]) {
            continue;
        }
        for j in i + 1..n {
            if space.odd(w[j]) && g.apply(i) > g.apply(j) {
                sign = -sign;
            }
        }
    }
    sign
}

/// Applies `g` to a word by the place action: the letter at slot `i` moves to
/// slot `g(i)`.
pub fn apply_perm_word(g: &Permutation, w: &[u8]) -> Word {
    let mut out = vec![0u8; w.len()];
    for (i, &c) in w.iter().enumerate() {
        out[g.apply(i)] = c;
    }
    out
}

/// Linear extension of the signed symmetric-group action to a group algebra
/// element.
pub fn koszul_act(space: &GradedSpace, g: &GroupAlgElem, t: &TensorElem) -> Result<TensorElem, Error> {
    if g.n != t.n {
        return Err(Error::ArityMismatch {
            expected: g.n,
            found: t.n,
        });
    }
    let mut out = TensorElem::zero(t.n);
    for (p, a) in &g.terms {
        for (w, c) in &t.terms {
            let s = action_sign(space, p, w);
            let coeff = if s >= 0 { a * c } else { -(a * c) };
            out.add_term(apply_perm_word(p, w), coeff);
        }
    }
    Ok(out)
}

/// Matrix of the signed action of a single permutation on `V^{⊗n}`.
pub fn perm_matrix(space: &GradedSpace, n: usize, g: &Permutation) -> QMat {
    let d = space.dim();
    let mut m = QMat::zeros(d.pow(n as u32), d.pow(n as u32));
    for w in all_words(d, n) {
        let s = action_sign(space, g, &w);
        let target = apply_perm_word(g, &w);
        let v = if s >= 0 { Q::one() } else { -Q::one() };
        m.set(word_index(d, &target), word_index(d, &w), v);
    }
    m
}

/// Matrix of the signed action of a group algebra element on `V^{⊗n}`.
pub fn group_elem_matrix(space: &GradedSpace, elem: &GroupAlgElem) -> QMat {
    let d = space.dim();
    let n = elem.n;
    let mut m = QMat::zeros(d.pow(n as u32), d.pow(n as u32));
    for (p, c) in &elem.terms {
        for w in all_words(d, n) {
            let s = action_sign(space, p, &w);
            let coeff = if s >= 0 { c.clone() } else { -c.clone() };
            let target = apply_perm_word(p, &w);
            m.add_at(word_index(d, &target), word_index(d, &w), &coeff);
        }
    }
    m
}

/// Matrix of the symmetrizer `pi_n` on `V^{⊗n}`.
pub fn pi_matrix(space: &GradedSpace, n: usize) -> QMat {
    group_elem_matrix(space, &crate::symgroup::symmetrizer(n))
}

/// The symmetrized embedding of a monomial into `V^{⊗n}`:
/// `(1/n!) sum_g ±(g · w_m)`.
pub fn sym_embed(space: &GradedSpace, m: &Monomial) -> TensorElem {
    let n = m.degree();
    let mut out = TensorElem::zero(n);
    let inv = Q::one() / factorial_q(n);
    for g in all_permutations(n) {
        let s = action_sign(space, &g, &m.0);
        let coeff = if s >= 0 { inv.clone() } else { -inv.clone() };
        out.add_term(apply_perm_word(&g, &m.0), coeff);
    }
    out
}

/// Matrix of the inclusion `S^n V -> V^{⊗n}` in the monomial basis.
pub fn incl_sym_matrix(space: &GradedSpace, n: usize) -> QMat {
    let d = space.dim();
    let basis = sym_monomials(space, n);
    QMat::from_cols(
        d.pow(n as u32),
        basis.iter().map(|m| sym_embed(space, m).coords(d)).collect(),
    )
}

/// Matrix of the canonical projection `V^{⊗n} -> S^n V`: sort with sign.
pub fn proj_sym_matrix(space: &GradedSpace, n: usize) -> QMat {
    let d = space.dim();
    let basis = sym_monomials(space, n);
    let idx = monomial_index(&basis);
    let mut m = QMat::zeros(basis.len(), d.pow(n as u32));
    for w in all_words(d, n) {
        if let Some((mono, s)) = sort_word(space, &w) {
            let v = if s >= 0 { Q::one() } else { -Q::one() };
            m.set(idx[&mono], word_index(d, &w), v);
        }
    }
    m
}

/// The product `m_0` of two monomials in `S(V)`: merge and sort with Koszul
/// sign; `None` when an odd letter would repeat.
pub fn mul_monomials(space: &GradedSpace, a: &Monomial, b: &Monomial) -> Option<(Monomial, i8)> {
    let mut w = a.0.clone();
    w.extend_from_slice(&b.0);
    sort_word(space, &w)
}

/// Basis of `Λ^2 V = ker(1 + τ) ⊂ V^{⊗2}`: one generator `e_i⊗e_j − ±e_j⊗e_i`
/// per pair `i < j`, plus `e_i⊗e_i` for each odd `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lambda2 {
    Pair(u8, u8),
    OddSquare(u8),
}

pub fn lambda2_basis(space: &GradedSpace) -> Vec<Lambda2> {
    let d = space.dim() as u8;
    let mut out = Vec::new();
    for i in 0..d {
        if space.odd(i) {
            out.push(Lambda2::OddSquare(i));
        }
        for j in i + 1..d {
            out.push(Lambda2::Pair(i, j));
        }
    }
    out
}

/// Expands a `Λ^2` basis element into `V^{⊗2}` words.
pub fn lambda2_words(space: &GradedSpace, l: &Lambda2) -> Vec<(Word, Q)> {
    match l {
        Lambda2::OddSquare(i) => vec![(vec![*i, *i], Q::one())],
        Lambda2::Pair(i, j) => {
            let sign = if space.odd(*i) && space.odd(*j) {
                Q::one()
            } else {
                -Q::one()
            };
            vec![(vec![*i, *j], Q::one()), (vec![*j, *i], sign)]
        }
    }
}

/// The split `V^{⊗n} = S^n V ⊕ Λ̃^n V` with its four structure maps.
pub struct SplitPower {
    pub sym_basis: Vec<Monomial>,
    pub lambda_dim: usize,
    pub incl_s: QMat,
    pub proj_s: QMat,
    pub incl_l: QMat,
    pub proj_l: QMat,
}

/// Computes the splitting: `S^n V` from the monomial basis, `Λ̃^n V` as the
/// kernel of the symmetrizer, with projections satisfying
/// `proj∘incl = id` on each factor and
/// `incl_s∘proj_s + incl_l∘proj_l = id` on `V^{⊗n}`.
pub fn split_power(space: &GradedSpace, n: usize) -> SplitPower {
    let dn = space.dim().pow(n as u32);
    let pi = pi_matrix(space, n);
    let incl_s = incl_sym_matrix(space, n);
    let proj_s = proj_sym_matrix(space, n);
    let kernel = pi.kernel();
    let lambda_dim = kernel.len();
    let incl_l = QMat::from_cols(dn, kernel);
    // id - pi projects onto the kernel along the image; solving
    // incl_l * X = id - pi gives the coordinates of that projection.
    let complement = QMat::identity(dn).sub(&pi);
    let proj_l = if lambda_dim == 0 {
        QMat::zeros(0, dn)
    } else {
        incl_l
            .solve(&complement)
            .expect("kernel basis spans image of id - pi")
    };
    SplitPower {
        sym_basis: sym_monomials(space, n),
        lambda_dim,
        incl_s,
        proj_s,
        incl_l,
        proj_l,
    }
}

/// Domain bookkeeping for `Ψ_n`: block `i` (1-based) is
/// `V^{⊗ i-1} ⊗ Λ^2 V ⊗ V^{⊗ n-i-1}`.
pub struct PsiPhi {
    pub psi: QMat,
    pub phi: QMat,
    pub block_dims: Vec<usize>,
    pub lambda: Vec<Lambda2>,
}

/// Builds `Ψ_n` (embedding of the adjacent-`Λ^2` blocks) and `Φ_n` (from the
/// canonical ideal decomposition), with `Ψ_n ∘ Φ_n` the projector onto
/// `Λ̃^n V`.
pub fn psi_phi(space: &GradedSpace, n: usize) -> PsiPhi {
    assert!(n >= 2);
    let d = space.dim();
    let dn = d.pow(n as u32);
    let lambda = lambda2_basis(space);
    let nl = lambda.len();
    let mut block_dims = Vec::new();
    let mut psi_cols: Vec<Vec<Q>> = Vec::new();
    for i in 1..=n - 1 {
        let left_words = all_words(d, i - 1);
        let right_words = all_words(d, n - i - 1);
        block_dims.push(left_words.len() * nl * right_words.len());
        for lw in &left_words {
            for l in &lambda {
                for rw in &right_words {
                    let mut col = vec![Q::zero(); dn];
                    for (mid, c) in lambda2_words(space, l) {
                        let mut w = lw.clone();
                        w.extend_from_slice(&mid);
                        w.extend_from_slice(rw);
                        col[word_index(d, &w)] = c;
                    }
                    psi_cols.push(col);
                }
            }
        }
    }
    let psi = QMat::from_cols(dn, psi_cols);

    // Φ_n: block i is the action of (1 - τ_i) a_i, expressed in the block's
    // (left, Λ^2, right) coordinates. Coordinates are read off the words with
    // the Λ^2 pair in its (i < j) orientation (or the repeated odd letter).
    let decomposition = crate::symgroup::ideal_decomposition(n);
    let total: usize = block_dims.iter().sum();
    let mut phi = QMat::zeros(total, dn);
    let mut row_offset = 0usize;
    for i in 1..=n - 1 {
        let tau = GroupAlgElem::from_perm(Permutation::adjacent(n, i));
        let op = GroupAlgElem::one(n).sub(&tau).convolve(&decomposition[i - 1]);
        let right_words = all_words(d, n - i - 1);
        let lam_index: BTreeMap<Lambda2, usize> = lambda
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect();
        let rn = right_words.len();
        for w in all_words(d, n) {
            let image = koszul_act(space, &op, &TensorElem::from_word(w.clone())).unwrap();
            let col = word_index(d, &w);
            for (tw, c) in &image.terms {
                let (a, b) = (tw[i - 1], tw[i]);
                let key = if a < b {
                    Lambda2::Pair(a, b)
                } else if a == b {
                    assert!(space.odd(a), "even square escaped the Λ^2 block");
                    Lambda2::OddSquare(a)
                } else {
                    continue; // accounted for by the (a < b) orientation
                };
                let li = word_index(d, &tw[..i - 1]);
                let ri = word_index(d, &tw[i + 1..]);
                let row = row_offset + (li * lambda.len() + lam_index[&key]) * rn + ri;
                phi.add_at(row, col, c);
            }
        }
        row_offset += block_dims[i - 1];
    }
    PsiPhi {
        psi,
        phi,
        block_dims,
        lambda,
    }
}

/// The Jacobiator matrix `u - u∘τ_2 + u∘τ_2τ_1` of an antisymmetric
/// `α : V^{⊗2} -> V`; the bracket `2α` satisfies the graded Jacobi identity
/// exactly when this vanishes.
pub fn jacobiator(space: &GradedSpace, alpha: &QMat) -> QMat {
    let d = space.dim();
    assert_eq!((alpha.rows, alpha.cols), (d, d * d));
    let id = QMat::identity(d);
    let u = alpha.mul(&alpha.kron(&id));
    let t1 = perm_matrix(space, 3, &Permutation::adjacent(3, 1));
    let t2 = perm_matrix(space, 3, &Permutation::adjacent(3, 2));
    let t2t1 = t2.mul(&t1);
    u.sub(&u.mul(&t2)).add(&u.mul(&t2t1))
}

/// Jacobi criterion via partially antisymmetric tensors: forms
/// `β = (1/3)(3u − u∘τ₂ − u∘τ₂τ₁)` and returns it exactly when
/// `β ∘ Ψ_3 = (α∘(α⊗id), α∘(id⊗α))` holds blockwise.
///
/// Errors when `α` does not kill `S^2 V`.
pub fn jacobi_witness(space: &GradedSpace, alpha: &QMat) -> Result<Option<QMat>, Error> {
    let d = space.dim();
    assert_eq!((alpha.rows, alpha.cols), (d, d * d));
    let pi2 = pi_matrix(space, 2);
    if !alpha.mul(&pi2).is_zero() {
        // find a witness pair for the error
        for (i, w) in all_words(d, 2).iter().enumerate() {
            let col = pi2.column(i);
            if !alpha.apply(&col).iter().all(|x| x.is_zero()) {
                return Err(Error::AntisymmetryViolation {
                    left: space.name(w[0]).to_string(),
                    right: space.name(w[1]).to_string(),
                });
            }
        }
        unreachable!("nonzero matrix has a nonzero column");
    }
    let id = QMat::identity(d);
    let u = alpha.mul(&alpha.kron(&id));
    let u_right = alpha.mul(&id.kron(alpha));
    let t1 = perm_matrix(space, 3, &Permutation::adjacent(3, 1));
    let t2 = perm_matrix(space, 3, &Permutation::adjacent(3, 2));
    let third = Q::new(1.into(), 3.into());
    let beta = u
        .scale(&crate::scalar::qi(3))
        .sub(&u.mul(&t2))
        .sub(&u.mul(&t2.mul(&t1)))
        .scale(&third);
    let pp = psi_phi(space, 3);
    let lhs = beta.mul(&pp.psi);
    // expected blockwise images: u on block 1, α∘(id⊗α) on block 2
    let mut expected_cols: Vec<Vec<Q>> = Vec::new();
    let mut col = 0usize;
    for (block, target) in [(0usize, &u), (1usize, &u_right)] {
        for _ in 0..pp.block_dims[block] {
            let psi_col = pp.psi.column(col);
            expected_cols.push(target.apply(&psi_col));
            col += 1;
        }
    }
    let rhs = QMat::from_cols(d, expected_cols);
    Ok(if lhs == rhs { Some(beta) } else { None })
}
