//! The universal enveloping algebra realized on the truncated symmetric
//! algebra, two independent ways:
//!
//! * [`UAlg::star`] — the multibrace product: a coalgebra morphism
//!   `S(V)⊗S(V) → S(V)` is determined by its corestriction to `V`, which on
//!   `S^p ⊗ S^q` is the multibrace `M_{p,q}` evaluated in the algebra; the
//!   product is rebuilt from those structure maps by the cofree-coalgebra
//!   formula `m_⋆ = Σ_k (1/k!) · m_0^{(k)} ∘ F_1^{⊗k} ∘ ∇̄^{(k)}`,
//!   where `∇̄^{(k)}` is the iterated reduced coproduct with `k` outputs.
//! * [`UAlg::pbw_multiply`] — the classical oracle: symmetrize into
//!   normal-ordered words, rewrite out-of-order adjacent pairs with
//!   `ba = ±ab + [b,a]` (and `ee = ½[e,e]` for odd letters), then invert the
//!   symmetrization by descending filtration back-substitution.
//!
//! Their agreement is an acceptance criterion, not an assumption.
//!
//! PBW normal forms use the file order of the basis. The truncation cap is
//! hard: any product escaping `S^{<=N}` is an error, never a silent cutoff,
//! so algebraic identities are only ever tested where they hold exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::freelie;
use crate::gvs::{
    all_words, mul_monomials, sort_word, sym_monomials, sym_monomials_up_to,
    GradedSpace, Monomial,
};
use crate::liealg::LieAlg;
use crate::linalg::QMat;
use crate::scalar::{factorial_q, qi, todd_coefficient, Q};
use crate::symgroup::all_permutations;

/// An element of the truncated symmetric algebra `S^{<=N} V` with exact
/// coefficients; monomials keep odd letters at multiplicity at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymElem {
    pub trunc: usize,
    pub terms: BTreeMap<Monomial, Q>,
}

impl SymElem {
    pub fn zero(trunc: usize) -> Self {
        SymElem {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.terms.insert(Monomial::one(), Q::one());
        s
    }

    pub fn letter(trunc: usize, c: u8) -> Self {
        let mut s = Self::zero(trunc);
        s.terms.insert(Monomial::letter(c), Q::one());
        s
    }

    pub fn monomial(trunc: usize, m: Monomial) -> Self {
        assert!(m.degree() <= trunc, "monomial exceeds truncation");
        let mut s = Self::zero(trunc);
        s.terms.insert(m, Q::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        assert!(m.degree() <= self.trunc, "term exceeds truncation");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &SymElem) -> SymElem {
        assert_eq!(self.trunc, other.trunc);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SymElem) -> SymElem {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> SymElem {
        if c.is_zero() {
            return SymElem::zero(self.trunc);
        }
        SymElem {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Homogeneous component of symmetric degree `k`.
    pub fn degree_part(&self, k: usize) -> SymElem {
        SymElem {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Coordinates in a monomial basis list.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<Q> {
        let idx = crate::gvs::monomial_index(basis);
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in &self.terms {
            v[idx[m]] = c.clone();
        }
        v
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("{}·{}", crate::scalar::format_rat(c), m.display(space)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// An element of the enveloping algebra in PBW normal form: words
/// nondecreasing in the basis order (odd letters never repeat adjacently,
/// the rewriting removes them).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvElem {
    pub terms: BTreeMap<Vec<u8>, Q>,
}

impl EnvElem {
    pub fn zero() -> Self {
        EnvElem::default()
    }

    pub fn add_term(&mut self, w: Vec<u8>, c: Q) {
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

    pub fn add(&self, other: &EnvElem) -> EnvElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> EnvElem {
        if c.is_zero() {
            return EnvElem::zero();
        }
        EnvElem {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

/// The enveloping-algebra context: a validated algebra plus the truncation
/// cap for `S^{<=N}`.
#[derive(Clone, Copy)]
pub struct UAlg<'a> {
    pub alg: &'a LieAlg,
    pub trunc: usize,
}

impl<'a> UAlg<'a> {
    pub fn new(alg: &'a LieAlg, trunc: usize) -> Self {
        UAlg { alg, trunc }
    }

    pub fn space(&self) -> &GradedSpace {
        self.alg.space()
    }

    fn check_product_fits(&self, a: &SymElem, b: &SymElem) -> Result<(), Error> {
        let (da, db) = (a.max_degree(), b.max_degree());
        if da + db > self.trunc {
            return Err(Error::TruncationOverflow {
                left: da,
                right: db,
                trunc: self.trunc,
            });
        }
        Ok(())
    }

    /// The commutative product `m_0` of the symmetric algebra.
    pub fn m0(&self, a: &SymElem, b: &SymElem) -> Result<SymElem, Error> {
        self.check_product_fits(a, b)?;
        let mut out = SymElem::zero(self.trunc);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                if let Some((m, s)) = mul_monomials(self.space(), m1, m2) {
                    out.add_term(m, c1 * c2 * qi(s as i64));
                }
            }
        }
        Ok(out)
    }

    /// The star product, by cofree-coalgebra reconstruction from the
    /// multibrace structure maps.
    pub fn star(&self, a: &SymElem, b: &SymElem) -> Result<SymElem, Error> {
        self.check_product_fits(a, b)?;
        let mut out = SymElem::zero(self.trunc);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let prod = self.star_monomials(m1, m2)?;
                out = out.add(&prod.scale(&(c1 * c2)));
            }
        }
        Ok(out)
    }

    /// Star product of two monomials.
    pub fn star_monomials(&self, m1: &Monomial, m2: &Monomial) -> Result<SymElem, Error> {
        let total = m1.degree() + m2.degree();
        if total > self.trunc {
            return Err(Error::TruncationOverflow {
                left: m1.degree(),
                right: m2.degree(),
                trunc: self.trunc,
            });
        }
        let mut out = SymElem::zero(self.trunc);
        if total == 0 {
            out.add_term(Monomial::one(), Q::one());
            return Ok(out);
        }
        for k in 1..=total {
            let weight = Q::one() / factorial_q(k);
            for (parts, coeff) in split_pairs(self.space(), m1, m2, k) {
                // evaluate the corestriction on every part
                let mut vectors: Vec<Vec<(u8, Q)>> = Vec::with_capacity(k);
                let mut dead = false;
                for (ai, bi) in &parts {
                    let v = self.corestriction(ai, bi);
                    if v.iter().all(|(_, c)| c.is_zero()) {
                        dead = true;
                        break;
                    }
                    vectors.push(v);
                }
                if dead {
                    continue;
                }
                // multiply the k output letters back together with m_0
                let mut stack: Vec<(Vec<u8>, Q)> = vec![(Vec::new(), &weight * &coeff)];
                for v in &vectors {
                    let mut next = Vec::new();
                    for (letters, c) in &stack {
                        for (letter, cv) in v {
                            if cv.is_zero() {
                                continue;
                            }
                            let mut w = letters.clone();
                            w.push(*letter);
                            next.push((w, c * cv));
                        }
                    }
                    stack = next;
                }
                for (letters, c) in stack {
                    if let Some((mono, s)) = sort_word(self.space(), &letters) {
                        out.add_term(mono, c * qi(s as i64));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The structure map `F_1` on `S^p V ⊗ S^q V`: the multibrace `M_{p,q}`
    /// evaluated at the part's letters, with the conventions
    /// `M_{1,0} = M_{0,1} = id` and `M_{p,0} = M_{0,q} = 0` otherwise.
    fn corestriction(&self, a: &Monomial, b: &Monomial) -> Vec<(u8, Q)> {
        let (p, q) = (a.degree(), b.degree());
        match (p, q) {
            (1, 0) => vec![(a.0[0], Q::one())],
            (0, 1) => vec![(b.0[0], Q::one())],
            (_, 0) | (0, _) => Vec::new(),
            _ => {
                let elem = freelie::mbrace(p, q);
                let mut assignment = a.0.clone();
                assignment.extend_from_slice(&b.0);
                self.eval_multilinear(&elem, &assignment)
            }
        }
    }

    /// Evaluates a multilinear free-Lie element at basis letters, with the
    /// Koszul sign of rearranging the arguments into each monomial's order.
    fn eval_multilinear(&self, elem: &freelie::FreeLieElem, assignment: &[u8]) -> Vec<(u8, Q)> {
        let d = self.alg.dim();
        let space = self.space();
        let mut acc = vec![Q::zero(); d];
        for (w, c) in &elem.terms {
            // sign of reordering the argument tensor into the order w
            let mut sign = 1i8;
            for k in 0..w.len() {
                for l in k + 1..w.len() {
                    if w[k] > w[l]
                        && space.odd(assignment[w[k] as usize])
                        && space.odd(assignment[w[l] as usize])
                    {
                        sign = -sign;
                    }
                }
            }
            let vec = self.eval_word(w, assignment);
            for (i, v) in vec.into_iter().enumerate() {
                if !v.is_zero() {
                    acc[i] += c * qi(sign as i64) * v;
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u8, c))
            .collect()
    }

    fn eval_word(&self, w: &[u8], assignment: &[u8]) -> Vec<Q> {
        if w.len() == 1 {
            let mut v = vec![Q::zero(); self.alg.dim()];
            v[assignment[w[0] as usize] as usize] = Q::one();
            return v;
        }
        let (u, v) = freelie::standard_factorization(w);
        let eu = self.eval_word(&u, assignment);
        let ev = self.eval_word(&v, assignment);
        self.alg.bracket(&eu, &ev)
    }

    // ---- PBW oracle ------------------------------------------------------

    /// Rewrites a word into PBW normal order: adjacent out-of-order pairs
    /// `ba` become `±ab + [b,a]`, adjacent equal odd letters `ee` become
    /// `½[e,e]`.
    pub fn normal_order(&self, word: &[u8], coeff: Q) -> EnvElem {
        let space = self.space();
        let mut out = EnvElem::zero();
        let mut stack: Vec<(Vec<u8>, Q)> = vec![(word.to_vec(), coeff)];
        while let Some((w, c)) = stack.pop() {
            let violation = (0..w.len().saturating_sub(1))
                .find(|&i| w[i] > w[i + 1] || (w[i] == w[i + 1] && space.odd(w[i])));
            let Some(i) = violation else {
                out.add_term(w, c);
                continue;
            };
            let (a, b) = (w[i], w[i + 1]);
            if a == b {
                // odd square: ee = ½ [e,e]
                for (k, v) in self.alg.bracket_basis(a, a).iter().enumerate() {
                    if !v.is_zero() {
                        let mut nw = w.clone();
                        nw.remove(i + 1);
                        nw[i] = k as u8;
                        stack.push((nw, &c * v * crate::scalar::qr(1, 2)));
                    }
                }
            } else {
                let sign = if space.odd(a) && space.odd(b) {
                    -Q::one()
                } else {
                    Q::one()
                };
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                stack.push((swapped, &c * &sign));
                for (k, v) in self.alg.bracket_basis(a, b).iter().enumerate() {
                    if !v.is_zero() {
                        let mut nw = w.clone();
                        nw.remove(i + 1);
                        nw[i] = k as u8;
                        stack.push((nw, &c * v));
                    }
                }
            }
        }
        out
    }

    /// Graded symmetrization `S^{<=N} V -> U(g)`:
    /// `x_1 .. x_k ↦ (1/k!) Σ_σ ±(word)`, normal-ordered.
    pub fn symmetrize(&self, a: &SymElem) -> EnvElem {
        let space = self.space();
        let mut out = EnvElem::zero();
        for (m, c) in &a.terms {
            let k = m.degree();
            let inv = c / factorial_q(k);
            for g in all_permutations(k) {
                let s = crate::gvs::action_sign(space, &g, &m.0);
                let w = crate::gvs::apply_perm_word(&g, &m.0);
                out = out.add(&self.normal_order(&w, &inv * qi(s as i64)));
            }
        }
        out
    }

    /// Inverts the symmetrization by back-substitution down the filtration:
    /// the degree-`k` words of `sym(m)` are exactly `m` plus lower-length
    /// corrections.
    pub fn unsymmetrize(&self, u: &EnvElem) -> SymElem {
        let mut out = SymElem::zero(self.trunc);
        let mut rest = u.clone();
        while !rest.is_zero() {
            let k = rest.max_len();
            let mut layer = SymElem::zero(self.trunc);
            for (w, c) in rest.terms.iter().filter(|(w, _)| w.len() == k) {
                layer.add_term(Monomial(w.clone()), c.clone());
            }
            out = out.add(&layer);
            rest = rest.add(&self.symmetrize(&layer).scale(&-Q::one()));
        }
        out
    }

    /// Multiplication through the classical PBW identification: the
    /// independent oracle for the star product.
    pub fn pbw_multiply(&self, a: &SymElem, b: &SymElem) -> Result<SymElem, Error> {
        self.check_product_fits(a, b)?;
        let ua = self.symmetrize(a);
        let ub = self.symmetrize(b);
        let mut prod = EnvElem::zero();
        for (w1, c1) in &ua.terms {
            for (w2, c2) in &ub.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                prod = prod.add(&self.normal_order(&w, c1 * c2));
            }
        }
        Ok(self.unsymmetrize(&prod))
    }

    // ---- structure coefficients -------------------------------------------

    /// `Δ^p` on basis words: the iterated star product of the `p` letters.
    pub fn delta_word(&self, w: &[u8]) -> Result<SymElem, Error> {
        assert!(!w.is_empty());
        let mut acc = SymElem::letter(self.trunc, w[0]);
        for &c in &w[1..] {
            acc = self.star(&acc, &SymElem::letter(self.trunc, c))?;
        }
        Ok(acc)
    }

    /// All columns of `Δ^p` over the word basis of `V^{⊗p}`.
    pub fn delta_columns(&self, p: usize) -> Result<Vec<SymElem>, Error> {
        assert!(p >= 1 && p <= self.trunc);
        all_words(self.alg.dim(), p)
            .iter()
            .map(|w| self.delta_word(w))
            .collect()
    }

    /// The structure coefficient `c_p^k` as a matrix
    /// `V^{⊗p} -> S^k V` (the `S^k` component of `Δ^p`).
    pub fn structure_coefficients(&self, p: usize, k: usize) -> Result<QMat, Error> {
        assert!(k >= 1 && k <= p);
        let basis = sym_monomials(self.space(), k);
        let cols = self
            .delta_columns(p)?
            .into_iter()
            .map(|s| s.degree_part(k).coords(&basis))
            .collect();
        Ok(QMat::from_cols(basis.len(), cols))
    }
}

// ---- contraction machinery (space-level, no bracket involved) -------------

/// Single contraction `c_1(m ⊗ u^*) = mult_u(m) · ± · (m without u)`:
/// the sign moves the removed copy of `u` past the letters after it. The
/// multiplicity absorbs the `n` of `n!/(n-1)!`.
pub fn contract_one(space: &GradedSpace, m: &Monomial, dual: u8) -> Option<(Monomial, Q)> {
    let mult = m.multiplicity(dual);
    if mult == 0 {
        return None;
    }
    let mut sign = Q::one();
    if space.odd(dual) {
        let last = m.0.iter().rposition(|&c| c == dual).unwrap();
        for &c in &m.0[last + 1..] {
            if space.odd(c) {
                sign = -sign;
            }
        }
    }
    Some((m.without(dual), qi(mult as i64) * sign))
}

/// Iterated contraction against an ordered list of dual letters (first
/// letter contracts first).
pub fn contract_ordered(space: &GradedSpace, m: &Monomial, duals: &[u8]) -> Option<(Monomial, Q)> {
    let mut mono = m.clone();
    let mut coeff = Q::one();
    for &u in duals {
        let (next, c) = contract_one(space, &mono, u)?;
        mono = next;
        coeff *= c;
    }
    Some((mono, coeff))
}

/// The contraction `c_p(m ⊗ D)` of a monomial by a dual monomial: average
/// over the symmetrized orderings of `D` with their Koszul signs; carries
/// the `n!/(n-p)!` normalization through the iterated single contractions.
pub fn contract_by_dual(space: &GradedSpace, m: &Monomial, dual: &Monomial) -> Vec<(Monomial, Q)> {
    let p = dual.degree();
    if p == 0 {
        return vec![(m.clone(), Q::one())];
    }
    if p > m.degree() {
        return Vec::new();
    }
    let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
    let inv = Q::one() / factorial_q(p);
    for g in all_permutations(p) {
        let s = crate::gvs::action_sign(space, &g, &dual.0);
        let arranged = crate::gvs::apply_perm_word(&g, &dual.0);
        if let Some((mono, c)) = contract_ordered(space, m, &arranged) {
            let entry = acc.entry(mono).or_insert_with(Q::zero);
            *entry += c * &inv * qi(s as i64);
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc.into_iter().collect()
}

/// Matrix of `c_p : S^n V ⊗ S^p V^* -> S^{n-p} V` in monomial bases (columns
/// indexed by the pair `(monomial, dual monomial)`, dual index minor).
pub fn contraction_matrix(space: &GradedSpace, n: usize, p: usize) -> QMat {
    assert!(n >= p);
    let src_m = sym_monomials(space, n);
    let src_d = sym_monomials(space, p);
    let dst = sym_monomials(space, n - p);
    let idx = crate::gvs::monomial_index(&dst);
    let mut mat = QMat::zeros(dst.len(), src_m.len() * src_d.len());
    for (i, m) in src_m.iter().enumerate() {
        for (j, dm) in src_d.iter().enumerate() {
            for (mono, c) in contract_by_dual(space, m, dm) {
                mat.add_at(idx[&mono], i * src_d.len() + j, &c);
            }
        }
    }
    mat
}

// ---- omega and the Todd-series multiplication -----------------------------

/// `ω(m ⊗ e_v) = n · (id^{⊗ n-1} ⊗ μ)` on the symmetrized embedding of `m`,
/// expressed back in `S^{n-1} V ⊗ V` coordinates.
pub fn omega_apply(alg: &LieAlg, m: &Monomial, v: u8) -> BTreeMap<(Monomial, u8), Q> {
    let space = alg.space();
    let n = m.degree();
    let mut out: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
    if n == 0 {
        return out;
    }
    let embedded = crate::gvs::sym_embed(space, m);
    for (w, c) in &embedded.terms {
        let last = w[n - 1];
        for (k, c2) in alg.bracket_basis(last, v).iter().enumerate() {
            if c2.is_zero() {
                continue;
            }
            if let Some((mono, s)) = sort_word(space, &w[..n - 1]) {
                let key = (mono, k as u8);
                let entry = out.entry(key).or_insert_with(Q::zero);
                *entry += c * c2 * qi(s as i64) * qi(n as i64);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `ω^{∘ p}` applied to `m ⊗ e_v`.
pub fn omega_power(alg: &LieAlg, m: &Monomial, v: u8, p: usize) -> BTreeMap<(Monomial, u8), Q> {
    let mut acc: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
    acc.insert((m.clone(), v), Q::one());
    for _ in 0..p {
        let mut next: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
        for ((mono, letter), c) in &acc {
            for ((m2, l2), c2) in omega_apply(alg, mono, *letter) {
                let entry = next.entry((m2, l2)).or_insert_with(Q::zero);
                *entry += c * c2;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc
}

/// Matrix of `ω : S^n V ⊗ V -> S^{n-1} V ⊗ V` (letter index minor).
pub fn omega_matrix(alg: &LieAlg, n: usize) -> QMat {
    assert!(n >= 1);
    let space = alg.space();
    let d = alg.dim();
    let src = sym_monomials(space, n);
    let dst = sym_monomials(space, n - 1);
    let idx = crate::gvs::monomial_index(&dst);
    let mut mat = QMat::zeros(dst.len() * d, src.len() * d);
    for (i, m) in src.iter().enumerate() {
        for v in 0..d as u8 {
            for ((mono, letter), c) in omega_apply(alg, m, v) {
                mat.add_at(idx[&mono] * d + letter as usize, i * d + v as usize, &c);
            }
        }
    }
    mat
}

/// The Todd-series multiplication map
/// `Σ_{i=0..n} todd(i) · m_0 ∘ ω^{∘ i} : S^n V ⊗ V -> S^{<= n+1} V`.
pub fn todd_multiplication_matrix(alg: &LieAlg, n: usize) -> QMat {
    let space = alg.space();
    let d = alg.dim();
    let src = sym_monomials(space, n);
    let dst = sym_monomials_up_to(space, n + 1);
    let idx = crate::gvs::monomial_index(&dst);
    let mut mat = QMat::zeros(dst.len(), src.len() * d);
    for (i, m) in src.iter().enumerate() {
        for v in 0..d as u8 {
            let mut current: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
            current.insert((m.clone(), v), Q::one());
            for step in 0..=n {
                let todd = todd_coefficient(step);
                if !todd.is_zero() {
                    for ((mono, letter), c) in &current {
                        if let Some((prod, s)) =
                            mul_monomials(space, mono, &Monomial::letter(*letter))
                        {
                            let coeff = c * &todd * qi(s as i64);
                            mat.add_at(idx[&prod], i * d + v as usize, &coeff);
                        }
                    }
                }
                if step < n {
                    let mut next: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
                    for ((mono, letter), c) in &current {
                        for ((m2, l2), c2) in omega_apply(alg, mono, *letter) {
                            let entry = next.entry((m2, l2)).or_insert_with(Q::zero);
                            *entry += c * c2;
                        }
                    }
                    current = next;
                }
            }
        }
    }
    mat
}

/// The star product restricted to `S^n V ⊗ V`, as a matrix into
/// `S^{<= n+1} V`; the comparison target for the Todd-series formula.
pub fn star_restriction_matrix(alg: &LieAlg, n: usize) -> Result<QMat, Error> {
    let ua = UAlg::new(alg, n + 1);
    let space = alg.space();
    let d = alg.dim();
    let src = sym_monomials(space, n);
    let dst = sym_monomials_up_to(space, n + 1);
    let mut cols = Vec::with_capacity(src.len() * d);
    for m in &src {
        for v in 0..d as u8 {
            let prod = ua.star_monomials(m, &Monomial::letter(v))?;
            cols.push(prod.coords(&dst));
        }
    }
    Ok(QMat::from_cols(dst.len(), cols))
}

// ---- split enumeration for the reconstruction ------------------------------

/// All ordered `k`-part splits of the pair of monomials `(a, b)` with no part
/// empty on both sides, with the multinomial coefficient and Koszul sign
/// (unshuffles inside `a` and `b`, and the interleaving of the `b`-parts past
/// the later `a`-parts).
fn split_pairs(
    space: &GradedSpace,
    a: &Monomial,
    b: &Monomial,
    k: usize,
) -> Vec<(Vec<(Monomial, Monomial)>, Q)> {
    let splits_a = multiset_splits(space, a, k);
    let splits_b = multiset_splits(space, b, k);
    let mut out = Vec::new();
    for (parts_a, coeff_a) in &splits_a {
        'next: for (parts_b, coeff_b) in &splits_b {
            let mut interleave = 1i8;
            for i in 0..k {
                if parts_a[i].0.is_empty() && parts_b[i].0.is_empty() {
                    continue 'next;
                }
            }
            // sign of moving each b-part past the later a-parts
            for i in 0..k {
                if parity(space, &parts_b[i]) {
                    for part_a in parts_a.iter().skip(i + 1) {
                        if parity(space, part_a) {
                            interleave = -interleave;
                        }
                    }
                }
            }
            let parts: Vec<(Monomial, Monomial)> = parts_a
                .iter()
                .cloned()
                .zip(parts_b.iter().cloned())
                .collect();
            out.push((parts, coeff_a * coeff_b * qi(interleave as i64)));
        }
    }
    out
}

fn parity(space: &GradedSpace, m: &Monomial) -> bool {
    m.0.iter().filter(|&&c| space.odd(c)).count() % 2 == 1
}

/// Ordered `k`-part splits (parts may be empty) of a multiset monomial, with
/// multinomial coefficients and the Koszul unshuffle sign.
fn multiset_splits(space: &GradedSpace, m: &Monomial, k: usize) -> Vec<(Vec<Monomial>, Q)> {
    // distribute each letter's multiplicity over the k parts
    let mut distinct: Vec<(u8, usize)> = Vec::new();
    for &c in &m.0 {
        match distinct.last_mut() {
            Some((l, n)) if *l == c => *n += 1,
            _ => distinct.push((c, 1)),
        }
    }
    let mut results: Vec<(Vec<Vec<u8>>, Q)> = vec![(vec![Vec::new(); k], Q::one())];
    for (letter, mult) in distinct {
        let distros = compositions(mult, k);
        let mut next = Vec::with_capacity(results.len() * distros.len());
        for (parts, coeff) in &results {
            for d in &distros {
                let mut c = factorial_q(mult);
                for &cnt in d {
                    c /= factorial_q(cnt);
                }
                let mut np = parts.clone();
                for (i, &cnt) in d.iter().enumerate() {
                    for _ in 0..cnt {
                        np[i].push(letter);
                    }
                }
                next.push((np, coeff * c));
            }
        }
        results = next;
    }
    // Koszul unshuffle sign: odd letters have multiplicity one, so each odd
    // letter sits in a definite part; count inversions by part index.
    results
        .into_iter()
        .map(|(parts, coeff)| {
            let mut sign = 1i8;
            let odd_parts: Vec<(u8, usize)> = parts
                .iter()
                .enumerate()
                .flat_map(|(i, p)| {
                    p.iter()
                        .filter(|&&c| space.odd(c))
                        .map(move |&c| (c, i))
                })
                .collect();
            // original order of odd letters is their sorted order in m
            let mut order: Vec<(u8, usize)> = odd_parts;
            order.sort_by_key(|&(c, _)| c);
            for x in 0..order.len() {
                for y in x + 1..order.len() {
                    if order[x].1 > order[y].1 {
                        sign = -sign;
                    }
                }
            }
            (
                parts.into_iter().map(Monomial).collect::<Vec<_>>(),
                coeff * qi(sign as i64),
            )
        })
        .collect()
}

/// All ways to write `n` as an ordered sum of `k` nonnegative integers.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}
