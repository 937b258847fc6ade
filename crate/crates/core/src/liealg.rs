//! Concrete finite-dimensional graded Lie algebras over Q: structure-constant
//! validation, the adjoint coaction, invariant power traces, bullet-product
//! identities and the trace identity.
//!
//! Conventions fixed here and used by every consumer:
//!
//! * The bracket `μ` is the full structure map; the half bracket `α = μ/2`
//!   kills the symmetric square, and multibrace formulas take `μ` itself
//!   (so the star-product commutator on degree one is exactly `μ`).
//! * Evaluation pairs basis letters without signs, `δ(e_a ⊗ e_b^*) = δ_ab`,
//!   and the coevaluation is `ε(1) = Σ_i e_i^* ⊗ e_i`; consequently the
//!   adjoint coaction is `μ^*(v) = Σ_i e_i^* ⊗ [e_i, v]`. Raw components of
//!   `μ^*` are convention-dependent; everything downstream is validated
//!   through the snake recontraction and operator identities instead.
//! * The pairing of `S^k V^*` against `S^k V` is `⟨D, M⟩ = c_k(M ⊗ D)/k!`,
//!   the number of letter matchings with Koszul signs divided by `k!`; the
//!   contraction `c_p` carries the `n!/(n-p)!` factor, once.
//! * The graded trace of a degree-zero operator is the supertrace, the trace
//!   induced by evaluation after the symmetry morphism.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gvs::{
    all_words, pi_matrix, sort_word, word_index, BasisVec, GradedSpace, Monomial,
};
use crate::linalg::QMat;
use crate::scalar::{format_rat, parse_rat, Q};

/// On-disk form of a Lie algebra: named graded basis plus sparse brackets.
/// Brackets not listed are zero; listing both `(a, b)` and `(b, a)` in a way
/// that contradicts Koszul antisymmetry is a load error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieAlgSpec {
    pub name: String,
    pub basis: Vec<BasisVec>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermEntry {
    pub basis: String,
    pub coeff: String,
}

/// A validated graded Lie algebra: space plus the full bracket table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlg {
    name: String,
    space: GradedSpace,
    /// `table[i][j]` = coordinates of `[e_i, e_j]`.
    table: Vec<Vec<Vec<Q>>>,
}

impl LieAlg {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn bracket_basis(&self, i: u8, j: u8) -> &[Q] {
        &self.table[i as usize][j as usize]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, v) in self.table[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &c * v;
                    }
                }
            }
        }
        out
    }

    /// The bracket as a matrix `V^{⊗2} -> V`.
    pub fn mu_matrix(&self) -> QMat {
        let d = self.dim();
        let mut m = QMat::zeros(d, d * d);
        for i in 0..d {
            for j in 0..d {
                for (k, v) in self.table[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        m.set(k, word_index(d, &[i as u8, j as u8]), v.clone());
                    }
                }
            }
        }
        m
    }

    /// The half bracket `α = μ/2` entering the Jacobi criterion and the
    /// structure-coefficient recursion.
    pub fn alpha_matrix(&self) -> QMat {
        self.mu_matrix().scale(&crate::scalar::qr(1, 2))
    }

    /// Builds and validates an algebra from explicit structure constants:
    /// `brackets[(i, j)] = [e_i, e_j]` for `i, j` basis indices. Pairs can be
    /// given in either or both orders; both triggers a consistency check.
    pub fn validate(
        name: &str,
        space: GradedSpace,
        brackets: &[((u8, u8), Vec<(u8, Q)>)],
    ) -> Result<LieAlg, Error> {
        let d = space.dim();
        let mut table: Vec<Vec<Option<Vec<Q>>>> = vec![vec![None; d]; d];
        for ((i, j), terms) in brackets {
            let mut v = vec![Q::zero(); d];
            for (k, c) in terms {
                v[*k as usize] += c;
            }
            if table[*i as usize][*j as usize].is_some() {
                return Err(Error::AlgebraLoad(format!(
                    "bracket ({}, {}) listed twice",
                    space.name(*i),
                    space.name(*j)
                )));
            }
            table[*i as usize][*j as usize] = Some(v);
        }
        // Complete by graded antisymmetry and cross-check double listings.
        let koszul = |i: u8, j: u8| -> Q {
            if space.odd(i) && space.odd(j) {
                Q::one()
            } else {
                -Q::one()
            }
        };
        let mut full: Vec<Vec<Vec<Q>>> = vec![vec![vec![Q::zero(); d]; d]; d];
        for i in 0..d as u8 {
            for j in 0..d as u8 {
                let direct = table[i as usize][j as usize].clone();
                let mirrored = table[j as usize][i as usize].clone().map(|v| {
                    let s = koszul(i, j);
                    v.iter().map(|c| c * &s).collect::<Vec<Q>>()
                });
                let value = match (direct, mirrored) {
                    (Some(a), Some(b)) if i != j => {
                        if a != b {
                            return Err(Error::AlgebraLoad(format!(
                                "brackets ({l}, {r}) and ({r}, {l}) contradict Koszul antisymmetry",
                                l = space.name(i),
                                r = space.name(j)
                            )));
                        }
                        a
                    }
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => vec![Q::zero(); d],
                };
                full[i as usize][j as usize] = value;
            }
        }
        let alg = LieAlg {
            name: name.to_string(),
            space,
            table: full,
        };
        alg.check_valid()?;
        Ok(alg)
    }

    fn check_valid(&self) -> Result<(), Error> {
        let d = self.dim();
        let space = &self.space;
        // Degree homogeneity: deg [e_i, e_j] = deg e_i + deg e_j.
        for i in 0..d as u8 {
            for j in 0..d as u8 {
                for (k, c) in self.table[i as usize][j as usize].iter().enumerate() {
                    if !c.is_zero() {
                        let expected = space.degree(i) + space.degree(j);
                        let found = space.degree(k as u8);
                        if found != expected {
                            return Err(Error::BracketDegree {
                                left: space.name(i).to_string(),
                                right: space.name(j).to_string(),
                                result: space.name(k as u8).to_string(),
                                found,
                                expected,
                            });
                        }
                    }
                }
            }
        }
        // Graded antisymmetry: μ kills the symmetric square.
        let mu = self.mu_matrix();
        let killed = mu.mul(&pi_matrix(space, 2));
        if !killed.is_zero() {
            for w in all_words(d, 2) {
                let col = killed.column(word_index(d, &w));
                if col.iter().any(|x| !x.is_zero()) {
                    return Err(Error::AntisymmetryViolation {
                        left: space.name(w[0]).to_string(),
                        right: space.name(w[1]).to_string(),
                    });
                }
            }
        }
        // Jacobi, classically (graded Jacobiator) ...
        let alpha = self.alpha_matrix();
        let jac = crate::gvs::jacobiator(space, &alpha);
        let classical_ok = jac.is_zero();
        // ... and through the partially-antisymmetric-tensor criterion.
        let witness_ok = crate::gvs::jacobi_witness(space, &alpha)
            .expect("antisymmetry already verified")
            .is_some();
        assert_eq!(
            classical_ok, witness_ok,
            "Jacobi criteria disagree on `{}`: classical {classical_ok}, witness {witness_ok}",
            self.name
        );
        if !classical_ok {
            for w in all_words(d, 3) {
                let col = jac.column(word_index(d, &w));
                if col.iter().any(|x| !x.is_zero()) {
                    return Err(Error::JacobiViolation {
                        x: space.name(w[0]).to_string(),
                        y: space.name(w[1]).to_string(),
                        z: space.name(w[2]).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Loads and validates the JSON spec form.
    pub fn from_spec(spec: &LieAlgSpec) -> Result<LieAlg, Error> {
        let space = GradedSpace::new(spec.basis.clone())?;
        let mut brackets = Vec::new();
        for entry in &spec.brackets {
            let i = space
                .index_of(&entry.left)
                .ok_or_else(|| Error::AlgebraLoad(format!("unknown basis `{}`", entry.left)))?;
            let j = space
                .index_of(&entry.right)
                .ok_or_else(|| Error::AlgebraLoad(format!("unknown basis `{}`", entry.right)))?;
            let mut terms = Vec::new();
            for t in &entry.result {
                let k = space.index_of(&t.basis).ok_or_else(|| {
                    Error::AlgebraLoad(format!("unknown basis `{}`", t.basis))
                })?;
                terms.push((k, parse_rat(&t.coeff)?));
            }
            brackets.push(((i, j), terms));
        }
        LieAlg::validate(&spec.name, space, &brackets)
    }

    pub fn from_json(json: &str) -> Result<LieAlg, Error> {
        let spec: LieAlgSpec = serde_json::from_str(json)
            .map_err(|e| Error::AlgebraLoad(format!("bad JSON: {e}")))?;
        LieAlg::from_spec(&spec)
    }

    /// Emits the normalized spec (brackets listed once, `i <= j`, in basis
    /// order); reloading it reproduces the same algebra.
    pub fn to_spec(&self) -> LieAlgSpec {
        let d = self.dim();
        let mut brackets = Vec::new();
        for i in 0..d as u8 {
            for j in i..d as u8 {
                let v = &self.table[i as usize][j as usize];
                if v.iter().all(|c| c.is_zero()) {
                    continue;
                }
                brackets.push(BracketEntry {
                    left: self.space.name(i).to_string(),
                    right: self.space.name(j).to_string(),
                    result: v
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| TermEntry {
                            basis: self.space.name(k as u8).to_string(),
                            coeff: format_rat(c),
                        })
                        .collect(),
                });
            }
        }
        LieAlgSpec {
            name: self.name.clone(),
            basis: self.space.basis().to_vec(),
            brackets,
        }
    }
}

/// `Hom(V, S^p V^* ⊗ V)` in coordinates: for each input basis letter, a map
/// from (dual monomial, output letter) to the coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoactionPower {
    pub p: usize,
    pub maps: Vec<BTreeMap<(Monomial, u8), Q>>,
}

/// The adjoint coaction `μ^*(v) = Σ_i e_i^* ⊗ [e_i, v]`, the image of the
/// bracket under the tensor-hom adjunction.
pub fn mu_star(alg: &LieAlg) -> CoactionPower {
    let d = alg.dim();
    let mut maps = Vec::with_capacity(d);
    for v in 0..d as u8 {
        let mut m: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
        for i in 0..d as u8 {
            for (k, c) in alg.bracket_basis(i, v).iter().enumerate() {
                if !c.is_zero() {
                    let key = (Monomial::letter(i), k as u8);
                    *m.entry(key).or_insert_with(Q::zero) += c;
                }
            }
        }
        m.retain(|_, c| !c.is_zero());
        maps.push(m);
    }
    CoactionPower { p: 1, maps }
}

/// One bullet-product step: `μ^* • prev`, multiplying dual monomials with
/// the commutative product of `S(V^*)`.
pub fn bullet_step(alg: &LieAlg, prev: &CoactionPower) -> CoactionPower {
    let d = alg.dim();
    let space = alg.space();
    let mut maps = Vec::with_capacity(d);
    for j in 0..d {
        let mut m: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
        for ((dual, a), c) in &prev.maps[j] {
            for i in 0..d as u8 {
                for (k, c2) in alg.bracket_basis(i, *a).iter().enumerate() {
                    if c2.is_zero() {
                        continue;
                    }
                    // m_0(dual · e_i^*): dual parities equal primal parities
                    let mut w = dual.0.clone();
                    w.push(i);
                    let Some((mono, s)) = sort_word(space, &w) else {
                        continue;
                    };
                    let coeff = c * c2 * crate::scalar::qi(s as i64);
                    *m.entry((mono, k as u8)).or_insert_with(Q::zero) += coeff;
                }
            }
        }
        m.retain(|_, c| !c.is_zero());
        maps.push(m);
    }
    CoactionPower {
        p: prev.p + 1,
        maps,
    }
}

/// `(μ^*)^{• p}`.
pub fn coaction_power(alg: &LieAlg, p: usize) -> CoactionPower {
    assert!(p >= 1);
    let mut acc = mu_star(alg);
    for _ in 1..p {
        acc = bullet_step(alg, &acc);
    }
    acc
}

/// An element of `S^k V^*`: dual monomials with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualElem {
    pub terms: BTreeMap<Monomial, Q>,
}

impl DualElem {
    pub fn zero() -> Self {
        DualElem::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), Q::one());
        DualElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
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

    pub fn add(&self, other: &DualElem) -> DualElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> DualElem {
        if c.is_zero() {
            return DualElem::zero();
        }
        DualElem {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Commutative product in `S(V^*)`.
    pub fn mul(&self, other: &DualElem, space: &GradedSpace) -> DualElem {
        let mut out = DualElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, s)) = crate::gvs::mul_monomials(space, m1, m2) {
                    out.add_term(m, c1 * c2 * crate::scalar::qi(s as i64));
                }
            }
        }
        out
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = if m.0.is_empty() {
                    "1".to_string()
                } else {
                    dual_monomial_display(m, space)
                };
                format!("{}·{}", format_rat(c), mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Dual monomials print with a star on each letter: `x*^2 y*`.
pub fn dual_monomial_display(m: &Monomial, space: &GradedSpace) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.0.len() {
        let c = m.0[i];
        let mut j = i;
        while j < m.0.len() && m.0[j] == c {
            j += 1;
        }
        if j - i == 1 {
            parts.push(format!("{}*", space.name(c)));
        } else {
            parts.push(format!("{}*^{}", space.name(c), j - i));
        }
        i = j;
    }
    parts.join(" ")
}

/// The invariant power trace `ν_k = Tr((μ^*)^{• k})` in `S^k V^*`. The graded
/// trace pairs the output letter against the input with the supertrace sign.
pub fn nu(alg: &LieAlg, k: usize) -> DualElem {
    assert!(k >= 1);
    let power = coaction_power(alg, k);
    let mut out = DualElem::zero();
    for j in 0..alg.dim() {
        let sign = if alg.space().odd(j as u8) {
            -Q::one()
        } else {
            Q::one()
        };
        for ((dual, a), c) in &power.maps[j] {
            if *a == j as u8 {
                out.add_term(dual.clone(), c * &sign);
            }
        }
    }
    out
}

/// Checks `(μ^*)^{• p} • ε = 0` in `Hom(1, S^{p+1} V^* ⊗ V)`: pairing the
/// coevaluation into the bullet power must cancel identically.
pub fn bullet_epsilon_check(alg: &LieAlg, p: usize) -> bool {
    let power = coaction_power(alg, p);
    let space = alg.space();
    let mut acc: BTreeMap<(Monomial, u8), Q> = BTreeMap::new();
    for i in 0..alg.dim() as u8 {
        for ((dual, a), c) in &power.maps[i as usize] {
            // m_0(e_i^* · dual) ⊗ e_a
            let mut w = vec![i];
            w.extend_from_slice(&dual.0);
            let Some((mono, s)) = sort_word(space, &w) else {
                continue;
            };
            let entry = acc.entry((mono, *a)).or_insert_with(Q::zero);
            *entry += c * crate::scalar::qi(s as i64);
        }
    }
    acc.values().all(|c| c.is_zero())
}

/// Pairing `⟨D, M⟩` of a dual monomial against a monomial of the same degree:
/// matchings with Koszul signs, normalized by `k!` (so `⟨x*^k, x^k⟩ = 1` for
/// even `x`).
pub fn pair_dual(space: &GradedSpace, dual: &Monomial, mono: &Monomial) -> Q {
    if dual.degree() != mono.degree() {
        return Q::zero();
    }
    let k = dual.degree();
    let c = crate::ualg::contract_by_dual(space, mono, dual);
    c.into_iter()
        .filter(|(m, _)| m.0.is_empty())
        .map(|(_, v)| v)
        .sum::<Q>()
        / crate::scalar::factorial_q(k)
}

/// Evaluates `ν_k` on a list of vectors given as basis letters, through the
/// pairing (used by tests as the polarized-trace oracle target).
pub fn eval_dual(space: &GradedSpace, elem: &DualElem, letters: &[u8]) -> Q {
    let Some((mono, s)) = sort_word(space, letters) else {
        return Q::zero();
    };
    let mut acc = Q::zero();
    for (d, c) in &elem.terms {
        acc += c * pair_dual(space, d, &mono);
    }
    acc * crate::scalar::qi(s as i64)
}

/// The adjoint action of a basis letter on `S^k V` as a derivation:
/// `z · (x_1 .. x_k) = Σ_i ± x_1 .. [z, x_i] .. x_k` with the Koszul sign of
/// moving `z` past the first `i-1` letters.
pub fn ad_derivation(alg: &LieAlg, z: u8, m: &Monomial) -> Vec<(Monomial, Q)> {
    let space = alg.space();
    let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
    for i in 0..m.0.len() {
        let mut sign = Q::one();
        if space.odd(z) {
            for &c in &m.0[..i] {
                if space.odd(c) {
                    sign = -sign;
                }
            }
        }
        for (k, c) in alg.bracket_basis(z, m.0[i]).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut w = m.0.clone();
            w[i] = k as u8;
            if let Some((mono, s)) = sort_word(space, &w) {
                let entry = out.entry(mono).or_insert_with(Q::zero);
                *entry += c * &sign * crate::scalar::qi(s as i64);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out.into_iter().collect()
}

/// Is the dual element killed by every coadjoint action? Checked through the
/// pairing: `⟨elem, z · m⟩ = 0` for all basis `z` and monomials `m`.
pub fn coadjoint_invariant(alg: &LieAlg, elem: &DualElem) -> bool {
    let k = match elem.terms.keys().next() {
        None => return true,
        Some(m) => m.degree(),
    };
    let space = alg.space();
    for z in 0..alg.dim() as u8 {
        for m in crate::gvs::sym_monomials(space, k) {
            let mut acc = Q::zero();
            for (target, c) in ad_derivation(alg, z, &m) {
                for (d, v) in &elem.terms {
                    acc += &c * v * pair_dual(space, d, &target);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Both sides of the trace identity as matrices `S^n V -> S^{n-p} V`:
/// left, the trace-style composite of `m_0 ∘ ω^{∘p}` against the twisted
/// coevaluation; right, contraction against `ν_p`. Returns whether they
/// agree exactly.
pub fn trace_identity_check(alg: &LieAlg, n: usize, p: usize) -> bool {
    assert!(n >= p && p >= 1);
    let space = alg.space();
    let source = crate::gvs::sym_monomials(space, n);
    let target = crate::gvs::sym_monomials(space, n - p);
    let tidx = crate::gvs::monomial_index(&target);
    let nu_p = nu(alg, p);

    let mut lhs = QMat::zeros(target.len(), source.len());
    let mut rhs = QMat::zeros(target.len(), source.len());
    for (col, m) in source.iter().enumerate() {
        // LHS: id ⊗ ε̄ inserts Σ_i ±(e_i, e_i^*); ω^{∘p} then m_0 append the
        // vector leg; c_1 finally contracts against the dual leg.
        for i in 0..alg.dim() as u8 {
            let eps_sign = if space.odd(i) { -Q::one() } else { Q::one() };
            let moved = crate::ualg::omega_power(alg, m, i, p);
            for ((mono, letter), c) in &moved {
                let Some((prod, s1)) = crate::gvs::mul_monomials(
                    space,
                    mono,
                    &Monomial::letter(*letter),
                ) else {
                    continue;
                };
                if let Some((res, s2)) = crate::ualg::contract_one(space, &prod, i) {
                    let coeff = &eps_sign * c * crate::scalar::qi(s1 as i64) * s2;
                    lhs.add_at(tidx[&res], col, &coeff);
                }
            }
        }
        // RHS: c_p(m ⊗ ν_p).
        for (dual, c) in &nu_p.terms {
            for (res, v) in crate::ualg::contract_by_dual(space, m, dual) {
                let coeff = c * &v;
                rhs.add_at(tidx[&res], col, &coeff);
            }
        }
    }
    lhs == rhs
}

/// Stock algebras used across the test suites and shipped as JSON fixtures.
pub mod fixtures {
    use super::*;
    use crate::scalar::qi;

    fn build(
        name: &str,
        basis: &[(&str, i64)],
        brackets: &[(&str, &str, &[(&str, i64)])],
    ) -> LieAlg {
        let space = GradedSpace::from_names_degrees(basis);
        let entries: Vec<((u8, u8), Vec<(u8, Q)>)> = brackets
            .iter()
            .map(|(l, r, terms)| {
                (
                    (space.index_of(l).unwrap(), space.index_of(r).unwrap()),
                    terms
                        .iter()
                        .map(|(b, c)| (space.index_of(b).unwrap(), qi(*c)))
                        .collect(),
                )
            })
            .collect();
        LieAlg::validate(name, space, &entries).expect("fixture is valid")
    }

    /// Two even commuting generators.
    pub fn abelian2() -> LieAlg {
        build("abelian2", &[("x", 0), ("y", 0)], &[])
    }

    /// The 2-dimensional solvable algebra `[x, y] = y`.
    pub fn a2() -> LieAlg {
        build("a2", &[("x", 0), ("y", 0)], &[("x", "y", &[("y", 1)])])
    }

    /// Heisenberg: `[x, y] = z`, `z` central.
    pub fn h3() -> LieAlg {
        build(
            "h3",
            &[("x", 0), ("y", 0), ("z", 0)],
            &[("x", "y", &[("z", 1)])],
        )
    }

    /// `sl2` with `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
    pub fn sl2() -> LieAlg {
        build(
            "sl2",
            &[("e", 0), ("h", 0), ("f", 0)],
            &[
                ("h", "e", &[("e", 2)]),
                ("h", "f", &[("f", -2)]),
                ("e", "f", &[("h", 1)]),
            ],
        )
    }

    /// The affine line: `[h, x] = x`.
    pub fn aff1() -> LieAlg {
        build("aff1", &[("h", 0), ("x", 0)], &[("h", "x", &[("x", 1)])])
    }

    /// One odd generator squaring onto an even central one:
    /// `t` odd of degree 1, `[t, t] = z` with `z` of degree 2.
    pub fn super_odd() -> LieAlg {
        build(
            "super_odd",
            &[("t", 1), ("z", 2)],
            &[("t", "t", &[("z", 1)])],
        )
    }

    /// Heisenberg extended by the derivation `d(x) = x, d(y) = -y`.
    pub fn dh3() -> LieAlg {
        build(
            "dh3",
            &[("d", 0), ("x", 0), ("y", 0), ("z", 0)],
            &[
                ("d", "x", &[("x", 1)]),
                ("d", "y", &[("y", -1)]),
                ("x", "y", &[("z", 1)]),
            ],
        )
    }

    /// The six star-product fixtures of the verification suites.
    pub fn star_fixtures() -> Vec<LieAlg> {
        vec![abelian2(), a2(), h3(), sl2(), aff1(), super_odd()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};
    use fixtures::*;

    #[test]
    fn fixture_algebras_validate() {
        for alg in star_fixtures() {
            assert!(alg.dim() >= 2, "{}", alg.name());
        }
        dh3();
    }

    #[test]
    fn invalid_jacobi_detected_with_witness() {
        let space = GradedSpace::from_names_degrees(&[("x", 0), ("y", 0), ("z", 0)]);
        let r = LieAlg::validate(
            "bad",
            space,
            &[
                ((0, 1), vec![(2, qi(1))]),
                ((0, 2), vec![(1, qi(1))]),
                ((1, 2), vec![(1, qi(1))]),
            ],
        );
        match r {
            Err(Error::JacobiViolation { x, y, z }) => {
                assert_eq!((x.as_str(), y.as_str(), z.as_str()), ("x", "y", "z"));
            }
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn invalid_odd_jacobi_detected() {
        // [t,t] = w and [t,w] = u nonzero contradicts the graded Jacobi
        // identity on (t, t, t).
        let space = GradedSpace::from_names_degrees(&[("t", 1), ("w", 2), ("u", 3)]);
        let r = LieAlg::validate(
            "bad-odd",
            space,
            &[((0, 0), vec![(1, qi(1))]), ((0, 1), vec![(2, qi(1))])],
        );
        assert!(matches!(r, Err(Error::JacobiViolation { .. })));
    }

    #[test]
    fn antisymmetry_violation_detected() {
        let space = GradedSpace::from_names_degrees(&[("x", 0), ("y", 0)]);
        // [x, x] = y breaks antisymmetry for an even generator
        let r = LieAlg::validate("bad-sym", space.clone(), &[((0, 0), vec![(1, qi(1))])]);
        assert!(matches!(r, Err(Error::AntisymmetryViolation { .. })));
        // inconsistent double listing is a load error
        let r2 = LieAlg::validate(
            "bad-pair",
            space,
            &[((0, 1), vec![(1, qi(1))]), ((1, 0), vec![(1, qi(1))])],
        );
        assert!(matches!(r2, Err(Error::AlgebraLoad(_))));
    }

    #[test]
    fn degree_violation_detected() {
        let space = GradedSpace::from_names_degrees(&[("t", 1), ("z", 3)]);
        let r = LieAlg::validate("bad-deg", space, &[((0, 0), vec![(1, qi(1))])]);
        assert!(matches!(r, Err(Error::BracketDegree { .. })));
    }

    #[test]
    fn snake_recontraction_recovers_bracket() {
        for alg in star_fixtures() {
            let star = mu_star(&alg);
            // (δ ⊗ id) ∘ (id ⊗ μ^*) must reproduce μ on every basis pair.
            for u in 0..alg.dim() as u8 {
                for v in 0..alg.dim() as u8 {
                    let mut got = vec![Q::zero(); alg.dim()];
                    for ((dual, a), c) in &star.maps[v as usize] {
                        if dual.0 == vec![u] {
                            got[*a as usize] += c;
                        }
                    }
                    assert_eq!(got, alg.bracket_basis(u, v), "{}", alg.name());
                }
            }
        }
    }

    #[test]
    fn mu_star_components_a2() {
        let alg = a2();
        let star = mu_star(&alg);
        // μ*(y) = x* ⊗ y, μ*(x) = -y* ⊗ y under this coevaluation ordering;
        // the snake test above is the convention-independent statement.
        let y = &star.maps[1];
        assert_eq!(y.len(), 1);
        assert_eq!(y[&(Monomial::letter(0), 1u8)], qi(1));
        let x = &star.maps[0];
        assert_eq!(x.len(), 1);
        assert_eq!(x[&(Monomial::letter(1), 1u8)], qi(-1));
    }

    #[test]
    fn nu_values_on_fixtures() {
        // abelian: everything vanishes
        let ab = abelian2();
        for k in 1..=3 {
            assert!(nu(&ab, k).is_zero());
        }

        // a2: ν_1 = x*, i.e. ν_1(ax + by) = a
        let a2 = a2();
        let n1 = nu(&a2, 1);
        assert_eq!(n1.terms.len(), 1);
        assert_eq!(n1.terms[&Monomial::letter(0)], qi(1));
        assert_eq!(eval_dual(a2.space(), &n1, &[0]), qi(1));
        assert_eq!(eval_dual(a2.space(), &n1, &[1]), qi(0));
        // ν_2 = (x*)^2 under the pairing normalization
        let n2 = nu(&a2, 2);
        assert_eq!(n2.terms.len(), 1);
        assert_eq!(n2.terms[&Monomial(vec![0, 0])], qi(1));
        assert_eq!(eval_dual(a2.space(), &n2, &[0, 0]), qi(1));

        // sl2: ν_1 = 0; ν_2 is the Killing form
        let sl2 = sl2();
        assert!(nu(&sl2, 1).is_zero());
        let n2 = nu(&sl2, 2);
        let s = sl2.space();
        let h = s.index_of("h").unwrap();
        let e = s.index_of("e").unwrap();
        let f = s.index_of("f").unwrap();
        assert_eq!(eval_dual(s, &n2, &[h, h]), qi(8));
        assert_eq!(eval_dual(s, &n2, &[e, f]), qi(4));
        assert_eq!(eval_dual(s, &n2, &[e, e]), qi(0));
    }

    /// Polarized-trace oracle: ν_k(x_1..x_k) computed directly from products
    /// of ad matrices with the supertrace.
    fn nu_polarized(alg: &LieAlg, letters: &[u8]) -> Q {
        let d = alg.dim();
        let space = alg.space();
        let ad = |z: u8| -> QMat {
            let mut m = QMat::zeros(d, d);
            for j in 0..d as u8 {
                for (k, c) in alg.bracket_basis(z, j).iter().enumerate() {
                    m.set(k, j as usize, c.clone());
                }
            }
            m
        };
        let k = letters.len();
        let mut acc = Q::zero();
        for sigma in crate::symgroup::all_permutations(k) {
            // Koszul sign of rearranging the arguments
            let sign = crate::gvs::action_sign(space, &sigma, letters);
            let arranged = crate::gvs::apply_perm_word(&sigma, letters);
            let mut prod = QMat::identity(d);
            for &z in &arranged {
                prod = prod.mul(&ad(z));
            }
            let mut tr = Q::zero();
            for i in 0..d {
                let s = if space.odd(i as u8) { -Q::one() } else { Q::one() };
                tr += &s * prod.at(i, i);
            }
            acc += crate::scalar::qi(sign as i64) * tr;
        }
        acc / crate::scalar::factorial_q(k)
    }

    #[test]
    fn nu_matches_polarized_traces() {
        for alg in star_fixtures() {
            let d = alg.dim() as u8;
            for k in 1..=3usize {
                let nu_k = nu(&alg, k);
                // compare on all sorted tuples
                let monos = crate::gvs::sym_monomials(alg.space(), k);
                for m in monos {
                    assert_eq!(
                        eval_dual(alg.space(), &nu_k, &m.0),
                        nu_polarized(&alg, &m.0),
                        "{} k={} m={:?} d={}",
                        alg.name(),
                        k,
                        m,
                        d
                    );
                }
            }
        }
    }

    #[test]
    fn nu_is_ad_invariant() {
        for alg in star_fixtures() {
            for k in 1..=3 {
                let nu_k = nu(&alg, k);
                assert!(coadjoint_invariant(&alg, &nu_k), "{} k={k}", alg.name());
            }
        }
    }

    #[test]
    fn bullet_epsilon_vanishes() {
        for alg in star_fixtures() {
            for p in 1..=3 {
                assert!(bullet_epsilon_check(&alg, p), "{} p={p}", alg.name());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for alg in star_fixtures() {
            let spec = alg.to_spec();
            let json = serde_json::to_string_pretty(&spec).unwrap();
            let reloaded = LieAlg::from_json(&json).unwrap();
            assert_eq!(reloaded, alg);
        }
    }

    #[test]
    fn spec_load_rejects_unknown_names() {
        let json = r#"{"name":"bad","basis":[{"name":"x","degree":0}],
            "brackets":[{"left":"x","right":"nope","result":[]}]}"#;
        assert!(matches!(
            LieAlg::from_json(json),
            Err(Error::AlgebraLoad(_))
        ));
    }

    #[test]
    fn half_bracket_scaling() {
        let alg = sl2();
        assert_eq!(alg.alpha_matrix().scale(&qi(2)), alg.mu_matrix());
        let _ = qr(1, 2);
    }
}
