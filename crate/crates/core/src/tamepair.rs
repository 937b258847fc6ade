//! Tame triples of Lie algebras `(g, h, n)`: the reductive-complement and
//! tameness predicates, the induced bracket on the complement, the module
//! structure of the ambient algebra on `U(n)`, the section through `U(g)`,
//! and the invariant-algebra anti-morphism check.
//!
//! Throughout, `U(n)` is realized as `(S^{<= N}(n), ⋆)` for the induced
//! bracket, and `U(g)` enters through the PBW normal-ordering machinery.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gvs::{sym_monomials_up_to, Monomial};
use crate::liealg::{LieAlg, LieAlgSpec};
use crate::linalg::QMat;
use crate::scalar::{qi, Q};
use crate::ualg::{EnvElem, SymElem, UAlg};

/// On-disk form: the ambient algebra plus the basis partition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleFile {
    #[serde(flatten)]
    pub algebra: LieAlgSpec,
    pub subalgebra: Vec<String>,
    pub complement: Vec<String>,
}

/// A triple `(g, h, n)` given by a partition of the ambient basis.
#[derive(Debug, Clone)]
pub struct TripleSpec {
    ambient: LieAlg,
    sub: Vec<u8>,
    comp: Vec<u8>,
}

/// Outcome of a predicate with an optional offending witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub witness: Option<Vec<String>>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            ok: true,
            witness: None,
        }
    }

    fn fail(witness: Vec<String>) -> Self {
        Verdict {
            ok: false,
            witness: Some(witness),
        }
    }
}

impl TripleSpec {
    pub fn new(ambient: LieAlg, sub_names: &[String], comp_names: &[String]) -> Result<Self, Error> {
        let space = ambient.space();
        let mut seen = vec![false; ambient.dim()];
        let resolve = |names: &[String], seen: &mut Vec<bool>| -> Result<Vec<u8>, Error> {
            let mut out = Vec::new();
            for n in names {
                let i = space.index_of(n).ok_or_else(|| {
                    Error::MalformedPartition(format!("unknown basis `{n}`"))
                })?;
                if seen[i as usize] {
                    return Err(Error::MalformedPartition(format!(
                        "basis `{n}` listed twice"
                    )));
                }
                seen[i as usize] = true;
                out.push(i);
            }
            Ok(out)
        };
        let sub = resolve(sub_names, &mut seen)?;
        let comp = resolve(comp_names, &mut seen)?;
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedPartition(
                "subalgebra and complement must partition the basis".into(),
            ));
        }
        Ok(TripleSpec { ambient, sub, comp })
    }

    pub fn from_file(file: &TripleFile) -> Result<Self, Error> {
        let ambient = LieAlg::from_spec(&file.algebra)?;
        TripleSpec::new(ambient, &file.subalgebra, &file.complement)
    }

    pub fn from_json(json: &str) -> Result<Self, Error> {
        let file: TripleFile = serde_json::from_str(json)
            .map_err(|e| Error::AlgebraLoad(format!("bad JSON: {e}")))?;
        TripleSpec::from_file(&file)
    }

    pub fn ambient(&self) -> &LieAlg {
        &self.ambient
    }

    pub fn sub_indices(&self) -> &[u8] {
        &self.sub
    }

    pub fn comp_indices(&self) -> &[u8] {
        &self.comp
    }

    fn name_of(&self, i: u8) -> String {
        self.ambient.space().name(i).to_string()
    }

    fn is_comp(&self, i: u8) -> bool {
        self.comp.contains(&i)
    }

    /// Projection of an ambient coordinate vector onto the span of `part`.
    fn project(&self, v: &[Q], part: &[u8]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ambient.dim()];
        for &i in part {
            out[i as usize] = v[i as usize].clone();
        }
        out
    }

    /// Is `h` a subalgebra with `[h, n] ⊆ n`? Returns a witness pair
    /// otherwise.
    pub fn check_reductive(&self) -> Verdict {
        for &a in &self.sub {
            for &b in &self.sub {
                let br = self.ambient.bracket_basis(a, b);
                if self.comp.iter().any(|&c| !br[c as usize].is_zero()) {
                    return Verdict::fail(vec![self.name_of(a), self.name_of(b)]);
                }
            }
            for &n in &self.comp {
                let br = self.ambient.bracket_basis(a, n);
                if self.sub.iter().any(|&c| !br[c as usize].is_zero()) {
                    return Verdict::fail(vec![self.name_of(a), self.name_of(n)]);
                }
            }
        }
        Verdict::pass()
    }

    /// Tameness: `[β(n1, n2), n3] = 0` for all basis triples of the
    /// complement, where `β` is the subalgebra part of the bracket.
    pub fn check_tame(&self) -> Verdict {
        for &n1 in &self.comp {
            for &n2 in &self.comp {
                let beta = self.project(self.ambient.bracket_basis(n1, n2), &self.sub);
                if beta.iter().all(|c| c.is_zero()) {
                    continue;
                }
                for &n3 in &self.comp {
                    let mut unit = vec![Q::zero(); self.ambient.dim()];
                    unit[n3 as usize] = Q::one();
                    let out = self.ambient.bracket(&beta, &unit);
                    if out.iter().any(|c| !c.is_zero()) {
                        return Verdict::fail(vec![
                            self.name_of(n1),
                            self.name_of(n2),
                            self.name_of(n3),
                        ]);
                    }
                }
            }
        }
        Verdict::pass()
    }

    /// The complement with the projected bracket `α = π_n ∘ μ`, revalidated
    /// as a Lie algebra. Requires tameness (which guarantees Jacobi; a
    /// validation failure past that point would be a bug).
    pub fn induced_bracket(&self) -> Result<LieAlg, Error> {
        let tame = self.check_tame();
        if !tame.ok {
            let w = tame.witness.unwrap();
            return Err(Error::TamenessRequired {
                x: w[0].clone(),
                y: w[1].clone(),
                z: w[2].clone(),
            });
        }
        self.induced_bracket_unchecked()
    }

    /// The projected bracket without the tameness gate; used by the
    /// negative module-axiom probes. Jacobi may fail here, in which case the
    /// validation error is returned.
    pub fn induced_bracket_unchecked(&self) -> Result<LieAlg, Error> {
        let space = self.ambient.space().subspace(&self.comp);
        let mut brackets = Vec::new();
        for (i2, &a) in self.comp.iter().enumerate() {
            for (j2, &b) in self.comp.iter().enumerate() {
                if i2 > j2 {
                    continue;
                }
                let br = self.ambient.bracket_basis(a, b);
                let mut terms = Vec::new();
                for (k2, &c) in self.comp.iter().enumerate() {
                    if !br[c as usize].is_zero() {
                        terms.push((k2 as u8, br[c as usize].clone()));
                    }
                }
                if !terms.is_empty() {
                    brackets.push(((i2 as u8, j2 as u8), terms));
                }
            }
        }
        LieAlg::validate(
            &format!("{}|complement", self.ambient.name()),
            space,
            &brackets,
        )
    }
}

/// The action of the ambient algebra on `U(n) = (S^{<= N}(n), ⋆)`:
/// complement elements act by left star multiplication, subalgebra elements
/// by the derivation extending their adjoint action.
pub struct ModuleOnUn<'a> {
    triple: &'a TripleSpec,
    induced: LieAlg,
    trunc: usize,
}

impl<'a> ModuleOnUn<'a> {
    /// Requires tameness.
    pub fn new(triple: &'a TripleSpec, trunc: usize) -> Result<Self, Error> {
        let induced = triple.induced_bracket()?;
        Ok(ModuleOnUn {
            triple,
            induced,
            trunc,
        })
    }

    /// Builds the action map without the tameness gate, for the negative
    /// probes; the induced bracket must still validate.
    pub fn new_unchecked(triple: &'a TripleSpec, trunc: usize) -> Result<Self, Error> {
        let induced = triple.induced_bracket_unchecked()?;
        Ok(ModuleOnUn {
            triple,
            induced,
            trunc,
        })
    }

    pub fn induced(&self) -> &LieAlg {
        &self.induced
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    fn ualg(&self) -> UAlg<'_> {
        UAlg::new(&self.induced, self.trunc)
    }

    /// Index of an ambient complement letter inside the induced algebra.
    fn comp_index(&self, ambient_letter: u8) -> u8 {
        self.triple
            .comp
            .iter()
            .position(|&c| c == ambient_letter)
            .expect("complement letter") as u8
    }

    /// The derivation action of a subalgebra letter on a monomial of `S(n)`,
    /// with the Koszul sign of moving it past earlier letters.
    fn derivation(&self, h: u8, m: &Monomial) -> SymElem {
        let ambient = self.triple.ambient();
        let space = self.induced.space();
        let mut out = SymElem::zero(self.trunc);
        for i in 0..m.0.len() {
            let mut sign = Q::one();
            if ambient.space().odd(h) {
                for &c in &m.0[..i] {
                    if space.odd(c) {
                        sign = -sign;
                    }
                }
            }
            let target = self.triple.comp[m.0[i] as usize];
            let br = ambient.bracket_basis(h, target);
            for (k, c) in br.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                assert!(
                    self.triple.is_comp(k as u8),
                    "reductivity: [h, n] stays in the complement"
                );
                let mut w = m.0.clone();
                w[i] = self.comp_index(k as u8);
                if let Some((mono, s)) = crate::gvs::sort_word(space, &w) {
                    out.add_term(mono, c * &sign * qi(s as i64));
                }
            }
        }
        out
    }

    /// The action of an ambient basis letter on an element of `U(n)`.
    pub fn act(&self, g_letter: u8, u: &SymElem) -> Result<SymElem, Error> {
        if self.triple.is_comp(g_letter) {
            let n = self.comp_index(g_letter);
            self.ualg().star(&SymElem::letter(self.trunc, n), u)
        } else {
            let mut out = SymElem::zero(self.trunc);
            for (m, c) in &u.terms {
                out = out.add(&self.derivation(g_letter, m).scale(c));
            }
            Ok(out)
        }
    }

    /// Acts by a normal-ordered element of `U(g)` (letters applied right to
    /// left, as a left module).
    pub fn act_env(&self, u: &EnvElem, target: &SymElem) -> Result<SymElem, Error> {
        let mut out = SymElem::zero(self.trunc);
        for (word, c) in &u.terms {
            let mut acc = target.clone();
            for &letter in word.iter().rev() {
                acc = self.act(letter, &acc)?;
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    /// Checks the module axiom
    /// `act(a, act(b, u)) - ± act(b, act(a, u)) = act([a,b], u)` on one
    /// component pair (complement/subalgebra selection for `a` and `b`),
    /// over all basis letters and all monomials up to the truncation that
    /// keeps every product exact. Returns a witness on failure.
    pub fn axiom_component(&self, a_in_comp: bool, b_in_comp: bool) -> Result<Verdict, Error> {
        let ambient = self.triple.ambient();
        let aspace = ambient.space();
        let letters = |in_comp: bool| -> Vec<u8> {
            if in_comp {
                self.triple.comp.clone()
            } else {
                self.triple.sub.clone()
            }
        };
        // star actions raise degree by one per complement letter involved
        let raise = (a_in_comp as usize) + (b_in_comp as usize);
        let max_deg = self.trunc.saturating_sub(raise);
        let monos = sym_monomials_up_to(self.induced.space(), max_deg);
        for &a in &letters(a_in_comp) {
            for &b in &letters(b_in_comp) {
                let sign = if aspace.odd(a) && aspace.odd(b) {
                    -Q::one()
                } else {
                    Q::one()
                };
                for m in &monos {
                    let u = SymElem::monomial(self.trunc, m.clone());
                    let lhs = self
                        .act(a, &self.act(b, &u)?)?
                        .sub(&self.act(b, &self.act(a, &u)?)?.scale(&sign));
                    // act([a, b], u), decomposed over the ambient basis
                    let br = ambient.bracket_basis(a, b);
                    let mut rhs = SymElem::zero(self.trunc);
                    for (k, c) in br.iter().enumerate() {
                        if !c.is_zero() {
                            rhs = rhs.add(&self.act(k as u8, &u)?.scale(c));
                        }
                    }
                    if lhs != rhs {
                        return Ok(Verdict::fail(vec![
                            self.triple.name_of(a),
                            self.triple.name_of(b),
                            m.display(self.induced.space()),
                        ]));
                    }
                }
            }
        }
        Ok(Verdict::pass())
    }

    /// All three componentwise module axioms; the returned list pairs each
    /// component label with its verdict.
    pub fn module_axioms(&self) -> Result<Vec<(String, Verdict)>, Error> {
        Ok(vec![
            ("n⊗n".to_string(), self.axiom_component(true, true)?),
            ("n⊗h".to_string(), self.axiom_component(true, false)?),
            ("h⊗h".to_string(), self.axiom_component(false, false)?),
        ])
    }

    /// The section `δ : U(n) ≅ S(n) -> U(g)`: a monomial of `S(n)` is
    /// symmetrized into ambient words in normal order.
    pub fn delta_section(&self, m: &Monomial) -> EnvElem {
        let ambient = self.triple.ambient();
        let ua = UAlg::new(ambient, self.trunc);
        let mut s = SymElem::zero(self.trunc);
        let ambient_word: Vec<u8> = m.0.iter().map(|&c| self.triple.comp[c as usize]).collect();
        if let Some((mono, sign)) = crate::gvs::sort_word(ambient.space(), &ambient_word) {
            s.add_term(mono, qi(sign as i64));
        }
        ua.symmetrize(&s)
    }

    /// Asserts that `U(n) -> U(g) -> U(n)` (section followed by acting on
    /// the unit) is the identity at this truncation, and that the kernel
    /// dimension bookkeeping
    /// `dim S^{<= p}(g) - dim S^{<= p}(n) = dim(h) · dim S^{<= p-1}(g)`
    /// holds for `2 <= p <= trunc`.
    pub fn delta_section_check(&self) -> Result<bool, Error> {
        let one = SymElem::one(self.trunc);
        for m in sym_monomials_up_to(self.induced.space(), self.trunc) {
            let env = self.delta_section(&m);
            let back = self.act_env(&env, &one)?;
            let expected = SymElem::monomial(self.trunc, m.clone());
            if back != expected {
                return Ok(false);
            }
        }
        let ambient_space = self.triple.ambient().space();
        let comp_space = self.induced.space();
        for p in 2..=self.trunc {
            let dim_g: usize = sym_monomials_up_to(ambient_space, p).len();
            let dim_n: usize = sym_monomials_up_to(comp_space, p).len();
            let dim_g_prev: usize = sym_monomials_up_to(ambient_space, p - 1).len();
            if dim_g - dim_n != self.triple.sub.len() * dim_g_prev {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of the subalgebra invariants of `S^{<= N}(n)`: the exact kernel
    /// of the stacked derivation actions.
    pub fn invariants(&self) -> Vec<SymElem> {
        let monos = sym_monomials_up_to(self.induced.space(), self.trunc);
        let mut stacked = QMat::zeros(0, monos.len());
        for &h in &self.triple.sub {
            let mut rows = QMat::zeros(monos.len(), monos.len());
            for (j, m) in monos.iter().enumerate() {
                let image = self.derivation(h, m);
                for (i, target) in monos.iter().enumerate() {
                    if let Some(c) = image.terms.get(target) {
                        rows.set(i, j, c.clone());
                    }
                }
            }
            stacked = stacked.vstack(&rows);
        }
        stacked
            .kernel()
            .into_iter()
            .map(|v| {
                let mut s = SymElem::zero(self.trunc);
                for (c, m) in v.into_iter().zip(monos.iter()) {
                    s.add_term(m.clone(), c);
                }
                s
            })
            .collect()
    }

    /// The endomorphism `f(P) = a ∘ (δ ⊗ P)` of `U(n)`: act by the section
    /// of `u` on `P`. The theorem identifies it with `u ↦ u ⋆ P`; both
    /// descriptions are compared here, then the anti-morphism law
    /// `f(P ⋆ Q) = f(Q) ∘ f(P)` is checked on invariant pairs. Products are
    /// only formed where they stay inside the truncation.
    pub fn antimorphism_check(&self) -> Result<bool, Error> {
        let ua = self.ualg();
        let invariants = self.invariants();
        for p in &invariants {
            let dp = p.max_degree();
            // f described through the module action equals right star
            // multiplication
            for m in sym_monomials_up_to(self.induced.space(), self.trunc - dp) {
                let u = SymElem::monomial(self.trunc, m.clone());
                let via_action = self.act_env(&self.delta_section(&m), p)?;
                let via_star = ua.star(&u, p)?;
                if via_action != via_star {
                    return Ok(false);
                }
            }
            for q in &invariants {
                let dq = q.max_degree();
                if dp + dq > self.trunc {
                    continue;
                }
                let pq = ua.star(p, q)?;
                for m in sym_monomials_up_to(
                    self.induced.space(),
                    self.trunc - dp - dq,
                ) {
                    let u = SymElem::monomial(self.trunc, m.clone());
                    // f(P ⋆ Q)(u) vs f(Q)(f(P)(u))
                    let lhs = ua.star(&u, &pq)?;
                    let rhs = ua.star(&ua.star(&u, p)?, q)?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}
