//! Batch entry points for the data-parallel inner loops: multiplication
//! tables over all monomial pairs and structure-coefficient columns over all
//! basis words.
//!
//! With the default `parallel` feature the plain functions fan out over
//! rayon; without it they fall back to sequential iteration. The `*_seq`
//! variants are always sequential, so benchmarks can compare both paths in
//! one build.

use crate::error::Error;
use crate::gvs::{sym_monomials_up_to, Monomial};
use crate::liealg::LieAlg;
use crate::ualg::{SymElem, UAlg};

/// Maps a function over items, in parallel when the `parallel` feature is
/// enabled.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|t| f(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`par_map`].
pub fn par_map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// One row of a star multiplication table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub left: Monomial,
    pub right: Monomial,
    pub product: SymElem,
}

fn table_pairs(alg: &LieAlg, trunc: usize) -> Vec<(Monomial, Monomial)> {
    let monos = sym_monomials_up_to(alg.space(), trunc);
    let mut pairs = Vec::new();
    for m1 in &monos {
        for m2 in &monos {
            if m1.degree() + m2.degree() <= trunc {
                pairs.push((m1.clone(), m2.clone()));
            }
        }
    }
    pairs
}

/// Star products of every monomial pair within the truncation.
pub fn star_table(alg: &LieAlg, trunc: usize) -> Result<Vec<TableRow>, Error> {
    let ua = UAlg::new(alg, trunc);
    let rows = par_map(table_pairs(alg, trunc), |(m1, m2)| {
        ua.star_monomials(m1, m2).map(|product| TableRow {
            left: m1.clone(),
            right: m2.clone(),
            product,
        })
    });
    rows.into_iter().collect()
}

/// Sequential twin of [`star_table`].
pub fn star_table_seq(alg: &LieAlg, trunc: usize) -> Result<Vec<TableRow>, Error> {
    let ua = UAlg::new(alg, trunc);
    let rows = par_map_seq(table_pairs(alg, trunc), |(m1, m2)| {
        ua.star_monomials(m1, m2).map(|product| TableRow {
            left: m1.clone(),
            right: m2.clone(),
            product,
        })
    });
    rows.into_iter().collect()
}

/// The same table through the PBW oracle instead of the multibrace product.
pub fn pbw_table(alg: &LieAlg, trunc: usize) -> Result<Vec<TableRow>, Error> {
    let ua = UAlg::new(alg, trunc);
    let rows = par_map(table_pairs(alg, trunc), |(m1, m2)| {
        ua.pbw_multiply(
            &SymElem::monomial(trunc, m1.clone()),
            &SymElem::monomial(trunc, m2.clone()),
        )
        .map(|product| TableRow {
            left: m1.clone(),
            right: m2.clone(),
            product,
        })
    });
    rows.into_iter().collect()
}

/// Columns of the iterated star product over all basis words of length `p`,
/// fanned out per word.
pub fn delta_columns(alg: &LieAlg, p: usize, trunc: usize) -> Result<Vec<SymElem>, Error> {
    let ua = UAlg::new(alg, trunc);
    let words = crate::gvs::all_words(alg.dim(), p);
    par_map(words, |w| ua.delta_word(w)).into_iter().collect()
}

/// Sequential twin of [`delta_columns`].
pub fn delta_columns_seq(alg: &LieAlg, p: usize, trunc: usize) -> Result<Vec<SymElem>, Error> {
    let ua = UAlg::new(alg, trunc);
    let words = crate::gvs::all_words(alg.dim(), p);
    par_map_seq(words, |w| ua.delta_word(w))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::fixtures::*;

    #[test]
    fn parallel_and_sequential_tables_agree() {
        for alg in [sl2(), super_odd()] {
            let par = star_table(&alg, 3).unwrap();
            let seq = star_table_seq(&alg, 3).unwrap();
            assert_eq!(par.len(), seq.len());
            for (a, b) in par.iter().zip(seq.iter()) {
                assert_eq!(a.left, b.left);
                assert_eq!(a.right, b.right);
                assert_eq!(a.product, b.product);
            }
        }
    }

    #[test]
    fn delta_columns_agree_across_modes() {
        let alg = h3();
        assert_eq!(
            delta_columns(&alg, 3, 3).unwrap(),
            delta_columns_seq(&alg, 3, 3).unwrap()
        );
    }

    #[test]
    fn tables_match_both_products() {
        let alg = a2();
        let star = star_table(&alg, 3).unwrap();
        let pbw = pbw_table(&alg, 3).unwrap();
        for (a, b) in star.iter().zip(pbw.iter()) {
            assert_eq!(a.product, b.product);
        }
    }
}
