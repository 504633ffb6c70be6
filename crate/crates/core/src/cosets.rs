//! `q`-ary cyclotomic cosets of `{0, …, q^t - 2}` and the dimension formula
//! for the space of dual codewords that lets a repair skip helpers.
//!
//! A coset is an orbit of `e ↦ e·q mod (q^t - 1)`. A `B`-valued polynomial on
//! `F` has its exponents closed under this map, so which cosets survive the
//! degree and coefficient constraints for a given `k` decides
//! `dim(W_k) = Σ |C|` over the surviving cosets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coset {
    rep: u64,
    elements: Vec<u64>,
}

impl Coset {
    /// Smallest element of the coset.
    pub fn rep(&self) -> u64 {
        self.rep
    }

    /// Elements in orbit order: `rep, rep·q, rep·q², …` (mod `q^t - 1`).
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn max(&self) -> u64 {
        *self.elements.iter().max().expect("cosets are nonempty")
    }

    pub fn contains(&self, e: u64) -> bool {
        self.elements.contains(&e)
    }

    /// Elements in ascending order.
    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

/// The partition of `{0, …, q^t - 2}` into cyclotomic cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCollection {
    q: u64,
    t: u32,
    cosets: Vec<Coset>,
    by_element: Vec<usize>,
}

/// Cosets kept (`Ξ*_k`) and dropped (`ρ_k`) for a given `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCosets {
    k: usize,
    q: u64,
    t: u32,
    selected: Vec<Coset>,
    removed: Vec<Coset>,
    d: usize,
}

pub fn enumerate_cosets(q: u64, t: u32) -> CosetCollection {
    assert!(q >= 2 && t >= 1, "enumerate_cosets needs q >= 2 and t >= 1");
    let modulus = q.pow(t) - 1;
    let mut by_element = vec![usize::MAX; modulus as usize];
    let mut cosets = Vec::new();
    for rep in 0..modulus {
        if by_element[rep as usize] != usize::MAX {
            continue;
        }
        let mut elements = vec![rep];
        let mut e = rep * q % modulus;
        while e != rep {
            elements.push(e);
            e = e * q % modulus;
        }
        for &x in &elements {
            by_element[x as usize] = cosets.len();
        }
        cosets.push(Coset { rep, elements });
    }
    CosetCollection {
        q,
        t,
        cosets,
        by_element,
    }
}

impl CosetCollection {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `q^t - 1`, the modulus of the exponent arithmetic.
    pub fn modulus(&self) -> u64 {
        self.by_element.len() as u64
    }

    /// All cosets, ordered by representative.
    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Index of the coset containing `e`.
    pub fn coset_of(&self, e: u64) -> Option<usize> {
        self.by_element.get(e as usize).copied()
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let max = self.by_element.len();
        if k == 0 || k > max {
            return Err(Error::KOutOfRange { k, max });
        }
        Ok(())
    }

    /// Splits the cosets into those that survive for dimension `k` and those
    /// that do not.
    ///
    /// The coset containing 1 is always dropped. For `k >= 2` the coset `{0}`
    /// is dropped too, as is any coset with an element above `q^t - k`.
    pub fn filter(&self, k: usize) -> Result<FilteredCosets> {
        self.check_k(k)?;
        let bound = self.q.pow(self.t) - k as u64;
        let (selected, removed): (Vec<Coset>, Vec<Coset>) =
            self.cosets.iter().cloned().partition(|c| {
                if c.contains(1) {
                    return false;
                }
                k == 1 || (c.rep != 0 && c.max() <= bound)
            });
        let d = selected.iter().map(Coset::size).sum();
        Ok(FilteredCosets {
            k,
            q: self.q,
            t: self.t,
            selected,
            removed,
            d,
        })
    }

    /// `dim(W_k)`: the total size of the surviving cosets.
    pub fn dim_w(&self, k: usize) -> Result<usize> {
        Ok(self.filter(k)?.d)
    }
}

impl FilteredCosets {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn selected(&self) -> &[Coset] {
        &self.selected
    }

    pub fn removed(&self) -> &[Coset] {
        &self.removed
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_sets(cosets: &[Coset]) -> Vec<Vec<u64>> {
        cosets.iter().map(Coset::sorted).collect()
    }

    #[test]
    fn small_collections() {
        assert_eq!(
            sorted_sets(enumerate_cosets(3, 2).cosets()),
            vec![vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]
        );
        assert_eq!(
            sorted_sets(enumerate_cosets(2, 2).cosets()),
            vec![vec![0], vec![1, 2]]
        );
        let c = enumerate_cosets(2, 3);
        assert_eq!(c.cosets()[2].elements(), &[3, 6, 5]);
        assert_eq!(
            sorted_sets(c.cosets()),
            vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]
        );
    }

    #[test]
    fn filter_gf9() {
        let cc = enumerate_cosets(3, 2);
        let f3 = cc.filter(3).unwrap();
        assert_eq!(sorted_sets(f3.selected()), vec![vec![2, 6], vec![4]]);
        assert_eq!(f3.d(), 3);
        let f1 = cc.filter(1).unwrap();
        assert_eq!(
            sorted_sets(f1.selected()),
            vec![vec![0], vec![2, 6], vec![4], vec![5, 7]]
        );
        assert_eq!(f1.d(), 6);
        assert_eq!(sorted_sets(f1.removed()), vec![vec![1, 3]]);
    }

    #[test]
    fn filter_gf4_k2_is_empty() {
        let f = enumerate_cosets(2, 2).filter(2).unwrap();
        assert!(f.selected().is_empty());
        assert_eq!(f.d(), 0);
    }

    #[test]
    fn gf64_over_gf8() {
        let cc = enumerate_cosets(8, 2);
        assert_eq!(cc.dim_w(56).unwrap(), 0);
        assert_eq!(cc.dim_w(1).unwrap(), 61);
    }

    #[test]
    fn k_range() {
        let cc = enumerate_cosets(3, 2);
        assert_eq!(cc.dim_w(0), Err(Error::KOutOfRange { k: 0, max: 8 }));
        assert_eq!(cc.dim_w(9), Err(Error::KOutOfRange { k: 9, max: 8 }));
        assert_eq!(cc.dim_w(8).unwrap(), 0);
    }

    #[test]
    fn degenerate_t1() {
        let cc = enumerate_cosets(5, 1);
        // modulus 4, q ≡ 1: every element is its own coset
        assert_eq!(cc.len(), 4);
        assert!(cc.cosets().iter().all(|c| c.size() == 1));
    }
}
