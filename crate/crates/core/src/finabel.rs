//! Finite abelian groups as explicit products of cyclic groups.
//!
//! A group is a list of cyclic orders `n_i >= 2`; an element is a tuple of
//! residues, one per factor. The trivial group is the empty product. Every
//! element also has a dense integer id (mixed-radix encoding), which is what
//! subgroups, graduations and product tables index.

use crate::error::{Error, Result};
use crate::set::ElemSet;

/// A finite abelian group `Z_{n_1} x .. x Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    cyclic_orders: Vec<u64>,
    element_count: usize,
}

/// An element as a tuple of residues, componentwise reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub residues: Vec<u64>,
}

/// A subgroup, stored as the bitset of its member ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub member_set: ElemSet,
}

impl FiniteAbelianGroup {
    pub fn new(cyclic_orders: Vec<u64>) -> Result<Self> {
        if cyclic_orders.iter().any(|&n| n < 2) {
            return Err(Error::Structural(format!(
                "cyclic factor orders must be >= 2, got {cyclic_orders:?}"
            )));
        }
        let element_count = cyclic_orders.iter().product::<u64>() as usize;
        Ok(FiniteAbelianGroup {
            cyclic_orders,
            element_count,
        })
    }

    /// The trivial group (empty product).
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            cyclic_orders: Vec::new(),
            element_count: 1,
        }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.cyclic_orders.len()],
        }
    }

    pub fn zero_id(&self) -> usize {
        0
    }

    fn check_element(&self, x: &GroupElement) -> Result<()> {
        if x.residues.len() != self.cyclic_orders.len() {
            return Err(Error::Structural(format!(
                "element has {} components, group has {} factors",
                x.residues.len(),
                self.cyclic_orders.len()
            )));
        }
        Ok(())
    }

    /// Mixed-radix id of an element: `r_0 + n_0*(r_1 + n_1*(...))`.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        let mut id = 0usize;
        for (r, n) in x.residues.iter().zip(&self.cyclic_orders).rev() {
            id = id * *n as usize + (*r % *n) as usize;
        }
        id
    }

    pub fn element(&self, mut id: usize) -> GroupElement {
        let mut residues = Vec::with_capacity(self.cyclic_orders.len());
        for &n in &self.cyclic_orders {
            residues.push((id % n as usize) as u64);
            id /= n as usize;
        }
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.element_count).map(|id| self.element(id))
    }

    /// Componentwise sum modulo the factor orders.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(GroupElement {
            residues: x
                .residues
                .iter()
                .zip(&y.residues)
                .zip(&self.cyclic_orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        Ok(GroupElement {
            residues: x
                .residues
                .iter()
                .zip(&self.cyclic_orders)
                .map(|(a, n)| (n - a % n) % n)
                .collect(),
        })
    }

    pub fn add_ids(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.element(x), self.element(y));
        self.index_of(&self.add(&a, &b).expect("ids are valid"))
    }

    pub fn neg_id(&self, x: usize) -> usize {
        let a = self.element(x);
        self.index_of(&self.neg(&a).expect("ids are valid"))
    }

    /// Integer multiple `k * x`.
    pub fn scale_id(&self, k: i64, x: usize) -> usize {
        let e = self.element(x);
        let residues = e
            .residues
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(r, n)| {
                let n = *n as i64;
                (((*r as i64 * k) % n + n) % n) as u64
            })
            .collect();
        self.index_of(&GroupElement { residues })
    }

    pub fn order_of_id(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1usize;
        while acc != 0 {
            acc = self.add_ids(acc, x);
            k += 1;
        }
        k
    }

    pub fn label(&self, id: usize) -> String {
        let e = self.element(id);
        format!(
            "({})",
            e.residues
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }

    /// Smallest subgroup containing `gens`; empty `gens` gives `{0}`.
    pub fn subgroup_generate(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        for g in gens {
            self.check_element(g)?;
        }
        let ids: Vec<usize> = gens.iter().map(|g| self.index_of(g)).collect();
        Ok(Subgroup {
            member_set: closure_under_addition(self.element_count, &ids, |a, b| {
                self.add_ids(a, b)
            }),
        })
    }

    pub fn subgroup_from_ids(&self, ids: &[usize]) -> Subgroup {
        Subgroup {
            member_set: closure_under_addition(self.element_count, ids, |a, b| self.add_ids(a, b)),
        }
    }

    /// Every subgroup exactly once, canonically ordered.
    pub fn enumerate_subgroups(&self, max_group_size: usize) -> Result<Vec<Subgroup>> {
        if self.element_count > max_group_size {
            return Err(Error::Resource(format!(
                "subgroup enumeration over {} elements exceeds bound {}",
                self.element_count, max_group_size
            )));
        }
        let sets = enumerate_subgroups_cayley(self.element_count, |a, b| self.add_ids(a, b));
        Ok(sets.into_iter().map(|member_set| Subgroup { member_set }).collect())
    }

    /// True iff the parts' orders multiply to the group order and the sum
    /// map from the product of the parts is injective.
    pub fn is_internal_direct_sum(&self, parts: &[Subgroup]) -> bool {
        let prod: usize = parts.iter().map(|p| p.member_set.len()).product();
        if prod != self.element_count {
            return false;
        }
        // Walk the product of the parts, accumulating sums; a repeat kills
        // injectivity.
        let mut seen = ElemSet::empty(self.element_count);
        let part_elems: Vec<Vec<usize>> = parts.iter().map(|p| p.member_set.to_vec()).collect();
        let mut idx = vec![0usize; parts.len()];
        loop {
            let mut sum = 0usize;
            for (pi, &ei) in idx.iter().enumerate() {
                sum = self.add_ids(sum, part_elems[pi][ei]);
            }
            if !seen.insert(sum) {
                return false;
            }
            // Next tuple.
            let mut carry = true;
            for (pi, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < part_elems[pi].len() {
                    carry = false;
                    break;
                }
                *i = 0;
            }
            if carry {
                break;
            }
        }
        true
    }
}

impl Subgroup {
    pub fn len(&self) -> usize {
        self.member_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_set.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.member_set.contains(id)
    }

    pub fn is_trivial(&self) -> bool {
        self.member_set.len() == 1
    }
}

/// Closure of a seed set (plus 0) under a Cayley addition. In a finite
/// group, addition closure already yields negatives.
pub fn closure_under_addition<F: Fn(usize, usize) -> usize>(
    n: usize,
    seeds: &[usize],
    add: F,
) -> ElemSet {
    let mut set = ElemSet::singleton(n, 0);
    let mut frontier: Vec<usize> = Vec::new();
    for &s in seeds {
        if set.insert(s) {
            frontier.push(s);
        }
    }
    while let Some(x) = frontier.pop() {
        for y in set.clone().iter() {
            let z = add(x, y);
            if set.insert(z) {
                frontier.push(z);
            }
        }
    }
    set
}

/// All subgroups of a group given by a Cayley addition on ids `0..n`
/// (0 the neutral element), canonically sorted.
pub fn enumerate_subgroups_cayley<F: Fn(usize, usize) -> usize + Copy>(
    n: usize,
    add: F,
) -> Vec<ElemSet> {
    use std::collections::BTreeSet;
    let trivial = ElemSet::singleton(n, 0);
    let mut all: BTreeSet<ElemSet> = BTreeSet::new();
    all.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(s) = frontier.pop() {
        for x in 1..n {
            if s.contains(x) {
                continue;
            }
            let mut seeds = s.to_vec();
            seeds.push(x);
            let bigger = closure_under_addition(n, &seeds, add);
            if all.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(rs: &[u64]) -> GroupElement {
        GroupElement {
            residues: rs.to_vec(),
        }
    }

    #[test]
    fn add_wraps_in_z4() {
        let z4 = FiniteAbelianGroup::new(vec![4]).unwrap();
        assert_eq!(z4.add(&el(&[1]), &el(&[3])).unwrap(), el(&[0]));
        assert_eq!(z4.add(&el(&[2]), &el(&[0])).unwrap(), el(&[2]));
    }

    #[test]
    fn add_componentwise_in_v4() {
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(v4.add(&el(&[1, 0]), &el(&[0, 1])).unwrap(), el(&[1, 1]));
    }

    #[test]
    fn add_rejects_dimension_mismatch() {
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        assert!(v4.add(&el(&[1]), &el(&[0, 1])).is_err());
    }

    #[test]
    fn generate_subgroups() {
        let z4 = FiniteAbelianGroup::new(vec![4]).unwrap();
        let s = z4.subgroup_generate(&[el(&[2])]).unwrap();
        assert_eq!(s.member_set.to_vec(), vec![0, z4.index_of(&el(&[2]))]);

        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let t = v4.subgroup_generate(&[]).unwrap();
        assert_eq!(t.len(), 1);
        let whole = v4.subgroup_generate(&[el(&[1, 0]), el(&[0, 1])]).unwrap();
        assert_eq!(whole.len(), 4);
    }

    #[test]
    fn generate_is_idempotent() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        for sub in g.enumerate_subgroups(64).unwrap() {
            let members: Vec<GroupElement> =
                sub.member_set.iter().map(|id| g.element(id)).collect();
            let again = g.subgroup_generate(&members).unwrap();
            assert_eq!(again, sub);
        }
    }

    #[test]
    fn subgroup_counts() {
        let z2 = FiniteAbelianGroup::new(vec![2]).unwrap();
        assert_eq!(z2.enumerate_subgroups(64).unwrap().len(), 2);
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(v4.enumerate_subgroups(64).unwrap().len(), 5);
        let z4 = FiniteAbelianGroup::new(vec![4]).unwrap();
        assert_eq!(z4.enumerate_subgroups(64).unwrap().len(), 3);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let g = FiniteAbelianGroup::new(vec![2, 2, 2, 2, 2, 2, 2]).unwrap();
        assert!(matches!(
            g.enumerate_subgroups(64),
            Err(crate::error::Error::Resource(_))
        ));
    }

    /// Brute-force oracle: every subset containing 0 that is closed under
    /// addition and negation.
    fn subgroups_brute(g: &FiniteAbelianGroup) -> Vec<ElemSet> {
        let n = g.element_count();
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let set = ElemSet::from_iter(n, (0..n).filter(|i| mask >> i & 1 == 1));
            let closed = set.iter().all(|x| {
                set.contains(g.neg_id(x)) && set.iter().all(|y| set.contains(g.add_ids(x, y)))
            });
            if closed {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force_up_to_16() {
        for orders in [
            vec![2u64],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![6],
            vec![2, 4],
            vec![2, 2, 2],
            vec![3, 3],
            vec![12],
            vec![2, 8],
            vec![16],
            vec![2, 2, 4],
        ] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            if g.element_count() > 16 {
                continue;
            }
            let fast: Vec<ElemSet> = g
                .enumerate_subgroups(64)
                .unwrap()
                .into_iter()
                .map(|s| s.member_set)
                .collect();
            assert_eq!(fast, subgroups_brute(&g), "group {:?}", g.cyclic_orders());
        }
    }

    #[test]
    fn direct_sum_detection() {
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let a = v4.subgroup_generate(&[el(&[1, 0])]).unwrap();
        let b = v4.subgroup_generate(&[el(&[0, 1])]).unwrap();
        assert!(v4.is_internal_direct_sum(&[a.clone(), b]));
        assert!(!v4.is_internal_direct_sum(&[a.clone(), a.clone()]));

        let z4 = FiniteAbelianGroup::new(vec![4]).unwrap();
        let half = z4.subgroup_generate(&[el(&[2])]).unwrap();
        assert!(!z4.is_internal_direct_sum(&[half.clone(), half]));

        // Whole group alone, and {0} + whole group.
        let whole = v4.subgroup_generate(&[el(&[1, 0]), el(&[0, 1])]).unwrap();
        let zero = v4.subgroup_generate(&[]).unwrap();
        assert!(v4.is_internal_direct_sum(&[whole.clone()]));
        assert!(v4.is_internal_direct_sum(&[zero, whole]));
    }

    #[test]
    fn trivial_group() {
        let t = FiniteAbelianGroup::trivial();
        assert_eq!(t.element_count(), 1);
        assert!(t.is_internal_direct_sum(&[]));
        assert_eq!(t.enumerate_subgroups(64).unwrap().len(), 1);
    }
}
