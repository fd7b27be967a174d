//! Brute-force structure of a small finite group: element enumeration,
//! conjugacy classes, centralizers, subgroup closure and the derived subgroup.
//!
//! Everything goes through a [`GroupTable`], a full Cayley table whose
//! element indices follow the lexicographic order of exponent vectors
//! (`g1` most significant), so "least index" and "lexicographically least"
//! coincide.

use std::collections::BTreeSet;

use crate::engine::{self, GroupElement};
use crate::presentation::PcPresentation;

/// An ordered set of elements, lexicographic by exponent vector.
pub type ElementSet = BTreeSet<GroupElement>;

/// Largest group the table will build (its size is quadratic in this).
pub const MAX_TABLE_ORDER: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct GroupTable {
    orders: Vec<u32>,
    elements: Vec<GroupElement>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl GroupTable {
    /// Panics if the group has more than [`MAX_TABLE_ORDER`] elements.
    pub fn new(p: &PcPresentation) -> Self {
        let size = p
            .group_order()
            .filter(|&s| s <= MAX_TABLE_ORDER)
            .expect("group is too large to tabulate") as usize;
        let orders = p.orders().to_vec();
        let elements: Vec<GroupElement> = (0..size).map(|x| decode(&orders, x)).collect();

        // Right multiplication by each generator, then every product as a
        // walk along the normal word of the right factor.
        let n = orders.len();
        let mut by_gen = vec![0u32; size * n];
        for (x, g) in elements.iter().enumerate() {
            for k in 0..n {
                let y = engine::multiply(p, g, &GroupElement::generator(n, k));
                by_gen[x * n + k] = encode(&orders, y.exponents()) as u32;
            }
        }
        let mut mul = vec![0u32; size * size];
        for x in 0..size {
            for (y, h) in elements.iter().enumerate() {
                let mut z = x as u32;
                for (k, &e) in h.exponents().iter().enumerate() {
                    for _ in 0..e {
                        z = by_gen[z as usize * n + k];
                    }
                }
                mul[x * size + y] = z;
            }
        }
        let mut inv = vec![0u32; size];
        for x in 0..size {
            let y = (0..size)
                .find(|&y| mul[x * size + y] == 0)
                .expect("every element has an inverse");
            inv[x] = y as u32;
        }
        GroupTable {
            orders,
            elements,
            mul,
            inv,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, x: usize) -> &GroupElement {
        &self.elements[x]
    }

    /// Index of `g`. Panics if `g` has the wrong length or is not normal.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        assert_eq!(
            g.exponents().len(),
            self.orders.len(),
            "element of a different group"
        );
        encode(&self.orders, g.exponents())
    }

    /// Index of the `k`-th generator (0-based).
    pub fn generator(&self, k: usize) -> usize {
        self.index_of(&GroupElement::generator(self.orders.len(), k))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order() + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// `y⁻¹ x y`
    pub fn conjugate(&self, x: usize, y: usize) -> usize {
        self.mul(self.inv(y), self.mul(x, y))
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.orders.len();
        (0..n).all(|a| (0..a).all(|b| self.commute(self.generator(a), self.generator(b))))
    }

    /// The centralizer of `x`, in increasing index order.
    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order()).filter(|&y| self.commute(x, y)).collect()
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push(y);
                }
            }
        }
        mask
    }

    /// The subgroup generated by `gens`, in increasing index order.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        mask_to_vec(&self.closure_mask(gens))
    }

    /// Conjugacy classes in order of their representatives; each class is
    /// sorted and its first member is the representative.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let size = self.order();
        let mut seen = vec![false; size];
        let mut classes = Vec::new();
        for x in 0..size {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..size).map(|y| self.conjugate(x, y)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Greedy generating list of the centralizer of `x`: walk it in index
    /// order and keep every element not yet in the closure of those kept.
    pub fn centralizer_generators(&self, x: usize) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut mask = self.closure_mask(&gens);
        for y in self.centralizer(x) {
            if !mask[y] {
                gens.push(y);
                mask = self.closure_mask(&gens);
            }
        }
        gens
    }

    /// The subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let size = self.order();
        let mut comms = vec![false; size];
        for x in 0..size {
            for y in 0..x {
                comms[self.commutator(x, y)] = true;
            }
        }
        self.closure(&mask_to_vec(&comms))
    }

    pub fn to_set(&self, xs: &[usize]) -> ElementSet {
        xs.iter().map(|&x| self.elements[x].clone()).collect()
    }
}

fn decode(orders: &[u32], mut x: usize) -> GroupElement {
    let mut exps = vec![0u32; orders.len()];
    for (e, &o) in exps.iter_mut().zip(orders).rev() {
        *e = (x % o as usize) as u32;
        x /= o as usize;
    }
    GroupElement::from_exponents(exps)
}

fn encode(orders: &[u32], exps: &[u32]) -> usize {
    exps.iter().zip(orders).fold(0, |acc, (&e, &o)| {
        assert!(e < o, "exponent {e} out of range for relative order {o}");
        acc * o as usize + e as usize
    })
}

fn mask_to_vec(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: ElementSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub classes: Vec<ConjugacyClass>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &GroupElement> {
        self.classes.iter().map(|c| &c.representative)
    }
}

/// All elements in lexicographic order.
pub fn enumerate_elements(p: &PcPresentation) -> ElementSet {
    let orders = p.orders();
    (0..p.group_order().expect("group order fits in u64") as usize)
        .map(|x| decode(orders, x))
        .collect()
}

pub fn conjugacy_classes(p: &PcPresentation) -> ConjugacyClasses {
    let t = GroupTable::new(p);
    let classes = t
        .classes()
        .into_iter()
        .map(|c| ConjugacyClass {
            representative: t.element(c[0]).clone(),
            members: t.to_set(&c),
        })
        .collect();
    ConjugacyClasses { classes }
}

pub fn centralizer_generators(p: &PcPresentation, g: &GroupElement) -> Vec<GroupElement> {
    let t = GroupTable::new(p);
    t.centralizer_generators(t.index_of(g))
        .into_iter()
        .map(|x| t.element(x).clone())
        .collect()
}

pub fn subgroup_closure(p: &PcPresentation, gens: &[GroupElement]) -> ElementSet {
    let t = GroupTable::new(p);
    let idx: Vec<usize> = gens.iter().map(|g| t.index_of(g)).collect();
    t.to_set(&t.closure(&idx))
}

pub fn derived_subgroup(p: &PcPresentation) -> ElementSet {
    let t = GroupTable::new(p);
    t.to_set(&t.derived_subgroup())
}
