//! Finitely generated permutation groups with cached structure data.

use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::arith::{factor, lcm};
use crate::chain::StabilizerChain;
use crate::classes::ClassData;
use crate::error::{Error, Result};
use crate::perm::Permutation;

const CHAIN_TAG: u64 = 0xc4a1_1e5c_7a1a_0001;
const HINT_TAG: u64 = 0x9e37_79b9_7f4a_7c15;

/// A permutation group, immutable after construction. The stabilizer chain,
/// conjugacy classes and content hash are computed lazily and cached, so a
/// group can be shared freely between threads.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    name: Option<String>,
    chain: OnceLock<Arc<StabilizerChain>>,
    classes: OnceLock<Arc<ClassData>>,
    hash: OnceLock<[u8; 32]>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        let mut clean = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
            if !g.is_identity() && !clean.contains(&g) {
                clean.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            gens: clean,
            name: None,
            chain: OnceLock::new(),
            classes: OnceLock::new(),
            hash: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).unwrap()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Subgroup of the same symmetric group from the given generators.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> PermGroup {
        PermGroup::new(self.degree, gens).expect("subgroup generators share the degree")
    }

    /// SHA-256 over degree and generator images; the key for caches and
    /// deterministic seeding.
    pub fn content_hash(&self) -> &[u8; 32] {
        self.hash.get_or_init(|| {
            let mut h = Sha256::new();
            h.update((self.degree as u64).to_le_bytes());
            for g in &self.gens {
                for &img in g.images() {
                    h.update(img.to_le_bytes());
                }
            }
            h.finalize().into()
        })
    }

    pub fn hash_hex(&self) -> String {
        self.content_hash()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Deterministic per-group RNG; `tag` separates independent uses.
    pub fn seeded_rng(&self, tag: u64) -> ChaCha8Rng {
        let h = self.content_hash();
        let seed = u64::from_le_bytes(h[0..8].try_into().unwrap());
        ChaCha8Rng::seed_from_u64(seed ^ tag)
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain.get_or_init(|| {
            let mut rng = self.seeded_rng(CHAIN_TAG);
            Arc::new(StabilizerChain::build(self.degree, &self.gens, &[], &mut rng))
        })
    }

    pub(crate) fn set_chain(&self, chain: StabilizerChain) {
        let _ = self.chain.set(Arc::new(chain));
    }

    /// Fresh chain with a base bias; not cached.
    pub fn chain_with_hint(&self, hint: &[usize]) -> StabilizerChain {
        let mut rng = self.seeded_rng(HINT_TAG);
        StabilizerChain::build(self.degree, &self.gens, hint, &mut rng)
    }

    /// Chain with the exact base `order` (one level per point); gives exact
    /// pointwise prefix stabilizers.
    pub fn exact_base_chain(&self, order: &[usize]) -> StabilizerChain {
        StabilizerChain::build_with_exact_base(self.degree, &self.gens, order)
    }

    pub fn order(&self) -> u64 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Set equality as subgroups of the ambient symmetric group.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.gens.iter().all(|g| other.contains(g))
    }

    /// True iff every generator of `other` conjugates `self` into itself.
    pub fn is_normalized_by(&self, other: &PermGroup) -> bool {
        other
            .gens
            .iter()
            .all(|g| self.gens.iter().all(|h| self.contains(&h.conj(g))))
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        self.is_subgroup_of(ambient) && self.is_normalized_by(ambient)
    }

    pub fn elements(&self, limit: u64) -> Result<Vec<Permutation>> {
        self.chain().elements(limit)
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Permutation {
        self.chain().random_element(rng)
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                if a.then(b) != b.then(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Exponent of an abelian group: lcm of generator orders.
    pub fn abelian_exponent(&self) -> u64 {
        debug_assert!(self.is_abelian());
        self.gens.iter().fold(1u64, |acc, g| lcm(acc, g.order()))
    }

    pub fn is_cyclic(&self) -> bool {
        if self.gens.len() <= 1 {
            return true;
        }
        self.is_abelian() && self.abelian_exponent() == self.order()
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<Permutation> {
        if self.is_trivial() {
            return Some(self.identity());
        }
        if !self.is_cyclic() {
            return None;
        }
        let n = self.order();
        if let Some(g) = self.gens.iter().find(|g| g.order() == n) {
            return Some(g.clone());
        }
        // combine commuting generators pairwise into one of full order
        let mut acc = self.gens[0].clone();
        for g in &self.gens[1..] {
            acc = combine_commuting(&acc, g);
            if acc.order() == n {
                break;
            }
        }
        debug_assert_eq!(acc.order(), n);
        Some(acc)
    }

    /// Intersection by enumerating the smaller factor.
    pub fn intersection(&self, other: &PermGroup, limit: u64) -> Result<PermGroup> {
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let els = small.elements(limit)?;
        let gens: Vec<Permutation> = els
            .into_iter()
            .filter(|g| !g.is_identity() && big.contains(g))
            .collect();
        Ok(self.subgroup(gens))
    }

    pub(crate) fn classes_cache(&self) -> &OnceLock<Arc<ClassData>> {
        &self.classes
    }
}

/// For commuting `a`, `b` returns an element of order lcm(|a|, |b|).
fn combine_commuting(a: &Permutation, b: &Permutation) -> Permutation {
    let oa = a.order();
    let ob = b.order();
    let l = lcm(oa, ob);
    // split l = la * lb with la | oa, lb | ob, gcd(la, lb) = 1
    let mut la = 1u64;
    let mut lb = 1u64;
    for (p, e) in factor(l) {
        let pe = p.pow(e);
        if oa % pe == 0 {
            la *= pe;
        } else {
            lb *= pe;
        }
    }
    let x = a.pow((oa / la) as i64);
    let y = b.pow((ob / lb) as i64);
    let out = x.then(&y);
    debug_assert_eq!(out.order(), l);
    out
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, gens={}, name={:?})",
            self.degree,
            self.gens.len(),
            self.name
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn grp(gens: &[&str], degree: usize) -> PermGroup {
        let gens = gens
            .iter()
            .map(|s| parse_cycles(s, degree).unwrap())
            .collect();
        PermGroup::new(degree, gens).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(grp(&["(1,2)", "(1,2,3,4)"], 4).order(), 24);
        assert_eq!(grp(&["(1,2,3)", "(3,4,5)"], 5).order(), 60);
        assert_eq!(PermGroup::trivial(3).order(), 1);
    }

    #[test]
    fn cyclic_detection() {
        let c6 = grp(&["(1,2,3,4,5,6)"], 6);
        assert!(c6.is_cyclic());
        // C6 generated redundantly by an order-2 and an order-3 element
        let c6b = grp(&["(1,4)(2,5)(3,6)", "(1,3,5)(2,4,6)"], 6);
        assert!(c6b.is_cyclic());
        assert_eq!(c6b.cyclic_generator().unwrap().order(), 6);
        assert!(!grp(&["(1,2)", "(1,2,3)"], 3).is_cyclic());
    }

    #[test]
    fn hash_stability() {
        let a = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let b = grp(&["(1,2)", "(1,2,3,4)"], 4);
        assert_eq!(a.hash_hex(), b.hash_hex());
        let c = grp(&["(1,2,3,4)", "(1,2)"], 4);
        assert_ne!(a.hash_hex(), c.hash_hex()); // generator order matters
    }

    #[test]
    fn intersection_of_subgroups() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let d8 = grp(&["(1,2,3,4)", "(1,3)"], 4);
        let meet = a4.intersection(&d8, 1000).unwrap();
        assert_eq!(meet.order(), 4); // V4
        assert!(meet.is_subgroup_of(&s4));
    }
}
