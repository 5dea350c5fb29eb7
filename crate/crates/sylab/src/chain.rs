//! Stabilizer chains (base and strong generating set).
//!
//! Construction runs a randomized Schreier–Sims pass to seed strong
//! generators cheaply, then a deterministic verification sweep that checks
//! every Schreier generator and repairs the chain until the defining
//! conditions hold. The result is exact regardless of the random phase.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

struct Level {
    base_point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some(Permutation::identity(degree));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
        }
    }

    /// Recomputes the basic orbit and transversal by BFS over `gens`.
    fn recompute_orbit(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal = vec![None; degree];
        self.orbit.push(self.base_point);
        self.transversal[self.base_point] = Some(Permutation::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let pt = self.orbit[head];
            head += 1;
            let u = self.transversal[pt].clone().unwrap();
            for s in &self.gens {
                let q = s.apply(pt);
                if self.transversal[q].is_none() {
                    self.transversal[q] = Some(u.then(s));
                    self.orbit.push(q);
                }
            }
        }
    }
}

pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds a verified chain. `hint` biases base-point selection (first
    /// hint point moved wins); remaining picks follow the default rule:
    /// points of largest generator support first, ties by smallest point.
    pub fn build(degree: usize, gens: &[Permutation], hint: &[usize], rng: &mut ChaCha8Rng) -> Self {
        let mut priority: Vec<usize> = Vec::with_capacity(degree);
        let mut in_hint = vec![false; degree];
        for &h in hint {
            if h < degree && !in_hint[h] {
                in_hint[h] = true;
                priority.push(h);
            }
        }
        let mut support = vec![0usize; degree];
        for g in gens {
            for p in 0..degree {
                if g.moves(p) {
                    support[p] += 1;
                }
            }
        }
        let mut rest: Vec<usize> = (0..degree).filter(|&p| !in_hint[p]).collect();
        rest.sort_by_key(|&p| (usize::MAX - support[p], p));
        priority.extend(rest);

        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        chain.construct(gens, &priority, Some(rng));
        chain
    }

    /// Builds a chain whose base is exactly `base_order` (every point gets a
    /// level, trivial ones included), so the generators at level `i` are the
    /// pointwise stabilizer of the first `i` points of `base_order`.
    pub fn build_with_exact_base(degree: usize, gens: &[Permutation], base_order: &[usize]) -> Self {
        debug_assert_eq!(base_order.len(), degree);
        let mut chain = StabilizerChain {
            degree,
            levels: base_order.iter().map(|&p| Level::new(degree, p)).collect(),
        };
        chain.construct(gens, base_order, None);
        chain
    }

    fn construct(&mut self, gens: &[Permutation], priority: &[usize], rng: Option<&mut ChaCha8Rng>) {
        for g in gens {
            debug_assert_eq!(g.degree(), self.degree);
            self.insert(g.clone(), priority);
        }
        if let Some(rng) = rng {
            self.random_phase(gens, priority, rng);
        }
        self.complete(priority);
    }

    /// Seeds strong generators by sifting pseudo-random subproducts.
    fn random_phase(&mut self, gens: &[Permutation], priority: &[usize], rng: &mut ChaCha8Rng) {
        if gens.is_empty() {
            return;
        }
        let mut pool: Vec<Permutation> = gens.to_vec();
        while pool.len() < 8 {
            let extra = pool[rng.gen_range(0..pool.len())].clone();
            pool.push(extra);
        }
        let mut acc = Permutation::identity(self.degree);
        for _ in 0..24 {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            let prod = pool[i].then(&pool[j]);
            pool[i] = prod.clone();
            acc = acc.then(&prod);
            self.insert(acc.clone(), priority);
        }
    }

    /// Sifts `g` as deep as possible and records the residue as a strong
    /// generator at its stop level. Extends the base when the residue fixes
    /// every existing base point.
    fn insert(&mut self, g: Permutation, priority: &[usize]) -> bool {
        let (residue, stop) = self.sift_from(0, g);
        if residue.is_identity() {
            return false;
        }
        if stop == self.levels.len() {
            let pt = priority
                .iter()
                .copied()
                .find(|&p| residue.moves(p))
                .expect("non-identity residue moves some point");
            self.levels.push(Level::new(self.degree, pt));
        }
        for lev in 0..=stop {
            self.levels[lev].gens.push(residue.clone());
            self.levels[lev].recompute_orbit(self.degree);
        }
        true
    }

    /// Deterministic verification sweep: every Schreier generator of every
    /// level must sift to the identity through the deeper levels. Failures
    /// are inserted and the sweep resumes from the affected level.
    fn complete(&mut self, priority: &[usize]) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.check_level(i as usize) {
                None => i -= 1,
                Some(residue) => {
                    let had = self.levels.len();
                    let (r, stop) = self.sift_from(0, residue);
                    debug_assert!(!r.is_identity());
                    if stop == self.levels.len() {
                        let pt = priority
                            .iter()
                            .copied()
                            .find(|&p| r.moves(p))
                            .expect("non-identity residue moves some point");
                        self.levels.push(Level::new(self.degree, pt));
                    }
                    for lev in 0..=stop {
                        self.levels[lev].gens.push(r.clone());
                        self.levels[lev].recompute_orbit(self.degree);
                    }
                    let _ = had;
                    i = stop as isize;
                }
            }
        }
    }

    /// Returns the first nontrivial sifted Schreier generator at `level`.
    fn check_level(&self, level: usize) -> Option<Permutation> {
        let lv = &self.levels[level];
        for &pt in &lv.orbit {
            let u = lv.transversal[pt].as_ref().unwrap();
            for s in &lv.gens {
                let q = s.apply(pt);
                let uq_inv = lv.transversal[q].as_ref().unwrap().inverse();
                let schreier = u.then(s).then(&uq_inv);
                if schreier.is_identity() {
                    continue;
                }
                let (residue, _) = self.sift_from(level + 1, schreier);
                if !residue.is_identity() {
                    return Some(residue);
                }
            }
        }
        None
    }

    /// Strips `g` through levels `from..`, returning the residue and the
    /// level index at which stripping stopped.
    pub fn sift_from(&self, from: usize, g: Permutation) -> (Permutation, usize) {
        let mut h = g;
        for i in from..self.levels.len() {
            let lv = &self.levels[i];
            let img = h.apply(lv.base_point);
            match &lv.transversal[img] {
                None => return (h, i),
                Some(u) => h = h.then(&u.inverse()),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(0, g.clone());
        residue.is_identity()
    }

    pub fn order(&self) -> u64 {
        self.levels
            .iter()
            .fold(1u64, |acc, lv| {
                acc.checked_mul(lv.orbit.len() as u64)
                    .expect("group order overflows u64")
            })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|lv| lv.base_point).collect()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn base_point(&self, level: usize) -> usize {
        self.levels[level].base_point
    }

    pub fn orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn transversal_elem(&self, level: usize, pt: usize) -> Option<&Permutation> {
        self.levels[level].transversal[pt].as_ref()
    }

    /// Generators of the pointwise stabilizer of the first `level` base
    /// points. Exact for chains built with `build_with_exact_base`; for
    /// auto-based chains this is the strong generating set of that level.
    pub fn level_gens(&self, level: usize) -> &[Permutation] {
        if level >= self.levels.len() {
            &[]
        } else {
            &self.levels[level].gens
        }
    }

    /// All group elements in deterministic DFS order over transversals.
    pub fn elements(&self, limit: u64) -> Result<Vec<Permutation>> {
        let n = self.order();
        if n > limit {
            return Err(Error::ResourceLimit {
                what: "element enumeration",
                value: n,
                limit,
            });
        }
        let mut out = Vec::with_capacity(n as usize);
        self.enum_rec(self.levels.len(), Permutation::identity(self.degree), &mut out);
        debug_assert_eq!(out.len() as u64, n);
        Ok(out)
    }

    // Elements factor as u_(k-1) ∘ ... ∘ u_0 (deepest transversal applied
    // first), so the deeper partial product is extended on the right.
    fn enum_rec(&self, level: usize, partial: Permutation, out: &mut Vec<Permutation>) {
        if level == 0 {
            out.push(partial);
            return;
        }
        let lv = &self.levels[level - 1];
        for &pt in &lv.orbit {
            let u = lv.transversal[pt].as_ref().unwrap();
            self.enum_rec(level - 1, partial.then(u), out);
        }
    }

    /// Uniformly random element: independent uniform transversal choice at
    /// each level.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lv in &self.levels {
            let pt = lv.orbit[rng.gen_range(0..lv.orbit.len())];
            let u = lv.transversal[pt].as_ref().unwrap();
            g = u.then(&g);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;
    use rand::SeedableRng;

    fn chain_of(gens: &[&str], degree: usize) -> StabilizerChain {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|s| parse_cycles(s, degree).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        StabilizerChain::build(degree, &gens, &[], &mut rng)
    }

    #[test]
    fn s4_order() {
        let c = chain_of(&["(1,2)", "(1,2,3,4)"], 4);
        assert_eq!(c.order(), 24);
    }

    #[test]
    fn a5_order_from_three_cycles() {
        let c = chain_of(&["(1,2,3)", "(3,4,5)"], 5);
        assert_eq!(c.order(), 60);
    }

    #[test]
    fn trivial_group() {
        let c = chain_of(&[], 5);
        assert_eq!(c.order(), 1);
        assert!(c.contains(&Permutation::identity(5)));
        assert!(!c.contains(&parse_cycles("(1,2)", 5).unwrap()));
    }

    #[test]
    fn membership_s4() {
        let c = chain_of(&["(1,2)", "(1,2,3,4)"], 4);
        assert!(c.contains(&parse_cycles("(1,3)(2,4)", 4).unwrap()));
        let c3 = chain_of(&["(1,2,3)"], 4);
        assert!(!c3.contains(&parse_cycles("(1,2)", 4).unwrap()));
        assert!(c3.contains(&parse_cycles("(1,3,2)", 4).unwrap()));
    }

    #[test]
    fn order_independent_of_base() {
        let gens: Vec<Permutation> = ["(1,2,3,4,5,6,7)", "(5,6,7)"]
            .iter()
            .map(|s| parse_cycles(s, 7).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = StabilizerChain::build(7, &gens, &[], &mut rng);
        let b = StabilizerChain::build(7, &gens, &[3, 1, 0], &mut rng);
        let c = StabilizerChain::build_with_exact_base(7, &gens, &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(a.order(), 2520); // <7-cycle, 3-cycle> = A7
        assert_eq!(b.order(), 2520);
        assert_eq!(c.order(), 2520);
    }

    #[test]
    fn elements_enumeration() {
        let c = chain_of(&["(1,2)", "(1,2,3,4)"], 4);
        let els = c.elements(10_000).unwrap();
        assert_eq!(els.len(), 24);
        let set: std::collections::HashSet<_> = els.iter().collect();
        assert_eq!(set.len(), 24);
    }

    #[test]
    fn exact_base_prefix_stabilizers() {
        let gens: Vec<Permutation> = ["(1,2)", "(1,2,3,4)"]
            .iter()
            .map(|s| parse_cycles(s, 4).unwrap())
            .collect();
        let c = StabilizerChain::build_with_exact_base(4, &gens, &[0, 1, 2, 3]);
        // stabilizer of point 0 in S4 has order 6; all its gens must fix 0
        for g in c.level_gens(1) {
            assert!(!g.moves(0));
        }
        assert_eq!(c.orbit(0).len(), 4);
        assert_eq!(c.orbit(1).len(), 3);
    }
}
