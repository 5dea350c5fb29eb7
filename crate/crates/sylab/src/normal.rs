//! Normal closures, derived subgroups, and faithful quotient
//! representations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::Limits;

/// Smallest normal subgroup of G containing `seed`.
pub fn normal_closure(g: &PermGroup, seed: &[Permutation]) -> PermGroup {
    let mut gens: Vec<Permutation> = seed
        .iter()
        .filter(|x| !x.is_identity())
        .cloned()
        .collect();
    let mut n = g.subgroup(gens.clone());
    let mut head = 0;
    while head < gens.len() {
        let x = gens[head].clone();
        head += 1;
        for s in g.gens() {
            let y = x.conj(s);
            if !n.contains(&y) {
                gens.push(y.clone());
                n = g.subgroup(gens.clone());
            }
        }
    }
    n
}

/// Derived subgroup: normal closure of the generator commutators.
pub fn derived_subgroup(g: &PermGroup) -> PermGroup {
    let mut comms = Vec::new();
    for (i, a) in g.gens().iter().enumerate() {
        for b in &g.gens()[i..] {
            let c = a.comm(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms)
}

/// A faithful permutation representation of G/N together with the
/// epimorphism G -> G/N.
pub struct Quotient {
    pub group: PermGroup,
    map: QuotientMap,
    domain_gens: Vec<Permutation>,
    domain_degree: usize,
}

enum QuotientMap {
    /// N is trivial: the quotient is G itself.
    Identity,
    /// Action on the N-orbit partition of the domain.
    OrbitAction { orbit_id: Vec<usize> },
    /// Action on right cosets of a subgroup K with core K = N.
    CosetAction(CosetTable),
}

impl Quotient {
    /// Image of an arbitrary element of G.
    pub fn image(&self, x: &Permutation) -> Permutation {
        match &self.map {
            QuotientMap::Identity => x.clone(),
            QuotientMap::OrbitAction { orbit_id } => orbit_action_image(orbit_id, x),
            QuotientMap::CosetAction(tab) => tab.image(x),
        }
    }

    /// image-permutation -> one preimage, for every element of the quotient.
    /// BFS over generator words, so sections exist for any strategy.
    pub fn section_table(&self, limit: u64) -> Result<HashMap<Permutation, Permutation>> {
        let qn = self.group.order();
        if qn > limit {
            return Err(Error::ResourceLimit {
                what: "quotient section enumeration",
                value: qn,
                limit,
            });
        }
        let mut table: HashMap<Permutation, Permutation> = HashMap::new();
        let e_img = self.group.identity();
        let mut queue = vec![(e_img.clone(), Permutation::identity(self.degree_of_domain()))];
        table.insert(e_img, Permutation::identity(self.degree_of_domain()));
        let mut head = 0;
        let gens: Vec<(Permutation, Permutation)> = self
            .domain_gens
            .iter()
            .map(|g| (self.image(g), g.clone()))
            .collect();
        while head < queue.len() {
            let (img, lift) = queue[head].clone();
            head += 1;
            for (gi, g) in &gens {
                let nimg = img.then(gi);
                if !table.contains_key(&nimg) {
                    let nlift = lift.then(g);
                    table.insert(nimg.clone(), nlift.clone());
                    queue.push((nimg, nlift));
                }
            }
        }
        Ok(table)
    }

    fn degree_of_domain(&self) -> usize {
        self.domain_gens
            .first()
            .map(|g| g.degree())
            .unwrap_or(self.domain_degree)
    }
}

fn orbit_action_image(orbit_id: &[usize], x: &Permutation) -> Permutation {
    let nor = orbit_id.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut images = vec![u32::MAX; nor];
    for p in 0..x.degree() {
        let o = orbit_id[p];
        let oi = orbit_id[x.apply(p)];
        images[o] = oi as u32;
    }
    Permutation::from_images(images).expect("orbit action is well defined")
}

/// Right cosets Kx with canonical minimal-image representatives.
pub struct CosetTable {
    reps: Vec<Permutation>,
    index: HashMap<Vec<u32>, usize>,
    kchain: crate::chain::StabilizerChain,
}

impl CosetTable {
    /// Canonical representative of the coset K·x: the element of the coset
    /// whose image array is lexicographically least.
    fn canonical(&self, x: &Permutation) -> Permutation {
        let degree = x.degree();
        let mut current = x.clone();
        for level in 0..self.kchain.num_levels() {
            let orbit = self.kchain.orbit(level);
            if orbit.len() == 1 {
                continue;
            }
            let mut best = orbit[0];
            for &pt in orbit {
                if current.apply(pt) < current.apply(best) {
                    best = pt;
                }
            }
            let u = self.kchain.transversal_elem(level, best).unwrap();
            current = u.then(&current);
        }
        debug_assert_eq!(current.degree(), degree);
        current
    }

    fn image(&self, x: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.reps.len()];
        for (i, r) in self.reps.iter().enumerate() {
            let c = self.canonical(&r.then(x));
            images[i] = self.index[c.images()] as u32;
        }
        Permutation::from_images(images).expect("coset action is well defined")
    }
}

/// Coset action of G on the right cosets of K, with the induced generators.
pub fn coset_action(g: &PermGroup, k: &PermGroup, max_cosets: u64) -> Result<(Vec<Permutation>, CosetTable)> {
    let index_bound = g.order() / k.order();
    if index_bound > max_cosets {
        return Err(Error::ResourceLimit {
            what: "coset action degree",
            value: index_bound,
            limit: max_cosets,
        });
    }
    let degree = g.degree();
    let base_order: Vec<usize> = (0..degree).collect();
    let kchain = k.exact_base_chain(&base_order);
    let mut tab = CosetTable {
        reps: Vec::new(),
        index: HashMap::new(),
        kchain,
    };
    let e = tab.canonical(&Permutation::identity(degree));
    tab.index.insert(e.images().to_vec(), 0);
    tab.reps.push(e);
    let mut head = 0;
    while head < tab.reps.len() {
        let r = tab.reps[head].clone();
        head += 1;
        for s in g.gens() {
            let c = tab.canonical(&r.then(s));
            if !tab.index.contains_key(c.images()) {
                tab.index.insert(c.images().to_vec(), tab.reps.len());
                tab.reps.push(c);
            }
        }
    }
    let images: Vec<Permutation> = g.gens().iter().map(|s| tab.image(s)).collect();
    Ok((images, tab))
}

/// Faithful representation of G/N. Strategies, in order: action on the
/// N-orbit partition; coset action on a local overgroup K >= N with
/// core K = N; regular coset action on N itself.
pub fn quotient_representation(
    g: &PermGroup,
    n: &PermGroup,
    limits: &Limits,
) -> Result<Quotient> {
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal);
    }
    let target = g.order() / n.order();
    if n.is_trivial() {
        return Ok(Quotient {
            group: g.clone(),
            map: QuotientMap::Identity,
            domain_gens: g.gens().to_vec(),
            domain_degree: g.degree(),
        });
    }

    // (1) action on the N-orbit partition
    {
        let orbit_id = orbit_ids(g.degree(), n.gens());
        let n_orbits = orbit_id.iter().max().unwrap() + 1;
        if n_orbits > 1 {
            let images: Vec<Permutation> = g
                .gens()
                .iter()
                .map(|x| orbit_action_image(&orbit_id, x))
                .collect();
            let q = PermGroup::new(n_orbits, images)?;
            if q.order() == target {
                return Ok(Quotient {
                    group: q,
                    map: QuotientMap::OrbitAction { orbit_id },
                    domain_gens: g.gens().to_vec(),
                    domain_degree: g.degree(),
                });
            }
        }
    }

    // (2) coset action on N*P for Sylow subgroups P of G
    for (p, _) in crate::arith::factor(target) {
        let syl = crate::sylow::sylow(g, p)?;
        let mut gens = n.gens().to_vec();
        gens.extend_from_slice(syl.gens());
        let k = g.subgroup(gens);
        if k.order() >= g.order() || k.order() == n.order() {
            continue;
        }
        if g.order() / k.order() > limits.quotient_degree {
            continue;
        }
        let (images, tab) = coset_action(g, &k, limits.quotient_degree)?;
        let q = PermGroup::new(tab.reps.len(), images)?;
        if q.order() == target {
            return Ok(Quotient {
                group: q,
                map: QuotientMap::CosetAction(tab),
                domain_gens: g.gens().to_vec(),
                domain_degree: g.degree(),
            });
        }
    }

    // (3) regular action on the cosets of N
    if target <= limits.quotient_degree {
        let (images, tab) = coset_action(g, n, limits.quotient_degree)?;
        let q = PermGroup::new(tab.reps.len(), images)?;
        if q.order() == target {
            return Ok(Quotient {
                group: q,
                map: QuotientMap::CosetAction(tab),
                domain_gens: g.gens().to_vec(),
                domain_degree: g.degree(),
            });
        }
        return Err(Error::Internal(
            "coset action on a normal subgroup must have kernel N".into(),
        ));
    }
    Err(Error::QuotientTooLarge)
}

fn orbit_ids(degree: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut id = vec![usize::MAX; degree];
    let mut next = 0;
    for start in 0..degree {
        if id[start] != usize::MAX {
            continue;
        }
        let oid = next;
        next += 1;
        let mut stack = vec![start];
        id[start] = oid;
        while let Some(p) = stack.pop() {
            for g in gens {
                let q = g.apply(p);
                if id[q] == usize::MAX {
                    id[q] = oid;
                    stack.push(q);
                }
            }
        }
    }
    id
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
    fn derived_of_s4_is_a4() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let d = derived_subgroup(&s4);
        assert_eq!(d.order(), 12);
        let dd = derived_subgroup(&d);
        assert_eq!(dd.order(), 4); // V4
    }

    #[test]
    fn closure_of_three_cycle_in_a5() {
        let a5 = grp(&["(1,2,3)", "(3,4,5)"], 5);
        let n = normal_closure(&a5, &[parse_cycles("(1,2,3)", 5).unwrap()]);
        assert_eq!(n.order(), 60); // A5 simple
    }

    #[test]
    fn quotient_trivial_n() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let q = quotient_representation(&s4, &PermGroup::trivial(4), &Limits::default()).unwrap();
        assert_eq!(q.group.order(), 24);
    }

    #[test]
    fn s4_mod_v4_is_s3() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let v4 = grp(&["(1,2)(3,4)", "(1,3)(2,4)"], 4);
        let q = quotient_representation(&s4, &v4, &Limits::default()).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());
        // epimorphism property on generator pairs
        for a in s4.gens() {
            for b in s4.gens() {
                assert_eq!(q.image(&a.then(b)), q.image(a).then(&q.image(b)));
            }
        }
        // kernel contains V4
        for v in v4.gens() {
            assert!(q.image(v).is_identity());
        }
    }

    #[test]
    fn a4_mod_v4_is_c3() {
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let v4 = grp(&["(1,2)(3,4)", "(1,3)(2,4)"], 4);
        let q = quotient_representation(&a4, &v4, &Limits::default()).unwrap();
        assert_eq!(q.group.order(), 3);
        assert!(q.group.is_cyclic());
    }

    #[test]
    fn quotient_by_nonnormal_rejected() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let c2 = grp(&["(1,2)"], 4);
        assert!(matches!(
            quotient_representation(&s4, &c2, &Limits::default()),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn section_table_lifts() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let v4 = grp(&["(1,2)(3,4)", "(1,3)(2,4)"], 4);
        let q = quotient_representation(&s4, &v4, &Limits::default()).unwrap();
        let sect = q.section_table(100).unwrap();
        assert_eq!(sect.len(), 6);
        for (img, lift) in &sect {
            assert_eq!(&q.image(lift), img);
        }
    }
}
