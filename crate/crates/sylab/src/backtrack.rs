//! Base-image backtrack searches over stabilizer chains.
//!
//! One engine serves element centralizers and conjugacy tests (pruned by
//! forced propagation along cycles), subgroup centralizers (forced along
//! whole orbits), and normalizers/transporters (pruned by the orbit
//! partition of the subgroup). Subgroup-valued searches grow a known
//! subgroup K level by level and restrict first images to minimal points of
//! K-orbits, so only generators are visited.

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

const UNSET: i32 = -1;

/// Partial injective map on points with a rollback trail.
struct PartialMap {
    fwd: Vec<i32>,
    bwd: Vec<i32>,
    trail: Vec<usize>,
}

impl PartialMap {
    fn new(n: usize) -> Self {
        PartialMap {
            fwd: vec![UNSET; n],
            bwd: vec![UNSET; n],
            trail: Vec::new(),
        }
    }

    #[inline]
    fn image(&self, p: usize) -> Option<usize> {
        let v = self.fwd[p];
        (v != UNSET).then_some(v as usize)
    }

    #[inline]
    fn preimage(&self, i: usize) -> Option<usize> {
        let v = self.bwd[i];
        (v != UNSET).then_some(v as usize)
    }

    fn checkpoint(&self) -> usize {
        self.trail.len()
    }

    fn rollback(&mut self, cp: usize) {
        while self.trail.len() > cp {
            let p = self.trail.pop().unwrap();
            let i = self.fwd[p];
            self.fwd[p] = UNSET;
            self.bwd[i as usize] = UNSET;
        }
    }

    /// Ok(true) newly assigned, Ok(false) already present, Err(()) conflict.
    fn assign(&mut self, p: usize, i: usize) -> std::result::Result<bool, ()> {
        match (self.fwd[p], self.bwd[i]) {
            (UNSET, UNSET) => {
                self.fwd[p] = i as i32;
                self.bwd[i] = p as i32;
                self.trail.push(p);
                Ok(true)
            }
            (f, b) if f == i as i32 && b == p as i32 => Ok(false),
            _ => Err(()),
        }
    }
}

/// A search property: prunes partial maps and verifies full elements.
trait Prop {
    /// Called once per new assignment; push implied pairs, return false on
    /// conflict.
    fn on_assign(&mut self, pre: usize, img: usize, out: &mut Vec<(usize, usize)>) -> bool;
    fn checkpoint(&mut self) -> usize {
        0
    }
    fn rollback(&mut self, _cp: usize) {}
    fn leaf(&self, g: &Permutation) -> bool;
}

/// Transitive closure of one assignment under the property's forcing rules.
fn propagate(pm: &mut PartialMap, prop: &mut dyn Prop, pre: usize, img: usize) -> bool {
    let mut queue = vec![(pre, img)];
    while let Some((p, i)) = queue.pop() {
        match pm.assign(p, i) {
            Err(()) => return false,
            Ok(false) => {}
            Ok(true) => {
                if !prop.on_assign(p, i, &mut queue) {
                    return false;
                }
            }
        }
    }
    true
}

/// Conjugation transporter `{g : x^g = y}`; with `x == y` this is the
/// centralizer condition. Assigning p -> i forces x(p) -> y(i).
struct ConjugateElems<'a> {
    x: &'a Permutation,
    y: &'a Permutation,
    xlen: Vec<u32>,
    ylen: Vec<u32>,
}

impl<'a> ConjugateElems<'a> {
    fn new(x: &'a Permutation, y: &'a Permutation) -> Self {
        ConjugateElems {
            x,
            y,
            xlen: cycle_lengths(x),
            ylen: cycle_lengths(y),
        }
    }

    fn hint(&self) -> Vec<usize> {
        let mut cycles = self.x.cycles();
        cycles.sort_by_key(|c| usize::MAX - c.len());
        let mut hint: Vec<usize> = cycles.iter().map(|c| c[0]).collect();
        for p in 0..self.x.degree() {
            if !hint.contains(&p) {
                hint.push(p);
            }
        }
        hint
    }
}

fn cycle_lengths(x: &Permutation) -> Vec<u32> {
    let mut out = vec![0u32; x.degree()];
    for p in 0..x.degree() {
        if out[p] == 0 {
            let len = x.cycle_len_at(p) as u32;
            let mut q = p;
            loop {
                out[q] = len;
                q = x.apply(q);
                if q == p {
                    break;
                }
            }
        }
    }
    out
}

impl Prop for ConjugateElems<'_> {
    fn on_assign(&mut self, pre: usize, img: usize, out: &mut Vec<(usize, usize)>) -> bool {
        if self.xlen[pre] != self.ylen[img] {
            return false;
        }
        out.push((self.x.apply(pre), self.y.apply(img)));
        true
    }

    fn leaf(&self, g: &Permutation) -> bool {
        &self.x.conj(g) == self.y
    }
}

/// Centralizer condition for a whole generating set: p -> i forces
/// h(p) -> h(i) for every generator h.
struct CommuteWith<'a> {
    hgens: &'a [Permutation],
}

impl Prop for CommuteWith<'_> {
    fn on_assign(&mut self, pre: usize, img: usize, out: &mut Vec<(usize, usize)>) -> bool {
        for h in self.hgens {
            out.push((h.apply(pre), h.apply(img)));
        }
        true
    }

    fn leaf(&self, g: &Permutation) -> bool {
        self.hgens.iter().all(|h| h.then(g) == g.then(h))
    }
}

/// Subgroup transporter condition `{g : A^g = B}` (normalizer when A = B):
/// g must map A-orbits onto B-orbits of equal size, injectively.
struct TransportSubgroup<'a> {
    a: &'a PermGroup,
    b: &'a PermGroup,
    aorb: OrbitPartition,
    borb: OrbitPartition,
    omap: Vec<i32>,
    imap: Vec<i32>,
    trail: Vec<(usize, usize)>,
}

struct OrbitPartition {
    id: Vec<usize>,
    size: Vec<usize>,
}

fn orbit_partition(degree: usize, gens: &[Permutation]) -> OrbitPartition {
    let mut id = vec![usize::MAX; degree];
    let mut size = Vec::new();
    for start in 0..degree {
        if id[start] != usize::MAX {
            continue;
        }
        let oid = size.len();
        let mut stack = vec![start];
        id[start] = oid;
        let mut count = 0;
        while let Some(p) = stack.pop() {
            count += 1;
            for g in gens {
                let q = g.apply(p);
                if id[q] == usize::MAX {
                    id[q] = oid;
                    stack.push(q);
                }
            }
        }
        size.push(count);
    }
    OrbitPartition { id, size }
}

impl<'a> TransportSubgroup<'a> {
    fn new(a: &'a PermGroup, b: &'a PermGroup) -> Self {
        let aorb = orbit_partition(a.degree(), a.gens());
        let borb = orbit_partition(b.degree(), b.gens());
        let (na, nb) = (aorb.size.len(), borb.size.len());
        TransportSubgroup {
            a,
            b,
            aorb,
            borb,
            omap: vec![UNSET; na],
            imap: vec![UNSET; nb],
            trail: Vec::new(),
        }
    }

    /// Base points inside small orbits first: most constrained choices early.
    fn hint(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.aorb.id.len()).collect();
        pts.sort_by_key(|&p| (self.aorb.size[self.aorb.id[p]], self.aorb.id[p], p));
        pts
    }
}

impl Prop for TransportSubgroup<'_> {
    fn on_assign(&mut self, pre: usize, img: usize, _out: &mut Vec<(usize, usize)>) -> bool {
        let o1 = self.aorb.id[pre];
        let o2 = self.borb.id[img];
        if self.aorb.size[o1] != self.borb.size[o2] {
            return false;
        }
        match (self.omap[o1], self.imap[o2]) {
            (UNSET, UNSET) => {
                self.omap[o1] = o2 as i32;
                self.imap[o2] = o1 as i32;
                self.trail.push((o1, o2));
                true
            }
            (f, b) => f == o2 as i32 && b == o1 as i32,
        }
    }

    fn checkpoint(&mut self) -> usize {
        self.trail.len()
    }

    fn rollback(&mut self, cp: usize) {
        while self.trail.len() > cp {
            let (o1, o2) = self.trail.pop().unwrap();
            self.omap[o1] = UNSET;
            self.imap[o2] = UNSET;
        }
    }

    fn leaf(&self, g: &Permutation) -> bool {
        self.a.gens().iter().all(|h| self.b.contains(&h.conj(g)))
    }
}

struct Searcher<'a> {
    chain: &'a crate::chain::StabilizerChain,
    prop: &'a mut dyn Prop,
    /// Level with subgroup-mode image restrictions, or usize::MAX.
    first_level: usize,
    /// Min point of each K-orbit (subgroup mode).
    orbmin: Vec<usize>,
    /// Exclude members of K at the leaves (subgroup mode).
    exclude: Option<&'a PermGroup>,
    nodes: u64,
    node_limit: u64,
}

impl Searcher<'_> {
    fn dfs(&mut self, level: usize, prefix: &Permutation, pm: &mut PartialMap) -> Result<Option<Permutation>> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::ResourceLimit {
                what: "backtrack search nodes",
                value: self.nodes,
                limit: self.node_limit,
            });
        }
        if level == self.chain.num_levels() {
            if self.prop.leaf(prefix) {
                if let Some(k) = self.exclude {
                    if k.contains(prefix) {
                        return Ok(None);
                    }
                }
                return Ok(Some(prefix.clone()));
            }
            return Ok(None);
        }
        let b = self.chain.base_point(level);
        let forced = pm.image(b);
        for idx in 0..self.chain.orbit(level).len() {
            let delta = self.chain.orbit(level)[idx];
            if level == self.first_level {
                if delta == b || self.orbmin[delta] != delta {
                    continue;
                }
            }
            let gamma = prefix.apply(delta);
            if let Some(v) = forced {
                if v != gamma {
                    continue;
                }
            }
            if pm.preimage(gamma).map_or(false, |p| p != b) {
                continue;
            }
            let cp = pm.checkpoint();
            let pcp = self.prop.checkpoint();
            if propagate(pm, self.prop, b, gamma) {
                let u = self.chain.transversal_elem(level, delta).unwrap();
                let next = u.then(prefix);
                if let Some(g) = self.dfs(level + 1, &next, pm)? {
                    return Ok(Some(g));
                }
            }
            pm.rollback(cp);
            self.prop.rollback(pcp);
        }
        Ok(None)
    }
}

/// Finds one element of `chain` satisfying `prop`, or None.
fn find_one(
    chain: &crate::chain::StabilizerChain,
    prop: &mut dyn Prop,
    node_limit: u64,
) -> Result<Option<Permutation>> {
    let mut pm = PartialMap::new(chain.degree());
    let mut s = Searcher {
        chain,
        prop,
        first_level: usize::MAX,
        orbmin: Vec::new(),
        exclude: None,
        nodes: 0,
        node_limit,
    };
    s.dfs(0, &Permutation::identity(chain.degree()), &mut pm)
}

/// Finds one element of G^(level) (identity prefix) satisfying `prop`,
/// outside K, with the first image minimal in its K-prefix-stabilizer orbit.
fn find_new_at_level(
    chain: &crate::chain::StabilizerChain,
    prop: &mut dyn Prop,
    level: usize,
    k: &PermGroup,
    node_limit: u64,
) -> Result<Option<Permutation>> {
    let degree = chain.degree();
    let mut pm = PartialMap::new(degree);
    for j in 0..level {
        let b = chain.base_point(j);
        if !propagate(&mut pm, prop, b, b) {
            return Ok(None);
        }
    }
    let base = chain.base();
    let mut order: Vec<usize> = base[0..level].to_vec();
    for p in 0..degree {
        if !order.contains(&p) {
            order.push(p);
        }
    }
    let kchain = k.exact_base_chain(&order);
    let stab_gens = kchain.level_gens(level);
    let part = orbit_partition(degree, stab_gens);
    let mut orbmin = vec![usize::MAX; degree];
    for p in 0..degree {
        let o = part.id[p];
        if orbmin[o] == usize::MAX {
            orbmin[o] = p; // first visit in increasing p is the min
        }
    }
    let orbmin_pt: Vec<usize> = (0..degree).map(|p| orbmin[part.id[p]]).collect();
    let mut s = Searcher {
        chain,
        prop,
        first_level: level,
        orbmin: orbmin_pt,
        exclude: Some(k),
        nodes: 0,
        node_limit,
    };
    s.dfs(level, &Permutation::identity(degree), &mut pm)
}

/// Grows K = seed until it equals the full solution subgroup.
fn subgroup_search<'a, F>(
    g: &PermGroup,
    hint: &[usize],
    seed: Vec<Permutation>,
    mut make_prop: F,
    node_limit: u64,
) -> Result<PermGroup>
where
    F: FnMut() -> Box<dyn Prop + 'a>,
{
    let chain = g.chain_with_hint(hint);
    let mut k_gens = seed;
    let mut k = g.subgroup(k_gens.clone());
    for level in (0..chain.num_levels()).rev() {
        loop {
            if k.order() == chain.order() {
                return Ok(k);
            }
            let mut prop = make_prop();
            match find_new_at_level(&chain, prop.as_mut(), level, &k, node_limit)? {
                None => break,
                Some(new_gen) => {
                    k_gens.push(new_gen);
                    k = g.subgroup(k_gens.clone());
                }
            }
        }
    }
    Ok(k)
}

const DEFAULT_NODE_LIMIT: u64 = 200_000_000;

/// Centralizer of an element: `{g in G : xg = gx}`.
pub fn centralizer_element(g: &PermGroup, x: &Permutation) -> Result<PermGroup> {
    if !g.contains(x) {
        return Err(Error::NotAMember);
    }
    if x.is_identity() {
        return Ok(g.clone());
    }
    let prop_probe = ConjugateElems::new(x, x);
    let hint = prop_probe.hint();
    subgroup_search(
        g,
        &hint,
        vec![x.clone()],
        || Box::new(ConjugateElems::new(x, x)),
        DEFAULT_NODE_LIMIT,
    )
}

/// Centralizer of a subgroup: `{g in G : gh = hg for all h in H}`.
pub fn centralizer_subgroup(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    if h.is_trivial() {
        return Ok(g.clone());
    }
    // points in large H-orbits first: one assignment forces the whole orbit
    let part = orbit_partition(g.degree(), h.gens());
    let mut pts: Vec<usize> = (0..g.degree()).collect();
    pts.sort_by_key(|&p| (usize::MAX - part.size[part.id[p]], part.id[p], p));
    let hgens = h.gens();
    subgroup_search(
        g,
        &pts,
        Vec::new(),
        || Box::new(CommuteWith { hgens }),
        DEFAULT_NODE_LIMIT,
    )
}

pub fn center(g: &PermGroup) -> Result<PermGroup> {
    centralizer_subgroup(g, g)
}

/// Some g in G with x^g = y, or None. Errors if x or y is outside G.
pub fn conjugating_element(
    g: &PermGroup,
    x: &Permutation,
    y: &Permutation,
) -> Result<Option<Permutation>> {
    if !g.contains(x) || !g.contains(y) {
        return Err(Error::NotAMember);
    }
    if x == y {
        return Ok(Some(g.identity()));
    }
    if x.cycle_type() != y.cycle_type() {
        return Ok(None);
    }
    let mut prop = ConjugateElems::new(x, y);
    let hint = prop.hint();
    let chain = g.chain_with_hint(&hint);
    find_one(&chain, &mut prop, DEFAULT_NODE_LIMIT)
}

/// Normalizer of H in G. H must be a subgroup of G.
pub fn normalizer(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup);
    }
    if h.is_trivial() || h.same_group(g) {
        return Ok(g.clone());
    }
    if h.order() <= 128 {
        if let Some(x) = h.cyclic_generator() {
            return normalizer_of_cyclic(g, &x);
        }
    }
    // For a p-group with cyclic Omega_1(Z(H)) = <z>, N_G(H) normalizes <z>,
    // so the search can run inside the much smaller N_G(<z>).
    let fac = crate::arith::factor(h.order());
    if fac.len() == 1 {
        let p = fac[0].0;
        let z = centralizer_subgroup(h, h)?;
        let omega = omega1(&z, p)?;
        if let Some(zgen) = omega.cyclic_generator() {
            if !zgen.is_identity() {
                let m = normalizer_of_cyclic(g, &zgen)?;
                if m.order() < g.order() {
                    return normalizer(&m, h);
                }
            }
        }
    }
    normalizer_generic(g, h)
}

fn normalizer_generic(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let probe = TransportSubgroup::new(h, h);
    let hint = probe.hint();
    subgroup_search(
        g,
        &hint,
        h.gens().to_vec(),
        || Box::new(TransportSubgroup::new(h, h)),
        DEFAULT_NODE_LIMIT,
    )
}

/// N_G(<x>) as the closure of C_G(x) with conjugators x -> x^j.
fn normalizer_of_cyclic(g: &PermGroup, x: &Permutation) -> Result<PermGroup> {
    if x.is_identity() {
        return Ok(g.clone());
    }
    let c = centralizer_element(g, x)?;
    let mut gens = c.gens().to_vec();
    gens.push(x.clone());
    let o = x.order();
    for j in 2..o {
        if gcd(j, o) == 1 {
            if let Some(t) = conjugating_element(g, x, &x.pow(j as i64))? {
                gens.push(t);
            }
        }
    }
    Ok(g.subgroup(gens))
}

/// Omega_1 of an abelian p-group: the subgroup of elements of order
/// dividing p, found by enumeration. Returns Z itself if it is too large to
/// enumerate (the caller only uses the cyclic case).
fn omega1(z: &PermGroup, p: u64) -> Result<PermGroup> {
    let els = match z.elements(4096) {
        Ok(e) => e,
        Err(_) => return Ok(z.clone()),
    };
    let gens: Vec<Permutation> = els
        .into_iter()
        .filter(|g| !g.is_identity() && g.order() == p)
        .collect();
    Ok(z.subgroup(gens))
}

/// Some g in G with A^g = B, or None.
pub fn subgroup_transporter(
    g: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
) -> Result<Option<Permutation>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    if a.same_group(b) {
        return Ok(Some(g.identity()));
    }
    let mut prop = TransportSubgroup::new(a, b);
    let hint = prop.hint();
    let chain = g.chain_with_hint(&hint);
    find_one(&chain, &mut prop, DEFAULT_NODE_LIMIT)
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

    fn p(s: &str, deg: usize) -> Permutation {
        parse_cycles(s, deg).unwrap()
    }

    #[test]
    fn centralizer_in_s4() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let c = centralizer_element(&s4, &p("(1,2)(3,4)", 4)).unwrap();
        assert_eq!(c.order(), 8);
        let cid = centralizer_element(&s4, &Permutation::identity(4)).unwrap();
        assert_eq!(cid.order(), 24);
    }

    #[test]
    fn centralizer_in_a5() {
        let a5 = grp(&["(1,2,3)", "(3,4,5)"], 5);
        let c = centralizer_element(&a5, &p("(1,2,3,4,5)", 5)).unwrap();
        assert_eq!(c.order(), 5);
    }

    #[test]
    fn conjugator_basic() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 3);
        let t = conjugating_element(&s3, &p("(1,2,3)", 3), &p("(1,3,2)", 3))
            .unwrap()
            .unwrap();
        assert_eq!(p("(1,2,3)", 3).conj(&t), p("(1,3,2)", 3));
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        assert!(conjugating_element(&s4, &p("(1,2)", 4), &p("(1,2,3)", 4))
            .unwrap()
            .is_none());
    }

    #[test]
    fn normalizer_in_s4() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let c3 = grp(&["(1,2,3)"], 4);
        let n = normalizer(&s4, &c3).unwrap();
        assert_eq!(n.order(), 6);
        // normalizer of the whole group
        let ng = normalizer(&s4, &s4).unwrap();
        assert_eq!(ng.order(), 24);
    }

    #[test]
    fn normalizer_of_sylow5_in_a5() {
        let a5 = grp(&["(1,2,3)", "(3,4,5)"], 5);
        let c5 = grp(&["(1,2,3,4,5)"], 5);
        let n = normalizer(&a5, &c5).unwrap();
        assert_eq!(n.order(), 10);
    }

    #[test]
    fn normalizer_generic_noncyclic() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let v4 = grp(&["(1,2)(3,4)", "(1,3)(2,4)"], 4);
        let n = normalizer_generic(&s4, &v4).unwrap();
        assert_eq!(n.order(), 24); // V4 is normal in S4
        let klein_nonnormal = grp(&["(1,2)", "(3,4)"], 4);
        let n2 = normalizer_generic(&s4, &klein_nonnormal).unwrap();
        assert_eq!(n2.order(), 8);
    }

    #[test]
    fn center_of_d8() {
        let d8 = grp(&["(1,2,3,4)", "(1,3)"], 4);
        let z = center(&d8).unwrap();
        assert_eq!(z.order(), 2);
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        assert_eq!(center(&s4).unwrap().order(), 1);
    }

    #[test]
    fn transporter_between_subgroups() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let a = grp(&["(1,2)"], 4);
        let b = grp(&["(3,4)"], 4);
        let t = subgroup_transporter(&s4, &a, &b).unwrap().unwrap();
        assert!(b.contains(&p("(1,2)", 4).conj(&t)));
        let c2 = grp(&["(1,2)(3,4)"], 4);
        // (1,2) and (1,2)(3,4) generate non-conjugate subgroups of S4? They
        // are both order 2 but have different cycle types, so no transporter.
        assert!(subgroup_transporter(&s4, &a, &c2).unwrap().is_none());
    }
}
