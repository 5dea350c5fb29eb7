//! Conjugacy classes: representatives, sizes, inverse class map and power
//! maps.
//!
//! Small groups are handled by full conjugation-orbit enumeration. Larger
//! ones use seeded random sampling: each new class is sized exactly through
//! its centralizer order, classes are closed under powering, and the run is
//! complete only once the sizes sum to |G|.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{factor, lcm};
use crate::backtrack::{centralizer_element, conjugating_element};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::Limits;

type InvariantKey = (u64, Vec<(usize, usize)>);

pub struct ClassData {
    pub reps: Vec<Permutation>,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
    pub inverse_map: Vec<usize>,
    /// For each prime dividing the exponent: class index of rep^p.
    pub power_maps: Vec<(u64, Vec<usize>)>,
    pub exponent: u64,
    pub identity_class: usize,
    /// element -> class index, present when the group was fully enumerated
    element_index: Option<HashMap<Permutation, usize>>,
    by_invariant: HashMap<InvariantKey, Vec<usize>>,
}

impl ClassData {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    fn invariant_of(x: &Permutation) -> InvariantKey {
        (x.order(), x.cycle_type())
    }
}

/// Class index of rep_i^s, by identification.
pub fn class_of_power(g: &PermGroup, cd: &ClassData, i: usize, s: u64) -> Result<usize> {
    let m = cd.orders[i];
    let s = s % m;
    if s == 0 {
        return Ok(cd.identity_class);
    }
    if s == 1 {
        return Ok(i);
    }
    class_of(g, cd, &cd.reps[i].pow(s as i64))
}

/// Identifies the class of `x` in `g`. Exact: falls back to conjugacy tests
/// when several classes share the order/cycle-type invariant.
pub fn class_of(g: &PermGroup, cd: &ClassData, x: &Permutation) -> Result<usize> {
    if let Some(map) = &cd.element_index {
        return map.get(x).copied().ok_or(Error::NotAMember);
    }
    let key = ClassData::invariant_of(x);
    if let Some(cands) = cd.by_invariant.get(&key) {
        if cands.len() == 1 {
            // the class list is complete, so a unique invariant match decides
            return Ok(cands[0]);
        }
        for &c in cands {
            if conjugating_element(g, x, &cd.reps[c])?.is_some() {
                return Ok(c);
            }
        }
    }
    Err(Error::Internal(format!(
        "class identification failed for {x}; class list should be complete"
    )))
}

/// Elements of the conjugacy class of `rep`, by orbit BFS.
pub fn class_elements(g: &PermGroup, rep: &Permutation, limit: u64) -> Result<Vec<Permutation>> {
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    let mut out = vec![rep.clone()];
    seen.insert(rep.clone(), ());
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for s in g.gens() {
            let y = x.conj(s);
            if !seen.contains_key(&y) {
                if out.len() as u64 >= limit {
                    return Err(Error::ResourceLimit {
                        what: "class orbit enumeration",
                        value: out.len() as u64 + 1,
                        limit,
                    });
                }
                seen.insert(y.clone(), ());
                out.push(y);
            }
        }
    }
    Ok(out)
}

pub fn conjugacy_classes(g: &PermGroup, limits: &Limits) -> Result<Arc<ClassData>> {
    if let Some(cd) = g.classes_cache().get() {
        return Ok(cd.clone());
    }
    let cd = compute_classes(g, limits)?;
    let arc = Arc::new(cd);
    let _ = g.classes_cache().set(arc.clone());
    Ok(g.classes_cache().get().unwrap().clone())
}

fn compute_classes(g: &PermGroup, limits: &Limits) -> Result<ClassData> {
    let n = g.order();
    let raw = if n <= limits.class_full_enum {
        classes_by_enumeration(g, limits)?
    } else {
        classes_by_sampling(g, limits)?
    };
    finish(g, raw)
}

struct RawClasses {
    reps: Vec<Permutation>,
    sizes: Vec<u64>,
    element_index: Option<HashMap<Permutation, usize>>,
}

fn classes_by_enumeration(g: &PermGroup, limits: &Limits) -> Result<RawClasses> {
    let els = g.elements(limits.class_full_enum)?;
    let mut index: HashMap<Permutation, usize> = HashMap::with_capacity(els.len());
    let mut reps: Vec<Permutation> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for e in &els {
        if index.contains_key(e) {
            continue;
        }
        let cls = reps.len();
        if cls >= limits.max_classes {
            return Err(Error::ResourceLimit {
                what: "conjugacy class count",
                value: cls as u64 + 1,
                limit: limits.max_classes as u64,
            });
        }
        // conjugation orbit of e
        let mut orbit = vec![e.clone()];
        index.insert(e.clone(), cls);
        let mut head = 0;
        let mut min_rep = e.clone();
        while head < orbit.len() {
            let x = orbit[head].clone();
            head += 1;
            for s in g.gens() {
                let y = x.conj(s);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), cls);
                    if y < min_rep {
                        min_rep = y.clone();
                    }
                    orbit.push(y);
                }
            }
        }
        sizes.push(orbit.len() as u64);
        reps.push(min_rep);
    }
    Ok(RawClasses {
        reps,
        sizes,
        element_index: Some(index),
    })
}

const SAMPLING_TAG: u64 = 0xc1a5_5e5a_0000_0002;

fn classes_by_sampling(g: &PermGroup, limits: &Limits) -> Result<RawClasses> {
    let n = g.order();
    let mut rng = g.seeded_rng(SAMPLING_TAG);
    let mut reps: Vec<Permutation> = vec![g.identity()];
    let mut sizes: Vec<u64> = vec![1];
    let mut by_inv: HashMap<InvariantKey, Vec<usize>> = HashMap::new();
    by_inv.insert((1, Permutation::identity(g.degree()).cycle_type()), vec![0]);
    let mut total: u64 = 1;

    // identify-or-insert; on insert, close under powers of the new rep
    let mut pending: Vec<Permutation> = Vec::new();
    let mut attempts: u64 = 0;
    while total < n {
        attempts += 1;
        if attempts > 500_000 {
            return Err(Error::Internal(
                "class sampling failed to converge".into(),
            ));
        }
        let x = if let Some(y) = pending.pop() {
            y
        } else {
            g.random_element(&mut rng)
        };
        if x.is_identity() {
            continue;
        }
        let key = ClassData::invariant_of(&x);
        let cands = by_inv.get(&key).cloned().unwrap_or_default();
        let mut known = false;
        for c in cands {
            if conjugating_element(g, &x, &reps[c])?.is_some() {
                known = true;
                break;
            }
        }
        if known {
            continue;
        }
        let cls = reps.len();
        if cls >= limits.max_classes {
            return Err(Error::ResourceLimit {
                what: "conjugacy class count",
                value: cls as u64 + 1,
                limit: limits.max_classes as u64,
            });
        }
        let cent = centralizer_element(g, &x)?;
        let size = n / cent.order();
        total += size;
        if total > n {
            return Err(Error::Internal(
                "class sizes exceed the group order; sampling bug".into(),
            ));
        }
        by_inv.entry(key).or_default().push(cls);
        // powers of a new representative reach their classes cheaply
        let o = x.order();
        for d in 2..o {
            pending.push(x.pow(d as i64));
        }
        reps.push(x);
        sizes.push(size);
    }
    Ok(RawClasses {
        reps,
        sizes,
        element_index: None,
    })
}

/// Sorts classes canonically, then builds inverse and power maps.
fn finish(g: &PermGroup, raw: RawClasses) -> Result<ClassData> {
    let k = raw.reps.len();
    let mut order: Vec<usize> = (0..k).collect();
    let keys: Vec<(u64, u64, Vec<(usize, usize)>, Vec<u32>)> = raw
        .reps
        .iter()
        .zip(&raw.sizes)
        .map(|(r, &s)| (r.order(), s, r.cycle_type(), r.images().to_vec()))
        .collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut old_to_new = vec![0usize; k];
    for (new, &old) in order.iter().enumerate() {
        old_to_new[old] = new;
    }
    let reps: Vec<Permutation> = order.iter().map(|&i| raw.reps[i].clone()).collect();
    let sizes: Vec<u64> = order.iter().map(|&i| raw.sizes[i]).collect();
    let orders: Vec<u64> = reps.iter().map(|r| r.order()).collect();
    let element_index = raw.element_index.map(|mut m| {
        for v in m.values_mut() {
            *v = old_to_new[*v];
        }
        m
    });
    let mut by_invariant: HashMap<InvariantKey, Vec<usize>> = HashMap::new();
    for (i, r) in reps.iter().enumerate() {
        by_invariant
            .entry(ClassData::invariant_of(r))
            .or_default()
            .push(i);
    }
    let exponent = orders.iter().fold(1u64, |acc, &o| lcm(acc, o));
    let identity_class = orders
        .iter()
        .position(|&o| o == 1)
        .ok_or_else(|| Error::Internal("missing identity class".into()))?;

    let mut partial = ClassData {
        reps,
        sizes,
        orders,
        inverse_map: Vec::new(),
        power_maps: Vec::new(),
        exponent,
        identity_class,
        element_index,
        by_invariant,
    };
    let mut inverse_map = Vec::with_capacity(k);
    for i in 0..k {
        inverse_map.push(class_of(g, &partial, &partial.reps[i].inverse())?);
    }
    let mut power_maps = Vec::new();
    for (p, _) in factor(exponent) {
        let mut map = Vec::with_capacity(k);
        for i in 0..k {
            map.push(class_of(g, &partial, &partial.reps[i].pow(p as i64))?);
        }
        power_maps.push((p, map));
    }
    partial.inverse_map = inverse_map;
    partial.power_maps = power_maps;
    Ok(partial)
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
    fn s4_classes() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let cd = conjugacy_classes(&s4, &Limits::default()).unwrap();
        assert_eq!(cd.len(), 5);
        let mut sizes = cd.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        assert_eq!(cd.sizes.iter().sum::<u64>(), 24);
    }

    #[test]
    fn a5_classes() {
        let a5 = grp(&["(1,2,3)", "(3,4,5)"], 5);
        let cd = conjugacy_classes(&a5, &Limits::default()).unwrap();
        assert_eq!(cd.len(), 5);
        let mut sizes = cd.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn trivial_group_classes() {
        let t = PermGroup::trivial(3);
        let cd = conjugacy_classes(&t, &Limits::default()).unwrap();
        assert_eq!(cd.len(), 1);
        assert_eq!(cd.identity_class, 0);
    }

    #[test]
    fn sampled_path_matches_enumeration() {
        // force the sampled path with a tiny full-enum limit
        let a5 = grp(&["(1,2,3)", "(3,4,5)"], 5);
        let mut limits = Limits::default();
        limits.class_full_enum = 10;
        let cd = conjugacy_classes(&a5, &limits).unwrap();
        assert_eq!(cd.len(), 5);
        assert_eq!(cd.sizes.iter().sum::<u64>(), 60);
    }

    #[test]
    fn inverse_and_power_maps() {
        let c7 = grp(&["(1,2,3,4,5,6,7)"], 7);
        let cd = conjugacy_classes(&c7, &Limits::default()).unwrap();
        assert_eq!(cd.len(), 7);
        for i in 0..7 {
            // inverse map is an involution; sizes invariant
            assert_eq!(cd.inverse_map[cd.inverse_map[i]], i);
            assert_eq!(cd.sizes[cd.inverse_map[i]], cd.sizes[i]);
        }
        // class_of_power agrees with direct identification
        let g = &cd.reps[1];
        let i6 = class_of(&c7, &cd, &g.pow(6)).unwrap();
        assert_eq!(class_of_power(&c7, &cd, 1, 6).unwrap(), i6);
        assert_eq!(class_of_power(&c7, &cd, 1, 7).unwrap(), cd.identity_class);
    }
}
