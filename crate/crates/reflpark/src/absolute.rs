//! Reflection length, absolute order, the lattice NC(W,c), Kreweras
//! complement, parabolic subgroups, and canonical coset representatives.
//!
//! Reflection length is computed once per context as breadth-first distance
//! from the identity in the Cayley graph on all reflections; everything else
//! reduces to lookups in that table plus the additivity test
//! u ≤ v ⇔ ℓ(u) + ℓ(u⁻¹v) = ℓ(v).

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::group::{ColoredElement, ElemId, GroupContext};
use crate::Result;

/// Reflection lengths for the whole group, indexed by element id.
pub fn length_table(ctx: &GroupContext) -> Result<&[u32]> {
    if let Some(t) = ctx.lengths.get() {
        return Ok(t.as_slice());
    }
    let elts = ctx.elements()?;
    ctx.id_of(&ctx.identity())?;
    Ok(ctx
        .lengths
        .get_or_init(|| {
            let mut dist = vec![u32::MAX; elts.len()];
            let start = ctx.id_of(&ctx.identity()).expect("identity present");
            dist[start as usize] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(id) = queue.pop_front() {
                let w = ctx.element(id).clone();
                let next_dist = dist[id as usize] + 1;
                for t in ctx.reflections() {
                    let wt = ctx.compose(&w, t);
                    let wt_id = ctx.id_of(&wt).expect("group closed under multiplication");
                    if dist[wt_id as usize] == u32::MAX {
                        dist[wt_id as usize] = next_dist;
                        queue.push_back(wt_id);
                    }
                }
            }
            assert!(
                dist.iter().all(|&x| x != u32::MAX),
                "reflections must generate the group"
            );
            dist
        })
        .as_slice())
}

/// Reflection length of a single element.
pub fn length(ctx: &GroupContext, w: &ColoredElement) -> Result<u32> {
    let table = length_table(ctx)?;
    Ok(table[ctx.id_of(w)? as usize])
}

/// Absolute order: u ≤ v iff lengths add along u, u⁻¹v, v.
pub fn abs_leq(ctx: &GroupContext, u: &ColoredElement, v: &ColoredElement) -> Result<bool> {
    let table = length_table(ctx)?;
    let lu = table[ctx.id_of(u)? as usize];
    let lv = table[ctx.id_of(v)? as usize];
    if lu > lv {
        return Ok(false);
    }
    let quotient = ctx.compose(&ctx.inverse(u), v);
    let lq = table[ctx.id_of(&quotient)? as usize];
    Ok(lu + lq == lv)
}

/// The noncrossing partition lattice NC(W,c) = [e, c], as sorted element ids.
pub fn nc_interval(ctx: &GroupContext) -> Result<&[ElemId]> {
    if let Some(nc) = ctx.nc_sorted.get() {
        return Ok(nc.as_slice());
    }
    let elts = ctx.elements()?;
    length_table(ctx)?;
    let c = ctx.coxeter_element().clone();
    let mut member = vec![false; elts.len()];
    let mut ids = Vec::new();
    for (i, w) in elts.iter().enumerate() {
        if abs_leq(ctx, w, &c)? {
            member[i] = true;
            ids.push(i as ElemId);
        }
    }
    ctx.nc_member.get_or_init(|| member);
    Ok(ctx.nc_sorted.get_or_init(|| ids).as_slice())
}

/// Membership in NC(W,c), via the cached interval.
pub fn in_nc(ctx: &GroupContext, w: &ColoredElement) -> Result<bool> {
    nc_interval(ctx)?;
    let id = ctx.id_of(w)?;
    Ok(ctx.nc_member.get().expect("nc cache filled")[id as usize])
}

/// Kreweras complement K(w) = c·w⁻¹. A lattice anti-automorphism of
/// NC(W,c); K∘K is conjugation by c.
pub fn kreweras(ctx: &GroupContext, w: &ColoredElement) -> ColoredElement {
    ctx.compose(ctx.coxeter_element(), &ctx.inverse(w))
}

/// The parabolic subgroup W_π = ⟨t reflection : t ≤ π⟩, as sorted element
/// ids. Cached per π.
pub fn parabolic_subgroup(ctx: &GroupContext, pi: &ColoredElement) -> Result<Arc<Vec<ElemId>>> {
    let pi_id = ctx.id_of(pi)?;
    // Fill the whole map on first use: parking-function enumeration touches
    // every π ∈ NC anyway, and one pass keeps the cache lock-free afterwards.
    if ctx.parabolics.get().is_none() {
        length_table(ctx)?;
        let nc = nc_interval(ctx)?.to_vec();
        let mut map = HashMap::new();
        for id in nc {
            let pi = ctx.element(id).clone();
            let gens: Vec<ColoredElement> = ctx
                .reflections()
                .iter()
                .filter(|t| abs_leq(ctx, t, &pi).expect("table built"))
                .cloned()
                .collect();
            let subgroup = close_subgroup(ctx, &gens)?;
            map.insert(id, Arc::new(subgroup));
        }
        ctx.parabolics.get_or_init(|| map);
    }
    ctx.parabolics
        .get()
        .expect("parabolic cache filled")
        .get(&pi_id)
        .cloned()
        .ok_or_else(|| crate::Error::InvalidParameters(format!("element {pi} not in NC(W,c)")))
}

/// Subgroup closure of a generating set, as sorted element ids.
fn close_subgroup(ctx: &GroupContext, gens: &[ColoredElement]) -> Result<Vec<ElemId>> {
    let e_id = ctx.id_of(&ctx.identity())?;
    let mut seen: Vec<ElemId> = vec![e_id];
    let mut member = vec![false; ctx.elements()?.len()];
    member[e_id as usize] = true;
    let mut queue = VecDeque::from([e_id]);
    while let Some(id) = queue.pop_front() {
        let w = ctx.element(id).clone();
        for g in gens {
            let wg = ctx.compose(&w, g);
            let wg_id = ctx.id_of(&wg)?;
            if !member[wg_id as usize] {
                member[wg_id as usize] = true;
                seen.push(wg_id);
                queue.push_back(wg_id);
            }
        }
    }
    seen.sort_unstable();
    Ok(seen)
}

/// Least element of the coset w·H under the element ordering. Equal cosets
/// give equal representatives, which is what makes parking functions
/// comparable.
pub fn coset_min(ctx: &GroupContext, w: &ColoredElement, subgroup: &[ElemId]) -> ColoredElement {
    subgroup
        .iter()
        .map(|&h_id| ctx.compose(w, ctx.element(h_id)))
        .min()
        .expect("subgroup contains the identity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    fn ctx(family: Family, d: usize, n: usize) -> GroupContext {
        GroupContext::new(family, d, n).unwrap()
    }

    #[test]
    fn length_basics() {
        let g = ctx(Family::D1N, 3, 2);
        assert_eq!(length(&g, &g.identity()).unwrap(), 0);
        for t in g.reflections() {
            assert_eq!(length(&g, t).unwrap(), 1);
        }
        assert_eq!(length(&g, g.coxeter_element()).unwrap(), 2);
        // Lower bound by codimension of the fixed space, checked everywhere.
        for w in g.elements().unwrap() {
            let l = length(&g, w).unwrap() as usize;
            assert!(l >= g.n - g.dim_fix(w));
        }
    }

    #[test]
    fn length_symmetric_under_inverse() {
        let g = ctx(Family::DDN, 2, 3);
        for w in g.elements().unwrap() {
            assert_eq!(
                length(&g, w).unwrap(),
                length(&g, &g.inverse(w)).unwrap()
            );
        }
    }

    #[test]
    fn coxeter_length_is_rank() {
        for (family, d, n) in [
            (Family::D1N, 3, 2),
            (Family::D1N, 1, 3),
            (Family::DDN, 2, 3),
            (Family::DDN, 3, 2),
        ] {
            let g = ctx(family, d, n);
            assert_eq!(
                length(&g, g.coxeter_element()).unwrap() as usize,
                g.rank(),
                "{g}"
            );
        }
    }

    #[test]
    fn abs_leq_basics() {
        let g = ctx(Family::D1N, 3, 1);
        // Both nontrivial diagonal elements are reflections; neither is
        // below the other.
        let z1 = g.parse_element("1:1").unwrap();
        let z2 = g.parse_element("1:2").unwrap();
        assert!(!abs_leq(&g, &z2, &z1).unwrap());
        assert!(!abs_leq(&g, &z1, &z2).unwrap());
        for v in g.elements().unwrap() {
            assert!(abs_leq(&g, &g.identity(), v).unwrap());
            assert!(abs_leq(&g, v, v).unwrap());
        }
    }

    #[test]
    fn nc_sizes() {
        assert_eq!(nc_interval(&ctx(Family::D1N, 3, 1)).unwrap().len(), 2);
        assert_eq!(nc_interval(&ctx(Family::D1N, 3, 2)).unwrap().len(), 6);
        assert_eq!(nc_interval(&ctx(Family::DDN, 2, 4)).unwrap().len(), 50);
        assert_eq!(nc_interval(&ctx(Family::D1N, 1, 3)).unwrap().len(), 5);
    }

    #[test]
    fn nc_graded_by_corank_of_fixed_space() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::DDN, 2, 3), (Family::D1N, 2, 3)] {
            let g = ctx(family, d, n);
            for &id in nc_interval(&g).unwrap() {
                let w = g.element(id).clone();
                assert_eq!(
                    length(&g, &w).unwrap() as usize,
                    g.n - g.dim_fix(&w),
                    "{g}: {w}"
                );
            }
        }
    }

    #[test]
    fn kreweras_involution_properties() {
        let g = ctx(Family::D1N, 3, 2);
        let c = g.coxeter_element().clone();
        assert_eq!(kreweras(&g, &g.identity()), c);
        assert!(kreweras(&g, &c).is_identity());
        let n_rank = g.rank() as u32;
        for &id in nc_interval(&g).unwrap() {
            let w = g.element(id).clone();
            let kw = kreweras(&g, &w);
            assert!(in_nc(&g, &kw).unwrap());
            assert_eq!(length(&g, &kw).unwrap(), n_rank - length(&g, &w).unwrap());
            let kkw = kreweras(&g, &kw);
            let conj = g.compose(&g.compose(&c, &w), &g.inverse(&c));
            assert_eq!(kkw, conj);
        }
    }

    #[test]
    fn parabolic_subgroups() {
        let g = ctx(Family::D1N, 2, 2);
        assert_eq!(parabolic_subgroup(&g, &g.identity()).unwrap().len(), 1);
        assert_eq!(
            parabolic_subgroup(&g, g.coxeter_element()).unwrap().len(),
            8
        );
        let t = g.parse_element("2:0 1:0").unwrap();
        assert_eq!(parabolic_subgroup(&g, &t).unwrap().len(), 2);
    }

    #[test]
    fn parabolic_map_injective_and_contains_pi() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::DDN, 2, 3)] {
            let g = ctx(family, d, n);
            let mut seen: Vec<Vec<ElemId>> = Vec::new();
            for &id in nc_interval(&g).unwrap() {
                let pi = g.element(id).clone();
                let sub = parabolic_subgroup(&g, &pi).unwrap();
                assert!(sub.binary_search(&id).is_ok(), "π must lie in W_π");
                assert!(!seen.contains(&*sub), "π ↦ W_π collision in {g}");
                seen.push(sub.to_vec());
            }
        }
    }

    #[test]
    fn coset_min_is_coset_invariant() {
        let g = ctx(Family::D1N, 2, 2);
        let c = g.coxeter_element().clone();
        for &pi_id in nc_interval(&g).unwrap() {
            let pi = g.element(pi_id).clone();
            let sub = parabolic_subgroup(&g, &pi).unwrap();
            for w in g.elements().unwrap() {
                let rep = coset_min(&g, w, &sub);
                for &h_id in sub.iter() {
                    let wh = g.compose(w, g.element(h_id));
                    assert_eq!(coset_min(&g, &wh, &sub), rep);
                }
            }
        }
        let whole = parabolic_subgroup(&g, &c).unwrap();
        let global_min = g.elements().unwrap().first().unwrap().clone();
        assert_eq!(coset_min(&g, &c, &whole), global_min);
    }

    #[test]
    fn nc_is_a_lattice() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::D1N, 2, 3), (Family::DDN, 2, 3)] {
            let g = ctx(family, d, n);
            let nc: Vec<ColoredElement> = nc_interval(&g)
                .unwrap()
                .iter()
                .map(|&id| g.element(id).clone())
                .collect();
            for u in &nc {
                for v in &nc {
                    let lower: Vec<&ColoredElement> = nc
                        .iter()
                        .filter(|x| {
                            abs_leq(&g, x, u).unwrap() && abs_leq(&g, x, v).unwrap()
                        })
                        .collect();
                    let meets: Vec<&&ColoredElement> = lower
                        .iter()
                        .filter(|m| lower.iter().all(|x| abs_leq(&g, x, m).unwrap()))
                        .collect();
                    assert_eq!(meets.len(), 1, "meet of {u}, {v} in {g}");
                    let upper: Vec<&ColoredElement> = nc
                        .iter()
                        .filter(|x| {
                            abs_leq(&g, u, x).unwrap() && abs_leq(&g, v, x).unwrap()
                        })
                        .collect();
                    let joins: Vec<&&ColoredElement> = upper
                        .iter()
                        .filter(|m| upper.iter().all(|x| abs_leq(&g, m, x).unwrap()))
                        .collect();
                    assert_eq!(joins.len(), 1, "join of {u}, {v} in {g}");
                }
            }
        }
    }
}
