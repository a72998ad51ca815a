//! Noncrossing parking functions: pairs [w, π] of a noncrossing partition π
//! and a coset w·W_π of its parabolic subgroup, together with the two
//! commuting actions that make the set a W × C module. W acts by permuting
//! block labels; the cyclic group C = ⟨c⟩ acts by rotating the picture one
//! step clockwise.

use std::collections::HashMap;

use crate::absolute::{coset_min, in_nc, nc_interval, parabolic_subgroup};
use crate::group::{ColoredElement, ElemId, GroupContext, Point};
use crate::model::{omega, orbit_partition, SymPartition};
use crate::{Error, Result};

/// A noncrossing parking function [w, π]. `rep` is the canonical (least)
/// representative of the coset w·W_π, so derived equality is coset equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParkingFunction {
    pub pi: ElemId,
    pub rep: ColoredElement,
}

impl ParkingFunction {
    /// Build [w, π], canonicalizing the representative. π must be in the
    /// noncrossing interval.
    pub fn new(ctx: &GroupContext, w: &ColoredElement, pi: &ColoredElement) -> Result<Self> {
        let pi_id = ctx.id_of(pi)?;
        if !in_nc(ctx, pi)? {
            return Err(Error::Invariant(format!("{pi} is not below the Coxeter element")));
        }
        let sub = parabolic_subgroup(ctx, pi)?;
        Ok(ParkingFunction {
            pi: pi_id,
            rep: coset_min(ctx, w, &sub),
        })
    }

    pub fn pi_element<'a>(&self, ctx: &'a GroupContext) -> &'a ColoredElement {
        ctx.element(self.pi)
    }

    /// The circular model of π.
    pub fn model(&self, ctx: &GroupContext) -> Result<SymPartition> {
        orbit_partition(ctx, self.pi_element(ctx))
    }

    /// Blocks of the model together with their labels w(B). The label set
    /// does not depend on the choice of coset representative because W_π
    /// stabilizes every block setwise.
    pub fn labels(&self, ctx: &GroupContext) -> Result<Vec<(Vec<Point>, Vec<Point>)>> {
        let p = self.model(ctx)?;
        Ok(p
            .blocks()
            .iter()
            .map(|block| {
                let mut image: Vec<Point> =
                    block.iter().map(|&pt| self.rep.apply(pt, ctx.d)).collect();
                image.sort_unstable();
                (block.clone(), image)
            })
            .collect())
    }

    /// Text form `w=<element> ; pi=<partition>`.
    pub fn to_text(&self, ctx: &GroupContext) -> Result<String> {
        Ok(format!(
            "w={} ; pi={}",
            self.rep,
            self.model(ctx)?.to_text()
        ))
    }

    pub fn parse(ctx: &GroupContext, text: &str) -> Result<Self> {
        let (wpart, pipart) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse("expected `w=... ; pi=...`".into()))?;
        let wtext = wpart
            .trim()
            .strip_prefix("w=")
            .ok_or_else(|| Error::Parse("missing `w=`".into()))?;
        let pitext = pipart
            .trim()
            .strip_prefix("pi=")
            .ok_or_else(|| Error::Parse("missing `pi=`".into()))?;
        let w = ctx.parse_element(wtext)?;
        let (m, center) = match ctx.family {
            crate::group::Family::D1N => (ctx.n, false),
            crate::group::Family::DDN => (ctx.n - 1, true),
        };
        let p = SymPartition::parse(ctx.d, m, center, pitext)?;
        let pi = omega(ctx, &p)?;
        ParkingFunction::new(ctx, &w, &pi)
    }
}

/// All noncrossing parking functions of the group, grouped by π in interval
/// order, each coset listed once through its canonical representative.
pub fn enumerate_park(ctx: &GroupContext) -> Result<Vec<ParkingFunction>> {
    let nc = nc_interval(ctx)?;
    let order = ctx.elements()?.len();
    let mut total: u128 = 0;
    for &pi in nc {
        let sub = parabolic_subgroup(ctx, ctx.element(pi))?;
        total += (order / sub.len()) as u128;
        if total > ctx.cap() {
            return Err(Error::CapExceeded { needed: total, cap: ctx.cap() });
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    for &pi in nc {
        let sub = parabolic_subgroup(ctx, ctx.element(pi))?;
        // Element ids are assigned in sorted order, so the first unmarked id
        // of each coset is its canonical representative.
        let mut marked = vec![false; order];
        for w in 0..order as ElemId {
            if marked[w as usize] {
                continue;
            }
            let welt = ctx.element(w);
            for &h in sub.iter() {
                let prod = ctx.compose(welt, ctx.element(h));
                marked[ctx.id_of(&prod)? as usize] = true;
            }
            out.push(ParkingFunction { pi, rep: welt.clone() });
        }
    }
    Ok(out)
}

/// The W-action v · [w, π] = [vw, π].
pub fn act_w(ctx: &GroupContext, v: &ColoredElement, pf: &ParkingFunction) -> Result<ParkingFunction> {
    let w = ctx.compose(v, &pf.rep);
    ParkingFunction::new(ctx, &w, pf.pi_element(ctx))
}

/// The C-action c^p · [w, π] = [w·c^{−p}, c^p π c^{−p}]; on models it is a
/// clockwise rotation by p steps.
pub fn act_c(ctx: &GroupContext, p: i64, pf: &ParkingFunction) -> Result<ParkingFunction> {
    let cp = ctx.coxeter_power(p);
    let cp_inv = ctx.coxeter_power(-p);
    let w = ctx.compose(&pf.rep, &cp_inv);
    let pi = ctx.compose(&ctx.compose(&cp, pf.pi_element(ctx)), &cp_inv);
    ParkingFunction::new(ctx, &w, &pi)
}

/// W-orbits of Park^NC: one representative per orbit (the parking function
/// with the identity coset) and the orbit size. Since the W-action is
/// transitive on cosets and fixes π, orbits correspond to noncrossing
/// partitions; the breadth-first sweep below verifies that instead of
/// assuming it.
pub fn orbit_decomposition(ctx: &GroupContext) -> Result<Vec<(ParkingFunction, usize)>> {
    let all = enumerate_park(ctx)?;
    let index: HashMap<(ElemId, ColoredElement), usize> = all
        .iter()
        .enumerate()
        .map(|(i, pf)| ((pf.pi, pf.rep.clone()), i))
        .collect();
    let gens: Vec<ColoredElement> = ctx.reflections().to_vec();
    let mut orbit_of = vec![usize::MAX; all.len()];
    let mut orbits: Vec<(ParkingFunction, usize)> = Vec::new();
    for start in 0..all.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let orbit_idx = orbits.len();
        let mut queue = vec![start];
        orbit_of[start] = orbit_idx;
        let mut size = 0;
        let mut least = start;
        while let Some(i) = queue.pop() {
            size += 1;
            if all[i].rep < all[least].rep || (all[i].rep == all[least].rep && all[i].pi < all[least].pi) {
                least = i;
            }
            for t in &gens {
                let next = act_w(ctx, t, &all[i])?;
                let j = index[&(next.pi, next.rep)];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = orbit_idx;
                    queue.push(j);
                }
            }
        }
        orbits.push((all[least].clone(), size));
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    fn ctx(family: Family, d: usize, n: usize) -> GroupContext {
        GroupContext::new(family, d, n).unwrap()
    }

    fn g316() -> &'static GroupContext {
        crate::testutil::g316()
    }

    fn fig4(g: &GroupContext) -> ParkingFunction {
        let w = g.parse_element("2:1 3:2 1:0 5:1 6:1 4:1").unwrap();
        let p = SymPartition::parse(
            3,
            6,
            false,
            "1.1,4.1,5.1|2.1,3.1|1.2,4.2,5.2|2.2,3.2|1.3,4.3,5.3|2.3,3.3|6.1,6.2,6.3",
        )
        .unwrap();
        let pi = omega(g, &p).unwrap();
        ParkingFunction::new(g, &w, &pi).unwrap()
    }

    fn label_of(ctx: &GroupContext, pf: &ParkingFunction, point: Point) -> Vec<Point> {
        pf.labels(ctx)
            .unwrap()
            .into_iter()
            .find(|(block, _)| block.contains(&point))
            .map(|(_, label)| label)
            .unwrap()
    }

    #[test]
    fn park_counts() {
        let cases = [
            (Family::D1N, 2, 1, 3),
            (Family::DDN, 3, 2, 16),
            (Family::D1N, 3, 2, 49),
            (Family::D1N, 2, 2, 25),
        ];
        for (family, d, n, expected) in cases {
            let g = ctx(family, d, n);
            let park = enumerate_park(&g).unwrap();
            assert_eq!(park.len(), expected, "{g}");
            // The same count from the coset-size formula.
            let by_formula: usize = nc_interval(&g)
                .unwrap()
                .iter()
                .map(|&pi| {
                    g.elements().unwrap().len()
                        / parabolic_subgroup(&g, g.element(pi)).unwrap().len()
                })
                .sum();
            assert_eq!(by_formula, expected, "{g}");
            // No duplicates.
            let mut seen = std::collections::HashSet::new();
            for pf in &park {
                assert!(seen.insert((pf.pi, pf.rep.clone())));
                let sub = parabolic_subgroup(&g, g.element(pf.pi)).unwrap();
                assert_eq!(coset_min(&g, &pf.rep, &sub), pf.rep);
            }
        }
    }

    #[test]
    fn cap_stops_enumeration() {
        let g = ctx(Family::D1N, 3, 2).with_cap(10);
        assert!(matches!(enumerate_park(&g), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn figure_action_of_v() {
        let g = g316();
        let pf = fig4(g);
        // The block labels of the starting parking function.
        assert_eq!(label_of(g, &pf, (0, 0)), vec![(1, 1), (4, 1), (5, 1)]);
        assert_eq!(label_of(g, &pf, (1, 0)), vec![(0, 0), (2, 2)]);
        assert_eq!(label_of(g, &pf, (5, 0)), vec![(3, 0), (3, 1), (3, 2)]);

        let v = g.parse_element("4:0 3:1 2:2 1:0 6:0 5:0").unwrap();
        let moved = act_w(g, &v, &pf).unwrap();
        assert_eq!(moved.pi, pf.pi);
        assert_eq!(label_of(g, &moved, (0, 0)), vec![(2, 2), (4, 1), (5, 1)]);
        assert_eq!(label_of(g, &moved, (1, 0)), vec![(1, 1), (3, 0)]);
        assert_eq!(label_of(g, &moved, (5, 0)), vec![(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn figure_action_of_c() {
        let g = g316();
        let pf = fig4(g);
        let turned = act_c(g, 1, &pf).unwrap();
        // The model rotates one step clockwise and keeps its labels.
        assert_eq!(turned.model(g).unwrap(), pf.model(g).unwrap().rotate());
        assert_eq!(label_of(g, &turned, (1, 0)), vec![(1, 1), (4, 1), (5, 1)]);
        assert_eq!(label_of(g, &turned, (2, 0)), vec![(0, 0), (2, 2)]);
        assert_eq!(label_of(g, &turned, (0, 0)), vec![(3, 0), (3, 1), (3, 2)]);
    }

    #[test]
    fn c_action_has_order_h() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::DDN, 2, 3)] {
            let g = ctx(family, d, n);
            for pf in enumerate_park(&g).unwrap() {
                assert_eq!(act_c(&g, g.h as i64, &pf).unwrap(), pf, "{g}");
                assert_eq!(
                    act_c(&g, 1, &act_c(&g, -1, &pf).unwrap()).unwrap(),
                    pf,
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn rotation_matches_model_rotation_everywhere() {
        for (family, d, n) in [(Family::D1N, 2, 3), (Family::DDN, 3, 2)] {
            let g = ctx(family, d, n);
            for pf in enumerate_park(&g).unwrap() {
                let turned = act_c(&g, 1, &pf).unwrap();
                assert_eq!(turned.model(&g).unwrap(), pf.model(&g).unwrap().rotate());
            }
        }
    }

    #[test]
    fn actions_commute() {
        let g = ctx(Family::D1N, 2, 2);
        let park = enumerate_park(&g).unwrap();
        let elements: Vec<ColoredElement> =
            (0..g.elements().unwrap().len() as ElemId).map(|i| g.element(i).clone()).collect();
        for pf in &park {
            for v in &elements {
                for p in [1i64, 3] {
                    let a = act_w(&g, v, &act_c(&g, p, pf).unwrap()).unwrap();
                    let b = act_c(&g, p, &act_w(&g, v, pf).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn w_action_is_a_group_action() {
        let g = ctx(Family::DDN, 2, 3);
        let park = enumerate_park(&g).unwrap();
        let u = g.parse_element("2:1 1:1 3:0").unwrap();
        let v = g.parse_element("1:1 3:0 2:1").unwrap();
        let uv = g.compose(&u, &v);
        for pf in &park {
            assert_eq!(act_w(&g, &g.identity(), pf).unwrap(), *pf);
            assert_eq!(
                act_w(&g, &u, &act_w(&g, &v, pf).unwrap()).unwrap(),
                act_w(&g, &uv, pf).unwrap()
            );
        }
    }

    #[test]
    fn orbit_structure() {
        let cases = [
            (Family::DDN, 3, 2, 5),
            (Family::D1N, 2, 1, 2),
            (Family::D1N, 3, 2, 6),
        ];
        for (family, d, n, expected_orbits) in cases {
            let g = ctx(family, d, n);
            let orbits = orbit_decomposition(&g).unwrap();
            assert_eq!(orbits.len(), expected_orbits, "{g}");
            assert_eq!(orbits.len(), nc_interval(&g).unwrap().len(), "{g}");
            let total: usize = orbits.iter().map(|(_, s)| s).sum();
            assert_eq!(total, enumerate_park(&g).unwrap().len(), "{g}");
            if (family, d, n) == (Family::D1N, 2, 1) {
                let mut sizes: Vec<usize> = orbits.iter().map(|(_, s)| *s).collect();
                sizes.sort_unstable();
                assert_eq!(sizes, vec![1, 2]);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let g = g316();
        let pf = fig4(g);
        let text = pf.to_text(g).unwrap();
        assert_eq!(ParkingFunction::parse(g, &text).unwrap(), pf);
        assert!(ParkingFunction::parse(g, "w=1:0").is_err());
    }
}
