//! Circular models of noncrossing partitions: d-symmetric set partitions of
//! the colored points on a circle, with openers, zero blocks, the
//! correspondence with group elements (orbits one way, clockwise cycles the
//! other), and the centered variant for G(d,d,n) where the last number sits
//! at the center of the circle.
//!
//! Circle geometry is pure modular arithmetic. A circle holding numbers
//! 1..m in d colors has d·m positions; clockwise, the numbers increase
//! within a color segment and the segments carry colors 1, d, d−1, …, 2.
//! Under that layout a one-step clockwise rotation of the picture is
//! exactly conjugation by the Coxeter element, and a one-color shift of
//! every point is a rotation by m positions, so color symmetry and
//! rotation interact the way the bijections need.

use std::collections::HashMap;

use crate::group::{ColoredElement, Family, GroupContext, Point};
use crate::{Error, Result};

/// Position bookkeeping for a circle with `m` numbers in `d` colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleLayout {
    pub d: usize,
    pub m: usize,
}

impl CircleLayout {
    pub fn new(d: usize, m: usize) -> Self {
        CircleLayout { d, m }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.d * self.m
    }

    fn segment_of_color(&self, b: usize) -> usize {
        if b == 0 {
            0
        } else {
            self.d - b
        }
    }

    /// Clockwise position of the point (number, color), both 0-based.
    pub fn pos(&self, p: Point) -> usize {
        debug_assert!(p.0 < self.m && p.1 < self.d);
        self.segment_of_color(p.1) * self.m + p.0
    }

    /// Point at a clockwise position.
    pub fn point(&self, pos: usize) -> Point {
        debug_assert!(pos < self.len());
        let seg = pos / self.m;
        let b = if seg == 0 { 0 } else { self.d - seg };
        (pos % self.m, b)
    }

    /// Clockwise successor.
    pub fn succ(&self, pos: usize) -> usize {
        (pos + 1) % self.len()
    }
}

/// A set partition of the colored points of a circle model, plus, when
/// `center` is set, of the d center points carrying number `m` (the
/// centered model used by G(d,d,n)).
///
/// The block list is canonical (points sorted, blocks ordered by least
/// point), so equality and hashing are structural. Construction checks only
/// that the blocks partition the point set; [`SymPartition::validate`]
/// decides whether the partition is an actual noncrossing symmetric model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymPartition {
    pub d: usize,
    pub m: usize,
    pub center: bool,
    blocks: Vec<Vec<Point>>,
}

impl SymPartition {
    pub fn new(d: usize, m: usize, center: bool, mut blocks: Vec<Vec<Point>>) -> Result<Self> {
        let total = d * m + if center { d } else { 0 };
        let mut seen = vec![false; d * (m + 1)];
        let mut count = 0;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Invariant("empty block".into()));
            }
            block.sort_unstable();
            for &(a, b) in block.iter() {
                let limit = if center { m + 1 } else { m };
                if a >= limit || b >= d {
                    return Err(Error::Invariant(format!(
                        "point ({a},{b}) outside the model"
                    )));
                }
                let idx = a * d + b;
                if seen[idx] {
                    return Err(Error::Invariant(format!("point ({a},{b}) repeated")));
                }
                seen[idx] = true;
                count += 1;
            }
        }
        if count != total {
            return Err(Error::Invariant(format!(
                "blocks cover {count} of {total} points"
            )));
        }
        blocks.sort_unstable();
        Ok(SymPartition { d, m, center, blocks })
    }

    /// All-singletons partition (the model of the identity).
    pub fn singletons(d: usize, m: usize, center: bool) -> Self {
        let limit = if center { m + 1 } else { m };
        let blocks = (0..limit)
            .flat_map(|a| (0..d).map(move |b| vec![(a, b)]))
            .collect();
        SymPartition::new(d, m, center, blocks).expect("singletons are a partition")
    }

    pub fn layout(&self) -> CircleLayout {
        CircleLayout::new(self.d, self.m)
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn len_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing a point.
    pub fn block_of(&self, p: Point) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&p).is_ok())
            .expect("point inside the model")
    }

    fn shift_block(&self, block: &[Point], s: usize) -> Vec<Point> {
        let mut out: Vec<Point> = block
            .iter()
            .map(|&(a, b)| (a, (b + s) % self.d))
            .collect();
        out.sort_unstable();
        out
    }

    /// Index of the block that is `block` with every color shifted by `s`,
    /// if it exists.
    pub fn shifted_block_index(&self, idx: usize, s: usize) -> Option<usize> {
        let target = self.shift_block(&self.blocks[idx], s);
        self.blocks.binary_search(&target).ok()
    }

    /// The rotation-invariant block, if present. Always `None` for d = 1,
    /// where the color group is trivial and the notion degenerates.
    pub fn zero_block(&self) -> Option<usize> {
        if self.d == 1 {
            return None;
        }
        self.blocks
            .iter()
            .position(|b| self.shift_block(b, 1) == *b)
    }

    /// Apply a point map to every point (the map must be a bijection of the
    /// model's point set).
    fn map_points<F: Fn(Point) -> Point>(&self, f: F) -> SymPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| f(p)).collect())
            .collect();
        SymPartition::new(self.d, self.m, self.center, blocks).expect("bijection keeps a partition")
    }

    /// One-step clockwise rotation of the picture: circle points advance one
    /// position, center points advance one color.
    pub fn rotate(&self) -> SymPartition {
        let layout = self.layout();
        self.map_points(|(a, b)| {
            if a == self.m {
                (a, (b + 1) % self.d)
            } else {
                layout.point(layout.succ(layout.pos((a, b))))
            }
        })
    }

    /// Shift every point's color by one.
    pub fn color_rotate(&self) -> SymPartition {
        self.map_points(|(a, b)| (a, (b + 1) % self.d))
    }

    /// Whether the partition is a valid model: closed under the color shift,
    /// block color stabilizers trivial or full, at most one invariant block,
    /// circle blocks pairwise noncrossing, and (centered models) equal to
    /// the labelling of its own unlabelling.
    pub fn validate(&self) -> bool {
        // Color symmetry and stabilizer discipline.
        let mut zero_blocks = 0;
        for (i, block) in self.blocks.iter().enumerate() {
            if self.shifted_block_index(i, 1).is_none() {
                return false;
            }
            if self.d > 1 {
                let full = self.shift_block(block, 1) == *block;
                if full {
                    zero_blocks += 1;
                } else {
                    for s in 2..self.d {
                        if self.shift_block(block, s) == *block {
                            return false;
                        }
                    }
                }
            }
        }
        if zero_blocks > 1 {
            return false;
        }
        // Pairwise circle crossing test.
        let layout = self.layout();
        let circle_blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut pos: Vec<usize> = b
                    .iter()
                    .filter(|&&(a, _)| a < self.m)
                    .map(|&p| layout.pos(p))
                    .collect();
                pos.sort_unstable();
                pos
            })
            .collect();
        for i in 0..circle_blocks.len() {
            for j in (i + 1)..circle_blocks.len() {
                if blocks_cross(&circle_blocks[i], &circle_blocks[j]) {
                    return false;
                }
            }
        }
        if self.center {
            // Centered validity: the base picture (center points removed,
            // their host block remembered) must itself be a valid model and
            // must label back to exactly this partition.
            match ddn_unlabel(self) {
                Ok((base, star)) => {
                    base.validate()
                        && ddn_label(&base, star).map(|p| p == *self).unwrap_or(false)
                }
                Err(_) => false,
            }
        } else {
            true
        }
    }

    /// Canonical text form: blocks separated by `|`, points `number.color`
    /// (1-based), e.g. `1.1,4.1,5.1|2.1,3.1`.
    pub fn to_text(&self) -> String {
        self.blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&(a, b)| format!("{}.{}", a + 1, b + 1))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Strict parser for the text form; every point must appear exactly once.
    pub fn parse(d: usize, m: usize, center: bool, text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for chunk in text.split('|') {
            let mut block = Vec::new();
            for tok in chunk.split(',') {
                let tok = tok.trim();
                let (num, col) = tok
                    .split_once('.')
                    .ok_or_else(|| Error::Parse(format!("point `{tok}` is not of the form i.j")))?;
                let a: usize = num
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number in `{tok}`")))?;
                let b: usize = col
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad color in `{tok}`")))?;
                let limit = if center { m + 1 } else { m };
                if a < 1 || a > limit {
                    return Err(Error::Parse(format!("number {a} out of range 1..={limit}")));
                }
                if b < 1 || b > d {
                    return Err(Error::Parse(format!("color {b} out of range 1..={d}")));
                }
                block.push((a - 1, b - 1));
            }
            blocks.push(block);
        }
        SymPartition::new(d, m, center, blocks)
    }
}

/// Cyclic alternation test: two disjoint sorted position lists cross iff,
/// read around the circle, they change hands more than twice.
fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let mut merged: Vec<(usize, bool)> = a
        .iter()
        .map(|&p| (p, false))
        .chain(b.iter().map(|&p| (p, true)))
        .collect();
    merged.sort_unstable();
    let mut changes = 0;
    for i in 0..merged.len() {
        let next = (i + 1) % merged.len();
        if merged[i].1 != merged[next].1 {
            changes += 1;
        }
    }
    changes > 2
}

/// The model of a group element: orbits of ⟨w⟩ on the colored points, with
/// the orbits of unbalanced number-cycles (net color shift ≠ 0) merged into
/// the zero block. At most one cycle may be unbalanced for G(d,1,n); for
/// G(d,d,n) either none is or exactly two are, one of them through the
/// center number.
pub fn orbit_partition(ctx: &GroupContext, w: &ColoredElement) -> Result<SymPartition> {
    let d = ctx.d;
    let (m, center) = match ctx.family {
        Family::D1N => (ctx.n, false),
        Family::DDN => (ctx.n - 1, true),
    };
    let cycles = w.cycles();
    let mut unbalanced: Vec<&Vec<usize>> = Vec::new();
    let mut blocks: Vec<Vec<Point>> = Vec::new();
    for cycle in &cycles {
        let net: usize = cycle.iter().map(|&a| w.shift(a)).sum::<usize>() % d;
        if net != 0 {
            unbalanced.push(cycle);
            continue;
        }
        // A balanced cycle carries d disjoint orbits, one per starting color.
        for b0 in 0..d {
            let mut block = Vec::new();
            let mut p = (cycle[0], b0);
            loop {
                block.push(p);
                p = w.apply(p, d);
                if p == (cycle[0], b0) {
                    break;
                }
            }
            blocks.push(block);
        }
    }
    match ctx.family {
        Family::D1N => {
            if unbalanced.len() > 1 {
                return Err(Error::Invariant(format!(
                    "element {w} has {} unbalanced cycles; its orbit model has no zero block",
                    unbalanced.len()
                )));
            }
        }
        Family::DDN => {
            if !(unbalanced.is_empty()
                || (unbalanced.len() == 2
                    && unbalanced.iter().filter(|cyc| cyc.contains(&(ctx.n - 1))).count() == 1))
            {
                return Err(Error::Invariant(format!(
                    "element {w} has an unexpected unbalanced cycle pattern"
                )));
            }
        }
    }
    if !unbalanced.is_empty() {
        let zero: Vec<Point> = unbalanced
            .iter()
            .flat_map(|cycle| cycle.iter().flat_map(|&a| (0..d).map(move |b| (a, b))))
            .collect();
        blocks.push(zero);
    }
    SymPartition::new(d, m, center, blocks)
}

/// Openers of the non-zero blocks: block index → the point just after the
/// block's largest cyclic gap on the circle, which is where the block's
/// left parenthesis sits. For d = 1 the opener is the least position. A
/// tied largest gap for d ≥ 2 is a hard error: the rule would be ambiguous
/// and the model is outside the verified domain.
pub fn openers(p: &SymPartition) -> Result<HashMap<usize, Point>> {
    let layout = p.layout();
    let circle_len = layout.len();
    let zero = p.zero_block();
    let mut out = HashMap::new();
    for (idx, block) in p.blocks().iter().enumerate() {
        if Some(idx) == zero {
            continue;
        }
        let mut pos: Vec<usize> = block
            .iter()
            .filter(|&&(a, _)| a < p.m)
            .map(|&pt| layout.pos(pt))
            .collect();
        if pos.is_empty() {
            // A center-only block (a singleton at the center) has no opener.
            continue;
        }
        pos.sort_unstable();
        let opener_pos = if p.d == 1 {
            pos[0]
        } else {
            let gaps: Vec<usize> = (0..pos.len())
                .map(|i| {
                    let prev = pos[(i + pos.len() - 1) % pos.len()];
                    (pos[i] + circle_len - prev) % circle_len
                })
                .map(|g| if g == 0 { circle_len } else { g })
                .collect();
            let best = *gaps.iter().max().expect("nonempty");
            let winners: Vec<usize> = (0..pos.len()).filter(|&i| gaps[i] == best).collect();
            if winners.len() != 1 {
                return Err(Error::Invariant(format!(
                    "largest-gap tie for block {:?}; opener undefined",
                    block
                )));
            }
            pos[winners[0]]
        };
        out.insert(idx, layout.point(opener_pos));
    }
    Ok(out)
}

/// Read a model back into the group element whose orbits it describes: each
/// block becomes the cycle sending every point to its clockwise successor
/// within the block. In centered models a block's single center point is
/// visited right after the block's last circle point (just before the wrap
/// back to the opener), and the zero block splits into its circle cycle
/// plus the color rotation on the center points.
pub fn omega(ctx: &GroupContext, p: &SymPartition) -> Result<ColoredElement> {
    let expected = match ctx.family {
        Family::D1N => (ctx.n, false),
        Family::DDN => (ctx.n - 1, true),
    };
    if (p.m, p.center) != expected || p.d != ctx.d {
        return Err(Error::Invariant(format!(
            "partition shape ({}, {}, center={}) does not match {ctx}",
            p.d, p.m, p.center
        )));
    }
    if !p.validate() {
        return Err(Error::Invariant(
            "crossing or asymmetric partition rejected".into(),
        ));
    }
    let layout = p.layout();
    let zero = p.zero_block();
    let opener_map = openers(p)?;
    let mut image: Vec<Option<Point>> = vec![None; (p.m + 1) * p.d];
    let mut set = |from: Point, to: Point| -> Result<()> {
        let slot = &mut image[from.0 * p.d + from.1];
        if slot.is_some() {
            return Err(Error::Invariant(format!(
                "point ({},{}) mapped twice",
                from.0, from.1
            )));
        }
        *slot = Some(to);
        Ok(())
    };
    for (idx, block) in p.blocks().iter().enumerate() {
        let mut circle: Vec<usize> = block
            .iter()
            .filter(|&&(a, _)| a < p.m)
            .map(|&pt| layout.pos(pt))
            .collect();
        circle.sort_unstable();
        let centers: Vec<Point> = block.iter().filter(|&&(a, _)| a == p.m).copied().collect();
        if Some(idx) == zero {
            for (i, &pos) in circle.iter().enumerate() {
                let next = circle[(i + 1) % circle.len()];
                set(layout.point(pos), layout.point(next))?;
            }
            for &(a, b) in &centers {
                set((a, b), (a, (b + 1) % p.d))?;
            }
            continue;
        }
        if centers.len() > 1 {
            return Err(Error::Invariant(
                "a non-invariant block holds several center points".into(),
            ));
        }
        if circle.is_empty() {
            // Center singleton: a fixed point of the element.
            let &(a, b) = centers.first().expect("nonempty block");
            set((a, b), (a, b))?;
            continue;
        }
        // Rotate so the opener comes first, then thread the cycle through
        // the center point (if any) at the end of the arc.
        let opener_pos = layout.pos(opener_map[&idx]);
        let start = circle.binary_search(&opener_pos).expect("opener in block");
        let ordered: Vec<Point> = (0..circle.len())
            .map(|i| layout.point(circle[(start + i) % circle.len()]))
            .collect();
        for i in 0..ordered.len() {
            if i + 1 < ordered.len() {
                set(ordered[i], ordered[i + 1])?;
            } else if let Some(&ctr) = centers.first() {
                set(ordered[i], ctr)?;
                set(ctr, ordered[0])?;
            } else {
                set(ordered[i], ordered[0])?;
            }
        }
    }
    // Collapse the point map to a monomial element, checking that all d
    // copies of each number agree.
    let n = ctx.n;
    let mut sigma = vec![usize::MAX; n];
    let mut shift = vec![0usize; n];
    for a in 0..n {
        for b in 0..p.d {
            let (a2, b2) = image[a * p.d + b].ok_or_else(|| {
                Error::Invariant(format!("point ({a},{b}) not covered"))
            })?;
            let s = (b2 + p.d - b) % p.d;
            if b == 0 {
                sigma[a] = a2;
                shift[a] = s;
            } else if sigma[a] != a2 || shift[a] != s {
                return Err(Error::Invariant(format!(
                    "block cycles are not color-equivariant at number {}",
                    a + 1
                )));
            }
        }
    }
    let w = ColoredElement { sigma, shift };
    if !ctx.contains(&w) {
        return Err(Error::Invariant(format!("cycle element {w} not in {ctx}")));
    }
    Ok(w)
}

/// Attach the center points to a base picture: the block `star` (the one
/// marked by the unlabelled center) receives the first center color, and
/// each color-shifted copy of it receives the corresponding shifted center
/// point. With `star = None` the center points become singletons.
pub fn ddn_label(base: &SymPartition, star: Option<usize>) -> Result<SymPartition> {
    if base.center {
        return Err(Error::Invariant("base picture already has a center".into()));
    }
    if !base.validate() {
        return Err(Error::Invariant("base picture is not a valid model".into()));
    }
    let d = base.d;
    let m = base.m;
    let mut blocks: Vec<Vec<Point>> = base.blocks().to_vec();
    match star {
        None => {
            for b in 0..d {
                blocks.push(vec![(m, b)]);
            }
        }
        Some(star_idx) => {
            if star_idx >= blocks.len() {
                return Err(Error::Invariant(format!("no block with index {star_idx}")));
            }
            for b in 0..d {
                let target = base
                    .shifted_block_index(star_idx, b)
                    .ok_or_else(|| Error::Invariant("base picture is not color symmetric".into()))?;
                blocks[target].push((m, b));
            }
        }
    }
    SymPartition::new(d, m, true, blocks)
}

/// Remove the center points from a centered model, returning the base
/// picture and the index of the block that held the first center color
/// (`None` when that center point was a singleton).
pub fn ddn_unlabel(p: &SymPartition) -> Result<(SymPartition, Option<usize>)> {
    if !p.center {
        return Err(Error::Invariant("model has no center".into()));
    }
    let mut blocks = Vec::new();
    let mut host_of_first_center: Option<Vec<Point>> = None;
    for block in p.blocks() {
        let stripped: Vec<Point> = block.iter().filter(|&&(a, _)| a < p.m).copied().collect();
        if block.iter().any(|&(a, b)| a == p.m && b == 0) && !stripped.is_empty() {
            host_of_first_center = Some(stripped.clone());
        }
        if !stripped.is_empty() {
            blocks.push(stripped);
        }
    }
    let base = SymPartition::new(p.d, p.m, false, blocks)?;
    let star = host_of_first_center.map(|mut host| {
        host.sort_unstable();
        base.blocks()
            .binary_search(&host)
            .expect("stripped block present in base")
    });
    Ok((base, star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absolute::nc_interval;

    fn ctx(family: Family, d: usize, n: usize) -> GroupContext {
        GroupContext::new(family, d, n).unwrap()
    }

    #[test]
    fn layout_round_trip_and_color_order() {
        let layout = CircleLayout::new(3, 2);
        for pos in 0..6 {
            assert_eq!(layout.pos(layout.point(pos)), pos);
        }
        // Clockwise: 1^1 2^1 1^3 2^3 1^2 2^2 (segments carry colors 1,3,2).
        let clockwise: Vec<Point> = (0..6).map(|p| layout.point(p)).collect();
        assert_eq!(
            clockwise,
            vec![(0, 0), (1, 0), (0, 2), (1, 2), (0, 1), (1, 1)]
        );
    }

    #[test]
    fn color_shift_is_a_rotation_of_the_circle() {
        let layout = CircleLayout::new(4, 3);
        for pos in 0..layout.len() {
            let (a, b) = layout.point(pos);
            let shifted = layout.pos((a, (b + 1) % 4));
            assert_eq!(shifted, (pos + layout.len() - 3) % layout.len());
        }
    }

    #[test]
    fn identity_gives_singletons() {
        let g = ctx(Family::D1N, 3, 2);
        let p = orbit_partition(&g, &g.identity()).unwrap();
        assert_eq!(p, SymPartition::singletons(3, 2, false));
        assert!(p.validate());
        assert!(p.zero_block().is_none());
    }

    #[test]
    fn coxeter_orbit_is_the_zero_block() {
        let g = ctx(Family::D1N, 3, 2);
        let p = orbit_partition(&g, g.coxeter_element()).unwrap();
        assert_eq!(p.len_blocks(), 1);
        assert_eq!(p.zero_block(), Some(0));
        assert!(p.validate());

        let g = ctx(Family::DDN, 2, 3);
        let p = orbit_partition(&g, g.coxeter_element()).unwrap();
        assert_eq!(p.len_blocks(), 1);
        assert!(p.validate());
    }

    #[test]
    fn classical_cycles_example() {
        // Blocks {1,2,3}, {4,6}, {5} on a plain 6-circle read as the
        // permutation (1 2 3)(4 6).
        let p = SymPartition::parse(1, 6, false, "1.1,2.1,3.1|4.1,6.1|5.1").unwrap();
        let g = ctx(Family::D1N, 1, 6);
        let w = omega(&g, &p).unwrap();
        assert_eq!(w.to_string(), "2:0 3:0 1:0 6:0 5:0 4:0");
        assert_eq!(orbit_partition(&g, &w).unwrap(), p);
    }

    #[test]
    fn crossing_pair_rejected() {
        let p = SymPartition::parse(1, 4, false, "1.1,3.1|2.1,4.1").unwrap();
        assert!(!p.validate());
        let g = ctx(Family::D1N, 1, 4);
        assert!(omega(&g, &p).is_err());
    }

    #[test]
    fn asymmetric_partition_rejected() {
        // {1^1, 2^1} without its color copies being blocks.
        let p = SymPartition::new(
            2,
            2,
            false,
            vec![vec![(0, 0), (1, 0), (0, 1)], vec![(1, 1)]],
        )
        .unwrap();
        assert!(!p.validate());
    }

    #[test]
    fn figure_partition_reads_to_its_element() {
        // The G(3,1,6) example: blocks {1,4,5}, {2,3} in each color and the
        // zero block on number 6.
        let text = "1.1,4.1,5.1|2.1,3.1|1.2,4.2,5.2|2.2,3.2|1.3,4.3,5.3|2.3,3.3|6.1,6.2,6.3";
        let p = SymPartition::parse(3, 6, false, text).unwrap();
        assert!(p.validate());
        let g = ctx(Family::D1N, 3, 6);
        let w = omega(&g, &p).unwrap();
        assert_eq!(w.to_string(), "4:0 3:0 2:0 5:0 1:0 6:2");
        assert_eq!(orbit_partition(&g, &w).unwrap(), p);

        let ops = openers(&p).unwrap();
        let opened: Vec<(Point, Point)> = {
            let mut v: Vec<(Point, Point)> = p
                .blocks()
                .iter()
                .enumerate()
                .filter_map(|(i, b)| ops.get(&i).map(|&o| (b[0], o)))
                .collect();
            v.sort_unstable();
            v
        };
        // Each non-zero block opens at its least circle point here.
        for (first, opener) in opened {
            assert_eq!(first, opener);
        }
    }

    #[test]
    fn omega_inverts_orbit_partition_on_nc() {
        for (family, d, n) in [
            (Family::D1N, 3, 3),
            (Family::D1N, 1, 4),
            (Family::DDN, 2, 3),
            (Family::DDN, 3, 3),
        ] {
            let g = ctx(family, d, n);
            for &id in nc_interval(&g).unwrap() {
                let w = g.element(id).clone();
                let p = orbit_partition(&g, &w).unwrap();
                assert!(p.validate(), "{g}: {w}");
                assert_eq!(omega(&g, &p).unwrap(), w, "{g}");
            }
        }
    }

    #[test]
    fn rotation_is_conjugation_by_coxeter() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::DDN, 3, 3)] {
            let g = ctx(family, d, n);
            let c = g.coxeter_element().clone();
            for &id in nc_interval(&g).unwrap() {
                let w = g.element(id).clone();
                let conj = g.compose(&g.compose(&c, &w), &g.inverse(&c));
                assert_eq!(
                    orbit_partition(&g, &w).unwrap().rotate(),
                    orbit_partition(&g, &conj).unwrap(),
                    "{g}: {w}"
                );
            }
        }
    }

    #[test]
    fn openers_commute_with_color_rotation() {
        let g = ctx(Family::D1N, 3, 3);
        for &id in nc_interval(&g).unwrap() {
            let p = orbit_partition(&g, g.element(id)).unwrap();
            let ops = openers(&p).unwrap();
            let rotated = p.color_rotate();
            let rotated_ops = openers(&rotated).unwrap();
            for (idx, &(a, b)) in &ops {
                let target = p.shifted_block_index(*idx, 1).unwrap();
                let mut shifted = p.blocks()[*idx]
                    .iter()
                    .map(|&(x, y)| (x, (y + 1) % p.d))
                    .collect::<Vec<_>>();
                shifted.sort_unstable();
                let ridx = rotated.blocks().binary_search(&shifted).unwrap();
                assert_eq!(rotated.blocks()[ridx], rotated.blocks()[target]);
                assert_eq!(rotated_ops[&ridx], (a, (b + 1) % p.d));
            }
        }
    }

    #[test]
    fn ddn_label_round_trip() {
        let g = ctx(Family::DDN, 3, 3);
        for &id in nc_interval(&g).unwrap() {
            let p = orbit_partition(&g, g.element(id)).unwrap();
            let (base, star) = ddn_unlabel(&p).unwrap();
            assert!(base.validate());
            assert_eq!(ddn_label(&base, star).unwrap(), p);
        }
    }

    #[test]
    fn ddn_label_singleton_center() {
        let base = SymPartition::singletons(3, 2, false);
        let labelled = ddn_label(&base, None).unwrap();
        assert_eq!(labelled, SymPartition::singletons(3, 2, true));
    }

    #[test]
    fn rotate_preserves_validity() {
        for (family, d, n) in [(Family::D1N, 4, 2), (Family::DDN, 2, 4)] {
            let g = ctx(family, d, n);
            for &id in nc_interval(&g).unwrap() {
                let mut p = orbit_partition(&g, g.element(id)).unwrap();
                for _ in 0..g.h {
                    p = p.rotate();
                    assert!(p.validate(), "{g}");
                }
                assert_eq!(p, orbit_partition(&g, g.element(id)).unwrap());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let text = "1.1,4.1,5.1|1.2,4.2,5.2|1.3,4.3,5.3|2.1,3.1|2.2,3.2|2.3,3.3|6.1,6.2,6.3";
        let p = SymPartition::parse(3, 6, false, text).unwrap();
        assert_eq!(p.to_text(), text);
        assert!(SymPartition::parse(3, 6, false, "1.1,4.1").is_err());
    }
}
