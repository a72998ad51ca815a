//! The bijections between noncrossing parking functions and vectors of
//! formal roots of unity.
//!
//! A vector coordinate is either Zero or a formal pair (i, j) standing for
//! λ^j ω^i, where ω has order m (the number of circle numbers) and λ has
//! order d. The pairs stay formal throughout: reading them as complex
//! numbers would identify distinct symbols whenever gcd(d, m) > 1 and break
//! both injectivity and the (h+1)^n count.
//!
//! Forward direction: coordinate r reads off the opener of the block whose
//! label (image under w) contains r in its first color, with Zero marking
//! the zero block and the center singletons. Inverse direction: coordinate
//! multiplicities drive a parenthesization of the circle that rebuilds the
//! partition, and the label constraints pin the coset; the G(d,d,n) cases
//! additionally use the color-sum condition to resolve the remaining
//! freedom, searching where the construction says the choice is unique and
//! asserting that it is.

use std::collections::HashMap;

use crate::group::{ColoredElement, Family, GroupContext, Point};
use crate::model::{omega, openers, SymPartition};
use crate::parking::ParkingFunction;
use crate::{Error, Result};

/// One coordinate of a parking vector: Zero or the formal pair (number,
/// color), both 0-based internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    Node(usize, usize),
}

/// A vector in the formal root-of-unity model: n entries over the value set
/// {0} ∪ {λ^j ω^i : 1 ≤ i ≤ m, 1 ≤ j ≤ d}, so each coordinate has
/// d·m + 1 possible values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParkVector {
    pub d: usize,
    pub m: usize,
    pub entries: Vec<Entry>,
}

impl ParkVector {
    pub fn new(d: usize, m: usize, entries: Vec<Entry>) -> Result<Self> {
        for e in &entries {
            if let Entry::Node(a, b) = e {
                if *a >= m || *b >= d {
                    return Err(Error::Parse(format!(
                        "entry ({},{}) outside 1..={m} x 1..={d}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(ParkVector { d, m, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Text form: comma-separated `Z` or `i:j` (the pair λ^j ω^i).
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::Zero => "Z".to_string(),
                Entry::Node(a, b) => format!("{}:{}", a + 1, b + 1),
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(d: usize, m: usize, n: usize, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for tok in text.split(',') {
            let tok = tok.trim();
            if tok.eq_ignore_ascii_case("z") || tok == "0" {
                entries.push(Entry::Zero);
                continue;
            }
            let (i, j) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("entry `{tok}` is not Z or i:j")))?;
            let i: usize = i
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in `{tok}`")))?;
            let j: usize = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad color in `{tok}`")))?;
            if i < 1 || i > m {
                return Err(Error::Parse(format!("number {i} out of range 1..={m}")));
            }
            if j < 1 || j > d {
                return Err(Error::Parse(format!("color {j} out of range 1..={d}")));
            }
            entries.push(Entry::Node(i - 1, j - 1));
        }
        if entries.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} entries, found {}",
                entries.len()
            )));
        }
        ParkVector::new(d, m, entries)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "entries": self
                .entries
                .iter()
                .map(|e| match e {
                    Entry::Zero => serde_json::json!({"zero": true}),
                    Entry::Node(a, b) => serde_json::json!({"i": a + 1, "j": b + 1}),
                })
                .collect::<Vec<_>>()
        })
    }
}

/// Number of vectors with n coordinates over the (d·m + 1)-value alphabet,
/// or None on overflow.
pub fn vector_count(d: usize, m: usize, n: usize) -> Option<u128> {
    let base = (d as u128).checked_mul(m as u128)?.checked_add(1)?;
    let mut out: u128 = 1;
    for _ in 0..n {
        out = out.checked_mul(base)?;
    }
    Some(out)
}

/// All vectors, in odometer order.
pub fn all_vectors(d: usize, m: usize, n: usize) -> impl Iterator<Item = ParkVector> {
    let base = d * m + 1;
    let decode = move |digit: usize| {
        if digit == 0 {
            Entry::Zero
        } else {
            Entry::Node((digit - 1) % m, (digit - 1) / m)
        }
    };
    let mut digits = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let v = ParkVector {
            d,
            m,
            entries: digits.iter().map(|&x| decode(x)).collect(),
        };
        let mut i = 0;
        loop {
            if i == n {
                done = true;
                break;
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        Some(v)
    })
}

/// The W-action on vectors: coordinate s moves to sigma(s) and a non-Zero
/// value loses the color shift of s, matching how left multiplication moves
/// the block labels of the model.
pub fn vector_act_w(u: &ColoredElement, v: &ParkVector) -> Result<ParkVector> {
    if u.n() != v.len() {
        return Err(Error::Invariant(format!(
            "element on {} letters applied to a vector of length {}",
            u.n(),
            v.len()
        )));
    }
    let mut entries = vec![Entry::Zero; v.len()];
    for s in 0..v.len() {
        entries[u.sigma(s)] = match v.entries[s] {
            Entry::Zero => Entry::Zero,
            Entry::Node(a, b) => Entry::Node(a, (b + v.d - u.shift(s) % v.d) % v.d),
        };
    }
    Ok(ParkVector { d: v.d, m: v.m, entries })
}

/// The C-action on vectors: every non-Zero value (i, j) advances to the
/// clockwise-next circle symbol, (i+1, j) for i < m and (1, j−1) at the
/// wrap. Coordinates do not move. Applied p times (p may be negative).
pub fn vector_act_c(v: &ParkVector, p: i64) -> ParkVector {
    let len = (v.d * v.m) as i64;
    let steps = p.rem_euclid(len) as usize;
    let layout = crate::model::CircleLayout::new(v.d, v.m);
    let entries = v
        .entries
        .iter()
        .map(|e| match e {
            Entry::Zero => Entry::Zero,
            Entry::Node(a, b) => {
                let pos = (layout.pos((*a, *b)) + steps) % layout.len();
                let (a2, b2) = layout.point(pos);
                Entry::Node(a2, b2)
            }
        })
        .collect();
    ParkVector { d: v.d, m: v.m, entries }
}

fn circle_size(ctx: &GroupContext) -> usize {
    match ctx.family {
        Family::D1N => ctx.n,
        Family::DDN => ctx.n - 1,
    }
}

fn forward(ctx: &GroupContext, pf: &ParkingFunction) -> Result<ParkVector> {
    let p = pf.model(ctx)?;
    let zero = p.zero_block();
    let ops = openers(&p)?;
    let mut label_owner: HashMap<Point, usize> = HashMap::new();
    for (idx, (_, label)) in pf.labels(ctx)?.iter().enumerate() {
        for &pt in label {
            label_owner.insert(pt, idx);
        }
    }
    let mut entries = Vec::with_capacity(ctx.n);
    for r in 0..ctx.n {
        let idx = *label_owner
            .get(&(r, 0))
            .ok_or_else(|| Error::Invariant(format!("no block label contains {}", r + 1)))?;
        let entry = if Some(idx) == zero {
            Entry::Zero
        } else {
            match ops.get(&idx) {
                Some(&(a, b)) => Entry::Node(a, b),
                // A block with no opener is a center singleton.
                None => Entry::Zero,
            }
        };
        entries.push(entry);
    }
    ParkVector::new(ctx.d, circle_size(ctx), entries)
}

/// The vector of a G(d,1,n) parking function.
pub fn forward_d1n(ctx: &GroupContext, pf: &ParkingFunction) -> Result<ParkVector> {
    if ctx.family != Family::D1N {
        return Err(Error::InvalidParameters("forward_d1n wants a G(d,1,n) context".into()));
    }
    forward(ctx, pf)
}

/// The vector of a G(d,d,n) parking function.
pub fn forward_ddn(ctx: &GroupContext, pf: &ParkingFunction) -> Result<ParkVector> {
    if ctx.family != Family::DDN {
        return Err(Error::InvalidParameters("forward_ddn wants a G(d,d,n) context".into()));
    }
    forward(ctx, pf)
}

/// Forward map dispatched on the context's family.
pub fn to_vector(ctx: &GroupContext, pf: &ParkingFunction) -> Result<ParkVector> {
    match ctx.family {
        Family::D1N => forward_d1n(ctx, pf),
        Family::DDN => forward_ddn(ctx, pf),
    }
}

/// Inverse map dispatched on the context's family.
pub fn from_vector(ctx: &GroupContext, v: &ParkVector) -> Result<ParkingFunction> {
    match ctx.family {
        Family::D1N => inverse_d1n(ctx, v),
        Family::DDN => inverse_ddn(ctx, v),
    }
}

/// Per-number multiplicities of a vector and the list of Zero coordinates.
pub fn multiplicities(v: &ParkVector) -> (Vec<usize>, Vec<usize>) {
    let mut mult = vec![0usize; v.m];
    let mut zeros = Vec::new();
    for (r, e) in v.entries.iter().enumerate() {
        match e {
            Entry::Zero => zeros.push(r),
            Entry::Node(a, _) => mult[*a] += 1,
        }
    }
    (mult, zeros)
}

/// Greedy parenthesization: for each number i with m_i > 0, in order of
/// increasing (m_i, i), open a block at i in its first color and collect the
/// next m_i unconsumed circle points clockwise; the other colors follow by
/// rotation. Returns the blocks and the leftover points.
fn parenthesize(d: usize, m: usize, mult: &[usize]) -> Result<(Vec<Vec<Point>>, Vec<Point>)> {
    let layout = crate::model::CircleLayout::new(d, m);
    let total = layout.len();
    let mut consumed = vec![false; total];
    let mut order: Vec<usize> = (0..m).filter(|&i| mult[i] > 0).collect();
    order.sort_by_key(|&i| (mult[i], i));
    let mut blocks = Vec::new();
    for &i in &order {
        let start = layout.pos((i, 0));
        if consumed[start] {
            return Err(Error::Invariant(format!(
                "opener {}^1 already enclosed; vector has no preimage",
                i + 1
            )));
        }
        let mut picked = Vec::with_capacity(mult[i]);
        let mut pos = start;
        let mut walked = 0;
        while picked.len() < mult[i] {
            if walked > total {
                return Err(Error::Invariant("circle exhausted while collecting a block".into()));
            }
            if !consumed[pos] {
                picked.push(layout.point(pos));
            }
            pos = layout.succ(pos);
            walked += 1;
        }
        for t in 0..d {
            let copy: Vec<Point> = picked.iter().map(|&(a, b)| (a, (b + t) % d)).collect();
            for &pt in &copy {
                let q = layout.pos(pt);
                if consumed[q] {
                    return Err(Error::Invariant(format!(
                        "point {}^{} enclosed twice; vector has no preimage",
                        pt.0 + 1,
                        pt.1 + 1
                    )));
                }
                consumed[q] = true;
            }
            blocks.push(copy);
        }
    }
    let leftover = (0..total)
        .filter(|&q| !consumed[q])
        .map(|q| layout.point(q))
        .collect();
    Ok((blocks, leftover))
}

/// Required label set for every block: block opened by i^β must be labelled
/// by r^t for each coordinate r with v_r = (i, β−t); the zero block takes
/// all colors of the Zero coordinates.
fn assemble_targets(
    p: &SymPartition,
    v: &ParkVector,
    center_targets: &HashMap<usize, Point>,
) -> Result<Vec<Vec<Point>>> {
    let zero = p.zero_block();
    let ops = openers(p)?;
    let mut by_opener: HashMap<Point, usize> = HashMap::new();
    for (&idx, &pt) in &ops {
        by_opener.insert(pt, idx);
    }
    let mut targets: Vec<Vec<Point>> = vec![Vec::new(); p.len_blocks()];
    for (r, e) in v.entries.iter().enumerate() {
        match e {
            Entry::Zero => {
                if let Some(z) = zero {
                    for t in 0..p.d {
                        targets[z].push((r, t));
                    }
                }
                // Otherwise this coordinate labels the center singletons,
                // provided through center_targets.
            }
            Entry::Node(a, b) => {
                for t in 0..p.d {
                    let idx = *by_opener.get(&(*a, (*b + t) % p.d)).ok_or_else(|| {
                        Error::Invariant(format!(
                            "no block opened by {}^{}",
                            a + 1,
                            (b + t) % p.d + 1
                        ))
                    })?;
                    targets[idx].push((r, t));
                }
            }
        }
    }
    for (&idx, &pt) in center_targets {
        targets[idx].push(pt);
    }
    for (idx, block) in p.blocks().iter().enumerate() {
        if targets[idx].len() != block.len() {
            return Err(Error::Invariant(format!(
                "block size {} does not match its {} label constraints",
                block.len(),
                targets[idx].len()
            )));
        }
        targets[idx].sort_unstable();
    }
    Ok(targets)
}

/// Find an element w with w(B) equal to the target set of every block B.
/// Within a block family any color-equivariant assignment represents the
/// same coset, so one is fixed arbitrarily; the zero block maps numbers to
/// numbers preserving colors. For G(d,d,n) the total color shift must come
/// out ≡ 0 (mod d): the zero block or the center-singleton family absorbs
/// the difference, and without either the input is rejected.
pub(crate) fn solve_labels(
    ctx: &GroupContext,
    p: &SymPartition,
    targets: &[Vec<Point>],
) -> Result<ColoredElement> {
    let d = ctx.d;
    let n = ctx.n;
    let layout = p.layout();
    let zero = p.zero_block();
    let ops = openers(p)?;
    let mut image: Vec<Option<Point>> = vec![None; n * d];
    let assign = |from: Point, to: Point, image: &mut Vec<Option<Point>>| -> Result<()> {
        let slot = &mut image[from.0 * d + from.1];
        if slot.is_some() {
            return Err(Error::Invariant("conflicting label assignments".into()));
        }
        *slot = Some(to);
        Ok(())
    };
    let mut zero_adjust_number: Option<usize> = None;
    let mut center_family_number: Option<usize> = None;
    let mut visited = vec![false; p.len_blocks()];
    for base in 0..p.len_blocks() {
        if visited[base] {
            continue;
        }
        if Some(base) == zero {
            visited[base] = true;
            let mut from_numbers: Vec<usize> = p.blocks()[base].iter().map(|&(a, _)| a).collect();
            from_numbers.sort_unstable();
            from_numbers.dedup();
            let mut to_numbers: Vec<usize> = targets[base].iter().map(|&(a, _)| a).collect();
            to_numbers.sort_unstable();
            to_numbers.dedup();
            if from_numbers.len() != to_numbers.len() {
                return Err(Error::Invariant("zero-block label count mismatch".into()));
            }
            for (&a, &r) in from_numbers.iter().zip(&to_numbers) {
                for x in 0..d {
                    assign((a, x), (r, x), &mut image)?;
                }
            }
            zero_adjust_number = from_numbers.first().copied();
            continue;
        }
        // Order the family's base block: circle points clockwise from the
        // opener, then the center point.
        let block = &p.blocks()[base];
        let mut circle: Vec<usize> = block
            .iter()
            .filter(|&&(a, _)| a < p.m)
            .map(|&pt| layout.pos(pt))
            .collect();
        circle.sort_unstable();
        let centers: Vec<Point> = block.iter().filter(|&&(a, _)| a == p.m).copied().collect();
        let mut ordered: Vec<Point> = if circle.is_empty() {
            Vec::new()
        } else {
            let opener_pos = layout.pos(ops[&base]);
            let start = circle.binary_search(&opener_pos).expect("opener in block");
            (0..circle.len())
                .map(|i| layout.point(circle[(start + i) % circle.len()]))
                .collect()
        };
        ordered.extend(centers.iter().copied());
        if ordered.is_empty() {
            return Err(Error::Invariant("empty block".into()));
        }
        if circle.is_empty() {
            center_family_number = Some(ordered[0].0);
        }
        // Assign the whole family by rotating the base assignment, checking
        // the rotated targets agree with the assembled constraints.
        for t in 0..d {
            let member = p
                .shifted_block_index(base, t)
                .ok_or_else(|| Error::Invariant("family not closed under color shift".into()))?;
            if visited[member] && t > 0 {
                return Err(Error::Invariant("block family shorter than d".into()));
            }
            visited[member] = true;
            let mut expect: Vec<Point> =
                targets[base].iter().map(|&(a, b)| (a, (b + t) % d)).collect();
            expect.sort_unstable();
            if expect != targets[member] {
                return Err(Error::Invariant(
                    "label constraints are not color equivariant".into(),
                ));
            }
            for (&(fa, fb), &(ta, tb)) in ordered.iter().zip(&targets[base]) {
                assign((fa, (fb + t) % d), (ta, (tb + t) % d), &mut image)?;
            }
        }
    }
    // Collapse to a monomial element.
    let collapse = |image: &Vec<Option<Point>>| -> Result<ColoredElement> {
        let mut sigma = vec![usize::MAX; n];
        let mut shift = vec![0usize; n];
        for a in 0..n {
            for b in 0..d {
                let (a2, b2) = image[a * d + b]
                    .ok_or_else(|| Error::Invariant(format!("letter {} unassigned", a + 1)))?;
                let s = (b2 + d - b) % d;
                if b == 0 {
                    sigma[a] = a2;
                    shift[a] = s;
                } else if sigma[a] != a2 || shift[a] != s {
                    return Err(Error::Invariant("assignment is not color equivariant".into()));
                }
            }
        }
        Ok(ColoredElement { sigma, shift })
    };
    let mut w = collapse(&image)?;
    if ctx.family == Family::DDN {
        let sum = w.color_sum(d);
        if sum != 0 {
            let delta = d - sum;
            let a = zero_adjust_number.or(center_family_number).ok_or_else(|| {
                Error::Invariant("color sum not divisible by d and nothing can absorb it".into())
            })?;
            for b in 0..d {
                let (ta, tb) = image[a * d + b].expect("assigned above");
                image[a * d + b] = Some((ta, (tb + delta) % d));
            }
            w = collapse(&image)?;
        }
    }
    if !ctx.contains(&w) {
        return Err(Error::Invariant(format!("solved labelling {w} lies outside {ctx}")));
    }
    Ok(w)
}

fn finish(ctx: &GroupContext, p: &SymPartition, v: &ParkVector,
          center_targets: &HashMap<usize, Point>) -> Result<ParkingFunction> {
    if !p.validate() {
        return Err(Error::Invariant(
            "reconstructed partition is not a valid model".into(),
        ));
    }
    let targets = assemble_targets(p, v, center_targets)?;
    let w = solve_labels(ctx, p, &targets)?;
    let pi = omega(ctx, p)?;
    ParkingFunction::new(ctx, &w, &pi)
}

/// Rebuild the G(d,1,n) parking function of a vector.
pub fn inverse_d1n(ctx: &GroupContext, v: &ParkVector) -> Result<ParkingFunction> {
    if ctx.family != Family::D1N {
        return Err(Error::InvalidParameters("inverse_d1n wants a G(d,1,n) context".into()));
    }
    if v.d != ctx.d || v.m != ctx.n || v.len() != ctx.n {
        return Err(Error::Parse(format!("vector shape does not match {ctx}")));
    }
    let (mult, zeros) = multiplicities(v);
    if ctx.d == 1 && !zeros.is_empty() {
        return Err(Error::Invariant(
            "no G(1,1,n) parking function maps to a vector with Zero entries".into(),
        ));
    }
    let (mut blocks, leftover) = parenthesize(ctx.d, ctx.n, &mult)?;
    if zeros.is_empty() {
        if !leftover.is_empty() {
            return Err(Error::Invariant("unenclosed points without Zero entries".into()));
        }
    } else {
        if leftover.len() != ctx.d * zeros.len() {
            return Err(Error::Invariant("leftover does not form a zero block".into()));
        }
        blocks.push(leftover);
    }
    let p = SymPartition::new(ctx.d, ctx.n, false, blocks)?;
    finish(ctx, &p, v, &HashMap::new())
}

/// Rebuild the G(d,d,n) parking function of a vector. The three cases are
/// driven by the number z of Zero coordinates: z ≥ 2 rebuilds a zero block
/// of size dz, z = 1 labels the center singletons, and z = 0 searches for
/// the unique number r* and center color whose augmented picture is a valid
/// model with total color shift ≡ 0.
pub fn inverse_ddn(ctx: &GroupContext, v: &ParkVector) -> Result<ParkingFunction> {
    if ctx.family != Family::DDN {
        return Err(Error::InvalidParameters("inverse_ddn wants a G(d,d,n) context".into()));
    }
    let m = ctx.n - 1;
    if v.d != ctx.d || v.m != m || v.len() != ctx.n {
        return Err(Error::Parse(format!("vector shape does not match {ctx}")));
    }
    let d = ctx.d;
    let (mult, zeros) = multiplicities(v);
    match zeros.len() {
        z if z >= 2 => {
            let (mut blocks, mut leftover) = parenthesize(d, m, &mult)?;
            if leftover.len() != d * (z - 1) {
                return Err(Error::Invariant("leftover does not complete a zero block".into()));
            }
            leftover.extend((0..d).map(|x| (m, x)));
            blocks.push(leftover);
            let p = SymPartition::new(d, m, true, blocks)?;
            finish(ctx, &p, v, &HashMap::new())
        }
        1 => {
            let (mut blocks, leftover) = parenthesize(d, m, &mult)?;
            if !leftover.is_empty() {
                return Err(Error::Invariant("unenclosed points with a single Zero entry".into()));
            }
            let mut center_targets = HashMap::new();
            let first = blocks.len();
            for x in 0..d {
                blocks.push(vec![(m, x)]);
                center_targets.insert(first + x, (zeros[0], x));
            }
            let p = SymPartition::new(d, m, true, blocks)?;
            // Singleton blocks keep their index: SymPartition sorts blocks,
            // so rebuild the center target map against the sorted order.
            let mut mapped = HashMap::new();
            for x in 0..d {
                mapped.insert(p.block_of((m, x)), (zeros[0], x));
            }
            finish(ctx, &p, v, &mapped)
        }
        _ => {
            let mut found: Vec<ParkingFunction> = Vec::new();
            for r_star in 0..m {
                if mult[r_star] < 2 {
                    continue;
                }
                let mut reduced = mult.clone();
                reduced[r_star] -= 1;
                let Ok((blocks, leftover)) = parenthesize(d, m, &reduced) else {
                    continue;
                };
                if !leftover.is_empty() {
                    continue;
                }
                let Ok(q) = SymPartition::new(d, m, false, blocks) else {
                    continue;
                };
                if !q.validate() {
                    continue;
                }
                let Ok(ops) = openers(&q) else { continue };
                let mut by_opener: HashMap<Point, usize> = HashMap::new();
                for (&idx, &pt) in &ops {
                    by_opener.insert(pt, idx);
                }
                for ell in 0..d {
                    let mut blocks = q.blocks().to_vec();
                    let mut ok = true;
                    for x in 0..d {
                        match by_opener.get(&(r_star, (ell + x) % d)) {
                            Some(&idx) => blocks[idx].push((m, x)),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let Ok(p) = SymPartition::new(d, m, true, blocks) else {
                        continue;
                    };
                    if let Ok(pf) = finish(ctx, &p, v, &HashMap::new()) {
                        found.push(pf);
                    }
                }
            }
            found.dedup();
            match found.len() {
                1 => Ok(found.pop().expect("nonempty")),
                0 => Err(Error::Invariant("no center placement fits the vector".into())),
                k => Err(Error::Invariant(format!(
                    "{k} center placements fit the vector; expected exactly one"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absolute::{nc_interval, parabolic_subgroup};
    use crate::model::orbit_partition;
    use crate::parking::{act_c, act_w, enumerate_park};
    use std::collections::HashSet;

    fn ctx(family: Family, d: usize, n: usize) -> GroupContext {
        GroupContext::new(family, d, n).unwrap()
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
        ParkingFunction::new(g, &w, &omega(g, &p).unwrap()).unwrap()
    }

    #[test]
    fn figure_vector_forward_and_back() {
        let g = crate::testutil::g316();
        let pf = fig4(g);
        let v = forward_d1n(g, &pf).unwrap();
        assert_eq!(v.to_text(), "2:1,1:3,2:2,Z,1:3,1:3");
        let back = inverse_d1n(g, &v).unwrap();
        assert_eq!(back, pf);
    }

    #[test]
    fn identity_takes_singleton_openers() {
        let g = ctx(Family::D1N, 3, 4);
        let pf = ParkingFunction::new(&g, &g.identity(), &g.identity()).unwrap();
        let v = forward_d1n(&g, &pf).unwrap();
        assert_eq!(v.to_text(), "1:1,2:1,3:1,4:1");
    }

    #[test]
    fn zero_vector_round_trip() {
        let g = ctx(Family::D1N, 3, 2);
        let v = ParkVector::parse(3, 2, 2, "Z,Z").unwrap();
        let pf = inverse_d1n(&g, &v).unwrap();
        assert!(pf.rep.is_identity());
        assert_eq!(pf.pi_element(&g), g.coxeter_element());
        assert_eq!(forward_d1n(&g, &pf).unwrap(), v);

        let g = ctx(Family::DDN, 2, 3);
        let v = ParkVector::parse(2, 2, 3, "Z,Z,Z").unwrap();
        let pf = inverse_ddn(&g, &v).unwrap();
        assert!(pf.rep.is_identity());
        assert_eq!(forward_ddn(&g, &pf).unwrap(), v);
    }

    #[test]
    fn d1n_bijection_sweeps() {
        for (d, n) in [(3, 2), (2, 3)] {
            let g = ctx(Family::D1N, d, n);
            let park = enumerate_park(&g).unwrap();
            let expected = vector_count(d, n, n).unwrap();
            assert_eq!(park.len() as u128, expected);
            let mut seen = HashSet::new();
            for pf in &park {
                let v = forward_d1n(&g, pf).unwrap();
                assert!(seen.insert(v.clone()), "duplicate image {}", v.to_text());
                assert_eq!(inverse_d1n(&g, &v).unwrap(), *pf, "{}", v.to_text());
            }
            // Injective with the right count means onto; check directly too.
            for v in all_vectors(d, n, n) {
                assert!(seen.contains(&v), "missed {}", v.to_text());
            }
        }
    }

    #[test]
    fn ddn_bijection_sweeps() {
        for (d, n) in [(2, 3), (3, 2)] {
            let g = ctx(Family::DDN, d, n);
            let park = enumerate_park(&g).unwrap();
            let expected = vector_count(d, n - 1, n).unwrap();
            assert_eq!(park.len() as u128, expected, "{g}");
            let mut seen = HashSet::new();
            for pf in &park {
                let v = forward_ddn(&g, pf).unwrap();
                assert!(seen.insert(v.clone()), "duplicate image {}", v.to_text());
                assert_eq!(inverse_ddn(&g, &v).unwrap(), *pf, "{}", v.to_text());
            }
            for v in all_vectors(d, n - 1, n) {
                assert!(seen.contains(&v), "missed {}", v.to_text());
            }
        }
    }

    #[test]
    fn ddn_three_case_figures() {
        let g = ctx(Family::DDN, 3, 5);
        let w = g.parse_element("2:1 3:0 5:0 1:2 4:0").unwrap();
        let cases = [
            (
                "1.1,2.1,3.1,5.1|1.2,2.2,3.2,5.2|1.3,2.3,3.3,5.3|4.1|4.2|4.3",
                "4:2,1:3,1:1,1:1,1:1",
            ),
            (
                "1.1,1.2,1.3,5.1,5.2,5.3|2.1,3.1,4.1|2.2,3.2,4.2|2.3,3.3,4.3",
                "2:2,Z,2:1,Z,2:1",
            ),
            (
                "1.3,2.1,3.1,4.1|1.1,2.2,3.2,4.2|1.2,2.3,3.3,4.3|5.1|5.2|5.3",
                "2:2,2:1,2:1,Z,2:1",
            ),
        ];
        for (partition_text, vector_text) in cases {
            let p = SymPartition::parse(3, 4, true, partition_text).unwrap();
            let pf = ParkingFunction::new(&g, &w, &omega(&g, &p).unwrap()).unwrap();
            let v = forward_ddn(&g, &pf).unwrap();
            assert_eq!(v.to_text(), vector_text);
            assert_eq!(inverse_ddn(&g, &v).unwrap(), pf, "{vector_text}");
        }
    }

    #[test]
    fn classical_image_is_proper_and_consistent() {
        let g = ctx(Family::D1N, 1, 3);
        let park = enumerate_park(&g).unwrap();
        assert_eq!(park.len(), 16);
        let mut seen = HashSet::new();
        for pf in &park {
            let v = forward_d1n(&g, pf).unwrap();
            assert!(v.entries.iter().all(|e| *e != Entry::Zero));
            assert!(seen.insert(v.clone()));
            assert_eq!(inverse_d1n(&g, &v).unwrap(), *pf);
        }
        assert!(inverse_d1n(&g, &ParkVector::parse(1, 3, 3, "Z,Z,Z").unwrap()).is_err());
        // Some all-nonzero vectors still fall outside the image.
        let outside: Vec<ParkVector> = all_vectors(1, 3, 3)
            .filter(|v| v.entries.iter().all(|e| *e != Entry::Zero) && !seen.contains(v))
            .collect();
        assert_eq!(outside.len(), 27 - 16);
        for v in outside {
            assert!(inverse_d1n(&g, &v).is_err(), "{}", v.to_text());
        }
    }

    #[test]
    fn figure_rotation_equivariance() {
        let g = crate::testutil::g316();
        let pf = fig4(g);
        let lhs = forward_d1n(g, &act_c(g, 1, &pf).unwrap()).unwrap();
        let rhs = vector_act_c(&forward_d1n(g, &pf).unwrap(), 1);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_text(), "3:1,2:3,3:2,Z,2:3,2:3");
    }

    #[test]
    fn figure_w_equivariance() {
        let g = crate::testutil::g316();
        let pf = fig4(g);
        let v = g.parse_element("4:0 3:1 2:2 1:0 6:0 5:0").unwrap();
        let lhs = forward_d1n(g, &act_w(g, &v, &pf).unwrap()).unwrap();
        let rhs = vector_act_w(&v, &forward_d1n(g, &pf).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_equivariance_small_groups() {
        let g = ctx(Family::D1N, 2, 2);
        let park = enumerate_park(&g).unwrap();
        let elements: Vec<ColoredElement> = (0..g.elements().unwrap().len() as u32)
            .map(|i| g.element(i).clone())
            .collect();
        for pf in &park {
            let v = forward_d1n(&g, pf).unwrap();
            for u in &elements {
                assert_eq!(
                    forward_d1n(&g, &act_w(&g, u, pf).unwrap()).unwrap(),
                    vector_act_w(u, &v).unwrap()
                );
            }
            for p in [1i64, 2, 3] {
                assert_eq!(
                    forward_d1n(&g, &act_c(&g, p, pf).unwrap()).unwrap(),
                    vector_act_c(&v, p)
                );
            }
        }

        let g = ctx(Family::DDN, 2, 3);
        for pf in enumerate_park(&g).unwrap() {
            let v = forward_ddn(&g, &pf).unwrap();
            for t in g.reflections() {
                assert_eq!(
                    forward_ddn(&g, &act_w(&g, t, &pf).unwrap()).unwrap(),
                    vector_act_w(t, &v).unwrap()
                );
            }
            assert_eq!(
                forward_ddn(&g, &act_c(&g, 1, &pf).unwrap()).unwrap(),
                vector_act_c(&v, 1)
            );
        }
    }

    #[test]
    fn rotation_has_order_h() {
        let v = ParkVector::parse(3, 6, 6, "2:1,1:3,2:2,Z,1:3,1:3").unwrap();
        assert_eq!(vector_act_c(&v, 18), v);
        assert_ne!(vector_act_c(&v, 9), v);
        assert_eq!(vector_act_c(&vector_act_c(&v, 5), -5), v);
    }

    #[test]
    fn parabolic_is_the_setwise_block_stabilizer() {
        for (family, d, n) in [(Family::D1N, 3, 2), (Family::D1N, 2, 3), (Family::DDN, 2, 3)] {
            let g = ctx(family, d, n);
            for &pi in nc_interval(&g).unwrap() {
                let model = orbit_partition(&g, g.element(pi)).unwrap();
                let sub: HashSet<u32> = parabolic_subgroup(&g, g.element(pi))
                    .unwrap()
                    .iter()
                    .copied()
                    .collect();
                let stabilizer: HashSet<u32> = (0..g.elements().unwrap().len() as u32)
                    .filter(|&id| {
                        let u = g.element(id);
                        model.blocks().iter().all(|block| {
                            let mut img: Vec<Point> =
                                block.iter().map(|&pt| u.apply(pt, d)).collect();
                            img.sort_unstable();
                            img == *block
                        })
                    })
                    .collect();
                assert_eq!(sub, stabilizer, "{g}");
            }
        }
    }

    #[test]
    fn vector_text_and_json() {
        let v = ParkVector::parse(3, 6, 6, "2:1,1:3,2:2,Z,1:3,1:3").unwrap();
        assert_eq!(v.to_text(), "2:1,1:3,2:2,Z,1:3,1:3");
        assert!(ParkVector::parse(3, 6, 6, "7:1,1:1,1:1,Z,1:1,1:1").is_err());
        assert!(ParkVector::parse(3, 6, 6, "1:4,1:1,1:1,Z,1:1,1:1").is_err());
        assert!(ParkVector::parse(3, 6, 2, "1:1").is_err());
        let json = v.to_json();
        assert_eq!(json["entries"][3]["zero"], serde_json::json!(true));
        assert_eq!(json["entries"][0]["i"], serde_json::json!(2));
        assert_eq!(json["entries"][0]["j"], serde_json::json!(1));
    }

    #[test]
    fn vector_counts() {
        assert_eq!(vector_count(3, 2, 2), Some(49));
        assert_eq!(vector_count(2, 3, 3), Some(343));
        assert_eq!(vector_count(3, 4, 5), Some(371293));
    }
}
