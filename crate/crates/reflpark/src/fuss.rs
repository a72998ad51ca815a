//! Chains of noncrossing partitions and their circle models.
//!
//! A `Multichain` is a weakly increasing sequence π₁ ≤ ⋯ ≤ π_k in the
//! noncrossing lattice.  Its boundary factorization (π₁, π₁⁻¹π₂, …, π_k⁻¹c)
//! drives a cyclic action of order dividing kh, and its tail is what the
//! geometric constructions consume: for G(d,1,n) the tail layers are shuffled
//! onto a circle with kn marked points and closed under a Kreweras complement
//! (`nabla`), while for G(d,d,n) the tail is rewritten as a single colored
//! permutation on kn letters whose orbits draw an annular picture (`tau`).
//! Labeled models biject onto vectors with modulus kh exactly as in the k = 1
//! case, and the forward and inverse maps here reduce to those when k = 1.

use std::collections::{BTreeSet, HashMap};

use crate::absolute::{abs_leq, coset_min, in_nc, nc_interval, parabolic_subgroup};
use crate::bijection::{multiplicities, solve_labels, Entry, ParkVector};
use crate::group::{ColoredElement, ElemId, Family, GroupContext, Point};
use crate::model::{omega, openers, orbit_partition, CircleLayout, SymPartition};
use crate::{Error, Result};

/// Weakly increasing chain π₁ ≤ π₂ ≤ ⋯ ≤ π_k under absolute order, with every
/// part below the Coxeter element.  Parts are stored as element ids of the
/// ambient context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multichain {
    pub parts: Vec<ElemId>,
}

impl Multichain {
    /// Validates membership in the noncrossing interval and the chain
    /// condition before accepting the parts.
    pub fn new(ctx: &GroupContext, parts: Vec<ElemId>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameters(
                "a multichain needs at least one part".into(),
            ));
        }
        for (i, &id) in parts.iter().enumerate() {
            let w = ctx.element(id);
            if !in_nc(ctx, w)? {
                return Err(Error::Invariant(format!(
                    "chain part {w} is not below the Coxeter element"
                )));
            }
            if i > 0 && !abs_leq(ctx, ctx.element(parts[i - 1]), w)? {
                return Err(Error::Invariant(format!(
                    "chain parts {} and {w} are out of order",
                    ctx.element(parts[i - 1])
                )));
            }
        }
        Ok(Multichain { parts })
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn to_text(&self, ctx: &GroupContext) -> String {
        self.parts
            .iter()
            .map(|&id| ctx.element(id).to_string())
            .collect::<Vec<_>>()
            .join(" | ")
    }

    pub fn parse(ctx: &GroupContext, text: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for piece in text.split('|') {
            let w = ctx.parse_element(piece.trim())?;
            parts.push(ctx.id_of(&w)?);
        }
        Multichain::new(ctx, parts)
    }
}

/// Factorization (w₀, w₁, …, w_k) of the Coxeter element attached to a chain:
/// w₀ = π₁, w_i = π_i⁻¹π_{i+1}, and w_k = π_k⁻¹c.  Lengths add up to the rank,
/// and the chain is recovered by taking prefix products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub parts: Vec<ColoredElement>,
}

/// Boundary of a chain: the successive quotients of its parts, bookended by
/// π₁ below and π_k⁻¹c above.
pub fn boundary(ctx: &GroupContext, chain: &Multichain) -> Result<Factorization> {
    let k = chain.k();
    let mut parts = Vec::with_capacity(k + 1);
    parts.push(ctx.element(chain.parts[0]).clone());
    for i in 1..k {
        let prev = ctx.element(chain.parts[i - 1]);
        let cur = ctx.element(chain.parts[i]);
        parts.push(ctx.compose(&ctx.inverse(prev), cur));
    }
    let top = ctx.element(chain.parts[k - 1]);
    parts.push(ctx.compose(&ctx.inverse(top), ctx.coxeter_element()));
    Ok(Factorization { parts })
}

/// Inverse of [`boundary`]: prefix products of the factorization give back the
/// chain.  The total product must be the Coxeter element, and every prefix
/// must stay inside the noncrossing interval.
pub fn integrate(ctx: &GroupContext, f: &Factorization) -> Result<Multichain> {
    if f.parts.len() < 2 {
        return Err(Error::InvalidParameters(
            "a factorization carries at least two parts".into(),
        ));
    }
    let mut acc = ctx.identity();
    let mut parts = Vec::with_capacity(f.parts.len() - 1);
    for w in &f.parts[..f.parts.len() - 1] {
        acc = ctx.compose(&acc, w);
        parts.push(ctx.id_of(&acc)?);
    }
    acc = ctx.compose(&acc, &f.parts[f.parts.len() - 1]);
    if &acc != ctx.coxeter_element() {
        return Err(Error::Invariant(
            "factorization does not multiply to the Coxeter element".into(),
        ));
    }
    Multichain::new(ctx, parts)
}

/// All multichains of length k, ordered lexicographically by element id.
pub fn enumerate_multichains(ctx: &GroupContext, k: usize) -> Result<Vec<Multichain>> {
    if k == 0 {
        return Err(Error::InvalidParameters("chain length must be positive".into()));
    }
    let nc: Vec<ElemId> = nc_interval(ctx)?.to_vec();
    let mut leq = vec![Vec::new(); nc.len()];
    for (i, &a) in nc.iter().enumerate() {
        for &b in &nc {
            if abs_leq(ctx, ctx.element(a), ctx.element(b))? {
                leq[i].push(b);
            }
        }
    }
    let index: HashMap<ElemId, usize> = nc.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<ElemId>> = nc.iter().map(|&a| vec![a]).collect();
    stack.reverse();
    while let Some(prefix) = stack.pop() {
        if prefix.len() == k {
            if out.len() as u128 >= ctx.cap() {
                return Err(Error::CapExceeded { needed: out.len() as u128 + 1, cap: ctx.cap() });
            }
            out.push(Multichain { parts: prefix });
            continue;
        }
        let last = index[prefix.last().unwrap()];
        for &next in leq[last].iter().rev() {
            let mut ext = prefix.clone();
            ext.push(next);
            stack.push(ext);
        }
    }
    Ok(out)
}

/// Generator of the cyclic action of order dividing kh on chains, applied p
/// times.  One forward step conjugates the factorization
/// (w₀, …, w_k) ↦ (a w₀ a⁻¹, a, w₁, …, w_{k−1}) with a = c w_k c⁻¹, which for
/// k = 1 is conjugation of the chain by c.
pub fn zkh_chain(ctx: &GroupContext, chain: &Multichain, p: i64) -> Result<Multichain> {
    let kh = (chain.k() * ctx.h) as i64;
    let steps = p.rem_euclid(kh) as usize;
    let c = ctx.coxeter_element().clone();
    let c_inv = ctx.inverse(&c);
    let mut parts = boundary(ctx, chain)?.parts;
    for _ in 0..steps {
        let last = parts.pop().unwrap();
        let a = ctx.compose(&ctx.compose(&c, &last), &c_inv);
        let first = parts.remove(0);
        let conj = ctx.compose(&ctx.compose(&a, &first), &ctx.inverse(&a));
        let mut next = vec![conj, a];
        next.extend(parts);
        parts = next;
    }
    integrate(ctx, &Factorization { parts })
}

/// Parking function with a chain in place of the single partition: a coset
/// representative together with a multichain, where the coset is taken by the
/// parabolic subgroup of the bottom part π₁.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FussParkingFunction {
    pub rep: ColoredElement,
    pub chain: Multichain,
}

impl FussParkingFunction {
    pub fn new(ctx: &GroupContext, w: &ColoredElement, chain: Multichain) -> Result<Self> {
        let pi1 = ctx.element(chain.parts[0]);
        let sub = parabolic_subgroup(ctx, pi1)?;
        Ok(FussParkingFunction { rep: coset_min(ctx, w, &sub), chain })
    }

    pub fn to_text(&self, ctx: &GroupContext) -> String {
        format!("w={} ; chain={}", self.rep, self.chain.to_text(ctx))
    }

    pub fn parse(ctx: &GroupContext, text: &str) -> Result<Self> {
        let rest = text
            .trim()
            .strip_prefix("w=")
            .ok_or_else(|| Error::Parse("expected `w=... ; chain=...`".into()))?;
        let (wpart, cpart) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("missing `;` between w and chain".into()))?;
        let cpart = cpart
            .trim()
            .strip_prefix("chain=")
            .ok_or_else(|| Error::Parse("missing `chain=` section".into()))?;
        let w = ctx.parse_element(wpart.trim())?;
        let chain = Multichain::parse(ctx, cpart)?;
        FussParkingFunction::new(ctx, &w, chain)
    }
}

/// Every pair of a chain and a coset of its bottom parabolic, enumerated as
/// minimal-id representatives.
pub fn enumerate_fuss_park(ctx: &GroupContext, k: usize) -> Result<Vec<FussParkingFunction>> {
    let chains = enumerate_multichains(ctx, k)?;
    let elements = ctx.elements()?;
    let order = elements.len();
    let mut total: u128 = 0;
    for chain in &chains {
        let sub = parabolic_subgroup(ctx, ctx.element(chain.parts[0]))?;
        total += (order / sub.len()) as u128;
        if total > ctx.cap() {
            return Err(Error::CapExceeded { needed: total, cap: ctx.cap() });
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    for chain in &chains {
        let sub = parabolic_subgroup(ctx, ctx.element(chain.parts[0]))?;
        let mut marked = vec![false; order];
        for wid in 0..order as u32 {
            if marked[wid as usize] {
                continue;
            }
            let welt = ctx.element(wid);
            for &sid in sub.iter() {
                let m = ctx.id_of(&ctx.compose(welt, ctx.element(sid)))?;
                marked[m as usize] = true;
            }
            out.push(FussParkingFunction { rep: welt.clone(), chain: chain.clone() });
        }
    }
    Ok(out)
}

/// Left translation v · [w, chain] = [vw, chain].
pub fn fuss_act_w(
    ctx: &GroupContext,
    v: &ColoredElement,
    fpf: &FussParkingFunction,
) -> Result<FussParkingFunction> {
    let w = ctx.compose(v, &fpf.rep);
    FussParkingFunction::new(ctx, &w, fpf.chain.clone())
}

/// Cyclic action on chained parking functions: one forward step sends
/// [w, (π₁, …, π_k)] to [w π_k c⁻¹, g · chain].
pub fn zkh_park(
    ctx: &GroupContext,
    fpf: &FussParkingFunction,
    p: i64,
) -> Result<FussParkingFunction> {
    let kh = (fpf.chain.k() * ctx.h) as i64;
    let steps = p.rem_euclid(kh) as usize;
    let c_inv = ctx.inverse(ctx.coxeter_element());
    let mut w = fpf.rep.clone();
    let mut chain = fpf.chain.clone();
    for _ in 0..steps {
        let top = ctx.element(*chain.parts.last().unwrap());
        w = ctx.compose(&ctx.compose(&w, top), &c_inv);
        chain = zkh_chain(ctx, &chain, 1)?;
    }
    FussParkingFunction::new(ctx, &w, chain)
}

fn blocks_to_perm(len: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut perm = vec![usize::MAX; len];
    for block in blocks {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != block.len() {
            return Err(Error::Invariant("repeated position in a block".into()));
        }
        for (i, &x) in sorted.iter().enumerate() {
            if x >= len || perm[x] != usize::MAX {
                return Err(Error::Invariant("positions do not form a partition".into()));
            }
            perm[x] = sorted[(i + 1) % sorted.len()];
        }
    }
    if perm.contains(&usize::MAX) {
        return Err(Error::Invariant("positions do not form a partition".into()));
    }
    Ok(perm)
}

fn perm_cycles(map: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; map.len()];
    let mut blocks = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = map[x];
        }
        cycle.sort_unstable();
        blocks.push(cycle);
    }
    blocks
}

fn crossing_free(len: usize, blocks: &[Vec<usize>]) -> bool {
    let sorted: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut s = b.clone();
            s.sort_unstable();
            s
        })
        .collect();
    for (i, b) in sorted.iter().enumerate() {
        for c in sorted.iter().skip(i + 1) {
            if b.len() < 2 || c.len() < 2 {
                continue;
            }
            // c crosses b exactly when it meets two distinct cyclic gaps of b
            let gap_of = |x: usize| b.partition_point(|&y| y < x) % b.len();
            let first = gap_of(c[0]);
            if c.iter().any(|&x| gap_of(x) != first) {
                return false;
            }
        }
    }
    !sorted.is_empty() && sorted.iter().map(Vec::len).sum::<usize>() == len
}

/// Kreweras complement of a noncrossing partition of circle positions
/// 0, …, len−1: the cycles of x ↦ σ⁻¹(x) + 1, where σ lists each block as an
/// ascending cycle.  Applying it twice rotates every block one step forward.
pub fn kreweras_model(len: usize, blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let perm = blocks_to_perm(len, blocks)?;
    if !crossing_free(len, blocks) {
        return Err(Error::Invariant("blocks cross on the circle".into()));
    }
    let mut inv = vec![0; len];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    let map: Vec<usize> = (0..len).map(|x| (inv[x] + 1) % len).collect();
    let mut out = perm_cycles(&map);
    out.sort();
    Ok(out)
}

/// Inverse Kreweras complement: the cycles of y ↦ σ⁻¹(y + 1).
pub fn kreweras_model_inv(len: usize, blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let perm = blocks_to_perm(len, blocks)?;
    if !crossing_free(len, blocks) {
        return Err(Error::Invariant("blocks cross on the circle".into()));
    }
    let mut inv = vec![0; len];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    let map: Vec<usize> = (0..len).map(|y| inv[(y + 1) % len]).collect();
    let mut out = perm_cycles(&map);
    out.sort();
    Ok(out)
}

/// Interleaves k symmetric partitions on (d, m) into one on (d, km): the point
/// (a, b) of layer r lands on (ak + r, b).
pub fn shuffle(layers: &[SymPartition]) -> Result<SymPartition> {
    if layers.is_empty() {
        return Err(Error::InvalidParameters("nothing to shuffle".into()));
    }
    let d = layers[0].d;
    let m = layers[0].m;
    let k = layers.len();
    let mut blocks = Vec::new();
    for (r, layer) in layers.iter().enumerate() {
        if layer.d != d || layer.m != m || layer.center {
            return Err(Error::InvalidParameters(
                "shuffle layers must share a centerless circle".into(),
            ));
        }
        for block in layer.blocks() {
            blocks.push(block.iter().map(|&(a, b)| (a * k + r, b)).collect());
        }
    }
    SymPartition::new(d, m * k, false, blocks)
}

fn delta_parts(ctx: &GroupContext, chain: &Multichain) -> Result<Vec<ColoredElement>> {
    let mut parts = boundary(ctx, chain)?.parts;
    parts.remove(0);
    Ok(parts)
}

/// The k-divisible circle model of a chain in G(d,1,n): layer the tail
/// quotients of the boundary as orbit partitions, shuffle them onto kn marked
/// points, and take the Kreweras complement of the result.  Blocks have size
/// divisible by k, and k = 1 recovers the plain orbit model.
pub fn nabla(ctx: &GroupContext, chain: &Multichain) -> Result<SymPartition> {
    if ctx.family != Family::D1N {
        return Err(Error::InvalidParameters("nabla expects a G(d,1,n) context".into()));
    }
    let layers = delta_parts(ctx, chain)?
        .iter()
        .map(|u| orbit_partition(ctx, u))
        .collect::<Result<Vec<_>>>()?;
    let shuffled = shuffle(&layers)?;
    let layout = shuffled.layout();
    let posblocks: Vec<Vec<usize>> = shuffled
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| layout.pos(p)).collect())
        .collect();
    let kblocks = kreweras_model(layout.len(), &posblocks)?;
    let blocks = kblocks
        .into_iter()
        .map(|b| b.into_iter().map(|p| layout.point(p)).collect())
        .collect();
    SymPartition::new(ctx.d, shuffled.m, false, blocks)
}

/// Circle model of a chain together with the block labels induced by the
/// coset representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FussModel {
    pub partition: SymPartition,
    pub labels: Vec<Vec<Point>>,
}

impl FussModel {
    pub fn to_text(&self) -> String {
        let labels = self
            .labels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|&(a, b)| format!("{}.{}", a + 1, b + 1))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|");
        format!("blocks:{};labels:{labels}", self.partition.to_text())
    }
}

/// Section of a k-divisible block under the layer-one correspondence: keep the
/// points whose number is divisible by k and scale back to the small circle.
/// For annular pictures `inner_base` marks where inner numbers begin; the
/// first inner number maps to the center of the small model.
fn section_members(
    block: &[Point],
    k: usize,
    inner_base: usize,
    center_number: usize,
) -> Vec<Point> {
    let mut members: Vec<Point> = block
        .iter()
        .filter_map(|&(a, b)| {
            if a >= inner_base {
                if a == inner_base {
                    Some((center_number, b))
                } else {
                    None
                }
            } else if a % k == 0 {
                Some((a / k, b))
            } else {
                None
            }
        })
        .collect();
    members.sort_unstable();
    members
}

/// Transfers one target label set per big block onto the orbit model of the
/// chain bottom and solves for the group element, requiring each section to be
/// exactly a block of π₁.
fn solve_fuss_w(
    ctx: &GroupContext,
    k: usize,
    blocks: &[Vec<Point>],
    targets: &[Vec<Point>],
    inner_base: usize,
    pi1: &SymPartition,
) -> Result<ColoredElement> {
    let mut pi1_targets: Vec<Vec<Point>> = vec![Vec::new(); pi1.len_blocks()];
    let mut used = vec![false; pi1.len_blocks()];
    for (block, target) in blocks.iter().zip(targets) {
        let members = section_members(block, k, inner_base, pi1.m);
        let first = *members
            .first()
            .ok_or_else(|| Error::Invariant("block misses the layer-one section".into()))?;
        let idx = pi1.block_of(first);
        if pi1.blocks()[idx] != members || used[idx] {
            return Err(Error::Invariant("block section is not a bottom block".into()));
        }
        used[idx] = true;
        let mut t = target.clone();
        t.sort_unstable();
        pi1_targets[idx] = t;
    }
    if used.iter().any(|&u| !u) {
        return Err(Error::Invariant("some bottom block received no label".into()));
    }
    solve_labels(ctx, pi1, &pi1_targets)
}

fn labels_for(
    ctx: &GroupContext,
    fpf: &FussParkingFunction,
    blocks: &[Vec<Point>],
    k: usize,
    inner_base: usize,
) -> Result<Vec<Vec<Point>>> {
    let pi1 = orbit_partition(ctx, ctx.element(fpf.chain.parts[0]))?;
    let mut used = vec![false; pi1.len_blocks()];
    let mut labels = Vec::with_capacity(blocks.len());
    for block in blocks {
        let members = section_members(block, k, inner_base, pi1.m);
        let first = *members
            .first()
            .ok_or_else(|| Error::Invariant("block misses the layer-one section".into()))?;
        let idx = pi1.block_of(first);
        if pi1.blocks()[idx] != members || used[idx] {
            return Err(Error::Invariant("block section is not a bottom block".into()));
        }
        used[idx] = true;
        let mut label: Vec<Point> =
            members.iter().map(|&p| fpf.rep.apply(p, ctx.d)).collect();
        label.sort_unstable();
        labels.push(label);
    }
    Ok(labels)
}

/// Labeled circle model of a chained parking function in G(d,1,n).
pub fn nabla_labeled(ctx: &GroupContext, fpf: &FussParkingFunction) -> Result<FussModel> {
    let partition = nabla(ctx, &fpf.chain)?;
    let labels = labels_for(ctx, fpf, partition.blocks(), fpf.chain.k(), usize::MAX)?;
    Ok(FussModel { partition, labels })
}

/// Chained forward map dispatched on the context's family.
pub fn fuss_to_vector(ctx: &GroupContext, fpf: &FussParkingFunction) -> Result<ParkVector> {
    match ctx.family {
        Family::D1N => forward_fuss_d1n(ctx, fpf),
        Family::DDN => forward_fuss_ddn(ctx, fpf),
    }
}

/// Chained inverse map dispatched on the context's family.
pub fn fuss_from_vector(
    ctx: &GroupContext,
    k: usize,
    v: &ParkVector,
) -> Result<FussParkingFunction> {
    match ctx.family {
        Family::D1N => inverse_fuss_d1n(ctx, k, v),
        Family::DDN => inverse_fuss_ddn(ctx, k, v),
    }
}

/// Reads the vector off a labeled model: coordinate r is Zero when r appears
/// in the label of the zero block, and otherwise the opener of the block
/// whose label contains r with color zero.
pub fn forward_fuss_d1n(ctx: &GroupContext, fpf: &FussParkingFunction) -> Result<ParkVector> {
    let model = nabla_labeled(ctx, fpf)?;
    let zero = model.partition.zero_block();
    let ops = openers(&model.partition)?;
    let mut owner: HashMap<Point, usize> = HashMap::new();
    for (i, label) in model.labels.iter().enumerate() {
        for &pt in label {
            owner.insert(pt, i);
        }
    }
    let mut entries = Vec::with_capacity(ctx.n);
    for r in 0..ctx.n {
        let idx = *owner
            .get(&(r, 0))
            .ok_or_else(|| Error::Invariant("labels miss a letter".into()))?;
        entries.push(if Some(idx) == zero {
            Entry::Zero
        } else {
            let (a, b) = ops[&idx];
            Entry::Node(a, b)
        });
    }
    ParkVector::new(ctx.d, model.partition.m, entries)
}

/// Circular block matcher: opens one block of size `quota[r]` at every point
/// (r, t) with positive quota, scanning clockwise from each possible anchor
/// and letting the innermost open block collect points.  Points falling
/// outside every open block form the leftover, allowed only when requested.
/// Distinct completed outcomes are returned for the caller to validate.
fn match_blocks(
    d: usize,
    m: usize,
    quota: &[usize],
    allow_leftover: bool,
) -> Vec<(Vec<Vec<Point>>, Vec<Point>)> {
    let layout = CircleLayout::new(d, m);
    let total = layout.len();
    let mut opener_family: HashMap<usize, usize> = HashMap::new();
    for (r, &q) in quota.iter().enumerate() {
        if q > 0 {
            for t in 0..d {
                opener_family.insert(layout.pos((r, t)), r);
            }
        }
    }
    let mut anchors: Vec<usize> = opener_family.keys().copied().collect();
    anchors.sort_unstable();
    if anchors.is_empty() {
        anchors.push(0);
    }
    let mut outcomes: BTreeSet<(Vec<Vec<Point>>, Vec<Point>)> = BTreeSet::new();
    'anchor: for &start in &anchors {
        let mut stack: Vec<(usize, Vec<Point>)> = Vec::new();
        let mut blocks: Vec<Vec<Point>> = Vec::new();
        let mut leftover: Vec<Point> = Vec::new();
        for i in 0..total {
            let pos = (start + i) % total;
            if let Some(&fam) = opener_family.get(&pos) {
                stack.push((fam, Vec::new()));
            }
            match stack.last_mut() {
                Some((fam, acc)) => {
                    acc.push(layout.point(pos));
                    if acc.len() == quota[*fam] {
                        let (_, done) = stack.pop().unwrap();
                        blocks.push(done);
                    }
                }
                None => {
                    if !allow_leftover {
                        continue 'anchor;
                    }
                    leftover.push(layout.point(pos));
                }
            }
        }
        if !stack.is_empty() {
            continue 'anchor;
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        leftover.sort_unstable();
        outcomes.insert((blocks, leftover));
    }
    outcomes.into_iter().collect()
}

/// Target label sets for the blocks of a candidate model, read off a vector:
/// coordinate r with entry (a, b) contributes (r, t) to the copy opened at
/// (a, b + t), and Zero coordinates contribute every color to the zero block.
fn vector_targets(
    p: &SymPartition,
    v: &ParkVector,
    k: usize,
) -> Result<Vec<Vec<Point>>> {
    let d = p.d;
    let ops = openers(p)?;
    let by_opener: HashMap<Point, usize> = ops.iter().map(|(&i, &pt)| (pt, i)).collect();
    let zero = p.zero_block();
    let mut targets: Vec<Vec<Point>> = vec![Vec::new(); p.len_blocks()];
    for (r, entry) in v.entries.iter().enumerate() {
        match *entry {
            Entry::Zero => {
                let idx = zero.ok_or_else(|| {
                    Error::Invariant("zero coordinate without a zero block".into())
                })?;
                for t in 0..d {
                    targets[idx].push((r, t));
                }
            }
            Entry::Node(a, b) => {
                for t in 0..d {
                    let idx = *by_opener.get(&(a, (b + t) % d)).ok_or_else(|| {
                        Error::Invariant("vector entry is not a block opener".into())
                    })?;
                    targets[idx].push((r, t));
                }
            }
        }
    }
    for (i, block) in p.blocks().iter().enumerate() {
        if targets[i].len() * k != block.len() {
            return Err(Error::Invariant("label sizes do not match block sizes".into()));
        }
        targets[i].sort_unstable();
    }
    Ok(targets)
}

/// Rebuilds the chain from a k-divisible circle model by undoing the Kreweras
/// step, splitting the shuffle into residue layers, and integrating the layer
/// permutations against the Coxeter element.
fn chain_from_divisible(
    ctx: &GroupContext,
    k: usize,
    partition: &SymPartition,
) -> Result<Multichain> {
    let layout = partition.layout();
    let posblocks: Vec<Vec<usize>> = partition
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| layout.pos(p)).collect())
        .collect();
    let shuffled = kreweras_model_inv(layout.len(), &posblocks)?;
    let mut layers: Vec<Vec<Vec<Point>>> = vec![Vec::new(); k];
    for posblock in shuffled {
        let pts: Vec<Point> = posblock.iter().map(|&p| layout.point(p)).collect();
        let r = pts[0].0 % k;
        if pts.iter().any(|&(a, _)| a % k != r) {
            return Err(Error::Invariant("shuffled block mixes residue layers".into()));
        }
        layers[r].push(pts.iter().map(|&(a, b)| (a / k, b)).collect());
    }
    let us = layers
        .into_iter()
        .map(|blocks| {
            let p = SymPartition::new(ctx.d, ctx.n, false, blocks)?;
            omega(ctx, &p)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ws = vec![ctx.identity(); k];
    ws[k - 1] = ctx.compose(ctx.coxeter_element(), &ctx.inverse(&us[k - 1]));
    for i in (0..k - 1).rev() {
        ws[i] = ctx.compose(&ws[i + 1], &ctx.inverse(&us[i]));
    }
    let parts = ws.iter().map(|w| ctx.id_of(w)).collect::<Result<Vec<_>>>()?;
    Multichain::new(ctx, parts)
}

/// Inverse of [`forward_fuss_d1n`]: reconstructs the unique chained parking
/// function mapping to the vector, or fails when the vector is not in the
/// image.
pub fn inverse_fuss_d1n(ctx: &GroupContext, k: usize, v: &ParkVector) -> Result<FussParkingFunction> {
    if ctx.family != Family::D1N {
        return Err(Error::InvalidParameters("expected a G(d,1,n) context".into()));
    }
    if k == 0 || v.d != ctx.d || v.m != k * ctx.n || v.len() != ctx.n {
        return Err(Error::InvalidParameters("vector shape does not match".into()));
    }
    let (mult, zeros) = multiplicities(v);
    if ctx.d == 1 && !zeros.is_empty() {
        return Err(Error::Invariant("zero entries need d at least two".into()));
    }
    let quota: Vec<usize> = mult.iter().map(|&q| q * k).collect();
    let mut survivors: Vec<FussParkingFunction> = Vec::new();
    for (mut blocks, leftover) in match_blocks(ctx.d, v.m, &quota, !zeros.is_empty()) {
        if zeros.is_empty() != leftover.is_empty() {
            continue;
        }
        if !leftover.is_empty() {
            if leftover.len() != ctx.d * k * zeros.len() {
                continue;
            }
            blocks.push(leftover);
        }
        let Ok(partition) = SymPartition::new(ctx.d, v.m, false, blocks) else {
            continue;
        };
        if !partition.validate() {
            continue;
        }
        let Ok(targets) = vector_targets(&partition, v, k) else {
            continue;
        };
        let Ok(chain) = chain_from_divisible(ctx, k, &partition) else {
            continue;
        };
        if nabla(ctx, &chain).ok().as_ref() != Some(&partition) {
            continue;
        }
        let Ok(pi1) = orbit_partition(ctx, ctx.element(chain.parts[0])) else {
            continue;
        };
        let Ok(w) = solve_fuss_w(ctx, k, partition.blocks(), &targets, usize::MAX, &pi1) else {
            continue;
        };
        let fpf = FussParkingFunction::new(ctx, &w, chain)?;
        if forward_fuss_d1n(ctx, &fpf).ok().as_ref() != Some(v) {
            continue;
        }
        if !survivors.contains(&fpf) {
            survivors.push(fpf);
        }
    }
    match survivors.len() {
        0 => Err(Error::Invariant("vector is not in the image".into())),
        1 => Ok(survivors.pop().unwrap()),
        _ => Err(Error::Invariant("vector lifts ambiguously".into())),
    }
}

/// Annular model of a chain in G(d,d,n): dkn points on an outer circle
/// carrying numbers 0, …, k(n−1)−1 and dk points on an inner circle carrying
/// numbers k(n−1), …, kn−1, partitioned by the orbits of the chain's
/// annular permutation.  Inner points wind counterclockwise; the inner point
/// (K + a, b) sits at counterclockwise position bk + a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularPartition {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    blocks: Vec<Vec<Point>>,
}

impl AnnularPartition {
    pub fn new(d: usize, k: usize, n: usize, mut blocks: Vec<Vec<Point>>) -> Result<Self> {
        if d < 2 || k == 0 || n < 2 {
            return Err(Error::InvalidParameters("annular models need d ≥ 2, k ≥ 1, n ≥ 2".into()));
        }
        let kn = k * n;
        let mut seen = vec![false; kn * d];
        for block in &mut blocks {
            block.sort_unstable();
            block.dedup();
            for &(a, b) in block.iter() {
                if a >= kn || b >= d || seen[a * d + b] {
                    return Err(Error::Invariant("points do not form an annular partition".into()));
                }
                seen[a * d + b] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Invariant("points do not form an annular partition".into()));
        }
        blocks.sort();
        Ok(AnnularPartition { d, k, n, blocks })
    }

    /// First inner number.
    pub fn inner_base(&self) -> usize {
        self.k * (self.n - 1)
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    /// Index of the block fixed setwise by the color shift, if any.
    pub fn zero_block(&self) -> Option<usize> {
        self.blocks.iter().position(|b| {
            let shifted: BTreeSet<Point> =
                b.iter().map(|&(a, c)| (a, (c + 1) % self.d)).collect();
            shifted == b.iter().copied().collect::<BTreeSet<Point>>()
        })
    }

    fn block_index(&self) -> HashMap<Point, usize> {
        let mut map = HashMap::new();
        for (i, block) in self.blocks.iter().enumerate() {
            for &pt in block {
                map.insert(pt, i);
            }
        }
        map
    }

    /// Clockwise reading of a block's outer points from its opener, then its
    /// inner points counterclockwise from the start of their interval.
    /// Returns None when the block has no coherent reading.
    fn reading(&self, idx: usize) -> Option<Vec<Point>> {
        let kk = self.inner_base();
        let layout = CircleLayout::new(self.d, kk);
        let block = &self.blocks[idx];
        let outer: Vec<Point> = block.iter().copied().filter(|&(a, _)| a < kk).collect();
        let inner: Vec<Point> = block.iter().copied().filter(|&(a, _)| a >= kk).collect();
        let inner_pos: BTreeSet<usize> =
            inner.iter().map(|&(a, b)| b * self.k + (a - kk)).collect();
        let mut order = Vec::with_capacity(block.len());
        if !outer.is_empty() {
            let positions: BTreeSet<usize> = outer.iter().map(|&p| layout.pos(p)).collect();
            let sorted: Vec<usize> = positions.iter().copied().collect();
            let total = layout.len();
            let mut best = (0usize, usize::MAX, false);
            for (i, &p) in sorted.iter().enumerate() {
                let next = sorted[(i + 1) % sorted.len()];
                let gap = (next + total - p) % total;
                let gap = if gap == 0 { total } else { gap };
                match gap.cmp(&best.0) {
                    std::cmp::Ordering::Greater => best = (gap, next, false),
                    std::cmp::Ordering::Equal => best.2 = true,
                    std::cmp::Ordering::Less => {}
                }
            }
            if best.2 {
                return None;
            }
            let start = if sorted.len() == 1 { sorted[0] } else { best.1 };
            let mut p = start;
            loop {
                order.push(layout.point(p));
                p = (p + 1) % total;
                while !positions.contains(&p) && p != start {
                    p = (p + 1) % total;
                }
                if p == start {
                    break;
                }
            }
        }
        if !inner_pos.is_empty() {
            let dk = self.d * self.k;
            if inner_pos.len() == dk {
                return None;
            }
            let starts: Vec<usize> = inner_pos
                .iter()
                .copied()
                .filter(|&p| !inner_pos.contains(&((p + dk - 1) % dk)))
                .collect();
            if starts.len() != 1 {
                return None;
            }
            let mut p = starts[0];
            for _ in 0..inner_pos.len() {
                if !inner_pos.contains(&p) {
                    return None;
                }
                order.push((kk + p % self.k, p / self.k));
                p = (p + 1) % dk;
            }
        }
        Some(order)
    }

    /// Structural sanity of the picture: color closure, at most one
    /// shift-stable block containing every inner point, k-divisible block
    /// sizes, and a coherent residue reading of every ordinary block.
    pub fn validate(&self) -> bool {
        let kk = self.inner_base();
        let dk = self.d * self.k;
        let index = self.block_index();
        for block in &self.blocks {
            let shifted: Vec<Point> = block.iter().map(|&(a, b)| (a, (b + 1) % self.d)).collect();
            let target = index.get(&shifted[0]);
            if target.is_none() || shifted.iter().any(|pt| index.get(pt) != target) {
                return false;
            }
            if self.blocks[*target.unwrap()].len() != block.len() {
                return false;
            }
        }
        let zero = self.zero_block();
        for (i, block) in self.blocks.iter().enumerate() {
            if block.len() % self.k != 0 {
                return false;
            }
            let inner_count = block.iter().filter(|&&(a, _)| a >= kk).count();
            if Some(i) == zero {
                let outer = block.len() - inner_count;
                if inner_count != dk || outer < dk || outer % dk != 0 {
                    return false;
                }
                continue;
            }
            let mut nums: Vec<usize> = block.iter().map(|&(a, _)| a).collect();
            nums.sort_unstable();
            nums.dedup();
            if nums.len() != block.len() {
                return false;
            }
            if inner_count == block.len() && block.len() != self.k {
                return false;
            }
            let Some(order) = self.reading(i) else {
                return false;
            };
            let ok = order.windows(2).all(|w| {
                let residue = |(a, _): Point| if a >= kk { (a - kk) % self.k } else { a % self.k };
                residue(w[1]) == (residue(w[0]) + 1) % self.k
            });
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        let kk = self.inner_base();
        let part = |inner: bool| {
            self.blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .filter(|&&(a, _)| (a >= kk) == inner)
                        .map(|&(a, c)| format!("{}.{}", a + 1, c + 1))
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect::<Vec<_>>()
                .join("|")
        };
        format!("outer:{};inner:{}", part(false), part(true))
    }
}

fn big_context(ctx: &GroupContext, k: usize) -> Result<GroupContext> {
    GroupContext::new(Family::DDN, ctx.d, k * ctx.n)
}

fn big_coxeter(d: usize, k: usize, n: usize) -> ColoredElement {
    let kn = k * n;
    let kk = k * (n - 1);
    let mut sigma = Vec::with_capacity(kn);
    for a in 0..kn {
        sigma.push(if a + 1 < kk {
            a + 1
        } else if a + 1 == kk {
            0
        } else if a + 1 < kn {
            a + 1
        } else {
            kk
        });
    }
    let mut shift = vec![0usize; kn];
    shift[kk - 1] = d - 1;
    shift[kn - 1] = 1 % d;
    ColoredElement { sigma, shift }
}

fn embed_ddn(u: &ColoredElement, layer: usize, k: usize, kn: usize) -> ColoredElement {
    let n = kn / k;
    let kk = k * (n - 1);
    let emb = |a: usize| if a == n - 1 { kk + layer } else { a * k + layer };
    let mut sigma: Vec<usize> = (0..kn).collect();
    let mut shift = vec![0usize; kn];
    for a in 0..n {
        sigma[emb(a)] = emb(u.sigma(a));
        shift[emb(a)] = u.shift(a);
    }
    ColoredElement { sigma, shift }
}

fn tau_element(ctx: &GroupContext, chain: &Multichain) -> Result<(GroupContext, ColoredElement)> {
    let k = chain.k();
    let kn = k * ctx.n;
    let big = big_context(ctx, k)?;
    let cbig = big_coxeter(ctx.d, k, ctx.n);
    let mut acc = cbig;
    for (m, u) in delta_parts(ctx, chain)?.iter().enumerate() {
        let t = embed_ddn(u, m, k, kn);
        acc = big.compose(&acc, &big.inverse(&t));
    }
    Ok((big, acc))
}

/// Annular model of a chain in G(d,d,n): the orbits of the chain's annular
/// permutation, with every color-unbalanced orbit merged into a single zero
/// block.  k = 1 recovers the centered circle model with the center points
/// renumbered onto the inner circle.
pub fn tau(ctx: &GroupContext, chain: &Multichain) -> Result<AnnularPartition> {
    if ctx.family != Family::DDN {
        return Err(Error::InvalidParameters("tau expects a G(d,d,n) context".into()));
    }
    let k = chain.k();
    let kn = k * ctx.n;
    let (_, elt) = tau_element(ctx, chain)?;
    let mut seen = vec![false; kn * ctx.d];
    let mut blocks: Vec<Vec<Point>> = Vec::new();
    let mut zero: Vec<Point> = Vec::new();
    for a in 0..kn {
        for b in 0..ctx.d {
            if seen[a * ctx.d + b] {
                continue;
            }
            let mut pts = Vec::new();
            let mut cur = (a, b);
            loop {
                seen[cur.0 * ctx.d + cur.1] = true;
                pts.push(cur);
                cur = elt.apply(cur, ctx.d);
                if cur == (a, b) {
                    break;
                }
            }
            let mut nums: Vec<usize> = pts.iter().map(|&(x, _)| x).collect();
            nums.sort_unstable();
            nums.dedup();
            if nums.len() == pts.len() {
                blocks.push(pts);
            } else {
                zero.extend(pts);
            }
        }
    }
    if !zero.is_empty() {
        blocks.push(zero);
    }
    AnnularPartition::new(ctx.d, k, ctx.n, blocks)
}

fn collapse_points(image: Vec<Option<Point>>, letters: usize, d: usize) -> Result<ColoredElement> {
    let mut sigma = vec![usize::MAX; letters];
    let mut shift = vec![0usize; letters];
    for a in 0..letters {
        for b in 0..d {
            let Some((x, y)) = image[a * d + b] else {
                return Err(Error::Invariant("picture misses a point".into()));
            };
            if sigma[a] == usize::MAX {
                sigma[a] = x;
                shift[a] = (y + d - b) % d;
            } else if sigma[a] != x || shift[a] != (y + d - b) % d {
                return Err(Error::Invariant("picture is not color equivariant".into()));
            }
        }
    }
    Ok(ColoredElement { sigma, shift })
}

/// Rebuilds the chain whose annular model is the given partition.  Ordinary
/// blocks are read clockwise outside and counterclockwise inside; the zero
/// block contributes one outer and one inner cycle in position order.  The
/// quotient against the annular Coxeter permutation must split into residue
/// layers, which integrate back to the chain.
pub fn annular_chain(ctx: &GroupContext, ap: &AnnularPartition) -> Result<Multichain> {
    if ctx.family != Family::DDN || ctx.d != ap.d || ctx.n != ap.n {
        return Err(Error::InvalidParameters("partition does not match the context".into()));
    }
    let k = ap.k;
    let kn = k * ctx.n;
    let kk = ap.inner_base();
    let layout = CircleLayout::new(ctx.d, kk);
    let mut image: Vec<Option<Point>> = vec![None; kn * ctx.d];
    let mut set = |from: Point, to: Point| -> Result<()> {
        let slot = &mut image[from.0 * ctx.d + from.1];
        if slot.is_some() {
            return Err(Error::Invariant("point mapped twice".into()));
        }
        *slot = Some(to);
        Ok(())
    };
    let zero = ap.zero_block();
    for (i, block) in ap.blocks().iter().enumerate() {
        if Some(i) == zero {
            let mut outer: Vec<Point> = block.iter().copied().filter(|&(a, _)| a < kk).collect();
            outer.sort_by_key(|&p| layout.pos(p));
            for (j, &p) in outer.iter().enumerate() {
                set(p, outer[(j + 1) % outer.len()])?;
            }
            let mut inner: Vec<Point> = block.iter().copied().filter(|&(a, _)| a >= kk).collect();
            inner.sort_by_key(|&(a, b)| b * k + (a - kk));
            for (j, &p) in inner.iter().enumerate() {
                set(p, inner[(j + 1) % inner.len()])?;
            }
        } else {
            let order = ap
                .reading(i)
                .ok_or_else(|| Error::Invariant("block has no coherent reading".into()))?;
            for (j, &p) in order.iter().enumerate() {
                set(p, order[(j + 1) % order.len()])?;
            }
        }
    }
    let elt = collapse_points(image, kn, ctx.d)?;
    let big = big_context(ctx, k)?;
    if !big.contains(&elt) {
        return Err(Error::Invariant("picture is not a group element".into()));
    }
    let quot = big.compose(&big.inverse(&elt), &big_coxeter(ctx.d, k, ctx.n));
    let residue = |a: usize| if a >= kk { a - kk } else { a % k };
    let mut us = Vec::with_capacity(k);
    for layer in 0..k {
        let mut sigma: Vec<usize> = (0..ctx.n).collect();
        let mut shift = vec![0usize; ctx.n];
        for a in 0..kn {
            if residue(a) != layer {
                continue;
            }
            let img = quot.sigma(a);
            if residue(img) != layer {
                return Err(Error::Invariant("quotient mixes residue layers".into()));
            }
            let small = |x: usize| if x >= kk { ctx.n - 1 } else { x / k };
            sigma[small(a)] = small(img);
            shift[small(a)] = quot.shift(a);
        }
        let u = ColoredElement { sigma, shift };
        if !ctx.contains(&u) {
            return Err(Error::Invariant("layer is not a group element".into()));
        }
        us.push(u);
    }
    let kq = us.len();
    let mut ws = vec![ctx.identity(); kq];
    ws[kq - 1] = ctx.compose(ctx.coxeter_element(), &ctx.inverse(&us[kq - 1]));
    for i in (0..kq - 1).rev() {
        ws[i] = ctx.compose(&ws[i + 1], &ctx.inverse(&us[i]));
    }
    let parts = ws.iter().map(|w| ctx.id_of(w)).collect::<Result<Vec<_>>>()?;
    Multichain::new(ctx, parts)
}

/// Full validity of an annular picture: structural sanity plus the round trip
/// through [`annular_chain`] and [`tau`].
pub fn validate_annular(ctx: &GroupContext, ap: &AnnularPartition) -> bool {
    ap.validate()
        && match annular_chain(ctx, ap) {
            Ok(chain) => tau(ctx, &chain).map(|t| &t == ap).unwrap_or(false),
            Err(_) => false,
        }
}

/// Labeled annular model of a chained parking function in G(d,d,n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularModel {
    pub partition: AnnularPartition,
    pub labels: Vec<Vec<Point>>,
}

impl AnnularModel {
    pub fn to_text(&self) -> String {
        let labels = self
            .labels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|&(a, b)| format!("{}.{}", a + 1, b + 1))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|");
        format!("{};labels:{labels}", self.partition.to_text())
    }
}

pub fn annular_labeled(ctx: &GroupContext, fpf: &FussParkingFunction) -> Result<AnnularModel> {
    let partition = tau(ctx, &fpf.chain)?;
    let labels = labels_for(
        ctx,
        fpf,
        partition.blocks(),
        fpf.chain.k(),
        partition.inner_base(),
    )?;
    Ok(AnnularModel { partition, labels })
}

/// Whether a labeled annular picture admits a compatible group element.  The
/// obstruction is a single color sum: each ordinary block contributes the
/// color difference between its label and its layer-one section, zero blocks
/// absorb everything.
pub fn phi_exists(am: &AnnularModel) -> bool {
    let ap = &am.partition;
    let zero = ap.zero_block();
    if zero.is_some() {
        return true;
    }
    let kk = ap.inner_base();
    let mut total = 0usize;
    let mut seen_sections: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (block, label) in ap.blocks().iter().zip(&am.labels) {
        let members = section_members(block, ap.k, kk, ap.n - 1);
        let nums: Vec<usize> = members.iter().map(|&(a, _)| a).collect();
        if !seen_sections.insert(nums) {
            continue;
        }
        let m: usize = members.iter().map(|&(_, b)| b).sum();
        let l: usize = label.iter().map(|&(_, b)| b).sum();
        total = (total + l + members.len() * ap.d - m) % ap.d;
    }
    total == 0
}

fn annular_openers(ap: &AnnularPartition) -> Result<HashMap<usize, Point>> {
    let kk = ap.inner_base();
    let zero = ap.zero_block();
    let mut map = HashMap::new();
    for (i, block) in ap.blocks().iter().enumerate() {
        if Some(i) == zero || block.iter().all(|&(a, _)| a >= kk) {
            continue;
        }
        let order = ap
            .reading(i)
            .ok_or_else(|| Error::Invariant("block has no coherent reading".into()))?;
        map.insert(i, order[0]);
    }
    Ok(map)
}

/// Reads the vector off a labeled annular model: Zero for letters labeling
/// the zero block or an inner block, and the outer opener otherwise.
pub fn forward_fuss_ddn(ctx: &GroupContext, fpf: &FussParkingFunction) -> Result<ParkVector> {
    let model = annular_labeled(ctx, fpf)?;
    let ap = &model.partition;
    let ops = annular_openers(ap)?;
    let mut owner: HashMap<Point, usize> = HashMap::new();
    for (i, label) in model.labels.iter().enumerate() {
        for &pt in label {
            owner.insert(pt, i);
        }
    }
    let mut entries = Vec::with_capacity(ctx.n);
    for r in 0..ctx.n {
        let idx = *owner
            .get(&(r, 0))
            .ok_or_else(|| Error::Invariant("labels miss a letter".into()))?;
        entries.push(match ops.get(&idx) {
            Some(&(a, b)) => Entry::Node(a, b),
            None => Entry::Zero,
        });
    }
    ParkVector::new(ctx.d, ap.inner_base(), entries)
}

fn annular_targets(ap: &AnnularPartition, v: &ParkVector) -> Result<Vec<Vec<Point>>> {
    let d = ap.d;
    let kk = ap.inner_base();
    let ops = annular_openers(ap)?;
    let by_opener: HashMap<Point, usize> = ops.iter().map(|(&i, &pt)| (pt, i)).collect();
    let zero = ap.zero_block();
    let inner_blocks: Vec<usize> = ap
        .blocks()
        .iter()
        .enumerate()
        .filter(|&(i, b)| Some(i) != zero && b.iter().all(|&(a, _)| a >= kk))
        .map(|(i, _)| i)
        .collect();
    let mut targets: Vec<Vec<Point>> = vec![Vec::new(); ap.blocks().len()];
    for (r, entry) in v.entries.iter().enumerate() {
        match *entry {
            Entry::Zero => {
                if let Some(idx) = zero {
                    for t in 0..d {
                        targets[idx].push((r, t));
                    }
                } else if !inner_blocks.is_empty() {
                    // one label per inner block, paired through its section color
                    for &idx in &inner_blocks {
                        let j = ap.blocks()[idx]
                            .iter()
                            .find(|&&(a, _)| a == kk)
                            .map(|&(_, b)| b)
                            .ok_or_else(|| {
                                Error::Invariant("inner block misses its section point".into())
                            })?;
                        targets[idx].push((r, j));
                    }
                } else {
                    return Err(Error::Invariant("zero coordinate without a sink".into()));
                }
            }
            Entry::Node(a, b) => {
                for t in 0..d {
                    let idx = *by_opener.get(&(a, (b + t) % d)).ok_or_else(|| {
                        Error::Invariant("vector entry is not a block opener".into())
                    })?;
                    targets[idx].push((r, t));
                }
            }
        }
    }
    for (i, block) in ap.blocks().iter().enumerate() {
        if targets[i].len() * ap.k != block.len() {
            return Err(Error::Invariant("label sizes do not match block sizes".into()));
        }
        targets[i].sort_unstable();
    }
    Ok(targets)
}

fn finish_ddn_candidate(
    ctx: &GroupContext,
    ap: &AnnularPartition,
    v: &ParkVector,
) -> Option<FussParkingFunction> {
    if !ap.validate() {
        return None;
    }
    let targets = annular_targets(ap, v).ok()?;
    let chain = annular_chain(ctx, ap).ok()?;
    if tau(ctx, &chain).ok().as_ref() != Some(ap) {
        return None;
    }
    let pi1 = orbit_partition(ctx, ctx.element(chain.parts[0])).ok()?;
    let w = solve_fuss_w(ctx, ap.k, ap.blocks(), &targets, ap.inner_base(), &pi1).ok()?;
    let fpf = FussParkingFunction::new(ctx, &w, chain).ok()?;
    // the solved element may have absorbed a color imbalance by re-pairing
    // labels, so only a full replay certifies the candidate
    if forward_fuss_ddn(ctx, &fpf).ok().as_ref() != Some(v) {
        return None;
    }
    Some(fpf)
}

fn compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; caps.len()];
    fn rec(i: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left.min(caps[i]) {
            cur[i] = x;
            rec(i + 1, left - x, caps, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, total, caps, &mut cur, &mut out);
    out
}

/// Inverse of [`forward_fuss_ddn`].  Candidate pictures are generated from the
/// coordinate multiplicities, splitting on how many letters are Zero: none
/// means k inner points are absorbed into outer blocks, one means the inner
/// circle splits into d free-standing arcs, and two or more force a zero
/// block holding the whole inner circle.
pub fn inverse_fuss_ddn(ctx: &GroupContext, k: usize, v: &ParkVector) -> Result<FussParkingFunction> {
    if ctx.family != Family::DDN {
        return Err(Error::InvalidParameters("expected a G(d,d,n) context".into()));
    }
    let kk = k * (ctx.n - 1);
    if k == 0 || v.d != ctx.d || v.m != kk || v.len() != ctx.n {
        return Err(Error::InvalidParameters("vector shape does not match".into()));
    }
    let d = ctx.d;
    let dk = d * k;
    let (mult, zeros) = multiplicities(v);
    let mut candidates: Vec<AnnularPartition> = Vec::new();
    let inner_point = |pos: usize| (kk + pos % k, pos / k);
    match zeros.len() {
        0 => {
            let families: Vec<usize> =
                (0..mult.len()).filter(|&r| mult[r] > 0).collect();
            let caps: Vec<usize> = families.iter().map(|&r| k * mult[r] - 1).collect();
            for spread in compositions(k, &caps) {
                let mut quota = vec![0usize; v.m];
                for (j, &r) in families.iter().enumerate() {
                    quota[r] = k * mult[r] - spread[j];
                }
                for (blocks, _) in match_blocks(d, kk, &quota, false) {
                    let layout = CircleLayout::new(d, kk);
                    // attach inner arcs: each copy continues past its last
                    // outer residue, with one global color choice per family
                    let per_family: HashMap<usize, usize> = families
                        .iter()
                        .enumerate()
                        .map(|(j, &r)| (r, spread[j]))
                        .collect();
                    let mut colorings = vec![Vec::new()];
                    for &r in &families {
                        if per_family[&r] == 0 {
                            continue;
                        }
                        let mut next = Vec::new();
                        for c in colorings {
                            for x in 0..d {
                                let mut c2: Vec<(usize, usize)> = c.clone();
                                c2.push((r, x));
                                next.push(c2);
                            }
                        }
                        colorings = next;
                    }
                    'coloring: for coloring in &colorings {
                        let offset: HashMap<usize, usize> = coloring.iter().copied().collect();
                        let mut used = vec![false; dk];
                        let mut full = Vec::new();
                        for block in &blocks {
                            let Some(fam) =
                                block.iter().map(|&(a, _)| a).find(|&a| quota[a] > 0)
                            else {
                                continue 'coloring;
                            };
                            let arc = per_family.get(&fam).copied().unwrap_or(0);
                            let mut b = block.clone();
                            if arc > 0 {
                                let positions: BTreeSet<usize> =
                                    block.iter().map(|&p| layout.pos(p)).collect();
                                let sorted: Vec<usize> = positions.iter().copied().collect();
                                let total = layout.len();
                                let mut start = sorted[0];
                                let mut best = 0usize;
                                for (i, &p) in sorted.iter().enumerate() {
                                    let next = sorted[(i + 1) % sorted.len()];
                                    let gap = (next + total - p) % total;
                                    let gap = if gap == 0 { total } else { gap };
                                    if gap > best {
                                        best = gap;
                                        start = next;
                                    }
                                }
                                let opener = layout.point(start);
                                let mut last = opener;
                                let mut p = start;
                                for _ in 0..positions.len() {
                                    last = layout.point(p);
                                    p = (p + 1) % total;
                                    while !positions.contains(&p) && p != start {
                                        p = (p + 1) % total;
                                    }
                                    if p == start {
                                        break;
                                    }
                                }
                                let a0 = (last.0 + 1) % k;
                                let color = (offset[&fam] + opener.1) % d;
                                let startq = color * k + a0;
                                for t in 0..arc {
                                    let q = (startq + t) % dk;
                                    if used[q] {
                                        continue 'coloring;
                                    }
                                    used[q] = true;
                                    b.push(inner_point(q));
                                }
                            }
                            full.push(b);
                        }
                        if let Ok(ap) = AnnularPartition::new(d, k, ctx.n, full) {
                            if !candidates.contains(&ap) {
                                candidates.push(ap);
                            }
                        }
                    }
                }
            }
        }
        1 => {
            let quota: Vec<usize> = mult.iter().map(|&q| q * k).collect();
            for (blocks, _) in match_blocks(d, kk, &quota, false) {
                for beta in 0..k {
                    let mut full = blocks.clone();
                    for t in 0..d {
                        let run: Vec<Point> =
                            (0..k).map(|j| inner_point((t * k + beta + j) % dk)).collect();
                        full.push(run);
                    }
                    if let Ok(ap) = AnnularPartition::new(d, k, ctx.n, full) {
                        if !candidates.contains(&ap) {
                            candidates.push(ap);
                        }
                    }
                }
            }
        }
        z => {
            let quota: Vec<usize> = mult.iter().map(|&q| q * k).collect();
            for (blocks, leftover) in match_blocks(d, kk, &quota, true) {
                if leftover.len() != dk * (z - 1) {
                    continue;
                }
                let mut zero: Vec<Point> = leftover;
                zero.extend((0..dk).map(inner_point));
                let mut full = blocks;
                full.push(zero);
                if let Ok(ap) = AnnularPartition::new(d, k, ctx.n, full) {
                    if !candidates.contains(&ap) {
                        candidates.push(ap);
                    }
                }
            }
        }
    }
    let mut survivors: Vec<FussParkingFunction> = Vec::new();
    for ap in &candidates {
        if let Some(fpf) = finish_ddn_candidate(ctx, ap, v) {
            if !survivors.contains(&fpf) {
                survivors.push(fpf);
            }
        }
    }
    match survivors.len() {
        0 => Err(Error::Invariant("vector is not in the image".into())),
        1 => Ok(survivors.pop().unwrap()),
        _ => Err(Error::Invariant(format!(
            "vector lifts ambiguously: {}",
            survivors
                .iter()
                .map(|f| f.to_text(ctx))
                .collect::<Vec<_>>()
                .join(" / ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absolute::length;
    use crate::bijection::{all_vectors, vector_act_c, vector_act_w, vector_count};

    fn ctx(family: Family, d: usize, n: usize) -> GroupContext {
        GroupContext::new(family, d, n).unwrap()
    }

    fn chain_count_formula(ctx: &GroupContext, k: usize) -> u128 {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for &deg in ctx.degrees.iter().filter(|&&deg| deg > 1) {
            num *= (k * ctx.h + deg) as u128;
            den *= deg as u128;
        }
        num / den
    }

    #[test]
    fn multichain_counts_match_the_product_formula() {
        for (family, d, n, k) in [
            (Family::D1N, 2, 1, 2),
            (Family::D1N, 2, 2, 2),
            (Family::D1N, 1, 3, 2),
            (Family::D1N, 3, 2, 3),
            (Family::DDN, 2, 3, 2),
            (Family::DDN, 3, 3, 2),
        ] {
            let g = ctx(family, d, n);
            let chains = enumerate_multichains(&g, k).unwrap();
            assert_eq!(chains.len() as u128, chain_count_formula(&g, k));
        }
        let g = ctx(Family::D1N, 2, 1);
        assert_eq!(enumerate_multichains(&g, 2).unwrap().len(), 3);
        let g = ctx(Family::D1N, 2, 2);
        assert_eq!(enumerate_multichains(&g, 2).unwrap().len(), 15);
    }

    #[test]
    fn boundary_lengths_add_and_integrate_round_trips() {
        for (family, d, n, k) in [(Family::DDN, 2, 3, 2), (Family::D1N, 2, 2, 3)] {
            let g = ctx(family, d, n);
            for chain in enumerate_multichains(&g, k).unwrap() {
                let f = boundary(&g, &chain).unwrap();
                assert_eq!(f.parts.len(), k + 1);
                let total: u32 = f.parts.iter().map(|w| length(&g, w).unwrap()).sum();
                assert_eq!(total, g.rank() as u32);
                let mut prod = g.identity();
                for w in &f.parts {
                    prod = g.compose(&prod, w);
                }
                assert_eq!(&prod, g.coxeter_element());
                assert_eq!(integrate(&g, &f).unwrap(), chain);
            }
        }
    }

    #[test]
    fn zkh_action_has_order_dividing_kh_and_extends_conjugation() {
        let g = ctx(Family::D1N, 2, 2);
        let k = 2;
        let kh = (k * g.h) as i64;
        let mut moved = false;
        for chain in enumerate_multichains(&g, k).unwrap() {
            assert_eq!(zkh_chain(&g, &chain, kh).unwrap(), chain);
            let step = zkh_chain(&g, &chain, 1).unwrap();
            moved |= step != chain;
            assert_eq!(zkh_chain(&g, &step, -1).unwrap(), chain);
            assert_eq!(zkh_chain(&g, &chain, 3).unwrap(), {
                let mut c = chain.clone();
                for _ in 0..3 {
                    c = zkh_chain(&g, &c, 1).unwrap();
                }
                c
            });
        }
        assert!(moved);
        let g = ctx(Family::D1N, 3, 2);
        for &id in nc_interval(&g).unwrap() {
            let chain = Multichain::new(&g, vec![id]).unwrap();
            let turned = zkh_chain(&g, &chain, 1).unwrap();
            let c = g.coxeter_element();
            let conj = g.compose(&g.compose(c, g.element(id)), &g.inverse(c));
            assert_eq!(turned.parts, vec![g.id_of(&conj).unwrap()]);
        }
    }

    #[test]
    fn kreweras_model_follows_the_primes_before_convention() {
        let blocks = vec![vec![0, 1], vec![2]];
        assert_eq!(kreweras_model(3, &blocks).unwrap(), vec![vec![0, 2], vec![1]]);
        fn all_nc(len: usize) -> Vec<Vec<Vec<usize>>> {
            let mut out = Vec::new();
            let mut cur: Vec<Vec<usize>> = Vec::new();
            fn rec(x: usize, len: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
                if x == len {
                    if crossing_free(len, cur) {
                        let mut sorted = cur.clone();
                        sorted.sort();
                        out.push(sorted);
                    }
                    return;
                }
                for i in 0..cur.len() {
                    cur[i].push(x);
                    rec(x + 1, len, cur, out);
                    cur[i].pop();
                }
                cur.push(vec![x]);
                rec(x + 1, len, cur, out);
                cur.pop();
            }
            rec(0, len, &mut cur, &mut out);
            out
        }
        for p in all_nc(5) {
            let kp = kreweras_model(5, &p).unwrap();
            assert_eq!(kreweras_model_inv(5, &kp).unwrap(), p);
            let kkp = kreweras_model(5, &kp).unwrap();
            let mut rotated: Vec<Vec<usize>> = p
                .iter()
                .map(|b| {
                    let mut r: Vec<usize> = b.iter().map(|&x| (x + 1) % 5).collect();
                    r.sort_unstable();
                    r
                })
                .collect();
            rotated.sort();
            assert_eq!(kkp, rotated);
        }
    }

    #[test]
    fn shuffle_interleaves_layers_and_nabla_closes_them() {
        let g = ctx(Family::D1N, 3, 3);
        let u1 = g.parse_element("1:0 3:0 2:0").unwrap();
        let u2 = g.parse_element("1:0 2:0 3:2").unwrap();
        let layers =
            vec![orbit_partition(&g, &u1).unwrap(), orbit_partition(&g, &u2).unwrap()];
        let shuffled = shuffle(&layers).unwrap();
        let mut expected = Vec::new();
        for j in 0..3 {
            expected.push(vec![(2usize, j), (4usize, j)]);
            expected.push(vec![(0usize, j)]);
            expected.push(vec![(1usize, j)]);
            expected.push(vec![(3usize, j)]);
        }
        expected.push(vec![(5, 0), (5, 1), (5, 2)]);
        assert_eq!(shuffled, SymPartition::new(3, 6, false, expected).unwrap());

        let pi1 = g.parse_element("2:0 1:0 3:0").unwrap();
        let pi2 = g.parse_element("2:0 3:0 1:0").unwrap();
        let chain =
            Multichain::new(&g, vec![g.id_of(&pi1).unwrap(), g.id_of(&pi2).unwrap()]).unwrap();
        let model = nabla(&g, &chain).unwrap();
        let mut blocks = Vec::new();
        for j in 0..3 {
            blocks.push(vec![(0usize, j), (1, j), (2, j), (5, j)]);
            blocks.push(vec![(3usize, j), (4, j)]);
        }
        assert_eq!(model, SymPartition::new(3, 6, false, blocks).unwrap());
    }

    #[test]
    fn nabla_reduces_to_the_circular_model_for_single_links() {
        for (d, n) in [(3, 2), (2, 2), (1, 3)] {
            let g = ctx(Family::D1N, d, n);
            for &id in nc_interval(&g).unwrap() {
                let chain = Multichain::new(&g, vec![id]).unwrap();
                assert_eq!(
                    nabla(&g, &chain).unwrap(),
                    orbit_partition(&g, g.element(id)).unwrap()
                );
            }
        }
    }

    #[test]
    fn printed_chain_model_carries_its_labels_onto_the_vector() {
        let g = ctx(Family::D1N, 3, 3);
        let chain = Multichain::parse(&g, "2:0 1:0 3:0 | 2:0 3:0 1:0").unwrap();
        let w = g.parse_element("2:0 1:1 3:1").unwrap();
        let fpf = FussParkingFunction::new(&g, &w, chain).unwrap();
        let model = nabla_labeled(&g, &fpf).unwrap();
        let expected_labels: Vec<(Vec<Point>, Vec<Point>)> = vec![
            (vec![(0, 0), (1, 0), (2, 0), (5, 0)], vec![(0, 1), (1, 0)]),
            (vec![(0, 1), (1, 1), (2, 1), (5, 1)], vec![(0, 2), (1, 1)]),
            (vec![(0, 2), (1, 2), (2, 2), (5, 2)], vec![(0, 0), (1, 2)]),
            (vec![(3, 0), (4, 0)], vec![(2, 1)]),
            (vec![(3, 1), (4, 1)], vec![(2, 2)]),
            (vec![(3, 2), (4, 2)], vec![(2, 0)]),
        ];
        for (block, label) in expected_labels {
            let idx = model
                .partition
                .blocks()
                .iter()
                .position(|b| *b == block)
                .unwrap();
            let mut want = label;
            want.sort_unstable();
            assert_eq!(model.labels[idx], want);
        }
        let v = forward_fuss_d1n(&g, &fpf).unwrap();
        assert_eq!(v, ParkVector::parse(3, 6, 3, "1:3,1:1,4:3").unwrap());
        assert_eq!(inverse_fuss_d1n(&g, 2, &v).unwrap(), fpf);
    }

    #[test]
    fn all_zero_vector_lifts_to_the_constant_coxeter_chain() {
        let g = ctx(Family::D1N, 2, 2);
        let v = ParkVector::parse(2, 4, 2, "Z,Z").unwrap();
        let fpf = inverse_fuss_d1n(&g, 2, &v).unwrap();
        let cid = g.id_of(g.coxeter_element()).unwrap();
        assert_eq!(fpf.chain.parts, vec![cid, cid]);
        assert!(fpf.rep.is_identity());

        let g = ctx(Family::DDN, 2, 3);
        let v = ParkVector::parse(2, 4, 3, "Z,Z,Z").unwrap();
        let fpf = inverse_fuss_ddn(&g, 2, &v).unwrap();
        let cid = g.id_of(g.coxeter_element()).unwrap();
        assert_eq!(fpf.chain.parts, vec![cid, cid]);
    }

    #[test]
    fn chained_bijection_sweeps_the_full_grid() {
        for (d, n, k) in [(2, 1, 2), (3, 2, 2), (2, 2, 2), (2, 2, 3)] {
            let g = ctx(Family::D1N, d, n);
            let all = enumerate_fuss_park(&g, k).unwrap();
            let expected = vector_count(d, k * n, n).unwrap();
            assert_eq!(all.len() as u128, expected);
            let mut images = BTreeSet::new();
            for fpf in &all {
                let v = forward_fuss_d1n(&g, fpf).unwrap();
                assert!(images.insert(v.to_text()));
                assert_eq!(&inverse_fuss_d1n(&g, k, &v).unwrap(), fpf);
            }
            assert_eq!(images.len(), all.len());
        }
    }

    #[test]
    fn rank_one_type_a_chains_park_strictly_inside_the_grid() {
        let g = ctx(Family::D1N, 1, 3);
        let k = 2;
        let all = enumerate_fuss_park(&g, k).unwrap();
        assert_eq!(all.len(), 49);
        let mut images = BTreeSet::new();
        for fpf in &all {
            let v = forward_fuss_d1n(&g, fpf).unwrap();
            assert!(images.insert(v.to_text()));
            assert_eq!(&inverse_fuss_d1n(&g, k, &v).unwrap(), fpf);
        }
        let mut hits = 0;
        for v in all_vectors(1, 6, 3) {
            match inverse_fuss_d1n(&g, k, &v) {
                Ok(fpf) => {
                    hits += 1;
                    assert!(images.contains(&forward_fuss_d1n(&g, &fpf).unwrap().to_text()));
                }
                Err(_) => assert!(!images.contains(&v.to_text())),
            }
        }
        assert_eq!(hits, 49);
    }

    #[test]
    fn chained_actions_match_the_vector_actions() {
        let g = ctx(Family::D1N, 2, 2);
        let k = 2;
        let all = enumerate_fuss_park(&g, k).unwrap();
        for fpf in &all {
            let v = forward_fuss_d1n(&g, fpf).unwrap();
            let rotated = zkh_park(&g, fpf, 1).unwrap();
            assert_eq!(forward_fuss_d1n(&g, &rotated).unwrap(), vector_act_c(&v, 1));
            assert_eq!(zkh_park(&g, fpf, (k * g.h) as i64).unwrap(), *fpf);
        }
        let sample = &all[all.len() / 2];
        let v = forward_fuss_d1n(&g, sample).unwrap();
        for uid in 0..g.elements().unwrap().len() as u32 {
            let u = g.element(uid);
            let moved = fuss_act_w(&g, u, sample).unwrap();
            assert_eq!(
                forward_fuss_d1n(&g, &moved).unwrap(),
                vector_act_w(u, &v).unwrap()
            );
        }
    }

    #[test]
    fn tau_reduces_to_the_centered_model_for_single_links() {
        for (d, n) in [(2, 3), (3, 3), (3, 2)] {
            let g = ctx(Family::DDN, d, n);
            for &id in nc_interval(&g).unwrap() {
                let chain = Multichain::new(&g, vec![id]).unwrap();
                let ap = tau(&g, &chain).unwrap();
                let p = orbit_partition(&g, g.element(id)).unwrap();
                let mut expected: Vec<Vec<Point>> = p.blocks().to_vec();
                for b in &mut expected {
                    b.sort_unstable();
                }
                expected.sort();
                assert_eq!(ap.blocks(), &expected[..]);
                assert!(validate_annular(&g, &ap));
                assert_eq!(annular_chain(&g, &ap).unwrap(), chain);
            }
        }
    }

    fn fig_ten_context() -> GroupContext {
        ctx(Family::DDN, 3, 3)
    }

    fn annular_case(
        chain_text: &str,
        blocks: Vec<Vec<Point>>,
        labels: Vec<(Vec<Point>, Vec<Point>)>,
        vector_text: &str,
    ) {
        let g = fig_ten_context();
        let chain = Multichain::parse(&g, chain_text).unwrap();
        let w = g.parse_element("2:1 3:1 1:1").unwrap();
        let fpf = FussParkingFunction::new(&g, &w, chain).unwrap();
        let ap = tau(&g, &fpf.chain).unwrap();
        let expected = AnnularPartition::new(3, 3, 3, blocks).unwrap();
        assert_eq!(ap, expected);
        assert!(validate_annular(&g, &ap));
        let model = annular_labeled(&g, &fpf).unwrap();
        for (block, label) in labels {
            let mut b = block;
            b.sort_unstable();
            let idx = ap.blocks().iter().position(|x| *x == b).unwrap();
            let mut want = label;
            want.sort_unstable();
            assert_eq!(model.labels[idx], want, "label of {b:?}");
        }
        assert!(phi_exists(&model));
        let v = forward_fuss_ddn(&g, &fpf).unwrap();
        assert_eq!(v, ParkVector::parse(3, 6, 3, vector_text).unwrap());
        assert_eq!(inverse_fuss_ddn(&g, 3, &v).unwrap(), fpf);
    }

    #[test]
    fn printed_annular_picture_with_absorbed_inner_points() {
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        for j in 0..3 {
            blocks.push(vec![(0, j), (1, j), (2, j), (3, j), (7, j), (8, j)]);
            blocks.push(vec![(4, j), (5, j), (6, j)]);
            labels.push((
                vec![(0, j), (1, j), (2, j), (3, j), (7, j), (8, j)],
                vec![(1, (j + 1) % 3), (2, (j + 1) % 3)],
            ));
            labels.push((vec![(4, j), (5, j), (6, j)], vec![(0, (j + 1) % 3)]));
        }
        annular_case(
            "2:0 1:0 3:0 | 2:0 3:0 1:0 | 2:0 3:0 1:0",
            blocks,
            labels,
            "5:3,1:3,1:3",
        );
    }

    #[test]
    fn printed_annular_picture_with_free_inner_arcs() {
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        for j in 0..3 {
            blocks.push(vec![(0, j), (1, j), (5, j)]);
            blocks.push(vec![(2, j), (3, j), (4, j)]);
            blocks.push(vec![(6, j), (7, j), (8, j)]);
            labels.push((vec![(0, j), (1, j), (5, j)], vec![(1, (j + 1) % 3)]));
            labels.push((vec![(2, j), (3, j), (4, j)], vec![(2, (j + 1) % 3)]));
            labels.push((vec![(6, j), (7, j), (8, j)], vec![(0, (j + 1) % 3)]));
        }
        annular_case(
            "1:0 2:0 3:0 | 1:0 2:0 3:0 | 2:0 1:0 3:0",
            blocks,
            labels,
            "Z,1:3,3:3",
        );
    }

    #[test]
    fn printed_annular_picture_with_a_zero_block() {
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        let mut zero = Vec::new();
        let mut zero_label = Vec::new();
        for j in 0..3 {
            zero.extend([(0, j), (1, j), (5, j), (6, j), (7, j), (8, j)]);
            zero_label.extend([(0, j), (1, j)]);
            blocks.push(vec![(2, j), (3, j), (4, j)]);
            labels.push((vec![(2, j), (3, j), (4, j)], vec![(2, (j + 1) % 3)]));
        }
        labels.push((zero.clone(), zero_label));
        blocks.push(zero);
        annular_case(
            "1:2 2:0 3:1 | 1:2 2:0 3:1 | 2:0 1:2 3:1",
            blocks,
            labels,
            "Z,Z,3:3",
        );
    }

    #[test]
    fn twisting_one_label_family_breaks_the_color_balance() {
        let g = fig_ten_context();
        let chain = Multichain::parse(&g, "1:0 2:0 3:0 | 1:0 2:0 3:0 | 2:0 1:0 3:0").unwrap();
        let w = g.parse_element("2:1 3:1 1:1").unwrap();
        let fpf = FussParkingFunction::new(&g, &w, chain).unwrap();
        let mut model = annular_labeled(&g, &fpf).unwrap();
        assert!(phi_exists(&model));
        for label in &mut model.labels {
            for pt in label.iter_mut() {
                if pt.0 == 1 {
                    pt.1 = (pt.1 + 1) % 3;
                }
            }
            label.sort_unstable();
        }
        assert!(!phi_exists(&model));
    }

    #[test]
    fn annular_zero_blocks_mirror_the_chain_bottom() {
        let g = ctx(Family::DDN, 2, 3);
        for chain in enumerate_multichains(&g, 2).unwrap() {
            let ap = tau(&g, &chain).unwrap();
            let p = orbit_partition(&g, g.element(chain.parts[0])).unwrap();
            assert_eq!(ap.zero_block().is_some(), p.zero_block().is_some());
        }
    }

    #[test]
    fn annular_bijection_sweeps_the_full_grid() {
        for (d, n, k) in [(2, 3, 2), (3, 2, 2)] {
            let g = ctx(Family::DDN, d, n);
            let all = enumerate_fuss_park(&g, k).unwrap();
            let expected = vector_count(d, k * (n - 1), n).unwrap();
            assert_eq!(all.len() as u128, expected);
            let mut images = BTreeSet::new();
            for fpf in &all {
                let v = forward_fuss_ddn(&g, fpf).unwrap();
                assert!(images.insert(v.to_text()));
                assert_eq!(&inverse_fuss_ddn(&g, k, &v).unwrap(), fpf);
            }
            assert_eq!(images.len(), all.len());
        }
    }

    #[test]
    fn annular_actions_match_the_vector_actions() {
        let g = ctx(Family::DDN, 2, 3);
        let k = 2;
        let all = enumerate_fuss_park(&g, k).unwrap();
        for fpf in all.iter().step_by(37) {
            let v = forward_fuss_ddn(&g, fpf).unwrap();
            let rotated = zkh_park(&g, fpf, 1).unwrap();
            assert_eq!(forward_fuss_ddn(&g, &rotated).unwrap(), vector_act_c(&v, 1));
            for uid in (0..g.elements().unwrap().len() as u32).step_by(7) {
                let u = g.element(uid);
                let moved = fuss_act_w(&g, u, fpf).unwrap();
                assert_eq!(
                    forward_fuss_ddn(&g, &moved).unwrap(),
                    vector_act_w(u, &v).unwrap()
                );
            }
        }
    }

    #[test]
    fn chain_and_parking_texts_round_trip() {
        let g = ctx(Family::D1N, 3, 3);
        let chain = Multichain::parse(&g, "2:0 1:0 3:0 | 2:0 3:0 1:0").unwrap();
        assert_eq!(Multichain::parse(&g, &chain.to_text(&g)).unwrap(), chain);
        let w = g.parse_element("2:0 1:1 3:1").unwrap();
        let fpf = FussParkingFunction::new(&g, &w, chain).unwrap();
        assert_eq!(FussParkingFunction::parse(&g, &fpf.to_text(&g)).unwrap(), fpf);
        let model = nabla_labeled(&g, &fpf).unwrap();
        assert!(model.to_text().starts_with("blocks:"));
        let gd = fig_ten_context();
        let chain = Multichain::parse(&gd, "1:0 2:0 3:0 | 1:0 2:0 3:0 | 2:0 1:0 3:0").unwrap();
        let wd = gd.parse_element("2:1 3:1 1:1").unwrap();
        let fd = FussParkingFunction::new(&gd, &wd, chain).unwrap();
        let am = annular_labeled(&gd, &fd).unwrap();
        assert!(am.to_text().contains(";inner:"));
        assert!(am.to_text().contains(";labels:"));
    }
}
