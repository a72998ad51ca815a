//! Enumerative verification of the counting theorems and the bijections.
//!
//! Every check here compares an exhaustive enumeration against an exact
//! closed form, integer against integer with zero tolerance: Catalan and
//! Fuss-Catalan products against interval and chain counts, (kh+1)^r against
//! parking-function counts, full round trips of the forward and inverse maps
//! over whole vector spaces, equivariance for a standard generating set, and
//! the lattice axioms on the noncrossing interval.  `run_suite` packages the
//! whole battery over a grid of groups; `euler_experiment` is the one
//! exploratory computation, reported but never asserted.
//!
//! Rotation equivariance of the vector maps is checked for d ≥ 2 only: the
//! d = 1 circles read openers at the least position, which does not commute
//! with rotation once a block wraps, and a rotation-stable block makes any
//! entrywise intertwiner impossible.  Translation equivariance is checked
//! for every cell.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;

use crate::absolute::{abs_leq, kreweras, length, nc_interval, parabolic_subgroup};
use crate::bijection::{
    all_vectors, from_vector, to_vector, vector_act_c, vector_act_w, vector_count,
};
use crate::fuss::{
    boundary, enumerate_fuss_park, enumerate_multichains, fuss_act_w, fuss_from_vector,
    fuss_to_vector, integrate, zkh_chain, zkh_park,
};
use crate::group::{ColoredElement, ElemId, Family, GroupContext};
use crate::model::{omega, orbit_partition};
use crate::parking::{act_c, act_w, enumerate_park, orbit_decomposition};
use crate::{Error, Result};

/// Largest vector space a suite cell will sweep exhaustively.
const SWEEP_LIMIT: u128 = 1_000_000;

/// Largest parking set `euler_experiment` accepts.
const EULER_CAP: usize = 4096;

/// The Coxeter-Catalan number Π (h+dᵢ)/dᵢ over the degrees of the
/// reflection representation.  The product runs over degrees ≥ 2, so the
/// trivial summand of G(1,1,n) contributes nothing.
pub fn catalan(ctx: &GroupContext) -> u64 {
    fuss_catalan(ctx, 1)
}

/// The Fuss-Catalan number Π (kh+dᵢ)/dᵢ, counting k-multichains in the
/// noncrossing lattice.  Computed with exact rational arithmetic; the
/// final value is an integer for every reflection group.
pub fn fuss_catalan(ctx: &GroupContext, k: usize) -> u64 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for &deg in ctx.degrees.iter().filter(|&&deg| deg >= 2) {
        num *= (k * ctx.h + deg) as u128;
        den *= deg as u128;
        let g = num::integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    assert_eq!(den, 1, "Fuss-Catalan product left a nontrivial denominator");
    num as u64
}

/// The counting theorem's value (kh+1)^r, where r is the rank of the
/// reflection representation.
pub fn park_count_formula(ctx: &GroupContext, k: usize) -> u64 {
    ((k * ctx.h + 1) as u64).pow(ctx.rank() as u32)
}

/// One exact comparison: what the closed form demands, what enumeration
/// produced, and how long the two took to confront each other.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub family: Family,
    pub d: usize,
    pub n: usize,
    /// Fuss parameter; 0 on checks that do not involve chains.
    pub k: usize,
    pub expected: i64,
    pub observed: i64,
    pub pass: bool,
    pub ms: u64,
}

/// Every check of a suite run, in grid order.  The report passes only if
/// every single check does.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One line per check, stable apart from the timings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "{} {} d={} n={} k={} {:<26} expected={} observed={} ({} ms)\n",
                verdict, c.family, c.d, c.n, c.k, c.name, c.expected, c.observed, c.ms
            ));
        }
        let verdict = if self.pass() { "pass" } else { "FAIL" };
        out.push_str(&format!("suite: {} ({} checks)\n", verdict, self.checks.len()));
        out
    }
}

/// The default verification grid.
pub fn default_grid() -> Vec<(Family, usize, usize)> {
    vec![
        (Family::D1N, 1, 3),
        (Family::D1N, 2, 2),
        (Family::D1N, 2, 3),
        (Family::D1N, 3, 2),
        (Family::D1N, 3, 3),
        (Family::D1N, 4, 2),
        (Family::DDN, 2, 3),
        (Family::DDN, 2, 4),
        (Family::DDN, 3, 2),
        (Family::DDN, 3, 3),
    ]
}

/// Runs the full battery on every grid cell for Fuss parameters 1..=k_max.
/// Cells are independent and run on their own threads; the report lists
/// them in grid order.  Sweeps whose vector space would exceed 10⁶ points
/// are skipped rather than attempted.
pub fn run_suite(grid: &[(Family, usize, usize)], k_max: usize) -> Result<VerificationReport> {
    let mut cells: Vec<Result<Vec<Check>>> = Vec::with_capacity(grid.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .iter()
            .map(|&(family, d, n)| scope.spawn(move || check_cell(family, d, n, k_max)))
            .collect();
        for handle in handles {
            cells.push(handle.join().expect("suite cell panicked"));
        }
    });
    let mut checks = Vec::new();
    for cell in cells {
        checks.extend(cell?);
    }
    Ok(VerificationReport { checks })
}

struct Recorder {
    family: Family,
    d: usize,
    n: usize,
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: &str, k: usize, expected: u64, observed: u64, start: Instant) {
        self.checks.push(Check {
            name: name.to_string(),
            family: self.family,
            d: self.d,
            n: self.n,
            k,
            expected: expected as i64,
            observed: observed as i64,
            pass: expected == observed,
            ms: start.elapsed().as_millis() as u64,
        });
    }
}

fn check_cell(family: Family, d: usize, n: usize, k_max: usize) -> Result<Vec<Check>> {
    let ctx = GroupContext::new(family, d, n)?;
    let mut rec = Recorder { family, d, n, checks: Vec::new() };
    structural_checks(&ctx, &mut rec)?;
    for k in 1..=k_max {
        let space = vector_count(d, vector_m(&ctx, k), n).unwrap_or(u128::MAX);
        if space > SWEEP_LIMIT {
            continue;
        }
        if k == 1 {
            park_checks(&ctx, &mut rec)?;
        }
        fuss_checks(&ctx, k, &mut rec)?;
    }
    Ok(rec.checks)
}

/// Modulus parameter of the vector space attached to Fuss parameter k:
/// coordinates take dm+1 = kh+1 values.
fn vector_m(ctx: &GroupContext, k: usize) -> usize {
    match ctx.family {
        Family::D1N => k * ctx.n,
        Family::DDN => k * (ctx.n - 1),
    }
}

/// A standard generating set of reflections: adjacent transpositions plus
/// either a diagonal reflection (G(d,1,n), d ≥ 2) or the color-twisted
/// transposition (G(d,d,n)).
fn standard_generators(ctx: &GroupContext) -> Vec<ColoredElement> {
    let (d, n) = (ctx.d, ctx.n);
    let mut gens = Vec::new();
    let transposition = |i: usize| {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.swap(i, i + 1);
        ColoredElement { sigma, shift: vec![0; n] }
    };
    for i in 0..n.saturating_sub(1) {
        gens.push(transposition(i));
    }
    match ctx.family {
        Family::D1N => {
            if d >= 2 {
                let mut shift = vec![0; n];
                shift[0] = 1;
                gens.push(ColoredElement { sigma: (0..n).collect(), shift });
            }
        }
        Family::DDN => {
            let mut twisted = transposition(0);
            twisted.shift[0] = 1;
            twisted.shift[1] = d - 1;
            gens.push(twisted);
        }
    }
    for g in &gens {
        assert!(ctx.contains(g) && ctx.dim_fix(g) == n - 1, "generator is not a reflection");
    }
    gens
}

/// Size of the subgroup the generators reach, by plain closure.
fn generated_order(ctx: &GroupContext, gens: &[ColoredElement]) -> usize {
    let mut seen: HashSet<ColoredElement> = HashSet::new();
    let mut frontier = vec![ctx.identity()];
    seen.insert(ctx.identity());
    while let Some(w) = frontier.pop() {
        for g in gens {
            let next = ctx.compose(&w, g);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

fn structural_checks(ctx: &GroupContext, rec: &mut Recorder) -> Result<()> {
    let (d, n) = (ctx.d, ctx.n);

    let start = Instant::now();
    let expected_order: u128 = ctx.degrees.iter().map(|&x| x as u128).product();
    let observed_order = ctx.elements()?.len() as u64;
    rec.push("degree-product", 0, expected_order as u64, observed_order, start);

    let start = Instant::now();
    let expected_refl = match ctx.family {
        Family::D1N => n * (d - 1) + d * n * (n - 1) / 2,
        Family::DDN => d * n * (n - 1) / 2,
    };
    rec.push("reflection-count", 0, expected_refl as u64, ctx.reflections().len() as u64, start);

    let start = Instant::now();
    let gens = standard_generators(ctx);
    rec.push("generators-generate", 0, observed_order, generated_order(ctx, &gens) as u64, start);

    let start = Instant::now();
    let c = ctx.coxeter_element().clone();
    rec.push("coxeter-length", 0, ctx.rank() as u64, u64::from(length(ctx, &c)?), start);

    let nc: Vec<ElemId> = nc_interval(ctx)?.to_vec();
    let start = Instant::now();
    rec.push("catalan-count", 0, catalan(ctx), nc.len() as u64, start);

    let start = Instant::now();
    let mut good = 0;
    for &id in &nc {
        let w = ctx.element(id);
        if u64::from(length(ctx, w)?) == (n - ctx.dim_fix(w)) as u64 {
            good += 1;
        }
    }
    rec.push("length-is-codimension", 0, nc.len() as u64, good, start);

    let start = Instant::now();
    let c_inv = ctx.inverse(&c);
    let mut good = 0;
    for &id in &nc {
        let w = ctx.element(id);
        let twice = kreweras(ctx, &kreweras(ctx, w));
        if twice == ctx.compose(&ctx.compose(&c, w), &c_inv) {
            good += 1;
        }
    }
    rec.push("kreweras-squares-to-c", 0, nc.len() as u64, good, start);

    let start = Instant::now();
    let mut parabolics: HashSet<Vec<ElemId>> = HashSet::new();
    for &id in &nc {
        let mut sub = parabolic_subgroup(ctx, ctx.element(id))?.as_ref().clone();
        sub.sort_unstable();
        parabolics.insert(sub);
    }
    rec.push("parabolic-injective", 0, nc.len() as u64, parabolics.len() as u64, start);

    let start = Instant::now();
    let mut good = 0;
    for &id in &nc {
        let w = ctx.element(id);
        if omega(ctx, &orbit_partition(ctx, w)?)? == *w {
            good += 1;
        }
    }
    rec.push("partition-roundtrip", 0, nc.len() as u64, good, start);

    let start = Instant::now();
    let sz = nc.len();
    let mut leq = vec![false; sz * sz];
    for i in 0..sz {
        for j in 0..sz {
            leq[i * sz + j] = abs_leq(ctx, ctx.element(nc[i]), ctx.element(nc[j]))?;
        }
    }
    let mut good: u64 = 0;
    for i in 0..sz {
        for j in 0..sz {
            let lowers: Vec<usize> =
                (0..sz).filter(|&x| leq[x * sz + i] && leq[x * sz + j]).collect();
            let uppers: Vec<usize> =
                (0..sz).filter(|&x| leq[i * sz + x] && leq[j * sz + x]).collect();
            let has_meet =
                lowers.iter().any(|&x| lowers.iter().all(|&y| leq[y * sz + x]));
            let has_join =
                uppers.iter().any(|&x| uppers.iter().all(|&y| leq[x * sz + y]));
            if has_meet && has_join {
                good += 1;
            }
        }
    }
    rec.push("lattice-meet-join", 0, (sz * sz) as u64, good, start);

    Ok(())
}

fn park_checks(ctx: &GroupContext, rec: &mut Recorder) -> Result<()> {
    let parks = enumerate_park(ctx)?;
    let start = Instant::now();
    rec.push("park-count", 1, park_count_formula(ctx, 1), parks.len() as u64, start);

    let start = Instant::now();
    let orbits = orbit_decomposition(ctx)?;
    rec.push("park-orbits", 1, catalan(ctx), orbits.len() as u64, start);

    let start = Instant::now();
    let mut images = HashSet::new();
    let mut round = 0;
    for pf in &parks {
        let v = to_vector(ctx, pf)?;
        if from_vector(ctx, &v)? == *pf {
            round += 1;
        }
        images.insert(v);
    }
    rec.push("map-injective", 1, parks.len() as u64, images.len() as u64, start);
    let start = Instant::now();
    rec.push("map-roundtrip", 1, parks.len() as u64, round, start);

    let start = Instant::now();
    let m = vector_m(ctx, 1);
    let mut hits = 0;
    let mut rejects = 0;
    for v in all_vectors(ctx.d, m, ctx.n) {
        match from_vector(ctx, &v) {
            Ok(pf) => {
                if to_vector(ctx, &pf)? == v {
                    hits += 1;
                }
            }
            Err(_) => rejects += 1,
        }
    }
    rec.push("vector-roundtrip", 1, parks.len() as u64, hits, start);
    if ctx.d == 1 {
        let start = Instant::now();
        let space = vector_count(ctx.d, m, ctx.n).unwrap() as u64;
        rec.push("vector-rejects", 1, space - parks.len() as u64, rejects, start);
    }

    let gens = standard_generators(ctx);
    let start = Instant::now();
    let mut good = 0;
    for pf in &parks {
        let v = to_vector(ctx, pf)?;
        for g in &gens {
            if to_vector(ctx, &act_w(ctx, g, pf)?)? == vector_act_w(g, &v)? {
                good += 1;
            }
        }
    }
    rec.push("equivariance-w", 1, (parks.len() * gens.len()) as u64, good, start);

    // Rotation equivariance is entrywise only for d ≥ 2, where openers are
    // read by the largest-gap rule and so rotate with the picture.  The
    // d = 1 read-out (least position) re-anchors blocks that wrap past
    // position zero, and a rotation-stable block forces opener(B) =
    // opener(B) + p, so no entrywise action on the vectors can intertwine.
    if ctx.d >= 2 {
        let start = Instant::now();
        let mut good = 0;
        for pf in &parks {
            let v = to_vector(ctx, pf)?;
            if to_vector(ctx, &act_c(ctx, 1, pf)?)? == vector_act_c(&v, 1) {
                good += 1;
            }
        }
        rec.push("equivariance-c", 1, parks.len() as u64, good, start);
    }

    Ok(())
}

fn fuss_checks(ctx: &GroupContext, k: usize, rec: &mut Recorder) -> Result<()> {
    let chains = enumerate_multichains(ctx, k)?;
    let start = Instant::now();
    rec.push("chain-count", k, fuss_catalan(ctx, k), chains.len() as u64, start);

    let start = Instant::now();
    let mut good = 0;
    for chain in &chains {
        if integrate(ctx, &boundary(ctx, chain)?)? == *chain {
            good += 1;
        }
    }
    rec.push("boundary-roundtrip", k, chains.len() as u64, good, start);

    let start = Instant::now();
    let kh = (k * ctx.h) as i64;
    let mut good = 0;
    for chain in &chains {
        if zkh_chain(ctx, chain, kh)? == *chain {
            good += 1;
        }
    }
    rec.push("cyclic-action-order", k, chains.len() as u64, good, start);

    let parks = enumerate_fuss_park(ctx, k)?;
    let start = Instant::now();
    rec.push("fuss-park-count", k, park_count_formula(ctx, k), parks.len() as u64, start);

    let start = Instant::now();
    let mut round = 0;
    for fpf in &parks {
        let v = fuss_to_vector(ctx, fpf)?;
        if fuss_from_vector(ctx, k, &v)? == *fpf {
            round += 1;
        }
    }
    rec.push("fuss-roundtrip", k, parks.len() as u64, round, start);

    let start = Instant::now();
    let m = vector_m(ctx, k);
    let mut hits = 0;
    let mut rejects = 0;
    for v in all_vectors(ctx.d, m, ctx.n) {
        match fuss_from_vector(ctx, k, &v) {
            Ok(fpf) => {
                if fuss_to_vector(ctx, &fpf)? == v {
                    hits += 1;
                }
            }
            Err(_) => rejects += 1,
        }
    }
    rec.push("fuss-vector-roundtrip", k, parks.len() as u64, hits, start);
    if ctx.d == 1 {
        let start = Instant::now();
        let space = vector_count(ctx.d, m, ctx.n).unwrap() as u64;
        rec.push("fuss-vector-rejects", k, space - parks.len() as u64, rejects, start);
    }

    let gens = standard_generators(ctx);
    let start = Instant::now();
    let mut good = 0;
    for fpf in &parks {
        let v = fuss_to_vector(ctx, fpf)?;
        for g in &gens {
            if fuss_to_vector(ctx, &fuss_act_w(ctx, g, fpf)?)? == vector_act_w(g, &v)? {
                good += 1;
            }
        }
    }
    rec.push("fuss-equivariance-w", k, (parks.len() * gens.len()) as u64, good, start);

    if ctx.d >= 2 {
        let start = Instant::now();
        let mut good = 0;
        for fpf in &parks {
            let v = fuss_to_vector(ctx, fpf)?;
            if fuss_to_vector(ctx, &zkh_park(ctx, fpf, 1)?)? == vector_act_c(&v, 1) {
                good += 1;
            }
        }
        rec.push("fuss-equivariance-c", k, parks.len() as u64, good, start);
    }

    Ok(())
}

/// Everything the exploratory Euler computation reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerExperiment {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    /// Number of parking functions before surgery.
    pub park: usize,
    /// Reduced Euler characteristic of the order complex after surgery.
    pub chi: i64,
    /// The conjectural magnitude (h−1)^r, for comparison only.
    pub target: i64,
}

/// Computes the reduced Euler characteristic of the parking-function poset
/// after surgery, and reports it beside the conjectural sphere count
/// (h−1)^r.  The two are compared by the caller's eyes, never asserted.
///
/// Poset conventions, which are implementation choices: parking functions
/// are ordered by coset containment, [u, π] ≤ [v, σ] iff u·W_π ⊆ v·W_σ; a
/// formal minimum is adjoined and the unique maximum [·, c] (the coset of
/// the whole group) removed; the value returned is the reduced Euler
/// characteristic of the order complex of what lies strictly between the
/// two bounds.
pub fn euler_experiment(ctx: &GroupContext) -> Result<EulerExperiment> {
    let parks = enumerate_park(ctx)?;
    if parks.len() > EULER_CAP {
        return Err(Error::CapExceeded { needed: parks.len() as u128, cap: EULER_CAP as u128 });
    }

    let mut cosets: Vec<Vec<ElemId>> = Vec::with_capacity(parks.len());
    for pf in &parks {
        let sub = parabolic_subgroup(ctx, pf.pi_element(ctx))?;
        let mut coset: Vec<ElemId> = sub
            .iter()
            .map(|&g| ctx.id_of(&ctx.compose(&pf.rep, ctx.element(g))))
            .collect::<Result<_>>()?;
        coset.sort_unstable();
        cosets.push(coset);
    }

    let subset = |a: &[ElemId], b: &[ElemId]| -> bool {
        if a.len() > b.len() {
            return false;
        }
        let mut it = b.iter();
        a.iter().all(|x| it.any(|y| y == x))
    };

    let order = *ctx.order.to_u64_digits().first().unwrap_or(&1) as usize;
    let maxima: Vec<usize> =
        (0..parks.len()).filter(|&i| cosets[i].len() == order).collect();
    if maxima.len() != 1 {
        return Err(Error::Invariant(
            "the parking poset does not have a unique maximum".into(),
        ));
    }

    let interior: Vec<usize> = (0..parks.len()).filter(|&i| i != maxima[0]).collect();
    let mut idx: Vec<usize> = (0..interior.len()).collect();
    idx.sort_by_key(|&i| cosets[interior[i]].len());

    let mut leq = vec![false; interior.len() * interior.len()];
    for i in 0..interior.len() {
        for j in 0..interior.len() {
            leq[i * interior.len() + j] = subset(&cosets[interior[i]], &cosets[interior[j]]);
        }
    }

    // Signed chain count: g(x) sums (−1)^{|chain|−1} over chains with top x,
    // so g(x) = 1 − Σ_{y<x} g(y) in any linear extension.
    let mut g = vec![0i64; interior.len()];
    for &x in &idx {
        let mut below = 0i64;
        for &y in &idx {
            if y != x && leq[y * interior.len() + x] {
                below += g[y];
            }
        }
        g[x] = 1 - below;
    }
    let chi = g.iter().sum::<i64>() - 1;

    Ok(EulerExperiment {
        family: ctx.family,
        d: ctx.d,
        n: ctx.n,
        park: parks.len(),
        chi,
        target: ((ctx.h - 1) as i64).pow(ctx.rank() as u32),
    })
}
