//! The colored permutation groups G(d,1,n) and G(d,d,n).
//!
//! An element acts on the colored point set [n] × Z_d by sending the point
//! i^j to sigma(i)^(j + shift(i)). Composition applies the right factor
//! first, so `compose(u, v)` is the map x ↦ u(v(x)). G(d,d,n) is the
//! subgroup whose shift vector sums to 0 mod d.
//!
//! Numbers and colors are 0-based everywhere inside the crate; the text
//! forms at the API boundary are 1-based to match the usual notation.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num::BigUint;

use crate::{Error, Result};

/// Which infinite family a context lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// G(d,1,n): full wreath product Z_d ≀ S_n.
    D1N,
    /// G(d,d,n): the index-d subgroup with zero total color shift.
    DDN,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::D1N => write!(f, "d1n"),
            Family::DDN => write!(f, "ddn"),
        }
    }
}

/// A colored point: (number, color), both 0-based.
pub type Point = (usize, usize);

/// A monomial group element: a permutation of the numbers plus a color
/// shift applied at each source number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredElement {
    pub(crate) sigma: Vec<usize>,
    pub(crate) shift: Vec<usize>,
}

impl ColoredElement {
    pub fn identity(n: usize) -> Self {
        ColoredElement {
            sigma: (0..n).collect(),
            shift: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Where the element sends number `a` (0-based).
    pub fn sigma(&self, a: usize) -> usize {
        self.sigma[a]
    }

    /// The color shift applied at source number `a`.
    pub fn shift(&self, a: usize) -> usize {
        self.shift[a]
    }

    /// Image of a colored point, with colors taken mod `d`.
    pub fn apply(&self, p: Point, d: usize) -> Point {
        let (a, b) = p;
        (self.sigma[a], (b + self.shift[a]) % d)
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| s == i) && self.shift.iter().all(|&s| s == 0)
    }

    /// Total color shift mod d; zero exactly for members of G(d,d,n).
    pub fn color_sum(&self, d: usize) -> usize {
        self.shift.iter().sum::<usize>() % d
    }

    /// Cycles of the underlying number permutation, each starting at its
    /// least number, listed in increasing order of that least number.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                cycle.push(a);
                a = self.sigma[a];
            }
            cycles.push(cycle);
        }
        cycles
    }
}

// Elements are ordered by the interleaved tuple (σ(1), s(1), σ(2), s(2), …),
// which agrees with lexicographic order on the text form whenever every
// token is a single digit.
impl Ord for ColoredElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        for i in 0..self.sigma.len() {
            let lhs = (self.sigma[i], self.shift[i]);
            let rhs = (other.sigma[i], other.shift[i]);
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for ColoredElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ColoredElement {
    /// Text form: whitespace-separated `σ(i):s(i)` with 1-based numbers and
    /// shifts in 0..d−1, e.g. `2:0 1:1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.sigma.len() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", self.sigma[i] + 1, self.shift[i])?;
        }
        Ok(())
    }
}

/// Compact identifier of an element inside a context's sorted element table.
pub type ElemId = u32;

/// A group G(d,1,n) or G(d,d,n) with its derived structural constants and
/// lazily built tables (elements, reflections, reflection lengths, the NC
/// interval, parabolic subgroups). Immutable after construction; the caches
/// fill on first use and are safe to share across threads.
pub struct GroupContext {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    /// Coxeter number: the largest invariant degree.
    pub h: usize,
    /// Invariant degrees, weakly increasing.
    pub degrees: Vec<usize>,
    /// |W|, the product of the degrees.
    pub order: BigUint,
    /// Whether the reflection representation is irreducible (recorded, not
    /// enforced): d ≥ 2 for G(d,1,n); n ≥ 3, or n = 2 with odd d, for
    /// G(d,d,n).
    pub irreducible: bool,
    cap: u128,
    elements: OnceLock<Vec<ColoredElement>>,
    ids: OnceLock<HashMap<ColoredElement, ElemId>>,
    reflections: OnceLock<Vec<ColoredElement>>,
    cox: OnceLock<ColoredElement>,
    pub(crate) lengths: OnceLock<Vec<u32>>,
    pub(crate) nc_sorted: OnceLock<Vec<ElemId>>,
    pub(crate) nc_member: OnceLock<Vec<bool>>,
    pub(crate) parabolics: OnceLock<HashMap<ElemId, std::sync::Arc<Vec<ElemId>>>>,
}

/// Default cap on exhaustive enumerations; override with the
/// `REFLPARK_CAP` environment variable or [`GroupContext::with_cap`].
pub const DEFAULT_CAP: u128 = 1_000_000;

fn env_cap() -> u128 {
    std::env::var("REFLPARK_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

impl GroupContext {
    /// Build a context, deriving h, the degree list, and |W|, and checking
    /// the degree-product identity. Rejects d = 0, n = 0, and degenerate
    /// G(d,d,n) parameters (n < 2 or d < 2).
    pub fn new(family: Family, d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidParameters(format!(
                "d and n must be positive (got d={d}, n={n})"
            )));
        }
        if d > 255 || n > 255 {
            return Err(Error::InvalidParameters(format!(
                "d and n must be at most 255 (got d={d}, n={n})"
            )));
        }
        let (h, degrees) = match family {
            Family::D1N => (d * n, (1..=n).map(|i| i * d).collect::<Vec<_>>()),
            Family::DDN => {
                if n < 2 {
                    return Err(Error::InvalidParameters(format!(
                        "G(d,d,n) needs n >= 2 (got n={n})"
                    )));
                }
                if d < 2 {
                    return Err(Error::InvalidParameters(
                        "G(1,1,n) is degenerate in the G(d,d,n) family; use G(d,1,n) with d=1"
                            .into(),
                    ));
                }
                let mut degs: Vec<usize> = (1..n).map(|i| i * d).collect();
                degs.push(n);
                degs.sort_unstable();
                ((n - 1) * d, degs)
            }
        };
        let order: BigUint = degrees.iter().fold(BigUint::from(1u32), |acc, &deg| acc * deg);
        // Independent count: d^n n! (D1N) or d^{n-1} n! (DDN).
        let color_part = match family {
            Family::D1N => BigUint::from(d).pow(n as u32),
            Family::DDN => BigUint::from(d).pow(n as u32 - 1),
        };
        let factorial = (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i);
        debug_assert_eq!(order, color_part * factorial);
        let irreducible = match family {
            Family::D1N => d >= 2,
            Family::DDN => n >= 3 || (n == 2 && d % 2 == 1),
        };
        Ok(GroupContext {
            family,
            d,
            n,
            h,
            degrees,
            order,
            irreducible,
            cap: env_cap(),
            elements: OnceLock::new(),
            ids: OnceLock::new(),
            reflections: OnceLock::new(),
            cox: OnceLock::new(),
            lengths: OnceLock::new(),
            nc_sorted: OnceLock::new(),
            nc_member: OnceLock::new(),
            parabolics: OnceLock::new(),
        })
    }

    /// Same context with a different enumeration cap.
    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    /// The rank of the reflection representation: the number of degrees
    /// that are at least 2. This equals n except for G(1,1,n) = S_n, whose
    /// n-dimensional monomial representation contains a fixed line; every
    /// counting formula exponent and the reflection length of c use this
    /// value.
    pub fn rank(&self) -> usize {
        self.degrees.iter().filter(|&&deg| deg >= 2).count()
    }

    pub fn identity(&self) -> ColoredElement {
        ColoredElement::identity(self.n)
    }

    /// u∘v: apply v first, then u.
    pub fn compose(&self, u: &ColoredElement, v: &ColoredElement) -> ColoredElement {
        let n = self.n;
        let mut sigma = vec![0; n];
        let mut shift = vec![0; n];
        for i in 0..n {
            let mid = v.sigma[i];
            sigma[i] = u.sigma[mid];
            shift[i] = (v.shift[i] + u.shift[mid]) % self.d;
        }
        ColoredElement { sigma, shift }
    }

    pub fn inverse(&self, w: &ColoredElement) -> ColoredElement {
        let n = self.n;
        let mut sigma = vec![0; n];
        let mut shift = vec![0; n];
        for i in 0..n {
            sigma[w.sigma[i]] = i;
            shift[w.sigma[i]] = (self.d - w.shift[i] % self.d) % self.d;
        }
        ColoredElement { sigma, shift }
    }

    /// w^k by repeated squaring on the group law.
    pub fn power(&self, w: &ColoredElement, k: usize) -> ColoredElement {
        let mut result = self.identity();
        let mut base = w.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.compose(&result, &base);
            }
            base = self.compose(&base, &base);
            k >>= 1;
        }
        result
    }

    /// Multiplicative order of w.
    pub fn element_order(&self, w: &ColoredElement) -> usize {
        let mut cur = w.clone();
        let mut ord = 1;
        while !cur.is_identity() {
            cur = self.compose(&cur, w);
            ord += 1;
        }
        ord
    }

    /// Whether an element belongs to this context's group (always true for
    /// G(d,1,n); color sum 0 for G(d,d,n)).
    pub fn contains(&self, w: &ColoredElement) -> bool {
        w.n() == self.n
            && w.shift.iter().all(|&s| s < self.d)
            && match self.family {
                Family::D1N => true,
                Family::DDN => w.color_sum(self.d) == 0,
            }
    }

    /// Dimension of the fixed space: the number of sigma-cycles whose total
    /// color shift is 0 mod d.
    pub fn dim_fix(&self, w: &ColoredElement) -> usize {
        w.cycles()
            .iter()
            .filter(|cycle| cycle.iter().map(|&a| w.shift[a]).sum::<usize>() % self.d == 0)
            .count()
    }

    /// The chosen Coxeter element.
    ///
    /// G(d,1,n): the n-cycle 1 → 2 → … → n with the wrap n → 1 decreasing
    /// color by one. G(d,d,n): the (n−1)-cycle on 1..n−1 with the same
    /// decreasing wrap, times the color rotation n^j → n^{j+1}. The
    /// decreasing wrap makes conjugation by c act on circular models as a
    /// one-step clockwise rotation, which the bijections rely on.
    pub fn coxeter_element(&self) -> &ColoredElement {
        self.cox.get_or_init(|| {
            let n = self.n;
            let d = self.d;
            let mut sigma: Vec<usize> = (0..n).collect();
            let mut shift = vec![0; n];
            match self.family {
                Family::D1N => {
                    for (i, s) in sigma.iter_mut().enumerate() {
                        *s = (i + 1) % n;
                    }
                    shift[n - 1] = d - 1;
                }
                Family::DDN => {
                    for (i, s) in sigma.iter_mut().enumerate().take(n - 1) {
                        *s = (i + 1) % (n - 1);
                    }
                    sigma[n - 1] = n - 1;
                    shift[n - 2] = d - 1;
                    shift[n - 1] = 1 % d;
                }
            }
            ColoredElement { sigma, shift }
        })
    }

    /// c^p for any integer p (negative exponents allowed).
    pub fn coxeter_power(&self, p: i64) -> ColoredElement {
        let h = self.h as i64;
        let p = p.rem_euclid(h) as usize;
        self.power(self.coxeter_element(), p)
    }

    /// All reflections: for G(d,1,n) the n(d−1) diagonal ones (a single
    /// number's color scaled) plus the d·n(n−1)/2 mixed ones (two numbers
    /// swapped with opposite shifts); G(d,d,n) keeps only the mixed family.
    pub fn reflections(&self) -> &[ColoredElement] {
        self.reflections.get_or_init(|| {
            let n = self.n;
            let d = self.d;
            let mut out = Vec::new();
            if self.family == Family::D1N {
                for i in 0..n {
                    for r in 1..d {
                        let mut t = self.identity();
                        t.shift[i] = r;
                        out.push(t);
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for r in 0..d {
                        let mut t = self.identity();
                        t.sigma[i] = j;
                        t.sigma[j] = i;
                        t.shift[i] = r;
                        t.shift[j] = (d - r) % d;
                        out.push(t);
                    }
                }
            }
            out.sort_unstable();
            out
        })
    }

    /// Every group element exactly once, sorted; errors if |W| exceeds the
    /// cap.
    pub fn elements(&self) -> Result<&[ColoredElement]> {
        if let Some(elts) = self.elements.get() {
            return Ok(elts.as_slice());
        }
        let order_u128: u128 = u128::try_from(&self.order).map_err(|_| Error::CapExceeded {
            needed: u128::MAX,
            cap: self.cap,
        })?;
        if order_u128 > self.cap {
            return Err(Error::CapExceeded {
                needed: order_u128,
                cap: self.cap,
            });
        }
        Ok(self
            .elements
            .get_or_init(|| {
                let mut out = Vec::with_capacity(order_u128 as usize);
                let mut sigma: Vec<usize> = (0..self.n).collect();
                loop {
                    self.push_shift_vectors(&sigma, &mut out);
                    if !next_permutation(&mut sigma) {
                        break;
                    }
                }
                out.sort_unstable();
                debug_assert_eq!(out.len() as u128, order_u128);
                out
            })
            .as_slice())
    }

    fn push_shift_vectors(&self, sigma: &[usize], out: &mut Vec<ColoredElement>) {
        let n = self.n;
        let d = self.d;
        // Free colors at the first n−1 (DDN) or n (D1N) indices; a DDN
        // element's last shift is forced by the zero-sum condition.
        let free = match self.family {
            Family::D1N => n,
            Family::DDN => n - 1,
        };
        let mut shift = vec![0usize; n];
        loop {
            if self.family == Family::DDN {
                let partial: usize = shift[..free].iter().sum();
                shift[n - 1] = (d - partial % d) % d;
            }
            out.push(ColoredElement {
                sigma: sigma.to_vec(),
                shift: shift.clone(),
            });
            // Odometer over the free positions.
            let mut pos = 0;
            loop {
                if pos == free {
                    return;
                }
                shift[pos] += 1;
                if shift[pos] < d {
                    break;
                }
                shift[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Index of an element in the sorted table.
    pub fn id_of(&self, w: &ColoredElement) -> Result<ElemId> {
        let ids = match self.ids.get() {
            Some(ids) => ids,
            None => {
                let elts = self.elements()?;
                self.ids.get_or_init(|| {
                    elts.iter()
                        .enumerate()
                        .map(|(i, e)| (e.clone(), i as ElemId))
                        .collect()
                })
            }
        };
        ids.get(w)
            .copied()
            .ok_or_else(|| Error::InvalidParameters(format!("element {w} not in group")))
    }

    pub fn element(&self, id: ElemId) -> &ColoredElement {
        &self.elements.get().expect("element table not built")[id as usize]
    }

    /// Strict parser for the element text form `σ(1):s(1) σ(2):s(2) …`.
    pub fn parse_element(&self, text: &str) -> Result<ColoredElement> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != self.n {
            return Err(Error::Parse(format!(
                "expected {} tokens, got {}",
                self.n,
                tokens.len()
            )));
        }
        let mut sigma = vec![usize::MAX; self.n];
        let mut shift = vec![0; self.n];
        let mut hit = vec![false; self.n];
        for (i, tok) in tokens.iter().enumerate() {
            let (num, sh) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("token `{tok}` is not of the form i:s")))?;
            let num: usize = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in `{tok}`")))?;
            let sh: usize = sh
                .parse()
                .map_err(|_| Error::Parse(format!("bad shift in `{tok}`")))?;
            if num < 1 || num > self.n {
                return Err(Error::Parse(format!("number {num} out of range 1..={}", self.n)));
            }
            if sh >= self.d {
                return Err(Error::Parse(format!("shift {sh} out of range 0..{}", self.d)));
            }
            if hit[num - 1] {
                return Err(Error::Parse(format!("number {num} repeated")));
            }
            hit[num - 1] = true;
            sigma[i] = num - 1;
            shift[i] = sh;
        }
        let w = ColoredElement { sigma, shift };
        if !self.contains(&w) {
            return Err(Error::Parse(format!(
                "element {w} has nonzero color sum, not in G({d},{d},{n})",
                d = self.d,
                n = self.n
            )));
        }
        Ok(w)
    }
}

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.d, if self.family == Family::D1N { 1 } else { self.d }, self.n)
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.d, if self.family == Family::D1N { 1 } else { self.d }, self.n)
    }
}

/// Advance to the next permutation in lexicographic order; false at the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
