//! Finite posets, upward closed subsets, monotone and open maps.
//!
//! A poset stores the full reflexive-transitive order relation as one
//! bitmask row per element, so order queries are constant time. Upsets are
//! plain bitmasks interpreted against an ambient poset. The Heyting
//! structure on upsets (`imp`, `neg`) is computed pointwise from the
//! residual formula, no tables required.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Hard cap on poset size so subsets fit in a `u128` mask.
pub const MAX_POSET: usize = 128;

/// Default bound on `|P|` for full upset enumeration.
pub const DEFAULT_UPSET_ENUM_BOUND: usize = 12;

/// Iterate the set bits of a mask.
pub fn bits(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| mask >> i & 1 == 1)
}

/// An upward closed subset of some ambient poset, stored as a member mask.
///
/// Validity is relative to a poset; use [`FinPoset::is_upset`] to check.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Upset(pub u128);

impl Upset {
    pub const EMPTY: Upset = Upset(0);

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Upset) -> Upset {
        Upset(self.0 | other.0)
    }

    pub fn intersect(self, other: Upset) -> Upset {
        Upset(self.0 & other.0)
    }

    pub fn subset_of(self, other: Upset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }
}

/// A finite partial order with labelled elements.
///
/// `up[i]` is the bitmask of `{j : i <= j}`; it always contains `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinPoset {
    labels: Vec<String>,
    up: Vec<u128>,
}

impl FinPoset {
    /// Validate raw data: takes the reflexive-transitive closure of the
    /// given pairs and rejects duplicate labels and order cycles.
    pub fn new<S: Into<String>>(labels: Vec<S>, pairs: &[(usize, usize)]) -> Result<FinPoset> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        if n > MAX_POSET {
            return Err(Error::Size {
                what: "poset",
                limit: MAX_POSET,
                got: n,
            });
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::DuplicateLabel(a.clone()));
            }
        }
        let mut up = vec![0u128; n];
        for (i, row) in up.iter_mut().enumerate() {
            *row = 1 << i;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Internal(format!("pair ({a},{b}) out of range")));
            }
            up[a] |= 1 << b;
        }
        // Warshall closure on successor masks.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(FinPoset { labels, up })
    }

    /// Validate labelled pairs, resolving labels to indices first.
    pub fn from_labelled_pairs<S: Into<String>>(
        labels: Vec<S>,
        pairs: &[(String, String)],
    ) -> Result<FinPoset> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = |l: &String| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownElement(l.clone()))
        };
        let mut ipairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            ipairs.push((index(a)?, index(b)?));
        }
        FinPoset::new(labels, &ipairs)
    }

    pub fn empty() -> FinPoset {
        FinPoset {
            labels: vec![],
            up: vec![],
        }
    }

    /// The one-point poset `1`.
    pub fn point() -> FinPoset {
        FinPoset::new(vec!["*"], &[]).unwrap()
    }

    /// The Sierpinski poset `{0 < 1}`.
    pub fn sierpinski() -> FinPoset {
        FinPoset::new(vec!["0", "1"], &[(0, 1)]).unwrap()
    }

    pub fn chain(n: usize) -> FinPoset {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FinPoset::new(labels, &pairs).unwrap()
    }

    pub fn antichain(n: usize) -> FinPoset {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        FinPoset::new(labels, &[]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn full_mask(&self) -> u128 {
        if self.labels.is_empty() {
            0
        } else {
            (!0u128) >> (128 - self.labels.len())
        }
    }

    /// Bitmask of `{j : i <= j}`, i.e. the up-cone of `i`.
    pub fn up_mask(&self, i: usize) -> u128 {
        self.up[i]
    }

    pub fn up_cone(&self, i: usize) -> Upset {
        Upset(self.up[i])
    }

    pub fn down_mask(&self, i: usize) -> u128 {
        let mut m = 0;
        for j in 0..self.len() {
            if self.leq(j, i) {
                m |= 1 << j;
            }
        }
        m
    }

    pub fn up_closure(&self, mask: u128) -> u128 {
        bits(mask).fold(0, |acc, i| acc | self.up[i])
    }

    pub fn down_closure(&self, mask: u128) -> u128 {
        bits(mask).fold(0, |acc, i| acc | self.down_mask(i))
    }

    pub fn is_upset(&self, s: Upset) -> bool {
        s.iter().all(|i| self.up[i] & !s.0 == 0)
    }

    /// Resolve member labels into an upset, rejecting non-upward-closed sets.
    pub fn upset_from_labels<S: AsRef<str>>(&self, members: &[S]) -> Result<Upset> {
        let mut mask = 0u128;
        for m in members {
            mask |= 1 << self.index_of(m.as_ref())?;
        }
        let s = Upset(mask);
        if !self.is_upset(s) {
            return Err(Error::BadInput(format!(
                "set {{{}}} is not upward closed",
                members
                    .iter()
                    .map(|m| m.as_ref())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
        Ok(s)
    }

    pub fn upset_labels(&self, s: Upset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn max_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i] == 1 << i).collect()
    }

    pub fn min_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.leq(j, i) || j == i))
            .collect()
    }

    /// A poset is rooted when it has a unique minimum.
    pub fn root(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i] == self.full_mask())
    }

    pub fn is_rooted(&self) -> bool {
        self.root().is_some()
    }

    /// Heyting implication of upsets: the largest upset `U` with
    /// `U /\ s <= t`, pointwise `{p : up(p) /\ s <= t}`.
    pub fn imp(&self, s: Upset, t: Upset) -> Upset {
        let mut mask = 0u128;
        for p in 0..self.len() {
            if self.up[p] & s.0 & !t.0 == 0 {
                mask |= 1 << p;
            }
        }
        Upset(mask)
    }

    pub fn neg(&self, s: Upset) -> Upset {
        self.imp(s, Upset::EMPTY)
    }

    /// All upsets, in ascending mask order, without a size guard.
    fn upsets_unchecked(&self) -> Vec<Upset> {
        let n = self.len();
        let mut out = Vec::new();
        for raw in 0..(1u128 << n) {
            let s = Upset(raw);
            if self.is_upset(s) {
                out.push(s);
            }
        }
        out
    }

    /// All upsets, guarded by an enumeration bound on `|P|`.
    pub fn upsets_bounded(&self, bound: usize) -> Result<Vec<Upset>> {
        if self.len() > bound {
            return Err(Error::Size {
                what: "upset enumeration",
                limit: bound,
                got: self.len(),
            });
        }
        Ok(self.upsets_unchecked())
    }

    pub fn upsets(&self) -> Result<Vec<Upset>> {
        self.upsets_bounded(DEFAULT_UPSET_ENUM_BOUND)
    }

    /// Componentwise-ordered product with open projections.
    pub fn tensor(p: &FinPoset, q: &FinPoset) -> Result<(FinPoset, OpenMap, OpenMap)> {
        let n = p.len().checked_mul(q.len()).unwrap_or(usize::MAX);
        if n > MAX_POSET {
            return Err(Error::Size {
                what: "tensor",
                limit: MAX_POSET,
                got: n,
            });
        }
        let mut labels = Vec::with_capacity(n);
        for i in 0..p.len() {
            for j in 0..q.len() {
                labels.push(format!("({},{})", p.label(i), q.label(j)));
            }
        }
        let mut pairs = Vec::new();
        for i in 0..p.len() {
            for j in 0..q.len() {
                for i2 in 0..p.len() {
                    for j2 in 0..q.len() {
                        if p.leq(i, i2) && q.leq(j, j2) {
                            pairs.push((i * q.len() + j, i2 * q.len() + j2));
                        }
                    }
                }
            }
        }
        let prod = FinPoset::new(labels, &pairs)?;
        let fst: Vec<usize> = (0..n).map(|k| k / q.len()).collect();
        let snd: Vec<usize> = (0..n).map(|k| k % q.len()).collect();
        let pi1 = OpenMap::new(MonotoneMap::new(prod.clone(), p.clone(), fst)?)?;
        let pi2 = OpenMap::new(MonotoneMap::new(prod.clone(), q.clone(), snd)?)?;
        Ok((prod, pi1, pi2))
    }
}

/// A monotone (order preserving) map between finite posets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotoneMap {
    domain: FinPoset,
    codomain: FinPoset,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(domain: FinPoset, codomain: FinPoset, map: Vec<usize>) -> Result<MonotoneMap> {
        if map.len() != domain.len() {
            return Err(Error::BadInput(format!(
                "assignment covers {} of {} elements",
                map.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::Internal(format!("image index {bad} out of range")));
        }
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                if domain.leq(i, j) && !codomain.leq(map[i], map[j]) {
                    return Err(Error::NotMonotone {
                        p: domain.label(i).to_string(),
                        q: domain.label(j).to_string(),
                    });
                }
            }
        }
        Ok(MonotoneMap {
            domain,
            codomain,
            map,
        })
    }

    pub fn from_labels(
        domain: FinPoset,
        codomain: FinPoset,
        assignment: &BTreeMap<String, String>,
    ) -> Result<MonotoneMap> {
        let mut map = vec![0usize; domain.len()];
        for i in 0..domain.len() {
            let target = assignment
                .get(domain.label(i))
                .ok_or_else(|| Error::BadInput(format!("no image for `{}`", domain.label(i))))?;
            map[i] = codomain.index_of(target)?;
        }
        MonotoneMap::new(domain, codomain, map)
    }

    pub fn identity(p: &FinPoset) -> MonotoneMap {
        MonotoneMap {
            domain: p.clone(),
            codomain: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn domain(&self) -> &FinPoset {
        &self.domain
    }

    pub fn codomain(&self) -> &FinPoset {
        &self.codomain
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.map
    }

    /// First failure of the open-map lifting condition, if any: a pair
    /// `(p, q)` with `f(p) <= q` that no `p' >= p` maps onto `q`.
    pub fn open_witness(&self) -> Option<(usize, usize)> {
        for p in 0..self.domain.len() {
            for q in 0..self.codomain.len() {
                if self.codomain.leq(self.map[p], q)
                    && !bits(self.domain.up_mask(p)).any(|p2| self.map[p2] == q)
                {
                    return Some((p, q));
                }
            }
        }
        None
    }

    pub fn is_open(&self) -> bool {
        self.open_witness().is_none()
    }

    pub fn image_mask(&self) -> u128 {
        self.map.iter().fold(0, |acc, &v| acc | 1 << v)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_mask() == self.codomain.full_mask()
    }

    pub fn preimage(&self, s: Upset) -> Upset {
        let mut mask = 0u128;
        for (i, &v) in self.map.iter().enumerate() {
            if s.contains(v) {
                mask |= 1 << i;
            }
        }
        Upset(mask)
    }

    /// `other` after `self`; domains must line up.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if self.codomain != other.domain {
            return Err(Error::CodomainMismatch);
        }
        MonotoneMap::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.map.iter().map(|&v| other.map[v]).collect(),
        )
    }
}

/// A monotone map validated against the open-map (p-morphism) condition:
/// whenever `f(p) <= q` there is some `p' >= p` with `f(p') = q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpenMap(MonotoneMap);

impl OpenMap {
    pub fn new(m: MonotoneMap) -> Result<OpenMap> {
        match m.open_witness() {
            None => Ok(OpenMap(m)),
            Some((p, q)) => Err(Error::NotOpen {
                p: m.domain.label(p).to_string(),
                q: m.codomain.label(q).to_string(),
            }),
        }
    }

    pub fn identity(p: &FinPoset) -> OpenMap {
        OpenMap(MonotoneMap::identity(p))
    }

    pub fn as_monotone(&self) -> &MonotoneMap {
        &self.0
    }

    pub fn domain(&self) -> &FinPoset {
        self.0.domain()
    }

    pub fn codomain(&self) -> &FinPoset {
        self.0.codomain()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0.apply(i)
    }

    pub fn assignment(&self) -> &[usize] {
        self.0.assignment()
    }

    pub fn preimage(&self, s: Upset) -> Upset {
        self.0.preimage(s)
    }

    pub fn image_mask(&self) -> u128 {
        self.0.image_mask()
    }

    pub fn is_surjective(&self) -> bool {
        self.0.is_surjective()
    }

    pub fn then(&self, other: &OpenMap) -> Result<OpenMap> {
        OpenMap::new(self.0.then(&other.0)?)
    }
}

/// Pullback of `g` along an open `f`, computed as in `Pos`; the projection
/// to `g`'s domain is open, the other projection is just monotone.
pub fn monoidal_pullback(
    f: &OpenMap,
    g: &MonotoneMap,
) -> Result<(FinPoset, OpenMap, MonotoneMap)> {
    if f.codomain() != g.codomain() {
        return Err(Error::CodomainMismatch);
    }
    let r = g.domain();
    let p = f.domain();
    let mut labels = Vec::new();
    let mut pts = Vec::new();
    for ri in 0..r.len() {
        for pi in 0..p.len() {
            if g.apply(ri) == f.apply(pi) {
                labels.push(format!("({},{})", r.label(ri), p.label(pi)));
                pts.push((ri, pi));
            }
        }
    }
    let mut pairs = Vec::new();
    for (a, &(r1, p1)) in pts.iter().enumerate() {
        for (b, &(r2, p2)) in pts.iter().enumerate() {
            if r.leq(r1, r2) && p.leq(p1, p2) {
                pairs.push((a, b));
            }
        }
    }
    let carrier = FinPoset::new(labels, &pairs)?;
    let to_r = MonotoneMap::new(
        carrier.clone(),
        r.clone(),
        pts.iter().map(|&(ri, _)| ri).collect(),
    )?;
    let to_p = MonotoneMap::new(
        carrier.clone(),
        p.clone(),
        pts.iter().map(|&(_, pi)| pi).collect(),
    )?;
    let h = OpenMap::new(to_r).map_err(|_| {
        Error::Internal("pullback projection along an open map must be open".into())
    })?;
    Ok((carrier, h, to_p))
}

/// The Heyting algebra `U(P)` of all upsets of a finite poset,
/// enumerated explicitly.
#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    poset: FinPoset,
    upsets: Vec<Upset>,
}

impl UpsetAlgebra {
    pub fn new(poset: &FinPoset) -> Result<UpsetAlgebra> {
        UpsetAlgebra::bounded(poset, DEFAULT_UPSET_ENUM_BOUND)
    }

    pub fn bounded(poset: &FinPoset, bound: usize) -> Result<UpsetAlgebra> {
        let upsets = poset.upsets_bounded(bound)?;
        Ok(UpsetAlgebra {
            poset: poset.clone(),
            upsets,
        })
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn upsets(&self) -> &[Upset] {
        &self.upsets
    }

    pub fn len(&self) -> usize {
        self.upsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upsets.is_empty()
    }

    pub fn index_of(&self, s: Upset) -> Option<usize> {
        self.upsets.binary_search(&s).ok()
    }

    pub fn bot(&self) -> Upset {
        Upset::EMPTY
    }

    pub fn top(&self) -> Upset {
        Upset(self.poset.full_mask())
    }

    pub fn meet(&self, s: Upset, t: Upset) -> Upset {
        s.intersect(t)
    }

    pub fn join(&self, s: Upset, t: Upset) -> Upset {
        s.union(t)
    }

    pub fn imp(&self, s: Upset, t: Upset) -> Upset {
        self.poset.imp(s, t)
    }

    pub fn neg(&self, s: Upset) -> Upset {
        self.poset.neg(s)
    }

    /// Local: nontrivial, and a join reaching top forces one side to top.
    pub fn is_local(&self) -> bool {
        let top = self.top();
        if self.bot() == top {
            return false;
        }
        for &s in &self.upsets {
            for &t in &self.upsets {
                if s.union(t) == top && s != top && t != top {
                    return false;
                }
            }
        }
        true
    }
}

/// All monotone assignments `p -> q` as raw index vectors.
pub fn monotone_assignments(p: &FinPoset, q: &FinPoset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p.is_empty() {
        out.push(vec![]);
        return out;
    }
    if q.is_empty() {
        return out;
    }
    let mut cur = vec![0usize; p.len()];
    fn rec(p: &FinPoset, q: &FinPoset, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..q.len() {
            let ok = (0..i).all(|j| {
                (!p.leq(j, i) || q.leq(cur[j], v)) && (!p.leq(i, j) || q.leq(v, cur[j]))
            });
            if ok {
                cur[i] = v;
                rec(p, q, i + 1, cur, out);
            }
        }
    }
    rec(p, q, 0, &mut cur, &mut out);
    out
}

/// All open assignments `p -> q` as raw index vectors.
pub fn open_assignments(p: &FinPoset, q: &FinPoset) -> Vec<Vec<usize>> {
    monotone_assignments(p, q)
        .into_iter()
        .filter(|map| {
            let m = MonotoneMap::new(p.clone(), q.clone(), map.clone()).expect("checked monotone");
            m.is_open()
        })
        .collect()
}

/// Backtracking order-isomorphism search.
pub fn find_iso(p: &FinPoset, q: &FinPoset) -> Option<Vec<usize>> {
    if p.len() != q.len() {
        return None;
    }
    let n = p.len();
    // Quick invariant: multisets of (up-degree, down-degree) must agree.
    let deg = |poset: &FinPoset| {
        let mut d: Vec<(u32, u32)> = (0..poset.len())
            .map(|i| {
                (
                    poset.up_mask(i).count_ones(),
                    poset.down_mask(i).count_ones(),
                )
            })
            .collect();
        d.sort_unstable();
        d
    };
    if deg(p) != deg(q) {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: &FinPoset,
        q: &FinPoset,
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = p.len();
        if i == n {
            return true;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let ok = (0..i).all(|j| {
                p.leq(j, i) == q.leq(map[j], v) && p.leq(i, j) == q.leq(v, map[j])
            });
            if ok {
                map[i] = v;
                used[v] = true;
                if rec(p, q, i + 1, map, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    if rec(p, q, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn canonical_key(n: usize, strict_rows: &[u32]) -> u64 {
    // Minimum over permutations of the strict-relation bit string.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    fn encode(n: usize, rows: &[u32], perm: &[usize]) -> u64 {
        let mut key = 0u64;
        for i in 0..n {
            for j in 0..n {
                key <<= 1;
                if rows[perm[i]] >> perm[j] & 1 == 1 {
                    key |= 1;
                }
            }
        }
        key
    }
    fn heap(n: usize, k: usize, perm: &mut Vec<usize>, rows: &[u32], best: &mut u64) {
        if k == 1 {
            *best = (*best).min(encode(n, rows, perm));
            return;
        }
        for i in 0..k {
            heap(n, k - 1, perm, rows, best);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        return 0;
    }
    heap(n, n, &mut perm, strict_rows, &mut best);
    best
}

fn enumerate_posets(n: usize) -> Vec<FinPoset> {
    assert!(n <= 6, "poset enumeration is desk-scale only");
    if n == 0 {
        return vec![FinPoset::empty()];
    }
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let npairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << npairs.len()) {
        let mut rows = vec![0u32; n];
        for (b, &(i, j)) in npairs.iter().enumerate() {
            if code >> b & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        // Antisymmetry of the strict part.
        if (0..n).any(|i| (0..n).any(|j| i < j && rows[i] >> j & 1 == 1 && rows[j] >> i & 1 == 1))
        {
            continue;
        }
        // Transitivity.
        let transitive = (0..n).all(|i| bits(rows[i] as u128).all(|j| rows[j] & !rows[i] == 0));
        if !transitive {
            continue;
        }
        if seen.insert(canonical_key(n, &rows)) {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| bits(rows[i] as u128).map(move |j| (i, j)).collect::<Vec<_>>())
                .collect();
            out.push(FinPoset::new(labels.clone(), &pairs).expect("valid by construction"));
        }
    }
    out
}

type PosetCache = Mutex<BTreeMap<usize, Arc<Vec<FinPoset>>>>;

fn poset_cache() -> &'static PosetCache {
    static CACHE: OnceLock<PosetCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// All posets with exactly `n` elements, one per isomorphism class.
pub fn posets_of_size(n: usize) -> Arc<Vec<FinPoset>> {
    let mut cache = poset_cache().lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(enumerate_posets(n)))
        .clone()
}

/// All posets with at most `n` elements, one per isomorphism class.
pub fn posets_up_to(n: usize) -> Vec<FinPoset> {
    (0..=n).flat_map(|k| posets_of_size(k).iter().cloned().collect::<Vec<_>>()).collect()
}

/// Rooted posets with at most `n` elements (at least one), one per class.
pub fn rooted_posets_up_to(n: usize) -> Vec<FinPoset> {
    (1..=n)
        .flat_map(|k| {
            posets_of_size(k)
                .iter()
                .filter(|p| p.is_rooted())
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_two_chain() {
        let p = FinPoset::new(vec!["0", "1"], &[(0, 1)]).unwrap();
        assert!(p.leq(0, 1));
        assert!(!p.leq(1, 0));
    }

    #[test]
    fn validate_singleton() {
        let p = FinPoset::new(vec!["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.is_rooted());
    }

    #[test]
    fn validate_cycle_rejected() {
        let err = FinPoset::new(vec!["a", "b"], &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::Cycle(_, _)));
    }

    #[test]
    fn validate_duplicate_label_rejected() {
        let err = FinPoset::new(vec!["a", "a"], &[]).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn closure_is_taken() {
        let p = FinPoset::new(vec!["0", "1", "2"], &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
    }

    #[test]
    fn projection_is_open() {
        let s = FinPoset::sierpinski();
        let (_prod, pi1, pi2) = FinPoset::tensor(&s, &s).unwrap();
        assert!(pi1.as_monotone().is_open());
        assert!(pi2.as_monotone().is_open());
    }

    #[test]
    fn constant_map_not_open() {
        let s = FinPoset::sierpinski();
        let m = MonotoneMap::new(s.clone(), s.clone(), vec![0, 0]).unwrap();
        let (_p, q) = m.open_witness().unwrap();
        assert_eq!(q, 1, "the top point has no preimage above");
    }

    #[test]
    fn point_selection_open_iff_maximal() {
        let one = FinPoset::point();
        let s = FinPoset::sierpinski();
        let sel1 = MonotoneMap::new(one.clone(), s.clone(), vec![1]).unwrap();
        assert!(sel1.is_open());
        let sel0 = MonotoneMap::new(one, s, vec![0]).unwrap();
        assert!(!sel0.is_open());
    }

    #[test]
    fn upset_algebra_point() {
        let alg = UpsetAlgebra::new(&FinPoset::point()).unwrap();
        assert_eq!(alg.len(), 2);
    }

    #[test]
    fn upset_algebra_sierpinski() {
        let s = FinPoset::sierpinski();
        let alg = UpsetAlgebra::new(&s).unwrap();
        assert_eq!(alg.len(), 3);
        let top = alg.top();
        let one = Upset(0b10);
        assert_eq!(alg.imp(top, one), one);
        assert_eq!(alg.neg(one), Upset::EMPTY);
    }

    #[test]
    fn sierpinski_upsets_are_local() {
        // Exhaustive over the 3 upsets: {1} u S = top only if S = top.
        let alg = UpsetAlgebra::new(&FinPoset::sierpinski()).unwrap();
        assert!(alg.is_local());
    }

    #[test]
    fn antichain_not_local() {
        let alg = UpsetAlgebra::new(&FinPoset::antichain(2)).unwrap();
        assert!(!alg.is_local());
    }

    #[test]
    fn tensor_unit() {
        let p = FinPoset::chain(3);
        let (prod, _, _) = FinPoset::tensor(&FinPoset::point(), &p).unwrap();
        assert!(find_iso(&prod, &p).is_some());
    }

    #[test]
    fn tensor_diamond() {
        let s = FinPoset::sierpinski();
        let (prod, _, _) = FinPoset::tensor(&s, &s).unwrap();
        assert_eq!(prod.len(), 4);
        assert_eq!(prod.max_elements().len(), 1);
        assert_eq!(prod.min_elements().len(), 1);
        let mid: Vec<usize> = (0..4)
            .filter(|&i| !prod.max_elements().contains(&i) && !prod.min_elements().contains(&i))
            .collect();
        assert_eq!(mid.len(), 2);
        assert!(!prod.leq(mid[0], mid[1]) && !prod.leq(mid[1], mid[0]));
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let s = FinPoset::sierpinski();
        let one = FinPoset::point();
        let f = OpenMap::new(MonotoneMap::new(s.clone(), one.clone(), vec![0, 0]).unwrap()).unwrap();
        let g = MonotoneMap::new(s.clone(), one, vec![0, 0]).unwrap();
        let (carrier, _, _) = monoidal_pullback(&f, &g).unwrap();
        let (prod, _, _) = FinPoset::tensor(&s, &s).unwrap();
        assert!(find_iso(&carrier, &prod).is_some());
    }

    #[test]
    fn pullback_of_identity() {
        let s = FinPoset::sierpinski();
        let c3 = FinPoset::chain(3);
        let f = OpenMap::identity(&s);
        let g = MonotoneMap::new(c3.clone(), s, vec![0, 1, 1]).unwrap();
        let (carrier, h, _) = monoidal_pullback(&f, &g).unwrap();
        assert!(find_iso(&carrier, &c3).is_some());
        assert!(h.as_monotone().is_surjective());
    }

    #[test]
    fn pullback_point_into_projection() {
        // f: Sigma x Sigma -> Sigma first projection, g: 1 -> Sigma at 1.
        let s = FinPoset::sierpinski();
        let one = FinPoset::point();
        let (prod, pi1, _) = FinPoset::tensor(&s, &s).unwrap();
        let g = MonotoneMap::new(one.clone(), s.clone(), vec![1]).unwrap();
        let (carrier, h, _) = monoidal_pullback(&pi1, &g).unwrap();
        assert!(find_iso(&carrier, &s).is_some(), "{{1}} x Sigma is a chain");
        assert!(h.as_monotone().is_open());
        let _ = prod;
    }

    #[test]
    fn up_cone_and_max_and_rooted() {
        let s = FinPoset::sierpinski();
        assert_eq!(s.up_cone(0), Upset(0b11));
        let (prod, _, _) = FinPoset::tensor(&s, &s).unwrap();
        let maxes = prod.max_elements();
        assert_eq!(maxes.len(), 1);
        assert_eq!(prod.label(maxes[0]), "(1,1)");
        assert!(!FinPoset::antichain(2).is_rooted());
        assert!(FinPoset::chain(3).is_rooted());
    }

    #[test]
    fn poset_counts_up_to_iso() {
        assert_eq!(posets_of_size(0).len(), 1);
        assert_eq!(posets_of_size(1).len(), 1);
        assert_eq!(posets_of_size(2).len(), 2);
        assert_eq!(posets_of_size(3).len(), 5);
        assert_eq!(posets_of_size(4).len(), 16);
        assert_eq!(posets_of_size(5).len(), 63);
    }

    #[test]
    fn rooted_poset_counts() {
        assert_eq!(rooted_posets_up_to(3).len(), 4);
        assert_eq!(rooted_posets_up_to(4).len(), 9);
    }

    #[test]
    fn open_maps_compose() {
        let s = FinPoset::sierpinski();
        let frames = [FinPoset::point(), s.clone(), FinPoset::chain(3)];
        for a in &frames {
            for b in &frames {
                for c in &frames {
                    for f in open_assignments(a, b) {
                        for g in open_assignments(b, c) {
                            let fm = OpenMap::new(
                                MonotoneMap::new(a.clone(), b.clone(), f.clone()).unwrap(),
                            )
                            .unwrap();
                            let gm = OpenMap::new(
                                MonotoneMap::new(b.clone(), c.clone(), g.clone()).unwrap(),
                            )
                            .unwrap();
                            assert!(fm.then(&gm).is_ok());
                        }
                    }
                }
            }
        }
    }
}
