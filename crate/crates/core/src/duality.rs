//! Finite Birkhoff duality: distributive lattices against posets, Heyting
//! algebras against posets with open maps.
//!
//! `spec` realizes prime filters as up-cones of join-irreducibles, which
//! for a finite distributive lattice is the same thing as lattice
//! morphisms into `2`; the brute-force filter enumeration stays around as
//! an independent oracle for tests.

use crate::error::{Error, Result};
use crate::poset::{bits, find_iso, FinPoset, OpenMap, Upset, UpsetAlgebra};

/// An explicit finite lattice: order plus cached operation tables.
#[derive(Clone, Debug)]
pub struct FinLattice {
    order: FinPoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
    distributive: bool,
    imp: Option<Vec<usize>>,
}

impl FinLattice {
    /// Build a lattice from a validated order, checking that all binary
    /// meets and joins exist; computes the implication table when the
    /// lattice is distributive.
    pub fn from_order(order: FinPoset) -> Result<FinLattice> {
        let n = order.len();
        if n == 0 {
            return Err(Error::BadInput("a lattice needs at least one element".into()));
        }
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = Self::bound(&order, a, b, true).ok_or(Error::NotALattice {
                    a: order.label(a).to_string(),
                    b: order.label(b).to_string(),
                    missing: "join",
                })?;
                meet[a * n + b] = Self::bound(&order, a, b, false).ok_or(Error::NotALattice {
                    a: order.label(a).to_string(),
                    b: order.label(b).to_string(),
                    missing: "meet",
                })?;
            }
        }
        let bot = (0..n)
            .find(|&i| (0..n).all(|j| order.leq(i, j)))
            .ok_or(Error::NotALattice {
                a: "?".into(),
                b: "?".into(),
                missing: "bottom",
            })?;
        let top = (0..n)
            .find(|&i| (0..n).all(|j| order.leq(j, i)))
            .ok_or(Error::NotALattice {
                a: "?".into(),
                b: "?".into(),
                missing: "top",
            })?;
        let distributive = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    meet[a * n + join[b * n + c]]
                        == join[meet[a * n + b] * n + meet[a * n + c]]
                })
            })
        });
        let imp = if distributive {
            let mut t = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    let mut r = bot;
                    for c in 0..n {
                        if order.leq(meet[c * n + a], b) {
                            r = join[r * n + c];
                        }
                    }
                    // Residuation sanity: r itself must satisfy r /\ a <= b.
                    if !order.leq(meet[r * n + a], b) {
                        return Err(Error::Internal(
                            "residual failed in a distributive lattice".into(),
                        ));
                    }
                    t[a * n + b] = r;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(FinLattice {
            order,
            meet,
            join,
            bot,
            top,
            distributive,
            imp,
        })
    }

    fn bound(order: &FinPoset, a: usize, b: usize, upper: bool) -> Option<usize> {
        let candidates: Vec<usize> = (0..order.len())
            .filter(|&c| {
                if upper {
                    order.leq(a, c) && order.leq(b, c)
                } else {
                    order.leq(c, a) && order.leq(c, b)
                }
            })
            .collect();
        candidates
            .iter()
            .copied()
            .find(|&c| {
                candidates.iter().all(|&d| {
                    if upper {
                        order.leq(c, d)
                    } else {
                        order.leq(d, c)
                    }
                })
            })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> &FinPoset {
        &self.order
    }

    pub fn label(&self, i: usize) -> &str {
        self.order.label(i)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn is_heyting(&self) -> bool {
        self.imp.is_some()
    }

    pub fn imp(&self, a: usize, b: usize) -> Result<usize> {
        self.imp
            .as_ref()
            .map(|t| t[a * self.len() + b])
            .ok_or(Error::NotHeyting)
    }

    /// Non-trivial, and every join reaching top has a side equal to top.
    pub fn is_local(&self) -> bool {
        if self.bot == self.top {
            return false;
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.join(a, b) == self.top && a != self.top && b != self.top {
                    return false;
                }
            }
        }
        true
    }

    /// Elements that are not joins of strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&d| {
                if d == self.bot {
                    return false;
                }
                let below = (0..self.len())
                    .filter(|&a| self.leq(a, d) && a != d)
                    .fold(self.bot, |acc, a| self.join(acc, a));
                below != d
            })
            .collect()
    }

    /// Join-irreducibles below an element, as a mask over ji indices.
    fn ji_below(&self, ji: &[usize], x: usize) -> u128 {
        let mut m = 0u128;
        for (k, &j) in ji.iter().enumerate() {
            if self.leq(j, x) {
                m |= 1 << k;
            }
        }
        m
    }
}

/// Turn an upset algebra into an explicit Heyting lattice with set labels.
pub fn to_lattice(alg: &UpsetAlgebra) -> Result<FinLattice> {
    let labels: Vec<String> = alg
        .upsets()
        .iter()
        .map(|&s| {
            let mut names = alg.poset().upset_labels(s);
            names.sort();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let mut pairs = Vec::new();
    for (a, &s) in alg.upsets().iter().enumerate() {
        for (b, &t) in alg.upsets().iter().enumerate() {
            if s.subset_of(t) {
                pairs.push((a, b));
            }
        }
    }
    let order = FinPoset::new(labels, &pairs)?;
    let lat = FinLattice::from_order(order)?;
    if !lat.is_heyting() {
        return Err(Error::Internal("upset algebra must be Heyting".into()));
    }
    Ok(lat)
}

/// The dual poset of a finite distributive lattice: its lattice morphisms
/// into `2`, realized as up-cones of join-irreducibles, ordered pointwise.
pub fn spec(d: &FinLattice) -> Result<FinPoset> {
    if !d.is_distributive() {
        let n = d.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if d.meet(a, d.join(b, c)) != d.join(d.meet(a, b), d.meet(a, c)) {
                        return Err(Error::NotDistributive {
                            a: d.label(a).to_string(),
                            b: d.label(b).to_string(),
                            c: d.label(c).to_string(),
                        });
                    }
                }
            }
        }
    }
    let ji = d.join_irreducibles();
    let labels: Vec<String> = ji.iter().map(|&j| d.label(j).to_string()).collect();
    // chi(up j) <= chi(up j') pointwise iff j' <= j.
    let mut pairs = Vec::new();
    for (a, &ja) in ji.iter().enumerate() {
        for (b, &jb) in ji.iter().enumerate() {
            if d.leq(jb, ja) {
                pairs.push((a, b));
            }
        }
    }
    FinPoset::new(labels, &pairs)
}

/// Brute-force enumeration of prime filters, the test oracle for `spec`.
pub fn prime_filters_brute(d: &FinLattice) -> Result<Vec<u128>> {
    let n = d.len();
    if n > 16 {
        return Err(Error::Size {
            what: "prime filter enumeration",
            limit: 16,
            got: n,
        });
    }
    let mut out = Vec::new();
    for raw in 0u128..(1 << n) {
        let has = |x: usize| raw >> x & 1 == 1;
        if !has(d.top()) || has(d.bot()) {
            continue;
        }
        let filterish = (0..n)
            .all(|a| (0..n).all(|b| (has(a) && has(b)) == has(d.meet(a, b))));
        let prime = (0..n)
            .all(|a| (0..n).all(|b| (has(a) || has(b)) == has(d.join(a, b))));
        if filterish && prime {
            out.push(raw);
        }
    }
    Ok(out)
}

/// A validated bounded-lattice morphism, optionally Heyting.
#[derive(Clone, Debug)]
pub struct LatticeHom {
    domain: FinLattice,
    codomain: FinLattice,
    map: Vec<usize>,
    heyting: bool,
}

impl LatticeHom {
    pub fn new(
        domain: FinLattice,
        codomain: FinLattice,
        map: Vec<usize>,
        heyting: bool,
    ) -> Result<LatticeHom> {
        if map.len() != domain.len() {
            return Err(Error::BadInput("assignment size mismatch".into()));
        }
        let fail = |what: &str, a: usize, b: usize| {
            Error::BadInput(format!(
                "not a {} morphism at ({}, {})",
                what,
                domain.label(a),
                domain.label(b)
            ))
        };
        if map[domain.bot()] != codomain.bot() || map[domain.top()] != codomain.top() {
            return Err(Error::BadInput("bounds not preserved".into()));
        }
        for a in 0..domain.len() {
            for b in 0..domain.len() {
                if map[domain.meet(a, b)] != codomain.meet(map[a], map[b]) {
                    return Err(fail("meet", a, b));
                }
                if map[domain.join(a, b)] != codomain.join(map[a], map[b]) {
                    return Err(fail("join", a, b));
                }
                if heyting && map[domain.imp(a, b)?] != codomain.imp(map[a], map[b])? {
                    return Err(fail("Heyting", a, b));
                }
            }
        }
        Ok(LatticeHom {
            domain,
            codomain,
            map,
            heyting,
        })
    }

    pub fn domain(&self) -> &FinLattice {
        &self.domain
    }

    pub fn codomain(&self) -> &FinLattice {
        &self.codomain
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.map
    }

    pub fn is_heyting(&self) -> bool {
        self.heyting
    }

    pub fn then(&self, other: &LatticeHom) -> Result<LatticeHom> {
        LatticeHom::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.map.iter().map(|&v| other.map[v]).collect(),
            self.heyting && other.heyting,
        )
    }
}

/// Enumerate all bounded-lattice morphisms `a -> b` (Heyting morphisms
/// when the flag is set). The domain must be distributive so that
/// assignments on join-irreducibles determine the morphism.
pub fn enumerate_homs(a: &FinLattice, b: &FinLattice, heyting: bool) -> Result<Vec<LatticeHom>> {
    if !a.is_distributive() {
        return Err(Error::NotDistributive {
            a: "?".into(),
            b: "?".into(),
            c: "?".into(),
        });
    }
    if heyting && (!a.is_heyting() || !b.is_heyting()) {
        return Err(Error::NotHeyting);
    }
    let ji = a.join_irreducibles();
    let mut out = Vec::new();
    let mut assign = vec![0usize; ji.len()];

    fn extend(a: &FinLattice, b: &FinLattice, ji: &[usize], assign: &[usize]) -> Vec<usize> {
        (0..a.len())
            .map(|x| {
                bits(a.ji_below(ji, x))
                    .fold(b.bot(), |acc, k| b.join(acc, assign[k]))
            })
            .collect()
    }

    fn rec(
        a: &FinLattice,
        b: &FinLattice,
        ji: &[usize],
        heyting: bool,
        i: usize,
        assign: &mut Vec<usize>,
        out: &mut Vec<LatticeHom>,
    ) {
        if i == ji.len() {
            let map = extend(a, b, ji, assign);
            if map[a.top()] != b.top() {
                return;
            }
            let n = a.len();
            for x in 0..n {
                for y in 0..n {
                    if map[a.meet(x, y)] != b.meet(map[x], map[y])
                        || map[a.join(x, y)] != b.join(map[x], map[y])
                    {
                        return;
                    }
                    if heyting
                        && map[a.imp(x, y).unwrap()] != b.imp(map[x], map[y]).unwrap()
                    {
                        return;
                    }
                }
            }
            out.push(
                LatticeHom::new(a.clone(), b.clone(), map, heyting)
                    .expect("validated above"),
            );
            return;
        }
        for v in 0..b.len() {
            let ok = (0..i).all(|k| {
                (!a.leq(ji[k], ji[i]) || b.leq(assign[k], v))
                    && (!a.leq(ji[i], ji[k]) || b.leq(v, assign[k]))
            });
            if ok {
                assign[i] = v;
                rec(a, b, ji, heyting, i + 1, assign, out);
            }
        }
    }
    rec(a, b, &ji, heyting, 0, &mut assign, &mut out);
    Ok(out)
}

/// The Heyting morphism `U(Q) -> U(P)` dual to an open map `P -> Q`:
/// inverse image on upsets. Validation re-checks implication preservation.
pub fn dual_open_map(f: &OpenMap) -> Result<LatticeHom> {
    let dom_alg = UpsetAlgebra::new(f.domain())?;
    let cod_alg = UpsetAlgebra::new(f.codomain())?;
    dual_preimage_hom(f.as_monotone().preimages(&cod_alg), &cod_alg, &dom_alg)
}

/// Inverse image of a merely monotone map, validated as a Heyting
/// morphism; fails with a preservation error when the map is not open.
pub fn dual_monotone_map(f: &crate::poset::MonotoneMap) -> Result<LatticeHom> {
    let dom_alg = UpsetAlgebra::new(f.domain())?;
    let cod_alg = UpsetAlgebra::new(f.codomain())?;
    dual_preimage_hom(f.preimages(&cod_alg), &cod_alg, &dom_alg)
}

fn dual_preimage_hom(
    images: Vec<Upset>,
    cod_alg: &UpsetAlgebra,
    dom_alg: &UpsetAlgebra,
) -> Result<LatticeHom> {
    let cod_lat = to_lattice(cod_alg)?;
    let dom_lat = to_lattice(dom_alg)?;
    let map: Vec<usize> = images
        .into_iter()
        .map(|s| {
            dom_alg
                .index_of(s)
                .ok_or_else(|| Error::Internal("preimage of an upset must be an upset".into()))
        })
        .collect::<Result<_>>()?;
    LatticeHom::new(cod_lat, dom_lat, map, true)
}

/// Explicit order isomorphism `P = spec(U(P))`, or `None` on failure.
pub fn roundtrip_poset(p: &FinPoset) -> Result<Option<Vec<usize>>> {
    let alg = UpsetAlgebra::new(p)?;
    let lat = to_lattice(&alg)?;
    let sp = spec(&lat)?;
    Ok(find_iso(p, &sp))
}

/// Lattice isomorphism search; an order isomorphism between lattice orders
/// is automatically a lattice isomorphism.
pub fn lattice_iso(a: &FinLattice, b: &FinLattice) -> Option<Vec<usize>> {
    find_iso(a.order(), b.order())
}

impl crate::poset::MonotoneMap {
    /// Preimages of every upset of the codomain, in algebra order.
    pub fn preimages(&self, cod_alg: &UpsetAlgebra) -> Vec<Upset> {
        cod_alg.upsets().iter().map(|&s| self.preimage(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{open_assignments, posets_up_to, MonotoneMap};

    fn chain_lattice(n: usize) -> FinLattice {
        FinLattice::from_order(FinPoset::chain(n)).unwrap()
    }

    fn boolean4() -> FinLattice {
        let order = FinPoset::new(
            vec!["0", "x", "y", "1"],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        FinLattice::from_order(order).unwrap()
    }

    #[test]
    fn spec_of_three_chain_is_sierpinski() {
        let sp = spec(&chain_lattice(3)).unwrap();
        assert!(find_iso(&sp, &FinPoset::sierpinski()).is_some());
        assert_eq!(prime_filters_brute(&chain_lattice(3)).unwrap().len(), 2);
    }

    #[test]
    fn spec_of_boolean4_is_antichain() {
        let sp = spec(&boolean4()).unwrap();
        assert!(find_iso(&sp, &FinPoset::antichain(2)).is_some());
        assert_eq!(prime_filters_brute(&boolean4()).unwrap().len(), 2);
    }

    #[test]
    fn spec_of_two_lattice_is_point() {
        let sp = spec(&chain_lattice(2)).unwrap();
        assert!(find_iso(&sp, &FinPoset::point()).is_some());
    }

    #[test]
    fn spec_matches_prime_filter_oracle() {
        for p in posets_up_to(4) {
            if p.is_empty() {
                continue;
            }
            let lat = to_lattice(&UpsetAlgebra::new(&p).unwrap()).unwrap();
            let sp = spec(&lat).unwrap();
            let filters = prime_filters_brute(&lat).unwrap();
            assert_eq!(sp.len(), filters.len());
        }
    }

    #[test]
    fn to_lattice_point_and_sierpinski() {
        let l1 = to_lattice(&UpsetAlgebra::new(&FinPoset::point()).unwrap()).unwrap();
        assert_eq!(l1.len(), 2);
        let ls = to_lattice(&UpsetAlgebra::new(&FinPoset::sierpinski()).unwrap()).unwrap();
        assert_eq!(ls.len(), 3);
        // a -> bot = bot for every a above bot in the 3-chain.
        for a in 0..3 {
            if a != ls.bot() {
                assert_eq!(ls.imp(a, ls.bot()).unwrap(), ls.bot());
            }
        }
        assert!(lattice_iso(&ls, &chain_lattice(3)).is_some());
    }

    #[test]
    fn to_lattice_antichain_is_boolean() {
        let l = to_lattice(&UpsetAlgebra::new(&FinPoset::antichain(2)).unwrap()).unwrap();
        assert!(lattice_iso(&l, &boolean4()).is_some());
    }

    #[test]
    fn roundtrip_small() {
        for p in [FinPoset::point(), FinPoset::sierpinski(), FinPoset::chain(3)] {
            assert!(roundtrip_poset(&p).unwrap().is_some());
        }
    }

    #[test]
    fn dual_of_identity_is_identity() {
        let s = FinPoset::sierpinski();
        let h = dual_open_map(&OpenMap::identity(&s)).unwrap();
        assert_eq!(h.assignment(), &[0, 1, 2]);
    }

    #[test]
    fn hom_count_matches_open_maps_sigma() {
        let s = FinPoset::sierpinski();
        let lat = to_lattice(&UpsetAlgebra::new(&s).unwrap()).unwrap();
        let homs = enumerate_homs(&lat, &lat, true).unwrap();
        assert_eq!(homs.len(), 2, "identity and constant-1 are the open endos");
        assert_eq!(open_assignments(&s, &s).len(), 2);
    }

    #[test]
    fn non_open_map_fails_implication_preservation() {
        let s = FinPoset::sierpinski();
        let const0 = MonotoneMap::new(s.clone(), s.clone(), vec![0, 0]).unwrap();
        assert!(dual_monotone_map(&const0).is_err());
    }

    #[test]
    fn contravariant_functoriality_small() {
        let frames = [FinPoset::point(), FinPoset::sierpinski()];
        for a in &frames {
            for b in &frames {
                for c in &frames {
                    for fm in open_assignments(a, b) {
                        for gm in open_assignments(b, c) {
                            let f = OpenMap::new(
                                MonotoneMap::new(a.clone(), b.clone(), fm.clone()).unwrap(),
                            )
                            .unwrap();
                            let g = OpenMap::new(
                                MonotoneMap::new(b.clone(), c.clone(), gm.clone()).unwrap(),
                            )
                            .unwrap();
                            let gf = f.then(&g).unwrap();
                            let lhs = dual_open_map(&gf).unwrap();
                            let rhs = dual_open_map(&g).unwrap().then(&dual_open_map(&f).unwrap());
                            assert_eq!(lhs.assignment(), rhs.unwrap().assignment());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counit_iso_small() {
        for p in posets_up_to(3) {
            if p.is_empty() {
                continue;
            }
            let d = to_lattice(&UpsetAlgebra::new(&p).unwrap()).unwrap();
            let back = to_lattice(&UpsetAlgebra::new(&spec(&d).unwrap()).unwrap()).unwrap();
            assert!(lattice_iso(&d, &back).is_some());
        }
    }

    #[test]
    fn nondistributive_rejected() {
        // The diamond M3 is a lattice but not distributive.
        let order = FinPoset::new(
            vec!["0", "a", "b", "c", "1"],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        )
        .unwrap();
        let lat = FinLattice::from_order(order).unwrap();
        assert!(!lat.is_distributive());
        assert!(spec(&lat).is_err());
    }
}
