//! The category of finite posets and open maps: finite colimits, image
//! factorization, covering families, and the effectivity diagnostics.
//!
//! Coequalizers follow the explicit construction: the smallest equivalence
//! containing the glued pairs, with class order `[p] <= [q]` iff some
//! `p' >= p` is equivalent to `q`. The code re-validates everything the
//! construction promises (well-definedness, partial order, open surjective
//! projection), so building a `Quotient` doubles as a self-check.

use crate::error::{Error, Result};
use crate::poset::{
    bits, find_iso, monoidal_pullback, open_assignments, posets_up_to, FinPoset, MonotoneMap,
    OpenMap, Upset,
};
use serde::Serialize;

/// Disjoint union with componentwise order; injections are open.
pub fn coproduct(parts: &[FinPoset]) -> Result<(FinPoset, Vec<OpenMap>)> {
    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    let mut offsets = Vec::new();
    let mut off = 0usize;
    for (k, p) in parts.iter().enumerate() {
        offsets.push(off);
        for i in 0..p.len() {
            labels.push(if parts.len() > 1 {
                format!("{}:{}", k, p.label(i))
            } else {
                p.label(i).to_string()
            });
        }
        for i in 0..p.len() {
            for j in 0..p.len() {
                if p.leq(i, j) {
                    pairs.push((off + i, off + j));
                }
            }
        }
        off += p.len();
    }
    let sum = FinPoset::new(labels, &pairs)?;
    let mut injections = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let map: Vec<usize> = (0..p.len()).map(|i| offsets[k] + i).collect();
        injections.push(OpenMap::new(MonotoneMap::new(p.clone(), sum.clone(), map)?)?);
    }
    Ok((sum, injections))
}

/// A coequalizer quotient `P / theta` together with its open projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    source: FinPoset,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    quotient: FinPoset,
    projection: OpenMap,
}

impl Quotient {
    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn quotient(&self) -> &FinPoset {
        &self.quotient
    }

    pub fn projection(&self) -> &OpenMap {
        &self.projection
    }

    /// Replays the antisymmetry argument for two mutually related classes:
    /// builds the ascending chain that alternates between the two classes
    /// until it stabilizes. Returns the chain (element indices in the
    /// source). The chain stabilizes within `|P|` strict steps.
    pub fn stabilizing_chain(&self, p: usize, q: usize) -> Result<Vec<usize>> {
        let mut chain = vec![p];
        let mut cur = p;
        let mut want = self.class_of[q];
        let other = self.class_of[p];
        for _ in 0..=self.source.len() {
            if self.class_of[cur] == want {
                return Ok(chain);
            }
            let next = bits(self.source.up_mask(cur))
                .find(|&x| self.class_of[x] == want)
                .ok_or_else(|| {
                    Error::Internal("chain witness missing; class order corrupt".into())
                })?;
            chain.push(next);
            cur = next;
            want = if want == other { self.class_of[q] } else { other };
        }
        Err(Error::Internal("chain failed to stabilize within |P| steps".into()))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Coequalizer of a parallel pair of open maps in Kp.
pub fn coequalizer(f: &OpenMap, g: &OpenMap) -> Result<Quotient> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(Error::ParallelPair);
    }
    let p = f.codomain().clone();
    let n = p.len();
    let mut uf = UnionFind::new(n);
    for r in 0..f.domain().len() {
        uf.union(f.apply(r), g.apply(r));
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![0usize; n];
    for i in 0..n {
        let r = uf.find(i);
        let c = match reps.iter().position(|&x| x == r) {
            Some(c) => c,
            None => {
                reps.push(r);
                reps.len() - 1
            }
        };
        class_of[i] = c;
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for i in 0..n {
        classes[class_of[i]].push(i);
    }

    // Class order: [p] <= [q] iff some p' >= p lies in q's class.
    let rel = |pe: usize, qc: usize| bits(p.up_mask(pe)).any(|x| class_of[x] == qc);
    let m = classes.len();
    let mut class_leq = vec![vec![false; m]; m];
    for (a, members) in classes.iter().enumerate() {
        for b in 0..m {
            let votes: Vec<bool> = members.iter().map(|&pe| rel(pe, b)).collect();
            if votes.iter().any(|&v| v) != votes.iter().all(|&v| v) {
                return Err(Error::Internal(
                    "class order depends on the representative".into(),
                ));
            }
            class_leq[a][b] = votes[0];
        }
    }
    // Re-check the order axioms the construction promises.
    for a in 0..m {
        if !class_leq[a][a] {
            return Err(Error::Internal("class order not reflexive".into()));
        }
        for b in 0..m {
            for c in 0..m {
                if class_leq[a][b] && class_leq[b][c] && !class_leq[a][c] {
                    return Err(Error::Internal("class order not transitive".into()));
                }
            }
            if a != b && class_leq[a][b] && class_leq[b][a] {
                return Err(Error::Internal("class order not antisymmetric".into()));
            }
        }
    }

    let labels: Vec<String> = classes
        .iter()
        .map(|members| {
            let names: Vec<&str> = members.iter().map(|&i| p.label(i)).collect();
            if names.len() == 1 {
                names[0].to_string()
            } else {
                format!("{{{}}}", names.join(","))
            }
        })
        .collect();
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if class_leq[a][b] {
                pairs.push((a, b));
            }
        }
    }
    let quotient = FinPoset::new(labels, &pairs)?;
    // The validated closure must add nothing new.
    for a in 0..m {
        for b in 0..m {
            if quotient.leq(a, b) != class_leq[a][b] {
                return Err(Error::Internal("class order changed under closure".into()));
            }
        }
    }
    let projection = OpenMap::new(MonotoneMap::new(p.clone(), quotient.clone(), class_of.clone())?)
        .map_err(|_| Error::Internal("quotient projection must be open".into()))?;
    if !projection.is_surjective() {
        return Err(Error::Internal("quotient projection must be surjective".into()));
    }
    Ok(Quotient {
        source: p,
        classes,
        class_of,
        quotient,
        projection,
    })
}

/// Bounded universal-property check for a coequalizer: every open cocone
/// out of the codomain equalizing `f, g` factors uniquely through the
/// quotient, tested against all targets with at most `bound` elements.
pub fn coequalizer_universal(q: &Quotient, f: &OpenMap, g: &OpenMap, bound: usize) -> Result<bool> {
    let p = q.source();
    for c in posets_up_to(bound) {
        for u in open_assignments(p, &c) {
            let equalizes = (0..f.domain().len()).all(|r| u[f.apply(r)] == u[g.apply(r)]);
            if !equalizes {
                continue;
            }
            // Candidate factorization: constant on classes.
            let mut w = vec![usize::MAX; q.quotient().len()];
            let mut ok = true;
            for (cl, members) in q.classes().iter().enumerate() {
                w[cl] = u[members[0]];
                if members.iter().any(|&i| u[i] != w[cl]) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                return Ok(false);
            }
            let wm = match MonotoneMap::new(q.quotient().clone(), c.clone(), w) {
                Ok(m) => m,
                Err(_) => return Ok(false),
            };
            if !wm.is_open() {
                return Ok(false);
            }
            // Uniqueness is automatic: the projection is surjective.
        }
    }
    Ok(true)
}

/// Factor an open map as an open surjection onto its image followed by an
/// open upset embedding.
pub fn image_factorize(f: &OpenMap) -> Result<(OpenMap, OpenMap)> {
    let cod = f.codomain();
    let image = f.image_mask();
    let members: Vec<usize> = bits(image).collect();
    let labels: Vec<String> = members.iter().map(|&i| cod.label(i).to_string()).collect();
    let mut pairs = Vec::new();
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate() {
            if cod.leq(i, j) {
                pairs.push((a, b));
            }
        }
    }
    let mid = FinPoset::new(labels, &pairs)?;
    let surj_map: Vec<usize> = f
        .assignment()
        .iter()
        .map(|&v| members.iter().position(|&m| m == v).expect("image member"))
        .collect();
    let surj = OpenMap::new(MonotoneMap::new(f.domain().clone(), mid.clone(), surj_map)?)
        .map_err(|_| Error::Internal("image corestriction must be open".into()))?;
    let emb = OpenMap::new(MonotoneMap::new(mid, cod.clone(), members)?)
        .map_err(|_| Error::Internal("image of an open map must be an upset".into()))?;
    Ok((surj, emb))
}

/// A finite family of open maps into one target.
#[derive(Clone, Debug)]
pub struct CoverFamily {
    target: FinPoset,
    maps: Vec<OpenMap>,
}

impl CoverFamily {
    pub fn new(target: FinPoset, maps: Vec<OpenMap>) -> Result<CoverFamily> {
        for (index, m) in maps.iter().enumerate() {
            if m.codomain() != &target {
                return Err(Error::BadFamily { index });
            }
        }
        Ok(CoverFamily { target, maps })
    }

    /// The rooted cover of `P` by all up-cone embeddings.
    pub fn rooted_cover(p: &FinPoset) -> Result<CoverFamily> {
        let mut maps = Vec::new();
        for i in 0..p.len() {
            let members: Vec<usize> = bits(p.up_mask(i)).collect();
            let labels: Vec<String> = members.iter().map(|&j| p.label(j).to_string()).collect();
            let mut pairs = Vec::new();
            for (a, &x) in members.iter().enumerate() {
                for (b, &y) in members.iter().enumerate() {
                    if p.leq(x, y) {
                        pairs.push((a, b));
                    }
                }
            }
            let cone = FinPoset::new(labels, &pairs)?;
            maps.push(OpenMap::new(MonotoneMap::new(cone, p.clone(), members)?)?);
        }
        CoverFamily::new(p.clone(), maps)
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    pub fn maps(&self) -> &[OpenMap] {
        &self.maps
    }

    /// Covering means jointly surjective.
    pub fn is_cover(&self) -> bool {
        let joint = self.maps.iter().fold(0u128, |acc, m| acc | m.image_mask());
        joint == self.target.full_mask()
    }

    pub fn joint_image(&self) -> Upset {
        Upset(self.maps.iter().fold(0u128, |acc, m| acc | m.image_mask()))
    }
}

/// Outcome of the bounded effective-epimorphism test.
#[derive(Clone, Debug, Serialize)]
pub struct EffEpiReport {
    pub bound: usize,
    pub cocones_checked: usize,
    pub effective: bool,
    pub is_cover: bool,
    pub agrees: bool,
    /// A compatible cocone with a factorization count other than one,
    /// described as (target poset size, per-leg assignments, count).
    pub counterexample: Option<(usize, Vec<Vec<usize>>, usize)>,
}

/// Test the colimit-cone property of a family against every compatible
/// cocone into posets with at most `bound` elements (up to iso).
pub fn check_effective_epi(family: &CoverFamily, bound: usize) -> Result<EffEpiReport> {
    if bound < 1 {
        return Err(Error::BadInput("bound must be at least 1".into()));
    }
    if bound > 5 {
        return Err(Error::Size {
            what: "cocone target bound",
            limit: 5,
            got: bound,
        });
    }
    let p = family.target();
    let legs = family.maps();
    // Points of the pairwise monoidal pullbacks, used for compatibility.
    let mut overlaps: Vec<(usize, usize, Vec<(usize, usize)>)> = Vec::new();
    for i in 0..legs.len() {
        for j in i..legs.len() {
            let mut pts = Vec::new();
            for a in 0..legs[i].domain().len() {
                for b in 0..legs[j].domain().len() {
                    if legs[i].apply(a) == legs[j].apply(b) {
                        pts.push((a, b));
                    }
                }
            }
            overlaps.push((i, j, pts));
        }
    }
    struct Walk<'a> {
        legs: &'a [OpenMap],
        overlaps: &'a [(usize, usize, Vec<(usize, usize)>)],
        choices: Vec<Vec<Vec<usize>>>,
        factor_pool: Vec<Vec<usize>>,
        cocones_checked: usize,
        counterexample: Option<(usize, Vec<Vec<usize>>, usize)>,
    }

    impl Walk<'_> {
        fn compatible(&self, assigned: &[Vec<usize>]) -> bool {
            self.overlaps.iter().all(|&(i, j, ref pts)| {
                if i >= assigned.len() || j >= assigned.len() {
                    return true;
                }
                pts.iter().all(|&(a, b)| assigned[i][a] == assigned[j][b])
            })
        }

        /// Returns false as soon as some compatible cocone breaks
        /// unique factorization.
        fn run(&mut self, assigned: &mut Vec<Vec<usize>>, csize: usize) -> bool {
            if assigned.len() == self.legs.len() {
                self.cocones_checked += 1;
                let factors = self
                    .factor_pool
                    .iter()
                    .filter(|w| {
                        self.legs.iter().enumerate().all(|(i, leg)| {
                            (0..leg.domain().len()).all(|a| w[leg.apply(a)] == assigned[i][a])
                        })
                    })
                    .count();
                if factors != 1 {
                    self.counterexample = Some((csize, assigned.clone(), factors));
                    return false;
                }
                return true;
            }
            let depth = assigned.len();
            for cand in self.choices[depth].clone() {
                assigned.push(cand);
                let ok = !self.compatible(assigned) || self.run(assigned, csize);
                assigned.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let mut cocones_checked = 0usize;
    let mut effective = true;
    let mut counterexample = None;
    for c in posets_up_to(bound) {
        let choices: Vec<Vec<Vec<usize>>> = legs
            .iter()
            .map(|leg| open_assignments(leg.domain(), &c))
            .collect();
        let mut walk = Walk {
            legs,
            overlaps: &overlaps,
            choices,
            factor_pool: open_assignments(p, &c),
            cocones_checked: 0,
            counterexample: None,
        };
        let ok = walk.run(&mut Vec::new(), c.len());
        cocones_checked += walk.cocones_checked;
        if !ok {
            effective = false;
            counterexample = walk.counterexample;
            break;
        }
    }
    let is_cover = family.is_cover();
    Ok(EffEpiReport {
        bound,
        cocones_checked,
        effective,
        is_cover,
        agrees: effective == is_cover,
        counterexample,
    })
}

/// The standard glued-square data refuting exactness: two open maps out of
/// the Sierpinski poset into its square whose coequalizer misses the
/// bottom corner.
#[derive(Clone, Debug, Serialize)]
pub struct NotExactReport {
    pub coequalizer_is_three_chain: bool,
    pub joint_image: Vec<String>,
    pub missing: String,
    pub swap_pair_equalized: bool,
    pub u_factors_through_image: bool,
    pub v_factors_through_image: bool,
}

/// Construct and verify the obstruction data.
pub fn notexact_witness() -> Result<NotExactReport> {
    let s = FinPoset::sierpinski();
    let (sq, _, _) = FinPoset::tensor(&s, &s)?;
    let idx = |a: usize, b: usize| -> Result<usize> { sq.index_of(&format!("({a},{b})")) };
    let f = OpenMap::new(MonotoneMap::new(
        s.clone(),
        sq.clone(),
        vec![idx(0, 1)?, idx(1, 1)?],
    )?)?;
    let g = OpenMap::new(MonotoneMap::new(
        s.clone(),
        sq.clone(),
        vec![idx(1, 0)?, idx(1, 1)?],
    )?)?;
    let q = coequalizer(&f, &g)?;
    let coequalizer_is_three_chain = find_iso(q.quotient(), &FinPoset::chain(3)).is_some();

    let fam = CoverFamily::new(sq.clone(), vec![f.clone(), g.clone()])?;
    let joint = fam.joint_image();
    let joint_image = sq.upset_labels(joint);
    let missing = sq.label(idx(0, 0)?).to_string();

    // u = id, v = the automorphism swapping the two middle corners.
    let u = OpenMap::identity(&sq);
    let mut vmap: Vec<usize> = (0..sq.len()).collect();
    vmap.swap(idx(0, 1)?, idx(1, 0)?);
    let v = OpenMap::new(MonotoneMap::new(sq.clone(), sq.clone(), vmap)?)?;
    let h = q.projection();
    let swap_pair_equalized =
        (0..sq.len()).all(|i| h.apply(u.apply(i)) == h.apply(v.apply(i)));
    let hits_gap = |m: &OpenMap| (0..sq.len()).any(|i| !joint.contains(m.apply(i)));
    Ok(NotExactReport {
        coequalizer_is_three_chain,
        joint_image,
        missing,
        swap_pair_equalized,
        u_factors_through_image: !hits_gap(&u),
        v_factors_through_image: !hits_gap(&v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::UpsetAlgebra;

    #[test]
    fn coproduct_two_chains() {
        let s = FinPoset::sierpinski();
        let (sum, injections) = coproduct(&[s.clone(), s.clone()]).unwrap();
        assert_eq!(sum.len(), 4);
        assert_eq!(sum.max_elements().len(), 2);
        for inj in &injections {
            assert!(inj.as_monotone().is_open());
        }
    }

    #[test]
    fn coproduct_empty() {
        let (sum, injections) = coproduct(&[]).unwrap();
        assert!(sum.is_empty());
        assert!(injections.is_empty());
    }

    #[test]
    fn coequalizer_of_identity_pair() {
        let p = FinPoset::chain(3);
        let id = OpenMap::identity(&p);
        let q = coequalizer(&id, &id).unwrap();
        assert!(find_iso(q.quotient(), &p).is_some());
    }

    #[test]
    fn coequalizer_of_coproduct_injections() {
        let s = FinPoset::sierpinski();
        let (_, injections) = coproduct(&[s.clone(), s.clone()]).unwrap();
        let q = coequalizer(&injections[0], &injections[1]).unwrap();
        assert!(find_iso(q.quotient(), &s).is_some());
    }

    #[test]
    fn coequalizer_universal_small() {
        let s = FinPoset::sierpinski();
        let (_, injections) = coproduct(&[s.clone(), s.clone()]).unwrap();
        let q = coequalizer(&injections[0], &injections[1]).unwrap();
        assert!(coequalizer_universal(&q, &injections[0], &injections[1], 3).unwrap());
    }

    #[test]
    fn image_factorization_surjective_case() {
        let s = FinPoset::sierpinski();
        let f = OpenMap::identity(&s);
        let (surj, emb) = image_factorize(&f).unwrap();
        assert!(surj.is_surjective());
        assert_eq!(emb.domain().len(), s.len());
    }

    #[test]
    fn image_factorization_point_case() {
        let one = FinPoset::point();
        let s = FinPoset::sierpinski();
        let f = OpenMap::new(MonotoneMap::new(one, s.clone(), vec![1]).unwrap()).unwrap();
        let (surj, emb) = image_factorize(&f).unwrap();
        assert!(surj.is_surjective());
        assert_eq!(emb.domain().len(), 1);
        assert_eq!(emb.domain().label(0), "1");
    }

    #[test]
    fn rooted_cover_is_cover() {
        let p = FinPoset::chain(3);
        let fam = CoverFamily::rooted_cover(&p).unwrap();
        assert!(fam.is_cover());
    }

    #[test]
    fn point_selection_is_not_a_cover() {
        let one = FinPoset::point();
        let s = FinPoset::sierpinski();
        let f = OpenMap::new(MonotoneMap::new(one, s.clone(), vec![1]).unwrap()).unwrap();
        let fam = CoverFamily::new(s, vec![f]).unwrap();
        assert!(!fam.is_cover());
    }

    #[test]
    fn empty_family_covers_empty_poset() {
        let fam = CoverFamily::new(FinPoset::empty(), vec![]).unwrap();
        assert!(fam.is_cover());
    }

    #[test]
    fn single_cover_iff_surjective() {
        let s = FinPoset::sierpinski();
        for p in posets_up_to(3) {
            for map in open_assignments(&p, &s) {
                let f = OpenMap::new(MonotoneMap::new(p.clone(), s.clone(), map).unwrap()).unwrap();
                let surj = f.is_surjective();
                let fam = CoverFamily::new(s.clone(), vec![f]).unwrap();
                assert_eq!(fam.is_cover(), surj);
            }
        }
    }

    #[test]
    fn effective_epi_rooted_cover_sigma() {
        let fam = CoverFamily::rooted_cover(&FinPoset::sierpinski()).unwrap();
        let report = check_effective_epi(&fam, 4).unwrap();
        assert!(report.effective);
        assert!(report.is_cover);
        assert!(report.agrees);
    }

    #[test]
    fn effective_epi_fails_for_point_selection() {
        let one = FinPoset::point();
        let s = FinPoset::sierpinski();
        let f = OpenMap::new(MonotoneMap::new(one, s.clone(), vec![1]).unwrap()).unwrap();
        let fam = CoverFamily::new(s, vec![f]).unwrap();
        let report = check_effective_epi(&fam, 3).unwrap();
        assert!(!report.effective);
        assert!(!report.is_cover);
        assert!(report.agrees);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn effective_epi_identity_family() {
        let s = FinPoset::sierpinski();
        let fam = CoverFamily::new(s.clone(), vec![OpenMap::identity(&s)]).unwrap();
        let report = check_effective_epi(&fam, 3).unwrap();
        assert!(report.effective);
    }

    #[test]
    fn glued_square_obstruction() {
        let r = notexact_witness().unwrap();
        assert!(r.coequalizer_is_three_chain);
        let mut ji = r.joint_image.clone();
        ji.sort();
        assert_eq!(ji, vec!["(0,1)", "(1,0)", "(1,1)"]);
        assert_eq!(r.missing, "(0,0)");
        assert!(r.swap_pair_equalized);
        assert!(!r.u_factors_through_image);
        assert!(!r.v_factors_through_image);
    }

    #[test]
    fn quotient_projection_open_and_chain_stabilizes() {
        let s = FinPoset::sierpinski();
        let (sq, _, _) = FinPoset::tensor(&s, &s).unwrap();
        let idx = |a: usize, b: usize| sq.index_of(&format!("({a},{b})")).unwrap();
        let f = OpenMap::new(
            MonotoneMap::new(s.clone(), sq.clone(), vec![idx(0, 1), idx(1, 1)]).unwrap(),
        )
        .unwrap();
        let g = OpenMap::new(
            MonotoneMap::new(s.clone(), sq.clone(), vec![idx(1, 0), idx(1, 1)]).unwrap(),
        )
        .unwrap();
        let q = coequalizer(&f, &g).unwrap();
        assert!(q.projection().as_monotone().is_open());
        // Two elements of one class: the chain argument must stabilize fast.
        let chain = q.stabilizing_chain(idx(0, 1), idx(1, 0)).unwrap();
        assert!(chain.len() <= sq.len());
    }

    #[test]
    fn inverse_image_is_heyting_morphism_small() {
        // f^{-1} preserves the full Heyting structure for open f.
        for p in posets_up_to(3) {
            for q in posets_up_to(3) {
                let (pa, qa) = match (UpsetAlgebra::new(&p), UpsetAlgebra::new(&q)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                for map in open_assignments(&q, &p) {
                    let f = OpenMap::new(MonotoneMap::new(q.clone(), p.clone(), map).unwrap())
                        .unwrap();
                    for &s in pa.upsets() {
                        assert!(q.is_upset(f.preimage(s)));
                        for &t in pa.upsets() {
                            assert_eq!(
                                f.preimage(pa.imp(s, t)),
                                qa.imp(f.preimage(s), f.preimage(t))
                            );
                            assert_eq!(
                                f.preimage(s.union(t)),
                                f.preimage(s).union(f.preimage(t))
                            );
                        }
                    }
                    assert_eq!(f.preimage(pa.top()), qa.top());
                }
            }
        }
    }
}
