//! The ancestry tree `G → G/Z(G)^p`, isomorphism testing, the coclass
//! census and ancestor search.

use std::collections::HashMap;
use std::fmt;

use crate::analysis::{self, power_of_group};
use crate::catalog;
use crate::engine::check_consistency;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::pc::{Elem, PcPres};
use crate::presentation::{is_prime, Presentation};
use crate::subgroup::{Quotient, Subgroup};

/// Every pn-shape presentation with the given generator orders.
pub struct ShapeStream {
    p: u32,
    exps: Vec<u32>,
    /// `(i, j, k, step, count)`: `m_k(i, j) = step · c` for `c < count`.
    slots: Vec<(usize, usize, usize, u64, u64)>,
    counter: Vec<u64>,
    done: bool,
}

pub fn pn_shape_presentations(p: u32, exps: &[u32]) -> Result<ShapeStream> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let r = exps.len();
    let mut slots = Vec::new();
    for i in 0..r {
        for j in 0..i {
            for (k, &e) in exps.iter().enumerate() {
                // p | m, and p² | m when k ≤ i (1-based), i.e. k ≤ i here too.
                let v = if k <= i { 2 } else { 1 };
                let v = if p == 2 { v + 1 } else { v };
                if e > v {
                    slots.push((i, j, k, (p as u64).pow(v), (p as u64).pow(e - v)));
                }
            }
        }
    }
    Ok(ShapeStream { p, exps: exps.to_vec(), counter: vec![0; slots.len()], slots, done: false })
}

impl ShapeStream {
    pub fn size(&self) -> u64 {
        self.slots.iter().map(|s| s.4).product()
    }
}

impl Iterator for ShapeStream {
    type Item = Presentation;

    fn next(&mut self) -> Option<Presentation> {
        if self.done {
            return None;
        }
        let mut pres = Presentation::new(self.p, self.exps.clone()).expect("valid orders");
        let mut words: std::collections::BTreeMap<(usize, usize), Vec<(usize, i64)>> = Default::default();
        for (s, &c) in self.slots.iter().zip(&self.counter) {
            if c != 0 {
                words.entry((s.0, s.1)).or_default().push((s.2, (s.3 * c) as i64));
            }
        }
        for ((i, j), w) in words {
            pres.set_comm(i, j, &w).expect("shape");
        }
        let mut t = 0;
        loop {
            if t == self.counter.len() {
                self.done = true;
                break;
            }
            self.counter[t] += 1;
            if self.counter[t] < self.slots[t].4 {
                break;
            }
            self.counter[t] = 0;
            t += 1;
        }
        Some(pres)
    }
}

/// Ordered compositions of `n`, optionally bounded in length and part size.
pub fn compositions(n: u32, max_len: usize, max_part: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max_len: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for e in 1..=n.min(max_part) {
            cur.push(e);
            go(n - e, max_len, max_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_len, max_part, &mut Vec::new(), &mut out);
    out
}

/// Consistent pn-shape presentations of order `p^n`, `1 ≤ n ≤ n_max`.
pub fn corpus(p: u32, n_max: u32) -> Result<Vec<Presentation>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for exps in compositions(n, n as usize, n) {
            for pres in pn_shape_presentations(p, &exps)? {
                if check_consistency(&pres)?.consistent {
                    out.push(pres);
                }
            }
        }
    }
    Ok(out)
}

/// Ordered invariant tuple; isomorphic groups have equal fingerprints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub p: u32,
    pub n: u32,
    pub r: u32,
    pub e: u32,
    pub c: Option<u32>,
    pub d: Option<u32>,
    pub s: Option<u32>,
    pub t: Option<u32>,
    /// `rank((G/[G,G])^{p^i})` for `i = 0, 1, …`.
    pub abelianization: Vec<u32>,
    /// Generator counts `s(1), …, s(e)`.
    pub counts: Vec<u32>,
    /// `log_p |Ẑ_i^p|` along the upper series.
    pub zhat_powers: Vec<u32>,
    pub center: u32,
    pub derived: u32,
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = |v: Option<u32>| v.map_or("-".to_string(), |x| x.to_string());
        write!(
            f,
            "({},{},{},{},{},{},{},{},[{}],[{}],[{}],{},{})",
            self.p,
            self.n,
            self.r,
            self.e,
            o(self.c),
            o(self.d),
            o(self.s),
            o(self.t),
            join(&self.abelianization),
            join(&self.counts),
            join(&self.zhat_powers),
            self.center,
            self.derived
        )
    }
}

pub fn fingerprint(g: &Group) -> Result<Fingerprint> {
    let rep = analysis::analyze(g)?;
    let der = analysis::derived(g)?;
    let ab = Subgroup::quotient(g, &der)?;
    let up = analysis::upper_series(g)?;
    let zhat_powers = up.terms.iter().map(|z| z.power(g, 1).map(|h| h.order_log())).collect::<Result<_>>()?;
    Ok(Fingerprint {
        p: g.p(),
        n: g.n(),
        r: rep.r,
        e: rep.e,
        c: rep.c,
        d: rep.d,
        s: rep.s,
        t: rep.t,
        abelianization: analysis::power_ranks(&ab.group),
        counts: rep.order_counts,
        zhat_powers,
        center: Subgroup::center(g)?.order_log(),
        derived: der.order_log(),
    })
}

pub fn is_abelian(g: &Group) -> Result<bool> {
    Ok(analysis::derived(g)?.is_trivial())
}

#[derive(Clone, Debug)]
pub enum Descendant {
    AbelianLeaf,
    Group(Box<Quotient>),
}

/// `G/Z(G)^p` for nonabelian `G`.
pub fn direct_descendant(g: &Group) -> Result<Descendant> {
    if is_abelian(g)? {
        return Ok(Descendant::AbelianLeaf);
    }
    let zp = Subgroup::center(g)?.power(g, 1)?;
    Ok(Descendant::Group(Box::new(Subgroup::quotient(g, &zp)?)))
}

/// `G, G/Z(G)^p, …` down to the first abelian group.
pub fn descendant_chain(g: &Group) -> Result<Vec<Group>> {
    let mut out = vec![g.clone()];
    loop {
        match direct_descendant(out.last().unwrap())? {
            Descendant::AbelianLeaf => return Ok(out),
            Descendant::Group(q) => out.push(q.group),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Iso {
    /// Images of the power basis of the first group.
    Yes(Vec<Elem>),
    No,
    Unknown,
}

impl Iso {
    pub fn label(&self) -> &'static str {
        match self {
            Iso::Yes(_) => "yes",
            Iso::No => "no",
            Iso::Unknown => "unknown",
        }
    }
}

pub const ISO_BUDGET: u64 = 1_000_000;
/// Largest group whose elements the isomorphism search lists.
pub const ISO_ELEMENT_LIMIT: u64 = 1 << 20;

/// Whether `k ↦ images[k]` on the power basis of `g` defines an
/// isomorphism onto `h`.
pub fn verify_map(g: &Group, h: &Group, images: &[Elem]) -> Result<bool> {
    if g.p() != h.p() || g.n() != h.n() || images.len() != g.rank() {
        return Ok(false);
    }
    let pres = g.presentation();
    for (k, x) in images.iter().enumerate() {
        if h.order_log(x)? != pres.exps()[k] {
            return Ok(false);
        }
    }
    for i in 0..g.rank() {
        for j in 0..i {
            if !relation_holds(h, pres, images, i, j)? {
                return Ok(false);
            }
        }
    }
    Ok(Subgroup::closure(h, images)?.order_log() == h.n())
}

fn relation_holds(h: &Group, pres: &Presentation, images: &[Elem], i: usize, j: usize) -> Result<bool> {
    let lhs = h.comm(&images[i], &images[j])?;
    let mut rhs = h.identity();
    for (k, &m) in pres.comm(i, j).iter().enumerate() {
        if m != 0 {
            rhs = h.mul(&rhs, &h.pow(&images[k], m)?)?;
        }
    }
    Ok(lhs == rhs)
}

/// Automorphism-invariant data of an element: order, power depth, and the
/// first terms of the upper series and center chain containing it.
fn signature(g: &Group, up: &[Subgroup], z: &Subgroup, x: &[u32]) -> Result<(u32, u32, usize, u32)> {
    let o = g.order_log(x)?;
    let depth = g.depth(x).unwrap_or(u32::MAX);
    let mut level = usize::MAX;
    for (i, t) in up.iter().enumerate() {
        if t.contains(g, x)? {
            level = i;
            break;
        }
    }
    let mut zl = 0;
    let mut y = x.to_vec();
    while !z.contains(g, &y)? {
        y = g.pow(&y, g.p() as u64)?;
        zl += 1;
    }
    Ok((o, depth, level, zl))
}

/// Backtracking search for an isomorphism `g → h`.
pub fn are_isomorphic(g: &Group, h: &Group, budget: u64) -> Result<Iso> {
    if g.p() != h.p() || g.n() != h.n() {
        return Ok(Iso::No);
    }
    if fingerprint(g)? != fingerprint(h)? {
        return Ok(Iso::No);
    }
    if (h.p() as u64).checked_pow(h.n()).map_or(true, |s| s > ISO_ELEMENT_LIMIT) {
        return Ok(Iso::Unknown);
    }
    let upg = analysis::upper_series(g)?.terms;
    let uph = analysis::upper_series(h)?.terms;
    let zg = Subgroup::center(g)?;
    let zh = Subgroup::center(h)?;
    let r = g.rank();
    let src_sig: Vec<_> = (0..r).map(|k| signature(g, &upg, &zg, g.gen(k))).collect::<Result<_>>()?;
    let mut by_sig: HashMap<(u32, u32, usize, u32), Vec<Elem>> = HashMap::new();
    for x in h.elements() {
        let s = signature(h, &uph, &zh, &x)?;
        if src_sig.contains(&s) {
            by_sig.entry(s).or_default().push(x);
        }
    }
    let cands: Vec<Vec<Elem>> = src_sig.iter().map(|s| by_sig.get(s).cloned().unwrap_or_default()).collect();
    let prefix: Vec<u32> = (1..=r)
        .map(|k| Subgroup::closure(g, &g.gens()[..k]).map(|s| s.order_log()))
        .collect::<Result<_>>()?;
    // Relations become checkable once every index they mention is assigned.
    let mut due: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
    for i in 0..r {
        for j in 0..i {
            let top = g.presentation().comm(i, j).iter().enumerate().filter(|(_, &m)| m != 0).map(|(k, _)| k).fold(i, usize::max);
            due[top].push((i, j));
        }
    }
    let mut search = Search { h, pres: g.presentation(), cands, prefix, due, nodes: 0, budget };
    let mut images = Vec::with_capacity(r);
    match search.go(&mut images)? {
        Some(true) => {
            if !verify_map(g, h, &images)? {
                return Err(Error::Internal("isomorphism search produced an invalid map".into()));
            }
            Ok(Iso::Yes(images))
        }
        Some(false) => Ok(Iso::No),
        None => Ok(Iso::Unknown),
    }
}

struct Search<'a> {
    h: &'a Group,
    pres: &'a Presentation,
    cands: Vec<Vec<Elem>>,
    prefix: Vec<u32>,
    due: Vec<Vec<(usize, usize)>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn go(&mut self, images: &mut Vec<Elem>) -> Result<Option<bool>> {
        let k = images.len();
        if k == self.cands.len() {
            return Ok(Some(true));
        }
        for idx in 0..self.cands[k].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Ok(None);
            }
            images.push(self.cands[k][idx].clone());
            let mut ok = true;
            for &(i, j) in &self.due[k] {
                if !relation_holds(self.h, self.pres, images, i, j)? {
                    ok = false;
                    break;
                }
            }
            if ok && Subgroup::closure(self.h, images)?.order_log() != self.prefix[k] {
                ok = false;
            }
            if ok {
                match self.go(images)? {
                    Some(true) => return Ok(Some(true)),
                    None => return Ok(None),
                    Some(false) => {}
                }
            }
            images.pop();
        }
        Ok(Some(false))
    }
}

#[derive(Clone, Debug)]
pub struct CensusRecord {
    pub fingerprint: Fingerprint,
    pub presentation: Presentation,
    pub provenance: String,
}

impl CensusRecord {
    /// Presentation file text followed by the fingerprint sidecar line.
    pub fn to_text(&self) -> String {
        format!("# {}\n{}fingerprint {}\n", self.provenance, self.presentation.to_text(), self.fingerprint)
    }
}

/// Largest `(d+1)²` the census accepts.
pub const CENSUS_LIMIT: u32 = 9;

/// Isomorphism classes of powerfully nilpotent groups of powerful coclass
/// `d`, from presentations with `r ≤ d+1` and orders `p^{e_i}`, `e_i ≤ d+1`.
pub fn census(p: u32, d: u32) -> Result<Vec<CensusRecord>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let b = d + 1;
    if b * b > CENSUS_LIMIT {
        return Err(Error::Infeasible(format!("census needs (d+1)² ≤ {CENSUS_LIMIT}, got d = {d}")));
    }
    let mut reps: Vec<(CensusRecord, Group)> = Vec::new();
    for n in 1..=b * b {
        for exps in compositions(n, b as usize, b) {
            for (idx, pres) in pn_shape_presentations(p, &exps)?.enumerate() {
                let g = match Group::from_presentation(&pres) {
                    Ok(g) => g,
                    Err(Error::Inconsistent(_)) => continue,
                    Err(e) => return Err(e),
                };
                if !analysis::is_powerfully_nilpotent(&g)? || analysis::class_and_coclass(&g)?.1 != d {
                    continue;
                }
                let fp = fingerprint(&g)?;
                let mut dup = false;
                for (rec, rg) in &reps {
                    if rec.fingerprint != fp {
                        continue;
                    }
                    match are_isomorphic(&g, rg, ISO_BUDGET)? {
                        Iso::Yes(_) => {
                            dup = true;
                            break;
                        }
                        Iso::No => {}
                        Iso::Unknown => {
                            return Err(Error::Internal(format!("census could not decide isomorphism for {fp}")))
                        }
                    }
                }
                if !dup {
                    let provenance = format!("orders {} #{idx}", join(&exps));
                    reps.push((CensusRecord { fingerprint: fp, presentation: pres, provenance }, g));
                }
            }
        }
    }
    let mut out: Vec<CensusRecord> = reps.into_iter().map(|(r, _)| r).collect();
    out.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint).then_with(|| a.presentation.to_text().cmp(&b.presentation.to_text())));
    Ok(out)
}

/// Orders up to `p^CORPUS_EXHAUSTIVE` are searched exhaustively by
/// [`ancestors`]; above that only catalog fixtures are candidates.
pub const CORPUS_EXHAUSTIVE: u32 = 6;
pub const ANCESTOR_LIMIT: u32 = 12;

#[derive(Clone, Debug)]
pub struct Ancestor {
    pub name: String,
    pub group: Group,
}

/// Nonabelian `G` with `|G| ≤ p^bound` and `G/Z(G)^p ≅ H`, one per
/// isomorphism class.
pub fn ancestors(h: &Group, bound: u32) -> Result<Vec<Ancestor>> {
    if bound > ANCESTOR_LIMIT {
        return Err(Error::Infeasible(format!("ancestor search is limited to |G| ≤ p^{ANCESTOR_LIMIT}")));
    }
    let p = h.p();
    let fh = fingerprint(h)?;
    let mut cands: Vec<(String, Presentation)> = Vec::new();
    if bound > h.n() {
        for n in h.n() + 1..=bound.min(CORPUS_EXHAUSTIVE) {
            for exps in compositions(n, n as usize, n) {
                for (idx, pres) in pn_shape_presentations(p, &exps)?.enumerate() {
                    cands.push((format!("orders {} #{idx}", join(&exps)), pres));
                }
            }
        }
    }
    for (name, pres) in catalog::fixtures() {
        if pres.p() == p && pres.log_order() > h.n() && pres.log_order() <= bound {
            cands.push((name, pres));
        }
    }
    let mut found: Vec<Ancestor> = Vec::new();
    for (name, pres) in cands {
        if pres.is_abelian_table() {
            continue;
        }
        let g = match Group::from_presentation(&pres) {
            Ok(g) => g,
            Err(Error::Inconsistent(_)) => continue,
            Err(e) => return Err(e),
        };
        let zp = Subgroup::center(&g)?.power(&g, 1)?;
        if g.n() - zp.order_log() != h.n() || is_abelian(&g)? {
            continue;
        }
        let Descendant::Group(q) = direct_descendant(&g)? else { continue };
        if fingerprint(&q.group)? != fh {
            continue;
        }
        match are_isomorphic(&q.group, h, ISO_BUDGET)? {
            Iso::Yes(_) => {}
            Iso::No => continue,
            Iso::Unknown => return Err(Error::Internal(format!("could not decide whether {name} is an ancestor"))),
        }
        let mut dup = false;
        for a in &found {
            if a.group.n() == g.n() && matches!(are_isomorphic(&g, &a.group, ISO_BUDGET)?, Iso::Yes(_)) {
                dup = true;
                break;
            }
        }
        if !dup {
            found.push(Ancestor { name, group: g });
        }
    }
    Ok(found)
}

/// `G^{p^k}` as a group in its own right.
pub fn power_group(g: &Group, k: u32) -> Result<Group> {
    let h = power_of_group(g, k);
    subgroup_as_group(g, &h)
}

/// A subgroup that is a pc tail, rebuilt as a standalone group.
pub fn subgroup_as_group(g: &Group, h: &Subgroup) -> Result<Group> {
    let piv = h.pivots();
    let start = piv.first().copied().unwrap_or(g.pc().len());
    if piv != (start..g.pc().len()).collect::<Vec<_>>() {
        return Err(Error::Domain("only pc tails can be rebuilt as groups".into()));
    }
    let pc = g.pc();
    let m = pc.len() - start;
    let cut = |v: &Elem| -> Elem { v[start..].to_vec() };
    let weight: Vec<u32> = pc.weight()[start..].iter().map(|w| w - pc.weight()[start]).collect();
    let power: Vec<Elem> = (start..pc.len()).map(|i| cut(pc.power_word(i))).collect();
    let conj: Vec<Vec<Elem>> = (0..m).map(|y| (0..y).map(|x| cut(pc.conj_word(start + y, start + x))).collect()).collect();
    Group::from_pc(PcPres::new(g.p(), weight, power, conj)?)
}
