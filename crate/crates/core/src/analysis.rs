//! Invariants of powerful and powerfully nilpotent groups.
//!
//! A chain `1 = H_0 ≤ ⋯ ≤ H_n` is powerfully central when
//! `[H_i, G] ≤ H_{i-1}^p`. For every prime, including 2, the power in that
//! condition is the p-th power; only the embedding and powerfulness tests
//! use fourth powers when p = 2.

use std::collections::HashMap;

use crate::engine::sigma;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::Echelon;
use crate::pc::{Elem, PcPres};
use crate::subgroup::Subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Upper,
    Refinement,
    Witness,
    Custom,
}

/// A chain of subgroups. Upper and refinement series ascend from the
/// trivial group; witness chains descend to it.
#[derive(Clone, Debug)]
pub struct Series {
    pub kind: SeriesKind,
    pub terms: Vec<Subgroup>,
    /// Whether the last term is the whole group (for ascending kinds).
    pub reaches_group: bool,
}

impl Series {
    pub fn orders(&self) -> Vec<u32> {
        self.terms.iter().map(|h| h.order_log()).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `G^{p^k}`: the pc generators of weight at least `k`.
pub fn power_of_group(g: &Group, k: u32) -> Subgroup {
    let start = g.pc().weight().iter().position(|&w| w >= k).unwrap_or(g.n() as usize);
    Subgroup::pc_tail(g, start)
}

pub fn derived(g: &Group) -> Result<Subgroup> {
    let w = Subgroup::whole(g);
    Subgroup::commutator(g, &w, &w)
}

/// `[G, G] ≤ G^p` (`G^4` when p = 2).
pub fn is_powerful(g: &Group) -> Result<bool> {
    derived(g)?.is_subgroup_of(g, &power_of_group(g, sigma(g.p())))
}

/// `[G, G] ≤ G^{p²}`.
pub fn is_strongly_powerful(g: &Group) -> Result<bool> {
    derived(g)?.is_subgroup_of(g, &power_of_group(g, 2))
}

pub fn is_powerfully_embedded(g: &Group, h: &Subgroup) -> Result<bool> {
    h.is_powerfully_embedded(g)
}

/// `[upper, G] ≤ lower^p`.
pub fn is_powerfully_central_step(g: &Group, lower: &Subgroup, upper: &Subgroup) -> Result<bool> {
    let c = Subgroup::commutator(g, upper, &Subgroup::whole(g))?;
    c.is_subgroup_of(g, &lower.power(g, 1)?)
}

/// Checks the powerfully central condition along an ascending chain.
pub fn is_powerfully_central_chain(g: &Group, terms: &[Subgroup]) -> Result<bool> {
    for w in terms.windows(2) {
        if !is_powerfully_central_step(g, &w[0], &w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Preimage of `Z(G/N)`.
pub fn center_mod(g: &Group, n: &Subgroup) -> Result<Subgroup> {
    if n.is_trivial() {
        return Subgroup::center(g);
    }
    let q = Subgroup::quotient(g, n)?;
    let z = Subgroup::center(&q.group)?;
    q.preimage(g, &z)
}

/// `Ẑ_0 = 1`, `Ẑ_i` the preimage of `Z(G/Ẑ_{i-1}^p)`, listed until it
/// stops growing.
pub fn upper_series(g: &Group) -> Result<Series> {
    let terms = match g.upper.get() {
        Some(t) => t.clone(),
        None => {
            let mut terms = vec![Subgroup::trivial(g)];
            loop {
                let last = terms.last().unwrap();
                let next = center_mod(g, &last.power(g, 1)?)?;
                if next.order_log() == last.order_log() {
                    break;
                }
                terms.push(next);
            }
            let _ = g.upper.set(terms.clone());
            terms
        }
    };
    let reaches_group = terms.last().unwrap().order_log() == g.n();
    Ok(Series { kind: SeriesKind::Upper, terms, reaches_group })
}

pub fn is_powerfully_nilpotent(g: &Group) -> Result<bool> {
    Ok(is_powerful(g)? && upper_series(g)?.reaches_group)
}

/// Powerful class `c` and coclass `d = n - c`. The trivial group gets
/// `(0, 0)`.
pub fn class_and_coclass(g: &Group) -> Result<(u32, u32)> {
    if g.is_trivial() {
        return Ok((0, 0));
    }
    if !is_powerfully_nilpotent(g)? {
        return Err(Error::NotPowerfullyNilpotent);
    }
    let c = upper_series(g)?.terms.len() as u32 - 1;
    Ok((c, g.n() - c))
}

/// `rank(G^{p^i})` for `i = 0..=e`; for powerful `G` these are the layer
/// dimensions.
pub fn power_ranks(g: &Group) -> Vec<u32> {
    (0..=g.exponent_log()).map(|d| g.layer(d as usize).len() as u32).collect()
}

/// Number of generators of order `p^i` in an adapted basis, `i = 1..=e`:
/// `rank G^{p^{i-1}} - rank G^{p^i}`.
pub fn order_counts(g: &Group) -> Vec<u32> {
    let r = power_ranks(g);
    (1..r.len()).map(|i| r[i - 1] - r[i]).collect()
}

fn require_pn(g: &Group) -> Result<()> {
    if is_powerfully_nilpotent(g)? || g.is_trivial() {
        Ok(())
    } else {
        Err(Error::NotPowerfullyNilpotent)
    }
}

/// How to build a maximal powerfully central chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Refine the lifted upper series of `G/G^{p²}` between `G` and `G^p`
    /// and take its rows of `p^k`-th powers; contains every `G^{p^k}`.
    Array,
    /// Grow from the bottom one element at a time, scanning candidates in
    /// an order rotated by the given offset.
    Greedy(usize),
}

/// Descending chain `G = L_0 > L_1 > ⋯ > L_r = G^p` with index-p steps and
/// `[L_j, G] ≤ L_{j+1}^p`.
fn top_chain(g: &Group) -> Result<Vec<Subgroup>> {
    let gp = power_of_group(g, 1);
    let whole = Subgroup::whole(g);
    let q = Subgroup::quotient(g, &power_of_group(g, 2))?;
    let up = upper_series(&q.group)?;
    if !up.reaches_group {
        return Err(Error::NotPowerfullyNilpotent);
    }
    // Descending coarse chain G = H_0 ≥ ⋯ ≥ H_m = G^p.
    let mut coarse = Vec::new();
    for z in up.terms.iter().rev() {
        coarse.push(q.preimage(g, z)?.join(g, &gp)?);
    }
    coarse[0] = whole;
    *coarse.last_mut().unwrap() = gp.clone();
    let mut out = vec![coarse[0].clone()];
    for w in coarse.windows(2) {
        let (hi, lo) = (&w[0], &w[1]);
        let mut steps = Vec::new();
        let mut cur = lo.clone();
        for s in hi.gens() {
            if !cur.contains(g, s)? {
                cur = cur.join(g, &Subgroup::closure(g, &[s.clone()])?)?;
                steps.push(cur.clone());
            }
        }
        if steps.last().map_or(false, |t| t.order_log() != hi.order_log()) {
            return Err(Error::Internal("coarse chain refinement missed generators".into()));
        }
        // steps ascend from lo; we need them descending from hi.
        steps.pop();
        steps.reverse();
        out.extend(steps);
        out.push(lo.clone());
    }
    out.dedup_by(|a, b| a.order_log() == b.order_log());
    Ok(out)
}

/// Maximal powerfully central chain `1 = K_0 < ⋯ < K_n = G`.
pub fn refinement(g: &Group, strategy: Strategy) -> Result<Series> {
    require_pn(g)?;
    let terms = match strategy {
        Strategy::Array => array_refinement(g)?,
        Strategy::Greedy(offset) => greedy_refinement(g, offset)?,
    };
    for (i, t) in terms.iter().enumerate() {
        if t.order_log() != i as u32 {
            return Err(Error::Internal("refinement steps are not of index p".into()));
        }
    }
    if !is_powerfully_central_chain(g, &terms)? {
        return Err(Error::Internal("refinement is not powerfully central".into()));
    }
    Ok(Series { kind: SeriesKind::Refinement, terms, reaches_group: true })
}

fn array_refinement(g: &Group) -> Result<Vec<Subgroup>> {
    if g.is_trivial() {
        return Ok(vec![Subgroup::trivial(g)]);
    }
    let top = top_chain(g)?;
    let mut desc: Vec<Subgroup> = Vec::new();
    for k in 0..g.exponent_log() {
        for l in &top {
            let t = l.power(g, k)?;
            if desc.last().map_or(true, |x| x.order_log() != t.order_log()) {
                desc.push(t);
            }
        }
    }
    if desc.last().map_or(true, |x| !x.is_trivial()) {
        desc.push(Subgroup::trivial(g));
    }
    desc.reverse();
    Ok(desc)
}

fn greedy_refinement(g: &Group, offset: usize) -> Result<Vec<Subgroup>> {
    let p = g.p() as u64;
    let mut terms = vec![Subgroup::trivial(g)];
    while terms.last().unwrap().order_log() < g.n() {
        let k = terms.last().unwrap().clone();
        let t = center_mod(g, &k.power(g, 1)?)?;
        let gens = t.gens();
        let mut pick = None;
        for i in 0..gens.len() {
            let mut s = gens[(i + offset) % gens.len()].clone();
            if k.contains(g, &s)? {
                continue;
            }
            loop {
                let sp = g.pow(&s, p)?;
                if k.contains(g, &sp)? {
                    break;
                }
                s = sp;
            }
            pick = Some(s);
            break;
        }
        let s = pick.ok_or(Error::NotPowerfullyNilpotent)?;
        terms.push(k.join(g, &Subgroup::closure(g, &[s])?)?);
    }
    Ok(terms)
}

/// Number of distinct `K_i^p` along a maximal powerfully central chain.
pub fn pth_power_length_of(g: &Group, chain: &Series) -> Result<u32> {
    let mut distinct = 0;
    let mut last = None;
    for k in &chain.terms {
        let o = k.power(g, 1)?.order_log();
        if last != Some(o) {
            distinct += 1;
            last = Some(o);
        }
    }
    Ok(distinct)
}

/// p-th power length, computed along a refinement and as `n - r + 1`;
/// the two must agree.
pub fn pth_power_length(g: &Group) -> Result<u32> {
    require_pn(g)?;
    if g.is_trivial() {
        return Ok(1);
    }
    let s1 = pth_power_length_of(g, &refinement(g, Strategy::Array)?)?;
    let s2 = g.n() - g.rank() as u32 + 1;
    if s1 != s2 {
        return Err(Error::Internal(format!("p-th power length {s1} along the refinement, {s2} from n - r + 1")));
    }
    Ok(s1)
}

/// Generators `a_1, …, a_r` with `|a_i| = p^{f_i}` and `|G| = ∏ |a_i|`, adapted to a refinement.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub gens: Vec<Elem>,
    /// `log_p` of each generator order.
    pub orders: Vec<u32>,
    /// `H_0 = G > H_1 > ⋯ > H_r = G^p`, `H_i = ⟨a_{i+1}, …, a_r⟩ G^p`.
    pub chain: Vec<Subgroup>,
    /// `s(i)` for `i = 1..=e`: how many generators have order `p^i`.
    pub counts: Vec<u32>,
}

pub fn adapted_generators(g: &Group) -> Result<AdaptedBasis> {
    require_pn(g)?;
    if g.is_trivial() {
        return Ok(AdaptedBasis { gens: vec![], orders: vec![], chain: vec![Subgroup::trivial(g)], counts: vec![] });
    }
    let top = top_chain(g)?;
    let e = g.exponent_log();
    let rows: Vec<Vec<u32>> = top
        .iter()
        .map(|l| (0..=e).map(|k| l.power(g, k).map(|h| h.order_log())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut picked: Vec<(Elem, u32)> = Vec::new();
    for j in 0..top.len() - 1 {
        let f = (1..=e).find(|&k| rows[j][k as usize] == rows[j + 1][k as usize]).unwrap_or(e);
        let start = top[j]
            .gens()
            .iter()
            .find(|s| !top[j + 1].contains(g, s).unwrap_or(true))
            .cloned()
            .ok_or_else(|| Error::Internal("chain step without a new generator".into()))?;
        let a = reduce_order(g, start, &top[j + 1], f)?;
        picked.push((a, f));
    }
    // Order-p generators first, otherwise keeping the chain order.
    let (mut front, back): (Vec<_>, Vec<_>) = picked.into_iter().partition(|(_, f)| *f == 1);
    front.extend(back);
    let (gens, orders): (Vec<Elem>, Vec<u32>) = front.into_iter().unzip();
    if orders.iter().sum::<u32>() != g.n() {
        return Err(Error::Internal("adapted generator orders do not multiply to |G|".into()));
    }
    let gp = power_of_group(g, 1);
    let mut chain = Vec::with_capacity(gens.len() + 1);
    for i in 0..=gens.len() {
        let mut h = gp.clone();
        h.extend(g, gens[i..].to_vec())?;
        chain.push(h);
    }
    let asc: Vec<Subgroup> = chain.iter().rev().cloned().collect();
    if !is_powerfully_central_chain(g, &asc)? {
        return Err(Error::Internal("adapted chain is not powerfully central".into()));
    }
    Ok(AdaptedBasis { gens, orders, chain, counts: order_counts(g) })
}

/// Replaces `a` by an element of `a·K` whose order is `p^f`.
fn reduce_order(g: &Group, mut a: Elem, k: &Subgroup, f: u32) -> Result<Elem> {
    let q = (g.p() as u64).pow(f);
    let mut last = None;
    loop {
        let w = g.pow(&a, q)?;
        let Some(t) = g.depth(&w) else { return Ok(a) };
        if last.is_some_and(|l| t <= l) {
            break;
        }
        last = Some(t);
        let mut ech = Echelon::new(g.p());
        let mut ys = Vec::new();
        for s in k.gens() {
            let mut y = s.clone();
            loop {
                let yp = g.pow(&y, q)?;
                match g.depth(&yp) {
                    Some(d) if d == t => {
                        ech.insert(&g.layer_vec(&yp, t as usize));
                        ys.push(y.clone());
                    }
                    None => break,
                    _ => {}
                }
                y = g.pow(&y, g.p() as u64)?;
                if PcPres::is_identity(&y) {
                    break;
                }
            }
        }
        let Some(c) = ech.solve(&g.layer_vec(&w, t as usize)) else { break };
        let mut y = g.identity();
        for (yi, &ci) in ys.iter().zip(&c) {
            if ci != 0 {
                y = g.mul(&y, &g.pow(yi, ci)?)?;
            }
        }
        a = g.mul(&a, &g.inv(&y)?)?;
    }
    // Exhaustive search over the coset.
    let size = (g.p() as u64).checked_pow(k.order_log()).unwrap_or(u64::MAX);
    if size > 1 << 20 {
        return Err(Error::Infeasible("adapted generator search space too large".into()));
    }
    for y in subgroup_elements(g, k)? {
        let x = g.mul(&a, &y)?;
        if PcPres::is_identity(&g.pow(&x, q)?) {
            return Ok(x);
        }
    }
    Err(Error::Internal("no element of the required order in the coset".into()))
}

/// Every element of `H` as a product of its sequence.
pub fn subgroup_elements(g: &Group, h: &Subgroup) -> Result<Vec<Elem>> {
    let mut out = vec![g.identity()];
    for s in h.gens().iter().rev() {
        let mut next = Vec::with_capacity(out.len() * g.p() as usize);
        let mut pw = g.identity();
        for _ in 0..g.p() {
            for x in &out {
                next.push(g.mul(&pw, x)?);
            }
            pw = g.mul(&pw, s)?;
        }
        out = next;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TailInfo {
    pub tail: Subgroup,
    pub length: u32,
    pub maximal: bool,
}

/// Tail `Ẑ_t(G)^p` for the largest `t` with every `|Ẑ_i^p / Ẑ_{i-1}^p| = p`.
pub fn tail_analysis(g: &Group) -> Result<TailInfo> {
    require_pn(g)?;
    let up = upper_series(g)?;
    let mut prev = Subgroup::trivial(g);
    let mut t = 0;
    for z in &up.terms[1..] {
        let zp = z.power(g, 1)?;
        if zp.order_log() != prev.order_log() + 1 {
            break;
        }
        prev = zp;
        t += 1;
    }
    let maximal = prev.order_log() == power_of_group(g, 1).order_log();
    Ok(TailInfo { tail: prev, length: t, maximal })
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// Descending chain from `G` to `1` powerfully centralized by `G`.
    pub series: Series,
    /// The certified bound `c ≤ bound` (the chain length).
    pub bound: u32,
    /// `rank(G^{p^j})` for the layers used.
    pub layer_ranks: Vec<u32>,
}

/// Chain certifying the exponent bound: for each layer `G^{p^j}` of rank
/// at least two, drop the second term of the layer chain of adapted
/// generator powers; finish with the central `G^{p^{k+1}}`.
pub fn class_bound_witness(g: &Group) -> Result<Witness> {
    require_pn(g)?;
    let ranks = power_ranks(g);
    if ranks[0] < 2 {
        return Err(Error::Domain("witness chains need rank at least 2".into()));
    }
    let basis = adapted_generators(g)?;
    let kmax = ranks.iter().rposition(|&r| r >= 2).unwrap() as u32;
    let mut desc = vec![Subgroup::whole(g)];
    for k in 0..=kmax {
        let below = power_of_group(g, k + 1);
        let q = (g.p() as u64).pow(k);
        let jumps: Vec<usize> = (0..basis.gens.len()).filter(|&i| basis.orders[i] > k).collect();
        for start in 2..=jumps.len() {
            let mut h = below.clone();
            for &i in &jumps[start..] {
                h.extend(g, vec![g.pow(&basis.gens[i], q)?])?;
            }
            if desc.last().unwrap().order_log() != h.order_log() {
                desc.push(h);
            }
        }
    }
    if !desc.last().unwrap().is_trivial() {
        desc.push(Subgroup::trivial(g));
    }
    let whole = Subgroup::whole(g);
    for w in desc.windows(2) {
        let c = Subgroup::commutator(g, &w[0], &whole)?;
        if !c.is_subgroup_of(g, &w[1].power(g, 1)?)? {
            return Err(Error::Internal("witness chain step is not powerfully centralized".into()));
        }
    }
    let bound = desc.len() as u32 - 1;
    Ok(Witness {
        series: Series { kind: SeriesKind::Witness, terms: desc, reaches_group: true },
        bound,
        layer_ranks: ranks[..=kmax as usize].to_vec(),
    })
}

/// Largest group order the hypercentral search accepts.
pub const HYPERCENTRAL_LIMIT: u32 = 7;

/// Whether `H` has a chain `H = H_0 > H_1 > ⋯ > 1` with
/// `[H_i, G] ≤ H_{i+1}^p`. Exhaustive over maximal subgroups, memoized.
pub fn is_powerfully_hypercentral(g: &Group, h: &Subgroup) -> Result<bool> {
    let limit = 3f64.powi(HYPERCENTRAL_LIMIT as i32);
    if (g.p() as f64).powi(g.n() as i32) > limit {
        return Err(Error::Infeasible(format!("hypercentral search limited to |G| ≤ 3^{HYPERCENTRAL_LIMIT}")));
    }
    let mut memo = HashMap::new();
    hyper(g, h, &mut memo)
}

fn key(g: &Group, h: &Subgroup) -> Result<Vec<Elem>> {
    let mut v = subgroup_elements(g, h)?;
    v.sort();
    Ok(v)
}

fn hyper(g: &Group, x: &Subgroup, memo: &mut HashMap<Vec<Elem>, bool>) -> Result<bool> {
    if x.is_trivial() {
        return Ok(true);
    }
    let k = key(g, x)?;
    if let Some(&v) = memo.get(&k) {
        return Ok(v);
    }
    let m = Subgroup::commutator(g, x, &Subgroup::whole(g))?;
    let mut found = false;
    for y in maximal_subgroups(g, x)? {
        if !m.is_subgroup_of(g, &y.power(g, 1)?)? {
            continue;
        }
        if hyper(g, &y, memo)? {
            found = true;
            break;
        }
    }
    memo.insert(k, found);
    Ok(found)
}

/// Maximal subgroups of `X`: preimages of the hyperplanes of `X/Φ(X)`.
pub fn maximal_subgroups(g: &Group, x: &Subgroup) -> Result<Vec<Subgroup>> {
    let phi = x.frattini(g)?;
    let reps: Vec<Elem> = x.gens().iter().filter(|s| !phi.contains(g, s).unwrap_or(false)).cloned().collect();
    let mut basis: Vec<Elem> = Vec::new();
    let mut cur = phi.clone();
    for s in &reps {
        if !cur.contains(g, s)? {
            cur = cur.join(g, &Subgroup::closure(g, &[s.clone()])?)?;
            basis.push(s.clone());
        }
    }
    let d = basis.len();
    let p = g.p() as u64;
    let mut out = Vec::new();
    // Hyperplanes ↔ functionals up to scalars: normalize the first nonzero
    // coordinate to 1.
    let total = p.pow(d as u32);
    for code in 1..total {
        let mut f = vec![0u64; d];
        let mut c = code;
        for x in f.iter_mut() {
            *x = c % p;
            c /= p;
        }
        if f.iter().find(|&&v| v != 0) != Some(&1) {
            continue;
        }
        // Kernel generators: b_i - f_i/f_j b_j for a pivot j, plus others.
        let j = f.iter().position(|&v| v != 0).unwrap();
        let mut gens = Vec::new();
        for i in 0..d {
            if i == j {
                continue;
            }
            // b_i * b_j^{-f_i} (f_j = 1)
            let t = g.pow(&basis[j], (p - f[i]) % p)?;
            gens.push(g.mul(&basis[i], &t)?);
        }
        let mut y = phi.clone();
        y.extend(g, gens)?;
        out.push(y);
    }
    Ok(out)
}

/// Everything `analyze` reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub p: u32,
    pub n: u32,
    pub r: u32,
    pub e: u32,
    pub powerful: bool,
    pub strongly_powerful: bool,
    pub pn: bool,
    pub c: Option<u32>,
    pub d: Option<u32>,
    pub s: Option<u32>,
    pub t: Option<u32>,
    pub maximal_tail: Option<bool>,
    /// `s(1), …, s(e)`.
    pub order_counts: Vec<u32>,
    /// `log_p |Ẑ_i|` along the upper series.
    pub upper_orders: Vec<u32>,
}

pub fn analyze(g: &Group) -> Result<AnalysisReport> {
    let powerful = is_powerful(g)?;
    let strongly_powerful = is_strongly_powerful(g)?;
    let up = upper_series(g)?;
    let pn = powerful && up.reaches_group;
    let (c, d, s, t, maximal_tail) = if pn {
        let (c, d) = class_and_coclass(g)?;
        let s = pth_power_length(g)?;
        let tail = tail_analysis(g)?;
        (Some(c), Some(d), Some(s), Some(tail.length), Some(tail.maximal))
    } else {
        (None, None, None, None, None)
    };
    Ok(AnalysisReport {
        p: g.p(),
        n: g.n(),
        r: g.rank() as u32,
        e: g.exponent_log(),
        powerful,
        strongly_powerful,
        pn,
        c,
        d,
        s,
        t,
        maximal_tail,
        order_counts: order_counts(g),
        upper_orders: up.orders(),
    })
}

impl AnalysisReport {
    /// Stable one-line `key=value` form.
    pub fn porcelain(&self) -> String {
        let opt = |v: Option<u32>| v.map_or("-".to_string(), |x| x.to_string());
        let optb = |v: Option<bool>| v.map_or("-".to_string(), |x| x.to_string());
        format!(
            "n={} r={} e={} c={} d={} s={} t={} maximal_tail={} pn={} powerful={} strongly_powerful={}",
            self.n,
            self.r,
            self.e,
            opt(self.c),
            opt(self.d),
            opt(self.s),
            opt(self.t),
            optb(self.maximal_tail),
            self.pn,
            self.powerful,
            self.strongly_powerful
        )
    }
}
