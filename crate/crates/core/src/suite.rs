//! Property suites: structural theorems checked group by group, and engine
//! soundness checks. Each check that fails adds a violation line.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analysis::{self, power_of_group, Strategy};
use crate::ancestry::{self, Descendant};
use crate::error::Result;
use crate::group::Group;
use crate::pc::Elem;
use crate::subgroup::Subgroup;

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub groups: usize,
    pub checks: u64,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn merge(&mut self, other: SuiteReport) {
        self.groups += other.groups;
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Ctx<'a> {
    name: &'a str,
    rep: SuiteReport,
}

impl Ctx<'_> {
    fn check(&mut self, rule: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.rep.checks += 1;
        if !ok {
            self.rep.violations.push(format!("{}: {rule}: {}", self.name, detail()));
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Random pairs per group for the power-commutator congruences.
    pub pairs: usize,
    /// Run the hypercentral search on small maximal-tail groups.
    pub hypercentral: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { pairs: 100, hypercentral: true, seed: 0x5eed }
    }
}

pub fn random_element<R: Rng>(g: &Group, rng: &mut R) -> Elem {
    (0..g.pc().len()).map(|_| rng.gen_range(0..g.p())).collect()
}

fn le(g: &Group, a: &Subgroup, b: &Subgroup) -> Result<bool> {
    a.is_subgroup_of(g, b)
}

/// Runs every structural check that applies to `g`.
pub fn check_group(name: &str, g: &Group, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut cx = Ctx { name, rep: SuiteReport { groups: 1, ..Default::default() } };
    let p = g.p();
    let n = g.n();
    let r = g.rank() as u32;
    let e = g.exponent_log();
    let powerful = analysis::is_powerful(g)?;
    let strong = analysis::is_strongly_powerful(g)?;
    let pn = analysis::is_powerfully_nilpotent(g)?;
    cx.check("strongly powerful implies powerfully nilpotent", !strong || pn, || "strongly powerful but not pn".into());
    if p == 2 && powerful {
        cx.check("powerful 2-groups are powerfully nilpotent", pn, || "not pn".into());
    }
    if powerful {
        remark_frattini(&mut cx, g)?;
    }
    lemma_3_1(&mut cx, g, opts)?;
    if !pn || g.is_trivial() {
        return Ok(cx.rep);
    }
    let (c, d) = analysis::class_and_coclass(g)?;
    if p == 2 {
        cx.check("powerful 2-groups have class at most e - 1", c + 1 <= e.max(2), || format!("c = {c}, e = {e}"));
    }
    cx.check("rank bound r ≤ n - c + 1", r <= n - c + 1, || format!("r = {r}, n = {n}, c = {c}"));
    cx.check("exponent bound e ≤ n - c + 1", e <= n - c + 1, || format!("e = {e}, n = {n}, c = {c}"));

    let up = analysis::upper_series(g)?.terms;
    let whole = Subgroup::whole(g);
    let gp = power_of_group(g, 1);
    let der = analysis::derived(g)?;
    if c >= 2 {
        let comms: Vec<u32> = up
            .iter()
            .map(|z| Subgroup::commutator(g, z, &whole).map(|h| h.order_log()))
            .collect::<Result<_>>()?;
        let pows: Vec<u32> = up.iter().map(|z| z.power(g, 1).map(|h| h.order_log())).collect::<Result<_>>()?;
        let strict_c = (2..=c as usize).all(|j| comms[j] > comms[j - 1]);
        let strict_p = (1..c as usize).all(|j| pows[j] > pows[j - 1]);
        cx.check("[Ẑ_j, G] strictly increasing", strict_c, || format!("{comms:?}"));
        cx.check("Ẑ_j^p strictly increasing below c", strict_p, || format!("{pows:?}"));
        cx.check("|G^p| ≥ |[G,G]| ≥ p^(c-1)", gp.order_log() >= der.order_log() && der.order_log() + 1 >= c, || {
            format!("|G^p| = p^{}, |[G,G]| = p^{}, c = {c}", gp.order_log(), der.order_log())
        });
    }

    let s = n - r + 1;
    let s_array = analysis::pth_power_length_of(g, &analysis::refinement(g, Strategy::Array)?)?;
    cx.check("p-th power length n - r + 1 (array refinement)", s_array == s, || format!("{s_array} vs {s}"));
    for off in 0..3 {
        let s_g = analysis::pth_power_length_of(g, &analysis::refinement(g, Strategy::Greedy(off))?)?;
        cx.check("p-th power length independent of the refinement", s_g == s, || format!("greedy {off}: {s_g} vs {s}"));
    }

    if e >= 2 {
        let q = Subgroup::quotient(g, &power_of_group(g, 2))?;
        if analysis::is_powerfully_nilpotent(&q.group)? && !q.group.is_trivial() {
            let m = analysis::class_and_coclass(&q.group)?.0;
            cx.check("class bound c ≤ (e-1)m from G/G^(p²)", c <= (e - 1) * m, || format!("c = {c}, e = {e}, m = {m}"));
        }
    }

    let ranks = analysis::power_ranks(g);
    for (k, &rk) in ranks.iter().enumerate() {
        if rk == 1 {
            let ok = le(g, &power_of_group(g, k as u32), &Subgroup::center(g)?)?;
            cx.check("cyclic G^(p^k) is central", ok, || format!("k = {k}"));
        }
    }

    interchange(&mut cx, g, &up)?;

    if r >= 2 {
        let w = analysis::class_bound_witness(g)?;
        let formal: u32 = w.layer_ranks.iter().map(|x| x - 1).sum::<u32>() + 1;
        cx.check("witness chain bounds the class", c <= w.bound && w.bound <= formal, || {
            format!("c = {c}, chain {}, formula {formal}", w.bound)
        });
    }

    tail_checks(&mut cx, g, &up, c, &ranks, opts)?;

    if let Descendant::Group(q) = ancestry::direct_descendant(g)? {
        let h = &q.group;
        let zp = Subgroup::center(g)?.power(g, 1)?.order_log();
        let (ch, dh) = if h.is_trivial() { (0, 0) } else { analysis::class_and_coclass(h)? };
        cx.check("descendant class drops by one", ch + 1 == c, || format!("c(G) = {c}, c(H) = {ch}"));
        cx.check("coclass does not decrease to the descendant", d >= dh && ((d == dh) == (zp == 1)), || {
            format!("d(G) = {d}, d(H) = {dh}, |Z(G)^p| = p^{zp}")
        });
    }
    Ok(cx.rep)
}

fn remark_frattini(cx: &mut Ctx, g: &Group) -> Result<()> {
    let phi = Subgroup::whole(g).frattini(g)?;
    let gp = power_of_group(g, 1);
    cx.check("Φ(G) = G^p for powerful G", phi.same_as(g, &gp)?, || "differ".into());
    for i in 1..g.exponent_log() {
        let h = ancestry::power_group(g, i)?;
        let ok = analysis::is_strongly_powerful(&h)? && analysis::is_powerfully_nilpotent(&h)?;
        cx.check("G^(p^i) is strongly powerful and pn", ok, || format!("i = {i}"));
    }
    Ok(())
}

fn lemma_3_1(cx: &mut Ctx, g: &Group, opts: &SuiteOptions) -> Result<()> {
    if g.is_trivial() {
        return Ok(());
    }
    let mut rng = StdRng::seed_from_u64(opts.seed ^ g.n() as u64);
    let whole = Subgroup::whole(g);
    for k in 0..=2u32 {
        let m = Subgroup::commutator(g, &power_of_group(g, k + 1), &whole)?;
        let q = (g.p() as u64).pow(k);
        let mut ok = true;
        for _ in 0..opts.pairs {
            let a = random_element(g, &mut rng);
            let b = random_element(g, &mut rng);
            let x = g.comm(&g.pow(&a, q)?, &b)?;
            let y = g.pow(&g.comm(&a, &b)?, q)?;
            let z = g.comm(&a, &g.pow(&b, q)?)?;
            let xy = g.mul(&x, &g.inv(&y)?)?;
            let yz = g.mul(&y, &g.inv(&z)?)?;
            if !m.contains(g, &xy)? || !m.contains(g, &yz)? {
                ok = false;
                break;
            }
        }
        cx.check("[a^(p^k), b] ≡ [a, b]^(p^k) ≡ [a, b^(p^k)]", ok, || format!("k = {k}"));
    }
    Ok(())
}

fn interchange(cx: &mut Ctx, g: &Group, up: &[Subgroup]) -> Result<()> {
    let mut family = vec![Subgroup::whole(g), power_of_group(g, 1), Subgroup::center(g)?, analysis::derived(g)?];
    family.extend(up.iter().skip(1).cloned());
    let mut emb = Vec::new();
    for h in family {
        if !h.is_trivial() && h.is_powerfully_embedded(g)? && !emb.iter().any(|x: &Subgroup| x.same_as(g, &h).unwrap_or(false)) {
            emb.push(h);
        }
    }
    emb.truncate(4);
    for a in 0..emb.len() {
        for b in a..emb.len() {
            let mn = Subgroup::commutator(g, &emb[a], &emb[b])?;
            for i in 0..=3u32 {
                for j in 0..=3 - i {
                    let lhs = Subgroup::commutator(g, &emb[a].power(g, i)?, &emb[b].power(g, j)?)?;
                    let rhs = mn.power(g, i + j)?;
                    let ok = lhs.same_as(g, &rhs)?;
                    cx.check("[M^(p^i), N^(p^j)] = [M, N]^(p^(i+j))", ok, || format!("pair ({a}, {b}), i = {i}, j = {j}"));
                }
            }
        }
    }
    Ok(())
}

fn tail_checks(cx: &mut Ctx, g: &Group, up: &[Subgroup], c: u32, ranks: &[u32], opts: &SuiteOptions) -> Result<()> {
    let n = g.n();
    let r = g.rank() as u32;
    let e = g.exponent_log();
    let tail = analysis::tail_analysis(g)?;
    let k = tail.length;
    let zp: Vec<Subgroup> = up.iter().map(|z| z.power(g, 1)).collect::<Result<_>>()?;
    let zp_at = |j: usize| zp[j.min(zp.len() - 1)].clone();

    // Ascending chain of the adapted array up to G^p.
    let basis = analysis::adapted_generators(g)?;
    let mut desc: Vec<Subgroup> = Vec::new();
    for kk in 1..=e {
        for kset in &basis.chain {
            let t = kset.power(g, kk)?;
            if desc.last().map_or(true, |x| x.order_log() != t.order_log()) {
                desc.push(t);
            }
        }
    }
    if desc.last().map_or(true, |x| !x.is_trivial()) {
        desc.push(Subgroup::trivial(g));
    }
    desc.reverse();
    let mut ok1 = true;
    let mut ok2 = true;
    for (j, m) in desc.iter().enumerate() {
        ok1 &= le(g, m, &zp_at(j))?;
        if j as u32 <= k {
            ok2 &= m.same_as(g, &zp_at(j))?;
        }
    }
    cx.check("M_j ≤ Ẑ_j^p along the adapted array", ok1, || "containment fails".into());
    cx.check("M_j = Ẑ_j^p inside the tail", ok2, || format!("tail length {k}"));

    if r >= 2 {
        cx.check("tail length at most 1 + r(r-1)/2", k <= 1 + r * (r - 1) / 2, || format!("t = {k}, r = {r}"));
        let tail_sub = &tail.tail;
        for i in 0..e as usize {
            if le(g, &power_of_group(g, i as u32 + 1), tail_sub)? && ranks[i] >= 2 {
                cx.check("rank drops where G^(p^(i+1)) lies in the tail", ranks[i] > ranks[i + 1], || format!("i = {i}"));
            }
        }
        let f = ranks.iter().rposition(|&x| x >= 2).unwrap_or(0);
        let mut i0 = None;
        for i in 0..=e as usize {
            if le(g, &power_of_group(g, i as u32 + 1), tail_sub)? {
                i0 = Some(i);
                break;
            }
        }
        if let Some(i0) = i0 {
            let ok = (i0..=f).all(|i| ranks[i] > ranks[i + 1]);
            cx.check("strict rank descent from the tail to the last non-cyclic layer", ok, || format!("i = {i0}, f = {f}"));
        }
    }

    if tail.maximal && r >= 2 {
        cx.check("maximal tail: t = n - r", k == n - r, || format!("t = {k}"));
        cx.check("maximal tail: c - 1 ≤ t ≤ c", k + 1 >= c && k <= c, || format!("t = {k}, c = {c}"));
        cx.check("maximal tail: n ≤ 1 + r(r+1)/2", n <= 1 + r * (r + 1) / 2, || format!("n = {n}"));
        if e >= 2 {
            let ok = (0..(e - 2) as usize).all(|i| ranks[i] > ranks[i + 1]);
            cx.check("maximal tail: ranks strictly descend to G^(p^(e-2))", ok, || format!("{ranks:?}"));
        }
        for (i, z) in zp.iter().enumerate() {
            let q = Subgroup::quotient(g, z)?;
            if q.group.is_trivial() {
                continue;
            }
            let ok = analysis::is_powerfully_nilpotent(&q.group)? && analysis::tail_analysis(&q.group)?.maximal;
            cx.check("maximal tail passes to G/Ẑ_i^p", ok, || format!("i = {i}"));
        }
        if opts.hypercentral && (g.p() as f64).powi(n as i32) <= 3f64.powi(analysis::HYPERCENTRAL_LIMIT as i32) {
            let mut cands: Vec<Subgroup> = up.to_vec();
            cands.push(Subgroup::center(g)?);
            cands.push(analysis::derived(g)?);
            for kk in 1..e {
                cands.push(power_of_group(g, kk));
            }
            for x in g.gens() {
                cands.push(Subgroup::normal_closure(g, &[x.clone()])?);
                cands.push(Subgroup::normal_closure(g, &[g.pow(x, g.p() as u64)?])?);
            }
            for h in cands {
                if analysis::is_powerfully_hypercentral(g, &h)? {
                    let hp = h.power(g, 1)?;
                    let mut ok = false;
                    for z in &zp {
                        ok |= hp.same_as(g, z)?;
                    }
                    cx.check("hypercentral H has H^p = Ẑ_i^p", ok, || format!("|H| = p^{}", h.order_log()));
                }
            }
        }
    }
    Ok(())
}

/// Closure of the generators has `|G|` elements and random triples
/// associate.
pub fn engine_soundness(name: &str, g: &Group, triples: usize, seed: u64) -> Result<SuiteReport> {
    let mut cx = Ctx { name, rep: SuiteReport { groups: 1, ..Default::default() } };
    let size = (g.p() as u64).pow(g.n());
    let mut seen = std::collections::HashSet::new();
    seen.insert(g.identity());
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for s in g.gens() {
            let y = g.mul(&x, s)?;
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    cx.check("closure of the generators has |G| elements", seen.len() as u64 == size, || {
        format!("{} of {size}", seen.len())
    });
    let mut nfs = std::collections::HashSet::new();
    for x in &seen {
        nfs.insert(g.to_nf(x)?);
    }
    cx.check("normal forms are distinct", nfs.len() == seen.len(), || format!("{} forms", nfs.len()));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..triples {
        let (a, b, c) = (random_element(g, &mut rng), random_element(g, &mut rng), random_element(g, &mut rng));
        if g.mul(&g.mul(&a, &b)?, &c)? != g.mul(&a, &g.mul(&b, &c)?)? {
            bad += 1;
        }
    }
    cx.check("random triples associate", bad == 0, || format!("{bad} failures"));
    let x = random_element(g, &mut rng);
    let nf = g.to_nf(&x)?;
    cx.check("collection is idempotent on normal forms", g.nf_to_pc(&nf)? == x, || "round trip differs".into());
    Ok(cx.rep)
}
