//! Subgroups as induced pc sequences: one element per pivot, each with
//! leading exponent 1, closed under p-th powers and commutators.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::{inv_mod, Echelon};
use crate::pc::{Elem, PcPres};
use crate::presentation::ElementNF;

/// Largest `|H : C|` the power-subgroup fallback will scan.
pub const POWER_FALLBACK_LIMIT: u64 = 6561;

#[derive(Clone, Debug)]
pub struct Subgroup {
    seq: Vec<Elem>,
    /// `lead[i]` is the position in `seq` of the element with pivot `i`.
    lead: Vec<Option<usize>>,
}

fn leading(v: &[u32]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

impl Subgroup {
    pub fn trivial(g: &Group) -> Self {
        Subgroup { seq: Vec::new(), lead: vec![None; g.n() as usize] }
    }

    pub fn whole(g: &Group) -> Self {
        let n = g.n() as usize;
        Subgroup { seq: (0..n).map(|i| g.pc().gen(i)).collect(), lead: (0..n).map(Some).collect() }
    }

    /// `⟨S⟩` for pc elements `S`.
    pub fn closure(g: &Group, gens: &[Elem]) -> Result<Self> {
        let mut h = Self::trivial(g);
        h.extend(g, gens.to_vec())?;
        Ok(h)
    }

    pub fn closure_nf(g: &Group, gens: &[ElementNF]) -> Result<Self> {
        let v = gens.iter().map(|x| g.nf_to_pc(x)).collect::<Result<Vec<_>>>()?;
        Self::closure(g, &v)
    }

    /// Tail of pc generators with index `≥ i`.
    pub fn pc_tail(g: &Group, i: usize) -> Self {
        let n = g.n() as usize;
        let mut lead = vec![None; n];
        let mut seq = Vec::new();
        for (pos, k) in (i..n).enumerate() {
            lead[k] = Some(pos);
            seq.push(g.pc().gen(k));
        }
        Subgroup { seq, lead }
    }

    /// Canonical sequence, ordered by pivot.
    pub fn gens(&self) -> &[Elem] {
        &self.seq
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.seq.iter().map(|s| leading(s).unwrap()).collect()
    }

    /// `log_p |H|`.
    pub fn order_log(&self) -> u32 {
        self.seq.len() as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.seq.is_empty()
    }

    /// Reduces `v` by the sequence; the identity comes back iff `v ∈ H`.
    pub fn sift(&self, pc: &PcPres, v: &[u32]) -> Result<Elem> {
        let p = pc.p();
        let mut v = v.to_vec();
        while let Some(i) = leading(&v) {
            match self.lead[i] {
                Some(pos) => {
                    let f = pc.pow(&self.seq[pos], (p - v[i]) as u64)?;
                    v = pc.mul(&f, &v)?;
                }
                None => break,
            }
        }
        Ok(v)
    }

    pub fn contains(&self, g: &Group, v: &[u32]) -> Result<bool> {
        Ok(PcPres::is_identity(&self.sift(g.pc(), v)?))
    }

    pub fn contains_nf(&self, g: &Group, x: &ElementNF) -> Result<bool> {
        self.contains(g, &g.nf_to_pc(x)?)
    }

    pub fn is_subgroup_of(&self, g: &Group, other: &Subgroup) -> Result<bool> {
        if self.order_log() > other.order_log() {
            return Ok(false);
        }
        for s in &self.seq {
            if !other.contains(g, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, g: &Group, other: &Subgroup) -> Result<bool> {
        Ok(self.order_log() == other.order_log() && self.is_subgroup_of(g, other)?)
    }

    /// Adds elements and restores closure.
    pub fn extend(&mut self, g: &Group, mut queue: Vec<Elem>) -> Result<()> {
        let pc = g.pc();
        let p = pc.p();
        while let Some(v) = queue.pop() {
            let r = self.sift(pc, &v)?;
            let Some(i) = leading(&r) else { continue };
            let r = pc.pow(&r, inv_mod(r[i] as u64, p as u64))?;
            queue.push(pc.pow(&r, p as u64)?);
            for s in &self.seq {
                queue.push(pc.comm(&r, s)?);
            }
            let pos = self.seq.partition_point(|s| leading(s).unwrap() < i);
            self.seq.insert(pos, r);
            for (k, s) in self.seq.iter().enumerate().skip(pos) {
                self.lead[leading(s).unwrap()] = Some(k);
            }
        }
        Ok(())
    }

    pub fn join(&self, g: &Group, other: &Subgroup) -> Result<Self> {
        let mut h = self.clone();
        h.extend(g, other.seq.clone())?;
        Ok(h)
    }

    pub fn is_normal(&self, g: &Group) -> Result<bool> {
        for s in &self.seq {
            for b in g.gens() {
                if !self.contains(g, &g.conjugate(s, b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest normal subgroup of `G` containing `S`.
    pub fn normal_closure(g: &Group, gens: &[Elem]) -> Result<Self> {
        let mut h = Self::closure(g, gens)?;
        h.normalize_under(g, g.gens())?;
        Ok(h)
    }

    /// Closes under conjugation by `by`.
    fn normalize_under(&mut self, g: &Group, by: &[Elem]) -> Result<()> {
        loop {
            let mut extra = Vec::new();
            for s in &self.seq {
                for b in by {
                    let c = g.conjugate(s, b)?;
                    if !self.contains(g, &c)? {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(());
            }
            self.extend(g, extra)?;
        }
    }

    /// `[A, B]`: normal closure in `⟨A, B⟩` of the generator commutators.
    pub fn commutator(g: &Group, a: &Subgroup, b: &Subgroup) -> Result<Self> {
        let mut cs = Vec::new();
        for x in &a.seq {
            for y in &b.seq {
                cs.push(g.comm(x, y)?);
            }
        }
        let mut h = Self::closure(g, &cs)?;
        let mut by = a.seq.clone();
        by.extend(b.seq.iter().cloned());
        h.normalize_under(g, &by)?;
        Ok(h)
    }

    /// `H^p[H, H]`.
    pub fn frattini(&self, g: &Group) -> Result<Self> {
        let p = g.p() as u64;
        let mut gens = Vec::new();
        for (i, s) in self.seq.iter().enumerate() {
            gens.push(g.pow(s, p)?);
            for t in &self.seq[..i] {
                gens.push(g.comm(s, t)?);
            }
        }
        let mut h = Self::closure(g, &gens)?;
        h.normalize_under(g, &self.seq)?;
        Ok(h)
    }

    /// Minimal number of generators, `log_p |H : H^p[H,H]|`.
    pub fn rank(&self, g: &Group) -> Result<u32> {
        Ok(self.order_log() - self.frattini(g)?.order_log())
    }

    /// Whether `[H, H] ≤ H^p` (`H^4` when p = 2).
    pub fn is_powerful(&self, g: &Group) -> Result<bool> {
        let q = (g.p() as u64).pow(crate::engine::sigma(g.p()));
        let pw = self.seq.iter().map(|s| g.pow(s, q)).collect::<Result<Vec<_>>>()?;
        let mut n = Self::closure(g, &pw)?;
        n.normalize_under(g, &self.seq)?;
        Self::commutator(g, self, self)?.is_subgroup_of(g, &n)
    }

    /// `H^{p^k}` from the p^k-th powers of the sequence; valid when `H` is
    /// powerful.
    pub fn power_fast(&self, g: &Group, k: u32) -> Result<Self> {
        let q = (g.p() as u64).pow(k);
        let pw = self.seq.iter().map(|s| g.pow(s, q)).collect::<Result<Vec<_>>>()?;
        Self::closure(g, &pw)
    }

    /// `H^{p^k}` by scanning coset representatives of a growing candidate.
    pub fn power_fallback(&self, g: &Group, k: u32) -> Result<Self> {
        let q = (g.p() as u64).pow(k);
        let pw = self.seq.iter().map(|s| g.pow(s, q)).collect::<Result<Vec<_>>>()?;
        let mut c = Self::closure(g, &pw)?;
        c.normalize_under(g, &self.seq)?;
        'outer: loop {
            let index = (g.p() as u64).pow(self.order_log() - c.order_log());
            if index > POWER_FALLBACK_LIMIT {
                return Err(Error::PowerSubgroup(format!("index {index} exceeds the coset scan limit")));
            }
            for h in c.transversal(g, self)? {
                let y = g.pow(&h, q)?;
                if !c.contains(g, &y)? {
                    c.extend(g, vec![y])?;
                    c.normalize_under(g, &self.seq)?;
                    continue 'outer;
                }
            }
            return Ok(c);
        }
    }

    /// `H^{p^k}`, through the fast path when `H` is powerful.
    pub fn power(&self, g: &Group, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.is_powerful(g)? {
            self.power_fast(g, k)
        } else {
            self.power_fallback(g, k)
        }
    }

    /// Canonical representative of the right coset `vC`: zero at every pivot.
    pub fn canonical_rep(&self, pc: &PcPres, v: &[u32]) -> Result<Elem> {
        let p = pc.p();
        let mut v = v.to_vec();
        for (i, pos) in self.lead.iter().enumerate() {
            if let Some(pos) = pos {
                if v[i] != 0 {
                    let f = pc.pow(&self.seq[*pos], (p - v[i]) as u64)?;
                    v = pc.mul(&v, &f)?;
                }
            }
        }
        Ok(v)
    }

    /// Canonical representatives of the cosets of `self` in `h ⊇ self`.
    pub fn transversal(&self, g: &Group, h: &Subgroup) -> Result<Vec<Elem>> {
        let pc = g.pc();
        let mut seen = std::collections::HashSet::new();
        let id = g.identity();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i].clone();
            for s in &h.seq {
                let nxt = self.canonical_rep(pc, &g.mul(&cur, s)?)?;
                if seen.insert(nxt.clone()) {
                    out.push(nxt);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// `Z(G)`, computed one power layer at a time: `A_{d+1}` is the kernel
    /// of `x ↦ ([x, b_j] mod G^{p^{d+1}})_j` on `A_d`.
    pub fn center(g: &Group) -> Result<Self> {
        if let Some(z) = g.center.get() {
            return Ok(z.clone());
        }
        let z = Self::centralizing(g, &Self::whole(g), g.gens())?;
        let _ = g.center.set(z.clone());
        Ok(z)
    }

    /// Elements of `a` commuting with every element of `by`. Requires `a`
    /// and the result to be normal in `G`, as for the center.
    fn centralizing(g: &Group, a: &Subgroup, by: &[Elem]) -> Result<Self> {
        let mut a = a.clone();
        for d in 0..g.exponent_log() as usize {
            let mut ech = Echelon::new(g.p());
            let mut indep: Vec<Elem> = Vec::new();
            let mut kern: Vec<Elem> = Vec::new();
            let p = g.p() as u64;
            for (i, s) in a.seq.iter().enumerate() {
                kern.push(g.pow(s, p)?);
                for t in &a.seq[..i] {
                    kern.push(g.comm(s, t)?);
                }
                let mut img = Vec::new();
                for b in by {
                    let c = g.comm(s, b)?;
                    if g.depth(&c).is_some_and(|t| (t as usize) < d) {
                        return Err(Error::Internal("commutator above the current layer".into()));
                    }
                    img.extend(g.layer_vec(&c, d));
                }
                match ech.solve(&img) {
                    Some(coef) => {
                        let mut y = g.identity();
                        for (e, &c) in indep.iter().zip(&coef) {
                            if c != 0 {
                                y = g.mul(&y, &g.pow(e, c)?)?;
                            }
                        }
                        kern.push(g.mul(s, &g.inv(&y)?)?);
                    }
                    None => {
                        ech.insert(&img);
                        indep.push(s.clone());
                    }
                }
            }
            let next = Self::normal_closure(g, &kern)?;
            if next.order_log() + ech.rank() as u32 != a.order_log() {
                return Err(Error::Internal("layer kernel has the wrong order".into()));
            }
            a = next;
        }
        Ok(a)
    }

    /// `G/N` with its projection.
    pub fn quotient(g: &Group, n: &Subgroup) -> Result<Quotient> {
        if !n.is_normal(g)? {
            return Err(Error::NotNormal);
        }
        let pc = g.pc();
        let keep: Vec<usize> = (0..g.n() as usize).filter(|&i| n.lead[i].is_none()).collect();
        let m = keep.len();
        let restrict = |v: &[u32]| -> Vec<u32> { keep.iter().map(|&i| v[i]).collect() };
        let weight = keep.iter().map(|&i| pc.weight()[i]).collect();
        let mut power = Vec::with_capacity(m);
        let mut conj = Vec::with_capacity(m);
        for (a, &i) in keep.iter().enumerate() {
            power.push(restrict(&n.canonical_rep(pc, pc.power_word(i))?));
            let mut row = Vec::with_capacity(a);
            for &j in &keep[..a] {
                row.push(restrict(&n.canonical_rep(pc, pc.conj_word(i, j))?));
            }
            conj.push(row);
        }
        let qpc = PcPres::new(g.p(), weight, power, conj)?;
        let group = Group::from_pc(qpc)?;
        Ok(Quotient { group, keep, kernel: n.clone() })
    }

    /// `[H, G] ≤ H^p` (`H^4` when p = 2).
    pub fn is_powerfully_embedded(&self, g: &Group) -> Result<bool> {
        let hp = self.power(g, crate::engine::sigma(g.p()))?;
        Self::commutator(g, self, &Self::whole(g))?.is_subgroup_of(g, &hp)
    }
}

/// A quotient group `G/N` and the data to move between `G` and `G/N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    keep: Vec<usize>,
    kernel: Subgroup,
}

impl Quotient {
    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Image in `G/N` (pc coordinates of the quotient).
    pub fn project(&self, g: &Group, v: &[u32]) -> Result<Elem> {
        let c = self.kernel.canonical_rep(g.pc(), v)?;
        Ok(self.keep.iter().map(|&i| c[i]).collect())
    }

    pub fn project_nf(&self, g: &Group, x: &ElementNF) -> Result<ElementNF> {
        let v = self.project(g, &g.nf_to_pc(x)?)?;
        self.group.to_nf(&v)
    }

    /// Canonical preimage of a quotient element.
    pub fn lift(&self, g: &Group, v: &[u32]) -> Elem {
        let mut out = g.identity();
        for (&i, &x) in self.keep.iter().zip(v) {
            out[i] = x;
        }
        out
    }

    /// Full preimage of a subgroup of `G/N`.
    pub fn preimage(&self, g: &Group, s: &Subgroup) -> Result<Subgroup> {
        let mut h = self.kernel.clone();
        let lifts: Vec<Elem> = s.gens().iter().map(|v| self.lift(g, v)).collect();
        h.extend(g, lifts)?;
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Word;

    fn f2() -> Group {
        Group::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n").unwrap()
    }

    fn m27() -> Group {
        Group::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^3\n").unwrap()
    }

    fn el(g: &Group, w: Word) -> Elem {
        g.word_to_pc(&w).unwrap()
    }

    #[test]
    fn closures_in_f2() {
        let g = f2();
        assert_eq!(Subgroup::closure(&g, &[]).unwrap().order_log(), 0);
        let x3 = el(&g, Word::letter(0, 3));
        assert_eq!(Subgroup::closure(&g, &[x3]).unwrap().order_log(), 2);
        let all = Subgroup::closure(&g, &[g.gen(0).clone(), g.gen(1).clone()]).unwrap();
        assert_eq!(all.order_log(), 4);
        let x9 = el(&g, Word::letter(0, 9));
        let n = Subgroup::normal_closure(&g, &[x9]).unwrap();
        assert_eq!(n.order_log(), 1);
    }

    #[test]
    fn derived_power_and_center() {
        let g = f2();
        let w = Subgroup::whole(&g);
        let d = Subgroup::commutator(&g, &w, &w).unwrap();
        assert_eq!(d.order_log(), 1);
        assert!(d.contains(&g, &el(&g, Word::letter(0, 9))).unwrap());
        let gp = w.power(&g, 1).unwrap();
        assert_eq!(gp.order_log(), 2);
        assert!(gp.same_as(&g, &w.power_fallback(&g, 1).unwrap()).unwrap());
        assert!(w.power(&g, 3).unwrap().is_trivial());
        let z = Subgroup::center(&g).unwrap();
        assert_eq!(z.order_log(), 2);
        assert!(z.contains(&g, &el(&g, Word::letter(0, 3))).unwrap());
        let zm = Subgroup::center(&m27()).unwrap();
        assert_eq!(zm.order_log(), 1);
    }

    #[test]
    fn quotient_of_f2() {
        let g = f2();
        let n = Subgroup::closure(&g, &[el(&g, Word::letter(0, 9))]).unwrap();
        let q = Subgroup::quotient(&g, &n).unwrap();
        assert_eq!(q.group.n(), 3);
        assert!(q.group.presentation().is_abelian_table());
        let mut e = q.group.exps().to_vec();
        e.sort();
        assert_eq!(e, vec![1, 2]);
        let whole = Subgroup::quotient(&g, &Subgroup::whole(&g)).unwrap();
        assert!(whole.group.is_trivial());
    }

    #[test]
    fn non_normal_rejected() {
        let g = m27();
        let a = Subgroup::closure(&g, &[g.gen(1).clone()]).unwrap();
        assert!(matches!(Subgroup::quotient(&g, &a), Err(Error::NotNormal)));
    }
}
