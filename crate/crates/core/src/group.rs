//! Validated groups: a refined pc presentation together with a power basis
//! `b_1, …, b_r` whose products `b_1^{l_1} ⋯ b_r^{l_r}` give normal forms.
//!
//! Throughout, the weight of a pc generator equals its depth in the power
//! filtration, so `G^{p^d}` is the tail of pc generators of weight `≥ d`.
//! This holds for every powerful group the crate constructs.

use std::sync::OnceLock;

use crate::engine::{build_pc, Layout};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::pc::{Elem, PcPres};
use crate::presentation::{ElementNF, Presentation, Word};
use crate::subgroup::Subgroup;

#[derive(Clone, Debug)]
pub struct Group {
    pc: PcPres,
    pres: Presentation,
    basis: Vec<Elem>,
    /// pc indices of each weight.
    layers: Vec<Vec<usize>>,
    /// `peel[d]` spans layer `d` by the vectors of `b_k^{p^d}`, `k ∈ keys[d]`.
    peel: Vec<Echelon>,
    keys: Vec<Vec<usize>>,
    pub(crate) center: OnceLock<Subgroup>,
    pub(crate) upper: OnceLock<Vec<Subgroup>>,
}

impl Group {
    /// Validates `pres` and builds the group. Inconsistent presentations
    /// give [`Error::Inconsistent`].
    pub fn from_presentation(pres: &Presentation) -> Result<Self> {
        match build_pc(pres)? {
            Ok((pc, lay)) => {
                let basis = (0..pres.rank()).map(|k| pc.gen(lay.index[k][0])).collect();
                Self::assemble(pc, pres.clone(), basis)
            }
            Err(why) => Err(Error::Inconsistent(why)),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_presentation(&Presentation::parse(text)?)
    }

    /// Builds a group from a refined pc presentation of a powerful group,
    /// choosing a power basis and reading off its presentation.
    pub fn from_pc(pc: PcPres) -> Result<Self> {
        let (basis, exps) = power_basis(&pc)?;
        let mut pres = Presentation::new(pc.p(), exps)?;
        let mut g = Self::assemble(pc, pres.clone(), basis)?;
        for i in 0..g.rank() {
            for j in 0..i {
                let c = g.pc.comm(&g.basis[i], &g.basis[j])?;
                let nf = g.to_nf(&c)?;
                let word: Vec<(usize, i64)> = nf.0.iter().enumerate().map(|(k, &m)| (k, m as i64)).collect();
                pres.set_comm(i, j, &word)?;
            }
        }
        g.pres = pres;
        Ok(g)
    }

    fn assemble(pc: PcPres, pres: Presentation, basis: Vec<Elem>) -> Result<Self> {
        let top = pc.weight().iter().copied().max().map_or(0, |w| w as usize + 1);
        let mut layers = vec![Vec::new(); top];
        for (i, &w) in pc.weight().iter().enumerate() {
            layers[w as usize].push(i);
        }
        let p = pc.p() as u64;
        let exps = pres.exps().to_vec();
        let mut peel = Vec::with_capacity(top);
        let mut keys = Vec::with_capacity(top);
        for d in 0..top {
            let mut ech = Echelon::new(pc.p());
            let mut ks = Vec::new();
            for (k, b) in basis.iter().enumerate() {
                if exps[k] as usize > d {
                    let y = pc.pow(b, p.pow(d as u32))?;
                    ech.insert(&layer_vec(&layers, &y, d));
                    ks.push(k);
                }
            }
            if ech.rank() != layers[d].len() {
                return Err(Error::Internal(format!("basis does not span power layer {d}")));
            }
            peel.push(ech);
            keys.push(ks);
        }
        Ok(Group { pc, pres, basis, layers, peel, keys, center: OnceLock::new(), upper: OnceLock::new() })
    }

    pub fn p(&self) -> u32 {
        self.pc.p()
    }

    /// `log_p |G|`.
    pub fn n(&self) -> u32 {
        self.pc.len() as u32
    }

    /// Size of a minimal generating set, i.e. `log_p |G : G^p|` here.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `log_p` of the exponent.
    pub fn exponent_log(&self) -> u32 {
        self.layers.len() as u32
    }

    pub fn exps(&self) -> &[u32] {
        self.pres.exps()
    }

    pub fn pc(&self) -> &PcPres {
        &self.pc
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn is_trivial(&self) -> bool {
        self.pc.is_empty()
    }

    pub fn layer(&self, d: usize) -> &[usize] {
        self.layers.get(d).map_or(&[], |v| v.as_slice())
    }

    /// Power-basis generator `b_k` in pc coordinates.
    pub fn gen(&self, k: usize) -> &Elem {
        &self.basis[k]
    }

    pub fn gens(&self) -> &[Elem] {
        &self.basis
    }

    pub fn identity(&self) -> Elem {
        self.pc.identity()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        self.pc.mul(a, b)
    }

    pub fn inv(&self, a: &[u32]) -> Result<Elem> {
        self.pc.inverse(a)
    }

    pub fn pow(&self, a: &[u32], k: u64) -> Result<Elem> {
        self.pc.pow(a, k)
    }

    pub fn pow_i(&self, a: &[u32], k: i64) -> Result<Elem> {
        self.pc.pow_i(a, k)
    }

    pub fn comm(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        self.pc.comm(a, b)
    }

    pub fn conjugate(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        self.pc.conjugate(a, b)
    }

    /// `log_p` of the element order.
    pub fn order_log(&self, a: &[u32]) -> Result<u32> {
        self.pc.order_log(a)
    }

    /// Depth of `a` in the power filtration (`None` for the identity).
    pub fn depth(&self, a: &[u32]) -> Option<u32> {
        a.iter().position(|&x| x != 0).map(|i| self.pc.weight()[i])
    }

    pub fn nf_to_pc(&self, nf: &ElementNF) -> Result<Elem> {
        if nf.0.len() != self.rank() {
            return Err(Error::Domain(format!("normal form of length {} for rank {}", nf.0.len(), self.rank())));
        }
        let mut acc = self.identity();
        for (k, &l) in nf.0.iter().enumerate() {
            if l >= self.pres.order(k) {
                return Err(Error::Domain(format!("exponent {l} out of range for generator {}", k + 1)));
            }
            if l != 0 {
                let g = self.pc.pow(&self.basis[k], l)?;
                acc = self.pc.mul(&acc, &g)?;
            }
        }
        Ok(acc)
    }

    /// Normal form of a pc element, found digit by digit down the power
    /// filtration.
    pub fn to_nf(&self, v: &[u32]) -> Result<ElementNF> {
        let p = self.p() as u64;
        let mut l = vec![0u64; self.rank()];
        for d in 0..self.layers.len() {
            let cur = self.nf_to_pc(&ElementNF(l.clone()))?;
            let u = self.pc.mul(&self.pc.inverse(&cur)?, v)?;
            match self.depth(&u) {
                None => break,
                Some(t) if (t as usize) < d => return Err(Error::Internal("peeling left the power filtration".into())),
                Some(t) if t as usize > d => continue,
                Some(_) => {}
            }
            let c = self.peel[d]
                .solve(&layer_vec(&self.layers, &u, d))
                .ok_or_else(|| Error::Internal(format!("layer {d} coordinates not in span")))?;
            for (&k, &ck) in self.keys[d].iter().zip(&c) {
                l[k] += ck * p.pow(d as u32);
            }
        }
        let nf = ElementNF(l);
        if self.nf_to_pc(&nf)? != v {
            return Err(Error::Internal("normal form does not reproduce the element".into()));
        }
        Ok(nf)
    }

    pub fn word_to_pc(&self, w: &Word) -> Result<Elem> {
        let mut acc = self.identity();
        for &(k, e) in &w.0 {
            if k >= self.rank() {
                return Err(Error::Domain(format!("generator {} out of range", k + 1)));
            }
            let g = self.pc.pow_i(&self.basis[k], e)?;
            acc = self.pc.mul(&acc, &g)?;
        }
        Ok(acc)
    }

    pub fn collect(&self, w: &Word) -> Result<ElementNF> {
        self.to_nf(&self.word_to_pc(w)?)
    }

    pub fn multiply(&self, a: &ElementNF, b: &ElementNF) -> Result<ElementNF> {
        let x = self.mul(&self.nf_to_pc(a)?, &self.nf_to_pc(b)?)?;
        self.to_nf(&x)
    }

    /// Coordinates of `a ∈ G^{p^d}` in the layer `G^{p^d}/G^{p^{d+1}}`.
    pub fn layer_vec(&self, a: &[u32], d: usize) -> Vec<u64> {
        layer_vec(&self.layers, a, d)
    }

    /// Every element, in pc coordinates. Only sensible for small groups.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let n = self.pc.len();
        let p = self.p();
        let total = (p as u64).pow(n as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u32; n];
            for x in v.iter_mut().rev() {
                *x = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            v
        })
    }

    /// Layout of the pc generators when built from a presentation.
    pub fn layout_of(pres: &Presentation) -> Layout {
        Layout::new(pres.exps())
    }
}

fn layer_vec(layers: &[Vec<usize>], a: &[u32], d: usize) -> Vec<u64> {
    layers.get(d).map_or(Vec::new(), |l| l.iter().map(|&i| a[i] as u64).collect())
}

/// Chooses `b_1, …, b_r` with `Π |b_k| = |G|` such that, for each `d`, the
/// elements `b_k^{p^d}` with `|b_k| > p^d` form a basis of
/// `G^{p^d}/G^{p^{d+1}}`. Returned in order of non-decreasing order.
fn power_basis(pc: &PcPres) -> Result<(Vec<Elem>, Vec<u32>)> {
    let n = pc.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let p = pc.p() as u64;
    let top = *pc.weight().iter().max().unwrap() as usize;
    let mut layers = vec![Vec::new(); top + 1];
    for (i, &w) in pc.weight().iter().enumerate() {
        layers[w as usize].push(i);
    }
    let depth = |a: &[u32]| a.iter().position(|&x| x != 0).map(|i| pc.weight()[i] as usize);
    let cands: Vec<usize> = layers[0].clone();
    let mut chosen: Vec<(Elem, u32)> = Vec::new();
    for d in (0..=top).rev() {
        let above = layers.get(d + 1).map_or(0, |l| l.len());
        let mut need = layers[d].len().saturating_sub(above);
        let mut ech = Echelon::new(pc.p());
        for (b, _) in &chosen {
            let y = pc.pow(b, p.pow(d as u32))?;
            ech.insert(&layer_vec(&layers, &y, d));
        }
        for &c in &cands {
            if need == 0 {
                break;
            }
            let x = pc.gen(c);
            let y = pc.pow(&x, p.pow(d as u32))?;
            if depth(&y).is_some_and(|t| t < d) {
                return Err(Error::Internal("pc weights do not follow the power filtration".into()));
            }
            if ech.insert(&layer_vec(&layers, &y, d)) {
                let x = kill_power(pc, &layers, &chosen, x, d as u32 + 1)?;
                chosen.push((x, d as u32 + 1));
                need -= 1;
            }
        }
        if need > 0 {
            return Err(Error::Internal("group is not powerful: power layers do not lift".into()));
        }
    }
    chosen.reverse();
    let total: u32 = chosen.iter().map(|(_, e)| e).sum();
    if total as usize != n {
        return Err(Error::Internal("power basis orders do not multiply to |G|".into()));
    }
    Ok(chosen.into_iter().unzip())
}

/// Multiplies `x` by a correction from `⟨chosen⟩` so that `x^{p^e} = 1`,
/// without changing its image in the layers above depth `e`.
fn kill_power(pc: &PcPres, layers: &[Vec<usize>], chosen: &[(Elem, u32)], mut x: Elem, e: u32) -> Result<Elem> {
    let p = pc.p() as u64;
    let mut last = None;
    loop {
        let w = pc.pow(&x, p.pow(e))?;
        let Some(t) = w.iter().position(|&c| c != 0).map(|i| pc.weight()[i]) else {
            return Ok(x);
        };
        if t < e || last.is_some_and(|l| t <= l) {
            return Err(Error::Internal("power correction does not converge".into()));
        }
        last = Some(t);
        let mut ech = Echelon::new(pc.p());
        let mut ks = Vec::new();
        for (j, (b, eb)) in chosen.iter().enumerate() {
            if *eb > t {
                let y = pc.pow(b, p.pow(t))?;
                ech.insert(&layer_vec(layers, &y, t as usize));
                ks.push(j);
            }
        }
        let c = ech
            .solve(&layer_vec(layers, &w, t as usize))
            .ok_or_else(|| Error::Internal("power layer not spanned by chosen generators".into()))?;
        let mut y = pc.identity();
        for (&j, &cj) in ks.iter().zip(&c) {
            if cj != 0 {
                let f = pc.pow(&chosen[j].0, cj * p.pow(t - e))?;
                y = pc.mul(&y, &f)?;
            }
        }
        x = pc.mul(&x, &pc.inverse(&y)?)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Group {
        Group::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n").unwrap()
    }

    #[test]
    fn f2_normal_forms() {
        let g = f2();
        assert_eq!(g.n(), 4);
        let ax = g.collect(&Word::letter(1, 1).then(0, 1)).unwrap();
        assert_eq!(ax, ElementNF(vec![10, 1]));
        let x30 = g.collect(&Word::letter(0, 20).then(0, 10)).unwrap();
        assert_eq!(x30, ElementNF(vec![3, 0]));
        assert!(g.collect(&Word::new()).unwrap().is_identity());
    }

    #[test]
    fn nf_roundtrip_over_all_elements() {
        let g = f2();
        let mut seen = std::collections::HashSet::new();
        for v in g.elements() {
            let nf = g.to_nf(&v).unwrap();
            assert_eq!(g.nf_to_pc(&nf).unwrap(), v);
            assert!(seen.insert(nf));
        }
        assert_eq!(seen.len(), 81);
    }

    #[test]
    fn rebuilt_from_pc_matches_order() {
        let g = f2();
        let h = Group::from_pc(g.pc().clone()).unwrap();
        assert_eq!(h.n(), 4);
        let mut e = h.exps().to_vec();
        e.sort();
        assert_eq!(e, vec![1, 3]);
        let again = Group::from_presentation(h.presentation()).unwrap();
        assert_eq!(again.n(), 4);
    }
}
