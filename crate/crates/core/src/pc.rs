//! Refined power-commutator presentations with relative orders p.
//!
//! Generators `g_0, …, g_{N-1}` satisfy `g_i^p = power[i]` and
//! `g_i^{g_j} = conj[i][j]` for `j < i`, where both right-hand sides are
//! normal forms supported on generators with index `> i` (apart from the
//! leading `g_i` of a conjugate). Every tail `⟨g_i, …⟩` is normal and each
//! factor `⟨g_i, …⟩ / ⟨g_{i+1}, …⟩` is central, so the tails form a central
//! series with factors of order p.

use std::cell::Cell;

use crate::error::{Error, Result};

/// Exponent vector over the pc generators; every entry lies in `0..p`.
pub type Elem = Vec<u32>;

/// Upper bound on elementary collection steps per top-level product.
pub const COLLECT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPres {
    p: u32,
    /// Filtration weight of each generator (p-adic depth for groups built
    /// from power-commutator presentations). Non-decreasing.
    weight: Vec<u32>,
    power: Vec<Elem>,
    /// `conj[i][j]` for `j < i`.
    conj: Vec<Vec<Elem>>,
    /// `commutes[x][y]`: `g_y` commutes with `g_x`, for `y > x`.
    commutes: Vec<Vec<bool>>,
}

thread_local! {
    static STEPS: Cell<u64> = const { Cell::new(0) };
}

struct BudgetGuard {
    outer: bool,
}

impl BudgetGuard {
    fn enter() -> Self {
        let outer = STEPS.with(|s| {
            if s.get() == 0 {
                s.set(1);
                true
            } else {
                false
            }
        });
        BudgetGuard { outer }
    }
}

impl Drop for BudgetGuard {
    fn drop(&mut self) {
        if self.outer {
            STEPS.with(|s| s.set(0));
        }
    }
}

fn tick() -> Result<()> {
    STEPS.with(|s| {
        let v = s.get() + 1;
        s.set(v);
        if v > COLLECT_BUDGET {
            Err(Error::CollectionBudget(COLLECT_BUDGET))
        } else {
            Ok(())
        }
    })
}

impl PcPres {
    /// Assembles a presentation from its tables. `power[i]` and the
    /// non-leading part of `conj[i][j]` must be supported on indices `> i`.
    pub fn new(p: u32, weight: Vec<u32>, power: Vec<Elem>, conj: Vec<Vec<Elem>>) -> Result<Self> {
        let n = weight.len();
        if power.len() != n || conj.len() != n {
            return Err(Error::Internal("pc table sizes disagree".into()));
        }
        for i in 0..n {
            if power[i].len() != n || power[i][..=i].iter().any(|&e| e != 0) {
                return Err(Error::Internal(format!("power relation of g{i} is not a tail word")));
            }
            if conj[i].len() != i {
                return Err(Error::Internal(format!("conjugate row {i} has wrong length")));
            }
            for (j, c) in conj[i].iter().enumerate() {
                let ok = c.len() == n && c[..i].iter().all(|&e| e == 0) && c[i] == 1;
                if !ok {
                    return Err(Error::Internal(format!("conjugate g{i}^g{j} is not g{i}·tail")));
                }
            }
        }
        let commutes = (0..n)
            .map(|x| (0..n).map(|y| y > x && conj[y][x] == unit(n, y)).collect())
            .collect();
        Ok(PcPres { p, weight, power, conj, commutes })
    }

    /// The elementary abelian group of order p^n.
    pub fn elementary_abelian(p: u32, n: usize) -> Self {
        let power = vec![vec![0; n]; n];
        let conj = (0..n)
            .map(|i| (0..i).map(|_| unit(n, i)).collect())
            .collect();
        Self::new(p, vec![0; n], power, conj).expect("elementary abelian tables are valid")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of pc generators, i.e. log_p of the group order.
    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    pub fn weight(&self) -> &[u32] {
        &self.weight
    }

    pub fn power_word(&self, i: usize) -> &Elem {
        &self.power[i]
    }

    /// `g_i^{g_j}` for `j < i`.
    pub fn conj_word(&self, i: usize, j: usize) -> &Elem {
        &self.conj[i][j]
    }

    pub fn identity(&self) -> Elem {
        vec![0; self.len()]
    }

    pub fn gen(&self, i: usize) -> Elem {
        unit(self.len(), i)
    }

    pub fn is_identity(v: &[u32]) -> bool {
        v.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        let _g = BudgetGuard::enter();
        let mut res = a.to_vec();
        self.mul_into(&mut res, b)?;
        Ok(res)
    }

    fn mul_into(&self, res: &mut Elem, b: &[u32]) -> Result<()> {
        for (x, &e) in b.iter().enumerate() {
            if e != 0 {
                self.mul_gen(res, x, e)?;
            }
        }
        Ok(())
    }

    /// `res <- res · g_x^e` with `0 < e < p`.
    fn mul_gen(&self, res: &mut Elem, x: usize, e: u32) -> Result<()> {
        tick()?;
        let n = self.len();
        let s = res[x] + e;
        if s < self.p && res[x + 1..].iter().enumerate().all(|(k, &v)| v == 0 || self.commutes[x][x + 1 + k]) {
            res[x] = s;
            return Ok(());
        }
        let tail_nonzero = res[x + 1..].iter().any(|&v| v != 0);
        let tail: Option<Elem> = if tail_nonzero {
            let mut t = vec![0; n];
            t[x + 1..].copy_from_slice(&res[x + 1..]);
            res[x + 1..].iter_mut().for_each(|v| *v = 0);
            Some(t)
        } else {
            None
        };
        if s >= self.p {
            res[x] = s - self.p;
            if !Self::is_identity(&self.power[x]) {
                self.mul_into(res, &self.power[x])?;
            }
        } else {
            res[x] = s;
        }
        if let Some(t) = tail {
            let moved = self.conj_tail_by_gen(&t, x, e)?;
            self.mul_into(res, &moved)?;
        }
        Ok(())
    }

    /// `(g_x^e)^{-1} · t · g_x^e` for `t` supported strictly after `x`.
    fn conj_tail_by_gen(&self, t: &[u32], x: usize, e: u32) -> Result<Elem> {
        let mut cur = t.to_vec();
        for _ in 0..e {
            let mut next = self.identity();
            for y in x + 1..self.len() {
                for _ in 0..cur[y] {
                    self.mul_into(&mut next, &self.conj[y][x])?;
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn inverse(&self, a: &[u32]) -> Result<Elem> {
        let _g = BudgetGuard::enter();
        let mut cur = a.to_vec();
        let mut inv = self.identity();
        for x in 0..self.len() {
            if cur[x] != 0 {
                let k = self.p - cur[x];
                self.mul_gen(&mut cur, x, k)?;
                self.mul_gen(&mut inv, x, k)?;
            }
        }
        debug_assert!(Self::is_identity(&cur));
        Ok(inv)
    }

    pub fn pow(&self, a: &[u32], mut k: u64) -> Result<Elem> {
        let _g = BudgetGuard::enter();
        let mut base = a.to_vec();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                self.mul_into(&mut acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                let b2 = base.clone();
                self.mul_into(&mut base, &b2)?;
            }
        }
        Ok(acc)
    }

    /// Signed integer power.
    pub fn pow_i(&self, a: &[u32], k: i64) -> Result<Elem> {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            let inv = self.inverse(a)?;
            self.pow(&inv, k.unsigned_abs())
        }
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn comm(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        let _g = BudgetGuard::enter();
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        let inv = self.inverse(&ba)?;
        self.mul(&inv, &ab)
    }

    /// `b^{-1} a b`.
    pub fn conjugate(&self, a: &[u32], b: &[u32]) -> Result<Elem> {
        let _g = BudgetGuard::enter();
        let binv = self.inverse(b)?;
        let t = self.mul(&binv, a)?;
        self.mul(&t, b)
    }

    /// Order of an element as a power of p: returns `k` with `|a| = p^k`.
    pub fn order_log(&self, a: &[u32]) -> Result<u32> {
        let mut cur = a.to_vec();
        let mut k = 0;
        while !Self::is_identity(&cur) {
            cur = self.pow(&cur, self.p as u64)?;
            k += 1;
        }
        Ok(k)
    }

    /// Runs the standard overlap tests. Returns the first failing overlap.
    pub fn check_overlaps(&self) -> Result<Option<String>> {
        let n = self.len();
        let p = self.p as u64;
        for i in 0..n {
            let gi = self.gen(i);
            let gip = self.pow(&gi, p)?;
            let a = self.mul(&gip, &gi)?;
            let b = self.mul(&gi, &gip)?;
            if a != b {
                return Ok(Some(format!("g{}^{} g{}", i + 1, p + 1, i + 1)));
            }
        }
        for j in 0..n {
            for i in 0..j {
                let gi = self.gen(i);
                let gj = self.gen(j);
                // (g_j^{p-1} g_j) g_i = g_j^{p-1} (g_j g_i)
                let gjp = self.pow(&gj, p)?;
                let left = self.mul(&gjp, &gi)?;
                let gjq = self.pow(&gj, p - 1)?;
                let gjgi = self.mul(&gj, &gi)?;
                let right = self.mul(&gjq, &gjgi)?;
                if left != right {
                    return Ok(Some(format!("g{}^{} g{}", j + 1, p, i + 1)));
                }
                // g_j (g_i^p) = (g_j g_i) g_i^{p-1}
                let gip = self.pow(&gi, p)?;
                let left = self.mul(&gj, &gip)?;
                let giq = self.pow(&gi, p - 1)?;
                let right = self.mul(&gjgi, &giq)?;
                if left != right {
                    return Ok(Some(format!("g{} g{}^{}", j + 1, i + 1, p)));
                }
            }
        }
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let (gi, gj, gk) = (self.gen(i), self.gen(j), self.gen(k));
                    let kj = self.mul(&gk, &gj)?;
                    let left = self.mul(&kj, &gi)?;
                    let ji = self.mul(&gj, &gi)?;
                    let right = self.mul(&gk, &ji)?;
                    if left != right {
                        return Ok(Some(format!("g{} g{} g{}", k + 1, j + 1, i + 1)));
                    }
                }
            }
        }
        Ok(None)
    }
}

pub fn unit(n: usize, i: usize) -> Elem {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C_9 as a pc group: g1^3 = g2.
    fn c9() -> PcPres {
        PcPres::new(3, vec![0, 1], vec![vec![0, 1], vec![0, 0]], vec![vec![], vec![vec![0, 1]]]).unwrap()
    }

    /// Non-abelian group of order 27 and exponent 3: [g2,g1] = g3.
    fn heis() -> PcPres {
        let power = vec![vec![0; 3]; 3];
        let conj = vec![vec![], vec![vec![0, 1, 1]], vec![vec![0, 0, 1], vec![0, 0, 1]]];
        PcPres::new(3, vec![0, 0, 1], power, conj).unwrap()
    }

    #[test]
    fn cyclic_arithmetic() {
        let g = c9();
        let x = g.gen(0);
        assert_eq!(g.pow(&x, 3).unwrap(), vec![0, 1]);
        assert_eq!(g.pow(&x, 9).unwrap(), vec![0, 0]);
        assert_eq!(g.order_log(&x).unwrap(), 2);
        let inv = g.inverse(&x).unwrap();
        assert_eq!(g.mul(&x, &inv).unwrap(), vec![0, 0]);
    }

    #[test]
    fn heisenberg_commutator() {
        let g = heis();
        let c = g.comm(&g.gen(1), &g.gen(0)).unwrap();
        assert_eq!(c, vec![0, 0, 1]);
        assert_eq!(g.check_overlaps().unwrap(), None);
    }

    #[test]
    fn inconsistent_tables_detected() {
        // g1^3 = g2 with g2 central of order 3, but g2^{g1} = g2 g3 breaks the overlap g1^3 g1.
        let power = vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]];
        let conj = vec![vec![], vec![vec![0, 1, 1]], vec![vec![0, 0, 1], vec![0, 0, 1]]];
        let g = PcPres::new(3, vec![0, 1, 2], power, conj).unwrap();
        assert!(g.check_overlaps().unwrap().is_some());
    }

    #[test]
    fn rejects_non_tail_relations() {
        assert!(PcPres::new(3, vec![0, 0], vec![vec![1, 0], vec![0, 0]], vec![vec![], vec![vec![0, 1]]]).is_err());
    }
}
