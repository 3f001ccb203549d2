//! Power-commutator presentations and their line-oriented file format.
//!
//! ```text
//! # F2: <x, a | x^27, a^3, [a,x] = x^9>
//! p 3
//! rank 2
//! orders 3 1
//! comm 2 1 1^9
//! ```
//!
//! `comm i j k1^m1 k2^m2 …` (with `i > j`) states
//! `[a_i, a_j] = a_{k1}^{m1} a_{k2}^{m2} ⋯`; omitted pairs commute.
//! Indices are 1-based in text and 0-based in the API.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible generator order.
const MAX_ORDER: u64 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Normal-form exponent vector `(l_1, …, l_r)` with `0 ≤ l_k < p^{e_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementNF(pub Vec<u64>);

impl ElementNF {
    pub fn identity(r: usize) -> Self {
        ElementNF(vec![0; r])
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }
}

impl fmt::Display for ElementNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Unreduced word: letters `(generator index, exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, i64)>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize, e: i64) -> Self {
        Word(vec![(g, e)])
    }

    pub fn then(mut self, g: usize, e: i64) -> Self {
        self.0.push((g, e));
        self
    }

    pub fn concat(mut self, other: &Word) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }
}

/// Which divisibility constraints the commutator table satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Not all commutator exponents divisible by p (4 when p = 2).
    General,
    Powerful,
    /// Powerful, and `p² | m_k(i,j)` whenever `k ≤ i`.
    PowerfullyNilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    p: u32,
    exps: Vec<u32>,
    /// `(i, j)` with `i > j` ↦ exponent vector of `[a_i, a_j]`.
    comm: BTreeMap<(usize, usize), Vec<u64>>,
}

impl Presentation {
    pub fn new(p: u32, exps: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        for (k, &e) in exps.iter().enumerate() {
            if e == 0 {
                return Err(Error::InvalidPresentation(format!("generator {} has order exponent 0", k + 1)));
            }
            if checked_pow(p as u64, e).map_or(true, |o| o > MAX_ORDER) {
                return Err(Error::InvalidPresentation(format!("order {p}^{e} of generator {} is too large", k + 1)));
            }
        }
        Ok(Presentation { p, exps, comm: BTreeMap::new() })
    }

    /// Abelian presentation with the given order exponents.
    pub fn abelian(p: u32, exps: &[u32]) -> Result<Self> {
        Self::new(p, exps.to_vec())
    }

    /// Sets `[a_i, a_j] = Π a_k^{m_k}` (0-based, `i > j`). Exponents may be
    /// negative; they are reduced modulo the generator orders.
    pub fn set_comm(&mut self, i: usize, j: usize, word: &[(usize, i64)]) -> Result<()> {
        let r = self.rank();
        if i >= r || j >= r {
            return Err(Error::InvalidPresentation(format!("commutator index out of range ({}, {})", i + 1, j + 1)));
        }
        if j >= i {
            return Err(Error::InvalidPresentation(format!("comm entry ({}, {}) needs i > j", i + 1, j + 1)));
        }
        let mut v = vec![0u64; r];
        for &(k, m) in word {
            if k >= r {
                return Err(Error::InvalidPresentation(format!("generator {} out of range", k + 1)));
            }
            let o = self.order(k) as i128;
            v[k] = ((v[k] as i128 + m as i128).rem_euclid(o)) as u64;
        }
        if v.iter().all(|&m| m == 0) {
            self.comm.remove(&(i, j));
        } else {
            self.comm.insert((i, j), v);
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// `p^{e_k}`.
    pub fn order(&self, k: usize) -> u64 {
        (self.p as u64).pow(self.exps[k])
    }

    /// `log_p` of `Π p^{e_k}`.
    pub fn log_order(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_abelian_table(&self) -> bool {
        self.comm.is_empty()
    }

    /// Exponent vector of `[a_i, a_j]` for `i > j`; zero when omitted.
    pub fn comm(&self, i: usize, j: usize) -> Vec<u64> {
        self.comm.get(&(i, j)).cloned().unwrap_or_else(|| vec![0; self.rank()])
    }

    pub fn comm_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<u64>)> {
        self.comm.iter()
    }

    pub fn shape(&self) -> Shape {
        let p = self.p as u64;
        let base = if p == 2 { 4 } else { p };
        let mut pn = true;
        for (&(i, _), v) in &self.comm {
            for (k, &m) in v.iter().enumerate() {
                if m % base != 0 {
                    return Shape::General;
                }
                if k <= i && m % (p * p) != 0 {
                    pn = false;
                }
            }
        }
        if pn {
            Shape::PowerfullyNilpotent
        } else {
            Shape::Powerful
        }
    }

    pub fn is_powerful_shape(&self) -> bool {
        self.shape() != Shape::General
    }

    pub fn is_pn_shape(&self) -> bool {
        self.shape() == Shape::PowerfullyNilpotent
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p: Option<u32> = None;
        let mut rank: Option<usize> = None;
        let mut pres: Option<Presentation> = None;
        let mut seen = std::collections::BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syn = |msg: String| Error::Syntax { line: line_no, msg };
            let mut toks = line.split_whitespace();
            let key = toks.next().unwrap_or_default();
            let rest: Vec<&str> = toks.collect();
            match key {
                "p" => {
                    if p.is_some() {
                        return Err(syn("duplicate 'p' line".into()));
                    }
                    let [v] = rest.as_slice() else {
                        return Err(syn("expected 'p <prime>'".into()));
                    };
                    let v: u64 = v.parse().map_err(|_| syn(format!("bad prime '{v}'")))?;
                    if !is_prime(v) {
                        return Err(Error::NotPrime(v));
                    }
                    p = Some(u32::try_from(v).map_err(|_| syn("prime too large".into()))?);
                }
                "rank" => {
                    if p.is_none() || rank.is_some() {
                        return Err(syn("'rank' must follow 'p' exactly once".into()));
                    }
                    let [v] = rest.as_slice() else {
                        return Err(syn("expected 'rank <r>'".into()));
                    };
                    rank = Some(v.parse().map_err(|_| syn(format!("bad rank '{v}'")))?);
                }
                "orders" => {
                    let (Some(pv), Some(r)) = (p, rank) else {
                        return Err(syn("'orders' must follow 'p' and 'rank'".into()));
                    };
                    if pres.is_some() {
                        return Err(syn("duplicate 'orders' line".into()));
                    }
                    if rest.len() != r {
                        return Err(syn(format!("expected {r} order exponents, found {}", rest.len())));
                    }
                    let exps = rest
                        .iter()
                        .map(|t| t.parse::<u32>().map_err(|_| syn(format!("bad order exponent '{t}'"))))
                        .collect::<Result<Vec<_>>>()?;
                    pres = Some(Presentation::new(pv, exps).map_err(|e| syn(e.to_string()))?);
                }
                "comm" => {
                    let Some(pr) = pres.as_mut() else {
                        return Err(syn("'comm' before 'orders'".into()));
                    };
                    if rest.len() < 2 {
                        return Err(syn("expected 'comm <i> <j> <k>^<m> …'".into()));
                    }
                    let i: usize = rest[0].parse().map_err(|_| syn(format!("bad index '{}'", rest[0])))?;
                    let j: usize = rest[1].parse().map_err(|_| syn(format!("bad index '{}'", rest[1])))?;
                    let r = pr.rank();
                    if i == 0 || j == 0 || i > r || j > r {
                        return Err(syn(format!("comm indices must lie in 1..{r}")));
                    }
                    if j >= i {
                        return Err(syn(format!("comm entry ({i}, {j}) needs i > j")));
                    }
                    if !seen.insert((i, j)) {
                        return Err(syn(format!("duplicate comm entry ({i}, {j})")));
                    }
                    let mut word = Vec::new();
                    for t in &rest[2..] {
                        let (k, m) = t.split_once('^').ok_or_else(|| syn(format!("bad factor '{t}'")))?;
                        let k: usize = k.parse().map_err(|_| syn(format!("bad generator '{k}'")))?;
                        let m: i64 = m.parse().map_err(|_| syn(format!("bad exponent '{m}'")))?;
                        if k == 0 || k > r {
                            return Err(syn(format!("generator {k} out of range 1..{r}")));
                        }
                        if m < 0 || m as u64 >= pr.order(k - 1) {
                            return Err(syn(format!("exponent {m} of generator {k} out of range 0..{}", pr.order(k - 1))));
                        }
                        word.push((k - 1, m));
                    }
                    pr.set_comm(i - 1, j - 1, &word).map_err(|e| syn(e.to_string()))?;
                }
                "fingerprint" => {}
                other => return Err(syn(format!("unknown directive '{other}'"))),
            }
        }
        match pres {
            Some(pr) => Ok(pr),
            None if rank == Some(0) => Presentation::new(p.unwrap_or(2), vec![]),
            None => Err(Error::Syntax { line: text.lines().count().max(1), msg: "missing 'orders' line".into() }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p {}\nrank {}\n", self.p, self.rank());
        let orders: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!("orders {}\n", orders.join(" ")).replace("orders \n", "orders\n"));
        for (&(i, j), v) in &self.comm {
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(k, m)| format!("{}^{}", k + 1, m))
                .collect();
            s.push_str(&format!("comm {} {} {}\n", i + 1, j + 1, parts.join(" ")));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn checked_pow(base: u64, e: u32) -> Option<u64> {
    base.checked_pow(e)
}
