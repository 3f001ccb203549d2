//! Powerfully nilpotent presentations of exponent `p²`: counts, the
//! maximizing parameter, the stabilizer action and orbit counting.
//!
//! `P(n, x)` holds presentations on `y = n - 2x` generators of order `p`
//! followed by `x` generators of order `p²`, with
//! `[a_i, a_j] = a_{i+1}^{pα_{i+1}} ⋯ a_{y+x}^{pα_{y+x}}`. Only targets of order
//! `p²` matter, so a pair `(i, j)` with `i ≤ y` has `x` free coefficients
//! and one with `i > y` has `x + y - i`.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{inv_mod, Echelon};
use crate::presentation::{is_prime, Presentation};

fn check_nx(n: u64, x: u64) -> Result<()> {
    if 2 * x > n {
        return Err(Error::Domain(format!("need 0 ≤ 2x ≤ n, got n = {n}, x = {x}")));
    }
    Ok(())
}

/// `C(y,2)·x + y(x-1) + (y+1)(x-2) + ⋯ + (y+x-2)·1`.
pub fn h_sum(n: u64, x: u64) -> Result<i128> {
    check_nx(n, x)?;
    let (n, x) = (n as i128, x as i128);
    let y = n - 2 * x;
    let mut h = y * (y - 1) / 2 * x;
    for i in y + 1..=y + x {
        h += (i - 1) * (x + y - i);
    }
    Ok(h)
}

/// `x(7x² - 9(n-1)x + 3n² - 6n + 2) / 6`.
pub fn h_closed(n: u64, x: u64) -> Result<i128> {
    check_nx(n, x)?;
    let (n, x) = (n as i128, x as i128);
    let num = x * (7 * x * x - 9 * (n - 1) * x + 3 * n * n - 6 * n + 2);
    if num % 6 != 0 {
        return Err(Error::Internal(format!("closed form of h is not integral at n = {n}, x = {x}")));
    }
    Ok(num / 6)
}

/// `h(x)` for order `p^n`: `|P(n, x)| = p^{h(x)}`. Both forms are evaluated
/// and must agree.
pub fn h_value(n: u64, x: u64) -> Result<i128> {
    let a = h_sum(n, x)?;
    let b = h_closed(n, x)?;
    if a != b {
        return Err(Error::Internal(format!("h({n}, {x}): sum form {a}, closed form {b}")));
    }
    Ok(a)
}

/// `α = (9 + 4√2)/294`, the limit of `h(x(n))/n³`.
pub fn alpha() -> f64 {
    (9.0 + 4.0 * 2f64.sqrt()) / 294.0
}

/// The value with 394 in the denominator, kept for comparison.
pub fn alpha_394() -> f64 {
    (9.0 + 4.0 * 2f64.sqrt()) / 394.0
}

/// `(3 - √2)/7`, the limit of `x(n)/n`.
pub fn limit_ratio() -> f64 {
    (3.0 - 2f64.sqrt()) / 7.0
}

/// Smaller root of `h'`: `3(n-1)/7 - √(2(n-1)²/49 + 1/21)`.
pub fn x_max(n: u64) -> f64 {
    let m = n as f64 - 1.0;
    3.0 * m / 7.0 - (2.0 * m * m / 49.0 + 1.0 / 21.0).sqrt()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub n: u64,
    /// `h(x)` for `x = 0..=⌊n/2⌋`.
    pub table: Vec<i128>,
    /// Smallest maximizer of `h`.
    pub x_n: u64,
    pub x_max: f64,
    pub h_max: i128,
    /// `h(x(n))/n³` in lowest terms.
    pub ratio: (i128, i128),
    pub normalized: f64,
    pub x_ratio: f64,
}

pub fn growth_report(n: u64) -> Result<GrowthReport> {
    if n < 2 {
        return Err(Error::Domain("growth reports need n ≥ 2".into()));
    }
    let table: Vec<i128> = (0..=n / 2).map(|x| h_closed(n, x)).collect::<Result<_>>()?;
    let (mut x_n, mut h_max) = (0u64, table[0]);
    for (x, &h) in table.iter().enumerate() {
        if h > h_max {
            x_n = x as u64;
            h_max = h;
        }
    }
    for x in x_n.saturating_sub(1)..=(x_n + 1).min(n / 2) {
        h_value(n, x)?;
    }
    let den = (n as i128).pow(3);
    let g = gcd(h_max, den).max(1);
    Ok(GrowthReport {
        n,
        table,
        x_n,
        x_max: x_max(n),
        h_max,
        ratio: (h_max / g, den / g),
        normalized: h_max as f64 / den as f64,
        x_ratio: x_n as f64 / n as f64,
    })
}

impl GrowthReport {
    pub fn porcelain(&self) -> String {
        format!(
            "n={} x_n={} h={} ratio={}/{} normalized={:.9} x_ratio={:.9} x_max={:.6} alpha={:.9} limit_ratio={:.9}",
            self.n,
            self.x_n,
            self.h_max,
            self.ratio.0,
            self.ratio.1,
            self.normalized,
            self.x_ratio,
            self.x_max,
            alpha(),
            limit_ratio()
        )
    }
}

/// `"P <n> <x> <p> = p^<h>"`.
pub fn count_line(p: u32, n: u64, x: u64) -> Result<String> {
    Ok(format!("P {n} {x} {p} = {p}^{}", h_value(n, x)?))
}

/// Largest stream the enumerator accepts, in bits: `h·log2 p ≤ 25`.
pub const STREAM_BITS: f64 = 25.0;

fn check_stream(p: u32, n: u64, x: u64) -> Result<i128> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::Domain(format!("exponent-p² enumeration needs an odd prime, got {p}")));
    }
    let h = h_value(n, x)?;
    if h as f64 * (p as f64).log2() > STREAM_BITS {
        return Err(Error::Infeasible(format!("{p}^{h} presentations exceed the 2^{STREAM_BITS} limit")));
    }
    Ok(h)
}

/// One free coefficient: `[a_i, a_j]` picks up `a_k^{pα}`.
#[derive(Clone, Copy, Debug)]
struct Slot {
    i: usize,
    j: usize,
    k: usize,
}

fn slots(n: usize, x: usize) -> Vec<Slot> {
    let y = n - 2 * x;
    let r = y + x;
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..i {
            for k in (i + 1).max(y)..r {
                out.push(Slot { i, j, k });
            }
        }
    }
    out
}

/// Iterator over `P(n, x)`, exactly `p^{h(x)}` presentations.
pub struct PresentationStream {
    p: u32,
    exps: Vec<u32>,
    slots: Vec<Slot>,
    counter: Vec<u32>,
    done: bool,
}

pub fn enumerate_presentations(p: u32, n: u64, x: u64) -> Result<PresentationStream> {
    let h = check_stream(p, n, x)?;
    let (n, x) = (n as usize, x as usize);
    let y = n - 2 * x;
    let mut exps = vec![1; y];
    exps.extend(std::iter::repeat(2).take(x));
    let slots = slots(n, x);
    debug_assert_eq!(slots.len() as i128, h);
    Ok(PresentationStream { p, exps, counter: vec![0; slots.len()], slots, done: false })
}

impl PresentationStream {
    pub fn len_hint(&self) -> u64 {
        (self.p as u64).pow(self.slots.len() as u32)
    }
}

impl Iterator for PresentationStream {
    type Item = Presentation;

    fn next(&mut self) -> Option<Presentation> {
        if self.done {
            return None;
        }
        let mut pres = Presentation::new(self.p, self.exps.clone()).expect("valid parameters");
        let mut words: std::collections::BTreeMap<(usize, usize), Vec<(usize, i64)>> = Default::default();
        for (s, &c) in self.slots.iter().zip(&self.counter) {
            if c != 0 {
                words.entry((s.i, s.j)).or_default().push((s.k, (self.p * c) as i64));
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
            if self.counter[t] < self.p {
                break;
            }
            self.counter[t] = 0;
            t += 1;
        }
        Some(pres)
    }
}

/// `y` and `x` for a presentation in the exponent-`p²` shape.
pub fn shape_params(pres: &Presentation) -> Result<(usize, usize)> {
    let e = pres.exps();
    let y = e.iter().take_while(|&&v| v == 1).count();
    if e[y..].iter().any(|&v| v != 2) || pres.p() == 2 {
        return Err(Error::Domain("expected odd p and order-p generators before order-p² ones".into()));
    }
    Ok((y, e.len() - y))
}

/// Alternating commutator form: `c[i][j]` holds the coefficients of
/// `a_{y+1}^p, …, a_{y+x}^p` in `[a_i, a_j]`.
pub type CommForm = Vec<Vec<Vec<u64>>>;

pub fn comm_form(pres: &Presentation) -> Result<CommForm> {
    let (y, x) = shape_params(pres)?;
    let r = y + x;
    let p = pres.p() as u64;
    let mut c = vec![vec![vec![0u64; x]; r]; r];
    for i in 0..r {
        for j in 0..i {
            let m = pres.comm(i, j);
            for (t, &mt) in m.iter().enumerate() {
                if mt == 0 {
                    continue;
                }
                if t < y || mt % p != 0 {
                    return Err(Error::Domain("commutators must lie in G^p".into()));
                }
                let v = (mt / p) % p;
                c[i][j][t - y] = v;
                c[j][i][t - y] = (p - v) % p;
            }
        }
    }
    Ok(c)
}

fn from_form(p: u32, y: usize, x: usize, c: &CommForm) -> Presentation {
    let mut exps = vec![1; y];
    exps.extend(std::iter::repeat(2).take(x));
    let mut pres = Presentation::new(p, exps).expect("valid parameters");
    for i in 0..y + x {
        for j in 0..i {
            let w: Vec<(usize, i64)> =
                c[i][j].iter().enumerate().filter(|(_, &v)| v != 0).map(|(t, &v)| (y + t, (p as u64 * v) as i64)).collect();
            if !w.is_empty() {
                pres.set_comm(i, j, &w).expect("shape");
            }
        }
    }
    pres
}

/// An invertible matrix over `F_p` fixing `W = span(e_1, …, e_y)`. Column
/// `i` gives the new generator `b_i = Π_k a_k^{φ[k][i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerMap {
    pub p: u32,
    pub y: usize,
    pub m: Vec<Vec<u64>>,
}

impl StabilizerMap {
    pub fn new(p: u32, y: usize, m: Vec<Vec<u64>>) -> Result<Self> {
        let d = m.len();
        if m.iter().any(|row| row.len() != d) || y > d {
            return Err(Error::Domain("stabilizer maps are square".into()));
        }
        let m: Vec<Vec<u64>> = m.into_iter().map(|r| r.into_iter().map(|v| v % p as u64).collect()).collect();
        for k in y..d {
            for i in 0..y {
                if m[k][i] != 0 {
                    return Err(Error::Domain("map does not preserve W".into()));
                }
            }
        }
        let mut ech = Echelon::new(p);
        for row in &m {
            ech.insert(row);
        }
        if ech.rank() != d {
            return Err(Error::Domain("map is not invertible".into()));
        }
        Ok(StabilizerMap { p, y, m })
    }

    pub fn identity(p: u32, y: usize, d: usize) -> Self {
        let m = (0..d).map(|i| (0..d).map(|j| (i == j) as u64).collect()).collect();
        StabilizerMap { p, y, m }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// `self · other` (apply `self` first, then `other`, on generators).
    pub fn compose(&self, other: &StabilizerMap) -> StabilizerMap {
        let d = self.dim();
        let p = self.p as u64;
        let mut m = vec![vec![0u64; d]; d];
        for i in 0..d {
            for j in 0..d {
                m[i][j] = (0..d).map(|k| self.m[i][k] * other.m[k][j]).sum::<u64>() % p;
            }
        }
        StabilizerMap { p: self.p, y: self.y, m }
    }

    /// Generators of the stabilizer: transvections and one diagonal unit
    /// per coordinate.
    pub fn generators(p: u32, y: usize, d: usize) -> Vec<StabilizerMap> {
        let g = primitive_root(p);
        let mut out = Vec::new();
        for i in 0..d {
            let mut s = Self::identity(p, y, d);
            s.m[i][i] = g;
            out.push(s);
            for k in 0..d {
                if k != i && !(k >= y && i < y) {
                    let mut t = Self::identity(p, y, d);
                    t.m[k][i] = 1;
                    out.push(t);
                }
            }
        }
        out
    }

    /// A uniformly random element, by rejection.
    pub fn random<R: rand::Rng>(p: u32, y: usize, d: usize, rng: &mut R) -> StabilizerMap {
        loop {
            let m: Vec<Vec<u64>> = (0..d)
                .map(|k| (0..d).map(|i| if k >= y && i < y { 0 } else { rng.gen_range(0..p as u64) }).collect())
                .collect();
            if let Ok(s) = Self::new(p, y, m) {
                return s;
            }
        }
    }
}

fn primitive_root(p: u32) -> u64 {
    let p = p as u64;
    (1..p.max(2))
        .find(|&g| (1..p - 1).all(|k| crate::linalg::pow_mod(g, k, p) != 1))
        .unwrap_or(1)
}

/// Order of the stabilizer `|GL_y| · |GL_x| · p^{xy}`.
pub fn stabilizer_order(p: u32, y: usize, x: usize) -> f64 {
    let gl = |d: usize| (0..d).map(|i| (p as f64).powi(d as i32) - (p as f64).powi(i as i32)).product::<f64>();
    gl(y) * gl(x) * (p as f64).powi((x * y) as i32)
}

fn act(phi: &StabilizerMap, x: usize, c: &CommForm) -> Result<CommForm> {
    let p = phi.p as u64;
    let (y, d) = (phi.y, phi.dim());
    if c.len() != d || d != y + x {
        return Err(Error::Domain("map dimension does not match the presentation".into()));
    }
    // b_t^p = Σ_s φ[y+s][y+t] a_{y+s}^p; invert that block.
    let dblock: Vec<Vec<u64>> = (0..x).map(|s| (0..x).map(|t| phi.m[y + s][y + t]).collect()).collect();
    let dinv = invert(&dblock, p).ok_or_else(|| Error::Domain("map is not invertible on G^p".into()))?;
    let mut out = vec![vec![vec![0u64; x]; d]; d];
    for i in 0..d {
        for j in 0..i {
            let mut v = vec![0u64; x];
            for k in 0..d {
                if phi.m[k][i] == 0 {
                    continue;
                }
                for l in 0..d {
                    let f = phi.m[k][i] * phi.m[l][j] % p;
                    if f == 0 {
                        continue;
                    }
                    for (vt, ct) in v.iter_mut().zip(&c[k][l]) {
                        *vt = (*vt + f * ct) % p;
                    }
                }
            }
            let w: Vec<u64> = (0..x).map(|s| (0..x).map(|t| dinv[s][t] * v[t]).sum::<u64>() % p).collect();
            out[j][i] = w.iter().map(|&a| (p - a) % p).collect();
            out[i][j] = w;
        }
    }
    Ok(out)
}

fn invert(a: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let d = a.len();
    let mut m: Vec<Vec<u64>> =
        a.iter().enumerate().map(|(i, r)| r.iter().copied().chain((0..d).map(|j| (i == j) as u64)).collect()).collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| m[r][col] % p != 0)?;
        m.swap(col, piv);
        let s = inv_mod(m[col][col], p);
        for v in m[col].iter_mut() {
            *v = *v * s % p;
        }
        for r in 0..d {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                let src = m[col].clone();
                for (v, s) in m[r].iter_mut().zip(&src) {
                    *v = (*v + p - f * s % p) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// The presentation on the generators `b_i = Π_k a_k^{φ[k][i]}`.
pub fn gl_action_apply(phi: &StabilizerMap, pres: &Presentation) -> Result<Presentation> {
    let (y, x) = shape_params(pres)?;
    if y != phi.y || pres.p() != phi.p {
        return Err(Error::Domain("map does not match the presentation shape".into()));
    }
    let c = comm_form(pres)?;
    Ok(from_form(pres.p(), y, x, &act(phi, x, &c)?))
}

/// Default cap on the states visited by [`orbit_dedup`].
pub const ORBIT_BUDGET: usize = 1_000_000;

/// Number of isomorphism classes in `P(n, x)`: stabilizer orbits of the
/// streamed presentations, explored inside the larger space `Q(n, x)`.
pub fn orbit_dedup(p: u32, n: u64, x: u64, budget: usize) -> Result<usize> {
    let classes = orbit_partition(p, n, x, budget)?;
    Ok(classes.iter().copied().max().map_or(0, |m| m + 1))
}

/// Orbit index of each streamed presentation, in stream order.
pub fn orbit_partition(p: u32, n: u64, x: u64, budget: usize) -> Result<Vec<usize>> {
    let stream: Vec<Presentation> = enumerate_presentations(p, n, x)?.collect();
    let (y, xx) = (n as usize - 2 * x as usize, x as usize);
    let gens = StabilizerMap::generators(p, y, y + xx);
    let forms: Vec<CommForm> = stream.iter().map(comm_form).collect::<Result<_>>()?;
    let mut orbit_of: std::collections::HashMap<CommForm, usize> = Default::default();
    let mut labels = Vec::with_capacity(forms.len());
    let mut next = 0;
    let mut visited = 0usize;
    for f in forms {
        if let Some(&o) = orbit_of.get(&f) {
            labels.push(o);
            continue;
        }
        let mut seen: HashSet<CommForm> = HashSet::new();
        let mut queue = VecDeque::from([f.clone()]);
        seen.insert(f.clone());
        while let Some(c) = queue.pop_front() {
            visited += 1;
            if visited > budget {
                return Err(Error::Infeasible(format!("orbit search exceeded {budget} states")));
            }
            for g in &gens {
                let d = act(g, xx, &c)?;
                if seen.insert(d.clone()) {
                    queue.push_back(d);
                }
            }
        }
        for c in seen {
            orbit_of.insert(c, next);
        }
        labels.push(next);
        next += 1;
    }
    Ok(labels)
}

/// Closed-form product in an exponent-`p²` group of the shape above:
/// commutators are bilinear and central, so
/// `a^l · a^m = a^{l+m} Π_{i>j} [a_i, a_j]^{l_i m_j}`.
pub fn fast_mul(pres: &Presentation, c: &CommForm, l: &[u64], m: &[u64]) -> Result<Vec<u64>> {
    let (y, x) = shape_params(pres)?;
    let p = pres.p() as u64;
    let mut out: Vec<u64> = l.iter().zip(m).map(|(a, b)| a + b).collect();
    for i in 0..y + x {
        for j in 0..i {
            let f = l[i] * m[j] % p;
            if f == 0 {
                continue;
            }
            for t in 0..x {
                out[y + t] += p * (f * c[i][j][t] % p);
            }
        }
    }
    for (k, v) in out.iter_mut().enumerate() {
        *v %= pres.order(k);
    }
    Ok(out)
}

/// `(Π a_i^{β_i})^p = Π a_i^{pβ_i}`.
pub fn fast_pth_power(pres: &Presentation, l: &[u64]) -> Vec<u64> {
    let p = pres.p() as u64;
    l.iter().enumerate().map(|(k, &v)| v * p % pres.order(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        assert_eq!(h_value(7, 0).unwrap(), 0);
        assert_eq!(h_value(4, 1).unwrap(), 1);
        assert_eq!(h_value(6, 2).unwrap(), 4);
        assert_eq!(h_value(3, 1).unwrap(), 0);
        assert_eq!(h_value(5, 1).unwrap(), 3);
        assert!(h_value(3, 2).is_err());
    }

    #[test]
    fn growth_small() {
        let g = growth_report(4).unwrap();
        assert_eq!(g.table, vec![0, 1, 0]);
        assert_eq!((g.x_n, g.h_max), (1, 1));
        let g = growth_report(100).unwrap();
        assert!((22..=23).contains(&g.x_n));
        assert!((g.x_max - 22.43).abs() < 0.01);
    }

    #[test]
    fn stream_sizes() {
        assert_eq!(enumerate_presentations(3, 4, 0).unwrap().count(), 1);
        assert_eq!(enumerate_presentations(3, 3, 1).unwrap().count(), 1);
        let v: Vec<_> = enumerate_presentations(3, 4, 1).unwrap().collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1].comm(1, 0), vec![0, 0, 3]);
        assert_eq!(v[2].comm(1, 0), vec![0, 0, 6]);
        assert!(enumerate_presentations(2, 4, 1).is_err());
        assert_eq!(count_line(3, 4, 1).unwrap(), "P 4 1 3 = 3^1");
    }

    #[test]
    fn swap_action() {
        let v: Vec<_> = enumerate_presentations(3, 4, 1).unwrap().collect();
        let swap = StabilizerMap::new(3, 2, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let w = gl_action_apply(&swap, &v[1]).unwrap();
        assert_eq!(w.comm(1, 0), vec![0, 0, 6]);
        let id = StabilizerMap::identity(3, 2, 3);
        assert_eq!(gl_action_apply(&id, &v[1]).unwrap(), v[1]);
        assert!(StabilizerMap::new(3, 2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]).is_err());
    }

    #[test]
    fn orbits_341() {
        assert_eq!(orbit_dedup(3, 4, 1, ORBIT_BUDGET).unwrap(), 2);
        assert_eq!(orbit_partition(3, 4, 1, ORBIT_BUDGET).unwrap(), vec![0, 1, 1]);
    }
}
