//! Named example groups and an independent semidirect-product model for
//! checking the engine.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::pow_mod;
use crate::presentation::{is_prime, Presentation};

fn pw(p: u32, e: u32) -> u64 {
    (p as u64).pow(e)
}

/// `G(n) = ⟨a, b : a^{3^n}, b^{27}, [a, b] = a^{3^{n-3}}⟩`, `n ≥ 7`.
pub fn sec2_ex1(n: u32) -> Result<Presentation> {
    if !(7..=30).contains(&n) {
        return Err(Error::Domain(format!("sec2_ex1 needs 7 ≤ n ≤ 30, got {n}")));
    }
    let mut pres = Presentation::new(3, vec![n, 3])?;
    // [b, a] = [a, b]^{-1}
    pres.set_comm(1, 0, &[(0, -(pw(3, n - 3) as i64))])?;
    Ok(pres)
}

/// `G(n) = ⟨a, b : a^{p^n}, b^{p^n}, [b, a] = a^{p²}⟩`, `n ≥ 2`.
pub fn sec2_ex2(p: u32, n: u32) -> Result<Presentation> {
    if n < 2 || !is_prime(p as u64) || (p as f64).powi(2 * n as i32) > 2f64.powi(62) {
        return Err(Error::Domain(format!("sec2_ex2 needs a prime p and n ≥ 2, got p = {p}, n = {n}")));
    }
    let mut pres = Presentation::new(p, vec![n, n])?;
    pres.set_comm(1, 0, &[(0, pw(p, 2) as i64)])?;
    Ok(pres)
}

/// `⟨x, a_1, …, a_{r-1}⟩` with `x` of order `p^{r+1}`, `a_i` of order `p^i`,
/// `[a_i, x] = a_{i+1}^p` and `[a_{r-1}, x] = x^{p²}`; other pairs commute.
pub fn sec4_ex1(p: u32, r: u32) -> Result<Presentation> {
    if !(2..=4).contains(&r) || !is_prime(p as u64) {
        return Err(Error::Domain(format!("sec4_ex1 needs a prime p and 2 ≤ r ≤ 4, got p = {p}, r = {r}")));
    }
    let mut exps = vec![r + 1];
    exps.extend(1..r);
    let mut pres = Presentation::new(p, exps)?;
    for i in 1..r as usize - 1 {
        pres.set_comm(i, 0, &[(i + 1, p as i64)])?;
    }
    pres.set_comm(r as usize - 1, 0, &[(0, pw(p, 2) as i64)])?;
    Ok(pres)
}

/// The rank-5 group of order `5^16` with maximal tail of length 11.
pub fn sec4_ex2() -> Presentation {
    let mut pres = Presentation::new(5, vec![6, 1, 2, 3, 4]).unwrap();
    pres.set_comm(1, 0, &[(2, 5)]).unwrap();
    pres.set_comm(2, 0, &[(3, 5)]).unwrap();
    pres.set_comm(3, 0, &[(4, 5)]).unwrap();
    pres.set_comm(4, 0, &[(0, 25)]).unwrap();
    // [d, c] = [c, d]^{-1} = c^{-25} d^{-375}
    pres.set_comm(4, 3, &[(3, -25), (4, -375)]).unwrap();
    pres
}

/// `M_{p³} = ⟨a, b : a^{p²}, b^p, [b, a] = a^p⟩`: powerful, not powerfully
/// nilpotent (odd p).
pub fn m_p3(p: u32) -> Result<Presentation> {
    let mut pres = Presentation::new(p, vec![2, 1])?;
    pres.set_comm(1, 0, &[(0, p as i64)])?;
    Ok(pres)
}

/// Powerful 2-groups: `(name, presentation)`.
pub fn powerful_2_groups() -> Vec<(String, Presentation)> {
    let mk = |ex: u32, ea: u32, m: i64| {
        let mut pres = Presentation::new(2, vec![ex, ea]).unwrap();
        if m != 0 {
            pres.set_comm(1, 0, &[(0, m)]).unwrap();
        }
        pres
    };
    vec![
        ("pow2_x16_a2".to_string(), mk(4, 1, 8)),
        ("pow2_x8_a4".to_string(), mk(3, 2, 4)),
        ("pow2_x16_a4".to_string(), mk(4, 2, 4)),
        ("pow2_x32_a4".to_string(), mk(5, 2, 8)),
        ("pow2_c4xc2".to_string(), mk(2, 1, 0)),
    ]
}

/// Every named fixture, with the canonical file name stem.
pub fn fixtures() -> Vec<(String, Presentation)> {
    let mut out = Vec::new();
    for n in [7, 8] {
        out.push((format!("sec2ex1_n{n}"), sec2_ex1(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("sec2ex2_p3_n{n}"), sec2_ex2(3, n).unwrap()));
    }
    for n in 2..=3 {
        out.push((format!("sec2ex2_p5_n{n}"), sec2_ex2(5, n).unwrap()));
    }
    for r in 2..=4 {
        out.push((format!("sec4ex1_p3_r{r}"), sec4_ex1(3, r).unwrap()));
    }
    out.push(("sec4ex1_p5_r2".to_string(), sec4_ex1(5, 2).unwrap()));
    out.push(("sec4ex2".to_string(), sec4_ex2()));
    out.push(("m27".to_string(), m_p3(3).unwrap()));
    out.push(("c9xc3".to_string(), Presentation::abelian(3, &[2, 1]).unwrap()));
    out.push(("c81xc27".to_string(), Presentation::abelian(3, &[4, 3]).unwrap()));
    out.extend(powerful_2_groups());
    out
}

pub fn fixture(name: &str) -> Option<Presentation> {
    fixtures().into_iter().find(|(n, _)| n == name).map(|(_, p)| p)
}

/// Writes every fixture as `<name>.pg` into `dir`.
pub fn export_fixtures(dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, pres) in fixtures() {
        let path = dir.join(format!("{name}.pg"));
        std::fs::write(&path, format!("# {name}\n{}", pres.to_text()))?;
        paths.push(path);
    }
    Ok(paths)
}

/// `Z_{p^m} ⋊ Z_{p^k}` with `(i, j)(i', j') = (i + i' u^j, j + j')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleModel {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub u: u64,
}

impl OracleModel {
    pub fn new(p: u32, m: u32, k: u32, u: u64) -> Self {
        OracleModel { p, m, k, u }
    }

    pub fn modulus(&self) -> (u64, u64) {
        (pw(self.p, self.m), pw(self.p, self.k))
    }

    /// `u^{p^k} ≡ 1 (mod p^m)`: the twist is a well-defined action.
    pub fn is_valid(&self) -> bool {
        let (a, b) = self.modulus();
        self.u % self.p as u64 != 0 && pow_mod(self.u, b, a) == 1 % a
    }

    pub fn size(&self) -> u64 {
        let (a, b) = self.modulus();
        a * b
    }

    pub fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let (a, b) = self.modulus();
        ((x.0 + y.0 * pow_mod(self.u, x.1, a)) % a, (x.1 + y.1) % b)
    }

    pub fn pow(&self, x: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut r = (0, 0);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Exhaustive associativity check for carriers up to `10^4` elements.
    pub fn check_associative(&self) -> Result<bool> {
        let (a, b) = self.modulus();
        if a * b > 10_000 {
            return Err(Error::Infeasible("oracle carriers are limited to 10^4 elements".into()));
        }
        let elems: Vec<(u64, u64)> = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
        // Generators suffice for the third slot once the first two range freely.
        for &x in &elems {
            for &y in &elems {
                for z in [(1 % a, 0), (0, 1 % b)] {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Whether `a_k ↦ images[k]` extends to an isomorphism `G → M`, checked on
/// every pair of elements.
pub fn oracle_cross_check(g: &Group, model: &OracleModel, images: &[(u64, u64)]) -> Result<bool> {
    let size = (g.p() as u64).pow(g.n());
    if size > 10_000 {
        return Err(Error::Infeasible("oracle cross-checks are limited to |G| ≤ 10^4".into()));
    }
    if images.len() != g.rank() || !model.is_valid() || model.size() != size {
        return Ok(false);
    }
    // pc exponents are base-p digits, so an element is indexed by its digit code
    let p = g.p();
    let code = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
    let elems: Vec<_> = g.elements().collect();
    let mut phi = vec![None; size as usize];
    let mut seen = std::collections::HashSet::with_capacity(elems.len());
    for v in &elems {
        let nf = g.to_nf(v)?;
        let mut acc = (0, 0);
        for (k, &l) in nf.0.iter().enumerate() {
            acc = model.mul(acc, model.pow(images[k], l));
        }
        if !seen.insert(acc) {
            return Ok(false);
        }
        phi[code(v)] = Some(acc);
    }
    let phi: Vec<(u64, u64)> = phi.into_iter().map(|x| x.expect("every code is hit")).collect();
    for x in &elems {
        let fx = phi[code(x)];
        for y in &elems {
            let xy = g.mul(x, y)?;
            if phi[code(&xy)] != model.mul(fx, phi[code(y)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::check_consistency;

    #[test]
    fn fixtures_consistent() {
        for (name, pres) in fixtures() {
            if name == "sec4ex2" {
                continue;
            }
            assert!(check_consistency(&pres).unwrap().consistent, "{name}");
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(sec4_ex1(3, 2).unwrap().to_text(), "p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n");
        assert_eq!(sec4_ex1(3, 4).unwrap().log_order(), 11);
        assert_eq!(sec4_ex2().log_order(), 16);
        assert!(sec2_ex2(3, 2).unwrap().is_abelian_table());
        assert!(sec2_ex1(6).is_err());
    }

    #[test]
    fn f2_oracle() {
        let g = Group::from_presentation(&sec4_ex1(3, 2).unwrap()).unwrap();
        let good = OracleModel::new(3, 3, 1, 10);
        assert!(good.is_valid() && good.check_associative().unwrap());
        assert!(oracle_cross_check(&g, &good, &[(1, 0), (0, 1)]).unwrap());
        let bad = OracleModel::new(3, 3, 1, 4);
        assert!(!oracle_cross_check(&g, &bad, &[(1, 0), (0, 1)]).unwrap());
        let c = Group::from_presentation(&Presentation::abelian(3, &[2, 1]).unwrap()).unwrap();
        assert!(oracle_cross_check(&c, &OracleModel::new(3, 2, 1, 1), &[(1, 0), (0, 1)]).unwrap());
    }
}
