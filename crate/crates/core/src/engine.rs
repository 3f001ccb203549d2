//! Turning a power-commutator presentation into a refined pc presentation
//! and deciding consistency.
//!
//! The refined generators are `g_{k,m} = a_k^{p^m}` for `0 ≤ m < e_k`,
//! ordered by depth `m` first and generator `k` second. Power relations are
//! exact (`g_{k,m}^p = g_{k,m+1}`, or `1` at the top). Commutators between
//! depth-0 generators come from the table; deeper ones follow from
//! `[z^p, x] = (z^p)^{-1} (z [z, x])^p` and are iterated to a fixed point.
//! The resulting tables are then subjected to the usual overlap tests.

use crate::error::{Error, Result};
use crate::pc::{unit, Elem, PcPres};
use crate::presentation::{ElementNF, Presentation, Word};

/// Outcome of [`check_consistency`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// `log_p |G|` when consistent.
    pub log_order: u32,
    /// Number of refined generators the overlap tests ran over.
    pub pc_length: usize,
    /// Failing overlap or relation, if any.
    pub failure: Option<String>,
}

/// Refined generator layout of a presentation.
#[derive(Clone, Debug)]
pub struct Layout {
    /// `(k, m)` for each refined generator, in pc order.
    pub gens: Vec<(usize, u32)>,
    /// `index[k][m]` is the pc index of `g_{k,m}`.
    pub index: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(exps: &[u32]) -> Self {
        let top = exps.iter().copied().max().unwrap_or(0);
        let mut gens = Vec::new();
        let mut index: Vec<Vec<usize>> = exps.iter().map(|&e| vec![0; e as usize]).collect();
        for m in 0..top {
            for (k, &e) in exps.iter().enumerate() {
                if m < e {
                    index[k][m as usize] = gens.len();
                    gens.push((k, m));
                }
            }
        }
        Layout { gens, index }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

pub(crate) fn sigma(p: u32) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Builds the refined pc presentation. `Ok(Err(reason))` means the
/// presentation is inconsistent.
pub fn build_pc(pres: &Presentation) -> Result<std::result::Result<(PcPres, Layout), String>> {
    if !pres.is_powerful_shape() {
        return Err(Error::InvalidPresentation(
            "commutator exponents must be divisible by p (by 4 when p = 2)".into(),
        ));
    }
    let p = pres.p();
    let lay = Layout::new(pres.exps());
    let n = lay.len();
    let weight: Vec<u32> = lay.gens.iter().map(|&(_, m)| m).collect();
    let power: Vec<Elem> = lay
        .gens
        .iter()
        .map(|&(k, m)| {
            if m + 1 < pres.exps()[k] {
                unit(n, lay.index[k][m as usize + 1])
            } else {
                vec![0; n]
            }
        })
        .collect();
    let mut table: Vec<Vec<Elem>> = (0..n).map(|y| vec![vec![0; n]; y]).collect();
    let s = sigma(p);

    let assemble = |table: &Vec<Vec<Elem>>| -> Result<std::result::Result<PcPres, String>> {
        let mut conj = Vec::with_capacity(n);
        for y in 0..n {
            let mut row = Vec::with_capacity(y);
            for x in 0..y {
                let c = &table[y][x];
                let floor = weight[y] + weight[x] + s;
                if (0..n).any(|t| c[t] != 0 && weight[t] < floor) {
                    return Ok(Err(format!(
                        "commutator [{}, {}] leaves the power filtration",
                        name(&lay, y),
                        name(&lay, x)
                    )));
                }
                let mut v = c.clone();
                v[y] = 1;
                row.push(v);
            }
            conj.push(row);
        }
        PcPres::new(p, weight.clone(), power.clone(), conj).map(Ok)
    };

    let max_iter = n + 3;
    for _ in 0..max_iter {
        let pc = match assemble(&table)? {
            Ok(pc) => pc,
            Err(why) => return Ok(Err(why)),
        };
        let mut changed = false;
        for y in 0..n {
            for x in 0..y {
                let v = next_comm(pres, &lay, &pc, &table, y, x)?;
                if v != table[y][x] {
                    table[y][x] = v;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(match pc.check_overlaps()? {
                None => Ok((pc, lay)),
                Some(o) => Err(o),
            });
        }
    }
    Ok(Err("commutator table does not stabilise".into()))
}

fn name(lay: &Layout, i: usize) -> String {
    let (k, m) = lay.gens[i];
    if m == 0 {
        format!("a{}", k + 1)
    } else {
        format!("a{}^(p^{})", k + 1, m)
    }
}

fn lookup(pc: &PcPres, table: &[Vec<Elem>], a: usize, b: usize) -> Result<Elem> {
    use std::cmp::Ordering::*;
    match a.cmp(&b) {
        Equal => Ok(pc.identity()),
        Greater => Ok(table[a][b].clone()),
        Less => pc.inverse(&table[b][a]),
    }
}

fn next_comm(pres: &Presentation, lay: &Layout, pc: &PcPres, table: &[Vec<Elem>], y: usize, x: usize) -> Result<Elem> {
    let (ky, my) = lay.gens[y];
    let (kx, _) = lay.gens[x];
    if my == 0 {
        return if ky > kx {
            table_word(pc, lay, &pres.comm(ky, kx))
        } else {
            let w = table_word(pc, lay, &pres.comm(kx, ky))?;
            pc.inverse(&w)
        };
    }
    let z = lay.index[ky][my as usize - 1];
    let c = lookup(pc, table, z, x)?;
    let zc = pc.mul(&pc.gen(z), &c)?;
    let zcp = pc.pow(&zc, pc.p() as u64)?;
    let yinv = pc.inverse(&pc.gen(y))?;
    pc.mul(&yinv, &zcp)
}

/// `Π_k a_k^{m_k}` in pc coordinates.
fn table_word(pc: &PcPres, lay: &Layout, v: &[u64]) -> Result<Elem> {
    let mut acc = pc.identity();
    for (k, &m) in v.iter().enumerate() {
        if m != 0 {
            let g = pc.pow(&pc.gen(lay.index[k][0]), m)?;
            acc = pc.mul(&acc, &g)?;
        }
    }
    Ok(acc)
}

pub fn check_consistency(pres: &Presentation) -> Result<ConsistencyReport> {
    let pc_length = pres.log_order() as usize;
    Ok(match build_pc(pres)? {
        Ok(_) => ConsistencyReport { consistent: true, log_order: pres.log_order(), pc_length, failure: None },
        Err(why) => ConsistencyReport { consistent: false, log_order: 0, pc_length, failure: Some(why) },
    })
}

/// Collects a word in the presentation's generators to normal form.
pub fn collect(pres: &Presentation, word: &Word) -> Result<ElementNF> {
    let g = crate::group::Group::from_presentation(pres)?;
    g.collect(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Presentation {
        Presentation::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n").unwrap()
    }

    #[test]
    fn layout_is_depth_major() {
        let l = Layout::new(&[3, 1, 2]);
        assert_eq!(l.gens, vec![(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2)]);
        assert_eq!(l.index[2][1], 4);
    }

    #[test]
    fn f2_consistent() {
        let r = check_consistency(&f2()).unwrap();
        assert!(r.consistent);
        assert_eq!(r.log_order, 4);
    }

    #[test]
    fn bad_relation_inconsistent() {
        let pres = Presentation::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^3\n").unwrap();
        let r = check_consistency(&pres).unwrap();
        assert!(!r.consistent);
        assert!(r.failure.is_some());
    }

    #[test]
    fn m27_consistent() {
        let pres = Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^3\n").unwrap();
        assert!(check_consistency(&pres).unwrap().consistent);
    }

    #[test]
    fn general_shape_rejected() {
        let pres = Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^1\n").unwrap();
        assert!(matches!(check_consistency(&pres), Err(Error::InvalidPresentation(_))));
    }
}
