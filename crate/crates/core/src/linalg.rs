//! Row echelon forms over the prime field, with coefficient tracking.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Incrementally built echelon basis. Every stored row remembers how it was
/// combined from the inserted vectors, so membership queries can return
/// coordinates with respect to the inserted sequence.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(p: u32) -> Self {
        Echelon { p: p as u64, rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the remainder and the
    /// combination `c` (over inserted vectors) with `v = remainder + Σ c_i u_i`.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|&x| x % p).collect();
        let mut combo = vec![0u64; self.inserted];
        for (piv, row, rc) in &self.rows {
            let f = v[*piv];
            if f == 0 {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a = (*a + p - f * b % p) % p;
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                *a = (*a + f * b) % p;
            }
        }
        (v, combo)
    }

    /// Inserts `v`; returns whether it was independent of the earlier rows.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let (mut rem, combo) = self.reduce(v);
        let idx = self.inserted;
        self.inserted += 1;
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(0);
        }
        let Some(piv) = rem.iter().position(|&x| x != 0) else {
            return false;
        };
        // rem = v - Σ combo_i u_i
        let mut rc: Vec<u64> = combo.iter().map(|&c| (p - c) % p).collect();
        rc.push(1);
        debug_assert_eq!(rc.len(), idx + 1);
        let s = inv_mod(rem[piv], p);
        for x in rem.iter_mut() {
            *x = *x * s % p;
        }
        for x in rc.iter_mut() {
            *x = *x * s % p;
        }
        for (_, row, orc) in self.rows.iter_mut() {
            let f = row[piv];
            if f != 0 {
                for (a, b) in row.iter_mut().zip(&rem) {
                    *a = (*a + p - f * b % p) % p;
                }
                for (a, b) in orc.iter_mut().zip(&rc) {
                    *a = (*a + p - f * b % p) % p;
                }
            }
        }
        let pos = self.rows.partition_point(|(q, _, _)| *q < piv);
        self.rows.insert(pos, (piv, rem, rc));
        true
    }

    /// Coordinates of `v` over the inserted vectors if `v` lies in their span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (rem, combo) = self.reduce(v);
        rem.iter().all(|&x| x == 0).then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_tracks_combinations() {
        let mut e = Echelon::new(5);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        assert_eq!(e.rank(), 2);
        let c = e.solve(&[2, 2, 3]).unwrap();
        let mut acc = [0u64; 3];
        let basis = [[1u64, 2, 0], [0, 1, 1], [1, 3, 1]];
        for (ci, b) in c.iter().zip(basis.iter()) {
            for k in 0..3 {
                acc[k] = (acc[k] + ci * b[k]) % 5;
            }
        }
        assert_eq!(acc, [2, 2, 3]);
        assert!(e.solve(&[0, 0, 1]).is_none());
    }
}
