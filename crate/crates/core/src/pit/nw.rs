use crate::coeffring::is_prime;

/// Combinatorial design: `n` subsets of `{0, ..., q^2 - 1}`, each of size
/// `m`, from graphs of polynomials of degree `< d` over `F_q`. Two distinct
/// sets share at most `d - 1` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NwDesign {
    pub n: usize,
    pub m: usize,
    pub q: u64,
    pub d: u32,
    pub sets: Vec<Vec<u64>>,
}

impl NwDesign {
    pub fn universe_size(&self) -> u64 {
        self.q * self.q
    }

    pub fn max_intersection(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                best = best.max(a.iter().filter(|x| b.binary_search(x).is_ok()).count());
            }
        }
        best
    }
}

/// `q` is the least prime `>= m`, `d` the least `d >= 1` with `q^d >= n`,
/// and set `i` is the graph `{a q + f_i(a) : a < m}` of the `i`-th
/// polynomial in lexicographic order of coefficient vectors (constant
/// coefficient most significant).
pub fn nw_design(n: usize, m: usize) -> NwDesign {
    assert!(n >= 1 && m >= 1, "design needs n, m >= 1");
    let q = (m as u64..).find(|&c| is_prime(c)).expect("a prime exists in [m, 2m]");
    let mut d = 1u32;
    while (q as u128).pow(d) < n as u128 {
        d += 1;
    }
    let sets = (0..n as u64)
        .map(|idx| {
            let mut c = vec![0u64; d as usize];
            let mut rest = idx;
            for slot in c.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            let mut s: Vec<u64> = (0..m as u64)
                .map(|a| {
                    let fa = c.iter().rev().fold(0u64, |acc, &ci| (acc * a + ci) % q);
                    a * q + fa
                })
                .collect();
            s.sort_unstable();
            s
        })
        .collect();
    NwDesign { n, m, q, d, sets }
}
