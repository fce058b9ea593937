//! Hilbert series of monomial ideals.

use crate::poly::Monomial;

/// The Hilbert series `Q(t) / (1 - t)^dim` of a standard-graded quotient,
/// written with `Q(1) != 0` (or `Q = 0` for the zero ring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: Vec<i128>,
    dim: usize,
}

fn trim(p: &mut Vec<i128>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(*y).expect("overflow")).expect("overflow");
        }
    }
    out
}

fn add_shifted(a: &mut Vec<i128>, b: &[i128], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut sorted: Vec<Monomial> = gens.to_vec();
    sorted.sort_by_key(|m| m.degree());
    sorted.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `N(t)` of `H(t) = N(t) / (1 - t)^n` for the quotient by the
/// monomial ideal generated by `gens`.
fn numerator(nvars: usize, gens: &[Monomial]) -> Vec<i128> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    let coprime = (0..gens.len()).all(|i| (i + 1..gens.len()).all(|j| gens[i].is_coprime(&gens[j])));
    if coprime {
        let mut acc = vec![1i128];
        for g in &gens {
            let mut f = vec![0i128; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = mul(&acc, &f);
        }
        return acc;
    }
    // Pivot on the variable occurring in the most generators.
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for (v, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let v = (0..nvars).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
    let e = gens.iter().map(|g| g.exponent(v)).filter(|&e| e > 0).min().unwrap();
    let pivot = Monomial::variable(nvars, v, e);
    let mut with_pivot: Vec<Monomial> = gens.clone();
    with_pivot.push(pivot.clone());
    let quotient: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut exps = g.exponents().to_vec();
            exps[v] = exps[v].saturating_sub(e);
            Monomial::from_exponents(&exps)
        })
        .collect();
    let mut out = numerator(nvars, &with_pivot);
    let q = numerator(nvars, &quotient);
    add_shifted(&mut out, &q, e as usize);
    trim(&mut out);
    out
}

fn binomial(n: i128, k: usize) -> i128 {
    if n < 0 {
        return 0;
    }
    if (k as i128) > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k as i128 {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl HilbertSeries {
    pub fn of_monomial_ideal(nvars: usize, gens: &[Monomial]) -> Self {
        let mut num = numerator(nvars, gens);
        trim(&mut num);
        let mut dim = nvars;
        if num.iter().all(|&c| c == 0) {
            return HilbertSeries {
                numerator: vec![0],
                dim: 0,
            };
        }
        // Divide by (1 - t) while t = 1 is a root.
        while dim > 0 && num.iter().sum::<i128>() == 0 {
            let mut q = vec![0i128; num.len() - 1];
            let mut acc = 0i128;
            for i in 0..num.len() - 1 {
                acc += num[i];
                q[i] = acc;
            }
            num = q;
            trim(&mut num);
            dim -= 1;
        }
        HilbertSeries { numerator: num, dim }
    }

    /// `Q(t)` in lowest terms.
    pub fn numerator(&self) -> &[i128] {
        &self.numerator
    }

    /// Krull dimension of the quotient; zero for the zero ring.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero_ring(&self) -> bool {
        self.numerator.iter().all(|&c| c == 0)
    }

    /// `Q(1)`, the degree (multiplicity) of the quotient.
    pub fn degree(&self) -> i128 {
        self.numerator.iter().sum()
    }

    /// Value of the Hilbert function in degree `k`.
    pub fn value(&self, k: usize) -> i128 {
        self.numerator
            .iter()
            .enumerate()
            .filter(|(j, _)| *j <= k)
            .map(|(j, &q)| {
                if self.dim == 0 {
                    if j == k {
                        q
                    } else {
                        0
                    }
                } else {
                    q * binomial((k - j + self.dim - 1) as i128, self.dim - 1)
                }
            })
            .sum()
    }

    /// `sum_{k < n} value(k)`.
    pub fn cumulative(&self, n: usize) -> i128 {
        if n == 0 {
            return 0;
        }
        self.numerator
            .iter()
            .enumerate()
            .filter(|(j, _)| *j < n)
            .map(|(j, &q)| q * binomial((n - 1 - j + self.dim) as i128, self.dim))
            .sum()
    }

    /// Total dimension when the quotient is finite-dimensional.
    pub fn total(&self) -> Option<u64> {
        (self.dim == 0).then(|| self.degree() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn box_and_line() {
        let hs = HilbertSeries::of_monomial_ideal(2, &[m(&[2, 0]), m(&[0, 3])]);
        assert_eq!(hs.dim(), 0);
        assert_eq!(hs.total(), Some(6));
        let hs = HilbertSeries::of_monomial_ideal(2, &[m(&[1, 1])]);
        assert_eq!(hs.dim(), 1);
        assert_eq!(hs.degree(), 2);
        assert_eq!((0..5).map(|k| hs.value(k)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
        assert_eq!(hs.cumulative(5), 9);
    }

    #[test]
    fn polynomial_ring() {
        let hs = HilbertSeries::of_monomial_ideal(3, &[]);
        assert_eq!(hs.dim(), 3);
        assert_eq!(hs.value(2), 6);
        assert_eq!(hs.cumulative(3), 10);
    }

    #[test]
    fn staircase_matches_enumeration() {
        let gens = [m(&[3, 1, 0]), m(&[0, 2, 2]), m(&[1, 0, 3]), m(&[4, 0, 0]), m(&[0, 5, 0]), m(&[0, 0, 4]), m(&[1, 1, 1])];
        let hs = HilbertSeries::of_monomial_ideal(3, &gens);
        let mut count = 0;
        for a in 0..6u16 {
            for b in 0..6u16 {
                for c in 0..6u16 {
                    let x = m(&[a, b, c]);
                    if !gens.iter().any(|g| g.divides(&x)) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(hs.total(), Some(count));
    }
}
