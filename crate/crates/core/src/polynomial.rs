//! Sparse multivariate polynomials with real coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    nvars: usize,
    /// Exponent vector → coefficient; zero coefficients are dropped.
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1.0);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * libm::pow(xi, k as f64)))
            .sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficients of the univariate polynomial in `var` obtained by fixing
    /// the other variables at `x` (the entry `x[var]` is ignored), lowest
    /// degree first.
    pub fn univariate(&self, var: usize, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut v = *c;
            for (k, (&p, &xi)) in e.iter().zip(x).enumerate() {
                if k != var {
                    v *= libm::pow(xi, p as f64);
                }
            }
            out[e[var] as usize] += v;
        }
        out
    }
}

/// All permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations(n - 1) {
        // Insert n−1 at every position; moving it left past j entries
        // contributes (−1)^j.
        for pos in (0..=perm.len()).rev() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            let shift = perm.len() - pos;
            out.push((p, if shift % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

/// Leibniz expansion of the determinant of a square polynomial matrix.
pub fn determinant(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = m.len();
    let mut acc = Polynomial::zero(nvars);
    for (perm, sign) in permutations(n) {
        let mut term = Polynomial::constant(nvars, sign);
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&m[i][j]);
            if term.is_zero() {
                break;
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Real roots of a univariate polynomial (coefficients lowest first) from
/// the companion matrix; roots with imaginary part above `imag_tol`
/// (relative) are dropped. Ascending.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = Mat::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    let mut roots: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    roots.sort_by(|a, b| a.total_cmp(b));
    roots
}
