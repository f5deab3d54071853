//! Sparse multivariate polynomials over an exact field, used for symbolic expansion of
//! determinant families.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

/// Polynomial in `nvars` variables; monomials are exponent vectors in lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(field: FieldSpec, nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        let mut p = MultiPoly::zero(field, nvars);
        p.add_term(e, field.one());
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = divisor.leading()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.field, self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = rc * &dc_inv;
            let mut t = MultiPoly::zero(self.field, self.nvars);
            t.add_term(e, c);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Reduces exponents modulo `t^p = t`, giving the canonical representative of the
    /// polynomial function on `F_p^k`. Identity over the rationals.
    pub fn reduce_as_function(&self) -> MultiPoly {
        let FieldSpec::Prime(p) = self.field else {
            return self.clone();
        };
        let p = p as u32;
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            let e = e
                .iter()
                .map(|&k| if k == 0 { 0 } else { (k - 1) % (p - 1) + 1 })
                .collect();
            out.add_term(e, c.clone());
        }
        out
    }

    /// A point where a nonzero polynomial does not vanish, using values `0..=deg` per
    /// variable. Over `F_p` the polynomial must already be reduced as a function.
    pub fn nonvanishing_point(&self) -> Option<Vec<Scalar>> {
        if self.is_zero() {
            return None;
        }
        let mut point = self.point_from(0);
        point.reverse();
        debug_assert!(!self.evaluate(&point).is_zero());
        Some(point)
    }

    // Values for variables var..nvars, returned in reverse order.
    fn point_from(&self, var: usize) -> Vec<Scalar> {
        if var == self.nvars {
            return Vec::new();
        }
        let deg = self.terms.keys().map(|e| e[var]).max().unwrap_or(0);
        let mut lead = MultiPoly::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            if e[var] == deg {
                let mut e = e.clone();
                e[var] = 0;
                lead.add_term(e, c.clone());
            }
        }
        let rest_rev = lead.point_from(var + 1);
        let rest: Vec<Scalar> = rest_rev.iter().rev().cloned().collect();
        for t in 0..=deg as u64 {
            let mut point = vec![self.field.zero(); var];
            point.push(self.field.from_u64(t));
            point.extend(rest.iter().cloned());
            if !self.evaluate(&point).is_zero() {
                let mut out = rest_rev;
                out.push(self.field.from_u64(t));
                return out;
            }
        }
        unreachable!("a nonzero univariate polynomial of degree d has a non-root in 0..=d")
    }
}

/// `det(base + Σ t_i family[i])` as a polynomial in the `t_i`, by fraction-free
/// elimination over the polynomial ring.
pub fn symbolic_determinant(base: &Matrix, family: &[Matrix]) -> MultiPoly {
    let field = base.field();
    let k = family.len();
    let n = base.rows();
    let mut a: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = MultiPoly::constant(field, k, base.get(i, j).clone());
                    for (v, m) in family.iter().enumerate() {
                        let c = m.get(i, j);
                        if !c.is_zero() {
                            let mut t = MultiPoly::zero(field, k);
                            let mut e = vec![0; k];
                            e[v] = 1;
                            t.add_term(e, c.clone());
                            p = p.add(&t);
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    if n == 0 {
        return MultiPoly::constant(field, k, field.one());
    }
    let mut negate = false;
    let mut prev = MultiPoly::constant(field, k, field.one());
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return MultiPoly::zero(field, k);
        };
        if piv != col {
            a.swap(piv, col);
            negate = !negate;
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let num = a[i][j].mul(&a[col][col]).sub(&a[i][col].mul(&a[col][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][col] = MultiPoly::zero(field, k);
        }
        prev = a[col][col].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        MultiPoly::zero(field, k).sub(&det)
    } else {
        det
    }
}
