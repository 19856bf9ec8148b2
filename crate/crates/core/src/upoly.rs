//! Polynomials over the two-element field in one variable `U` and in the
//! pair `U, V`. Coefficients are bits, so a polynomial is just its set of
//! exponents and addition is symmetric difference.

use std::collections::BTreeSet;
use std::fmt;

/// Element of `F2[U]`: a finite set of U-exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct UPoly {
    exps: BTreeSet<u32>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        UPoly::monomial(0)
    }

    /// The monomial U^k.
    pub fn monomial(k: u32) -> Self {
        let mut exps = BTreeSet::new();
        exps.insert(k);
        UPoly { exps }
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let mut p = UPoly::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// True when the coefficient of U^0 is 1, i.e. the polynomial is a unit
    /// plus higher terms.
    pub fn has_unit_term(&self) -> bool {
        self.exps.contains(&0)
    }

    pub fn contains(&self, k: u32) -> bool {
        self.exps.contains(&k)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.exps.iter().copied()
    }

    pub fn min_exponent(&self) -> Option<u32> {
        self.exps.iter().next().copied()
    }

    /// If the polynomial is a single monomial U^k, returns k.
    pub fn as_monomial(&self) -> Option<u32> {
        if self.exps.len() == 1 {
            self.min_exponent()
        } else {
            None
        }
    }

    fn toggle(&mut self, e: u32) {
        if !self.exps.remove(&e) {
            self.exps.insert(e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &e in &other.exps {
            out.toggle(e);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = UPoly::zero();
        for &a in &self.exps {
            for &b in &other.exps {
                out.toggle(a + b);
            }
        }
        out
    }

    pub fn times_monomial(&self, k: u32) -> Self {
        UPoly {
            exps: self.exps.iter().map(|&e| e + k).collect(),
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for &e in &self.exps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "U")?,
                _ => write!(f, "U^{}", e)?,
            }
        }
        Ok(())
    }
}

/// Element of `F2[U,V]`: a finite set of (U-exponent, V-exponent) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct UVPoly {
    exps: BTreeSet<(u32, u32)>,
}

impl UVPoly {
    pub fn zero() -> Self {
        UVPoly::default()
    }

    pub fn one() -> Self {
        UVPoly::monomial(0, 0)
    }

    pub fn monomial(a: u32, b: u32) -> Self {
        let mut exps = BTreeSet::new();
        exps.insert((a, b));
        UVPoly { exps }
    }

    pub fn from_exps(exps: &[(u32, u32)]) -> Self {
        let mut p = UVPoly::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn has_unit_term(&self) -> bool {
        self.exps.contains(&(0, 0))
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn as_monomial(&self) -> Option<(u32, u32)> {
        if self.exps.len() == 1 {
            self.exps.iter().next().copied()
        } else {
            None
        }
    }

    fn toggle(&mut self, e: (u32, u32)) {
        if !self.exps.remove(&e) {
            self.exps.insert(e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &e in &other.exps {
            out.toggle(e);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = UVPoly::zero();
        for &(a1, b1) in &self.exps {
            for &(a2, b2) in &other.exps {
                out.toggle((a1 + a2, b1 + b2));
            }
        }
        out
    }

    /// Swap the roles of U and V in every term.
    pub fn swap_vars(&self) -> Self {
        UVPoly {
            exps: self.exps.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }
}

impl fmt::Display for UVPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(a, b) in &self.exps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (a, b) {
                (0, 0) => write!(f, "1")?,
                (a, 0) => {
                    if a == 1 {
                        write!(f, "U")?
                    } else {
                        write!(f, "U^{}", a)?
                    }
                }
                (0, b) => {
                    if b == 1 {
                        write!(f, "V")?
                    } else {
                        write!(f, "V^{}", b)?
                    }
                }
                (a, b) => {
                    if a == 1 {
                        write!(f, "U ")?
                    } else {
                        write!(f, "U^{} ", a)?
                    }
                    if b == 1 {
                        write!(f, "V")?
                    } else {
                        write!(f, "V^{}", b)?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coefficient trait for the little dense matrices used throughout.
pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Coeff for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

impl Coeff for UVPoly {
    fn zero() -> Self {
        UVPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Plain F2 bit, used for localized pattern reductions.
impl Coeff for bool {
    fn zero() -> Self {
        false
    }
    fn is_zero(&self) -> bool {
        !*self
    }
    fn add(&self, other: &Self) -> Self {
        self ^ other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
}

/// Dense matrix with entries in a coefficient type. Row i, column j is the
/// coefficient of target generator i in the image of source generator j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T: Coeff> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Coeff> Mat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, one: T) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &T) {
        let cur = self.get(r, c).add(v);
        self.set(r, c, cur);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = Mat::zero(self.rows, self.cols);
        for i in 0..self.data.len() {
            out.data[i] = self.data[i].add(&other.data[i]);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    out.add_to(i, j, &prod);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Submatrix keeping the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Mat::zero(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                out.set(ri, ci, self.get(r, c).clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upoly_ring_ops() {
        let p = UPoly::from_exps(&[0, 2]);
        let q = UPoly::from_exps(&[1]);
        assert_eq!(p.add(&p), UPoly::zero());
        assert_eq!(p.mul(&q), UPoly::from_exps(&[1, 3]));
        assert_eq!(p.mul(&UPoly::one()), p);
        // (1 + U)^2 = 1 + U^2 over F2
        let r = UPoly::from_exps(&[0, 1]);
        assert_eq!(r.mul(&r), UPoly::from_exps(&[0, 2]));
        assert!(UPoly::one().has_unit_term());
        assert!(!q.has_unit_term());
    }

    #[test]
    fn uvpoly_ops() {
        let p = UVPoly::from_exps(&[(1, 0), (0, 1)]);
        assert_eq!(p.mul(&p), UVPoly::from_exps(&[(2, 0), (0, 2)]));
        assert_eq!(p.swap_vars(), p);
        let q = UVPoly::monomial(2, 1);
        assert_eq!(q.swap_vars(), UVPoly::monomial(1, 2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(UPoly::zero().to_string(), "0");
        assert_eq!(UPoly::from_exps(&[0, 1, 3]).to_string(), "1 + U + U^3");
        assert_eq!(UVPoly::monomial(2, 1).to_string(), "U^2 V");
        assert_eq!(UVPoly::one().to_string(), "1");
    }

    #[test]
    fn matrix_mul() {
        let mut a = Mat::<UPoly>::zero(2, 2);
        a.set(0, 1, UPoly::monomial(1));
        let mut b = Mat::<UPoly>::zero(2, 2);
        b.set(1, 0, UPoly::monomial(2));
        let c = a.mul(&b);
        assert_eq!(*c.get(0, 0), UPoly::monomial(3));
        assert!(a.mul(&a).is_zero());
    }
}
