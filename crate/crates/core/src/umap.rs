//! Homogeneous `F2[U]`-linear maps between graded complexes.
//!
//! A map of degree d sends a generator of grading g to elements of grading
//! g + d; homogeneity forces the U-exponent of each matrix entry, so a map
//! is finitely much data even before imposing any chain conditions.

use crate::complex::{forced_exponent_for, GradedComplex};
use crate::error::Error;
use crate::upoly::{Mat, UPoly};
use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UMap {
    pub source: GradedComplex,
    pub target: GradedComplex,
    pub degree: i64,
    pub mat: Mat<UPoly>,
}

impl UMap {
    pub fn zero(source: &GradedComplex, target: &GradedComplex, degree: i64) -> Self {
        UMap {
            mat: Mat::zero(target.rank(), source.rank()),
            source: source.clone(),
            target: target.clone(),
            degree,
        }
    }

    pub fn identity(c: &GradedComplex) -> Self {
        UMap {
            mat: Mat::identity(c.rank(), UPoly::one()),
            source: c.clone(),
            target: c.clone(),
            degree: 0,
        }
    }

    pub fn from_entries(
        source: &GradedComplex,
        target: &GradedComplex,
        degree: i64,
        entries: &[(&str, &str, UPoly)],
    ) -> Self {
        let mut m = UMap::zero(source, target, degree);
        for (src, tgt, poly) in entries {
            let j = source.index_of(src).expect("unknown source generator");
            let i = target.index_of(tgt).expect("unknown target generator");
            m.mat.add_to(i, j, poly);
        }
        m
    }

    /// Exponent forced on entry (i, j):
    /// target_grading(i) - 2k = source_grading(j) + degree.
    pub fn forced_exponent(&self, i: usize, j: usize) -> Option<u32> {
        forced_exponent_for(
            self.target.grading(i),
            self.source.grading(j) + Ratio::from_integer(self.degree),
        )
    }

    /// All entries homogeneous for this degree?
    pub fn is_homogeneous(&self) -> bool {
        for j in 0..self.source.rank() {
            for i in 0..self.target.rank() {
                let e = self.mat.get(i, j);
                if e.is_zero() {
                    continue;
                }
                match self.forced_exponent(i, j) {
                    Some(k) => {
                        if e.exponents().any(|x| x != k) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }

    /// Chain map condition d_target ∘ F = F ∘ d_source (no signs over F2).
    pub fn is_chain_map(&self) -> bool {
        let lhs = self.target.d.mul(&self.mat);
        let rhs = self.mat.mul(&self.source.d);
        lhs == rhs
    }

    /// The chain-map defect d∘F + F∘d as a raw matrix.
    pub fn chain_defect(&self) -> Mat<UPoly> {
        self.target.d.mul(&self.mat).add(&self.mat.mul(&self.source.d))
    }

    pub fn compose(&self, inner: &UMap) -> Result<UMap, Error> {
        if inner.target != self.source {
            return Err(Error::DegreeMismatch(format!(
                "cannot compose: inner target {} != outer source {}",
                inner.target.name, self.source.name
            )));
        }
        Ok(UMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            degree: self.degree + inner.degree,
            mat: self.mat.mul(&inner.mat),
        })
    }

    pub fn add(&self, other: &UMap) -> Result<UMap, Error> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::DegreeMismatch(
                "cannot add maps with different endpoints or degrees".into(),
            ));
        }
        Ok(UMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            mat: self.mat.add(&other.mat),
        })
    }

    /// Apply to a column vector of polynomials indexed by source generators.
    pub fn apply(&self, v: &[UPoly]) -> Vec<UPoly> {
        assert_eq!(v.len(), self.source.rank());
        let mut out = vec![UPoly::zero(); self.target.rank()];
        for j in 0..self.source.rank() {
            if v[j].is_zero() {
                continue;
            }
            for i in 0..self.target.rank() {
                let e = self.mat.get(i, j);
                if !e.is_zero() {
                    out[i] = out[i].add(&e.mul(&v[j]));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

/// Solve dH + Hd = f + g for a homotopy H of degree deg(f) + 1.
///
/// Homogeneity pins the exponent of every H-entry, so the unknowns are a
/// finite set of bits and the equation is F2-linear. Returns the first
/// solution in the solver's deterministic order, or None when f and g are
/// not homotopic.
pub fn homotopy_solve(f: &UMap, g: &UMap) -> Result<Option<UMap>, Error> {
    if f.source != g.source || f.target != g.target || f.degree != g.degree {
        return Err(Error::DegreeMismatch(
            "homotopy_solve needs maps with equal endpoints and degree".into(),
        ));
    }
    let rhs = f.add(g)?;
    solve_homotopy_equation(&rhs)
}

/// Solve dH + Hd = rhs with H of degree rhs.degree + 1.
pub(crate) fn solve_homotopy_equation(rhs: &UMap) -> Result<Option<UMap>, Error> {
    let src = &rhs.source;
    let tgt = &rhs.target;
    let hdeg = rhs.degree + 1;
    let ns = src.rank();
    let nt = tgt.rank();

    // Unknown bits: positions of H where a nonzero entry is allowed.
    let mut var_of = vec![usize::MAX; nt * ns];
    let mut vars = Vec::new();
    for i in 0..nt {
        for j in 0..ns {
            if let Some(k) = forced_exponent_for(
                tgt.grading(i),
                src.grading(j) + Ratio::from_integer(hdeg),
            ) {
                var_of[i * ns + j] = vars.len();
                vars.push((i, j, k));
            }
        }
    }

    // One equation per matrix position of the result.
    let mut sys = crate::f2::F2System::new(vars.len(), nt * ns + 1);
    let mut inconsistent = false;
    for p in 0..nt {
        for q in 0..ns {
            let mut terms: Vec<usize> = Vec::new();
            // (d_t H)_{p,q} = sum_x d_t[p,x] H[x,q]
            for x in 0..nt {
                let e = tgt.d.get(p, x);
                if e.is_zero() {
                    continue;
                }
                let v = var_of[x * ns + q];
                if v != usize::MAX {
                    terms.push(v);
                }
            }
            // (H d_s)_{p,q} = sum_y H[p,y] d_s[y,q]
            for y in 0..ns {
                let e = src.d.get(y, q);
                if e.is_zero() {
                    continue;
                }
                let v = var_of[p * ns + y];
                if v != usize::MAX {
                    terms.push(v);
                }
            }
            terms.sort_unstable();
            // duplicate variables cancel over F2
            let mut folded = Vec::with_capacity(terms.len());
            let mut iter = terms.into_iter().peekable();
            while let Some(t) = iter.next() {
                if iter.peek() == Some(&t) {
                    iter.next();
                } else {
                    folded.push(t);
                }
            }
            let b = !rhs.mat.get(p, q).is_zero();
            if folded.is_empty() && b {
                inconsistent = true;
            }
            sys.add_equation(&folded, b);
        }
    }
    if inconsistent {
        return Ok(None);
    }
    let Some((sol, _kernel)) = sys.solve() else {
        return Ok(None);
    };
    let mut h = UMap::zero(src, tgt, hdeg);
    for (bit, &(i, j, k)) in sol.iter().zip(vars.iter()) {
        if *bit {
            h.mat.set(i, j, UPoly::monomial(k));
        }
    }
    debug_assert!({
        let check = tgt.d.mul(&h.mat).add(&h.mat.mul(&src.d));
        check == rhs.mat
    });
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{grading_int, one, u, GradedComplex};

    fn acyclic_pair() -> GradedComplex {
        GradedComplex::new(
            "p",
            vec![("a", grading_int(0)), ("b", grading_int(-1))],
            &[("a", "b", one())],
        )
    }

    #[test]
    fn identity_is_chain_map() {
        let c = acyclic_pair();
        let id = UMap::identity(&c);
        assert!(id.is_chain_map());
        assert!(id.is_homogeneous());
    }

    #[test]
    fn homotopy_of_equal_maps_is_zero_solution() {
        let c = acyclic_pair();
        let id = UMap::identity(&c);
        let h = homotopy_solve(&id, &id).unwrap().unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn contractible_pair_identity_nullhomotopic() {
        let c = acyclic_pair();
        let id = UMap::identity(&c);
        let z = UMap::zero(&c, &c, 0);
        let h = homotopy_solve(&id, &z).unwrap().expect("H should exist");
        // dH + Hd = id, and H(b) = a is the only candidate
        assert_eq!(*h.mat.get(0, 1), one());
    }

    #[test]
    fn tower_with_step_identity_not_nullhomotopic() {
        // x(0) free, plus step a(3) --U^2--> b(6)
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(3)),
                ("b", grading_int(6)),
            ],
            &[("a", "b", u(2))],
        );
        assert!(c.is_valid());
        let id = UMap::identity(&c);
        let z = UMap::zero(&c, &c, 0);
        assert!(homotopy_solve(&id, &z).unwrap().is_none());
    }

    #[test]
    fn degree_mismatch_is_error() {
        let c = acyclic_pair();
        let id = UMap::identity(&c);
        let z = UMap::zero(&c, &c, 2);
        assert!(matches!(
            homotopy_solve(&id, &z),
            Err(Error::DegreeMismatch(_))
        ));
    }
}
