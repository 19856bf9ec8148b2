//! Complexes with a homotopy involution, local maps, and local equivalence.
//!
//! A local map X1 -> X2 is a grading-preserving chain map commuting with the
//! involutions up to homotopy and inducing an isomorphism after inverting U.
//! Both the homotopy conditions and the chain conditions are F2-linear once
//! homogeneity has pinned each matrix entry's exponent, so the search for a
//! local map is a finite, exact computation.

use crate::complex::{Grading, GradedComplex};
use crate::error::Error;
use crate::f2::{independent_basis, F2System};
use crate::reduce::{reduce, Reduction};
use crate::umap::{homotopy_solve, UMap};
use crate::upoly::{Mat, UPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaComplex {
    pub complex: GradedComplex,
    pub iota: Mat<UPoly>,
}

/// Default cap on the local-map search space, in kernel bits.
pub const DEFAULT_SEARCH_BUDGET: usize = 24;

impl IotaComplex {
    pub fn new(complex: GradedComplex, iota: Mat<UPoly>) -> Self {
        IotaComplex { complex, iota }
    }

    /// The rank-one model `(F[U]_g, id)`.
    pub fn trivial_at(grading: Grading) -> Self {
        let c = GradedComplex::free_rank_one("trivial", "x", grading);
        let iota = Mat::identity(1, UPoly::one());
        IotaComplex { complex: c, iota }
    }

    /// The trivial complex `(F[U]_0, id)`.
    pub fn trivial() -> Self {
        Self::trivial_at(Grading::from_integer(0))
    }

    pub fn with_identity_involution(complex: GradedComplex) -> Self {
        let n = complex.rank();
        IotaComplex {
            complex,
            iota: Mat::identity(n, UPoly::one()),
        }
    }

    pub fn iota_map(&self) -> UMap {
        UMap {
            source: self.complex.clone(),
            target: self.complex.clone(),
            degree: 0,
            mat: self.iota.clone(),
        }
    }

    /// Tensor product: complexes tensored, involutions tensored.
    pub fn tensor(&self, other: &IotaComplex) -> IotaComplex {
        let complex = self.complex.tensor(&other.complex);
        let n1 = self.complex.rank();
        let n2 = other.complex.rank();
        let mut iota = Mat::zero(n1 * n2, n1 * n2);
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                let a = self.iota.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        let b = other.iota.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        iota.add_to(i1 * n2 + i2, j1 * n2 + j2, &a.mul(b));
                    }
                }
            }
        }
        IotaComplex { complex, iota }
    }

    /// Dual: dual complex, transposed involution.
    pub fn dual(&self) -> IotaComplex {
        IotaComplex {
            complex: self.complex.dual(),
            iota: self.iota.transpose(),
        }
    }
}

/// Outcome of checking the involution axioms.
#[derive(Debug, Clone)]
pub struct IotaReport {
    pub violations: Vec<String>,
    /// Homotopy H with dH + Hd = iota^2 + id, when the axioms hold.
    pub square_homotopy: Option<UMap>,
}

impl IotaReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that (C, iota) is a genuine iota-complex: valid complex, rank-one
/// localization, iota a grading-preserving chain map with iota^2 homotopic
/// to the identity. Violations are data; a witness homotopy is returned on
/// success.
pub fn verify_iota(x: &IotaComplex) -> IotaReport {
    let mut violations = x.complex.validate();
    let im = x.iota_map();
    if !im.is_homogeneous() {
        violations.push("iota is not grading-preserving (degree 0)".into());
    }
    if !im.is_chain_map() {
        violations.push("iota is not a chain map".into());
    }
    let mut square_homotopy = None;
    if violations.is_empty() {
        match reduce(&x.complex) {
            Ok(_) => {}
            Err(Error::NotRankOne(k)) => {
                violations.push(format!(
                    "localization has rank {k}, expected a single tower"
                ));
            }
            Err(e) => violations.push(e.to_string()),
        }
        let square = im.compose(&im).expect("endpoints match");
        let id = UMap::identity(&x.complex);
        match homotopy_solve(&square, &id) {
            Ok(Some(h)) => square_homotopy = Some(h),
            Ok(None) => violations.push("iota^2 is not homotopic to the identity".into()),
            Err(e) => violations.push(e.to_string()),
        }
    }
    IotaReport { violations, square_homotopy }
}

/// Coefficient of the target tower carried by F, measured through the
/// reductions of source and target. The localization condition demands the
/// unit: F must match the tower generators on the nose. A map carrying the
/// source tower to a positive U-power of the target tower (possible when
/// the d-invariants differ) is rejected.
fn tower_coefficient(f: &UMap, r1: &Reduction, r2: &Reduction) -> UPoly {
    let mut e = vec![UPoly::zero(); r1.reduced.rank()];
    e[r1.tower_index] = UPoly::one();
    let in_c1 = r1.include.apply(&e);
    let in_c2 = f.apply(&in_c1);
    let in_red2 = r2.project.apply(&in_c2);
    in_red2[r2.tower_index].clone()
}

/// Is F a local map from X1 to X2? Checks degree 0, the chain condition,
/// iota-equivariance up to homotopy, and the localization isomorphism.
pub fn is_local_map(f: &UMap, x1: &IotaComplex, x2: &IotaComplex) -> Result<bool, Error> {
    if f.degree != 0 {
        return Err(Error::DegreeMismatch(format!(
            "local maps have degree 0, got {}",
            f.degree
        )));
    }
    if f.source != x1.complex || f.target != x2.complex {
        return Err(Error::DegreeMismatch(
            "map endpoints do not match the given iota-complexes".into(),
        ));
    }
    if !f.is_homogeneous() || !f.is_chain_map() {
        return Ok(false);
    }
    let equivariance_defect = x2
        .iota_map()
        .compose(f)?
        .add(&f.compose(&x1.iota_map())?)?;
    let zero = UMap::zero(&x1.complex, &x2.complex, 0);
    if homotopy_solve(&equivariance_defect, &zero)?.is_none() {
        return Ok(false);
    }
    let r1 = reduce(&x1.complex)?;
    let r2 = reduce(&x2.complex)?;
    Ok(tower_coefficient(f, &r1, &r2) == UPoly::one())
}

/// Search for a local map from X1 to X2.
///
/// Unknowns are the F2 bits of the candidate F (degree 0) together with the
/// bits of an equivariance homotopy G (degree 1), each matrix position
/// carrying the exponent forced by homogeneity. The chain condition and
/// iota-equivariance-with-witness are homogeneous F2-linear constraints; the
/// solution set is projected onto the F coordinates and enumerated in a
/// fixed order: basis vectors sorted by leading bit (F positions in
/// row-major target-by-source order), candidate m is the sum of the basis
/// vectors selected by the binary digits of m, candidates visited in
/// increasing m. The localization test (nonzero tower coefficient) is linear
/// in F, so the first passing candidate is the single basis vector with the
/// lowest index whose tower coefficient is nonzero; candidates below it all
/// fail. Returns that witness, or None when the functional vanishes on the
/// whole solution space.
///
/// Errors with SearchBudgetExceeded when the projected solution space has
/// more than `budget` bits.
pub fn find_local_map(
    x1: &IotaComplex,
    x2: &IotaComplex,
    budget: usize,
) -> Result<Option<UMap>, Error> {
    let c1 = &x1.complex;
    let c2 = &x2.complex;
    let n1 = c1.rank();
    let n2 = c2.rank();

    // F-bit and G-bit layout.
    let f_template = UMap::zero(c1, c2, 0);
    let g_template = UMap::zero(c1, c2, 1);
    let mut f_vars: Vec<(usize, usize, u32)> = Vec::new();
    let mut f_var_of = vec![usize::MAX; n2 * n1];
    for i in 0..n2 {
        for j in 0..n1 {
            if let Some(k) = f_template.forced_exponent(i, j) {
                f_var_of[i * n1 + j] = f_vars.len();
                f_vars.push((i, j, k));
            }
        }
    }
    let nf = f_vars.len();
    let mut g_vars: Vec<(usize, usize, u32)> = Vec::new();
    let mut g_var_of = vec![usize::MAX; n2 * n1];
    for i in 0..n2 {
        for j in 0..n1 {
            if let Some(k) = g_template.forced_exponent(i, j) {
                g_var_of[i * n1 + j] = g_vars.len();
                g_vars.push((i, j, k));
            }
        }
    }
    let vars = nf + g_vars.len();

    let mut sys = F2System::new(vars, 2 * n2 * n1);
    let fold = |mut terms: Vec<usize>| {
        terms.sort_unstable();
        let mut out = Vec::with_capacity(terms.len());
        let mut it = terms.into_iter().peekable();
        while let Some(t) = it.next() {
            if it.peek() == Some(&t) {
                it.next();
            } else {
                out.push(t);
            }
        }
        out
    };

    // chain condition: d2 F + F d1 = 0
    for p in 0..n2 {
        for q in 0..n1 {
            let mut terms = Vec::new();
            for x in 0..n2 {
                if !c2.d.get(p, x).is_zero() {
                    let v = f_var_of[x * n1 + q];
                    if v != usize::MAX {
                        terms.push(v);
                    }
                }
            }
            for y in 0..n1 {
                if !c1.d.get(y, q).is_zero() {
                    let v = f_var_of[p * n1 + y];
                    if v != usize::MAX {
                        terms.push(v);
                    }
                }
            }
            sys.add_equation(&fold(terms), false);
        }
    }
    // equivariance with witness: iota2 F + F iota1 + d2 G + G d1 = 0
    for p in 0..n2 {
        for q in 0..n1 {
            let mut terms = Vec::new();
            for x in 0..n2 {
                if !x2.iota.get(p, x).is_zero() {
                    let v = f_var_of[x * n1 + q];
                    if v != usize::MAX {
                        terms.push(v);
                    }
                }
            }
            for y in 0..n1 {
                if !x1.iota.get(y, q).is_zero() {
                    let v = f_var_of[p * n1 + y];
                    if v != usize::MAX {
                        terms.push(v);
                    }
                }
            }
            for x in 0..n2 {
                if !c2.d.get(p, x).is_zero() {
                    let v = g_var_of[x * n1 + q];
                    if v != usize::MAX {
                        terms.push(nf + v);
                    }
                }
            }
            for y in 0..n1 {
                if !c1.d.get(y, q).is_zero() {
                    let v = g_var_of[p * n1 + y];
                    if v != usize::MAX {
                        terms.push(nf + v);
                    }
                }
            }
            sys.add_equation(&fold(terms), false);
        }
    }

    let (_zero, kernel) = sys.solve().expect("homogeneous system is consistent");
    // Project the solution space onto the F coordinates.
    let projected: Vec<Vec<bool>> = kernel
        .into_iter()
        .map(|v| v[..nf].to_vec())
        .collect();
    let basis = independent_basis(projected);
    if basis.len() > budget {
        return Err(Error::SearchBudgetExceeded {
            dim: basis.len(),
            cap: budget,
        });
    }

    let r1 = reduce(c1)?;
    let r2 = reduce(c2)?;
    let build = |bits: &[bool]| -> UMap {
        let mut f = UMap::zero(c1, c2, 0);
        for (b, &(i, j, k)) in bits.iter().zip(f_vars.iter()) {
            if *b {
                f.mat.set(i, j, UPoly::monomial(k));
            }
        }
        f
    };
    for bits in &basis {
        let f = build(bits);
        if tower_coefficient(&f, &r1, &r2) == UPoly::one() {
            debug_assert_eq!(is_local_map(&f, x1, x2), Ok(true));
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Local triviality: local maps both ways against `(F[U]_0, id)`.
pub fn is_locally_trivial(x: &IotaComplex, budget: usize) -> Result<bool, Error> {
    let trivial = IotaComplex::trivial();
    Ok(find_local_map(x, &trivial, budget)?.is_some()
        && find_local_map(&trivial, x, budget)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{grading_frac, grading_int, one, GradedComplex};

    #[test]
    fn trivial_passes_verify() {
        let t = IotaComplex::trivial();
        let rep = verify_iota(&t);
        assert!(rep.is_ok(), "{:?}", rep.violations);
        assert!(rep.square_homotopy.is_some());
    }

    #[test]
    fn zero_involution_fails_verify() {
        let c = GradedComplex::free_rank_one("c", "x", grading_int(0));
        let x = IotaComplex::new(c, Mat::zero(1, 1));
        let rep = verify_iota(&x);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.contains("iota^2")));
    }

    #[test]
    fn identity_is_local_self_map() {
        let t = IotaComplex::trivial();
        let id = UMap::identity(&t.complex);
        assert_eq!(is_local_map(&id, &t, &t), Ok(true));
        let z = UMap::zero(&t.complex, &t.complex, 0);
        assert_eq!(is_local_map(&z, &t, &t), Ok(false));
    }

    #[test]
    fn search_finds_identity_on_trivial() {
        let t = IotaComplex::trivial();
        let f = find_local_map(&t, &t, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .expect("identity exists");
        assert_eq!(*f.mat.get(0, 0), one());
    }

    #[test]
    fn grading_obstruction_blocks_search() {
        let a = IotaComplex::trivial();
        let b = IotaComplex::trivial_at(grading_int(2));
        assert!(find_local_map(&a, &b, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .is_none());
    }

    #[test]
    fn quarter_shifted_model_is_not_trivial() {
        let x = IotaComplex::trivial_at(grading_frac(1, 4));
        assert_eq!(is_locally_trivial(&x, DEFAULT_SEARCH_BUDGET), Ok(false));
    }

    #[test]
    fn tensor_with_dual_of_quarter_model_is_trivial() {
        let x = IotaComplex::trivial_at(grading_frac(1, 4));
        let y = x.tensor(&x.dual());
        assert!(verify_iota(&y).is_ok());
        assert_eq!(is_locally_trivial(&y, DEFAULT_SEARCH_BUDGET), Ok(true));
    }

    #[test]
    fn tensor_dual_gradings() {
        let x = IotaComplex::trivial_at(grading_frac(1, 4));
        assert_eq!(x.dual().complex.gens[0].grading, grading_frac(-1, 4));
        let t = x.tensor(&x.dual());
        assert_eq!(t.complex.gens[0].grading, grading_int(0));
    }
}
