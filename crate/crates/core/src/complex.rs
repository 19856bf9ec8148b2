//! Finitely generated free graded chain complexes over `F2[U]`.
//!
//! The variable U has degree -2 and the differential has degree -1.
//! Gradings are rationals whose pairwise differences must be integers (a
//! single coset of Q/Z); this accommodates the quarter-integer gradings of
//! the surgery models while keeping every homogeneity check exact.
//!
//! The differential is stored as a square matrix: entry (i, j) is the
//! coefficient of generator i in the boundary of generator j, so column j
//! spells out the boundary of the j-th generator.

use num_rational::Ratio;
use num_traits::Zero;

use crate::upoly::{Mat, UPoly};

pub type Grading = Ratio<i64>;

pub fn grading_int(n: i64) -> Grading {
    Ratio::from_integer(n)
}

pub fn grading_frac(num: i64, den: i64) -> Grading {
    Ratio::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub grading: Grading,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    pub name: String,
    pub gens: Vec<Generator>,
    pub d: Mat<UPoly>,
}

impl GradedComplex {
    /// Build a complex from (id, grading) pairs and differential entries
    /// given as (source id, target id, polynomial).
    pub fn new(
        name: impl Into<String>,
        gens: Vec<(impl Into<String>, Grading)>,
        entries: &[(&str, &str, UPoly)],
    ) -> Self {
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(id, grading)| Generator { id: id.into(), grading })
            .collect();
        let n = gens.len();
        let mut d = Mat::zero(n, n);
        let index = |id: &str| {
            gens.iter()
                .position(|g| g.id == id)
                .unwrap_or_else(|| panic!("unknown generator id {id}"))
        };
        for (src, tgt, poly) in entries {
            let j = index(src);
            let i = index(tgt);
            d.add_to(i, j, poly);
        }
        GradedComplex { name: name.into(), gens, d }
    }

    /// Rank-one complex `F[U]` with its generator in the given grading.
    pub fn free_rank_one(name: impl Into<String>, id: impl Into<String>, grading: Grading) -> Self {
        GradedComplex::new(name, vec![(id.into(), grading)], &[])
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn grading(&self, i: usize) -> Grading {
        self.gens[i].grading
    }

    /// Exponent forced on entry (target i, source j) by homogeneity:
    /// gr(i) - 2k = gr(j) - 1. Returns None when no exponent is allowed.
    pub fn forced_exponent(&self, i: usize, j: usize) -> Option<u32> {
        forced_exponent_for(self.grading(i), self.grading(j) - grading_int(1))
    }

    /// Check every structural invariant; an empty list means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.rank();
        for i in 0..n {
            for j in i + 1..n {
                if self.gens[i].id == self.gens[j].id {
                    out.push(format!("duplicate generator id {}", self.gens[i].id));
                }
            }
        }
        if n > 0 {
            let base = self.grading(0);
            for i in 1..n {
                if !(self.grading(i) - base).is_integer() {
                    out.push(format!(
                        "gradings of {} and {} differ by a non-integer {}",
                        self.gens[0].id,
                        self.gens[i].id,
                        self.grading(i) - base
                    ));
                }
            }
        }
        for j in 0..n {
            for i in 0..n {
                let entry = self.d.get(i, j);
                if entry.is_zero() {
                    continue;
                }
                for k in entry.exponents() {
                    let lhs = self.grading(i) - grading_int(2 * k as i64);
                    let rhs = self.grading(j) - grading_int(1);
                    if lhs != rhs {
                        out.push(format!(
                            "homogeneity violated at d[{} <- {}]: U^{} term has grading {}, differential of {} must land in grading {}",
                            self.gens[i].id, self.gens[j].id, k, lhs, self.gens[j].id, rhs
                        ));
                    }
                }
            }
        }
        let dd = self.d.mul(&self.d);
        for j in 0..n {
            for i in 0..n {
                if !dd.get(i, j).is_zero() {
                    out.push(format!(
                        "d^2 != 0: component of {} in d^2({}) is {}",
                        self.gens[i].id,
                        self.gens[j].id,
                        dd.get(i, j)
                    ));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Tensor product over `F2[U]`. Generators are pairs "a⊗b" with gradings
    /// added; the differential obeys the Leibniz rule (no signs over F2).
    pub fn tensor(&self, other: &GradedComplex) -> GradedComplex {
        let n1 = self.rank();
        let n2 = other.rank();
        let mut gens = Vec::with_capacity(n1 * n2);
        for g1 in &self.gens {
            for g2 in &other.gens {
                gens.push(Generator {
                    id: format!("{}⊗{}", g1.id, g2.id),
                    grading: g1.grading + g2.grading,
                });
            }
        }
        let idx = |i1: usize, i2: usize| i1 * n2 + i2;
        let mut d = Mat::zero(n1 * n2, n1 * n2);
        for j1 in 0..n1 {
            for j2 in 0..n2 {
                let col = idx(j1, j2);
                for i1 in 0..n1 {
                    let e = self.d.get(i1, j1);
                    if !e.is_zero() {
                        d.add_to(idx(i1, j2), col, e);
                    }
                }
                for i2 in 0..n2 {
                    let e = other.d.get(i2, j2);
                    if !e.is_zero() {
                        d.add_to(idx(j1, i2), col, e);
                    }
                }
            }
        }
        GradedComplex {
            name: format!("{}⊗{}", self.name, other.name),
            gens,
            d,
        }
    }

    /// `F2[U]`-dual: generators "a*" with negated gradings, transposed
    /// differential.
    pub fn dual(&self) -> GradedComplex {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator {
                id: format!("{}*", g.id),
                grading: -g.grading,
            })
            .collect();
        GradedComplex {
            name: format!("{}*", self.name),
            gens,
            d: self.d.transpose(),
        }
    }
}

/// Exponent k >= 0 with `target_grading - 2k = image_grading`, if any.
pub fn forced_exponent_for(target_grading: Grading, image_grading: Grading) -> Option<u32> {
    let k2 = target_grading - image_grading;
    if !k2.is_integer() {
        return None;
    }
    let k2 = k2.to_integer();
    if k2 < 0 || k2 % 2 != 0 {
        return None;
    }
    Some((k2 / 2) as u32)
}

/// Helper for tests and builders: U^k.
pub fn u(k: u32) -> UPoly {
    UPoly::monomial(k)
}

/// Helper: the unit polynomial.
pub fn one() -> UPoly {
    UPoly::one()
}

impl GradedComplex {

    /// Shift every grading by the same rational.
    pub fn shifted(&self, shift: Grading) -> GradedComplex {
        let mut out = self.clone();
        if !shift.is_zero() {
            for g in &mut out.gens {
                g.grading += shift;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_is_valid() {
        let c = GradedComplex::free_rank_one("c", "x0", grading_int(0));
        assert!(c.validate().is_empty());
    }

    #[test]
    fn homogeneity_violation_reported() {
        // two generators a(0), b(1), da = b: gr(b) should be -1
        let c = GradedComplex::new(
            "c",
            vec![("a", grading_int(0)), ("b", grading_int(1))],
            &[("a", "b", one())],
        );
        let v = c.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("homogeneity"));
    }

    #[test]
    fn acyclic_pair_is_valid() {
        let c = GradedComplex::new(
            "c",
            vec![("a", grading_int(0)), ("b", grading_int(-1))],
            &[("a", "b", one())],
        );
        assert!(c.validate().is_empty());
    }

    #[test]
    fn d_squared_violation_reported() {
        // a -> b -> c with unit arrows at consistent gradings composes to
        // a nonzero d^2
        let c = GradedComplex::new(
            "c",
            vec![
                ("a", grading_int(0)),
                ("b", grading_int(-1)),
                ("c", grading_int(-2)),
            ],
            &[("a", "b", one()), ("b", "c", one())],
        );
        let v = c.validate();
        assert!(v.iter().any(|s| s.contains("d^2")));
    }

    #[test]
    fn tensor_unit_is_identity_like() {
        let unit = GradedComplex::free_rank_one("F", "1", grading_int(0));
        let c = GradedComplex::new(
            "c",
            vec![("a", grading_int(0)), ("b", grading_int(-1))],
            &[("a", "b", one())],
        );
        let t = unit.tensor(&c);
        assert_eq!(t.rank(), 2);
        assert!(t.is_valid());
        assert_eq!(t.gens[0].grading, grading_int(0));
        assert_eq!(*t.d.get(1, 0), one());
    }

    #[test]
    fn tensor_adds_gradings() {
        let a = GradedComplex::free_rank_one("a", "x", grading_frac(1, 4));
        let b = GradedComplex::free_rank_one("b", "y", grading_frac(-1, 4));
        let t = a.tensor(&b);
        assert_eq!(t.rank(), 1);
        assert_eq!(t.gens[0].grading, grading_int(0));
        assert_eq!(t.gens[0].id, "x⊗y");
    }

    #[test]
    fn dual_negates_and_transposes() {
        let c = GradedComplex::free_rank_one("c", "x", grading_frac(1, 4));
        let d = c.dual();
        assert_eq!(d.gens[0].grading, grading_frac(-1, 4));
        assert_eq!(d.gens[0].id, "x*");

        let trefoil_like = GradedComplex::new(
            "t",
            vec![
                ("a", grading_int(0)),
                ("b", grading_int(-1)),
                ("c", grading_int(-2)),
            ],
            &[("a", "b", one()), ("c", "b", u(1))],
        );
        // ∂a = b needs gr(b) = -1 ok; ∂c = U b needs gr(b) - 2 = gr(c) - 1
        assert!(trefoil_like.is_valid());
        let dd = trefoil_like.dual().dual();
        assert_eq!(dd.d, trefoil_like.d);
        for (g, h) in dd.gens.iter().zip(trefoil_like.gens.iter()) {
            assert_eq!(g.grading, h.grading);
            assert_eq!(g.id, format!("{}**", h.id));
        }
    }
}
