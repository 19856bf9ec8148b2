//! One-variable complexes extracted from a bigraded knot complex: the
//! truncations feeding the surgery mapping cone.
//!
//! For a generator x with Alexander level A(x), write
//! floor_n(x) = max(0, A(x) - n + 1). The level-n truncation keeps the
//! translates U^a V^b x with a >= 0 and b >= floor_n(x); it is free over the
//! diagonal variable on the corner elements, giving a complex with one
//! generator per knot generator, grading gr_w(x) - 2 floor_n(x), and entry
//! exponents floor_n(source) + a - floor_n(target). The untruncated version
//! (floor identically 0) keeps gr_w and just forgets V. The comparison map
//! v is diagonal, U^{floor_n(x)} on each generator.
//!
//! The convention for the V-side cutoff (strictly below n) is pinned by the
//! trefoil: the right-handed model must come out with d-invariant -2 at
//! level 1, and its mirror with 0. The unknot gives the rank-one complex at
//! grading 0 for every n under either cutoff, so the trefoil is the
//! distinguishing oracle.

use crate::complex::{Grading, GradedComplex};
use crate::error::Error;
use crate::knotlike::KnotLikeComplex;
use crate::umap::UMap;
use crate::upoly::{Mat, UPoly};

fn validated(c: &KnotLikeComplex) -> Result<(), Error> {
    let v = c.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "knot complex {} is invalid: {}",
            c.name, v[0]
        )))
    }
}

fn floor_n(c: &KnotLikeComplex, n: i64, x: usize) -> u32 {
    let a = c.alexander(x).expect("validated complex has integral levels");
    (a - n + 1).max(0) as u32
}

/// The level-n truncation A_n as a one-variable complex.
pub fn a_n_complex(c: &KnotLikeComplex, n: i64) -> Result<GradedComplex, Error> {
    if n <= 0 {
        return Err(Error::InvalidInput(format!(
            "truncation level must be positive, got {n}"
        )));
    }
    validated(c)?;
    let m = c.rank();
    let gens: Vec<(String, Grading)> = (0..m)
        .map(|x| {
            (
                c.gens[x].id.clone(),
                c.gens[x].gr_w - Grading::from_integer(2 * floor_n(c, n, x) as i64),
            )
        })
        .collect();
    let mut out = GradedComplex::new(format!("A{}({})", n, c.name), gens, &[]);
    for s in 0..m {
        for t in 0..m {
            let e = c.d.get(t, s);
            if e.is_zero() {
                continue;
            }
            let (a, _b) = e.as_monomial().expect("validated entries are monomials");
            let k = floor_n(c, n, s) as i64 + a as i64 - floor_n(c, n, t) as i64;
            debug_assert!(k >= 0, "truncation is a subcomplex");
            out.d.set(t, s, UPoly::monomial(k as u32));
        }
    }
    debug_assert!(out.is_valid(), "{:?}", out.validate());
    Ok(out)
}

/// The untruncated complex B: forget V, keep gr_w.
pub fn b_complex(c: &KnotLikeComplex) -> Result<GradedComplex, Error> {
    validated(c)?;
    let m = c.rank();
    let gens: Vec<(String, Grading)> = (0..m)
        .map(|x| (c.gens[x].id.clone(), c.gens[x].gr_w))
        .collect();
    let mut out = GradedComplex::new(format!("B({})", c.name), gens, &[]);
    for s in 0..m {
        for t in 0..m {
            let e = c.d.get(t, s);
            if e.is_zero() {
                continue;
            }
            let (a, _b) = e.as_monomial().expect("validated entries are monomials");
            out.d.set(t, s, UPoly::monomial(a));
        }
    }
    debug_assert!(out.is_valid());
    Ok(out)
}

/// The canonical comparison map A_n -> B: inclusion of the truncation,
/// diagonal with entries U^{floor_n(x)}.
pub fn v_map(c: &KnotLikeComplex, n: i64) -> Result<UMap, Error> {
    let a = a_n_complex(c, n)?;
    let b = b_complex(c)?;
    let m = c.rank();
    let mut mat = Mat::zero(m, m);
    for x in 0..m {
        mat.set(x, x, UPoly::monomial(floor_n(c, n, x)));
    }
    let v = UMap { source: a, target: b, degree: 0, mat };
    debug_assert!(v.is_homogeneous());
    debug_assert!(v.is_chain_map());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{grading_int, GradedComplex};
    use crate::reduce::{d_invariant, reduce};
    use crate::upoly::UVPoly;

    fn unknot() -> KnotLikeComplex {
        KnotLikeComplex::new("unknot", vec![("e", grading_int(0), grading_int(0))], &[])
    }

    fn trefoil_rh() -> KnotLikeComplex {
        KnotLikeComplex::new(
            "trefoil",
            vec![
                ("a", grading_int(0), grading_int(-2)),
                ("b", grading_int(-1), grading_int(-1)),
                ("c", grading_int(-2), grading_int(0)),
            ],
            &[
                ("b", "a", UVPoly::monomial(1, 0)),
                ("b", "c", UVPoly::monomial(0, 1)),
            ],
        )
    }

    fn figure_eight() -> KnotLikeComplex {
        KnotLikeComplex::new(
            "figure8",
            vec![
                ("e", grading_int(0), grading_int(0)),
                ("p", grading_int(0), grading_int(0)),
                ("q", grading_int(1), grading_int(-1)),
                ("r", grading_int(-1), grading_int(1)),
                ("s", grading_int(0), grading_int(0)),
            ],
            &[
                ("p", "q", UVPoly::monomial(1, 0)),
                ("p", "r", UVPoly::monomial(0, 1)),
                ("q", "s", UVPoly::monomial(0, 1)),
                ("r", "s", UVPoly::monomial(1, 0)),
            ],
        )
    }

    #[test]
    fn unknot_truncations_are_rank_one() {
        for n in 1..=4 {
            let a = a_n_complex(&unknot(), n).unwrap();
            assert_eq!(a.rank(), 1);
            assert_eq!(a.gens[0].grading, grading_int(0));
            let b = b_complex(&unknot()).unwrap();
            assert_eq!(b, GradedComplex::free_rank_one("B(unknot)", "e", grading_int(0)));
            let v = v_map(&unknot(), n).unwrap();
            assert_eq!(*v.mat.get(0, 0), UPoly::one());
        }
    }

    #[test]
    fn invalid_level_rejected() {
        assert!(matches!(
            a_n_complex(&unknot(), 0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn trefoil_chirality_pins_the_cutoff() {
        // right-handed: d(A_1) = -2; left-handed mirror: d(A_1) = 0
        let rh = trefoil_rh();
        let a1 = a_n_complex(&rh, 1).unwrap();
        assert_eq!(d_invariant(&a1).unwrap(), grading_int(-2));
        let lh = rh.mirror();
        let a1m = a_n_complex(&lh, 1).unwrap();
        assert_eq!(d_invariant(&a1m).unwrap(), grading_int(0));
        // at level 2 the truncation is already untruncated for genus one
        let a2 = a_n_complex(&rh, 2).unwrap();
        assert_eq!(d_invariant(&a2).unwrap(), grading_int(0));
    }

    #[test]
    fn figure_eight_level_one_vanishes() {
        let f8 = figure_eight();
        for n in 1..=4 {
            let a = a_n_complex(&f8, n).unwrap();
            assert_eq!(d_invariant(&a).unwrap(), grading_int(0), "level {n}");
        }
    }

    #[test]
    fn b_reduces_to_tower_at_zero_on_corpus() {
        for c in [unknot(), trefoil_rh(), trefoil_rh().mirror(), figure_eight()] {
            let b = b_complex(&c).unwrap();
            let r = reduce(&b).unwrap();
            assert_eq!(r.normal_form.tower_grading, grading_int(0));
            assert!(r.normal_form.steps.is_empty());
        }
    }

    #[test]
    fn v_is_a_chain_map_on_corpus() {
        for c in [unknot(), trefoil_rh(), figure_eight()] {
            for n in 1..=3 {
                let v = v_map(&c, n).unwrap();
                assert!(v.is_chain_map());
                assert!(v.is_homogeneous());
            }
        }
    }
}
