//! Reduction of a graded `F2[U]`-complex to its normal form: one free tower
//! plus two-step pieces `F[U] --U^i--> F[U]`.
//!
//! Phase 1 cancels differential entries carrying a unit coefficient
//! (Gaussian cancellation of an acyclic pair, smallest (row, column) first).
//! Phase 2 diagonalizes the remaining differential, whose entries are all
//! divisible by U, using homogeneous changes of basis with pivots of minimal
//! U-exponent. Every move is an explicit homotopy equivalence and the
//! composite zig-zag maps are returned with the reduced complex.

use crate::complex::{GradedComplex, Grading};
use crate::error::Error;
use crate::umap::UMap;
use crate::upoly::{Mat, UPoly};

/// One torsion summand: the top (source) generator's grading and the length
/// i of the arrow ∂(top) = U^i · bottom. The bottom generator then sits in
/// grading top + 2i - 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub top_grading: Grading,
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub tower_grading: Grading,
    pub steps: Vec<Step>,
}

impl NormalForm {
    /// Build the model complex this normal form describes: a tower generator
    /// `t` plus one two-step pair per step.
    pub fn reconstruction(&self, name: impl Into<String>) -> GradedComplex {
        let mut gens: Vec<(String, Grading)> = vec![("t".to_string(), self.tower_grading)];
        let mut entries: Vec<(String, String, UPoly)> = Vec::new();
        for (idx, s) in self.steps.iter().enumerate() {
            let top = format!("s{idx}.top");
            let bot = format!("s{idx}.bot");
            let bot_grading =
                s.top_grading + Grading::from_integer(2 * s.length as i64 - 1);
            gens.push((top.clone(), s.top_grading));
            gens.push((bot.clone(), bot_grading));
            entries.push((top, bot, UPoly::monomial(s.length)));
        }
        let entry_refs: Vec<(&str, &str, UPoly)> = entries
            .iter()
            .map(|(a, b, p)| (a.as_str(), b.as_str(), p.clone()))
            .collect();
        GradedComplex::new(name, gens, &entry_refs)
    }

    pub fn max_step_length(&self) -> u32 {
        self.steps.iter().map(|s| s.length).max().unwrap_or(0)
    }
}

/// Result of reducing a complex: the normal form, the reduced complex
/// (tower and step generators keep their original names), and the zig-zag
/// maps. `project ∘ include = id` and `include ∘ project = id + dH + Hd`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub normal_form: NormalForm,
    pub reduced: GradedComplex,
    pub project: UMap,
    pub include: UMap,
    pub homotopy: UMap,
    /// Index of the tower generator in `reduced`.
    pub tower_index: usize,
}

struct State {
    current: GradedComplex,
    project: UMap,
    include: UMap,
    homotopy: UMap,
}

impl State {
    fn new(c: &GradedComplex) -> Self {
        State {
            current: c.clone(),
            project: UMap::identity(c),
            include: UMap::identity(c),
            homotopy: UMap::zero(c, c, 1),
        }
    }

    /// Cancel the acyclic pair with unit arrow target <- source.
    fn cancel(&mut self, target: usize, source: usize) {
        let old = self.current.clone();
        let n = old.rank();
        debug_assert!(old.d.get(target, source).has_unit_term());
        debug_assert_eq!(*old.d.get(target, source), UPoly::one());

        let survivors: Vec<usize> = (0..n).filter(|&x| x != target && x != source).collect();

        let mut new_c = GradedComplex {
            name: old.name.clone(),
            gens: survivors.iter().map(|&x| old.gens[x].clone()).collect(),
            d: Mat::zero(survivors.len(), survivors.len()),
        };
        for (xi, &x) in survivors.iter().enumerate() {
            for (yi, &y) in survivors.iter().enumerate() {
                // d'(y) = D(y) + alpha(y) * epsilon, entrywise:
                // d'[x,y] = d[x,y] + d[target,y] * d[x,source]
                let mut e = old.d.get(x, y).clone();
                let alpha = old.d.get(target, y);
                if !alpha.is_zero() {
                    let eps = old.d.get(x, source);
                    if !eps.is_zero() {
                        e = e.add(&alpha.mul(eps));
                    }
                }
                new_c.d.set(xi, yi, e);
            }
        }

        // step projection: y -> y, target -> epsilon, source -> 0
        let mut proj = UMap::zero(&old, &new_c, 0);
        for (xi, &x) in survivors.iter().enumerate() {
            proj.mat.set(xi, x, UPoly::one());
            let eps = old.d.get(x, source);
            if !eps.is_zero() {
                proj.mat.set(xi, target, eps.clone());
            }
        }
        // step inclusion: y -> y + alpha(y) * source
        let mut inc = UMap::zero(&new_c, &old, 0);
        for (yi, &y) in survivors.iter().enumerate() {
            inc.mat.set(y, yi, UPoly::one());
            let alpha = old.d.get(target, y);
            if !alpha.is_zero() {
                inc.mat.set(source, yi, alpha.clone());
            }
        }
        // step homotopy: target -> source
        let mut h = UMap::zero(&old, &old, 1);
        h.mat.set(source, target, UPoly::one());

        debug_assert!(proj.is_chain_map());
        debug_assert!(inc.is_chain_map());
        debug_assert!({
            let ip = inc.compose(&proj).unwrap();
            let dh = old.d.mul(&h.mat).add(&h.mat.mul(&old.d));
            ip.mat.add(&dh) == UMap::identity(&old).mat
        });

        self.homotopy = self
            .homotopy
            .add(
                &self
                    .include
                    .compose(&h)
                    .unwrap()
                    .compose(&self.project)
                    .unwrap(),
            )
            .unwrap();
        self.project = proj.compose(&self.project).unwrap();
        self.include = self.include.compose(&inc).unwrap();
        self.current = new_c;
    }

    /// Homogeneous change of basis u <- u + U^m v (an isomorphism):
    /// column u += U^m column v, then row v += U^m row u.
    fn change_basis(&mut self, u_idx: usize, v_idx: usize, m: u32) {
        let old = self.current.clone();
        debug_assert_eq!(
            old.grading(u_idx),
            old.grading(v_idx) - Grading::from_integer(2 * m as i64),
            "inhomogeneous basis change"
        );
        let c = UPoly::monomial(m);
        let n = old.rank();
        let mut d = old.d.clone();
        for r in 0..n {
            let add = d.get(r, v_idx).mul(&c);
            if !add.is_zero() {
                d.add_to(r, u_idx, &add);
            }
        }
        for col in 0..n {
            let add = d.get(u_idx, col).mul(&c);
            if !add.is_zero() {
                d.add_to(v_idx, col, &add);
            }
        }
        let new_c = GradedComplex {
            name: old.name.clone(),
            gens: old.gens.clone(),
            d,
        };
        // S: new -> old and its inverse coincide over F2.
        let mut s = UMap::identity(&old);
        s.mat.set(v_idx, u_idx, c);
        let inc = UMap {
            source: new_c.clone(),
            target: old.clone(),
            degree: 0,
            mat: s.mat.clone(),
        };
        let proj = UMap {
            source: old.clone(),
            target: new_c.clone(),
            degree: 0,
            mat: s.mat,
        };
        self.project = proj.compose(&self.project).unwrap();
        self.include = self.include.compose(&inc).unwrap();
        self.current = new_c;
    }
}

/// Reduce a valid complex. Fails with NotRankOne when the localized homology
/// does not have rank one (the number of surviving free generators is not
/// exactly one).
pub fn reduce(c: &GradedComplex) -> Result<Reduction, Error> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInput(format!(
            "reduce requires a valid complex: {}",
            violations[0]
        )));
    }
    let mut st = State::new(c);

    // Phase 1: cancel unit arrows, smallest (row, column) first.
    loop {
        let n = st.current.rank();
        let mut pivot = None;
        'scan: for i in 0..n {
            for j in 0..n {
                if st.current.d.get(i, j).has_unit_term() {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        match pivot {
            Some((i, j)) => st.cancel(i, j),
            None => break,
        }
    }

    // Phase 2: split off two-step pieces with minimal-exponent pivots.
    let n = st.current.rank();
    let mut active = vec![true; n];
    let mut steps: Vec<Step> = Vec::new();
    loop {
        let cur = &st.current;
        let mut pivot: Option<(u32, usize, usize)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in 0..n {
                if !active[j] {
                    continue;
                }
                let e = cur.d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let k = e
                    .as_monomial()
                    .expect("homogeneous entries are monomials");
                if pivot.is_none_or(|(pk, pi, pj)| (k, i, j) < (pk, pi, pj)) {
                    pivot = Some((k, i, j));
                }
            }
        }
        let Some((k, i, j)) = pivot else { break };
        debug_assert!(k >= 1, "unit entries were exhausted in phase 1");
        // Clear the rest of row i.
        loop {
            let mut cleared = true;
            for y in 0..n {
                if y == j || !active[y] {
                    continue;
                }
                let e = st.current.d.get(i, y).clone();
                if e.is_zero() {
                    continue;
                }
                let m = e.as_monomial().expect("monomial entry");
                debug_assert!(m >= k);
                st.change_basis(y, j, m - k);
                cleared = false;
                break;
            }
            if cleared {
                break;
            }
        }
        // Clear the rest of column j.
        loop {
            let mut cleared = true;
            for x in 0..n {
                if x == i || !active[x] {
                    continue;
                }
                let e = st.current.d.get(x, j).clone();
                if e.is_zero() {
                    continue;
                }
                let m = e.as_monomial().expect("monomial entry");
                debug_assert!(m >= k);
                st.change_basis(i, x, m - k);
                cleared = false;
                break;
            }
            if cleared {
                break;
            }
        }
        // The pair (i, j) is now an isolated two-step piece.
        debug_assert!((0..n).all(|x| x == i || st.current.d.get(x, j).is_zero()));
        debug_assert!((0..n).all(|y| y == j || st.current.d.get(i, y).is_zero()));
        debug_assert!((0..n).all(|y| st.current.d.get(j, y).is_zero()));
        debug_assert!((0..n).all(|x| st.current.d.get(x, i).is_zero()));
        let len = st
            .current
            .d
            .get(i, j)
            .as_monomial()
            .expect("pivot is a monomial");
        steps.push(Step {
            top_grading: st.current.grading(j),
            length: len,
        });
        active[i] = false;
        active[j] = false;
    }

    let towers: Vec<usize> = (0..n).filter(|&x| active[x]).collect();
    if towers.len() != 1 {
        return Err(Error::NotRankOne(towers.len()));
    }
    steps.sort();
    let normal_form = NormalForm {
        tower_grading: st.current.grading(towers[0]),
        steps,
    };

    debug_assert!(st.project.is_chain_map());
    debug_assert!(st.include.is_chain_map());
    debug_assert!({
        let pi = st.project.compose(&st.include).unwrap();
        pi.mat == UMap::identity(&st.current).mat
    });
    debug_assert!({
        let ip = st.include.compose(&st.project).unwrap();
        let dh = c.d.mul(&st.homotopy.mat).add(&st.homotopy.mat.mul(&c.d));
        ip.mat.add(&dh) == UMap::identity(c).mat
    });

    Ok(Reduction {
        normal_form,
        tower_index: towers[0],
        reduced: st.current,
        project: st.project,
        include: st.include,
        homotopy: st.homotopy,
    })
}

/// The correction term: grading of the tower generator of the normal form.
pub fn d_invariant(c: &GradedComplex) -> Result<Grading, Error> {
    Ok(reduce(c)?.normal_form.tower_grading)
}

/// Graded homology ranks of the truncation `C ⊗ F[U]/U^N`, computed with
/// plain F2 elimination. Independent of the reduction machinery; used as an
/// oracle to compare a complex with its reconstruction.
pub fn truncated_homology_ranks(
    c: &GradedComplex,
    truncation: u32,
) -> std::collections::BTreeMap<Grading, usize> {
    use crate::f2::F2Matrix;
    use std::collections::BTreeMap;

    let n = c.rank();
    let nn = truncation as usize;
    // basis element (g, j) = U^j g for j < N, grading gr(g) - 2j
    let index = |g: usize, j: u32| g * nn + j as usize;
    let dim = n * nn;
    let mut m = F2Matrix::zero(dim, dim);
    for src in 0..n {
        for j in 0..truncation {
            for tgt in 0..n {
                let e = c.d.get(tgt, src);
                for k in e.exponents() {
                    if j + k < truncation {
                        m.flip(index(tgt, j + k), index(src, j));
                    }
                }
            }
        }
    }
    let grading_of = |g: usize, j: u32| c.grading(g) - Grading::from_integer(2 * j as i64);
    let mut gradings: Vec<Grading> = Vec::with_capacity(dim);
    for g in 0..n {
        for j in 0..truncation {
            gradings.push(grading_of(g, j));
        }
    }
    let mut levels: Vec<Grading> = gradings.clone();
    levels.sort();
    levels.dedup();

    let mut out = BTreeMap::new();
    for &lev in &levels {
        let cols: Vec<usize> = (0..dim).filter(|&x| gradings[x] == lev).collect();
        let below: Vec<usize> = (0..dim)
            .filter(|&x| gradings[x] == lev - Grading::from_integer(1))
            .collect();
        let above: Vec<usize> = (0..dim)
            .filter(|&x| gradings[x] == lev + Grading::from_integer(1))
            .collect();
        // rank of d restricted to this level, and of d arriving from above
        let mut d_here = F2Matrix::zero(below.len().max(1), cols.len().max(1));
        for (ci, &cc) in cols.iter().enumerate() {
            for (ri, &rr) in below.iter().enumerate() {
                if m.get(rr, cc) {
                    d_here.set(ri, ci, true);
                }
            }
        }
        let mut d_above = F2Matrix::zero(cols.len().max(1), above.len().max(1));
        for (ci, &cc) in above.iter().enumerate() {
            for (ri, &rr) in cols.iter().enumerate() {
                if m.get(rr, cc) {
                    d_above.set(ri, ci, true);
                }
            }
        }
        let rank_here = d_here.rank();
        let rank_above = d_above.rank();
        let h = cols.len() - rank_here - rank_above;
        if h > 0 {
            out.insert(lev, h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{grading_frac, grading_int, one, u, GradedComplex};

    #[test]
    fn rank_one_reduces_to_its_tower() {
        let c = GradedComplex::free_rank_one("rp3", "x", grading_frac(1, 4));
        let r = reduce(&c).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_frac(1, 4));
        assert!(r.normal_form.steps.is_empty());
        assert_eq!(d_invariant(&c).unwrap(), grading_frac(1, 4));
    }

    #[test]
    fn already_normal_complex() {
        // x(0) tower, a(3) --U^2--> b(6)
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(3)),
                ("b", grading_int(6)),
            ],
            &[("a", "b", u(2))],
        );
        let r = reduce(&c).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(0));
        assert_eq!(
            r.normal_form.steps,
            vec![Step { top_grading: grading_int(3), length: 2 }]
        );
        assert_eq!(d_invariant(&c).unwrap(), grading_int(0));
    }

    #[test]
    fn unit_cancellation_leaves_spectator() {
        // a(0), b(-1), c(0) with da = b; cancelling leaves c as the tower
        let c = GradedComplex::new(
            "c",
            vec![
                ("a", grading_int(0)),
                ("b", grading_int(-1)),
                ("c", grading_int(0)),
            ],
            &[("a", "b", one())],
        );
        let r = reduce(&c).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(0));
        assert!(r.normal_form.steps.is_empty());
        assert_eq!(r.reduced.gens.len(), 1);
        assert_eq!(r.reduced.gens[0].id, "c");
    }

    #[test]
    fn not_rank_one_detected() {
        let c = GradedComplex::new(
            "c",
            vec![("a", grading_int(0)), ("b", grading_int(0))],
            &[],
        );
        assert_eq!(reduce(&c).unwrap_err(), Error::NotRankOne(2));
        let empty = GradedComplex::new("e", Vec::<(String, Grading)>::new(), &[]);
        assert_eq!(reduce(&empty).unwrap_err(), Error::NotRankOne(0));
    }

    #[test]
    fn entangled_steps_are_split() {
        // da = U b and dc = U^2 b share a target; the basis change
        // c <- c + U a frees c, leaving one step (top a, length 1) and the
        // tower c at grading -2.
        let c = GradedComplex::new(
            "c",
            vec![
                ("a", grading_int(0)),
                ("b", grading_int(1)),
                ("c", grading_int(-2)),
            ],
            &[("a", "b", u(1)), ("c", "b", u(2))],
        );
        assert!(c.is_valid());
        let r = reduce(&c).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(-2));
        assert_eq!(
            r.normal_form.steps,
            vec![Step { top_grading: grading_int(0), length: 1 }]
        );
    }

    #[test]
    fn cancellation_handles_targets_with_outgoing_arrows() {
        // dx = y + z, dy = w, dz = w: cancelling the pair (y, x) must
        // reroute through epsilon = z and keep d^2 = 0
        let c = GradedComplex::new(
            "c",
            vec![
                ("t", grading_int(7)),
                ("x", grading_int(0)),
                ("y", grading_int(-1)),
                ("z", grading_int(-1)),
                ("w", grading_int(-2)),
            ],
            &[
                ("x", "y", one()),
                ("x", "z", one()),
                ("y", "w", one()),
                ("z", "w", one()),
            ],
        );
        assert!(c.is_valid());
        let r = reduce(&c).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(7));
        assert!(r.normal_form.steps.is_empty());
        assert!(r.project.is_chain_map());
        assert!(r.include.is_chain_map());
    }

    #[test]
    fn homology_matches_reconstruction() {
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(3)),
                ("b", grading_int(6)),
                ("p", grading_int(0)),
                ("q", grading_int(-1)),
            ],
            &[("a", "b", u(2)), ("p", "q", one())],
        );
        let r = reduce(&c).unwrap();
        let model = r.normal_form.reconstruction("model");
        let bound = 1 + r.normal_form.max_step_length();
        assert_eq!(
            truncated_homology_ranks(&c, bound),
            truncated_homology_ranks(&model, bound)
        );
    }

    #[test]
    fn reduce_is_idempotent_on_reconstruction() {
        let nf = NormalForm {
            tower_grading: grading_frac(1, 4),
            steps: vec![
                Step { top_grading: grading_frac(9, 4), length: 1 },
                Step { top_grading: grading_frac(9, 4), length: 3 },
            ],
        };
        let model = nf.reconstruction("m");
        assert!(model.is_valid());
        let r = reduce(&model).unwrap();
        assert_eq!(r.normal_form, nf);
    }

    #[test]
    fn zigzag_maps_are_valid() {
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(0)),
                ("b", grading_int(-1)),
                ("p", grading_int(2)),
                ("q", grading_int(3)),
            ],
            &[("a", "b", one()), ("p", "q", u(1))],
        );
        assert!(c.is_valid());
        let r = reduce(&c).unwrap();
        assert!(r.project.is_chain_map());
        assert!(r.include.is_chain_map());
        let pi = r.project.compose(&r.include).unwrap();
        assert_eq!(pi.mat, UMap::identity(&r.reduced).mat);
        let ip = r.include.compose(&r.project).unwrap();
        let dh = c.d.mul(&r.homotopy.mat).add(&r.homotopy.mat.mul(&c.d));
        assert_eq!(ip.mat.add(&dh), UMap::identity(&c).mat);
    }

    #[test]
    fn dual_of_tower_plus_step() {
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(3)),
                ("b", grading_int(6)),
            ],
            &[("a", "b", u(2))],
        );
        let d = c.dual();
        assert!(d.is_valid());
        let r = reduce(&d).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(0));
        assert_eq!(
            r.normal_form.steps,
            vec![Step { top_grading: grading_int(-6), length: 2 }]
        );
        // d-invariant of the dual is minus the d-invariant
        assert_eq!(
            d_invariant(&d).unwrap(),
            -d_invariant(&c).unwrap()
        );
    }

    #[test]
    fn tensor_of_tower_plus_step_with_itself() {
        let c = GradedComplex::new(
            "c",
            vec![
                ("x", grading_int(0)),
                ("a", grading_int(3)),
                ("b", grading_int(6)),
            ],
            &[("a", "b", u(2))],
        );
        let t = c.tensor(&c);
        assert!(t.is_valid());
        let r = reduce(&t).unwrap();
        assert_eq!(r.normal_form.tower_grading, grading_int(0));
        assert_eq!(
            r.normal_form.steps,
            vec![
                Step { top_grading: grading_int(3), length: 2 },
                Step { top_grading: grading_int(3), length: 2 },
                Step { top_grading: grading_int(6), length: 2 },
                Step { top_grading: grading_int(9), length: 2 },
            ]
        );
        // cross-check with the truncated homology oracle
        let model = r.normal_form.reconstruction("model");
        let bound = 1 + r.normal_form.max_step_length();
        assert_eq!(
            truncated_homology_ranks(&t, bound),
            truncated_homology_ranks(&model, bound)
        );
    }
}
