//! Property tests: normal forms survive changes of basis, correction terms
//! behave under duals and tensors, words factor and re-evaluate exactly,
//! and the linking-matrix moves are exact involutions.

use proptest::prelude::*;

use splice_floer::complex::{grading_frac, grading_int, Grading, GradedComplex};
use splice_floer::gluing::{evaluate_word, factorize, GeneratorWord, Letter};
use splice_floer::kirby::{blow_down, blow_up_clasp, h1_order, Component, SurgeryPresentation};
use splice_floer::knotlike::KnotLikeComplex;
use splice_floer::reduce::{d_invariant, reduce, NormalForm, Step};
use splice_floer::upoly::{UPoly, UVPoly};

fn arb_normal_form() -> impl Strategy<Value = NormalForm> {
    let offset = prop_oneof![Just(grading_int(0)), Just(grading_frac(1, 4))];
    (
        offset,
        -2i64..=2,
        prop::collection::vec(((-3i64..=3), (1u32..=3)), 0..=2),
    )
        .prop_map(|(off, tower, steps)| NormalForm {
            tower_grading: off + grading_int(tower),
            steps: {
                let mut s: Vec<Step> = steps
                    .into_iter()
                    .map(|(g, len)| Step {
                        top_grading: off + grading_int(g),
                        length: len,
                    })
                    .collect();
                s.sort();
                s
            },
        })
}

/// Apply a sequence of homogeneous changes of basis u <- u + U^k v and a
/// generator permutation, all chain isomorphisms.
fn scramble(c: &GradedComplex, moves: &[(usize, usize)], rotate: usize) -> GradedComplex {
    let n = c.rank();
    let mut d = c.d.clone();
    if n > 1 {
        for &(raw_u, raw_v) in moves {
            let u = raw_u % n;
            let v = raw_v % n;
            if u == v {
                continue;
            }
            let diff = c.grading(u) - c.grading(v);
            if !diff.is_integer() {
                continue;
            }
            let t = -diff.to_integer();
            if t < 0 || t % 2 != 0 {
                continue;
            }
            let k = (t / 2) as u32;
            // col u += U^k col v, then row v += U^k row u
            for r in 0..n {
                let add = d.get(r, v).mul(&UPoly::monomial(k));
                if !add.is_zero() {
                    d.add_to(r, u, &add);
                }
            }
            for col in 0..n {
                let add = d.get(u, col).mul(&UPoly::monomial(k));
                if !add.is_zero() {
                    d.add_to(v, col, &add);
                }
            }
        }
    }
    let perm: Vec<usize> = (0..n).map(|i| (i + rotate) % n.max(1)).collect();
    let mut out = GradedComplex::new(
        c.name.clone(),
        perm.iter()
            .map(|&i| (c.gens[i].id.clone(), c.grading(i)))
            .collect::<Vec<(String, Grading)>>(),
        &[],
    );
    for (ni, &oi) in perm.iter().enumerate() {
        for (nj, &oj) in perm.iter().enumerate() {
            out.d.set(ni, nj, d.get(oi, oj).clone());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn reduce_recovers_scrambled_normal_forms(
        nf in arb_normal_form(),
        moves in prop::collection::vec((0usize..8, 0usize..8), 0..6),
        rotate in 0usize..5,
    ) {
        let model = nf.reconstruction("m");
        prop_assert!(model.is_valid());
        let scrambled = scramble(&model, &moves, rotate);
        prop_assert!(scrambled.is_valid());
        let r = reduce(&scrambled).unwrap();
        prop_assert_eq!(&r.normal_form, &nf);
        // reducing the reduced complex changes nothing further
        let again = reduce(&r.reduced).unwrap();
        prop_assert_eq!(&again.normal_form, &nf);
        prop_assert_eq!(&again.reduced, &r.reduced);
        // truncated homology agrees between the scramble and the model
        let bound = 1 + nf.max_step_length();
        prop_assert_eq!(
            splice_floer::reduce::truncated_homology_ranks(&scrambled, bound),
            splice_floer::reduce::truncated_homology_ranks(&model, bound)
        );
    }

    #[test]
    fn dual_negates_d_invariant(nf in arb_normal_form()) {
        let c = nf.reconstruction("m");
        prop_assert_eq!(
            d_invariant(&c.dual()).unwrap(),
            -d_invariant(&c).unwrap()
        );
        // double dual has the original normal form
        let dd = reduce(&c.dual().dual()).unwrap();
        prop_assert_eq!(dd.normal_form, nf);
    }

    #[test]
    fn tensor_adds_d_invariants(a in arb_normal_form(), b in arb_normal_form()) {
        let ca = a.reconstruction("a");
        let cb = b.reconstruction("b");
        let t = ca.tensor(&cb);
        prop_assert!(t.is_valid());
        prop_assert_eq!(
            d_invariant(&t).unwrap(),
            d_invariant(&ca).unwrap() + d_invariant(&cb).unwrap()
        );
    }

    #[test]
    fn factorize_round_trips_on_random_words(
        letters in prop::collection::vec(
            prop_oneof![
                Just(Letter::H),
                (-9i64..=9).prop_map(Letter::T),
            ],
            0..10,
        )
    ) {
        let w = GeneratorWord::new(letters);
        let m = evaluate_word(&w);
        let back = factorize(&m).unwrap();
        prop_assert_eq!(evaluate_word(&back).entries, m.entries);
    }

    #[test]
    fn blow_moves_are_exact_inverses(
        framings in prop::collection::vec(-5i64..=5, 3..=6),
        pair in 0usize..5,
        sign in prop_oneof![Just(1i64), Just(-1i64)],
    ) {
        let n = framings.len();
        let mut linking = vec![vec![0i64; n]; n];
        for i in 0..n {
            linking[i][i] = framings[i];
        }
        for i in 0..n - 1 {
            linking[i][i + 1] = 1;
            linking[i + 1][i] = 1;
        }
        let p = SurgeryPresentation {
            components: (0..n)
                .map(|i| Component {
                    label: format!("C{i}"),
                    is_companion: i == 0 || i == n - 1,
                })
                .collect(),
            linking,
        };
        let i = pair % (n - 1);
        let q = blow_up_clasp(&p, i, i + 1, sign).unwrap();
        prop_assert!(q.is_symmetric());
        prop_assert_eq!(h1_order(&q), h1_order(&p));
        let r = blow_down(&q, i + 1).unwrap();
        prop_assert_eq!(r.linking, p.linking);
    }

    #[test]
    fn knotlike_verdicts_survive_changes_of_basis(
        which in 0usize..3,
        moves in prop::collection::vec((0usize..8, 0usize..8), 0..5),
    ) {
        let (c, expected) = match which {
            0 => (trefoil_rh(), false),
            1 => (figure_eight(), true),
            _ => (figure_eight().tensor(&unknot()), true),
        };
        let scrambled = scramble_knotlike(&c, &moves);
        prop_assert!(scrambled.is_valid(), "{:?}", scrambled.validate());
        prop_assert_eq!(scrambled.is_locally_trivial(), expected);
    }
}

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

fn scramble_knotlike(c: &KnotLikeComplex, moves: &[(usize, usize)]) -> KnotLikeComplex {
    let n = c.rank();
    let mut d = c.d.clone();
    if n > 1 {
        for &(raw_u, raw_v) in moves {
            let u = raw_u % n;
            let v = raw_v % n;
            if u == v {
                continue;
            }
            let dw = c.gens[u].gr_w - c.gens[v].gr_w;
            let dz = c.gens[u].gr_z - c.gens[v].gr_z;
            if !dw.is_integer() || !dz.is_integer() {
                continue;
            }
            let (tw, tz) = (-dw.to_integer(), -dz.to_integer());
            if tw < 0 || tz < 0 || tw % 2 != 0 || tz % 2 != 0 {
                continue;
            }
            let mono = UVPoly::monomial((tw / 2) as u32, (tz / 2) as u32);
            for r in 0..n {
                let add = d.get(r, v).mul(&mono);
                if !add.is_zero() {
                    d.add_to(r, u, &add);
                }
            }
            for col in 0..n {
                let add = d.get(u, col).mul(&mono);
                if !add.is_zero() {
                    d.add_to(v, col, &add);
                }
            }
        }
    }
    KnotLikeComplex { name: c.name.clone(), gens: c.gens.clone(), d }
}
