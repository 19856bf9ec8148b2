//! Framed-link presentations of splices, blow-up and blow-down moves on the
//! linking matrix, handle-cobordism numerics, and lens-space correction
//! terms.
//!
//! Companion components ("a knot inside a homology sphere") are opaque
//! labels; every homology computation treats them as unknots, which is
//! exact for first homology and linking data.

use num_rational::Ratio;

use crate::complex::Grading;
use crate::error::Error;
use crate::gluing::{evaluate_word, is_splice_homology_sphere, GeneratorWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub is_companion: bool,
}

/// Framed link presentation: components plus a symmetric linking matrix
/// whose diagonal carries the framings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub components: Vec<Component>,
    pub linking: Vec<Vec<i64>>,
}

impl SurgeryPresentation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn framing(&self, i: usize) -> i64 {
        self.linking[i][i]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.linking[i][j] == self.linking[j][i]))
    }

    /// Chain structure: consecutive components clasped (+-1), all other
    /// pairs unlinked.
    pub fn is_chain(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.linking[i][j];
                if j == i + 1 {
                    if v.abs() != 1 {
                        return false;
                    }
                } else if v != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Signs of the clasps along a chain.
    pub fn clasp_signs(&self) -> Vec<i64> {
        (0..self.len().saturating_sub(1))
            .map(|i| self.linking[i][i + 1].signum())
            .collect()
    }

    /// Reverse the orientation of one component: negate its row and column
    /// (the framing picks up two signs and is unchanged).
    pub fn flip_orientation(&mut self, idx: usize) {
        let n = self.len();
        for j in 0..n {
            if j != idx {
                self.linking[idx][j] = -self.linking[idx][j];
                self.linking[j][idx] = -self.linking[j][idx];
            }
        }
    }
}

fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    // fraction-free Gaussian elimination (Bareiss)
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a.last().map_or(1, |row| row[n - 1])
}

/// Order of the first homology of the presented manifold: |det| of the
/// linking matrix, with 0 meaning positive first Betti number.
pub fn h1_order(p: &SurgeryPresentation) -> u128 {
    if p.is_empty() {
        return 1;
    }
    det_i128(&p.linking).unsigned_abs()
}

/// Build the chain presentation of a splice from a generator word, reading
/// it right to left: start with the first companion framed 0, each H clasps
/// on a fresh 0-framed unknot, each T(k) adds k to the framing of the most
/// recent component, and the final unknot is merged into the second
/// companion (which therefore inherits its framing).
pub fn presentation_from_word(
    w: &GeneratorWord,
    k0_label: &str,
    k1_label: &str,
) -> Result<SurgeryPresentation, Error> {
    let value = evaluate_word(w);
    if !is_splice_homology_sphere(&value) {
        return Err(Error::InadmissibleWord(format!(
            "word evaluates to {value}, which does not glue to a homology sphere"
        )));
    }
    if !w.0.contains(&Letter::H) {
        return Err(Error::InadmissibleWord(
            "word has no H letters; the chain presentation needs at least one Hopf pair".into(),
        ));
    }
    let mut components = vec![Component { label: k0_label.to_string(), is_companion: true }];
    let mut framings: Vec<i64> = vec![0];
    let mut unknot_count = 0;
    for l in w.0.iter().rev() {
        match l {
            Letter::H => {
                unknot_count += 1;
                components.push(Component {
                    label: format!("U{unknot_count}"),
                    is_companion: false,
                });
                framings.push(0);
            }
            Letter::T(k) => {
                *framings.last_mut().unwrap() += k;
            }
        }
    }
    // merge the final unknot into the second companion
    let last = components.len() - 1;
    components[last] = Component { label: k1_label.to_string(), is_companion: true };
    let n = components.len();
    let mut linking = vec![vec![0i64; n]; n];
    for (i, row) in linking.iter_mut().enumerate() {
        row[i] = framings[i];
    }
    for i in 0..n - 1 {
        linking[i][i + 1] = 1;
        linking[i + 1][i] = 1;
    }
    Ok(SurgeryPresentation { components, linking })
}

/// Blow down component j: framing +-1, not a companion. The linking matrix
/// receives the rank-one update lk(x,y) -= framing(j) * lk(x,j) * lk(y,j)
/// and the component is removed. Preserves |det|.
pub fn blow_down(p: &SurgeryPresentation, j: usize) -> Result<SurgeryPresentation, Error> {
    if j >= p.len() {
        return Err(Error::NotBlowdownable(format!("no component {j}")));
    }
    if p.components[j].is_companion {
        return Err(Error::NotBlowdownable(format!(
            "component {} is a companion",
            p.components[j].label
        )));
    }
    if p.framing(j).abs() != 1 {
        return Err(Error::NotBlowdownable(format!(
            "component {} has framing {}, need ±1",
            p.components[j].label,
            p.framing(j)
        )));
    }
    Ok(remove_pm1_component(p, j))
}

/// The rank-one update and removal, without the companion check; the
/// companion-retiring normalization move uses this directly.
fn remove_pm1_component(p: &SurgeryPresentation, j: usize) -> SurgeryPresentation {
    let eps = p.framing(j);
    debug_assert!(eps.abs() == 1);
    let keep: Vec<usize> = (0..p.len()).filter(|&x| x != j).collect();
    let mut linking = vec![vec![0i64; keep.len()]; keep.len()];
    for (xi, &x) in keep.iter().enumerate() {
        for (yi, &y) in keep.iter().enumerate() {
            linking[xi][yi] = p.linking[x][y] - eps * p.linking[x][j] * p.linking[y][j];
        }
    }
    SurgeryPresentation {
        components: keep.iter().map(|&x| p.components[x].clone()).collect(),
        linking,
    }
}

/// Blow up the clasp between components i and k with the given sign:
/// a new unknot of framing -sign is inserted between them, linking i once
/// and k with the sign that cancels the clasp; the framings of i and k drop
/// by sign. Blowing the new component back down recovers the input exactly.
pub fn blow_up_clasp(
    p: &SurgeryPresentation,
    i: usize,
    k: usize,
    sign: i64,
) -> Result<SurgeryPresentation, Error> {
    if i >= p.len() || k >= p.len() || i == k {
        return Err(Error::NoClasp(i, k));
    }
    if p.linking[i][k].abs() != 1 {
        return Err(Error::NoClasp(i, k));
    }
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let lam_i = 1i64;
    let lam_k = sign * p.linking[i][k];
    let pos = i.max(k); // insert between the clasped pair
    let n = p.len();
    let old_of = |idx: usize| if idx < pos { idx } else { idx - 1 };
    let lam_of = |old: usize| {
        if old == i {
            lam_i
        } else if old == k {
            lam_k
        } else {
            0
        }
    };
    let mut components: Vec<Component> = Vec::with_capacity(n + 1);
    for (x, c) in p.components.iter().enumerate() {
        if x == pos {
            components.push(Component {
                label: format!("E{}", n + 1),
                is_companion: false,
            });
        }
        components.push(c.clone());
    }
    let m = n + 1;
    let mut linking = vec![vec![0i64; m]; m];
    for x in 0..m {
        for y in 0..m {
            linking[x][y] = if x == pos && y == pos {
                -sign
            } else if x == pos {
                lam_of(old_of(y))
            } else if y == pos {
                lam_of(old_of(x))
            } else {
                let (ox, oy) = (old_of(x), old_of(y));
                p.linking[ox][oy] - sign * lam_of(ox) * lam_of(oy)
            };
        }
    }
    Ok(SurgeryPresentation { components, linking })
}

/// One normalization move on a symmetric-family chain: blow up the two
/// companion-adjacent clasps (raising or lowering the interior framings
/// together), retire the two old companions by the rank-one removal, and
/// relabel the fresh circles as the new companions. At the linking level
/// this realizes the step n -> n + direction.
pub fn normalize_step(
    p: &SurgeryPresentation,
    direction: i64,
) -> Result<SurgeryPresentation, Error> {
    assert!(direction == 1 || direction == -1);
    let n = p.len();
    if n < 4 || !p.components[0].is_companion || !p.components[n - 1].is_companion {
        return Err(Error::InvalidInput(
            "normalize_step needs a chain with companions at both ends".into(),
        ));
    }
    let k0 = p.components[0].label.clone();
    let k1 = p.components[n - 1].label.clone();
    // first companion side: sign -direction raises (direction=+1) the
    // neighbor's framing; second companion side: sign +direction lowers it
    let q = blow_up_clasp(p, 0, 1, -direction)?;
    let m = q.len();
    let q = blow_up_clasp(&q, m - 2, m - 1, direction)?;
    // retire the old companions (now at the two ends, framing ±1)
    let q = remove_pm1_component(&q, q.len() - 1);
    let mut q = remove_pm1_component(&q, 0);
    // relabel the fresh circles as companions and restore +1 clasps
    q.components[0] = Component { label: format!("{k0}'"), is_companion: true };
    let last = q.len() - 1;
    q.components[last] = Component { label: format!("{k1}'"), is_companion: true };
    // normalize clasp signs left to right by reorienting the right partner
    for idx in 0..q.len() - 1 {
        if q.linking[idx][idx + 1] == -1 {
            q.flip_orientation(idx + 1);
        }
    }
    Ok(q)
}

/// Numerical data of a handle cobordism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismData {
    pub chi: i64,
    pub sigma: i64,
    pub b1: i64,
    pub b2_plus: i64,
    pub b2_minus: i64,
    pub even_form: bool,
    pub grading_shift: Grading,
    pub target: String,
}

impl CobordismData {
    fn new(
        chi: i64,
        sigma: i64,
        b1: i64,
        b2_plus: i64,
        b2_minus: i64,
        even_form: bool,
        target: impl Into<String>,
    ) -> Self {
        let grading_shift = Ratio::new(-2 * chi - 3 * sigma, 4);
        CobordismData {
            chi,
            sigma,
            b1,
            b2_plus,
            b2_minus,
            even_form,
            grading_shift,
            target: target.into(),
        }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.b2_plus == 0 && self.b2_minus > 0
    }
}

/// The one-handle-attachment cobordism from a normalized symmetric splice
/// to the real projective space model: a single (-2)-framed 2-handle after
/// the normalization to the zero-framed chain.
pub fn type1_cobordism(n: i64) -> CobordismData {
    CobordismData::new(
        1,
        -1,
        0,
        0,
        1,
        true,
        format!(
            "(-2)-surgery on K # -K, homology cobordant to RP^3 (after normalizing n = {n} to 0)"
        ),
    )
}

/// Compose with the disk bundle over the sphere of Euler number -2: a
/// negative definite (non-even) filling.
pub fn type1_filling() -> CobordismData {
    CobordismData::new(2, -2, 0, 0, 2, false, "filling of the splice (capped RP^3)")
}

/// Same handle numerics for the second symmetry type; the target is the
/// (-2)-surgery on the connected sum of the two companions.
pub fn type2_cobordism() -> CobordismData {
    CobordismData::new(1, -1, 0, 0, 1, true, "(Y0#Y1)_{-2}(K0#K1)")
}

/// Correction term of the lens space L(p,1) in the residue-i structure:
/// ((2i - p)^2 - p) / (4p).
pub fn lens_d(p: i64, i: i64) -> Result<Grading, Error> {
    if p <= 0 {
        return Err(Error::OutOfRange(format!("need p > 0, got {p}")));
    }
    if i < 0 || i >= p {
        return Err(Error::OutOfRange(format!(
            "residue {i} out of range for p = {p}"
        )));
    }
    Ok(Ratio::new((2 * i - p) * (2 * i - p) - p, 4 * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::grading_frac;
    use crate::gluing::GeneratorWord;

    fn family_presentation(n: i64) -> SurgeryPresentation {
        presentation_from_word(&GeneratorWord::symmetric_family(n), "K", "mK").unwrap()
    }

    #[test]
    fn family_chain_shape() {
        let p = family_presentation(2);
        assert_eq!(p.len(), 4);
        assert!(p.is_symmetric());
        assert!(p.is_chain());
        let framings: Vec<i64> = (0..4).map(|i| p.framing(i)).collect();
        assert_eq!(framings, vec![0, 2, -2, 0]);
        assert!(p.components[0].is_companion);
        assert!(p.components[3].is_companion);
        assert!(!p.components[1].is_companion);
        assert_eq!(p.clasp_signs(), vec![1, 1, 1]);
    }

    #[test]
    fn determinant_sweep() {
        for n in -10..=10 {
            assert_eq!(h1_order(&family_presentation(n)), 1, "n = {n}");
        }
    }

    #[test]
    fn empty_word_inadmissible() {
        assert!(matches!(
            presentation_from_word(&GeneratorWord::default(), "K", "mK"),
            Err(Error::InadmissibleWord(_))
        ));
    }

    #[test]
    fn single_zero_framed_component_has_b1() {
        let p = SurgeryPresentation {
            components: vec![Component { label: "K".into(), is_companion: false }],
            linking: vec![vec![0]],
        };
        assert_eq!(h1_order(&p), 0);
    }

    #[test]
    fn isolated_blowdown() {
        let p = SurgeryPresentation {
            components: vec![
                Component { label: "K".into(), is_companion: true },
                Component { label: "U".into(), is_companion: false },
            ],
            linking: vec![vec![3, 0], vec![0, 1]],
        };
        let q = blow_down(&p, 1).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.framing(0), 3);
    }

    #[test]
    fn blowdown_preconditions() {
        let p = family_presentation(1);
        // companion
        assert!(matches!(blow_down(&p, 0), Err(Error::NotBlowdownable(_))));
        // framing 1 is ±1? framing of U1 is 1, blowdown allowed:
        assert!(blow_down(&p, 1).is_ok());
        // framing -1 allowed, 0 not
        let z = family_presentation(0);
        assert!(matches!(blow_down(&z, 1), Err(Error::NotBlowdownable(_))));
    }

    #[test]
    fn blow_up_then_down_round_trip() {
        let p = family_presentation(3);
        for sign in [1, -1] {
            let q = blow_up_clasp(&p, 1, 2, sign).unwrap();
            assert_eq!(q.len(), 5);
            assert!(q.is_symmetric());
            assert_eq!(h1_order(&q), h1_order(&p));
            // the inserted component sits between the clasped pair
            let r = blow_down(&q, 2).unwrap();
            assert_eq!(r.linking, p.linking);
            let labels: Vec<&str> = r.components.iter().map(|c| c.label.as_str()).collect();
            assert_eq!(labels, vec!["K", "U1", "U2", "mK"]);
        }
    }

    #[test]
    fn normalization_realizes_n_plus_one() {
        for n in -3..=3 {
            let p = family_presentation(n);
            let up = normalize_step(&p, 1).unwrap();
            let expected = presentation_from_word(
                &GeneratorWord::symmetric_family(n + 1),
                "K'",
                "mK'",
            )
            .unwrap();
            assert_eq!(up.linking, expected.linking, "n = {n}");
            assert_eq!(
                up.components.iter().map(|c| (&c.label, c.is_companion)).collect::<Vec<_>>(),
                expected
                    .components
                    .iter()
                    .map(|c| (&c.label, c.is_companion))
                    .collect::<Vec<_>>()
            );
            let down = normalize_step(&p, -1).unwrap();
            let expected =
                presentation_from_word(&GeneratorWord::symmetric_family(n - 1), "K'", "mK'")
                    .unwrap();
            assert_eq!(down.linking, expected.linking, "n = {n}");
        }
    }

    #[test]
    fn cobordism_numbers() {
        let w = type1_cobordism(0);
        assert_eq!((w.chi, w.sigma, w.b1, w.b2_minus), (1, -1, 0, 1));
        assert!(w.even_form);
        assert!(w.is_negative_definite());
        assert_eq!(w.grading_shift, grading_frac(1, 4));

        let f = type1_filling();
        assert_eq!((f.chi, f.sigma, f.b1, f.b2_minus), (2, -2, 0, 2));
        assert!(!f.even_form);
        assert!(f.is_negative_definite());
        assert_eq!(f.grading_shift, grading_frac(1, 2));

        let t2 = type2_cobordism();
        assert_eq!((t2.chi, t2.sigma, t2.b2_minus, t2.b1), (1, -1, 1, 0));
        assert!(t2.even_form);
        assert_eq!(t2.grading_shift, grading_frac(1, 4));
        assert!(t2.target.contains("K0#K1"));
    }

    #[test]
    fn lens_space_values() {
        assert_eq!(lens_d(2, 0).unwrap(), grading_frac(1, 4));
        assert_eq!(lens_d(2, 1).unwrap(), grading_frac(-1, 4));
        assert_eq!(lens_d(1, 0).unwrap(), grading_frac(0, 1));
        for n in 1..=10 {
            assert_eq!(lens_d(2 * n, n).unwrap(), grading_frac(-1, 4));
        }
        assert!(lens_d(2, 2).is_err());
        assert!(lens_d(0, 0).is_err());
    }

    #[test]
    fn lens_values_and_cobordism_shift_share_a_coset() {
        // the two spin structures have opposite correction terms, and only
        // one of them lies in the Q/Z coset reached by the grading shift
        let d0 = lens_d(2, 0).unwrap();
        let d1 = lens_d(2, 1).unwrap();
        assert_eq!(d0 + d1, grading_frac(0, 1));
        let shift = type1_cobordism(0).grading_shift;
        assert!((d0 - shift).is_integer());
        assert!(!(d1 - shift).is_integer());
    }

    #[test]
    fn lens_closed_form_matches_char_vector_minimization() {
        // independent route: minimize ((2i - p + 2kp)^2 - p)/(4p) over k
        for p in 1..=30i64 {
            for i in 0..p {
                let oracle = (-2 * p..=2 * p)
                    .map(|k| Ratio::new((2 * i - p + 2 * k * p).pow(2) - p, 4 * p))
                    .min()
                    .unwrap();
                assert_eq!(lens_d(p, i).unwrap(), oracle, "p={p} i={i}");
            }
        }
    }
}
