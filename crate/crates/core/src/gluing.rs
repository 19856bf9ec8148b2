//! Gluing matrices for splices of knot complements, their symmetry
//! classification, and factorization into the standard generators
//! T_n = (1 n; 0 1) and H = (0 1; -1 0).
//!
//! Matrices act on column vectors; the columns are the images of the
//! meridian and the longitude. A gluing map has determinant -1 when written
//! with the (meridian, -longitude) target basis ("phi" mode) and +1 when
//! the same longitude/meridian basis is used on both sides ("psi" mode);
//! switching modes composes with e = diag(1, -1) on the left.

use std::fmt;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    Phi,
    Psi,
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisMode::Phi => write!(f, "phi"),
            BasisMode::Psi => write!(f, "psi"),
        }
    }
}

/// 2x2 integer matrix with a record of which basis convention it is
/// written in. Entries are row-major: [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GluingMatrix {
    pub entries: [[i64; 2]; 2],
    pub mode: BasisMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

impl GluingMatrix {
    pub fn new(entries: [[i64; 2]; 2], mode: BasisMode) -> Self {
        GluingMatrix { entries, mode }
    }

    pub fn det(&self) -> i64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    /// Determinant matches the declared mode?
    pub fn is_valid(&self) -> bool {
        match self.mode {
            BasisMode::Phi => self.det() == -1,
            BasisMode::Psi => self.det() == 1,
        }
    }

    /// The family member phi_n^sign = (n s; s(1+n^2) n) with s = sign.
    pub fn phi_family(n: i64, sign: Sign) -> Self {
        let s = sign.as_i64();
        GluingMatrix::new([[n, s], [s * (1 + n * n), n]], BasisMode::Phi)
    }

    /// psi_n^+ = (n 1; -(1+n^2) -n).
    pub fn psi_plus(n: i64) -> Self {
        GluingMatrix::new([[n, 1], [-(1 + n * n), -n]], BasisMode::Psi)
    }

    /// Toggle the basis mode by left-composing with e = diag(1, -1)
    /// (negate the second row). Involutive.
    pub fn convert_basis(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        GluingMatrix::new(
            [[a, b], [-c, -d]],
            match self.mode {
                BasisMode::Phi => BasisMode::Psi,
                BasisMode::Psi => BasisMode::Phi,
            },
        )
    }

    pub fn in_mode(&self, mode: BasisMode) -> Self {
        if self.mode == mode {
            *self
        } else {
            self.convert_basis()
        }
    }

    pub fn mul_raw(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        GluingMatrix::new([[-a, -b], [-c, -d]], self.mode)
    }

    /// Conjugation by e = diag(1, -1): flips the off-diagonal signs.
    pub fn e_conjugate(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        GluingMatrix::new([[a, -b], [-c, d]], self.mode)
    }

    fn squares_to_minus_id(&self) -> bool {
        let sq = Self::mul_raw(self.entries, self.entries);
        sq == [[-1, 0], [0, -1]]
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.entries;
        write!(f, "[{a} {b}; {c} {d}]")
    }
}

/// The splice glued by this matrix is an integer homology sphere exactly
/// when the image of the longitude has meridian coefficient +-1 in the
/// shared-basis convention: the (0,1) entry of the psi-mode matrix.
pub fn is_splice_homology_sphere(m: &GluingMatrix) -> bool {
    let psi = m.in_mode(BasisMode::Psi);
    psi.entries[0][1].abs() == 1
}

/// Match against the phi_n^+- family: returns (n, sign) when the matrix is
/// exactly (n s; s(1+n^2) n). Equivalently: determinant -1, psi-square
/// equal to -id, and the homology-sphere condition.
pub fn classify_type1(m: &GluingMatrix) -> Option<(i64, Sign)> {
    let phi = m.in_mode(BasisMode::Phi);
    if phi.det() != -1 {
        return None;
    }
    let [[a, b], [c, d]] = phi.entries;
    if a != d {
        return None;
    }
    let sign = match b {
        1 => Sign::Plus,
        -1 => Sign::Minus,
        _ => return None,
    };
    if c != b * (1 + a * a) {
        return None;
    }
    Some((a, sign))
}

/// Verdict for the second symmetry type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type2Verdict {
    /// phi = +-(0 1; 1 0): admissible.
    Admissible,
    /// phi = +-diag(1, -1): excluded, the splice has b_1 = 1.
    B1Splice,
    /// Anything else.
    No,
}

pub fn classify_type2(m: &GluingMatrix) -> Type2Verdict {
    let phi = m.in_mode(BasisMode::Phi);
    if phi.det() != -1 {
        return Type2Verdict::No;
    }
    match phi.entries {
        [[0, 1], [1, 0]] | [[0, -1], [-1, 0]] => Type2Verdict::Admissible,
        [[1, 0], [0, -1]] | [[-1, 0], [0, 1]] => Type2Verdict::B1Splice,
        _ => Type2Verdict::No,
    }
}

/// The identity -phi_n^+ = phi_{-n}^-, checked entrywise.
pub fn change_sign_identity(n: i64) -> bool {
    GluingMatrix::phi_family(n, Sign::Plus).neg().entries
        == GluingMatrix::phi_family(-n, Sign::Minus).entries
}

/// One letter of a generator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    H,
    T(i64),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::H => write!(f, "H"),
            Letter::T(k) => write!(f, "T({k})"),
        }
    }
}

/// Word in the generators, multiplied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord(pub Vec<Letter>);

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GeneratorWord(letters)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word H T(-n) H T(n) H.
    pub fn symmetric_family(n: i64) -> Self {
        GeneratorWord(vec![
            Letter::H,
            Letter::T(-n),
            Letter::H,
            Letter::T(n),
            Letter::H,
        ])
    }

    pub fn reversed(&self) -> Self {
        GeneratorWord(self.0.iter().rev().copied().collect())
    }

    /// Remove T(0) letters, merge adjacent T's, and cancel H^4 = id, until
    /// stable.
    pub fn simplified(&self) -> Self {
        let mut w = self.0.clone();
        loop {
            let mut next: Vec<Letter> = Vec::with_capacity(w.len());
            for l in &w {
                match (*l, next.last().copied()) {
                    (Letter::T(0), _) => {}
                    (Letter::T(a), Some(Letter::T(b))) => {
                        next.pop();
                        if a + b != 0 {
                            next.push(Letter::T(a + b));
                        }
                    }
                    (l, _) => next.push(l),
                }
            }
            // cancel any run of four H's
            let mut cancelled: Vec<Letter> = Vec::with_capacity(next.len());
            for l in next {
                cancelled.push(l);
                let k = cancelled.len();
                if k >= 4 && cancelled[k - 4..].iter().all(|&x| x == Letter::H) {
                    cancelled.truncate(k - 4);
                }
            }
            if cancelled == w {
                return GeneratorWord(cancelled);
            }
            w = cancelled;
        }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Left-to-right product of the generator matrices; the result is in psi
/// mode (determinant +1).
pub fn evaluate_word(w: &GeneratorWord) -> GluingMatrix {
    let mut acc = [[1i64, 0], [0, 1]];
    for l in &w.0 {
        let m = match l {
            Letter::H => [[0, 1], [-1, 0]],
            Letter::T(k) => [[1, *k], [0, 1]],
        };
        acc = GluingMatrix::mul_raw(acc, m);
    }
    GluingMatrix::new(acc, BasisMode::Psi)
}

/// How a computed matrix relates to a reference matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Exact,
    EConjugate,
    MinusIdentity,
    MinusEConjugate,
    None,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Exact => write!(f, "exact"),
            Relation::EConjugate => write!(f, "equal after conjugating by e = diag(1,-1)"),
            Relation::MinusIdentity => write!(f, "equal after multiplying by -id"),
            Relation::MinusEConjugate => {
                write!(f, "equal after -id and conjugation by e")
            }
            Relation::None => write!(f, "no relation in {{±id, e-conjugation}}"),
        }
    }
}

fn relation_between(value: &GluingMatrix, reference: &GluingMatrix) -> Relation {
    if value.entries == reference.entries {
        Relation::Exact
    } else if value.entries == reference.e_conjugate().entries {
        Relation::EConjugate
    } else if value.entries == reference.neg().entries {
        Relation::MinusIdentity
    } else if value.entries == reference.neg().e_conjugate().entries {
        Relation::MinusEConjugate
    } else {
        Relation::None
    }
}

/// The word H T(-n) H T(n) H, its value, and how the value relates to
/// psi_n^+ in both multiplication orders. Discrepancies are reported, never
/// silently normalized.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub n: i64,
    pub word: GeneratorWord,
    pub value: GluingMatrix,
    pub relation: Relation,
    pub reversed_value: GluingMatrix,
    pub reversed_relation: Relation,
    pub squares_to_minus_id: bool,
}

pub fn family_word_report(n: i64) -> FactorizationReport {
    let word = GeneratorWord::symmetric_family(n);
    let value = evaluate_word(&word);
    let reversed_value = evaluate_word(&word.reversed());
    let reference = GluingMatrix::psi_plus(n);
    FactorizationReport {
        n,
        relation: relation_between(&value, &reference),
        reversed_relation: relation_between(&reversed_value, &reference),
        squares_to_minus_id: value.squares_to_minus_id(),
        word,
        value,
        reversed_value,
    }
}

/// Factor a psi-mode matrix into generators by the Euclidean algorithm on
/// the first column, tracking signs with explicit H^2 = -id insertions.
/// The returned word evaluates to the input exactly.
pub fn factorize(m: &GluingMatrix) -> Result<GeneratorWord, Error> {
    let psi = m.in_mode(BasisMode::Psi);
    if psi.det() != 1 {
        return Err(Error::InvalidInput(format!(
            "factorize needs determinant +1 in psi mode, got {}",
            psi.det()
        )));
    }
    let mut letters = Vec::new();
    let mut cur = psi.entries;
    loop {
        let [[a, b], [c, d]] = cur;
        if c == 0 {
            // det 1 forces a = d = ±1
            if a == 1 {
                letters.push(Letter::T(b));
            } else {
                debug_assert_eq!(a, -1);
                letters.push(Letter::H);
                letters.push(Letter::H);
                letters.push(Letter::T(-b));
            }
            break;
        }
        let q = a.div_euclid(c);
        // M = T(q) · H^{-1} · (H · T(-q) · M); H^{-1} = H^3
        letters.push(Letter::T(q));
        letters.push(Letter::H);
        letters.push(Letter::H);
        letters.push(Letter::H);
        let t = [[1, -q], [0, 1]];
        let h = [[0i64, 1], [-1, 0]];
        cur = GluingMatrix::mul_raw(h, GluingMatrix::mul_raw(t, cur));
        let _ = d;
    }
    let word = GeneratorWord(letters).simplified();
    debug_assert_eq!(evaluate_word(&word).entries, psi.entries);
    Ok(word)
}
