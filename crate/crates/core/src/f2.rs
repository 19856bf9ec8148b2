//! Dense linear algebra over the two-element field, bit-packed per row.
//! Used for homotopy equations, local-map searches, and truncated homology
//! rank counts.

/// Dense F2 matrix; rows are packed into 64-bit words.
#[derive(Debug, Clone)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = r * self.words + c / 64;
        let m = 1u64 << (c % 64);
        if v {
            self.bits[w] |= m;
        } else {
            self.bits[w] &= !m;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] ^= 1u64 << (c % 64);
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            self.bits[d + k] ^= self.bits[s + k];
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon().len()
    }

    /// In-place row echelon; returns the pivot columns in order.
    fn row_echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            if p != row {
                // swap rows
                for k in 0..self.words {
                    self.bits.swap(row * self.words + k, p * self.words + k);
                }
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row_into(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// A linear system over F2: rows of `a` are equations in `vars` unknowns,
/// `rhs` the right-hand sides.
pub struct F2System {
    pub vars: usize,
    a: F2Matrix,
    rhs: Vec<bool>,
    next_eq: usize,
}

impl F2System {
    pub fn new(vars: usize, max_eqs: usize) -> Self {
        F2System {
            vars,
            a: F2Matrix::zero(max_eqs, vars),
            rhs: vec![false; max_eqs],
            next_eq: 0,
        }
    }

    /// Add one equation: xor of the listed unknowns equals `b`.
    pub fn add_equation(&mut self, terms: &[usize], b: bool) {
        let r = self.next_eq;
        assert!(r < self.a.rows, "equation capacity exceeded");
        for &t in terms {
            self.a.flip(r, t);
        }
        self.rhs[r] = b;
        self.next_eq += 1;
    }

    /// Solve the system. Returns a particular solution and a basis of the
    /// homogeneous solution space, or None when inconsistent.
    ///
    /// The kernel basis is produced in a deterministic order: free variables
    /// ascending, each basis vector having a 1 in its free variable.
    pub fn solve(&self) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
        let rows = self.next_eq;
        let cols = self.vars;
        // augmented elimination
        let mut m = F2Matrix::zero(rows, cols + 1);
        for r in 0..rows {
            for c in 0..cols {
                if self.a.get(r, c) {
                    m.set(r, c, true);
                }
            }
            if self.rhs[r] {
                m.set(r, cols, true);
            }
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            if p != row {
                for k in 0..m.words {
                    m.bits.swap(row * m.words + k, p * m.words + k);
                }
            }
            for r in 0..rows {
                if r != row && m.get(r, col) {
                    m.xor_row_into(row, r);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // inconsistency: zero row with rhs 1
        for r in row..rows {
            if m.get(r, cols) && {
                let mut z = true;
                for c in 0..cols {
                    if m.get(r, c) {
                        z = false;
                        break;
                    }
                }
                z
            } {
                return None;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut particular = vec![false; cols];
        for &(r, c) in &pivots {
            particular[c] = m.get(r, cols);
        }
        let mut kernel = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![false; cols];
            v[free] = true;
            for &(r, c) in &pivots {
                if m.get(r, free) {
                    v[c] = true;
                }
            }
            kernel.push(v);
        }
        Some((particular, kernel))
    }
}

/// Row-reduce a set of F2 vectors to an independent basis, preserving a
/// deterministic echelon order (sorted by leading index).
pub fn independent_basis(vectors: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let Some(len) = vectors.first().map(|v| v.len()) else {
        return Vec::new();
    };
    let mut basis: Vec<Vec<bool>> = Vec::new();
    for mut v in vectors {
        loop {
            let Some(lead) = v.iter().position(|&b| b) else {
                break;
            };
            if let Some(b) = basis
                .iter()
                .find(|b| b.iter().position(|&x| x) == Some(lead))
            {
                for i in 0..len {
                    v[i] ^= b[i];
                }
            } else {
                basis.push(v);
                break;
            }
        }
    }
    basis.sort_by_key(|v| v.iter().position(|&b| b).unwrap_or(len));
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        // x0 + x1 = 1, x1 = 1 -> x0 = 0, x1 = 1
        let mut sys = F2System::new(2, 2);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[1], true);
        let (sol, ker) = sys.solve().unwrap();
        assert_eq!(sol, vec![false, true]);
        assert!(ker.is_empty());
    }

    #[test]
    fn inconsistent_system() {
        let mut sys = F2System::new(1, 2);
        sys.add_equation(&[], true);
        assert!(sys.solve().is_none());
    }

    #[test]
    fn kernel_dimensions() {
        // x0 + x1 + x2 = 0 has a 2-dimensional kernel
        let mut sys = F2System::new(3, 1);
        sys.add_equation(&[0, 1, 2], false);
        let (sol, ker) = sys.solve().unwrap();
        assert_eq!(sol, vec![false; 3]);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(v.iter().filter(|&&b| b).count() % 2, 0);
        }
    }

    #[test]
    fn independent_basis_reduces() {
        let vs = vec![
            vec![true, false, true],
            vec![true, false, true],
            vec![false, true, false],
            vec![true, true, true],
        ];
        let b = independent_basis(vs);
        assert_eq!(b.len(), 2);
    }
}
