//! Dense tableau simplex over exact rationals with Bland's rule.
//!
//! Solves `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`. Rows with a negative
//! right-hand side are handled by a phase 1 on one auxiliary variable.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
        /// Optimal multipliers of the `Ax ≤ b` rows.
        duals: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Row `i` reads `Σ_j rows[i][j] x_j = rows[i][width]` with `basis[i]` pivoted.
    rows: Vec<Vec<BigRational>>,
    /// `z + Σ_j obj[j] x_j = obj[width]`.
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<BigRational>| {
            let factor = row[col].clone();
            if factor.is_zero() {
                return;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    /// Runs Bland's rule over columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[self.width] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Maximizes `cᵀx` over `Ax ≤ b`, `x ≥ 0`.
pub(crate) fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = b.len();
    debug_assert!(a.len() == m && a.iter().all(|row| row.len() == n));
    // Columns: x (n), slacks (m), auxiliary (1), right-hand side.
    let aux = n + m;
    let width = n + m + 1;
    let zero = BigRational::zero();
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![zero.clone(); width + 1];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = BigRational::one();
            row[aux] = -BigRational::one();
            row[width] = b[i].clone();
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        obj: vec![zero.clone(); width + 1],
        basis: (n..n + m).collect(),
        width,
    };

    let most_negative = (0..m)
        .filter(|&i| b[i].is_negative())
        .min_by(|&i, &j| b[i].cmp(&b[j]).then(i.cmp(&j)));
    if let Some(r) = most_negative {
        // Phase 1: maximize −x_aux.
        t.obj[aux] = BigRational::one();
        t.pivot(r, aux);
        t.optimize(width);
        if !t.obj[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        if let Some(r) = t.basis.iter().position(|&v| v == aux) {
            let col = (0..aux)
                .find(|&j| !t.rows[r][j].is_zero())
                .expect("a row with a zero auxiliary value has another nonzero entry");
            t.pivot(r, col);
        }
    }
    // Drop the auxiliary column and install the real objective.
    for row in t.rows.iter_mut() {
        row[aux] = zero.clone();
    }
    t.obj = vec![zero.clone(); width + 1];
    for (j, cj) in c.iter().enumerate() {
        t.obj[j] = -cj.clone();
    }
    for i in 0..m {
        let v = t.basis[i];
        let factor = t.obj[v].clone();
        if !factor.is_zero() {
            for (o, p) in t.obj.iter_mut().zip(&t.rows[i]) {
                *o -= &factor * p;
            }
        }
    }
    if !t.optimize(aux) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![zero.clone(); n];
    for (i, &v) in t.basis.iter().enumerate() {
        if v < n {
            x[v] = t.rows[i][width].clone();
        }
    }
    LpOutcome::Optimal {
        value: t.obj[width].clone(),
        x,
        duals: t.obj[n..n + m].to_vec(),
    }
}
