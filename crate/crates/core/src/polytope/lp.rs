//! Exact two-phase simplex in dictionary form with Bland's rule.
//!
//! Solves `max c·x  s.t.  A x ≤ b, x ≥ 0`. Variables `0..n` are structural,
//! `n..n+m` are the row slacks; `n+m` is the phase-one auxiliary.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
    Infeasible,
}

/// `basic[r] = rhs[r] − Σ_c rows[r][c] · nonbasic[c]`, `z = z0 + Σ_c obj[c] · nonbasic[c]`.
struct Dictionary {
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    obj: Vec<Rational>,
    z0: Rational,
}

impl Dictionary {
    fn pivot(&mut self, r: usize, c: usize) {
        let a = self.rows[r][c].clone();
        let inv = a.recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rows[r][c] = inv.clone();
        self.rhs[r] *= &inv;

        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if j != c && !pv.is_zero() {
                    self.rows[i][j] -= &f * pv;
                }
            }
            self.rows[i][c] = -(&f * &inv);
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for (j, pv) in pivot_row.iter().enumerate() {
                if j != c && !pv.is_zero() {
                    self.obj[j] -= &f * pv;
                }
            }
            self.obj[c] = -(&f * &inv);
            self.z0 += &f * &pivot_rhs;
        }
        core::mem::swap(&mut self.basic[r], &mut self.nonbasic[c]);
    }

    /// Bland's rule until optimal; `false` if unbounded.
    fn optimise(&mut self) -> bool {
        loop {
            let entering = (0..self.obj.len())
                .filter(|&c| self.obj[c].is_positive())
                .min_by_key(|&c| self.nonbasic[c]);
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][c];
                let better = match &leave {
                    None => true,
                    Some((best, q)) => ratio < *q || (ratio == *q && self.basic[r] < self.basic[*best]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

pub(crate) fn maximise(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Outcome {
    let n = c.len();
    let m = a.len();
    let aux = n + m;
    let needs_phase_one = b.iter().any(Signed::is_negative);

    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let mut nonbasic: Vec<usize> = (0..n).collect();
    if needs_phase_one {
        for row in rows.iter_mut() {
            row.push(-Rational::from_integer(1.into()));
        }
        nonbasic.push(aux);
    }
    let width = nonbasic.len();
    let mut obj = alloc::vec![Rational::zero(); width];
    if needs_phase_one {
        obj[n] = -Rational::from_integer(1.into());
    }
    let mut d = Dictionary {
        basic: (n..n + m).collect(),
        nonbasic,
        rows,
        rhs: b.to_vec(),
        obj,
        z0: Rational::zero(),
    };

    if needs_phase_one {
        let r = (0..m)
            .min_by(|&i, &j| d.rhs[i].cmp(&d.rhs[j]).then(d.basic[i].cmp(&d.basic[j])))
            .expect("a negative rhs implies a row");
        d.pivot(r, n);
        d.optimise();
        if d.z0.is_negative() {
            return Outcome::Infeasible;
        }
        if let Some(r) = d.basic.iter().position(|&v| v == aux) {
            match (0..width)
                .filter(|&c| !d.rows[r][c].is_zero())
                .min_by_key(|&c| d.nonbasic[c])
            {
                Some(c) => d.pivot(r, c),
                None => {
                    d.rows.remove(r);
                    d.rhs.remove(r);
                    d.basic.remove(r);
                }
            }
        }
        let col = d
            .nonbasic
            .iter()
            .position(|&v| v == aux)
            .expect("auxiliary is nonbasic");
        d.nonbasic.remove(col);
        for row in d.rows.iter_mut() {
            row.remove(col);
        }
        // re-express the real objective over the current nonbasic variables
        d.obj = alloc::vec![Rational::zero(); n];
        d.z0 = Rational::zero();
        for (v, cv) in c.iter().enumerate() {
            if cv.is_zero() {
                continue;
            }
            if let Some(col) = d.nonbasic.iter().position(|&x| x == v) {
                d.obj[col] += cv;
            } else if let Some(r) = d.basic.iter().position(|&x| x == v) {
                d.z0 += cv * &d.rhs[r];
                for j in 0..n {
                    let t = cv * &d.rows[r][j];
                    d.obj[j] -= t;
                }
            }
        }
    } else {
        d.obj = c.to_vec();
    }

    if !d.optimise() {
        return Outcome::Unbounded;
    }
    let mut x = alloc::vec![Rational::zero(); n];
    for (r, &v) in d.basic.iter().enumerate() {
        if v < n {
            x[v] = d.rhs[r].clone();
        }
    }
    Outcome::Optimal { value: d.z0, x }
}
