//! Exact rational linear algebra: elimination, rank, nullspace, and a
//! two-phase simplex used for all polyhedral feasibility questions.

use crate::scalar::Rat;
use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};

/// Row-reduces `m` in place, returning the pivot columns.
pub fn row_reduce(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut copy = m.to_vec();
    row_reduce(&mut copy).len()
}

/// Basis of the right nullspace of `m` (columns = variables).
pub fn nullspace(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut copy = m.to_vec();
    let pivots = row_reduce(&mut copy);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -copy[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to a primitive integer vector (gcd 1), keeping
/// direction. Returns None for the zero vector.
pub fn primitive_integer(v: &[Rat]) -> Option<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Some(ints.iter().map(|x| x / &g).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, x: Vec<Rat> },
}

/// Maximizes `c.x` subject to `a_eq x = b_eq`, `a_le x <= b_le` over free
/// variables. Exact simplex with Bland's rule.
pub fn lp_max(
    c: &[Rat],
    a_eq: &[Vec<Rat>],
    b_eq: &[Rat],
    a_le: &[Vec<Rat>],
    b_le: &[Rat],
) -> LpOutcome {
    let n = c.len();
    // Free variables split as x = u - v with u, v >= 0; one slack per <= row.
    let n_slack = a_le.len();
    let width = 2 * n + n_slack;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (a, b) in a_eq.iter().zip(b_eq) {
        let mut row = vec![Rat::zero(); width];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        rows.push(row);
        rhs.push(b.clone());
    }
    for (i, (a, b)) in a_le.iter().zip(b_le).enumerate() {
        let mut row = vec![Rat::zero(); width];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        row[2 * n + i] = Rat::one();
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut obj = vec![Rat::zero(); width];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -c[j].clone();
    }
    match simplex_standard(rows, rhs, obj) {
        StdOutcome::Infeasible => LpOutcome::Infeasible,
        StdOutcome::Unbounded => LpOutcome::Unbounded,
        StdOutcome::Optimal { value, x } => {
            let sol: Vec<Rat> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
            LpOutcome::Optimal { value, x: sol }
        }
    }
}

/// Is `q` a convex combination of `points`?
pub fn in_convex_hull(q: &[Rat], points: &[Vec<Rat>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = q.len();
    let m = points.len();
    // lambda >= 0, sum lambda = 1, sum lambda p_i = q: feasibility via
    // maximizing 0 in standard form directly (variables already nonneg).
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut top = vec![Rat::one(); m];
    top.resize(m, Rat::one());
    rows.push(top);
    rhs.push(Rat::one());
    for d in 0..dim {
        rows.push(points.iter().map(|p| p[d].clone()).collect());
        rhs.push(q[d].clone());
    }
    !matches!(
        simplex_standard(rows, rhs, vec![Rat::zero(); m]),
        StdOutcome::Infeasible
    )
}

enum StdOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, x: Vec<Rat> },
}

/// Two-phase simplex for `max obj.x` s.t. `rows x = rhs`, `x >= 0`.
fn simplex_standard(mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>, obj: Vec<Rat>) -> StdOutcome {
    let m = rows.len();
    let n = obj.len();
    for i in 0..m {
        if rhs[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
    }
    // Phase 1: artificial variables form the initial basis.
    let width = n + m;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = rows[i].clone();
        row.resize(width, Rat::zero());
        row[n + i] = Rat::one();
        row.push(rhs[i].clone());
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Phase-1 objective: minimize sum of artificials = maximize -sum.
    let mut z = vec![Rat::zero(); width + 1];
    for i in 0..m {
        for j in 0..=width {
            let d = t[i][j].clone();
            z[j] = &z[j] + &d;
        }
    }
    // z row holds (sum of basis rows); reduced costs for phase 1 are z_j for
    // non-artificial j; we pivot to drive z[width] (infeasibility) to 0.
    loop {
        let Some(enter) = (0..n).find(|&j| z[j].is_positive() && !basis.contains(&j)) else {
            break;
        };
        match pivot_ratio(&t, &basis, enter, width) {
            Some(leave) => {
                pivot(&mut t, &mut z, &mut basis, leave, enter, width);
            }
            None => break,
        }
    }
    if !z[width].is_zero() {
        return StdOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                let mut zdummy = vec![Rat::zero(); width + 1];
                pivot(&mut t, &mut zdummy, &mut basis, i, j, width);
            }
            // A row whose only support is artificial is redundant; its
            // artificial stays basic at value zero, which is harmless.
        }
    }
    // Phase 2.
    let mut z2 = vec![Rat::zero(); width + 1];
    for j in 0..n {
        z2[j] = -obj[j].clone();
    }
    for (i, &b) in basis.iter().enumerate() {
        if b < n && !obj[b].is_zero() {
            let f = obj[b].clone();
            for j in 0..=width {
                let d = &t[i][j] * &f;
                z2[j] = &z2[j] + &d;
            }
        }
    }
    loop {
        // Bland: smallest index with negative reduced cost (for max).
        let Some(enter) = (0..n).find(|&j| z2[j].is_negative()) else {
            let mut x = vec![Rat::zero(); n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = t[i][width].clone();
                }
            }
            return StdOutcome::Optimal { value: z2[width].clone(), x };
        };
        match pivot_ratio(&t, &basis, enter, width) {
            Some(leave) => pivot(&mut t, &mut z2, &mut basis, leave, enter, width),
            None => return StdOutcome::Unbounded,
        }
    }
}

/// Minimum-ratio row; ties broken by smallest basis index (Bland).
fn pivot_ratio(t: &[Vec<Rat>], basis: &[usize], enter: usize, width: usize) -> Option<usize> {
    let mut best: Option<(Rat, usize)> = None;
    for (i, row) in t.iter().enumerate() {
        if row[enter].is_positive() {
            let ratio = &row[width] / &row[enter];
            match &best {
                Some((r, bi)) if *r < ratio || (*r == ratio && basis[*bi] < basis[i]) => {}
                _ => best = Some((ratio, i)),
            }
        }
    }
    best.map(|(_, i)| i)
}

fn pivot(
    t: &mut [Vec<Rat>],
    z: &mut [Rat],
    basis: &mut [usize],
    leave: usize,
    enter: usize,
    width: usize,
) {
    let p = t[leave][enter].clone();
    for j in 0..=width {
        t[leave][j] = &t[leave][j] / &p;
    }
    for i in 0..t.len() {
        if i != leave && !t[i][enter].is_zero() {
            let f = t[i][enter].clone();
            for j in 0..=width {
                let d = &t[leave][j] * &f;
                t[i][j] = &t[i][j] - &d;
            }
        }
    }
    if !z[enter].is_zero() {
        let f = z[enter].clone();
        for j in 0..=width {
            let d = &t[leave][j] * &f;
            z[j] = &z[j] - &d;
        }
    }
    basis[leave] = enter;
}
