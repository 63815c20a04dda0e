//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / std::f64::consts::PI
}

/// Two finite marginals with small integer atoms and probabilities in
/// multiples of 1/8.
#[derive(Debug, Clone)]
pub struct PairInstance {
    pub a: Vec<(i64, Rational64)>,
    pub b: Vec<(i64, Rational64)>,
    pub c: i64,
}

fn random_law<R: Rng>(rng: &mut R, size: usize) -> Vec<(i64, Rational64)> {
    let mut values: Vec<i64> = Vec::new();
    while values.len() < size {
        let v = rng.random_range(-3..=3);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort();
    // split 8 eighths into `size` positive parts
    let mut cuts: Vec<i64> = Vec::new();
    while cuts.len() < size - 1 {
        let k = rng.random_range(1..8);
        if !cuts.contains(&k) {
            cuts.push(k);
        }
    }
    cuts.sort();
    cuts.insert(0, 0);
    cuts.push(8);
    values
        .into_iter()
        .zip(cuts.windows(2))
        .map(|(v, w)| (v, Rational64::new(w[1] - w[0], 8)))
        .collect()
}

/// Instance with at most 4 atoms per marginal; the center is a sum of atoms.
pub fn random_pair<R: Rng>(rng: &mut R) -> PairInstance {
    let na = rng.random_range(1..=4);
    let a = random_law(rng, na);
    let nb = rng.random_range(1..=4);
    let b = random_law(rng, nb);
    let c = a[rng.random_range(0..a.len())].0 + b[rng.random_range(0..b.len())].0;
    PairInstance { a, b, c }
}

// unique solution of the equalities restricted to `cells`, if the columns
// are independent and the system is consistent
fn solve_support(inst: &PairInstance, cells: &[(usize, usize)]) -> Option<Vec<Rational64>> {
    let (r, c) = (inst.a.len(), inst.b.len());
    let rows = r + c;
    let k = cells.len();
    let mut m = vec![vec![Rational64::zero(); k + 1]; rows];
    for (col, &(i, j)) in cells.iter().enumerate() {
        m[i][col] = Rational64::from_integer(1);
        m[r + j][col] = Rational64::from_integer(1);
    }
    for (row, atom) in m.iter_mut().zip(inst.a.iter().chain(&inst.b)) {
        row[k] = atom.1;
    }
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let p = (pivot_row..rows).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot_row, p);
        let pv = m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x /= pv;
        }
        let pr = m[pivot_row].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let f = row[col];
                for (x, v) in row.iter_mut().zip(&pr) {
                    *x -= f * v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if (pivot_row..rows).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k]).collect())
}

/// Feasibility by enumerating candidate vertices of the transportation
/// polytope on the cells with `a_i + b_j = c`.
pub fn vertex_oracle(inst: &PairInstance) -> bool {
    let cells: Vec<(usize, usize)> = (0..inst.a.len())
        .flat_map(|i| (0..inst.b.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| inst.a[i].0 + inst.b[j].0 == inst.c)
        .collect();
    let max_size = (inst.a.len() + inst.b.len() - 1).min(cells.len());
    for size in 1..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<(usize, usize)> = idx.iter().map(|&i| cells[i]).collect();
            if let Some(x) = solve_support(inst, &subset) {
                if x.iter().all(|v| !v.is_negative()) {
                    return true;
                }
            }
            // next combination
            let mut p = size;
            while p > 0 && idx[p - 1] == cells.len() - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    false
}

pub fn to_f64_law(law: &[(i64, Rational64)]) -> Vec<(f64, f64)> {
    law.iter()
        .map(|&(v, p)| (v as f64, *p.numer() as f64 / *p.denom() as f64))
        .collect()
}
