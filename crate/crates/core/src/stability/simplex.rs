//! Dense tableau simplex for `max cᵀx s.t. Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The slack basis is feasible at the start, so one phase suffices. Bland's
//! rule (lowest index enters, lowest basic index leaves on ties) rules out
//! cycling. Generic over exact rationals (tolerance zero) and `f64`.

use num_traits::{Num, Signed};

pub(crate) struct Solution<T> {
    pub objective: T,
    /// Dual value of each constraint row.
    pub duals: Vec<T>,
}

pub(crate) fn maximize<T>(c: &[T], a: &[Vec<T>], b: &[T], tol: &T) -> Option<Solution<T>>
where
    T: Num + Signed + Clone + PartialOrd,
{
    let rows = a.len();
    let vars = c.len();
    let width = vars + rows;
    debug_assert!(b.iter().all(|x| !x.is_negative()));

    let mut tab: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..rows).map(|j| if i == j { T::one() } else { T::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    // reduced costs; last entry is minus the objective value
    let mut cost: Vec<T> = c.to_vec();
    cost.extend((0..=rows).map(|_| T::zero()));
    let mut basis: Vec<usize> = (vars..width).collect();

    while let Some(enter) = (0..width).find(|&j| cost[j] > *tol) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..rows {
            let coef = &tab[i][enter];
            if *coef <= *tol {
                continue;
            }
            let ratio = tab[i][width].clone() / coef.clone();
            let take = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if take {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, _) = leave?;

        let pivot = tab[pivot_row][enter].clone();
        for x in tab[pivot_row].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        let pivot_values = tab[pivot_row].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pivot_row || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_values) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        let factor = cost[enter].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_values) {
            *x = x.clone() - factor.clone() * p.clone();
        }
        basis[pivot_row] = enter;
    }

    Some(Solution {
        objective: -cost[width].clone(),
        duals: (0..rows).map(|i| -cost[vars + i].clone()).collect(),
    })
}
