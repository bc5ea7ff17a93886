//! Helpers shared by the integration-test targets: an independent rank
//! oracle and small fixture builders.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::Integer;
use num::Zero;

use pmbasis::pmod::{Module1d, Module2d, Window1d, Window2d};
use pmbasis::ratmat::{Matrix, Rational};

/// Rank by fraction-free integer elimination, sharing no code with the
/// library's reduction: each row is cleared of denominators, elimination
/// uses cross-multiplication only, and rows are reduced by their gcd to
/// keep the integers small.
pub fn independent_rank(a: &Matrix) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let lcm = (0..cols)
                .map(|c| a.get(r, c).denom().clone())
                .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
            (0..cols)
                .map(|c| {
                    let entry = a.get(r, c);
                    entry.numer() * (&lcm / entry.denom())
                })
                .collect()
        })
        .collect();

    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot_row_values = m[rank].clone();
        let pivot = pivot_row_values[col].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, slot) in row.iter_mut().enumerate().skip(col) {
                *slot = &*slot * &pivot - &pivot_row_values[c] * &factor;
            }
            let gcd = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if !gcd.is_zero() && gcd != BigInt::from(1) {
                for slot in row.iter_mut() {
                    *slot = &*slot / &gcd;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn mat(rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect(),
    )
    .unwrap()
}

/// Three degrees, dims 1-2-2, one new generator at each of the first two.
pub fn staircase_module() -> Module1d {
    Module1d::new(
        Window1d::new(0, 2).unwrap(),
        vec![1, 2, 2],
        vec![mat(&[&[1], &[0]]), mat(&[&[1, 0], &[0, 1]])],
    )
    .unwrap()
}

/// Zero at the origin, one-dimensional on the rest of a unit square, unit
/// boundary maps: commutes, injective, fails the intersection identity at
/// the far corner.
pub fn hook_module() -> Module2d {
    Module2d::new(
        Window2d::new(0, 1, 0, 1).unwrap(),
        vec![vec![0, 1], vec![1, 1]],
        vec![vec![Matrix::zero(1, 0), mat(&[&[1]])]],
        vec![vec![Matrix::zero(1, 0)], vec![mat(&[&[1]])]],
    )
    .unwrap()
}
