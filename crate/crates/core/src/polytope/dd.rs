//! Double-description enumeration of the extreme points and rays of
//! `{x ≥ 0 : A x ≤ b}`.
//!
//! The polyhedron is lifted to the cone `{(x, t) ≥ 0 : b t − A x ≥ 0}`. We
//! start from the generators of the nonnegative orthant and cut by one row at
//! a time, combining adjacent ray pairs on opposite sides. Adjacency uses the
//! combinatorial test on zero sets. Rays are primitive integer vectors, so all
//! arithmetic is exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(alloc::vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Scales a rational row to a primitive integer row with the same sign pattern.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
}

pub(crate) struct Generators {
    /// Extreme points with the indices of the region rows tight at each.
    pub points: Vec<(Vec<Rational>, Vec<usize>)>,
    /// Extreme directions of the recession cone.
    pub rays: Vec<Vec<Rational>>,
}

pub(crate) fn enumerate(a: &[Vec<Rational>], b: &[Rational]) -> Generators {
    let n = a.first().map_or(0, Vec::len);
    let dim = n + 1;
    // constraint ids: 0..n are x_i ≥ 0, n is t ≥ 0, n+1+i is row i
    let total = dim + a.len();

    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut coords = alloc::vec![BigInt::zero(); dim];
            coords[i] = BigInt::one();
            let mut zeros = Bits::new(total);
            for j in (0..dim).filter(|&j| j != i) {
                zeros.set(j);
            }
            Ray { coords, zeros }
        })
        .collect();

    for (row_idx, (row, rhs)) in a.iter().zip(b).enumerate() {
        let id = dim + row_idx;
        let mut lifted: Vec<Rational> = row.iter().map(|x| -x).collect();
        lifted.push(rhs.clone());
        let h = integer_row(&lifted);

        let values: Vec<BigInt> = rays.iter().map(|r| dot(&h, &r.coords)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.set(id);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if (common.count() as usize) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != q && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let coords: Vec<BigInt> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xq, xp)| &values[p] * xq - &values[q] * xp)
                    .collect();
                let mut zeros = common;
                zeros.set(id);
                fresh.push(Ray {
                    coords: primitive(coords),
                    zeros,
                });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_zero() {
                r.zeros.set(id);
                next.push(r);
            } else if v.is_positive() {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }

    let mut points = Vec::new();
    let mut directions = Vec::new();
    for r in rays {
        let t = &r.coords[n];
        if t.is_zero() {
            directions.push(
                r.coords[..n]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect(),
            );
        } else {
            let x: Vec<Rational> = r.coords[..n]
                .iter()
                .map(|c| Rational::new(c.clone(), t.clone()))
                .collect();
            let tight = (0..a.len())
                .filter(|&i| r.zeros.0[(dim + i) / 64] & (1 << ((dim + i) % 64)) != 0)
                .collect();
            points.push((x, tight));
        }
    }
    Generators {
        points,
        rays: directions,
    }
}
