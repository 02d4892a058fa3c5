//! Integer lattices: saturation of rational subspaces and lattice coordinates.

use crate::error::{Error, Result};
use crate::rat::{self, Point, Rat};
use crate::ratlin::{RatMatrix, Subspace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extended gcd with a nonnegative gcd: `s a + t b = g`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Clears denominators row by row.
fn integer_rows(rows: &[Point]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| rat::primitive(r)).collect()
}

/// Basis of `{y ∈ ℤ^n : A y = 0}` for an integer matrix `A` with `n` columns,
/// by unimodular column reduction.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, a: usize, b: usize, c: [&BigInt; 4]| {
        for row in mat.iter_mut() {
            let (x, y) = (row[a].clone(), row[b].clone());
            row[a] = c[0] * &x + c[1] * &y;
            row[b] = c[2] * &x + c[3] * &y;
        }
    };
    let mut k = 0;
    for i in 0..m.len() {
        if k == n {
            break;
        }
        for j in (k + 1)..n {
            if m[i][j].is_zero() {
                continue;
            }
            let (x, y) = (m[i][k].clone(), m[i][j].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let (p, q) = (-(&y / &g), &x / &g);
            let coeffs = [&s, &t, &p, &q];
            col_op(&mut m, k, j, coeffs);
            col_op(&mut u, k, j, coeffs);
        }
        if !m[i][k].is_zero() {
            k += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (k..n).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect();
    hermite_rows(basis)
}

/// Row Hermite normal form of a full row rank integer matrix; same lattice, smaller entries.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, p);
            let mut done = true;
            for i in (r + 1)..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pr = rows[r].clone();
            for i in 0..r {
                let q = rows[i][c].div_floor(&pr[c]);
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
            r += 1;
        }
    }
    rows
}

/// A lattice `V ∩ ℤ^n` with a fixed basis, able to express points of `V`
/// in lattice coordinates. Volumes computed in these coordinates are
/// normalized so that a fundamental cell has volume one.
#[derive(Clone, Debug)]
pub struct LatticeFrame {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    inv: RatMatrix,
}

impl LatticeFrame {
    /// The saturated lattice `V ∩ ℤ^n` of a rational subspace.
    pub fn saturate(v: &Subspace) -> Self {
        let n = v.ambient();
        let ann = integer_rows(v.annihilator().basis());
        let basis = integer_kernel(&ann, n);
        Self::from_basis(n, basis)
    }

    /// The lattice `ξ^⊥ ∩ ℤ^n`.
    pub fn orthogonal(xi: &[Rat]) -> Self {
        let n = xi.len();
        let basis = integer_kernel(&[rat::primitive(xi)], n);
        Self::from_basis(n, basis)
    }

    /// Lattice of the span of the given vectors, saturated in `ℤ^n`.
    pub fn of_span(n: usize, vectors: Vec<Point>) -> Result<Self> {
        Ok(Self::saturate(&Subspace::span(n, vectors)?))
    }

    fn from_basis(ambient: usize, basis: Vec<Vec<BigInt>>) -> Self {
        let pivots: Vec<usize> = basis
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
            .collect();
        let square: Vec<Point> = basis
            .iter()
            .map(|row| pivots.iter().map(|&p| Rat::from_integer(row[p].clone())).collect())
            .collect();
        let inv = if square.is_empty() {
            RatMatrix::identity(0)
        } else {
            RatMatrix::from_rows(square)
                .ok()
                .and_then(|m| m.inverse())
                .expect("echelon basis is invertible on its pivot columns")
        };
        LatticeFrame { ambient, basis, pivots, inv }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Coordinates `c` with `Σ c_i b_i = v`; errors when `v ∉ V`.
    pub fn coords(&self, v: &[Rat]) -> Result<Point> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        if self.basis.is_empty() {
            return if rat::is_zero_vec(v) {
                Ok(Vec::new())
            } else {
                Err(Error::precondition("vector outside the zero lattice"))
            };
        }
        let vp: Point = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.inv.apply_row(&vp);
        if self.lift(&c) != v {
            return Err(Error::precondition("vector lies outside the lattice span"));
        }
        Ok(c)
    }

    pub fn lift(&self, c: &[Rat]) -> Point {
        let mut out = vec![Rat::zero(); self.ambient];
        for (ci, row) in c.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += ci * Rat::from_integer(x.clone());
            }
        }
        out
    }

    /// A basis vector set as rationals.
    pub fn basis_points(&self) -> Vec<Point> {
        self.basis.iter().map(|r| rat::from_ints(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::point;

    #[test]
    fn saturation_of_diagonal_line() {
        let v = Subspace::span(2, vec![point(&[2, 2])]).unwrap();
        let f = LatticeFrame::saturate(&v);
        assert_eq!(f.rank(), 1);
        let c = f.coords(&point(&[2, 2])).unwrap();
        assert_eq!(c[0].abs(), rat::rat(2));
        assert!(f.coords(&point(&[1, 1])).unwrap().iter().all(rat::is_integral));
    }

    #[test]
    fn orthogonal_lattice_has_unit_covolume() {
        let f = LatticeFrame::orthogonal(&point(&[1, 1, 1]));
        assert_eq!(f.rank(), 2);
        for b in f.basis() {
            assert!(b.iter().fold(BigInt::zero(), |s, x| s + x).is_zero());
        }
        // e1 - e0 and e2 - e0 must have integral coordinates
        assert!(f.coords(&point(&[-1, 1, 0])).unwrap().iter().all(rat::is_integral));
        assert!(f.coords(&point(&[-1, 0, 1])).unwrap().iter().all(rat::is_integral));
        assert!(f.coords(&point(&[1, 0, 0])).is_err());
    }

    #[test]
    fn kernel_is_saturated() {
        let a = vec![vec![BigInt::from(2), BigInt::from(4), BigInt::from(6)]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        let f = LatticeFrame::from_basis(3, k);
        assert!(f.coords(&point(&[1, 1, -1])).unwrap().iter().all(rat::is_integral));
    }
}
