//! 3x3 integer matrices and the lattice plumbing built on them.
//!
//! Bases are stored column-wise: column `j` holds the coordinates of the
//! `j`-th basis vector. A Gram matrix in a new basis `U` is `Uᵀ G U`.

use crate::arith::{gcd, inv_mod, xgcd};

pub type Vec3 = [i128; 3];
pub type Mat3 = [[i128; 3]; 3];

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn det(a: &Mat3) -> i128 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn adjugate(a: &Mat3) -> Mat3 {
    let mut adj = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]];
            adj[i][j] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    adj
}

/// Inverse of a unimodular matrix. Panics if `|det| != 1`.
pub fn inverse_unimodular(a: &Mat3) -> Mat3 {
    let d = det(a);
    assert!(d == 1 || d == -1, "matrix is not unimodular (det {d})");
    let mut adj = adjugate(a);
    for row in adj.iter_mut() {
        for x in row.iter_mut() {
            *x *= d;
        }
    }
    adj
}

/// `Uᵀ G U`.
pub fn congruent(g: &Mat3, u: &Mat3) -> Mat3 {
    mul(&transpose(u), &mul(g, u))
}

pub fn column(m: &Mat3, j: usize) -> Vec3 {
    [m[0][j], m[1][j], m[2][j]]
}

pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
    let mut m = [[0i128; 3]; 3];
    for i in 0..3 {
        m[i][0] = c0[i];
        m[i][1] = c1[i];
        m[i][2] = c2[i];
    }
    m
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0i128; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| m[i][k] * v[k]).sum();
    }
    out
}

/// Bilinear value `xᵀ G y`.
pub fn bilinear(g: &Mat3, x: &Vec3, y: &Vec3) -> i128 {
    let gy = mat_vec(g, y);
    (0..3).map(|i| x[i] * gy[i]).sum()
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Column-style Hermite normal form of the lattice spanned by `gens`
/// (full rank 3 required). Returns a basis as the columns of an upper
/// triangular matrix with positive diagonal.
pub fn hnf_basis(gens: &[Vec3]) -> Mat3 {
    // Work on row vectors; reduce to row echelon form with gcd steps.
    let mut rows: Vec<Vec3> = gens
        .iter()
        .copied()
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut basis: Vec<Vec3> = Vec::with_capacity(3);
    for col in 0..3 {
        // Combine every row with a nonzero entry in `col` into a single pivot.
        let mut pivot: Option<Vec3> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for r in rows.drain(..) {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (g, x, y) = xgcd(p[col], r[col]);
                    let (pa, ra) = (p[col] / g, r[col] / g);
                    let mut np = [0i128; 3];
                    let mut nr = [0i128; 3];
                    for k in 0..3 {
                        np[k] = x * p[k] + y * r[k];
                        nr[k] = ra * p[k] - pa * r[k];
                    }
                    debug_assert_eq!(nr[col], 0);
                    pivot = Some(np);
                    if nr.iter().any(|&v| v != 0) {
                        rest.push(nr);
                    }
                }
            }
        }
        let mut p = pivot.expect("generators do not span a full-rank lattice");
        if p[col] < 0 {
            for v in p.iter_mut() {
                *v = -*v;
            }
        }
        basis.push(p);
        rows = rest;
    }
    // Size-reduce entries above the diagonal (rows are basis vectors).
    for i in (0..3).rev() {
        for j in 0..i {
            let q = basis[j][i].div_euclid(basis[i][i]);
            if q != 0 {
                let bi = basis[i];
                for k in 0..3 {
                    basis[j][k] -= q * bi[k];
                }
            }
        }
    }
    from_columns(basis[0], basis[1], basis[2])
}

/// Sublattice `{ Σ cᵢ bᵢ : Σ cᵢ wᵢ ≡ 0 (mod p) }` of the lattice with
/// basis columns `b`, for a prime `p`.
pub fn kernel_mod_prime(b: &Mat3, w: &Vec3, p: i128) -> Mat3 {
    let w: Vec3 = [w[0].rem_euclid(p), w[1].rem_euclid(p), w[2].rem_euclid(p)];
    let Some(j) = (0..3).find(|&j| w[j] != 0) else {
        return *b;
    };
    let inv = inv_mod(w[j], p).expect("p prime");
    let bj = column(b, j);
    let mut cols: Vec<Vec3> = Vec::with_capacity(3);
    for i in 0..3 {
        if i == j {
            cols.push([p * bj[0], p * bj[1], p * bj[2]]);
        } else {
            let t = (w[i] * inv) % p;
            let bi = column(b, i);
            cols.push([bi[0] - t * bj[0], bi[1] - t * bj[1], bi[2] - t * bj[2]]);
        }
    }
    hnf_basis(&cols)
}

pub fn content(v: &Vec3) -> i128 {
    gcd(gcd(v[0], v[1]), v[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_index_two_sublattice() {
        let b = hnf_basis(&[[2, 0, 0], [1, 1, 0], [0, 0, 1], [3, 1, 0]]);
        assert_eq!(det(&b).abs(), 2);
        let k = kernel_mod_prime(&IDENTITY, &[1, 1, 0], 2);
        assert_eq!(det(&k).abs(), 2);
        for j in 0..3 {
            let c = column(&k, j);
            assert_eq!((c[0] + c[1]).rem_euclid(2), 0);
        }
    }

    #[test]
    fn unimodular_inverse() {
        let u = [[1, 1, 0], [0, 1, 0], [2, 3, 1]];
        assert_eq!(mul(&u, &inverse_unimodular(&u)), IDENTITY);
    }
}
