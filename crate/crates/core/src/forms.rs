//! Exact-integer core for positive definite ternary forms.
//!
//! A form `[a,b,c,d,e,g]` is `f = ax² + by² + cz² + dyz + exz + gxy`; its
//! Gram matrix is the Hessian
//!
//! ```text
//!     [ 2a  g  e ]
//! F = [  g 2b  d ]
//!     [  e  d 2c ]
//! ```
//!
//! so `Q(v) = vᵀFv = 2 f(v)` and `disc(f) = det(F) / 2`.
//!
//! Equivalence is full `GL₃(ℤ)` equivalence. For ternary forms `-I` has
//! determinant `-1` and fixes every form, so proper and improper classes
//! coincide.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, isqrt, xgcd};
use crate::matrix::{self, Mat3, Vec3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("form {0:?} is not positive definite")]
    NotPositiveDefinite([i64; 6]),
    #[error("form {0:?} is not primitive (content {1})")]
    NotPrimitive([i64; 6], i64),
    #[error("Gram matrix has an odd diagonal entry")]
    OddDiagonal,
    #[error("cannot parse form from {0:?}: expected six comma-separated integers")]
    Parse(String),
}

/// A primitive positive definite ternary form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 6]", try_from = "[i64; 6]")]
pub struct TernaryForm {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    e: i64,
    g: i64,
}

/// Gram matrix of a form: even diagonal, entries `B(eᵢ, eⱼ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramMatrix(pub Mat3);

/// Change of variables with determinant ±1; columns are the new basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularTransform(pub Mat3);

impl GramMatrix {
    pub fn det(&self) -> i128 {
        matrix::det(&self.0)
    }

    pub fn entries(&self) -> &Mat3 {
        &self.0
    }
}

impl UnimodularTransform {
    pub fn identity() -> Self {
        Self(matrix::IDENTITY)
    }

    /// Panics unless `det(m) = ±1`.
    pub fn new(m: Mat3) -> Self {
        let d = matrix::det(&m);
        assert!(d == 1 || d == -1, "not unimodular: det = {d}");
        Self(m)
    }

    pub fn compose(&self, then: &UnimodularTransform) -> Self {
        Self(matrix::mul(&self.0, &then.0))
    }

    pub fn inverse(&self) -> Self {
        Self(matrix::inverse_unimodular(&self.0))
    }
}

impl TernaryForm {
    /// Validates a sextuple `[a,b,c,d,e,g]`.
    pub fn new(coeffs: [i64; 6]) -> Result<Self, FormError> {
        let [a, b, c, d, e, g] = coeffs;
        let f = Self { a, b, c, d, e, g };
        let m = f.gram().0;
        let m1 = m[0][0];
        let m2 = m[0][0] * m[1][1] - m[0][1] * m[0][1];
        let m3 = matrix::det(&m);
        if m1 <= 0 || m2 <= 0 || m3 <= 0 {
            return Err(FormError::NotPositiveDefinite(coeffs));
        }
        let content = coeffs.iter().fold(0i128, |acc, &x| gcd(acc, x as i128));
        if content != 1 {
            return Err(FormError::NotPrimitive(coeffs, content as i64));
        }
        Ok(f)
    }

    /// Builds a form from a Gram matrix with even diagonal.
    pub fn from_gram(m: &Mat3) -> Result<Self, FormError> {
        if m[0][0] % 2 != 0 || m[1][1] % 2 != 0 || m[2][2] % 2 != 0 {
            return Err(FormError::OddDiagonal);
        }
        Self::new([
            (m[0][0] / 2) as i64,
            (m[1][1] / 2) as i64,
            (m[2][2] / 2) as i64,
            m[1][2] as i64,
            m[0][2] as i64,
            m[0][1] as i64,
        ])
    }

    /// Internal constructor for Gram matrices already known to be valid.
    fn from_gram_unchecked(m: &Mat3) -> Self {
        Self {
            a: (m[0][0] / 2) as i64,
            b: (m[1][1] / 2) as i64,
            c: (m[2][2] / 2) as i64,
            d: m[1][2] as i64,
            e: m[0][2] as i64,
            g: m[0][1] as i64,
        }
    }

    pub fn coeffs(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.g]
    }

    pub fn gram(&self) -> GramMatrix {
        let (a, b, c, d, e, g) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
            self.e as i128,
            self.g as i128,
        );
        GramMatrix([[2 * a, g, e], [g, 2 * b, d], [e, d, 2 * c]])
    }

    /// `disc(f) = det(F)/2`.
    pub fn discriminant(&self) -> i64 {
        (self.gram().det() / 2) as i64
    }

    /// Discriminant of the associated lattice, `dL = det(F) = 2·disc(f)`.
    pub fn lattice_discriminant(&self) -> i128 {
        self.gram().det()
    }

    pub fn eval(&self, v: &Vec3) -> i128 {
        let g = self.gram().0;
        matrix::bilinear(&g, v, v) / 2
    }

    /// The form `x ↦ f(Ux)`.
    pub fn transform(&self, u: &UnimodularTransform) -> TernaryForm {
        Self::from_gram_unchecked(&matrix::congruent(&self.gram().0, &u.0))
    }

    /// Canonical representative of the class together with a transform
    /// `U` such that `self.transform(U) == canonical`.
    pub fn reduce(&self) -> (TernaryForm, UnimodularTransform) {
        let g0 = self.gram().0;
        let u0 = greedy_reduce(&g0);
        let g = matrix::congruent(&g0, &u0);
        let (best, basis) = canonical_basis(&g);
        let u = matrix::mul(&u0, &basis);
        debug_assert_eq!(matrix::congruent(&g0, &u), best);
        (Self::from_gram_unchecked(&best), UnimodularTransform(u))
    }

    pub fn canonical(&self) -> TernaryForm {
        self.reduce().0
    }

    pub fn is_reduced(&self) -> bool {
        self.canonical() == *self
    }

    /// Smallest nonzero value of the form.
    pub fn minimum(&self) -> i64 {
        let (r, _) = self.reduce();
        r.a
    }

    /// Values represented by the form in `[1, bound]`.
    pub fn represented_set(&self, bound: u64) -> RepresentedSet {
        let mut set = RepresentedSet::empty(bound);
        let g = self.canonical().gram().0;
        for_each_short_vector(&g, 2 * bound as i128, true, |_, q| {
            set.insert((q / 2) as u64);
        });
        set
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{},{}]",
            self.a, self.b, self.c, self.d, self.e, self.g
        )
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.a, self.b, self.c, self.d, self.e, self.g
        )
    }
}

impl FromStr for TernaryForm {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(FormError::Parse(s.to_string()));
        }
        let mut coeffs = [0i64; 6];
        for (slot, p) in coeffs.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| FormError::Parse(s.to_string()))?;
        }
        Self::new(coeffs)
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(f: TernaryForm) -> Self {
        f.coeffs()
    }
}

impl TryFrom<[i64; 6]> for TernaryForm {
    type Error = FormError;

    fn try_from(c: [i64; 6]) -> Result<Self, Self::Error> {
        Self::new(c)
    }
}

/// Validated construction from a sextuple.
pub fn make_form(sextuple: [i64; 6]) -> Result<TernaryForm, FormError> {
    TernaryForm::new(sextuple)
}

pub fn discriminant(f: &TernaryForm) -> i64 {
    f.discriminant()
}

pub fn reduce(f: &TernaryForm) -> (TernaryForm, UnimodularTransform) {
    f.reduce()
}

/// Whether `f` and `g` are integrally equivalent; the witness `U`
/// satisfies `f.transform(U) == g`.
pub fn is_equivalent(f: &TernaryForm, g: &TernaryForm) -> Option<UnimodularTransform> {
    if f.discriminant() != g.discriminant() {
        return None;
    }
    let (rf, uf) = f.reduce();
    let (rg, ug) = g.reduce();
    (rf == rg).then(|| uf.compose(&ug.inverse()))
}

pub fn represented_set(f: &TernaryForm, bound: u64) -> RepresentedSet {
    f.represented_set(bound)
}

/// Sorted set of integers in `[1, bound]`, stored as a bitset.
#[derive(Clone, PartialEq, Eq)]
pub struct RepresentedSet {
    bound: u64,
    bits: Vec<u64>,
}

impl RepresentedSet {
    pub fn empty(bound: u64) -> Self {
        Self {
            bound,
            bits: vec![0; (bound as usize + 1).div_ceil(64)],
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn insert(&mut self, n: u64) {
        if n >= 1 && n <= self.bound {
            self.bits[(n / 64) as usize] |= 1 << (n % 64);
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.bound && self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &RepresentedSet) {
        assert_eq!(self.bound, other.bound);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    /// Smallest element of `other` missing from `self`.
    pub fn first_missing_from(&self, other: &RepresentedSet) -> Option<u64> {
        assert_eq!(self.bound, other.bound);
        for (i, (a, b)) in self.bits.iter().zip(&other.bits).enumerate() {
            let miss = b & !a;
            if miss != 0 {
                return Some(i as u64 * 64 + miss.trailing_zeros() as u64);
            }
        }
        None
    }

    pub fn is_superset_of(&self, other: &RepresentedSet) -> bool {
        self.first_missing_from(other).is_none()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.bound).filter(move |&n| self.contains(n))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Debug for RepresentedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Calls `visit(v, Q(v))` for every nonzero integer vector with
/// `vᵀ G v ≤ bound`. With `half`, only one of `±v` is visited.
///
/// Coordinate ranges come from completing the square in exact integer
/// arithmetic and are then filtered by the exact value, so the search
/// is complete for any positive definite `G`.
pub fn for_each_short_vector(g: &Mat3, bound: i128, half: bool, mut visit: impl FnMut(Vec3, i128)) {
    if bound <= 0 {
        return;
    }
    let det = matrix::det(g);
    let m2 = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    let n2 = g[0][0] * g[1][2] - g[0][1] * g[0][2];
    let p2 = g[0][0] * g[2][2] - g[0][2] * g[0][2];
    let zmax = isqrt(bound * m2 / det);
    let zmin = if half { 0 } else { -zmax };
    for z in zmin..=zmax {
        // Binary part after eliminating x: m2·y² + 2·n2·y·z + p2·z² ≤ bound·g00.
        let rhs = bound * g[0][0];
        let disc_y = n2 * n2 * z * z - m2 * (p2 * z * z - rhs);
        if disc_y < 0 {
            continue;
        }
        let s = isqrt(disc_y) + 1;
        let mut ylo = (-n2 * z - s).div_euclid(m2);
        let yhi = (-n2 * z + s).div_euclid(m2) + 1;
        if half && z == 0 {
            ylo = ylo.max(0);
        }
        for y in ylo..=yhi {
            if m2 * y * y + 2 * n2 * y * z + p2 * z * z > rhs {
                continue;
            }
            let h = g[0][1] * y + g[0][2] * z;
            let k = g[1][1] * y * y + 2 * g[1][2] * y * z + g[2][2] * z * z;
            let disc_x = h * h - g[0][0] * (k - bound);
            if disc_x < 0 {
                continue;
            }
            let s = isqrt(disc_x) + 1;
            let mut xlo = (-h - s).div_euclid(g[0][0]);
            let xhi = (-h + s).div_euclid(g[0][0]) + 1;
            if half && z == 0 && y == 0 {
                xlo = xlo.max(1);
            }
            for x in xlo..=xhi {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let q = g[0][0] * x * x + 2 * h * x + k;
                if q <= bound {
                    visit([x, y, z], q);
                }
            }
        }
    }
}

fn swap_cols(u: &mut Mat3, i: usize, j: usize) {
    for row in u.iter_mut() {
        row.swap(i, j);
    }
}

/// `col_dst -= q * col_src`.
fn sub_col(u: &mut Mat3, dst: usize, src: usize, q: i128) {
    for row in u.iter_mut() {
        row[dst] -= q * row[src];
    }
}

fn round_div(n: i128, d: i128) -> i128 {
    (2 * n + d).div_euclid(2 * d)
}

/// Minimisers of `Q(t - x·b0 - y·b1)` over integers, where in the given
/// Gram matrix `t` is basis vector 2 and `b0, b1` are vectors 0 and 1.
fn closest_in_plane(g: &Mat3) -> (i128, Vec<(i128, i128)>) {
    let (a, b, c) = (g[0][0], g[0][1], g[1][1]);
    let (r1, r2) = (g[0][2], g[1][2]);
    let det2 = a * c - b * b;
    let xnum = c * r1 - b * r2;
    let ynum = a * r2 - b * r1;
    let value = |x: i128, y: i128| {
        g[2][2] - 2 * x * r1 - 2 * y * r2 + a * x * x + 2 * b * x * y + c * y * y
    };
    let (x0, y0) = (round_div(xnum, det2), round_div(ynum, det2));
    let t = value(x0, y0);
    let sx = isqrt(t * c * det2) + 1;
    let sy = isqrt(t * a * det2) + 1;
    let (xlo, xhi) = (
        (xnum - sx).div_euclid(det2),
        (xnum + sx).div_euclid(det2) + 1,
    );
    let (ylo, yhi) = (
        (ynum - sy).div_euclid(det2),
        (ynum + sy).div_euclid(det2) + 1,
    );
    let mut best = t;
    let mut args = Vec::new();
    for x in xlo..=xhi {
        for y in ylo..=yhi {
            let v = value(x, y);
            if v < best {
                best = v;
                args.clear();
            }
            if v == best {
                args.push((x, y));
            }
        }
    }
    (best, args)
}

/// Greedy (Minkowski-type) reduction; returns the basis change.
fn greedy_reduce(g0: &Mat3) -> Mat3 {
    let mut u = matrix::IDENTITY;
    loop {
        let mut g = matrix::congruent(g0, &u);
        // Sort by norm.
        for i in 0..3 {
            for j in 0..2 - i {
                if g[j + 1][j + 1] < g[j][j] {
                    swap_cols(&mut u, j, j + 1);
                    g = matrix::congruent(g0, &u);
                }
            }
        }
        // Lagrange-reduce the first two vectors.
        loop {
            let q = round_div(g[0][1], g[0][0]);
            if q != 0 {
                sub_col(&mut u, 1, 0, q);
                g = matrix::congruent(g0, &u);
            }
            if g[1][1] < g[0][0] {
                swap_cols(&mut u, 0, 1);
                g = matrix::congruent(g0, &u);
            } else {
                break;
            }
        }
        let (_, args) = closest_in_plane(&g);
        let (x, y) = args[0];
        sub_col(&mut u, 2, 0, x);
        sub_col(&mut u, 2, 1, y);
        g = matrix::congruent(g0, &u);
        if g[2][2] >= g[1][1] {
            return u;
        }
    }
}

/// Among all bases realising the successive minima, the one whose form
/// has the lexicographically largest `(d, e, g)`. Returns the reduced
/// Gram matrix and the basis (relative to the Gram matrix given).
fn canonical_basis(g: &Mat3) -> (Mat3, Mat3) {
    // λ₂ ≤ max(Q(b0), Q(b1)) for any basis, so this bound captures λ₁, λ₂.
    let bound = g[0][0].max(g[1][1]);
    let mut vecs: Vec<(i128, Vec3)> = Vec::new();
    for_each_short_vector(g, bound, false, |v, q| vecs.push((q, v)));
    vecs.sort();
    let lambda1 = vecs[0].0;
    let first = vecs[0].1;
    let lambda2 = vecs
        .iter()
        .find(|(_, v)| matrix::cross(&first, v) != [0, 0, 0])
        .map(|(q, _)| *q)
        .expect("a second independent short vector exists");
    let v1s: Vec<Vec3> = vecs
        .iter()
        .filter(|(q, _)| *q == lambda1)
        .map(|(_, v)| *v)
        .collect();
    let v2s: Vec<Vec3> = vecs
        .iter()
        .filter(|(q, _)| *q == lambda2)
        .map(|(_, v)| *v)
        .collect();

    struct Candidate {
        lambda3: i128,
        key: (i128, i128, i128),
        basis: Mat3,
        gram: Mat3,
    }
    let mut best: Option<Candidate> = None;
    for v1 in &v1s {
        for v2 in &v2s {
            let n = matrix::cross(v1, v2);
            if n == [0, 0, 0] || matrix::content(&n) != 1 {
                continue;
            }
            let u3 = completion(&n);
            for sign in [1i128, -1] {
                let t = [sign * u3[0], sign * u3[1], sign * u3[2]];
                let basis = matrix::from_columns(*v1, *v2, t);
                let gb = matrix::congruent(g, &basis);
                let (val, args) = closest_in_plane(&gb);
                if let Some(cur) = &best {
                    if val > cur.lambda3 {
                        continue;
                    }
                }
                for (x, y) in args {
                    let v3 = [
                        t[0] - x * v1[0] - y * v2[0],
                        t[1] - x * v1[1] - y * v2[1],
                        t[2] - x * v1[2] - y * v2[2],
                    ];
                    let b = matrix::from_columns(*v1, *v2, v3);
                    let gram = matrix::congruent(g, &b);
                    let key = (gram[1][2], gram[0][2], gram[0][1]);
                    let better = match &best {
                        None => true,
                        Some(cur) => val < cur.lambda3 || (val == cur.lambda3 && key > cur.key),
                    };
                    if better {
                        best = Some(Candidate {
                            lambda3: val,
                            key,
                            basis: b,
                            gram,
                        });
                    }
                }
            }
        }
    }
    let best = best.expect("successive minima are realised by a basis in rank 3");
    (best.gram, best.basis)
}

/// Some integer vector `u` with `n · u = 1`, for primitive `n`.
fn completion(n: &Vec3) -> Vec3 {
    let (g01, x0, x1) = xgcd(n[0], n[1]);
    let (g, y0, y1) = xgcd(g01, n[2]);
    debug_assert_eq!(g, 1);
    [y0 * x0, y0 * x1, y1]
}

/// Exactly one canonical representative for each class of primitive
/// positive definite forms of discriminant `disc`, sorted.
///
/// Every class contains a Minkowski-reduced form, which satisfies
/// `a ≤ b ≤ c`, `|g|, |e| ≤ a`, `|d| ≤ b` and `abc ≤ disc/2`; sign changes
/// of the variables make `g, e ≥ 0`. Since the discriminant is linear in
/// `c`, only `(a, b, g, e, d)` are looped over.
pub fn enumerate_reduced_by_disc(disc: i64) -> Vec<TernaryForm> {
    // i64 keeps the inner divisibility test cheap; every quantity below is
    // bounded by a small multiple of `disc`.
    let dd = disc;
    let mut seen: HashSet<TernaryForm> = HashSet::new();
    let mut a = 1i64;
    while 2 * a * a * a <= dd {
        let mut b = a;
        while 2 * a * b * b <= dd {
            for g in 0..=a {
                let m = 4 * a * b - g * g;
                for e in 0..=a {
                    let base = dd + b * e * e;
                    for d in -b..=b {
                        let num = base - d * e * g + a * d * d;
                        if num <= 0 || num % m != 0 {
                            continue;
                        }
                        let c = num / m;
                        if c < b || 2 * a * b * c > dd {
                            continue;
                        }
                        // Remaining Minkowski conditions on vectors (±1, ±1, 1).
                        let ok = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                            .iter()
                            .all(|&(x, y)| a + b + d * y + e * x + g * x * y >= 0);
                        if !ok {
                            continue;
                        }
                        let coeffs = [a, b, c, d, e, g];
                        if coeffs.iter().fold(0i128, |acc, &x| gcd(acc, x as i128)) != 1 {
                            continue;
                        }
                        let [a, b, c, d, e, g] = coeffs.map(|x| x as i128);
                        let f = TernaryForm::from_gram_unchecked(&[
                            [2 * a, g, e],
                            [g, 2 * b, d],
                            [e, d, 2 * c],
                        ]);
                        seen.insert(f.canonical());
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    let mut out: Vec<TernaryForm> = seen.into_iter().collect();
    out.sort();
    out
}

/// Backtracking isometry search: looks for `U` with `f.transform(U) == g`
/// by matching vectors of `f` against the Gram entries of `g`. Independent
/// of the canonical reduction, so it doubles as a test oracle.
pub fn find_isometry(f: &TernaryForm, g: &TernaryForm) -> Option<UnimodularTransform> {
    if f.discriminant() != g.discriminant() {
        return None;
    }
    let gf = f.gram().0;
    let gg = g.gram().0;
    let bound = gg[0][0].max(gg[1][1]).max(gg[2][2]);
    let mut by_norm: [Vec<Vec3>; 3] = Default::default();
    for_each_short_vector(&gf, bound, false, |v, q| {
        for i in 0..3 {
            if q == gg[i][i] {
                by_norm[i].push(v);
            }
        }
    });
    for v1 in &by_norm[0] {
        for v2 in &by_norm[1] {
            if matrix::bilinear(&gf, v1, v2) != gg[0][1] {
                continue;
            }
            for v3 in &by_norm[2] {
                if matrix::bilinear(&gf, v1, v3) != gg[0][2]
                    || matrix::bilinear(&gf, v2, v3) != gg[1][2]
                {
                    continue;
                }
                let u = matrix::from_columns(*v1, *v2, *v3);
                let d = matrix::det(&u);
                if d == 1 || d == -1 {
                    return Some(UnimodularTransform(u));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: [i64; 6]) -> TernaryForm {
        TernaryForm::new(c).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            TernaryForm::new([1, 1, -1, 0, 0, 0]),
            Err(FormError::NotPositiveDefinite(_))
        ));
        assert!(matches!(
            TernaryForm::new([2, 2, 4, 2, 2, 0]),
            Err(FormError::NotPrimitive(_, 2))
        ));
        assert!(TernaryForm::new([2, 2, 5, 2, 2, 0]).is_ok());
        assert!("1,2,3".parse::<TernaryForm>().is_err());
        assert_eq!(
            "[3, 3, 4, 0, 0, 3]".parse::<TernaryForm>().unwrap(),
            form([3, 3, 4, 0, 0, 3])
        );
    }

    #[test]
    fn discriminants_from_table() {
        assert_eq!(form([2, 2, 5, 2, 2, 0]).discriminant(), 64);
        assert_eq!(form([3, 3, 4, 0, 0, 3]).discriminant(), 108);
        assert_eq!(form([1, 4, 9, 4, 0, 0]).discriminant(), 128);
        let f = form([2, 2, 5, 2, 2, 0]);
        assert_eq!(f.gram().det(), 2 * f.discriminant() as i128);
    }

    #[test]
    fn reduced_fixed_point() {
        let f = form([2, 2, 5, 2, 2, 0]);
        let (r, u) = f.reduce();
        assert_eq!(r, f);
        assert_eq!(f.transform(&u), r);
    }

    #[test]
    fn reduce_undoes_shear() {
        let f = form([2, 7, 8, 7, 1, 0]);
        let u = UnimodularTransform::new([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let g = f.transform(&u);
        assert_ne!(g, f);
        assert_eq!(g.canonical(), f.canonical());
        let w = is_equivalent(&f, &g).unwrap();
        assert_eq!(f.transform(&w), g);
    }

    #[test]
    fn three_squares() {
        let f = form([1, 1, 1, 0, 0, 0]);
        assert_eq!(
            f.represented_set(10).to_vec(),
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10]
        );
    }

    #[test]
    fn smallest_discriminants() {
        // An even rank-3 lattice cannot have determinant 2.
        assert!(enumerate_reduced_by_disc(1).is_empty());
        let classes = enumerate_reduced_by_disc(2);
        assert_eq!(classes, vec![form([1, 1, 1, 1, 1, 1])]);
        assert_eq!(form([1, 1, 1, 1, 0, 1]).canonical(), classes[0]);
    }

    #[test]
    fn distinct_disc_108_classes() {
        let f = form([3, 3, 4, 0, 0, 3]);
        let g = form([3, 4, 4, 4, 3, 3]);
        assert!(is_equivalent(&f, &g).is_none());
        assert!(find_isometry(&f, &g).is_none());
        let classes = enumerate_reduced_by_disc(108);
        assert!(classes.contains(&f.canonical()));
        assert!(classes.contains(&g.canonical()));
    }
}
