//! p-adic invariants: Jordan splittings, canonical local symbols, genus
//! symbols and the 2-adic shapes `⟨2a,2^β b,2^γ c⟩`, `⟨2a⟩ ⊥ 2^γ ℍ`,
//! `⟨2a⟩ ⊥ 2^γ 𝔸`.
//!
//! Everything works on the Gram matrix `F` (so `Q(x) = 2f(x)`). With that
//! normalization ℍ has Gram `[[0,1],[1,0]]` and 𝔸 has Gram `[[2,1],[1,2]]`;
//! a 2-adic block `2^k·[[2α,β],[β,2γ]]` with `β` odd is `2^k ℍ` when its
//! unit determinant is `≡ 7 (mod 8)` and `2^k 𝔸` when it is `≡ 3`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor, inv_mod, legendre, pow, val_unit, valuation};
use crate::forms::TernaryForm;
use crate::matrix::Mat3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("the plane A is only defined at p = 2 (asked at p = {0})")]
    InvalidPlaneAtOddPrime(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plane {
    H,
    A,
}

/// One piece of a Jordan splitting.
///
/// At odd `p` a component collects every diagonal entry of one scale, so
/// its rank is 1, 2 or 3 and `units` holds residues mod `p`. At `p = 2` a
/// component is either a rank-1 piece `2^k⟨u⟩` with `units = [u mod 8]` or
/// a rank-2 even block `2^k ℍ` / `2^k 𝔸` with `units` empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanComponent {
    pub scale_exp: u32,
    pub rank: usize,
    pub units: Vec<i64>,
    pub plane: Option<Plane>,
}

impl JordanComponent {
    pub fn diagonal(scale_exp: u32, units: &[i64]) -> Self {
        Self {
            scale_exp,
            rank: units.len(),
            units: units.to_vec(),
            plane: None,
        }
    }

    pub fn plane(scale_exp: u32, plane: Plane) -> Self {
        Self {
            scale_exp,
            rank: 2,
            units: Vec::new(),
            plane: Some(plane),
        }
    }

    /// Square class of the unit part of the determinant at odd `p`.
    pub fn det_is_square(&self, p: i64) -> bool {
        let prod = self
            .units
            .iter()
            .fold(1i128, |acc, &u| acc * u as i128 % p as i128);
        legendre(prod, p as i128) == 1
    }

    /// Human-readable form such as `3²⟨Δ,Δ⟩` or `2³𝔸`.
    pub fn render(&self, p: i64) -> String {
        let scale = match self.scale_exp {
            0 => String::new(),
            1 => format!("{p}"),
            k => format!("{p}^{k}"),
        };
        match self.plane {
            Some(Plane::H) => format!("{scale}ℍ"),
            Some(Plane::A) => format!("{scale}𝔸"),
            None => {
                let mut entries: Vec<String> = self
                    .units
                    .iter()
                    .map(|&u| {
                        if p == 2 {
                            u.to_string()
                        } else if legendre(u as i128, p as i128) == 1 {
                            "1".to_string()
                        } else {
                            "Δ".to_string()
                        }
                    })
                    .collect();
                entries.sort();
                format!("{scale}⟨{}⟩", entries.join(","))
            }
        }
    }
}

pub fn render_splitting(components: &[JordanComponent], p: i64) -> String {
    components
        .iter()
        .map(|c| c.render(p))
        .collect::<Vec<_>>()
        .join("⊥")
}

/// Splits the lattice with Gram matrix `gram` over `ℤ_p` into rank-1 pieces
/// (and rank-2 even blocks at `p = 2`), sorted by scale.
fn local_pieces(gram: &Mat3, p: i128) -> Vec<JordanComponent> {
    let det = crate::matrix::det(gram);
    let ord = valuation(det, p);
    let mut prec = if p == 2 { 2 * ord + 8 } else { ord + 6 };
    // Products of two residues must fit in i128; ord + 2 is enough at odd p.
    while p != 2
        && prec > ord + 2
        && (0..prec)
            .try_fold(1i128, |a, _| a.checked_mul(p))
            .map_or(true, |m| m > 1 << 62)
    {
        prec -= 1;
    }
    let modulus = pow(p, prec);
    let val = |x: i128| {
        if x.rem_euclid(modulus) == 0 {
            prec
        } else {
            valuation(x, p)
        }
    };

    let mut m: Vec<Vec<i128>> = gram
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(modulus)).collect())
        .collect();
    let mut pieces = Vec::new();
    // e_dst += t·e_src
    let add = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, t: i128| {
        let n = m.len();
        for k in 0..n {
            m[dst][k] = (m[dst][k] + t * m[src][k]).rem_euclid(modulus);
        }
        for k in 0..n {
            m[k][dst] = (m[k][dst] + t * m[k][src]).rem_euclid(modulus);
        }
    };
    let remove = |m: &Vec<Vec<i128>>, drop: &[usize]| -> Vec<Vec<i128>> {
        let keep: Vec<usize> = (0..m.len()).filter(|i| !drop.contains(i)).collect();
        keep.iter()
            .map(|&i| keep.iter().map(|&j| m[i][j]).collect())
            .collect()
    };

    while !m.is_empty() {
        let n = m.len();
        let mut vmin = prec;
        for i in 0..n {
            for j in i..n {
                vmin = vmin.min(val(m[i][j]));
            }
        }
        assert!(vmin < prec, "precision exhausted in local splitting");
        let pv = pow(p, vmin);
        let diag = (0..n).find(|&i| val(m[i][i]) == vmin);
        let pivot = match diag {
            Some(i) => Some(i),
            None if p != 2 => {
                let (i, j) = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| val(m[i][j]) == vmin)
                    .unwrap();
                add(&mut m, i, j, 1);
                Some(i)
            }
            None => None,
        };
        if let Some(i) = pivot {
            let u = m[i][i] / pv;
            let inv = inv_mod(u, modulus).unwrap();
            for k in 0..n {
                if k != i {
                    let t = (m[i][k] / pv) * inv % modulus;
                    add(&mut m, k, i, -t);
                }
            }
            let unit = if p == 2 {
                u.rem_euclid(8)
            } else {
                u.rem_euclid(p)
            };
            pieces.push(JordanComponent::diagonal(vmin, &[unit as i64]));
            m = remove(&m, &[i]);
        } else {
            let (i, j) = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| val(m[i][j]) == vmin)
                .unwrap();
            let bdet = (m[i][i] * m[j][j] - m[i][j] * m[i][j]).rem_euclid(modulus);
            let p2v = pow(2, 2 * vmin);
            let w = bdet / p2v;
            let invw = inv_mod(w, modulus).unwrap();
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let (r0, r1) = (m[i][k], m[j][k]);
                let s_num = (m[j][j] * r0 - m[i][j] * r1).rem_euclid(modulus);
                let t_num = (m[i][i] * r1 - m[i][j] * r0).rem_euclid(modulus);
                let s = (s_num / p2v) * invw % modulus;
                let t = (t_num / p2v) * invw % modulus;
                add(&mut m, k, i, -s);
                add(&mut m, k, j, -t);
            }
            let plane = match w.rem_euclid(8) {
                7 => Plane::H,
                3 => Plane::A,
                r => unreachable!("even unimodular binary block with det {r} mod 8"),
            };
            pieces.push(JordanComponent::plane(vmin, plane));
            m = remove(&m, &[i, j]);
        }
    }
    pieces.sort_by_key(|c| (c.scale_exp, c.plane.is_some()));
    debug_assert_eq!(
        pieces
            .iter()
            .map(|c| c.scale_exp * c.rank as u32)
            .sum::<u32>(),
        ord
    );
    pieces
}

/// Jordan splitting of `L_p`.
pub fn jordan_splitting(f: &TernaryForm, p: i64) -> Vec<JordanComponent> {
    let pieces = local_pieces(f.gram().entries(), p as i128);
    if p == 2 {
        return pieces;
    }
    let mut merged: Vec<JordanComponent> = Vec::new();
    for c in pieces {
        match merged.last_mut() {
            Some(last) if last.scale_exp == c.scale_exp => {
                last.units.extend(&c.units);
                last.rank += c.rank;
            }
            _ => merged.push(c),
        }
    }
    merged
}

/// `L_p ≅ ⟨a, p^β b, p^γ c⟩` at an odd prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddLocalStructure {
    pub p: i64,
    /// Unit residues mod `p` of `a, b, c`.
    pub units: [i64; 3],
    pub beta: u32,
    pub gamma: u32,
}

impl OddLocalStructure {
    pub fn unit_is_square(&self, i: usize) -> bool {
        legendre(self.units[i] as i128, self.p as i128) == 1
    }
}

pub fn odd_local_structure(f: &TernaryForm, p: i64) -> OddLocalStructure {
    assert!(p != 2, "odd_local_structure needs an odd prime");
    let pieces = local_pieces(f.gram().entries(), p as i128);
    // A primitive form has a unimodular component at every odd prime.
    assert_eq!(pieces[0].scale_exp, 0);
    OddLocalStructure {
        p,
        units: [pieces[0].units[0], pieces[1].units[0], pieces[2].units[0]],
        beta: pieces[1].scale_exp,
        gamma: pieces[2].scale_exp,
    }
}

/// Canonical local symbol at one prime; equality is `ℤ_p`-isometry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalSymbol {
    /// `(scale, rank, ε)` per constituent, `ε` the Legendre symbol of the
    /// unit determinant.
    Odd {
        p: i64,
        constituents: Vec<(u32, usize, i8)>,
    },
    /// `[scale, rank, ε, type, oddity]` per constituent after oddity fusion
    /// and sign walking; `type` is 1 for odd constituents.
    Two { constituents: Vec<[i64; 5]> },
}

/// 2-adic constituents `[scale, rank, det mod 8, type, oddity]` before
/// canonicalization.
pub fn two_adic_constituents(pieces: &[JordanComponent]) -> Vec<[i64; 5]> {
    let mut out: Vec<[i64; 5]> = Vec::new();
    let mut sorted: Vec<&JordanComponent> = pieces.iter().collect();
    sorted.sort_by_key(|c| c.scale_exp);
    for c in sorted {
        let (det, odd, oddity) = match c.plane {
            Some(Plane::H) => (7, 0, 0),
            Some(Plane::A) => (3, 0, 0),
            None => (
                c.units.iter().product::<i64>().rem_euclid(8),
                1,
                c.units.iter().sum::<i64>().rem_euclid(8),
            ),
        };
        match out.last_mut() {
            Some(last) if last[0] == c.scale_exp as i64 => {
                last[1] += c.rank as i64;
                last[2] = (last[2] * det).rem_euclid(8);
                last[3] = last[3].max(odd);
                last[4] = (last[4] + oddity).rem_euclid(8);
            }
            _ => out.push([c.scale_exp as i64, c.rank as i64, det, odd, oddity]),
        }
    }
    out
}

/// Maximal runs of odd constituents at consecutive scales.
fn compartments(sym: &[[i64; 5]]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sym.len() {
        if sym[i][3] == 1 {
            let mut v = sym[i][0];
            let mut c = Vec::new();
            while i < sym.len() && sym[i][3] == 1 && sym[i][0] == v {
                c.push(i);
                i += 1;
                v += 1;
            }
            out.push(c);
        } else {
            i += 1;
        }
    }
    out
}

/// Maximal intervals not separated by two adjacent even (possibly
/// zero-dimensional) constituents.
fn trains(sym: &[[i64; 5]]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0];
    for i in 1..sym.len() {
        let (prev, now) = (sym[i - 1], sym[i]);
        let gap = now[0] - prev[0];
        let split = gap > 2 || (gap == 2 && prev[3] * now[3] == 0) || (prev[3] == 0 && now[3] == 0);
        if split {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(i);
    }
    out.push(cur);
    out
}

fn canonical_two_adic(mut sym: Vec<[i64; 5]>) -> Vec<[i64; 5]> {
    for s in sym.iter_mut() {
        s[2] = if s[2] == 1 || s[2] == 7 { 1 } else { -1 };
    }
    let comps = compartments(&sym);
    for c in &comps {
        let oddity = c.iter().map(|&i| sym[i][4]).sum::<i64>().rem_euclid(8);
        for &i in c {
            sym[i][4] = 0;
        }
        sym[c[0]][4] = oddity;
    }
    for train in trains(&sym) {
        for &t1 in train.iter().skip(1).rev() {
            if sym[t1][2] == -1 {
                sym[t1][2] = 1;
                sym[t1 - 1][2] *= -1;
                for c in &comps {
                    if c.contains(&(t1 - 1)) || c.contains(&t1) {
                        sym[c[0]][4] = (sym[c[0]][4] + 4).rem_euclid(8);
                    }
                }
            }
        }
    }
    sym
}

impl LocalSymbol {
    /// Canonical symbol of the orthogonal sum of `pieces`.
    pub fn from_pieces(p: i64, pieces: &[JordanComponent]) -> Self {
        if p == 2 {
            return LocalSymbol::Two {
                constituents: canonical_two_adic(two_adic_constituents(pieces)),
            };
        }
        let mut constituents: Vec<(u32, usize, i8)> = Vec::new();
        let mut sorted: Vec<&JordanComponent> = pieces.iter().collect();
        sorted.sort_by_key(|c| c.scale_exp);
        for c in sorted {
            let eps: i8 = if c.det_is_square(p) { 1 } else { -1 };
            match constituents.last_mut() {
                Some(last) if last.0 == c.scale_exp => {
                    last.1 += c.rank;
                    last.2 *= eps;
                }
                _ => constituents.push((c.scale_exp, c.rank, eps)),
            }
        }
        LocalSymbol::Odd { p, constituents }
    }

    pub fn of(f: &TernaryForm, p: i64) -> Self {
        Self::from_pieces(p, &local_pieces(f.gram().entries(), p as i128))
    }
}

impl fmt::Display for LocalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSymbol::Odd { p, constituents } => {
                write!(f, "{p}:")?;
                for (s, r, e) in constituents {
                    write!(f, "[{s},{r},{}]", if *e > 0 { "+" } else { "-" })?;
                }
            }
            LocalSymbol::Two { constituents } => {
                write!(f, "2:")?;
                for c in constituents {
                    let t = if c[3] == 1 { "I" } else { "II" };
                    let e = if c[2] > 0 { "+" } else { "-" };
                    write!(f, "[{},{},{e},{t},{}]", c[0], c[1], c[4])?;
                }
            }
        }
        Ok(())
    }
}

/// Local symbols at 2 and at every odd prime dividing `dL`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenusSymbol {
    pub disc: i64,
    pub local: BTreeMap<i64, LocalSymbol>,
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "disc={}", self.disc)?;
        for s in self.local.values() {
            write!(f, ";{s}")?;
        }
        Ok(())
    }
}

/// Primes at which a form of lattice discriminant `dl` can be non-unimodular.
pub fn bad_primes(dl: i128) -> Vec<i64> {
    let mut ps: Vec<i64> = factor(dl).into_iter().map(|(p, _)| p as i64).collect();
    if !ps.contains(&2) {
        ps.insert(0, 2);
    }
    ps
}

pub fn genus_symbol(f: &TernaryForm) -> GenusSymbol {
    let local = bad_primes(f.lattice_discriminant())
        .into_iter()
        .map(|p| (p, LocalSymbol::of(f, p)))
        .collect();
    GenusSymbol {
        disc: f.discriminant(),
        local,
    }
}

pub fn same_genus(f: &TernaryForm, g: &TernaryForm) -> bool {
    f.discriminant() == g.discriminant() && genus_symbol(f) == genus_symbol(g)
}

/// Whether `L_p ≅ P ⊥ ⟨c⟩` for the unimodular plane `P`.
pub fn split_by(f: &TernaryForm, p: i64, plane: Plane) -> Result<bool, LocalError> {
    if plane == Plane::A && p != 2 {
        return Err(LocalError::InvalidPlaneAtOddPrime(p));
    }
    let dl = f.lattice_discriminant();
    let (v, u) = val_unit(dl, p as i128);
    let target = LocalSymbol::of(f, p);
    let candidate = if p == 2 {
        // det(ℍ ⊥ ⟨c⟩) = -c and det(𝔸 ⊥ ⟨c⟩) = 3c must match dL up to squares.
        let c = match plane {
            Plane::H => (-u).rem_euclid(8),
            Plane::A => (3 * u).rem_euclid(8),
        };
        vec![
            JordanComponent::plane(0, plane),
            JordanComponent::diagonal(v, &[c as i64]),
        ]
    } else {
        let c = (-u).rem_euclid(p as i128) as i64;
        vec![
            JordanComponent::diagonal(0, &[1, p as i64 - 1]),
            JordanComponent::diagonal(v, &[c]),
        ]
    };
    Ok(LocalSymbol::from_pieces(p, &candidate) == target)
}

/// The 2-adic shapes of a primitive lattice with norm `2ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoAdicShape {
    /// `⟨2a, 2^β b, 2^γ c⟩` with units mod 8.
    Diag {
        a: i64,
        b: i64,
        c: i64,
        beta: u32,
        gamma: u32,
    },
    /// `⟨2a⟩ ⊥ 2^γ ℍ`.
    UnitPlusH {
        a: i64,
        gamma: u32,
    },
    /// `⟨2a⟩ ⊥ 2^γ 𝔸`.
    UnitPlusA {
        a: i64,
        gamma: u32,
    },
    Other,
}

impl TwoAdicShape {
    pub fn pieces(&self) -> Option<Vec<JordanComponent>> {
        Some(match *self {
            TwoAdicShape::Diag {
                a,
                b,
                c,
                beta,
                gamma,
            } => vec![
                JordanComponent::diagonal(1, &[a]),
                JordanComponent::diagonal(beta, &[b]),
                JordanComponent::diagonal(gamma, &[c]),
            ],
            TwoAdicShape::UnitPlusH { a, gamma } => {
                vec![
                    JordanComponent::diagonal(1, &[a]),
                    JordanComponent::plane(gamma, Plane::H),
                ]
            }
            TwoAdicShape::UnitPlusA { a, gamma } => {
                vec![
                    JordanComponent::diagonal(1, &[a]),
                    JordanComponent::plane(gamma, Plane::A),
                ]
            }
            TwoAdicShape::Other => return None,
        })
    }
}

impl fmt::Display for TwoAdicShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pieces() {
            Some(p) => write!(f, "{}", render_splitting(&p, 2)),
            None => write!(f, "other"),
        }
    }
}

const UNITS_MOD_8: [i64; 4] = [1, 3, 5, 7];

/// Classifies `L_2`. The unit parameters are the lexicographically least
/// ones giving an isometric lattice, so the result is a class invariant.
pub fn two_adic_shape(f: &TernaryForm) -> TwoAdicShape {
    let pieces = local_pieces(f.gram().entries(), 2);
    two_adic_shape_of(&pieces)
}

pub fn two_adic_shape_of(pieces: &[JordanComponent]) -> TwoAdicShape {
    let sym = two_adic_constituents(pieces);
    if sym[0][0] == 0 {
        return TwoAdicShape::Other;
    }
    let target = LocalSymbol::from_pieces(2, pieces);
    let matches = |s: &TwoAdicShape| LocalSymbol::from_pieces(2, &s.pieces().unwrap()) == target;
    if sym.iter().all(|c| c[3] == 1) {
        let mut scales: Vec<u32> = Vec::new();
        for c in &sym {
            scales.extend(std::iter::repeat(c[0] as u32).take(c[1] as usize));
        }
        for a in UNITS_MOD_8 {
            for b in UNITS_MOD_8 {
                for c in UNITS_MOD_8 {
                    let s = TwoAdicShape::Diag {
                        a,
                        b,
                        c,
                        beta: scales[1],
                        gamma: scales[2],
                    };
                    if matches(&s) {
                        return s;
                    }
                }
            }
        }
        unreachable!("odd 2-adic lattice is diagonalizable");
    }
    if sym.len() == 2 && sym[0][1] == 1 && sym[1][1] == 2 && sym[1][3] == 0 {
        let gamma = sym[1][0] as u32;
        for a in UNITS_MOD_8 {
            for s in [
                TwoAdicShape::UnitPlusH { a, gamma },
                TwoAdicShape::UnitPlusA { a, gamma },
            ] {
                if matches(&s) {
                    return s;
                }
            }
        }
    }
    TwoAdicShape::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: [i64; 6]) -> TernaryForm {
        TernaryForm::new(c).unwrap()
    }

    #[test]
    fn odd_splitting_of_diagonal_form() {
        let f = form([3, 4, 9, 0, 0, 0]);
        let s = jordan_splitting(&f, 3);
        assert_eq!(render_splitting(&s, 3), "⟨Δ⟩⊥3⟨Δ⟩⊥3^2⟨Δ⟩");
        let o = odd_local_structure(&f, 3);
        assert_eq!((o.beta, o.gamma), (1, 2));
        let u = jordan_splitting(&form([1, 1, 1, 0, 0, 0]), 5);
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].rank, 3);
    }

    #[test]
    fn two_adic_splitting_with_a_block() {
        let f = form([8, 9, 56, 0, 8, 0]);
        assert_eq!(
            two_adic_shape(&f),
            TwoAdicShape::UnitPlusA { a: 1, gamma: 3 }
        );
        assert!(!split_by(&f, 2, Plane::H).unwrap());
    }

    #[test]
    fn sum_of_three_squares_is_diagonal() {
        let f = form([1, 1, 1, 0, 0, 0]);
        assert_eq!(
            two_adic_shape(&f),
            TwoAdicShape::Diag {
                a: 1,
                b: 1,
                c: 1,
                beta: 1,
                gamma: 1
            }
        );
        assert!(!split_by(&f, 2, Plane::H).unwrap());
        assert_eq!(
            split_by(&f, 3, Plane::A),
            Err(LocalError::InvalidPlaneAtOddPrime(3))
        );
    }

    #[test]
    fn hyperbolic_plane_detected() {
        // Gram [[4,1,0],[1,4,0],[0,0,2]]: the first block has det 15 ≡ 7 mod 8.
        let f = form([2, 2, 1, 0, 0, 1]);
        assert!(split_by(&f, 2, Plane::H).unwrap());
        // ℍ ⊥ ⟨2⟩ ≅ 𝔸 ⊥ ⟨10⟩: e = (1,0,1)-type vectors of 𝔸 ⊥ ⟨10⟩ span an ℍ.
        assert!(split_by(&f, 2, Plane::A).unwrap());
        assert_eq!(two_adic_shape(&f), TwoAdicShape::Other);
        // With the complement three scales away the two planes separate.
        let g = form([1, 1, 4, 0, 0, 1]);
        assert!(!split_by(&g, 2, Plane::H).unwrap());
        assert!(split_by(&g, 2, Plane::A).unwrap());
    }

    #[test]
    fn sign_walking_identifies_isometric_symbols() {
        // ⟨1,1⟩ ≅ ⟨5,5⟩ over ℤ₂, with different raw determinants mod 8 classes
        // being equal here; ⟨1,3⟩ ≇ ⟨1,7⟩.
        let a = LocalSymbol::from_pieces(2, &[JordanComponent::diagonal(0, &[1, 1])]);
        let b = LocalSymbol::from_pieces(2, &[JordanComponent::diagonal(0, &[5, 5])]);
        assert_eq!(a, b);
        let c = LocalSymbol::from_pieces(2, &[JordanComponent::diagonal(0, &[1, 3])]);
        let d = LocalSymbol::from_pieces(2, &[JordanComponent::diagonal(0, &[1, 7])]);
        assert_ne!(c, d);
        // ⟨1⟩ ⊥ 2⟨1⟩ ≅ ⟨3⟩ ⊥ 2⟨3⟩ by walking the sign across adjacent scales.
        let e = LocalSymbol::from_pieces(
            2,
            &[
                JordanComponent::diagonal(0, &[1]),
                JordanComponent::diagonal(1, &[1]),
            ],
        );
        let g = LocalSymbol::from_pieces(
            2,
            &[
                JordanComponent::diagonal(0, &[3]),
                JordanComponent::diagonal(1, &[3]),
            ],
        );
        assert_eq!(e, g);
    }
}
