//! Spinor norms, spinor genera and the `r_p` guard.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{good_odd_primes, legendre, val_unit, valuation};
use crate::forms::TernaryForm;
use crate::localdata::{
    bad_primes, genus_symbol, jordan_splitting, two_adic_constituents, GenusSymbol, JordanComponent,
};
use crate::matrix::{self, Mat3, Vec3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinorError {
    #[error("forms are not all in one genus: {0:?} differs from {1:?}")]
    MixedGenus(TernaryForm, TernaryForm),
    #[error("empty list of classes")]
    EmptyGenus,
    #[error("r_p is only defined for p in 2, 3, 5, 7, 11, 13 (got {0})")]
    UnsupportedPrime(i64),
    #[error("neighbour {0:?} is missing from the given genus")]
    IncompleteGenus(TernaryForm),
    #[error("neighbour walk is inconsistent at {0:?}")]
    Inconsistent(TernaryForm),
}

/// `r_p` from the order bounds: `ord_p(dL) ≥ r_p` forces `L_p` not split by ℍ.
pub const RP_TABLE: [(i64, u32); 6] = [(2, 8), (3, 5), (5, 3), (7, 2), (11, 2), (13, 2)];

pub fn r_p(p: i64) -> Result<u32, SpinorError> {
    RP_TABLE
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, r)| *r)
        .ok_or(SpinorError::UnsupportedPrime(p))
}

/// True iff `ord_p(dL) ≥ r_p`. For a spinor regular `L` this rules out a
/// splitting of `L_p` by ℍ; for arbitrary forms it does not.
pub fn hyperbolic_guard(f: &TernaryForm, p: i64) -> Result<bool, SpinorError> {
    Ok(valuation(f.lattice_discriminant(), p as i128) >= r_p(p)?)
}

/// Square class in `ℚ_p^× / ℚ_p^{×2}` as a vector over 𝔽₂: bit 0 is the
/// parity of `ord_p`; for odd `p` bit 1 marks a nonsquare unit, for `p = 2`
/// bits 1 and 2 are the characters `u ≡ 3 (mod 4)` and `u ≡ ±3 (mod 8)`.
pub fn square_class(n: i128, p: i64) -> u8 {
    assert!(n != 0);
    let (v, u) = val_unit(n, p as i128);
    let mut bits = (v % 2) as u8;
    if p == 2 {
        let u = u.rem_euclid(8);
        if u % 4 == 3 {
            bits |= 2;
        }
        if u == 3 || u == 5 {
            bits |= 4;
        }
    } else if legendre(u, p as i128) == -1 {
        bits |= 2;
    }
    bits
}

/// Number of 𝔽₂ coordinates of a square class at `p`.
pub fn square_class_dim(p: i64) -> u32 {
    if p == 2 {
        3
    } else {
        2
    }
}

/// Row-echelon basis of a subspace of 𝔽₂^n, vectors as bitmasks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct F2Span {
    rows: Vec<u64>,
}

impl F2Span {
    pub fn new() -> Self {
        F2Span::default()
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let pivot = 63 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for r in &mut self.rows {
            if *r >> pivot & 1 == 1 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn from_vectors(vs: impl IntoIterator<Item = u64>) -> Self {
        let mut s = F2Span::new();
        for v in vs {
            s.insert(v);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaUnitVerdict {
    /// `ℤ_p^× ⊆ θ(O⁺(L_p))` by the `β = 0` / `β = γ` shortcut or because `p ∤ dL`.
    ContainsUnits,
    /// Square classes generating `θ(O⁺(L_p))`.
    Computed(Vec<u8>),
}

impl ThetaUnitVerdict {
    pub fn contains_units(&self, p: i64) -> bool {
        match self {
            ThetaUnitVerdict::ContainsUnits => true,
            ThetaUnitVerdict::Computed(g) => {
                let span = F2Span::from_vectors(g.iter().map(|&x| x as u64));
                let units: &[u64] = if p == 2 { &[2, 4] } else { &[2] };
                units.iter().all(|&u| span.contains(u))
            }
        }
    }
}

/// Generators (as square classes) of `θ(O⁺(L_p))`, from a Jordan splitting.
pub fn theta_generators(f: &TernaryForm, p: i64) -> Vec<u8> {
    theta_generators_of(&jordan_splitting(f, p), p)
}

pub fn theta_generators_of(pieces: &[JordanComponent], p: i64) -> Vec<u8> {
    let mut gens: Vec<u8> = Vec::new();
    let diag: Vec<(u32, i64)> = pieces
        .iter()
        .filter(|c| c.plane.is_none())
        .flat_map(|c| c.units.iter().map(move |&u| (c.scale_exp, u)))
        .collect();
    let class = |(k, u): (u32, i64)| square_class(crate::arith::pow(p as i128, k) * u as i128, p);

    if p != 2 {
        for i in 0..diag.len() {
            for j in 0..i {
                gens.push(class(diag[i]) ^ class(diag[j]));
            }
        }
        if pieces.iter().any(|c| c.rank >= 2) {
            gens.push(2);
        }
        return normalize(gens);
    }

    let mut all: Vec<(u32, i64)> = diag.clone();
    for c in pieces.iter().filter(|c| c.plane.is_some()) {
        all.extend([1, 3, 5, 7].map(|u| (c.scale_exp + 1, u)));
    }
    for i in 0..all.len() {
        for j in 0..i {
            gens.push(class(all[i]) ^ class(all[j]));
        }
    }
    // Three or more dimensions within four consecutive scales from the top
    // give every unit.
    let sym = two_adic_constituents(pieces);
    let s0 = sym[0][0];
    let near: i64 = sym
        .iter()
        .take(3)
        .filter(|c| c[0] - s0 < 4)
        .map(|c| c[1])
        .sum();
    if near >= 3 {
        gens.extend([1, 3, 5, 7].map(|u| class((0, u))));
    }
    let mut sorted = diag;
    sorted.sort_by_key(|&(k, _)| k);
    for i in 0..sorted.len() {
        for j in 0..i {
            let v = sorted[i].0 - sorted[j].0;
            let u = (sorted[i].1 * sorted[j].1).rem_euclid(8);
            if v == 0 && u == 1 {
                gens.push(class((1, 1)));
            }
            if v == 0 && u == 5 {
                gens.push(class((1, 3)));
            }
            if matches!(v, 0 | 2 | 4) {
                gens.push(class((0, 5)));
            }
            if matches!(v, 1 | 3) && matches!(u, 1 | 5) {
                gens.push(class((0, 3)));
            }
            if matches!(v, 1 | 3) && matches!(u, 3 | 7) {
                gens.push(class((0, 7)));
            }
        }
    }
    normalize(gens)
}

fn normalize(mut gens: Vec<u8>) -> Vec<u8> {
    gens.retain(|&g| g != 0);
    gens.sort_unstable();
    gens.dedup();
    gens
}

/// Decides whether `ℤ_p^× ⊆ θ(O⁺(L_p))`.
pub fn units_in_theta(f: &TernaryForm, p: i64) -> ThetaUnitVerdict {
    if p != 2 {
        if valuation(f.lattice_discriminant(), p as i128) == 0 {
            return ThetaUnitVerdict::ContainsUnits;
        }
        let s = crate::localdata::odd_local_structure(f, p);
        if s.beta == 0 || s.beta == s.gamma {
            return ThetaUnitVerdict::ContainsUnits;
        }
    }
    ThetaUnitVerdict::Computed(theta_generators(f, p))
}

/// The group `J_ℚ^V / P_D J^L` indexing the spinor genera in a genus,
/// presented as `⊕_{p | 2dL} ℚ_p^×/ℚ_p^{×2}` modulo the local spinor norm
/// groups and the images of the primes `p | 2dL`.
#[derive(Clone, Debug)]
pub struct SpinorGroup {
    primes: Vec<i64>,
    offsets: Vec<u32>,
    dim: u32,
    relations: F2Span,
}

impl SpinorGroup {
    pub fn of(f: &TernaryForm) -> Self {
        let primes = bad_primes(f.lattice_discriminant());
        let mut offsets = Vec::new();
        let mut dim = 0;
        for &p in &primes {
            offsets.push(dim);
            dim += square_class_dim(p);
        }
        let mut g = SpinorGroup {
            primes,
            offsets,
            dim,
            relations: F2Span::new(),
        };
        for (i, &p) in g.primes.clone().iter().enumerate() {
            for c in theta_generators(f, p) {
                g.relations.insert((c as u64) << g.offsets[i]);
            }
            g.relations.insert(g.rational(p as i128));
        }
        g
    }

    /// Image of a positive rational integer at the places in `2dL`.
    pub fn rational(&self, n: i128) -> u64 {
        self.primes
            .iter()
            .zip(&self.offsets)
            .fold(0, |acc, (&p, &o)| acc | (square_class(n, p) as u64) << o)
    }

    /// Number of spinor genera in the genus.
    pub fn order(&self) -> u64 {
        1 << (self.dim - self.relations.dim())
    }

    /// Element of the group moved by a step to an `ℓ`-neighbour.
    pub fn class_of_prime(&self, l: i128) -> u64 {
        self.relations.reduce(self.rational(l))
    }

    pub fn reduce(&self, v: u64) -> u64 {
        self.relations.reduce(v)
    }
}

fn check_one_genus(genus: &[TernaryForm]) -> Result<GenusSymbol, SpinorError> {
    let first = genus.first().ok_or(SpinorError::EmptyGenus)?;
    let sym = genus_symbol(first);
    for g in &genus[1..] {
        if genus_symbol(g) != sym {
            return Err(SpinorError::MixedGenus(*first, *g));
        }
    }
    Ok(sym)
}

/// Number of spinor genera in the genus of the given classes.
pub fn spinor_genus_count(genus: &[TernaryForm]) -> Result<u64, SpinorError> {
    check_one_genus(genus)?;
    Ok(SpinorGroup::of(&genus[0]).order())
}

fn isotropic_lines_mod(g: &Mat3, l: i128) -> Vec<Vec3> {
    let q = |v: &Vec3| matrix::bilinear(g, v, v) / 2;
    let mut out = Vec::new();
    // Projective points mod ℓ: (1,y,z), (0,1,z), (0,0,1).
    for y in 0..l {
        for z in 0..l {
            let v = [1, y, z];
            if q(&v).rem_euclid(l) == 0 {
                out.push(v);
            }
        }
    }
    for z in 0..l {
        let v = [0, 1, z];
        if q(&v).rem_euclid(l) == 0 {
            out.push(v);
        }
    }
    if q(&[0, 0, 1]).rem_euclid(l) == 0 {
        out.push([0, 0, 1]);
    }
    out
}

/// Reduced representatives of the `ℓ`-neighbours of `f`, for an odd prime
/// `ℓ ∤ dL`.
pub fn neighbors(f: &TernaryForm, l: i64) -> Vec<TernaryForm> {
    let l = l as i128;
    assert!(
        l > 2 && f.lattice_discriminant() % l != 0,
        "ℓ must be an odd prime not dividing dL"
    );
    let gram = f.gram();
    let g = gram.entries();
    let mut out = Vec::new();
    for mut v in isotropic_lines_mod(g, l) {
        // Lift so that f(v) ≡ 0 (mod ℓ²).
        let fv = matrix::mat_vec(g, &v);
        let i = (0..3).find(|&i| fv[i].rem_euclid(l) != 0).expect("ℓ ∤ dL");
        let qv = matrix::bilinear(g, &v, &v) / 2;
        let t = (-(qv / l) * crate::arith::inv_mod(fv[i], l).unwrap()).rem_euclid(l);
        v[i] += t * l;
        debug_assert_eq!((matrix::bilinear(g, &v, &v) / 2).rem_euclid(l * l), 0);
        // ℓ·L' = ℓ·{x : B(x,v) ≡ 0} + ℤv.
        let fv = matrix::mat_vec(g, &v);
        let m = matrix::kernel_mod_prime(&matrix::IDENTITY, &fv, l);
        let mut gens: Vec<Vec3> = (0..3)
            .map(|j| matrix::column(&m, j).map(|x| x * l))
            .collect();
        gens.push(v);
        let basis = matrix::hnf_basis(&gens);
        let big = matrix::congruent(g, &basis);
        let scaled = big.map(|row| row.map(|x| x / (l * l)));
        debug_assert!(big.iter().flatten().all(|x| x % (l * l) == 0));
        let n = TernaryForm::from_gram(&scaled).expect("neighbour is integral and primitive");
        out.push(n.canonical());
    }
    out.sort_by_key(|x| x.coeffs());
    out.dedup();
    out
}

/// A genus split into its spinor genera.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorPartition {
    pub classes: Vec<TernaryForm>,
    /// Class indices per spinor genus.
    pub groups: Vec<Vec<usize>>,
    pub genus_symbol: GenusSymbol,
}

impl SpinorPartition {
    pub fn group_of(&self, f: &TernaryForm) -> Option<&[usize]> {
        let c = f.canonical();
        let i = self.classes.iter().position(|x| *x == c)?;
        self.groups
            .iter()
            .find(|g| g.contains(&i))
            .map(|g| g.as_slice())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut group_of = vec![0; self.classes.len()];
        for (k, g) in self.groups.iter().enumerate() {
            for &i in g {
                group_of[i] = k;
            }
        }
        serde_json::json!({
            "genus_symbol": self.genus_symbol.to_string(),
            "classes": self.classes.iter().map(|c| c.coeffs()).collect::<Vec<_>>(),
            "group": group_of,
        })
    }
}

const MAX_NEIGHBOUR_PRIMES: usize = 12;

/// Splits a full genus into spinor genera by walking `ℓ`-neighbours: a step
/// at `ℓ` moves the spinor genus by the class of `ℓ` in the spinor group.
pub fn partition_spinor_genera(genus: &[TernaryForm]) -> Result<SpinorPartition, SpinorError> {
    let genus_symbol = check_one_genus(genus)?;
    let mut classes: Vec<TernaryForm> = genus.iter().map(|f| f.canonical()).collect();
    classes.sort_by_key(|c| c.coeffs());
    classes.dedup();
    let index: HashMap<TernaryForm, usize> =
        classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let group = SpinorGroup::of(&classes[0]);

    let mut label: Vec<Option<u64>> = vec![None; classes.len()];
    label[0] = Some(0);
    let primes: Vec<i64> = good_odd_primes(classes[0].lattice_discriminant())
        .take(MAX_NEIGHBOUR_PRIMES)
        .map(|l| l as i64)
        .collect();
    let mut reached = 1;
    for &l in &primes {
        if reached == classes.len() && group.order() == 1 {
            break;
        }
        let shift = group.class_of_prime(l as i128);
        let mut queue: VecDeque<usize> =
            (0..classes.len()).filter(|&i| label[i].is_some()).collect();
        while let Some(i) = queue.pop_front() {
            let here = label[i].unwrap();
            for n in neighbors(&classes[i], l) {
                let &j = index.get(&n).ok_or(SpinorError::IncompleteGenus(n))?;
                let there = group.reduce(here ^ shift);
                match label[j] {
                    Some(x) if x != there => return Err(SpinorError::Inconsistent(n)),
                    Some(_) => {}
                    None => {
                        label[j] = Some(there);
                        reached += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        if reached == classes.len() {
            let distinct: std::collections::BTreeSet<u64> =
                label.iter().flatten().copied().collect();
            if distinct.len() as u64 == group.order() {
                break;
            }
        }
    }
    if let Some(i) = label.iter().position(|l| l.is_none()) {
        return Err(SpinorError::IncompleteGenus(classes[i]));
    }
    let mut by_label: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, l) in label.iter().enumerate() {
        by_label.entry(l.unwrap()).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_label.into_values().collect();
    groups.sort();
    Ok(SpinorPartition {
        classes,
        groups,
        genus_symbol,
    })
}
