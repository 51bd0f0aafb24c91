//! Watson transformations `λ_p`.
//!
//! For odd `p`, `Λ_p(L) = {x ∈ L : B(x, L) ⊆ pℤ}` (which forces
//! `Q(x) ∈ pℤ`), and `λ_p(L)` is `Λ_p(L)` scaled down by the power of `p`
//! dividing its scale. For `p = 2`, `Λ_4(L) = {x ∈ L : B(x, L) ⊆ 2ℤ,
//! Q(x) ∈ 4ℤ}` and `λ_2(L)` is `Λ_4(L)^{1/2}` or `Λ_4(L)^{1/4}` according
//! as its norm is `4ℤ` or `8ℤ`.
//!
//! Every transform is checked against the local descent table: the
//! output's structure at `p` must be the branch predicted from the
//! input's structure, and its structure at every other prime must be the
//! input's scaled by `p^k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, pow, valuation};
use crate::forms::{GramMatrix, TernaryForm};
use crate::localdata::{
    bad_primes, jordan_splitting, odd_local_structure, two_adic_shape, JordanComponent,
    LocalSymbol, TwoAdicShape,
};
use crate::matrix::{self, Mat3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WatsonError {
    #[error("ord_{p}(dL) = {ord} is below the required {needed}")]
    PreconditionOrder { p: i64, ord: u32, needed: u32 },
    #[error("L_2 is split by a unimodular ℍ or 𝔸, outside the descent table")]
    SplitByPlane,
    #[error("λ_{p} output matches no branch of the descent table: {detail}")]
    CaseMismatch { p: i64, detail: String },
}

/// Branches of the local descent table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DescentCase {
    /// `⟨a,b,p^{γ-2}c⟩` from `β = 0, γ ≥ 2`.
    OddBeta0,
    /// `⟨b,pa,p^{γ-1}c⟩` from `β = 1`.
    OddBeta1,
    /// `⟨a,p^{β-2}b,p^{γ-2}c⟩` from `β ≥ 2`.
    OddBetaAtLeast2,
    /// `[[a+b,a-b],[a-b,a+b]] ⊥ ⟨2^{γ-1}c⟩` from `β = 1, a ≡ b (mod 4)`.
    TwoDiagBeta1Congruent,
    /// `½[[a+b,a-b],[a-b,a+b]] ⊥ ⟨2^{γ-2}c⟩` from `β = 1, a ≢ b (mod 4)`.
    TwoDiagBeta1Incongruent,
    /// `β = 1, a ≢ b (mod 4), γ = 2`: the norm of `Λ_4` is `4ℤ`, so the
    /// result is `[[a+b,a-b],[a-b,a+b]] ⊥ ⟨2c⟩`.
    TwoDiagBeta1IncongruentGamma2,
    /// `⟨2b,4a,2^{γ-1}c⟩` from `β = 2`.
    TwoDiagBeta2,
    /// `⟨2a,2^{β-2}b,2^{γ-2}c⟩` from `β > 2`.
    TwoDiagBetaAbove2,
    /// `⟨2a⟩ ⊥ 2^{γ-2}ℍ`.
    TwoUnitPlusH,
    /// `⟨2a⟩ ⊥ 2^{γ-2}𝔸`.
    TwoUnitPlusA,
}

impl DescentCase {
    /// Drop in `ord_p(dL)` prescribed by the branch.
    pub fn ord_drop(&self) -> u32 {
        match self {
            DescentCase::OddBeta0 => 2,
            DescentCase::OddBeta1 => 1,
            DescentCase::OddBetaAtLeast2 => 4,
            DescentCase::TwoDiagBeta1Congruent => 1,
            DescentCase::TwoDiagBeta1Incongruent => 4,
            DescentCase::TwoDiagBeta1IncongruentGamma2 => 1,
            DescentCase::TwoDiagBeta2 => 1,
            DescentCase::TwoDiagBetaAbove2 => 4,
            DescentCase::TwoUnitPlusH => 4,
            DescentCase::TwoUnitPlusA => 4,
        }
    }
}

/// One application of `λ_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub input: TernaryForm,
    pub p: i64,
    pub sublattice_gram: GramMatrix,
    pub rescale_exp: u32,
    /// Reduced representative of `λ_p(L)`.
    pub output: TernaryForm,
    pub matched_case: DescentCase,
}

fn required_order(p: i64) -> u32 {
    if p == 2 {
        4
    } else {
        2
    }
}

/// Basis (columns) and Gram matrix of `Λ_p(L)`, or `Λ_4(L)` when `p = 2`.
pub fn lambda_sublattice(f: &TernaryForm, p: i64) -> Result<(Mat3, GramMatrix), WatsonError> {
    let dl = f.lattice_discriminant();
    let ord = valuation(dl, p as i128);
    let needed = required_order(p);
    if ord < needed {
        return Err(WatsonError::PreconditionOrder { p, ord, needed });
    }
    let g = f.gram().0;
    let pp = p as i128;
    let mut basis = matrix::IDENTITY;
    for row in g.iter() {
        let w = [0, 1, 2].map(|j| dot(row, &matrix::column(&basis, j)));
        basis = matrix::kernel_mod_prime(&basis, &w, pp);
    }
    if p == 2 {
        // On the kernel, x ↦ Q(x)/2 mod 2 is additive.
        let gb = matrix::congruent(&g, &basis);
        let w = [gb[0][0] / 2, gb[1][1] / 2, gb[2][2] / 2];
        basis = matrix::kernel_mod_prime(&basis, &w, 2);
    }
    Ok((basis, GramMatrix(matrix::congruent(&g, &basis))))
}

fn dot(a: &[i128; 3], b: &[i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Power of `p` to divide out of the Gram matrix of the sublattice.
fn rescale_exponent(g: &Mat3, p: i64) -> u32 {
    let pp = p as i128;
    if p == 2 {
        // Norm ideal: generated by the diagonal and twice the off-diagonal.
        let norm = [
            g[0][0],
            g[1][1],
            g[2][2],
            2 * g[0][1],
            2 * g[0][2],
            2 * g[1][2],
        ]
        .iter()
        .fold(0i128, |acc, &x| gcd(acc, x));
        valuation(norm, 2) - 1
    } else {
        let scale = g.iter().flatten().fold(0i128, |acc, &x| gcd(acc, x));
        valuation(scale, pp)
    }
}

fn scaled_gram(g: &Mat3, p: i64, k: u32) -> Mat3 {
    let d = pow(p as i128, k);
    g.map(|row| row.map(|x| x / d))
}

/// Computes `λ_p(f)` and verifies it against the descent table.
pub fn watson_transform(f: &TernaryForm, p: i64) -> Result<DescentStep, WatsonError> {
    if p == 2 && two_adic_shape(f) == TwoAdicShape::Other {
        // Checked before the order so the error names the real obstruction.
        let ord = valuation(f.lattice_discriminant(), 2);
        if ord >= required_order(2) {
            return Err(WatsonError::SplitByPlane);
        }
    }
    let (_, sub) = lambda_sublattice(f, p)?;
    let k = rescale_exponent(&sub.0, p);
    let out_gram = scaled_gram(&sub.0, p, k);
    let out = TernaryForm::from_gram(&out_gram).map_err(|e| WatsonError::CaseMismatch {
        p,
        detail: format!("rescaled sublattice is not a primitive form: {e}"),
    })?;
    let case = verify_branch(f, &out, p)?;
    verify_other_primes(f, &out, p, k)?;
    Ok(DescentStep {
        input: *f,
        p,
        sublattice_gram: sub,
        rescale_exp: k,
        output: out.canonical(),
        matched_case: case,
    })
}

const UNITS_MOD_8: [i64; 4] = [1, 3, 5, 7];

fn verify_branch(f: &TernaryForm, out: &TernaryForm, p: i64) -> Result<DescentCase, WatsonError> {
    let ord_in = valuation(f.lattice_discriminant(), p as i128);
    let ord_out = valuation(out.lattice_discriminant(), p as i128);
    let actual = LocalSymbol::of(out, p);
    let input = LocalSymbol::of(f, p);
    let mismatch = |detail: String| WatsonError::CaseMismatch { p, detail };

    let case = if p == 2 {
        let candidates = two_adic_branch(f, &input)?;
        match candidates
            .iter()
            .find(|(_, c)| LocalSymbol::from_pieces(2, c) == actual)
        {
            Some((case, _)) => *case,
            None => {
                return Err(mismatch(format!(
                    "{:?} predicted for {f:?}, got {actual}",
                    candidates[0].0
                )))
            }
        }
    } else {
        let s = odd_local_structure(f, p);
        let case = match s.beta {
            0 if s.gamma >= 2 => DescentCase::OddBeta0,
            0 => return Err(mismatch(format!("β = 0, γ = {} has no branch", s.gamma))),
            1 => DescentCase::OddBeta1,
            _ => DescentCase::OddBetaAtLeast2,
        };
        // Try every unit assignment giving the input, so the check does not
        // depend on which diagonalization the splitting happened to return.
        let delta = crate::arith::min_nonsquare(p as i128) as i64;
        let mut matched = false;
        for a in [1, delta] {
            for b in [1, delta] {
                for c in [1, delta] {
                    let given = [(0, a), (s.beta, b), (s.gamma, c)];
                    if odd_symbol(p, &given) != input {
                        continue;
                    }
                    let expected = match case {
                        DescentCase::OddBeta0 => [(0, a), (0, b), (s.gamma - 2, c)],
                        DescentCase::OddBeta1 => [(0, b), (1, a), (s.gamma - 1, c)],
                        _ => [(0, a), (s.beta - 2, b), (s.gamma - 2, c)],
                    };
                    matched |= odd_symbol(p, &expected) == actual;
                }
            }
        }
        if !matched {
            return Err(mismatch(format!(
                "{case:?} predicted for {f:?}, got {actual}"
            )));
        }
        case
    };
    if ord_in < ord_out || ord_in - ord_out != case.ord_drop() {
        return Err(mismatch(format!(
            "{case:?} drops ord_{p} by {}, got {ord_in} → {ord_out}",
            case.ord_drop()
        )));
    }
    Ok(case)
}

fn odd_symbol(p: i64, entries: &[(u32, i64)]) -> LocalSymbol {
    let pieces: Vec<JordanComponent> = entries
        .iter()
        .map(|&(s, u)| JordanComponent::diagonal(s, &[u]))
        .collect();
    LocalSymbol::from_pieces(p, &pieces)
}

/// Every branch (with its predicted lattice) the table allows for some
/// choice of units realising the input.
fn two_adic_branch(
    f: &TernaryForm,
    input: &LocalSymbol,
) -> Result<Vec<(DescentCase, Vec<JordanComponent>)>, WatsonError> {
    let shape = two_adic_shape(f);
    let d = JordanComponent::diagonal;
    let mut out = Vec::new();
    match shape {
        TwoAdicShape::Other => return Err(WatsonError::SplitByPlane),
        TwoAdicShape::UnitPlusH { gamma, .. } | TwoAdicShape::UnitPlusA { gamma, .. } => {
            let plane = match shape {
                TwoAdicShape::UnitPlusH { .. } => crate::localdata::Plane::H,
                _ => crate::localdata::Plane::A,
            };
            let case = if plane == crate::localdata::Plane::H {
                DescentCase::TwoUnitPlusH
            } else {
                DescentCase::TwoUnitPlusA
            };
            for a in UNITS_MOD_8 {
                let given = vec![d(1, &[a]), JordanComponent::plane(gamma, plane)];
                if LocalSymbol::from_pieces(2, &given) == *input {
                    out.push((
                        case,
                        vec![d(1, &[a]), JordanComponent::plane(gamma - 2, plane)],
                    ));
                }
            }
        }
        TwoAdicShape::Diag { beta, gamma, .. } => {
            for a in UNITS_MOD_8 {
                for b in UNITS_MOD_8 {
                    for c in UNITS_MOD_8 {
                        let given = vec![d(1, &[a]), d(beta, &[b]), d(gamma, &[c])];
                        if LocalSymbol::from_pieces(2, &given) != *input {
                            continue;
                        }
                        // a ≡ b (mod 4) is not an invariant of the lattice, so
                        // every branch some unit choice leads to is allowed.
                        out.push(diag_branch(a, b, c, beta, gamma));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Pieces of `2^k·[[x, y], [y, x]]` with `x, y = a±b` (halved if asked).
fn binary_block(a: i64, b: i64, halve: bool, k: u32) -> Vec<JordanComponent> {
    let (x, y) = if halve {
        ((a + b) / 2, (a - b) / 2)
    } else {
        (a + b, a - b)
    };
    let s = pow(2, k);
    split_binary(&[
        [s * x as i128, s * y as i128],
        [s * y as i128, s * x as i128],
    ])
}

/// Jordan pieces at 2 of a nondegenerate binary Gram matrix.
fn split_binary(m: &[[i128; 2]; 2]) -> Vec<JordanComponent> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    let v = [m[0][0], m[1][1], m[0][1]]
        .iter()
        .filter(|&&x| x != 0)
        .map(|&x| valuation(x, 2))
        .min()
        .unwrap();
    let diag = [m[0][0], m[1][1]]
        .into_iter()
        .find(|&x| x != 0 && valuation(x, 2) == v);
    match diag {
        Some(x) => {
            // The orthogonal complement of ⟨x⟩ is ⟨det/x⟩.
            let (vx, ux) = crate::arith::val_unit(x, 2);
            let (vy, uy) = crate::arith::val_unit(det, 2);
            let mut pieces = vec![
                JordanComponent::diagonal(vx, &[ux.rem_euclid(8) as i64]),
                JordanComponent::diagonal(vy - vx, &[(uy * ux).rem_euclid(8) as i64]),
            ];
            pieces.sort_by_key(|c| c.scale_exp);
            pieces
        }
        None => {
            let w = (det >> (2 * v)).rem_euclid(8);
            let plane = if w == 7 {
                crate::localdata::Plane::H
            } else {
                crate::localdata::Plane::A
            };
            vec![JordanComponent::plane(v, plane)]
        }
    }
}

fn diag_branch(
    a: i64,
    b: i64,
    c: i64,
    beta: u32,
    gamma: u32,
) -> (DescentCase, Vec<JordanComponent>) {
    let d = JordanComponent::diagonal;
    match beta {
        1 if (a - b).rem_euclid(4) == 0 => {
            let mut p = binary_block(a, b, false, 0);
            p.push(d(gamma - 1, &[c]));
            (DescentCase::TwoDiagBeta1Congruent, p)
        }
        1 if gamma == 2 => {
            let mut p = binary_block(a, b, false, 0);
            p.push(d(1, &[c]));
            (DescentCase::TwoDiagBeta1IncongruentGamma2, p)
        }
        1 => {
            let mut p = binary_block(a, b, true, 0);
            p.push(d(gamma - 2, &[c]));
            (DescentCase::TwoDiagBeta1Incongruent, p)
        }
        2 => (
            DescentCase::TwoDiagBeta2,
            vec![d(1, &[b]), d(2, &[a]), d(gamma - 1, &[c])],
        ),
        _ => (
            DescentCase::TwoDiagBetaAbove2,
            vec![d(1, &[a]), d(beta - 2, &[b]), d(gamma - 2, &[c])],
        ),
    }
}

/// At `q ≠ p` the output must be the input scaled by `p^k`.
fn verify_other_primes(
    f: &TernaryForm,
    out: &TernaryForm,
    p: i64,
    k: u32,
) -> Result<(), WatsonError> {
    for q in bad_primes(f.lattice_discriminant()) {
        if q == p {
            continue;
        }
        let modulus = if q == 2 { 8 } else { q as i128 };
        let u = crate::arith::pow_mod(p as i128, k as u128, modulus) as i64;
        let scaled: Vec<JordanComponent> = jordan_splitting(f, q)
            .into_iter()
            .map(|mut c| {
                for x in c.units.iter_mut() {
                    *x = (*x * u).rem_euclid(modulus as i64);
                }
                c
            })
            .collect();
        if LocalSymbol::from_pieces(q, &scaled) != LocalSymbol::of(out, q) {
            return Err(WatsonError::CaseMismatch {
                p,
                detail: format!("structure at {q} changed beyond unit scaling"),
            });
        }
    }
    Ok(())
}

/// Applies `λ_p` while the order condition holds and `L_p` is not split by
/// ℍ (at 2: by neither ℍ nor 𝔸).
pub fn descent_chain(f: &TernaryForm, p: i64) -> Result<Vec<DescentStep>, WatsonError> {
    let mut chain = Vec::new();
    let mut cur = *f;
    loop {
        let ord = valuation(cur.lattice_discriminant(), p as i128);
        if ord < required_order(p) {
            break;
        }
        let split = if p == 2 {
            two_adic_shape(&cur) == TwoAdicShape::Other
        } else {
            crate::localdata::split_by(&cur, p, crate::localdata::Plane::H)
                .expect("ℍ is valid at every prime")
        };
        if split {
            break;
        }
        let step = watson_transform(&cur, p)?;
        cur = step.output;
        chain.push(step);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: [i64; 6]) -> TernaryForm {
        TernaryForm::new(c).unwrap()
    }

    #[test]
    fn odd_beta_one_branch() {
        let f = form([3, 4, 9, 0, 0, 0]);
        let step = watson_transform(&f, 3).unwrap();
        assert_eq!(step.matched_case, DescentCase::OddBeta1);
        assert_eq!(step.output.discriminant(), 144);
        let (basis, _) = lambda_sublattice(&f, 3).unwrap();
        assert_eq!(matrix::det(&basis).abs(), 3);
    }

    #[test]
    fn order_precondition() {
        let f = form([1, 1, 1, 0, 0, 0]);
        assert!(matches!(
            watson_transform(&f, 3),
            Err(WatsonError::PreconditionOrder { .. })
        ));
        assert!(descent_chain(&f, 3).unwrap().is_empty());
    }

    #[test]
    fn lambda_four_norm_dichotomy() {
        let f = form([4, 4, 5, 0, 4, 0]);
        let (_, g) = lambda_sublattice(&f, 2).unwrap();
        let k = rescale_exponent(&g.0, 2);
        assert!(k == 1 || k == 2);
    }

    #[test]
    fn two_adic_chain_strictly_descends() {
        let f = form([9, 16, 48, 0, 0, 0]);
        let chain = descent_chain(&f, 2).unwrap();
        assert!(!chain.is_empty());
        let mut prev = f.discriminant();
        for step in &chain {
            let d = step.output.discriminant();
            assert!(prev / d == 2 || prev / d == 16, "{prev} → {d}");
            prev = d;
        }
    }
}
