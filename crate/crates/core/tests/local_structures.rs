use ternary_core::localdata::{
    genus_symbol, jordan_splitting, odd_local_structure, render_splitting, same_genus,
    two_adic_shape, JordanComponent, LocalSymbol, Plane, TwoAdicShape,
};
use ternary_core::TernaryForm;

fn form(c: [i64; 6]) -> TernaryForm {
    TernaryForm::new(c).unwrap()
}

/// `1` stands for a square unit and `Δ` for a nonsquare one; at p = 3 the
/// residue 2 is a nonsquare, at p = 7 the residue 3.
fn odd(p: i64, parts: &[(u32, &[bool])]) -> LocalSymbol {
    let delta = if p == 3 { 2 } else { 3 };
    let comps: Vec<JordanComponent> = parts
        .iter()
        .map(|(s, units)| {
            let u: Vec<i64> = units.iter().map(|&sq| if sq { 1 } else { delta }).collect();
            JordanComponent::diagonal(*s, &u)
        })
        .collect();
    LocalSymbol::from_pieces(p, &comps)
}

#[test]
fn unit_plus_anisotropic_plane_at_two() {
    let f = form([8, 9, 56, 0, 8, 0]);
    assert_eq!(
        two_adic_shape(&f),
        TwoAdicShape::UnitPlusA { a: 1, gamma: 3 }
    );
    let expected = LocalSymbol::from_pieces(
        2,
        &[
            JordanComponent::diagonal(1, &[1]),
            JordanComponent::plane(3, Plane::A),
        ],
    );
    assert_eq!(LocalSymbol::of(&f, 2), expected);
    assert_eq!(render_splitting(&jordan_splitting(&f, 2), 2), "2⟨1⟩⊥2^3𝔸");
}

#[test]
fn named_three_adic_structures() {
    let expected = odd(3, &[(0, &[false, false]), (1, &[false])]);
    for c in [[7, 20, 23, -4, 2, 4], [7, 23, 23, -18, 2, 2]] {
        let f = form(c);
        assert_eq!(LocalSymbol::of(&f, 3), expected, "{f:?}");
        let s = odd_local_structure(&f, 3);
        assert_eq!((s.beta, s.gamma), (0, 1));
    }
}

#[test]
fn structures_of_a_form_with_three_bad_primes() {
    let f = form([13, 28, 28, -16, 4, 4]);
    assert_eq!(
        two_adic_shape(&f),
        TwoAdicShape::UnitPlusA { a: 5, gamma: 3 }
    );
    assert_eq!(
        LocalSymbol::of(&f, 3),
        odd(3, &[(0, &[false]), (2, &[false, false])])
    );
    assert_eq!(
        LocalSymbol::of(&f, 7),
        odd(7, &[(0, &[true, false]), (1, &[false])])
    );
}

#[test]
fn disc_108_forms_lie_in_different_genera() {
    let f = form([3, 3, 4, 0, 0, 3]);
    let g = form([3, 4, 4, 4, 3, 3]);
    assert!(!same_genus(&f, &g));
    assert!(same_genus(&f, &f));
    assert_eq!(
        genus_symbol(&f).to_string(),
        genus_symbol(&f.canonical()).to_string()
    );
}
