//! Text formats round-trip byte for byte on canonical input.

use evcs::palette::{parse_palette, print_palette, Palette};
use evcs::pnm::{parse_pnm, print_pnm, Pixels, Pnm};
use evcs::text::{parse_matrix, parse_scheme, print_matrix, print_scheme};
use evcs_core::basis::builtin;
use evcs_core::build::{build_binary_evcs, build_color_evcs, build_gray_evcs};
use evcs_core::extension::ColorModel;
use evcs_core::matrix::{Cell, SymbolMatrix};
use evcs_core::mevcs::{build_mevcs, build_mevcs_with_bases, three_color_2_3_bases, CoverDomain, SecretDomain};
use proptest::prelude::*;

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![Just(Cell::White), Just(Cell::Black), (1u16..6).prop_map(Cell::Color)]
}

fn matrix() -> impl Strategy<Value = SymbolMatrix> {
    (1usize..5, 0usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(cell(), r * c).prop_map(move |cells| SymbolMatrix::new(r, c, cells).unwrap())
    })
}

fn pnm() -> impl Strategy<Value = Pnm> {
    (0usize..6, 0usize..6, any::<bool>()).prop_flat_map(|(w, h, rgb)| {
        let comments = prop::collection::vec("[ a-z0-9=]{0,12}", 0..3);
        let pixels = if rgb {
            prop::collection::vec(any::<[u8; 3]>(), w * h)
                .prop_map(Pixels::Rgb)
                .boxed()
        } else {
            prop::collection::vec(any::<u8>(), w * h).prop_map(Pixels::Gray).boxed()
        };
        (pixels, comments).prop_map(move |(pixels, comments)| Pnm {
            width: w,
            height: h,
            pixels,
            comments,
        })
    })
}

proptest! {
    #[test]
    fn matrices_round_trip(m in matrix()) {
        let text = print_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(print_matrix(&back), text);
    }

    #[test]
    fn images_round_trip(p in pnm()) {
        let text = print_pnm(&p);
        let back = parse_pnm(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(print_pnm(&back), text);
    }

    #[test]
    fn palettes_round_trip(entries in prop::collection::vec(any::<[u8; 3]>(), 1..8), sub in any::<bool>()) {
        let model = if sub { ColorModel::Subtractive } else { ColorModel::Additive };
        let p = Palette { entries, model };
        let text = print_palette(&p);
        prop_assert_eq!(parse_palette(&text).unwrap(), p);
    }

    #[test]
    fn trailing_garbage_is_rejected(p in pnm(), junk in "[0-9a-z]{1,4}") {
        let text = format!("{}{junk}\n", print_pnm(&p));
        prop_assert!(parse_pnm(&text).is_err());
    }
}

#[test]
fn schemes_round_trip() {
    let two_three = builtin("2-3").unwrap();
    let schemes = [
        build_binary_evcs(builtin("2-2").unwrap()).unwrap(),
        build_gray_evcs(&two_three, 3, &[2, 3, 4]).unwrap(),
        build_color_evcs(3, &two_three).unwrap(),
        build_mevcs(
            2,
            3,
            &SecretDomain::Gray(vec![2, 3, 2, 2]),
            &CoverDomain::Gray(vec![2, 2, 3]),
        )
        .unwrap(),
        build_mevcs(2, 3, &SecretDomain::Palette(2), &CoverDomain::Palette(2)).unwrap(),
        build_mevcs_with_bases(2, 3, three_color_2_3_bases(), &CoverDomain::Palette(3)).unwrap(),
    ];
    for s in &schemes {
        let text = print_scheme(s);
        let back = parse_scheme(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", s.id()));
        assert_eq!(&back, s, "{}", s.id());
        assert_eq!(print_scheme(&back), text);
    }
}

#[test]
fn scheme_with_wrong_expansion_is_rejected() {
    let text = print_scheme(&build_binary_evcs(builtin("2-2").unwrap()).unwrap());
    assert!(parse_scheme(&text.replacen("2 2 1 4", "2 2 1 5", 1)).is_err());
}
