//! Small presentations used throughout the tests and the shipped data files.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::envelope::EnvMode;
use crate::liealg::LiePresentation;
use crate::scalar::Field;

/// `sl2` with basis `e, h, f`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2(field: Field) -> LiePresentation {
    LiePresentation::builder(field, ["e", "h", "f"])
        .bracket_int(0, 1, &[(0, -2)])
        .bracket_int(1, 2, &[(2, -2)])
        .bracket_int(0, 2, &[(1, 1)])
        .build()
        .expect("sl2")
}

pub fn sl2_q() -> LiePresentation {
    sl2(Field::Rational)
}

/// `sl2` over `F_5` with `e^[5] = f^[5] = 0`, `h^[5] = h`.
pub fn sl2_f5() -> LiePresentation {
    sl2_f5_builder().build().expect("sl2 F5")
}

fn sl2_f5_builder() -> crate::liealg::PresentationBuilder {
    LiePresentation::builder(Field::Prime(5), ["e", "h", "f"])
        .bracket_int(0, 1, &[(0, -2)])
        .bracket_int(1, 2, &[(2, -2)])
        .bracket_int(0, 2, &[(1, 1)])
        .pmap_int(0, &[])
        .pmap_int(1, &[(1, 1)])
        .pmap_int(2, &[])
}

/// Heisenberg algebra `e, f, z` with `[e,f] = z`.
pub fn heisenberg_q() -> LiePresentation {
    LiePresentation::builder(Field::Rational, ["e", "f", "z"])
        .bracket_int(0, 1, &[(2, 1)])
        .build()
        .expect("heisenberg")
}

/// Abelian algebra of dimension `n` over `Q` with basis `t1, t2, ...`
/// (just `t` when `n = 1`).
pub fn abelian_q(n: usize) -> LiePresentation {
    let names: Vec<String> = if n == 1 {
        alloc::vec!["t".into()]
    } else {
        (1..=n).map(|i| format!("t{i}")).collect()
    };
    LiePresentation::builder(Field::Rational, names)
        .build()
        .expect("abelian")
}

/// Two-dimensional non-abelian algebra `e, h` with `[h,e] = e`.
pub fn solvable2(field: Field) -> LiePresentation {
    LiePresentation::builder(field, ["e", "h"])
        .bracket_int(0, 1, &[(0, -1)])
        .build()
        .expect("solvable")
}

/// The solvable algebra over `F_2`, restricted by `h^[2] = h`, `e^[2] = 0`.
pub fn solvable2_f2() -> LiePresentation {
    solvable2_f2_builder().build().expect("solvable F2")
}

fn solvable2_f2_builder() -> crate::liealg::PresentationBuilder {
    LiePresentation::builder(Field::Prime(2), ["e", "h"])
        .bracket_int(0, 1, &[(0, -1)])
        .pmap_int(0, &[])
        .pmap_int(1, &[(1, 1)])
}

/// One-dimensional toral algebra over `F_3`, `t^[3] = t`.
pub fn toral_f3() -> LiePresentation {
    toral_f3_builder().build().expect("toral")
}

fn toral_f3_builder() -> crate::liealg::PresentationBuilder {
    LiePresentation::builder(Field::Prime(3), ["t"]).pmap_int(0, &[(0, 1)])
}

/// `sl2` over `F_5` with the corrupted value `h^[5] = h + e`.
pub fn sl2_f5_bad_ad() -> LiePresentation {
    LiePresentation::builder(Field::Prime(5), ["e", "h", "f"])
        .bracket_int(0, 1, &[(0, -2)])
        .bracket_int(1, 2, &[(2, -2)])
        .bracket_int(0, 2, &[(1, 1)])
        .pmap_int(0, &[])
        .pmap_int(1, &[(1, 1), (0, 1)])
        .pmap_int(2, &[])
        .build()
        .expect("sl2 F5 corrupted")
}

/// The `F_2` solvable algebra asserting `(h + e)^[2] = h`; the true value
/// is `h + e` (`h^[2] + e^[2] + [h, e]`).
pub fn solvable2_f2_bad_additivity() -> LiePresentation {
    let f = Field::Prime(2);
    solvable2_f2_builder()
        .assert_pmap(alloc::vec![(0, f.one()), (1, f.one())], alloc::vec![(1, f.one())])
        .build()
        .expect("solvable F2 corrupted")
}

/// The toral algebra asserting `(2t)^[3] = t`; semilinearity forces `2t`.
pub fn toral_f3_bad_scaling() -> LiePresentation {
    let f = Field::Prime(3);
    toral_f3_builder()
        .assert_pmap(alloc::vec![(0, f.from_i64(2))], alloc::vec![(0, f.one())])
        .build()
        .expect("toral corrupted")
}

/// A named presentation together with the enveloping mode the theorems are
/// checked in.
pub struct Fixture {
    pub name: &'static str,
    pub presentation: LiePresentation,
    pub mode: EnvMode,
}

/// Characteristic-zero fixtures (full enveloping algebra).
pub fn char_zero() -> Vec<Fixture> {
    alloc::vec![
        Fixture {
            name: "sl2/Q",
            presentation: sl2_q(),
            mode: EnvMode::Full
        },
        Fixture {
            name: "heisenberg/Q",
            presentation: heisenberg_q(),
            mode: EnvMode::Full
        },
        Fixture {
            name: "abelian2/Q",
            presentation: abelian_q(2),
            mode: EnvMode::Full
        },
        Fixture {
            name: "solvable2/Q",
            presentation: solvable2(Field::Rational),
            mode: EnvMode::Full
        },
    ]
}

/// Restricted fixtures over prime fields.
pub fn restricted() -> Vec<Fixture> {
    alloc::vec![
        Fixture {
            name: "toral/F3",
            presentation: toral_f3(),
            mode: EnvMode::Restricted
        },
        Fixture {
            name: "solvable2/F2",
            presentation: solvable2_f2(),
            mode: EnvMode::Restricted
        },
        Fixture {
            name: "sl2/F5",
            presentation: sl2_f5(),
            mode: EnvMode::Restricted
        },
    ]
}

/// All fixtures in modes where the theorems make a claim.
pub fn supported() -> Vec<Fixture> {
    let mut all = char_zero();
    all.extend(restricted());
    all
}
