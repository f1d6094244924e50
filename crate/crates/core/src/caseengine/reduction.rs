//! Cancelling the common power of 19 when `19 | x`.
//!
//! Writing `x = 19^u X`, `y = 19^v Y` with `19 !| XY`, the equation
//! `x^2 + 19^e = y^n` becomes `19^(2u) X^2 + 19^e = 19^(nv) Y^n`. Dividing by
//! the smallest of the three powers leaves one of a handful of reduced shapes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Whether the power of 19 is `2k` or `2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn exponent(self, k: u32) -> u32 {
        match self {
            Parity::Even => 2 * k,
            Parity::Odd => 2 * k + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Which of the three 19-adic exponents was cancelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Minimum {
    /// `2u`
    X,
    /// the constant's exponent
    C,
    /// `nv`
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducedKind {
    /// `X^2 + 1 = Y^n`, possibly after absorbing `19^(r/2)` into `X`.
    Lebesgue,
    /// `X^2 + 1 = 19^w Y^n`.
    MixedPower { w: u32 },
    /// `X^2 + 19^(2j) = Y^n`, `19 !| X`.
    CoprimeEven { j: u32 },
    /// `X^2 + 19^(2j+1) = Y^n`, `19 !| X`.
    CoprimeOdd { j: u32 },
    /// `19 Z^2 + 1 = Y^n` with `Z = 19^z_exp X`.
    AuxPell { z_exp: u32 },
    /// Exactly one side is prime to 19 after cancelling.
    Mod19Contradiction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReducedEquation {
    pub kind: ReducedKind,
    pub n: u32,
    pub minimum: Minimum,
    pub cancelled: u32,
    pub residual_x: u32,
    pub residual_c: u32,
    pub residual_y: u32,
}

impl ReducedEquation {
    /// The original exponents `(2u, e, nv)`.
    pub fn exponents(&self) -> (u32, u32, u32) {
        (
            self.cancelled + self.residual_x,
            self.cancelled + self.residual_c,
            self.cancelled + self.residual_y,
        )
    }
}

impl fmt::Display for ReducedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |e: u32| if e == 0 { String::new() } else { format!("19^{e} ") };
        write!(
            f,
            "{}X^2 + {} = {}Y^{}",
            pow(self.residual_x),
            if self.residual_c == 0 {
                String::from("1")
            } else {
                format!("19^{}", self.residual_c)
            },
            pow(self.residual_y),
            self.n
        )
    }
}

/// Reduces `19^(2u) X^2 + 19^e = 19^(nv) Y^n` with `e = parity.exponent(k)`.
///
/// Ties for the minimum are broken in the order `2u`, `e`, `nv`.
pub fn classify_reduction(u: u32, v: u32, k: u32, n: u32, parity: Parity) -> Result<ReducedEquation> {
    if u == 0 || v == 0 {
        return Err(Error::Domain("valuations u and v must be positive"));
    }
    if k == 0 && parity == Parity::Even {
        return Err(Error::Domain("k must be positive"));
    }
    if n < 3 {
        return Err(Error::Domain("exponent n must be at least 3"));
    }
    let ex = 2 * u;
    let ec = parity.exponent(k);
    let ey = n.checked_mul(v).ok_or(Error::Domain("n * v overflows"))?;
    let (minimum, cancelled) = if ex <= ec && ex <= ey {
        (Minimum::X, ex)
    } else if ec <= ey {
        (Minimum::C, ec)
    } else {
        (Minimum::Y, ey)
    };
    let (rx, rc, ry) = (ex - cancelled, ec - cancelled, ey - cancelled);
    let kind = match (rx, rc, ry) {
        (0, 0, 0) => ReducedKind::Lebesgue,
        (0, 0, w) => ReducedKind::MixedPower { w },
        (0, c, 0) if c % 2 == 0 => ReducedKind::CoprimeEven { j: c / 2 },
        (0, c, 0) => ReducedKind::CoprimeOdd { j: (c - 1) / 2 },
        (r, 0, 0) if r % 2 == 0 => ReducedKind::Lebesgue,
        (r, 0, 0) => ReducedKind::AuxPell { z_exp: (r - 1) / 2 },
        _ => ReducedKind::Mod19Contradiction,
    };
    Ok(ReducedEquation {
        kind,
        n,
        minimum,
        cancelled,
        residual_x: rx,
        residual_c: rc,
        residual_y: ry,
    })
}

/// Reduced shapes up to the parameters that a single leaf handles uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DescentClass {
    Lebesgue,
    MixedPower,
    CoprimeEven {
        j: u32,
    },
    CoprimeOdd {
        j: u32,
    },
    AuxPell,
    /// The side left prime to 19.
    Mod19(Minimum),
}

impl DescentClass {
    pub fn of(r: &ReducedEquation) -> Self {
        match r.kind {
            ReducedKind::Lebesgue => DescentClass::Lebesgue,
            ReducedKind::MixedPower { .. } => DescentClass::MixedPower,
            ReducedKind::CoprimeEven { j } => DescentClass::CoprimeEven { j },
            ReducedKind::CoprimeOdd { j } => DescentClass::CoprimeOdd { j },
            ReducedKind::AuxPell { .. } => DescentClass::AuxPell,
            ReducedKind::Mod19Contradiction => DescentClass::Mod19(r.minimum),
        }
    }

    pub fn describe(self, n: u32) -> String {
        match self {
            DescentClass::Lebesgue => format!("X^2 + 1 = Y^{n}"),
            DescentClass::MixedPower => format!("X^2 + 1 = 19^w Y^{n}, w >= 1"),
            DescentClass::CoprimeEven { j } => format!("X^2 + 19^{} = Y^{n}, 19 !| X", 2 * j),
            DescentClass::CoprimeOdd { j } => format!("X^2 + 19^{} = Y^{n}, 19 !| X", 2 * j + 1),
            DescentClass::AuxPell => format!("19Z^2 + 1 = Y^{n}"),
            DescentClass::Mod19(Minimum::X) => format!("X^2 + 19^b = 19^c Y^{n}, 19 !| XY"),
            DescentClass::Mod19(Minimum::C) => format!("19^a X^2 + 1 = 19^c Y^{n}, 19 !| Y"),
            DescentClass::Mod19(Minimum::Y) => format!("19^a X^2 + 19^b = Y^{n}, 19 !| XY"),
        }
    }
}

/// A class with the `(u, v)` cells landing in it.
pub type ClassCells = (DescentClass, Vec<(u32, u32)>);

/// The `(u, v)` range examined for one `(k, n)`.
///
/// Beyond `u = k + 1` the exponent `2u` exceeds the constant's and only the
/// comparison of `nv` with it matters; beyond `v_max` the exponent `nv`
/// exceeds both others. The box therefore meets every class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DescentBox {
    pub parity: Parity,
    pub k: u32,
    pub n: u32,
    pub u_max: u32,
    pub v_max: u32,
}

impl DescentBox {
    pub fn new(parity: Parity, k: u32, n: u32) -> Self {
        let u_max = k + 1;
        let v_max = (2 * u_max).max(parity.exponent(k)) / n + 1;
        Self {
            parity,
            k,
            n,
            u_max,
            v_max,
        }
    }

    /// Classes met by the box with the cells landing in each, in class order.
    pub fn classes(&self) -> Result<Vec<ClassCells>> {
        let mut map: BTreeMap<DescentClass, Vec<(u32, u32)>> = BTreeMap::new();
        for u in 1..=self.u_max {
            for v in 1..=self.v_max {
                let r = classify_reduction(u, v, self.k, self.n, self.parity)?;
                map.entry(DescentClass::of(&r)).or_default().push((u, v));
            }
        }
        Ok(map.into_iter().collect())
    }

    /// Child labels expected under a valuation split over this box.
    pub fn class_labels(&self) -> Vec<String> {
        self.classes()
            .map(|cs| cs.iter().map(|(c, cells)| class_label(*c, self.n, cells)).collect())
            .unwrap_or_default()
    }
}

pub(crate) fn class_label(class: DescentClass, n: u32, cells: &[(u32, u32)]) -> String {
    let (u, v) = cells[0];
    format!(
        "{} [{} cells, first (u, v) = ({u}, {v})]",
        class.describe(n),
        cells.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_power_example() {
        let r = classify_reduction(3, 3, 3, 3, Parity::Even).unwrap();
        assert_eq!(r.kind, ReducedKind::MixedPower { w: 3 });
        assert_eq!(r.exponents(), (6, 6, 9));
    }

    #[test]
    fn documented_examples() {
        let k = |u, v| classify_reduction(u, v, 3, 3, Parity::Even).unwrap().kind;
        assert_eq!(k(3, 2), ReducedKind::Lebesgue);
        assert_eq!(k(3, 3), ReducedKind::MixedPower { w: 3 });
        assert_eq!(k(2, 2), ReducedKind::Mod19Contradiction);
    }

    #[test]
    fn shapes() {
        // 2u = nv < 2k
        let r = classify_reduction(3, 2, 4, 3, Parity::Even).unwrap();
        assert_eq!(r.kind, ReducedKind::CoprimeEven { j: 1 });
        // 2u < 2k = nv
        let r = classify_reduction(1, 2, 3, 3, Parity::Even).unwrap();
        assert_eq!(r.kind, ReducedKind::Mod19Contradiction);
        assert_eq!(r.minimum, Minimum::X);
        // all equal
        assert_eq!(
            classify_reduction(3, 2, 3, 3, Parity::Even).unwrap().kind,
            ReducedKind::Lebesgue
        );
        // 2k+1 smallest and equal to nv
        let r = classify_reduction(4, 1, 1, 3, Parity::Odd).unwrap();
        assert_eq!(r.kind, ReducedKind::AuxPell { z_exp: 2 });
        assert_eq!(
            classify_reduction(3, 2, 3, 3, Parity::Odd).unwrap().kind,
            ReducedKind::CoprimeOdd { j: 0 }
        );
        assert!(classify_reduction(0, 1, 1, 3, Parity::Even).is_err());
        assert!(classify_reduction(1, 1, 1, 2, Parity::Even).is_err());
    }

    #[test]
    fn box_covers_larger_boxes() {
        for parity in [Parity::Even, Parity::Odd] {
            for k in 1..=5 {
                for n in [3, 5, 7] {
                    let bx = DescentBox::new(parity, k, n);
                    let small: Vec<_> = bx.classes().unwrap().into_iter().map(|c| c.0).collect();
                    let big = DescentBox {
                        u_max: bx.u_max + 6,
                        v_max: bx.v_max + 6,
                        ..bx
                    };
                    let large: Vec<_> = big.classes().unwrap().into_iter().map(|c| c.0).collect();
                    assert_eq!(small, large, "{parity:?} k={k} n={n}");
                }
            }
        }
    }
}
