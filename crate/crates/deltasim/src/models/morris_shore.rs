//! Bright/dark decomposition of four parallel quasi-spin-wave families
//! coupled to common radiation modes.
//!
//! When the coupling vectors of the two transitions are proportional,
//! `g_Bf/g_B1 = g_Af/g_A1` for every family f, only one collective mode per
//! transition stays coupled (the "bright" mode, coefficients `g_Xf/g_X`);
//! the three orthogonal combinations decouple entirely.

use crate::error::{Error, Result};

/// Result of the bright/dark factorization. The rows
/// `(bright_b, dark[0], dark[1], dark[2])` form an orthogonal 4×4
/// transformation of the mode families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorrisShore {
    pub bright_a: [f64; 4],
    pub bright_b: [f64; 4],
    /// Dark modes B′, B″, B‴; the proportionality condition makes the same
    /// coefficient vectors dark for the A families as well.
    pub dark: [[f64; 4]; 3],
    /// g_A = √(Σ_f g_Af²).
    pub g_a_total: f64,
    /// g_B = √(Σ_f g_Bf²).
    pub g_b_total: f64,
}

/// Decompose four coupling pairs into bright and dark collective modes.
///
/// `tol` bounds the allowed absolute deviation between the coupling ratios
/// g_Af/g_A1 and g_Bf/g_B1; the first violating family index is reported.
pub fn morris_shore(g_a: [f64; 4], g_b: [f64; 4], tol: f64) -> Result<MorrisShore> {
    if g_a[0] == 0.0 || g_b[0] == 0.0 {
        return Err(Error::InvalidParam(
            "reference couplings g_A1, g_B1 must be nonzero".into(),
        ));
    }
    for f in 1..4 {
        let ratio_a = g_a[f] / g_a[0];
        let ratio_b = g_b[f] / g_b[0];
        if (ratio_a - ratio_b).abs() > tol {
            return Err(Error::ProportionalityViolated {
                index: f + 1,
                found: ratio_b,
                expected: ratio_a,
                tolerance: tol,
            });
        }
    }

    let g_a_total = g_a.iter().map(|g| g * g).sum::<f64>().sqrt();
    let g_b_total = g_b.iter().map(|g| g * g).sum::<f64>().sqrt();
    let g12 = (g_b[0] * g_b[0] + g_b[1] * g_b[1]).sqrt();
    let g34 = (g_b[2] * g_b[2] + g_b[3] * g_b[3]).sqrt();
    if g12 < 1e-12 * g_b_total || g34 < 1e-12 * g_b_total {
        return Err(Error::Degenerate(
            "coupling pair (1,2) or (3,4) vanishes; dark-mode split is undefined".into(),
        ));
    }

    let bright_a = [
        g_a[0] / g_a_total,
        g_a[1] / g_a_total,
        g_a[2] / g_a_total,
        g_a[3] / g_a_total,
    ];
    let bright_b = [
        g_b[0] / g_b_total,
        g_b[1] / g_b_total,
        g_b[2] / g_b_total,
        g_b[3] / g_b_total,
    ];
    // B′ balances the (1,2) pair against the (3,4) pair; B″ and B‴ are the
    // antisymmetric combinations inside each pair.
    let dark0 = [
        g34 / (g_b_total * g12) * g_b[0],
        g34 / (g_b_total * g12) * g_b[1],
        -g12 / (g_b_total * g34) * g_b[2],
        -g12 / (g_b_total * g34) * g_b[3],
    ];
    let dark1 = [g_b[1] / g12, -g_b[0] / g12, 0.0, 0.0];
    let dark2 = [0.0, 0.0, g_b[3] / g34, -g_b[2] / g34];

    Ok(MorrisShore {
        bright_a,
        bright_b,
        dark: [dark0, dark1, dark2],
        g_a_total,
        g_b_total,
    })
}

impl MorrisShore {
    /// Rows (bright_b, B′, B″, B‴) as a 4×4 matrix.
    pub fn transformation(&self) -> [[f64; 4]; 4] {
        [self.bright_b, self.dark[0], self.dark[1], self.dark[2]]
    }

    /// Residual couplings Σ_f g_Bf · (dark mode)_f, one per dark mode; all
    /// zero by construction.
    pub fn residual_couplings(&self, g_b: &[f64; 4]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (k, dark) in self.dark.iter().enumerate() {
            out[k] = g_b.iter().zip(dark.iter()).map(|(g, d)| g * d).sum();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_couplings_give_uniform_bright_mode() {
        let c = 0.7;
        let ms = morris_shore([c; 4], [c; 4], 1e-12).unwrap();
        for f in 0..4 {
            assert!((ms.bright_a[f] - 0.5).abs() < 1e-14);
            assert!((ms.bright_b[f] - 0.5).abs() < 1e-14);
        }
        assert!((ms.g_a_total - 2.0 * c).abs() < 1e-14);
        assert!((ms.g_b_total - 2.0 * c).abs() < 1e-14);
    }

    #[test]
    fn dark_modes_orthonormal_and_orthogonal_to_bright() {
        let g_b = [0.9, 0.4, 1.3, 0.2];
        let g_a: [f64; 4] = std::array::from_fn(|f| 2.5 * g_b[f]);
        let ms = morris_shore(g_a, g_b, 1e-12).unwrap();
        let rows = ms.transformation();
        for (i, r) in rows.iter().enumerate() {
            for (j, s) in rows.iter().enumerate() {
                let dot: f64 = r.iter().zip(s.iter()).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12, "rows {i},{j}: dot = {dot}");
            }
        }
    }

    #[test]
    fn dark_modes_carry_no_coupling() {
        let g_b = [1.1, -0.3, 0.8, 0.5];
        let g_a: [f64; 4] = std::array::from_fn(|f| -0.4 * g_b[f]);
        let ms = morris_shore(g_a, g_b, 1e-12).unwrap();
        for r in ms.residual_couplings(&g_b) {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn proportionality_violation_names_family() {
        let g_b = [1.0, 0.5, 0.5, 0.5];
        let mut g_a = [2.0, 1.0, 1.0, 1.0];
        g_a[2] = 1.4;
        match morris_shore(g_a, g_b, 1e-9) {
            Err(Error::ProportionalityViolated { index, .. }) => assert_eq!(index, 3),
            other => panic!("expected proportionality error, got {other:?}"),
        }
    }
}
