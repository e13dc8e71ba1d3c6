//! Convergence metrics: L²-in-time, measure-of-exceedance, sup-in-time,
//! the algebraic symmetrization identity, and the Chernoff-quotient
//! resolvent checks.

use num_complex::Complex64 as C64;

use super::grid::QuadratureGrid;
use super::{
    chernoff_quotient, chernoff_quotient_boundary, product_operator, FormulaError, FormulaResult,
    OperatorPair, ProductScheme,
};
use crate::matrix::{vec_norm, vec_sub, ComplexMatrix};

/// Comparator trajectory for a scheme: `e^{-itC}` in general,
/// `e^{-itC_zeno} ⊕ 0` for the Zeno scheme, `e^{-tC}` for real time.
fn comparator_at(pair: &OperatorPair, scheme: &ProductScheme, t: f64) -> FormulaResult<ComplexMatrix> {
    Ok(match scheme {
        ProductScheme::Zeno => pair
            .zeno()
            .ok_or(FormulaError::MissingProjection)?
            .comparator(t),
        s if s.is_real_time() => pair.c().semigroup(t),
        _ => pair.exact_propagator(t),
    })
}

/// Zeno runs compare on ran P only: h is projected there, with a warning
/// when the discarded component is non-negligible.
fn effective_vector(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    h: &[C64],
) -> FormulaResult<Vec<C64>> {
    if let ProductScheme::Zeno = scheme {
        let zeno = pair.zeno().ok_or(FormulaError::MissingProjection)?;
        let ph = zeno.projection().matvec(h);
        let discarded = vec_norm(&vec_sub(h, &ph));
        if discarded > 1e-12 {
            log::warn!("Zeno sweep: projecting h into ran P discards norm {discarded:.3e}");
        }
        Ok(ph)
    } else {
        Ok(h.to_vec())
    }
}

/// `Σ_j w_j ‖Π_n(t_j)h - e^{-it_j C}h‖²`, the squared error in L² over `[0, T]`.
pub fn l2_time_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    n: u32,
    h: &[C64],
    grid: &QuadratureGrid,
) -> FormulaResult<f64> {
    let h_eff = effective_vector(pair, scheme, h)?;
    let mut total = 0.0;
    for (t, w) in grid.iter() {
        let approx = product_operator(pair, scheme, t, n)?;
        let exact = comparator_at(pair, scheme, t)?;
        let diff = vec_sub(&approx.matvec(&h_eff), &exact.matvec(&h_eff));
        total += w * vec_norm(&diff).powi(2);
    }
    Ok(total)
}

/// Quadrature estimate of `|{t ∈ [0,T] : ‖Π_n(t)h - e^{-itC}h‖ ≥ η}|`,
/// the Lebesgue measure of the exceedance set.
pub fn measure_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    n: u32,
    h: &[C64],
    grid: &QuadratureGrid,
    eta: f64,
) -> FormulaResult<f64> {
    let h_eff = effective_vector(pair, scheme, h)?;
    let mut total = 0.0;
    for (t, w) in grid.iter() {
        let approx = product_operator(pair, scheme, t, n)?;
        let exact = comparator_at(pair, scheme, t)?;
        let err = vec_norm(&vec_sub(&approx.matvec(&h_eff), &exact.matvec(&h_eff)));
        if err >= eta {
            total += w;
        }
    }
    Ok(total)
}

/// `sup_{t ∈ grid} ‖Π_n(t)h - e^{-tC}h‖` for the real-time semigroup
/// schemes; unitary schemes converge only in measure, not uniformly, so the
/// metric is refused for them.
pub fn sup_time_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    n: u32,
    h: &[C64],
    grid: &QuadratureGrid,
) -> FormulaResult<f64> {
    if !scheme.is_real_time() {
        return Err(FormulaError::SchemeMismatch {
            scheme: scheme.tag().to_string(),
            metric: "sup",
        });
    }
    let mut worst = 0.0_f64;
    for (t, _) in grid.iter() {
        let approx = product_operator(pair, scheme, t, n)?;
        let exact = comparator_at(pair, scheme, t)?;
        let err = vec_norm(&vec_sub(&approx.matvec(h), &exact.matvec(h)));
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Vector-free variant: `Σ_j w_j ‖Π_n(t_j) - e^{-it_j C}‖²_op`.
pub fn opnorm_l2_time_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    n: u32,
    grid: &QuadratureGrid,
) -> FormulaResult<f64> {
    let mut total = 0.0;
    for (t, w) in grid.iter() {
        let approx = product_operator(pair, scheme, t, n)?;
        let exact = comparator_at(pair, scheme, t)?;
        let gap = (&approx - &exact).operator_norm()?;
        total += w * gap * gap;
    }
    Ok(total)
}

/// Residual of the exact algebraic identity
/// `Sym_n(t) = e^{itA/2n} · Plain_n(t) · e^{-itA/2n}`; stays at rounding
/// level for every (t, n).
pub fn symmetrization_identity_residual(
    pair: &OperatorPair,
    t: f64,
    n: u32,
) -> FormulaResult<f64> {
    let sym = product_operator(pair, &ProductScheme::TrotterSymmetrized, t, n)?;
    let plain = product_operator(pair, &ProductScheme::TrotterPlain, t, n)?;
    let half = t / (2.0 * n as f64);
    let left = pair.a().unitary_group(-half);
    let right = pair.a().unitary_group(half);
    let conjugated = &(&left * &plain) * &right;
    Ok((&sym - &conjugated).operator_norm()?)
}

/// `‖(I + S_τ(t))^{-1} - (I + tC)^{-1}‖_op` with `S_τ = (I - F(τt))/τ`
/// built from the scheme's real one-step factor; tends to 0 as τ → 0⁺.
pub fn chernoff_resolvent_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    tau: f64,
    t: f64,
) -> FormulaResult<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(FormulaError::InvalidGrid {
            reason: format!("Chernoff parameter tau must be > 0, got {tau}"),
        });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let s = chernoff_quotient(pair, scheme, tau, t)?;
    let resolvent = (&ComplexMatrix::identity(pair.dim()) + &s).inverse()?;
    let target = match scheme {
        ProductScheme::Zeno => pair
            .zeno()
            .ok_or(FormulaError::MissingProjection)?
            .resolvent_comparator(C64::new(t, 0.0))?,
        _ => pair.c().resolvent(C64::new(t, 0.0))?,
    };
    Ok((&resolvent - &target).operator_norm()?)
}

/// `Σ_j w_j ‖(I + S_τ(it_j))^{-1}h - (I + it_j C)^{-1}h‖²`, the boundary
/// resolvent convergence of the scheme along the imaginary axis.
pub fn boundary_resolvent_l2_error(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    tau: f64,
    h: &[C64],
    grid: &QuadratureGrid,
) -> FormulaResult<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(FormulaError::InvalidGrid {
            reason: format!("Chernoff parameter tau must be > 0, got {tau}"),
        });
    }
    let id = ComplexMatrix::identity(pair.dim());
    let mut total = 0.0;
    for (t, w) in grid.iter() {
        let s = chernoff_quotient_boundary(pair, scheme, tau, t)?;
        let resolvent = (&id + &s).inverse()?;
        let target = match scheme {
            ProductScheme::Zeno => pair
                .zeno()
                .ok_or(FormulaError::MissingProjection)?
                .resolvent_comparator(C64::new(0.0, t))?,
            _ => pair.c().resolvent(C64::new(0.0, t))?,
        };
        let diff = vec_sub(&resolvent.matvec(h), &target.matvec(h));
        total += w * vec_norm(&diff).powi(2);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::rng::random_unit_vector;
    use crate::spectral::random_hermitian_psd;
    use crate::formulas::make_pair;

    fn seeded_pair(dim: usize, seed: u64) -> OperatorPair {
        let a = random_hermitian_psd(dim, seed, 1.0);
        let b = random_hermitian_psd(dim, seed ^ 0xB0B, 1.0);
        make_pair(&a, &b, None).unwrap()
    }

    fn commuting_pair() -> OperatorPair {
        let a = ComplexMatrix::diagonal_real(&[0.2, 1.1, 2.0, 0.5]);
        let b = ComplexMatrix::diagonal_real(&[0.7, 0.3, 1.4, 0.9]);
        make_pair(&a, &b, None).unwrap()
    }

    #[test]
    fn commuting_pair_l2_error_vanishes() {
        let pair = commuting_pair();
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(4, 7);
        for &n in &[1u32, 2, 4] {
            let err = l2_time_error(&pair, &ProductScheme::TrotterPlain, n, &h, &grid).unwrap();
            assert!(err <= 1e-20, "n={n}: err {err}");
        }
    }

    #[test]
    fn exact_sentinel_has_zero_error() {
        let pair = seeded_pair(5, 77);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(5, 3);
        let err = l2_time_error(&pair, &ProductScheme::Exact, 4, &h, &grid).unwrap();
        assert!(err <= 1e-24, "err {err}");
    }

    #[test]
    fn l2_sweep_decreases_and_matches_denser_grids() {
        let pair = seeded_pair(8, 42);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(8, 42);
        let mut last = f64::INFINITY;
        let mut at_64 = 0.0;
        for &n in &[1u32, 4, 16, 64] {
            let err = l2_time_error(&pair, &ProductScheme::TrotterPlain, n, &h, &grid).unwrap();
            assert!(err < last, "error should decrease, n={n}: {err} vs {last}");
            last = err;
            at_64 = err;
        }
        // dense-grid cross-checks: high-resolution GL and 1024-node midpoint
        let fine = QuadratureGrid::gauss_legendre(1.0, 64, 16).unwrap();
        let dense = QuadratureGrid::midpoint(1.0, 1024).unwrap();
        let err_fine =
            l2_time_error(&pair, &ProductScheme::TrotterPlain, 64, &h, &fine).unwrap();
        let err_dense =
            l2_time_error(&pair, &ProductScheme::TrotterPlain, 64, &h, &dense).unwrap();
        assert!(
            (at_64 - err_fine).abs() <= 1e-6 * at_64.max(1e-30),
            "default {at_64} vs fine {err_fine}"
        );
        assert!(
            (at_64 - err_dense).abs() <= 1e-2 * at_64,
            "default {at_64} vs midpoint {err_dense}"
        );
    }

    #[test]
    fn measure_error_trivial_bounds() {
        let pair = seeded_pair(6, 11);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(6, 5);
        // η above 2‖h‖ can never be exceeded
        let err = measure_error(&pair, &ProductScheme::TrotterPlain, 2, &h, &grid, 2.5).unwrap();
        assert_eq!(err, 0.0);
        let commuting = commuting_pair();
        let h4 = random_unit_vector(4, 5);
        let err =
            measure_error(&commuting, &ProductScheme::TrotterPlain, 3, &h4, &grid, 1e-6).unwrap();
        assert_eq!(err, 0.0);
        // and the exceedance measure is bounded by T
        let err = measure_error(&pair, &ProductScheme::TrotterPlain, 1, &h, &grid, 1e-9).unwrap();
        assert!(err <= 1.0 + 1e-12);
    }

    #[test]
    fn measure_error_nonincreasing_in_n() {
        let pair = seeded_pair(8, 42);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(8, 42);
        let eta = 0.01;
        let mut last = f64::INFINITY;
        let mut first = 0.0;
        for &n in &[1u32, 2, 4, 8, 16, 32, 64, 128, 256] {
            let err =
                measure_error(&pair, &ProductScheme::TrotterPlain, n, &h, &grid, eta).unwrap();
            if n == 1 {
                first = err;
            }
            assert!(err <= last + 1e-15, "n={n}: {err} vs {last}");
            last = err;
        }
        assert!(first > 0.1, "eta=0.01 should be exceeded somewhere at n=1");
        assert_eq!(last, 0.0, "exceedance set empties out by n=256");
    }

    #[test]
    fn kato_symmetrized_converges() {
        let pair = seeded_pair(8, 42);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(8, 42);
        let scheme = ProductScheme::KatoSymmetrized {
            f: crate::kato::KatoFunctionHandle::Exp,
            g: crate::kato::KatoFunctionHandle::resolvent_power(1).unwrap(),
        };
        let errs: Vec<f64> = (0..=8)
            .map(|k| l2_time_error(&pair, &scheme, 1u32 << k, &h, &grid).unwrap())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
        assert!(errs[8] < 1e-3 * errs[0], "ratio {}", errs[8] / errs[0]);
    }

    #[test]
    fn real_time_symmetrized_sup_converges() {
        let pair = seeded_pair(8, 42);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(8, 42);
        let errs: Vec<f64> = (0..=8)
            .map(|k| {
                sup_time_error(&pair, &ProductScheme::RealTimeSymmetrized, 1u32 << k, &h, &grid)
                    .unwrap()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
        assert!(errs[8] < 1e-3 * errs[0]);
    }

    #[test]
    fn zeno_chernoff_uses_compressed_comparator() {
        use crate::spectral::random_projection;
        let a = random_hermitian_psd(8, 42, 1.0);
        let b = random_hermitian_psd(8, 42 ^ 0xB0B, 1.0);
        let p = random_projection(8, 4, 1);
        let pair = make_pair(&a, &b, Some(&p)).unwrap();
        let mut last = f64::INFINITY;
        for j in 0..=12 {
            let err =
                chernoff_resolvent_error(&pair, &ProductScheme::Zeno, 2.0_f64.powi(-j), 1.0)
                    .unwrap();
            assert!(err <= last * (1.0 + 1e-12), "j={j}: {err} vs {last}");
            last = err;
        }
        assert!(last <= 1e-3, "final zeno chernoff error {last}");
    }

    #[test]
    fn every_unitary_scheme_has_the_monotone_trend() {
        use crate::kato::KatoFunctionHandle;
        use crate::spectral::random_projection;
        let a = random_hermitian_psd(8, 42, 1.0);
        let b = random_hermitian_psd(8, 42 ^ 0xB0B, 1.0);
        let p = random_projection(8, 4, 1);
        let pair = make_pair(&a, &b, Some(&p)).unwrap();
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = {
            // inside ran P so the Zeno comparator applies without projection loss
            let raw = random_unit_vector(8, 42);
            let ph = p.matvec(&raw);
            let norm = crate::matrix::vec_norm(&ph);
            ph.into_iter().map(|z| z / norm).collect::<Vec<_>>()
        };
        let schemes: Vec<ProductScheme> = vec![
            ProductScheme::TrotterPlain,
            ProductScheme::TrotterSymmetrized,
            ProductScheme::KatoProduct {
                f: KatoFunctionHandle::resolvent_power(1).unwrap(),
                g: KatoFunctionHandle::resolvent_power(1).unwrap(),
            },
            ProductScheme::KatoSymmetrized {
                f: KatoFunctionHandle::Exp,
                g: KatoFunctionHandle::resolvent_power(2).unwrap(),
            },
            ProductScheme::CachiaAverage {
                f: KatoFunctionHandle::Exp,
                g: KatoFunctionHandle::Exp,
            },
            ProductScheme::LapidusResolvent { k: 2 },
            ProductScheme::Zeno,
        ];
        for scheme in &schemes {
            let errs: Vec<f64> = (0..=8)
                .map(|k| l2_time_error(&pair, scheme, 1u32 << k, &h, &grid).unwrap())
                .collect();
            for (i, w) in errs.windows(2).enumerate() {
                if (1u32 << (i + 1)) >= 4 {
                    assert!(
                        w[1] <= w[0] * (1.0 + 1e-12),
                        "{}: grew at n={}",
                        scheme.tag(),
                        1u32 << (i + 1)
                    );
                }
            }
            assert!(
                errs[8] < 1e-3 * errs[0],
                "{}: ratio {:.3e}",
                scheme.tag(),
                errs[8] / errs[0]
            );
        }
    }

    #[test]
    fn opnorm_l2_error_decreases() {
        let pair = seeded_pair(8, 42);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let errs: Vec<f64> = (0..=4)
            .map(|k| {
                opnorm_l2_time_error(&pair, &ProductScheme::TrotterPlain, 1u32 << (2 * k), &grid)
                    .unwrap()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        // operator-norm error dominates any unit-vector error
        let h = random_unit_vector(8, 42);
        let vec_err = l2_time_error(&pair, &ProductScheme::TrotterPlain, 4, &h, &grid).unwrap();
        assert!(errs[1] >= vec_err);
    }

    #[test]
    fn sup_error_real_time_only() {
        let pair = seeded_pair(4, 17);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(4, 1);
        assert!(matches!(
            sup_time_error(&pair, &ProductScheme::TrotterPlain, 2, &h, &grid),
            Err(FormulaError::SchemeMismatch { .. })
        ));
        let commuting = commuting_pair();
        let err = sup_time_error(&commuting, &ProductScheme::RealTimePlain, 2, &h, &grid).unwrap();
        assert!(err <= 1e-14, "commuting sup err {err}");
    }

    #[test]
    fn sup_error_decreases_with_n_and_t() {
        let a = ComplexMatrix::diagonal_real(&[1.0, 0.0]);
        let b = ComplexMatrix::from_fn(2, |_, _| C64::new(0.5, 0.0));
        let pair = make_pair(&a, &b, None).unwrap();
        let h = random_unit_vector(2, 9);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let mut last = f64::INFINITY;
        let mut final_err = 0.0;
        for &n in &[1u32, 4, 16, 64, 256] {
            let err = sup_time_error(&pair, &ProductScheme::RealTimePlain, n, &h, &grid).unwrap();
            assert!(err < last, "n={n}: {err} vs {last}");
            last = err;
            final_err = err;
        }
        assert!(final_err < 1e-3, "sup error at n=256: {final_err}");
        // smaller T: sup over a smaller set cannot grow
        let small = QuadratureGrid::default_for(0.5).unwrap();
        let err_small =
            sup_time_error(&pair, &ProductScheme::RealTimePlain, 16, &h, &small).unwrap();
        let err_full =
            sup_time_error(&pair, &ProductScheme::RealTimePlain, 16, &h, &grid).unwrap();
        assert!(err_small <= err_full + 1e-15);
    }

    #[test]
    fn symmetrization_identity_exact() {
        let commuting = commuting_pair();
        assert!(symmetrization_identity_residual(&commuting, 1.0, 1).unwrap() <= 1e-14);
        let pair = seeded_pair(8, 2025);
        for &(t, n) in &[(1.0, 1u32), (2.5, 37), (9.0, 512)] {
            let r = symmetrization_identity_residual(&pair, t, n).unwrap();
            assert!(r <= 1e-10, "t={t} n={n}: residual {r}");
        }
    }

    #[test]
    fn chernoff_commuting_matches_scalar_closed_form() {
        // diagonal pair: everything is scalar per eigenvalue:
        // (1 + (1 - e^{-τt(a+b)})/τ)^{-1} vs (1 + t(a+b))^{-1}
        let a_vals = [0.2, 1.1, 2.0, 0.5];
        let b_vals = [0.7, 0.3, 1.4, 0.9];
        let pair = commuting_pair();
        let t = 1.0;
        let tau = 1e-4;
        let got = chernoff_resolvent_error(&pair, &ProductScheme::TrotterPlain, tau, t).unwrap();
        let oracle = a_vals
            .iter()
            .zip(b_vals.iter())
            .map(|(&av, &bv)| {
                let c = av + bv;
                let quotient = (1.0 - (-tau * t * c).exp()) / tau;
                ((1.0 + quotient).recip() - (1.0 + t * c).recip()).abs()
            })
            .fold(0.0_f64, f64::max);
        assert!(
            (got - oracle).abs() <= 1e-10,
            "chernoff {got} vs scalar oracle {oracle}"
        );
        assert!(got <= 1e-3, "tau=1e-4 error should be < 1e-3, got {got}");
    }

    #[test]
    fn chernoff_decreases_along_tau() {
        let pair = seeded_pair(8, 314);
        let mut last = f64::INFINITY;
        for j in 0..=16 {
            let tau = 2.0_f64.powi(-j);
            let err =
                chernoff_resolvent_error(&pair, &ProductScheme::TrotterSymmetrized, tau, 1.0)
                    .unwrap();
            assert!(err <= last + 1e-14, "j={j}: {err} vs {last}");
            last = err;
        }
        assert_eq!(
            chernoff_resolvent_error(&pair, &ProductScheme::TrotterPlain, 0.5, 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn boundary_resolvent_error_decreases() {
        let pair = seeded_pair(6, 999);
        let grid = QuadratureGrid::default_for(1.0).unwrap();
        let h = random_unit_vector(6, 12);
        let mut last = f64::INFINITY;
        for j in [0, 2, 4, 6, 8] {
            let tau = 2.0_f64.powi(-j);
            let err =
                boundary_resolvent_l2_error(&pair, &ProductScheme::TrotterPlain, tau, &h, &grid)
                    .unwrap();
            assert!(err < last, "j={j}: {err} vs {last}");
            last = err;
        }
        // zero vector gives zero error
        let zero = vec![C64::new(0.0, 0.0); 6];
        let err =
            boundary_resolvent_l2_error(&pair, &ProductScheme::TrotterPlain, 0.25, &zero, &grid)
                .unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn boundary_resolvent_commuting_scalar_oracle() {
        // diagonal pair at fixed t: R_τ(it) diagonal with entries
        // (1 + (1 - e^{-iτt(a+b)})/τ)^{-1}
        let pair = commuting_pair();
        let h = random_unit_vector(4, 4);
        let grid = QuadratureGrid::gauss_legendre(1.0, 1, 4).unwrap();
        let tau = 1e-6;
        let got =
            boundary_resolvent_l2_error(&pair, &ProductScheme::TrotterPlain, tau, &h, &grid)
                .unwrap();
        // scalar oracle over the same nodes
        let a_vals = [0.2, 1.1, 2.0, 0.5];
        let b_vals = [0.7, 0.3, 1.4, 0.9];
        let mut oracle = 0.0;
        for (t, w) in grid.iter() {
            let mut norm_sq = 0.0;
            for i in 0..4 {
                let c = a_vals[i] + b_vals[i];
                let f = (C64::new(0.0, -tau * t * c)).exp();
                let r = (C64::new(1.0, 0.0) + (C64::new(1.0, 0.0) - f) / tau).inv();
                let target = (C64::new(1.0, t * c)).inv();
                norm_sq += ((r - target) * h[i]).norm_sqr();
            }
            oracle += w * norm_sq;
        }
        // matched absolutely; the (I-F)/τ cancellation puts a rounding
        // noise floor well below this
        assert!(
            (got - oracle).abs() <= 1e-10,
            "boundary {got} vs oracle {oracle}"
        );
        assert!(got <= 1e-8, "tau=1e-6 commuting boundary error {got}");
    }
}
