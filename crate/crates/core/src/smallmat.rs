//! Fixed-size dense linear algebra: Lyapunov steady-state solve, stability
//! tests and the symplectic spectrum.
//!
//! Two independent stability routes are kept on purpose: the spectral
//! abscissa from a QR-type eigenvalue iteration, and the Routh–Hurwitz test
//! on the characteristic polynomial. Each is the other's oracle.

use nalgebra::{SMatrix, SVector, Schur};

use crate::{Error, Mat6, Result};

/// Spectral-abscissa window treated as marginal stability.
pub const STABILITY_MARGIN: f64 = 1e-9;

const MAX_EIGEN_ITERATIONS: usize = 10_000;

type Mat36 = SMatrix<f64, 36, 36>;
type Vec36 = SVector<f64, 36>;

/// Symmetric stationary (or instantaneous) covariance of the six
/// quadratures, vacuum variance 1/2 per quadrature.
///
/// Stored symmetrized; construction rejects inputs whose asymmetry exceeds
/// the numerical-noise budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance {
    matrix: Mat6,
}

impl Covariance {
    /// Wraps a matrix after symmetrizing it, `(V + Vᵀ)/2`.
    pub fn new(matrix: Mat6) -> Result<Self> {
        let asymmetry = (matrix - matrix.transpose()).abs().max();
        if asymmetry > 1e-9 {
            return Err(Error::NotSymmetric {
                context: "covariance",
                asymmetry,
            });
        }
        Ok(Self {
            matrix: (matrix + matrix.transpose()) * 0.5,
        })
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.matrix
    }

    /// Symplectic spectrum of the state; see [`symplectic_eigenvalues`].
    pub fn symplectic_eigenvalues(&self) -> Result<[f64; 3]> {
        symplectic_eigenvalues(self)
    }
}

/// Stability diagnostics of a drift matrix by both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// Largest real part over the eigenvalues.
    pub spectral_abscissa: f64,
    /// Routh–Hurwitz verdict (`true` only for a strictly stable polynomial).
    pub hurwitz_verdict: bool,
    /// Monic characteristic polynomial, coefficients of λ⁰..λ⁶.
    pub char_poly_coeffs: [f64; 7],
}

/// Outcome of the Routh–Hurwitz test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouthVerdict {
    Stable,
    Unstable,
    /// A zero pivot appeared in the first Routh column: roots on the
    /// imaginary axis (or numerically indistinguishable from it).
    Marginal,
}

/// Solves `A V + V Aᵀ + D = 0` for the stationary covariance.
///
/// The equation is vectorized as `(I⊗A + A⊗I) vec(V) = −vec(D)` and solved
/// by dense LU; the result is symmetrized and its residual checked against
/// `10⁻¹⁰·max(1, ‖D‖_max)`.
pub fn lyapunov_solve(a: &Mat6, d: &Mat6) -> Result<Covariance> {
    let alpha = spectral_abscissa(a)?;
    if alpha > STABILITY_MARGIN {
        return Err(Error::Unstable {
            spectral_abscissa: alpha,
        });
    }
    if alpha >= -STABILITY_MARGIN {
        return Err(Error::MarginallyStable {
            spectral_abscissa: alpha,
        });
    }

    // vec() is column-major, so vec(AV) = (I⊗A)vec(V) and
    // vec(VAᵀ) = (A⊗I)vec(V).
    let identity = Mat6::identity();
    let system: Mat36 = identity.kronecker(a) + a.kronecker(&identity);
    let rhs = -Vec36::from_column_slice(d.as_slice());

    let solution = nalgebra::linalg::LU::new(system)
        .solve(&rhs)
        // A singular vectorized system means an eigenvalue pair of A sums
        // to zero, i.e. marginal stability that the abscissa test missed.
        .ok_or(Error::MarginallyStable {
            spectral_abscissa: alpha,
        })?;

    let v = Mat6::from_column_slice(solution.as_slice());
    let v = (v + v.transpose()) * 0.5;

    let residual = (a * v + v * a.transpose() + d).abs().max();
    let bound = 1e-10 * d.abs().max().max(1.0);
    if residual > bound {
        return Err(Error::LyapunovResidual { residual, bound });
    }
    Covariance::new(v)
}

/// Largest real part over the eigenvalues of `a`; negative means strict
/// stability.
pub fn spectral_abscissa(a: &Mat6) -> Result<f64> {
    let schur = Schur::try_new(*a, f64::EPSILON, MAX_EIGEN_ITERATIONS).ok_or(
        Error::EigenvaluesNotConverged {
            max_iterations: MAX_EIGEN_ITERATIONS,
        },
    )?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|lambda| lambda.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Monic characteristic polynomial of `a` by the Faddeev–LeVerrier
/// recursion; returns the coefficients of λ⁰..λ⁶.
pub fn char_poly(a: &Mat6) -> [f64; 7] {
    let mut coeffs = [0.0; 7];
    coeffs[6] = 1.0;
    let mut m = Mat6::identity();
    for k in 1..=6 {
        let am = a * m;
        let c = -am.trace() / k as f64;
        coeffs[6 - k] = c;
        m = am + Mat6::identity() * c;
    }
    coeffs
}

/// Routh–Hurwitz test for a monic degree-6 polynomial with coefficients of
/// λ⁰..λ⁶.
///
/// Builds the Routh array; a strict sign change in the first column means a
/// right-half-plane root, a zero pivot is reported as [`RouthVerdict::Marginal`]
/// rather than perturbed away.
pub fn routh_hurwitz(coeffs: &[f64; 7]) -> RouthVerdict {
    // Rows are indexed by descending power; row 0 holds λ⁶, λ⁴, λ², λ⁰.
    let mut prev = [coeffs[6], coeffs[4], coeffs[2], coeffs[0]];
    let mut curr = [coeffs[5], coeffs[3], coeffs[1], 0.0];
    let mut first_column = vec![prev[0], curr[0]];
    for _ in 0..5 {
        let pivot = curr[0];
        if pivot == 0.0 {
            return RouthVerdict::Marginal;
        }
        let mut next = [0.0; 4];
        for i in 0..3 {
            next[i] = (pivot * prev[i + 1] - prev[0] * curr[i + 1]) / pivot;
        }
        first_column.push(next[0]);
        prev = curr;
        curr = next;
    }
    // 7 first-column entries for degree 6; the last iteration pushed the
    // λ⁰ row whose pivot must also be nonzero.
    let last = first_column[6];
    if last == 0.0 {
        return RouthVerdict::Marginal;
    }
    let sign = first_column[0].signum();
    if first_column.iter().all(|&c| c.signum() == sign && c != 0.0) {
        RouthVerdict::Stable
    } else {
        RouthVerdict::Unstable
    }
}

/// `true` iff the Routh–Hurwitz verdict is strictly stable.
pub fn routh_hurwitz_stable(coeffs: &[f64; 7]) -> bool {
    routh_hurwitz(coeffs) == RouthVerdict::Stable
}

/// Runs both stability routes on a drift matrix.
pub fn stability_report(a: &Mat6) -> Result<StabilityReport> {
    let spectral_abscissa = spectral_abscissa(a)?;
    let char_poly_coeffs = char_poly(a);
    Ok(StabilityReport {
        spectral_abscissa,
        hurwitz_verdict: routh_hurwitz_stable(&char_poly_coeffs),
        char_poly_coeffs,
    })
}

/// Symplectic form `Ω = ⊕₃ [[0, 1], [−1, 0]]` over the quadrature ordering.
pub fn symplectic_form() -> Mat6 {
    let mut omega = Mat6::zeros();
    for mode in 0..3 {
        omega[(2 * mode, 2 * mode + 1)] = 1.0;
        omega[(2 * mode + 1, 2 * mode)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues `ν₁ ≥ ν₂ ≥ ν₃ > 0` of a positive-definite
/// covariance: the moduli of the eigenvalues of `Ω V`, one per conjugate
/// pair. Physical states have every `ν_k ≥ 1/2`.
pub fn symplectic_eigenvalues(v: &Covariance) -> Result<[f64; 3]> {
    if nalgebra::linalg::Cholesky::new(*v.matrix()).is_none() {
        return Err(Error::NotPositiveDefinite {
            context: "covariance",
        });
    }
    let schur = Schur::try_new(
        symplectic_form() * v.matrix(),
        f64::EPSILON,
        MAX_EIGEN_ITERATIONS,
    )
    .ok_or(Error::EigenvaluesNotConverged {
        max_iterations: MAX_EIGEN_ITERATIONS,
    })?;
    let mut moduli: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .map(|lambda| lambda.norm())
        .collect();
    // Eigenvalues of ΩV come in ±iν pairs; keep one representative of each.
    moduli.sort_by(|x, y| y.total_cmp(x));
    Ok([moduli[0], moduli[2], moduli[4]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_diffusion, build_drift, DriftConvention, SystemParams};
    use crate::Mat2;

    fn max_abs_diff(a: &Mat6, b: &Mat6) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn lyapunov_scalar_balance() {
        // A = −γI, D = 2γcI  =>  V = cI
        let gamma = 0.7;
        let c = 3.25;
        let a = Mat6::identity() * -gamma;
        let d = Mat6::identity() * (2.0 * gamma * c);
        let v = lyapunov_solve(&a, &d).unwrap();
        assert!(max_abs_diff(v.matrix(), &(Mat6::identity() * c)) < 1e-12);
    }

    /// Analytic solution of the 2×2 Lyapunov equation for a damped rotation
    /// block A = [[−γ, Ω], [−Ω, −γ]] with D = d·I: V = d/(2γ)·I.
    #[test]
    fn lyapunov_decoupled_phonon_consistent() {
        let (gamma_b, omega_b, n_b) = (0.01, 1.0, 10.0);
        let p = SystemParams {
            g_am: 0.0,
            g_mb_eff: 0.0,
            gamma_b,
            omega_b,
            n_b,
            ..SystemParams::default()
        };
        let v = lyapunov_solve(&build_drift(&p), &build_diffusion(&p)).unwrap();
        let thermal = (2.0 * n_b + 1.0) / 2.0;
        assert!((v.matrix()[(4, 4)] - thermal).abs() < 1e-10);
        assert!((v.matrix()[(5, 5)] - thermal).abs() < 1e-10);
        assert!(v.matrix()[(4, 5)].abs() < 1e-12);
    }

    /// For A = [[0, Ω], [−Ω, −γ]] (no damping on the position row) the
    /// analytic solution is no longer thermal:
    /// c = −γ(2N+1)/(2Ω), v₂ = 2N+1, v₁ = v₂ + γ²(2N+1)/(2Ω²)·... solved
    /// from Ω(v₂ − v₁) = γc.
    #[test]
    fn lyapunov_decoupled_phonon_time_even() {
        let (gamma_b, omega_b, n_b) = (0.01, 1.0, 10.0);
        let p = SystemParams {
            g_am: 0.0,
            g_mb_eff: 0.0,
            gamma_b,
            omega_b,
            n_b,
            drift_convention: DriftConvention::TimeEvenCoupling,
            ..SystemParams::default()
        };
        let v = lyapunov_solve(&build_drift(&p), &build_diffusion(&p)).unwrap();
        let block: Mat2 = v.matrix().fixed_view::<2, 2>(4, 4).into();
        let expected = Mat2::new(21.00105, -0.105, -0.105, 21.0);
        assert!((block - expected).abs().max() < 1e-10, "block = {block}");
    }

    #[test]
    fn lyapunov_rejects_unstable_drift() {
        let mut a = Mat6::identity() * -1.0;
        a[(0, 0)] = 0.5;
        let d = Mat6::identity();
        assert!(matches!(
            lyapunov_solve(&a, &d),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn lyapunov_rejects_marginal_drift() {
        let mut a = Mat6::identity() * -1.0;
        a[(0, 0)] = 0.0;
        a[(0, 1)] = 1.0;
        a[(1, 0)] = -1.0;
        a[(1, 1)] = 0.0;
        let d = Mat6::identity();
        assert!(matches!(
            lyapunov_solve(&a, &d),
            Err(Error::MarginallyStable { .. })
        ));
    }

    #[test]
    fn lyapunov_superposition() {
        let p = SystemParams::default();
        let a = build_drift(&p);
        let d1 = build_diffusion(&p);
        let d2 = Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([
            0.3, 0.3, 0.05, 0.05, 1.0, 1.0,
        ]));
        let v1 = lyapunov_solve(&a, &d1).unwrap();
        let v2 = lyapunov_solve(&a, &d2).unwrap();
        let v12 = lyapunov_solve(&a, &(d1 + d2)).unwrap();
        let sum = v1.matrix() + v2.matrix();
        assert!(max_abs_diff(v12.matrix(), &sum) < 1e-9);
    }

    #[test]
    fn abscissa_of_diagonal() {
        let a = Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([
            -1.0, -2.0, -3.0, -4.0, -5.0, -6.0,
        ]));
        assert!((spectral_abscissa(&a).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn abscissa_of_rotation_block() {
        // Pure rotation ⊕ −I₄ has an imaginary pair: abscissa 0.
        let mut a = Mat6::identity() * -1.0;
        a[(0, 0)] = 0.0;
        a[(0, 1)] = 1.0;
        a[(1, 0)] = -1.0;
        a[(1, 1)] = 0.0;
        assert!(spectral_abscissa(&a).unwrap().abs() < 1e-12);
    }

    #[test]
    fn abscissa_golden_fig2a() {
        // Frozen from an independent eigenvalue computation, cross-checked
        // against high-precision characteristic-polynomial root finding.
        let a = build_drift(&SystemParams::default());
        let alpha = spectral_abscissa(&a).unwrap();
        assert!(
            (alpha - (-0.009705017626596878)).abs() < 1e-9,
            "alpha = {alpha}"
        );
    }

    #[test]
    fn char_poly_of_zero() {
        let coeffs = char_poly(&Mat6::zeros());
        assert_eq!(coeffs, [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn char_poly_binomial() {
        let coeffs = char_poly(&(Mat6::identity() * -1.0));
        let expected = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];
        for (c, e) in coeffs.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12);
        }
    }

    #[test]
    fn char_poly_trace_identity() {
        let a = build_drift(&SystemParams::default());
        let coeffs = char_poly(&a);
        assert_eq!(coeffs[6], 1.0);
        assert!((coeffs[5] + a.trace()).abs() < 1e-14);
    }

    /// Interpolation oracle: the monic characteristic polynomial of an
    /// integer matrix is recovered exactly from det(λI − A) sampled at seven
    /// integer nodes (cofactor-expansion determinant, exact in f64 for small
    /// integers).
    #[test]
    fn char_poly_matches_interpolated_determinant() {
        fn det_cofactor(m: &[Vec<f64>]) -> f64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut det = 0.0;
            for j in 0..n {
                if m[0][j] == 0.0 {
                    continue;
                }
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * m[0][j] * det_cofactor(&minor);
            }
            det
        }

        // Small integer matrix (entries in [-2, 2]) from a fixed pattern.
        let entries: [[f64; 6]; 6] = [
            [1.0, -2.0, 0.0, 1.0, 2.0, -1.0],
            [0.0, 2.0, 1.0, -1.0, 0.0, 2.0],
            [-1.0, 1.0, -2.0, 0.0, 1.0, 0.0],
            [2.0, 0.0, 1.0, 1.0, -1.0, -2.0],
            [1.0, -1.0, 2.0, 0.0, -2.0, 1.0],
            [0.0, 2.0, -1.0, 1.0, 0.0, -1.0],
        ];
        let a = Mat6::from_fn(|i, j| entries[i][j]);

        // Sample p(λ) = det(λI − A) at λ = 0..6 and solve the Vandermonde
        // system by Lagrange interpolation evaluated on the monomial basis.
        let nodes: Vec<f64> = (0..7).map(|k| k as f64).collect();
        let samples: Vec<f64> = nodes
            .iter()
            .map(|&lambda| {
                let m: Vec<Vec<f64>> = (0..6)
                    .map(|i| {
                        (0..6)
                            .map(|j| {
                                let diag = if i == j { lambda } else { 0.0 };
                                diag - a[(i, j)]
                            })
                            .collect()
                    })
                    .collect();
                det_cofactor(&m)
            })
            .collect();

        // Newton divided differences, then expand the Newton form into
        // monomial coefficients: coeffs <- coeffs·(x − node_k) + dd_k.
        let mut dd = samples.clone();
        for level in 1..7 {
            for i in (level..7).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
            }
        }
        let mut coeffs = vec![0.0; 7];
        coeffs[0] = dd[6];
        for k in (0..6).rev() {
            let mut next = vec![0.0; 7];
            for i in 0..6 {
                next[i + 1] += coeffs[i];
            }
            for i in 0..7 {
                next[i] -= nodes[k] * coeffs[i];
            }
            next[0] += dd[k];
            coeffs = next;
        }

        let fl = char_poly(&a);
        for k in 0..7 {
            assert!(
                (fl[k] - coeffs[k]).abs() < 1e-6 * coeffs[k].abs().max(1.0),
                "coefficient {k}: {} vs {}",
                fl[k],
                coeffs[k]
            );
        }
    }

    #[test]
    fn char_poly_golden_fig2a() {
        // Frozen from an independent high-precision Faddeev–LeVerrier run.
        let coeffs = char_poly(&build_drift(&SystemParams::default()));
        let expected = [0.36243625, 2.465496, 4.862146, 3.74932, 5.4841, 1.22, 1.0];
        for (c, e) in coeffs.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12 * e.abs().max(1.0), "{c} vs {e}");
        }
    }

    #[test]
    fn routh_stable_binomial() {
        let coeffs = char_poly(&(Mat6::identity() * -1.0));
        assert_eq!(routh_hurwitz(&coeffs), RouthVerdict::Stable);
    }

    #[test]
    fn routh_detects_right_half_plane_root() {
        // (λ − 1)(λ + 1)⁵ via the companion diagonal matrix.
        let a = Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([
            1.0, -1.0, -1.0, -1.0, -1.0, -1.0,
        ]));
        assert_eq!(routh_hurwitz(&char_poly(&a)), RouthVerdict::Unstable);
    }

    #[test]
    fn routh_marginal_on_zero_pivot() {
        // λ⁶: all pivots below the first vanish.
        assert_eq!(
            routh_hurwitz(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            RouthVerdict::Marginal
        );
    }

    #[test]
    fn routh_agrees_with_abscissa_on_sweep_point() {
        let p = SystemParams {
            g_am: 2.0,
            gamma_a: 0.1,
            n_b: 100.0,
            ..SystemParams::default()
        };
        let report = stability_report(&build_drift(&p)).unwrap();
        assert_eq!(report.hurwitz_verdict, report.spectral_abscissa < 0.0);
        assert!(report.hurwitz_verdict);
    }

    #[test]
    fn symplectic_spectrum_of_vacuum() {
        let v = Covariance::new(Mat6::identity() * 0.5).unwrap();
        let nu = symplectic_eigenvalues(&v).unwrap();
        for x in nu {
            assert!((x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn symplectic_spectrum_of_thermal_phonon() {
        let v = Covariance::new(Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([
            0.5, 0.5, 0.5, 0.5, 10.5, 10.5,
        ])))
        .unwrap();
        let nu = symplectic_eigenvalues(&v).unwrap();
        assert!((nu[0] - 10.5).abs() < 1e-12);
        assert!((nu[1] - 0.5).abs() < 1e-12);
        assert!((nu[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn symplectic_spectrum_golden_fig2a() {
        let p = SystemParams::default();
        let v = lyapunov_solve(&build_drift(&p), &build_diffusion(&p)).unwrap();
        let nu = symplectic_eigenvalues(&v).unwrap();
        let expected = [10.841276939112074, 0.5009380359370875, 0.5003930993943837];
        for (x, e) in nu.iter().zip(expected) {
            assert!((x - e).abs() < 1e-8, "{x} vs {e}");
        }
        for x in nu {
            assert!(x >= 0.5 - 1e-9);
        }
    }

    #[test]
    fn symplectic_rejects_indefinite_matrix() {
        let v = Covariance::new(Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([
            0.5, 0.5, 0.5, -0.5, 0.5, 0.5,
        ])))
        .unwrap();
        assert!(matches!(
            symplectic_eigenvalues(&v),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn covariance_rejects_asymmetric_input() {
        let mut m = Mat6::identity();
        m[(0, 1)] = 1.0;
        assert!(matches!(
            Covariance::new(m),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
