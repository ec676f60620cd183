#pragma once

// Two-mode Gaussian description of the evolved state: covariance matrix,
// reduced symplectic eigenvalues, entropies and logarithmic negativity.

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "pdcsim/core.hpp"

namespace pdcsim {

/// Tolerance band around the nu = 1/2 physicality/separability boundary.
inline constexpr double kSymplecticBand = 1e-9;

/// Quadrature indices of CovarianceMatrix4.
enum Quadrature : int { X1 = 0, P1 = 1, X2 = 2, P2 = 3 };

/**
 * Symmetrized central second moments in ordering (x1, p1, x2, p2), vacuum
 * variance 1/2. The 2x2 block at rows (x1, p1) and columns (x2, p2) holds the
 * inter-mode correlations.
 */
struct CovarianceMatrix4 {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();

    double operator()(int i, int j) const { return m(i, j); }

    Eigen::Matrix2d block1() const { return m.block<2, 2>(0, 0); }
    Eigen::Matrix2d block2() const { return m.block<2, 2>(2, 2); }
    Eigen::Matrix2d gamma() const { return m.block<2, 2>(0, 2); }

    double asymmetry() const { return (m - m.transpose()).cwiseAbs().maxCoeff(); }
};

struct EntanglementReport {
    double nu1 = 0.5;
    double nu2 = 0.5;
    double entropy1 = 0.0;
    double entropy2 = 0.0;
    double nu_tilde_minus = 0.5;
    double log_negativity = 0.0;

    bool operator==(const EntanglementReport&) const = default;
};

namespace gaussian {

/// Raised when a covariance matrix violates the uncertainty principle.
class UnphysicalMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Covariance matrix at time tau from the exact second moments of the
/// Bogoliubov-evolved operators. Coherent inputs give the vacuum matrix.
CovarianceMatrix4 assemble_cm(const ModelParams& params, const InitialState& init);

/// <a1 a2> at time tau (central); the only nonzero inter-mode correlator.
cplx pair_correlator(const ModelParams& params, const InitialState& init);

/**
 * Literal transcription of the published closed-form CM entries for a
 * thermal input (sigma_jj, sigma_13, sigma_14 with their printed phase
 * arguments, sigma_24 = sigma_13, sigma_23 = sigma_14, sigma_12 = sigma_34 = 0)
 * placed in (x1, p1, x2, p2) ordering, compared against assemble_cm.
 */
struct AppendixCrosscheck {
    CovarianceMatrix4 literal;
    /// Literal matrix with sigma_24 sign-flipped to the i-bearing p convention.
    CovarianceMatrix4 sign_mapped;
    /// max |sign_mapped - assemble_cm|, elementwise.
    double max_abs_discrepancy = 0.0;
    /// max |literal - assemble_cm| before the sign mapping.
    double raw_max_abs_discrepancy = 0.0;
    /// Difference of the correlation magnitudes sigma_13^2 + sigma_14^2 - |c|^2.
    double magnitude_discrepancy = 0.0;
    /// |sigma_13| and |sigma_14| errors separately (sign-mapped vs assembled).
    double sigma13_error = 0.0;
    double sigma14_error = 0.0;
};

AppendixCrosscheck appendix_cm_crosscheck(const ModelParams& params, double n10, double n20);

double determinant(const CovarianceMatrix4& cm);

/// Symplectic eigenvalues (nu_minus, nu_plus) of the full matrix.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix4& cm);

/// Smallest symplectic eigenvalue of the matrix itself is >= 1/2 - band.
bool is_physical(const CovarianceMatrix4& cm);

/// nu_j = sqrt(det sigma_j). Throws UnphysicalMatrix if a block determinant
/// falls below 1/4 - band.
std::pair<double, double> reduced_symplectic_eigenvalues(const CovarianceMatrix4& cm);

/// f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2) in nats.
/// Throws DomainError for x < 1/2 - band.
double entropy_f(double x);

std::pair<double, double> entanglement_entropy(const CovarianceMatrix4& cm);

/// Smallest symplectic eigenvalue of the partially transposed matrix.
double ppt_min_symplectic(const CovarianceMatrix4& cm);

/// max(0, -ln(2 nu_tilde_minus)).
double log_negativity(const CovarianceMatrix4& cm);

EntanglementReport full_report(const ModelParams& params, const InitialState& init);
EntanglementReport report_from_cm(const CovarianceMatrix4& cm);

/// Symplectic eigenvalue of one mode per the published pure-input closed form
///   nu = 1/2 sqrt(1 + 4 (C^2 - y^2)/x^2 * S^2/x^2 * (2 n10 + 1)).
double published_reduced_eigenvalue(const ModelParams& params, double n10);

}  // namespace gaussian
}  // namespace pdcsim
