#pragma once

// Brute-force reference: exact evolution of the rotating-frame Hamiltonian in
// a truncated two-mode Fock space, with every observable measured directly
// from the density matrix.
//
// The generator conserves n1 - n2, so it is stored as one real symmetric
// tridiagonal block per sector. States are stored either as a pure amplitude
// matrix psi(n1, n2) or, for mixed inputs that commute with n1 - n2, as one
// dense block per sector. Both are exact representations of the full
// nmax^2 x nmax^2 density matrix.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

#include "pdcsim/core.hpp"
#include "pdcsim/gaussian.hpp"

namespace pdcsim::fock {

inline constexpr int kDefaultNmax = 40;
/// Upper bound on nmax^2.
inline constexpr long kDefaultDimensionCap = 65536;
/// Dense materialization (to_dense) is limited to this many basis states.
inline constexpr long kDenseDimensionCap = 4096;
/// Largest truncated population tolerated when preparing an initial state.
inline constexpr double kMaxCutMass = 1e-6;
/// Edge population above which a result is reported as under-truncated.
inline constexpr double kTailThreshold = 1e-8;

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EvolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-mode truncation: basis |n1>|n2> with 0 <= n_j < nmax.
class FockSpec {
public:
    explicit FockSpec(int nmax = kDefaultNmax, long cap = kDefaultDimensionCap);

    int nmax() const { return nmax_; }
    long cap() const { return cap_; }
    long dimension() const { return static_cast<long>(nmax_) * nmax_; }
    /// Flat basis index n1 * nmax + n2.
    long index(int n1, int n2) const { return static_cast<long>(n1) * nmax_ + n2; }

    int sector_count() const { return 2 * nmax_ - 1; }
    /// Sector slot s holds n1 - n2 = s - (nmax - 1).
    int sector_difference(int s) const { return s - (nmax_ - 1); }
    int sector_slot(int n1, int n2) const { return n1 - n2 + nmax_ - 1; }
    int sector_size(int s) const;
    /// Position of |n1, n2> inside its sector: min(n1, n2).
    static int sector_position(int n1, int n2) { return n1 < n2 ? n1 : n2; }
    int sector_n1(int s, int p) const;
    int sector_n2(int s, int p) const;

private:
    int nmax_;
    long cap_;
};

/**
 * H / (hbar g) in the frame rotating at w_bar + y:
 *
 *   H = (d - y) n1 + (-d - y) n2 - (b1^dag b2^dag + b1 b2),   d = (w1 - w2) / 2,
 *
 * which gives db1/dtau = -i (d - y) b1 + i b2^dag and
 * db2^dag/dtau = -i b1 - i (d + y) b2^dag.
 */
class Hamiltonian {
public:
    Hamiltonian(const ModelParams& params, const FockSpec& spec);

    const FockSpec& spec() const { return spec_; }
    /// Diagonal of the tridiagonal block for sector slot s.
    const Eigen::VectorXd& diagonal(int s) const { return diag_[s]; }
    /// Sub-diagonal (pair creation/annihilation amplitudes) of sector slot s.
    const Eigen::VectorXd& offdiagonal(int s) const { return offdiag_[s]; }

    /// Full matrix in the flat basis; throws CapExceeded above kDenseDimensionCap.
    Eigen::MatrixXcd to_dense() const;

private:
    FockSpec spec_;
    std::vector<Eigen::VectorXd> diag_;
    std::vector<Eigen::VectorXd> offdiag_;
};

Hamiltonian build_hamiltonian(const ModelParams& params, const FockSpec& spec);

class DensityMatrix {
public:
    /// Pure state with amplitudes psi(n1, n2); must be normalized by the caller.
    static DensityMatrix pure(const FockSpec& spec, Eigen::MatrixXcd amplitudes,
                              double cut_mass = 0.0);
    /// Mixed state commuting with n1 - n2; one Hermitian block per sector slot.
    static DensityMatrix sector_diagonal(const FockSpec& spec, std::vector<Eigen::MatrixXcd> blocks,
                                         double cut_mass = 0.0);

    const FockSpec& spec() const { return spec_; }
    int nmax() const { return spec_.nmax(); }
    bool is_pure() const { return amplitudes_.has_value(); }
    const Eigen::MatrixXcd& amplitudes() const { return *amplitudes_; }
    const Eigen::MatrixXcd& block(int s) const { return blocks_[s]; }

    /// Probability removed when the initial state was truncated.
    double cut_mass() const { return cut_mass_; }

    /// <n1, n2| rho |m1, m2>.
    cplx element(int n1, int n2, int m1, int m2) const;
    double population(int n1, int n2) const { return element(n1, n2, n1, n2).real(); }

    double trace() const;
    /// Population with n1 = nmax - 1 or n2 = nmax - 1.
    double tail_mass() const;
    /// Largest |rho - rho^dag| entry.
    double hermiticity_residual() const;

    /// Full matrix in the flat basis; throws CapExceeded above kDenseDimensionCap.
    Eigen::MatrixXcd to_dense() const;

    /// Tr(rho b1^dag^c1 b1^a1 b2^dag^c2 b2^a2) with truncated ladder operators.
    cplx expect(int c1, int a1, int c2, int a2) const;

private:
    DensityMatrix(const FockSpec& spec, double cut_mass) : spec_(spec), cut_mass_(cut_mass) {}

    FockSpec spec_;
    double cut_mass_;
    std::optional<Eigen::MatrixXcd> amplitudes_;
    std::vector<Eigen::MatrixXcd> blocks_;

    friend DensityMatrix evolve(const DensityMatrix&, const Hamiltonian&, double);
};

/// Truncated, renormalized product initial state. Throws TruncationError when
/// either mode loses more than kMaxCutMass.
DensityMatrix initial_density(const InitialState& init, const FockSpec& spec);

/// Geometric thermal weights n^k / (1 + n)^(k + 1) for k < nmax, before
/// renormalization, and the removed tail (n / (1 + n))^nmax.
std::pair<Eigen::VectorXd, double> thermal_weights(double nbar, int nmax);

/// rho(tau) = U rho U^dag with U = exp(-i H tau) from the eigendecomposition
/// of each sector block. Throws EvolutionError if a block propagator is not
/// unitary to 1e-9.
DensityMatrix evolve(const DensityMatrix& rho0, const Hamiltonian& hamiltonian, double tau);

struct Measurement {
    double n1 = 0.0;
    double n2 = 0.0;
    MeanVector mean{};
    CovarianceMatrix4 cm;
    double tail = 0.0;
};

/// Photon numbers, quadrature means and covariance matrix in the lab frame.
/// Moments are taken in the rotating frame and rotated back by the angle
/// (w_bar + y) tau on each mode.
Measurement measure(const DensityMatrix& rho, const ModelParams& params);

/// Reduced density matrix of mode 1 or 2.
Eigen::MatrixXcd reduced_density(const DensityMatrix& rho, int mode);

/// Von Neumann entropy (nats) of the reduced state of mode 1 or 2.
double direct_entropy(const DensityMatrix& rho, int mode);

/// Trace norm of the partial transpose over mode 2.
double partial_transpose_trace_norm(const DensityMatrix& rho);

/// ln || rho^{T2} ||_1, clamped at 0.
double direct_log_negativity(const DensityMatrix& rho);

/// Largest |third central moment| of the rotated quadratures
/// (e^{-i phi} b_j + e^{i phi} b_j^dag) / sqrt(2) over `angles` angles per mode.
double max_third_central_moment(const DensityMatrix& rho, int angles = 8);

/// One complete oracle run.
struct OracleResult {
    Measurement measurement;
    double entropy1 = 0.0;
    double entropy2 = 0.0;
    double log_negativity = 0.0;
    double cut_mass = 0.0;
    double trace = 1.0;
};

OracleResult evaluate(const ModelParams& params, const InitialState& init, const FockSpec& spec);

/// Smallest nmax = start + k * step (k >= 0) at which the evolved state has
/// tail mass <= tail_threshold. Throws CapExceeded if the cap is hit first.
FockSpec converged_spec(const ModelParams& params, const InitialState& init,
                        double tail_threshold = kTailThreshold, int start = kDefaultNmax,
                        int step = 20, long cap = kDefaultDimensionCap);

/// Log negativity only; cheaper than evaluate() inside root searches.
double evaluate_log_negativity(const ModelParams& params, const InitialState& init,
                               const FockSpec& spec);

}  // namespace pdcsim::fock
