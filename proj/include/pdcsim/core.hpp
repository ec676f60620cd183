#pragma once

// Closed-form dynamics of nondegenerate two-mode parametric interaction with
// a phase mismatch. Every quantity is expressed in units of the coupling g:
// the mismatch enters as y = delta/g and time as tau = g t.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace pdcsim {

using cplx = std::complex<double>;

/// Raised for parameters outside the model's domain (y >= 1, tau < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Largest accepted mismatch; 1/x and 1/x^2 blow up at y = 1.
inline constexpr double kMaxMismatch = 0.999999;
/// Mode frequencies (in units of g) used when none are supplied.
inline constexpr double kDefaultModeFrequency = 10.0;

/**
 * Dimensionless model inputs. Derived quantities are computed on access so
 * they can never go stale.
 */
class ModelParams {
public:
    /// Throws DomainError unless 0 <= y <= kMaxMismatch, tau >= 0 and w1, w2 > 0.
    ModelParams(double y, double tau, double w1 = kDefaultModeFrequency,
                double w2 = kDefaultModeFrequency);

    double y() const { return y_; }
    double tau() const { return tau_; }
    double w1() const { return w1_; }
    double w2() const { return w2_; }

    /// x = sqrt(1 - y^2), the mismatch reduction of the gain.
    double x() const;
    /// Squeezing parameter r = tau * x.
    double r() const { return tau_ * x(); }
    /// Pump half-frequency, 2 w_bar = w1 + w2.
    double w_bar() const { return 0.5 * (w1_ + w2_); }
    double wprime1() const { return w1_ + y_; }
    double wprime2() const { return w2_ + y_; }

    /// True once tau reaches the undepleted-pump validity bound (tau >= 1).
    /// Results stay mathematically exact; callers decide whether to warn.
    bool beyond_undepleted_pump() const { return tau_ >= 1.0; }

    ModelParams with_tau(double tau) const { return {y_, tau, w1_, w2_}; }
    ModelParams with_y(double y) const { return {y, tau_, w1_, w2_}; }

private:
    double y_;
    double tau_;
    double w1_;
    double w2_;
};

/// Two-mode vacuum |0>|0> (spontaneous downconversion).
struct Vacuum {};

/// Coherent signal |alpha>_1 injected on mode 1, idler in vacuum.
struct Coherent {
    cplx alpha;
};

/// Uncorrelated thermal pair with mean occupations n10, n20.
struct Thermal {
    double n10;
    double n20;
};

class InitialState {
public:
    using Variant = std::variant<Vacuum, Coherent, Thermal>;

    InitialState() : state_(Vacuum{}) {}
    /// Throws DomainError for negative or non-finite thermal occupations
    /// and non-finite coherent amplitudes.
    InitialState(Variant state);  // NOLINT(google-explicit-constructor)

    static InitialState vacuum() { return InitialState(Vacuum{}); }
    static InitialState coherent(cplx alpha) { return InitialState(Coherent{alpha}); }
    static InitialState thermal(double n10, double n20) {
        return InitialState(Thermal{n10, n20});
    }

    const Variant& variant() const { return state_; }
    bool is_vacuum() const { return std::holds_alternative<Vacuum>(state_); }
    bool is_coherent() const { return std::holds_alternative<Coherent>(state_); }
    bool is_thermal() const { return std::holds_alternative<Thermal>(state_); }

    /// Initial mean photon numbers (n10, n20); |alpha|^2 for a coherent signal.
    std::pair<double, double> mean_occupations() const;
    /// Occupations that carry variance: the coherent displacement is dropped.
    std::pair<double, double> central_occupations() const;
    /// Coherent amplitude, or 0 for the other variants.
    cplx displacement() const;

    std::string describe() const;

private:
    Variant state_;
};

/**
 * Generalized Bogoliubov coefficients of the evolved mode operators:
 *
 *   a1(tau)     = e^{-i phi1} [ u a10 + v a20^dag ]
 *   a2^dag(tau) = e^{+i phi2} [ conj(v) a10 + conj(u) a20^dag ]
 *
 * with u = C + i (y/x) S, v = (i/x) S, C = cosh(x tau), S = sinh(x tau),
 * phi_j = tau (w_j + y).
 */
struct BogoliubovCoeffs {
    cplx u;
    cplx v;
    double phi1;
    double phi2;

    /// Coefficient of a10 in the bracket of a2^dag(tau): -i S/x = conj(v).
    cplx row2_a10() const { return std::conj(v); }
    /// Coefficient of a20^dag in the bracket of a2^dag(tau): C - i (y/x) S = conj(u).
    cplx row2_a20dag() const { return std::conj(u); }
};

BogoliubovCoeffs bogoliubov_coefficients(const ModelParams& params);

double squeezing_parameter(const ModelParams& params);

struct PhotonNumbers {
    double n1;
    double n2;
};

/// Mean photon numbers of both modes at time tau (integral of motion holds
/// exactly: n1 - n2 = n10 - n20).
PhotonNumbers mean_photon_numbers(const ModelParams& params, const InitialState& init);

/// n1 - n2 at time tau.
double photon_difference(const ModelParams& params, const InitialState& init);

/// Quadrature first moments in ordering (x1, p1, x2, p2), with
/// x = (a + a^dag)/sqrt(2) and p = (a - a^dag)/(i sqrt(2)).
struct MeanVector {
    double x1;
    double p1;
    double x2;
    double p2;
};

MeanVector mean_vector(const ModelParams& params, const InitialState& init);

/// Complex first moments <a1(tau)>, <a2(tau)>.
std::pair<cplx, cplx> mean_amplitudes(const ModelParams& params, const InitialState& init);

}  // namespace pdcsim
