#include "pdcsim/core.hpp"

#include <cmath>
#include <sstream>

namespace pdcsim {

namespace {

struct Hyperbolic {
    double x;
    double c;
    double s;
};

Hyperbolic hyperbolic(const ModelParams& p) {
    const double x = p.x();
    return {x, std::cosh(x * p.tau()), std::sinh(x * p.tau())};
}

}  // namespace

ModelParams::ModelParams(double y, double tau, double w1, double w2)
    : y_(y), tau_(tau), w1_(w1), w2_(w2) {
    if (!std::isfinite(y) || y < 0.0) throw DomainError("y must lie in [0,1)");
    if (y >= 1.0) throw DomainError("y must lie in [0,1)");
    if (y > kMaxMismatch)
        throw DomainError("y too close to 1: the Bogoliubov coefficients are singular at y = 1");
    if (!std::isfinite(tau) || tau < 0.0) throw DomainError("tau must be finite and >= 0");
    if (!std::isfinite(w1) || w1 <= 0.0) throw DomainError("w1 must be finite and > 0");
    if (!std::isfinite(w2) || w2 <= 0.0) throw DomainError("w2 must be finite and > 0");
}

double ModelParams::x() const { return std::sqrt((1.0 - y_) * (1.0 + y_)); }

InitialState::InitialState(Variant state) : state_(std::move(state)) {
    if (const auto* t = std::get_if<Thermal>(&state_)) {
        if (!std::isfinite(t->n10) || !std::isfinite(t->n20) || t->n10 < 0.0 || t->n20 < 0.0)
            throw DomainError("thermal occupations must be finite and >= 0");
    } else if (const auto* c = std::get_if<Coherent>(&state_)) {
        if (!std::isfinite(c->alpha.real()) || !std::isfinite(c->alpha.imag()))
            throw DomainError("coherent amplitude must be finite");
    }
}

std::pair<double, double> InitialState::mean_occupations() const {
    if (const auto* c = std::get_if<Coherent>(&state_)) return {std::norm(c->alpha), 0.0};
    if (const auto* t = std::get_if<Thermal>(&state_)) return {t->n10, t->n20};
    return {0.0, 0.0};
}

std::pair<double, double> InitialState::central_occupations() const {
    if (const auto* t = std::get_if<Thermal>(&state_)) return {t->n10, t->n20};
    return {0.0, 0.0};
}

cplx InitialState::displacement() const {
    if (const auto* c = std::get_if<Coherent>(&state_)) return c->alpha;
    return {0.0, 0.0};
}

std::string InitialState::describe() const {
    std::ostringstream os;
    if (const auto* c = std::get_if<Coherent>(&state_)) {
        os << "coherent:" << c->alpha.real() << "," << c->alpha.imag();
    } else if (const auto* t = std::get_if<Thermal>(&state_)) {
        os << "thermal:" << t->n10 << "," << t->n20;
    } else {
        os << "vacuum";
    }
    return os.str();
}

BogoliubovCoeffs bogoliubov_coefficients(const ModelParams& params) {
    const auto [x, c, s] = hyperbolic(params);
    const double y = params.y();
    return {
        cplx(c, y * s / x),
        cplx(0.0, s / x),
        params.tau() * params.wprime1(),
        params.tau() * params.wprime2(),
    };
}

double squeezing_parameter(const ModelParams& params) { return params.r(); }

PhotonNumbers mean_photon_numbers(const ModelParams& params, const InitialState& init) {
    const auto [x, c, s] = hyperbolic(params);
    const double y = params.y();
    const auto [n10, n20] = init.mean_occupations();
    // (C^2 - y^2) / x^2 = |u|^2 and S^2 / x^2 = |v|^2.
    const double x2 = x * x;
    const double gain = (c * c - y * y) / x2;
    const double pair = s * s / x2;
    return {gain * n10 + pair * (n20 + 1.0), gain * n20 + pair * (n10 + 1.0)};
}

double photon_difference(const ModelParams& params, const InitialState& init) {
    const auto n = mean_photon_numbers(params, init);
    return n.n1 - n.n2;
}

std::pair<cplx, cplx> mean_amplitudes(const ModelParams& params, const InitialState& init) {
    const cplx alpha = init.displacement();
    if (alpha == cplx{}) return {cplx{}, cplx{}};
    const auto b = bogoliubov_coefficients(params);
    const cplx a1 = std::polar(1.0, -b.phi1) * b.u * alpha;
    // <a2> is the conjugate of <a2^dag> = e^{i phi2} conj(v) alpha.
    const cplx a2 = std::polar(1.0, -b.phi2) * b.v * std::conj(alpha);
    return {a1, a2};
}

MeanVector mean_vector(const ModelParams& params, const InitialState& init) {
    const auto [a1, a2] = mean_amplitudes(params, init);
    const double r2 = std::sqrt(2.0);
    return {r2 * a1.real(), r2 * a1.imag(), r2 * a2.real(), r2 * a2.imag()};
}

}  // namespace pdcsim
