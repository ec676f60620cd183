#include "pdcsim/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

namespace pdcsim::gaussian {

namespace {

double det2(const Eigen::Matrix2d& b) { return b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0); }

void set_symmetric(Eigen::Matrix4d& m, int i, int j, double value) {
    m(i, j) = value;
    m(j, i) = value;
}

CovarianceMatrix4 build(double diag1, double diag2, double xx, double xp, double px,
                        double pp) {
    CovarianceMatrix4 cm;
    cm.m(X1, X1) = cm.m(P1, P1) = diag1;
    cm.m(X2, X2) = cm.m(P2, P2) = diag2;
    set_symmetric(cm.m, X1, X2, xx);
    set_symmetric(cm.m, X1, P2, xp);
    set_symmetric(cm.m, P1, X2, px);
    set_symmetric(cm.m, P1, P2, pp);
    return cm;
}

// Williamson spectrum (nu_minus, nu_plus) from the Hermitian matrix
// sigma^{1/2} (i Omega) sigma^{1/2}, whose eigenvalues are +-nu_k. Backward
// stable even when nu_minus = nu_plus, where the closed form in terms of
// Delta loses half the digits. Empty for matrices that are not positive definite.
std::optional<std::pair<double, double>> williamson(const Eigen::Matrix4d& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sigma);
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) return std::nullopt;
    const Eigen::Matrix4cd root = es.operatorSqrt().cast<cplx>();
    Eigen::Matrix4cd i_omega = Eigen::Matrix4cd::Zero();
    i_omega(X1, P1) = i_omega(X2, P2) = cplx(0, 1);
    i_omega(P1, X1) = i_omega(P2, X2) = cplx(0, -1);
    const Eigen::Matrix4cd h = root * i_omega * root;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(h, Eigen::EigenvaluesOnly);
    if (hs.info() != Eigen::Success) return std::nullopt;
    return std::pair{hs.eigenvalues()(2), hs.eigenvalues()(3)};
}

}  // namespace

cplx pair_correlator(const ModelParams& params, const InitialState& init) {
    const auto [n10, n20] = init.central_occupations();
    const auto b = bogoliubov_coefficients(params);
    return (n10 + n20 + 1.0) * std::polar(1.0, -(b.phi1 + b.phi2)) * b.u * b.v;
}

CovarianceMatrix4 assemble_cm(const ModelParams& params, const InitialState& init) {
    const auto [n10, n20] = init.central_occupations();
    const auto n = mean_photon_numbers(params, InitialState::thermal(n10, n20));
    const cplx c = pair_correlator(params, init);
    return build(n.n1 + 0.5, n.n2 + 0.5, c.real(), c.imag(), c.imag(), -c.real());
}

AppendixCrosscheck appendix_cm_crosscheck(const ModelParams& params, double n10, double n20) {
    const auto init = InitialState::thermal(n10, n20);
    const auto n = mean_photon_numbers(params, init);
    const double x = params.x();
    const double y = params.y();
    const double tau = params.tau();
    const double c = std::cosh(x * tau);
    const double s = std::sinh(x * tau);
    const double wp = params.w_bar() + y;
    const double amp = n10 + n20 + 1.0;

    // Phase arguments exactly as printed: 2 w' tau in sigma_13, 2 w' x tau in sigma_14.
    const double sigma13 =
        amp * (std::sin(2.0 * wp * tau) / x * c * s - std::cos(2.0 * wp * tau) * y / (x * x) * s * s);
    const double sigma14 = amp * (std::cos(2.0 * wp * x * tau) / x * c * s +
                                  std::sin(2.0 * wp * x * tau) * y / (x * x) * s * s);

    AppendixCrosscheck out;
    out.literal = build(n.n1 + 0.5, n.n2 + 0.5, sigma13, sigma14, sigma14, sigma13);
    out.sign_mapped = build(n.n1 + 0.5, n.n2 + 0.5, sigma13, sigma14, sigma14, -sigma13);

    const auto assembled = assemble_cm(params, init);
    out.max_abs_discrepancy = (out.sign_mapped.m - assembled.m).cwiseAbs().maxCoeff();
    out.raw_max_abs_discrepancy = (out.literal.m - assembled.m).cwiseAbs().maxCoeff();
    const cplx corr = pair_correlator(params, init);
    out.magnitude_discrepancy = sigma13 * sigma13 + sigma14 * sigma14 - std::norm(corr);
    out.sigma13_error = std::abs(sigma13 - assembled(X1, X2));
    out.sigma14_error = std::abs(sigma14 - assembled(X1, P2));
    return out;
}

double determinant(const CovarianceMatrix4& cm) { return cm.m.determinant(); }

std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix4& cm) {
    if (auto nu = williamson(cm.m)) return *nu;
    // Not positive definite (unphysical): fall back to the invariant form.
    const double delta = det2(cm.block1()) + det2(cm.block2()) + 2.0 * det2(cm.gamma());
    const double det = determinant(cm);
    const double disc = std::max(0.0, delta * delta - 4.0 * det);
    const double plus2 = 0.5 * (delta + std::sqrt(disc));
    const double minus2 = plus2 > 0.0 ? det / plus2 : 0.0;
    return {std::sqrt(std::max(0.0, minus2)), std::sqrt(std::max(0.0, plus2))};
}

bool is_physical(const CovarianceMatrix4& cm) {
    if (cm.asymmetry() > 1e-12) return false;
    if (determinant(cm) < 0.0) return false;
    return symplectic_eigenvalues(cm).first >= 0.5 - kSymplecticBand;
}

std::pair<double, double> reduced_symplectic_eigenvalues(const CovarianceMatrix4& cm) {
    auto nu = [](const Eigen::Matrix2d& block) {
        const double d = det2(block);
        if (d < 0.25 - kSymplecticBand)
            throw UnphysicalMatrix("reduced covariance block has det < 1/4");
        return std::sqrt(std::max(d, 0.25));
    };
    return {nu(cm.block1()), nu(cm.block2())};
}

double entropy_f(double x) {
    if (!(x >= 0.5 - kSymplecticBand)) throw DomainError("entropy_f requires x >= 1/2");
    if (x <= 0.5) return 0.0;
    const double hi = x + 0.5;
    const double lo = x - 0.5;
    return hi * std::log(hi) - lo * std::log(lo);
}

std::pair<double, double> entanglement_entropy(const CovarianceMatrix4& cm) {
    const auto [nu1, nu2] = reduced_symplectic_eigenvalues(cm);
    return {entropy_f(nu1), entropy_f(nu2)};
}

double ppt_min_symplectic(const CovarianceMatrix4& cm) {
    // Transposing mode 2 flips the sign of p2; the invariant
    // Delta~ = det s1 + det s2 - 2 det gamma follows from the same congruence.
    const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
    const Eigen::Matrix4d transposed = flip.asDiagonal() * cm.m * flip.asDiagonal();
    if (determinant(cm) < 0.0) throw UnphysicalMatrix("covariance matrix has negative determinant");
    const auto nu = williamson(transposed);
    if (!nu) throw UnphysicalMatrix("covariance matrix is not positive definite");
    return nu->first;
}

double log_negativity(const CovarianceMatrix4& cm) {
    const double nu = ppt_min_symplectic(cm);
    if (nu >= 0.5 - kSymplecticBand) return 0.0;
    return -std::log(2.0 * nu);
}

EntanglementReport report_from_cm(const CovarianceMatrix4& cm) {
    EntanglementReport r;
    std::tie(r.nu1, r.nu2) = reduced_symplectic_eigenvalues(cm);
    r.entropy1 = entropy_f(r.nu1);
    r.entropy2 = entropy_f(r.nu2);
    r.nu_tilde_minus = ppt_min_symplectic(cm);
    r.log_negativity = r.nu_tilde_minus >= 0.5 - kSymplecticBand ? 0.0 : -std::log(2.0 * r.nu_tilde_minus);
    return r;
}

EntanglementReport full_report(const ModelParams& params, const InitialState& init) {
    return report_from_cm(assemble_cm(params, init));
}

double published_reduced_eigenvalue(const ModelParams& params, double n10) {
    const double x = params.x();
    const double y = params.y();
    const double c = std::cosh(x * params.tau());
    const double s = std::sinh(x * params.tau());
    const double x2 = x * x;
    return 0.5 * std::sqrt(1.0 + 4.0 * (c * c - y * y) / x2 * (s * s / x2) * (2.0 * n10 + 1.0));
}

}  // namespace pdcsim::gaussian
