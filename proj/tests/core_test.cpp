#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "pdcsim/core.hpp"

using namespace pdcsim;

namespace {

std::vector<double> grid(double from, double to, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = from + (to - from) * i / (n - 1);
    return g;
}

// Lab-frame propagator of (a1, a2^dag) by RK4 integration of the
// equations of motion with the pump rotating at W = w1 + w2 + 2y:
//   da1/dtau     = -i w1 a1 + i e^{-i W tau} a2^dag
//   da2^dag/dtau =  i w2 a2^dag - i e^{+i W tau} a1
Eigen::Matrix2cd propagator(const ModelParams& p, int steps = 20000) {
    const cplx i(0, 1);
    const double big_w = p.w1() + p.w2() + 2.0 * p.y();
    auto rhs = [&](double t, const Eigen::Matrix2cd& g) {
        Eigen::Matrix2cd m;
        m << -i * p.w1(), i * std::exp(-i * big_w * t), -i * std::exp(i * big_w * t), i * p.w2();
        return Eigen::Matrix2cd(m * g);
    };
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity();
    const double h = p.tau() / steps;
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const Eigen::Matrix2cd k1 = rhs(t, g);
        const Eigen::Matrix2cd k2 = rhs(t + h / 2, g + h / 2 * k1);
        const Eigen::Matrix2cd k3 = rhs(t + h / 2, g + h / 2 * k2);
        const Eigen::Matrix2cd k4 = rhs(t + h, g + h * k3);
        g += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return g;
}

}  // namespace

TEST(ModelParams, DerivedQuantities) {
    const ModelParams p(0.6, 0.5);
    EXPECT_NEAR(p.x(), 0.8, 1e-15);
    EXPECT_NEAR(p.r(), 0.4, 1e-15);
    EXPECT_DOUBLE_EQ(p.w_bar(), 10.0);
    EXPECT_DOUBLE_EQ(p.wprime1(), 10.6);
    EXPECT_FALSE(p.beyond_undepleted_pump());
    EXPECT_TRUE(p.with_tau(1.0).beyond_undepleted_pump());
    EXPECT_EQ(ModelParams(0.0, 0.9).r(), 0.9);
}

TEST(ModelParams, RejectsOutOfDomain) {
    EXPECT_THROW(ModelParams(1.0, 0.5), DomainError);
    EXPECT_THROW(ModelParams(-0.1, 0.5), DomainError);
    EXPECT_THROW(ModelParams(0.9999995, 0.5), DomainError);
    EXPECT_THROW(ModelParams(0.5, -1e-9), DomainError);
    EXPECT_THROW(ModelParams(0.5, 0.5, 0.0, 10.0), DomainError);
    EXPECT_THROW(ModelParams(std::nan(""), 0.5), DomainError);
    EXPECT_NO_THROW(ModelParams(kMaxMismatch, 0.5));
    try {
        ModelParams(1.0, 0.5);
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("y must lie in [0,1)"), std::string::npos);
    }
}

TEST(InitialState, Occupations) {
    EXPECT_EQ(InitialState::vacuum().mean_occupations(), std::make_pair(0.0, 0.0));
    const auto c = InitialState::coherent({0.0, 3.0});
    EXPECT_DOUBLE_EQ(c.mean_occupations().first, 9.0);
    EXPECT_EQ(c.central_occupations(), std::make_pair(0.0, 0.0));
    EXPECT_EQ(c.displacement(), cplx(0.0, 3.0));
    const auto t = InitialState::thermal(1.0, 2.0);
    EXPECT_EQ(t.central_occupations(), std::make_pair(1.0, 2.0));
    EXPECT_EQ(t.describe(), "thermal:1,2");
    EXPECT_THROW(InitialState::thermal(-1.0, 0.0), DomainError);
    EXPECT_THROW(InitialState::thermal(0.0, INFINITY), DomainError);
    EXPECT_THROW(InitialState::coherent({NAN, 0.0}), DomainError);
}

TEST(Bogoliubov, IdentityAtTauZero) {
    for (double y : {0.0, 0.5, 0.9}) {
        const auto b = bogoliubov_coefficients(ModelParams(y, 0.0));
        EXPECT_EQ(b.u, cplx(1.0, 0.0));
        EXPECT_EQ(b.v, cplx(0.0, 0.0));
        EXPECT_EQ(b.phi1, 0.0);
        EXPECT_EQ(b.phi2, 0.0);
    }
}

TEST(Bogoliubov, PerfectMatchingIsHyperbolic) {
    const auto b = bogoliubov_coefficients(ModelParams(0.0, 0.9));
    EXPECT_NEAR(b.u.real(), 1.4330863854487743, 1e-15);  // cosh 0.9
    EXPECT_EQ(b.u.imag(), 0.0);
    EXPECT_EQ(b.v.real(), 0.0);
    EXPECT_NEAR(b.v.imag(), 1.0265167257081753, 1e-15);  // sinh 0.9
    EXPECT_EQ(b.row2_a10(), std::conj(b.v));
    EXPECT_EQ(b.row2_a20dag(), std::conj(b.u));
}

TEST(Bogoliubov, MismatchedGainFromSeries) {
    // |v|^2 = sinh^2(x tau)/x^2 with x tau = 0.9 sqrt(0.19); sinh by its Taylor series.
    const double z = 0.9 * std::sqrt(0.19);
    double sinh_z = 0.0, term = z;
    for (int k = 1; k < 30; k += 2) {
        sinh_z += term;
        term *= z * z / ((k + 1) * (k + 2));
    }
    const double expected = sinh_z * sinh_z / 0.19;
    EXPECT_NEAR(expected, 0.852415, 1e-6);
    EXPECT_NEAR(std::norm(bogoliubov_coefficients(ModelParams(0.9, 0.9)).v), expected, 1e-14);
}

TEST(Bogoliubov, MatchesIntegratedEquationsOfMotion) {
    for (double y : {0.0, 0.3, 0.9, 0.99}) {
        for (double tau : {0.1, 0.7, 1.0, 2.0}) {
            for (auto [w1, w2] : {std::pair{10.0, 10.0}, std::pair{7.0, 12.5}}) {
                const ModelParams p(y, tau, w1, w2);
                const auto b = bogoliubov_coefficients(p);
                const auto g = propagator(p);
                const cplx e1 = std::exp(cplx(0, -b.phi1));
                const cplx e2 = std::exp(cplx(0, b.phi2));
                EXPECT_LT(std::abs(g(0, 0) - e1 * b.u), 1e-9) << y << " " << tau;
                EXPECT_LT(std::abs(g(0, 1) - e1 * b.v), 1e-9);
                EXPECT_LT(std::abs(g(1, 0) - e2 * b.row2_a10()), 1e-9);
                EXPECT_LT(std::abs(g(1, 1) - e2 * b.row2_a20dag()), 1e-9);
            }
        }
    }
}

TEST(Bogoliubov, CommutatorPreservedOnGrid) {
    for (double tau : grid(0.0, 1.0, 50))
        for (double y : grid(0.0, 0.99, 50)) {
            const auto b = bogoliubov_coefficients(ModelParams(y, tau));
            EXPECT_NEAR(std::norm(b.u) - std::norm(b.v), 1.0, 1e-12) << tau << " " << y;
        }
}

TEST(Squeezing, Examples) {
    EXPECT_EQ(squeezing_parameter(ModelParams(0.0, 0.9)), 0.9);
    EXPECT_NEAR(squeezing_parameter(ModelParams(0.6, 1.0)), 0.8, 1e-15);
    EXPECT_NEAR(squeezing_parameter(ModelParams(0.9, 0.9)), 0.9 * std::sqrt(0.19), 1e-15);
    EXPECT_NEAR(squeezing_parameter(ModelParams(0.9, 0.9)), 0.392301, 1e-6);
}

TEST(Squeezing, DecreasesWithMismatch) {
    double prev = INFINITY;
    for (double y : grid(0.0, 0.99, 100)) {
        const double r = squeezing_parameter(ModelParams(y, 0.9));
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(PhotonNumbers, VacuumReference) {
    const auto n = mean_photon_numbers(ModelParams(0.0, 0.9), InitialState::vacuum());
    const double sinh2 = std::pow(std::sinh(0.9), 2);
    EXPECT_NEAR(n.n1, sinh2, 1e-15);
    EXPECT_NEAR(n.n1, 1.053737, 1e-6);
    EXPECT_EQ(n.n1, n.n2);
}

TEST(PhotonNumbers, ThermalAtTauZero) {
    const auto n = mean_photon_numbers(ModelParams(0.5, 0.0), InitialState::thermal(1.0, 2.0));
    EXPECT_NEAR(n.n1, 1.0, 1e-15);
    EXPECT_NEAR(n.n2, 2.0, 1e-15);
}

TEST(PhotonNumbers, AgreesWithPropagatorMoments) {
    // <a1^dag a1> = |G00|^2 n10 + |G01|^2 (n20 + 1) for uncorrelated inputs.
    const auto init = InitialState::thermal(0.7, 1.9);
    for (double y : {0.0, 0.5, 0.95})
        for (double tau : {0.2, 0.9}) {
            const ModelParams p(y, tau);
            const auto g = propagator(p);
            const auto n = mean_photon_numbers(p, init);
            EXPECT_NEAR(n.n1, std::norm(g(0, 0)) * 0.7 + std::norm(g(0, 1)) * 2.9, 1e-9);
            EXPECT_NEAR(n.n2, std::norm(g(1, 0)) * 1.7 + std::norm(g(1, 1)) * 1.9, 1e-9);
        }
}

TEST(PhotonNumbers, IntegralOfMotion) {
    const std::vector<InitialState> inits = {InitialState::vacuum(),
                                             InitialState::coherent({2.0, 0.0}),
                                             InitialState::coherent({0.3, -1.1}),
                                             InitialState::thermal(1.0, 2.0)};
    for (const auto& init : inits) {
        const double n0 = photon_difference(ModelParams(0.0, 0.0), init);
        for (double tau : grid(0.0, 1.0, 50))
            for (double y : grid(0.0, 0.99, 50))
                EXPECT_NEAR(photon_difference(ModelParams(y, tau), init), n0, 1e-12)
                    << init.describe() << " " << tau << " " << y;
    }
    EXPECT_NEAR(photon_difference(ModelParams(0.5, 0.7), InitialState::thermal(1, 2)), -1.0, 1e-12);
    EXPECT_NEAR(photon_difference(ModelParams(0.5, 0.7), InitialState::coherent({2, 0})), 4.0,
                1e-12);
}

TEST(PhotonNumbers, LouisellReductionAtPerfectMatching) {
    const auto init = InitialState::thermal(1.3, 0.4);
    for (double tau : grid(0.0, 1.0, 50)) {
        const auto n = mean_photon_numbers(ModelParams(0.0, tau), init);
        const double c2 = std::pow(std::cosh(tau), 2), s2 = std::pow(std::sinh(tau), 2);
        EXPECT_NEAR(n.n1, c2 * 1.3 + s2 * 1.4, 1e-12);
        EXPECT_NEAR(n.n2, c2 * 0.4 + s2 * 2.3, 1e-12);
    }
}

TEST(PhotonNumbers, MismatchSuppressesGeneration) {
    double prev = INFINITY;
    for (int k = 0; k <= 9; ++k) {
        const double n1 = mean_photon_numbers(ModelParams(0.1 * k, 0.9), InitialState::vacuum()).n1;
        EXPECT_LT(n1, prev);
        prev = n1;
    }
}

TEST(PhotonNumbers, ShortTimesInsensitiveToMismatch) {
    // n1 = tau^2 + O(tau^4) for vacuum, independent of y at leading order.
    const double tau = 1e-3;
    const double a = mean_photon_numbers(ModelParams(0.0, tau), InitialState::vacuum()).n1;
    const double b = mean_photon_numbers(ModelParams(0.9, tau), InitialState::vacuum()).n1;
    EXPECT_NEAR(a / (tau * tau), 1.0, 1e-6);
    EXPECT_NEAR(b / (tau * tau), 1.0, 1e-6);
}

TEST(MeanVector, VacuumAndThermalAreCentred) {
    for (const auto& init : {InitialState::vacuum(), InitialState::thermal(1, 2)}) {
        const auto m = mean_vector(ModelParams(0.4, 0.8), init);
        EXPECT_EQ(m.x1, 0.0);
        EXPECT_EQ(m.p1, 0.0);
        EXPECT_EQ(m.x2, 0.0);
        EXPECT_EQ(m.p2, 0.0);
    }
}

TEST(MeanVector, CoherentFollowsPropagator) {
    const cplx alpha(1.0, 0.5);
    const auto m0 = mean_vector(ModelParams(0.3, 0.0), InitialState::coherent({1.0, 0.0}));
    EXPECT_NEAR(m0.x1, std::sqrt(2.0), 1e-15);
    EXPECT_EQ(m0.p1, 0.0);
    for (double y : {0.0, 0.6}) {
        const ModelParams p(y, 0.75, 9.0, 11.0);
        const auto g = propagator(p);
        const cplx a1 = g(0, 0) * alpha;                // <a1>
        const cplx a2 = std::conj(g(1, 0) * alpha);     // <a2> = conj(<a2^dag>)
        const auto m = mean_vector(p, InitialState::coherent(alpha));
        EXPECT_NEAR(m.x1, std::sqrt(2.0) * a1.real(), 1e-10);
        EXPECT_NEAR(m.p1, std::sqrt(2.0) * a1.imag(), 1e-10);
        EXPECT_NEAR(m.x2, std::sqrt(2.0) * a2.real(), 1e-10);
        EXPECT_NEAR(m.p2, std::sqrt(2.0) * a2.imag(), 1e-10);
        const auto [c1, c2] = mean_amplitudes(p, InitialState::coherent(alpha));
        EXPECT_LT(std::abs(c1 - a1), 1e-10);
        EXPECT_LT(std::abs(c2 - a2), 1e-10);
    }
}
