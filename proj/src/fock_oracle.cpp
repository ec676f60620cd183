#include "pdcsim/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pdcsim::fock {

namespace {

// sqrt(m (m - 1) ... (m - k + 1)), the amplitude of b^k |m>.
double ladder(int m, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= std::sqrt(static_cast<double>(m - i));
    return out;
}

void require_dense(long dimension) {
    if (dimension > kDenseDimensionCap)
        throw CapExceeded("dense materialization limited to " + std::to_string(kDenseDimensionCap) +
                          " basis states");
}

double von_neumann(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lambda : es.eigenvalues())
        if (lambda > 1e-14) s -= lambda * std::log(lambda);
    return s;
}

}  // namespace

FockSpec::FockSpec(int nmax, long cap) : nmax_(nmax), cap_(cap) {
    if (nmax < 2) throw std::invalid_argument("nmax must be >= 2");
    if (dimension() > cap_)
        throw CapExceeded("nmax^2 = " + std::to_string(dimension()) + " exceeds the cap of " +
                          std::to_string(cap_));
}

int FockSpec::sector_size(int s) const { return nmax_ - std::abs(sector_difference(s)); }

int FockSpec::sector_n1(int s, int p) const { return p + std::max(sector_difference(s), 0); }

int FockSpec::sector_n2(int s, int p) const { return p + std::max(-sector_difference(s), 0); }

Hamiltonian::Hamiltonian(const ModelParams& params, const FockSpec& spec) : spec_(spec) {
    const double d = 0.5 * (params.w1() - params.w2());
    const double y = params.y();
    diag_.resize(spec.sector_count());
    offdiag_.resize(spec.sector_count());
    for (int s = 0; s < spec.sector_count(); ++s) {
        const int size = spec.sector_size(s);
        diag_[s].resize(size);
        offdiag_[s].resize(std::max(size - 1, 0));
        for (int p = 0; p < size; ++p) {
            const int n1 = spec.sector_n1(s, p);
            const int n2 = spec.sector_n2(s, p);
            diag_[s](p) = (d - y) * n1 + (-d - y) * n2;
            if (p + 1 < size) offdiag_[s](p) = -std::sqrt(static_cast<double>((n1 + 1) * (n2 + 1)));
        }
    }
}

Eigen::MatrixXcd Hamiltonian::to_dense() const {
    require_dense(spec_.dimension());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec_.dimension(), spec_.dimension());
    for (int s = 0; s < spec_.sector_count(); ++s) {
        for (int p = 0; p < spec_.sector_size(s); ++p) {
            const long i = spec_.index(spec_.sector_n1(s, p), spec_.sector_n2(s, p));
            h(i, i) = diag_[s](p);
            if (p + 1 < spec_.sector_size(s)) {
                const long j = spec_.index(spec_.sector_n1(s, p + 1), spec_.sector_n2(s, p + 1));
                h(i, j) = h(j, i) = offdiag_[s](p);
            }
        }
    }
    return h;
}

Hamiltonian build_hamiltonian(const ModelParams& params, const FockSpec& spec) {
    return Hamiltonian(params, spec);
}

DensityMatrix DensityMatrix::pure(const FockSpec& spec, Eigen::MatrixXcd amplitudes,
                                  double cut_mass) {
    if (amplitudes.rows() != spec.nmax() || amplitudes.cols() != spec.nmax())
        throw std::invalid_argument("amplitude matrix must be nmax x nmax");
    DensityMatrix rho(spec, cut_mass);
    rho.amplitudes_ = std::move(amplitudes);
    return rho;
}

DensityMatrix DensityMatrix::sector_diagonal(const FockSpec& spec,
                                             std::vector<Eigen::MatrixXcd> blocks,
                                             double cut_mass) {
    if (static_cast<int>(blocks.size()) != spec.sector_count())
        throw std::invalid_argument("one block per sector required");
    for (int s = 0; s < spec.sector_count(); ++s)
        if (blocks[s].rows() != spec.sector_size(s) || blocks[s].cols() != spec.sector_size(s))
            throw std::invalid_argument("sector block has the wrong shape");
    DensityMatrix rho(spec, cut_mass);
    rho.blocks_ = std::move(blocks);
    return rho;
}

cplx DensityMatrix::element(int n1, int n2, int m1, int m2) const {
    if (amplitudes_) return (*amplitudes_)(n1, n2) * std::conj((*amplitudes_)(m1, m2));
    if (n1 - n2 != m1 - m2) return {};
    return blocks_[spec_.sector_slot(n1, n2)](FockSpec::sector_position(n1, n2),
                                              FockSpec::sector_position(m1, m2));
}

double DensityMatrix::trace() const {
    if (amplitudes_) return amplitudes_->squaredNorm();
    double t = 0.0;
    for (const auto& b : blocks_) t += b.trace().real();
    return t;
}

double DensityMatrix::tail_mass() const {
    const int edge = nmax() - 1;
    double tail = 0.0;
    for (int n = 0; n < nmax(); ++n) {
        tail += population(edge, n);
        if (n != edge) tail += population(n, edge);
    }
    return tail;
}

double DensityMatrix::hermiticity_residual() const {
    if (amplitudes_) return 0.0;
    double r = 0.0;
    for (const auto& b : blocks_)
        if (b.size() > 0) r = std::max(r, (b - b.adjoint()).cwiseAbs().maxCoeff());
    return r;
}

Eigen::MatrixXcd DensityMatrix::to_dense() const {
    require_dense(spec_.dimension());
    const int n = nmax();
    Eigen::MatrixXcd rho(spec_.dimension(), spec_.dimension());
    for (int n1 = 0; n1 < n; ++n1)
        for (int n2 = 0; n2 < n; ++n2)
            for (int m1 = 0; m1 < n; ++m1)
                for (int m2 = 0; m2 < n; ++m2)
                    rho(spec_.index(n1, n2), spec_.index(m1, m2)) = element(n1, n2, m1, m2);
    return rho;
}

cplx DensityMatrix::expect(int c1, int a1, int c2, int a2) const {
    const int n = nmax();
    cplx total{};
    for (int m1 = a1; m1 < n; ++m1) {
        const int k1 = m1 - a1 + c1;
        if (k1 >= n) continue;
        const double coef1 = ladder(m1, a1) * ladder(k1, c1);
        for (int m2 = a2; m2 < n; ++m2) {
            const int k2 = m2 - a2 + c2;
            if (k2 >= n) continue;
            total += coef1 * ladder(m2, a2) * ladder(k2, c2) * element(m1, m2, k1, k2);
        }
    }
    return total;
}

std::pair<Eigen::VectorXd, double> thermal_weights(double nbar, int nmax) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(nmax);
    if (nbar == 0.0) {
        w(0) = 1.0;
        return {w, 0.0};
    }
    const double q = nbar / (1.0 + nbar);
    double term = 1.0 / (1.0 + nbar);
    for (int k = 0; k < nmax; ++k) {
        w(k) = term;
        term *= q;
    }
    return {w, std::pow(q, nmax)};
}

DensityMatrix initial_density(const InitialState& init, const FockSpec& spec) {
    const int n = spec.nmax();
    if (init.is_coherent()) {
        const cplx alpha = init.displacement();
        Eigen::VectorXcd psi(n);
        psi(0) = std::exp(-0.5 * std::norm(alpha));
        for (int k = 1; k < n; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
        const double kept = psi.squaredNorm();
        const double cut = std::max(0.0, 1.0 - kept);
        if (cut > kMaxCutMass)
            throw TruncationError("coherent amplitude loses " + std::to_string(cut) +
                                  " probability at nmax = " + std::to_string(n));
        Eigen::MatrixXcd amplitudes = Eigen::MatrixXcd::Zero(n, n);
        amplitudes.col(0) = psi / std::sqrt(kept);
        return DensityMatrix::pure(spec, std::move(amplitudes), cut);
    }

    const auto [n10, n20] = init.mean_occupations();
    auto [w1, cut1] = thermal_weights(n10, n);
    auto [w2, cut2] = thermal_weights(n20, n);
    if (cut1 > kMaxCutMass || cut2 > kMaxCutMass)
        throw TruncationError("thermal occupation loses " + std::to_string(std::max(cut1, cut2)) +
                              " probability at nmax = " + std::to_string(n));
    w1 /= w1.sum();
    w2 /= w2.sum();

    std::vector<Eigen::MatrixXcd> blocks(spec.sector_count());
    for (int s = 0; s < spec.sector_count(); ++s) {
        const int size = spec.sector_size(s);
        blocks[s] = Eigen::MatrixXcd::Zero(size, size);
        for (int p = 0; p < size; ++p)
            blocks[s](p, p) = w1(spec.sector_n1(s, p)) * w2(spec.sector_n2(s, p));
    }
    const double cut = 1.0 - (1.0 - cut1) * (1.0 - cut2);
    return DensityMatrix::sector_diagonal(spec, std::move(blocks), cut);
}

DensityMatrix evolve(const DensityMatrix& rho0, const Hamiltonian& hamiltonian, double tau) {
    const FockSpec& spec = rho0.spec();
    if (spec.nmax() != hamiltonian.spec().nmax())
        throw std::invalid_argument("state and Hamiltonian truncations differ");
    DensityMatrix rho = rho0;
    if (tau == 0.0) return rho;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (int s = 0; s < spec.sector_count(); ++s) {
        const int size = spec.sector_size(s);
        const bool skip = !rho.is_pure() && rho.blocks_[s].isZero(0.0);
        if (skip) continue;

        es.computeFromTridiagonal(hamiltonian.diagonal(s), hamiltonian.offdiagonal(s),
                                  Eigen::ComputeEigenvectors);
        if (es.info() != Eigen::Success)
            throw EvolutionError("eigendecomposition failed in sector " + std::to_string(s));
        const Eigen::VectorXcd phases =
            (es.eigenvalues().cast<cplx>() * cplx(0.0, -tau)).array().exp().matrix();
        const Eigen::MatrixXcd v = es.eigenvectors().cast<cplx>();
        const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.transpose();

        const double residual =
            (u.adjoint() * u - Eigen::MatrixXcd::Identity(size, size)).cwiseAbs().maxCoeff();
        if (residual > 1e-9)
            throw EvolutionError("propagator not unitary in sector " + std::to_string(s));

        if (rho.is_pure()) {
            auto& psi = *rho.amplitudes_;
            Eigen::VectorXcd column(size);
            for (int p = 0; p < size; ++p) column(p) = psi(spec.sector_n1(s, p), spec.sector_n2(s, p));
            column = u * column;
            for (int p = 0; p < size; ++p) psi(spec.sector_n1(s, p), spec.sector_n2(s, p)) = column(p);
        } else {
            rho.blocks_[s] = u * rho.blocks_[s] * u.adjoint();
        }
    }
    return rho;
}

Measurement measure(const DensityMatrix& rho, const ModelParams& params) {
    // Rotating-frame moments.
    const cplx b1 = rho.expect(0, 1, 0, 0);
    const cplx b2 = rho.expect(0, 0, 0, 1);
    const double n1 = rho.expect(1, 1, 0, 0).real();
    const double n2 = rho.expect(0, 0, 1, 1).real();
    const cplx b1b1 = rho.expect(0, 2, 0, 0);
    const cplx b2b2 = rho.expect(0, 0, 0, 2);
    const cplx b1b2 = rho.expect(0, 1, 0, 1);
    const cplx b1d_b2 = rho.expect(1, 0, 0, 1);

    // a_j = e^{-i theta} b_j for both modes.
    const cplx rot = std::polar(1.0, -(params.w_bar() + params.y()) * params.tau());
    const cplx a1 = rot * b1;
    const cplx a2 = rot * b2;
    const cplx m1 = rot * rot * b1b1 - a1 * a1;
    const cplx m2 = rot * rot * b2b2 - a2 * a2;
    const double c1 = n1 - std::norm(a1);
    const double c2 = n2 - std::norm(a2);
    const cplx pair = rot * rot * b1b2 - a1 * a2;             // <da1 da2>
    const cplx cross = std::conj(b1d_b2) - a1 * std::conj(a2);  // <da1 da2^dag>

    // Each quadrature is t a + conj(t) a^dag.
    const double h = 1.0 / std::sqrt(2.0);
    const cplx t[2] = {cplx(h, 0.0), cplx(0.0, -h)};

    Measurement out;
    out.n1 = n1;
    out.n2 = n2;
    out.tail = rho.tail_mass();
    const double r2 = std::sqrt(2.0);
    out.mean = {r2 * a1.real(), r2 * a1.imag(), r2 * a2.real(), r2 * a2.imag()};

    auto& m = out.cm.m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double same = 2.0 * std::real(t[i] * std::conj(t[j]));
            m(i, j) = 2.0 * std::real(t[i] * t[j] * m1) + same * (c1 + 0.5);
            m(2 + i, 2 + j) = 2.0 * std::real(t[i] * t[j] * m2) + same * (c2 + 0.5);
            const double inter =
                2.0 * std::real(t[i] * t[j] * pair) + 2.0 * std::real(t[i] * std::conj(t[j]) * cross);
            m(i, 2 + j) = inter;
            m(2 + j, i) = inter;
        }
    }
    return out;
}

Eigen::MatrixXcd reduced_density(const DensityMatrix& rho, int mode) {
    if (mode != 1 && mode != 2) throw std::invalid_argument("mode must be 1 or 2");
    if (rho.is_pure()) {
        const auto& psi = rho.amplitudes();
        if (mode == 1) return psi * psi.adjoint();
        return psi.transpose() * psi.conjugate();
    }
    const int n = rho.nmax();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out(i, j) += mode == 1 ? rho.element(i, k, j, k) : rho.element(k, i, k, j);
    return out;
}

double direct_entropy(const DensityMatrix& rho, int mode) {
    return von_neumann(reduced_density(rho, mode));
}

double partial_transpose_trace_norm(const DensityMatrix& rho) {
    if (rho.is_pure()) {
        // For a pure state the partial transpose has eigenvalues s_i^2 and
        // +-s_i s_j over the Schmidt coefficients, so its trace norm is (sum s)^2.
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rho.amplitudes());
        const double s = svd.singularValues().sum();
        return s * s;
    }
    // Sector-diagonal rho: the partial transpose only couples states with
    // equal n1 + n2, so it splits into blocks of fixed total photon number.
    const int n = rho.nmax();
    double norm = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (int total = 0; total <= 2 * (n - 1); ++total) {
        const int lo = std::max(0, total - (n - 1));
        const int hi = std::min(total, n - 1);
        const int size = hi - lo + 1;
        Eigen::MatrixXcd block(size, size);
        for (int i = 0; i < size; ++i) {
            const int n1 = lo + i;
            const int n2 = total - n1;
            for (int j = 0; j < size; ++j) {
                const int m1 = lo + j;
                const int m2 = total - m1;
                block(i, j) = rho.element(n1, m2, m1, n2);
            }
        }
        es.compute(block, Eigen::EigenvaluesOnly);
        norm += es.eigenvalues().cwiseAbs().sum();
    }
    return norm;
}

double direct_log_negativity(const DensityMatrix& rho) {
    return std::max(0.0, std::log(partial_transpose_trace_norm(rho)));
}

double max_third_central_moment(const DensityMatrix& rho, int angles) {
    double worst = 0.0;
    for (int mode = 1; mode <= 2; ++mode) {
        const bool first = mode == 1;
        const cplx b = first ? rho.expect(0, 1, 0, 0) : rho.expect(0, 0, 0, 1);
        const cplx bb = first ? rho.expect(0, 2, 0, 0) : rho.expect(0, 0, 0, 2);
        const double nn = first ? rho.expect(1, 1, 0, 0).real() : rho.expect(0, 0, 1, 1).real();
        const cplx bbb = first ? rho.expect(0, 3, 0, 0) : rho.expect(0, 0, 0, 3);
        const cplx dbb = first ? rho.expect(1, 2, 0, 0) : rho.expect(0, 0, 1, 2);
        for (int k = 0; k < angles; ++k) {
            const double phi = std::numbers::pi * k / angles;
            const cplx e1 = std::polar(1.0, -phi);
            const cplx e2 = std::polar(1.0, -2.0 * phi);
            const cplx e3 = std::polar(1.0, -3.0 * phi);
            const double mu = std::sqrt(2.0) * std::real(e1 * b);
            const double x2 = std::real(e2 * bb) + nn + 0.5;
            const double x3 = (2.0 * std::real(e3 * bbb) + 6.0 * std::real(e1 * dbb) +
                               6.0 * std::real(e1 * b)) /
                              (2.0 * std::sqrt(2.0));
            worst = std::max(worst, std::abs(x3 - 3.0 * mu * x2 + 2.0 * mu * mu * mu));
        }
    }
    return worst;
}

OracleResult evaluate(const ModelParams& params, const InitialState& init, const FockSpec& spec) {
    const auto h = build_hamiltonian(params, spec);
    const auto rho = evolve(initial_density(init, spec), h, params.tau());
    OracleResult out;
    out.measurement = measure(rho, params);
    out.entropy1 = direct_entropy(rho, 1);
    out.entropy2 = direct_entropy(rho, 2);
    out.log_negativity = direct_log_negativity(rho);
    out.cut_mass = rho.cut_mass();
    out.trace = rho.trace();
    return out;
}

FockSpec converged_spec(const ModelParams& params, const InitialState& init,
                        double tail_threshold, int start, int step, long cap) {
    for (int nmax = start;; nmax += step) {
        if (static_cast<long>(nmax) * nmax > cap)
            throw CapExceeded("no truncation within the cap reaches tail mass " +
                              std::to_string(tail_threshold));
        const FockSpec spec(nmax, cap);
        try {
            const auto rho = evolve(initial_density(init, spec), build_hamiltonian(params, spec),
                                    params.tau());
            if (rho.tail_mass() <= tail_threshold) return spec;
        } catch (const TruncationError&) {
        }
    }
}

double evaluate_log_negativity(const ModelParams& params, const InitialState& init,
                               const FockSpec& spec) {
    const auto h = build_hamiltonian(params, spec);
    return direct_log_negativity(evolve(initial_density(init, spec), h, params.tau()));
}

}  // namespace pdcsim::fock
