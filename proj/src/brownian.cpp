#include "polybm/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "polybm/error.hpp"

namespace polybm {

namespace {

void require_positive_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("interval length must be positive and finite");
    }
}

bool same_length(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

IncrementPair sample_pair(double length, RandomStream& rng) {
    require_positive_length(length);
    IncrementPair p;
    p.w = rng.normal(std::sqrt(length));
    p.h_area = rng.normal(std::sqrt(length / 12.0));
    p.length = length;
    return p;
}

void sample_pairs(double length, std::span<IncrementPair> out, RandomStream& rng) {
    require_positive_length(length);
    const double sd_w = std::sqrt(length);
    const double sd_h = std::sqrt(length / 12.0);
    for (IncrementPair& p : out) {
        p.w = rng.normal(sd_w);
        p.h_area = rng.normal(sd_h);
        p.length = length;
    }
}

IncrementPair coarsen(std::span<const IncrementPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("coarsen: empty interval list");
    if (pairs.size() == 1) return pairs.front();
    const double delta = pairs.front().length;
    require_positive_length(delta);
    // h H = int_0^h W_u du - h W / 2, with the integral accumulated piecewise:
    // each piece contributes delta (W at its start + w_i / 2 + H_i).
    double prefix = 0.0;
    double integral = 0.0;
    for (const IncrementPair& p : pairs) {
        if (!same_length(p.length, delta)) {
            throw std::invalid_argument("coarsen: sub-intervals must have equal lengths");
        }
        integral += delta * (prefix + 0.5 * p.w + p.h_area);
        prefix += p.w;
    }
    const double h = delta * static_cast<double>(pairs.size());
    IncrementPair out;
    out.w = prefix;
    out.h_area = integral / h - 0.5 * prefix;
    out.length = h;
    return out;
}

void coarsen_into(std::span<const IncrementPair> fine, std::size_t factor,
                  std::span<IncrementPair> out) {
    if (factor == 0 || fine.size() % factor != 0) {
        throw std::invalid_argument("coarsen_into: factor must divide the number of intervals");
    }
    if (out.size() != fine.size() / factor) {
        throw std::invalid_argument("coarsen_into: output size mismatch");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coarsen(fine.subspan(i * factor, factor));
    }
}

double parabola_eval(double start_value, const IncrementPair& pair, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("parabola_eval: u must lie in [0,1]");
    return start_value + u * pair.w + 6.0 * u * (1.0 - u) * pair.h_area;
}

double arch_covariance(double s, double t) {
    if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) {
        throw std::out_of_range("arch_covariance: arguments must lie in [0,1]");
    }
    // Ordered arguments make the result exactly symmetric.
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    return lo - lo * hi - 3.0 * lo * hi * (1.0 - lo) * (1.0 - hi);
}

// ---------------------------------------------------------------------------

void DensePath::validate() const {
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw std::invalid_argument("DensePath: need at least two nodes and one value per node");
    }
    if (grid.front() != 0.0 || grid.back() != 1.0) {
        throw std::invalid_argument("DensePath: grid must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("DensePath: grid must be strictly increasing");
        }
    }
}

std::vector<double> uniform_grid(std::size_t m) {
    if (m == 0) throw std::invalid_argument("uniform_grid: need at least one step");
    std::vector<double> g(m + 1);
    for (std::size_t i = 0; i <= m; ++i) g[i] = static_cast<double>(i) / static_cast<double>(m);
    return g;
}

DensePath sample_brownian_path(std::size_t m, RandomStream& rng) {
    DensePath path;
    path.grid = uniform_grid(m);
    path.values.resize(m + 1);
    path.values[0] = 0.0;
    const double sd = std::sqrt(1.0 / static_cast<double>(m));
    for (std::size_t i = 1; i <= m; ++i) path.values[i] = path.values[i - 1] + rng.normal(sd);
    return path;
}

// ---------------------------------------------------------------------------

BrownianPolynomial::BrownianPolynomial(std::shared_ptr<const PolyBasis> basis, double w1,
                                       std::vector<double> coeffs)
    : basis_(std::move(basis)), w1_(w1), coeffs_(std::move(coeffs)) {
    if (!basis_) throw std::invalid_argument("BrownianPolynomial: null basis");
    if (degree() > basis_->max_degree()) {
        throw std::out_of_range("BrownianPolynomial: degree " + std::to_string(degree()) +
                                " exceeds basis maximum " + std::to_string(basis_->max_degree()));
    }
}

double BrownianPolynomial::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("BrownianPolynomial: t must lie in [0,1]");
    double acc = w1_ * t;
    for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
        acc += coeffs_[k - 1] * basis_->eval_e(static_cast<int>(k), t);
    }
    return acc;
}

BrownianPolynomial sample_kl_coefficients(std::shared_ptr<const PolyBasis> basis, int n,
                                          RandomStream& rng) {
    if (!basis) throw std::invalid_argument("sample_kl_coefficients: null basis");
    if (n < 1 || n > basis->max_degree()) {
        throw std::out_of_range("sample_kl_coefficients: degree " + std::to_string(n) +
                                " outside [1," + std::to_string(basis->max_degree()) + "]");
    }
    const double w1 = rng.normal();
    std::vector<double> coeffs(n - 1);
    for (int k = 1; k < n; ++k) coeffs[k - 1] = rng.normal(std::sqrt(eigenvalue(k)));
    return BrownianPolynomial(std::move(basis), w1, std::move(coeffs));
}

double eval_polynomial_path(const BrownianPolynomial& p, double t) { return p(t); }

double extract_Ik(const DensePath& path, int k) {
    path.validate();
    if (path.steps() < 16) throw std::invalid_argument("extract_Ik: grid too coarse (need >= 16 steps)");
    const double x0 = path.values.front();
    const double x1 = path.values.back();
    double acc = 0.0;
    double prev = 0.0;  // integrand vanishes at t = 0 (bridge is pinned)
    for (std::size_t i = 1; i < path.grid.size(); ++i) {
        const double t = path.grid[i];
        const double bridge = path.values[i] - x0 - t * (x1 - x0);
        const double cur = bridge * eigenfunction_over_weight(k, t);
        acc += 0.5 * (t - path.grid[i - 1]) * (prev + cur);
        prev = cur;
    }
    return acc;
}

// ---------------------------------------------------------------------------

ArchSampler::ArchSampler(std::vector<double> interior_grid) : grid_(std::move(interior_grid)) {
    const std::size_t m = grid_.size();
    if (m == 0) throw std::invalid_argument("ArchSampler: empty grid");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(grid_[i] > 0.0 && grid_[i] < 1.0)) {
            throw std::invalid_argument("ArchSampler: grid must lie strictly inside (0,1)");
        }
        if (i > 0 && !(grid_[i] > grid_[i - 1])) {
            throw std::invalid_argument("ArchSampler: grid must be strictly increasing");
        }
    }
    Eigen::MatrixXd cov(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cov(i, j) = cov(j, i) = arch_covariance(grid_[i], grid_[j]);
        }
    }
    Eigen::MatrixXd factor;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
        factor = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        if (eig.info() != Eigen::Success) throw NumericalError("ArchSampler: eigendecomposition failed");
        Eigen::VectorXd vals = eig.eigenvalues();
        if (vals.minCoeff() < -1e-10) {
            throw NumericalError("ArchSampler: covariance matrix is not positive semi-definite");
        }
        for (Eigen::Index i = 0; i < vals.size(); ++i) vals[i] = vals[i] < 1e-12 ? 0.0 : std::sqrt(vals[i]);
        factor = eig.eigenvectors() * vals.asDiagonal();
    }
    factor_.assign(factor.data(), factor.data() + factor.size());
}

void ArchSampler::sample(RandomStream& rng, std::span<double> out) const {
    sample_batch(rng, 1, out);
}

void ArchSampler::sample_batch(RandomStream& rng, std::size_t count, std::span<double> out) const {
    const auto m = static_cast<Eigen::Index>(grid_.size());
    if (out.size() != count * grid_.size()) {
        throw std::invalid_argument("ArchSampler: output buffer has the wrong size");
    }
    Eigen::MatrixXd normals(m, static_cast<Eigen::Index>(count));
    for (Eigen::Index j = 0; j < normals.cols(); ++j) {
        for (Eigen::Index i = 0; i < m; ++i) normals(i, j) = rng.normal();
    }
    Eigen::Map<const Eigen::MatrixXd> factor(factor_.data(), m, m);
    Eigen::Map<Eigen::MatrixXd> result(out.data(), m, static_cast<Eigen::Index>(count));
    result.noalias() = factor * normals;
}

DensePath sample_arch(std::span<const double> interior_grid, RandomStream& rng) {
    ArchSampler sampler(std::vector<double>(interior_grid.begin(), interior_grid.end()));
    DensePath path;
    path.grid.reserve(sampler.size() + 2);
    path.grid.push_back(0.0);
    path.grid.insert(path.grid.end(), interior_grid.begin(), interior_grid.end());
    path.grid.push_back(1.0);
    path.values.assign(path.grid.size(), 0.0);
    sampler.sample(rng, std::span<double>(path.values).subspan(1, sampler.size()));
    return path;
}

}  // namespace polybm
