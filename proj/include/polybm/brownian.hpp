#pragma once

// Brownian data: (increment, space-time Levy area) pairs, polynomial
// Karhunen-Loeve paths, Brownian parabolas and arches.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "polybm/orthopoly.hpp"
#include "polybm/random.hpp"

namespace polybm {

/// Brownian information over one interval of length `length`:
/// w = W_{s,t} and h_area = H_{s,t} = (1/h) int_s^t (W_{s,u} - (u-s)/h W_{s,t}) du.
struct IncrementPair {
    double w = 0.0;
    double h_area = 0.0;
    double length = 1.0;
};

/// w ~ N(0, length), h_area ~ N(0, length/12), independent.
IncrementPair sample_pair(double length, RandomStream& rng);

/// Fills `out` with independent pairs of the given length.
void sample_pairs(double length, std::span<IncrementPair> out, RandomStream& rng);

/// Merges consecutive equal-length intervals into one. Exact: the result is
/// the (W, H) of the concatenated path.
IncrementPair coarsen(std::span<const IncrementPair> pairs);

/// Coarsens `fine` in groups of `factor` into `out` (size fine.size()/factor).
void coarsen_into(std::span<const IncrementPair> fine, std::size_t factor,
                  std::span<IncrementPair> out);

/// start + u w + 6u(1-u) h_area, u the normalised position in the interval.
double parabola_eval(double start_value, const IncrementPair& pair, double u);

/// Covariance of the standard Brownian arch:
/// min(s,t) - st - 3st(1-s)(1-t).
double arch_covariance(double s, double t);

/// Path sampled on a strictly increasing grid from 0 to 1.
struct DensePath {
    std::vector<double> grid;
    std::vector<double> values;

    std::size_t steps() const { return grid.empty() ? 0 : grid.size() - 1; }
    /// Throws std::invalid_argument unless the grid runs from 0 to 1 and is
    /// strictly increasing with one value per node.
    void validate() const;
};

/// Uniform grid 0, 1/m, ..., 1.
std::vector<double> uniform_grid(std::size_t m);

/// Random-walk Brownian motion on a uniform grid with m steps over [0,1].
DensePath sample_brownian_path(std::size_t m, RandomStream& rng);

/// Degree-n polynomial path W^n(t) = w1 t + sum_{k<n} I_k e_k(t).
class BrownianPolynomial {
public:
    BrownianPolynomial(std::shared_ptr<const PolyBasis> basis, double w1, std::vector<double> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) + 1; }
    double w1() const { return w1_; }
    /// I_1..I_{n-1}; coeffs()[k-1] is I_k.
    const std::vector<double>& coeffs() const { return coeffs_; }
    const PolyBasis& basis() const { return *basis_; }

    double operator()(double t) const;

private:
    std::shared_ptr<const PolyBasis> basis_;
    double w1_;
    std::vector<double> coeffs_;
};

/// w1 ~ N(0,1), I_k ~ N(0, 1/(k(k+1))) for k = 1..n-1.
BrownianPolynomial sample_kl_coefficients(std::shared_ptr<const PolyBasis> basis, int n,
                                          RandomStream& rng);

/// W^n(t); throws std::out_of_range outside [0,1].
double eval_polynomial_path(const BrownianPolynomial& p, double t);

/// Trapezoidal estimate of I_k = int_0^1 B_t e_k(t)/(t(1-t)) dt where B is
/// the bridge of `path` (the chord from the first to the last value is
/// subtracted first). Needs at least 16 steps.
double extract_Ik(const DensePath& path, int k);

/// Gaussian draws of the standard Brownian arch on a fixed interior grid.
/// The covariance matrix is factorised once; sampling is a triangular
/// matrix product.
class ArchSampler {
public:
    explicit ArchSampler(std::vector<double> interior_grid);

    const std::vector<double>& grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }

    /// One draw at the interior nodes.
    void sample(RandomStream& rng, std::span<double> out) const;

    /// `count` draws written row-major into `out` (count x size()). Equivalent
    /// to `count` calls of sample() on the same stream.
    void sample_batch(RandomStream& rng, std::size_t count, std::span<double> out) const;

private:
    std::vector<double> grid_;
    std::vector<double> factor_;  // column-major size x size, lower
};

/// One arch draw on the interior grid, returned with the pinned endpoints
/// 0 and 1 appended (value 0 there).
DensePath sample_arch(std::span<const double> interior_grid, RandomStream& rng);

}  // namespace polybm
