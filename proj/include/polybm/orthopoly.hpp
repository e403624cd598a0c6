#pragma once

// Legendre and (-1,-1)-Jacobi polynomials, the orthonormal eigenfunctions
// e_k of the Brownian bridge covariance under the weight 1/(t(1-t)), and
// Gauss-Legendre quadrature.

#include <cstddef>
#include <span>
#include <vector>

namespace polybm {

/// Dense polynomial in the monomial basis, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    /// Degree of the highest nonzero coefficient (0 for the zero polynomial).
    int degree() const;
    double leading() const;
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Horner evaluation.
    double operator()(double x) const;
    Polynomial derivative() const;

    /// Quotient by (x^2 - 1). The remainder must vanish, i.e. the polynomial
    /// has roots at +-1; the discarded remainder is returned through
    /// `remainder_norm` when non-null.
    Polynomial divide_by_x2_minus_1(double* remainder_norm = nullptr) const;

    /// p(2t - 1) expanded in powers of t.
    Polynomial shifted_to_unit_interval() const;

    Polynomial operator*(double s) const;

private:
    std::vector<double> coeffs_;
};

/// Q_k(x) via the Bonnet three-term recurrence.
double legendre(int k, double x);

/// Q_k'(x) via Q'_{n+1} = Q'_{n-1} + (2n+1) Q_n.
double legendre_derivative(int k, double x);

/// Monomial coefficients of P_k^(-1,-1) on [-1,1] from the three-term
/// recurrence n(n+2)P_{n+2} = (n+1)(2n+1)x P_{n+1} - n(n+1)P_n, k >= 2.
Polynomial jacobi_m1m1_coeffs(int k);

/// P_k^(-1,-1)(x) by running the same recurrence on values at x, k >= 2.
/// Stable where the monomial expansion is not.
double jacobi_m1m1_eval_recurrence(int k, double x);

/// P_k^(-1,-1)(x) as the rescaled Legendre difference
/// (k-1)/(4k-2) * (Q_k(x) - Q_{k-2}(x)), k >= 2.
double jacobi_m1m1_eval_legendre(int k, double x);

/// Normalisation sqrt(k(k+1)(2k+1))/k linking e_k to P_{k+1}^(-1,-1)(2t-1).
double eigen_scale(int k);

/// lambda_k = 1/(k(k+1)), the variance of the k-th bridge coefficient.
double eigenvalue(int k);

/// e_k(t) for any k >= 1 through the Legendre-difference route.
/// Positive leading coefficient, so e_1(t) = -sqrt(6) t (1 - t).
double eigenfunction(int k, double t);

/// e_k'(t) = scale_k * k * Q_k(2t - 1).
double eigenfunction_derivative(int k, double t);

/// e_k''(t) = 2 * scale_k * k * Q_k'(2t - 1).
double eigenfunction_second_derivative(int k, double t);

/// e_k(t) / (t(1-t)) without touching the singular weight:
/// -2 scale_k Q_k'(2t - 1) / (k + 1).
double eigenfunction_over_weight(int k, double t);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    /// Affine map of a rule on [-1,1] onto [lo, hi].
    QuadratureRule mapped(double lo, double hi) const;

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * f(nodes[i]);
        }
        return acc;
    }
};

/// n-point Gauss-Legendre rule on [-1,1] (Newton iteration on Q_n),
/// nodes ascending, 1 <= n <= 64.
QuadratureRule gauss_legendre(int n);

/// Precomputed coefficient tables for P_k^(-1,-1) (k = 2..max_degree) and
/// e_k (k = 1..max_degree-1). Immutable after construction.
class PolyBasis {
public:
    static constexpr int kMaxSupportedDegree = 64;

    explicit PolyBasis(int max_degree);

    int max_degree() const { return max_degree_; }
    /// Largest valid eigenfunction index.
    int max_index() const { return max_degree_ - 1; }

    const Polynomial& jacobi(int k) const;
    /// e_k in powers of t on [0,1]. Ill-conditioned at high k; evaluation
    /// goes through eval_e instead.
    const Polynomial& e_coeffs(int k) const;

    /// e_k(t), Legendre-difference route.
    double eval_e(int k, double t) const;

    /// int_0^1 e_i e_j / (t(1-t)) dt, exact: the roots +-1 are divided out
    /// of P_{j+1}^(-1,-1) symbolically and the remaining polynomial of
    /// degree i+j is integrated with ceil((i+j+1)/2) Gauss nodes.
    double inner_product_mu(int i, int j) const;

private:
    void check_index(int k) const;

    int max_degree_;
    std::vector<Polynomial> jacobi_;   // index k, entries 0 and 1 empty
    std::vector<Polynomial> reduced_;  // P_k / (x^2 - 1)
    std::vector<Polynomial> e_;        // index k, entry 0 empty
};

}  // namespace polybm
