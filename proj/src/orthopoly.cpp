#include "polybm/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "polybm/error.hpp"

namespace polybm {

namespace {

void require_jacobi_degree(int k) {
    if (k < 2) {
        throw std::out_of_range("(-1,-1)-Jacobi degree must be >= 2, got " + std::to_string(k));
    }
}

void require_eigen_index(int k) {
    if (k < 1) {
        throw std::out_of_range("eigenfunction index must be >= 1, got " + std::to_string(k));
    }
}

void require_unit_interval(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::out_of_range("t must lie in [0,1]");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

int Polynomial::degree() const {
    for (int i = static_cast<int>(coeffs_.size()) - 1; i > 0; --i) {
        if (coeffs_[i] != 0.0) return i;
    }
    return 0;
}

double Polynomial::leading() const {
    return coeffs_.empty() ? 0.0 : coeffs_[degree()];
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d[i - 1] = static_cast<double>(i) * coeffs_[i];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::divide_by_x2_minus_1(double* remainder_norm) const {
    const int n = degree();
    if (n < 2) {
        if (remainder_norm) *remainder_norm = coeffs_.empty() ? 0.0 : std::abs(coeffs_[0]);
        return Polynomial({0.0});
    }
    // Synthetic division from the top: q_{i-2} = r_i, then r_{i-2} += q_{i-2}.
    std::vector<double> r(coeffs_.begin(), coeffs_.begin() + n + 1);
    std::vector<double> q(n - 1, 0.0);
    for (int i = n; i >= 2; --i) {
        q[i - 2] = r[i];
        r[i - 2] += r[i];
        r[i] = 0.0;
    }
    if (remainder_norm) *remainder_norm = std::abs(r[0]) + std::abs(r[1]);
    return Polynomial(std::move(q));
}

Polynomial Polynomial::shifted_to_unit_interval() const {
    // Horner in polynomial arithmetic with x = 2t - 1.
    std::vector<double> acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += 2.0 * acc[i];
            next[i] -= acc[i];
        }
        next[0] += *it;
        acc = std::move(next);
    }
    acc.resize(std::max<std::size_t>(coeffs_.size(), 1));
    return Polynomial(std::move(acc));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Legendre / Jacobi

double legendre(int k, double x) {
    if (k < 0) throw std::out_of_range("Legendre degree must be >= 0");
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int n = 1; n < k; ++n) {
        const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double legendre_derivative(int k, double x) {
    if (k < 0) throw std::out_of_range("Legendre degree must be >= 0");
    if (k == 0) return 0.0;
    // Walk Q_n and Q'_n together.
    double q_prev = 1.0, q_cur = x;      // Q_0, Q_1
    double d_prev = 0.0, d_cur = 1.0;    // Q'_0, Q'_1
    for (int n = 1; n < k; ++n) {
        const double q_next = ((2.0 * n + 1.0) * x * q_cur - n * q_prev) / (n + 1.0);
        const double d_next = d_prev + (2.0 * n + 1.0) * q_cur;
        q_prev = q_cur;
        q_cur = q_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    return d_cur;
}

namespace {

// R_k = P_k^(-1,-1) / (x^2 - 1). The recurrence is linear in P and only
// multiplies by x, so R_k obeys it too, starting from R_2 = 1/4, R_3 = x/2.
std::vector<double> jacobi_reduced(int k) {
    std::vector<double> r_prev{0.25};
    std::vector<double> r_cur{0.0, 0.5};
    if (k == 2) return r_prev;
    for (int n = 2; n + 1 < k; ++n) {
        // n(n+2) R_{n+2} = (n+1)(2n+1) x R_{n+1} - n(n+1) R_n
        std::vector<double> next(r_cur.size() + 1, 0.0);
        const double a = (n + 1.0) * (2.0 * n + 1.0);
        const double b = n * (n + 1.0);
        const double denom = n * (n + 2.0);
        for (std::size_t i = 0; i < r_cur.size(); ++i) next[i + 1] += a * r_cur[i];
        for (std::size_t i = 0; i < r_prev.size(); ++i) next[i] -= b * r_prev[i];
        for (double& v : next) v /= denom;
        r_prev = std::move(r_cur);
        r_cur = std::move(next);
    }
    return r_cur;
}

}  // namespace

Polynomial jacobi_m1m1_coeffs(int k) {
    require_jacobi_degree(k);
    const std::vector<double> r = jacobi_reduced(k);
    std::vector<double> p(r.size() + 2, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        p[i + 2] += r[i];
        p[i] -= r[i];
    }
    return Polynomial(std::move(p));
}

double jacobi_m1m1_eval_recurrence(int k, double x) {
    require_jacobi_degree(k);
    const double s = x * x - 1.0;
    double p_prev = 0.25 * s;   // P_2
    double p_cur = 0.5 * x * s;  // P_3
    if (k == 2) return p_prev;
    for (int n = 2; n + 1 < k; ++n) {
        const double next = ((n + 1.0) * (2.0 * n + 1.0) * x * p_cur - n * (n + 1.0) * p_prev) / (n * (n + 2.0));
        p_prev = p_cur;
        p_cur = next;
    }
    return p_cur;
}

double jacobi_m1m1_eval_legendre(int k, double x) {
    require_jacobi_degree(k);
    const int n = k - 1;
    // Q_{n-1} and Q_{n+1} from one recurrence sweep.
    double q_prev = 0.0, q_cur = 1.0;  // Q_{m-1}, Q_m at m = 0
    double q_nm1 = 0.0;
    for (int m = 0; m <= n; ++m) {
        if (m == n - 1) q_nm1 = q_cur;
        const double next = ((2.0 * m + 1.0) * x * q_cur - m * q_prev) / (m + 1.0);
        q_prev = q_cur;
        q_cur = next;
    }
    return n / (4.0 * n + 2.0) * (q_cur - q_nm1);
}

double eigen_scale(int k) {
    require_eigen_index(k);
    const double kd = k;
    return std::sqrt(kd * (kd + 1.0) * (2.0 * kd + 1.0)) / kd;
}

double eigenvalue(int k) {
    require_eigen_index(k);
    return 1.0 / (static_cast<double>(k) * (k + 1.0));
}

double eigenfunction(int k, double t) {
    require_eigen_index(k);
    require_unit_interval(t);
    if (t == 0.0 || t == 1.0) return 0.0;
    return eigen_scale(k) * jacobi_m1m1_eval_legendre(k + 1, 2.0 * t - 1.0);
}

double eigenfunction_derivative(int k, double t) {
    require_eigen_index(k);
    require_unit_interval(t);
    return eigen_scale(k) * k * legendre(k, 2.0 * t - 1.0);
}

double eigenfunction_second_derivative(int k, double t) {
    require_eigen_index(k);
    require_unit_interval(t);
    return 2.0 * eigen_scale(k) * k * legendre_derivative(k, 2.0 * t - 1.0);
}

double eigenfunction_over_weight(int k, double t) {
    require_eigen_index(k);
    require_unit_interval(t);
    return -2.0 * eigen_scale(k) * legendre_derivative(k, 2.0 * t - 1.0) / (k + 1.0);
}

// ---------------------------------------------------------------------------
// Quadrature

QuadratureRule QuadratureRule::mapped(double lo, double hi) const {
    QuadratureRule out;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    out.nodes.reserve(nodes.size());
    out.weights.reserve(weights.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out.nodes.push_back(mid + half * nodes[i]);
        out.weights.push_back(half * weights[i]);
    }
    return out;
}

namespace {

// Q_n(x) and Q_n'(x); x must not be +-1.
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double q_prev = 1.0, q_cur = x;
    for (int m = 1; m < n; ++m) {
        const double next = ((2.0 * m + 1.0) * x * q_cur - m * q_prev) / (m + 1.0);
        q_prev = q_cur;
        q_cur = next;
    }
    const double dq = n * (x * q_cur - q_prev) / (x * x - 1.0);
    return {q_cur, dq};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1 || n > 64) {
        throw std::out_of_range("Gauss-Legendre node count must be in [1,64], got " + std::to_string(n));
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Roots come in +- pairs; Newton on the positive one.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [q, dq] = legendre_with_derivative(n, x);
            const double dx = q / dq;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("Gauss-Legendre Newton iteration did not converge");
        }
        if (2 * i + 1 == n) x = 0.0;
        const double dq = legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dq * dq);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// ---------------------------------------------------------------------------
// PolyBasis

PolyBasis::PolyBasis(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 2 || max_degree > kMaxSupportedDegree) {
        throw std::out_of_range("PolyBasis max_degree must be in [2," +
                                std::to_string(kMaxSupportedDegree) + "], got " +
                                std::to_string(max_degree));
    }
    jacobi_.resize(max_degree + 1);
    reduced_.resize(max_degree + 1);
    e_.resize(max_degree);
    for (int k = 2; k <= max_degree; ++k) {
        jacobi_[k] = jacobi_m1m1_coeffs(k);
        reduced_[k] = Polynomial(jacobi_reduced(k));
    }
    for (int k = 1; k < max_degree; ++k) {
        e_[k] = jacobi_[k + 1].shifted_to_unit_interval() * eigen_scale(k);
    }
}

void PolyBasis::check_index(int k) const {
    if (k < 1 || k > max_index()) {
        throw std::out_of_range("eigenfunction index " + std::to_string(k) + " outside [1," +
                                std::to_string(max_index()) + "]");
    }
}

const Polynomial& PolyBasis::jacobi(int k) const {
    if (k < 2 || k > max_degree_) {
        throw std::out_of_range("Jacobi degree " + std::to_string(k) + " outside [2," +
                                std::to_string(max_degree_) + "]");
    }
    return jacobi_[k];
}

const Polynomial& PolyBasis::e_coeffs(int k) const {
    check_index(k);
    return e_[k];
}

double PolyBasis::eval_e(int k, double t) const {
    check_index(k);
    return eigenfunction(k, t);
}

double PolyBasis::inner_product_mu(int i, int j) const {
    check_index(i);
    check_index(j);
    // t = (x+1)/2: t(1-t) = (1-x^2)/4, dt = dx/2, so
    // int e_i e_j / (t(1-t)) dt = -2 s_i s_j int P_{i+1}(x) R_{j+1}(x) dx
    // with P_{j+1} = (x^2 - 1) R_{j+1}.
    const int degree = i + j;
    const QuadratureRule rule = gauss_legendre((degree + 2) / 2);
    const Polynomial& reduced = reduced_[j + 1];
    const double sum = rule.integrate([&](double x) {
        return jacobi_m1m1_eval_legendre(i + 1, x) * reduced(x);
    });
    return -2.0 * eigen_scale(i) * eigen_scale(j) * sum;
}

}  // namespace polybm
