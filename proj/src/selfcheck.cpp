#include "polybm/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <sstream>

#include "polybm/brownian.hpp"
#include "polybm/igbm.hpp"
#include "polybm/levy.hpp"
#include "polybm/orthopoly.hpp"

namespace polybm {

namespace {

using Suite = std::function<std::string()>;  // empty string means pass

std::string fmt(const char* what, double value, double limit) {
    std::ostringstream os;
    os.precision(3);
    os << what << " " << value << " exceeds " << limit;
    return os.str();
}

std::string check_orthonormality() {
    PolyBasis basis(21);
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            worst = std::max(worst, std::abs(basis.inner_product_mu(i, j) - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst < 1e-10 ? "" : fmt("max |<e_i,e_j> - delta_ij|", worst, 1e-10);
}

std::string check_jacobi_routes() {
    double worst = 0.0;
    for (int k = 2; k <= 50; ++k) {
        for (int i = 0; i < 200; ++i) {
            const double x = -1.0 + 2.0 * i / 199.0;
            const double a = jacobi_m1m1_eval_recurrence(k, x);
            const double b = jacobi_m1m1_eval_legendre(k, x);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
        }
    }
    return worst < 1e-10 ? "" : fmt("recurrence vs Legendre route", worst, 1e-10);
}

std::string check_gauss_legendre() {
    for (int n = 1; n <= 10; ++n) {
        const QuadratureRule rule = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            const double got = rule.integrate([d](double x) { return std::pow(x, d); });
            const double want = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
            if (std::abs(got - want) > 1e-13) return fmt("Gauss-Legendre moment error", std::abs(got - want), 1e-13);
        }
    }
    return "";
}

std::string check_coarsening() {
    RandomStream rng(7, 0);
    std::vector<IncrementPair> fine(64);
    sample_pairs(1.0 / 64.0, fine, rng);
    std::vector<IncrementPair> mid(8);
    coarsen_into(fine, 8, mid);
    const IncrementPair direct = coarsen(fine);
    const IncrementPair nested = coarsen(mid);
    const double err = std::abs(direct.w - nested.w) + std::abs(direct.h_area - nested.h_area);
    return err < 1e-13 ? "" : fmt("nested coarsening mismatch", err, 1e-13);
}

std::string check_polynomial_endpoints() {
    auto basis = std::make_shared<const PolyBasis>(12);
    RandomStream rng(11, 0);
    const BrownianPolynomial p = sample_kl_coefficients(basis, 12, rng);
    const double err = std::abs(p(0.0)) + std::abs(p(1.0) - p.w1());
    return err < 1e-12 ? "" : fmt("polynomial endpoint error", err, 1e-12);
}

std::string check_levy_identities() {
    RandomStream rng(13, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double h = 0.1 + std::abs(rng.normal());
        const double w = rng.normal(std::sqrt(h));
        const double a = rng.normal(std::sqrt(h / 12.0));
        const double l = rng.normal(h);
        const TripleIntegrals t = triple_integrals_from_whl(w, a, l, h);
        const double scale = std::max(1.0, h * w * w);
        worst = std::max(worst, std::abs(t.i_wwt + t.i_wtw + t.i_tww - 0.5 * h * w * w) / scale);
        worst = std::max(worst, std::abs(t.i_wwt - 2.0 * t.i_wtw + t.i_tww - 6.0 * l) / scale);
        worst = std::max(worst, std::abs(t.i_wt + t.i_tw - h * w) / scale);
    }
    return worst < 1e-13 ? "" : fmt("triple-integral identity error", worst, 1e-13);
}

std::string check_igbm_deterministic_flow() {
    IgbmParams p;
    p.sigma = 0.0;
    const IncrementPair pair{0.0, 0.0, 0.1};
    const double exact = p.b + (p.y0 - p.b) * std::exp(-p.a * pair.length);
    double worst = 0.0;
    for (SchemeKind k : {SchemeKind::LogOde, SchemeKind::ParabolaOde, SchemeKind::PiecewiseLinear}) {
        worst = std::max(worst, std::abs(step(k, p.y0, p, pair) - exact));
    }
    return worst < 1e-14 ? "" : fmt("sigma = 0 flow error", worst, 1e-14);
}

std::string check_igbm_positivity() {
    const IgbmParams p;
    RandomStream rng(17, 0);
    std::vector<IncrementPair> pairs(200);
    sample_pairs(p.horizon / 200.0, pairs, rng);
    for (SchemeKind k : kAllSchemes) {
        for (double y : simulate_trajectory(k, p, pairs)) {
            if (!(y >= 0.0) || !std::isfinite(y)) return std::string(scheme_name(k)) + " left [0, inf)";
        }
    }
    return "";
}

const std::vector<std::pair<const char*, Suite>>& suites() {
    static const std::vector<std::pair<const char*, Suite>> all = {
        {"orthopoly.orthonormality", check_orthonormality},
        {"orthopoly.jacobi_routes", check_jacobi_routes},
        {"orthopoly.gauss_legendre", check_gauss_legendre},
        {"brownian.coarsening", check_coarsening},
        {"brownian.polynomial_endpoints", check_polynomial_endpoints},
        {"levy.identities", check_levy_identities},
        {"igbm.deterministic_flow", check_igbm_deterministic_flow},
        {"igbm.positivity", check_igbm_positivity},
    };
    return all;
}

}  // namespace

std::size_t self_check_count() { return suites().size(); }

std::vector<CheckResult> run_self_checks() {
    std::vector<CheckResult> out;
    for (const auto& [name, suite] : suites()) {
        CheckResult r;
        r.name = name;
        try {
            r.detail = suite();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace polybm
