#include "polybm/igbm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polybm {

namespace {

void require_positive_length(const IncrementPair& pair) {
    if (!(pair.length > 0.0)) throw std::invalid_argument("step: interval length must be positive");
}

const QuadratureRule& unit_gauss3() {
    static const QuadratureRule rule = gauss_legendre(3).mapped(0.0, 1.0);
    return rule;
}

}  // namespace

double IgbmParams::adjusted_b() const {
    const double denom = 2.0 * a + sigma * sigma;
    return denom == 0.0 ? 0.0 : 2.0 * a * b / denom;
}

void IgbmParams::validate() const {
    if (!(a >= 0.0)) throw std::invalid_argument("IGBM: a must be >= 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("IGBM: sigma must be >= 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("IGBM: horizon must be > 0");
    if (!std::isfinite(b) || !std::isfinite(y0) || !std::isfinite(a) || !std::isfinite(sigma) ||
        !std::isfinite(horizon)) {
        throw std::invalid_argument("IGBM: parameters must be finite");
    }
}

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::LogOde: return "log-ode";
        case SchemeKind::ParabolaOde: return "parabola";
        case SchemeKind::PiecewiseLinear: return "linear";
        case SchemeKind::Milstein: return "milstein";
        case SchemeKind::EulerMaruyama: return "euler";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    for (SchemeKind k : kAllSchemes) {
        if (scheme_name(k) == name) return k;
    }
    return std::nullopt;
}

double phi(double x) {
    if (std::abs(x) < 1e-5) return 1.0 + x * (0.5 + x / 6.0);
    return std::expm1(x) / x;
}

double bracket_f1_f0(const IgbmParams& p) { return -p.a * p.b * p.sigma; }

double bracket_f1_f1_f0(const IgbmParams& p) { return p.a * p.b * p.sigma * p.sigma; }

double step_log_ode(double y, const IgbmParams& p, const IncrementPair& pair) {
    require_positive_length(pair);
    const double h = pair.length;
    const double exponent = -p.adjusted_a() * h + p.sigma * pair.w;
    // z' = exponent z + abh + [f1,f0] hH + [f1,[f1,f0]] E[L | W, H], solved exactly.
    const double forcing = p.a * p.b * h + bracket_f1_f0(p) * h * pair.h_area +
                           bracket_f1_f1_f0(p) * (0.6 * pair.h_area * pair.h_area * h + h * h / 30.0);
    return y * std::exp(exponent) + forcing * phi(exponent);
}

double step_parabola(double y, const IgbmParams& p, const IncrementPair& pair,
                     const QuadratureRule& unit_rule) {
    require_positive_length(pair);
    const double h = pair.length;
    const double a_adj = p.adjusted_a();
    const double exponent = -a_adj * h + p.sigma * pair.w;
    // int_0^h exp(a~ s - sigma W^_s) ds with s = h u.
    const double integral = h * unit_rule.integrate([&](double u) {
        return std::exp(a_adj * h * u - p.sigma * parabola_eval(0.0, pair, u));
    });
    return std::exp(exponent) * (y + p.a * p.b * integral);
}

double step_parabola(double y, const IgbmParams& p, const IncrementPair& pair) {
    return step_parabola(y, p, pair, unit_gauss3());
}

double step_linear(double y, const IgbmParams& p, const IncrementPair& pair) {
    require_positive_length(pair);
    const double h = pair.length;
    const double exponent = -p.adjusted_a() * h + p.sigma * pair.w;
    return y * std::exp(exponent) + p.a * p.b * h * phi(exponent);
}

double step_milstein(double y, const IgbmParams& p, const IncrementPair& pair) {
    require_positive_length(pair);
    const double h = pair.length;
    const double w = pair.w;
    const double next = y + p.adjusted_a() * (p.adjusted_b() - y) * h + p.sigma * y * w +
                        0.5 * p.sigma * p.sigma * y * w * w;
    return std::max(0.0, next);
}

double step_euler(double y, const IgbmParams& p, const IncrementPair& pair) {
    require_positive_length(pair);
    const double next = y + p.a * (p.b - y) * pair.length + p.sigma * y * pair.w;
    return std::max(0.0, next);
}

double step(SchemeKind kind, double y, const IgbmParams& p, const IncrementPair& pair) {
    switch (kind) {
        case SchemeKind::LogOde: return step_log_ode(y, p, pair);
        case SchemeKind::ParabolaOde: return step_parabola(y, p, pair);
        case SchemeKind::PiecewiseLinear: return step_linear(y, p, pair);
        case SchemeKind::Milstein: return step_milstein(y, p, pair);
        case SchemeKind::EulerMaruyama: return step_euler(y, p, pair);
    }
    throw std::invalid_argument("unknown scheme");
}

double simulate(SchemeKind kind, const IgbmParams& p, std::span<const IncrementPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("simulate: no steps");
    double y = p.y0;
    for (const IncrementPair& pair : pairs) y = step(kind, y, p, pair);
    return y;
}

std::vector<double> simulate_trajectory(SchemeKind kind, const IgbmParams& p,
                                        std::span<const IncrementPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("simulate: no steps");
    std::vector<double> out;
    out.reserve(pairs.size() + 1);
    out.push_back(p.y0);
    for (const IncrementPair& pair : pairs) out.push_back(step(kind, out.back(), p, pair));
    return out;
}

}  // namespace polybm
