#pragma once

// Five one-step discretisations of Inhomogeneous Geometric Brownian Motion
//   dy = a(b - y) dt + sigma y dW
// sharing one step signature over IncrementPair data.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polybm/brownian.hpp"
#include "polybm/orthopoly.hpp"

namespace polybm {

struct IgbmParams {
    double a = 0.1;
    double b = 0.04;
    double sigma = 0.6;
    double y0 = 0.06;
    double horizon = 5.0;

    /// Stratonovich drift speed a + sigma^2 / 2.
    double adjusted_a() const { return a + 0.5 * sigma * sigma; }
    /// Stratonovich drift level 2ab / (2a + sigma^2); zero when a = sigma = 0.
    double adjusted_b() const;

    /// Throws std::invalid_argument unless a >= 0, sigma >= 0, horizon > 0.
    void validate() const;
};

enum class SchemeKind { LogOde, ParabolaOde, PiecewiseLinear, Milstein, EulerMaruyama };

inline constexpr std::array<SchemeKind, 5> kAllSchemes = {
    SchemeKind::LogOde, SchemeKind::ParabolaOde, SchemeKind::PiecewiseLinear,
    SchemeKind::Milstein, SchemeKind::EulerMaruyama};

/// "log-ode", "parabola", "linear", "milstein", "euler".
std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

/// (e^x - 1)/x, equal to 1 at x = 0.
double phi(double x);

/// Lie brackets of the Stratonovich vector fields f0 = a~(b~ - y), f1 = sigma y.
/// Both are constant in y.
double bracket_f1_f0(const IgbmParams& p);      // -a b sigma
double bracket_f1_f1_f0(const IgbmParams& p);   // a b sigma^2

double step_log_ode(double y, const IgbmParams& p, const IncrementPair& pair);

/// Parabola-ODE step with the inner time integral computed by 3-point
/// Gauss-Legendre quadrature.
double step_parabola(double y, const IgbmParams& p, const IncrementPair& pair);

/// Same step with a caller-supplied rule on [0,1].
double step_parabola(double y, const IgbmParams& p, const IncrementPair& pair,
                     const QuadratureRule& unit_rule);

double step_linear(double y, const IgbmParams& p, const IncrementPair& pair);
double step_milstein(double y, const IgbmParams& p, const IncrementPair& pair);
double step_euler(double y, const IgbmParams& p, const IncrementPair& pair);

double step(SchemeKind kind, double y, const IgbmParams& p, const IncrementPair& pair);

/// Folds the scheme over contiguous pairs starting from p.y0; returns Y_N.
double simulate(SchemeKind kind, const IgbmParams& p, std::span<const IncrementPair> pairs);

/// Y_0..Y_N.
std::vector<double> simulate_trajectory(SchemeKind kind, const IgbmParams& p,
                                        std::span<const IncrementPair> pairs);

}  // namespace polybm
