#pragma once

// Conditional moments of third-order iterated integrals of Brownian motion
// and time given (W, H), and the algebra tying (W, H, L) to the
// Stratonovich integrals.

#include "polybm/brownian.hpp"

namespace polybm {

/// Stratonovich iterated integrals over an interval of length h.
struct TripleIntegrals {
    double i_wt = 0.0;   // int int o dW du
    double i_tw = 0.0;   // int int dv o dW
    double i_wwt = 0.0;  // int int int o dW o dW du
    double i_wtw = 0.0;  // int int int o dW dv o dW
    double i_tww = 0.0;  // int int int dr o dW o dW
};

struct CondLevyEstimate {
    double mean = 0.0;
    double variance = 0.0;
};

/// E[int_s^t W_{s,u}^2 du | W, H] = hW^2/3 + hWH + 6hH^2/5 + h^2/15.
double cond_mean_sq_integral(const IncrementPair& pair);

/// E[L | W, H] = h^2/30 + 3hH^2/5.
double cond_mean_L(const IncrementPair& pair);

/// Var(L | W, H) = 11h^4/25200 + h^3 (W^2/720 + H^2/700).
double cond_var_L(const IncrementPair& pair);

CondLevyEstimate cond_levy(const IncrementPair& pair);

/// The five integrals expressed through (W, H, L).
TripleIntegrals triple_integrals_from_whl(double w, double h_area, double l_area, double h);

struct LevyAreas {
    double w = 0.0;
    double h_area = 0.0;
    double l_area = 0.0;
};

/// Direct discretisation of the five integrals on a uniform path over
/// [0,1] (interval length 1). Midpoint values multiply dW increments,
/// trapezoidal sums handle dt. Requires at least 1000 uniform steps.
TripleIntegrals discrete_triple_integrals(const DensePath& path);

/// W, H and L = (i_wwt - 2 i_wtw + i_tww) / 6 from the same discretisation.
LevyAreas discrete_levy_areas(const DensePath& path);

}  // namespace polybm
