#include "polybm/levy.hpp"

#include <cmath>
#include <stdexcept>

namespace polybm {

namespace {

void require_positive(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("interval length must be positive");
}

void require_uniform_fine_grid(const DensePath& path) {
    path.validate();
    const std::size_t m = path.steps();
    if (m < 1000) throw std::invalid_argument("discrete Levy areas need at least 1000 uniform steps");
    const double dt = 1.0 / static_cast<double>(m);
    for (std::size_t i = 1; i <= m; ++i) {
        if (std::abs(path.grid[i] - path.grid[i - 1] - dt) > 1e-9 * dt) {
            throw std::invalid_argument("discrete Levy areas need a uniform grid");
        }
    }
}

}  // namespace

double cond_mean_sq_integral(const IncrementPair& pair) {
    const double h = pair.length;
    require_positive(h);
    const double w = pair.w;
    const double a = pair.h_area;
    return h * w * w / 3.0 + h * w * a + 1.2 * h * a * a + h * h / 15.0;
}

double cond_mean_L(const IncrementPair& pair) {
    const double h = pair.length;
    require_positive(h);
    return h * h / 30.0 + 0.6 * h * pair.h_area * pair.h_area;
}

double cond_var_L(const IncrementPair& pair) {
    const double h = pair.length;
    require_positive(h);
    const double w = pair.w;
    const double a = pair.h_area;
    return 11.0 / 25200.0 * h * h * h * h + h * h * h * (w * w / 720.0 + a * a / 700.0);
}

CondLevyEstimate cond_levy(const IncrementPair& pair) {
    return {cond_mean_L(pair), cond_var_L(pair)};
}

TripleIntegrals triple_integrals_from_whl(double w, double h_area, double l_area, double h) {
    require_positive(h);
    TripleIntegrals out;
    const double hw2 = h * w * w / 6.0;
    const double hwh = 0.5 * h * w * h_area;
    out.i_wt = 0.5 * h * w + h * h_area;
    out.i_tw = 0.5 * h * w - h * h_area;
    out.i_wwt = hw2 + hwh + l_area;
    out.i_wtw = hw2 - 2.0 * l_area;
    out.i_tww = hw2 - hwh + l_area;
    return out;
}

TripleIntegrals discrete_triple_integrals(const DensePath& path) {
    require_uniform_fine_grid(path);
    const std::size_t m = path.steps();
    const double dt = 1.0 / static_cast<double>(m);
    const double x0 = path.values[0];

    TripleIntegrals out;
    double area = 0.0;      // int_0^u X dv
    double time_ito = 0.0;  // int_0^u v o dX_v
    for (std::size_t i = 0; i < m; ++i) {
        const double xa = path.values[i] - x0;
        const double xb = path.values[i + 1] - x0;
        const double dx = xb - xa;
        const double t_mid = 0.5 * (path.grid[i] + path.grid[i + 1]);

        const double area_next = area + 0.5 * dt * (xa + xb);
        const double time_ito_next = time_ito + t_mid * dx;

        out.i_wt += 0.5 * dt * (xa + xb);
        out.i_tw += t_mid * dx;
        out.i_wwt += 0.5 * dt * 0.5 * (xa * xa + xb * xb);
        out.i_wtw += 0.5 * (area + area_next) * dx;
        out.i_tww += 0.5 * (time_ito + time_ito_next) * dx;

        area = area_next;
        time_ito = time_ito_next;
    }
    return out;
}

LevyAreas discrete_levy_areas(const DensePath& path) {
    const TripleIntegrals ti = discrete_triple_integrals(path);
    LevyAreas out;
    out.w = path.values.back() - path.values.front();
    // H = int_0^1 X du - W / 2 on the unit interval.
    out.h_area = ti.i_wt - 0.5 * out.w;
    out.l_area = (ti.i_wwt - 2.0 * ti.i_wtw + ti.i_tww) / 6.0;
    return out;
}

}  // namespace polybm
