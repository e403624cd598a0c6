#include "polybm/polybm.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "polybm/brownian.hpp"
#include "polybm/error.hpp"
#include "polybm/harness.hpp"
#include "polybm/igbm.hpp"
#include "polybm/levy.hpp"
#include "polybm/orthopoly.hpp"
#include "polybm/random.hpp"
#include "polybm/selfcheck.hpp"

struct polybm_basis {
    std::shared_ptr<const polybm::PolyBasis> impl;
};

struct polybm_stream {
    polybm::RandomStream impl;
};

struct polybm_report {
    polybm::ConvergenceReport impl;
};

namespace {

thread_local std::string g_last_error;

polybm_status fail(polybm_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

template <class F>
polybm_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return POLYBM_OK;
    } catch (const std::out_of_range& e) {
        return fail(POLYBM_OUT_OF_RANGE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(POLYBM_INVALID_ARGUMENT, e.what());
    } catch (const polybm::NumericalError& e) {
        return fail(POLYBM_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(POLYBM_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(POLYBM_INTERNAL, e.what());
    } catch (...) {
        return fail(POLYBM_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw std::invalid_argument(std::string(what) + " must not be null");
}

polybm::IncrementPair to_pair(const polybm_pair& p) { return {p.w, p.h_area, p.length}; }

polybm_pair from_pair(const polybm::IncrementPair& p) { return {p.w, p.h_area, p.length}; }

std::vector<polybm::IncrementPair> to_pairs(const polybm_pair* pairs, size_t count) {
    if (count > 0) require(pairs, "pairs");
    std::vector<polybm::IncrementPair> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = to_pair(pairs[i]);
    return out;
}

polybm::IgbmParams to_params(const polybm_igbm_params& p) {
    polybm::IgbmParams out;
    out.a = p.a;
    out.b = p.b;
    out.sigma = p.sigma;
    out.y0 = p.y0;
    out.horizon = p.horizon;
    return out;
}

polybm_igbm_params from_params(const polybm::IgbmParams& p) { return {p.a, p.b, p.sigma, p.y0, p.horizon}; }

polybm::SchemeKind to_scheme(polybm_scheme s) {
    switch (s) {
        case POLYBM_SCHEME_LOG_ODE: return polybm::SchemeKind::LogOde;
        case POLYBM_SCHEME_PARABOLA: return polybm::SchemeKind::ParabolaOde;
        case POLYBM_SCHEME_LINEAR: return polybm::SchemeKind::PiecewiseLinear;
        case POLYBM_SCHEME_MILSTEIN: return polybm::SchemeKind::Milstein;
        case POLYBM_SCHEME_EULER: return polybm::SchemeKind::EulerMaruyama;
    }
    throw std::invalid_argument("unknown scheme id");
}

polybm_scheme from_scheme(polybm::SchemeKind s) {
    switch (s) {
        case polybm::SchemeKind::LogOde: return POLYBM_SCHEME_LOG_ODE;
        case polybm::SchemeKind::ParabolaOde: return POLYBM_SCHEME_PARABOLA;
        case polybm::SchemeKind::PiecewiseLinear: return POLYBM_SCHEME_LINEAR;
        case polybm::SchemeKind::Milstein: return POLYBM_SCHEME_MILSTEIN;
        case polybm::SchemeKind::EulerMaruyama: return POLYBM_SCHEME_EULER;
    }
    return POLYBM_SCHEME_LOG_ODE;
}

polybm_error_row from_row(const polybm::ErrorRow& r) {
    return {from_scheme(r.scheme), r.steps, r.h, r.error, r.std_err};
}

void copy_truncated(char* dst, size_t cap, const std::string& src) {
    const size_t n = std::min(cap - 1, src.size());
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* polybm_last_error(void) { return g_last_error.c_str(); }

const char* polybm_version(void) { return POLYBM_VERSION_STRING; }

polybm_status polybm_legendre(int k, double x, double* out) {
    return guarded([&] {
        require(out, "out");
        if (k < 0) throw std::out_of_range("legendre: degree must be >= 0");
        *out = polybm::legendre(k, x);
    });
}

polybm_status polybm_jacobi_m1m1(int k, double x, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = polybm::jacobi_m1m1_eval_legendre(k, x);
    });
}

polybm_status polybm_eigenfunction(int k, double t, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = polybm::eigenfunction(k, t);
    });
}

polybm_status polybm_eigenvalue(int k, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = polybm::eigenvalue(k);
    });
}

polybm_status polybm_gauss_legendre(int n, double* nodes, double* weights) {
    return guarded([&] {
        require(nodes, "nodes");
        require(weights, "weights");
        const polybm::QuadratureRule rule = polybm::gauss_legendre(n);
        std::copy(rule.nodes.begin(), rule.nodes.end(), nodes);
        std::copy(rule.weights.begin(), rule.weights.end(), weights);
    });
}

polybm_status polybm_basis_new(int max_degree, polybm_basis** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        auto impl = std::make_shared<const polybm::PolyBasis>(max_degree);
        *out = new polybm_basis{std::move(impl)};
    });
}

void polybm_basis_free(polybm_basis* basis) { delete basis; }

polybm_status polybm_basis_max_degree(const polybm_basis* basis, int* out) {
    return guarded([&] {
        require(basis, "basis");
        require(out, "out");
        *out = basis->impl->max_degree();
    });
}

polybm_status polybm_basis_eval(const polybm_basis* basis, int k, double t, double* out) {
    return guarded([&] {
        require(basis, "basis");
        require(out, "out");
        *out = basis->impl->eval_e(k, t);
    });
}

polybm_status polybm_basis_inner_product(const polybm_basis* basis, int i, int j, double* out) {
    return guarded([&] {
        require(basis, "basis");
        require(out, "out");
        *out = basis->impl->inner_product_mu(i, j);
    });
}

polybm_status polybm_stream_new(uint64_t seed, uint64_t stream, uint64_t substream,
                                polybm_stream** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new polybm_stream{polybm::RandomStream(seed, stream, substream)};
    });
}

void polybm_stream_free(polybm_stream* stream) { delete stream; }

polybm_status polybm_stream_normal(polybm_stream* stream, double* out) {
    return guarded([&] {
        require(stream, "stream");
        require(out, "out");
        *out = stream->impl.normal();
    });
}

polybm_status polybm_sample_pairs(polybm_stream* stream, double length, size_t count, polybm_pair* out) {
    return guarded([&] {
        require(stream, "stream");
        if (count > 0) require(out, "out");
        std::vector<polybm::IncrementPair> pairs(count);
        polybm::sample_pairs(length, pairs, stream->impl);
        for (size_t i = 0; i < count; ++i) out[i] = from_pair(pairs[i]);
    });
}

polybm_status polybm_coarsen(const polybm_pair* pairs, size_t count, polybm_pair* out) {
    return guarded([&] {
        require(out, "out");
        *out = from_pair(polybm::coarsen(to_pairs(pairs, count)));
    });
}

polybm_status polybm_parabola_eval(double start_value, const polybm_pair* pair, double u, double* out) {
    return guarded([&] {
        require(pair, "pair");
        require(out, "out");
        *out = polybm::parabola_eval(start_value, to_pair(*pair), u);
    });
}

polybm_status polybm_arch_covariance(double s, double t, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = polybm::arch_covariance(s, t);
    });
}

polybm_status polybm_sample_kl(const polybm_basis* basis, polybm_stream* stream, int n, double* w1,
                               double* coeffs) {
    return guarded([&] {
        require(basis, "basis");
        require(stream, "stream");
        require(w1, "w1");
        if (n > 1) require(coeffs, "coeffs");
        const polybm::BrownianPolynomial p = polybm::sample_kl_coefficients(basis->impl, n, stream->impl);
        *w1 = p.w1();
        std::copy(p.coeffs().begin(), p.coeffs().end(), coeffs);
    });
}

polybm_status polybm_eval_kl(const polybm_basis* basis, double w1, const double* coeffs, int n, double t,
                             double* out) {
    return guarded([&] {
        require(basis, "basis");
        require(out, "out");
        if (n < 1) throw std::out_of_range("eval_kl: degree must be >= 1");
        if (n > 1) require(coeffs, "coeffs");
        std::vector<double> c(coeffs, coeffs + (n - 1));
        const polybm::BrownianPolynomial p(basis->impl, w1, std::move(c));
        *out = p(t);
    });
}

polybm_status polybm_cond_mean_sq_integral(const polybm_pair* pair, double* out) {
    return guarded([&] {
        require(pair, "pair");
        require(out, "out");
        *out = polybm::cond_mean_sq_integral(to_pair(*pair));
    });
}

polybm_status polybm_cond_mean_L(const polybm_pair* pair, double* out) {
    return guarded([&] {
        require(pair, "pair");
        require(out, "out");
        *out = polybm::cond_mean_L(to_pair(*pair));
    });
}

polybm_status polybm_cond_var_L(const polybm_pair* pair, double* out) {
    return guarded([&] {
        require(pair, "pair");
        require(out, "out");
        *out = polybm::cond_var_L(to_pair(*pair));
    });
}

polybm_status polybm_triple_integrals_from_whl(double w, double h_area, double l_area, double h,
                                      polybm_triple_integrals* out) {
    return guarded([&] {
        require(out, "out");
        const polybm::TripleIntegrals t = polybm::triple_integrals_from_whl(w, h_area, l_area, h);
        *out = {t.i_wt, t.i_tw, t.i_wwt, t.i_wtw, t.i_tww};
    });
}

polybm_igbm_params polybm_igbm_default_params(void) { return from_params(polybm::IgbmParams{}); }

const char* polybm_scheme_name(polybm_scheme scheme) {
    switch (scheme) {
        case POLYBM_SCHEME_LOG_ODE: return "log-ode";
        case POLYBM_SCHEME_PARABOLA: return "parabola";
        case POLYBM_SCHEME_LINEAR: return "linear";
        case POLYBM_SCHEME_MILSTEIN: return "milstein";
        case POLYBM_SCHEME_EULER: return "euler";
    }
    return nullptr;
}

polybm_status polybm_scheme_parse(const char* name, polybm_scheme* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        const auto kind = polybm::parse_scheme(name);
        if (!kind) throw std::invalid_argument(std::string("unknown scheme '") + name + "'");
        *out = from_scheme(*kind);
    });
}

polybm_status polybm_igbm_step(polybm_scheme scheme, const polybm_igbm_params* params, double y,
                               const polybm_pair* pair, double* out) {
    return guarded([&] {
        require(params, "params");
        require(pair, "pair");
        require(out, "out");
        const polybm::IgbmParams p = to_params(*params);
        p.validate();
        *out = polybm::step(to_scheme(scheme), y, p, to_pair(*pair));
    });
}

polybm_status polybm_igbm_simulate(polybm_scheme scheme, const polybm_igbm_params* params,
                                   const polybm_pair* pairs, size_t count, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const polybm::IgbmParams p = to_params(*params);
        p.validate();
        *out = polybm::simulate(to_scheme(scheme), p, to_pairs(pairs, count));
    });
}

polybm_status polybm_igbm_trajectory(polybm_scheme scheme, const polybm_igbm_params* params,
                                     const polybm_pair* pairs, size_t count, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const polybm::IgbmParams p = to_params(*params);
        p.validate();
        const std::vector<double> y = polybm::simulate_trajectory(to_scheme(scheme), p, to_pairs(pairs, count));
        std::copy(y.begin(), y.end(), out);
    });
}

polybm_experiment_config polybm_experiment_default_config(void) {
    const polybm::ExperimentConfig def;
    polybm_experiment_config c{};
    c.params = from_params(def.params);
    c.num_schemes = def.schemes.size();
    for (size_t i = 0; i < def.schemes.size(); ++i) c.schemes[i] = from_scheme(def.schemes[i]);
    c.num_step_counts = def.step_counts.size();
    for (size_t i = 0; i < def.step_counts.size(); ++i) c.step_counts[i] = def.step_counts[i];
    c.num_paths = def.num_paths;
    c.seed = def.seed;
    c.fine_substeps = def.fine_substeps;
    c.workers = def.workers;
    return c;
}

polybm_status polybm_experiment_run(const polybm_experiment_config* config, polybm_report** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        if (config->num_schemes > POLYBM_MAX_SCHEMES) throw std::invalid_argument("too many schemes");
        if (config->num_step_counts > POLYBM_MAX_STEP_COUNTS) {
            throw std::invalid_argument("too many step counts");
        }
        polybm::ExperimentConfig c;
        c.params = to_params(config->params);
        c.schemes.clear();
        for (size_t i = 0; i < config->num_schemes; ++i) c.schemes.push_back(to_scheme(config->schemes[i]));
        c.step_counts.assign(config->step_counts, config->step_counts + config->num_step_counts);
        c.num_paths = config->num_paths;
        c.seed = config->seed;
        c.fine_substeps = config->fine_substeps;
        c.workers = config->workers;
        auto report = std::make_unique<polybm_report>();
        report->impl = polybm::run_experiment(c);
        *out = report.release();
    });
}

void polybm_report_free(polybm_report* report) { delete report; }

size_t polybm_report_strong_count(const polybm_report* report) {
    return report ? report->impl.strong.size() : 0;
}

size_t polybm_report_weak_count(const polybm_report* report) { return report ? report->impl.weak.size() : 0; }

size_t polybm_report_slope_count(const polybm_report* report) {
    return report ? report->impl.slopes.size() : 0;
}

polybm_status polybm_report_strong(const polybm_report* report, size_t i, polybm_error_row* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = from_row(report->impl.strong.at(i));
    });
}

polybm_status polybm_report_weak(const polybm_report* report, size_t i, polybm_error_row* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = from_row(report->impl.weak.at(i));
    });
}

polybm_status polybm_report_slope(const polybm_report* report, size_t i, polybm_slope_row* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        const polybm::SlopeRow& r = report->impl.slopes.at(i);
        *out = {from_scheme(r.scheme),
                r.metric == polybm::Metric::Strong ? POLYBM_METRIC_STRONG : POLYBM_METRIC_WEAK,
                r.fit.slope, r.fit.intercept, r.fit.slope_stderr};
    });
}

size_t polybm_check_count(void) { return polybm::self_check_count(); }

polybm_status polybm_check_run(polybm_check_result* results, size_t capacity, size_t* written) {
    return guarded([&] {
        require(written, "written");
        *written = 0;
        if (capacity > 0) require(results, "results");
        const std::vector<polybm::CheckResult> all = polybm::run_self_checks();
        const size_t n = std::min(capacity, all.size());
        for (size_t i = 0; i < n; ++i) {
            copy_truncated(results[i].name, sizeof results[i].name, all[i].name);
            copy_truncated(results[i].detail, sizeof results[i].detail, all[i].detail);
            results[i].passed = all[i].passed ? 1 : 0;
        }
        *written = n;
    });
}

}  // extern "C"
