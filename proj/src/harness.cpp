#include "polybm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "polybm/random.hpp"

namespace polybm {

namespace {

constexpr std::size_t kBlockSize = 256;

// Welford accumulator; merging in a fixed order keeps results bit-identical
// for any worker count.
struct RunningStats {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.count == 0.0) return;
        if (count == 0.0) {
            *this = o;
            return;
        }
        const double total = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * (o.count / total);
        m2 += o.m2 + delta * delta * (count * o.count / total);
        count = total;
    }

    double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
};

struct Cell {
    RunningStats strong;  // (Y_N - Y_fine)^2
    RunningStats weak;    // (Y_N - b)^+ - (Y_fine - b)^+
};

struct Plan {
    std::vector<int> steps;
    std::vector<int> substeps;
    std::vector<std::size_t> fine_counts;
    std::size_t base_count = 0;
    bool shared_base = false;
};

Plan make_plan(const ExperimentConfig& config) {
    Plan plan;
    plan.steps = config.step_counts;
    std::size_t max_fine = 0;
    std::size_t lcm = 1;
    bool overflow = false;
    for (int n : plan.steps) {
        const int s = fine_substeps_for(config, n);
        const std::size_t f = static_cast<std::size_t>(n) * static_cast<std::size_t>(s);
        plan.substeps.push_back(s);
        plan.fine_counts.push_back(f);
        max_fine = std::max(max_fine, f);
        if (!overflow) {
            lcm = std::lcm(lcm, f);
            if (lcm > (std::size_t{1} << 40)) overflow = true;
        }
    }
    plan.shared_base = !overflow && lcm <= 16 * max_fine;
    plan.base_count = plan.shared_base ? lcm : 0;
    return plan;
}

double fine_log_ode(const IgbmParams& p, std::span<const IncrementPair> pairs) {
    double y = p.y0;
    for (const IncrementPair& pair : pairs) y = step_log_ode(y, p, pair);
    return y;
}

// Accumulates cells[s * step_idx.size() + j] for scheme s, step index j.
std::vector<Cell> run_cells(const ExperimentConfig& config, const Plan& plan,
                            const std::vector<SchemeKind>& schemes,
                            const std::vector<std::size_t>& step_idx) {
    const std::size_t cells_per_block = schemes.size() * step_idx.size();
    const std::size_t num_blocks = (config.num_paths + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<Cell>> blocks(num_blocks);
    const double horizon = config.params.horizon;
    const double strike = config.params.b;

    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            std::vector<IncrementPair> base(plan.base_count);
            std::vector<IncrementPair> fine;
            std::vector<IncrementPair> coarse;
            for (;;) {
                const std::size_t b = next_block.fetch_add(1);
                if (b >= num_blocks) break;
                std::vector<Cell> cells(cells_per_block);
                const std::size_t first = b * kBlockSize;
                const std::size_t last = std::min(config.num_paths, first + kBlockSize);
                for (std::size_t path = first; path < last; ++path) {
                    if (plan.shared_base) {
                        RandomStream rng(config.seed, path, 0);
                        sample_pairs(horizon / static_cast<double>(plan.base_count), base, rng);
                    }
                    for (std::size_t j = 0; j < step_idx.size(); ++j) {
                        const std::size_t idx = step_idx[j];
                        const std::size_t fine_count = plan.fine_counts[idx];
                        fine.resize(fine_count);
                        if (plan.shared_base) {
                            coarsen_into(base, plan.base_count / fine_count, fine);
                        } else {
                            RandomStream rng(config.seed, path, idx + 1);
                            sample_pairs(horizon / static_cast<double>(fine_count), fine, rng);
                        }
                        const double y_fine = fine_log_ode(config.params, fine);
                        const double payoff_fine = std::max(y_fine - strike, 0.0);

                        coarse.resize(static_cast<std::size_t>(plan.steps[idx]));
                        coarsen_into(fine, static_cast<std::size_t>(plan.substeps[idx]), coarse);
                        for (std::size_t s = 0; s < schemes.size(); ++s) {
                            const double y = simulate(schemes[s], config.params, coarse);
                            const double d = y - y_fine;
                            Cell& cell = cells[s * step_idx.size() + j];
                            cell.strong.add(d * d);
                            cell.weak.add(std::max(y - strike, 0.0) - payoff_fine);
                        }
                    }
                }
                blocks[b] = std::move(cells);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_block.store(num_blocks);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers,
                                                             static_cast<unsigned>(num_blocks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Cell> total(cells_per_block);
    for (const auto& block : blocks) {
        for (std::size_t c = 0; c < cells_per_block; ++c) {
            total[c].strong.merge(block[c].strong);
            total[c].weak.merge(block[c].weak);
        }
    }
    return total;
}

ErrorEstimate strong_from(const RunningStats& s) {
    const double mean_sq = s.mean;
    const double err = std::sqrt(mean_sq);
    const double se_mean = std::sqrt(s.variance() / s.count);
    return {err, err > 0.0 ? se_mean / (2.0 * err) : 0.0};
}

ErrorEstimate weak_from(const RunningStats& s) {
    return {std::abs(s.mean), std::sqrt(s.variance() / s.count)};
}

std::size_t step_index(const ExperimentConfig& config, int steps) {
    const auto it = std::find(config.step_counts.begin(), config.step_counts.end(), steps);
    if (it == config.step_counts.end()) {
        throw std::invalid_argument("step count " + std::to_string(steps) +
                                    " is not part of the experiment configuration");
    }
    return static_cast<std::size_t>(it - config.step_counts.begin());
}

Cell single_cell(const ExperimentConfig& config, SchemeKind scheme, int steps) {
    config.validate();
    const std::size_t idx = step_index(config, steps);
    const Plan plan = make_plan(config);
    return run_cells(config, plan, {scheme}, {idx}).front();
}

}  // namespace

void ExperimentConfig::validate() const {
    params.validate();
    if (schemes.empty()) throw std::invalid_argument("experiment: no schemes selected");
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (schemes[i] == schemes[j]) throw std::invalid_argument("experiment: duplicate scheme");
        }
    }
    if (step_counts.empty()) throw std::invalid_argument("experiment: no step counts");
    for (std::size_t i = 0; i < step_counts.size(); ++i) {
        if (step_counts[i] < 1) throw std::invalid_argument("experiment: step counts must be >= 1");
        if (i > 0 && step_counts[i] <= step_counts[i - 1]) {
            throw std::invalid_argument("experiment: step counts must be strictly ascending");
        }
    }
    if (num_paths < 100) throw std::invalid_argument("experiment: need at least 100 paths");
    if (fine_substeps < 0) throw std::invalid_argument("experiment: fine substeps must be >= 0");
    if (workers < 1) throw std::invalid_argument("experiment: need at least one worker");
}

int fine_substeps_for(const ExperimentConfig& config, int steps) {
    if (steps < 1) throw std::invalid_argument("step count must be >= 1");
    if (config.fine_substeps > 0) return config.fine_substeps;
    // h / min(h/10, T/1000) = max(10, 1000/N), rounded up to an integer.
    const int by_horizon = (1000 + steps - 1) / steps;
    return std::max(10, by_horizon);
}

ErrorEstimate strong_error(const ExperimentConfig& config, SchemeKind scheme, int steps) {
    return strong_from(single_cell(config, scheme, steps).strong);
}

ErrorEstimate weak_error(const ExperimentConfig& config, SchemeKind scheme, int steps) {
    return weak_from(single_cell(config, scheme, steps).weak);
}

SlopeFit fit_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [h, e] : points) {
        if (!(h > 0.0) || !(e > 0.0)) throw std::invalid_argument("fit_slope: inputs must be positive");
        sx += std::log(h);
        sy += std::log(e);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [h, e] : points) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: step sizes must not all be equal");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (const auto& [h, e] : points) {
        const double r = std::log(e) - (fit.intercept + fit.slope * std::log(h));
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

ConvergenceReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Plan plan = make_plan(config);
    std::vector<std::size_t> all_steps(config.step_counts.size());
    std::iota(all_steps.begin(), all_steps.end(), std::size_t{0});
    const std::vector<Cell> cells = run_cells(config, plan, config.schemes, all_steps);

    ConvergenceReport report;
    for (std::size_t s = 0; s < config.schemes.size(); ++s) {
        std::vector<std::pair<double, double>> strong_pts, weak_pts;
        for (std::size_t j = 0; j < all_steps.size(); ++j) {
            const Cell& cell = cells[s * all_steps.size() + j];
            const int n = config.step_counts[j];
            const double h = config.params.horizon / n;
            const ErrorEstimate se = strong_from(cell.strong);
            const ErrorEstimate we = weak_from(cell.weak);
            report.strong.push_back({config.schemes[s], n, h, se.error, se.std_err});
            report.weak.push_back({config.schemes[s], n, h, we.error, we.std_err});
            strong_pts.emplace_back(h, se.error);
            weak_pts.emplace_back(h, we.error);
        }
        auto add_slope = [&](Metric metric, const std::vector<std::pair<double, double>>& pts) {
            if (pts.size() < 3) return;
            for (const auto& pt : pts) {
                if (!(pt.second > 0.0)) return;
            }
            report.slopes.push_back({config.schemes[s], metric, fit_slope(pts)});
        };
        add_slope(Metric::Strong, strong_pts);
        add_slope(Metric::Weak, weak_pts);
    }
    return report;
}

}  // namespace polybm
