// polybm command line: basis tables, polynomial paths, IGBM trajectories,
// strong/weak convergence experiments and the invariant self-checks.
// Talks to the library only through the C API.

#include <polybm/polybm.h>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(polybm_status s) {
    if (s == POLYBM_INVALID_ARGUMENT || s == POLYBM_OUT_OF_RANGE) throw UsageError(polybm_last_error());
    if (s != POLYBM_OK) throw std::runtime_error(polybm_last_error());
}

// Shortest form that still carries 17 significant digits; independent of
// the global locale.
std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

template <class T>
std::string num_int(T v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<int> parse_steps(const std::string& s) {
    std::vector<int> out;
    for (const std::string& item : split_csv(s)) {
        int v = 0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
            throw UsageError("--steps: '" + item + "' is not an integer");
        }
        if (v < 1) throw UsageError("--steps: step counts must be positive, got " + item);
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--steps: empty list");
    return out;
}

std::vector<polybm_scheme> parse_schemes(const std::string& s) {
    std::vector<polybm_scheme> out;
    for (const std::string& item : split_csv(s)) {
        polybm_scheme k;
        if (polybm_scheme_parse(item.c_str(), &k) != POLYBM_OK) {
            throw UsageError("unknown scheme '" + item + "' (log-ode, parabola, linear, milstein, euler)");
        }
        out.push_back(k);
    }
    if (out.empty()) throw UsageError("--schemes: empty list");
    return out;
}

struct Settings {
    std::uint64_t seed = 20190416;
    std::string out = ".";
    std::string config;
    unsigned workers = 1;
    std::size_t paths = 0;
    std::string steps;
    std::string schemes = "log-ode,parabola,linear,milstein,euler";
    std::string scheme = "log-ode";
    int fine_substeps = 0;
    int max_k = 6;
    int grid = 200;
    int degree = 8;
    polybm_igbm_params params = polybm_igbm_default_params();
};

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : path_(path), os_(path, std::ios::binary) {
        if (!os_) throw std::runtime_error("cannot write " + path.string());
        os_ << header << '\n';
    }

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((os_ << (first ? "" : ",") << fields, first = false), ...);
        os_ << '\n';
    }

    void close() {
        os_.close();
        if (!os_) throw std::runtime_error("failed writing " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream os_;
};

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir);
    return fs::path(dir);
}

// Key = value lines, loadable again through --config.
void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream os(dir / "manifest.txt", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / "manifest.txt").string());
    os << "# polybm " << polybm_version() << "\n";
    os << "# command: " << command << "\n";
    for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
    if (!os) throw std::runtime_error("failed writing manifest");
}

std::vector<std::pair<std::string, std::string>> param_entries(const polybm_igbm_params& p) {
    return {{"a", num(p.a)}, {"b", num(p.b)}, {"sigma", num(p.sigma)},
            {"y0", num(p.y0)}, {"horizon", num(p.horizon)}};
}

void add_common(CLI::App* sub, Settings& s) {
    sub->add_option("--out", s.out, "Output directory")->capture_default_str();
    sub->add_option("--config", s.config, "key = value file; command-line flags take precedence");
}

// CLI11 only reads config files attached to the top-level app, so the
// subcommand's file is parsed here and fed into options the command line
// left unset. Unknown keys are errors.
void apply_config(CLI::App* sub, const std::string& file) {
    if (file.empty()) return;
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config file " + file);
    const std::vector<CLI::ConfigItem> items = CLI::ConfigTOML().from_config(in);
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        CLI::Option* opt = item.parents.empty() && item.name != "config"
                               ? sub->get_option_no_throw("--" + item.name)
                               : nullptr;
        if (opt == nullptr) throw UsageError("unknown configuration key '" + item.fullname() + "' in " + file);
        if (opt->count() > 0) continue;
        std::string value;
        for (const std::string& v : item.inputs) value += (value.empty() ? "" : ",") + v;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + item.name + "': " + e.what());
        }
    }
}

void add_seed(CLI::App* sub, Settings& s) {
    sub->add_option("--seed", s.seed, "Master random seed")->capture_default_str();
}

void add_params(CLI::App* sub, Settings& s) {
    sub->add_option("--a", s.params.a, "IGBM mean-reversion speed")->capture_default_str();
    sub->add_option("--b", s.params.b, "IGBM mean-reversion level")->capture_default_str();
    sub->add_option("--sigma", s.params.sigma, "IGBM volatility")->capture_default_str();
    sub->add_option("--y0", s.params.y0, "Initial value")->capture_default_str();
    sub->add_option("--horizon", s.params.horizon, "Time horizon T")->capture_default_str();
}

int cmd_basis(const Settings& s) {
    if (s.max_k < 1 || s.max_k > 63) throw UsageError("--max-k must lie in [1,63]");
    if (s.grid < 1) throw UsageError("--grid must be positive");
    const fs::path dir = prepare_out(s.out);
    polybm_basis* raw = nullptr;
    check(polybm_basis_new(s.max_k + 1, &raw));
    std::unique_ptr<polybm_basis, decltype(&polybm_basis_free)> basis(raw, polybm_basis_free);

    Csv csv(dir / "basis.csv", "k,t,e_k(t)");
    for (int k = 1; k <= s.max_k; ++k) {
        for (int i = 0; i <= s.grid; ++i) {
            const double t = static_cast<double>(i) / s.grid;
            double v = 0.0;
            check(polybm_basis_eval(basis.get(), k, t, &v));
            csv.row(k, num(t), num(v));
        }
    }
    csv.close();
    write_manifest(dir, "basis", {{"max-k", num_int(s.max_k)}, {"grid", num_int(s.grid)}, {"out", s.out}});
    return 0;
}

int cmd_paths(const Settings& s) {
    if (s.degree < 1 || s.degree > 64) throw UsageError("--degree must lie in [1,64]");
    if (s.grid < 1) throw UsageError("--grid must be positive");
    if (s.paths < 1) throw UsageError("--paths must be positive");
    const fs::path dir = prepare_out(s.out);
    polybm_basis* raw = nullptr;
    check(polybm_basis_new(std::max(2, s.degree), &raw));
    std::unique_ptr<polybm_basis, decltype(&polybm_basis_free)> basis(raw, polybm_basis_free);

    Csv values(dir / "paths.csv", "path_id,t,kl_value");
    Csv coeffs(dir / "coefficients.csv", "path_id,k,I_k");
    std::vector<double> c(static_cast<std::size_t>(s.degree));
    for (std::size_t p = 0; p < s.paths; ++p) {
        polybm_stream* st = nullptr;
        check(polybm_stream_new(s.seed, p, 0, &st));
        std::unique_ptr<polybm_stream, decltype(&polybm_stream_free)> stream(st, polybm_stream_free);
        double w1 = 0.0;
        check(polybm_sample_kl(basis.get(), stream.get(), s.degree, &w1, c.data()));
        coeffs.row(p, 0, num(w1));
        for (int k = 1; k < s.degree; ++k) coeffs.row(p, k, num(c[k - 1]));
        for (int i = 0; i <= s.grid; ++i) {
            const double t = static_cast<double>(i) / s.grid;
            double v = 0.0;
            check(polybm_eval_kl(basis.get(), w1, c.data(), s.degree, t, &v));
            values.row(p, num(t), num(v));
        }
    }
    values.close();
    coeffs.close();
    write_manifest(dir, "paths",
                   {{"seed", num_int(s.seed)}, {"paths", num_int(s.paths)}, {"degree", num_int(s.degree)},
                    {"grid", num_int(s.grid)}, {"out", s.out}});
    return 0;
}

int cmd_igbm_paths(const Settings& s) {
    const std::vector<int> steps = parse_steps(s.steps);
    if (steps.size() != 1) throw UsageError("igbm-paths takes a single --steps value");
    if (s.paths < 1) throw UsageError("--paths must be positive");
    polybm_scheme scheme;
    if (polybm_scheme_parse(s.scheme.c_str(), &scheme) != POLYBM_OK) {
        throw UsageError("unknown scheme '" + s.scheme + "'");
    }
    const fs::path dir = prepare_out(s.out);
    const int n = steps.front();
    const double h = s.params.horizon / n;
    Csv csv(dir / "trajectories.csv", "path_id,step,t,y");
    std::vector<polybm_pair> pairs(static_cast<std::size_t>(n));
    std::vector<double> y(pairs.size() + 1);
    for (std::size_t p = 0; p < s.paths; ++p) {
        polybm_stream* st = nullptr;
        check(polybm_stream_new(s.seed, p, 0, &st));
        std::unique_ptr<polybm_stream, decltype(&polybm_stream_free)> stream(st, polybm_stream_free);
        check(polybm_sample_pairs(stream.get(), h, pairs.size(), pairs.data()));
        check(polybm_igbm_trajectory(scheme, &s.params, pairs.data(), pairs.size(), y.data()));
        for (int i = 0; i <= n; ++i) csv.row(p, i, num(i * h), num(y[static_cast<std::size_t>(i)]));
    }
    csv.close();
    auto entries = param_entries(s.params);
    entries.insert(entries.begin(), {{"seed", num_int(s.seed)},
                                     {"paths", num_int(s.paths)},
                                     {"steps", num_int(n)},
                                     {"scheme", s.scheme},
                                     {"out", s.out}});
    write_manifest(dir, "igbm-paths", entries);
    return 0;
}

int cmd_experiment(const Settings& s, bool strong) {
    const std::vector<int> steps = parse_steps(s.steps);
    const std::vector<polybm_scheme> schemes = parse_schemes(s.schemes);
    if (steps.size() > POLYBM_MAX_STEP_COUNTS) throw UsageError("--steps: too many step counts");
    if (schemes.size() > POLYBM_MAX_SCHEMES) throw UsageError("--schemes: too many schemes");
    if (s.workers < 1) throw UsageError("--workers must be positive");
    if (s.fine_substeps < 0) throw UsageError("--fine-substeps must be >= 0");

    polybm_experiment_config cfg = polybm_experiment_default_config();
    cfg.params = s.params;
    cfg.num_schemes = schemes.size();
    std::copy(schemes.begin(), schemes.end(), cfg.schemes);
    cfg.num_step_counts = steps.size();
    std::copy(steps.begin(), steps.end(), cfg.step_counts);
    cfg.num_paths = s.paths;
    cfg.seed = s.seed;
    cfg.fine_substeps = s.fine_substeps;
    cfg.workers = s.workers;

    const fs::path dir = prepare_out(s.out);
    polybm_report* raw = nullptr;
    check(polybm_experiment_run(&cfg, &raw));
    std::unique_ptr<polybm_report, decltype(&polybm_report_free)> report(raw, polybm_report_free);

    const polybm_metric metric = strong ? POLYBM_METRIC_STRONG : POLYBM_METRIC_WEAK;
    Csv errors(dir / (strong ? "strong.csv" : "weak.csv"), "scheme,N,h,error,std_err");
    const std::size_t rows = strong ? polybm_report_strong_count(report.get())
                                    : polybm_report_weak_count(report.get());
    for (std::size_t i = 0; i < rows; ++i) {
        polybm_error_row r;
        check(strong ? polybm_report_strong(report.get(), i, &r) : polybm_report_weak(report.get(), i, &r));
        errors.row(polybm_scheme_name(r.scheme), r.steps, num(r.h), num(r.error), num(r.std_err));
    }
    errors.close();

    Csv slopes(dir / "slopes.csv", "scheme,metric,slope,slope_stderr");
    for (std::size_t i = 0; i < polybm_report_slope_count(report.get()); ++i) {
        polybm_slope_row r;
        check(polybm_report_slope(report.get(), i, &r));
        if (r.metric != metric) continue;
        slopes.row(polybm_scheme_name(r.scheme), strong ? "strong" : "weak", num(r.slope), num(r.slope_stderr));
    }
    slopes.close();

    std::string steps_str, schemes_str;
    for (int n : steps) steps_str += (steps_str.empty() ? "" : ",") + num_int(n);
    for (polybm_scheme k : schemes) schemes_str += std::string(schemes_str.empty() ? "" : ",") + polybm_scheme_name(k);
    auto entries = param_entries(s.params);
    entries.insert(entries.begin(), {{"seed", num_int(s.seed)},
                                     {"paths", num_int(s.paths)},
                                     {"steps", steps_str},
                                     {"schemes", schemes_str},
                                     {"fine-substeps", num_int(s.fine_substeps)},
                                     {"workers", num_int(s.workers)},
                                     {"out", s.out}});
    write_manifest(dir, strong ? "strong" : "weak", entries);
    return 0;
}

int cmd_check() {
    std::vector<polybm_check_result> results(polybm_check_count());
    std::size_t written = 0;
    check(polybm_check_run(results.data(), results.size(), &written));
    int failures = 0;
    for (std::size_t i = 0; i < written; ++i) {
        const polybm_check_result& r = results[i];
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.passed) {
            std::cout << ": " << r.detail;
            ++failures;
        }
        std::cout << '\n';
    }
    std::cout << (written - failures) << "/" << written << " suites passed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    CLI::App app{"Polynomial Brownian motion, Levy-area moments and IGBM convergence experiments"};
    app.set_version_flag("--version", std::string(polybm_version()));
    app.require_subcommand(1);

    Settings basis_s, paths_s, igbm_s, strong_s, weak_s;

    CLI::App* basis = app.add_subcommand("basis", "Tabulate the eigenfunctions e_k on [0,1]");
    add_common(basis, basis_s);
    basis->add_option("--max-k", basis_s.max_k, "Largest index k")->capture_default_str();
    basis->add_option("--grid", basis_s.grid, "Grid intervals on [0,1]")->capture_default_str();

    CLI::App* paths = app.add_subcommand("paths", "Sample polynomial Karhunen-Loeve paths");
    add_common(paths, paths_s);
    add_seed(paths, paths_s);
    paths_s.paths = 10;
    paths->add_option("--paths", paths_s.paths, "Number of paths")->capture_default_str();
    paths->add_option("--degree", paths_s.degree, "Polynomial degree n")->capture_default_str();
    paths->add_option("--grid", paths_s.grid, "Grid intervals on [0,1]")->capture_default_str();

    CLI::App* igbm = app.add_subcommand("igbm-paths", "Simulate IGBM trajectories with one scheme");
    add_common(igbm, igbm_s);
    add_seed(igbm, igbm_s);
    add_params(igbm, igbm_s);
    igbm_s.paths = 10;
    igbm_s.steps = "500";
    igbm->add_option("--paths", igbm_s.paths, "Number of trajectories")->capture_default_str();
    igbm->add_option("--steps", igbm_s.steps, "Number of steps")->capture_default_str();
    igbm->add_option("--scheme", igbm_s.scheme, "log-ode, parabola, linear, milstein or euler")
        ->capture_default_str();

    auto add_experiment = [&](const char* name, const char* help, Settings& s, std::size_t default_paths) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, s);
        add_seed(sub, s);
        add_params(sub, s);
        s.paths = default_paths;
        s.steps = "25,50,100,200,400";
        sub->add_option("--paths", s.paths, "Monte Carlo paths")->capture_default_str();
        sub->add_option("--steps", s.steps, "Comma-separated step counts N")->capture_default_str();
        sub->add_option("--schemes", s.schemes, "Comma-separated schemes")->capture_default_str();
        sub->add_option("--workers", s.workers, "Worker threads (results do not depend on it)")
            ->capture_default_str();
        sub->add_option("--fine-substeps", s.fine_substeps, "Fine substeps per step, 0 for the standard rule")
            ->capture_default_str();
        return sub;
    };
    CLI::App* strong = add_experiment("strong", "Strong error experiment", strong_s, 10000);
    CLI::App* weak = add_experiment("weak", "Weak error experiment", weak_s, 100000);

    CLI::App* check_cmd = app.add_subcommand("check", "Run the invariant self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const std::pair<CLI::App*, Settings*> subs[] = {
            {basis, &basis_s}, {paths, &paths_s}, {igbm, &igbm_s}, {strong, &strong_s}, {weak, &weak_s}};
        for (const auto& [sub, settings] : subs) {
            if (*sub) apply_config(sub, settings->config);
        }
        if (*basis) return cmd_basis(basis_s);
        if (*paths) return cmd_paths(paths_s);
        if (*igbm) return cmd_igbm_paths(igbm_s);
        if (*strong) return cmd_experiment(strong_s, true);
        if (*weak) return cmd_experiment(weak_s, false);
        if (*check_cmd) return cmd_check();
    } catch (const UsageError& e) {
        std::cerr << "polybm: usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "polybm: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
