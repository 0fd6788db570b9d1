#include "langevin/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "langevin/bounds.hpp"
#include "langevin/gaussian_oracle.hpp"
#include "langevin/io.hpp"
#include "langevin/planner.hpp"
#include "langevin/sampler.hpp"
#include "langevin/validation.hpp"

namespace langevin::cli {

namespace {

using nlohmann::json;

// Invalid flag values; mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

void require(bool ok, const std::string& flag, const std::string& what) {
    if (!ok) throw UsageError(flag, what);
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

// Flag values of a subcommand, recorded in the run manifest.
json parameters_of(const CLI::App& app) {
    json params = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        const std::string name = opt->get_name();
        if (name == "--help") continue;
        if (opt->count() > 0) {
            const auto& values = opt->results();
            params[name] = values.size() == 1 ? json(values.front()) : json(values);
        } else if (!opt->get_default_str().empty()) {
            params[name] = opt->get_default_str();
        }
    }
    return params;
}

// Writes `payload` to --out (plus a manifest next to it) or to stdout.
class Output {
public:
    Output(std::string path, std::ostream& stdout_stream) : path_(std::move(path)), stdout_(stdout_stream) {}

    std::ostream& stream() { return buffer_; }

    void finish(const CLI::App& app, std::optional<std::uint64_t> seed, double wall_seconds) {
        const std::string payload = buffer_.str();
        if (path_.empty()) {
            stdout_ << payload;
            return;
        }
        write_file(path_, payload);
        json manifest{{"subcommand", app.get_name()},
                      {"parameters", parameters_of(app)},
                      {"library_version", kVersion},
                      {"wall_seconds", wall_seconds},
                      {"output", path_},
                      {"output_digest", "fnv1a64:" + fnv1a64_hex(payload)}};
        manifest["seed"] = seed ? json(*seed) : json(nullptr);
        write_file(path_ + ".manifest.json", manifest.dump(2) + "\n");
    }

private:
    static void write_file(const std::string& path, const std::string& text) {
        std::ofstream file(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + path);
        file << text;
        if (!file) throw std::runtime_error("failed writing " + path);
    }

    std::string path_;
    std::ostream& stdout_;
    std::ostringstream buffer_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SampleArgs {
    std::string target;
    double h = 0.0;
    std::uint64_t K = 0;
    std::uint64_t seed = 0;
    std::optional<double> sigma;
    std::string oracle;
    std::size_t batch = 1;
    std::size_t replicas = 1;
    std::string init;
    std::string out;
};

struct BoundArgs {
    double m = 0.0, M = 0.0, h = 0.0, p = 1.0, w2init = 0.0;
    std::uint64_t K = 0;
    std::optional<double> sigma;
    std::string kind;
    std::string out;
};

struct PlanArgs {
    double m = 0.0, M = 0.0, p = 1.0, eps = 0.0, w2init = 0.0;
    bool search = false;
    std::size_t grid_size = 10000;
    std::string out;
};

struct Figure1Args {
    double m = 4.0, M = 5.0;
    std::string eps = "0.1,0.3";
    std::string p = "10,100,1000,10000";
    std::size_t grid_size = 10000;
    std::string out;
};

struct ValidateArgs {
    std::uint64_t seed = 1;
    std::size_t targets = 10;
    std::string out;
};

GradientOracle oracle_from(const SampleArgs& a, const TargetPotential& target) {
    std::string mode = a.oracle;
    if (mode.empty()) mode = a.sigma && *a.sigma != 0.0 ? "gaussian" : "exact";
    const double sigma = a.sigma.value_or(0.0);
    require(sigma >= 0.0, "--sigma", "must be >= 0");
    if (mode == "exact") {
        require(sigma == 0.0, "--sigma", "exact oracle needs sigma = 0 (use --oracle gaussian)");
        return GradientOracle::exact();
    }
    if (mode == "gaussian") return GradientOracle::gaussian_noise(sigma, NoiseLaw::gaussian);
    if (mode == "rademacher") return GradientOracle::gaussian_noise(sigma, NoiseLaw::rademacher);
    if (mode == "subsampled") {
        require(target.has_terms(), "--oracle", "subsampled mode needs a sum-structured target (logistic)");
        require(a.batch >= 1, "--batch", "must be >= 1");
        return GradientOracle::subsampled(a.batch);
    }
    throw UsageError("--oracle", "unknown mode '" + mode + "'");
}

int cmd_sample(const CLI::App& app, const SampleArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    require(a.h > 0.0 && std::isfinite(a.h), "--h", "must be positive");
    require(a.replicas >= 1, "--replicas", "must be >= 1");
    TargetPotential target = [&] {
        try {
            return load_target(a.target);
        } catch (const std::invalid_argument& e) {
            throw UsageError("--target", e.what());
        }
    }();
    const GradientOracle oracle = oracle_from(a, target);

    Vector start = Vector::Zero(target.dim());
    if (!a.init.empty()) {
        std::vector<double> values;
        try {
            values = parse_double_list(a.init);
        } catch (const std::invalid_argument& e) {
            throw UsageError("--init", e.what());
        }
        require(static_cast<Eigen::Index>(values.size()) == target.dim(), "--init",
                "needs " + std::to_string(target.dim()) + " values");
        start = Eigen::Map<const Vector>(values.data(), target.dim());
    }
    const LmcConfig config{a.h, a.K, a.seed, oracle};
    struct WarningScope {
        WarningHandler previous;
        ~WarningScope() { set_warning_handler(std::move(previous)); }
    } scope{set_warning_handler([&err](const std::string& text) { err << "warning: " << text << '\n'; })};

    Output output(a.out, out);
    json summary;
    if (a.replicas == 1) {
        const Trajectory traj = oracle.mode == OracleMode::exact ? run_lmc(target, config, start)
                                                                  : run_nlmc(target, config, start);
        write_trajectory_csv(output.stream(), traj);
        summary = trajectory_summary(traj);
    } else {
        const Matrix finals = run_replicas(target, config, start, a.replicas);
        write_replicas_csv(output.stream(), finals);
        const double n = static_cast<double>(finals.rows());
        const Vector mean = finals.colwise().mean().transpose();
        const Vector var = ((finals.rowwise() - mean.transpose()).array().square().colwise().sum() / (n - 1.0)).transpose();
        summary = {{"replicas", a.replicas},
                   {"iterations", a.K},
                   {"mean", vector_json(mean)},
                   {"variance", vector_json(var)},
                   {"standard_error", vector_json((var / n).cwiseSqrt())}};
        if (target.quadratic() && oracle.mode == OracleMode::exact) {
            const GaussianMoments law =
                moments_after_k(*target.quadratic(), GaussianMoments::point_mass(start), a.h, a.K);
            summary["oracle"] = {{"mean", vector_json(law.mean)}, {"variance", vector_json(law.cov.diagonal())}};
            const Vector z = ((mean - law.mean).array() / (var / n).cwiseSqrt().array()).matrix();
            summary["oracle"]["mean_z"] = vector_json(z);
        }
    }
    output.finish(app, a.seed, seconds_since(t0));
    if (!a.out.empty()) out << summary.dump(2) << '\n';
    return 0;
}

int cmd_bound(const CLI::App& app, const BoundArgs& a, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    require(a.m > 0.0, "--m", "must be positive");
    require(a.M >= a.m, "--M", "must be >= m");
    require(a.p > 0.0, "--p", "must be positive");
    require(a.w2init >= 0.0, "--w2init", "must be >= 0");
    std::string kind = a.kind.empty() ? (a.sigma ? "thm2" : "thm1") : a.kind;
    const double sigma = a.sigma.value_or(0.0);
    require(sigma >= 0.0, "--sigma", "must be >= 0");
    const BoundInputs in{a.m, a.M, a.h, a.K, a.p, a.w2init, sigma};

    json report;
    if (kind == "thm1") {
        require(a.h > 0.0 && a.h < 2.0 / a.M, "--h", "must lie in (0, 2/M)");
        report = to_json(theorem1_bound(in));
    } else if (kind == "thm2") {
        require(a.h > 0.0 && a.h <= 2.0 / a.M, "--h", "must lie in (0, 2/M]");
        report = to_json(theorem2_bound(in));
    } else if (kind == "dm") {
        require(a.h > 0.0 && a.h <= 2.0 / (a.m + a.M), "--h", "must lie in (0, 2/(m+M)]");
        report = {{"value", dm_bound(in)}};
    } else {
        throw UsageError("--kind", "expected thm1, thm2 or dm");
    }
    report["kind"] = kind;
    Output output(a.out, out);
    output.stream() << std::setprecision(17) << report.dump(2) << '\n';
    output.finish(app, std::nullopt, seconds_since(t0));
    return 0;
}

int cmd_plan(const CLI::App& app, const PlanArgs& a, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    require(a.eps > 0.0 && std::isfinite(a.eps), "--eps", "must be positive");
    require(a.m > 0.0, "--m", "must be positive");
    require(a.M >= a.m, "--M", "must be >= m");
    require(a.p > 0.0, "--p", "must be positive");
    require(a.w2init >= 0.0, "--w2init", "must be >= 0");
    require(a.grid_size >= 1, "--grid-size", "must be >= 1");
    const Plan plan = plan_for_epsilon(a.m, a.M, a.p, a.w2init, a.eps);
    json report = to_json(plan);
    if (a.search) {
        const auto grid = h_grid_for(BoundKind::theorem1, a.m, a.M, a.p, a.eps, a.grid_size);
        const SearchResult best = minimal_k_our(a.m, a.M, a.p, a.w2init, a.eps, grid);
        report["k_our"] = best.K;
        report["h_our"] = best.h;
    }
    Output output(a.out, out);
    output.stream() << report.dump(2) << '\n';
    output.finish(app, std::nullopt, seconds_since(t0));
    return 0;
}

int cmd_figure1(const CLI::App& app, const Figure1Args& a, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    require(a.m > 0.0, "--m", "must be positive");
    require(a.M >= a.m, "--M", "must be >= m");
    require(a.grid_size >= 1, "--grid-size", "must be >= 1");
    std::vector<double> eps, dims;
    try {
        eps = parse_double_list(a.eps);
    } catch (const std::invalid_argument& e) {
        throw UsageError("--eps", e.what());
    }
    try {
        dims = parse_double_list(a.p);
    } catch (const std::invalid_argument& e) {
        throw UsageError("--p", e.what());
    }
    for (double e : eps) require(e > 0.0, "--eps", "values must be positive");
    for (double p : dims) require(p > 0.0, "--p", "values must be positive");

    const auto rows = figure1_curves(a.m, a.M, eps, dims, a.grid_size);
    Output output(a.out, out);
    write_figure1_csv(output.stream(), rows);
    output.finish(app, std::nullopt, seconds_since(t0));
    return 0;
}

int cmd_validate(const CLI::App& app, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    require(a.targets >= 1, "--targets", "must be >= 1");
    ValidationOptions options;
    options.seed = a.seed;
    options.targets_per_dim = a.targets;
    const auto results = run_validation(options);
    Output output(a.out, out);
    output.stream() << to_json(results).dump(2) << '\n';
    output.finish(app, a.seed, seconds_since(t0));
    for (const auto& r : results) {
        if (r.required && !r.passed()) {
            err << "validation failed: " << r.name << " (" << r.failures << "/" << r.cells
                << "), first counterexample: " << r.first_counterexample << '\n';
            return 1;
        }
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Langevin Monte Carlo sampler, W2 bounds and step-size planner", "langevin_lab"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Run the (noisy) Langevin chain on a JSON target");
    sample->set_help_flag("--help");
    sample->add_option("--target", sample_args.target, "Target descriptor JSON file")->required();
    sample->add_option("--h", sample_args.h, "Step size")->required();
    sample->add_option("--K", sample_args.K, "Number of iterations")->required();
    sample->add_option("--seed", sample_args.seed, "RNG seed")->capture_default_str();
    sample->add_option("--sigma", sample_args.sigma, "Gradient noise level");
    sample->add_option("--oracle", sample_args.oracle, "exact | gaussian | rademacher | subsampled");
    sample->add_option("--batch", sample_args.batch, "Minibatch size for the subsampled oracle")->capture_default_str();
    sample->add_option("--replicas", sample_args.replicas, "Independent chains; >1 writes final iterates only")
        ->capture_default_str();
    sample->add_option("--init", sample_args.init, "Initial point, comma separated (default: origin)");
    sample->add_option("--out", sample_args.out, "Output CSV path (default: stdout)");

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "Evaluate a W2 convergence bound");
    bound->set_help_flag("--help");
    bound->add_option("--m", bound_args.m, "Strong convexity constant")->required();
    bound->add_option("--M", bound_args.M, "Gradient Lipschitz constant")->required();
    bound->add_option("--h", bound_args.h, "Step size")->required();
    bound->add_option("--K", bound_args.K, "Number of iterations")->required();
    bound->add_option("--p", bound_args.p, "Dimension")->required();
    bound->add_option("--w2init", bound_args.w2init, "W2 distance of the initial law to the target")->required();
    bound->add_option("--sigma", bound_args.sigma, "Gradient noise level (selects thm2 by default)");
    bound->add_option("--kind", bound_args.kind, "thm1 | thm2 | dm");
    bound->add_option("--out", bound_args.out, "Output JSON path (default: stdout)");

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Choose (h, K) guaranteeing W2 <= eps");
    plan->set_help_flag("--help");
    plan->add_option("--m", plan_args.m, "Strong convexity constant")->required();
    plan->add_option("--M", plan_args.M, "Gradient Lipschitz constant")->required();
    plan->add_option("--p", plan_args.p, "Dimension")->required();
    plan->add_option("--eps", plan_args.eps, "Target precision")->required();
    plan->add_option("--w2init", plan_args.w2init, "W2 distance of the initial law to the target")->required();
    plan->add_flag("--search", plan_args.search, "Also report the minimal K found by grid search");
    plan->add_option("--grid-size", plan_args.grid_size, "Step-size grid points for --search")->capture_default_str();
    plan->add_option("--out", plan_args.out, "Output JSON path (default: stdout)");

    Figure1Args fig_args;
    auto* fig = app.add_subcommand("figure1", "Minimal iteration counts under both bounds, as CSV");
    fig->set_help_flag("--help");
    fig->add_option("--m", fig_args.m, "Strong convexity constant")->capture_default_str();
    fig->add_option("--M", fig_args.M, "Gradient Lipschitz constant")->capture_default_str();
    fig->add_option("--eps", fig_args.eps, "Precisions, comma separated")->capture_default_str();
    fig->add_option("--p", fig_args.p, "Dimensions, comma separated")->capture_default_str();
    fig->add_option("--grid-size", fig_args.grid_size, "Step-size grid points")->capture_default_str();
    fig->add_option("--out", fig_args.out, "Output CSV path (default: stdout)");

    ValidateArgs val_args;
    auto* val = app.add_subcommand("validate", "Check the bounds against exact Gaussian laws");
    val->set_help_flag("--help");
    val->add_option("--seed", val_args.seed, "RNG seed")->capture_default_str();
    val->add_option("--targets", val_args.targets, "Random quadratic targets per dimension")->capture_default_str();
    val->add_option("--out", val_args.out, "Output JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests surface as CallForHelp from the subcommand.
        if (e.get_exit_code() == 0) {
            for (const CLI::App* sub : app.get_subcommands()) out << sub->help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*sample) return cmd_sample(*sample, sample_args, out, err);
        if (*bound) return cmd_bound(*bound, bound_args, out);
        if (*plan) return cmd_plan(*plan, plan_args, out);
        if (*fig) return cmd_figure1(*fig, fig_args, out);
        if (*val) return cmd_validate(*val, val_args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace langevin::cli
