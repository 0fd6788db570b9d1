#include "langevin/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace langevin {

using nlohmann::json;

namespace {

Vector vector_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw std::invalid_argument(std::string("target descriptor: '") + field + "' must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Matrix matrix_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument(std::string("target descriptor: '") + field + "' must be a non-empty array of rows");
    }
    const std::size_t cols = j[0].size();
    Matrix a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw std::invalid_argument(std::string("target descriptor: '") + field + "' rows must have equal length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return a;
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

void write_row(std::ostream& out, std::uint64_t index, const Vector& theta) {
    out << index;
    for (Eigen::Index i = 0; i < theta.size(); ++i) out << ',' << theta[i];
    out << '\n';
}

void write_header(std::ostream& out, const char* first, Eigen::Index p) {
    out << first;
    for (Eigen::Index i = 0; i < p; ++i) out << ",theta_" << i;
    out << '\n';
}

}  // namespace

TargetPotential target_from_json(const json& descriptor) {
    if (!descriptor.is_object() || !descriptor.contains("type")) {
        throw std::invalid_argument("target descriptor: missing 'type'");
    }
    const std::string type = descriptor.at("type").get<std::string>();
    try {
        if (type == "quadratic") {
            return quadratic_target(vector_from_json(descriptor.at("mean"), "mean"),
                                    matrix_from_json(descriptor.at("precision"), "precision"));
        }
        if (type == "logistic") {
            return logistic_target(matrix_from_json(descriptor.at("X"), "X"), vector_from_json(descriptor.at("y"), "y"),
                                   descriptor.at("lambda").get<double>());
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("target descriptor: ") + e.what());
    }
    throw std::invalid_argument("target descriptor: unknown type '" + type + "'");
}

TargetPotential load_target(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open target file " + path.string());
    json descriptor;
    try {
        in >> descriptor;
    } catch (const json::exception& e) {
        throw std::invalid_argument("target file " + path.string() + ": " + e.what());
    }
    return target_from_json(descriptor);
}

json to_json(const QuadraticSpec& spec) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < spec.precision.rows(); ++r) rows.push_back(vector_to_json(spec.precision.row(r).transpose()));
    return {{"type", "quadratic"}, {"mean", vector_to_json(spec.mean)}, {"precision", rows}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const Eigen::Index p = trajectory.iterates.empty() ? 0 : trajectory.iterates.front().size();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    write_header(out, "k", p);
    for (std::size_t k = 0; k < trajectory.iterates.size(); ++k) write_row(out, k, trajectory.iterates[k]);
}

void write_replicas_csv(std::ostream& out, const Matrix& finals) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    write_header(out, "replica", finals.cols());
    for (Eigen::Index r = 0; r < finals.rows(); ++r) write_row(out, static_cast<std::uint64_t>(r), finals.row(r).transpose());
}

json trajectory_summary(const Trajectory& trajectory) {
    Vector mean = Vector::Zero(trajectory.final_iterate().size());
    for (const auto& theta : trajectory.iterates) mean += theta;
    mean /= static_cast<double>(trajectory.iterates.size());
    return {{"final", vector_to_json(trajectory.final_iterate())},
            {"running_mean", vector_to_json(mean)},
            {"iterations", trajectory.config.K},
            {"h", trajectory.config.h},
            {"seed", trajectory.config.seed},
            {"oracle", to_string(trajectory.config.oracle.mode)},
            {"sigma", trajectory.config.oracle.sigma},
            {"wall_seconds", trajectory.wall_seconds}};
}

json to_json(const BoundReport& report) {
    return {{"value", report.value},
            {"regime", to_string(report.regime)},
            {"gamma", report.gamma},
            {"contraction_term", report.contraction_term},
            {"bias_term", report.bias_term},
            {"exact_contraction", report.exact_contraction}};
}

json to_json(const Plan& plan) {
    return {{"epsilon", plan.epsilon},
            {"h", plan.h},
            {"K", plan.K},
            {"predicted_bound", plan.predicted_bound},
            {"binding", to_string(plan.binding)},
            {"zero_iterations", plan.zero_iterations}};
}

void write_figure1_csv(std::ostream& out, std::span<const CurvePoint> rows) {
    out << kFigure1Header << '\n';
    out << std::setprecision(10);
    for (const auto& row : rows) {
        out << row.p << ',' << row.epsilon << ',' << row.k_our << ',' << row.k_dm << ','
            << std::log10(static_cast<double>(row.k_our)) << ',' << std::log10(static_cast<double>(row.k_dm)) << ','
            << row.ratio() << '\n';
    }
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
        out.push_back(value);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

}  // namespace langevin
