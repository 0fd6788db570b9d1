#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "langevin/bounds.hpp"
#include "langevin/planner.hpp"
#include "langevin/sampler.hpp"
#include "langevin/targets.hpp"

namespace langevin {

/// Builds a target from a descriptor:
///   {"type":"quadratic","mean":[...],"precision":[[...],...]}
///   {"type":"logistic","X":[[...],...],"y":[...],"lambda":...}
TargetPotential target_from_json(const nlohmann::json& descriptor);
TargetPotential load_target(const std::filesystem::path& path);

nlohmann::json to_json(const QuadraticSpec& spec);

/// CSV with header "k,theta_0,...,theta_{p-1}", one row per iterate.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// CSV with header "replica,theta_0,...", one row per replica.
void write_replicas_csv(std::ostream& out, const Matrix& finals);

/// {"final": [...], "running_mean": [...], "iterations": K, "h": ..., "seed": ..., "oracle": ...}
nlohmann::json trajectory_summary(const Trajectory& trajectory);

/// {"value", "regime", "gamma", "contraction_term", "bias_term", "exact_contraction"}
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const Plan& plan);

/// Header of the figure1 CSV.
inline constexpr const char* kFigure1Header = "p,epsilon,k_our,k_dm,log10_k_our,log10_k_dm,ratio";
void write_figure1_csv(std::ostream& out, std::span<const CurvePoint> rows);

/// FNV-1a 64-bit digest of a byte string, as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Comma-separated list of doubles, e.g. "0.1,0.3".
std::vector<double> parse_double_list(const std::string& text);

}  // namespace langevin
