#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "burgers/study.hpp"

namespace burgers {

/// Steady-state section of a run configuration.
struct SteadySection {
  enum class Mode { Manufactured, Solve };
  Mode mode = Mode::Manufactured;
  ClosedForm u_inf{0.0, -0.2, 0.0, 0.0, 0.0};
  /// When set (Solve mode only), solve from this forcing with zero Neumann data.
  std::optional<ClosedForm> f_inf;
  /// Target integral; defaults to the integral of u_inf.
  std::optional<double> mean;
};

/// Parsed JSON document with sections domain, physics, steady, control,
/// time, study, initial and output. Missing keys keep the Example 1 values.
struct RunConfig {
  int n = 16;
  ProblemConfig problem;
  SteadySection steady;
  double k = 0.0005;
  double t_end = 5.0;
  int record_every = 1;
  StudyConfig study;
  std::filesystem::path output_dir = "output";
};

ClosedForm closed_form_from_json(const nlohmann::json& j);
nlohmann::json closed_form_to_json(const ClosedForm& f);

/// Throws InvalidConfiguration on unknown enumerators or malformed sections.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace burgers
