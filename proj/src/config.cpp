#include "burgers/config.hpp"

#include <algorithm>
#include <fstream>

#include "burgers/error.hpp"

namespace burgers {

using nlohmann::json;

ClosedForm closed_form_from_json(const json& j) {
  if (!j.is_object()) throw InvalidConfiguration("closed form must be an object");
  static const char* keys[] = {"constant", "x1", "x2", "sin_product", "cos_product"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys)) {
      throw InvalidConfiguration("unknown closed-form term '" + key + "'");
    }
    if (!value.is_number()) throw InvalidConfiguration("closed-form term '" + key + "' must be a number");
  }
  ClosedForm f;
  f.constant = j.value("constant", 0.0);
  f.x1 = j.value("x1", 0.0);
  f.x2 = j.value("x2", 0.0);
  f.sin_product = j.value("sin_product", 0.0);
  f.cos_product = j.value("cos_product", 0.0);
  return f;
}

json closed_form_to_json(const ClosedForm& f) {
  return {{"constant", f.constant}, {"x1", f.x1}, {"x2", f.x2}, {"sin_product", f.sin_product},
          {"cos_product", f.cos_product}};
}

namespace {

BoundarySegment segment_from_json(const json& j) {
  BoundarySegment s;
  const std::string axis = j.at("axis").get<std::string>();
  if (axis == "x1") {
    s.axis = 0;
  } else if (axis == "x2") {
    s.axis = 1;
  } else {
    throw InvalidConfiguration("segment axis must be \"x1\" or \"x2\"");
  }
  s.value = j.at("value").get<double>();
  s.lo = j.value("lo", 0.0);
  s.hi = j.value("hi", 1.0);
  return s;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("domain")) {
      const auto& d = j["domain"];
      c.n = d.value("n", c.n);
      if (d.contains("dirichlet")) {
        for (const auto& s : d["dirichlet"]) c.problem.dirichlet.push_back(segment_from_json(s));
      }
    }
    if (j.contains("physics")) {
      c.problem.nu = j["physics"].value("nu", c.problem.nu);
      c.problem.c0 = j["physics"].value("c0", c.problem.c0);
    }
    if (j.contains("steady")) {
      const auto& s = j["steady"];
      const std::string mode = s.value("mode", std::string("manufactured"));
      if (mode == "manufactured") {
        c.steady.mode = SteadySection::Mode::Manufactured;
      } else if (mode == "solve") {
        c.steady.mode = SteadySection::Mode::Solve;
      } else {
        throw InvalidConfiguration("steady.mode must be \"manufactured\" or \"solve\"");
      }
      if (s.contains("u_inf")) c.steady.u_inf = closed_form_from_json(s["u_inf"]);
      if (s.contains("f_inf")) c.steady.f_inf = closed_form_from_json(s["f_inf"]);
      if (s.contains("mean")) c.steady.mean = s["mean"].get<double>();
      if (c.steady.f_inf && c.steady.mode != SteadySection::Mode::Solve) {
        throw InvalidConfiguration("steady.f_inf requires mode \"solve\"");
      }
    }
    c.problem.u_inf = c.steady.u_inf;
    c.problem.forcing = c.steady.f_inf;
    c.problem.steady_mean = c.steady.mean;
    c.problem.coefficient_source = c.steady.mode == SteadySection::Mode::Solve ? CoefficientSource::DiscreteSteady
                                                                             : CoefficientSource::AnalyticSteady;
    if (j.contains("control")) {
      const auto& s = j["control"];
      c.problem.controlled = s.value("enabled", true);
      if (s.contains("c0")) c.problem.c0 = s["c0"].get<double>();
      const std::string region = s.value("active_region", std::string("neumann"));
      if (region != "neumann" && region != "all") {
        throw InvalidConfiguration("control.active_region must be \"neumann\" or \"all\"");
      }
      if (region == "all" && !c.problem.dirichlet.empty()) {
        throw InvalidConfiguration("control.active_region \"all\" conflicts with a Dirichlet region");
      }
    }
    if (j.contains("time")) {
      const auto& s = j["time"];
      c.k = s.value("k", c.k);
      c.t_end = s.value("t_end", c.t_end);
      c.record_every = s.value("record_every", c.record_every);
      const std::string nl = s.value("nonlinear", std::string("newton"));
      if (nl == "newton") {
        c.problem.nonlinear = NonlinearSolve::Newton;
      } else if (nl == "picard") {
        c.problem.nonlinear = NonlinearSolve::PicardLagged;
      } else {
        throw InvalidConfiguration("time.nonlinear must be \"newton\" or \"picard\"");
      }
    }
    if (j.contains("initial")) {
      const auto& s = j["initial"];
      if (s.contains("w0")) c.problem.w0 = closed_form_from_json(s["w0"]);
      if (s.contains("u0")) c.problem.w0 = closed_form_from_json(s["u0"]) - c.problem.u_inf;
      const std::string proj = s.value("projection", std::string("interpolation"));
      if (proj == "interpolation") {
        c.problem.initial = InitialProjection::Interpolation;
      } else if (proj == "elliptic") {
        c.problem.initial = InitialProjection::EllipticProjection;
      } else {
        throw InvalidConfiguration("initial.projection must be \"interpolation\" or \"elliptic\"");
      }
    }
    c.study.k = c.k;
    if (j.contains("study")) {
      const auto& s = j["study"];
      if (s.contains("levels")) c.study.mesh_levels = s["levels"].get<std::vector<int>>();
      c.study.reference_level = s.value("reference", c.study.reference_level);
      c.study.t_eval = s.value("t_eval", c.study.t_eval);
    }
    c.study.problem = c.problem;
    if (j.contains("output")) c.output_dir = j["output"].value("dir", c.output_dir.string());
  } catch (const json::exception& e) {
    throw InvalidConfiguration(std::string("malformed configuration: ") + e.what());
  }
  if (c.n < 1) throw InvalidConfiguration("domain.n must be positive");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidConfiguration("cannot open configuration " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InvalidConfiguration(std::string("configuration is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace burgers
