#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "nicem/experiments.hpp"

namespace nicem {

namespace {

using nlohmann::json;

const char* policy_name(AlphaPolicy p) {
  switch (p) {
    case AlphaPolicy::Min: return "min";
    case AlphaPolicy::Mean: return "mean";
    case AlphaPolicy::Max: return "max";
    case AlphaPolicy::Fixed: return "fixed";
    case AlphaPolicy::PerInterface: return "per-interface";
  }
  return "?";
}

AlphaPolicy parse_policy(const std::string& s) {
  for (auto p : {AlphaPolicy::Min, AlphaPolicy::Mean, AlphaPolicy::Max, AlphaPolicy::Fixed, AlphaPolicy::PerInterface})
    if (s == policy_name(p)) return p;
  throw std::invalid_argument("config: unknown alpha_policy '" + s + "'");
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "case") c.case_name = get<std::string>(j, "case");
    else if (key == "layout") c.layout = get<std::string>(j, "layout");
    else if (key == "resolutions") c.resolutions = get<std::vector<std::array<int, 2>>>(j, "resolutions");
    else if (key == "degree") c.degree = get<int>(j, "degree");
    else if (key == "levels") c.levels = get<int>(j, "levels");
    else if (key == "refine_factor") c.refine_factor = get<int>(j, "refine_factor");
    else if (key == "alpha_policy") c.alpha_policy = parse_policy(get<std::string>(j, "alpha_policy"));
    else if (key == "alpha") c.alpha = get<double>(j, "alpha");
    else if (key == "alpha_values") c.alpha_values = get<std::vector<double>>(j, "alpha_values");
    else if (key == "alpha_ratios") c.alpha_ratios = get<std::vector<double>>(j, "alpha_ratios");
    else if (key == "solver") {
      const auto s = get<std::string>(j, "solver");
      if (s == "schwarz") c.solver = SolverKind::Schwarz;
      else if (s == "gmres") c.solver = SolverKind::Gmres;
      else throw std::invalid_argument("config: unknown solver '" + s + "'");
    } else if (key == "tol") c.tol = get<double>(j, "tol");
    else if (key == "relative_residual") c.relative_residual = get<bool>(j, "relative_residual");
    else if (key == "h1_reduction") c.h1_reduction = get<double>(j, "h1_reduction");
    else if (key == "stop_rule") {
      const auto s = get<std::string>(j, "stop_rule");
      if (s == "fixed") c.stop_rule = StopRule::Fixed;
      else if (s == "target") c.stop_rule = StopRule::Target;
      else throw std::invalid_argument("config: unknown stop_rule '" + s + "'");
    } else if (key == "max_iter") c.max_iter = get<int>(j, "max_iter");
    else if (key == "error_equation") c.error_equation = get<bool>(j, "error_equation");
    else if (key == "seed") c.seed = get<unsigned long long>(j, "seed");
    else if (key == "samples") c.samples = get<int>(j, "samples");
    else if (key == "threads") c.threads = get<int>(j, "threads");
    else if (key == "serial") c.serial = get<bool>(j, "serial");
    else if (key == "p_max") c.p_max = get<int>(j, "p_max");
    else if (key == "output_dir") c.output_dir = get<std::string>(j, "output_dir");
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["case"] = c.case_name;
  j["layout"] = c.layout;
  j["resolutions"] = c.resolutions;
  j["degree"] = c.degree;
  j["levels"] = c.levels;
  j["refine_factor"] = c.refine_factor;
  j["alpha_policy"] = policy_name(c.alpha_policy);
  j["alpha"] = c.alpha;
  j["alpha_values"] = c.alpha_values;
  j["alpha_ratios"] = c.alpha_ratios;
  j["solver"] = c.solver == SolverKind::Gmres ? "gmres" : "schwarz";
  j["tol"] = c.tol;
  j["relative_residual"] = c.relative_residual;
  j["h1_reduction"] = c.h1_reduction;
  j["stop_rule"] = c.stop_rule == StopRule::Fixed ? "fixed" : "target";
  j["max_iter"] = c.max_iter;
  j["error_equation"] = c.error_equation;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["threads"] = c.threads;
  j["serial"] = c.serial;
  j["p_max"] = c.p_max;
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (c.degree < 1 || c.degree > 3) fail("degree must be 1, 2 or 3");
  if (c.levels < 1) fail("levels must be >= 1");
  if (c.refine_factor != 2 && c.refine_factor != 3) fail("refine_factor must be 2 or 3");
  if (c.alpha_policy == AlphaPolicy::Fixed && !(c.alpha > 0.0)) fail("fixed alpha policy needs alpha > 0");
  for (double a : c.alpha_values)
    if (!(a > 0.0)) fail("alpha_values must be positive");
  for (double r : c.alpha_ratios)
    if (!(r > 0.0)) fail("alpha_ratios must be positive");
  if (!(c.tol >= 0.0)) fail("tol must be >= 0");
  if (!(c.h1_reduction >= 0.0)) fail("h1_reduction must be >= 0");
  if (c.max_iter < 1) fail("max_iter must be >= 1");
  if (c.threads < 0) fail("threads must be >= 0");
  if (c.samples < 1) fail("samples must be >= 1");
  if (c.p_max < 1 || c.p_max > 30) fail("p_max must be in 1..30");
  for (const auto& r : c.resolutions)
    if (r[0] < 1 || r[1] < 1) fail("resolutions must be >= 1");
  bool known = false;
  for (const auto& l : layout_names()) known = known || l == c.layout;
  if (!known) fail("unknown layout '" + c.layout + "'");
  bool known_case = false;
  for (const auto& n : manufactured_case_names()) known_case = known_case || n == c.case_name;
  if (!known_case) fail("unknown case '" + c.case_name + "'");
}

}  // namespace nicem
