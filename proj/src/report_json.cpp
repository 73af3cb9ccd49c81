#include "ifc/report_json.hpp"

#include <cmath>

namespace ifc {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json one_based(const std::vector<int>& v) {
  json out = json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

}  // namespace

json to_json(const OptimizerConfig& cfg) {
  return {{"seed", cfg.seed},
          {"restarts", cfg.restarts},
          {"max_evals", cfg.max_evals},
          {"grid_fallback_K", cfg.grid_fallback_K},
          {"tolerance", cfg.tolerance}};
}

json to_json(const RateInequality& ineq) {
  json j = {{"subset", one_based(ineq.subset)},
            {"family", std::string(to_string(ineq.family))},
            {"value", number(ineq.value)},
            {"perm", one_based(ineq.perm)}};
  if (ineq.sigma) j["sigma"] = matrix_to_json(ineq.sigma->matrix());
  if (ineq.family == Family::ETW) j["rhos"] = vector_to_json(ineq.rhos);
  j["warnings"] = ineq.warnings;
  return j;
}

json to_json(const BoundReport& report) {
  json families = json::array();
  for (Family f : report.families) families.push_back(std::string(to_string(f)));
  json inequalities = json::array();
  for (const auto& ineq : report.inequalities) inequalities.push_back(to_json(ineq));
  json lower = {{"TIN", report.lower_bounds.tin},
                {"SUCC_DEC", report.lower_bounds.succ_dec ? json(*report.lower_bounds.succ_dec) : json(nullptr)}};
  json config = to_json(report.config);
  config["families"] = families;
  config["sum_rate_only"] = report.sum_rate_only;
  return {{"schema_version", kSchemaVersion},
          {"K", report.channel.users()},
          {"H", matrix_to_json(report.channel.gains())},
          {"inequalities", inequalities},
          {"sum_rate_upper", number(report.sum_rate_upper)},
          {"lower_bounds", lower},
          {"consistent", report.consistent},
          {"config", config}};
}

json to_json(const Certificate& cert) {
  json j = {{"schema_version", kSchemaVersion},
            {"status", std::string(to_string(cert.status))},
            {"path", cert.path ? json(std::string(to_string(*cert.path))) : json(nullptr)},
            {"upper", number(cert.upper)},
            {"lower", number(cert.lower)},
            {"gap", number(cert.gap)},
            {"details", cert.details}};
  j["sigma"] = cert.sigma ? matrix_to_json(cert.sigma->matrix()) : json(nullptr);
  j["warnings"] = cert.warnings;
  return j;
}

}  // namespace ifc
