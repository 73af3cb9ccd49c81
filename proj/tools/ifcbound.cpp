#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "ifc/achievability.hpp"
#include "ifc/certify.hpp"
#include "ifc/construct.hpp"
#include "ifc/oracle.hpp"
#include "ifc/outer_bound.hpp"
#include "ifc/report_json.hpp"
#include "ifc/serialize.hpp"

namespace {

using namespace ifc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitInconsistent = 4;
constexpr int kMaxFullRegionUsers = 6;
constexpr double kGridAgreement = 1e-4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::uint64_t seed = 0;
  int restarts = OptimizerConfig{}.restarts;
  int max_evals = OptimizerConfig{}.max_evals;
  double tolerance = OptimizerConfig{}.tolerance;
  std::string families = "kra,etw";
  bool sum_rate_only = false;

  OptimizerConfig config() const {
    OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.max_evals = max_evals;
    cfg.tolerance = tolerance;
    cfg.check();
    return cfg;
  }

  std::vector<Family> family_list() const {
    std::vector<Family> out;
    std::stringstream ss(families);
    std::string item;
    while (std::getline(ss, item, ',')) {
      for (char& c : item) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      Family f;
      if (item == "kra") f = Family::KRA;
      else if (item == "etw") f = Family::ETW;
      else throw UsageError("unknown bound family '" + item + "' (expected kra, etw)");
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    if (out.empty()) throw UsageError("--families must name at least one family");
    return out;
  }
};

void add_optimizer_flags(CLI::App* cmd, CommonFlags& f, bool with_sum_rate_only) {
  cmd->add_option("--seed", f.seed, "master RNG seed")->envname("IFC_SEED");
  cmd->add_option("--restarts", f.restarts, "local searches per bound term")->envname("IFC_RESTARTS");
  cmd->add_option("--max-evals", f.max_evals, "objective evaluations per local search")->envname("IFC_MAX_EVALS");
  cmd->add_option("--tolerance", f.tolerance, "optimizer convergence tolerance (bits)")->envname("IFC_TOLERANCE");
  cmd->add_option("--families", f.families, "comma-separated bound families: kra,etw")->envname("IFC_FAMILIES");
  if (with_sum_rate_only)
    cmd->add_flag("--sum-rate-only", f.sum_rate_only, "only the S = [1:K] terms")->envname("IFC_SUM_RATE_ONLY");
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_input(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

ChannelMatrix read_channel(const std::string& path) {
  const ChannelSpec spec = channel_spec_from_json(read_json(path));
  if (!std::holds_alternative<ChannelMatrix>(spec)) throw SchemaError("/H", "expected a channel spec, got a noise spec");
  return std::get<ChannelMatrix>(spec);
}

std::vector<int> parse_index_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v - 1);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// --- construct -----------------------------------------------------------

json construct_from(const std::string& mode, const json& params) {
  json provenance = {{"mode", mode}};
  ChannelMatrix h = ChannelMatrix::validate(CMatrix::Identity(1, 1));
  auto field = [&](const char* key) -> const json& {
    if (!params.is_object() || !params.contains(key)) throw SchemaError(std::string("/") + key, "missing required field");
    return params[key];
  };
  if (mode == "z") {
    const NoiseCorrelation sigma = parse_noise(params);
    const auto gains = real_vector_from_json(field("diag_gains"), "/diag_gains");
    h = build_z_channel(sigma, gains);
    provenance["Sigma"] = matrix_to_json(sigma.matrix());
    provenance["diag_gains"] = gains;
  } else if (mode == "many-to-one") {
    const auto v = complex_vector_from_json(field("v"), "/v");
    const auto gains = real_vector_from_json(field("diag_gains"), "/diag_gains");
    bool strict = true;
    if (params.contains("strict")) {
      if (!params["strict"].is_boolean()) throw SchemaError("/strict", "expected a boolean");
      strict = params["strict"].get<bool>();
    }
    h = many_to_one(v, gains, strict);
    provenance["v"] = vector_to_json(v);
    provenance["diag_gains"] = gains;
    provenance["strict"] = strict;
  } else if (mode == "rank-one") {
    const auto a = complex_vector_from_json(field("a"), "/a");
    const auto b = complex_vector_from_json(field("b"), "/b");
    h = rank_one_channel(a, b);
    provenance["a"] = vector_to_json(a);
    provenance["b"] = vector_to_json(b);
  } else {
    throw UsageError("unknown construct mode '" + mode + "' (expected z, many-to-one, rank-one)");
  }
  json out = to_json(h);
  out["provenance"] = provenance;
  return out;
}

// --- sweep ---------------------------------------------------------------

struct SweepRow {
  double parameter, upper_kra, upper_etw, tin, gap;
};

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double family_upper(const BoundReport& r, Family f) {
  double best = std::nan("");
  for (const auto& ineq : r.inequalities)
    if (ineq.family == f && static_cast<int>(ineq.subset.size()) == r.channel.users())
      best = std::isnan(best) ? ineq.value : std::min(best, ineq.value);
  return best;
}

// --- subcommands ---------------------------------------------------------

int run_evaluate(const std::string& file, const CommonFlags& flags) {
  const ChannelMatrix h = read_channel(file);
  const auto families = flags.family_list();
  const OptimizerConfig cfg = flags.config();
  if (!flags.sum_rate_only && h.users() > kMaxFullRegionUsers)
    throw Error(ErrorCode::TooLarge, "full region evaluation is limited to K <= " +
                                         std::to_string(kMaxFullRegionUsers) + "; use --sum-rate-only");
  const BoundReport report = region(h, cfg, families, flags.sum_rate_only);
  std::cout << to_json(report).dump(2) << "\n";
  if (!report.consistent) {
    std::cerr << "error: outer bound " << report.sum_rate_upper << " is below the achievable rate "
              << report.lower_bounds.best() << "\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

int run_certify(const std::string& file, const CommonFlags& flags) {
  const ChannelMatrix h = read_channel(file);
  const Certificate cert = certify_sum_capacity(h, flags.config());
  std::cout << to_json(cert).dump(2) << "\n";
  return cert.status == CertificateStatus::Certified ? 0 : 1;
}

int run_sweep(const std::string& file, const std::vector<std::string>& pointers, double from, double to, int steps,
              const std::string& construct_mode, const CommonFlags& flags) {
  if (steps < 1) throw UsageError("--steps must be at least 1");
  if (pointers.empty()) throw UsageError("at least one --param pointer is required");
  const json base = read_json(file);
  std::vector<json::json_pointer> ptrs;
  for (const auto& p : pointers) {
    try {
      ptrs.emplace_back(p);
    } catch (const json::exception&) {
      throw UsageError("bad JSON pointer '" + p + "'");
    }
    if (!base.contains(ptrs.back()) || !base.at(ptrs.back()).is_number())
      throw SchemaError(p, "sweep parameter must point at an existing number");
  }
  const auto families = flags.family_list();
  const OptimizerConfig cfg = flags.config();

  std::vector<SweepRow> rows;
  for (int i = 0; i < steps; ++i) {
    const double x = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    json doc = base;
    for (const auto& p : ptrs) doc[p] = x;
    const ChannelMatrix h = construct_mode.empty() ? parse_channel(doc) : parse_channel(construct_from(construct_mode, doc));
    if (!flags.sum_rate_only && h.users() > kMaxFullRegionUsers)
      throw Error(ErrorCode::TooLarge, "sweep evaluates sum-rate bounds; K is too large");
    const BoundReport r = region(h, cfg, families, true);
    const double kra = family_upper(r, Family::KRA);
    const double etw = family_upper(r, Family::ETW);
    rows.push_back({x, kra, etw, r.lower_bounds.tin, r.sum_rate_upper - r.lower_bounds.tin});
  }
  std::cout << "parameter,upper_kra,upper_etw,tin_lower,gap\n";
  for (const auto& r : rows)
    std::cout << format_number(r.parameter) << ',' << format_number(r.upper_kra) << ',' << format_number(r.upper_etw)
              << ',' << format_number(r.tin) << ',' << format_number(r.gap) << '\n';
  return kExitOk;
}

int run_verify_mc(const std::string& file, const std::string& noise_file, const std::string& a, const std::string& b,
                  const std::string& c, std::uint64_t samples, std::uint64_t seed) {
  const ChannelMatrix h = read_channel(file);
  NoiseCorrelation sigma = NoiseCorrelation::identity(h.users());
  if (!noise_file.empty()) {
    const ChannelSpec spec = channel_spec_from_json(read_json(noise_file));
    if (!std::holds_alternative<NoiseCorrelation>(spec)) throw SchemaError("/Sigma", "expected a noise spec");
    sigma = std::get<NoiseCorrelation>(spec);
  }
  const JointGaussian joint = build_joint(h, sigma);
  const IndexSet ia = joint.select(split_labels(a));
  const IndexSet ib = joint.select(split_labels(b));
  const IndexSet ic = joint.select(split_labels(c));
  const double engine = conditional_mi(joint, ia, ib, ic);
  const double identity = mi_by_entropy_identity(joint, ia, ib, ic);
  const McEstimate mc = mc_mutual_information(joint, ia, ib, ic, samples, seed);
  const double z = mc.standard_error > 0.0 ? (mc.estimate - engine) / mc.standard_error : 0.0;
  const bool ok = std::abs(mc.estimate - engine) <= 3.0 * mc.standard_error + 1e-12;
  json out = {{"schema_version", kSchemaVersion},
              {"oracle", "monte_carlo"},
              {"samples", samples},
              {"seed", seed},
              {"engine_bits", engine},
              {"entropy_identity_bits", identity},
              {"estimate_bits", mc.estimate},
              {"standard_error_bits", mc.standard_error},
              {"z_score", z},
              {"within_3_standard_errors", ok}};
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int run_verify_grid(const std::string& file, const std::string& subset, const std::string& perm, int resolution,
                    const CommonFlags& flags) {
  const ChannelMatrix h = read_channel(file);
  BoundTerm t;
  t.perm = parse_index_list(perm, "--perm");
  t.subset = subset.empty() ? t.perm : parse_index_list(subset, "--subset");
  std::sort(t.subset.begin(), t.subset.end());
  const GridMinimum grid = grid_min_sigma(h, t, resolution);
  const KraMinimum opt = kra_term_min(h, t, flags.config());
  const double diff = opt.value - grid.value;
  const bool ok = std::abs(diff) <= kGridAgreement;
  json out = {{"schema_version", kSchemaVersion},
              {"oracle", "grid"},
              {"resolution", resolution},
              {"grid_bits", grid.value},
              {"grid_evaluations", grid.evaluations},
              {"grid_sigma", matrix_to_json(grid.sigma.matrix())},
              {"optimizer_bits", opt.value},
              {"optimizer_sigma", matrix_to_json(opt.sigma.matrix())},
              {"difference_bits", diff},
              {"agree", ok},
              {"warnings", opt.warnings}};
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::TooLarge: return kExitTooLarge;
    case ErrorCode::InternalInconsistency: return kExitInconsistent;
    default: return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer bounds and sum-capacity certificates for K-user Gaussian interference channels"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* count = app.add_subcommand("count-bounds", "print N(K), the number of (S, pi) bound terms");
  std::vector<int> count_users{2, 3, 4, 5};
  count->add_option("K", count_users, "numbers of users (default 2 3 4 5)");

  auto* evaluate = app.add_subcommand("evaluate", "outer-bound region of a channel spec, as JSON");
  std::string channel_file;
  evaluate->add_option("channel", channel_file, "channel spec JSON ('-' for stdin)")->required();
  add_optimizer_flags(evaluate, flags, true);

  auto* construct = app.add_subcommand("construct", "build a channel with known sum-capacity");
  std::string mode, params_file;
  construct->add_option("mode", mode, "z | many-to-one | rank-one")->required();
  construct->add_option("params", params_file, "parameter JSON ('-' for stdin)")->required();

  auto* certify = app.add_subcommand("certify", "try to certify the sum-capacity of a channel");
  certify->add_option("channel", channel_file, "channel spec JSON ('-' for stdin)")->required();
  add_optimizer_flags(certify, flags, false);

  auto* sweep = app.add_subcommand("sweep", "sum-rate bounds along a one-parameter family, as CSV");
  std::vector<std::string> pointers;
  double from = 0.0, to = 1.0;
  int steps = 11;
  std::string sweep_construct;
  sweep->add_option("template", channel_file, "channel spec (or construct parameters) JSON")->required();
  sweep->add_option("--param", pointers, "JSON pointer of a swept number; repeat to tie several")->required();
  sweep->add_option("--from", from, "first parameter value");
  sweep->add_option("--to", to, "last parameter value");
  sweep->add_option("--steps", steps, "number of points");
  sweep->add_option("--construct", sweep_construct, "treat the template as construct parameters for this mode");
  add_optimizer_flags(sweep, flags, false);

  auto* verify = app.add_subcommand("verify", "compare the engine and optimizer against independent oracles");
  verify->require_subcommand(1);
  auto* verify_mc = verify->add_subcommand("mc", "Monte-Carlo estimate of a conditional mutual information");
  std::string noise_file, set_a, set_b, set_c;
  std::uint64_t samples = 1000000, mc_seed = 0;
  verify_mc->add_option("channel", channel_file, "channel spec JSON")->required();
  verify_mc->add_option("--noise", noise_file, "noise spec JSON (default identity)");
  verify_mc->add_option("--a", set_a, "labels of A, e.g. Y1")->required();
  verify_mc->add_option("--b", set_b, "labels of B, e.g. X1,X2")->required();
  verify_mc->add_option("--c", set_c, "labels of C");
  verify_mc->add_option("--samples", samples, "number of samples (>= 10000)");
  verify_mc->add_option("--seed", mc_seed, "sampling seed")->envname("IFC_SEED");

  auto* verify_grid = verify->add_subcommand("grid", "exhaustive search against the noise-correlation optimizer");
  std::string subset, perm;
  int resolution = 200;
  verify_grid->add_option("channel", channel_file, "channel spec JSON (K <= 3)")->required();
  verify_grid->add_option("--perm", perm, "ordering pi, 1-based, e.g. 2,1")->required();
  verify_grid->add_option("--subset", subset, "subset S (default: the users of --perm)");
  verify_grid->add_option("--resolution", resolution, "grid points per parameter");
  add_optimizer_flags(verify_grid, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*count) {
      for (int k : count_users) std::cout << "N(" << k << ")=" << count_terms(k) << "\n";
      return kExitOk;
    }
    if (*evaluate) return run_evaluate(channel_file, flags);
    if (*construct) {
      const json out = construct_from(mode, read_json(params_file));
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }
    if (*certify) return run_certify(channel_file, flags);
    if (*sweep) return run_sweep(channel_file, pointers, from, to, steps, sweep_construct, flags);
    if (*verify_mc) return run_verify_mc(channel_file, noise_file, set_a, set_b, set_c, samples, mc_seed);
    if (*verify_grid) return run_verify_grid(channel_file, subset, perm, resolution, flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistent;
  }
  return kExitUsage;
}
