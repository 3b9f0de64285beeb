// pgcm: classify, enumerate and verify characteristic matrices of p-groups.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "pgcm/pgcm.hpp"

using namespace pgcm;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kParse = 2, kInvalid = 3, kInfeasible = 4 };

enum class Format { Plain, Json, Csv, Latex };

struct RunConfig {
  int p = 0;
  std::string m;
  std::string format = "plain";
  bool json_flag = false;
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool timing = false;
  std::uint64_t space_cap = kDefaultSpaceCap;
  std::uint64_t transform_cap = kDefaultTransformCap;
  std::uint64_t order_cap = kSubgroupOrderCap;
  std::uint64_t lattice_cap = kLatticeOrderCap;

  Format fmt() const
  {
    if (json_flag)
      return Format::Json;
    if (format == "json")
      return Format::Json;
    if (format == "csv")
      return Format::Csv;
    if (format == "latex")
      return Format::Latex;
    return Format::Plain;
  }
};

ExponentType parse_etype(const std::string &s)
{
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size())
        throw std::invalid_argument(tok);
    } catch (const std::logic_error &) {
      throw ParseError("bad exponent type '" + s + "'");
    }
  }
  if (v.size() != 3)
    throw ParseError("exponent type needs three entries, got '" + s + "'");
  return ExponentType(v[0], v[1], v[2]);
}

json params_json(const FamilyLabel &l)
{
  json j = json::object();
  auto put = [&](const char *k, const std::optional<Fp> &v) {
    if (v)
      j[k] = *v;
  };
  put("nu", l.nu);
  put("nu1", l.nu1);
  put("nu2", l.nu2);
  put("t", l.t);
  put("r", l.r);
  return j;
}

std::string params_text(const FamilyLabel &l)
{
  std::string s;
  auto put = [&](const char *k, const std::optional<Fp> &v) {
    if (v)
      s += (s.empty() ? "" : " ") + std::string(k) + "=" + std::to_string(*v);
  };
  put("nu", l.nu);
  put("nu1", l.nu1);
  put("nu2", l.nu2);
  put("t", l.t);
  put("r", l.r);
  return s;
}

json matrix_json(const Mat3 &w)
{
  json j = json::array();
  for (int i = 0; i < 3; ++i)
    j.push_back({w(i, 0), w(i, 1), w(i, 2)});
  return j;
}

std::string latex_matrix(const Mat3 &w)
{
  std::string s = "\\left(\\begin{smallmatrix}";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      s += std::to_string(w(i, j)) + (j < 2 ? "&" : "");
    if (i < 2)
      s += "\\\\";
  }
  return s + "\\end{smallmatrix}\\right)";
}

json header(const char *cmd, const PrimeContext &F, const ExponentType &et)
{
  json j;
  j["schema"] = "pgcm/1";
  j["command"] = cmd;
  j["p"] = F.p();
  j["m"] = {et.m1, et.m2, et.m3};
  j["tag"] = to_string(case_tag(F, et));
  if (F.odd())
    j["eta"] = F.eta();
  return j;
}

std::string label_text(const PrimeContext &F, const FamilyLabel &l)
{
  std::string s = to_string(F, l);
  if (uses_eta(F, l))
    s += " (eta=" + std::to_string(F.eta()) + ")";
  return s;
}

json report_json(const VerificationReport &r, bool timing)
{
  json j;
  j["subject"] = r.subject;
  j["ok"] = r.ok();
  j["space_size"] = r.space_size;
  j["orbit_count"] = r.orbit_count;
  j["expected_count"] = r.expected_count;
  j["violation_total"] = r.violation_total;
  json v = json::array();
  for (const auto &x : r.violations)
    v.push_back({{"matrix", x.matrix}, {"detail", x.detail}});
  j["violations"] = v;
  if (timing)
    j["elapsed"] = r.elapsed;
  return j;
}

// Best available invariants for a matrix: tables first, then orbit search.
InvariantReport resolved_invariants(const CharMatrix &w, const RunConfig &cfg)
{
  try {
    return invariants(w, Method::Table);
  } catch (const DomainError &) {
    return invariants(w, Method::OrbitSearch, cfg.space_cap);
  }
}

json inv_json(const InvariantReport &r)
{
  json j;
  j["i_min"] = r.i_min;
  j["i_max"] = r.i_max;
  j["metahamiltonian"] = r.metahamiltonian;
  j["method"] = to_string(r.method);
  if (r.imin_witness)
    j["imin_witness"] = format_matrix(*r.imin_witness);
  if (r.imax_witness)
    j["imax_witness"] = format_matrix(*r.imax_witness);
  return j;
}

// ---- commands ----

int cmd_classify(const RunConfig &cfg, const std::string &literal)
{
  Stopwatch sw;
  Ctx ctx = make_context(cfg.p);
  const PrimeContext &F = *ctx;
  ExponentType et = parse_etype(cfg.m);
  CharMatrix w{ctx, et, parse_matrix<3>(F, literal)};
  CaseTag tag = case_tag(F, et);
  json j = header("classify", F, et);
  j["input"] = format_matrix(w.w);
  FamilyLabel label;
  if (tag == CaseTag::P2Tiny) {
    label = classify_tiny(w);
    j["label"] = to_string(F, label);
    j["family"] = label.family;
    j["params"] = params_json(label);
    j["representative"] = format_matrix(representative(ctx, et, label).w);
  } else {
    ClassifyResult r = classify(w);
    label = r.label;
    XPair xp = r.witness.realize();
    j["label"] = to_string(F, label);
    j["family"] = label.family;
    j["params"] = params_json(label);
    j["representative"] = format_matrix(r.representative.w);
    j["witness"] = {{"params", r.witness.params()}, {"X", format_matrix(xp.X)}, {"X2", format_matrix(xp.X2)}};
  }
  switch (cfg.fmt()) {
  case Format::Json:
    j["invariants"] = inv_json(resolved_invariants(w, cfg));
    if (cfg.timing)
      j["elapsed"] = sw.seconds();
    std::cout << j.dump(2) << "\n";
    break;
  case Format::Csv:
    std::cout << "label,family,params,representative\n"
              << to_string(F, label) << "," << label.family << ",\"" << params_text(label) << "\",\""
              << j["representative"].get<std::string>() << "\"\n";
    break;
  case Format::Latex:
    std::cout << "(" << label.family << ") $" << latex_matrix(representative(ctx, et, label).w) << "$\n";
    break;
  case Format::Plain: std::cout << label_text(F, label) << "\n"; break;
  }
  return kOk;
}

int cmd_enumerate(const RunConfig &cfg, bool latex_only = false)
{
  Ctx ctx = make_context(cfg.p);
  const PrimeContext &F = *ctx;
  ExponentType et = parse_etype(cfg.m);
  std::vector<PropertyRow> rows = property_table(F, et);
  Format fmt = latex_only ? Format::Latex : cfg.fmt();
  auto opt = [](const std::optional<int> &v) { return v ? std::to_string(*v) : std::string("?"); };
  auto rep = [&](const PropertyRow &r) { return representative(ctx, et, r.label).w; };
  switch (fmt) {
  case Format::Json: {
    json j = header(latex_only ? "export" : "enumerate", F, et);
    json arr = json::array();
    for (const auto &r : rows) {
      json x;
      x["label"] = to_string(F, r.label);
      x["family"] = r.label.family;
      x["params"] = params_json(r.label);
      x["representative"] = matrix_json(rep(r));
      x["i_min"] = r.i_min ? json(*r.i_min) : json(nullptr);
      x["i_max"] = r.i_max ? json(*r.i_max) : json(nullptr);
      x["metahamiltonian"] = r.metahamiltonian;
      x["method"] = to_string(r.method);
      arr.push_back(x);
    }
    j["families"] = arr;
    j["rows"] = rows.size();
    std::cout << j.dump(2) << "\n";
    break;
  }
  case Format::Csv:
    std::cout << "family,params,m1,m2,m3,i_min,i_max,metahamiltonian,method,representative\n";
    for (const auto &r : rows)
      std::cout << r.label.family << ",\"" << params_text(r.label) << "\"," << et.m1 << "," << et.m2 << ","
                << et.m3 << "," << opt(r.i_min) << "," << opt(r.i_max) << ","
                << (r.metahamiltonian ? "true" : "false") << "," << to_string(r.method) << ",\""
                << format_matrix(rep(r)) << "\"\n";
    std::cout << "# rows: " << rows.size() << "\n";
    break;
  case Format::Latex:
    std::cout << "% p=" << F.p() << " m=(" << et.str() << ")";
    if (F.odd())
      std::cout << " eta=" << F.eta();
    std::cout << "\n\\begin{tabular}{llll}\nfamily & matrix & $I_{\\min}$ & $I_{\\max}$\\\\\n\\hline\n";
    for (const auto &r : rows)
      std::cout << "(" << to_string(F, r.label) << ") & $" << latex_matrix(rep(r)) << "$ & " << opt(r.i_min)
                << " & " << opt(r.i_max) << "\\\\\n";
    std::cout << "\\end{tabular}\n% rows: " << rows.size() << "\n";
    break;
  case Format::Plain:
    for (const auto &r : rows)
      std::cout << label_text(F, r.label) << "  " << format_matrix(rep(r)) << "  i_min=" << opt(r.i_min)
                << " i_max=" << opt(r.i_max) << (r.metahamiltonian ? " metahamiltonian" : "") << "\n";
    std::cout << rows.size() << " rows\n";
    break;
  }
  return kOk;
}

// Per-family cross-check of the three invariant methods plus sampled isomorphism checks.
json oracle_checks(const RunConfig &cfg, Ctx ctx, const ExponentType &et, bool &ok)
{
  const PrimeContext &F = *ctx;
  json checks = json::array();
  for (const FamilyLabel &l : enumerate_families(F, et)) {
    CharMatrix w = representative(ctx, et, l);
    json c;
    c["label"] = to_string(F, l);
    InvariantReport o = invariants(w, Method::Oracle);
    c["oracle"] = {o.i_min, o.i_max};
    bool good = true;
    try {
      InvariantReport s = invariants(w, Method::OrbitSearch, cfg.space_cap);
      c["orbit_search"] = {s.i_min, s.i_max};
      good = good && s.i_min == o.i_min && s.i_max == o.i_max;
    } catch (const InfeasibleError &) {
      c["orbit_search"] = nullptr;
    }
    TableValues tv = table_values(F, et, l);
    if (tv.i_min.size() == 1 && tv.i_max.size() == 1) {
      c["table"] = {*tv.i_min.begin(), *tv.i_max.begin()};
      good = good && *tv.i_min.begin() == o.i_min && *tv.i_max.begin() == o.i_max;
    } else {
      c["table"] = nullptr;
    }
    c["ok"] = good;
    ok = ok && good;
    checks.push_back(c);
  }
  return checks;
}

json isomorphism_sample(const RunConfig &cfg, Ctx ctx, const ExponentType &et, int pairs, bool &ok)
{
  const PrimeContext &F = *ctx;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, space_size(F.p(), 9) - 1);
  int agree = 0;
  json bad = json::array();
  for (int k = 0; k < pairs; ++k) {
    CharMatrix a{ctx, et, decode<3>(F.p(), pick(rng))}, b{ctx, et, decode<3>(F.p(), pick(rng))};
    if (k % 2 == 0) {
      // half the pairs come from one orbit
      std::vector<XPair> all;
      for_each_pair(F, et, [&](const XPair &xp) {
        all.push_back(xp);
        return true;
      }, cfg.transform_cap);
      b.w = act(F, shape_for(case_tag(F, et)), all[pick(rng) % all.size()], a.w);
    }
    bool so = same_orbit(a, b, cfg.transform_cap).same;
    bool iso = brute_isomorphic(Group({ctx, et, a.w}), Group({ctx, et, b.w}), cfg.order_cap).isomorphic;
    if (so == iso)
      ++agree;
    else
      bad.push_back({format_matrix(a.w), format_matrix(b.w)});
  }
  ok = ok && bad.empty();
  return {{"pairs", pairs}, {"agree", agree}, {"disagree", bad}};
}

int cmd_verify(const RunConfig &cfg, const std::string &level)
{
  Ctx ctx = make_context(cfg.p);
  const PrimeContext &F = *ctx;
  ExponentType et = parse_etype(cfg.m);
  if (level != "orbits" && level != "oracle" && level != "all")
    throw ParseError("--level must be orbits, oracle or all");
  json j = header("verify", F, et);
  j["level"] = level;
  bool ok = true;
  Stopwatch sw;
  if (level == "orbits" || level == "all" || case_tag(F, et) == CaseTag::P2Tiny) {
    VerificationReport r = verify_transversal(ctx, et, cfg.space_cap, cfg.threads);
    j["transversal"] = report_json(r, cfg.timing);
    ok = ok && r.ok();
  }
  if (level == "oracle" || level == "all") {
    j["invariants"] = oracle_checks(cfg, ctx, et, ok);
    if (case_tag(F, et) != CaseTag::P2Tiny && Group({ctx, et, Mat3{}}, kOracleOrderCap).order() <= cfg.order_cap)
      j["isomorphism_sample"] = isomorphism_sample(cfg, ctx, et, 20, ok);
  }
  j["ok"] = ok;
  if (cfg.timing)
    j["elapsed"] = sw.seconds();
  if (cfg.fmt() == Format::Json) {
    std::cout << j.dump(2) << "\n";
  } else {
    if (j.contains("transversal")) {
      const json &t = j["transversal"];
      std::cout << t["subject"].get<std::string>() << ": orbits=" << t["orbit_count"] << " expected="
                << t["expected_count"] << " violations=" << t["violation_total"] << "\n";
      for (const auto &v : t["violations"])
        std::cout << "  " << v["matrix"].get<std::string>() << ": " << v["detail"].get<std::string>() << "\n";
    }
    if (j.contains("invariants"))
      for (const auto &c : j["invariants"])
        if (!c["ok"].get<bool>())
          std::cout << "  invariant mismatch " << c.dump() << "\n";
    if (j.contains("isomorphism_sample"))
      std::cout << "isomorphism sample: " << j["isomorphism_sample"]["agree"] << "/"
                << j["isomorphism_sample"]["pairs"] << " agree\n";
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kOk : kViolation;
}

int cmd_invariants(const RunConfig &cfg, const std::string &literal, const std::string &method)
{
  Ctx ctx = make_context(cfg.p);
  const PrimeContext &F = *ctx;
  ExponentType et = parse_etype(cfg.m);
  CharMatrix w{ctx, et, parse_matrix<3>(F, literal)};
  std::vector<Method> methods;
  if (method == "all")
    methods = {Method::Table, Method::OrbitSearch, Method::Oracle};
  else
    methods = {parse_method(method)};
  json j = header("invariants", F, et);
  j["input"] = format_matrix(w.w);
  j["label"] = to_string(F, label_of(w));
  json res = json::array();
  for (Method m : methods)
    res.push_back(inv_json(invariants(w, m, cfg.space_cap)));
  j["results"] = res;
  if (cfg.fmt() == Format::Json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto &r : res)
      std::cout << r["method"].get<std::string>() << ": i_min=" << r["i_min"] << " i_max=" << r["i_max"]
                << " metahamiltonian=" << (r["metahamiltonian"].get<bool>() ? "true" : "false") << "\n";
  }
  return kOk;
}

int cmd_oracle(const RunConfig &cfg, const std::string &literal, const std::string &mode)
{
  Ctx ctx = make_context(cfg.p);
  const PrimeContext &F = *ctx;
  ExponentType et = parse_etype(cfg.m);
  Mat3 w = parse_matrix<3>(F, literal);
  Group G({ctx, et, w}, kOracleOrderCap);
  json j = header("oracle", F, et);
  j["input"] = format_matrix(w);
  j["order"] = G.order();
  VerificationReport cons = verify_consistency(G, cfg.seed);
  j["consistent"] = cons.ok();
  IndexRange r = G.order() <= cfg.order_cap ? a1_index_range(G, cfg.order_cap) : a1_index_range_fast(G);
  j["i_min"] = r.i_min;
  j["i_max"] = r.i_max;
  if (mode != "none") {
    MetaMode mm = mode == "full" ? MetaMode::Full : MetaMode::Necessary;
    if (mode != "full" && mode != "necessary")
      throw ParseError("--mode must be full, necessary or none");
    j["metahamiltonian_mode"] = mode;
    j["metahamiltonian"] = metahamiltonian_oracle(G, mm, cfg.lattice_cap);
  }
  if (cfg.fmt() == Format::Json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "order=" << G.order() << " consistent=" << (cons.ok() ? "true" : "false") << " i_min=" << r.i_min
              << " i_max=" << r.i_max;
    if (j.contains("metahamiltonian"))
      std::cout << " metahamiltonian(" << mode << ")=" << (j["metahamiltonian"].get<bool>() ? "true" : "false");
    std::cout << "\n";
  }
  return cons.ok() ? kOk : kViolation;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"p-group characteristic matrices: classification and verification"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App *sub) {
    sub->add_option("-p,--prime", cfg.p, "prime p")->required();
    sub->add_option("-m,--etype", cfg.m, "exponent type m1,m2,m3")->required();
    sub->add_option("--format", cfg.format, "plain, json, csv or latex")
        ->check(CLI::IsMember({"plain", "json", "csv", "latex"}));
    sub->add_flag("--json", cfg.json_flag, "same as --format json");
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", cfg.timing, "include elapsed seconds in reports");
    sub->add_option("--space-cap", cfg.space_cap, "max matrices in an orbit partition")->check(CLI::PositiveNumber);
    sub->add_option("--transform-cap", cfg.transform_cap, "max transforms enumerated")->check(CLI::PositiveNumber);
    sub->add_option("--order-cap", cfg.order_cap, "max group order for element-level search")
        ->check(CLI::PositiveNumber);
    sub->add_option("--lattice-cap", cfg.lattice_cap, "max group order for subgroup lattice walks")
        ->check(CLI::PositiveNumber);
  };

  std::string literal, level = "orbits", method = "all", mode = "necessary";
  auto *c_classify = app.add_subcommand("classify", "canonical family of a matrix");
  common(c_classify);
  c_classify->add_option("matrix", literal, "row-major literal, e.g. \"0,0,0;0,0,1;0,2,0\"")->required();
  auto *c_enum = app.add_subcommand("enumerate", "families with representatives and invariants");
  common(c_enum);
  auto *c_verify = app.add_subcommand("verify", "exhaustive checks");
  common(c_verify);
  c_verify->add_option("--level", level, "orbits, oracle or all");
  auto *c_inv = app.add_subcommand("invariants", "I_min, I_max and metahamiltonicity of a matrix");
  common(c_inv);
  c_inv->add_option("matrix", literal, "matrix literal")->required();
  c_inv->add_option("--method", method, "table, orbit, oracle or all");
  auto *c_oracle = app.add_subcommand("oracle", "direct group computations");
  common(c_oracle);
  c_oracle->add_option("matrix", literal, "matrix literal")->required();
  c_oracle->add_option("--mode", mode, "metahamiltonian check: necessary, full or none");
  auto *c_export = app.add_subcommand("export", "family table in the chosen format (default LaTeX)");
  common(c_export);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*c_classify)
      return cmd_classify(cfg, literal);
    if (*c_enum)
      return cmd_enumerate(cfg);
    if (*c_verify)
      return cmd_verify(cfg, level);
    if (*c_inv)
      return cmd_invariants(cfg, literal, method);
    if (*c_oracle)
      return cmd_oracle(cfg, literal, mode);
    if (*c_export) {
      bool latex = c_export->count("--format") == 0 && !cfg.json_flag;
      return cmd_enumerate(cfg, latex);
    }
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InfeasibleError &e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const DomainError &e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kOk;
}
