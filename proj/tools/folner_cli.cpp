// Command-line workbench: search and verification tools for Folner sets,
// Reiter functions, word-problem decisions, sequence checks, convergence
// moduli and metric matchings. JSON in, JSON/CSV out, deterministic output;
// exit codes: 0 success/witness, 2 refusal/refutation with a reason,
// 3 budget exhaustion, 64 usage error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <variant>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "folner/codes.hpp"
#include "folner/folner.hpp"
#include "folner/means.hpp"
#include "folner/metric.hpp"
#include "folner/reiter.hpp"
#include "folner/sequences.hpp"
#include "folner/words.hpp"
#include "folner/wp.hpp"

namespace folner::cli {
namespace {

struct GlobalOpts {
  long long budget = 100000;
  unsigned long long seed = 0;
  std::string format = "json";
};

void require_json_format(const GlobalOpts& g, const std::string& where) {
  if (g.format != "json") {
    throw UsageError("only json output is available for " + where);
  }
}

nlohmann::json defects_json(const std::map<Int, Rat>& defects) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [x, r] : defects) obj[int_str(x)] = rat_str(r);
  return obj;
}

nlohmann::json folner_witness_json(const nlohmann::json& group_desc,
                                   const std::vector<Int>& D,
                                   const FolnerWitness& w) {
  return {
      {"D", codes_json(D)},       {"codes", codes_json(w.codes)},
      {"defects", defects_json(w.defects)}, {"group", group_desc},
      {"injective", w.injective}, {"n", w.n},
  };
}

ReiterFunction reiter_from_json(const nlohmann::json& fj) {
  if (!fj.is_object() || !fj.contains("support")) {
    throw UsageError("a function JSON needs a \"support\" object");
  }
  ReiterFunction f;
  for (const auto& [key, value] : fj.at("support").items()) {
    if (!value.is_string()) {
      throw UsageError("support values must be \"p/q\" strings");
    }
    f.values[parse_code(key)] = parse_rat(value.get<std::string>());
  }
  return f;
}

nlohmann::json reiter_to_json(const ReiterFunction& f) {
  nlohmann::json sup = nlohmann::json::object();
  for (const auto& [c, r] : f.values) sup[int_str(c)] = rat_str(r);
  return {{"support", sup}};
}

std::string csv_decimal(const Rat& r) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", r.convert_to<double>());
  return buf;
}

void write_mean_csv(std::ostream& out, const BinarySeqZ& x, long long jmax) {
  out << "j,mj_num,mj_den,mj_decimal\n";
  for (long long j = 0; j <= jmax; ++j) {
    const Rat m = x.mean_at(j);
    out << j << "," << boost::multiprecision::numerator(m).str() << ","
        << boost::multiprecision::denominator(m).str() << ","
        << csv_decimal(m) << "\n";
  }
}

BinarySeqZ sequence_from_json(const nlohmann::json& xj) {
  if (xj.contains("f")) {
    const auto rate = parse_rate(xj.at("f").get<std::string>());
    return build_x0(rate, xj.at("kmax").get<long long>()).x;
  }
  if (xj.contains("head")) {
    return BinarySeqZ::explicit_symmetric(
        xj.at("head").get<std::vector<int>>(),
        xj.value("period", std::vector<int>{0}));
  }
  throw UsageError(
      "sequence JSON needs either \"head\"/\"period\" or \"f\"/\"kmax\"");
}

SequenceProgram program_from_json(std::shared_ptr<Group> g,
                                  const nlohmann::json& pj) {
  const std::string type = pj.value("type", "");
  if (type == "ball") {
    return [g](long long j) -> std::optional<std::vector<Int>> {
      std::vector<Int> codes;
      for (const auto& v : g->ball(j)) codes.push_back(g->element_code(v));
      return codes;
    };
  }
  if (type == "explicit") {
    std::vector<std::vector<Int>> stages;
    for (const auto& stage : pj.at("stages")) {
      stages.push_back(codes_from_json(stage));
    }
    return [stages](long long j) -> std::optional<std::vector<Int>> {
      if (j < 0 || j >= static_cast<long long>(stages.size())) {
        return std::nullopt;
      }
      return stages[static_cast<std::size_t>(j)];
    };
  }
  throw UsageError("program JSON needs \"type\": \"ball\" or \"explicit\"");
}

WSpec wspec_from_json(const nlohmann::json& v) {
  WSpec spec;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "all") {
      spec.kind = WSpec::Kind::All;
      return spec;
    }
    if (s == "empty") {
      spec.kind = WSpec::Kind::Empty;
      return spec;
    }
    throw UsageError("unknown W shorthand: " + s);
  }
  if (v.is_array()) {
    spec.kind = WSpec::Kind::Finite;
    spec.elems = v.get<std::vector<long long>>();
    return spec;
  }
  if (v.is_object() && v.contains("progression")) {
    spec.kind = WSpec::Kind::Progression;
    spec.start = v.at("progression").at("start").get<long long>();
    spec.step = v.at("progression").at("step").get<long long>();
    return spec;
  }
  if (v.is_object() && v.value("initial", false)) {
    spec.kind = WSpec::Kind::Initial;
    return spec;
  }
  throw UsageError("cannot parse a W entry: expected \"all\", \"empty\", an "
                   "array, a progression, or {\"initial\":true}");
}

CeFamilyModel model_from_json(const nlohmann::json& mj) {
  CeFamilyModel model;
  if (mj.contains("W")) {
    for (const auto& [key, value] : mj.at("W").items()) {
      long long n = 0;
      try {
        n = std::stoll(key);
      } catch (const std::exception&) {
        throw UsageError("W keys must be positive integers, got: " + key);
      }
      if (n < 1) throw UsageError("W keys must be positive, got: " + key);
      model.w[n] = wspec_from_json(value);
    }
  }
  if (mj.contains("default")) {
    model.fallback = wspec_from_json(mj.at("default"));
  }
  return model;
}

nlohmann::json cells_json(const std::vector<SequenceCell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& cell : cells) {
    nlohmann::json c = {{"n", cell.n},
                        {"violations", cell.violations},
                        {"x", int_str(cell.x)}};
    c["least_l"] =
        cell.least_l ? nlohmann::json(*cell.least_l) : nlohmann::json();
    arr.push_back(std::move(c));
  }
  return arr;
}

nlohmann::json per_e_mu_json(
    const std::vector<std::pair<Int, std::size_t>>& per_e) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, mu] : per_e) {
    arr.push_back(nlohmann::json::array({int_str(e), mu}));
  }
  return arr;
}

// ---------------------------------------------------------------------------
// folner subcommands
// ---------------------------------------------------------------------------

struct FolnerSearchOpts {
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
};

int run_folner_search(const GlobalOpts& global, const FolnerSearchOpts& o) {
  require_json_format(global, "folner search");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const auto result = search_folner(*g, o.n, D, global.budget);
  if (const auto* w = std::get_if<FolnerWitness>(&result)) {
    emit_json(folner_witness_json(desc, D, *w));
    return kExitOk;
  }
  emit_json({{"error", "budget-exhausted"},
             {"examined", std::get<SearchExhausted>(result).examined}});
  return kExitBudget;
}

struct FolnerFunctionOpts {
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
  long long bound = 1;
};

int run_folner_function(const GlobalOpts& global, const FolnerFunctionOpts& o) {
  require_json_format(global, "folner function");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const auto result = folner_function(*g, o.n, D, o.bound);
  if (!result.value) {
    emit_json({{"bound", o.bound},
               {"error", "no-qualifying-subset"},
               {"pool_size", result.pool_size}});
    return kExitRefusal;
  }
  emit_json({{"bound", o.bound},
             {"estimate", true},  // exact within the ball, upper bound overall
             {"pool_size", result.pool_size},
             {"value", *result.value},
             {"witness", folner_witness_json(desc, D, *result.witness)}});
  return kExitOk;
}

struct FolnerVerifyOpts {
  std::string file;
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
  std::vector<std::string> f_words;
};

int run_folner_verify(const GlobalOpts& global, const FolnerVerifyOpts& o) {
  require_json_format(global, "folner verify");
  std::shared_ptr<Group> g;
  std::vector<Int> F, D;
  long long n = 1;
  nlohmann::json claims;
  if (!o.file.empty()) {
    nlohmann::json doc = load_json_arg(o.file);
    if (doc.contains("witness")) doc = doc.at("witness");
    g = make_group(doc.at("group"));
    F = codes_from_json(doc.at("codes"));
    D = codes_from_json(doc.at("D"));
    n = doc.at("n").get<long long>();
    claims = doc;
  } else {
    if (o.group.empty() || o.d_words.empty() || o.f_words.empty()) {
      throw UsageError(
          "folner verify needs --file or all of --group/--n/--D/--F");
    }
    g = make_group(load_json_arg(o.group));
    F = words_to_codes(o.f_words);
    D = words_to_codes(o.d_words);
    n = o.n;
  }

  const FolnerRecheck check = recheck_folner(*g, F, D, n);
  bool verified = check.folner;
  std::string reason = verified ? "" : "defect-above-threshold";
  if (claims.contains("defects")) {
    for (const auto& [key, value] : claims.at("defects").items()) {
      const Int x = parse_code(key);
      const auto it = check.defects.find(x);
      if (it == check.defects.end() ||
          rat_str(it->second) != value.get<std::string>()) {
        verified = false;
        reason = "claimed defect mismatch at " + key;
      }
    }
  }
  if (claims.contains("injective") &&
      claims.at("injective").get<bool>() != check.injective) {
    verified = false;
    reason = "injectivity claim mismatch";
  }

  nlohmann::json out = {{"defects", defects_json(check.defects)},
                        {"injective", check.injective},
                        {"n", n},
                        {"set_size", check.set_size},
                        {"verified", verified}};
  if (!verified) out["reason"] = reason;
  emit_json(out);
  return verified ? kExitOk : kExitRefusal;
}

// ---------------------------------------------------------------------------
// reiter subcommands
// ---------------------------------------------------------------------------

struct ReiterVerifyOpts {
  std::string file;
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
  std::string f;
};

int run_reiter_verify(const GlobalOpts& global, const ReiterVerifyOpts& o) {
  require_json_format(global, "reiter verify");
  std::shared_ptr<Group> g;
  std::vector<Int> D;
  long long n = 1;
  ReiterFunction f;
  if (!o.file.empty()) {
    const nlohmann::json doc = load_json_arg(o.file);
    g = make_group(doc.at("group"));
    D = codes_from_json(doc.at("D"));
    n = doc.at("n").get<long long>();
    f = reiter_from_json(doc.at("f"));
  } else {
    if (o.group.empty() || o.d_words.empty() || o.f.empty()) {
      throw UsageError(
          "reiter verify needs --file or all of --group/--n/--D/--f");
    }
    g = make_group(load_json_arg(o.group));
    D = words_to_codes(o.d_words);
    n = o.n;
    f = reiter_from_json(load_json_arg(o.f));
  }
  validate_reiter(f);
  if (n < 1) throw UsageError("n must be positive");

  // definitional re-check: exact pushforward ratios against strict 1/n
  nlohmann::json ratios = nlohmann::json::object();
  bool ok = true;
  std::optional<Int> violator;
  for (const Int& x : D) {
    const Rat ratio = pushforward_ratio(*g, f, x);
    ratios[int_str(x)] = rat_str(ratio);
    if (!(ratio < Rat(1, n)) && !violator) {
      ok = false;
      violator = x;
    }
  }
  nlohmann::json out = {{"is_reiter", ok}, {"n", n}, {"ratios", ratios}};
  if (violator) out["violator"] = int_str(*violator);
  emit_json(out);
  return ok ? kExitOk : kExitRefusal;
}

struct ReiterComputeOpts {
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
};

int run_reiter_compute(const GlobalOpts& global, const ReiterComputeOpts& o) {
  require_json_format(global, "reiter compute");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const auto result = compute_reiter(*g, o.n, D, global.budget);
  if (const auto* f = std::get_if<ReiterFunction>(&result)) {
    emit_json({{"D", codes_json(D)},
               {"f", reiter_to_json(*f)},
               {"group", desc},
               {"n", o.n}});
    return kExitOk;
  }
  emit_json({{"error", "budget-exhausted"},
             {"examined", std::get<SearchExhausted>(result).examined}});
  return kExitBudget;
}

struct ReiterKappaOpts {
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
  std::string f;
  bool ce_only = false;
};

int run_reiter_kappa(const GlobalOpts& global, const ReiterKappaOpts& o) {
  require_json_format(global, "reiter kappa");
  const auto g = make_group(load_json_arg(o.group));
  const std::vector<Int> D = words_to_codes(o.d_words);
  const ReiterFunction f = reiter_from_json(load_json_arg(o.f));
  KappaOptions options;
  options.ce_only = o.ce_only;
  const KappaVerdict verdict =
      kappa_verify(*g, o.n, D, f, global.budget, options);
  if (const auto* c = std::get_if<KappaCertified>(&verdict)) {
    nlohmann::json ratios = nlohmann::json::object();
    for (const auto& [x, r] : c->ratios) ratios[int_str(x)] = rat_str(r);
    emit_json({{"certified", true},
               {"merges", c->merges},
               {"queries", c->queries},
               {"ratios", ratios}});
    return kExitOk;
  }
  if (const auto* r = std::get_if<KappaRefuted>(&verdict)) {
    nlohmann::json ratios = nlohmann::json::object();
    for (const auto& [x, q] : r->ratios) ratios[int_str(x)] = rat_str(q);
    emit_json({{"certified", false},
               {"error", "refuted"},
               {"queries", r->queries},
               {"ratios", ratios}});
    return kExitRefusal;
  }
  emit_json({{"error", "budget-exhausted"},
             {"queries", std::get<KappaExhausted>(verdict).queries}});
  return kExitBudget;
}

struct ReiterSigmaOpts {
  std::string group;
  long long n = 1;
  std::vector<std::string> d_words;
};

int run_reiter_sigma(const GlobalOpts& global, const ReiterSigmaOpts& o) {
  require_json_format(global, "reiter sigma");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const auto result = sigma_search(*g, o.n, D, global.budget);
  if (const auto* s = std::get_if<SigmaResult>(&result)) {
    nlohmann::json out = {{"D", codes_json(D)},
                          {"F", codes_json(s->F)},
                          {"f", reiter_to_json(s->f)},
                          {"group", desc},
                          {"n", s->m},  // the strictness the function satisfies
                          {"target_n", o.n}};
    out["F_prime"] = s->F_prime ? codes_json(*s->F_prime) : nlohmann::json();
    emit_json(out);
    return kExitOk;
  }
  emit_json({{"error", "budget-exhausted"},
             {"examined", std::get<SearchExhausted>(result).examined}});
  return kExitBudget;
}

// ---------------------------------------------------------------------------
// decide-eq
// ---------------------------------------------------------------------------

struct DecideEqOpts {
  std::string group;
  std::string w1;
  std::string w2;
};

int run_decide_eq(const GlobalOpts& global, const DecideEqOpts& o) {
  require_json_format(global, "decide-eq");
  const auto g = make_group(load_json_arg(o.group));
  const Int c1 = words_to_codes({o.w1}).front();
  const Int c2 = words_to_codes({o.w2}).front();
  WpStats stats;
  const bool equal = decide_equal_via_folner(
      *g, c1, c2, default_folner_oracle(*g), global.budget, &stats);
  emit_json({{"confirmations", stats.confirmations},
             {"oracle_requests", stats.oracle_requests},
             {"set_size", stats.set_size},
             {"verdict", equal ? "equal" : "not-equal"}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sequence subcommands
// ---------------------------------------------------------------------------

struct SequenceCheckOpts {
  std::string group;
  std::string prog;
  long long horizon = 0;
  long long nmax = 1;
  std::vector<std::string> x_words;
};

int run_sequence_check(const GlobalOpts& global, const SequenceCheckOpts& o) {
  require_json_format(global, "sequence check");
  const auto g = make_group(load_json_arg(o.group));
  const SequenceProgram prog = program_from_json(g, load_json_arg(o.prog));
  const std::vector<Int> xs = words_to_codes(o.x_words);
  const auto report =
      verify_sequence_horizon(*g, prog, o.horizon, xs, o.nmax);
  emit_json({{"cells", cells_json(report.cells)}, {"horizon", report.horizon}});
  return kExitOk;
}

struct SequenceReductionOpts {
  std::string model;
  long long horizon = 1;
};

int run_sequence_reduction(const GlobalOpts& global,
                           const SequenceReductionOpts& o) {
  require_json_format(global, "sequence reduction");
  const CeFamilyModel model = model_from_json(load_json_arg(o.model));
  const CaseStudyReport report = reduction_case_study(model, o.horizon);
  nlohmann::json thresholds = nlohmann::json::array();
  for (const auto& cell : report.thresholds) {
    nlohmann::json c = {{"coord", cell.coord},
                        {"n", cell.n},
                        {"violations", cell.violations}};
    c["least_l"] =
        cell.least_l ? nlohmann::json(*cell.least_l) : nlohmann::json();
    thresholds.push_back(std::move(c));
  }
  emit_json({{"behaves_as_folner", report.behaves_as_folner},
             {"designated_n", report.designated_n},
             {"failure_indices", report.failure_indices},
             {"has_infinite", report.has_infinite},
             {"thresholds", thresholds}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// convmod and means
// ---------------------------------------------------------------------------

struct ConvmodOpts {
  std::string f;
  long long kmax = 2;
  std::string csv = "-";
};

int run_convmod(const GlobalOpts&, const ConvmodOpts& o) {
  const auto rate = parse_rate(o.f);
  const X0Construction made = build_x0(rate, o.kmax);
  const long long radius = *made.x.defined_radius();
  if (o.csv == "-") {
    write_mean_csv(std::cout, made.x, radius);
  } else {
    std::ofstream out(o.csv);
    if (!out) throw UsageError("cannot write file: " + o.csv);
    write_mean_csv(out, made.x, radius);
  }
  return kExitOk;
}

struct MeansTableOpts {
  std::string x;
  long long jmax = 0;
};

int run_means_table(const GlobalOpts& global, const MeansTableOpts& o) {
  const BinarySeqZ x = sequence_from_json(load_json_arg(o.x));
  if (o.jmax < 0) throw UsageError("jmax must be nonnegative");
  if (const auto radius = x.defined_radius(); radius && *radius < o.jmax) {
    throw UsageError("jmax exceeds the defined radius " +
                     std::to_string(*radius));
  }
  if (global.format == "csv") {
    write_mean_csv(std::cout, x, o.jmax);
    return kExitOk;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (long long j = 0; j <= o.jmax; ++j) {
    const Rat m = x.mean_at(j);
    rows.push_back({{"decimal", m.convert_to<double>()},
                    {"j", j},
                    {"mean", rat_str(m)}});
  }
  emit_json({{"jmax", o.jmax}, {"rows", rows}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// metric subcommands
// ---------------------------------------------------------------------------

struct MetricMatchingOpts {
  std::string group;
  std::vector<std::string> f_words;
  std::string g_word;
  std::string ball;
};

int run_metric_matching(const GlobalOpts& global, const MetricMatchingOpts& o) {
  require_json_format(global, "metric matching");
  const auto g = make_group(load_json_arg(o.group));
  const MetricGroup mg(g);
  std::set<CanonicalElement> distinct;
  for (const Int& c : words_to_codes(o.f_words)) distinct.insert(g->eval_code(c));
  const std::vector<CanonicalElement> values(distinct.begin(), distinct.end());
  const CanonicalElement vg =
      g->eval_code(words_to_codes({o.g_word}).front());
  std::vector<CanonicalElement> translated;
  for (const auto& v : values) translated.push_back(g->mul(vg, v));
  const Rat ball = parse_rat(o.ball);
  const MatchingInstance inst = matching_number(
      mg, values, translated, ball, exact_distance_oracle(mg));

  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (inst.certificate.match_left[i]) {
      pairs.push_back(
          nlohmann::json::array({i, *inst.certificate.match_left[i]}));
    }
  }
  nlohmann::json rendered = nlohmann::json::array();
  for (const auto& v : values) rendered.push_back(g->render(v));
  emit_json({{"ball", rat_str(ball)},
             {"deficiency_neighborhood", inst.certificate.deficiency_neighborhood},
             {"deficiency_set", inst.certificate.deficiency_set},
             {"left_values", rendered},
             {"mu", inst.mu},
             {"pairs", pairs},
             {"set_size", values.size()}});
  return kExitOk;
}

struct MetricFolnerOpts {
  std::string group;
  std::vector<std::string> f_words;
  std::vector<std::string> d_words;
  long long m = 1;
  long long n = 1;
};

int run_metric_folner(const GlobalOpts& global, const MetricFolnerOpts& o) {
  require_json_format(global, "metric folner");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const MetricGroup mg(g);
  const std::vector<Int> F = words_to_codes(o.f_words);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const MetricFolnerReport rep = is_metric_folner(mg, F, D, o.m, o.n);
  nlohmann::json out = {{"D", codes_json(D)},
                        {"codes", codes_json(F)},
                        {"group", desc},
                        {"m", rep.m},
                        {"n", rep.n},
                        {"ok", rep.ok},
                        {"per_e_mu", per_e_mu_json(rep.per_e_mu)},
                        {"set_size", rep.set_size}};
  if (!rep.ok) {
    out["violator"] = int_str(*rep.violator);
    out["violator_mu"] = *rep.violator_mu;
  }
  emit_json(out);
  return rep.ok ? kExitOk : kExitRefusal;
}

struct MetricSearchOpts {
  std::string group;
  long long ell = 1;
  long long m = 1;
  long long n = 1;
  std::vector<std::string> d_words;
};

int run_metric_search(const GlobalOpts& global, const MetricSearchOpts& o) {
  require_json_format(global, "metric search");
  const nlohmann::json desc = load_json_arg(o.group);
  const auto g = make_group(desc);
  const MetricGroup mg(g);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const auto result =
      search_metric_folner(mg, o.ell, o.m, o.n, D, global.budget);
  if (const auto* found = std::get_if<MetricSearchResult>(&result)) {
    nlohmann::json assignment = nlohmann::json::array();
    for (const auto& [pair, q] : found->assignment) {
      assignment.push_back(nlohmann::json::array(
          {int_str(pair.first), int_str(pair.second), rat_str(q)}));
    }
    emit_json({{"D", codes_json(D)},
               {"assignment", assignment},
               {"codes", codes_json(found->codes)},
               {"ell", o.ell},
               {"examined", found->examined},
               {"group", desc},
               {"m", found->report.m},
               {"n", found->report.n},
               {"ok", true},
               {"per_e_mu", per_e_mu_json(found->report.per_e_mu)},
               {"set_size", found->report.set_size}});
    return kExitOk;
  }
  emit_json({{"error", "budget-exhausted"},
             {"examined", std::get<SearchExhausted>(result).examined}});
  return kExitBudget;
}

struct MetricCertifyOpts {
  std::string group;
  long long m = 1;
  long long n = 1;
  std::vector<std::string> d_words;
  std::vector<std::string> f_words;
};

int run_metric_certify(const GlobalOpts& global, const MetricCertifyOpts& o) {
  require_json_format(global, "metric certify");
  const auto g = make_group(load_json_arg(o.group));
  const MetricGroup mg(g);
  const std::vector<Int> D = words_to_codes(o.d_words);
  const std::vector<Int> F = words_to_codes(o.f_words);
  const ThetaHatOutcome out = theta_hat(mg, o.m, o.n, D, F, global.budget);
  if (out.certified) {
    emit_json({{"certified", true},
               {"certified_set", codes_json(out.certified_set)},
               {"facts_consumed", out.facts_consumed},
               {"final_mu", out.final_mu}});
    return kExitOk;
  }
  emit_json({{"certified", false},
             {"error", "budget-exhausted"},
             {"facts_consumed", out.facts_consumed},
             {"final_mu", out.final_mu}});
  return kExitBudget;
}

struct MetricEstimateOpts {
  std::string group;
  std::string w1;
  std::string w2;
  std::string eps;
};

int run_metric_estimate(const GlobalOpts& global, const MetricEstimateOpts& o) {
  require_json_format(global, "metric estimate");
  const auto g = make_group(load_json_arg(o.group));
  const MetricGroup mg(g);
  const Int c1 = words_to_codes({o.w1}).front();
  const Int c2 = words_to_codes({o.w2}).front();
  const Rat eps = parse_rat(o.eps);
  const CaOracle oracle = mg.arc_metric()
                              ? circle_ca_oracle(mg)
                              : search_ca_oracle(mg, global.budget);
  const DistanceEstimate est = estimate_distance(mg, c1, c2, eps, oracle);
  emit_json({{"confirmations", est.confirmations},
             {"ell", est.ell},
             {"eps", rat_str(est.eps)},
             {"folner_codes", codes_json(est.folner_codes)},
             {"m", est.m},
             {"n", est.n},
             {"q0", rat_str(est.q0)},
             {"shared_f", int_str(est.shared_f)}});
  return kExitOk;
}

struct MetricVerifyOpts {
  std::string file;
};

int run_metric_verify(const GlobalOpts& global, const MetricVerifyOpts& o) {
  require_json_format(global, "metric verify");
  const nlohmann::json doc = load_json_arg(o.file);
  const auto g = make_group(doc.at("group"));
  const std::vector<Int> F = codes_from_json(doc.at("codes"));
  const std::vector<Int> D = codes_from_json(doc.at("D"));
  const long long m = doc.at("m").get<long long>();
  const long long n = doc.at("n").get<long long>();
  if (m < 1 || n < 1) throw UsageError("m and n must be positive");

  // independent re-check: direct metric, separate matching implementation
  std::set<CanonicalElement> distinct;
  for (const Int& c : F) distinct.insert(g->eval_code(c));
  const std::vector<CanonicalElement> values(distinct.begin(), distinct.end());
  const Rat radius(1, m);
  bool verified = true;
  std::string reason;
  nlohmann::json per_e = nlohmann::json::array();
  for (const Int& e : D) {
    const CanonicalElement ve = g->eval_code(e);
    std::vector<std::vector<char>> adj(
        values.size(), std::vector<char>(values.size(), 0));
    for (std::size_t j = 0; j < values.size(); ++j) {
      const CanonicalElement t = g->mul(ve, values[j]);
      for (std::size_t i = 0; i < values.size(); ++i) {
        adj[i][j] = direct_metric_distance(*g, t, values[i]) < radius ? 1 : 0;
      }
    }
    const std::size_t mu = direct_matching_size(adj);
    per_e.push_back(nlohmann::json::array({int_str(e), mu}));
    if (static_cast<long long>(mu) * n <
        (n - 1) * static_cast<long long>(values.size())) {
      verified = false;
      reason = "matching bound fails at " + int_str(e);
    }
  }

  // when a distance assignment is present, it must bracket every exact
  // distance at the declared precision
  if (doc.contains("assignment")) {
    const long long ell = doc.at("ell").get<long long>();
    if (ell < 1) throw UsageError("ell must be positive");
    for (const auto& entry : doc.at("assignment")) {
      const Int i = parse_code(entry.at(0).get<std::string>());
      const Int j = parse_code(entry.at(1).get<std::string>());
      const Rat q = parse_rat(entry.at(2).get<std::string>());
      const Rat d =
          direct_metric_distance(*g, g->eval_code(i), g->eval_code(j));
      if (!(q <= d && d < q + Rat(1, ell))) {
        verified = false;
        reason = "assignment bracket fails at (" + int_str(i) + ", " +
                 int_str(j) + ")";
      }
    }
  }

  nlohmann::json out = {{"per_e_mu", per_e},
                        {"set_size", values.size()},
                        {"verified", verified}};
  if (!verified) out["reason"] = reason;
  emit_json(out);
  return verified ? kExitOk : kExitRefusal;
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExhaustedError& e) {
    emit_json({{"detail", e.what()}, {"error", "budget-exhausted"}});
    return kExitBudget;
  } catch (const SequenceTotalityError& e) {
    emit_json({{"error", "undefined-at"}, {"j", e.j}});
    return kExitRefusal;
  } catch (const PrecisionFailure& e) {
    emit_json({{"detail", e.what()}, {"error", "precision-failure"}});
    return kExitRefusal;
  } catch (const DiscontinuityRefusal& e) {
    emit_json({{"detail", e.what()}, {"error", "refused"}});
    return kExitRefusal;
  }
}

}  // namespace
}  // namespace folner::cli

int main(int argc, char** argv) {
  using namespace folner::cli;

  CLI::App app{"workbench for amenability computations on numbered groups"};
  app.require_subcommand(1);
  auto global = std::make_shared<GlobalOpts>();
  app.add_option("--budget", global->budget,
                 "candidate/confirmation budget for bounded procedures")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", global->seed,
                 "random seed for property sweeps (reserved; all core "
                 "procedures are deterministic)")
      ->capture_default_str();
  app.add_option("--format", global->format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  int rc = kExitOk;
  const auto wire = [&rc, &global](CLI::App* cmd, auto opts, auto runner) {
    cmd->fallthrough();
    cmd->callback([&rc, &global, opts, runner]() {
      rc = run_guarded([&]() { return runner(*global, *opts); });
    });
  };

  // folner
  auto* folner_cmd = app.add_subcommand("folner", "Folner sets and functions");
  folner_cmd->require_subcommand(1);
  folner_cmd->fallthrough();
  {
    auto o = std::make_shared<FolnerSearchOpts>();
    auto* c = folner_cmd->add_subcommand(
        "search", "first canonical-order witness for (n, D)");
    c->add_option("--group", o->group, "group descriptor (JSON or path)")
        ->required();
    c->add_option("--n", o->n, "tolerance index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    wire(c, o, run_folner_search);
  }
  {
    auto o = std::make_shared<FolnerFunctionOpts>();
    auto* c = folner_cmd->add_subcommand(
        "function", "least witness size within the radius-bound ball");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--n", o->n, "tolerance index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    c->add_option("--bound", o->bound, "ball radius to draw subsets from")
        ->required();
    wire(c, o, run_folner_function);
  }
  {
    auto o = std::make_shared<FolnerVerifyOpts>();
    auto* c = folner_cmd->add_subcommand(
        "verify", "re-check a witness from scratch (set operations only)");
    c->add_option("--file", o->file, "witness JSON (from search/function)");
    c->add_option("--group", o->group, "group descriptor");
    c->add_option("--n", o->n, "tolerance index");
    c->add_option("--D", o->d_words, "translation words");
    c->add_option("--F", o->f_words, "set words");
    wire(c, o, run_folner_verify);
  }

  // reiter
  auto* reiter_cmd =
      app.add_subcommand("reiter", "summable invariant functions");
  reiter_cmd->require_subcommand(1);
  reiter_cmd->fallthrough();
  {
    auto o = std::make_shared<ReiterVerifyOpts>();
    auto* c = reiter_cmd->add_subcommand(
        "verify", "exact pushforward ratios against strict 1/n");
    c->add_option("--file", o->file, "self-contained JSON from compute/sigma");
    c->add_option("--group", o->group, "group descriptor");
    c->add_option("--n", o->n, "strictness index");
    c->add_option("--D", o->d_words, "translation words");
    c->add_option("--f", o->f, "function JSON (inline or path)");
    wire(c, o, run_reiter_verify);
  }
  {
    auto o = std::make_shared<ReiterComputeOpts>();
    auto* c = reiter_cmd->add_subcommand(
        "compute", "search a strictly 1/n-invariant characteristic function");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--n", o->n, "strictness index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    wire(c, o, run_reiter_compute);
  }
  {
    auto o = std::make_shared<ReiterKappaOpts>();
    auto* c = reiter_cmd->add_subcommand(
        "kappa", "incremental partition certification of a given function");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--n", o->n, "strictness index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    c->add_option("--f", o->f, "function JSON (inline or path)")->required();
    c->add_flag("--ce-only", o->ce_only,
                "consume the equality-pair enumeration; never refute");
    wire(c, o, run_reiter_kappa);
  }
  {
    auto o = std::make_shared<ReiterSigmaOpts>();
    auto* c = reiter_cmd->add_subcommand(
        "sigma", "find a function plus an extracted 1/n set");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--n", o->n, "target tolerance")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    wire(c, o, run_reiter_sigma);
  }

  // decide-eq
  {
    auto o = std::make_shared<DecideEqOpts>();
    auto* c = app.add_subcommand(
        "decide-eq", "decide word equality through a Folner oracle");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--w1", o->w1, "first word")->required();
    c->add_option("--w2", o->w2, "second word")->required();
    wire(c, o, run_decide_eq);
  }

  // sequence
  auto* seq_cmd = app.add_subcommand("sequence", "set sequences and horizons");
  seq_cmd->require_subcommand(1);
  seq_cmd->fallthrough();
  {
    auto o = std::make_shared<SequenceCheckOpts>();
    auto* c = seq_cmd->add_subcommand(
        "check", "finite-horizon invariance report for a set program");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--prog", o->prog, "program JSON (inline or path)")
        ->required();
    c->add_option("--horizon", o->horizon, "last stage index")->required();
    c->add_option("--nmax", o->nmax, "largest tolerance index")->required();
    c->add_option("--x", o->x_words, "translation words")->required();
    wire(c, o, run_sequence_check);
  }
  {
    auto o = std::make_shared<SequenceReductionOpts>();
    auto* c = seq_cmd->add_subcommand(
        "reduction", "run the direct-sum reduction over a family model");
    c->add_option("--model", o->model, "family model JSON (inline or path)")
        ->required();
    c->add_option("--horizon", o->horizon, "last stage index")->required();
    wire(c, o, run_sequence_reduction);
  }

  // convmod
  {
    auto o = std::make_shared<ConvmodOpts>();
    auto* c = app.add_subcommand(
        "convmod", "window means of the staged sequence for a rate (CSV)");
    c->add_option("--f", o->f, "rate expression: N, k, k^p, or b^k")
        ->required();
    c->add_option("--kmax", o->kmax, "last construction stage")->required();
    c->add_option("--csv", o->csv, "output path ('-' for stdout)")
        ->capture_default_str();
    wire(c, o, run_convmod);
  }

  // means
  auto* means_cmd = app.add_subcommand("means", "window means of sequences");
  means_cmd->require_subcommand(1);
  means_cmd->fallthrough();
  {
    auto o = std::make_shared<MeansTableOpts>();
    auto* c = means_cmd->add_subcommand(
        "table", "exact window means m_j for j up to jmax");
    c->add_option("--x", o->x, "sequence JSON (inline or path)")->required();
    c->add_option("--jmax", o->jmax, "last window index")->required();
    wire(c, o, run_means_table);
  }

  // metric
  auto* metric_cmd =
      app.add_subcommand("metric", "matching-based metric amenability");
  metric_cmd->require_subcommand(1);
  metric_cmd->fallthrough();
  {
    auto o = std::make_shared<MetricMatchingOpts>();
    auto* c = metric_cmd->add_subcommand(
        "matching", "matching number of a set against its translate");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--F", o->f_words, "set words")->required();
    c->add_option("--g", o->g_word, "translating word")->required();
    c->add_option("--ball", o->ball, "open-ball radius p/q")->required();
    wire(c, o, run_metric_matching);
  }
  {
    auto o = std::make_shared<MetricFolnerOpts>();
    auto* c = metric_cmd->add_subcommand(
        "folner", "per-translation matching bound at tolerance (m, n)");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--F", o->f_words, "set words")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    c->add_option("--m", o->m, "ball fineness index")->required();
    c->add_option("--n", o->n, "fraction index")->required();
    wire(c, o, run_metric_folner);
  }
  {
    auto o = std::make_shared<MetricSearchOpts>();
    auto* c = metric_cmd->add_subcommand(
        "search", "first canonical-order set passing the matching bound");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--ell", o->ell, "assignment precision index")->required();
    c->add_option("--m", o->m, "ball fineness index")->required();
    c->add_option("--n", o->n, "fraction index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    wire(c, o, run_metric_search);
  }
  {
    auto o = std::make_shared<MetricCertifyOpts>();
    auto* c = metric_cmd->add_subcommand(
        "certify", "fact-driven semi-decision for a given set");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--m", o->m, "ball fineness index")->required();
    c->add_option("--n", o->n, "fraction index")->required();
    c->add_option("--D", o->d_words, "translation words")->required();
    c->add_option("--F", o->f_words, "set words")->required();
    wire(c, o, run_metric_certify);
  }
  {
    auto o = std::make_shared<MetricEstimateOpts>();
    auto* c = metric_cmd->add_subcommand(
        "estimate", "distance window from a Folner source");
    c->add_option("--group", o->group, "group descriptor")->required();
    c->add_option("--w1", o->w1, "first word")->required();
    c->add_option("--w2", o->w2, "second word")->required();
    c->add_option("--eps", o->eps, "window width p/q")->required();
    wire(c, o, run_metric_estimate);
  }
  {
    auto o = std::make_shared<MetricVerifyOpts>();
    auto* c = metric_cmd->add_subcommand(
        "verify", "re-check a metric report from scratch");
    c->add_option("--file", o->file, "report JSON (from folner/search)")
        ->required();
    wire(c, o, run_metric_verify);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return rc;
}
