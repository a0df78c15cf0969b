#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tanglekit/core.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/guide.hpp"
#include "tanglekit/io.hpp"
#include "tanglekit/order.hpp"
#include "tanglekit/parallel.hpp"
#include "tanglekit/witness.hpp"

using namespace tanglekit;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFinding = 2;

// Raised for verification findings; carries the report to print.
struct Finding {
  json report;
};

void write_output(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + out + "'");
  f << text;
}

io::Loaded load_input(const std::string& input) {
  if (input.empty() || input == "-") {
    json doc;
    try {
      doc = json::parse(std::cin);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::ParseError, std::string("standard input: ") + e.what());
    }
    return io::load_document(doc, ".");
  }
  return io::load_file(input);
}

const Tangle& require_tangle(const io::Loaded& doc) {
  if (!doc.tangle) throw Error(ErrorKind::InvalidParam, "the document has no orientation");
  return *doc.tangle;
}

// Full min-side ordered system over V, when the document asks for it.
SystemPtr full_ordered(const io::Loaded& doc) {
  if (doc.order_function != "min-side") {
    throw Error(ErrorKind::MissingOrder, "this command needs \"order_function\": \"min-side\"");
  }
  return min_side_order(all_separations(doc.system->ground())).attach();
}

// k such that the tangle orients S_k: one more than the largest order present.
std::optional<int> implied_k(const io::Loaded& doc) {
  if (!doc.system->has_orders()) return std::nullopt;
  int k = 1;
  for (int o : *doc.system->orders()) k = std::max(k, o + 1);
  return k;
}

// Point set from a designated name, or a comma list of labels or indices.
PointSet resolve_set(const io::Loaded& doc, const std::string& spec) {
  if (const PointSet* s = doc.designated(spec)) return *s;
  const GroundSet& ground = doc.system->ground();
  PointSet out(ground.size);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    if (auto v = ground.find_label(item)) {
      out.set(*v);
      continue;
    }
    std::size_t pos = 0;
    std::size_t v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw Error(ErrorKind::InvalidParam, "unknown point or set '" + item + "'");
    if (v >= ground.size) throw Error(ErrorKind::IndexOutOfRange, "point " + item + " outside ground set");
    out.set(v);
  }
  return out;
}

ArithmeticMode parse_mode(const std::string& m) {
  if (m == "auto") return ArithmeticMode::Auto;
  if (m == "rational") return ArithmeticMode::Rational;
  if (m == "float") return ArithmeticMode::Float;
  throw Error(ErrorKind::InvalidParam, "mode must be auto, rational or float");
}

json set_json(const PointSet& s, const GroundSet& ground) {
  json labels = json::array();
  s.for_each([&](std::size_t v) { labels.push_back(ground.label(v)); });
  return json{{"set", io::point_set_to_json(s)}, {"labels", std::move(labels)}, {"size", s.count()}};
}

json orientation_json(const Orientation& o) {
  json out = json::array();
  for (bool b : o) out.push_back(b ? 1 : 0);
  return out;
}

struct AnalyzeOptions {
  std::string input = "-";
  std::size_t max_results = 1000;
  std::string algo = "exact";
  std::optional<int> k;
  std::string rho;
  bool max = false;
  std::string mode = "auto";
  std::uint64_t seed = 0;
  std::size_t max_trials = 10000;
  std::string from;
  std::string check;
};

json run_tangles(const io::Loaded& doc, const AnalyzeOptions& o, json& params) {
  params["max_results"] = o.max_results;
  EnumerateOptions opts;
  opts.max_results = o.max_results;
  const std::vector<Tangle> found = enumerate_tangles(doc.system, opts);
  json list = json::array();
  for (const Tangle& t : found) {
    json mins = json::array();
    for (std::size_t i : t.minimal_indices()) mins.push_back(i);
    list.push_back(json{{"orientation", orientation_json(t.orientation())}, {"minimal", std::move(mins)}});
  }
  return json{{"count", found.size()}, {"truncated", found.size() == o.max_results}, {"tangles", std::move(list)}};
}

json run_witness(const io::Loaded& doc, const AnalyzeOptions& o, json& params) {
  const Tangle& t = require_tangle(doc);
  const std::optional<int> k = o.k ? o.k : implied_k(doc);
  params["algo"] = o.algo;
  params["k"] = k ? json(*k) : json(nullptr);
  json results;
  if (o.algo == "exact") {
    results = io::witness_report_to_json(min_witnessing(t), t, k);
  } else if (o.algo == "greedy") {
    results = io::witness_report_to_json(greedy_witnessing(t), t, k);
  } else if (o.algo == "inductive") {
    if (!k) throw Error(ErrorKind::MissingOrder, "inductive witnessing needs --k or attached orders");
    const SystemPtr full = full_ordered(doc);
    const InductiveResult r = inductive_witnessing(t, *full, *k);
    results = io::witness_report_to_json(r.report, t, k);
    results["base_cover"] = io::point_set_to_json(r.base_cover);
    results["bound_first"] = bound_values(*k).first_bound.get_str();
    json levels = json::array();
    for (const InductiveLevel& l : r.trace) {
      levels.push_back(json{{"level", l.level},
                            {"witness_points", l.witness_points.count()},
                            {"classes", l.partitions.size()},
                            {"new_points", io::point_set_to_json(l.new_points)}});
    }
    results["levels"] = std::move(levels);
  } else {
    throw Error(ErrorKind::InvalidParam, "unknown algorithm '" + o.algo + "'");
  }
  const WitnessCheck check = is_witnessing(t, io::point_set_from_json(results["set"], t.ground_size()));
  results["verified"] = check.witnessing;
  return results;
}

json run_cover(const io::Loaded& doc) {
  const Tangle& t = require_tangle(doc);
  const PointSet c = min_cover(t);
  json r = set_json(c, doc.system->ground());
  r["verified"] = is_cover(t, c);
  return r;
}

json run_chain(const io::Loaded& doc) {
  const Tangle& t = require_tangle(doc);
  const IntersectionChain c = max_intersection_chain(t);
  json inter = json::array();
  for (const PointSet& s : c.intersections) inter.push_back(io::point_set_to_json(s));
  return json{{"length", c.length()}, {"sequence", c.sequence}, {"intersections", std::move(inter)}};
}

json run_guide(const io::Loaded& doc, const AnalyzeOptions& o, json& params) {
  const Tangle& t = require_tangle(doc);
  const ArithmeticMode mode = parse_mode(o.mode);
  params["mode"] = o.mode;
  if (o.max == !o.rho.empty()) throw Error(ErrorKind::InvalidParam, "pass exactly one of --rho and --max");
  if (o.max) {
    params["max"] = true;
    const MaxReliability m = max_reliability(t, mode);
    const mpq_class achieved = function_reliability(t, m.g_star);
    const bool exact = m.mode != ArithmeticMode::Float;
    json r;
    r["rho_star"] = io::rational_to_string(m.rho_star);
    r["c_star_one"] = exact ? json(io::rational_to_string(m.c_star_one)) : json(m.c_star_one.get_d());
    r["mode"] = to_string(m.mode);
    r["weights"] = io::guiding_function_to_json(m.g_star, t.system().ground());
    r["achieved"] = exact ? json(io::rational_to_string(achieved)) : json(achieved.get_d());
    r["guiding"] = m.rho_star > mpq_class(1, 2);
    r["verified"] = exact ? achieved == m.rho_star : true;
    return r;
  }
  const mpq_class rho = io::parse_rational(o.rho);
  params["rho"] = io::rational_to_string(rho);
  const GuidanceCertificate cert = guiding_duality(t, rho, mode);
  json r = io::certificate_to_json(cert, t);
  r["reverified"] = verify_certificate(t, cert);
  return r;
}

json run_guide_set(const io::Loaded& doc, const AnalyzeOptions& o, json& params) {
  const Tangle& t = require_tangle(doc);
  params["seed"] = o.seed;
  params["max_trials"] = o.max_trials;
  GuidingFunction g = GuidingFunction::uniform(t.ground_size());
  if (!o.from.empty()) {
    params["from"] = o.from;
    g = GuidingFunction::indicator(resolve_set(doc, o.from));
  } else {
    g = max_reliability(t, parse_mode(o.mode)).g_star;
  }
  const mpq_class rho_g = function_reliability(t, g);
  json r;
  r["function_reliability"] = io::rational_to_string(rho_g);
  if (rho_g <= mpq_class(1, 2)) {
    r["found"] = false;
    r["reason"] = "the guiding function has reliability <= 1/2";
    return r;
  }
  const SamplerCondition cond = sampler_condition(t, g);
  r["condition_lhs"] = io::rational_to_string(cond.lhs);
  r["condition_holds"] = cond.holds;
  SamplerConfig cfg;
  cfg.seed = o.seed;
  cfg.max_trials = o.max_trials;
  const SampleResult s = sample_guiding_set(t, g, cfg);
  r["found"] = s.set.has_value();
  r["trial"] = s.trial;
  if (s.set) {
    r.update(set_json(*s.set, t.system().ground()));
    r["reliability"] = io::rational_to_string(s.reliability);
    r["verified"] = set_reliability(t, *s.set) > mpq_class(1, 2);
  }
  return r;
}

json run_extend(const io::Loaded& doc) {
  const Tangle& t = require_tangle(doc);
  const Extension e = extend_order(t);
  const Tangle& star = e.tangle();
  const SubmodularityResult sub = is_submodular(*e.full, Closure::Full);
  bool contains = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto idx = star.system().find(t.big_side(i));
    const auto idx_c = star.system().find(t.small_side(i));
    const auto j = idx ? idx : idx_c;
    if (!j || star.big_side(*j) != t.big_side(i)) contains = false;
  }
  std::vector<PointSet> before = t.minimal_sides();
  std::vector<PointSet> after = star.minimal_sides();
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  const IntersectionChain chain = max_intersection_chain(star);
  return json{{"k", e.k},
              {"submodular", sub.submodular},
              {"separations", e.full->size()},
              {"s_star_size", star.size()},
              {"consistent", is_consistent(star.system(), star.orientation()).consistent},
              {"contains_base", contains},
              {"minimal_preserved", before == after},
              {"chain_length", chain.length()},
              {"orientation", orientation_json(star.orientation())}};
}

json run_verify(const io::Loaded& doc, const AnalyzeOptions& o, json& params, bool& passed) {
  params["check"] = o.check;
  json r;
  if (o.check == "consistency") {
    if (!doc.tangle) throw Error(ErrorKind::InvalidParam, "the document has no orientation");
    const ConsistencyResult c = is_consistent(*doc.system, doc.tangle->orientation());
    passed = c.consistent;
    r["consistent"] = c.consistent;
    if (!c.consistent) r["violation"] = c.violation;
  } else if (o.check == "submodularity") {
    SystemPtr sys = doc.system;
    Closure closure = Closure::Sampled;
    if (doc.order_function == "min-side") {
      sys = full_ordered(doc);
      closure = Closure::Full;
    } else if (!sys->has_orders()) {
      throw Error(ErrorKind::MissingOrder, "the instance carries no orders");
    }
    const SubmodularityResult s = is_submodular(*sys, closure);
    passed = s.submodular;
    r["submodular"] = s.submodular;
    r["closure"] = closure == Closure::Full ? "full" : "sampled";
    r["pairs_checked"] = s.pairs_checked;
    r["pairs_skipped"] = s.pairs_skipped;
    if (s.violation) {
      r["violation"] = {io::point_set_to_json(s.violation->first), io::point_set_to_json(s.violation->second)};
    }
  } else if (o.check.rfind("witnessing:", 0) == 0) {
    const Tangle& t = require_tangle(doc);
    const PointSet w = resolve_set(doc, o.check.substr(11));
    const WitnessCheck c = is_witnessing(t, w);
    passed = c.witnessing;
    r = set_json(w, doc.system->ground());
    r["witnessing"] = c.witnessing;
    if (!c.witnessing) r["unwitnessed"] = c.unwitnessed;
  } else if (o.check.rfind("reliability:", 0) == 0) {
    const Tangle& t = require_tangle(doc);
    const PointSet g = resolve_set(doc, o.check.substr(12));
    const mpq_class rel = set_reliability(t, g);
    passed = rel > mpq_class(1, 2);
    r = set_json(g, doc.system->ground());
    r["reliability"] = io::rational_to_string(rel);
    r["guiding"] = passed;
  } else {
    throw Error(ErrorKind::InvalidParam, "unknown check '" + o.check + "'");
  }
  r["passed"] = passed;
  return r;
}

InstanceBundle generate(const std::string& example, std::optional<int> k, std::optional<int> n, std::optional<int> m,
                        std::uint64_t seed, std::optional<int> arc_len) {
  auto need = [&](const std::optional<int>& v, const char* name) {
    if (!v) throw Error(ErrorKind::InvalidParam, "--example " + example + " needs --" + name);
    return *v;
  };
  if (example == "minorder") return gen_min_order(need(k, "k"));
  if (example == "triples") return gen_triples(need(k, "k"));
  if (example == "arcs") return gen_arcs(need(n, "n"), arc_len);
  if (example == "arcs-witness") return gen_arcs_witness(need(k, "k"), arc_len);
  if (example == "random") {
    const int nn = need(n, "n");
    const int mm = need(m, "m");
    if (nn < 0 || mm < 0) throw Error(ErrorKind::InvalidParam, "--n and --m must be non-negative");
    return gen_random(static_cast<std::size_t>(nn), static_cast<std::size_t>(mm), seed);
  }
  throw Error(ErrorKind::InvalidParam, "unknown example '" + example + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangles of bipartitions: witnessing sets, guiding functions and generators"};
  app.require_subcommand(1);

  int threads = 0;
  if (const char* env = std::getenv("TANGLEKIT_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "worker threads (default: TANGLEKIT_THREADS or all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "emit a generated instance with its tangle");
  std::string example;
  std::optional<int> gk, gn, gm, garc;
  std::uint64_t gseed = 0;
  std::string gout;
  gen->add_option("--example", example, "minorder|triples|arcs|arcs-witness|random")->required();
  gen->add_option("--k", gk);
  gen->add_option("--n", gn);
  gen->add_option("--m", gm);
  gen->add_option("--seed", gseed);
  gen->add_option("--arc-len", garc);
  gen->add_option("--out", gout, "output file (default standard output)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "turn a CSV of features into an instance");
  std::string csv_path = "-";
  std::string threshold;
  std::string order;
  std::string iout;
  ingest->add_option("csv", csv_path, "CSV file or - for standard input");
  ingest->add_option("--threshold", threshold, "median | value:x for numeric columns");
  ingest->add_option("--order", order, "min-side to attach the min-side order");
  ingest->add_option("--out", iout);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "analyze a tangle file or instance");
  analyze->require_subcommand(1);
  AnalyzeOptions ao;
  analyze->add_option("input", ao.input, "tangle file or - for standard input");
  auto* a_tangles = analyze->add_subcommand("tangles", "enumerate the tangles of the system");
  a_tangles->add_option("--max-results", ao.max_results);
  auto* a_witness = analyze->add_subcommand("witness", "witnessing set");
  a_witness->add_option("--algo", ao.algo, "exact|greedy|inductive");
  a_witness->add_option("--k", ao.k);
  auto* a_cover = analyze->add_subcommand("cover", "minimum cover");
  auto* a_chain = analyze->add_subcommand("chain", "longest intersection chain");
  auto* a_guide = analyze->add_subcommand("guide", "guiding function or dual witness");
  a_guide->add_option("--rho", ao.rho, "p/q");
  a_guide->add_flag("--max", ao.max, "maximum reliability");
  a_guide->add_option("--mode", ao.mode, "auto|rational|float");
  auto* a_guide_set = analyze->add_subcommand("guide-set", "randomized guiding set");
  a_guide_set->add_option("--seed", ao.seed);
  a_guide_set->add_option("--max-trials", ao.max_trials);
  a_guide_set->add_option("--from", ao.from, "designated set whose indicator is the guiding function");
  a_guide_set->add_option("--mode", ao.mode, "auto|rational|float");
  auto* a_extend = analyze->add_subcommand("extend", "extend the order to all separations");
  auto* a_verify = analyze->add_subcommand("verify", "check a property");
  a_verify->add_option("--check", ao.check, "consistency|submodularity|witnessing:SET|reliability:SET")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*gen) {
      const InstanceBundle b = generate(example, gk, gn, gm, gseed, garc);
      write_output(io::bundle_to_json(b), gout);
      return kExitOk;
    }
    if (*ingest) {
      const io::Threshold th = threshold.empty() ? io::Threshold{} : io::Threshold::parse(threshold);
      if (!order.empty() && order != "min-side") throw Error(ErrorKind::InvalidParam, "--order must be min-side");
      std::vector<std::string> warnings;
      json inst;
      if (csv_path == "-") {
        inst = io::ingest_csv(std::cin, th, !order.empty(), warnings);
      } else {
        std::ifstream f(csv_path);
        if (!f) throw Error(ErrorKind::ParseError, "cannot open '" + csv_path + "'");
        inst = io::ingest_csv(f, th, !order.empty(), warnings);
      }
      if (!order.empty()) inst["order_function"] = order;
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      write_output(inst, iout);
      return kExitOk;
    }

    const auto start = std::chrono::steady_clock::now();
    const io::Loaded doc = load_input(ao.input);
    json params = json::object();
    json results;
    std::string command;
    bool passed = true;
    if (*a_tangles) {
      command = "tangles";
      results = run_tangles(doc, ao, params);
    } else if (*a_witness) {
      command = "witness";
      results = run_witness(doc, ao, params);
    } else if (*a_cover) {
      command = "cover";
      results = run_cover(doc);
    } else if (*a_chain) {
      command = "chain";
      results = run_chain(doc);
    } else if (*a_guide) {
      command = "guide";
      results = run_guide(doc, ao, params);
    } else if (*a_guide_set) {
      command = "guide-set";
      results = run_guide_set(doc, ao, params);
      passed = results.value("found", false);
    } else if (*a_extend) {
      command = "extend";
      results = run_extend(doc);
    } else {
      command = "verify";
      results = run_verify(doc, ao, params, passed);
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    write_output(io::report(command, io::digest(doc.canonical), params, results, ms), "");
    return passed ? kExitOk : kExitFinding;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::NotATangle ? kExitFinding : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
