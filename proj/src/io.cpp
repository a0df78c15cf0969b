#include "tanglekit/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/tokenizer.hpp>
#include <openssl/evp.h>

#include "tanglekit/error.hpp"

namespace tanglekit::io {

std::string rational_to_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

mpq_class parse_rational(const std::string& text) {
  auto fail = [&]() -> mpq_class { throw Error(ErrorKind::ParseError, "not a rational number: '" + text + "'"); };
  if (text.empty()) return fail();
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    // Exact decimal: digits before and after the point.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") return fail();
    if (digits.front() == '+') digits.erase(0, 1);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) return fail();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::string t = text;
  if (t.front() == '+') t.erase(0, 1);
  mpq_class q;
  if (t.empty() || q.set_str(t, 10) != 0) return fail();
  if (sgn(q.get_den()) == 0) return fail();
  q.canonicalize();
  return q;
}

json point_set_to_json(const PointSet& s) { return s.indices(); }

PointSet point_set_from_json(const json& j, std::size_t universe) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected an array of point indices");
  std::vector<std::size_t> idx;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 0) {
      throw Error(ErrorKind::ParseError, "point indices must be non-negative integers");
    }
    idx.push_back(e.get<std::size_t>());
  }
  return PointSet::from_indices(universe, idx);
}

json instance_to_json(const SeparationSystem& system) {
  json out;
  out["ground_set_size"] = system.ground_size();
  if (!system.ground().labels.empty()) out["labels"] = system.ground().labels;
  json seps = json::array();
  for (std::size_t i = 0; i < system.size(); ++i) {
    json s;
    s["side"] = point_set_to_json(system.separation(i));
    if (system.has_orders()) s["order"] = (*system.orders())[i];
    seps.push_back(std::move(s));
  }
  out["separations"] = std::move(seps);
  return out;
}

json bundle_to_json(const InstanceBundle& bundle) {
  json inst = instance_to_json(*bundle.system);
  if (!bundle.order_function.empty()) inst["order_function"] = bundle.order_function;
  if (!bundle.designated_sets.empty()) {
    json d = json::object();
    for (const auto& [name, set] : bundle.designated_sets) d[name] = point_set_to_json(set);
    inst["designated_sets"] = std::move(d);
  }
  json meta;
  meta["example"] = bundle.example;
  meta["params"] = bundle.params;
  if (!bundle.flags.empty()) meta["flags"] = bundle.flags;
  if (!bundle.spread_triples.empty()) meta["spread_triples"] = bundle.spread_triples;
  inst["metadata"] = std::move(meta);

  json orientation = json::array();
  for (bool b : bundle.tangle.orientation()) orientation.push_back(b ? 1 : 0);
  return json{{"instance", std::move(inst)}, {"orientation", std::move(orientation)}};
}

const PointSet* Loaded::designated(const std::string& name) const {
  for (const auto& [key, set] : designated_sets) {
    if (key == name) return &set;
  }
  return nullptr;
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
  }
}

std::size_t require_size(const json& inst) {
  if (!inst.contains("ground_set_size") || !inst["ground_set_size"].is_number_integer() ||
      inst["ground_set_size"].get<long long>() < 1) {
    throw Error(ErrorKind::ParseError, "instance needs a positive integer 'ground_set_size'");
  }
  return inst["ground_set_size"].get<std::size_t>();
}

}  // namespace

Loaded load_document(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "expected a JSON object");
  json inst;
  const json* orientation = nullptr;
  if (doc.contains("instance")) {
    const json& ref = doc["instance"];
    if (ref.is_string()) {
      std::filesystem::path p = ref.get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      inst = read_json_file(p.string());
    } else {
      inst = ref;
    }
    if (doc.contains("orientation")) orientation = &doc["orientation"];
  } else {
    inst = doc;
  }
  if (!inst.is_object()) throw Error(ErrorKind::ParseError, "instance must be a JSON object");

  const std::size_t n = require_size(inst);
  std::vector<std::string> labels;
  if (inst.contains("labels")) {
    try {
      labels = inst["labels"].get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw Error(ErrorKind::ParseError, "'labels' must be an array of strings");
    }
  }
  GroundSet ground = GroundSet::make(n, std::move(labels));

  if (!inst.contains("separations") || !inst["separations"].is_array()) {
    throw Error(ErrorKind::ParseError, "instance needs a 'separations' array");
  }
  std::vector<PointSet> sides;
  std::vector<int> orders;
  std::size_t with_order = 0;
  for (const auto& s : inst["separations"]) {
    if (!s.is_object() || !s.contains("side")) throw Error(ErrorKind::ParseError, "separation without 'side'");
    sides.push_back(point_set_from_json(s["side"], n));
    if (s.contains("order")) {
      if (!s["order"].is_number_integer()) throw Error(ErrorKind::ParseError, "order must be an integer");
      orders.push_back(s["order"].get<int>());
      ++with_order;
    }
  }
  if (with_order != 0 && with_order != sides.size()) {
    throw Error(ErrorKind::ParseError, "order given for some separations only");
  }

  Loaded out;
  if (inst.contains("order_function")) {
    out.order_function = inst["order_function"].get<std::string>();
    if (out.order_function != "min-side") {
      throw Error(ErrorKind::ParseError, "unknown order function '" + out.order_function + "'");
    }
    if (with_order == 0) {
      orders.clear();
      for (const PointSet& s : sides) orders.push_back(static_cast<int>(std::min(s.count(), n - s.count())));
      with_order = sides.size();
    }
  }
  BuiltSystem built = make_system(std::move(ground), sides,
                                  with_order ? std::optional<std::vector<int>>(orders) : std::nullopt);
  out.system = built.system;

  if (orientation) {
    if (!orientation->is_array()) throw Error(ErrorKind::ParseError, "'orientation' must be an array");
    if (orientation->size() != sides.size()) {
      throw Error(ErrorKind::LengthMismatch, "orientation has " + std::to_string(orientation->size()) +
                                                 " entries for " + std::to_string(sides.size()) + " separations");
    }
    std::vector<std::optional<bool>> stored(out.system->size());
    for (std::size_t i = 0; i < sides.size(); ++i) {
      const json& e = (*orientation)[i];
      bool bit = false;
      if (e.is_boolean()) {
        bit = e.get<bool>();
      } else if (e.is_number_integer() && (e.get<int>() == 0 || e.get<int>() == 1)) {
        bit = e.get<int>() == 1;
      } else {
        throw Error(ErrorKind::ParseError, "orientation entries must be 0 or 1");
      }
      const PointSet big = bit ? sides[i] : sides[i].complement();
      const std::size_t idx = built.mapping[i];
      const bool canonical = big == out.system->separation(idx);
      if (stored[idx] && *stored[idx] != canonical) {
        throw Error(ErrorKind::ParseError, "conflicting orientation for duplicate separation " + std::to_string(i));
      }
      stored[idx] = canonical;
    }
    Orientation o;
    for (const auto& b : stored) o.push_back(*b);
    out.tangle = Tangle::assume_consistent(out.system, std::move(o));
  }

  if (inst.contains("designated_sets")) {
    if (!inst["designated_sets"].is_object()) throw Error(ErrorKind::ParseError, "'designated_sets' must be an object");
    for (const auto& [name, value] : inst["designated_sets"].items()) {
      out.designated_sets.emplace_back(name, point_set_from_json(value, n));
    }
  }
  if (inst.contains("metadata")) out.metadata = inst["metadata"];
  out.canonical = instance_to_json(*out.system);
  return out;
}

Loaded load_file(const std::string& path) {
  const std::filesystem::path p(path);
  return load_document(read_json_file(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

std::string digest(const json& canonical) {
  const std::string text = canonical.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::InternalError, "SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

json report(const std::string& command, const std::string& instance_digest, const json& parameters,
            const json& results, double wall_time_ms) {
  return json{{"command", command},
              {"instance_digest", instance_digest},
              {"parameters", parameters},
              {"results", results},
              {"wall_time_ms", wall_time_ms}};
}

namespace {

json big_number(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json labels_of(const PointSet& s, const GroundSet& ground) {
  json out = json::array();
  s.for_each([&](std::size_t v) { out.push_back(ground.label(v)); });
  return out;
}

json weight_value(const mpq_class& w, ArithmeticMode mode) {
  if (mode == ArithmeticMode::Float) return w.get_d();
  return rational_to_string(w);
}

}  // namespace

json witness_report_to_json(const WitnessReport& r, const Tangle& tangle, std::optional<int> k) {
  json out;
  out["set"] = point_set_to_json(r.set);
  out["labels"] = labels_of(r.set, tangle.system().ground());
  out["size"] = r.set.count();
  out["method"] = to_string(r.method);
  out["certified_minimal"] = r.certified_minimal;
  out["triple_count"] = r.triple_count;
  if (k && *k >= 1) {
    const BoundValues b = bound_values(*k);
    out["k"] = *k;
    out["bound_second"] = big_number(b.second_bound);
    out["within_bound"] = mpz_class(static_cast<unsigned long>(r.set.count())) <= b.second_bound;
  } else {
    out["bound_second"] = nullptr;
    out["within_bound"] = nullptr;
  }
  return out;
}

json guiding_function_to_json(const GuidingFunction& g, const GroundSet& ground) {
  json w = json::object();
  for (std::size_t v = 0; v < g.weights.size(); ++v) w[ground.label(v)] = weight_value(g.weights[v], g.mode);
  return w;
}

json certificate_to_json(const GuidanceCertificate& cert, const Tangle& tangle) {
  json out;
  out["branch"] = to_string(cert.branch);
  out["rho"] = rational_to_string(cert.rho);
  out["mode"] = to_string(cert.mode);
  out["lp_optimum"] = weight_value(cert.lp_optimum, cert.mode);
  if (cert.guiding) {
    out["weights"] = guiding_function_to_json(*cert.guiding, tangle.system().ground());
  } else if (cert.witness) {
    json w = json::object();
    for (std::size_t s = 0; s < cert.witness->weights.size(); ++s) {
      w[std::to_string(s)] = weight_value(cert.witness->weights[s], cert.mode);
    }
    out["weights"] = std::move(w);
  }
  out["verified"] = cert.verified;
  return out;
}

template <class T>
json lp_to_json(const LinearProgram<T>& lp) {
  auto conv = [](const T& v) -> json {
    if constexpr (std::is_same_v<T, double>) {
      return v;
    } else {
      return rational_to_string(v);
    }
  };
  json a = json::array();
  for (const auto& row : lp.A) {
    json r = json::array();
    for (const T& v : row) r.push_back(conv(v));
    a.push_back(std::move(r));
  }
  json b = json::array();
  for (const T& v : lp.b) b.push_back(conv(v));
  json c = json::array();
  for (const T& v : lp.c) c.push_back(conv(v));
  return json{{"A", std::move(a)}, {"b", std::move(b)}, {"c", std::move(c)}};
}

template <class T>
LinearProgram<T> lp_from_json(const json& j) {
  auto conv = [](const json& v) -> T {
    if constexpr (std::is_same_v<T, double>) {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
    } else {
      if (v.is_string()) return parse_rational(v.get<std::string>());
      if (v.is_number_integer()) return mpq_class(v.get<long>());
      if (v.is_number()) return mpq_class(v.get<double>());
    }
    throw Error(ErrorKind::ParseError, "LP entries must be numbers or rational strings");
  };
  if (!j.is_object() || !j.contains("A") || !j.contains("b") || !j.contains("c")) {
    throw Error(ErrorKind::ParseError, "LP JSON needs 'A', 'b' and 'c'");
  }
  LinearProgram<T> lp;
  for (const auto& row : j["A"]) {
    std::vector<T> r;
    for (const auto& v : row) r.push_back(conv(v));
    lp.A.push_back(std::move(r));
  }
  for (const auto& v : j["b"]) lp.b.push_back(conv(v));
  for (const auto& v : j["c"]) lp.c.push_back(conv(v));
  lp.validate();
  return lp;
}

template json lp_to_json(const LinearProgram<mpq_class>&);
template json lp_to_json(const LinearProgram<double>&);
template LinearProgram<mpq_class> lp_from_json(const json&);
template LinearProgram<double> lp_from_json(const json&);

Threshold Threshold::parse(const std::string& text) {
  if (text == "median") return {ThresholdKind::Median, 0.0};
  if (text.rfind("value:", 0) == 0) {
    const std::string num = text.substr(6);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw Error(ErrorKind::ParseError, "bad threshold value '" + num + "'");
    }
    return {ThresholdKind::Value, v};
  }
  throw Error(ErrorKind::ParseError, "threshold must be 'median' or 'value:x', got '" + text + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::vector<std::string> out;
  try {
    Tokenizer tok(line);
    for (const auto& t : tok) out.push_back(t);
  } catch (const boost::escaped_list_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
  }
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

json ingest_csv(std::istream& in, const Threshold& threshold, bool min_side, std::vector<std::string>& warnings) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields = split_csv_line(line, line_no);
    if (header.empty()) {
      header = std::move(fields);
      columns.resize(header.size());
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " fields, found " +
                                             std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ", column '" + header[c] +
                                               "': '" + f + "' is not a number");
      }
      columns[c].push_back(v);
    }
    ++rows;
  }
  if (header.empty()) throw Error(ErrorKind::ParseError, "CSV has no header row");
  if (rows == 0) throw Error(ErrorKind::ParseError, "CSV has no data rows");

  json seps = json::array();
  json kept = json::array();
  std::vector<PointSet> seen;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    const bool binary = std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0 || v == 1.0; });
    PointSet side(rows);
    if (binary) {
      for (std::size_t r = 0; r < rows; ++r) {
        if (col[r] == 1.0) side.set(r);
      }
    } else if (threshold.kind == ThresholdKind::Median) {
      std::vector<double> sorted = col;
      std::sort(sorted.begin(), sorted.end());
      const double median = rows % 2 == 1 ? sorted[rows / 2] : (sorted[rows / 2 - 1] + sorted[rows / 2]) / 2.0;
      for (std::size_t r = 0; r < rows; ++r) {
        if (col[r] >= median) side.set(r);
      }
    } else if (threshold.kind == ThresholdKind::Value) {
      for (std::size_t r = 0; r < rows; ++r) {
        if (col[r] > threshold.value) side.set(r);
      }
    } else {
      throw Error(ErrorKind::ParseError, "column '" + header[c] + "' is not binary; pass a threshold");
    }
    if (side.empty() || side.is_full()) {
      warnings.push_back("column '" + header[c] + "' gives a trivial bipartition and was skipped");
      continue;
    }
    const PointSet canon = canonical_side(side);
    if (std::find(seen.begin(), seen.end(), canon) != seen.end()) {
      warnings.push_back("column '" + header[c] + "' repeats an earlier separation and was skipped");
      continue;
    }
    seen.push_back(canon);
    json s;
    s["side"] = point_set_to_json(side);
    if (min_side) s["order"] = std::min(side.count(), rows - side.count());
    seps.push_back(std::move(s));
    kept.push_back(header[c]);
  }
  json out;
  out["ground_set_size"] = rows;
  out["separations"] = std::move(seps);
  out["metadata"] = json{{"source", "csv"}, {"columns", std::move(kept)}};
  return out;
}

}  // namespace tanglekit::io
