#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "tanglekit/core.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/guide.hpp"
#include "tanglekit/lp.hpp"
#include "tanglekit/witness.hpp"

namespace tanglekit::io {

using json = nlohmann::json;

/// "p/q" with q >= 1, always including the denominator.
std::string rational_to_string(const mpq_class& q);
/// Accepts "p/q", integers and plain decimals ("0.75"). Throws ParseError.
mpq_class parse_rational(const std::string& text);

json point_set_to_json(const PointSet& s);
/// Throws ParseError / IndexOutOfRange.
PointSet point_set_from_json(const json& j, std::size_t universe);

/// Instance JSON of a system: ground size, labels, canonical sides, orders.
json instance_to_json(const SeparationSystem& system);
/// Tangle file of a generator bundle: inline instance with designated sets
/// and metadata, plus the orientation (1 = listed side is the big side).
json bundle_to_json(const InstanceBundle& bundle);

struct Loaded {
  SystemPtr system;
  /// Present when the document carried an orientation. Consistency is not
  /// checked here.
  std::optional<Tangle> tangle;
  std::vector<std::pair<std::string, PointSet>> designated_sets;
  std::string order_function;
  json metadata;
  /// Canonical form of the instance, hashed into report digests.
  json canonical;

  [[nodiscard]] const PointSet* designated(const std::string& name) const;
};

/// Reads a tangle file (inline instance or a path relative to `base_dir`) or
/// a bare instance. Throws ParseError and the core construction errors.
Loaded load_document(const json& doc, const std::string& base_dir = ".");
Loaded load_file(const std::string& path);

/// SHA-256 (hex) of the compact dump of `canonical`.
std::string digest(const json& canonical);

json report(const std::string& command, const std::string& instance_digest, const json& parameters,
            const json& results, double wall_time_ms);

json witness_report_to_json(const WitnessReport& report, const Tangle& tangle, std::optional<int> k);
json certificate_to_json(const GuidanceCertificate& cert, const Tangle& tangle);
json guiding_function_to_json(const GuidingFunction& g, const GroundSet& ground);

template <class T>
json lp_to_json(const LinearProgram<T>& lp);
template <class T>
LinearProgram<T> lp_from_json(const json& j);

enum class ThresholdKind { None, Median, Value };
struct Threshold {
  ThresholdKind kind = ThresholdKind::None;
  double value = 0.0;

  /// "median" or "value:x". Throws ParseError.
  static Threshold parse(const std::string& text);
};

/// One separation per CSV column (header row required). Binary columns use
/// the rows holding 1; numeric columns need a threshold: rows >= the median,
/// or rows > x. All-0/all-1 columns are skipped with a warning.
json ingest_csv(std::istream& in, const Threshold& threshold, bool min_side, std::vector<std::string>& warnings);

}  // namespace tanglekit::io
