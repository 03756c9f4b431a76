#pragma once

#include "tricert/moduli.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace tricert::io {

using json = nlohmann::json;

/// {"lo": ..., "hi": ...} as decimal strings rounded outward.
template <typename T>
json interval_json(const Interval<T>& x, int digits = 40);
IntervalMP interval_from_json(const json& j);

std::string sha256_hex(std::string_view data);

/// Adds "hash": sha256 of the compact dump of everything else.
json with_hash(json payload);
/// Raises integrity when the stored hash does not match the payload.
void check_hash(const json& record);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

/// Everything a run depends on.
struct RunConfig {
  std::vector<ParallelogramSpec> parallelograms;
  std::map<std::string, std::map<Side, int>> expected_signs;
  int n_sub = 40;
  int fem_N = 32;
  int precision_bits = 256;
  int jobs = 1;
  ValidateOptions validate;

  const ParallelogramSpec& parallelogram(const std::string& name) const;
  int expected_sign(const std::string& name, Side side) const;
};

/// A and B with the subdivision and mesh used for the proof, signs +1 on the
/// "+" sides and -1 on the "-" sides.
RunConfig default_config();
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);

/// Hash of the inputs that determine a run's numbers (not its timing).
std::string manifest_hash(const std::string& command, const json& config, const json& arguments);

json candidate_json(const MPSCandidate& c);
MPSCandidate candidate_from_json(const json& j);

template <typename T>
json certification_json(const Certification<T>& c);

template <typename T>
json verdict_json(const SideTask& task, const SegmentVerdict<T>& v, const std::string& manifest);
/// Reads a verdict file after checking its hash.
VerdictRecord verdict_from_json(const json& j);

json certificate_json(const Certificate& c);

} // namespace tricert::io
