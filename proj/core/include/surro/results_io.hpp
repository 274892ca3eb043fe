#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "surro/bootstrap.hpp"
#include "surro/csv_io.hpp"
#include "surro/estimators.hpp"
#include "surro/homogeneity.hpp"
#include "surro/simgen.hpp"

namespace surro {

/// Provenance block embedded in every JSON artifact: command, flattened
/// configuration, input digests, seed, version, per-phase timings.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a-64 hex
  std::uint64_t seed = 0;
  std::string version;
  std::map<std::string, double> timings_ms;
  std::string timestamp;  // informational only; excluded from reproducibility
};

std::string fnv1a_digest_file(const std::string& path);
std::string fnv1a_digest_bytes(const std::string& bytes);

nlohmann::json manifest_json(const RunManifest& manifest);

/// JSON serializers. Schema versions are pinned by golden-file tests.
nlohmann::json truth_json(const TruthRecord& truth, const RunManifest& manifest);
nlohmann::json pte_json(const PteResult& result, const RunManifest& manifest);
nlohmann::json bootstrap_json(const BootstrapResult& result, const ValidityDecision* decision,
                              const RunManifest& manifest);
nlohmann::json homogeneity_json(const DiffPath& diff, const TestResult& msd,
                                const TestResult* wald, const RunManifest& manifest);

void write_json(const nlohmann::json& j, const std::string& path);

/// Plot-ready tables (one row per t or per sweep entry).
CsvTable pte_table(const PteResult& result);
CsvTable bootstrap_table(const BootstrapResult& result);

}  // namespace surro
