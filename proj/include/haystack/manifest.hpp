#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "haystack/config.hpp"
#include "haystack/version.hpp"

namespace haystack {

// Where a CSV column came from: measured by simulation, evaluated from a
// closed form, or numerically integrated.
enum class Provenance { kEmpirical, kClosedForm, kQuadrature };

inline const char* provenance_label(Provenance provenance) {
  switch (provenance) {
    case Provenance::kEmpirical: return "empirical";
    case Provenance::kClosedForm: return "closed-form";
    case Provenance::kQuadrature: return "quadrature";
  }
  throw std::invalid_argument("unknown provenance");
}

struct ColumnProvenance {
  std::string column;
  Provenance provenance;
};

// Sidecar record emitted next to every output file: enough to rerun the
// producing command and diff the bytes.
struct RunManifest {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string library_version{kVersion};
  std::vector<ColumnProvenance> columns;
  std::map<std::string, double> parameters;  // solved or derived scalars
  std::vector<std::string> notes;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

// Hash of the effective settings, independent of comments, blank lines, and
// key order in the source file.
inline std::uint64_t config_fingerprint(const Config& config) {
  std::string canonical;
  for (const auto& [key, value] : config.entries()) {
    canonical += key;
    canonical += '=';
    canonical += value;
    canonical += '\n';
  }
  return fnv1a64(canonical);
}

inline RunManifest make_manifest(const Config& config, std::uint64_t seed,
                                 std::vector<ColumnProvenance> columns) {
  RunManifest manifest;
  manifest.config_hash = config_fingerprint(config);
  manifest.seed = seed;
  manifest.columns = std::move(columns);
  return manifest;
}

inline std::filesystem::path manifest_path_for(
    const std::filesystem::path& output) {
  std::filesystem::path sidecar = output;
  sidecar.replace_extension(".manifest.json");
  return sidecar;
}

inline void write_manifest(const RunManifest& manifest,
                           const std::filesystem::path& output) {
  nlohmann::json doc;
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "fnv1a64:%016llx",
                static_cast<unsigned long long>(manifest.config_hash));
  doc["config_hash"] = hash_hex;
  doc["seed"] = manifest.seed;
  doc["library_version"] = manifest.library_version;
  nlohmann::json columns = nlohmann::json::array();
  for (const ColumnProvenance& column : manifest.columns) {
    columns.push_back({{"name", column.column},
                       {"provenance", provenance_label(column.provenance)}});
  }
  doc["columns"] = std::move(columns);
  if (!manifest.parameters.empty()) doc["parameters"] = manifest.parameters;
  if (!manifest.notes.empty()) doc["notes"] = manifest.notes;

  const std::filesystem::path path = manifest_path_for(output);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("manifest: cannot open " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("manifest: write failed for " + path.string());
  }
}

}  // namespace haystack
