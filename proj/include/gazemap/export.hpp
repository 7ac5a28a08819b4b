/*
 * Copyright (C) 2026 The gazemap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Versioned, byte-stable serializations and the viewer bundle.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gazemap/ingest.hpp"
#include "gazemap/model.hpp"
#include "gazemap/overlap.hpp"

namespace gazemap {

inline constexpr std::string_view kFormatVersion = "1";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Sorted keys, two-space indent, floats fixed at 6 decimals, LF endings and a
/// trailing newline. Invalid UTF-8 in strings is replaced, never rejected.
std::string canonical_dump(const nlohmann::json& doc);

nlohmann::json gaze_map_to_json(const GazeMap& map);
/// Validates the document shape and every GazeMap invariant.
GazeMap gaze_map_from_json(const nlohmann::json& doc);

std::string export_gazemap_json(const GazeMap& map);
/// Throws UnsupportedVersion or SchemaError (subject = JSON pointer).
GazeMap import_gazemap_json(std::string_view text);

nlohmann::json module_map_to_json(const ModuleMap& modules);
nlohmann::json stat_result_to_json(const StatResult& r);
std::string stat_results_to_csv(const std::vector<StatResult>& results);
nlohmann::json overlap_report_to_json(const OverlapReport& report);

struct BundleProvenance {
  std::vector<std::string> session_ids;
  /// Group reading order of the sessions the map was built from.
  std::vector<std::string> reference_sequence;
  std::int64_t min_dwell_ms = 0;
};

struct ManifestEntry {
  std::string path;  // relative to the bundle directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

std::string sha256_hex(std::string_view data);

/// Writes bundle.json, files/<path> for every inventory file and
/// manifest.json into out_dir. Returns the manifest entries (sorted by path).
std::vector<ManifestEntry> export_viewer_bundle(const GazeMap& map, const FileInventory& inventory,
                                                const ModuleMap& modules,
                                                const std::filesystem::path& out_dir,
                                                const BundleProvenance& provenance = {});

nlohmann::json manifest_to_json(const std::vector<ManifestEntry>& entries);

}  // namespace gazemap
