#pragma once

#include "modshift/level.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>

namespace modshift {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kCacheEnvVar = "MODSHIFT_CACHE_DIR";

// $MODSHIFT_CACHE_DIR, else $XDG_CACHE_HOME/modshift, else ~/.cache/modshift.
std::filesystem::path default_cache_dir();

nlohmann::json cosets_to_json(const CosetTable& table);
// Exact rationals are written as [num, den] pairs.
nlohmann::json classes_to_json(std::int64_t level, const std::vector<HomologyVector>& classes);
std::vector<HomologyVector> classes_from_json(const nlohmann::json& j, std::int64_t level);

// Cached files are advisory: unreadable, stale or mismatched entries are
// ignored and recomputed. Write failures are ignored too.
std::unique_ptr<LevelData> load_level(std::int64_t level,
                                      const std::optional<std::filesystem::path>& cache_dir);

}  // namespace modshift
