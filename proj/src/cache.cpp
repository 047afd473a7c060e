#include "modshift/cache.hpp"

#include "modshift/error.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <system_error>

namespace modshift {

namespace fs = std::filesystem;

fs::path default_cache_dir() {
  if (const char* dir = std::getenv(kCacheEnvVar); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "modshift";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "modshift";
  return fs::temp_directory_path() / "modshift";
}

nlohmann::json cosets_to_json(const CosetTable& table) {
  const SubgroupInvariants inv = subgroup_invariants(table.level());
  nlohmann::json reps = nlohmann::json::array();
  for (const P1Point& p : table.reps()) reps.push_back({p.c, p.d});
  return {{"N", table.level()},
          {"version", kArtifactVersion},
          {"reps", reps},
          {"invariants",
           {{"kappa", inv.kappa}, {"n2", inv.n2}, {"n3", inv.n3}, {"nInf", inv.n_inf}, {"genus", inv.genus}}}};
}

nlohmann::json classes_to_json(std::int64_t level, const std::vector<HomologyVector>& classes) {
  nlohmann::json rows = nlohmann::json::array();
  for (const HomologyVector& v : classes) {
    nlohmann::json row = nlohmann::json::array();
    for (const Rational& x : v) row.push_back({x.get_num().get_str(), x.get_den().get_str()});
    rows.push_back(std::move(row));
  }
  return {{"N", level}, {"version", kArtifactVersion}, {"classes", rows}};
}

std::vector<HomologyVector> classes_from_json(const nlohmann::json& j, std::int64_t level) {
  if (j.at("N").get<std::int64_t>() != level || j.at("version").get<std::string>() != kArtifactVersion) {
    throw Error("StaleCache", "cache entry is for another level or version");
  }
  std::vector<HomologyVector> classes;
  for (const auto& row : j.at("classes")) {
    HomologyVector v;
    for (const auto& pair : row) {
      Rational x(Integer(pair.at(0).get<std::string>()), Integer(pair.at(1).get<std::string>()));
      x.canonicalize();
      v.push_back(x);
    }
    classes.push_back(std::move(v));
  }
  return classes;
}

namespace {

fs::path classes_file(const fs::path& dir, std::int64_t level) {
  return dir / ("classes-N" + std::to_string(level) + "-v" + kArtifactVersion + ".json");
}

fs::path cosets_file(const fs::path& dir, std::int64_t level) {
  return dir / ("cosets-N" + std::to_string(level) + "-v" + kArtifactVersion + ".json");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) return;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
    if (!out) return;
  }
  fs::rename(tmp, path, ec);
}

}  // namespace

std::unique_ptr<LevelData> load_level(std::int64_t level, const std::optional<fs::path>& cache_dir) {
  if (level < 1) throw Error("LevelZero", "level must be a positive integer");
  if (!cache_dir) return std::make_unique<LevelData>(level);

  const fs::path path = classes_file(*cache_dir, level);
  if (std::ifstream in(path); in) {
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      return std::make_unique<LevelData>(level, classes_from_json(j, level));
    } catch (const std::exception&) {
      // fall through and recompute
    }
  }
  auto data = std::make_unique<LevelData>(level);
  write_json(path, classes_to_json(level, data->classes()));
  write_json(cosets_file(*cache_dir, level), cosets_to_json(data->table()));
  return data;
}

}  // namespace modshift
