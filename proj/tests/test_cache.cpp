#include "modshift/cache.hpp"
#include "modshift/error.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>

using namespace modshift;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("modshift-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cache") {
  TEST_CASE("classes round trip through JSON") {
    const LevelData level(37);
    const nlohmann::json j = classes_to_json(37, level.classes());
    CHECK(classes_from_json(j, 37) == level.classes());
    CHECK_THROWS_WITH_AS(classes_from_json(j, 36), doctest::Contains("StaleCache"), Error);
    nlohmann::json stale = j;
    stale["version"] = "0.0.1";
    CHECK_THROWS_WITH_AS(classes_from_json(stale, 37), doctest::Contains("StaleCache"), Error);
  }

  TEST_CASE("coset JSON lists every representative") {
    const CosetTable t(6);
    const nlohmann::json j = cosets_to_json(t);
    CHECK(j.dump().find("12") != std::string::npos);
  }

  TEST_CASE("load_level writes and then reuses the cache") {
    const auto dir = fresh_dir("reuse");
    const auto first = load_level(11, dir);
    bool wrote = false;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().filename().string().rfind("classes-N11-", 0) == 0) wrote = true;
    }
    CHECK(wrote);
    const auto second = load_level(11, dir);
    CHECK(second->classes() == first->classes());
    CHECK(second->pair_with_J({1, 2}) == first->pair_with_J({1, 2}));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("corrupt and stale entries are ignored") {
    const auto dir = fresh_dir("stale");
    const auto path = dir / (std::string("classes-N11-v") + kArtifactVersion + ".json");
    {
      std::ofstream out(path);
      out << "{not json";
    }
    const auto a = load_level(11, dir);
    CHECK(a->classes() == LevelData(11).classes());
    {
      nlohmann::json j = classes_to_json(11, a->classes());
      j["level"] = 12;
      std::ofstream out(path);
      out << j.dump();
    }
    CHECK(load_level(11, dir)->classes() == a->classes());
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("environment selects the cache directory") {
    setenv(kCacheEnvVar, "/tmp/modshift-env-dir", 1);
    CHECK(default_cache_dir() == std::filesystem::path("/tmp/modshift-env-dir"));
    unsetenv(kCacheEnvVar);
    CHECK_FALSE(default_cache_dir().empty());
  }
}
