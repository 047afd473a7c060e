#pragma once

#include <stdexcept>
#include <string>

namespace modshift {

// Every failure raised by the library carries a stable machine-readable
// name (e.g. "LevelZero", "BracketFailure") next to the human detail text.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& detail);

  const std::string& name() const noexcept { return name_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string name_;
  std::string detail_;
};

}  // namespace modshift
