#include "modshift/error.hpp"

#include <utility>

namespace modshift {

Error::Error(std::string name, const std::string& detail)
    : std::runtime_error(name + ": " + detail), name_(std::move(name)), detail_(detail) {}

}  // namespace modshift
