#include "prioritizer/errors.hpp"

namespace prioritizer {

Error::Error(std::string_view category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

}  // namespace prioritizer
