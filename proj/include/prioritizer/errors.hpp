#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prioritizer {

// Every error raised by the library carries a stable category name; the CLI
// prints it as the first field of its one-line error report.
class Error : public std::runtime_error {
 public:
  Error(std::string_view category, const std::string& message);

  [[nodiscard]] const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define PRIORITIZER_DEFINE_ERROR(Name, tag)                         \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(tag, message) {} \
  };

PRIORITIZER_DEFINE_ERROR(DimensionError, "dimension")
PRIORITIZER_DEFINE_ERROR(ValueError, "value")
PRIORITIZER_DEFINE_ERROR(NumericError, "non_finite")
PRIORITIZER_DEFINE_ERROR(IoError, "io")
PRIORITIZER_DEFINE_ERROR(FormatError, "format")
PRIORITIZER_DEFINE_ERROR(TruncatedError, "truncated")
PRIORITIZER_DEFINE_ERROR(SchemaError, "schema")
PRIORITIZER_DEFINE_ERROR(UnresolvedNameError, "unresolved_name")
PRIORITIZER_DEFINE_ERROR(ShapeError, "shape")
PRIORITIZER_DEFINE_ERROR(ModelError, "model")
PRIORITIZER_DEFINE_ERROR(UsageError, "usage")

#undef PRIORITIZER_DEFINE_ERROR

}  // namespace prioritizer
