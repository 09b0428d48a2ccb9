#pragma once
#include <stdexcept>
#include <string>

// Error taxonomy shared by all modules.  Every failure mode that callers are
// expected to handle gets its own type; anything else is a plain logic_error.
namespace gblab {

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& m) : std::runtime_error(m) {}
};

struct NotSkewError : std::runtime_error {
  explicit NotSkewError(const std::string& m) : std::runtime_error(m) {}
};

struct GridError : std::runtime_error {
  explicit GridError(const std::string& m) : std::runtime_error(m) {}
};

struct DegreeError : std::runtime_error {
  explicit DegreeError(const std::string& m) : std::runtime_error(m) {}
};

struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& m) : std::runtime_error(m) {}
};

struct FrameError : std::runtime_error {
  explicit FrameError(const std::string& m) : std::runtime_error(m) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

struct NormError : std::runtime_error {
  explicit NormError(const std::string& m) : std::runtime_error(m) {}
};

struct LocusError : std::runtime_error {
  explicit LocusError(const std::string& m) : std::runtime_error(m) {}
};

struct KernelError : std::runtime_error {
  explicit KernelError(const std::string& m) : std::runtime_error(m) {}
};

struct CommutationError : std::runtime_error {
  explicit CommutationError(const std::string& m) : std::runtime_error(m) {}
};

struct FixtureError : std::runtime_error {
  explicit FixtureError(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace gblab
