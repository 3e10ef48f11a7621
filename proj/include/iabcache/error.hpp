#pragma once

#include <stdexcept>
#include <string>

namespace iabcache {

/// Constraints of the joint caching / bandwidth problem, named by what they bound.
enum class Constraint {
  CacheBinary,        // x_jm in {0, 1}
  CacheCapacity,      // at most N files per SBS
  BandwidthFraction,  // 0 <= eta <= 1
  AccessRate,         // per-UE minimum access rate (also: zero access rate with load)
  BackhaulRate,       // per-SBS minimum backhaul rate (also: zero backhaul rate with load)
};

inline const char* to_string(Constraint c) noexcept {
  switch (c) {
    case Constraint::CacheBinary: return "cache-binary";
    case Constraint::CacheCapacity: return "cache-capacity";
    case Constraint::BandwidthFraction: return "bandwidth-fraction";
    case Constraint::AccessRate: return "access-rate";
    case Constraint::BackhaulRate: return "backhaul-rate";
  }
  return "unknown";
}

/// Raised when a candidate (eta, x) or a whole instance cannot satisfy a constraint.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(Constraint binding, const std::string& detail)
      : std::runtime_error(std::string(to_string(binding)) + " constraint: " + detail),
        binding_(binding) {}

  Constraint binding() const noexcept { return binding_; }

 private:
  Constraint binding_;
};

/// Malformed or out-of-range configuration. The message starts with the key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& detail)
      : std::runtime_error(key + ": " + detail), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace iabcache
