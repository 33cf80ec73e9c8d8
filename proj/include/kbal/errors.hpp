#pragma once

#include <stdexcept>
#include <string>

namespace kbal {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A group element fell outside the tabulated domain of a map.
struct DomainEscapeError : Error {
  using Error::Error;
};

// A requested object would exceed the configured size cap.
struct ResourceCapError : Error {
  using Error::Error;
};

// Input matrix violates a construction invariant (e.g. *-symmetry).
struct ConstructionError : Error {
  using Error::Error;
};

// Spectrum outside the admissible window beyond the clamp tolerance.
struct SpectralRangeError : Error {
  using Error::Error;
};

// Spectral gap at 1/2 is closed; rank data is undefined.
struct GapClosedError : Error {
  using Error::Error;
};

// Malformed or inconsistent configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace kbal
