#pragma once

#include <stdexcept>
#include <string>

namespace mermin {

// Structurally malformed input: ragged matrices, empty factor lists,
// generators outside the ambient group, unparsable literals.
class malformed_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but outside an operation's mathematical domain:
// degenerate witnesses, non-orthonormal bases, inconsistent classical data.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An enumeration or allocation would exceed a configured bound.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default ceilings used across the library. Callers can raise them
// explicitly where an operation takes a bound parameter.
inline constexpr long long kDefaultEnumerationBound = 1'000'000;  // elements
inline constexpr long long kDefaultAmplitudeBound = 1LL << 24;    // state size
inline constexpr int kDefaultRelationCarrierBound = 64;           // FRel carrier

}  // namespace mermin
