#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace concord {

/// Thrown when a caller breaks a documented precondition (dimension
/// mismatch, parameter out of range, index out of bounds).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown on malformed external input (CSV files, copula spec strings).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hard ceiling on copula dimension; subset expansions are 2^n and the
/// reflection masks are 32-bit, so this is not configurable upward.
inline constexpr int kDimensionLimit = 20;

/// Active dimension cap (default 12). Constructors reject larger copulas.
int max_dimension();

/// Adjust the cap; clamped to [2, kDimensionLimit].
void set_max_dimension(int n);

void require(bool condition, const std::string& message);

/// SplitMix64 step, used to derive independent RNG substreams.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic per-task seed: mixes a stream tag into a base seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag);

/// Overflow-checked binomial coefficient.
std::uint64_t binomial(int n, int k);

} // namespace concord
