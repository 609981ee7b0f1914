#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fracpow/precision.hpp"

namespace fracpow {

/// splitmix64 finaliser; the seeded target is counter-based on top of it, so
/// any y_n can be produced without generating y_1..y_{n-1}.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// The targets y_n in [0, 1].
class TargetSequence {
 public:
  enum class Kind { Constant, List, Seeded };

  TargetSequence() = default;  // y ≡ 0

  static TargetSequence constant(DecimalReal c);
  /// Entries beyond the list raise OutOfRange.
  static TargetSequence list(std::vector<DecimalReal> values);
  static TargetSequence seeded(std::uint64_t seed);
  /// `const:<c>`, `list:<v1>,<v2>,...`, `seed:<u64>`.
  static TargetSequence parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  Enclosure at(long n, mpfr_prec_t prec) const;
  double approx(long n) const;
  std::string spec() const;

 private:
  Kind kind_ = Kind::Constant;
  DecimalReal value_;
  std::vector<DecimalReal> values_;
  std::uint64_t seed_ = 0;
};

}  // namespace fracpow
