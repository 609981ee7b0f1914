#pragma once

// Positive real sequences a_1, a_2, ... used as exponents, coefficients and
// tolerance sequences.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracpow/precision.hpp"

namespace fracpow {

class Sequence {
 public:
  enum class Kind { Geometric, Poly, SuperExp, List, Constant, Custom };
  using Generator = std::function<Enclosure(long n, const PrecisionContext& ctx)>;

  /// r^n
  static Sequence geometric(DecimalReal r);
  /// n^d
  static Sequence poly(DecimalReal d);
  /// r^(n^2)
  static Sequence superexp(DecimalReal r);
  static Sequence list(std::vector<DecimalReal> values);
  static Sequence constant(DecimalReal c);
  /// `log_value` must return ln a_n as a double; it is used for index searches.
  static Sequence custom(std::string name, Generator gen, std::function<double(long)> log_value);

  /// Grammar: geometric(r) | poly(d) | superexp(r) | const(c) | [v1, v2, ...]
  /// | list(v1, v2, ...) | a bare number (constant).
  static Sequence parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// a_n for n >= 1. OutOfRange past the end of a finite list.
  Enclosure at(long n, const PrecisionContext& ctx) const;
  /// ln a_n, to double accuracy, without forming a_n.
  double log_at(long n) const;
  double approx(long n) const;
  /// Number of terms for finite lists, nullopt otherwise.
  std::optional<long> length() const;
  const std::vector<DecimalReal>& values() const noexcept { return values_; }
  const DecimalReal& parameter() const noexcept { return param_; }
  /// Text that parse() maps back to an equal sequence.
  std::string spec() const;

 private:
  Kind kind_ = Kind::Constant;
  DecimalReal param_;
  std::vector<DecimalReal> values_;
  std::string name_;
  std::shared_ptr<const Generator> gen_;
  std::shared_ptr<const std::function<double(long)>> log_gen_;
};

}  // namespace fracpow
