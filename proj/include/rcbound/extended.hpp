#pragma once

#include <string>

#include "rcbound/errors.hpp"

namespace rcb {

/// A nonnegative quantity that may legitimately be +infinity (a divergent
/// moment, an unbounded norm). Infinity is a state, not a float sentinel.
class Extended {
 public:
  static Extended finite(double v) { return Extended(v, false); }
  static Extended infinity() { return Extended(0.0, true); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw DomainError("value() called on an infinite quantity");
    return value_;
  }
  double value_or(double fallback) const { return infinite_ ? fallback : value_; }

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  std::string to_string() const;

 private:
  Extended(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace rcb
