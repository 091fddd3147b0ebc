#pragma once

namespace streamnav {

/// Tracking-error bound and vehicle enclosing radius, both in meters.
struct SafetyMargins {
  double delta = 0.40;
  double epsilon = 0.28;

  constexpr double sum() const { return delta + epsilon; }
  /// Minimum pairwise separation two vehicles must keep: 2(delta + epsilon).
  constexpr double separation_floor() const { return 2.0 * sum(); }

  friend bool operator==(const SafetyMargins&, const SafetyMargins&) = default;
};

/// Validates delta > 0 and epsilon > 0; throws InvalidArgument otherwise.
void validate(const SafetyMargins& margins);

}  // namespace streamnav
