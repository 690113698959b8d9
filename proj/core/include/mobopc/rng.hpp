// Copyright 2026 The mobopc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOBOPC_RNG_HPP
#define MOBOPC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace mobopc {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic counter-based random stream (splitmix64 core).
///
/// Copy semantics snapshot the stream: two copies of the same Rng produce
/// identical sequences. `split(k)` derives an independent substream without
/// advancing the parent, so Monte-Carlo rounds can be keyed by index and
/// reproduced (or parallelised) regardless of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed ^ 0xA0761D6478BD642FULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state_);
  }

  /// Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal draw (Box-Muller, one spare cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Integer draw in [0, bound) (bound > 0). Modulo bias is negligible for
  /// the bounds used here (all far below 2^32).
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

  /// Independent substream keyed by `stream`; the parent is not advanced.
  Rng split(std::uint64_t stream) const {
    Rng child(0);
    child.state_ = detail::mix64(state_ ^ (0x9E3779B97F4A7C15ULL + stream * 0xD6E8FEB86659FD93ULL));
    child.has_spare_ = false;
    return child;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mobopc

#endif  // MOBOPC_RNG_HPP
