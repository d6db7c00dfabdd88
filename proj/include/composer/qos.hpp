// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace composer {

/// QoS magnitudes are 64-bit floats with an explicit infinity. All benchmark
/// data are integral, so comparisons are exact (no epsilon).
using Qos = double;

inline constexpr Qos kQosInfinity = std::numeric_limits<double>::infinity();

enum class Criterion : int {
  ResponseTime = 0,  // milliseconds, lower is better
  Throughput = 1,    // invocations/second, higher is better
};

inline constexpr std::size_t kCriterionCount = 2;

const char* to_string(Criterion c);
std::optional<Criterion> criterion_from_string(std::string_view name);

/// The (Q, aggregate, subtract, order) structure for one criterion.
///
/// identity is neutral for aggregate and is the best value overall; zero
/// absorbs aggregate and is the worst value overall (an unmatched input).
/// aggregate is associative and monotone for the order, and subtract
/// undoes aggregate where an inverse exists (response time); for
/// throughput subtract is min, which the bound propagation relies on
/// being a safe under-approximation.
struct QosAlgebra {
  Criterion criterion = Criterion::ResponseTime;
  Qos identity = 0;
  Qos zero = kQosInfinity;

  Qos aggregate(Qos a, Qos b) const {
    if (criterion == Criterion::ResponseTime) return a + b;
    return a < b ? a : b;
  }

  Qos subtract(Qos a, Qos b) const {
    if (criterion == Criterion::ResponseTime) {
      if (a == kQosInfinity) return kQosInfinity;
      return a - b;
    }
    return a < b ? a : b;
  }

  // a is equal or better than b
  bool better_or_equal(Qos a, Qos b) const {
    if (criterion == Criterion::ResponseTime) return a <= b;
    return a >= b;
  }

  // a is strictly better than b
  bool strictly_better(Qos a, Qos b) const {
    if (criterion == Criterion::ResponseTime) return a < b;
    return a > b;
  }

  Qos best(Qos a, Qos b) const { return better_or_equal(a, b) ? a : b; }
  Qos worst(Qos a, Qos b) const { return better_or_equal(a, b) ? b : a; }

  static QosAlgebra response_time() {
    return QosAlgebra{Criterion::ResponseTime, /*identity=*/0,
                      /*zero=*/kQosInfinity};
  }

  static QosAlgebra throughput() {
    return QosAlgebra{Criterion::Throughput, /*identity=*/kQosInfinity,
                      /*zero=*/0};
  }

  static QosAlgebra for_criterion(Criterion c) {
    return c == Criterion::ResponseTime ? response_time() : throughput();
  }
};

/// Order-minimum of a non-empty list. Throws Error on an empty list.
Qos best_of(std::span<const Qos> values, const QosAlgebra& algebra);

/// Order-maximum of a non-empty list. Throws Error on an empty list.
Qos worst_of(std::span<const Qos> values, const QosAlgebra& algebra);

}  // namespace composer
