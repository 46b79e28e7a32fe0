#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bconf/beta_conformal.hpp"
#include "bconf/finsler.hpp"
#include "bconf/metric.hpp"

namespace bconf::testing_support {

/// A sample admitted by the change guards, with the base bundle, the working-order
/// coefficients and the oracle bundle of the composed metric.
struct Admitted {
  FundamentalBundle base, oracle;
  CoefficientSet c;
};

inline std::vector<Admitted> admitted(const MetricSpec& base, const ChangeSpec& change, int count,
                                      std::uint64_t seed, bool with_oracle = true) {
  const auto barred = MetricSpec::composed(base, change);
  SampleStream stream(base.dim(), seed);
  std::vector<Admitted> out;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      try {
        const auto s = stream.draw(i, attempt);
        auto b = fundamentals(base, s);
        auto c = coefficients(change, b, 1, 2);
        FundamentalBundle o = with_oracle ? fundamentals(barred, s) : FundamentalBundle{};
        out.push_back({std::move(b), std::move(o), std::move(c)});
        break;
      } catch (const Error&) {
      }
    }
  }
  return out;
}

}  // namespace bconf::testing_support
