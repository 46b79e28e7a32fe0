#pragma once

#include <stdexcept>
#include <vector>

namespace bconf {

/// A point (x, y) of the tangent bundle in a single chart.
struct ChartSample {
  std::vector<double> x;
  std::vector<double> y;

  ChartSample() = default;
  ChartSample(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size()) throw std::invalid_argument("ChartSample: x and y differ in length");
  }

  int dim() const noexcept { return static_cast<int>(x.size()); }
};

}  // namespace bconf
