#pragma once

#include <cstddef>
#include <vector>

namespace riskbn {

// Dense table over a set of discrete variables. Variables are kept in
// ascending index order and values are laid out row-major with the last
// variable varying fastest. `log_scale` holds the natural log of a factor
// that has been divided out of `values` to keep them in range.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;
  double log_scale = 0.0;

  std::size_t size() const { return values.size(); }
  bool contains(std::size_t var) const;
};

// Single-entry factor over no variables.
Factor unit_factor();

Factor multiply(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, std::size_t var);

// Divides values by their maximum when it drops below `floor`, folding the
// divisor into log_scale.
void rescale_if_small(Factor& f, double floor = 1e-150);

double total_mass(const Factor& f);

}  // namespace riskbn
