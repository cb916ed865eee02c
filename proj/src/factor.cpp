#include "riskbn/factor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace riskbn {

bool Factor::contains(std::size_t var) const {
  return std::binary_search(vars.begin(), vars.end(), var);
}

Factor unit_factor() {
  Factor f;
  f.values = {1.0};
  return f;
}

namespace {

// Stride of each variable of `scope` inside `f`; 0 when f does not mention it.
std::vector<std::size_t> strides_within(const Factor& f, const std::vector<std::size_t>& scope) {
  std::vector<std::size_t> own(f.vars.size());
  std::size_t stride = 1;
  for (std::size_t k = f.vars.size(); k-- > 0;) {
    own[k] = stride;
    stride *= f.cards[k];
  }
  std::vector<std::size_t> out(scope.size(), 0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < scope.size() && j < f.vars.size(); ++i) {
    if (scope[i] == f.vars[j]) out[i] = own[j++];
  }
  return out;
}

}  // namespace

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  out.log_scale = a.log_scale + b.log_scale;
  // Sorted union of scopes.
  std::size_t i = 0, j = 0;
  while (i < a.vars.size() || j < b.vars.size()) {
    if (j == b.vars.size() || (i < a.vars.size() && a.vars[i] < b.vars[j])) {
      out.vars.push_back(a.vars[i]);
      out.cards.push_back(a.cards[i++]);
    } else if (i == a.vars.size() || b.vars[j] < a.vars[i]) {
      out.vars.push_back(b.vars[j]);
      out.cards.push_back(b.cards[j++]);
    } else {
      assert(a.cards[i] == b.cards[j]);
      out.vars.push_back(a.vars[i]);
      out.cards.push_back(a.cards[i]);
      ++i;
      ++j;
    }
  }

  std::size_t total = 1;
  for (auto c : out.cards) total *= c;
  out.values.resize(total);

  const auto sa = strides_within(a, out.vars);
  const auto sb = strides_within(b, out.vars);
  const std::size_t n = out.vars.size();
  std::vector<std::size_t> assignment(n, 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    out.values[idx] = a.values[ia] * b.values[ib];
    for (std::size_t d = n; d-- > 0;) {
      ++assignment[d];
      ia += sa[d];
      ib += sb[d];
      if (assignment[d] < out.cards[d]) break;
      ia -= sa[d] * out.cards[d];
      ib -= sb[d] * out.cards[d];
      assignment[d] = 0;
    }
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
  assert(it != f.vars.end() && *it == var);
  const std::size_t pos = static_cast<std::size_t>(it - f.vars.begin());

  Factor out;
  out.log_scale = f.log_scale;
  std::size_t inner = 1;
  for (std::size_t k = pos + 1; k < f.vars.size(); ++k) inner *= f.cards[k];
  const std::size_t card = f.cards[pos];
  const std::size_t outer = f.values.size() / (inner * card);
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (k == pos) continue;
    out.vars.push_back(f.vars[k]);
    out.cards.push_back(f.cards[k]);
  }
  out.values.assign(outer * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < card; ++s) {
      const double* src = &f.values[(o * card + s) * inner];
      double* dst = &out.values[o * inner];
      for (std::size_t r = 0; r < inner; ++r) dst[r] += src[r];
    }
  }
  return out;
}

void rescale_if_small(Factor& f, double floor) {
  double peak = 0.0;
  for (double v : f.values) peak = std::max(peak, v);
  if (peak > 0.0 && peak < floor) {
    for (double& v : f.values) v /= peak;
    f.log_scale += std::log(peak);
  }
}

double total_mass(const Factor& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum;
}

}  // namespace riskbn
