#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace specwave {

/// One observed realization: strictly increasing times with t_0 = 0 and the
/// process values at those times.
struct SampledPath {
  std::vector<double> times;
  std::vector<double> values;
  std::string provenance;

  std::size_t size() const { return times.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  double mean_spacing() const {
    return times.size() > 1 ? horizon() / static_cast<double>(times.size() - 1)
                            : 0.0;
  }

  void validate() const {
    if (times.size() != values.size())
      throw std::invalid_argument("path: times/values length mismatch");
    if (times.size() < 1) throw std::invalid_argument("path: empty");
    if (times.front() != 0.0)
      throw std::invalid_argument("path: t_0 must be 0");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw std::invalid_argument("path: times must be strictly increasing");
  }

  /// True when spacing is uniform to within rel_tol of the mean gap.
  bool is_regular(double rel_tol = 1e-9) const;
};

}  // namespace specwave
