#include "ctqw/walk.hpp"

#include <ostream>

namespace ctqw {

void write_time_series_csv(std::ostream& out, const TimeSeries& ts, const std::vector<std::string>& labels) {
  const auto n = ts.probs.cols();
  const auto old_precision = out.precision(12);
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << ',';
    if (static_cast<std::size_t>(n) == labels.size()) {
      out << labels[i];
    } else {
      out << "P_" << i + 1;
    }
  }
  out << '\n';
  for (Eigen::Index k = 0; k < ts.probs.rows(); ++k) {
    out << ts.times(k);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << ts.probs(k, i);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ctqw
