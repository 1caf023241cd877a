#include "qrdmft/experiments.hpp"

#include <cmath>
#include <limits>

#include "qrdmft/aca.hpp"

namespace qrdmft {

AcaScan aca_scan(const Eigen::MatrixXcd& rho, const InteractionSpec& w, const std::vector<std::size_t>& interacting,
                 const AcaScanOptions& options) {
  AcaScan scan;
  const OracleResult full = exact_rdmf(rho, w, options.full);
  scan.F_full = full.F;
  scan.method_full = full.method;
  const auto n_modes = static_cast<std::size_t>(rho.rows());
  for (std::size_t n = 0; n <= options.max_order; ++n) {
    if ((n + 1) * interacting.size() > n_modes) break;
    AcaScanRow row;
    row.order = n;
    const AcaResult a = aca_reduce(rho, interacting, n);
    row.kept = a.kept;
    row.F_aca = exact_rdmf(a.rho_aca, localize_interaction(w, interacting, a.kept), options.reduced).F;
    const Eigen::MatrixXcd naive = naive_truncate(rho, interacting, n);
    const auto kept = static_cast<std::size_t>(naive.rows());
    row.F_naive = exact_rdmf(naive, localize_interaction(w, interacting, kept), options.reduced).F;
    row.error_aca = std::abs(row.F_aca - scan.F_full);
    row.error_naive = std::abs(row.F_naive - scan.F_full);
    scan.rows.push_back(row);
  }
  return scan;
}

double log_error_slope(const AcaScan& scan) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& r : scan.rows) {
    if (r.error_aca <= 0.0) continue;
    const double x = static_cast<double>(r.order), y = std::log(r.error_aca);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double k = static_cast<double>(m);
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace qrdmft
