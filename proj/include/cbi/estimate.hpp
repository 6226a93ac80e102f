#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbi/params.hpp"
#include "cbi/skeleton.hpp"

namespace cbi {

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct ClsEstimate {
  std::optional<double> rho_hat;
  std::optional<double> betabar_hat;
  bool hn_holds = false;
  // Present iff hn_holds and rho_hat > 0.
  std::optional<double> b_tilde_hat;
  std::optional<double> beta_tilde_hat;
};

// Closed-form conditional least squares for the regression
// X_k = rho*X_{k-1} + betabar + M_k, with existence detection: the normal
// equations are solvable iff not all of X_0..X_{n-1} vanish.
ClsEstimate cls_rho_betabar(const Skeleton& skel);

// Residuals M_k = X_k - rho*X_{k-1} - betabar for k = 1..n.
std::vector<double> residuals_with(const Skeleton& skel, double rho, double betabar);

// Residuals under the true parameters (oracle use).
std::vector<double> residuals(const Skeleton& skel, const DerivedParams& d);

enum class Regime { GeneralCritical, PureImmigration };

Regime regime_from_string(const std::string& name);

// GeneralCritical: (n*(bt_hat - bt), betat_hat - betat).
// PureImmigration: (n^{3/2}*(bt_hat - bt), n^{1/2}*(betat_hat - betat)).
std::array<double, 2> scaled_errors(const ClsEstimate& est, const DerivedParams& d,
                                    std::size_t n, Regime regime);

// Asymptotic covariance of the pure-immigration scaled errors:
// V0 * (12/betat^2) * [[1, -betat/2], [-betat/2, betat^2/3]].
Matrix2 gaussian_limit_covariance(const DerivedParams& d);

std::string estimate_to_json(const ClsEstimate& est, int indent = -1);

}  // namespace cbi
