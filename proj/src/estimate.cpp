#include "cbi/estimate.hpp"

#include <cmath>

#include <json.hpp>

#include "cbi/errors.hpp"
#include "cbi/stats.hpp"

namespace cbi {

ClsEstimate cls_rho_betabar(const Skeleton& skel) {
  const auto& x = skel.observations;
  if (x.size() < 3) throw ConfigError("estimation needs n >= 2");
  const std::size_t n = x.size() - 1;

  KahanSum s1, s2, s3, s4;
  for (std::size_t k = 1; k <= n; ++k) {
    s1.add(x[k - 1]);
    s2.add(x[k - 1] * x[k - 1]);
    s3.add(x[k]);
    s4.add(x[k] * x[k - 1]);
  }
  const long double S1 = s1.value();
  const long double S2 = s2.value();
  const long double S3 = s3.value();
  const long double S4 = s4.value();
  const long double nn = static_cast<long double>(n);
  const long double D = nn * S2 - S1 * S1;

  ClsEstimate est;
  est.hn_holds = D > 0.0L;
  if (!est.hn_holds) return est;

  est.rho_hat = static_cast<double>((nn * S4 - S3 * S1) / D);
  est.betabar_hat = static_cast<double>((S3 * S2 - S4 * S1) / D);

  const double rho = *est.rho_hat;
  if (rho > 0.0) {
    est.b_tilde_hat = std::log(rho);
    const double e = rho - 1.0;
    if (std::fabs(e) < 1e-12) {
      // log(rho)/(rho-1) = 1 - e/2 + e^2/3 - ...; direct division cancels badly here.
      est.beta_tilde_hat = *est.betabar_hat * (1.0 - 0.5 * e + e * e / 3.0);
    } else {
      est.beta_tilde_hat = *est.betabar_hat * std::log(rho) / e;
    }
  }
  return est;
}

std::vector<double> residuals_with(const Skeleton& skel, double rho, double betabar) {
  const auto& x = skel.observations;
  if (x.size() < 2) throw ConfigError("residuals need n >= 1");
  std::vector<double> out;
  out.reserve(x.size() - 1);
  for (std::size_t k = 1; k < x.size(); ++k) {
    out.push_back(x[k] - rho * x[k - 1] - betabar);
  }
  return out;
}

std::vector<double> residuals(const Skeleton& skel, const DerivedParams& d) {
  return residuals_with(skel, d.rho, d.beta_bar);
}

Regime regime_from_string(const std::string& name) {
  if (name == "general-critical") return Regime::GeneralCritical;
  if (name == "pure-immigration") return Regime::PureImmigration;
  throw ConfigError("unknown regime: " + name);
}

std::array<double, 2> scaled_errors(const ClsEstimate& est, const DerivedParams& d,
                                    std::size_t n, Regime regime) {
  if (!est.b_tilde_hat || !est.beta_tilde_hat) {
    throw MissingEstimateError("transformed estimates absent");
  }
  const double nd = static_cast<double>(n);
  const double db = *est.b_tilde_hat - d.b_tilde;
  const double dbeta = *est.beta_tilde_hat - d.beta_tilde;
  if (regime == Regime::GeneralCritical) return {nd * db, dbeta};
  return {std::pow(nd, 1.5) * db, std::sqrt(nd) * dbeta};
}

Matrix2 gaussian_limit_covariance(const DerivedParams& d) {
  if (d.C != 0.0) throw RequiresPureImmigrationError("covariance formula needs C = 0");
  if (d.beta_tilde == 0.0) throw DegenerateImmigrationError("covariance formula needs beta_tilde > 0");
  const double bt = d.beta_tilde;
  const double scale = d.V0 * 12.0 / (bt * bt);
  return {{{scale, -scale * bt / 2.0}, {-scale * bt / 2.0, scale * bt * bt / 3.0}}};
}

std::string estimate_to_json(const ClsEstimate& est, int indent) {
  nlohmann::json j;
  const auto put = [&j](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put("rho_hat", est.rho_hat);
  put("betabar_hat", est.betabar_hat);
  j["hn_holds"] = est.hn_holds;
  put("b_tilde_hat", est.b_tilde_hat);
  put("beta_tilde_hat", est.beta_tilde_hat);
  return j.dump(indent);
}

}  // namespace cbi
