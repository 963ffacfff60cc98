#ifndef DEFECT_CERT_CERTIFY_HPP
#define DEFECT_CERT_CERTIFY_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "defect_cert/cost.hpp"
#include "defect_cert/loggeom.hpp"
#include "defect_cert/prony.hpp"
#include "defect_cert/signal.hpp"

namespace dcert {

enum class Decision { zero, nonzero, inconclusive };

std::string to_string(Decision d);

/// Quadratic noise bound exp(L sqrt(K) eps0) L^2 K eps^2 / 2 on the certificate value.
/// Throws OutOfRegimeError when eps > eps0.
double eps_bound(double L, std::size_t K, double eps0, double eps);

/// ||M^{-1}||_2. Throws DegenerateInputError for (numerically) singular M.
double inverse_operator_norm(const Eigen::MatrixXd& m);

/// ||DF^{-1}||_2 for the float-mode window-map Jacobian at `params`.
double estimate_lipschitz(const RationalParams& params, std::size_t W);

/// zero iff certificate_value(u) <= threshold. Never inconclusive.
Decision decide_certificate(const LogVector& u, double threshold);

/// decide_certificate applied to the mean-zero projection of a log-configuration.
Decision decide_log_config(const LogVector& log_config, double threshold);

struct CertConfig {
    double eps0 = 1e-2;
    /// Added to the noise threshold so roundoff in an exactly neutral
    /// reconstruction never reads as a defect.
    double roundoff_floor = 1e-20;
    /// Relative finite-difference step for the reconstruction Jacobian.
    double fd_step = 1e-6;
    PronyThresholds prony;
};

struct CertReport {
    Decision decision = Decision::inconclusive;
    double certificate_value = 0.0;
    double defect_estimate = 0.0;
    double threshold = 0.0;
    double eps_bound = 0.0;
    double lipschitz_estimate = 0.0;
    std::optional<PronyModel> reconstruction;
    std::set<std::string> flags;
    /// log of the reconstructed samples over the horizon n = W*K (empty when unavailable).
    std::vector<double> log_config;
};

/// Reconstruction A, projection P and coercive decision B over window data.
///
/// Evaluation: Prony on S_0..S_{2d-1}; per-sample rates a_i = mu_i^{1/W} and weights
/// A_i / (1 + a_i + ... + a_i^{W-1}); samples over n = W*K; u = P(log y);
/// threshold tau = eps_bound(L, K, eps0, noise_eps) + roundoff floor with L the
/// 2-norm of the Jacobian of w -> log y. nonzero when B(u) > tau; zero when
/// B(u) <= tau and the observed windows lie within noise_eps of a constant
/// signal; inconclusive otherwise. Throws InsufficientDataError when K < 2d.
CertReport pipeline(const WindowData& w, std::size_t d, double noise_eps, const CertConfig& config = {});

/// All indices attaining the minimum cost. Throws ArgumentError on an empty list.
std::vector<std::size_t> meaning_set(const std::vector<double>& costs);

/// Indices with cost <= min + eps.
std::vector<std::size_t> eps_meaning_set(const std::vector<double>& costs, double eps);

/// A state scale and candidate scales whose ratios state/candidate all lie in `band`.
class CostedCandidates {
public:
    CostedCandidates(double state_scale, std::vector<double> candidate_scales, RatioBand band);

    double state_scale() const noexcept { return state_scale_; }
    const std::vector<double>& candidate_scales() const noexcept { return candidate_scales_; }
    const RatioBand& band() const noexcept { return band_; }

    std::vector<double> ratios() const;
    /// c(o) = J(ratio(o)).
    std::vector<double> costs() const;

private:
    double state_scale_;
    std::vector<double> candidate_scales_;
    RatioBand band_;
};

struct RankedChoice {
    std::size_t best = 0;
    double guarantee_eps = 0.0;  ///< best's true cost is within 2 * guarantee_eps of the optimum
};

/// Picks the minimiser of J over observed ratios. Throws BandViolationError when an
/// observed ratio leaves the band.
RankedChoice rank_candidates(const CostedCandidates& cands, const std::vector<double>& observed_ratios,
                             double delta);

}  // namespace dcert

#endif  // DEFECT_CERT_CERTIFY_HPP
