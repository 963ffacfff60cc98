#include "defect_cert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "defect_cert/errors.hpp"
#include "defect_cert/rank_cert.hpp"

namespace dcert {

std::string to_string(Decision d) {
    switch (d) {
        case Decision::zero: return "zero";
        case Decision::nonzero: return "nonzero";
        case Decision::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double eps_bound(double L, std::size_t K, double eps0, double eps) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("Lipschitz constant must be positive and finite");
    if (K == 0) throw DomainError("window count K must be positive");
    if (!(eps0 > 0.0)) throw DomainError("eps0 must be positive");
    if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
    if (eps > eps0) throw OutOfRegimeError("noise level eps exceeds eps0");
    if (eps == 0.0) return 0.0;  // the exponential factor may overflow for large L
    const double k = static_cast<double>(K);
    return 0.5 * std::exp(L * std::sqrt(k) * eps0) * L * L * k * eps * eps;
}

double inverse_operator_norm(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw ArgumentError("need a nonempty square matrix");
    // Window Jacobians are strongly graded by row; equilibrating rows before inverting
    // keeps the smallest singular value accurate far past 1/epsilon condition numbers.
    const Eigen::VectorXd row_norms = m.rowwise().norm();
    if (!(row_norms.minCoeff() > 0.0)) throw DegenerateInputError("Jacobian is singular at this parameter point");
    const Eigen::VectorXd scale = row_norms.cwiseInverse();
    const Eigen::MatrixXd balanced = scale.asDiagonal() * m;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(balanced);
    if (!lu.isInvertible()) throw DegenerateInputError("Jacobian is singular at this parameter point");
    const Eigen::MatrixXd inverse = lu.inverse() * scale.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(inverse);
    return svd.singularValues()(0);
}

double estimate_lipschitz(const RationalParams& params, std::size_t W) {
    return inverse_operator_norm(jacobian(params, W));
}

Decision decide_certificate(const LogVector& u, double threshold) {
    return certificate_value(u) <= threshold ? Decision::zero : Decision::nonzero;
}

Decision decide_log_config(const LogVector& log_config, double threshold) {
    return decide_certificate(project_mean_zero(log_config), threshold);
}

namespace {

/// log y_n for n < horizon from a window-process model, or nullopt with a flag.
std::optional<std::vector<double>> log_samples(const PronyModel& model, std::size_t W, std::size_t horizon,
                                               std::set<std::string>* flags) {
    std::vector<double> rates;
    std::vector<double> weights;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        const Complex mu = model.nodes[i];
        const Complex amp = model.amplitudes[i];
        if (mu.imag() != 0.0 || !(mu.real() > 0.0)) {
            if (flags) flags->insert("non_positive_node");
            return std::nullopt;
        }
        const double a = std::pow(mu.real(), 1.0 / static_cast<double>(W));
        rates.push_back(a);
        weights.push_back(amp.real() / geometric_block_gain(a, W));
    }
    std::vector<double> out(horizon);
    for (std::size_t n = 0; n < horizon; ++n) {
        double y = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) y += weights[i] * std::pow(rates[i], static_cast<double>(n));
        if (!(y > 0.0) || !std::isfinite(y)) {
            if (flags) flags->insert("non_positive_reconstruction");
            return std::nullopt;
        }
        out[n] = std::log(y);
    }
    return out;
}

std::optional<std::vector<double>> reconstruct_log(const WindowData& w, std::size_t d, std::size_t horizon,
                                                   const PronyThresholds& th) {
    const auto model = prony_reconstruct(w, d, th);
    if (model.degenerate()) return std::nullopt;
    return log_samples(model, w.block_length, horizon, nullptr);
}

/// 2-norm of the central-difference Jacobian of w -> log y. Only S_0..S_{2d-1}
/// enter the reconstruction, so the other columns vanish.
std::optional<double> reconstruction_lipschitz(const WindowData& w, std::size_t d, std::size_t horizon,
                                               const CertConfig& config) {
    double scale = 0.0;
    for (double s : w.sums) scale = std::max(scale, std::abs(s));
    const std::size_t used = 2 * d;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(horizon), static_cast<Eigen::Index>(used));
    for (std::size_t k = 0; k < used; ++k) {
        // Step relative to each window so small late windows are not swamped.
        const double h = config.fd_step * (w.sums[k] != 0.0 ? std::abs(w.sums[k]) : scale);
        WindowData plus = w;
        WindowData minus = w;
        plus.sums[k] += h;
        minus.sums[k] -= h;
        const auto yp = reconstruct_log(plus, d, horizon, config.prony);
        const auto ym = reconstruct_log(minus, d, horizon, config.prony);
        if (!yp || !ym) return std::nullopt;
        for (std::size_t n = 0; n < horizon; ++n) {
            jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = ((*yp)[n] - (*ym)[n]) / (2.0 * h);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    return svd.singularValues()(0);
}

/// Observed windows within eps of W*c for some c > 0.
bool neutral_consistent(const WindowData& w, double eps) {
    const auto [lo, hi] = std::minmax_element(w.sums.begin(), w.sums.end());
    if (!(*lo + *hi > 0.0)) return false;
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(*lo), std::abs(*hi));
    return 0.5 * (*hi - *lo) <= eps + slack;
}

}  // namespace

CertReport pipeline(const WindowData& w, std::size_t d, double noise_eps, const CertConfig& config) {
    if (!(noise_eps >= 0.0) || !std::isfinite(noise_eps)) throw DomainError("noise_eps must be nonnegative");
    if (d == 0) throw ArgumentError("degree must be at least 1");
    if (w.count() < 2 * d) {
        throw InsufficientDataError("need at least 2d = " + std::to_string(2 * d) + " windows");
    }
    CertReport report;
    report.reconstruction = prony_reconstruct(w, d, config.prony);
    const PronyModel& model = *report.reconstruction;
    for (PronyFlag f : model.flags) report.flags.insert(to_string(f));
    if (model.degenerate()) return report;

    const std::size_t horizon = w.block_length * w.count();
    const auto logy = log_samples(model, w.block_length, horizon, &report.flags);
    if (!logy) return report;
    report.log_config = *logy;

    const LogVector u = project_mean_zero(LogVector(*logy));
    report.certificate_value = certificate_value(u);
    report.defect_estimate = euclidean_norm(u.entries());

    if (noise_eps > config.eps0) {
        report.flags.insert("noise_exceeds_eps0");
        return report;
    }
    const auto L = reconstruction_lipschitz(w, d, horizon, config);
    const bool have_L = L && *L > 0.0 && std::isfinite(*L);
    if (have_L) {
        report.lipschitz_estimate = *L;
        report.eps_bound = eps_bound(*L, w.count(), config.eps0, noise_eps);
    } else {
        report.flags.insert("lipschitz_unavailable");
        // Exact data has a zero bound for every L.
        if (noise_eps > 0.0) return report;
    }
    report.threshold = report.eps_bound + config.roundoff_floor;

    if (report.certificate_value > report.threshold) {
        report.decision = Decision::nonzero;
    } else if (neutral_consistent(w, noise_eps)) {
        report.decision = Decision::zero;
    } else {
        report.flags.insert("neutral_inconsistent");
    }
    return report;
}

std::vector<std::size_t> eps_meaning_set(const std::vector<double>& costs, double eps) {
    if (costs.empty()) throw ArgumentError("meaning set needs a nonempty candidate list");
    if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
    const double best = *std::min_element(costs.begin(), costs.end());
    // One-ulp guard so values equal up to the last bit count as ties.
    const double cutoff = std::nextafter(best + eps, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i] <= cutoff) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> meaning_set(const std::vector<double>& costs) { return eps_meaning_set(costs, 0.0); }

CostedCandidates::CostedCandidates(double state_scale, std::vector<double> candidate_scales, RatioBand band)
    : state_scale_(state_scale), candidate_scales_(std::move(candidate_scales)), band_(band) {
    if (!(state_scale_ > 0.0) || !std::isfinite(state_scale_)) throw DomainError("state scale must be positive");
    if (candidate_scales_.empty()) throw ArgumentError("need at least one candidate");
    for (double s : candidate_scales_) {
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("candidate scales must be positive");
        if (!band_.contains(state_scale_ / s)) throw BandViolationError("candidate ratio outside the band");
    }
}

std::vector<double> CostedCandidates::ratios() const {
    std::vector<double> r(candidate_scales_.size());
    std::transform(candidate_scales_.begin(), candidate_scales_.end(), r.begin(),
                   [this](double s) { return state_scale_ / s; });
    return r;
}

std::vector<double> CostedCandidates::costs() const {
    auto r = ratios();
    std::transform(r.begin(), r.end(), r.begin(), [](double x) { return cost(x); });
    return r;
}

RankedChoice rank_candidates(const CostedCandidates& cands, const std::vector<double>& observed_ratios,
                             double delta) {
    if (observed_ratios.size() != cands.candidate_scales().size()) {
        throw ArgumentError("one observed ratio per candidate is required");
    }
    RankedChoice choice;
    choice.guarantee_eps = tolerance_epsilon(cands.band(), delta);
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < observed_ratios.size(); ++i) {
        const double r = observed_ratios[i];
        if (!cands.band().contains(r)) throw BandViolationError("observed ratio outside the band");
        const double c = cost(r);
        if (c < best_cost) {
            best_cost = c;
            choice.best = i;
        }
    }
    return choice;
}

}  // namespace dcert
