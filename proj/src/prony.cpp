#include "defect_cert/prony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace dcert {

std::string to_string(PronyFlag flag) {
    switch (flag) {
        case PronyFlag::hankel_singular: return "hankel_singular";
        case PronyFlag::repeated_nodes: return "repeated_nodes";
        case PronyFlag::zero_node: return "zero_node";
        case PronyFlag::zero_amplitude: return "zero_amplitude";
        case PronyFlag::complex_nodes: return "complex_nodes";
    }
    return "unknown";
}

namespace {

template <class Matrix>
double condition_number(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0.0;
    const double smallest = s(s.size() - 1);
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smallest;
}

bool node_order(const Complex& a, const Complex& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

Complex eval_monic(const std::vector<double>& coeffs, Complex t, Complex* derivative) {
    Complex p = 1.0;
    Complex dp = 0.0;
    for (double a : coeffs) {
        dp = dp * t + p;
        p = p * t + a;
    }
    if (derivative != nullptr) *derivative = dp;
    return p;
}

double max_modulus(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

double min_separation(const std::vector<Complex>& nodes) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) sep = std::min(sep, std::abs(nodes[i] - nodes[j]));
    }
    return sep;
}

bool repeated(const std::vector<Complex>& nodes, const PronyThresholds& th) {
    return min_separation(nodes) < th.min_node_separation * max_modulus(nodes);
}

Eigen::MatrixXcd vandermonde(const std::vector<Complex>& nodes) {
    const auto d = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd v(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        Complex power = 1.0;
        for (Eigen::Index k = 0; k < d; ++k) {
            v(k, i) = power;
            power *= nodes[static_cast<std::size_t>(i)];
        }
    }
    return v;
}

}  // namespace

RecurrenceSolution solve_recurrence_coeffs(const WindowData& S, std::size_t d, const PronyThresholds& th) {
    if (d == 0) throw ArgumentError("degree must be at least 1");
    if (S.count() < 2 * d) {
        throw InsufficientDataError("need at least 2d = " + std::to_string(2 * d) + " window sums, got " +
                                    std::to_string(S.count()));
    }
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd h(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) h(i, j) = S.sums[static_cast<std::size_t>(i + j)];
        rhs(i) = -S.sums[static_cast<std::size_t>(i + n)];
    }

    RecurrenceSolution out;
    out.hankel_condition = condition_number(h);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(h);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    const double max_pivot = diag.maxCoeff();
    const double min_pivot = diag.minCoeff();
    if (max_pivot == 0.0 || !(min_pivot / max_pivot >= th.min_pivot_ratio)) {
        out.singular = true;
        out.coeffs.assign(d, 0.0);
        return out;
    }
    // Unknown x_j multiplies S_{k+j}, i.e. x_j = a_{d-j}.
    const Eigen::VectorXd x = lu.solve(rhs);
    out.coeffs.resize(d);
    for (std::size_t m = 1; m <= d; ++m) out.coeffs[m - 1] = x(static_cast<Eigen::Index>(d - m));
    return out;
}

std::vector<Complex> char_roots(const std::vector<double>& coeffs, const PronyThresholds& th) {
    const std::size_t d = coeffs.size();
    if (d == 0) throw ArgumentError("characteristic polynomial must have degree at least 1");
    for (double a : coeffs) {
        if (!std::isfinite(a)) throw DomainError("characteristic coefficients must be finite");
    }
    std::vector<Complex> roots;
    if (d == 1) {
        roots.emplace_back(-coeffs[0], 0.0);
    } else {
        const auto n = static_cast<Eigen::Index>(d);
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j) companion(0, j) = -coeffs[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
        if (es.info() != Eigen::Success) throw DegenerateInputError("companion eigen-solve did not converge");
        const auto ev = es.eigenvalues();
        for (Eigen::Index i = 0; i < n; ++i) roots.push_back(ev(i));
    }
    for (auto& r : roots) {
        for (int step = 0; step < th.newton_polish_steps; ++step) {
            Complex dp;
            const Complex p = eval_monic(coeffs, r, &dp);
            if (dp == Complex(0.0)) break;
            const Complex next = r - p / dp;
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
            r = next;
        }
        // Real polynomial: snap numerically real roots onto the axis.
        if (std::abs(r.imag()) <= 1e-14 * std::max(1.0, std::abs(r))) r.imag(0.0);
    }
    std::sort(roots.begin(), roots.end(), node_order);
    return roots;
}

std::vector<Complex> solve_amplitudes(const WindowData& S, const std::vector<Complex>& nodes,
                                      const PronyThresholds& th) {
    const std::size_t d = nodes.size();
    if (d == 0) throw ArgumentError("need at least one node");
    if (S.count() < d) throw InsufficientDataError("need at least d window sums");
    if (repeated(nodes, th)) throw DegenerateInputError("repeated nodes make the Vandermonde system singular");
    const Eigen::MatrixXcd v = vandermonde(nodes);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) rhs(static_cast<Eigen::Index>(k)) = S.sums[k];
    const Eigen::VectorXcd a = v.partialPivLu().solve(rhs);
    return {a.data(), a.data() + a.size()};
}

bool PronyModel::degenerate() const {
    return has(PronyFlag::hankel_singular) || has(PronyFlag::repeated_nodes) || has(PronyFlag::zero_node) ||
           has(PronyFlag::zero_amplitude);
}

Complex PronyModel::window_sum(std::size_t k) const {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < nodes.size() && i < amplitudes.size(); ++i) {
        acc += amplitudes[i] * std::pow(nodes[i], static_cast<double>(k));
    }
    return acc;
}

std::vector<double> PronyModel::synthesize(std::size_t K) const {
    std::vector<double> out(K);
    for (std::size_t k = 0; k < K; ++k) out[k] = window_sum(k).real();
    return out;
}

PronyModel prony_reconstruct(const WindowData& S, std::size_t d, const PronyThresholds& th) {
    PronyModel model;
    const auto rec = solve_recurrence_coeffs(S, d, th);
    model.hankel_condition = rec.hankel_condition;
    if (rec.singular) {
        model.flags.insert(PronyFlag::hankel_singular);
        return model;
    }
    model.char_coeffs = rec.coeffs;
    model.nodes = char_roots(rec.coeffs, th);

    const double max_mu = max_modulus(model.nodes);
    double min_mu = std::numeric_limits<double>::infinity();
    for (const auto& mu : model.nodes) {
        min_mu = std::min(min_mu, std::abs(mu));
        if (std::abs(mu.imag()) > th.max_imag_ratio * std::abs(mu)) model.flags.insert(PronyFlag::complex_nodes);
    }
    if (max_mu == 0.0 || min_mu < th.min_node_modulus * max_mu) model.flags.insert(PronyFlag::zero_node);
    if (repeated(model.nodes, th)) {
        model.flags.insert(PronyFlag::repeated_nodes);
        return model;
    }

    model.vandermonde_condition = condition_number(vandermonde(model.nodes));
    model.amplitudes = solve_amplitudes(S, model.nodes, th);
    const double max_a = max_modulus(model.amplitudes);
    double min_a = std::numeric_limits<double>::infinity();
    for (const auto& a : model.amplitudes) min_a = std::min(min_a, std::abs(a));
    if (max_a == 0.0 || min_a < th.min_amplitude * max_a) model.flags.insert(PronyFlag::zero_amplitude);
    return model;
}

}  // namespace dcert
