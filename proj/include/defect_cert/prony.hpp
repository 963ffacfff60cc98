#ifndef DEFECT_CERT_PRONY_HPP
#define DEFECT_CERT_PRONY_HPP

#include <complex>
#include <set>
#include <string>
#include <vector>

#include "defect_cert/signal.hpp"

namespace dcert {

enum class PronyFlag {
    hankel_singular,
    repeated_nodes,
    zero_node,
    zero_amplitude,
    complex_nodes,  ///< diagnostic only; does not make the model degenerate
};

std::string to_string(PronyFlag flag);

/// Numeric thresholds for the nondegeneracy checks. None of them are intrinsic
/// to the method; they are tuned for double precision at d <= 10.
struct PronyThresholds {
    double min_pivot_ratio = 1e-12;       ///< Hankel LU: smallest/largest pivot
    double min_node_separation = 1e-8;    ///< relative to max |mu|
    double min_node_modulus = 1e-12;      ///< relative to max |mu|
    double min_amplitude = 1e-10;         ///< relative to max |A|
    double max_imag_ratio = 1e-8;         ///< |Im mu| / |mu| above this flags complex_nodes
    int newton_polish_steps = 2;
};

using Complex = std::complex<double>;

struct RecurrenceSolution {
    std::vector<double> coeffs;  ///< monic a_1..a_d of t^d + a_1 t^{d-1} + ... + a_d
    double hankel_condition = 0.0;
    bool singular = false;
};

/// Solves sum_{m=1}^d a_m S_{k+d-m} = -S_{k+d}, k = 0..d-1, with H = (S_{i+j}).
/// Throws InsufficientDataError when K < 2d.
RecurrenceSolution solve_recurrence_coeffs(const WindowData& S, std::size_t d,
                                           const PronyThresholds& th = {});

/// Roots of the monic polynomial t^d + a_1 t^{d-1} + ... + a_d, companion eigenvalues
/// followed by Newton polish. Sorted by descending modulus, then real part, then imaginary part.
std::vector<Complex> char_roots(const std::vector<double>& coeffs, const PronyThresholds& th = {});

/// Solves the Vandermonde system (S_0..S_{d-1}) = V(mu) A with V_{k,i} = mu_i^k.
/// Throws DegenerateInputError when two nodes coincide within the separation threshold.
std::vector<Complex> solve_amplitudes(const WindowData& S, const std::vector<Complex>& nodes,
                                      const PronyThresholds& th = {});

struct PronyModel {
    std::vector<Complex> nodes;
    std::vector<Complex> amplitudes;
    std::vector<double> char_coeffs;
    double hankel_condition = 0.0;
    double vandermonde_condition = 0.0;
    std::set<PronyFlag> flags;

    bool has(PronyFlag f) const { return flags.count(f) != 0; }
    /// True when any of the four nondegeneracy hypotheses failed.
    bool degenerate() const;
    /// sum_i A_i mu_i^k
    Complex window_sum(std::size_t k) const;
    /// Real parts of window_sum(0..K-1).
    std::vector<double> synthesize(std::size_t K) const;
};

/// Hankel solve, root extraction and Vandermonde solve on S_0..S_{2d-1}.
/// Degeneracy is reported through flags; only K < 2d throws.
PronyModel prony_reconstruct(const WindowData& S, std::size_t d, const PronyThresholds& th = {});

}  // namespace dcert

#endif  // DEFECT_CERT_PRONY_HPP
