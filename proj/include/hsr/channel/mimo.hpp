#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace hsr::channel {

enum class MimoMode { Multiplex, Diversity };

/// Antenna configuration. Non-handover zones run in Multiplex mode, handover
/// zones in Diversity mode (joint transmission from two RRUs).
struct MimoConfig {
    int n_tx = 2;
    int n_rx = 4;
    MimoMode mode = MimoMode::Multiplex;
    int joint_rrus = 1;

    int streams() const { return mode == MimoMode::Diversity ? 1 : std::min(n_tx, n_rx); }
    /// Number of independent fading branches combined in Diversity mode.
    int diversity_order() const { return n_tx * n_rx; }

    void validate() const {
        if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("mimo: antenna counts must be >= 1");
        if (joint_rrus < 1 || joint_rrus > 2) throw std::invalid_argument("mimo.joint_rrus must be 1 or 2");
    }
};

using ComplexMatrix = Eigen::MatrixXcd;

struct ChannelRealization {
    ComplexMatrix matrix;           // N_r x N_t
    ComplexMatrix u;                // N_r x N_r
    ComplexMatrix v;                // N_t x N_t
    std::vector<double> singular_values;  // strictly positive, non-increasing
    int rank = 0;
    double nakagami_m = 1.0;

    double condition_number() const {
        if (singular_values.empty()) return std::numeric_limits<double>::infinity();
        return singular_values.front() / singular_values.back();
    }

    /// U * [D 0; 0 0] * V^H.
    ComplexMatrix reconstruct() const {
        ComplexMatrix d = ComplexMatrix::Zero(matrix.rows(), matrix.cols());
        for (int i = 0; i < rank; ++i) d(i, i) = singular_values[static_cast<std::size_t>(i)];
        return u * d * v.adjoint();
    }

    /// Transformed-domain output U^H y for input V x~: y~_i = sigma_i x~_i (noise-free).
    Eigen::VectorXcd equivalent_output(const Eigen::VectorXcd& x_tilde) const {
        return u.adjoint() * (matrix * (v * x_tilde));
    }
};

/// Singular value decomposition of a channel matrix into parallel eigenchannels.
inline ChannelRealization decompose(const ComplexMatrix& matrix, double nakagami_m = 1.0) {
    if (!matrix.allFinite()) throw std::invalid_argument("decompose: matrix has non-finite entries");
    ChannelRealization r;
    r.matrix = matrix;
    r.nakagami_m = nakagami_m;
    Eigen::JacobiSVD<ComplexMatrix> svd(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    r.u = svd.matrixU();
    r.v = svd.matrixV();
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    const double tol = static_cast<double>(std::max(matrix.rows(), matrix.cols())) *
                       std::numeric_limits<double>::epsilon() * smax;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol && s(i) > 0) r.singular_values.push_back(s(i));
    r.rank = static_cast<int>(r.singular_values.size());
    return r;
}

/// Draws one Nakagami-m power sample (|h|^2 ~ Gamma(m, mean/m)).
template <class Rng>
double sample_nakagami_power(double m, double mean_power, Rng& rng) {
    std::gamma_distribution<double> gamma(m, mean_power / m);
    return gamma(rng);
}

/// Eigenchannel amplitude gains sigma_i, Nakagami-m distributed with E[sigma^2] = mean_power.
template <class Rng>
std::vector<double> sample_eigenchannel_gains(int count, double m, double mean_power, Rng& rng) {
    if (!(m >= 0.5)) throw std::invalid_argument("sample_eigenchannel_gains: Nakagami m must be >= 0.5");
    if (!(mean_power > 0)) throw std::invalid_argument("sample_eigenchannel_gains: mean_power must be > 0");
    if (count < 1) throw std::invalid_argument("sample_eigenchannel_gains: count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& g : out) g = std::sqrt(sample_nakagami_power(m, mean_power, rng));
    return out;
}

inline std::vector<double> sample_eigenchannel_gains(int count, double m, double mean_power,
                                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_eigenchannel_gains(count, m, mean_power, rng);
}

/// N_r x N_t matrix with i.i.d. Nakagami-m amplitudes and uniform phases.
template <class Rng>
ComplexMatrix sample_channel_matrix(int n_rx, int n_tx, double m, double mean_power, Rng& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ComplexMatrix h(n_rx, n_tx);
    for (int c = 0; c < n_tx; ++c)
        for (int r = 0; r < n_rx; ++r)
            h(r, c) = std::polar(std::sqrt(sample_nakagami_power(m, mean_power, rng)), phase(rng));
    return h;
}

/// Fading statistics shared by every link in a scenario.
struct ChannelParams {
    double nakagami_m = 1.0;
    /// Large-scale gain applied to every branch (dB); the default is a cell-edge path loss.
    double mean_gain_db = -144.0;

    double mean_gain() const { return std::pow(10.0, mean_gain_db / 10.0); }
};

/// Power gain seen by the effective stream of one fading draw, and the share of
/// the total transmit power that stream carries.
struct EffectiveGain {
    double power_gain;
    double power_share;
};

/// Multiplex: dominant eigenchannel of an N_r x N_t draw, power split over the
/// active streams. Diversity: sum of N_t*N_r i.i.d. branch powers (MRC), full power.
template <class Rng>
EffectiveGain sample_effective_gain(const MimoConfig& cfg, const ChannelParams& ch, Rng& rng) {
    if (cfg.mode == MimoMode::Diversity) {
        double sum = 0.0;
        for (int b = 0; b < cfg.diversity_order(); ++b)
            sum += sample_nakagami_power(ch.nakagami_m, ch.mean_gain(), rng);
        return {sum, 1.0};
    }
    const auto r = decompose(sample_channel_matrix(cfg.n_rx, cfg.n_tx, ch.nakagami_m, ch.mean_gain(), rng),
                             ch.nakagami_m);
    const double s1 = r.rank > 0 ? r.singular_values.front() : 0.0;
    return {s1 * s1, 1.0 / cfg.streams()};
}

}  // namespace hsr::channel
