#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsr/allocator/qfunc.hpp"

namespace hsr::allocator {

/// Raised when an instance is too large for the exact solver.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<int, 4> kBitAlphabet{0, 2, 4, 6};
inline constexpr int kMaxBitsPerCell = 6;

/// Q^{-1}(P_k/4)^2, the BER-dependent factor of the per-allocation power.
inline double ber_power_factor(double target_ber) {
    if (!(target_ber > 0 && target_ber < 0.5))
        throw std::invalid_argument("target BER must lie in (0, 0.5)");
    const double q = q_inverse(target_ber / 4.0);
    return q * q;
}

/// Transmit power needed to carry `bits` on a dimension with amplitude gain
/// `sigma` over an interference-plus-noise floor `floor_w` at BER `target_ber`.
inline double per_allocation_power(int bits, double sigma, double floor_w, double target_ber) {
    if (bits != 0 && bits != 2 && bits != 4 && bits != 6)
        throw std::invalid_argument("bits must be one of {0, 2, 4, 6}");
    if (!(sigma > 0)) throw std::invalid_argument("gain must be > 0");
    if (!(floor_w > 0)) throw std::invalid_argument("floor must be > 0");
    const double factor = ber_power_factor(target_ber);
    if (bits == 0) return 0.0;
    return floor_w * (std::ldexp(1.0, bits) - 1.0) / (3.0 * sigma * sigma) * factor;
}

/// Upper bound on the M-QAM bit error rate: 4 Q(sqrt(3 SINR / (M - 1))), clamped to [0, 1].
inline double mqam_ber_bound(int m_order, double sinr) {
    if (m_order < 2) throw std::invalid_argument("mqam_ber_bound: M must be >= 2");
    if (!(sinr >= 0)) throw std::invalid_argument("mqam_ber_bound: SINR must be >= 0");
    const double v = 4.0 * q_function(std::sqrt(3.0 * sinr / (m_order - 1)));
    return std::clamp(v, 0.0, 1.0);
}

/// Nearest-neighbour M-QAM BER approximation (the expression the bound dominates).
inline double mqam_ber_approx(int m_order, double sinr) {
    const double m = m_order;
    const double k = std::log2(m);
    return 4.0 * (1.0 - 1.0 / std::sqrt(m)) / k * q_function(std::sqrt(3.0 * sinr / (m - 1.0)));
}

/// K users x N subcarriers x I antennas x T slots power-minimisation instance.
struct AllocationProblem {
    int n_users = 1;
    int n_subcarriers = 1;
    int n_antennas = 1;
    int n_slots = 1;
    std::vector<int> min_rate_bits;     // per user, bits per frame
    std::vector<double> target_ber;     // per user
    std::vector<double> gains;          // amplitude sigma, index via gain_index()
    std::vector<double> floor_w;        // per subcarrier: ICI_n + noise (W)

    AllocationProblem() = default;
    AllocationProblem(int k, int n, int i, int t)
        : n_users(k), n_subcarriers(n), n_antennas(i), n_slots(t),
          min_rate_bits(static_cast<std::size_t>(k), 0),
          target_ber(static_cast<std::size_t>(k), 1e-5),
          gains(static_cast<std::size_t>(k * n * i * t), 1.0),
          floor_w(static_cast<std::size_t>(n), 1.0) {}

    std::size_t gain_index(int k, int n, int i, int t) const {
        return static_cast<std::size_t>(((k * n_subcarriers + n) * n_antennas + i) * n_slots + t);
    }
    double gain(int k, int n, int i, int t) const { return gains[gain_index(k, n, i, t)]; }
    double& gain(int k, int n, int i, int t) { return gains[gain_index(k, n, i, t)]; }

    int n_cells() const { return n_subcarriers * n_slots; }
    int cell_subcarrier(int cell) const { return cell / n_slots; }
    int cell_slot(int cell) const { return cell % n_slots; }

    /// Power for user k carrying `bits` at (n, i, t).
    double power(int k, int n, int i, int t, int bits) const {
        return per_allocation_power(bits, gain(k, n, i, t), floor_w[static_cast<std::size_t>(n)],
                                    target_ber[static_cast<std::size_t>(k)]);
    }

    int total_demand() const {
        int s = 0;
        for (int r : min_rate_bits) s += r;
        return s;
    }

    /// Every user needs ceil(R_k / 6) distinct (n, t) cells; cells are shared by no one.
    bool is_feasible() const {
        int cells_needed = 0;
        for (int r : min_rate_bits) cells_needed += (r + kMaxBitsPerCell - 1) / kMaxBitsPerCell;
        return cells_needed <= n_cells();
    }

    void validate() const {
        if (n_users < 1 || n_subcarriers < 1 || n_antennas < 1 || n_slots < 1)
            throw std::invalid_argument("allocation problem dimensions must be >= 1");
        const auto k = static_cast<std::size_t>(n_users);
        if (min_rate_bits.size() != k || target_ber.size() != k)
            throw std::invalid_argument("per-user vectors must have K entries");
        if (gains.size() != static_cast<std::size_t>(n_users * n_subcarriers * n_antennas * n_slots))
            throw std::invalid_argument("gain table must have K*N*I*T entries");
        if (floor_w.size() != static_cast<std::size_t>(n_subcarriers))
            throw std::invalid_argument("floor table must have N entries");
        for (double g : gains)
            if (!(g > 0)) throw std::invalid_argument("gains must be > 0");
        for (double f : floor_w)
            if (!(f > 0)) throw std::invalid_argument("floors must be > 0");
        for (double p : target_ber)
            if (!(p > 0 && p < 0.5)) throw std::invalid_argument("target BER must lie in (0, 0.5)");
        for (int r : min_rate_bits)
            if (r < 0) throw std::invalid_argument("rate demands must be >= 0");
    }
};

enum class SolveStatus { Optimal, Suboptimal, Infeasible };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Suboptimal: return "suboptimal";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

/// Owner of one (n, t) cell. A cell with bits == 0 carries nothing and is
/// parked on (user 0, antenna 0).
struct CellAssignment {
    int user = 0;
    int antenna = 0;
    int bits = 0;
    double power_w = 0.0;

    friend bool operator==(const CellAssignment&, const CellAssignment&) = default;
};

struct AllocationSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<CellAssignment> cells;  // indexed by n * T + t
    double total_power_w = 0.0;
    long long nodes_explored = 0;

    /// delta * b at (k, n, i, t), flattened like AllocationProblem::gains.
    std::vector<int> bits_table(const AllocationProblem& p) const {
        std::vector<int> out(p.gains.size(), 0);
        for (int c = 0; c < p.n_cells(); ++c) {
            const auto& a = cells[static_cast<std::size_t>(c)];
            out[p.gain_index(a.user, p.cell_subcarrier(c), a.antenna, p.cell_slot(c))] = a.bits;
        }
        return out;
    }

    std::vector<double> power_table(const AllocationProblem& p) const {
        std::vector<double> out(p.gains.size(), 0.0);
        for (int c = 0; c < p.n_cells(); ++c) {
            const auto& a = cells[static_cast<std::size_t>(c)];
            out[p.gain_index(a.user, p.cell_subcarrier(c), a.antenna, p.cell_slot(c))] = a.power_w;
        }
        return out;
    }

    std::vector<int> bits_per_user(const AllocationProblem& p) const {
        std::vector<int> out(static_cast<std::size_t>(p.n_users), 0);
        for (const auto& a : cells) out[static_cast<std::size_t>(a.user)] += a.bits;
        return out;
    }

    /// Most frequent non-zero modulation order (ties go to the smaller b); 0 when idle.
    int modal_bits() const {
        std::array<int, 7> count{};
        for (const auto& a : cells) count[static_cast<std::size_t>(a.bits)]++;
        int best = 0, best_count = 0;
        for (int b : {2, 4, 6}) {
            if (count[static_cast<std::size_t>(b)] > best_count) {
                best = b;
                best_count = count[static_cast<std::size_t>(b)];
            }
        }
        return best;
    }
};

/// Throws std::logic_error describing the first violated constraint.
inline void check_solution(const AllocationProblem& p, const AllocationSolution& s, double rel_tol = 1e-9) {
    if (s.status == SolveStatus::Infeasible) return;
    if (s.cells.size() != static_cast<std::size_t>(p.n_cells()))
        throw std::logic_error("solution must assign every (n, t) cell exactly once");
    double total = 0.0;
    for (int c = 0; c < p.n_cells(); ++c) {
        const auto& a = s.cells[static_cast<std::size_t>(c)];
        if (a.user < 0 || a.user >= p.n_users || a.antenna < 0 || a.antenna >= p.n_antennas)
            throw std::logic_error("cell " + std::to_string(c) + " assigned out of range");
        const double expect = p.power(a.user, p.cell_subcarrier(c), a.antenna, p.cell_slot(c), a.bits);
        if (std::abs(expect - a.power_w) > rel_tol * std::abs(expect))
            throw std::logic_error("cell " + std::to_string(c) + " power does not match the power formula");
        total += a.power_w;
    }
    if (std::abs(total - s.total_power_w) > rel_tol * std::max(total, 1e-300))
        throw std::logic_error("total power is not the sum of per-cell powers");
    const auto bits = s.bits_per_user(p);
    for (int k = 0; k < p.n_users; ++k)
        if (bits[static_cast<std::size_t>(k)] < p.min_rate_bits[static_cast<std::size_t>(k)])
            throw std::logic_error("user " + std::to_string(k) + " rate constraint violated");
}

}  // namespace hsr::allocator
