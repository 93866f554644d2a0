#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hsr/allocator/problem.hpp"

namespace hsr::allocator {

struct ExactLimits {
    int max_cells = 16;           // N * T
    int max_user_antennas = 8;    // K * I
    long long max_nodes = 50'000'000;
    long long enumeration_threshold = 100'000;  // below this many leaves, skip bounding
};

namespace detail {

struct CellOption {
    int user;
    int antenna;
    int bits;
    double power;
};

class BranchAndBound {
public:
    BranchAndBound(const AllocationProblem& p, const ExactLimits& lim) : p_(p), lim_(lim) {
        const int cells = p.n_cells();
        // Visit cells with the strongest effective gain first.
        order_.resize(static_cast<std::size_t>(cells));
        std::iota(order_.begin(), order_.end(), 0);
        std::vector<double> best_gain(static_cast<std::size_t>(cells), 0.0);
        for (int c = 0; c < cells; ++c) {
            const int n = p.cell_subcarrier(c), t = p.cell_slot(c);
            for (int k = 0; k < p.n_users; ++k)
                for (int i = 0; i < p.n_antennas; ++i) {
                    const double g = p.gain(k, n, i, t);
                    best_gain[static_cast<std::size_t>(c)] =
                        std::max(best_gain[static_cast<std::size_t>(c)], g * g / p.floor_w[static_cast<std::size_t>(n)]);
                }
        }
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return best_gain[static_cast<std::size_t>(a)] > best_gain[static_cast<std::size_t>(b)];
        });

        // Options per cell: idle first, then every (k, i, b>0) by ascending power.
        options_.resize(static_cast<std::size_t>(cells));
        for (int c = 0; c < cells; ++c) {
            auto& opts = options_[static_cast<std::size_t>(c)];
            opts.push_back({0, 0, 0, 0.0});
            std::vector<CellOption> rest;
            const int n = p.cell_subcarrier(c), t = p.cell_slot(c);
            for (int k = 0; k < p.n_users; ++k) {
                if (p.min_rate_bits[static_cast<std::size_t>(k)] == 0) continue;
                for (int i = 0; i < p.n_antennas; ++i)
                    for (int b : {2, 4, 6}) rest.push_back({k, i, b, p.power(k, n, i, t, b)});
            }
            std::stable_sort(rest.begin(), rest.end(),
                             [](const CellOption& a, const CellOption& b) { return a.power < b.power; });
            opts.insert(opts.end(), rest.begin(), rest.end());
        }

        // Per-user relaxation: cheapest way for user k alone to collect d bits
        // from the cells at positions depth.. of the visiting order.
        const int users = p.n_users;
        relax_.assign(static_cast<std::size_t>(users), {});
        for (int k = 0; k < users; ++k) {
            const int demand = p.min_rate_bits[static_cast<std::size_t>(k)];
            auto& table = relax_[static_cast<std::size_t>(k)];
            table.assign(static_cast<std::size_t>(cells + 1),
                         std::vector<double>(static_cast<std::size_t>(demand + 1), kInf));
            table[static_cast<std::size_t>(cells)][0] = 0.0;
            for (int depth = cells - 1; depth >= 0; --depth) {
                const int c = order_[static_cast<std::size_t>(depth)];
                const int n = p.cell_subcarrier(c), t = p.cell_slot(c);
                std::array<double, 7> cost{};
                for (int b : {2, 4, 6}) {
                    double best = kInf;
                    for (int i = 0; i < p.n_antennas; ++i) best = std::min(best, p.power(k, n, i, t, b));
                    cost[static_cast<std::size_t>(b)] = best;
                }
                auto& row = table[static_cast<std::size_t>(depth)];
                const auto& next = table[static_cast<std::size_t>(depth + 1)];
                for (int d = 0; d <= demand; ++d) {
                    double best = next[static_cast<std::size_t>(d)];
                    for (int b : {2, 4, 6}) {
                        const int rem = std::max(0, d - b);
                        best = std::min(best, cost[static_cast<std::size_t>(b)] + next[static_cast<std::size_t>(rem)]);
                    }
                    row[static_cast<std::size_t>(d)] = best;
                }
            }
        }

        double leaves = 1.0;
        for (const auto& o : options_) leaves *= static_cast<double>(o.size());
        use_bound_ = leaves >= static_cast<double>(lim.enumeration_threshold);
    }

    AllocationSolution solve() {
        deficit_ = p_.min_rate_bits;
        current_.assign(static_cast<std::size_t>(p_.n_cells()), CellAssignment{});
        recurse(0, 0.0);
        AllocationSolution s;
        s.nodes_explored = nodes_;
        if (!found_) return s;
        s.status = SolveStatus::Optimal;
        s.cells = best_;
        for (const auto& a : s.cells) s.total_power_w += a.power_w;
        return s;
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    double lower_bound(int depth) const {
        double lb = 0.0;
        for (int k = 0; k < p_.n_users; ++k)
            lb += relax_[static_cast<std::size_t>(k)][static_cast<std::size_t>(depth)]
                        [static_cast<std::size_t>(deficit_[static_cast<std::size_t>(k)])];
        return lb;
    }

    bool cells_suffice(int depth) const {
        int needed = 0;
        for (int d : deficit_) needed += (d + kMaxBitsPerCell - 1) / kMaxBitsPerCell;
        return needed <= p_.n_cells() - depth;
    }

    void recurse(int depth, double cost) {
        if (++nodes_ > lim_.max_nodes)
            throw ResourceLimitError("exact solver exceeded its node budget; use the greedy solver");
        if (depth == p_.n_cells()) {
            for (int d : deficit_)
                if (d > 0) return;
            if (!found_ || cost < best_cost_) {
                found_ = true;
                best_cost_ = cost;
                best_ = current_;
            }
            return;
        }
        if (!cells_suffice(depth)) return;
        if (use_bound_ && found_ && cost + lower_bound(depth) >= best_cost_) return;

        const int c = order_[static_cast<std::size_t>(depth)];
        for (const auto& o : options_[static_cast<std::size_t>(c)]) {
            if (use_bound_ && found_ && cost + o.power >= best_cost_) break;  // options sorted by power
            auto& d = deficit_[static_cast<std::size_t>(o.user)];
            if (o.bits > 0 && d <= 0) continue;
            const int saved = d;
            if (o.bits > 0) d = std::max(0, d - o.bits);
            current_[static_cast<std::size_t>(c)] = {o.user, o.antenna, o.bits, o.power};
            recurse(depth + 1, cost + o.power);
            d = saved;
        }
        current_[static_cast<std::size_t>(c)] = CellAssignment{};
    }

    const AllocationProblem& p_;
    ExactLimits lim_;
    std::vector<int> order_;
    std::vector<std::vector<CellOption>> options_;
    std::vector<std::vector<std::vector<double>>> relax_;
    bool use_bound_ = true;

    std::vector<int> deficit_;
    std::vector<CellAssignment> current_;
    std::vector<CellAssignment> best_;
    double best_cost_ = kInf;
    bool found_ = false;
    long long nodes_ = 0;
};

}  // namespace detail

/// Globally minimal total power by depth-first branch-and-bound over (n, t) cells.
///
/// Loading bits on a user whose demand is already met only adds power, so such
/// branches are skipped. Throws ResourceLimitError when the instance exceeds
/// `limits` (dimension guard or node budget).
inline AllocationSolution solve_exact(const AllocationProblem& problem, const ExactLimits& limits = {}) {
    problem.validate();
    if (problem.n_cells() > limits.max_cells || problem.n_users * problem.n_antennas > limits.max_user_antennas)
        throw ResourceLimitError("instance too large for exact solver (N*T=" + std::to_string(problem.n_cells()) +
                                 ", K*I=" + std::to_string(problem.n_users * problem.n_antennas) +
                                 "); use the greedy solver");
    if (!problem.is_feasible()) return AllocationSolution{};
    detail::BranchAndBound bnb(problem, limits);
    return bnb.solve();
}

}  // namespace hsr::allocator
