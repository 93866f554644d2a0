#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "hsr/allocator/problem.hpp"

namespace hsr::allocator {

/// Two-stage suboptimal allocation.
///
/// Stage 1 treats every dimension's interference-plus-noise weight as 1 and
/// loads bits greedily: the user with the largest unmet demand either claims
/// its strongest free cell at b = 2 or raises one of its cells by two bits,
/// whichever costs less unit-weight power. A cell is only claimed when the
/// remaining free cells still cover every other user's minimum cell count, so
/// the stage never strands a feasible instance.
///
/// Stage 2 prices the result with the true floors and makes one improvement
/// pass, moving each loaded cell to the cheapest free cell or antenna.
inline AllocationSolution solve_greedy(const AllocationProblem& p) {
    p.validate();
    AllocationSolution sol;
    if (!p.is_feasible()) return sol;

    const int cells = p.n_cells();
    const int users = p.n_users;
    std::vector<CellAssignment> asg(static_cast<std::size_t>(cells));
    std::vector<bool> used(static_cast<std::size_t>(cells), false);
    std::vector<int> got(static_cast<std::size_t>(users), 0);
    std::vector<int> owned(static_cast<std::size_t>(users), 0);
    int free_cells = cells;

    auto deficit = [&](int k) { return std::max(0, p.min_rate_bits[static_cast<std::size_t>(k)] - got[static_cast<std::size_t>(k)]); };
    // Cells user k still has to claim even if all of its cells go to 6 bits.
    auto cells_needed = [&](int k) {
        const int rest = p.min_rate_bits[static_cast<std::size_t>(k)] - kMaxBitsPerCell * owned[static_cast<std::size_t>(k)];
        return rest <= 0 ? 0 : (rest + kMaxBitsPerCell - 1) / kMaxBitsPerCell;
    };
    auto unit_cost = [&](int k, int c, int i, int bits) {
        const double g = p.gain(k, p.cell_subcarrier(c), i, p.cell_slot(c));
        return (std::ldexp(1.0, bits) - 1.0) / (g * g);
    };

    for (;;) {
        int u = -1;
        for (int k = 0; k < users; ++k)
            if (deficit(k) > 0 && (u < 0 || deficit(k) > deficit(u))) u = k;
        if (u < 0) break;

        int others_need = 0;
        for (int k = 0; k < users; ++k)
            if (k != u) others_need += cells_needed(k);
        const bool may_claim = free_cells > 0 && (cells_needed(u) > 0 || free_cells - 1 >= others_need);

        constexpr double kInf = std::numeric_limits<double>::infinity();
        double best = kInf;
        int best_cell = -1, best_ant = 0, best_bits = 0;
        if (may_claim) {
            // Strongest free (n, i, t) for this user; ties go to the lowest index.
            double g_best = -1.0;
            for (int c = 0; c < cells; ++c) {
                if (used[static_cast<std::size_t>(c)]) continue;
                for (int i = 0; i < p.n_antennas; ++i) {
                    const double g = p.gain(u, p.cell_subcarrier(c), i, p.cell_slot(c));
                    if (g > g_best) {
                        g_best = g;
                        best_cell = c;
                        best_ant = i;
                    }
                }
            }
            best = unit_cost(u, best_cell, best_ant, 2);
            best_bits = 2;
        }
        if (cells_needed(u) == 0 || !may_claim) {
            for (int c = 0; c < cells; ++c) {
                const auto& a = asg[static_cast<std::size_t>(c)];
                if (!used[static_cast<std::size_t>(c)] || a.user != u || a.bits >= kMaxBitsPerCell) continue;
                const double delta = unit_cost(u, c, a.antenna, a.bits + 2) - unit_cost(u, c, a.antenna, a.bits);
                if (delta < best) {
                    best = delta;
                    best_cell = c;
                    best_ant = a.antenna;
                    best_bits = a.bits + 2;
                }
            }
        }
        if (best_cell < 0) return sol;  // unreachable for feasible instances

        auto& a = asg[static_cast<std::size_t>(best_cell)];
        if (!used[static_cast<std::size_t>(best_cell)]) {
            used[static_cast<std::size_t>(best_cell)] = true;
            --free_cells;
            ++owned[static_cast<std::size_t>(u)];
            a = {u, best_ant, 0, 0.0};
        }
        got[static_cast<std::size_t>(u)] += best_bits - a.bits;
        a.bits = best_bits;
    }

    auto true_power = [&](int k, int c, int i, int bits) {
        return p.power(k, p.cell_subcarrier(c), i, p.cell_slot(c), bits);
    };
    for (int c = 0; c < cells; ++c) {
        auto& a = asg[static_cast<std::size_t>(c)];
        a.power_w = a.bits > 0 ? true_power(a.user, c, a.antenna, a.bits) : 0.0;
    }

    std::vector<bool> moved(static_cast<std::size_t>(cells), false);
    for (int c = 0; c < cells; ++c) {
        const auto a = asg[static_cast<std::size_t>(c)];
        if (a.bits == 0 || moved[static_cast<std::size_t>(c)]) continue;
        double best = a.power_w;
        int to_cell = -1, to_ant = 0;
        for (int c2 = 0; c2 < cells; ++c2) {
            if (c2 != c && asg[static_cast<std::size_t>(c2)].bits != 0) continue;
            for (int i = 0; i < p.n_antennas; ++i) {
                if (c2 == c && i == a.antenna) continue;
                const double pw = true_power(a.user, c2, i, a.bits);
                if (pw < best) {
                    best = pw;
                    to_cell = c2;
                    to_ant = i;
                }
            }
        }
        if (to_cell >= 0) {
            asg[static_cast<std::size_t>(c)] = CellAssignment{};
            asg[static_cast<std::size_t>(to_cell)] = {a.user, to_ant, a.bits, best};
            moved[static_cast<std::size_t>(to_cell)] = true;
        }
    }

    for (auto& a : asg)
        if (a.bits == 0) a = CellAssignment{};
    sol.status = SolveStatus::Suboptimal;
    sol.cells = std::move(asg);
    for (const auto& a : sol.cells) sol.total_power_w += a.power_w;
    return sol;
}

}  // namespace hsr::allocator
