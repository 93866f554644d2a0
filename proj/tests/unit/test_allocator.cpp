#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

#include "hsr/allocator/desk.hpp"
#include "hsr/allocator/exact.hpp"
#include "hsr/allocator/greedy.hpp"
#include "hsr/allocator/problem.hpp"
#include "hsr/allocator/qfunc.hpp"
#include "support/oracles.hpp"

using namespace hsr::allocator;

TEST(QFunction, Basics) {
    EXPECT_EQ(q_function(0.0), 0.5);
    EXPECT_EQ(q_inverse(0.5), 0.0);
    EXPECT_NEAR(q_function(1.2816), oracle::q_integral(1.2816), 1e-12);
    EXPECT_NEAR(q_function(1.2816), 0.1000, 1e-4);
}

TEST(QFunction, AgainstIntegration) {
    for (double x = -6.0; x <= 8.0; x += 0.25) {
        const double ref = oracle::q_integral(x);
        EXPECT_NEAR(q_function(x), ref, 1e-9 * ref + 1e-15) << x;
    }
}

// Below -5 the double result saturates at 1.
TEST(QFunction, StrictlyDecreasing) {
    for (double x = -5.0; x < 8.0; x += 0.01) EXPECT_GT(q_function(x), q_function(x + 0.01));
}

TEST(QInverse, DomainErrors) {
    EXPECT_THROW(q_inverse(0.0), std::invalid_argument);
    EXPECT_THROW(q_inverse(1.0), std::invalid_argument);
    EXPECT_THROW(q_inverse(-0.1), std::invalid_argument);
}

TEST(QInverse, MatchesNewtonOracle) {
    for (double p : {0.4, 0.1, 1e-2, 1e-3, 2.5e-6, 1e-9, 1e-12})
        EXPECT_NEAR(q_inverse(p), oracle::q_inverse_newton(p), 1e-9) << p;
}

TEST(QInverse, RoundTripNonNegativeDouble) {
    for (double x = 0.0; x <= 8.0; x += 0.05) EXPECT_NEAR(q_inverse(q_function(x)), x, 1e-9) << x;
}

TEST(QInverse, RoundTripFullRangeQuad) {
    using Quad = boost::multiprecision::cpp_bin_float_quad;
    for (int i = -160; i <= 160; i += 5) {
        const Quad x = Quad(i) / 20;
        const Quad back = q_inverse<Quad>(q_function<Quad>(x), Quad(1e-15));
        EXPECT_LT(static_cast<double>(abs(back - x)), 1e-9) << static_cast<double>(x);
    }
}

TEST(Power, ZeroBitsZeroPower) { EXPECT_EQ(per_allocation_power(0, 1.0, 1.0, 1e-5), 0.0); }

TEST(Power, TwoBitsUnitGain) {
    const double q = oracle::q_inverse_newton(2.5e-6);
    EXPECT_NEAR(per_allocation_power(2, 1.0, 1.0, 1e-5), q * q, 1e-9 * q * q);
    EXPECT_NEAR(per_allocation_power(2, 1.0, 1.0, 1e-5), 20.84, 0.01);
}

TEST(Power, InverseSquareGain) {
    const double a = per_allocation_power(4, 0.7, 2.0, 1e-5);
    EXPECT_NEAR(per_allocation_power(4, 1.4, 2.0, 1e-5), a / 4, 1e-12 * a);
}

TEST(Power, IncreasingInBits) {
    EXPECT_LT(per_allocation_power(2, 1.0, 1.0, 1e-5), per_allocation_power(4, 1.0, 1.0, 1e-5));
    EXPECT_LT(per_allocation_power(4, 1.0, 1.0, 1e-5), per_allocation_power(6, 1.0, 1.0, 1e-5));
}

TEST(Power, BadInputs) {
    EXPECT_THROW(per_allocation_power(3, 1.0, 1.0, 1e-5), std::invalid_argument);
    EXPECT_THROW(per_allocation_power(2, 1.0, 1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(per_allocation_power(2, 1.0, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(per_allocation_power(2, 0.0, 1.0, 1e-5), std::invalid_argument);
}

TEST(Power, ClosesThroughBerBound) {
    // Power for b bits at unit floor gives SINR = P sigma^2; the bound at that SINR returns the target.
    for (int b : {2, 4, 6})
        for (double ber : {1e-3, 1e-5, 1e-7}) {
            const double sigma = 0.8;
            const double p = per_allocation_power(b, sigma, 1.0, ber);
            const double sinr = p * sigma * sigma;
            EXPECT_NEAR(mqam_ber_bound(1 << b, sinr), ber, 1e-9 * ber);
        }
}

TEST(BerBound, Limits) {
    EXPECT_EQ(mqam_ber_bound(4, 0.0), 1.0);
    EXPECT_EQ(mqam_ber_bound(16, 1e12), 0.0);
    const double q = oracle::q_inverse_newton(2.5e-6);
    EXPECT_NEAR(mqam_ber_bound(4, q * q), 1e-5, 1e-14);
}

TEST(BerBound, DominatesApproximation) {
    for (int m : {4, 16, 64})
        for (double s = 0.1; s < 1000; s *= 1.5) EXPECT_GE(mqam_ber_bound(m, s), mqam_ber_approx(m, s));
}

TEST(Exact, ZeroDemand) {
    AllocationProblem p(1, 2, 1, 1);
    const auto s = solve_exact(p);
    EXPECT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_EQ(s.total_power_w, 0.0);
    for (const auto& c : s.cells) EXPECT_EQ(c.bits, 0);
}

TEST(Exact, CapacityBoundInfeasible) {
    AllocationProblem p(1, 1, 1, 1);
    p.min_rate_bits = {8};
    EXPECT_EQ(solve_exact(p).status, SolveStatus::Infeasible);
    EXPECT_EQ(solve_greedy(p).status, SolveStatus::Infeasible);
}

TEST(Exact, TwoUsersCrossedGains) {
    AllocationProblem p(2, 2, 1, 1);
    p.gain(0, 0, 0, 0) = 2.0;
    p.gain(0, 1, 0, 0) = 1.0;
    p.gain(1, 0, 0, 0) = 1.0;
    p.gain(1, 1, 0, 0) = 2.0;
    p.min_rate_bits = {2, 2};
    const auto s = solve_exact(p);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_EQ(s.cells[0].user, 0);
    EXPECT_EQ(s.cells[1].user, 1);
    EXPECT_EQ(s.cells[0].bits, 2);
    EXPECT_EQ(s.cells[1].bits, 2);
    const double q = oracle::q_inverse_newton(2.5e-6);
    EXPECT_NEAR(s.total_power_w, 2 * q * q / 4, 1e-9 * q * q);
    EXPECT_NEAR(oracle::enumerate(p).total_power_w, s.total_power_w, 1e-9 * s.total_power_w);
    EXPECT_GE(solve_greedy(p).total_power_w, s.total_power_w * (1 - 1e-12));
}

TEST(Exact, GuardRejectsLargeInstances) {
    AllocationProblem big(1, 9, 1, 2);  // 18 cells
    EXPECT_THROW(solve_exact(big), ResourceLimitError);
    AllocationProblem wide(3, 2, 3, 1);  // K*I = 9
    EXPECT_THROW(solve_exact(wide), ResourceLimitError);
}

TEST(Exact, NodeBudget) {
    std::mt19937_64 rng(1);
    auto p = oracle::random_problem(rng, 6);
    while (!p.is_feasible() || p.total_demand() == 0) p = oracle::random_problem(rng, 6);
    ExactLimits lim;
    lim.max_nodes = 1;
    EXPECT_THROW(solve_exact(p, lim), ResourceLimitError);
}

TEST(Exact, MatchesEnumeration) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto p = oracle::random_problem(rng, 6);
        const auto e = solve_exact(p);
        const auto ref = oracle::enumerate(p);
        ASSERT_EQ(e.status != SolveStatus::Infeasible, ref.feasible) << trial;
        if (!ref.feasible) continue;
        EXPECT_NEAR(e.total_power_w, ref.total_power_w, 1e-9 * std::max(ref.total_power_w, 1e-300)) << trial;
        EXPECT_NO_THROW(check_solution(p, e));
    }
}

TEST(Exact, BoundedSearchMatchesPlainEnumeration) {
    // Forcing the bounded path on small instances as well.
    std::mt19937_64 rng(77);
    ExactLimits bounded;
    bounded.enumeration_threshold = 0;
    ExactLimits plain;
    plain.enumeration_threshold = std::numeric_limits<long long>::max();
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = oracle::random_problem(rng, 6);
        const auto a = solve_exact(p, bounded);
        const auto b = solve_exact(p, plain);
        ASSERT_EQ(a.status, b.status);
        EXPECT_NEAR(a.total_power_w, b.total_power_w, 1e-9 * std::max(a.total_power_w, 1e-300));
    }
}

TEST(Greedy, FeasibleAndNeverBelowOptimum) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = oracle::random_problem(rng, 8, 2, 2);
        const auto e = solve_exact(p);
        const auto g = solve_greedy(p);
        ASSERT_EQ(e.status == SolveStatus::Infeasible, g.status == SolveStatus::Infeasible) << trial;
        if (g.status == SolveStatus::Infeasible) continue;
        EXPECT_EQ(g.status, SolveStatus::Suboptimal);
        EXPECT_NO_THROW(check_solution(p, g)) << trial;
        EXPECT_GE(g.total_power_w, e.total_power_w * (1 - 1e-12)) << trial;
    }
}

TEST(Greedy, ZeroDemandIsFree) {
    AllocationProblem p(2, 3, 2, 2);
    const auto g = solve_greedy(p);
    EXPECT_EQ(g.total_power_w, 0.0);
}

TEST(Solvers, FloorScaleEquivariance) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = oracle::random_problem(rng, 6);
        if (!p.is_feasible()) continue;
        const auto e1 = solve_exact(p);
        const auto g1 = solve_greedy(p);
        auto q = p;
        for (auto& f : q.floor_w) f *= 3.5;
        const auto e2 = solve_exact(q);
        const auto g2 = solve_greedy(q);
        EXPECT_NEAR(e2.total_power_w, 3.5 * e1.total_power_w, 1e-9 * std::max(e2.total_power_w, 1e-300));
        EXPECT_NEAR(g2.total_power_w, 3.5 * g1.total_power_w, 1e-9 * std::max(g2.total_power_w, 1e-300));
        EXPECT_EQ(g1.bits_table(p), g2.bits_table(q));
    }
}

// One (user, antenna) per (n, t), powers consistent and every rate met.
TEST(Solvers, AssignmentExclusivityFuzz) {
    std::mt19937_64 rng(808);
    int feasible = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = oracle::random_problem(rng, 6, 2, 2);
        for (const auto& s : {solve_exact(p), solve_greedy(p)}) {
            ASSERT_EQ(s.status == SolveStatus::Infeasible, !p.is_feasible()) << trial;
            if (s.status == SolveStatus::Infeasible) continue;
            ASSERT_NO_THROW(check_solution(p, s)) << trial;
            const auto table = s.bits_table(p);
            for (int n = 0; n < p.n_subcarriers; ++n) {
                for (int t = 0; t < p.n_slots; ++t) {
                    int owners = 0;
                    for (int k = 0; k < p.n_users; ++k)
                        for (int i = 0; i < p.n_antennas; ++i) owners += table[p.gain_index(k, n, i, t)] > 0;
                    ASSERT_LE(owners, 1) << trial;
                }
            }
            for (const auto& c : s.cells) {
                ASSERT_TRUE(c.bits == 0 || c.bits == 2 || c.bits == 4 || c.bits == 6);
                if (c.bits == 0) {
                    ASSERT_EQ(c.power_w, 0.0);
                }
            }
            ++feasible;
        }
    }
    EXPECT_GT(feasible, 500);
}

TEST(Solution, CheckerCatchesViolations) {
    AllocationProblem p(1, 2, 1, 1);
    p.min_rate_bits = {4};
    auto s = solve_exact(p);
    ASSERT_NO_THROW(check_solution(p, s));
    auto short_rate = s;
    for (auto& c : short_rate.cells) c = CellAssignment{};
    short_rate.total_power_w = 0.0;
    EXPECT_THROW(check_solution(p, short_rate), std::logic_error);
    auto bad_power = s;
    bad_power.cells[0].power_w += 1.0;
    EXPECT_THROW(check_solution(p, bad_power), std::logic_error);
}

TEST(Solution, ModalBits) {
    AllocationSolution s;
    s.cells = {{0, 0, 4, 1}, {0, 0, 2, 1}, {0, 0, 4, 1}, {0, 0, 0, 0}};
    EXPECT_EQ(s.modal_bits(), 4);
    s.cells = {{0, 0, 2, 1}, {0, 0, 6, 1}};
    EXPECT_EQ(s.modal_bits(), 2);
    s.cells = {{0, 0, 0, 0}};
    EXPECT_EQ(s.modal_bits(), 0);
}

TEST(Desk, RateBitsForTwentyEightMbps) {
    hsr::ScenarioConfig s;
    EXPECT_EQ(rate_bits(28800.0, s.ofdm, s.allocation), 12);
    EXPECT_EQ(rate_bits(0.0, s.ofdm, s.allocation), 0);
}

TEST(Desk, FlatCurveWithoutDoppler) {
    hsr::ScenarioConfig s;
    s.ofdm.carrier_hz = 1e-30;
    const std::vector<double> speeds{100, 200, 300, 400};
    const auto c = power_speed_curve(s, speeds, 3);
    for (const auto& r : c) {
        EXPECT_DOUBLE_EQ(*r.exact_w, *c.front().exact_w);
        EXPECT_DOUBLE_EQ(*r.greedy_w, *c.front().greedy_w);
    }
}

TEST(Desk, CurveIsMonotoneAndOrdered) {
    hsr::ScenarioConfig s;
    std::vector<double> speeds;
    for (double v = 100; v <= 400; v += 50) speeds.push_back(v);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto c = power_speed_curve(s, speeds, seed);
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_LE(*c[i].exact_w, *c[i].greedy_w * (1 + 1e-12));
            if (i) {
                EXPECT_GE(*c[i].greedy_w, *c[i - 1].greedy_w);
                EXPECT_GE(*c[i].exact_w, *c[i - 1].exact_w);
            }
        }
    }
}
