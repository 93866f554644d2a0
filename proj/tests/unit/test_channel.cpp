#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hsr/channel/mcs.hpp"
#include "hsr/channel/mimo.hpp"
#include "hsr/channel/ofdm.hpp"
#include "hsr/channel/sinr.hpp"
#include "support/oracles.hpp"

using namespace hsr::channel;

TEST(Doppler, ZeroSpeed) { EXPECT_EQ(doppler_shift(0.0, 2.3e9, 2.998e8), 0.0); }

TEST(Doppler, ThreeHundredKmh) {
    const double fd = doppler_shift(kmh_to_mps(300.0), 2.3e9, 3.0e8);
    EXPECT_NEAR(fd, 638.888888889, 1e-6);
}

TEST(Doppler, SpeedOfWaveGivesCarrier) { EXPECT_DOUBLE_EQ(doppler_shift(2.998e8, 2.3e9, 2.998e8), 2.3e9); }

TEST(Doppler, RejectsBadInput) {
    EXPECT_THROW(doppler_shift(NAN, 2.3e9), std::invalid_argument);
    EXPECT_THROW(doppler_shift(INFINITY, 2.3e9), std::invalid_argument);
    EXPECT_THROW(doppler_shift(-1.0, 2.3e9), std::invalid_argument);
}

TEST(Ici, NoDopplerNoIci) { EXPECT_EQ(ici_power(512, OfdmConfig{}, 0.0), 0.0); }

TEST(Ici, TwoSubcarriersSingleTerm) {
    OfdmConfig o;
    o.n_subcarriers = 2;
    o.symbol_period_s = 1e-4;
    const double fd = 500.0;
    const double t = o.symbol_period_s * fd;
    EXPECT_DOUBLE_EQ(ici_power(1, o, fd), t * t / 2.0);
}

TEST(Ici, CentreSubcarrierAgainstDoubleLoop) {
    const OfdmConfig o;
    const double fd = 638.9;
    const auto oracle = oracle::ici_double_loop(o, fd);
    EXPECT_NEAR(ici_power(512, o, fd), oracle[512], 1e-9 * oracle[512]);
    EXPECT_NEAR(ici_power(512, o, fd), 1.76e-3, 0.01e-3);
}

TEST(Ici, WholeBandAgainstDoubleLoop) {
    OfdmConfig o;
    o.n_subcarriers = 128;
    o.symbol_period_s = 128 / 20e6;
    const auto oracle = oracle::ici_double_loop(o, 900.0);
    for (int n = 1; n <= o.n_subcarriers; ++n)
        EXPECT_NEAR(ici_power(n, o, 900.0), oracle[static_cast<std::size_t>(n)], 1e-9 * oracle[static_cast<std::size_t>(n)]) << n;
}

TEST(Ici, MirrorSymmetric) {
    const OfdmConfig o;
    for (int n = 1; n <= o.n_subcarriers; ++n)
        EXPECT_EQ(ici_power(n, o, 700.0), ici_power(o.n_subcarriers + 1 - n, o, 700.0)) << n;
}

TEST(Ici, QuadraticInDoppler) {
    const OfdmConfig o;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> fd(1.0, 2000.0), k(0.1, 10.0);
    std::uniform_int_distribution<int> n(1, o.n_subcarriers);
    for (int trial = 0; trial < 1000; ++trial) {
        const double f = fd(rng), s = k(rng);
        const int idx = n(rng);
        EXPECT_NEAR(ici_power(idx, o, s * f), s * s * ici_power(idx, o, f), 1e-12 * s * s * ici_power(idx, o, f));
    }
}

TEST(Ici, MaximalAtCentre) {
    const OfdmConfig o;
    const double c = ici_power(center_subcarrier(o), o, 600.0);
    for (int n : {1, 2, 100, 300, 511, 514, 900, 1024}) EXPECT_LE(ici_power(n, o, 600.0), c) << n;
}

TEST(Ici, IndexOutOfRange) {
    const OfdmConfig o;
    EXPECT_THROW(ici_power(0, o, 1.0), std::out_of_range);
    EXPECT_THROW(ici_power(1025, o, 1.0), std::out_of_range);
}

TEST(Sinr, NoDopplerUnitGainIsSnr) {
    const OfdmConfig o;
    const double p = dbm_to_watt(46.0);
    EXPECT_NEAR(sinr_from_gain(1.0, p, o, 512, 0.0), p / o.noise_power_w(), 1e-9 * p / o.noise_power_w());
}

TEST(Sinr, InterferenceLimitedAsymptote) {
    const OfdmConfig o;
    const double fd = 638.9;
    const double ici = ici_power(512, o, fd);
    const double s = sinr_from_gain(1e6, 1e3, o, 512, fd);
    EXPECT_NEAR(s, 1.0 / ici, 1e-6 / ici);
}

TEST(Sinr, DecreasesFrom300To400Kmh) {
    const OfdmConfig o;
    const ChannelParams ch;
    const double p = dbm_to_watt(46.0) / 2.0;
    const double g = ch.mean_gain();
    const double a = sinr_from_gain(g, p, o, 512, doppler_shift(kmh_to_mps(300), o.carrier_hz));
    const double b = sinr_from_gain(g, p, o, 512, doppler_shift(kmh_to_mps(400), o.carrier_hz));
    EXPECT_GT(a, b);
}

TEST(Sinr, RankZeroRejected) {
    const auto r = decompose(ComplexMatrix::Zero(2, 2));
    EXPECT_THROW(effective_sinr(r, 1.0, OfdmConfig{}, 1, 0.0), std::invalid_argument);
}

TEST(Decompose, Identity) {
    const auto r = decompose(ComplexMatrix::Identity(2, 2));
    ASSERT_EQ(r.rank, 2);
    EXPECT_NEAR(r.singular_values[0], 1.0, 1e-15);
    EXPECT_NEAR(r.singular_values[1], 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(r.condition_number(), 1.0);
}

TEST(Decompose, ZeroMatrix) {
    const auto r = decompose(ComplexMatrix::Zero(4, 2));
    EXPECT_EQ(r.rank, 0);
    EXPECT_TRUE(r.singular_values.empty());
}

TEST(Decompose, RandomFourByTwoReconstructs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = sample_channel_matrix(4, 2, 1.0, 1.0, rng);
        const auto r = decompose(h);
        EXPECT_EQ(r.rank, 2);
        EXPECT_GE(r.singular_values[0], r.singular_values[1]);
        EXPECT_GE(r.condition_number(), 1.0);
        EXPECT_LT((r.reconstruct() - h).norm() / h.norm(), 1e-9);
    }
}

TEST(Decompose, ParallelScalarChannels) {
    // U^H H V x = diag(sigma) x for any x.
    std::mt19937_64 rng(11);
    const auto h = sample_channel_matrix(4, 2, 1.0, 1.0, rng);
    const auto r = decompose(h);
    Eigen::VectorXcd x(2);
    x << std::complex<double>(0.3, -1.2), std::complex<double>(2.0, 0.5);
    const Eigen::VectorXcd y = r.equivalent_output(x);
    for (int i = 0; i < r.rank; ++i)
        EXPECT_LT(std::abs(y(i) - r.singular_values[static_cast<std::size_t>(i)] * x(i)), 1e-12);
}

TEST(Decompose, RejectsNonFinite) {
    ComplexMatrix h = ComplexMatrix::Identity(2, 2);
    h(0, 1) = std::complex<double>(NAN, 0.0);
    EXPECT_THROW(decompose(h), std::invalid_argument);
}

TEST(Nakagami, UnitMeanPower) {
    const auto g = sample_eigenchannel_gains(1'000'000, 1.0, 1.0, std::uint64_t{3});
    double s = 0.0;
    for (double v : g) s += v * v;
    EXPECT_NEAR(s / g.size(), 1.0, 0.01);
}

TEST(Nakagami, RayleighAmplitudeMoments) {
    // Rayleigh with E[r^2] = 1: E[r] = sqrt(pi)/2, P(r > 1) = exp(-1).
    const auto g = sample_eigenchannel_gains(200'000, 1.0, 1.0, std::uint64_t{5});
    double s = 0.0, above = 0.0;
    for (double v : g) {
        s += v;
        above += v > 1.0;
    }
    EXPECT_NEAR(s / g.size(), std::sqrt(std::numbers::pi) / 2.0, 0.005);
    EXPECT_NEAR(above / g.size(), std::exp(-1.0), 0.005);
}

TEST(Nakagami, LargeShapeHasSmallVariance) {
    const auto g = sample_eigenchannel_gains(100'000, 50.0, 1.0, std::uint64_t{9});
    double s = 0.0, s2 = 0.0;
    for (double v : g) {
        s += v * v;
        s2 += v * v * v * v;
    }
    const double n = static_cast<double>(g.size());
    const double var = s2 / n - (s / n) * (s / n);
    EXPECT_LT(var, 0.05);
    EXPECT_NEAR(var, 1.0 / 50.0, 0.002);
}

TEST(Nakagami, DeterministicUnderSeed) {
    EXPECT_EQ(sample_eigenchannel_gains(16, 2.0, 1.0, std::uint64_t{42}),
              sample_eigenchannel_gains(16, 2.0, 1.0, std::uint64_t{42}));
}

TEST(Nakagami, ShapeBelowHalfRejected) {
    EXPECT_THROW(sample_eigenchannel_gains(4, 0.4, 1.0, std::uint64_t{1}), std::invalid_argument);
}

TEST(Eigenvalues, FourByTwoRayleighMeans) {
    // E[lambda_max] and E[lambda_min] of a 4x2 complex Wishart matrix with unit
    // variance entries: 6.1875 and 1.8125 (closed form for n_min = 2, n_max = 4).
    std::mt19937_64 rng(21);
    const int draws = 40000;
    double l1 = 0.0, l2 = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto r = decompose(sample_channel_matrix(4, 2, 1.0, 1.0, rng));
        l1 += r.singular_values[0] * r.singular_values[0];
        l2 += r.singular_values[1] * r.singular_values[1];
    }
    EXPECT_NEAR(l1 / draws, 6.1875, 0.05);
    EXPECT_NEAR(l2 / draws, 1.8125, 0.03);
}

TEST(Mimo, StreamsAndDiversity) {
    EXPECT_EQ((MimoConfig{2, 4, MimoMode::Multiplex, 1}.streams()), 2);
    EXPECT_EQ((MimoConfig{2, 2, MimoMode::Diversity, 2}.streams()), 1);
    EXPECT_EQ((MimoConfig{2, 2, MimoMode::Diversity, 2}.diversity_order()), 4);
    EXPECT_THROW((MimoConfig{0, 2, MimoMode::Multiplex, 1}.validate()), std::invalid_argument);
}

TEST(Mcs, TableRows) {
    EXPECT_EQ(select_mcs(7.0)->name, "16QAM R=3/4");
    EXPECT_DOUBLE_EQ(select_mcs(7.0)->rate_mbps_per_mru, 55.911);
    EXPECT_FALSE(select_mcs(2.0).has_value());
    EXPECT_EQ(select_mcs(10.6)->modulation_bits, 6);
    EXPECT_DOUBLE_EQ(select_mcs(10.6)->rate_mbps_per_mru, 83.867);
}

TEST(Mcs, Capacities) {
    EXPECT_NEAR(link_capacity(MimoMode::Multiplex, kMcs16Qam34), 111.822, 1e-9);
    EXPECT_NEAR(link_capacity(MimoMode::Diversity, kMcsQpsk34), 27.956, 1e-9);
    EXPECT_NEAR(link_capacity(MimoMode::Multiplex, kMcsTable[0]), 37.274, 1e-9);
    EXPECT_EQ(link_capacity(MimoMode::Multiplex, std::optional<McsEntry>{}), 0.0);
}

TEST(Mcs, TableIsSortedAndValid) {
    EXPECT_NO_THROW(validate_mcs_table(kMcsTable));
    std::array<McsEntry, 2> bad{kMcsTable[2], kMcsTable[1]};
    EXPECT_THROW(validate_mcs_table(bad), std::invalid_argument);
}

TEST(Mcs, SelectionIsMonotone) {
    double prev = 0.0;
    for (double db = -5.0; db <= 15.0; db += 0.01) {
        const double r = link_capacity(MimoMode::Diversity, select_mcs(db));
        EXPECT_GE(r, prev);
        prev = r;
    }
}

TEST(Mcs, CapLimitsRate) {
    EXPECT_EQ(*select_mcs_capped(12.0, kMcsQpsk34), kMcsQpsk34);
    EXPECT_EQ(*select_mcs_capped(4.0, kMcs16Qam34), kMcsTable[1]);
    EXPECT_FALSE(select_mcs_capped(1.0, kMcs16Qam34).has_value());
}

TEST(SinrCurve, CommonDrawsDecreaseWithSpeed) {
    const OfdmConfig o;
    const ChannelParams ch;
    const std::vector<double> speeds{0, 100, 200, 300, 400, 500};
    const auto c = sinr_speed_curve(MimoConfig{2, 4, MimoMode::Multiplex, 1}, ch, o, dbm_to_watt(46), speeds, 2000, 1);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i].mean_sinr, c[i - 1].mean_sinr);
}

TEST(SinrCurve, DiversityFourBeatsSingleAntenna) {
    const OfdmConfig o;
    const ChannelParams ch;
    const std::vector<double> speeds{100, 300, 500};
    const auto d = sinr_speed_curve(MimoConfig{2, 2, MimoMode::Diversity, 2}, ch, o, dbm_to_watt(46), speeds, 10000, 2);
    const auto s = sinr_speed_curve(MimoConfig{1, 1, MimoMode::Multiplex, 1}, ch, o, dbm_to_watt(46), speeds, 10000, 3);
    for (std::size_t i = 0; i < speeds.size(); ++i) EXPECT_GT(d[i].mean_sinr, s[i].mean_sinr);
}
