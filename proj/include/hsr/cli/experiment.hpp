#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hsr/allocator/desk.hpp"
#include "hsr/channel/sinr.hpp"
#include "hsr/cli/spec.hpp"
#include "hsr/sim/simulator.hpp"

namespace hsr::cli {

struct RunDescriptor {
    double speed_kmh = 0.0;
    admission::Scheme scheme = admission::Scheme::AdaptiveReservation;
    std::uint64_t seed = 0;

    friend bool operator<(const RunDescriptor& a, const RunDescriptor& b) {
        return std::tuple(a.speed_kmh, a.scheme, a.seed) < std::tuple(b.speed_kmh, b.scheme, b.seed);
    }
    friend bool operator==(const RunDescriptor&, const RunDescriptor&) = default;
};

inline std::string describe(const RunDescriptor& d) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "speed=%g scheme=%s seed=%llu", d.speed_kmh,
                  std::string(admission::to_string(d.scheme)).c_str(), static_cast<unsigned long long>(d.seed));
    return buf;
}

/// Speeds x schemes x seeds, in that nesting order.
inline std::vector<RunDescriptor> run_descriptors(const ExperimentSpec& spec) {
    std::vector<RunDescriptor> out;
    for (double v : spec.speeds_kmh)
        for (auto s : spec.schemes)
            for (auto seed : spec.seeds) out.push_back({v, s, seed});
    return out;
}

inline ScenarioConfig scenario_for(const ScenarioConfig& base, const RunDescriptor& d) {
    ScenarioConfig s = base;
    s.speed_kmh = d.speed_kmh;
    s.policy.scheme = d.scheme;
    s.rng_seed = d.seed;
    return s;
}

class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Applies `job` to every index on `jobs` worker threads. Results land in
/// their own slot, so the outcome does not depend on scheduling. The error of
/// the lowest failing index is rethrown.
template <class Result, class Job>
std::vector<Result> fan_out(std::size_t count, unsigned jobs, Job job) {
    std::vector<Result> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                results[i] = job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

inline std::map<RunDescriptor, sim::SimulationReport> run_all(const ScenarioConfig& base,
                                                              const std::vector<RunDescriptor>& runs, unsigned jobs,
                                                              const std::function<void(const RunDescriptor&)>& progress = {}) {
    std::mutex log;
    auto reports = fan_out<sim::SimulationReport>(runs.size(), jobs, [&](std::size_t i) {
        try {
            auto r = sim::run(scenario_for(base, runs[i]));
            if (progress) {
                std::lock_guard lock(log);
                progress(runs[i]);
            }
            return r;
        } catch (const std::exception& e) {
            throw RunError(describe(runs[i]) + ": " + e.what());
        }
    });
    std::map<RunDescriptor, sim::SimulationReport> out;
    for (std::size_t i = 0; i < runs.size(); ++i) out.emplace(runs[i], std::move(reports[i]));
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != header_.size()) throw std::logic_error("csv row width does not match header");
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << str();
        if (!f) throw std::runtime_error("failed writing " + path.string());
    }

    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Tables

/// Antenna configurations compared in the SINR-versus-speed figure.
inline std::vector<std::pair<std::string, channel::MimoConfig>> sinr_configs(const ScenarioConfig& s) {
    return {{"2x4", s.mimo},
            {"1x2", channel::MimoConfig{1, 2, channel::MimoMode::Multiplex, 1}},
            {"2x2", s.handover_mimo},
            {"1x1", s.baseline_mimo}};
}

struct SinrPoint {
    double speed_kmh;
    std::string config;
    double mean_sinr;  // linear, averaged over seeds and fading draws
    double stderr_sinr;
};

inline constexpr std::uint32_t kSinrStreamTag = 0x73696e72u;

inline std::vector<SinrPoint> sinr_table(const ExperimentSpec& spec) {
    const auto& s = spec.scenario;
    std::vector<SinrPoint> out;
    for (const auto& [name, cfg] : sinr_configs(s)) {
        std::vector<double> sum(spec.speeds_kmh.size(), 0.0), var(spec.speeds_kmh.size(), 0.0);
        for (auto seed : spec.seeds) {
            auto stream = sim::make_stream(seed, kSinrStreamTag);
            const auto curve =
                channel::sinr_speed_curve(cfg, s.channel, s.ofdm, s.tx_power_w(), spec.speeds_kmh, s.fading_draws, stream());
            for (std::size_t i = 0; i < curve.size(); ++i) {
                sum[i] += curve[i].mean_sinr;
                var[i] += curve[i].stderr_sinr * curve[i].stderr_sinr;
            }
        }
        const double n = static_cast<double>(spec.seeds.size());
        for (std::size_t i = 0; i < spec.speeds_kmh.size(); ++i)
            out.push_back({spec.speeds_kmh[i], name, sum[i] / n, std::sqrt(var[i]) / n});
    }
    return out;
}

struct PowerPoint {
    double speed_kmh;
    std::optional<double> exact_w;   // seed mean; unset if any seed was infeasible or too large
    std::optional<double> greedy_w;
};

inline std::vector<PowerPoint> power_table(const ExperimentSpec& spec, unsigned jobs = 1) {
    const auto& s = spec.scenario;
    const allocator::ExactLimits lim;
    const bool exact_ok = s.allocation.subcarriers * s.allocation.slots <= lim.max_cells &&
                          s.allocation.users * s.allocation.antennas <= lim.max_user_antennas;
    const auto curves = fan_out<std::vector<allocator::PowerSample>>(spec.seeds.size(), jobs, [&](std::size_t i) {
        return allocator::power_speed_curve(s, spec.speeds_kmh, spec.seeds[i], exact_ok);
    });
    std::vector<PowerPoint> out;
    for (std::size_t v = 0; v < spec.speeds_kmh.size(); ++v) {
        PowerPoint p{spec.speeds_kmh[v], 0.0, 0.0};
        for (const auto& c : curves) {
            if (p.exact_w && c[v].exact_w) *p.exact_w += *c[v].exact_w;
            else p.exact_w.reset();
            if (p.greedy_w && c[v].greedy_w) *p.greedy_w += *c[v].greedy_w;
            else p.greedy_w.reset();
        }
        const double n = static_cast<double>(curves.size());
        if (p.exact_w) *p.exact_w /= n;
        if (p.greedy_w) *p.greedy_w /= n;
        out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment

/// Runs the sweep plus whatever the selected figure recipes need, and writes
/// every CSV under `spec.out_dir`. Returns the files written.
inline std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec, unsigned jobs = 1,
                                                         const std::function<void(const std::string&)>& log = {}) {
    spec.validate();
    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    using admission::Scheme;
    const std::set<Figure> figs(spec.figures.begin(), spec.figures.end());

    std::vector<Scheme> figure_schemes;
    if (figs.count(Figure::Fig5)) figure_schemes.push_back(Scheme::AdaptiveReservation);
    if (figs.count(Figure::Fig6) || figs.count(Figure::Fig7)) figure_schemes.push_back(Scheme::Priority);
    if (figs.count(Figure::Fig7) || figs.count(Figure::Fig8)) figure_schemes.push_back(Scheme::PriorityOverhead);
    if (figs.count(Figure::Fig8)) figure_schemes.push_back(Scheme::Baseline);

    const auto sweep = run_descriptors(spec);
    std::set<RunDescriptor> all(sweep.begin(), sweep.end());
    for (double v : spec.speeds_kmh)
        for (auto sc : figure_schemes)
            for (auto seed : spec.seeds) all.insert({v, sc, seed});
    const std::vector<RunDescriptor> runs(all.begin(), all.end());

    std::function<void(const RunDescriptor&)> progress;
    if (log) progress = [&](const RunDescriptor& d) { log("done " + describe(d)); };
    const auto reports = run_all(spec.scenario, runs, jobs, progress);

    std::vector<fs::path> written;
    auto emit = [&](const CsvTable& t, const char* name) {
        const auto path = spec.out_dir / name;
        t.write(path);
        written.push_back(path);
    };

    CsvTable access({"speed_kmh", "scheme", "seed", "class", "origin", "accepted", "total", "ar"});
    CsvTable access_zone({"speed_kmh", "scheme", "seed", "zone", "class", "origin", "accepted", "total", "ar"});
    for (const auto& d : sweep) {
        const auto& r = reports.at(d);
        const std::vector<std::string> key{fmt_num(d.speed_kmh), std::string(admission::to_string(d.scheme)),
                                           std::to_string(d.seed)};
        for (auto k : admission::kAllKinds)
            for (auto o : admission::kAllOrigins) {
                const auto& c = r.stats.at(k, o);
                access.add({key[0], key[1], key[2], std::string(admission::to_string(k)),
                            std::string(admission::to_string(o)), std::to_string(c.accepted), std::to_string(c.total),
                            fmt_num(c.ar())});
            }
        for (auto z : {sim::Zone::Normal, sim::Zone::Overlap})
            for (auto k : admission::kAllKinds)
                for (auto o : admission::kAllOrigins) {
                    const auto& c = r.zone_stats(z).at(k, o);
                    access_zone.add({key[0], key[1], key[2], std::string(sim::to_string(z)),
                                     std::string(admission::to_string(k)), std::string(admission::to_string(o)),
                                     std::to_string(c.accepted), std::to_string(c.total), fmt_num(c.ar())});
                }
    }
    emit(access, "access.csv");
    emit(access_zone, "access_zone.csv");

    const auto sinr = sinr_table(spec);
    CsvTable sinr_csv({"speed_kmh", "config", "sinr_db"});
    for (const auto& p : sinr) sinr_csv.add({fmt_num(p.speed_kmh), p.config, fmt_num(channel::linear_to_db(p.mean_sinr))});
    emit(sinr_csv, "sinr.csv");

    const auto power = power_table(spec, jobs);
    CsvTable power_csv({"speed_kmh", "solver", "total_power_w"});
    for (const auto& p : power) {
        if (p.exact_w) power_csv.add({fmt_num(p.speed_kmh), "exact", fmt_num(*p.exact_w)});
        if (p.greedy_w) power_csv.add({fmt_num(p.speed_kmh), "greedy", fmt_num(*p.greedy_w)});
    }
    emit(power_csv, "power.csv");

    // Seed-mean AR of one (speed, scheme, zone-or-all, class, origin) cell.
    auto mean_ar = [&](double v, Scheme sc, std::optional<sim::Zone> z, admission::ServiceKind k, admission::Origin o) {
        double s = 0.0;
        for (auto seed : spec.seeds) {
            const auto& r = reports.at({v, sc, seed});
            s += z ? r.zone_stats(*z).ar(k, o) : r.stats.ar(k, o);
        }
        return s / static_cast<double>(spec.seeds.size());
    };
    auto scheme_figure = [&](std::initializer_list<Scheme> schemes, const char* name) {
        CsvTable t({"speed_kmh", "scheme", "class", "origin", "ar"});
        for (double v : spec.speeds_kmh)
            for (auto sc : schemes)
                for (auto k : admission::kAllKinds)
                    for (auto o : admission::kAllOrigins)
                        t.add({fmt_num(v), std::string(admission::to_string(sc)), std::string(admission::to_string(k)),
                               std::string(admission::to_string(o)), fmt_num(mean_ar(v, sc, std::nullopt, k, o))});
        emit(t, name);
    };

    if (figs.count(Figure::Fig3)) {
        CsvTable t({"speed_kmh", "2x4", "1x2", "2x2", "1x1"});
        for (std::size_t i = 0; i < spec.speeds_kmh.size(); ++i) {
            std::vector<std::string> row{fmt_num(spec.speeds_kmh[i])};
            for (std::size_t c = 0; c < 4; ++c)
                row.push_back(fmt_num(channel::linear_to_db(sinr[c * spec.speeds_kmh.size() + i].mean_sinr)));
            t.add(std::move(row));
        }
        emit(t, "fig3_sinr.csv");
    }
    if (figs.count(Figure::Fig4)) {
        CsvTable t({"speed_kmh", "exact", "greedy"});
        for (const auto& p : power)
            t.add({fmt_num(p.speed_kmh), p.exact_w ? fmt_num(*p.exact_w) : "", p.greedy_w ? fmt_num(*p.greedy_w) : ""});
        emit(t, "fig4_power.csv");
    }
    if (figs.count(Figure::Fig5)) {
        CsvTable t({"speed_kmh", "zone", "class", "origin", "ar"});
        for (double v : spec.speeds_kmh)
            for (auto z : {sim::Zone::Overlap, sim::Zone::Normal})
                for (auto k : admission::kAllKinds)
                    for (auto o : admission::kAllOrigins)
                        t.add({fmt_num(v), std::string(sim::to_string(z)), std::string(admission::to_string(k)),
                               std::string(admission::to_string(o)),
                               fmt_num(mean_ar(v, Scheme::AdaptiveReservation, z, k, o))});
        emit(t, "fig5_access.csv");
    }
    if (figs.count(Figure::Fig6)) scheme_figure({Scheme::Priority}, "fig6_access.csv");
    if (figs.count(Figure::Fig7)) scheme_figure({Scheme::Priority, Scheme::PriorityOverhead}, "fig7_access.csv");
    if (figs.count(Figure::Fig8)) scheme_figure({Scheme::PriorityOverhead, Scheme::Baseline}, "fig8_access.csv");
    return written;
}

}  // namespace hsr::cli
