#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "hsr/admission/types.hpp"
#include "hsr/scenario.hpp"

namespace hsr::cli {

enum class Figure { Fig3 = 3, Fig4, Fig5, Fig6, Fig7, Fig8 };

inline std::string to_string(Figure f) { return "fig" + std::to_string(static_cast<int>(f)); }

inline std::optional<Figure> parse_figure(std::string_view s) {
    for (int i = 3; i <= 8; ++i)
        if (s == "fig" + std::to_string(i)) return static_cast<Figure>(i);
    return std::nullopt;
}

struct ExperimentSpec {
    ScenarioConfig scenario;
    std::vector<double> speeds_kmh{300.0};
    std::vector<admission::Scheme> schemes{admission::Scheme::AdaptiveReservation};
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path out_dir = "out";
    std::vector<Figure> figures;

    void validate() const {
        scenario.validate();
        if (speeds_kmh.empty()) throw std::invalid_argument("sweep.speeds must not be empty");
        for (double v : speeds_kmh)
            if (!(v >= 0)) throw std::invalid_argument("sweep.speeds entries must be >= 0");
        if (schemes.empty()) throw std::invalid_argument("sweep.schemes must not be empty");
        if (seeds.empty()) throw std::invalid_argument("sweep.seeds must not be empty");
    }
};

enum class SpecErrorKind { MissingFile = 2, Malformed = 3, Constraint = 4 };

class SpecError : public std::runtime_error {
public:
    SpecError(SpecErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    SpecErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    SpecErrorKind kind_;
};

/// "a..b" (inclusive) or a single integer.
inline std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    auto to_u64 = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw std::invalid_argument("seed range '" + text + "' must look like a..b");
        return std::stoull(s);
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {to_u64(text)};
    const auto lo = to_u64(text.substr(0, dots));
    const auto hi = to_u64(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range '" + text + "' is empty");
    if (hi - lo >= 1'000'000) throw std::invalid_argument("seed range '" + text + "' is too large");
    std::vector<std::uint64_t> out;
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
}

namespace detail {

class Reader {
public:
    explicit Reader(const YAML::Node& root) : root_(root) {}

    template <class T>
    void get(const YAML::Node& node, const std::string& path, const char* key, T& out) {
        seen(path, key);
        const auto v = node[key];
        if (!v) return;
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            throw SpecError(SpecErrorKind::Malformed, "key '" + join(path, key) + "' has the wrong type");
        }
    }

    YAML::Node child(const YAML::Node& node, const std::string& path, const char* key) {
        seen(path, key);
        const auto v = node[key];
        if (v && !v.IsMap()) throw SpecError(SpecErrorKind::Malformed, "key '" + join(path, key) + "' must be a mapping");
        return v;
    }

    /// Every key in `node` must have been consumed.
    void finish(const YAML::Node& node, const std::string& path) {
        if (!node || !node.IsMap()) return;
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!known_.count(join(path, key.c_str())))
                throw SpecError(SpecErrorKind::Constraint, "unknown key '" + join(path, key.c_str()) + "'");
        }
    }

    static std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

    void seen(const std::string& path, const char* key) { known_.insert(join(path, key)); }

private:
    YAML::Node root_;
    std::set<std::string> known_;
};

inline void read_scenario(Reader& r, const YAML::Node& n, ScenarioConfig& s) {
    r.get(n, "", "speed_kmh", s.speed_kmh);
    r.get(n, "", "cell_radius_m", s.cell_radius_m);
    r.get(n, "", "overlap_m", s.overlap_m);
    r.get(n, "", "tx_power_dbm", s.tx_power_dbm);
    r.get(n, "", "sim_duration_s", s.sim_duration_s);
    r.get(n, "", "seed", s.rng_seed);
    r.get(n, "", "epoch_s", s.epoch_s);
    r.get(n, "", "fading_draws", s.fading_draws);
    std::string mode{to_string(s.allocator_mode)};
    r.get(n, "", "allocator", mode);
    if (mode == "exact") s.allocator_mode = AllocatorMode::Exact;
    else if (mode == "greedy") s.allocator_mode = AllocatorMode::Greedy;
    else throw SpecError(SpecErrorKind::Constraint, "allocator must be 'exact' or 'greedy'");
    std::string scheme{admission::to_string(s.policy.scheme)};
    r.get(n, "", "scheme", scheme);
    if (auto v = admission::parse_scheme(scheme)) s.policy.scheme = *v;
    else throw SpecError(SpecErrorKind::Constraint, "scheme '" + scheme + "' is not recognised");

    if (auto o = r.child(n, "", "ofdm")) {
        r.get(o, "ofdm", "bandwidth_hz", s.ofdm.bandwidth_hz);
        r.get(o, "ofdm", "n_subcarriers", s.ofdm.n_subcarriers);
        r.get(o, "ofdm", "carrier_hz", s.ofdm.carrier_hz);
        double psd_dbm_hz = 0.0;
        r.get(o, "ofdm", "noise_psd_dbm_hz", psd_dbm_hz);
        if (o["noise_psd_dbm_hz"]) s.ofdm.noise_psd = channel::dbm_to_watt(psd_dbm_hz);
        r.get(o, "ofdm", "wave_speed_mps", s.ofdm.wave_speed);
        r.finish(o, "ofdm");
    }
    s.ofdm.symbol_period_s = s.ofdm.n_subcarriers / s.ofdm.bandwidth_hz;

    if (auto c = r.child(n, "", "channel")) {
        r.get(c, "channel", "nakagami_m", s.channel.nakagami_m);
        r.get(c, "channel", "mean_gain_db", s.channel.mean_gain_db);
        r.finish(c, "channel");
    }

    if (auto sv = r.child(n, "", "services")) {
        for (auto& svc : s.services) {
            const std::string name{admission::to_string(svc.kind)};
            if (auto c = r.child(sv, "services", name.c_str())) {
                const std::string path = "services." + name;
                r.get(c, path, "rate_kbps", svc.rate_kbps);
                r.get(c, path, "arrival_rate_hz", svc.arrival_rate_hz);
                r.get(c, path, "mean_holding_s", svc.mean_holding_s);
                r.finish(c, path);
            }
        }
        r.finish(sv, "services");
    }

    const auto scheme_now = s.policy.scheme;
    s.policy = admission::ReservationPolicy::for_overlap(s.overlap_m);
    s.policy.scheme = scheme_now;
    if (auto p = r.child(n, "", "policy")) {
        double ho = 0.0;
        r.get(p, "policy", "ho_threshold_kbps", ho);
        if (p["ho_threshold_kbps"]) s.policy.ho_threshold_kbps = ho;
        r.get(p, "policy", "d1_m", s.policy.d1_m);
        r.get(p, "policy", "d2_m", s.policy.d2_m);
        r.get(p, "policy", "continue_on_reject", s.policy.continue_on_reject);
        r.get(p, "policy", "normal_zone_beta", s.policy.normal_zone_beta);
        r.finish(p, "policy");
    }

    if (auto o = r.child(n, "", "overhead")) {
        r.get(o, "overhead", "header_bits", s.overhead.header_bits);
        r.get(o, "overhead", "check_factor", s.overhead.check_factor);
        r.get(o, "overhead", "symbols_per_packet", s.overhead.symbols_per_packet);
        r.finish(o, "overhead");
    }

    if (auto a = r.child(n, "", "allocation")) {
        r.get(a, "allocation", "users", s.allocation.users);
        r.get(a, "allocation", "subcarriers", s.allocation.subcarriers);
        r.get(a, "allocation", "antennas", s.allocation.antennas);
        r.get(a, "allocation", "slots", s.allocation.slots);
        r.get(a, "allocation", "target_ber", s.allocation.target_ber);
        r.get(a, "allocation", "user_demand_kbps", s.allocation.user_demand_kbps);
        r.finish(a, "allocation");
    }
}

}  // namespace detail

/// Reads an experiment from YAML text. Omitted keys keep their defaults.
inline ExperimentSpec parse_spec_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw SpecError(SpecErrorKind::Malformed, std::string("malformed spec: ") + e.what());
    }
    ExperimentSpec spec;
    if (root.IsNull()) {
        spec.speeds_kmh = {spec.scenario.speed_kmh};
        spec.seeds = {spec.scenario.rng_seed};
        return spec;
    }
    if (!root.IsMap()) throw SpecError(SpecErrorKind::Malformed, "spec root must be a mapping");

    detail::Reader r(root);
    detail::read_scenario(r, root, spec.scenario);

    spec.speeds_kmh = {spec.scenario.speed_kmh};
    spec.seeds = {spec.scenario.rng_seed};
    spec.schemes = {spec.scenario.policy.scheme};
    if (auto sw = r.child(root, "", "sweep")) {
        r.get(sw, "sweep", "speeds", spec.speeds_kmh);
        std::vector<std::string> schemes;
        r.get(sw, "sweep", "schemes", schemes);
        if (sw["schemes"]) {
            spec.schemes.clear();
            for (const auto& name : schemes) {
                auto v = admission::parse_scheme(name);
                if (!v) throw SpecError(SpecErrorKind::Constraint, "sweep.schemes: unknown scheme '" + name + "'");
                spec.schemes.push_back(*v);
            }
        }
        if (const auto seeds = sw["seeds"]; seeds && seeds.IsScalar()) {
            r.seen("sweep", "seeds");
            try {
                spec.seeds = parse_seed_range(seeds.as<std::string>());
            } catch (const std::invalid_argument& e) {
                throw SpecError(SpecErrorKind::Constraint, std::string("sweep.seeds: ") + e.what());
            }
        } else {
            r.get(sw, "sweep", "seeds", spec.seeds);
        }
        r.finish(sw, "sweep");
    }

    if (auto out = r.child(root, "", "outputs")) {
        std::string dir = spec.out_dir.string();
        r.get(out, "outputs", "dir", dir);
        spec.out_dir = dir;
        std::vector<std::string> figs;
        r.get(out, "outputs", "figures", figs);
        for (const auto& f : figs) {
            auto v = parse_figure(f);
            if (!v) throw SpecError(SpecErrorKind::Constraint, "outputs.figures: unknown figure '" + f + "'");
            spec.figures.push_back(*v);
        }
        r.finish(out, "outputs");
    }
    r.finish(root, "");

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw SpecError(SpecErrorKind::Constraint, e.what());
    }
    return spec;
}

inline ExperimentSpec parse_spec(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw SpecError(SpecErrorKind::MissingFile, "spec file not found: " + path.string());
    std::ifstream in(path);
    if (!in) throw SpecError(SpecErrorKind::MissingFile, "cannot open spec file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

}  // namespace hsr::cli
