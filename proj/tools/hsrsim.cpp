#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <thread>

#include "hsr/cli/experiment.hpp"
#include "hsr/cli/spec.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 5;

std::vector<double> parse_speeds(const std::string& csv) {
    std::vector<double> out;
    std::stringstream in(csv);
    for (std::string item; std::getline(in, item, ',');) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad speed '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-speed-rail QoS simulator"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "Run the experiment described by a spec file");

    std::string spec_path, out_dir, seeds, speeds, allocator;
    std::vector<std::string> schemes, figures;
    bool quiet = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    run->add_option("spec", spec_path, "YAML spec file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seeds", seeds, "Seed range a..b");
    run->add_option("--speeds", speeds, "Comma-separated speeds in km/h");
    run->add_option("--scheme", schemes, "Admission scheme(s)")
        ->check(CLI::IsMember({"reservation", "priority", "priority-overhead", "baseline"}));
    run->add_option("--allocator", allocator, "Allocator")->check(CLI::IsMember({"exact", "greedy"}));
    run->add_option("--fig", figures, "Figure recipe(s) fig3..fig8")
        ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}));
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "Suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    using namespace hsr;
    cli::ExperimentSpec spec;
    try {
        spec = cli::parse_spec(spec_path);
        if (!out_dir.empty()) spec.out_dir = out_dir;
        if (!seeds.empty()) spec.seeds = cli::parse_seed_range(seeds);
        if (!speeds.empty()) spec.speeds_kmh = parse_speeds(speeds);
        if (!schemes.empty()) {
            spec.schemes.clear();
            for (const auto& s : schemes) spec.schemes.push_back(*admission::parse_scheme(s));
        }
        if (!allocator.empty())
            spec.scenario.allocator_mode = allocator == "exact" ? AllocatorMode::Exact : AllocatorMode::Greedy;
        for (const auto& f : figures) spec.figures.push_back(*cli::parse_figure(f));
        spec.validate();
    } catch (const cli::SpecError& e) {
        std::cerr << "hsrsim: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::invalid_argument& e) {
        std::cerr << "hsrsim: " << e.what() << '\n';
        return static_cast<int>(cli::SpecErrorKind::Constraint);
    }

    try {
        std::function<void(const std::string&)> log;
        if (!quiet) log = [](const std::string& msg) { std::cerr << msg << '\n'; };
        const auto files = cli::run_experiment(spec, jobs, log);
        if (!quiet)
            for (const auto& f : files) std::cout << f.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "hsrsim: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
