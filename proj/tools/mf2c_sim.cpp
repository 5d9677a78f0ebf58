#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "mf2c/error.hpp"
#include "mf2c/harness.hpp"

namespace {

std::vector<mf2c::PresetName> parse_presets(const std::string& text) {
    if (text == "all") return {std::begin(mf2c::kAllPresets), std::end(mf2c::kAllPresets)};
    std::vector<mf2c::PresetName> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) out.push_back(mf2c::preset_from_string(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw mf2c::Error(mf2c::Errc::InvalidConfig, "no preset given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fog-to-cloud orchestration simulator: airport proximity workload under four deployments"};
    std::string preset_arg = "all";
    std::string scenario_path;
    std::string calibration_path;
    std::uint64_t seed = 1;
    std::vector<double> rates;
    double duration = 0.0;
    std::string out_dir = "out";
    bool export_heatmap = false;
    double clusters_eps = 2.0;
    unsigned threads = 0;

    app.add_option("--preset", preset_arg, "Fog1, CloudOnly, Mf2c1Fog, Mf2c2Fog, a comma list, or all")
        ->capture_default_str();
    app.add_option("--scenario", scenario_path, "JSON scenario parameters (map, population, noise)")
        ->check(CLI::ExistingFile);
    app.add_option("--calibration", calibration_path, "JSON calibration profile; built-in one if absent")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed for the workload")->capture_default_str();
    app.add_option("--rates", rates, "Request rates per second, strictly increasing")->delimiter(',');
    app.add_option("--duration", duration, "Simulated seconds per rate point");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--export-heatmap", export_heatmap, "Write heatmap.csv/.pgm and clusters.jsonl");
    app.add_option("--clusters-eps", clusters_eps, "Linking distance for crowd clusters in meters")
        ->capture_default_str();
    app.add_option("--threads", threads, "Parallel rate points, 0 = all cores")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        mf2c::CalibrationProfile cal;
        if (!calibration_path.empty()) cal = mf2c::calibration_from_json(mf2c::read_json_file(calibration_path));
        mf2c::ScenarioParams params;
        params.travelers = cal.travelers;
        if (!scenario_path.empty()) {
            const auto doc = mf2c::read_json_file(scenario_path);
            const bool has_travelers = doc.contains("travelers");
            params = mf2c::scenario_params_from_json(doc);
            if (!has_travelers) params.travelers = cal.travelers;
        }
        mf2c::SweepSpec sweep{rates.empty() ? cal.rates : rates, duration > 0.0 ? duration : cal.duration_s, seed};
        sweep.validate();

        std::optional<mf2c::AnalyticsOptions> analytics;
        if (export_heatmap) {
            analytics.emplace();
            analytics->clusters_eps_m = clusters_eps;
        }

        std::vector<mf2c::ExperimentResult> results;
        for (mf2c::PresetName name : parse_presets(preset_arg)) {
            const auto preset = mf2c::make_preset(name, cal, params.map);
            // Position analytics do not depend on the preset; compute them once.
            results.push_back(mf2c::run_experiment(preset, sweep, params, cal, threads,
                                                   results.empty() ? analytics : std::nullopt));
        }
        mf2c::write_outputs(results, cal, out_dir);
        if (export_heatmap) mf2c::export_heatmap(results.front(), out_dir);

        fmt::print("{:>10}", "rate/s");
        for (const auto& r : results) fmt::print(" {:>12}", mf2c::to_string(r.preset));
        fmt::print("\n");
        for (std::size_t i = 0; i < sweep.rates.size(); ++i) {
            fmt::print("{:>10g}", sweep.rates[i]);
            for (const auto& r : results) fmt::print(" {:>12.2f}", r.points[i].mean_response_ms);
            fmt::print("\n");
        }
        const auto sum = mf2c::summary(results, cal);
        for (const auto& [key, value] : sum.at("improvement").items()) {
            fmt::print("{}: {:.3f}\n", key, value.get<double>());
        }
        fmt::print("outputs written to {}\n", out_dir);
    } catch (const mf2c::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
