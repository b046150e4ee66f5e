#include "qrng/cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qrng/bitio.hpp"
#include "qrng/config_json.hpp"
#include "qrng/errors.hpp"
#include "qrng/experiments.hpp"
#include "qrng/extract.hpp"
#include "qrng/report_json.hpp"
#include "qrng/simulate.hpp"
#include "qrng/stattest.hpp"

namespace qrng {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

void check_writable(const fs::path& path) {
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) throw IoError("output directory " + parent.string() + " does not exist");
    if (::access(parent.c_str(), W_OK) != 0) throw IoError("output directory " + parent.string() + " is not writable");
    if (fs::exists(path, ec) && ::access(path.c_str(), W_OK) != 0) {
        throw IoError("output file " + path.string() + " is not writable");
    }
}

fs::path replace_bits_extension(const fs::path& out, const std::string& suffix) {
    fs::path p = out;
    if (p.has_extension()) p.replace_extension();
    return fs::path(p.string() + suffix);
}

// Device flags mirror DeviceConfig; only flags given on the command line override the config file.
struct DeviceFlags {
    DeviceConfig values;
    std::string scheme = "one_detector";
    std::vector<std::function<void(DeviceConfig&)>> apply;

    void add(CLI::App* app, const std::string& name, double DeviceConfig::*field, const std::string& help) {
        auto* opt = app->add_option(name, values.*field, help)->capture_default_str();
        apply.push_back([opt, field, this](DeviceConfig& c) {
            if (opt->count() > 0) c.*field = values.*field;
        });
    }

    void add(CLI::App* app, const std::string& name, double DetectorParams::*field, const std::string& help) {
        auto* opt = app->add_option(name, values.detector.*field, help)->capture_default_str();
        apply.push_back([opt, field, this](DeviceConfig& c) {
            if (opt->count() > 0) c.detector.*field = values.detector.*field;
        });
    }

    void attach(CLI::App* app) {
        add(app, "--pulse-rate-hz", &DeviceConfig::pulse_rate_hz, "LED pulse rate");
        add(app, "--mu", &DeviceConfig::mean_photons_per_pulse, "Mean detectable photons per pulse");
        add(app, "--split-to-one", &DeviceConfig::split_to_one, "Probability a photon takes the long ('1') path");
        add(app, "--path-delay-ns", &DeviceConfig::path_delay_ns, "Extra delay of the long path");
        add(app, "--window-width-ns", &DeviceConfig::window_width_ns, "Coincidence window width");
        add(app, "--window0-offset-ns", &DeviceConfig::window0_offset_ns, "Centre of the '0' window in the frame");
        add(app, "--noise-window-offset-ns", &DeviceConfig::noise_window_offset_ns, "Centre of the noise window");
        add(app, "--jitter-ns", &DeviceConfig::arrival_jitter_sigma_ns, "Gaussian arrival jitter sigma");
        add(app, "--efficiency", &DetectorParams::base_efficiency, "Detector efficiency when recovered (eta0)");
        add(app, "--recovery-ns", &DetectorParams::recovery_time_ns, "Linear recovery time after an avalanche");
        add(app, "--dark-rate-hz", &DetectorParams::dark_rate_hz, "Dark count rate per detector");
        add(app, "--afterpulse-prob", &DetectorParams::afterpulse_prob, "Afterpulse probability per avalanche");
        add(app, "--afterpulse-tau-ns", &DetectorParams::afterpulse_tau_ns, "Mean afterpulse delay");
        auto* scheme_opt = app->add_option("--scheme", scheme, "Detector scheme")
                               ->check(CLI::IsMember({"one_detector", "two_detector"}))
                               ->capture_default_str();
        apply.push_back([scheme_opt, this](DeviceConfig& c) {
            if (scheme_opt->count() > 0) c.scheme = scheme_from_string(scheme);
        });
        auto* reject_opt = app->add_flag("--reject-adjacent", values.reject_adjacent,
                                         "Drop bits whose preceding frame also yielded a bit (default: off)");
        apply.push_back([reject_opt, this](DeviceConfig& c) {
            if (reject_opt->count() > 0) c.reject_adjacent = values.reject_adjacent;
        });
    }

    void override_into(DeviceConfig& c) const {
        for (const auto& f : apply) f(c);
    }
};

struct SimulateArgs {
    std::string config;
    std::uint64_t pulses = 1'000'000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "packed";
    DeviceFlags device;
    CLI::Option* pulses_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

struct ExtractArgs {
    std::string in;
    std::string in_format = "packed";
    std::string method = "peres";
    std::string out;
    std::string format = "packed";
    std::string report;
    unsigned max_depth = 0;
    std::size_t chunk_bits = 0;
};

struct TestArgs {
    std::string in;
    std::string in_format = "packed";
    std::string report;
    std::size_t max_lag = 2000;
    double alpha = 0.01;
    double flag_sigma = 5.0;
    std::vector<std::string> tests{"all"};
    unsigned serial_m = 2;
    unsigned entropy_m = 8;
    unsigned maurer_l = 0;
    CLI::Option* tests_opt = nullptr;
};

struct ExperimentArgs {
    std::string scenario;
    std::uint64_t seed = 7;
    std::uint64_t pulses = 0;
    std::size_t max_lag = 2000;
    std::string out;
};

struct ReportArgs {
    std::string in;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    RunConfig run;
    if (!a.config.empty()) run = load_run_config(a.config);
    a.device.override_into(run.device);
    run.device.validate();
    const std::uint64_t pulses = a.pulses_opt->count() > 0 ? a.pulses : run.pulses.value_or(a.pulses);
    const std::uint64_t seed = a.seed_opt->count() > 0 ? a.seed : run.seed.value_or(a.seed);
    if (pulses < 1) throw ConfigError("--pulses must be >= 1");

    const BitFormat format = bit_format_from_string(a.format);
    const fs::path bits_path = a.out;
    const fs::path counters_path = replace_bits_extension(bits_path, ".counters.json");
    check_writable(bits_path);
    check_writable(counters_path);
    if (format == BitFormat::packed) check_writable(meta_path_for(bits_path));

    const SimulationResult result = simulate(run.device, seed, pulses);
    write_bit_file(bits_path, result.raw_bits, format);
    write_json_file(counters_path, counters_to_json(result));

    const auto& c = result.counters;
    const std::size_t bits = result.raw_bits.size();
    const double rate = static_cast<double>(bits) / static_cast<double>(pulses) * run.device.pulse_rate_hz;
    out << "simulated " << pulses << " pulses (seed " << seed << "): " << bits << " bits"
        << ", bit rate " << format_double(rate / 1e3, 5) << " kHz"
        << ", one-fraction " << (bits > 0 ? format_double(bit_fraction(result.raw_bits), 5) : "n/a")
        << ", noise fraction "
        << (c.zeros + c.ones > 0 ? format_double(noise_fraction(c), 4) : "n/a") << '\n';
    return exit_ok;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
    const ExtractorMethod method = extractor_from_string(a.method);
    const BitFormat in_format = bit_format_from_string(a.in_format);
    const BitFormat format = bit_format_from_string(a.format);
    const fs::path out_path = a.out;
    const fs::path report_path = a.report.empty() ? fs::path(a.out + ".report.json") : fs::path(a.report);
    check_writable(out_path);
    check_writable(report_path);
    if (format == BitFormat::packed) check_writable(meta_path_for(out_path));

    BitStream input;
    try {
        input = read_bit_file(a.in, in_format);
    } catch (const IoError& e) {
        // A missing input is a usage problem, not an output failure.
        throw FormatError(e.what());
    }
    std::optional<unsigned> depth;
    if (a.max_depth > 0) depth = a.max_depth;
    const Extraction result = a.chunk_bits > 0 ? extract_chunked(input, method, a.chunk_bits, depth)
                                               : extract(input, method, depth);
    write_bit_file(out_path, result.bits, format);
    write_json_file(report_path, to_json(result.report));

    const auto& r = result.report;
    out << to_string(r.method) << ": " << r.input_length << " -> " << r.output_length << " bits"
        << ", yield " << format_double(r.yield_per_input_bit, 5) << ", entropy bound "
        << format_double(r.entropy_bound, 6) << ", efficiency vs entropy "
        << format_double(r.efficiency_vs_entropy, 5) << '\n';
    return exit_ok;
}

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
    const BitFormat in_format = bit_format_from_string(a.in_format);
    const fs::path report_path = a.report.empty() ? fs::path(a.in + ".test.json") : fs::path(a.report);
    check_writable(report_path);

    BitStream input;
    try {
        input = read_bit_file(a.in, in_format);
    } catch (const IoError& e) {
        throw FormatError(e.what());
    }

    BatteryConfig cfg;
    cfg.alpha = a.alpha;
    cfg.max_lag = a.max_lag;
    cfg.flag_sigma = a.flag_sigma;
    cfg.serial_m = a.serial_m;
    cfg.entropy_m = a.entropy_m;
    if (a.maurer_l > 0) cfg.maurer_L = a.maurer_l;
    bool all = false;
    for (const auto& t : a.tests) all = all || t == "all";
    if (!all) {
        cfg.frequency = cfg.serial = cfg.runs = cfg.entropy = cfg.maurer = cfg.autocorr = false;
        for (const auto& t : a.tests) {
            if (t == "frequency") cfg.frequency = true;
            if (t == "serial") cfg.serial = true;
            if (t == "runs") cfg.runs = true;
            if (t == "entropy") cfg.entropy = true;
            if (t == "maurer") cfg.maurer = true;
            if (t == "autocorr") cfg.autocorr = true;
        }
    }

    const TestReport report = run_battery(input, cfg);
    write_json_file(report_path, to_json(report));

    for (const auto& t : report.tests) {
        out << "  " << t.name << ": " << to_string(t.verdict);
        if (t.verdict != Verdict::not_applicable) out << " (p = " << format_double(t.p_value, 4) << ")";
        out << '\n';
    }
    if (report.lag_scan) {
        out << "  autocorr: " << report.lag_scan->outliers.size() << " outlier(s) over lags 1.."
            << report.lag_scan->n_max << '\n';
    }
    out << "overall: " << (report.overall_pass ? "pass" : "fail") << '\n';

    // Explicitly requested tests must run; the default selection skips what the data cannot support.
    const auto missing = report.insufficient_tests();
    if (!missing.empty() && !all) {
        err << "not applicable (insufficient data):";
        for (const auto& name : missing) err << ' ' << name;
        err << '\n';
        return exit_usage;
    }
    if (!missing.empty()) {
        out << "skipped for insufficient data:";
        for (const auto& name : missing) out << ' ' << name;
        out << '\n';
    }
    bool any_ran = report.lag_scan.has_value();
    for (const auto& t : report.tests) any_ran = any_ran || !t.insufficient_data;
    if (!any_ran) {
        err << "no test had enough data\n";
        return exit_usage;
    }
    return report.overall_pass ? exit_ok : exit_test_fail;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
    const fs::path report_path = a.out.empty() ? fs::path(a.scenario + ".json") : fs::path(a.out);
    check_writable(report_path);
    ScenarioOptions options;
    options.seed = a.seed;
    options.max_lag = a.max_lag;
    if (a.pulses > 0) options.pulses = a.pulses;
    const ScenarioOutcome outcome = run_scenario(a.scenario, options);
    write_json_file(report_path, outcome.report);
    for (const auto& [name, ok] : outcome.report["checks"].items()) {
        out << "  " << name << ": " << (ok.get<bool>() ? "yes" : "no") << '\n';
    }
    out << a.scenario << ": property " << (outcome.property_holds ? "holds" : "does not hold") << '\n';
    return outcome.property_holds ? exit_ok : exit_test_fail;
}

void print_json_summary(const nlohmann::json& j, std::ostream& out) {
    if (j.contains("scenario")) {
        out << "scenario " << j["scenario"].get<std::string>() << " (seed " << j["seed"] << ", pulses "
            << j["pulses"] << ")\n";
        for (const auto& [name, ok] : j["checks"].items()) out << "  " << name << ": " << ok << '\n';
        out << "property holds: " << j["property_holds"] << '\n';
    } else if (j.contains("tests")) {
        out << "test report, alpha " << j["alpha"] << ", overall " << j["overall"].get<std::string>() << '\n';
        for (const auto& t : j["tests"]) {
            out << "  " << t["name"].get<std::string>() << ": " << t["verdict"].get<std::string>();
            if (!t["p_value"].is_null()) out << " (p = " << t["p_value"] << ")";
            out << '\n';
        }
        if (j.contains("lag_scan") && !j["lag_scan"].is_null()) {
            const auto& s = j["lag_scan"];
            out << "  lag scan 1.." << s["n_max"] << ": mean " << s["mean"] << ", sigma " << s["sigma"]
                << ", outliers " << s["outliers"].dump() << '\n';
        }
    } else if (j.contains("method")) {
        out << "extraction " << j["method"].get<std::string>() << ": " << j["input_length"] << " -> "
            << j["output_length"] << " bits, yield " << j["yield_per_input_bit"] << ", efficiency vs entropy "
            << j["efficiency_vs_entropy"] << '\n';
    } else if (j.contains("zeros")) {
        out << "counters: zeros " << j["zeros"] << ", ones " << j["ones"] << ", noise " << j["noise"]
            << ", ambiguous " << j["ambiguous"] << ", rejected_adjacent " << j["rejected_adjacent"] << ", pulses "
            << j["pulses"] << '\n';
    } else if (j.contains("length_bits")) {
        out << "bit file metadata: " << j["length_bits"] << " bits, origin " << j["origin"] << ", one_fraction "
            << j["one_fraction"] << '\n';
    } else {
        throw FormatError("unrecognised report layout");
    }
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
    std::ifstream in(a.in);
    if (!in) throw FormatError("cannot open " + a.in);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(a.in + ": " + e.what());
    }
    print_json_summary(j, out);
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Beamsplitter QRNG simulator, unbiasing extractors and randomness tests", "qrng"};
    app.require_subcommand(1);
    app.get_formatter()->column_width(34);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate the generator and write raw bits plus counters");
    sim_cmd->add_option("--config", sim.config, "Device/run config JSON");
    sim.pulses_opt = sim_cmd->add_option("--pulses", sim.pulses, "Number of pulse frames")->capture_default_str();
    sim.seed_opt = sim_cmd->add_option("--seed", sim.seed, "PRNG seed")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Output bit file")->required();
    sim_cmd->add_option("--format", sim.format, "Output format")
        ->check(CLI::IsMember({"packed", "ascii"}))
        ->capture_default_str();
    sim.device.attach(sim_cmd);

    ExtractArgs ex;
    auto* ex_cmd = app.add_subcommand("extract", "Unbias a bit file with von Neumann or Peres");
    ex_cmd->add_option("--in", ex.in, "Input bit file")->required();
    ex_cmd->add_option("--in-format", ex.in_format, "Input format")
        ->check(CLI::IsMember({"packed", "ascii"}))
        ->capture_default_str();
    ex_cmd->add_option("--method", ex.method, "Extractor")
        ->check(CLI::IsMember({"vn", "von_neumann", "peres"}))
        ->capture_default_str();
    ex_cmd->add_option("--out", ex.out, "Output bit file")->required();
    ex_cmd->add_option("--format", ex.format, "Output format")
        ->check(CLI::IsMember({"packed", "ascii"}))
        ->capture_default_str();
    ex_cmd->add_option("--report", ex.report, "Extraction report JSON (default: <out>.report.json)");
    ex_cmd->add_option("--max-depth", ex.max_depth, "Peres recursion depth, 0 = unbounded")->capture_default_str();
    ex_cmd->add_option("--chunk-bits", ex.chunk_bits, "Extract per chunk of this many bits, 0 = whole stream")
        ->capture_default_str();

    TestArgs ts;
    auto* ts_cmd = app.add_subcommand("test", "Run the randomness test battery on a bit file");
    ts_cmd->add_option("--in", ts.in, "Input bit file")->required();
    ts_cmd->add_option("--in-format", ts.in_format, "Input format")
        ->check(CLI::IsMember({"packed", "ascii"}))
        ->capture_default_str();
    ts_cmd->add_option("--report", ts.report, "Test report JSON (default: <in>.test.json)");
    ts_cmd->add_option("--max-lag", ts.max_lag, "Largest autocorrelation lag")->capture_default_str();
    ts_cmd->add_option("--alpha", ts.alpha, "Significance level per test")->capture_default_str();
    ts_cmd->add_option("--flag-sigma", ts.flag_sigma, "Lag-scan outlier threshold in sigma")->capture_default_str();
    ts.tests_opt = ts_cmd->add_option("--tests", ts.tests, "Comma-separated tests")
                       ->delimiter(',')
                       ->check(CLI::IsMember({"all", "frequency", "serial", "runs", "entropy", "maurer", "autocorr"}))
                       ->capture_default_str();
    ts_cmd->add_option("--serial-m", ts.serial_m, "Serial test block length")->capture_default_str();
    ts_cmd->add_option("--entropy-m", ts.entropy_m, "Entropy test block length")->capture_default_str();
    ts_cmd->add_option("--maurer-l", ts.maurer_l, "Maurer block length, 0 = auto")->capture_default_str();

    ExperimentArgs xp;
    auto* xp_cmd = app.add_subcommand("experiment", "Run a packaged reproduction scenario");
    xp_cmd->add_option("scenario", xp.scenario, "Scenario name")->required();
    xp_cmd->add_option("--seed", xp.seed, "PRNG seed")->capture_default_str();
    xp_cmd->add_option("--pulses", xp.pulses, "Pulses per run, 0 = scenario default")->capture_default_str();
    xp_cmd->add_option("--max-lag", xp.max_lag, "Largest autocorrelation lag")->capture_default_str();
    xp_cmd->add_option("--out", xp.out, "Scenario report JSON (default: <scenario>.json)");

    ReportArgs rp;
    auto* rp_cmd = app.add_subcommand("report", "Print a human-readable summary of a JSON report");
    rp_cmd->add_option("in", rp.in, "Report, counters or metadata JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*sim_cmd) return cmd_simulate(sim, out);
        if (*ex_cmd) return cmd_extract(ex, out);
        if (*ts_cmd) return cmd_test(ts, out, err);
        if (*xp_cmd) {
            bool known = false;
            for (const auto& name : scenario_names()) known = known || name == xp.scenario;
            if (!known) {
                err << "unknown scenario '" << xp.scenario << "'; expected one of:";
                for (const auto& name : scenario_names()) err << ' ' << name;
                err << '\n';
                return exit_usage;
            }
            return cmd_experiment(xp, out);
        }
        if (*rp_cmd) return cmd_report(rp, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("qrng");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace qrng
