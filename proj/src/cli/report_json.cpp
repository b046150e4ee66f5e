#include "qrng/report_json.hpp"

#include <cmath>
#include <fstream>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

// JSON has no NaN or infinity.
nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

nlohmann::ordered_json pairs_to_json(const std::vector<std::pair<std::string, double>>& pairs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : pairs) j[k] = number(v);
    return j;
}

} // namespace

nlohmann::ordered_json counters_to_json(const SimulationResult& result) {
    const CounterBank& c = result.counters;
    nlohmann::ordered_json j;
    j["zeros"] = c.zeros;
    j["ones"] = c.ones;
    j["noise"] = c.noise;
    j["ambiguous"] = c.ambiguous;
    j["rejected_adjacent"] = c.rejected_adjacent;
    j["pulses"] = result.pulses_simulated;
    j["adjacent"] = result.adjacent_bits;
    return j;
}

nlohmann::ordered_json to_json(const ExtractionReport& r) {
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(r.method));
    j["input_length"] = r.input_length;
    j["output_length"] = r.output_length;
    j["yield_per_input_bit"] = number(r.yield_per_input_bit);
    j["input_one_fraction"] = number(r.input_one_fraction);
    j["entropy_bound"] = number(r.entropy_bound);
    j["efficiency_vs_entropy"] = number(r.efficiency_vs_entropy);
    j["chunk_bits"] = r.chunk_bits;
    return j;
}

nlohmann::ordered_json to_json(const LagScan& scan) {
    nlohmann::ordered_json j;
    j["n_max"] = scan.n_max;
    j["flag_sigma"] = scan.flag_sigma;
    j["mean"] = number(scan.scan_mean);
    j["sigma"] = number(scan.scan_sigma);
    j["analytic_sigma"] = number(scan.analytic_sigma);
    j["gamma_1"] = number(scan.at(1));
    j["sigma_deviation_1"] = number(scan.sigma_deviation(1));
    nlohmann::ordered_json outliers = nlohmann::ordered_json::array();
    for (const auto& o : scan.outliers) outliers.push_back({o.lag, number(o.sigma_deviation)});
    j["outliers"] = outliers;
    return j;
}

nlohmann::ordered_json to_json(const TestReport& report) {
    nlohmann::ordered_json j;
    j["alpha"] = report.alpha;
    j["overall"] = report.overall_pass ? "pass" : "fail";
    j["corrected_alpha"] = report.corrected_alpha;
    j["stream_origin"] = std::string(to_string(report.stream_origin));
    j["stream_length"] = report.stream_length;
    nlohmann::ordered_json tests = nlohmann::ordered_json::array();
    for (const auto& t : report.tests) {
        nlohmann::ordered_json e;
        e["name"] = t.name;
        e["params"] = pairs_to_json(t.params);
        if (t.verdict == Verdict::not_applicable) {
            e["statistic"] = nullptr;
            e["p_value"] = nullptr;
        } else {
            e["statistic"] = number(t.statistic);
            e["p_value"] = number(t.p_value);
        }
        e["verdict"] = std::string(to_string(t.verdict));
        e["bits_consumed"] = t.bits_consumed;
        if (!t.details.empty()) e["details"] = pairs_to_json(t.details);
        if (!t.note.empty()) e["note"] = t.note;
        tests.push_back(e);
    }
    j["tests"] = tests;
    if (report.lag_scan) {
        auto scan = to_json(*report.lag_scan);
        scan["source"] = std::string(to_string(report.stream_origin));
        j["lag_scan"] = scan;
    } else {
        j["lag_scan"] = nullptr;
    }
    return j;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace qrng
