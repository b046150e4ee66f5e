#include <functional>

#include "qrng/errors.hpp"
#include "qrng/stattest.hpp"

namespace qrng {

std::vector<std::string> TestReport::insufficient_tests() const {
    std::vector<std::string> names;
    for (const auto& t : tests) {
        if (t.insufficient_data) names.push_back(t.name);
    }
    if (lag_scan_insufficient) names.emplace_back("autocorr");
    return names;
}

const TestEntry* TestReport::find(std::string_view name) const {
    for (const auto& t : tests) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

namespace {

TestEntry guarded(const char* name, const std::function<TestEntry()>& run) {
    try {
        return run();
    } catch (const InsufficientDataError& e) {
        TestEntry entry;
        entry.name = name;
        entry.verdict = Verdict::not_applicable;
        entry.insufficient_data = true;
        entry.note = e.what();
        return entry;
    }
}

} // namespace

TestReport run_battery(const BitStream& stream, const BatteryConfig& config) {
    TestReport report;
    report.alpha = config.alpha;
    report.stream_origin = stream.meta().origin;
    report.stream_length = stream.size();
    const double alpha = config.alpha;

    if (config.frequency) {
        report.tests.push_back(guarded("frequency", [&] { return frequency_test(stream, alpha); }));
    }
    if (config.serial) {
        report.tests.push_back(guarded("serial", [&] { return serial_test(stream, config.serial_m, alpha); }));
    }
    if (config.runs) {
        report.tests.push_back(guarded("runs", [&] { return runs_test(stream, alpha); }));
    }
    if (config.entropy) {
        report.tests.push_back(guarded("entropy", [&] { return entropy_test(stream, config.entropy_m, alpha); }));
    }
    if (config.maurer) {
        report.tests.push_back(guarded("maurer", [&] {
            const auto block = config.maurer_L ? config.maurer_L : maurer_auto_block(stream.size());
            if (!block) {
                throw InsufficientDataError("maurer: needs at least 387840 bits for the smallest block size L=6");
            }
            return maurer_universal(stream, MaurerOptions{*block, std::nullopt, false}, alpha);
        }));
    }
    if (config.autocorr) {
        if (stream.size() < 2 || config.max_lag >= stream.size()) {
            report.lag_scan_insufficient = true;
        } else {
            report.lag_scan = lag_scan(stream, config.max_lag, config.flag_sigma, config.parallelism);
        }
    }

    std::size_t n_p = 0;
    for (const auto& t : report.tests) {
        if (t.verdict != Verdict::not_applicable) n_p += t.p_values.size();
    }
    report.corrected_alpha = n_p > 0 ? alpha / static_cast<double>(n_p) : alpha;

    bool any_ran = report.lag_scan.has_value();
    bool pass = true;
    for (const auto& t : report.tests) {
        if (t.verdict == Verdict::not_applicable) continue;
        any_ran = true;
        for (double p : t.p_values) {
            if (p < report.corrected_alpha) pass = false;
        }
    }
    // A failed prerequisite (runs on biased input) is evidence against randomness.
    for (const auto& t : report.tests) {
        if (t.verdict == Verdict::not_applicable && !t.insufficient_data) pass = false;
    }
    if (report.lag_scan && !report.lag_scan->outliers.empty()) pass = false;
    report.overall_pass = any_ran && pass;
    return report;
}

} // namespace qrng
