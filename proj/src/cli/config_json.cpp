#include "qrng/config_json.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw ConfigError(pointer + ": " + what);
}

void reject_unknown(const json& obj, const std::string& base, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (auto k : known) found = found || key == k;
        if (!found) fail(base + "/" + key, "unknown key");
    }
}

void read_number(const json& obj, const std::string& base, const char* key, double& target) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(base + "/" + key, "expected a number");
    target = v.get<double>();
}

} // namespace

nlohmann::ordered_json to_json(const DeviceConfig& c) {
    nlohmann::ordered_json j;
    j["pulse_rate_hz"] = c.pulse_rate_hz;
    j["mean_photons_per_pulse"] = c.mean_photons_per_pulse;
    j["split_to_one"] = c.split_to_one;
    j["path_delay_ns"] = c.path_delay_ns;
    j["window_width_ns"] = c.window_width_ns;
    j["window0_offset_ns"] = c.window0_offset_ns;
    j["noise_window_offset_ns"] = c.noise_window_offset_ns;
    j["arrival_jitter_sigma_ns"] = c.arrival_jitter_sigma_ns;
    j["scheme"] = std::string(to_string(c.scheme));
    j["reject_adjacent"] = c.reject_adjacent;
    nlohmann::ordered_json d;
    d["base_efficiency"] = c.detector.base_efficiency;
    d["recovery_time_ns"] = c.detector.recovery_time_ns;
    d["dark_rate_hz"] = c.detector.dark_rate_hz;
    d["afterpulse_prob"] = c.detector.afterpulse_prob;
    d["afterpulse_tau_ns"] = c.detector.afterpulse_tau_ns;
    j["detector"] = d;
    return j;
}

DeviceConfig device_config_from_json(const nlohmann::json& j) {
    return run_config_from_json(j).device;
}

namespace {

DeviceConfig parse_device(const json& j, const std::string& base) {
    if (!j.is_object()) fail(base.empty() ? "/" : base, "expected an object");
    reject_unknown(j, base,
                   {"pulse_rate_hz", "mean_photons_per_pulse", "split_to_one", "path_delay_ns", "window_width_ns",
                    "window0_offset_ns", "noise_window_offset_ns", "arrival_jitter_sigma_ns", "scheme",
                    "reject_adjacent", "detector"});
    DeviceConfig c;
    read_number(j, base, "pulse_rate_hz", c.pulse_rate_hz);
    read_number(j, base, "mean_photons_per_pulse", c.mean_photons_per_pulse);
    read_number(j, base, "split_to_one", c.split_to_one);
    read_number(j, base, "path_delay_ns", c.path_delay_ns);
    read_number(j, base, "window_width_ns", c.window_width_ns);
    read_number(j, base, "window0_offset_ns", c.window0_offset_ns);
    read_number(j, base, "noise_window_offset_ns", c.noise_window_offset_ns);
    read_number(j, base, "arrival_jitter_sigma_ns", c.arrival_jitter_sigma_ns);
    if (j.contains("scheme")) {
        const json& v = j.at("scheme");
        if (!v.is_string()) fail(base + "/scheme", "expected \"one_detector\" or \"two_detector\"");
        const auto text = v.get<std::string>();
        if (text == "one_detector") {
            c.scheme = Scheme::one_detector;
        } else if (text == "two_detector") {
            c.scheme = Scheme::two_detector;
        } else {
            fail(base + "/scheme", "expected \"one_detector\" or \"two_detector\", got \"" + text + "\"");
        }
    }
    if (j.contains("reject_adjacent")) {
        const json& v = j.at("reject_adjacent");
        if (!v.is_boolean()) fail(base + "/reject_adjacent", "expected a boolean");
        c.reject_adjacent = v.get<bool>();
    }
    if (j.contains("detector")) {
        const json& d = j.at("detector");
        const std::string db = base + "/detector";
        if (!d.is_object()) fail(db, "expected an object");
        reject_unknown(d, db,
                       {"base_efficiency", "recovery_time_ns", "dark_rate_hz", "afterpulse_prob", "afterpulse_tau_ns"});
        read_number(d, db, "base_efficiency", c.detector.base_efficiency);
        read_number(d, db, "recovery_time_ns", c.detector.recovery_time_ns);
        read_number(d, db, "dark_rate_hz", c.detector.dark_rate_hz);
        read_number(d, db, "afterpulse_prob", c.detector.afterpulse_prob);
        read_number(d, db, "afterpulse_tau_ns", c.detector.afterpulse_tau_ns);
    }
    return c;
}

std::optional<std::uint64_t> read_count(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) fail(std::string("/") + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

} // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("/", "expected an object");
    RunConfig run;
    if (j.contains("device")) {
        reject_unknown(j, "", {"device", "pulses", "seed"});
        run.device = parse_device(j.at("device"), "/device");
        run.pulses = read_count(j, "pulses");
        run.seed = read_count(j, "seed");
    } else {
        run.device = parse_device(j, "");
    }
    return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("/: " + path.string() + " is not valid JSON (" + e.what() + ")");
    }
    return run_config_from_json(j);
}

} // namespace qrng
