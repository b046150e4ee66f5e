#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run qrng_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = qrng::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("qrng_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("simulate writes bits, metadata and counters reproducibly") {
    TempDir dir("sim");
    const auto bits = dir / "raw.bits";
    auto r = qrng_cli({"simulate", "--pulses", "200000", "--seed", "3", "--out", bits});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("bits") != std::string::npos);
    const auto counters = dir / "raw.counters.json";
    REQUIRE(fs::exists(bits));
    REQUIRE(fs::exists(bits + ".meta.json"));
    REQUIRE(fs::exists(counters));
    const auto j = nlohmann::json::parse(slurp(counters));
    CHECK(j["pulses"] == 200000);
    const auto meta = nlohmann::json::parse(slurp(bits + ".meta.json"));
    CHECK(meta["origin"] == "simulated");
    CHECK(meta["length_bits"].get<std::size_t>() == j["zeros"].get<std::size_t>() + j["ones"].get<std::size_t>());

    const auto first = slurp(bits);
    const auto first_counters = slurp(counters);
    REQUIRE(qrng_cli({"simulate", "--pulses", "200000", "--seed", "3", "--out", bits}).code == 0);
    CHECK(slurp(bits) == first);
    CHECK(slurp(counters) == first_counters);
    REQUIRE(qrng_cli({"simulate", "--pulses", "200000", "--seed", "4", "--out", bits}).code == 0);
    CHECK(slurp(bits) != first);

    const auto ascii = dir / "raw.txt";
    REQUIRE(qrng_cli({"simulate", "--pulses", "1000", "--format", "ascii", "--out", ascii}).code == 0);
    CHECK(slurp(ascii).find_first_not_of("01\n") == std::string::npos);
}

TEST_CASE("simulate config handling") {
    TempDir dir("cfg");
    auto r = qrng_cli({"simulate", "--pulses", "1000", "--path-delay-ns", "5", "--out", dir / "x.bits"});
    CHECK(r.code == 2);
    CHECK(r.err.find("path_delay_ns >= window_width_ns") != std::string::npos);

    spit(dir / "bad.json", R"({"detector": {"dark_rate_hz": "lots"}})");
    r = qrng_cli({"simulate", "--config", dir / "bad.json", "--out", dir / "x.bits"});
    CHECK(r.code == 2);
    CHECK(r.err.find("/detector/dark_rate_hz") != std::string::npos);

    spit(dir / "broken.json", "{ not json");
    CHECK(qrng_cli({"simulate", "--config", dir / "broken.json", "--out", dir / "x.bits"}).code == 2);

    spit(dir / "run.json", R"({"device": {"mean_photons_per_pulse": 0.2}, "pulses": 5000, "seed": 11})");
    r = qrng_cli({"simulate", "--config", dir / "run.json", "--out", dir / "y.bits"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "y.counters.json"))["pulses"] == 5000);

    r = qrng_cli({"simulate", "--pulses", "1000", "--out", dir / "missing_dir/x.bits"});
    CHECK(r.code == 3);
    CHECK(qrng_cli({"simulate", "--pulses", "1000"}).code == 2);
    CHECK(qrng_cli({"simulate", "--pulses", "1000", "--scheme", "three", "--out", dir / "z.bits"}).code == 2);
}

TEST_CASE("extract command") {
    TempDir dir("ext");
    spit(dir / "in.txt", "0110\n");
    auto r = qrng_cli({"extract", "--in", dir / "in.txt", "--in-format", "ascii", "--method", "vn", "--out",
                       dir / "out.txt", "--format", "ascii"});
    REQUIRE(r.code == 0);
    CHECK(qrng::read_bit_file(dir / "out.txt", qrng::BitFormat::ascii).to_string() == "01");
    const auto report = nlohmann::json::parse(slurp(dir / "out.txt.report.json"));
    CHECK(report["method"] == "von_neumann");
    CHECK(report["output_length"] == 2);

    spit(dir / "zeros.txt", "0000\n");
    r = qrng_cli({"extract", "--in", dir / "zeros.txt", "--in-format", "ascii", "--out", dir / "e.bits"});
    CHECK(r.code == 0);
    CHECK(qrng::read_bit_file(dir / "e.bits", qrng::BitFormat::packed).empty());

    REQUIRE(qrng_cli({"simulate", "--pulses", "300000", "--out", dir / "raw.bits"}).code == 0);
    r = qrng_cli({"extract", "--in", dir / "raw.bits", "--method", "peres", "--out", dir / "p.bits"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "p.bits.report.json"))["efficiency_vs_entropy"].get<double>() > 0.9);

    CHECK(qrng_cli({"extract", "--in", dir / "nope.bits", "--out", dir / "o.bits"}).code == 2);
    CHECK(qrng_cli({"extract", "--in", dir / "raw.bits", "--method", "xor", "--out", dir / "o.bits"}).code == 2);
}

TEST_CASE("test command exit codes") {
    TempDir dir("test");
    REQUIRE(qrng_cli({"simulate", "--pulses", "4000000", "--seed", "1", "--out", dir / "raw.bits"}).code == 0);
    REQUIRE(qrng_cli({"extract", "--in", dir / "raw.bits", "--out", dir / "p.bits"}).code == 0);

    auto r = qrng_cli({"test", "--in", dir / "p.bits", "--max-lag", "200"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "p.bits.test.json"));
    const auto rep = nlohmann::json::parse(slurp(dir / "p.bits.test.json"));
    CHECK(rep["overall"] == "pass");

    r = qrng_cli({"test", "--in", dir / "raw.bits", "--tests", "frequency", "--report", dir / "raw.json"});
    CHECK(r.code == 1);

    std::string fifty;
    for (int i = 0; i < 50; ++i) fifty += (i % 3 == 0) ? '1' : '0';
    spit(dir / "short.txt", fifty + "\n");
    r = qrng_cli({"test", "--in", dir / "short.txt", "--in-format", "ascii", "--tests", "autocorr", "--max-lag", "100"});
    CHECK(r.code == 2);
    CHECK(r.err.find("autocorr") != std::string::npos);
    r = qrng_cli({"test", "--in", dir / "short.txt", "--in-format", "ascii", "--max-lag", "100"});
    CHECK(r.code == 2);

    CHECK(qrng_cli({"test", "--in", dir / "absent.bits"}).code == 2);
}

TEST_CASE("experiment, report and help") {
    TempDir dir("exp");
    auto r = qrng_cli({"experiment", "no-such-scenario"});
    CHECK(r.code == 2);
    CHECK(r.err.find("deadtime-anomaly") != std::string::npos);

    r = qrng_cli({"experiment", "noise-budget", "--pulses", "200000", "--out", dir / "nb.json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "nb.json"));
    CHECK(j["scenario"] == "noise-budget");
    CHECK(j["property_holds"] == true);

    r = qrng_cli({"report", dir / "nb.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("noise-budget") != std::string::npos);
    CHECK(qrng_cli({"report", dir / "missing.json"}).code == 2);

    r = qrng_cli({"simulate", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("1000000") != std::string::npos);
    CHECK(qrng_cli({}).code == 2);
    CHECK(qrng_cli({"frobnicate"}).code == 2);
}
