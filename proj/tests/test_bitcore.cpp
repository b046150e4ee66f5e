#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qrng/bitio.hpp"
#include "qrng/bitstream.hpp"
#include "qrng/errors.hpp"
#include "qrng/numeric.hpp"
#include "qrng/rng.hpp"
#include "qrng/special.hpp"
#include "test_util.hpp"

using namespace qrng;
namespace fs = std::filesystem;

TEST_CASE("xoshiro256** seeded by splitmix64 matches the reference algorithm") {
    // First outputs computed with an independent Python transcription of both algorithms.
    RngEngine r0(0);
    CHECK(r0.next() == 0x99ec5f36cb75f2b4ULL);
    CHECK(r0.next() == 0xbf6e1f784956452aULL);
    CHECK(r0.next() == 0x1a5f849d4933e6e0ULL);
    RngEngine r1(1);
    CHECK(r1.next() == 0xb3f2af6d0fc710c5ULL);
    RngEngine r2(2);
    CHECK(r2.next() == 0x1a28690da8a8d057ULL);
    RngEngine r42(42);
    CHECK(r42.next() == 0x15780b2e0c2ec716ULL);
}

TEST_CASE("same seed gives the same sequence") {
    auto a = rng_new(0);
    auto b = rng_new(0);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
    CHECK(rng_new(1).next() != rng_new(2).next());
}

TEST_CASE("uniform draws lie in [0,1)") {
    for (std::uint64_t seed : {0ULL, 5ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        RngEngine rng(seed);
        double lo = 1.0;
        double hi = 0.0;
        for (int i = 0; i < 1'000'000; ++i) {
            const double u = rng.uniform();
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        CHECK(lo >= 0.0);
        CHECK(hi < 1.0);
    }
}

TEST_CASE("poisson sampler") {
    SUBCASE("mu = 0 is degenerate") {
        RngEngine rng(3);
        for (int i = 0; i < 10000; ++i) REQUIRE(sample_poisson(rng, 0.0) == 0);
    }
    SUBCASE("domain") {
        RngEngine rng(3);
        CHECK_THROWS_AS(sample_poisson(rng, -0.1), DomainError);
        CHECK_THROWS_AS(sample_poisson(rng, 30.5), DomainError);
        CHECK_NOTHROW(sample_poisson(rng, 30.0));
    }
    SUBCASE("consumes exactly one uniform") {
        RngEngine a(9);
        RngEngine b(9);
        for (int i = 0; i < 1000; ++i) {
            sample_poisson(a, 2.5);
            b.uniform();
            REQUIRE(a.state() == b.state());
        }
    }
    SUBCASE("mu = 0.1 zero-probability and mean") {
        RngEngine rng(11);
        const int n = 1'000'000;
        std::size_t zeros = 0;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto k = sample_poisson(rng, 0.1);
            zeros += k == 0;
            sum += k;
        }
        const double p0 = std::exp(-0.1);
        CHECK(std::abs(p0 - 0.904837) < 1e-6);
        CHECK(std::abs(zeros / double(n) - p0) < 3.0 * std::sqrt(p0 * (1 - p0) / n));
        CHECK(std::abs(sum / n - 0.1) < 3.0 * std::sqrt(0.1 / n));
    }
    SUBCASE("chi-square goodness of fit") {
        for (double mu : {0.05, 0.1, 0.5}) {
            RngEngine rng(static_cast<std::uint64_t>(mu * 1000));
            const int n = 1'000'000;
            std::vector<double> observed(40, 0.0);
            for (int i = 0; i < n; ++i) observed[std::min<std::uint32_t>(sample_poisson(rng, mu), 39)] += 1;
            // Merge the tail into the last bin with expectation >= 5.
            std::vector<double> expected;
            std::vector<double> counts;
            double pmf = std::exp(-mu);
            double tail_prob = 1.0;
            double tail_count = n;
            for (int k = 0; k < 40; ++k) {
                const double e = n * pmf;
                const double next_tail = (tail_prob - pmf) * n;
                if (next_tail < 5.0) break;
                expected.push_back(e);
                counts.push_back(observed[k]);
                tail_prob -= pmf;
                tail_count -= observed[k];
                pmf *= mu / (k + 1);
            }
            expected.push_back(tail_prob * n);
            counts.push_back(tail_count);
            double chi2 = 0.0;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                chi2 += (counts[i] - expected[i]) * (counts[i] - expected[i]) / expected[i];
            }
            const double p = chi_square_upper(chi2, static_cast<double>(counts.size() - 1));
            INFO("mu = " << mu << " chi2 = " << chi2 << " bins = " << counts.size());
            CHECK(p >= 0.001);
        }
    }
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(std::abs(binary_entropy(0.4) - 0.970951) < 1e-6);
    CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)));
    CHECK_THROWS_AS(binary_entropy(-0.01), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.01), DomainError);
}

TEST_CASE("bit fraction") {
    CHECK(bit_fraction(BitStream::from_string("1111")) == 1.0);
    CHECK(bit_fraction(BitStream::from_string("0101")) == 0.5);
    CHECK_THROWS_AS(bit_fraction(BitStream{}), EmptyInputError);
    const auto s = testing::biased_bits(21, 1'000'000, 0.4);
    CHECK(std::abs(bit_fraction(s) - 0.4) < 0.0015);
}

TEST_CASE("bitstream layout and metadata") {
    const auto s = BitStream::from_string("100000001");
    REQUIRE(s.size() == 9);
    const auto bytes = s.to_packed_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0x01);
    CHECK(bytes[1] == 0x01);
    CHECK(s.meta().one_fraction.value() == 2.0 / 9.0);
    CHECK_FALSE(BitStream{}.meta().one_fraction.has_value());
    CHECK_THROWS_AS(BitStream::from_string("01x"), DomainError);

    // Bits past the length in the last byte are ignored.
    const std::uint8_t raw[] = {0xFF};
    const auto t = BitStream::from_packed_bytes(raw, 3);
    CHECK(t.to_string() == "111");
    CHECK(t.count_ones() == 3);
}

TEST_CASE("pack/unpack round trip for lengths 0..10^4") {
    RngEngine lengths(77);
    std::vector<std::size_t> ns{0, 1, 7, 8, 9, 63, 64, 65, 127, 128, 129, 10000};
    for (int i = 0; i < 200; ++i) ns.push_back(lengths.next() % 10001);
    for (std::size_t n : ns) {
        const auto s = testing::biased_bits(n + 1, n, 0.5);
        const auto bytes = s.to_packed_bytes();
        REQUIRE(bytes.size() == (n + 7) / 8);
        REQUIRE(BitStream::from_packed_bytes(bytes, n) == s);
        REQUIRE(BitStream::from_bits(s.to_bits()) == s);
        REQUIRE(BitStream::from_string(s.to_string()) == s);
    }
}

TEST_CASE("slice and append") {
    const auto s = testing::fair_bits(5, 1000);
    for (std::size_t first : {0, 1, 63, 64, 130}) {
        const auto part = s.slice(first, 500);
        for (std::size_t i = 0; i < 500; ++i) REQUIRE(part[i] == s[first + i]);
    }
    BitStreamBuilder b;
    b.append(s.slice(0, 100));
    b.append(s.slice(100, 900));
    CHECK(std::move(b).build(Origin::file) == s);
    CHECK_THROWS_AS(s.slice(900, 101), DomainError);
}

TEST_CASE("bit files") {
    const fs::path dir = fs::temp_directory_path() / "qrng_test_bitcore";
    fs::create_directories(dir);
    const auto s = testing::biased_bits(8, 12345, 0.3);

    SUBCASE("packed with sidecar") {
        const auto path = dir / "a.bits";
        write_bit_file(path, s);
        REQUIRE(fs::file_size(path) == (12345 + 7) / 8);
        std::ifstream meta(meta_path_for(path));
        std::string text((std::istreambuf_iterator<char>(meta)), std::istreambuf_iterator<char>());
        CHECK(text.find("\"length_bits\": 12345") != std::string::npos);
        CHECK(text.find("\"origin\": \"simulated\"") != std::string::npos);
        const auto back = read_bit_file(path);
        CHECK(back == s);
        CHECK(back.meta().origin == Origin::simulated);
    }
    SUBCASE("ascii") {
        const auto path = dir / "a.txt";
        write_bit_file(path, s, BitFormat::ascii);
        CHECK(fs::file_size(path) == 12345);
        CHECK(read_bit_file(path, BitFormat::ascii) == s);
    }
    SUBCASE("length mismatch") {
        const auto path = dir / "b.bits";
        write_bit_file(path, s);
        std::ofstream(meta_path_for(path)) << R"({"length_bits": 99999, "origin": "file", "one_fraction": 0.5})";
        CHECK_THROWS_AS(read_bit_file(path), FormatError);
    }
    SUBCASE("missing file or sidecar") {
        CHECK_THROWS_AS(read_bit_file(dir / "nope.bits"), IoError);
        const auto path = dir / "c.bits";
        std::ofstream(path) << "x";
        fs::remove(meta_path_for(path));
        CHECK_THROWS_AS(read_bit_file(path), IoError);
    }
    fs::remove_all(dir);
}
