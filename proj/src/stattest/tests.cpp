#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qrng/errors.hpp"
#include "qrng/special.hpp"
#include "qrng/stattest.hpp"

namespace qrng {

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

double TestEntry::detail(std::string_view key) const {
    for (const auto& [k, v] : details) {
        if (k == key) return v;
    }
    throw DomainError("TestEntry: no detail named '" + std::string(key) + "'");
}

namespace {

void require_bits(const BitStream& s, std::size_t needed, const char* test) {
    if (s.size() < needed) {
        throw InsufficientDataError(std::string(test) + ": needs at least " + std::to_string(needed) +
                                    " bits, got " + std::to_string(s.size()));
    }
}

Verdict verdict_for(const std::vector<double>& p_values, double alpha) {
    for (double p : p_values) {
        if (p < alpha) return Verdict::fail;
    }
    return Verdict::pass;
}

void finish(TestEntry& e, double alpha) {
    e.p_value = 1.0;
    for (double p : e.p_values) e.p_value = std::min(e.p_value, p);
    e.verdict = verdict_for(e.p_values, alpha);
}

// Counts of overlapping m-bit blocks with wrap-around; block value is MSB-first.
std::vector<std::uint64_t> overlapping_counts(const BitStream& s, unsigned m) {
    std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
    const std::size_t n = s.size();
    const std::uint32_t mask = (std::uint32_t{1} << m) - 1;
    std::uint32_t value = 0;
    for (unsigned j = 0; j + 1 < m; ++j) value = (value << 1) | s[j];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t last = i + m - 1;
        value = ((value << 1) | s[last < n ? last : last - n]) & mask;
        ++counts[value];
    }
    return counts;
}

double psi_squared(const BitStream& s, int m) {
    if (m <= 0) return 0.0;
    const auto counts = overlapping_counts(s, static_cast<unsigned>(m));
    const double n = static_cast<double>(s.size());
    double sum = 0.0;
    for (auto c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(sum, m) / n - n;
}

double phi(const BitStream& s, unsigned m) {
    if (m == 0) return 0.0;
    const auto counts = overlapping_counts(s, m);
    const double n = static_cast<double>(s.size());
    double sum = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double pi = static_cast<double>(c) / n;
        sum += pi * std::log(pi);
    }
    return sum;
}

// Published expectation and variance of the per-word log2 distance, L = 1..16.
constexpr std::array<std::pair<double, double>, 16> maurer_table{{
    {0.7326495, 0.690},  {1.5374383, 1.338},  {2.4016068, 1.901},  {3.3112247, 2.358},
    {4.2534266, 2.705},  {5.2177052, 2.954},  {6.1962507, 3.125},  {7.1836656, 3.238},
    {8.1764248, 3.311},  {9.1723243, 3.356},  {10.170032, 3.384},  {11.168765, 3.401},
    {12.168070, 3.410},  {13.167693, 3.416},  {14.167488, 3.419},  {15.167379, 3.421},
}};

} // namespace

TestEntry frequency_test(const BitStream& stream, double alpha) {
    require_bits(stream, 100, "frequency");
    TestEntry e;
    e.name = "frequency";
    const double n = static_cast<double>(stream.size());
    const double s_obs = std::abs(2.0 * static_cast<double>(stream.count_ones()) - n) / std::sqrt(n);
    e.statistic = s_obs;
    e.p_values = {erfc(s_obs / std::numbers::sqrt2)};
    e.bits_consumed = stream.size();
    finish(e, alpha);
    return e;
}

TestEntry serial_test(const BitStream& stream, unsigned m, double alpha) {
    if (m < 2 || m > 16) throw DomainError("serial: block length m must lie in [2, 16]");
    require_bits(stream, 100 * (std::size_t{1} << m), "serial");
    TestEntry e;
    e.name = "serial";
    e.params = {{"m", m}};
    const int mi = static_cast<int>(m);
    const double psi_m = psi_squared(stream, mi);
    const double psi_m1 = psi_squared(stream, mi - 1);
    const double psi_m2 = psi_squared(stream, mi - 2);
    const double del1 = psi_m - psi_m1;
    const double del2 = psi_m - 2.0 * psi_m1 + psi_m2;
    const double p1 = chi_square_upper(del1, std::ldexp(1.0, mi - 1));
    const double p2 = chi_square_upper(del2, std::ldexp(1.0, mi - 2));
    e.statistic = del1;
    e.p_values = {p1, p2};
    e.details = {{"delta_psi2", del1}, {"delta2_psi2", del2}, {"p_value_1", p1}, {"p_value_2", p2}};
    e.bits_consumed = stream.size();
    finish(e, alpha);
    return e;
}

TestEntry runs_test(const BitStream& stream, double alpha) {
    require_bits(stream, 100, "runs");
    TestEntry e;
    e.name = "runs";
    const std::size_t n_bits = stream.size();
    const double n = static_cast<double>(n_bits);
    const double pi = static_cast<double>(stream.count_ones()) / n;
    e.details = {{"one_fraction", pi}};
    e.bits_consumed = n_bits;
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
        e.verdict = Verdict::not_applicable;
        e.p_value = 0.0;
        e.note = "frequency prerequisite failed: |pi - 1/2| >= 2/sqrt(N)";
        return e;
    }
    // Linear transitions = circular transitions minus the wrap pair.
    const std::size_t circular = circular_xor_count(stream, 1);
    const std::size_t transitions = circular - (stream[n_bits - 1] != stream[0] ? 1 : 0);
    const double v = 1.0 + static_cast<double>(transitions);
    const double q = pi * (1.0 - pi);
    e.statistic = v;
    e.p_values = {erfc(std::abs(v - 2.0 * n * q) / (2.0 * std::sqrt(2.0 * n) * q))};
    finish(e, alpha);
    return e;
}

TestEntry entropy_test(const BitStream& stream, unsigned m, double alpha) {
    if (m < 1 || m > 16) throw DomainError("entropy: block length m must lie in [1, 16]");
    require_bits(stream, 100 * (std::size_t{1} << m), "entropy");
    TestEntry e;
    e.name = "entropy";
    e.params = {{"m", m}};
    const std::size_t n_bits = stream.size();
    const double n = static_cast<double>(n_bits);

    // Non-overlapping block entropy.
    std::vector<std::uint64_t> blocks(std::size_t{1} << m, 0);
    const std::size_t n_blocks = n_bits / m;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        std::uint32_t value = 0;
        for (unsigned j = 0; j < m; ++j) value = (value << 1) | stream[b * m + j];
        ++blocks[value];
    }
    double h = 0.0;
    for (auto c : blocks) {
        if (c == 0) continue;
        const double f = static_cast<double>(c) / static_cast<double>(n_blocks);
        h -= f * std::log2(f);
    }
    const double block_entropy = h / m;

    const double apen = phi(stream, m) - phi(stream, m + 1);
    const double chi2 = 2.0 * n * (std::numbers::ln2 - apen);
    const double p = chi_square_upper(chi2, std::ldexp(1.0, static_cast<int>(m)));
    e.statistic = apen;
    e.p_values = {p};
    e.details = {{"block_entropy_per_bit", block_entropy}, {"apen", apen}, {"chi_square", chi2}};
    e.bits_consumed = n_bits;
    e.note = "block entropy plus approximate entropy";
    finish(e, alpha);
    return e;
}

std::pair<double, double> maurer_constants(unsigned L) {
    if (L < 1 || L > 16) throw DomainError("maurer: L must lie in [1, 16]");
    return maurer_table[L - 1];
}

std::optional<unsigned> maurer_auto_block(std::size_t n_bits) {
    for (unsigned L = 16; L >= 6; --L) {
        const std::size_t words = std::size_t{1} << L;
        const std::size_t total = n_bits / L;
        if (total >= 10 * words + 1000 * words) return L;
    }
    return std::nullopt;
}

TestEntry maurer_universal(const BitStream& stream, const MaurerOptions& options, double alpha) {
    const unsigned L = options.L;
    if (options.oracle_mode ? (L < 1 || L > 16) : (L < 6 || L > 16)) {
        throw DomainError("maurer: L must lie in [6, 16] (or [1, 16] in oracle mode)");
    }
    const std::size_t words = std::size_t{1} << L;
    const std::size_t q = options.Q.value_or(10 * words);
    if (q < 1) throw DomainError("maurer: Q must be >= 1");
    const std::size_t total = stream.size() / L;
    const std::size_t k_min = options.oracle_mode ? 1 : 1000 * words;
    if (total < q + k_min) {
        throw InsufficientDataError("maurer: L=" + std::to_string(L) + " needs at least " +
                                    std::to_string((q + k_min) * L) + " bits, got " +
                                    std::to_string(stream.size()));
    }
    const std::size_t k = total - q;

    std::vector<std::size_t> last_seen(words, 0);
    auto word_at = [&](std::size_t index) {
        std::uint32_t value = 0;
        for (unsigned j = 0; j < L; ++j) value = (value << 1) | stream[index * L + j];
        return value;
    };
    for (std::size_t i = 1; i <= q; ++i) last_seen[word_at(i - 1)] = i;
    double sum = 0.0;
    for (std::size_t i = q + 1; i <= q + k; ++i) {
        const auto w = word_at(i - 1);
        sum += std::log2(static_cast<double>(i - last_seen[w]));
        last_seen[w] = i;
    }
    const double f = sum / static_cast<double>(k);
    const auto [expected, variance] = maurer_constants(L);
    const double kd = static_cast<double>(k);
    const double c = options.oracle_mode
                         ? 1.0
                         : 0.7 - 0.8 / L + (4.0 + 32.0 / L) * std::pow(kd, -3.0 / L) / 15.0;
    const double sigma = c * std::sqrt(variance / kd);

    TestEntry e;
    e.name = "maurer";
    e.params = {{"L", L}, {"Q", static_cast<double>(q)}, {"K", kd}};
    e.statistic = f;
    e.p_values = {erfc(std::abs(f - expected) / (std::numbers::sqrt2 * sigma))};
    e.details = {{"expected", expected}, {"variance", variance}, {"sigma", sigma}, {"c", c}};
    e.bits_consumed = (q + k) * L;
    if (options.oracle_mode) e.note = "oracle mode: uncorrected variance";
    finish(e, alpha);
    return e;
}

} // namespace qrng
