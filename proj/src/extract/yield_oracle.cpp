#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qrng/errors.hpp"
#include "qrng/extract.hpp"

namespace qrng {

namespace {

// Output length only, computed on a small integer vector. Kept separate from
// the production extractor so the oracle checks it rather than repeats it.
std::size_t vn_length(const std::vector<int>& x) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) n += x[i] != x[i + 1];
    return n;
}

std::size_t peres_length(const std::vector<int>& x) {
    if (x.size() < 2) return 0;
    std::vector<int> u;
    std::vector<int> v;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        u.push_back(x[i] ^ x[i + 1]);
        if (x[i] == x[i + 1]) v.push_back(x[i]);
    }
    return vn_length(x) + peres_length(u) + peres_length(v);
}

} // namespace

double exact_yield_oracle(ExtractorMethod method, unsigned n, double p) {
    if (n > 20) throw CapacityError("exact_yield_oracle: n must be <= 20");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("exact_yield_oracle: p must lie in [0, 1]");
    double expected = 0.0;
    std::vector<int> x(n);
    const std::uint32_t count = std::uint32_t{1} << n;
    for (std::uint32_t pattern = 0; pattern < count; ++pattern) {
        for (unsigned i = 0; i < n; ++i) x[i] = (pattern >> i) & 1U;
        const int ones = std::popcount(pattern);
        const double weight = std::pow(p, ones) * std::pow(1.0 - p, static_cast<int>(n) - ones);
        if (weight == 0.0) continue;
        const std::size_t len = method == ExtractorMethod::von_neumann ? vn_length(x) : peres_length(x);
        expected += weight * static_cast<double>(len);
    }
    return expected;
}

} // namespace qrng
