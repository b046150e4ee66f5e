#include "qrng/numeric.hpp"

#include <cmath>

#include "qrng/errors.hpp"

namespace qrng {

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p must lie in [0, 1]");
    auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

} // namespace qrng
