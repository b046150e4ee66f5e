#include "qrng/special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "qrng/errors.hpp"

namespace qrng {

double erfc(double x) { return std::erfc(x); }

double igamc(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("igamc: requires a > 0 and x >= 0");
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(a, x);
}

double chi_square_upper(double statistic, double dof) {
    return igamc(dof / 2.0, std::max(statistic, 0.0) / 2.0);
}

double ks_uniform_statistic(std::span<const double> sample) {
    if (sample.empty()) throw EmptyInputError("ks_uniform_statistic: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double u = std::clamp(sorted[i], 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    if (n == 0) throw EmptyInputError("ks_pvalue: n must be >= 1");
    const double rn = std::sqrt(static_cast<double>(n));
    const double lambda = (rn + 0.12 + 0.11 / rn) * d;
    if (lambda < 0.27) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace qrng
