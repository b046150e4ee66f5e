#pragma once

namespace qrng {

/// Binary Shannon entropy h(p) in bits, with 0*log2(0) = 0. Throws DomainError outside [0,1].
double binary_entropy(double p);

} // namespace qrng
