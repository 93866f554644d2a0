#pragma once

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace hsr::allocator {

/// Gaussian tail probability Q(x) = P(Z > x).
///
/// Templated on the floating type: in double precision Q(x) for x below about
/// -5.5 rounds to a value so close to 1 that no inverse can recover x to 1e-9;
/// instantiate with a wider type (e.g. boost cpp_bin_float_quad) when the full
/// negative range matters.
template <class Real>
Real q_function(Real x) {
    using std::sqrt;
    using boost::math::erfc;
    return erfc(x / sqrt(Real(2))) / Real(2);
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Solves Q(x) = p by bisection of the implemented Q on [0, 40]; p > 1/2 uses
/// Q^{-1}(p) = -Q^{-1}(1 - p).
template <class Real>
Real q_inverse(Real p, Real tol = Real(1e-12)) {
    if (!(p > Real(0) && p < Real(1))) throw std::invalid_argument("q_inverse: p must lie in (0, 1)");
    if (p == Real(0.5)) return Real(0);
    if (p > Real(0.5)) return -q_inverse<Real>(Real(1) - p, tol);
    Real lo = 0, hi = 40;
    // Q is decreasing: Q(lo) >= p > Q(hi).
    while (hi - lo > tol) {
        const Real mid = (lo + hi) / 2;
        if (q_function(mid) > p) lo = mid;
        else hi = mid;
    }
    return (lo + hi) / 2;
}

inline double q_inverse(double p) { return q_inverse<double>(p, 1e-12); }

}  // namespace hsr::allocator
