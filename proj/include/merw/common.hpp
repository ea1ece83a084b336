#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace merw {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// Error taxonomy. Every throwing operation documents which of these it uses.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotSquare : public Error { public: using Error::Error; };
class InvalidWeight : public Error { public: using Error::Error; };   // NaN / inf
class NegativeWeight : public Error { public: using Error::Error; };
class NotStronglyConnected : public Error { public: using Error::Error; };
class DanglingVertex : public Error { public: using Error::Error; };
class Overflow : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class NotSymmetric : public Error { public: using Error::Error; };
class InvalidPath : public Error { public: using Error::Error; };
class SupportMismatch : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };
class NotExchangeSymmetric : public Error { public: using Error::Error; };
class NotAdiabatic : public Error { public: using Error::Error; };
class NonPositiveAmplitude : public Error { public: using Error::Error; };
class NumericFailure : public Error { public: using Error::Error; };
class ConfigParse : public Error { public: using Error::Error; };
class KindMismatch : public Error { public: using Error::Error; };
class DeterminismFailure : public Error { public: using Error::Error; };

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// ---------------------------------------------------------------------------
// Small fixed-order vector kernels. All reductions run left to right so
// results are reproducible across runs and thread counts.
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double sum(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
}

inline double norm_inf(const Vec& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

inline double norm_1(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

inline double norm_2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void scale(Vec& a, double c) {
    for (double& x : a) x *= c;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

// lg with the 0*lg(0) := 0 convention used throughout entropy formulas.
inline double lg(double x) { return std::log2(x); }

inline double xlg(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace merw
