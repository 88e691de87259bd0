//
// lowrank / schatten : Schatten p-norms over singular value lists
//
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lowrank/matrix.hpp"
#include "lowrank/svd.hpp"

namespace lowrank {

// Norm index: a positive integer p, or infinity for the operator norm.
class SchattenIndex {
public:
    static SchattenIndex integer(int p) {
        if (p < 1) throw std::invalid_argument("SchattenIndex: p must be >= 1");
        return SchattenIndex(p);
    }
    static SchattenIndex inf() { return SchattenIndex(0); }

    bool is_inf() const { return p_ == 0; }
    int value() const {
        if (is_inf()) throw std::logic_error("SchattenIndex: infinite index has no integer value");
        return p_;
    }
    bool is_even() const { return !is_inf() && p_ % 2 == 0; }

    // Half index of an even p; p=2 maps to the nuclear norm, infinity to itself.
    SchattenIndex half() const {
        if (is_inf()) return inf();
        if (!is_even()) throw std::logic_error("SchattenIndex::half: p is odd");
        return integer(p_ / 2);
    }

    std::string to_string() const { return is_inf() ? "inf" : std::to_string(p_); }

    static SchattenIndex parse(std::string_view s) {
        if (s == "inf" || s == "INF" || s == "Inf") return inf();
        int p = 0;
        for (char c : s) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("SchattenIndex: cannot parse '" + std::string(s) + "'");
            p = p * 10 + (c - '0');
        }
        return integer(p);
    }

    friend bool operator==(SchattenIndex a, SchattenIndex b) { return a.p_ == b.p_; }
    friend bool operator!=(SchattenIndex a, SchattenIndex b) { return a.p_ != b.p_; }

private:
    explicit SchattenIndex(int p) : p_(p) {}
    int p_; // 0 encodes infinity
};

// ||sigma||_p for a non-negative list. Scales by the largest value first so
// large p cannot overflow; an all-zero list gives 0.
inline double schatten_norm_of_singular_values(const std::vector<double>& sigmas, SchattenIndex p) {
    double top = 0.0;
    for (double s : sigmas) {
        if (s < 0.0 || !std::isfinite(s))
            throw std::invalid_argument("schatten_norm_of_singular_values: negative or non-finite value");
        top = std::max(top, s);
    }
    if (top == 0.0) return 0.0;
    if (p.is_inf()) return top;
    const int pv = p.value();
    if (pv == 1) {
        double sum = 0.0;
        for (double s : sigmas) sum += s;
        return sum;
    }
    double sum = 0.0;
    for (double s : sigmas) {
        const double ratio = s / top;
        sum += std::pow(ratio, pv);
    }
    return top * std::pow(sum, 1.0 / pv);
}

// Schatten p-norm of a matrix via its singular values. For p=2 the result is
// cross-checked against the entrywise Frobenius sum; disagreement signals a
// kernel bug and is never returned silently.
inline double schatten_norm(const DenseMatrix& a, SchattenIndex p) {
    const std::vector<double> sig = svd(a).singular_values;
    const double val = schatten_norm_of_singular_values(sig, p);
    if (!p.is_inf() && p.value() == 2) {
        const double direct = frobenius_from_entries(a);
        if (std::abs(val - direct) > 1e-8 * std::max(1.0, direct))
            throw std::runtime_error("schatten_norm: Frobenius cross-check failed (svd " +
                                     std::to_string(val) + " vs entries " + std::to_string(direct) + ")");
    }
    return val;
}

inline double nuclear_norm(const DenseMatrix& a) { return schatten_norm(a, SchattenIndex::integer(1)); }
inline double frobenius_norm(const DenseMatrix& a) { return schatten_norm(a, SchattenIndex::integer(2)); }
inline double two_norm(const DenseMatrix& a) { return schatten_norm(a, SchattenIndex::inf()); }

} // namespace lowrank
