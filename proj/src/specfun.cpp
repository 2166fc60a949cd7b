#include "qmc/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

namespace qmc::specfun {

namespace {

constexpr double kIntegerTol = 1e-9;   // detection of nonpositive-integer parameters
constexpr double kQPowerRelTol = 1e-9; // detection of q^-m parameters

// Kahan-compensated accumulator in extended precision.
struct Accumulator {
    long double sum = 0.0L;
    long double carry = 0.0L;
    void add(long double term) {
        const long double y = term - carry;
        const long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Index m >= 0 such that a ~ -m, if any.
std::optional<int> nonpositive_integer_index(double a) {
    if (a > kIntegerTol) return std::nullopt;
    const double m = std::round(-a);
    if (std::abs(a + m) <= kIntegerTol) return static_cast<int>(m);
    return std::nullopt;
}

// Index m >= 0 such that a ~ q^-m, if any. q in (0,1) so q^-m is increasing.
std::optional<int> qpower_index(double a, double q) {
    if (a <= 0.0) return std::nullopt;
    long double qm = 1.0L;
    for (int m = 0; qm <= a * (1.0 + 1e-6) + 1e-12; ++m, qm /= q) {
        if (std::abs(a - static_cast<double>(qm)) <= kQPowerRelTol * static_cast<double>(qm))
            return m;
    }
    return std::nullopt;
}

}  // namespace

double poch(double a, int n) {
    if (n < 0) throw std::domain_error("poch: negative index");
    long double r = 1.0L;
    for (int k = 0; k < n; ++k) r *= static_cast<long double>(a) + k;
    return static_cast<double>(r);
}

double qpoch(double a, double q, int n) {
    if (n < 0) throw std::domain_error("qpoch: negative index");
    const long double al = a;
    const long double ql = q;
    long double r = 1.0L;
    long double qk = 1.0L;
    for (int k = 0; k < n; ++k, qk *= ql) r *= 1.0L - al * qk;
    return static_cast<double>(r);
}

double binom(int n_total, int x) {
    if (x < 0 || x > n_total)
        throw std::domain_error("binom: require 0 <= x <= N, got x=" + std::to_string(x) +
                                ", N=" + std::to_string(n_total));
    if (x > n_total - x) x = n_total - x;
    long double r = 1.0L;
    for (int k = 1; k <= x; ++k) r = r * (n_total - x + k) / k;
    return static_cast<double>(r);
}

double qbinom(int n_total, int x, double q) {
    if (x < 0 || x > n_total)
        throw std::domain_error("qbinom: require 0 <= x <= N, got x=" + std::to_string(x) +
                                ", N=" + std::to_string(n_total));
    const long double ql = q;
    // (q;q)_N / ((q;q)_x (q;q)_{N-x})
    long double num = 1.0L, den = 1.0L, qk = ql;
    for (int k = 1; k <= n_total; ++k, qk *= ql) num *= 1.0L - qk;
    qk = ql;
    for (int k = 1; k <= x; ++k, qk *= ql) den *= 1.0L - qk;
    qk = ql;
    for (int k = 1; k <= n_total - x; ++k, qk *= ql) den *= 1.0L - qk;
    if (den == 0.0L) throw std::domain_error("qbinom: vanishing (q;q) factor");
    return static_cast<double>(num / den);
}

double hyp_terminating(const HypSeriesParams& params) {
    if (params.z == 0.0) return 1.0;  // only the n = 0 term survives
    std::optional<int> n_max;
    for (double a : params.numerator) {
        if (auto m = nonpositive_integer_index(a))
            n_max = n_max ? std::min(*n_max, *m) : *m;
    }
    if (!n_max)
        throw std::domain_error("hyp_terminating: no nonpositive-integer numerator parameter");
    for (double b : params.denominator) {
        if (auto m = nonpositive_integer_index(b); m && *m < *n_max)
            throw std::domain_error(
                "hyp_terminating: denominator parameter " + std::to_string(b) +
                " vanishes before termination index " + std::to_string(*n_max));
    }
    Accumulator acc;
    long double term = 1.0L;
    const long double z = params.z;
    for (int n = 0; n <= *n_max; ++n) {
        acc.add(term);
        if (n == *n_max) break;
        long double factor = z / (n + 1.0L);
        for (double a : params.numerator) factor *= static_cast<long double>(a) + n;
        for (double b : params.denominator) factor /= static_cast<long double>(b) + n;
        term *= factor;
    }
    return static_cast<double>(acc.sum);
}

double qhyp_terminating(const HypSeriesParams& params) {
    const double q = params.q;
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("qhyp_terminating: base q must lie in (0,1)");
    if (params.z == 0.0) return 1.0;
    std::optional<int> n_max;
    for (double a : params.numerator) {
        if (auto m = qpower_index(a, q)) n_max = n_max ? std::min(*n_max, *m) : *m;
    }
    if (!n_max)
        throw std::domain_error("qhyp_terminating: no q^-m numerator parameter");
    for (double b : params.denominator) {
        // (b;q)_k vanishes at k = m+1 when b = q^-m
        if (auto m = qpower_index(b, q); m && *m < *n_max)
            throw std::domain_error(
                "qhyp_terminating: denominator parameter " + std::to_string(b) +
                " vanishes before termination index " + std::to_string(*n_max));
    }
    const int excess = 1 + static_cast<int>(params.denominator.size()) -
                       static_cast<int>(params.numerator.size());
    Accumulator acc;
    long double term = 1.0L;
    long double qn = 1.0L;  // q^n
    const long double ql = q;
    const long double z = params.z;
    const long double sign = (excess % 2 == 0) ? 1.0L : -1.0L;
    for (int n = 0; n <= *n_max; ++n) {
        acc.add(term);
        if (n == *n_max) break;
        // ratio of consecutive terms of A.4-style series
        long double factor = z / (1.0L - ql * qn);
        for (double a : params.numerator) factor *= 1.0L - static_cast<long double>(a) * qn;
        for (double b : params.denominator) factor /= 1.0L - static_cast<long double>(b) * qn;
        factor *= sign * powl(qn, excess);
        term *= factor;
        qn *= ql;
    }
    return static_cast<double>(acc.sum);
}

double log_poch(double a, int n) {
    if (n < 0) throw std::domain_error("log_poch: negative index");
    if (a <= 0.0) throw std::domain_error("log_poch: requires a > 0");
    return static_cast<double>(lgammal(static_cast<long double>(a) + n) -
                               lgammal(static_cast<long double>(a)));
}

double log_qpoch(double a, double q, int n) {
    if (n < 0) throw std::domain_error("log_qpoch: negative index");
    long double s = 0.0L;
    long double qk = 1.0L;
    const long double al = a, ql = q;
    for (int k = 0; k < n; ++k, qk *= ql) {
        const long double f = 1.0L - al * qk;
        if (f <= 0.0L)
            throw std::domain_error("log_qpoch: nonpositive factor 1 - a q^k at k=" +
                                    std::to_string(k));
        s += logl(f);
    }
    return static_cast<double>(s);
}

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    return static_cast<double>(lgammal(static_cast<long double>(n) + 1.0L));
}

double log_binom(int n_total, int x) {
    if (x < 0 || x > n_total) throw std::domain_error("log_binom: require 0 <= x <= N");
    return static_cast<double>(lgammal(static_cast<long double>(n_total) + 1.0L) -
                               lgammal(static_cast<long double>(x) + 1.0L) -
                               lgammal(static_cast<long double>(n_total - x) + 1.0L));
}

double log_qbinom(int n_total, int x, double q) {
    if (x < 0 || x > n_total) throw std::domain_error("log_qbinom: require 0 <= x <= N");
    return log_qpoch(q, q, n_total) - log_qpoch(q, q, x) - log_qpoch(q, q, n_total - x);
}

}  // namespace qmc::specfun
