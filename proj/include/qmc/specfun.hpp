#pragma once

#include <stdexcept>
#include <vector>

namespace qmc::specfun {

/// Parameters of a terminating (q-)hypergeometric series.
///
/// For the plain series at least one numerator entry must be a nonpositive
/// integer; for the q-series at least one numerator entry must equal q^-m
/// for some integer m >= 0. Both engines detect the termination index and
/// refuse input whose denominator factors vanish before it.
struct HypSeriesParams {
    std::vector<double> numerator;
    std::vector<double> denominator;
    double z = 0.0;
    double q = 0.0;  // used by the q-variant only, must lie in (0,1) there
};

// Shifted factorial (a)_n as an exact product, no gamma detour.
double poch(double a, int n);

// q-shifted factorial (a;q)_n.
double qpoch(double a, double q, int n);

// Binomial coefficient as an integer-valued real; throws std::domain_error
// unless 0 <= x <= N.
double binom(int n_total, int x);

// q-binomial [N x]_q = (q;q)_N / ((q;q)_x (q;q)_{N-x}).
double qbinom(int n_total, int x, double q);

// Terminating rFs, summed forward with extended-precision accumulation.
double hyp_terminating(const HypSeriesParams& params);

// Terminating r phi s including the (-1)^{(1+s-r)n} q^{(1+s-r)n(n-1)/2}
// factor of the general definition.
double qhyp_terminating(const HypSeriesParams& params);

// Log-space building blocks for measure evaluation at large x or N.
// All of them require the underlying factors to be strictly positive.
double log_poch(double a, int n);
double log_qpoch(double a, double q, int n);
double log_binom(int n_total, int x);
double log_qbinom(int n_total, int x, double q);
double log_factorial(int n);

}  // namespace qmc::specfun
