#pragma once

#include <string>
#include <variant>

#include "qmc/chain.hpp"

namespace qmc::families {

// The five solvable chains. Finite families carry the window size N
// explicitly; the semi-infinite ones carry the truncation budget instead.
struct QHahnSpec {
    int N = 0;
    double a = 0, b = 0, c = 0, q = 0;
};
struct HahnSpec {
    int N = 0;
    double a = 0, b = 0, c = 0;
};
struct KrawtchoukSpec {
    int N = 0;
    double a = 0, b = 0;
};
struct CharlierSpec {
    double a = 0, b = 0;
    double eps_tail = 1e-12;
};
struct MeixnerSpec {
    double a = 0, b = 0, c = 0;
    double eps_tail = 1e-12;
};

using FamilySpec = std::variant<QHahnSpec, HahnSpec, KrawtchoukSpec, CharlierSpec, MeixnerSpec>;

std::string family_name(const FamilySpec& spec);
bool is_truncated(const FamilySpec& spec);

// Parameter-range validation; throws std::domain_error naming the violated
// range. For the q-Hahn the positivity of every measure factor is checked
// constructively on top of the stated ranges.
void validate(const FamilySpec& spec);

// ---- orthogonality measures, one per polynomial family -------------------
// Evaluated in log space and exponentiated; strictly positive in range.
double qhahn_measure(int x, int N, double a, double b, double q);
double hahn_measure(int x, int N, double a, double b);
double krawtchouk_measure(int x, int N, double a);
double charlier_measure(int x, double a);
double meixner_measure(int x, double a, double b);

// ---- kernel entries (convolutions of two measures) -----------------------
// Defined for any x, y >= 0 (finite families: 0 <= x,y <= N).
double qhahn_kernel(int x, int y, int N, double a, double b, double c, double q);
double hahn_kernel(int x, int y, int N, double a, double b, double c);
double krawtchouk_kernel(int x, int y, int N, double a, double b);
double charlier_kernel(int x, int y, double a, double b);
double meixner_kernel(int x, int y, double a, double b, double c);

// ---- eigenvector polynomials at generic parameters ------------------------
// P_n(0) = 1; evaluated as terminating series through qmc::specfun.
double qhahn_polynomial(int n, int x, int N, double a, double b, double q);
double hahn_polynomial(int n, int x, int N, double a, double b);
double krawtchouk_polynomial(int n, int x, int N, double a);
double charlier_polynomial(int n, int x, double a);
double meixner_polynomial(int n, int x, double a, double b);

// ---- spec-level operations ------------------------------------------------

// Base orthogonality measure at the family's own parameters.
double measure(const FamilySpec& spec, int x);

// Reversible distribution: the same measure at the composed parameters
// (ab,c), (a+b,b+c), p, p, (a+b,c) respectively.
double reversible_measure(const FamilySpec& spec, int x);

// Transition probability y -> x.
double kernel(const FamilySpec& spec, int x, int y);

// Closed-form kappa(n); kappa(0) = 1, |kappa(n)| <= 1.
double eigenvalue(const FamilySpec& spec, int n);

// Eigenvector polynomial P_n(x) at the composed parameters.
double polynomial(const FamilySpec& spec, int n, int x);

// Closed-form d_n^2 at the composed parameters.
double norm_const_sq(const FamilySpec& spec, int n);

// Krawtchouk composed parameter p = ab/(1-b+ab); Charlier p = b/(1-a).
double composed_parameter(const KrawtchoukSpec& spec);
double composed_parameter(const CharlierSpec& spec);

// Window used to represent the chain. Finite families: N+1. Truncated
// families: the smallest M whose discarded reversible mass is below
// eps_tail, grown by a spectral safety margin (hard cap 4096).
int window_size(const FamilySpec& spec);

/// Chain plus spectral data built from the closed forms.
///
/// Finite families carry analytic spectral data (phi_n = sqrt(pi) d_n P_n)
/// and n_valid == M. Truncated families carry the numerical decomposition of
/// the truncated Hamiltonian as the working basis (the in-window analytic
/// vectors stop being orthonormal near the window edge); the closed forms
/// stay available through kappa_closed / eigenvalue() / polynomial(), and
/// n_valid reports how many leading eigenpairs the analytic formulas
/// reproduce within the documented budget (in-window mass deficit and
/// eigen-equation residual).
struct AnalyticEigenSystem : SpectralSystem {
    FamilySpec spec;
    Vector kappa_closed;
    Vector norm_consts_closed;
    int n_valid = 0;
};

AnalyticEigenSystem build(const FamilySpec& spec);

}  // namespace qmc::families
