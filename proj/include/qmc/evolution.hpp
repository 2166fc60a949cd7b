#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qmc/chain.hpp"

namespace qmc::evolution {

using Complex = std::complex<double>;

/// Unit-norm complex amplitude vector over the vertex window.
struct QuantumState {
    std::vector<Complex> amplitudes;

    static QuantumState basis(int size, int at);
    // Throws std::domain_error unless the l2 norm is within tol of one.
    static QuantumState checked(std::vector<Complex> amplitudes, double tol = 1e-10);
    double norm() const;
    int size() const { return static_cast<int>(amplitudes.size()); }
};

/// Per-step records of a classical or quantum run, as produced for export.
struct EvolutionResult {
    struct Step {
        long step = 0;
        Vector values;  // P(.;l) or |Psi(.,y;l)|^2
    };
    std::vector<Step> steps;
    std::string mode;            // "classical" | "quantum"
    SpectralSource source = SpectralSource::Numerical;
    double truncation_budget = 0.0;
};

// One application of the kernel: p'(x) = sum_y K(x,y) p(y).
Vector classical_step(const MarkovChain& chain, const Vector& p);

// Spectral solution of the initial value problem:
// P(x;l) = phi_0(x) sum_n c_n kappa(n)^l phi_n(x) with
// c_n = sum_x phi_n(x) P(x;0) / phi_0(x) and phi_0 = sqrt(pi).
Vector classical_evolve_spectral(const SpectralSystem& sys, const Vector& p0, long steps);

// Expansion coefficients c_n of an initial distribution; c_0 = 1.
Vector expansion_coefficients(const SpectralSystem& sys, const Vector& p0);

// (K^l)(x,y) through the spectral representation.
double transition_matrix_power(const SpectralSystem& sys, int x, int y, long steps);

// Psi(x,y;l) = sum_n e^{-i(1-kappa(n)) l} phi_n(x) phi_n(y).
Complex quantum_amplitude(const SpectralSystem& sys, int x, int y, long steps);

// |psi(l)> = U^l |psi(0)>, U = e^{-iH}. Norm preserved.
QuantumState quantum_evolve(const SpectralSystem& sys, const QuantumState& psi0, long steps);

// |Psi(x,y;l)|^2 over x for the basis start |y>.
Vector measurement_distribution(const SpectralSystem& sys, int y, long steps);

// Cesaro limit of |Psi(x,y;l)|^2. Degenerate kappa values (within
// degeneracy_tol) are handled by block summation.
double long_time_average(const SpectralSystem& sys, int x, int y,
                         double degeneracy_tol = 1e-8);

// (1/T) sum_{l=0}^{T} |Psi(x,y;l)|^2, the finite-horizon counterpart.
double empirical_average(const SpectralSystem& sys, int x, int y, long horizon);

// Smallest nonzero |kappa(n) - kappa(m)| gap; governs how fast the
// empirical average settles.
double min_phase_gap(const SpectralSystem& sys);

// Half the l1 distance between two distributions.
double total_variation(const Vector& p, const Vector& q);

// Convenience runners used by the CLI.
EvolutionResult run_classical(const SpectralSystem& sys, const Vector& p0, long steps);
EvolutionResult run_quantum(const SpectralSystem& sys, const QuantumState& psi0, long steps);

}  // namespace qmc::evolution
