#include "qmc/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "qmc/parallel.hpp"

namespace qmc::evolution {

namespace {

// Binary exponentiation; keeps kappa^l out of the per-term loops.
double pow_int(double base, long exponent) {
    if (exponent == 0) return 1.0;
    long double result = 1.0L;
    long double b = base;
    for (long e = exponent; e > 0; e >>= 1) {
        if (e & 1L) result *= b;
        b *= b;
    }
    return static_cast<double>(result);
}

Vector sqrt_pi(const SpectralSystem& sys) {
    Vector root(sys.chain.pi.size());
    for (size_t x = 0; x < root.size(); ++x) {
        if (!(sys.chain.pi[x] > 0.0))
            throw std::domain_error("evolution: pi must be strictly positive");
        root[x] = std::sqrt(sys.chain.pi[x]);
    }
    return root;
}

}  // namespace

QuantumState QuantumState::basis(int size, int at) {
    if (at < 0 || at >= size) throw std::domain_error("QuantumState::basis: index out of window");
    QuantumState s;
    s.amplitudes.assign(size, Complex(0.0, 0.0));
    s.amplitudes[at] = Complex(1.0, 0.0);
    return s;
}

double QuantumState::norm() const {
    long double n2 = 0.0L;
    for (const Complex& a : amplitudes) n2 += std::norm(a);
    return static_cast<double>(sqrtl(n2));
}

QuantumState QuantumState::checked(std::vector<Complex> amplitudes, double tol) {
    QuantumState s{std::move(amplitudes)};
    if (std::abs(s.norm() - 1.0) > tol)
        throw std::domain_error("QuantumState: l2 norm deviates from 1 beyond tolerance");
    return s;
}

Vector classical_step(const MarkovChain& chain, const Vector& p) {
    return matvec(chain.kernel, p);
}

Vector expansion_coefficients(const SpectralSystem& sys, const Vector& p0) {
    const int m = sys.spectral.size();
    if (static_cast<int>(p0.size()) != m)
        throw std::domain_error("expansion_coefficients: dimension mismatch");
    const Vector root = sqrt_pi(sys);
    Vector weighted(m);
    for (int x = 0; x < m; ++x) weighted[x] = p0[x] / root[x];
    Vector c(m);
    for (int n = 0; n < m; ++n) {
        long double s = 0.0L;
        for (int x = 0; x < m; ++x)
            s += static_cast<long double>(sys.spectral.eigenvectors(x, n)) * weighted[x];
        c[n] = static_cast<double>(s);
    }
    return c;
}

Vector classical_evolve_spectral(const SpectralSystem& sys, const Vector& p0, long steps) {
    if (steps < 0) throw std::domain_error("classical_evolve_spectral: negative step count");
    const int m = sys.spectral.size();
    const Vector root = sqrt_pi(sys);
    const Vector c = expansion_coefficients(sys, p0);
    Vector weights(m);
    for (int n = 0; n < m; ++n) weights[n] = c[n] * pow_int(sys.spectral.kappa[n], steps);
    Vector out(m);
    for (int x = 0; x < m; ++x) {
        long double s = 0.0L;
        for (int n = 0; n < m; ++n)
            s += static_cast<long double>(weights[n]) * sys.spectral.eigenvectors(x, n);
        out[x] = root[x] * static_cast<double>(s);
    }
    return out;
}

double transition_matrix_power(const SpectralSystem& sys, int x, int y, long steps) {
    if (steps < 0) throw std::domain_error("transition_matrix_power: negative step count");
    const int m = sys.spectral.size();
    if (x < 0 || x >= m || y < 0 || y >= m)
        throw std::domain_error("transition_matrix_power: vertex outside window");
    if (!(sys.chain.pi[y] > 0.0))
        throw std::domain_error("transition_matrix_power: pi(y) must be positive");
    long double s = 0.0L;
    for (int n = 0; n < m; ++n)
        s += static_cast<long double>(pow_int(sys.spectral.kappa[n], steps)) *
             sys.spectral.eigenvectors(x, n) * sys.spectral.eigenvectors(y, n);
    return static_cast<double>(s) * std::sqrt(sys.chain.pi[x]) / std::sqrt(sys.chain.pi[y]);
}

Complex quantum_amplitude(const SpectralSystem& sys, int x, int y, long steps) {
    const int m = sys.spectral.size();
    if (x < 0 || x >= m || y < 0 || y >= m)
        throw std::domain_error("quantum_amplitude: vertex outside window");
    long double re = 0.0L, im = 0.0L;
    for (int n = 0; n < m; ++n) {
        const double phase = sys.spectral.energies[n] * static_cast<double>(steps);
        const double w = sys.spectral.eigenvectors(x, n) * sys.spectral.eigenvectors(y, n);
        re += static_cast<long double>(std::cos(phase)) * w;
        im -= static_cast<long double>(std::sin(phase)) * w;
    }
    return Complex(static_cast<double>(re), static_cast<double>(im));
}

QuantumState quantum_evolve(const SpectralSystem& sys, const QuantumState& psi0, long steps) {
    const int m = sys.spectral.size();
    if (psi0.size() != m) throw std::domain_error("quantum_evolve: dimension mismatch");
    // projections <n|psi0>, summation over z ascending
    std::vector<Complex> proj(m);
    for (int n = 0; n < m; ++n) {
        long double re = 0.0L, im = 0.0L;
        for (int z = 0; z < m; ++z) {
            const double w = sys.spectral.eigenvectors(z, n);
            re += w * psi0.amplitudes[z].real();
            im += w * psi0.amplitudes[z].imag();
        }
        proj[n] = Complex(static_cast<double>(re), static_cast<double>(im));
    }
    QuantumState out;
    out.amplitudes.assign(m, Complex(0.0, 0.0));
    for (int x = 0; x < m; ++x) {
        long double re = 0.0L, im = 0.0L;
        for (int n = 0; n < m; ++n) {
            const double phase = sys.spectral.energies[n] * static_cast<double>(steps);
            const Complex rot(std::cos(phase), -std::sin(phase));
            const Complex term = rot * proj[n] * sys.spectral.eigenvectors(x, n);
            re += term.real();
            im += term.imag();
        }
        out.amplitudes[x] = Complex(static_cast<double>(re), static_cast<double>(im));
    }
    return out;
}

Vector measurement_distribution(const SpectralSystem& sys, int y, long steps) {
    const int m = sys.spectral.size();
    if (y < 0 || y >= m)
        throw std::domain_error("measurement_distribution: vertex outside window");
    Vector out(m);
    for (int x = 0; x < m; ++x) out[x] = std::norm(quantum_amplitude(sys, x, y, steps));
    return out;
}

double long_time_average(const SpectralSystem& sys, int x, int y, double degeneracy_tol) {
    const int m = sys.spectral.size();
    if (x < 0 || x >= m || y < 0 || y >= m)
        throw std::domain_error("long_time_average: vertex outside window");
    // kappa is sorted (descending for chains); group equal values into blocks
    long double total = 0.0L;
    int begin = 0;
    while (begin < m) {
        int end = begin + 1;
        while (end < m &&
               std::abs(sys.spectral.kappa[end] - sys.spectral.kappa[end - 1]) < degeneracy_tol)
            ++end;
        long double block = 0.0L;
        for (int n = begin; n < end; ++n)
            block += static_cast<long double>(sys.spectral.eigenvectors(x, n)) *
                     sys.spectral.eigenvectors(y, n);
        total += block * block;
        begin = end;
    }
    return static_cast<double>(total);
}

double empirical_average(const SpectralSystem& sys, int x, int y, long horizon) {
    if (horizon <= 0) throw std::domain_error("empirical_average: horizon must be positive");
    // (1/T) sum_{l=0}^{T}: T+1 terms over divisor T
    long double acc = 0.0L;
    for (long l = 0; l <= horizon; ++l) acc += std::norm(quantum_amplitude(sys, x, y, l));
    return static_cast<double>(acc / static_cast<long double>(horizon));
}

double min_phase_gap(const SpectralSystem& sys) {
    const int m = sys.spectral.size();
    double gap = 2.0;
    for (int n = 0; n < m; ++n)
        for (int k = n + 1; k < m; ++k) {
            const double d = std::abs(sys.spectral.kappa[n] - sys.spectral.kappa[k]);
            if (d > 0.0) gap = std::min(gap, d);
        }
    return gap;
}

double total_variation(const Vector& p, const Vector& q) {
    if (p.size() != q.size()) throw std::domain_error("total_variation: dimension mismatch");
    long double s = 0.0L;
    for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * static_cast<double>(s);
}

EvolutionResult run_classical(const SpectralSystem& sys, const Vector& p0, long steps) {
    EvolutionResult result;
    result.mode = "classical";
    result.source = sys.spectral.source;
    result.truncation_budget =
        sys.chain.window.is_truncated() ? 10.0 * sys.chain.window.eps_tail : 0.0;
    result.steps.resize(static_cast<size_t>(steps) + 1);
    parallel_for(result.steps.size(), [&](size_t l) {
        result.steps[l] =
            EvolutionResult::Step{static_cast<long>(l),
                                  classical_evolve_spectral(sys, p0, static_cast<long>(l))};
    });
    return result;
}

EvolutionResult run_quantum(const SpectralSystem& sys, const QuantumState& psi0, long steps) {
    EvolutionResult result;
    result.mode = "quantum";
    result.source = sys.spectral.source;
    result.truncation_budget =
        sys.chain.window.is_truncated() ? 10.0 * sys.chain.window.eps_tail : 0.0;
    result.steps.resize(static_cast<size_t>(steps) + 1);
    parallel_for(result.steps.size(), [&](size_t l) {
        const QuantumState psi = quantum_evolve(sys, psi0, static_cast<long>(l));
        Vector probs(psi.amplitudes.size());
        for (size_t x = 0; x < probs.size(); ++x) probs[x] = std::norm(psi.amplitudes[x]);
        result.steps[l] = EvolutionResult::Step{static_cast<long>(l), std::move(probs)};
    });
    return result;
}

}  // namespace qmc::evolution
