#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

/// Set of vertices actually represented: either the full window {0..N} of a
/// finite chain, or a finite slice of a semi-infinite chain whose discarded
/// reversible mass stays below eps_tail.
struct VertexWindow {
    enum class Kind { Finite, Truncated };

    Kind kind = Kind::Finite;
    int size = 0;           // M, number of represented vertices
    double eps_tail = 0.0;  // truncation budget; 0 for finite windows

    static VertexWindow finite(int max_coord) { return {Kind::Finite, max_coord + 1, 0.0}; }
    static VertexWindow truncated(int size, double eps_tail) {
        return {Kind::Truncated, size, eps_tail};
    }
    bool is_truncated() const { return kind == Kind::Truncated; }
    int max_coord() const { return size - 1; }
};

/// Undirected graph without self-loops.
struct Graph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    std::vector<int> degrees() const;
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool connected() const;
};

/// Nonnegative vector summing to one over the vertex window.
struct Distribution {
    Vector values;

    static Distribution delta(int size, int at);
    static Distribution uniform(int size);
    // Throws std::domain_error unless entries >= 0 and the sum is within
    // tol of one.
    static Distribution checked(Vector values, double tol = 1e-12);
};

/// Column-stochastic kernel K (entry (x,y) = probability of y -> x) together
/// with its reversible distribution. column_defect records max |1 - column
/// sum| over the represented window; it is nonzero only for truncated chains.
struct MarkovChain {
    VertexWindow window;
    Matrix kernel;
    Vector pi;
    double column_defect = 0.0;

    int size() const { return window.size; }
};

struct ValidationReport {
    double max_negativity = 0.0;
    double max_column_defect = 0.0;
    double max_reversibility_defect = 0.0;
    double pi_sum_defect = 0.0;
    double min_pi = 0.0;
    bool connected = false;
    double tolerance = 0.0;
    bool passed = false;

    std::string summary() const;
};

// Defect report for a kernel/distribution pair. Connectivity is breadth-first
// reachability on the support of K. Throws std::domain_error on dimension
// mismatch.
ValidationReport validate_chain(const Matrix& kernel, const Vector& pi, double tol);

// Chain-level validation: truncated chains widen the tolerance to
// max(tol, 10*eps_tail) and check column sums against the recorded
// column_defect budget instead of the raw tolerance.
ValidationReport validate_chain(const MarkovChain& chain, double tol);

// K(x,y) = 1/d(y) on edges, pi(x) = d(x)/2m. Throws on disconnected input,
// isolated vertices or self-loops.
MarkovChain simple_random_walk(const Graph& g);

// T(x,y) = K(x,y) sqrt(pi(y)/pi(x)); real symmetric for reversible input.
Matrix symmetrize(const MarkovChain& chain);

// H = I - T; real symmetric, positive semi-definite, ground energy 0.
Matrix hamiltonian(const MarkovChain& chain);

enum class SpectralSource { Analytic, Numerical };

/// Full eigen-data of the Hamiltonian: energies ascending (kappa descending,
/// kappa(0)=1 first for a valid chain), orthonormal eigenvector columns.
/// norm_consts carries the closed-form d_n for analytic family data and is
/// all ones for numerical decompositions.
struct SpectralData {
    Vector kappa;
    Vector energies;
    Matrix eigenvectors;
    Vector norm_consts;
    SpectralSource source = SpectralSource::Numerical;

    int size() const { return static_cast<int>(kappa.size()); }
};

// Numerical decomposition of a Hamiltonian (in-repo Jacobi). Energies
// ascending; eigenvector signs fixed so the largest-magnitude entry is
// positive. Throws std::domain_error for non-symmetric input.
SpectralData eigendecompose(const Matrix& h);

// K(x,y) = sqrt(pi(x)/pi(y)) sum_n kappa(n) phi_n(x) phi_n(y).
// Throws std::domain_error if any pi entry is <= 0.
Matrix spectral_reconstruct_K(const SpectralData& spec, const Vector& pi);

/// A chain paired with spectral data for it; the evolution layer consumes
/// this shape regardless of whether the data is analytic or numerical.
struct SpectralSystem {
    MarkovChain chain;
    SpectralData spectral;
};

}  // namespace qmc
