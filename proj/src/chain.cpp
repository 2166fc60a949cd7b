#include "qmc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "qmc/parallel.hpp"

namespace qmc {

std::vector<int> Graph::degrees() const {
    std::vector<int> d(vertex_count, 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            throw std::domain_error("Graph: edge endpoint out of range");
        if (u == v) throw std::domain_error("Graph: self-loop at vertex " + std::to_string(u));
        ++d[u];
        ++d[v];
    }
    return d;
}

bool Graph::connected() const {
    if (vertex_count <= 0) return false;
    std::vector<std::vector<int>> adj(vertex_count);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(vertex_count, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
    }
    return reached == vertex_count;
}

Distribution Distribution::delta(int size, int at) {
    if (at < 0 || at >= size) throw std::domain_error("Distribution::delta: index out of window");
    Distribution d;
    d.values.assign(size, 0.0);
    d.values[at] = 1.0;
    return d;
}

Distribution Distribution::uniform(int size) {
    Distribution d;
    d.values.assign(size, 1.0 / size);
    return d;
}

Distribution Distribution::checked(Vector values, double tol) {
    long double sum = 0.0L;
    for (double v : values) {
        if (v < 0.0) throw std::domain_error("Distribution: negative entry");
        sum += v;
    }
    if (std::abs(static_cast<double>(sum) - 1.0) > tol)
        throw std::domain_error("Distribution: sum deviates from 1 by more than tolerance");
    return Distribution{std::move(values)};
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "max_negativity=" << max_negativity
       << " max_column_defect=" << max_column_defect
       << " max_reversibility_defect=" << max_reversibility_defect
       << " pi_sum_defect=" << pi_sum_defect
       << " connected=" << (connected ? "yes" : "no")
       << " tolerance=" << tolerance
       << " => " << (passed ? "pass" : "FAIL");
    return os.str();
}

namespace {

bool support_connected(const Matrix& k) {
    const int n = k.rows();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v = 0; v < n; ++v) {
            if (!seen[v] && (k(u, v) != 0.0 || k(v, u) != 0.0)) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

ValidationReport compute_report(const Matrix& kernel, const Vector& pi) {
    const int n = kernel.rows();
    if (kernel.cols() != n)
        throw std::domain_error("validate_chain: kernel not square");
    if (static_cast<int>(pi.size()) != n)
        throw std::domain_error("validate_chain: pi length does not match kernel");

    ValidationReport report;
    report.min_pi = n > 0 ? *std::min_element(pi.begin(), pi.end()) : 0.0;
    long double pi_sum = 0.0L;
    for (double p : pi) pi_sum += p;
    report.pi_sum_defect = std::abs(static_cast<double>(pi_sum) - 1.0);

    for (int y = 0; y < n; ++y) {
        long double col = 0.0L;
        for (int x = 0; x < n; ++x) {
            const double value = kernel(x, y);
            if (value < 0.0) report.max_negativity = std::max(report.max_negativity, -value);
            col += value;
        }
        report.max_column_defect =
            std::max(report.max_column_defect, std::abs(static_cast<double>(col) - 1.0));
    }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            const double defect = std::abs(kernel(x, y) * pi[y] - kernel(y, x) * pi[x]);
            report.max_reversibility_defect = std::max(report.max_reversibility_defect, defect);
        }
    report.connected = support_connected(kernel);
    return report;
}

}  // namespace

ValidationReport validate_chain(const Matrix& kernel, const Vector& pi, double tol) {
    // Connectivity is reported but does not gate the defect verdict: the
    // identity kernel is reversible with respect to anything and validates
    // cleanly even though its support graph has no edges.
    ValidationReport report = compute_report(kernel, pi);
    report.tolerance = tol;
    report.passed = report.max_negativity <= tol && report.max_column_defect <= tol &&
                    report.max_reversibility_defect <= tol && report.pi_sum_defect <= tol &&
                    report.min_pi > 0.0;
    return report;
}

ValidationReport validate_chain(const MarkovChain& chain, double tol) {
    if (!chain.window.is_truncated()) return validate_chain(chain.kernel, chain.pi, tol);
    // Truncated chains: column sums are checked against the recorded budget;
    // everything else against the widened tolerance.
    const double widened = std::max(tol, 10.0 * chain.window.eps_tail);
    ValidationReport report = compute_report(chain.kernel, chain.pi);
    report.tolerance = widened;
    const double column_budget = chain.column_defect + widened;
    report.passed = report.max_negativity <= widened &&
                    report.max_column_defect <= column_budget &&
                    report.max_reversibility_defect <= widened &&
                    report.pi_sum_defect <= widened && report.min_pi > 0.0;
    return report;
}

MarkovChain simple_random_walk(const Graph& g) {
    const auto degree = g.degrees();
    if (g.vertex_count <= 0 || g.edge_count() < 1)
        throw std::domain_error("simple_random_walk: graph has no edges");
    for (int v = 0; v < g.vertex_count; ++v)
        if (degree[v] == 0)
            throw std::domain_error("simple_random_walk: isolated vertex " + std::to_string(v));
    if (!g.connected()) throw std::domain_error("simple_random_walk: graph not connected");

    const int n = g.vertex_count;
    MarkovChain chain;
    chain.window = VertexWindow::finite(n - 1);
    chain.kernel = Matrix(n, n);
    for (const auto& [u, v] : g.edges) {
        chain.kernel(u, v) = 1.0 / degree[v];
        chain.kernel(v, u) = 1.0 / degree[u];
    }
    chain.pi.resize(n);
    const double two_m = 2.0 * g.edge_count();
    for (int v = 0; v < n; ++v) chain.pi[v] = degree[v] / two_m;
    chain.column_defect = 0.0;
    return chain;
}

Matrix symmetrize(const MarkovChain& chain) {
    const int n = chain.size();
    for (int x = 0; x < n; ++x)
        if (!(chain.pi[x] > 0.0))
            throw std::domain_error("symmetrize: pi must be strictly positive");
    Vector root(n);
    for (int x = 0; x < n; ++x) root[x] = std::sqrt(chain.pi[x]);
    Matrix t(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) t(x, y) = chain.kernel(x, y) * root[y] / root[x];
    return t;
}

Matrix hamiltonian(const MarkovChain& chain) {
    Matrix h = symmetrize(chain);
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) h(i, j) = (i == j ? 1.0 : 0.0) - h(i, j);
    return h;
}

SpectralData eigendecompose(const Matrix& h) {
    EigenResult eig = jacobi_eigh(h);
    SpectralData data;
    data.energies = std::move(eig.values);
    data.eigenvectors = std::move(eig.vectors);
    const int n = static_cast<int>(data.energies.size());
    data.kappa.resize(n);
    for (int i = 0; i < n; ++i) data.kappa[i] = 1.0 - data.energies[i];
    data.norm_consts.assign(n, 1.0);
    data.source = SpectralSource::Numerical;
    return data;
}

Matrix spectral_reconstruct_K(const SpectralData& spec, const Vector& pi) {
    const int n = spec.size();
    if (static_cast<int>(pi.size()) != n)
        throw std::domain_error("spectral_reconstruct_K: pi length mismatch");
    for (double p : pi)
        if (!(p > 0.0)) throw std::domain_error("spectral_reconstruct_K: pi must be positive");
    Vector root(n);
    for (int x = 0; x < n; ++x) root[x] = std::sqrt(pi[x]);
    Matrix k(n, n);
    parallel_for(static_cast<size_t>(n), [&](size_t xi) {
        const int x = static_cast<int>(xi);
        for (int y = 0; y < n; ++y) {
            long double s = 0.0L;
            for (int m = 0; m < n; ++m)
                s += static_cast<long double>(spec.kappa[m]) * spec.eigenvectors(x, m) *
                     spec.eigenvectors(y, m);
            k(x, y) = static_cast<double>(s) * root[x] / root[y];
        }
    });
    return k;
}

}  // namespace qmc
