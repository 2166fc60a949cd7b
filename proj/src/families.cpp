#include "qmc/families.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmc/parallel.hpp"
#include "qmc/specfun.hpp"

namespace qmc::families {

namespace sf = qmc::specfun;

namespace {

constexpr int kWindowCap = 4096;
// Tail-mass windows clip eigenvectors of moderate degree badly enough to
// spoil the eigen-data comparison, so the represented window is grown by
// this factor beyond the minimal tail-mass size.
constexpr int kSpectralWindowMargin = 3;
// Analytic eigenpair n counts as validated while the in-window mass deficit
// of phi_n and the eigen-equation residual stay below these budgets.
constexpr double kValidResidualTol = 1e-9;
constexpr double kValidMassFloor = 1e-12;

void require(bool ok, const std::string& family, const std::string& range) {
    if (!ok) throw std::domain_error(family + ": parameter range violated: " + range);
}

double exp_measure(long double log_value) { return static_cast<double>(expl(log_value)); }

}  // namespace

std::string family_name(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>) return "qhahn";
            else if constexpr (std::is_same_v<T, HahnSpec>) return "hahn";
            else if constexpr (std::is_same_v<T, KrawtchoukSpec>) return "krawtchouk";
            else if constexpr (std::is_same_v<T, CharlierSpec>) return "charlier";
            else return "meixner";
        },
        spec);
}

bool is_truncated(const FamilySpec& spec) {
    return std::holds_alternative<CharlierSpec>(spec) || std::holds_alternative<MeixnerSpec>(spec);
}

double composed_parameter(const KrawtchoukSpec& spec) {
    return spec.a * spec.b / (1.0 - spec.b + spec.a * spec.b);
}

double composed_parameter(const CharlierSpec& spec) { return spec.b / (1.0 - spec.a); }

void validate(const FamilySpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>) {
                require(s.N >= 1, "qhahn", "N >= 1");
                require(s.q > 0.0 && s.q < 1.0, "qhahn", "0 < q < 1");
                require(s.a > 0.0 && s.a < 1.0, "qhahn", "0 < a < 1");
                require(s.b > 0.0 && s.b < 1.0, "qhahn", "0 < b < 1");
                require(s.a * s.b > 0.0 && s.a * s.b < 1.0, "qhahn", "0 < ab < 1");
                require(s.c < 1.0, "qhahn", "c < 1");
                // constructive check: every q-factor of the three measures,
                // d_n^2 and kappa(n) must stay positive across the window
                for (int n = 0; n <= s.N; ++n) {
                    const double factors[] = {
                        1.0 - s.a * std::pow(s.q, n),         1.0 - s.b * std::pow(s.q, n),
                        1.0 - s.c * std::pow(s.q, n),         1.0 - s.a * s.b * std::pow(s.q, n),
                        1.0 - s.b * s.c * std::pow(s.q, n),
                        1.0 - s.a * s.b * s.c * std::pow(s.q, n)};
                    for (double f : factors)
                        require(f > 0.0, "qhahn", "all measure factors positive");
                }
                require(1.0 - s.a * s.b * s.c / s.q > 0.0, "qhahn", "1 - abc/q > 0");
            } else if constexpr (std::is_same_v<T, HahnSpec>) {
                require(s.N >= 1, "hahn", "N >= 1");
                require(s.a > 0.0, "hahn", "a > 0");
                require(s.b > 0.0, "hahn", "b > 0");
                require(s.c > 0.0, "hahn", "c > 0");
            } else if constexpr (std::is_same_v<T, KrawtchoukSpec>) {
                require(s.N >= 1, "krawtchouk", "N >= 1");
                require(s.a > 0.0 && s.a < 1.0, "krawtchouk", "0 < a < 1");
                require(s.b > 0.0 && s.b < 1.0, "krawtchouk", "0 < b < 1");
            } else if constexpr (std::is_same_v<T, CharlierSpec>) {
                require(s.a > 0.0 && s.a < 1.0, "charlier", "0 < a < 1");
                require(s.b > 0.0, "charlier", "b > 0");
                require(s.eps_tail > 0.0 && s.eps_tail < 1.0, "charlier", "0 < eps_tail < 1");
            } else {
                require(s.a > 0.0, "meixner", "a > 0");
                require(s.b > 0.0, "meixner", "b > 0");
                require(s.c > 0.0 && s.c < 1.0, "meixner", "0 < c < 1");
                require(s.eps_tail > 0.0 && s.eps_tail < 1.0, "meixner", "0 < eps_tail < 1");
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// measures

double qhahn_measure(int x, int N, double a, double b, double q) {
    if (x < 0 || x > N) throw std::domain_error("qhahn_measure: x outside window");
    const long double log_value =
        static_cast<long double>(sf::log_qbinom(N, x, q)) + sf::log_qpoch(a, q, x) +
        sf::log_qpoch(b, q, N - x) + static_cast<long double>(N - x) * logl(a) -
        sf::log_qpoch(a * b, q, N);
    return exp_measure(log_value);
}

double hahn_measure(int x, int N, double a, double b) {
    if (x < 0 || x > N) throw std::domain_error("hahn_measure: x outside window");
    const long double log_value = static_cast<long double>(sf::log_binom(N, x)) +
                                  sf::log_poch(a, x) + sf::log_poch(b, N - x) -
                                  sf::log_poch(a + b, N);
    return exp_measure(log_value);
}

double krawtchouk_measure(int x, int N, double a) {
    if (x < 0 || x > N) throw std::domain_error("krawtchouk_measure: x outside window");
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("krawtchouk_measure: requires 0 < a < 1");
    const long double log_value = static_cast<long double>(sf::log_binom(N, x)) +
                                  static_cast<long double>(x) * logl(a) +
                                  static_cast<long double>(N - x) * logl(1.0 - a);
    return exp_measure(log_value);
}

double charlier_measure(int x, double a) {
    if (x < 0) throw std::domain_error("charlier_measure: x outside window");
    if (!(a > 0.0)) throw std::domain_error("charlier_measure: requires a > 0");
    const long double log_value =
        static_cast<long double>(x) * logl(a) - static_cast<long double>(a) -
        static_cast<long double>(sf::log_factorial(x));
    return exp_measure(log_value);
}

double meixner_measure(int x, double a, double b) {
    if (x < 0) throw std::domain_error("meixner_measure: x outside window");
    if (!(a > 0.0 && b > 0.0 && b < 1.0))
        throw std::domain_error("meixner_measure: requires a > 0 and 0 < b < 1");
    const long double log_value =
        static_cast<long double>(sf::log_poch(a, x)) + static_cast<long double>(x) * logl(b) +
        static_cast<long double>(a) * logl(1.0 - b) -
        static_cast<long double>(sf::log_factorial(x));
    return exp_measure(log_value);
}

// ---------------------------------------------------------------------------
// kernels

double qhahn_kernel(int x, int y, int N, double a, double b, double c, double q) {
    long double sum = 0.0L;
    for (int z = 0; z <= std::min(x, y); ++z)
        sum += static_cast<long double>(qhahn_measure(x - z, N - z, b, c, q)) *
               qhahn_measure(z, y, a, b, q);
    return static_cast<double>(sum);
}

double hahn_kernel(int x, int y, int N, double a, double b, double c) {
    long double sum = 0.0L;
    for (int z = std::max(0, x + y - N); z <= std::min(x, y); ++z)
        sum += static_cast<long double>(hahn_measure(x - z, N - y, b, c)) *
               hahn_measure(z, y, a, b);
    return static_cast<double>(sum);
}

double krawtchouk_kernel(int x, int y, int N, double a, double b) {
    long double sum = 0.0L;
    for (int z = std::max(x, y); z <= N; ++z)
        sum += static_cast<long double>(krawtchouk_measure(x, z, b)) *
               krawtchouk_measure(z - y, N - y, a);
    return static_cast<double>(sum);
}

double charlier_kernel(int x, int y, double a, double b) {
    long double sum = 0.0L;
    for (int z = 0; z <= std::min(x, y); ++z)
        sum += static_cast<long double>(charlier_measure(x - z, b)) *
               krawtchouk_measure(z, y, a);
    return static_cast<double>(sum);
}

double meixner_kernel(int x, int y, double a, double b, double c) {
    long double sum = 0.0L;
    for (int z = 0; z <= std::min(x, y); ++z)
        sum += static_cast<long double>(meixner_measure(x - z, b, c)) *
               hahn_measure(z, y, a, b);
    return static_cast<double>(sum);
}

// ---------------------------------------------------------------------------
// polynomials

double qhahn_polynomial(int n, int x, int N, double a, double b, double q) {
    sf::HypSeriesParams params;
    params.numerator = {std::pow(q, -n), a * b * std::pow(q, n - 1), std::pow(q, -x)};
    params.denominator = {a, std::pow(q, -N)};
    params.q = q;
    params.z = q;
    return sf::qhyp_terminating(params);
}

double hahn_polynomial(int n, int x, int N, double a, double b) {
    sf::HypSeriesParams params;
    params.numerator = {static_cast<double>(-n), n + a + b - 1.0, static_cast<double>(-x)};
    params.denominator = {a, static_cast<double>(-N)};
    params.z = 1.0;
    return sf::hyp_terminating(params);
}

double krawtchouk_polynomial(int n, int x, int N, double a) {
    sf::HypSeriesParams params;
    params.numerator = {static_cast<double>(-n), static_cast<double>(-x)};
    params.denominator = {static_cast<double>(-N)};
    params.z = 1.0 / a;
    return sf::hyp_terminating(params);
}

double charlier_polynomial(int n, int x, double a) {
    sf::HypSeriesParams params;
    params.numerator = {static_cast<double>(-n), static_cast<double>(-x)};
    params.z = -1.0 / a;
    return sf::hyp_terminating(params);
}

double meixner_polynomial(int n, int x, double a, double b) {
    sf::HypSeriesParams params;
    params.numerator = {static_cast<double>(-n), static_cast<double>(-x)};
    params.denominator = {a};
    params.z = 1.0 - 1.0 / b;
    return sf::hyp_terminating(params);
}

// ---------------------------------------------------------------------------
// spec-level dispatch

double measure(const FamilySpec& spec, int x) {
    return std::visit(
        [x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>)
                return qhahn_measure(x, s.N, s.a, s.b, s.q);
            else if constexpr (std::is_same_v<T, HahnSpec>)
                return hahn_measure(x, s.N, s.a, s.b);
            else if constexpr (std::is_same_v<T, KrawtchoukSpec>)
                return krawtchouk_measure(x, s.N, s.a);
            else if constexpr (std::is_same_v<T, CharlierSpec>)
                return charlier_measure(x, s.a);
            else
                return meixner_measure(x, s.a, s.b);
        },
        spec);
}

double reversible_measure(const FamilySpec& spec, int x) {
    return std::visit(
        [x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>)
                return qhahn_measure(x, s.N, s.a * s.b, s.c, s.q);
            else if constexpr (std::is_same_v<T, HahnSpec>)
                return hahn_measure(x, s.N, s.a + s.b, s.b + s.c);
            else if constexpr (std::is_same_v<T, KrawtchoukSpec>)
                return krawtchouk_measure(x, s.N, composed_parameter(s));
            else if constexpr (std::is_same_v<T, CharlierSpec>)
                return charlier_measure(x, composed_parameter(s));
            else
                return meixner_measure(x, s.a + s.b, s.c);
        },
        spec);
}

double kernel(const FamilySpec& spec, int x, int y) {
    return std::visit(
        [x, y](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>)
                return qhahn_kernel(x, y, s.N, s.a, s.b, s.c, s.q);
            else if constexpr (std::is_same_v<T, HahnSpec>)
                return hahn_kernel(x, y, s.N, s.a, s.b, s.c);
            else if constexpr (std::is_same_v<T, KrawtchoukSpec>)
                return krawtchouk_kernel(x, y, s.N, s.a, s.b);
            else if constexpr (std::is_same_v<T, CharlierSpec>)
                return charlier_kernel(x, y, s.a, s.b);
            else
                return meixner_kernel(x, y, s.a, s.b, s.c);
        },
        spec);
}

double eigenvalue(const FamilySpec& spec, int n) {
    return std::visit(
        [n](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>) {
                const long double num = static_cast<long double>(sf::qpoch(s.a, s.q, n)) *
                                        sf::qpoch(s.c, s.q, n) *
                                        powl(static_cast<long double>(s.b), n);
                const long double den = static_cast<long double>(sf::qpoch(s.a * s.b, s.q, n)) *
                                        sf::qpoch(s.b * s.c, s.q, n);
                return static_cast<double>(num / den);
            } else if constexpr (std::is_same_v<T, HahnSpec>) {
                sf::HypSeriesParams params;
                params.numerator = {static_cast<double>(-n),
                                    n + s.a + 2.0 * s.b + s.c - 1.0, s.b};
                params.denominator = {s.a + s.b, s.b + s.c};
                params.z = 1.0;
                return sf::hyp_terminating(params);
            } else if constexpr (std::is_same_v<T, KrawtchoukSpec>) {
                return static_cast<double>(
                    powl(static_cast<long double>(1.0 - s.a) * s.b, n));
            } else if constexpr (std::is_same_v<T, CharlierSpec>) {
                return static_cast<double>(powl(static_cast<long double>(s.a), n));
            } else {
                return static_cast<double>(
                    static_cast<long double>(sf::poch(s.a, n)) / sf::poch(s.a + s.b, n));
            }
        },
        spec);
}

double polynomial(const FamilySpec& spec, int n, int x) {
    return std::visit(
        [n, x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>)
                return qhahn_polynomial(n, x, s.N, s.a * s.b, s.c, s.q);
            else if constexpr (std::is_same_v<T, HahnSpec>)
                return hahn_polynomial(n, x, s.N, s.a + s.b, s.b + s.c);
            else if constexpr (std::is_same_v<T, KrawtchoukSpec>)
                return krawtchouk_polynomial(n, x, s.N, composed_parameter(s));
            else if constexpr (std::is_same_v<T, CharlierSpec>)
                return charlier_polynomial(n, x, composed_parameter(s));
            else
                return meixner_polynomial(n, x, s.a + s.b, s.c);
        },
        spec);
}

double norm_const_sq(const FamilySpec& spec, int n) {
    return std::visit(
        [n](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QHahnSpec>) {
                const double alpha = s.a * s.b;  // composed first parameter
                const double beta = s.c;
                const double q = s.q;
                const long double num =
                    static_cast<long double>(sf::qbinom(s.N, n, q)) * sf::qpoch(alpha, q, n) *
                    sf::qpoch(alpha * beta / q, q, n) *
                    (1.0L - static_cast<long double>(alpha) * beta * powl(q, 2 * n - 1));
                const long double den =
                    static_cast<long double>(sf::qpoch(alpha * beta * std::pow(q, s.N), q, n)) *
                    sf::qpoch(beta, q, n) * powl(alpha, n) *
                    (1.0L - static_cast<long double>(alpha) * beta / q);
                return static_cast<double>(num / den);
            } else if constexpr (std::is_same_v<T, HahnSpec>) {
                const double alpha = s.a + s.b;
                const double beta = s.b + s.c;
                const long double num = static_cast<long double>(sf::binom(s.N, n)) *
                                        sf::poch(alpha, n) * (2.0L * n + alpha + beta - 1.0L) *
                                        sf::poch(alpha + beta, s.N);
                const long double den = static_cast<long double>(sf::poch(beta, n)) *
                                        sf::poch(n + alpha + beta - 1.0, s.N + 1);
                return static_cast<double>(num / den);
            } else if constexpr (std::is_same_v<T, KrawtchoukSpec>) {
                const double p = composed_parameter(s);
                return static_cast<double>(static_cast<long double>(sf::binom(s.N, n)) *
                                           powl(static_cast<long double>(p) / (1.0L - p), n));
            } else if constexpr (std::is_same_v<T, CharlierSpec>) {
                const double p = composed_parameter(s);
                return static_cast<double>(
                    expl(static_cast<long double>(n) * logl(p) - sf::log_factorial(n)));
            } else {
                const double alpha = s.a + s.b;
                return static_cast<double>(
                    expl(static_cast<long double>(sf::log_poch(alpha, n)) +
                         static_cast<long double>(n) * logl(s.c) - sf::log_factorial(n)));
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// windows and assembly

int window_size(const FamilySpec& spec) {
    if (!is_truncated(spec)) {
        return std::visit(
            [](const auto& s) -> int {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, QHahnSpec> || std::is_same_v<T, HahnSpec> ||
                              std::is_same_v<T, KrawtchoukSpec>)
                    return s.N + 1;
                else
                    return 0;
            },
            spec);
    }
    const double eps = std::holds_alternative<CharlierSpec>(spec)
                           ? std::get<CharlierSpec>(spec).eps_tail
                           : std::get<MeixnerSpec>(spec).eps_tail;
    long double mass = 0.0L;
    int minimal = 0;
    for (int m = 1; m <= kWindowCap; ++m) {
        mass += reversible_measure(spec, m - 1);
        if (1.0L - mass < static_cast<long double>(eps)) {
            minimal = m;
            break;
        }
    }
    if (minimal == 0)
        throw std::domain_error("window_size: tail mass does not reach eps_tail within cap " +
                                std::to_string(kWindowCap));
    return std::min(minimal * kSpectralWindowMargin, kWindowCap);
}

namespace {

MarkovChain assemble_chain(const FamilySpec& spec, int m) {
    MarkovChain chain;
    if (is_truncated(spec)) {
        const double eps = std::holds_alternative<CharlierSpec>(spec)
                               ? std::get<CharlierSpec>(spec).eps_tail
                               : std::get<MeixnerSpec>(spec).eps_tail;
        chain.window = VertexWindow::truncated(m, eps);
    } else {
        chain.window = VertexWindow::finite(m - 1);
    }
    chain.pi.resize(m);
    for (int x = 0; x < m; ++x) chain.pi[x] = reversible_measure(spec, x);
    chain.kernel = Matrix(m, m);
    parallel_for(static_cast<size_t>(m), [&](size_t xi) {
        const int x = static_cast<int>(xi);
        for (int y = 0; y < m; ++y) chain.kernel(x, y) = kernel(spec, x, y);
    });
    double defect = 0.0;
    for (int y = 0; y < m; ++y) {
        long double col = 0.0L;
        for (int x = 0; x < m; ++x) col += chain.kernel(x, y);
        defect = std::max(defect, std::abs(static_cast<double>(col) - 1.0));
    }
    chain.column_defect = chain.window.is_truncated() ? defect : 0.0;
    return chain;
}

}  // namespace

AnalyticEigenSystem build(const FamilySpec& spec) {
    validate(spec);
    const int m = window_size(spec);
    AnalyticEigenSystem sys;
    sys.spec = spec;
    sys.chain = assemble_chain(spec, m);
    sys.kappa_closed.resize(m);
    sys.norm_consts_closed.resize(m);
    for (int n = 0; n < m; ++n) {
        sys.kappa_closed[n] = eigenvalue(spec, n);
        sys.norm_consts_closed[n] = std::sqrt(norm_const_sq(spec, n));
    }

    if (!is_truncated(spec)) {
        SpectralData data;
        data.kappa = sys.kappa_closed;
        data.energies.resize(m);
        for (int n = 0; n < m; ++n) data.energies[n] = 1.0 - data.kappa[n];
        data.norm_consts = sys.norm_consts_closed;
        data.eigenvectors = Matrix(m, m);
        Vector root(m);
        for (int x = 0; x < m; ++x) root[x] = std::sqrt(sys.chain.pi[x]);
        parallel_for(static_cast<size_t>(m), [&](size_t ni) {
            const int n = static_cast<int>(ni);
            for (int x = 0; x < m; ++x)
                data.eigenvectors(x, n) =
                    root[x] * sys.norm_consts_closed[n] * polynomial(spec, n, x);
        });
        data.source = SpectralSource::Analytic;
        sys.spectral = std::move(data);
        sys.n_valid = m;
        return sys;
    }

    // Truncated family: numerical working basis, analytic range audited
    // against it.
    const Matrix h = hamiltonian(sys.chain);
    sys.spectral = eigendecompose(h);

    const double eps = sys.chain.window.eps_tail;
    const double mass_tol = std::max(10.0 * eps, kValidMassFloor);
    Vector root(m);
    for (int x = 0; x < m; ++x) root[x] = std::sqrt(sys.chain.pi[x]);
    int n_valid = 0;
    for (int n = 0; n < m; ++n) {
        Vector phi(m);
        for (int x = 0; x < m; ++x)
            phi[x] = root[x] * sys.norm_consts_closed[n] * polynomial(spec, n, x);
        long double mass = 0.0L;
        for (double v : phi) mass += static_cast<long double>(v) * v;
        if (std::abs(static_cast<double>(mass) - 1.0) > mass_tol) break;
        const Vector hphi = matvec(h, phi);
        const double energy = 1.0 - sys.kappa_closed[n];
        double residual = 0.0;
        for (int x = 0; x < m; ++x)
            residual = std::max(residual, std::abs(hphi[x] - energy * phi[x]));
        if (residual > kValidResidualTol) break;
        n_valid = n + 1;
    }
    sys.n_valid = n_valid;
    return sys;
}

}  // namespace qmc::families
