#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "qmc/families.hpp"
#include "qmc/specfun.hpp"

using namespace qmc;
using namespace qmc::families;

namespace {

const FamilySpec kQHahn = QHahnSpec{6, 0.3, 0.4, 0.2, 0.5};
const FamilySpec kHahn = HahnSpec{6, 1.5, 0.7, 2.0};
const FamilySpec kKraw = KrawtchoukSpec{8, 0.3, 0.6};
const FamilySpec kCharlier = CharlierSpec{0.4, 0.5, 1e-12};
const FamilySpec kMeixner = MeixnerSpec{1.2, 0.8, 0.4, 1e-12};

const std::vector<FamilySpec> kFinite = {kQHahn, kHahn, kKraw};
const std::vector<FamilySpec> kAll = {kQHahn, kHahn, kKraw, kCharlier, kMeixner};

}  // namespace

TEST_CASE("parameter validation names the violated range") {
    CHECK_THROWS_WITH_AS(validate(FamilySpec{KrawtchoukSpec{4, 1.2, 0.5}}),
                         doctest::Contains("0 < a < 1"), std::domain_error);
    CHECK_THROWS_WITH_AS(validate(FamilySpec{HahnSpec{4, 1.0, -0.5, 1.0}}),
                         doctest::Contains("b > 0"), std::domain_error);
    CHECK_THROWS_WITH_AS(validate(FamilySpec{QHahnSpec{4, 0.3, 0.4, 1.5, 0.5}}),
                         doctest::Contains("c < 1"), std::domain_error);
    CHECK_THROWS_WITH_AS(validate(FamilySpec{QHahnSpec{4, 0.3, 0.4, 0.2, 1.5}}),
                         doctest::Contains("0 < q < 1"), std::domain_error);
    CHECK_THROWS_WITH_AS(validate(FamilySpec{CharlierSpec{1.1, 0.5, 1e-12}}),
                         doctest::Contains("0 < a < 1"), std::domain_error);
    CHECK_THROWS_WITH_AS(validate(FamilySpec{MeixnerSpec{1.2, 0.8, 1.4, 1e-12}}),
                         doctest::Contains("0 < c < 1"), std::domain_error);
    CHECK_THROWS_AS(validate(FamilySpec{CharlierSpec{0.4, 0.5, 0.0}}), std::domain_error);
    for (const auto& spec : kAll) CHECK_NOTHROW(validate(spec));
}

TEST_CASE("measures are positive and normalised") {
    for (const auto& spec : kFinite) {
        const int n_top = window_size(spec) - 1;
        long double base = 0.0L, reversible = 0.0L;
        for (int x = 0; x <= n_top; ++x) {
            const double mu = measure(spec, x);
            const double rho = reversible_measure(spec, x);
            CHECK(mu > 0.0);
            CHECK(rho > 0.0);
            base += mu;
            reversible += rho;
        }
        CHECK(std::abs(static_cast<double>(base) - 1.0) < 1e-12);
        CHECK(std::abs(static_cast<double>(reversible) - 1.0) < 1e-12);
    }
    for (const auto& spec : std::vector<FamilySpec>{kCharlier, kMeixner}) {
        const int m = window_size(spec);
        long double reversible = 0.0L;
        for (int x = 0; x < m; ++x) reversible += reversible_measure(spec, x);
        CHECK(static_cast<double>(reversible) > 1.0 - 1e-12);
        CHECK(static_cast<double>(reversible) <= 1.0 + 1e-12);
    }
}

TEST_CASE("pinned measure values") {
    // Krawtchouk N=2, a=1/2: (1/4, 1/2, 1/4)
    CHECK(krawtchouk_measure(0, 2, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(krawtchouk_measure(1, 2, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(krawtchouk_measure(2, 2, 0.5) == doctest::Approx(0.25).epsilon(1e-14));

    // Charlier at the composed parameter: pi(0, p) = e^{-p}
    const double p = composed_parameter(std::get<CharlierSpec>(kCharlier));
    CHECK(reversible_measure(kCharlier, 0) == doctest::Approx(std::exp(-p)).epsilon(1e-14));

    // Hahn at x = N: (a)_N / (a+b)_N with the measure's own parameters
    const auto& hs = std::get<HahnSpec>(kHahn);
    const double a = hs.a + hs.b, b = hs.b + hs.c;
    const double want = static_cast<double>(oracles::poch_l(a, hs.N) /
                                            oracles::poch_l(a + b, hs.N));
    CHECK(hahn_measure(hs.N, hs.N, a, b) == doctest::Approx(want).epsilon(1e-13));
    // and at x = 0: (b)_N / (a+b)_N
    const double want0 = static_cast<double>(oracles::poch_l(b, hs.N) /
                                             oracles::poch_l(a + b, hs.N));
    CHECK(hahn_measure(0, hs.N, a, b) == doctest::Approx(want0).epsilon(1e-13));

    // q-Hahn closed forms at x = 0 and x = N
    const auto& qs = std::get<QHahnSpec>(kQHahn);
    const double ab = qs.a * qs.b;
    const double pi0 = static_cast<double>(
        oracles::qpoch_l(qs.c, qs.q, qs.N) * powl(ab, qs.N) /
        oracles::qpoch_l(ab * qs.c, qs.q, qs.N));
    const double piN = static_cast<double>(oracles::qpoch_l(ab, qs.q, qs.N) /
                                           oracles::qpoch_l(ab * qs.c, qs.q, qs.N));
    CHECK(reversible_measure(kQHahn, 0) == doctest::Approx(pi0).epsilon(1e-12));
    CHECK(reversible_measure(kQHahn, qs.N) == doctest::Approx(piN).epsilon(1e-12));

    // Meixner at x = 0: (1-c)^{a+b}
    const auto& ms = std::get<MeixnerSpec>(kMeixner);
    CHECK(reversible_measure(kMeixner, 0) ==
          doctest::Approx(std::pow(1.0 - ms.c, ms.a + ms.b)).epsilon(1e-13));

    CHECK_THROWS_AS(measure(kKraw, 9), std::domain_error);
    CHECK_THROWS_AS(measure(kKraw, -1), std::domain_error);
}

TEST_CASE("kernel columns are stochastic and positive") {
    for (const auto& spec : kFinite) {
        const int m = window_size(spec);
        for (int y = 0; y < m; ++y) {
            long double col = 0.0L;
            for (int x = 0; x < m; ++x) {
                const double value = kernel(spec, x, y);
                CHECK(value > 0.0);
                col += value;
            }
            CHECK(std::abs(static_cast<double>(col) - 1.0) < 1e-12);
        }
    }
    // truncated families conserve probability once the column sum is taken
    // past the window
    for (const auto& spec : std::vector<FamilySpec>{kCharlier, kMeixner}) {
        const int m = window_size(spec);
        const double eps = std::holds_alternative<CharlierSpec>(spec)
                               ? std::get<CharlierSpec>(spec).eps_tail
                               : std::get<MeixnerSpec>(spec).eps_tail;
        for (int y : {0, m / 2, m - 1}) {
            long double col = 0.0L;
            for (int x = 0; x < m + 300; ++x) col += kernel(spec, x, y);
            CHECK(std::abs(static_cast<double>(col) - 1.0) < 10.0 * eps);
        }
    }
}

TEST_CASE("Krawtchouk N=1 kernel against the hand-evaluated z-sum") {
    // K(x,y) = sum_{z=max(x,y)}^{1} pi_K(x,z,b) pi_K(z-y,1-y,a), a=b=1/2
    const double a = 0.5, b = 0.5;
    const double k00 = krawtchouk_measure(0, 0, b) * krawtchouk_measure(0, 1, a) +
                       krawtchouk_measure(0, 1, b) * krawtchouk_measure(1, 1, a);
    const double k10 = krawtchouk_measure(1, 1, b) * krawtchouk_measure(1, 1, a);
    const double k01 = krawtchouk_measure(0, 1, b) * krawtchouk_measure(0, 0, a);
    const double k11 = krawtchouk_measure(1, 1, b) * krawtchouk_measure(0, 0, a);
    CHECK(krawtchouk_kernel(0, 0, 1, a, b) == doctest::Approx(k00).epsilon(1e-15));
    CHECK(krawtchouk_kernel(1, 0, 1, a, b) == doctest::Approx(k10).epsilon(1e-15));
    CHECK(krawtchouk_kernel(0, 1, 1, a, b) == doctest::Approx(k01).epsilon(1e-15));
    CHECK(krawtchouk_kernel(1, 1, 1, a, b) == doctest::Approx(k11).epsilon(1e-15));
}

TEST_CASE("detailed balance holds entrywise") {
    for (const auto& spec : kAll) {
        const int m = std::min(window_size(spec), 40);
        double worst = 0.0;
        for (int x = 0; x < m; ++x)
            for (int y = 0; y <= x; ++y) {
                const double forward = kernel(spec, x, y) * reversible_measure(spec, y);
                const double backward = kernel(spec, y, x) * reversible_measure(spec, x);
                worst = std::max(worst, std::abs(forward - backward));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("eigenvalue closed forms") {
    for (const auto& spec : kAll) CHECK(eigenvalue(spec, 0) == 1.0);
    CHECK(eigenvalue(FamilySpec{KrawtchoukSpec{5, 0.5, 0.5}}, 1) == doctest::Approx(0.25));
    // Hahn a=b=c=1: kappa(1) = 1 - b(a+2b+c)/((a+b)(b+c)) = 0
    const FamilySpec flat = HahnSpec{5, 1.0, 1.0, 1.0};
    CHECK(std::abs(eigenvalue(flat, 1)) < 1e-12);
    CHECK(std::abs(oracles::hahn_kappa_direct(1, 1.0, 1.0, 1.0)) < 1e-15);
    // production 3F2 route against the direct binomial sum
    for (int n = 0; n <= 6; ++n) {
        const auto& hs = std::get<HahnSpec>(kHahn);
        CHECK(eigenvalue(kHahn, n) ==
              doctest::Approx(oracles::hahn_kappa_direct(n, hs.a, hs.b, hs.c)).epsilon(1e-12));
    }
    for (const auto& spec : kAll) {
        const int m = std::min(window_size(spec), 30);
        for (int n = 0; n < m; ++n) CHECK(std::abs(eigenvalue(spec, n)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("polynomials: normalisation at x=0 and pinned value") {
    for (const auto& spec : kAll)
        for (int n = 0; n < std::min(window_size(spec), 12); ++n)
            CHECK(polynomial(spec, n, 0) == 1.0);
    // Krawtchouk N=2 with parameter 1/3: P_1(1) = 1 - (1/(1/3))/2 = -1/2
    CHECK(krawtchouk_polynomial(1, 1, 2, 1.0 / 3.0) == -0.5);
}

TEST_CASE("x=N closed forms match the series evaluation") {
    const auto& qs = std::get<QHahnSpec>(kQHahn);
    for (int n = 0; n <= qs.N; ++n) {
        const double series = polynomial(kQHahn, n, qs.N);
        const double closed = oracles::qhahn_poly_at_N(n, qs.a * qs.b, qs.c, qs.q);
        CHECK(std::abs(series - closed) < 1e-10);
    }
    const auto& hs = std::get<HahnSpec>(kHahn);
    for (int n = 0; n <= hs.N; ++n) {
        const double series = polynomial(kHahn, n, hs.N);
        const double closed = oracles::hahn_poly_at_N(n, hs.a + hs.b, hs.b + hs.c);
        CHECK(std::abs(series - closed) < 1e-10);
    }
    const auto& ks = std::get<KrawtchoukSpec>(kKraw);
    const double p = composed_parameter(ks);
    for (int n = 0; n <= ks.N; ++n) {
        const double series = polynomial(kKraw, n, ks.N);
        const double closed = oracles::krawtchouk_poly_at_N(n, p);
        CHECK(std::abs(series - closed) < 1e-10);
    }
}

TEST_CASE("self-duality of the Krawtchouk and Meixner polynomials") {
    for (int n = 0; n <= 8; ++n)
        for (int x = 0; x <= 8; ++x) {
            const double diff_k =
                polynomial(kKraw, n, x) - polynomial(kKraw, x, n);
            CHECK(std::abs(diff_k) <=
                  1e-12 * std::max(1.0, std::abs(polynomial(kKraw, n, x))));
            const double diff_m =
                polynomial(kMeixner, n, x) - polynomial(kMeixner, x, n);
            CHECK(std::abs(diff_m) <=
                  1e-12 * std::max(1.0, std::abs(polynomial(kMeixner, n, x))));
        }
}

TEST_CASE("norm constants and the orthogonality relation") {
    CHECK(norm_const_sq(FamilySpec{KrawtchoukSpec{2, 0.25, 0.5}}, 0) == 1.0);
    CHECK(norm_const_sq(kCharlier, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm_const_sq(kMeixner, 0) == doctest::Approx(1.0).epsilon(1e-15));
    // Krawtchouk N=2 with composed parameter 1/3: d_1^2 = 2 * (1/3)/(2/3) = 1
    {
        // choose a, b with ab/(1-b+ab) = 1/3, e.g. b = 1/2, a = 1/2
        const FamilySpec spec = KrawtchoukSpec{2, 0.5, 0.5};
        CHECK(composed_parameter(std::get<KrawtchoukSpec>(spec)) ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(norm_const_sq(spec, 1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (const auto& spec : kAll) {
        const int m = window_size(spec);
        const int n_top = std::min(m, is_truncated(spec) ? 8 : m);
        for (int n = 0; n < n_top; ++n) {
            CHECK(norm_const_sq(spec, n) > 0.0);
            for (int k = 0; k < n_top; ++k) {
                long double sum = 0.0L;
                for (int x = 0; x < m; ++x)
                    sum += static_cast<long double>(reversible_measure(spec, x)) *
                           polynomial(spec, n, x) * polynomial(spec, k, x);
                const double want = (n == k) ? 1.0 / norm_const_sq(spec, n) : 0.0;
                CHECK(std::abs(static_cast<double>(sum) - want) < 1e-10);
            }
        }
    }
}

TEST_CASE("left eigenvector property of the polynomials") {
    for (const auto& spec : kAll) {
        const int m = window_size(spec);
        const int n_top = is_truncated(spec) ? 8 : m;
        // the window cuts the y-sum, and the bare polynomials grow with y, so
        // the identity only survives truncation away from the window edge
        const std::vector<int> probes =
            is_truncated(spec) ? std::vector<int>{0, m / 4, m / 3}
                               : std::vector<int>{0, m / 3, m - 1};
        for (int n = 0; n < n_top; ++n) {
            const double kap = eigenvalue(spec, n);
            for (int x : probes) {
                long double sum = 0.0L;
                long double scale = 1.0L;
                for (int y = 0; y < m; ++y) {
                    const long double term =
                        static_cast<long double>(kernel(spec, y, x)) * polynomial(spec, n, y);
                    sum += term;
                    scale = std::max(scale, fabsl(term));
                }
                const double want = kap * polynomial(spec, n, x);
                const double budget = is_truncated(spec) ? 1e-8 : 1e-9;
                CHECK(std::abs(static_cast<double>(sum) - want) <=
                      budget * static_cast<double>(scale));
            }
        }
    }
}

TEST_CASE("build: finite families carry analytic spectral data") {
    for (const auto& spec : kFinite) {
        const auto sys = build(spec);
        const int m = sys.chain.size();
        CHECK(sys.spectral.source == SpectralSource::Analytic);
        CHECK(sys.n_valid == m);
        CHECK(sys.chain.column_defect == 0.0);
        // column 0 is sqrt(pi)
        for (int x = 0; x < m; ++x)
            CHECK(sys.spectral.eigenvectors(x, 0) ==
                  doctest::Approx(std::sqrt(sys.chain.pi[x])).epsilon(1e-12));
        // numerical oracle match on the eigenvalues
        const auto numerical = eigendecompose(hamiltonian(sys.chain));
        for (int n = 0; n < m; ++n)
            CHECK(std::abs(numerical.kappa[n] - sys.kappa_closed[n]) < 1e-10);
    }
}

TEST_CASE("build: truncated families audit the analytic range") {
    for (const auto& spec : std::vector<FamilySpec>{kCharlier, kMeixner}) {
        const auto sys = build(spec);
        CHECK(sys.spectral.source == SpectralSource::Numerical);
        CHECK(sys.chain.window.is_truncated());
        for (int x = 0; x < sys.chain.size(); ++x)
            for (int y = 0; y < sys.chain.size(); ++y)
                CHECK(sys.chain.kernel(x, y) > 0.0);
        CHECK(sys.n_valid >= 8);
        CHECK(sys.n_valid <= sys.chain.size());
        // analytic kappa matches the numerical decomposition over the
        // validated range
        for (int n = 0; n < sys.n_valid; ++n)
            CHECK(std::abs(sys.spectral.kappa[n] - sys.kappa_closed[n]) < 1e-9);
        // tail bound honoured by the window
        long double mass = 0.0L;
        for (int x = 0; x < sys.chain.size(); ++x) mass += sys.chain.pi[x];
        CHECK(1.0 - static_cast<double>(mass) < sys.chain.window.eps_tail);
    }
}

TEST_CASE("build: Charlier residuals over the validated range") {
    const auto sys = build(kCharlier);
    const Matrix h = hamiltonian(sys.chain);
    const int m = sys.chain.size();
    for (int n = 0; n < sys.n_valid; ++n) {
        Vector phi(m);
        for (int x = 0; x < m; ++x)
            phi[x] = std::sqrt(sys.chain.pi[x]) * sys.norm_consts_closed[n] *
                     polynomial(kCharlier, n, x);
        const Vector hphi = matvec(h, phi);
        double residual = 0.0;
        for (int x = 0; x < m; ++x)
            residual = std::max(residual,
                                std::abs(hphi[x] - (1.0 - sys.kappa_closed[n]) * phi[x]));
        CHECK(residual <= 1e-9);
    }
}
