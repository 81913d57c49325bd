#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "oracles.hpp"

#include "hinv/catalog.hpp"
#include "hinv/hfunction.hpp"
#include "hinv/periodic.hpp"
#include "hinv/tanh_sinh.hpp"

using namespace hinv;
using oracle::pi;

namespace {

double ln_sec(double t) { return -std::log(std::cos(0.5 * pi * wrap(t))); }

}  // namespace

TEST_CASE("tanh-sinh grid invariants")
{
    for (int m : {64, 1000, 2000}) {
        const TanhSinhGrid g(m);
        CHECK(g.step() == doctest::Approx(2.0 / m));
        const auto t = g.nodes();
        const auto w = g.weights();
        double sum = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(t[k] > -1.0);
            CHECK(t[k] < 1.0);
            if (k > 0) CHECK(t[k] > t[k - 1]);
            CHECK(t[k] == -t[t.size() - 1 - k]);
            CHECK(w[k] > 0.0);
            CHECK(w[k] == w[t.size() - 1 - k]);
            sum += w[k];
        }
        CHECK(std::fabs(sum - 2.0) < 1e-10);
    }
    const std::string csv = TanhSinhGrid(64).to_csv();
    CHECK(csv.rfind("k,node,complement,weight\n", 0) == 0);
}

TEST_CASE("quad")
{
    const TanhSinhGrid g(1000);
    CHECK(quad(g, [](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(quad(g, [](double t) { return t; })) < 1e-14);

    const double ref = oracle::integrate(ln_sec, -1.0, 0.0) + oracle::integrate(ln_sec, 0.0, 1.0);
    CHECK(std::fabs(ref - 2.0 * std::log(2.0)) < 1e-9);
    CHECK(std::fabs(quad(g, ln_sec) - ref) < 1e-8);

    try {
        quad(g, [](double t) { return t > 0.5 ? std::nan("") : 1.0; });
        FAIL("expected an error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("periodic Poisson kernel")
{
    CHECK_THROWS_AS(periodic_poisson_kernel(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(periodic_poisson_kernel(-1.0, 0.1), std::domain_error);
    for (double th : {0.0, 0.3, 0.9, 1.0})
        CHECK(std::fabs(periodic_poisson_kernel(10.0, th) - 0.5) < 1e-8);
    CHECK(periodic_poisson_kernel(1e3, 0.2) == 0.5);

    // The truncated lattice sum misses a tail of about y / (2 pi N); with that tail
    // restored it matches the closed form to 1e-6.
    const int n = 10000;
    for (double th : {0.0, 0.3}) {
        const double args[] = {1.0, th};
        const double partial = lattice_sum_oracle(LatticeKind::poisson, args, n);
        const double closed = periodic_poisson_kernel(1.0, th);
        CHECK(std::fabs(partial - closed) < 1e-4);
        CHECK(std::fabs(partial + 1.0 / (2.0 * pi * n) - closed) < 1e-6);
    }

    const TanhSinhGrid g(1000);
    for (double y : {0.05, 0.3, 1.0, 5.0, 20.0}) {
        const double edges[] = {-1.0, 0.0, 1.0};
        const double total = g.integrate_pieces(edges, [y](double t) { return periodic_poisson_kernel(y, t); });
        CHECK(std::fabs(total - 1.0) < 1e-8);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double y = 0.01 + std::fabs(u(rng)), th = u(rng);
        const double k = periodic_poisson_kernel(y, th);
        CHECK(k > 0.0);
        CHECK(k == periodic_poisson_kernel(y, -th));
        CHECK(k == doctest::Approx(periodic_poisson_kernel(y, th + 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("cotangent lattice sum")
{
    const double t[] = {0.5};
    const double mt[] = {-0.5};
    const double partial = lattice_sum_oracle(LatticeKind::cotangent, t, 100000);
    CHECK(std::fabs(partial - (0.5 * pi / std::tan(0.25 * pi) - 2.0)) < 1e-4);
    CHECK(lattice_sum_oracle(LatticeKind::cotangent, mt, 100000) == -partial);
    CHECK_THROWS(lattice_sum_oracle(LatticeKind::cotangent, t, 0));
}

TEST_CASE("Poisson integral")
{
    const TanhSinhGrid g(1000);
    const double breaks[] = {0.0, 1.0};
    for (double x : {-0.7, 0.0, 0.4}) {
        for (double y : {0.01, 0.5, 3.0}) CHECK(poisson_integral([](double) { return 2.5; }, x, y, g) ==
                                                doctest::Approx(2.5).epsilon(1e-12));
    }
    const GInverse hp(catalog_get("half-plane").h);
    const double mean = 0.5 * quad(g, [&](double t) { return log_g(hp, t); });
    CHECK(mean == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(std::fabs(poisson_integral([&](double t) { return log_g(hp, t); }, 0.0, 10.0, g, breaks) - mean) < 1e-6);

    const GInverse disk(catalog_get("disk").h);
    CHECK(poisson_integral([&](double t) { return log_g(disk, t); }, 0.3, 0.2, g) == 0.0);
    CHECK_THROWS_AS(poisson_integral([](double) { return 1.0; }, 0.0, 0.0, g), std::domain_error);

    // Tabulated values give the same answer as the callable.
    const auto layout = poisson_nodes(0.3, g, breaks);
    std::vector<double> vals;
    for (double t : layout.positions) vals.push_back(log_g(hp, t));
    CHECK(poisson_integral(layout, vals, 0.7) ==
          poisson_integral([&](double t) { return log_g(hp, t); }, 0.3, 0.7, g, breaks));

    // Against a Gauss-Kronrod evaluation of the same integral.
    const double x = 0.3, y = 0.2;
    auto integrand = [&](double t) { return periodic_poisson_kernel(y, x - t) * ln_sec(t); };
    const double ref = oracle::integrate(integrand, -1.0, 0.0) + oracle::integrate(integrand, 0.0, x) +
                       oracle::integrate(integrand, x, 1.0);
    CHECK(std::fabs(poisson_integral(ln_sec, x, y, g, breaks) - ref) < 1e-9);
}

TEST_CASE("Hilbert transform")
{
    const TanhSinhGrid g(2000);
    const PeriodicKernelConfig cfg;
    CHECK(std::fabs(hilbert_transform([](double) { return 3.0; }, 0.4, g, cfg)) < 1e-14);

    const double breaks[] = {0.0, 1.0};
    double worst = 0.0;
    for (int i = 0; i <= 36; ++i) {
        const double s = -0.9 + 1.8 * i / 36.0;
        worst = std::max(worst, std::fabs(hilbert_transform(ln_sec, s, g, cfg, breaks) + 0.5 * pi * s));
    }
    CHECK(worst < 1e-4);

    // Periodized indicator of [1/2, 3/2).
    auto indicator = [](double t) {
        const double w = wrap(t);
        return (w >= 0.5 || w < -0.5) ? 1.0 : 0.0;
    };
    const double jumps[] = {0.5, 1.5};
    const double x = 0.25;
    const double ref = oracle::indicator_hilbert_sum(0.5, 1.5, x, 10000);
    CHECK(std::fabs(hilbert_transform(indicator, x, g, cfg, jumps) - ref) < 1e-4);
    CHECK(std::fabs(hilbert_of_periodic_indicator(0.5, 1.5, x) - ref) < 1e-4);

    PeriodicKernelConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS(hilbert_transform(ln_sec, 0.2, g, bad));
    bad.epsilon = 1e-12;
    bad.oracle_terms = 0;
    CHECK_THROWS(bad.validate());

    // The split points bracket every breakpoint of the symmetrized integrand.
    const auto pts = hilbert_split_points(0.3, 1e-12, breaks);
    CHECK(pts.front() == 1e-12);
    CHECK(pts.back() == 1.0);
    CHECK(std::find(pts.begin(), pts.end(), 0.3) != pts.end());
    CHECK(std::find_if(pts.begin(), pts.end(), [](double t) { return std::fabs(t - 0.7) < 1e-15; }) != pts.end());
}
