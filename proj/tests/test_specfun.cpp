#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ctinv/specfun.hpp"

using ctinv::cplx;
using ctinv::RiccatiPair;
namespace sf = ctinv::specfun;

namespace {

constexpr double pi = std::numbers::pi;

void expect_rel(cplx got, cplx want, double tol, const char* what) {
    const double err = std::abs(got - want);
    EXPECT_LE(err, tol * std::abs(want)) << what << ": got " << got << " want " << want;
}

struct Reference {
    cplx order;
    double x;
    cplx u, du, v, dv;
};

// 50-digit values of sqrt(pi x/2) J_{nu+1/2}(x), -sqrt(pi x/2) Y_{nu+1/2}(x)
// and their x-derivatives (mpmath besselj/bessely, numerical differentiation
// at 50 digits).
const std::vector<Reference> references = {
    {0.5, 1.0, {0.55152162024809192202, 0}, {0.68327226828016845023, 0},
     {0.979105073187779412, 0}, {-0.60016623756194584884, 0}},
    {0.5, 7.5, {0.46421887508368060567, 0}, {0.88322090182634375422, 0},
     {0.88941770187371038371, 0}, {-0.46195384712034982665, 0}},
    {0.9392, 0.01, {0.000047967416231820592039, 0}, {0.009301743029257828908, 0},
     {72.430709753131982745, 0}, {-6801.8704378988000082, 0}},
    {{-0.581, -0.085}, 2.5, {-0.22220519741552797091, -0.1320997429697956028},
     {-0.99370047530286266854, 0.030327003113432320615},
     {-0.97585139976228512137, 0.029619612987636662431},
     {0.22041095050281853416, 0.13461180198163351891}},
    {{-0.581, -0.085}, 40.0, {-0.069353855159816059351, -0.13376607769070203609},
     {-1.0066026329083170799, 0.0092197221452304714936},
     {-1.0065237558361506085, 0.0092149281876636505169},
     {0.069357891447712244719, 0.13377637364078515435}},
    {10.0001, 3.0, {0.00001057592234358083826, 0}, {0.000037377039105858756763, 0},
     {14102.216464883648786, 0}, {-44714.861583660412841, 0}},
    {10.0001, 30.0, {-0.43577602098140062705, 0}, {-0.87665808290012729126, 0},
     {-0.93664124167956792151, 0}, {0.41049960551094714512, 0}},
    {7.0001, 0.5, {1.9122992075071759293e-9, 0}, {3.0540882755140752383e-8, 0},
     {17470368.810584073537, 0}, {-243915550.78607315181, 0}},
    {{3.3, 1.5}, 5.0, {1.7494949560721081496, -0.61169138083709408389},
     {0.92261963639885316517, 0.81796095764846875232},
     {0.84535653147570878088, 1.4934924372497899507},
     {-1.1028083855828426915, 0.79726763340649030358}},
    {19.7, 12.0, {0.00086801399221019805511, 0}, {0.0012295127962526479072, 0},
     {426.16942490685977179, 0}, {-548.40042093481747375, 0}},
    {-0.0893, 55.0, {-0.98695458756181961191, 0}, {0.16095907978848025817, 0},
     {0.16095715822121966449, 0}, {0.98696788707750921836, 0}},
    {{2.232, -0.205}, 0.001, {-2.0028003562345278335e-12, 8.5997003277105680915e-12},
     {-4.7101118535505186251e-9, 2.8204804398192554618e-8},
     {-3168748.1811156328734, -20424554.483954186337},
     {11259679395.571743689, 44938006309.506014925}},
    {-0.8, 1.3, {0.58582186896351522883, 0}, {-0.80581309236496937902, 0},
     {-0.79128451619607938566, 0}, {-0.61857126929156515437, 0}},
    {-3.5, 4.0, {-1.0782799793563247312, 0}, {-0.23880891888406359854, 0},
     {-0.45626178245716804333, 0}, {0.82635366886362047165, 0}},
};

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return xs;
}

}  // namespace

TEST(Gamma, MatchesHighPrecisionValues) {
    expect_rel(sf::gamma({0.3, 1.7}), {0.071091832537680393668, -0.13937742326232289687}, 1e-13,
               "gamma(0.3+1.7i)");
    expect_rel(sf::gamma({-2.4, 0.2}), {-0.84226959555476201962, -0.34925167660423606078}, 1e-13,
               "gamma(-2.4+0.2i)");
    expect_rel(sf::gamma(5.5), 52.342777784553520181, 1e-13, "gamma(5.5)");
    expect_rel(sf::gamma(6.0), 120.0, 1e-13, "gamma(6)");
}

TEST(Gamma, ReciprocalVanishesAtPoles) {
    EXPECT_EQ(sf::rgamma(0.0), cplx(0.0));
    EXPECT_EQ(sf::rgamma(-3.0), cplx(0.0));
    EXPECT_THROW(sf::gamma(-2.0), ctinv::DomainError);
}

TEST(RiccatiBessel, OrderZeroIsSineCosine) {
    const RiccatiPair r = sf::riccati_bessel(0.0, pi / 2);
    EXPECT_NEAR(std::abs(r.u - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r.du), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r.v), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r.dv + 1.0), 0.0, 1e-14);
    for (double x : {0.003, 0.7, 3.0, 17.0, 59.0}) {
        const RiccatiPair s = sf::riccati_bessel(0.0, x);
        expect_rel(s.u, std::sin(x), 1e-13, "sin");
        expect_rel(s.v, std::cos(x), 1e-13, "cos");
    }
}

TEST(RiccatiBessel, OrderOneClosedForm) {
    const RiccatiPair r = sf::riccati_bessel(1.0, pi);
    EXPECT_NEAR(r.u.real(), 1.0, 1e-13);
    for (double x : {0.05, 1.0, 6.0, 25.0}) {
        const RiccatiPair s = sf::riccati_bessel(1.0, x);
        expect_rel(s.u, std::sin(x) / x - std::cos(x), 1e-12, "u_1");
        expect_rel(s.v, std::cos(x) / x + std::sin(x), 1e-12, "v_1");
    }
}

TEST(RiccatiBessel, MatchesHighPrecisionOracle) {
    for (const auto& ref : references) {
        SCOPED_TRACE(::testing::Message() << "order " << ref.order << " x " << ref.x);
        const RiccatiPair r = sf::riccati_bessel(ref.order, ref.x);
        expect_rel(r.u, ref.u, 1e-9, "u");
        expect_rel(r.du, ref.du, 1e-9, "du");
        expect_rel(r.v, ref.v, 1e-9, "v");
        expect_rel(r.dv, ref.dv, 1e-9, "dv");
    }
}

TEST(RiccatiBessel, SweepAgreesWithPointwise) {
    const std::vector<double> xs = {45.0, 0.2, 3.3, 1.9, 2.1, 12.0, 0.01};
    for (cplx order : {cplx(0.9392), cplx(-0.581, -0.085), cplx(-1.7, 0.3)}) {
        const auto sweep = sf::riccati_bessel(order, std::span<const double>(xs));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const RiccatiPair p = sf::riccati_bessel(order, xs[i]);
            expect_rel(sweep[i].u, p.u, 1e-12, "u");
            expect_rel(sweep[i].v, p.v, 1e-12, "v");
        }
    }
}

TEST(RiccatiBessel, AsymptoticPhase) {
    for (cplx order : {cplx(2.5), cplx(0.9392), cplx(1.358, -0.103)}) {
        const double x = 400.0;
        const RiccatiPair r = sf::riccati_bessel(order, x);
        const cplx phase = x - 0.5 * pi * order;
        const double correction = std::abs(ctinv::angular_eigenvalue(order)) / x;
        EXPECT_LT(std::abs(r.u - std::sin(phase)), correction);
        EXPECT_LT(std::abs(r.v - std::cos(phase)), correction);
    }
}

TEST(RiccatiBessel, RejectsNonPositiveArgument) {
    EXPECT_THROW(sf::riccati_bessel(0.5, 0.0), ctinv::DomainError);
    EXPECT_THROW(sf::riccati_bessel(0.5, -1.0), ctinv::DomainError);
    EXPECT_THROW(sf::riccati_bessel(0.5, std::nan("")), ctinv::DomainError);
}

// Property: constant Wronskian -1 for every order whose u is regular at the
// origin (Re nu >= -1).
TEST(RiccatiBessel, WronskianIdentityOverEnvelope) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> re(-1.0, 20.0);
    std::uniform_real_distribution<double> im(-2.0, 2.0);
    const auto xs = log_spaced(1e-3, 60.0, 41);
    for (int trial = 0; trial < 40; ++trial) {
        const cplx order(re(rng), trial % 2 ? im(rng) : 0.0);
        const auto values = sf::riccati_bessel(order, std::span<const double>(xs));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const cplx w = values[i].wronskian();
            ASSERT_LT(std::abs(w + 1.0), 1e-10) << "order " << order << " x " << xs[i];
        }
    }
}

// Below Re nu = -1 both solutions are singular at the origin and W = -1 is the
// difference of two products of size |u v'|; only relative accuracy survives.
TEST(RiccatiBessel, WronskianRelativeForStronglyNegativeOrders) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-20.0, -1.0);
    std::uniform_real_distribution<double> im(-2.0, 2.0);
    const auto xs = log_spaced(1e-3, 60.0, 41);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx order(re(rng), trial % 2 ? im(rng) : 0.0);
        const auto values = sf::riccati_bessel(order, std::span<const double>(xs));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const RiccatiPair& r = values[i];
            const double scale = std::abs(r.u * r.dv) + std::abs(r.du * r.v);
            ASSERT_LT(std::abs(r.wronskian() + 1.0), 1e-10 * std::max(1.0, scale))
                << "order " << order << " x " << xs[i];
        }
    }
}

TEST(RiccatiBessel, ContinuousInOrderAtIntegers) {
    for (int l = 0; l <= 6; ++l) {
        for (double x : {0.4, 2.0, 9.0}) {
            const RiccatiPair exact = sf::riccati_bessel(static_cast<double>(l), x);
            for (double eps : {1e-7, -1e-7}) {
                const RiccatiPair near = sf::riccati_bessel(l + eps, x);
                EXPECT_LE(std::abs(near.u - exact.u), 1e-6 * std::max(1.0, std::abs(exact.u)));
                EXPECT_LE(std::abs(near.v - exact.v), 1e-6 * std::max(1.0, std::abs(exact.v)));
            }
        }
    }
}

TEST(CrossWronskian, EqualOrdersGiveMinusOne) {
    for (int l : {0, 1, 4, 9})
        for (double x : {0.01, 1.0, 30.0})
            EXPECT_LT(std::abs(sf::cross_wronskian(static_cast<double>(l), l, x) + 1.0), 1e-10);
}

TEST(CrossWronskian, MatchesOracle) {
    // W[u_{0.9386}, v_0](2) from 50-digit Bessel values.
    expect_rel(sf::cross_wronskian(0.9386, 0, 2.0), -0.62970638553144631655, 1e-10, "W");
}

// d/dx W[u_L, v_l] = u_L v_l (l(l+1) - L(L+1)) / x^2 against central differences.
TEST(CrossWronskian, DerivativeLaw) {
    const double h = 1e-5;
    for (cplx L : {cplx(0.9386), cplx(-0.581, -0.085), cplx(2.349, -0.192)}) {
        for (int l : {0, 1, 3}) {
            for (double x : {0.5, 2.0, 7.0, 20.0}) {
                const cplx fd =
                    (sf::cross_wronskian(L, l, x + h) - sf::cross_wronskian(L, l, x - h)) / (2 * h);
                const RiccatiPair a = sf::riccati_bessel(L, x);
                const RiccatiPair b = sf::riccati_bessel(cplx(l), x);
                const cplx law = a.u * b.v *
                                 (ctinv::angular_eigenvalue(cplx(l)) - ctinv::angular_eigenvalue(L)) /
                                 (x * x);
                EXPECT_LE(std::abs(fd - law), 1e-7 * std::max(1.0, std::abs(law)))
                    << "L " << L << " l " << l << " x " << x;
            }
        }
    }
}
