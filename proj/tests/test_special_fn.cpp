#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oamband/special_fn.hpp"
#include "support.hpp"

using namespace oamband;
using oamband::testing::rel_diff;
using cd = std::complex<double>;

namespace {

cd phi(cd z, int a) { return lerch_phi(z, LerchOrder(a)); }

cd naive_series(cd z, int a) {
    cd sum = 0.0;
    cd zk = 1.0;
    for (int k = 0; k < 2000; ++k) {
        sum += zk / static_cast<double>(k + a);
        zk *= z;
        if (std::abs(zk) < 1e-18) break;
    }
    return sum;
}

}  // namespace

TEST(LerchPhi, PointValues) {
    EXPECT_DOUBLE_EQ(phi(0.0, 3).real(), 1.0 / 3.0);
    EXPECT_NEAR(phi(0.5, 1).real(), 2.0 * std::log(2.0), 1e-14);
    // Exact value 2 (1 - 2 ln 1.5) = 0.37813956...
    EXPECT_NEAR(phi(-0.5, 2).real(), 2.0 * (1.0 - 2.0 * std::log(1.5)), 1e-15);
    EXPECT_NEAR(phi(-0.5, 2).real(), 0.3781397, 2e-7);
    EXPECT_LT(rel_diff(phi(-0.5, 2), (phi(-0.5, 1) - 1.0) / -0.5), 1e-14);
}

// Reference values computed with mpmath.lerchphi at 30 digits.
TEST(LerchPhi, FrozenReferenceValues) {
    struct Case {
        cd z;
        int a;
        cd value;
    };
    const Case cases[] = {
        {{-8.0, -2.0}, 4, {0.03374392320507426, -0.0071669257453516182}},
        {{0.3, 0.4}, 1, {1.0891035324499093, 0.27834900422186414}},
        {{0.3, 0.4}, 7, {0.1573263813924342, 0.075059131967495285}},
        {{-0.9, 0.0}, 2, {0.31869890596000645, 0.0}},
        {{2.0, 3.0}, 1, {0.25961965773696698, 0.55684395399031893}},
        {{2.0, 3.0}, 5, {-0.017385572882002405, 0.077978359595377896}},
        {{-50.0, 1.0}, 10, {0.0021725078263574334, 4.2494685786460435e-5}},
        {{0.0, 0.99}, 3, {0.21604363184272487, 0.15302120867814365}},
        {{-2.0, 0.0}, 1, {0.54930614433405485, 0.0}},
        {{5.0, -0.5}, 2, {-0.22847401070622049, -0.1478629378817832}},
        {{-1.5, 0.2}, 25, {0.01628594664127085, 0.0012813715803669552}},
    };
    for (const auto& c : cases) {
        EXPECT_LT(rel_diff(phi(c.z, c.a), c.value), 1e-12) << "z=" << c.z << " a=" << c.a;
    }
}

TEST(LerchPhi, RejectsBranchCutAndNonFinite) {
    EXPECT_THROW(phi(1.0, 1), DomainError);
    EXPECT_THROW(phi(3.0, 2), DomainError);
    EXPECT_THROW(phi(cd(2.0, 1e-14), 2), DomainError);
    EXPECT_THROW(phi(cd(std::nan(""), 0.0), 1), ValidationError);
    EXPECT_THROW(phi(cd(INFINITY, 0.0), 1), ValidationError);
    EXPECT_THROW(LerchOrder(0), ValidationError);
    // Just above and below the cut is fine, and the two sides differ.
    const cd above = phi(cd(2.0, 1e-6), 1);
    const cd below = phi(cd(2.0, -1e-6), 1);
    EXPECT_NEAR(above.imag(), -below.imag(), 1e-9);
    EXPECT_GT(std::abs(above.imag()), 1.0);
}

TEST(LerchPhi, RecurrenceRandomPoints) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> order(1, 60);
    for (int i = 0; i < 200; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-2, 1e2);
        const int a = order(rng);
        const cd lhs = phi(z, a);
        const cd rhs = 1.0 / static_cast<double>(a) + z * phi(z, a + 1);
        EXPECT_LT(rel_diff(rhs, lhs), 1e-10) << "z=" << z << " a=" << a;
    }
}

TEST(LerchPhi, OrderOneLogIdentity) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-3, 1e3);
        EXPECT_LT(rel_diff(phi(z, 1), -std::log(1.0 - z) / z), 1e-12) << "z=" << z;
    }
}

TEST(LerchPhi, DerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> order(1, 20);
    for (int i = 0; i < 100; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 0.05, 50.0, 0.2);
        const int a = order(rng);
        const double h = 1e-6 * std::abs(z);
        const cd fd = (phi(z + h, a) - phi(z - h, a)) / (2.0 * h);
        EXPECT_LT(rel_diff(lerch_phi_dz(z, LerchOrder(a)), fd), 1e-5) << "z=" << z << " a=" << a;
    }
}

TEST(LerchPhi, MatchesNaiveSeriesInsideDisk) {
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> order(1, 40);
    for (int i = 0; i < 200; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-3, 0.9);
        const int a = order(rng);
        EXPECT_LT(rel_diff(phi(z, a), naive_series(z, a)), 1e-12) << "z=" << z << " a=" << a;
    }
}

TEST(LerchPhi, MatchesIndependentIntegralQuadrature) {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> order(1, 60);
    for (int i = 0; i < 120; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-2, 1e3);
        const int a = order(rng);
        EXPECT_LT(rel_diff(phi(z, a), oamband::testing::lerch_reference(z, a)), 1e-9) << "z=" << z << " a=" << a;
    }
}

TEST(LerchLadder, MatchesDirectEvaluation) {
    for (cd z : {cd(-0.3, 0.1), cd(-1.2, 0.4), cd(-8.0, -2.0), cd(-800.0, 5.0), cd(0.4, 3.0), cd(3.0, 2.0)}) {
        LerchLadder ladder(z);
        for (int a = 1; a <= 80; ++a) {
            const cd v = ladder.next();
            ASSERT_EQ(ladder.order(), a);
            EXPECT_LT(rel_diff(v, phi(z, a)), 1e-11) << "z=" << z << " a=" << a;
        }
    }
}

TEST(LerchLadder, StaysAccurateAtHighOrder) {
    // 3000 upward steps against direct evaluation.
    const cd z(-8.0, -2.0);
    LerchLadder ladder(z);
    cd v;
    for (int a = 1; a <= 3000; ++a) v = ladder.next();
    EXPECT_LT(rel_diff(v, phi(z, 3000)), 1e-10);
}

TEST(Sinc, Values) {
    EXPECT_EQ(sinc(0.0), 1.0);
    EXPECT_NEAR(sinc(std::numbers::pi), 0.0, 1e-16);
    EXPECT_NEAR(sinc(1e-9), 1.0, 1e-17);
    EXPECT_DOUBLE_EQ(sinc(2.0), std::sin(2.0) / 2.0);
    // Continuity across the series switch.
    EXPECT_NEAR(sinc(0.99999e-4), std::sin(1e-4) / 1e-4, 1e-13);
}

TEST(Sinc, EvenExactly) {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> x(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = x(rng);
        EXPECT_EQ(sinc(-v), sinc(v));
    }
}
