#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "polyrat/cf_interp.hpp"
#include "polyrat/k11.hpp"

using namespace polyrat;
using namespace polyrat::k11;
using Cplx = polyrat::Complex;

namespace {

Cplx rand_c(std::mt19937_64& rng, double scale)
{
    std::normal_distribution<double> g;
    return scale * Cplx(g(rng), g(rng));
}

cf::CFData data_from_point(Cplx c01, Cplx c10, Cplx c11)
{
    MultiIndexBox box({1, 1});
    Eigen::VectorXcd c(4);
    c[box.index_of({0, 0})] = 1.0;
    c[box.index_of({0, 1})] = c01;
    c[box.index_of({1, 0})] = c10;
    c[box.index_of({1, 1})] = c11;
    return cf::CFData(box, c);
}

} // namespace

TEST(K11Check, Origin)
{
    K11Verdict v = k11_check(0.0, 0.0, 0.0);
    EXPECT_TRUE(v.member);
    EXPECT_DOUBLE_EQ(v.slack1, 4.0);
    EXPECT_DOUBLE_EQ(v.slack2, 2.0);
}

TEST(K11Check, BoundaryWitnessPoint)
{
    K11Verdict v = k11_check(2.0, 0.0, 0.0);
    EXPECT_TRUE(v.member);
    EXPECT_DOUBLE_EQ(v.slack1, 0.0);
    EXPECT_DOUBLE_EQ(v.slack2, 0.0);
}

TEST(K11Check, ViolationOfFirstInequality)
{
    K11Verdict v = k11_check(0.0, 0.0, 3.0);
    EXPECT_FALSE(v.member);
    EXPECT_DOUBLE_EQ(v.slack1, -2.0);
}

TEST(K11Construct, OriginGivesConstantOne)
{
    K11Interpolant phi = k11_construct(0.0, 0.0, 0.0);
    EXPECT_FALSE(phi.degenerate_branch);
    EXPECT_EQ(phi.sigma, Cplx(0.0));
    EXPECT_EQ(phi.taylor[0], Cplx(1.0));
    for (int i = 1; i < 4; ++i)
        EXPECT_EQ(phi.taylor[static_cast<std::size_t>(i)], Cplx(0.0));
    EXPECT_LT(std::abs(phi.eval(0.3, -0.4) - 1.0), 1e-15);
}

TEST(K11Construct, PureC11)
{
    // (0,0,1): sigma = 1/2, g = zw/2, phi = (1+zw/2)/(1-zw/2) has c11 = 1.
    K11Interpolant phi = k11_construct(0.0, 0.0, 1.0);
    EXPECT_NEAR(std::abs(phi.sigma - 0.5), 0.0, 1e-15);
    EXPECT_LT(std::abs(phi.g_num.coeff({1, 1}) - 0.5), 1e-15);
    EXPECT_LT(std::abs(phi.taylor[3] - 1.0), 1e-14);
}

TEST(K11Construct, DegenerateWitness)
{
    // c01 = 2 tau: psi = (1 + tau w)/(1 - tau w).
    const Cplx tau = std::polar(1.0, 0.7);
    K11Interpolant phi = k11_construct(2.0 * tau, 0.0, 0.0);
    EXPECT_TRUE(phi.degenerate_branch);
    EXPECT_LT(std::abs(phi.g_num.coeff({0, 1}) - tau), 1e-15);
    EXPECT_LT(std::abs(phi.taylor[1] - 2.0 * tau), 1e-14);
    // matches (1 + tau w)/(1 - tau w) pointwise
    const Cplx w(0.3, 0.25);
    EXPECT_LT(std::abs(phi.eval(0.6, w) - (1.0 + tau * w) / (1.0 - tau * w)), 1e-14);
}

TEST(K11Construct, ReproducesDataAndPositive)
{
    std::mt19937_64 rng(7);
    int used = 0;
    for (int trial = 0; trial < 3000 && used < 100; ++trial) {
        const Cplx c01 = rand_c(rng, 0.8), c10 = rand_c(rng, 0.8), c11 = rand_c(rng, 0.8);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++used;
        K11Interpolant phi = k11_construct(c01, c10, c11);
        EXPECT_LT(std::abs(phi.taylor[0] - 1.0), 1e-10);
        EXPECT_LT(std::abs(phi.taylor[1] - c01), 1e-10);
        EXPECT_LT(std::abs(phi.taylor[2] - c10), 1e-10);
        EXPECT_LT(std::abs(phi.taylor[3] - c11), 1e-10);
    }
    ASSERT_GT(used, 20);

    // dense interior positivity sampling on a handful of member points
    std::mt19937_64 rng2(11);
    int checked = 0;
    while (checked < 5) {
        const Cplx c01 = rand_c(rng2, 0.7), c10 = rand_c(rng2, 0.7), c11 = rand_c(rng2, 0.7);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++checked;
        K11Interpolant phi = k11_construct(c01, c10, c11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 10000; ++i) {
            const Cplx z = std::polar(0.98 * std::sqrt(u(rng2)),
                                      2.0 * std::numbers::pi * u(rng2));
            const Cplx w = std::polar(0.98 * std::sqrt(u(rng2)),
                                      2.0 * std::numbers::pi * u(rng2));
            EXPECT_GE(phi.eval(z, w).real(), -1e-8);
        }
    }
}

TEST(K11Construct, GModulusBoundedOnTorus)
{
    std::mt19937_64 rng(13);
    int used = 0;
    while (used < 10) {
        const Cplx c01 = rand_c(rng, 0.8), c10 = rand_c(rng, 0.8), c11 = rand_c(rng, 0.8);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++used;
        K11Interpolant phi = k11_construct(c01, c10, c11);
        for (int a = 0; a < 32; ++a)
            for (int b = 0; b < 32; ++b) {
                const std::vector<Cplx> zw{std::polar(1.0, 2.0 * std::numbers::pi * a / 32),
                                           std::polar(1.0, 2.0 * std::numbers::pi * b / 32)};
                const double gmod = std::abs(eval_poly(phi.g_num, zw)) /
                                    std::abs(eval_poly(phi.g_den, zw));
                EXPECT_LE(gmod, 1.0 + 1e-12);
            }
    }
}

TEST(Mobius, IdentityAtOne)
{
    HalfPlaneMobius m = mobius_from_c00(1.0);
    EXPECT_EQ(m.B, Cplx(0.0));
    EXPECT_EQ(m.C, Cplx(0.0));
    EXPECT_LT(std::abs(m.A - 2.0), 1e-15);
    EXPECT_LT(std::abs(m.D - 2.0), 1e-15);
    EXPECT_LT(std::abs(m.d1 - 1.0), 1e-15);
    EXPECT_LT(std::abs(m.d2), 1e-15);
    EXPECT_LT(std::abs(m.apply(Cplx(0.4, 1.3)) - Cplx(0.4, 1.3)), 1e-15);
}

TEST(Mobius, RealTwo)
{
    HalfPlaneMobius m = mobius_from_c00(2.0);
    EXPECT_LT(std::abs(m.apply(2.0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(m.apply(Cplx(0.8, 0.0)) - 0.4), 1e-15); // Phi(z) = z/2
    EXPECT_LT(std::abs(m.d1 - 0.5), 1e-15);
    EXPECT_LT(std::abs(m.d2), 1e-15);
}

TEST(Mobius, ComplexPoint)
{
    const Cplx c00(1.0, 1.0);
    HalfPlaneMobius m = mobius_from_c00(c00);
    EXPECT_LT(std::abs(m.apply(c00) - 1.0), 1e-12);
    EXPECT_LT(std::abs(m.inverse_apply(m.apply(Cplx(0.7, -2.0))) - Cplx(0.7, -2.0)), 1e-12);
    // half-plane automorphism: imaginary axis maps to imaginary axis
    for (double t : {-3.0, -0.5, 0.0, 1.0, 10.0})
        EXPECT_LT(std::abs(m.apply(Cplx(0.0, t)).real()), 1e-12);
}

TEST(Mobius, DomainViolation)
{
    EXPECT_THROW(mobius_from_c00(Cplx(-0.2, 1.0)), DomainError);
}

TEST(Cf2General, CoincidesWithK11AtNormalizedPoint)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100000; ++trial) {
        const Cplx c01 = rand_c(rng, 1.0), c10 = rand_c(rng, 1.0), c11 = rand_c(rng, 1.0);
        EXPECT_EQ(cf2_general_check(1.0, c01, c10, c11), k11_check(c01, c10, c11).member);
    }
}

TEST(Cf2General, TrivialMemberAtC00Two)
{
    EXPECT_TRUE(cf2_general_check(2.0, 0.0, 0.0, 0.0));
}

TEST(Cf2General, CrossCheckAgainstFeasibility)
{
    // (1+i, 1, 0.5, 0): membership decided by the closed form; the normalized
    // transform of the same data must admit an Agler certificate.
    const Cplx c00(1.0, 1.0), c01(1.0), c10(0.5), c11(0.0);
    ASSERT_TRUE(cf2_general_check(c00, c01, c10, c11));
    HalfPlaneMobius m = mobius_from_c00(c00);
    const auto t = automorphism_transform({c00, c01, c10, c11}, m.d1, m.d2);
    ASSERT_TRUE(k11_check(t[1], t[2], t[3]).member);
    auto feas = cf::agler_feasibility(data_from_point(t[1], t[2], t[3]));
    EXPECT_EQ(feas.status, cf::FeasStatus::Certificate);
    EXPECT_LE(feas.cert->eq_residual, 1e-9);
}

TEST(Transform, IdentityLeavesDataUnchanged)
{
    const std::array<Cplx, 4> data{1.0, Cplx(0.2, 0.1), Cplx(-0.3, 0.4), Cplx(0.0, -0.2)};
    const auto t = automorphism_transform(data, 1.0, 0.0);
    for (int i = 0; i < 4; ++i)
        EXPECT_EQ(t[static_cast<std::size_t>(i)], data[static_cast<std::size_t>(i)]);
}

TEST(Transform, ScalingExample)
{
    const auto t = automorphism_transform({1.0, 1.0, 1.0, 0.0}, 2.0, 0.0);
    EXPECT_EQ(t[1], Cplx(2.0));
    EXPECT_EQ(t[2], Cplx(2.0));
    EXPECT_EQ(t[3], Cplx(0.0));
}

TEST(Transform, MembershipPreserved)
{
    // Composing with an automorphism Phi with Phi(1) = 1 preserves K11;
    // sampled via the derivative data of mobius_from_c00 at points mapping 1->1.
    std::mt19937_64 rng(23);
    int used = 0;
    while (used < 200) {
        const Cplx c01 = rand_c(rng, 0.7), c10 = rand_c(rng, 0.7), c11 = rand_c(rng, 0.7);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++used;
        // Phi fixing 1: build from a random c00, then conjugate so that the
        // composite maps 1 to 1: Psi = Phi_a^{-1} o Phi_a = id is trivial, so
        // instead use the closed-form equivalence: the transformed point of a
        // normalized point under Phi from c00 = 1 + it stays in K11 iff
        // cf2_general_check holds at that c00 for the pulled-back data.
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        const Cplx c00(1.0, u(rng));
        HalfPlaneMobius m = mobius_from_c00(c00);
        const auto t = automorphism_transform({1.0, c01, c10, c11}, m.d1, m.d2);
        EXPECT_EQ(k11_check(t[1], t[2], t[3]).member,
                  cf2_general_check(c00, c01, c10, c11));
    }
}

TEST(Necessity, MemberImpliesPsdStructure)
{
    std::mt19937_64 rng(29);
    int members = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const Cplx c01 = rand_c(rng, 1.0), c10 = rand_c(rng, 1.0), c11 = rand_c(rng, 1.0);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++members;
        cf::CFData data = data_from_point(c01, c10, c11);
        cf::StructureMatrices s = cf::build_structure(data);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.X + s.X.adjoint(),
                                                           Eigen::EigenvaluesOnly);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
    ASSERT_GT(members, 500);
}

TEST(Necessity, DirectionalSliceBound)
{
    std::mt19937_64 rng(31);
    int members = 0;
    for (int trial = 0; trial < 5000 && members < 500; ++trial) {
        const Cplx c01 = rand_c(rng, 1.0), c10 = rand_c(rng, 1.0), c11 = rand_c(rng, 1.0);
        if (!k11_check(c01, c10, c11).member)
            continue;
        ++members;
        for (int k = 0; k < 64; ++k) {
            const Cplx lam = std::polar(1.0, 2.0 * std::numbers::pi * k / 64);
            EXPECT_LE(std::abs(c10 + lam * c01), 2.0 + 1e-12);
        }
    }
    ASSERT_GT(members, 100);
}

TEST(K11Construct, RejectsNonMember)
{
    EXPECT_THROW(k11_construct(0.0, 0.0, 3.0), DomainError);
}
