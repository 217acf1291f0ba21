#include "quatconf/minimal.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace quatconf;
using quatconf::testing::qdist;

namespace {

const Quaternion kI = Quaternion::i();
const CPolynomial Z{0.0, 1.0};
const RationalMap kOneMap = RationalMap::constant(1.0);

RationalMap poly(std::initializer_list<Complex> c) { return RationalMap(CPolynomial(c)); }

SphereMap holo_normal() { return SphereMap::from_lambda_pair(kOneMap, RationalMap(Z), Sign::plus); }

PlanarDomain unit_disk(int res = 31) { return PlanarDomain::disk(0.0, 1.0, res); }

}  // namespace

TEST(Mu, DefiningRelationAndCrossCheck) {
    const MinimalPair pair = build_minimal_pair(holo_normal(), RationalMap(Z), RationalMap(), unit_disk());
    const Complex z0(0.3, 0.1);
    const MuValue m = mu_at(pair, z0);
    EXPECT_LT(m.cross_residual, 1e-6);
    // psi lambda_x = N_x a lambda mu.
    const OneFormValue dn = pair.normal().differential(z0);
    const Quaternion lhs = pair.psi(z0) * Quaternion::one();
    const Quaternion rhs = dn.wx * pair.a() * pair.lambda(z0) * m.mu;
    EXPECT_LT(qdist(lhs, rhs), 1e-13);
}

TEST(Mu, ConstantLambdaIsDegenerate) {
    const Complex c(0.5, -1.0);
    const MinimalPair pair = build_minimal_pair(holo_normal(), RationalMap::constant(c), RationalMap(), unit_disk());
    EXPECT_TRUE(pair.degenerate());
    const Complex z(0.2, 0.2);
    EXPECT_LT(norm(mu_at(pair, z).mu), 1e-15);
    EXPECT_LT(qdist(pair.f(z), -(pair.a() * Quaternion::from_complex(c))), 1e-14);
    EXPECT_TRUE(minimal_diagnostics(pair).degenerate);
}

TEST(Mu, SingularSetIsLocatedAndRejected) {
    // N from (1, z^2): N_x vanishes at 0. lambda = z - 0.5 vanishes at 0.5.
    const auto n = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.0, 1.0}), Sign::plus);
    const MinimalPair pair = build_minimal_pair(n, poly({-0.5, 1.0}), RationalMap(), unit_disk());
    const auto& q = pair.singular_set();
    ASSERT_EQ(q.size(), 2u);
    auto has = [&](Complex p) {
        return std::any_of(q.begin(), q.end(), [&](Complex r) { return std::abs(r - p) < 1e-8; });
    };
    EXPECT_TRUE(has(0.0));
    EXPECT_TRUE(has(0.5));
    EXPECT_THROW(mu_at(pair, 0.0), SingularPointError);
    EXPECT_THROW(mu_at(pair, 0.5), SingularPointError);
    EXPECT_TRUE(pair.f_surface().excluded(0.5));
}

TEST(MinimalPair, HypothesesAreChecked) {
    EXPECT_THROW(build_minimal_pair(SphereMap::constant(kI), RationalMap(Z), RationalMap(), unit_disk()),
                 std::invalid_argument);
    const auto anti = SphereMap::from_lambda_pair(kOneMap, RationalMap(Z), Sign::minus);
    EXPECT_THROW(build_minimal_pair(anti, RationalMap(Z), RationalMap(), unit_disk()), HypothesisError);
    const RationalMap pole(CPolynomial{1.0}, CPolynomial{-0.2, 1.0});
    EXPECT_THROW(build_minimal_pair(holo_normal(), pole, RationalMap(), unit_disk()), std::invalid_argument);
}

TEST(MinimalPair, PsiIsNowhereZero) {
    const MinimalPair pair = build_minimal_pair(holo_normal(), poly({1.0, 1.0}), RationalMap(), unit_disk());
    for (Complex z : unit_disk().samples()) {
        ASSERT_GT(norm(pair.psi(z)), 0.1);
        // N psi = -psi i.
        ASSERT_LT(qdist(pair.normal()(z) * pair.psi(z), -(pair.psi(z) * kI)), 1e-12);
    }
}

TEST(MinimalPair, AnalyticDiagnostics) {
    const MinimalPair pair = build_minimal_pair(holo_normal(), poly({1.0, 1.0}), RationalMap(), unit_disk());
    const MinimalDiagnostics d = minimal_diagnostics(pair);
    EXPECT_GT(d.samples, 500u);
    EXPECT_LT(d.conjugate_residual, 1e-8);
    EXPECT_LT(d.null_residual, 1e-8);
    EXPECT_LT(d.conformal_defect, 1e-8);
    EXPECT_LT(d.null_conformal_gap, 1e-12);
    EXPECT_LT(d.mean_curvature_f, 1e-4);
    EXPECT_LT(d.mean_curvature_g, 1e-4);
    EXPECT_LT(d.normal_mismatch, 1e-8);
    EXPECT_LT(d.mu_cross_residual, 1e-10);
}

TEST(MinimalPair, TwoComponentLambda) {
    const auto n = SphereMap::from_lambda_pair(poly({1.0, 0.0, 0.5}), poly({0.2, 1.0}), Sign::plus);
    const MinimalPair pair = build_minimal_pair(n, poly({1.0, -0.3, 0.4}), poly({0.7, 0.2}), unit_disk());
    const MinimalDiagnostics d = minimal_diagnostics(pair);
    EXPECT_LT(d.conjugate_residual, 1e-8);
    EXPECT_LT(d.null_conformal_gap, 1e-12);
    EXPECT_LT(d.mean_curvature_f, 1e-4);
    EXPECT_LT(d.mean_curvature_g, 1e-4);
    EXPECT_LT(d.normal_mismatch, 1e-8);
}

TEST(MinimalPair, FiniteDifferenceDiagnostics) {
    const SphereMap exact = holo_normal();
    const auto n = SphereMap::sampled([exact](Complex z) { return exact(z); }, 1e-4);
    const MinimalPair pair = build_minimal_pair(n, poly({1.0, 1.0}), RationalMap(), unit_disk(21));
    const MinimalDiagnostics d = minimal_diagnostics(pair);
    EXPECT_LT(d.conjugate_residual, 1e-4);
    EXPECT_LT(d.mean_curvature_f, 1e-4 * 1e2);
    EXPECT_LT(d.normal_mismatch, 1e-4);
    EXPECT_LT(d.mu_cross_residual, 1e-6);
}

TEST(MinimalPair, RealLinearInLambda) {
    const auto d = unit_disk();
    const MinimalPair one = build_minimal_pair(holo_normal(), poly({1.0, 1.0}), poly({0.0, 0.5}), d);
    const MinimalPair two = build_minimal_pair(holo_normal(), poly({2.0, 2.0}), poly({0.0, 1.0}), d);
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3)}) {
        EXPECT_LT(qdist(two.f(z), 2.0 * one.f(z)), 1e-13);
        EXPECT_LT(qdist(two.g(z), 2.0 * one.g(z)), 1e-13);
    }
}

TEST(BranchZero, IdentityHoldsOnGrid) {
    const MinimalPair pair = build_minimal_pair(holo_normal(), poly({1.0, 1.0}), poly({0.3}), unit_disk());
    const BranchZeroReport r = branch_zero_report(pair);
    EXPECT_LT(r.identity_residual, 1e-6);
    EXPECT_TRUE(r.sets_agree);
    EXPECT_TRUE(r.branch_points.empty());
    EXPECT_TRUE(r.branch_of_n.empty());
}

TEST(BranchZero, ZeroOfFIsBranchPointOfPsiLambda) {
    // Linear lambda with lambda_x(z0) = psi(z0)^-1 N_x(z0) a lambda(z0), so mu(z0) = 1 and f(z0) = 0.
    const SphereMap n = holo_normal();
    const auto domain = unit_disk();
    const MinimalPair probe = build_minimal_pair(n, kOneMap, RationalMap(), domain);
    const Complex z0(0.25, -0.15);
    const Quaternion c = Quaternion::one();
    const Quaternion d = inverse(probe.psi(z0)) * n.differential(z0).wx * probe.a() * c;
    const auto [d0, d1] = split_pair(d);
    const RationalMap l0(CPolynomial{1.0 - d0 * z0, d0});
    const RationalMap l1(CPolynomial{-d1 * z0, d1});
    const MinimalPair pair = build_minimal_pair(n, l0, l1, domain, probe.a());
    EXPECT_LT(norm(pair.f(z0)), 1e-13);
    const BranchZeroReport r = branch_zero_report(pair);
    ASSERT_EQ(r.zeros_of_f.size(), 1u);
    EXPECT_LT(std::abs(r.zeros_of_f[0] - z0), 1e-6);
    ASSERT_EQ(r.branch_points.size(), 1u);
    EXPECT_LT(std::abs(r.branch_points[0] - z0), 1e-6);
    EXPECT_TRUE(r.sets_agree);
    EXPECT_LT(r.identity_residual, 1e-6);
}

TEST(BranchZero, BranchPointOfNormalWithPoleOfF) {
    // N from (1, z^2) branches at 0; lambda_x(0) != 0 so f ~ 1/z there and
    // psi lambda is immersed.
    const auto n = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.0, 1.0}), Sign::plus);
    const MinimalPair pair = build_minimal_pair(n, poly({2.0, 1.0}), RationalMap(), unit_disk());
    const BranchZeroReport r = branch_zero_report(pair);
    ASSERT_EQ(r.branch_of_n.size(), 1u);
    EXPECT_LT(std::abs(r.branch_of_n[0]), 1e-6);
    ASSERT_EQ(r.unbounded_branch_of_n.size(), 1u);
    EXPECT_TRUE(r.branch_points.empty());
    EXPECT_TRUE(r.sets_agree);
    EXPECT_LT(r.identity_residual, 1e-6);
}

TEST(BranchZero, BranchPointOfNormalWithBoundedF) {
    // lambda = 1 + z^2 has lambda_x(0) = 0: f extends over 0 and psi lambda branches there.
    const auto n = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.0, 1.0}), Sign::plus);
    const MinimalPair pair = build_minimal_pair(n, poly({1.0, 0.0, 1.0}), RationalMap(), unit_disk());
    const BranchZeroReport r = branch_zero_report(pair);
    ASSERT_EQ(r.branch_of_n.size(), 1u);
    EXPECT_TRUE(r.unbounded_branch_of_n.empty());
    ASSERT_EQ(r.branch_points.size(), 1u);
    EXPECT_LT(std::abs(r.branch_points[0]), 1e-6);
    EXPECT_TRUE(r.sets_agree);
}
