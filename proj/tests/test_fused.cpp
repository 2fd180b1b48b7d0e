#include <gtest/gtest.h>

#include <vector>

#include "pkrylov/blas.hpp"
#include "pkrylov/errors.hpp"
#include "pkrylov/fused.hpp"
#include "pkrylov/gram_schmidt.hpp"
#include "pkrylov/reduction.hpp"
#include "support.hpp"

namespace pkrylov {
namespace {

using testing::Rng;

double finalize(const WorkgroupPartials& p, std::size_t q = 0) { return reduce_stage2(p, {})[q]; }

TEST(SpmvFused, IdentityWithInputDot) {
    const auto f = spmv_fused(CsrMatrix::identity(2), DenseVector{3, 4}, {FusedTerm::input()});
    EXPECT_EQ(f.q, (DenseVector{3, 4}));
    EXPECT_EQ(finalize(f.partials), 25.0);
}

TEST(SpmvFused, SmallSpdAgainstDenseOracle) {
    const auto a = CsrMatrix::from_triplets(2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
    const std::vector<double> p{1, 2};
    const auto q = testing::dense_matvec(testing::to_dense(a), p);
    const auto f = spmv_fused(a, DenseVector(p), {FusedTerm::input(), FusedTerm::result()});
    EXPECT_EQ(finalize(f.partials, 0), testing::serial_dot(p, q));
    EXPECT_EQ(finalize(f.partials, 1), testing::serial_dot(q, q));
    EXPECT_EQ(finalize(f.partials, 0), 20.0);
    EXPECT_EQ(finalize(f.partials, 1), 85.0);
}

TEST(SpmvFused, ZeroWeightVector) {
    const DenseVector w(3);
    const auto f = spmv_fused(CsrMatrix::identity(3), DenseVector{1, 2, 3}, {FusedTerm::vector(w)});
    EXPECT_EQ(finalize(f.partials), 0.0);
}

TEST(SpmvFused, RequestLimitAndShapes) {
    const DenseVector w(2);
    EXPECT_NO_THROW((FusedReductionRequest{FusedTerm::input(), FusedTerm::result(),
                                           FusedTerm::vector(w), FusedTerm::vector(w)}));
    EXPECT_THROW((FusedReductionRequest{FusedTerm::input(), FusedTerm::result(), FusedTerm::input(),
                                        FusedTerm::vector(w), FusedTerm::vector(w)}),
                 PreconditionError);
    EXPECT_THROW(spmv_fused(CsrMatrix::identity(3), DenseVector{1, 2}, {}), ShapeError);
    EXPECT_THROW(spmv_fused(CsrMatrix::identity(2), DenseVector{1, 2}, {FusedTerm::vector(DenseVector(3))}),
                 ShapeError);
}

TEST(SpmvFused, ProductIdenticalToPlainSpmvAndOneLaunch) {
    Rng rng(40);
    const auto a = testing::random_sparse(rng, 60, 60, 0.1);
    const auto p = testing::random_vector(rng, 60);
    const auto w = testing::random_vector(rng, 60);
    ExecutionTrace t;
    const ExecContext ctx({4, 4}, &t);
    ctx.begin(Phase::iteration);
    const auto f = spmv_fused(a, p, {FusedTerm::input(), FusedTerm::result(), FusedTerm::vector(w)}, ctx);
    EXPECT_EQ(t.totals().launches, 1u);
    EXPECT_EQ(t.totals().transfers, 0u);
    EXPECT_EQ(f.q, spmv_csr(a, p));
    EXPECT_EQ(f.partials, [&] {
        auto all = dot_stage1(f.q, p, ExecContext({4, 4}));
        all.append(dot_stage1(f.q, f.q, ExecContext({4, 4})));
        all.append(dot_stage1(f.q, w, ExecContext({4, 4})));
        return all;
    }());
}

TEST(CgUpdate, ZeroStepCopiesResidualIntoDirection) {
    DenseVector x{1, 2}, r{3, -4}, p{9, 9};
    const DenseVector ap{5, 5};
    for (int round = 0; round < 2; ++round) {
        const auto part = fused_cg_vector_update(x, r, p, ap, 0.0, 0.0);
        EXPECT_EQ(x, (DenseVector{1, 2}));
        EXPECT_EQ(p, r);
        EXPECT_EQ(finalize(part), 25.0);
    }
}

TEST(CgUpdate, ScalarCaseUsesOldDirection) {
    const double beta = 0.75;
    DenseVector x{0}, r{2}, p{2};
    const auto part = fused_cg_vector_update(x, r, p, DenseVector{8}, 0.25, beta);
    EXPECT_EQ(x[0], 0.5);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(p[0], 2.0 * beta);
    EXPECT_EQ(finalize(part), 0.0);
}

TEST(SUpdate, EqualVectorsGiveZero) {
    const DenseVector r{1, -2, 3};
    const auto rr = dot_stage1(r, r);
    const auto s = fused_bicgstab_s_update(r, r, rr, rr);
    EXPECT_EQ(s.alpha, 1.0);
    EXPECT_EQ(s.s, DenseVector(3));
    for (double e : s.s_s.quantity(0)) EXPECT_EQ(e, 0.0);
}

TEST(SUpdate, ScalarCase) {
    const DenseVector r{3}, ap{2}, r0{1};
    const auto s = fused_bicgstab_s_update(r, ap, dot_stage1(r, r0), dot_stage1(ap, r0));
    EXPECT_EQ(s.alpha, 1.5);
    EXPECT_EQ(s.s, DenseVector{0});
}

TEST(SUpdate, AlphaMatchesHostStageTwo) {
    Rng rng(41);
    const auto r = testing::random_vector(rng, 999);
    const auto ap = testing::random_vector(rng, 999);
    const auto r0 = testing::random_vector(rng, 999);
    const ExecContext ctx({32, 8});
    const auto rr0 = dot_stage1(r, r0, ctx);
    const auto apr0 = dot_stage1(ap, r0, ctx);
    const auto s = fused_bicgstab_s_update(r, ap, rr0, apr0, ctx);
    EXPECT_EQ(s.alpha, reduce_stage2(rr0, ctx)[0] / reduce_stage2(apr0, ctx)[0]);
}

TEST(SUpdate, VanishingDenominatorIsBreakdown) {
    const DenseVector r{1, 1};
    try {
        fused_bicgstab_s_update(r, DenseVector(2), dot_stage1(r, r), dot_stage1(DenseVector(2), r));
        FAIL();
    } catch (const BreakdownError& e) {
        EXPECT_EQ(e.kind(), BreakdownKind::ap_r0star);
    }
}

TEST(XrpUpdate, ZeroOmegaAndBeta) {
    DenseVector x{1, 1}, r{7, 7}, p{2, 3};
    const DenseVector s{4, 5};
    fused_bicgstab_xrp_update(x, r, p, s, DenseVector{1, 1}, DenseVector{1, 1}, 0.5, 0.0, 0.0, s);
    EXPECT_EQ(x, (DenseVector{2, 2.5}));
    EXPECT_EQ(r, s);
    EXPECT_EQ(p, s);
}

TEST(XrpUpdate, ScalarCase) {
    DenseVector x{0}, r{9}, p{1};
    const auto part = fused_bicgstab_xrp_update(x, r, p, DenseVector{2}, DenseVector{3}, DenseVector{4},
                                                1.0, 0.5, 2.0, DenseVector{1});
    EXPECT_EQ(x[0], 2.0);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(p[0], -1.0);
    EXPECT_EQ(finalize(part), 0.0);
}

TEST(XrpUpdate, EqualsThreeSeparateUpdates) {
    Rng rng(42);
    const std::size_t n = 300;
    auto x = testing::random_vector(rng, n), r = testing::random_vector(rng, n), p = testing::random_vector(rng, n);
    const auto s = testing::random_vector(rng, n), ap = testing::random_vector(rng, n);
    const auto as = testing::random_vector(rng, n), r0 = testing::random_vector(rng, n);
    const double alpha = rng.uniform(), omega = rng.uniform(), beta = rng.uniform();
    auto x2 = x, r2 = r, p2 = p;
    const auto part = fused_bicgstab_xrp_update(x, r, p, s, ap, as, alpha, omega, beta, r0);
    axpy(alpha, p2, x2);
    axpy(omega, s, x2);
    copy(s, r2);
    axpy(-omega, as, r2);
    axpy(-omega, ap, p2);
    xpay(r2, beta, p2);
    EXPECT_EQ(x, x2);
    EXPECT_EQ(r, r2);
    EXPECT_EQ(p, p2);
    EXPECT_EQ(part, dot_stage1(r2, r0));
}

TEST(GsStage1, UnitVectors) {
    const std::vector<DenseVector> basis{{1, 0, 0}, {0, 1, 0}};
    const auto part = fused_gs_stage1(basis, DenseVector{1, 0, 0});
    EXPECT_EQ(reduce_stage2(part, {}), (std::vector<double>{1.0, 0.0}));
}

TEST(GsStage1, SingleVectorIsDotStageOne) {
    Rng rng(43);
    const std::vector<DenseVector> basis{testing::random_vector(rng, 77)};
    const auto v = testing::random_vector(rng, 77);
    EXPECT_EQ(fused_gs_stage1(basis, v), dot_stage1(basis[0], v));
}

TEST(GsStage1, EachQuantityWithinBoundOfSerialDot) {
    Rng rng(44);
    std::vector<DenseVector> basis;
    for (int j = 0; j < 6; ++j) basis.push_back(testing::random_vector(rng, 500));
    const auto v = testing::random_vector(rng, 500);
    ExecutionTrace t;
    const ExecContext ctx({8, 8}, &t);
    ctx.begin(Phase::iteration);
    const auto sums = reduce_stage2(fused_gs_stage1(basis, v, ctx), {});
    EXPECT_EQ(t.totals().launches, 1u);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        EXPECT_LE(std::abs(sums[j] - testing::serial_dot(basis[j].span(), v.span())),
                  testing::sum_bound(500, testing::abs_dot(basis[j].span(), v.span())));
    }
}

TEST(GsUpdate, OrthogonalVectorUnchanged) {
    const std::vector<DenseVector> basis{{1, 0, 0}};
    DenseVector v{0, 2, 3};
    const auto up = fused_gs_update(v, basis, fused_gs_stage1(basis, v));
    EXPECT_EQ(up.coefficients, std::vector<double>{0.0});
    EXPECT_EQ(v, (DenseVector{0, 2, 3}));
    EXPECT_EQ(finalize(up.v_v), 13.0);
}

TEST(GsUpdate, BasisVectorVanishes) {
    const std::vector<DenseVector> basis{{0.6, 0.8}};
    DenseVector v = basis[0];
    const auto up = fused_gs_update(v, basis, fused_gs_stage1(basis, v));
    EXPECT_EQ(up.coefficients.size(), 1u);
    EXPECT_NEAR(up.coefficients[0], 1.0, 1e-16);
    EXPECT_LE(norm2(v), 1e-16);
    EXPECT_LE(finalize(up.v_v), 1e-32);
}

TEST(GsUpdate, MatchesUnfusedDotThenAxpy) {
    Rng rng(45);
    std::vector<DenseVector> basis;
    for (int j = 0; j < 5; ++j) basis.push_back(testing::random_vector(rng, 100));
    auto v = testing::random_vector(rng, 100);
    auto w = v;
    const auto up = fused_gs_update(v, basis, fused_gs_stage1(basis, v));
    const auto coeffs = orthogonalize_cgs(basis, w);
    for (std::size_t j = 0; j < coeffs.size(); ++j) EXPECT_LE(testing::rel_diff(coeffs[j], up.coefficients[j]), 1e-13);
    EXPECT_LE(testing::rel_vec_diff(w.span(), v.span()), 1e-13);
    EXPECT_THROW(fused_gs_update(v, basis, WorkgroupPartials(128, 2)), ShapeError);
}

TEST(GsNormalize, ThreeFourFive) {
    DenseVector v{3, 4};
    const auto nz = fused_gs_normalize(v, dot_stage1(v, v), DenseVector{1, 0});
    EXPECT_EQ(nz.norm, 5.0);
    EXPECT_FALSE(nz.breakdown);
    EXPECT_EQ(v, (DenseVector{0.6, 0.8}));
    EXPECT_EQ(finalize(nz.r_v), 0.6);
}

TEST(GsNormalize, UnitVectorAndZeroResidual) {
    DenseVector v{0.6, 0.8};
    const auto nz = fused_gs_normalize(v, dot_stage1(v, v), DenseVector(2));
    EXPECT_NEAR(v[0], 0.6, 1e-16);
    EXPECT_NEAR(v[1], 0.8, 1e-16);
    EXPECT_EQ(finalize(nz.r_v), 0.0);
}

TEST(GsNormalize, ZeroVectorSignalsBreakdown) {
    DenseVector v(3);
    const auto nz = fused_gs_normalize(v, dot_stage1(v, v), DenseVector{1, 1, 1});
    EXPECT_TRUE(nz.breakdown);
    EXPECT_EQ(v, DenseVector(3));
}

TEST(Fused, EveryKernelIsOneLaunch) {
    Rng rng(46);
    const std::size_t n = 64;
    auto x = testing::random_vector(rng, n), r = testing::random_vector(rng, n), p = testing::random_vector(rng, n);
    const auto ap = testing::random_vector(rng, n), as = testing::random_vector(rng, n);
    const std::vector<DenseVector> basis{testing::random_vector(rng, n), testing::random_vector(rng, n)};
    ExecutionTrace t;
    const ExecContext ctx({2, 8}, &t);
    ctx.begin(Phase::iteration);
    auto expect_one = [&, last = std::uint64_t{0}]() mutable {
        EXPECT_EQ(t.totals().launches, last + 1);
        EXPECT_EQ(t.totals().transfers, 0u);
        last = t.totals().launches;
    };
    fused_cg_vector_update(x, r, p, ap, 0.1, 0.2, ctx);
    expect_one();
    const auto s = fused_bicgstab_s_update(r, ap, dot_stage1(r, r), dot_stage1(ap, r), ctx);
    expect_one();
    fused_bicgstab_xrp_update(x, r, p, s.s, ap, as, 0.1, 0.2, 0.3, r, ctx);
    expect_one();
    auto part = fused_gs_stage1(basis, p, ctx);
    expect_one();
    const auto up = fused_gs_update(p, basis, part, ctx);
    expect_one();
    fused_gs_normalize(p, up.v_v, r, ctx);
    expect_one();
}

}  // namespace
}  // namespace pkrylov
