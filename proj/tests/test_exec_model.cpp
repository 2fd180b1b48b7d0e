#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "pkrylov/cost_model.hpp"
#include "pkrylov/errors.hpp"
#include "pkrylov/generators.hpp"
#include "pkrylov/speedup.hpp"
#include "pkrylov/trace.hpp"
#include "support.hpp"

namespace pkrylov {
namespace {

TEST(Trace, RecordingNeedsAnOpenRecord) {
    ExecutionTrace t;
    EXPECT_THROW(t.record_launch(8), UsageError);
    EXPECT_THROW(t.record_transfer(8), UsageError);
    t.begin(Phase::iteration);
    t.record_launch(0);
    EXPECT_EQ(t.totals(), (TraceCounts{1, 0, 0, 0}));
    t.end();
    EXPECT_THROW(t.record_launch(8), UsageError);
}

TEST(Trace, TotalsEqualSumOfRecords) {
    ExecutionTrace t;
    testing::Rng rng(8);
    for (int r = 0; r < 20; ++r) {
        t.begin(r % 3 == 0 ? Phase::setup : Phase::iteration);
        for (std::size_t k = rng.below(5); k > 0; --k) t.record_launch(rng.below(1000));
        for (std::size_t k = rng.below(3); k > 0; --k) t.record_transfer(rng.below(100));
    }
    TraceCounts sum;
    for (const auto& rec : t.records()) sum += rec.counts;
    EXPECT_EQ(sum, t.totals());
    EXPECT_EQ(t.iteration_count(), t.iterations().size());
    EXPECT_EQ(t.iteration_count(), 13u);
}

TEST(LaunchConfigTest, PowersOfTwoOnly) {
    EXPECT_NO_THROW((LaunchConfig{1, 1}.validate()));
    EXPECT_NO_THROW((LaunchConfig{128, 256}.validate()));
    EXPECT_THROW((LaunchConfig{3, 256}.validate()), PreconditionError);
    EXPECT_THROW((LaunchConfig{128, 0}.validate()), PreconditionError);
    EXPECT_THROW(ExecContext(LaunchConfig{6, 4}), PreconditionError);
}

TEST(ExecContextTest, WithoutTraceRecordsNothing) {
    const ExecContext ctx;
    EXPECT_NO_THROW(ctx.launch(10));
    EXPECT_NO_THROW(ctx.transfer(10));
    EXPECT_EQ(ctx.trace(), nullptr);
    EXPECT_EQ(ctx.config(), LaunchConfig{});
}

TEST(LatencyBarrier, DefaultProfile) {
    const auto b = latency_barrier(DeviceProfile{});
    EXPECT_EQ(b.bytes, 1.6e6);
    EXPECT_EQ(b.doubles, 200000.0);
}

TEST(LatencyBarrier, ScalesLinearly) {
    DeviceProfile p;
    p.bandwidth = 100e9;
    EXPECT_EQ(latency_barrier(p).bytes, 0.8e6);
    EXPECT_EQ(latency_barrier(p).doubles, 100000.0);
    p.launch_latency = 1.0;
    p.bandwidth = 1.0;
    EXPECT_EQ(latency_barrier(p).bytes, 1.0);
    EXPECT_EQ(latency_barrier(p).doubles, 0.125);
}

TEST(PredictTime, LatencyOnlyIterations) {
    const DeviceProfile p;
    const double pipelined = predict_iteration_time({2, 1, 0, 0}, p);
    const double classical = predict_iteration_time({6, 2, 0, 0}, p);
    EXPECT_NEAR(pipelined, 24e-6, 1e-18);
    EXPECT_NEAR(classical, 64e-6, 1e-18);
    EXPECT_NEAR(classical / pipelined, 64.0 / 24.0, 1e-12);
}

TEST(PredictTime, BandwidthDominated) {
    EXPECT_NEAR(predict_iteration_time({1, 0, 2'000'000'000, 0}, DeviceProfile{}), 10.008e-3, 1e-15);
    EXPECT_NEAR(predict_iteration_time({0, 1, 0, 8'000'000'000}, DeviceProfile{}), 1.0 + 8e-6, 1e-12);
}

TEST(PredictTime, MonotoneInEveryField) {
    const DeviceProfile p;
    const TraceCounts base{3, 2, 1000, 100};
    const double t0 = predict_iteration_time(base, p);
    for (int field = 0; field < 4; ++field) {
        auto c = base;
        (field == 0 ? c.launches : field == 1 ? c.transfers : field == 2 ? c.bytes_kernel : c.bytes_transfer) += 1;
        EXPECT_GE(predict_iteration_time(c, p), t0);
    }
    for (int field = 0; field < 2; ++field) {
        auto q = p;
        (field == 0 ? q.launch_latency : q.transfer_latency) *= 2;
        EXPECT_GE(predict_iteration_time(base, q), t0);
    }
}

TEST(Profile, ParsesKeysCommentsAndDefaults) {
    const auto p = parse_profile("# slow bus\nlaunch_latency = 5e-6\n\n  bandwidth=1e11  # fast\n");
    EXPECT_EQ(p.launch_latency, 5e-6);
    EXPECT_EQ(p.bandwidth, 1e11);
    EXPECT_EQ(p.transfer_latency, DeviceProfile{}.transfer_latency);
    EXPECT_EQ(p.transfer_bandwidth, DeviceProfile{}.transfer_bandwidth);
}

TEST(Profile, RejectsBadInput) {
    EXPECT_THROW(parse_profile("latency = 1"), ParseError);
    EXPECT_THROW(parse_profile("bandwidth = fast"), ParseError);
    EXPECT_THROW(parse_profile("bandwidth 1e9"), ParseError);
    try {
        parse_profile("launch_latency = 1\nnope = 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_profile("bandwidth = 0").validate(), PreconditionError);
    EXPECT_THROW(load_profile("/nonexistent/profile.txt"), IoError);
}

TEST(Profile, LoadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "pkrylov_profile_test.txt";
    std::ofstream(path) << "transfer_bandwidth = 16e9\n";
    EXPECT_EQ(load_profile(path).transfer_bandwidth, 16e9);
    std::filesystem::remove(path);
}

TEST(Speedup, SummaryAveragesFromSecondIteration) {
    ExecutionTrace t;
    t.begin(Phase::setup);
    t.record_launch(1);
    t.begin(Phase::iteration);
    for (int i = 0; i < 5; ++i) t.record_launch(0);
    t.begin(Phase::iteration);
    t.record_launch(0);
    t.record_launch(0);
    t.record_transfer(8);
    t.begin(Phase::iteration);
    t.record_launch(0);
    t.record_launch(0);
    t.record_transfer(8);
    const auto s = summarize_iterations(t);
    EXPECT_EQ(s.iterations, 3u);
    EXPECT_EQ(s.launches, 2.0);
    EXPECT_EQ(s.transfers, 1.0);
    EXPECT_EQ(s.bytes_transfer, 8.0);
}

TEST(Speedup, RatioShrinksWithSize) {
    std::vector<LinearSystem> systems;
    for (int k = 1; k <= 4; ++k) systems.push_back(gen_poisson2d(k));
    std::vector<SpeedupCase> cases;
    for (const auto& s : systems) cases.push_back({"p", &s.matrix, &s.rhs});
    SolverConfig cfg;
    cfg.fixed_iterations = 3;
    const auto rows = speedup_curve(Method::cg, cases, DeviceProfile{}, cfg);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_GE(rows.front().ratio, rows.back().ratio);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].ratio, rows[i - 1].ratio);
    EXPECT_THROW(speedup_curve(Method::cg, {}, DeviceProfile{}, cfg), PreconditionError);
}

TEST(Speedup, NegligibleLatencyGivesBytesRatio) {
    const auto sys = gen_poisson2d(2);
    DeviceProfile p;
    p.launch_latency = p.transfer_latency = 1e-30;
    SolverConfig cfg;
    cfg.fixed_iterations = 4;
    const auto rows = speedup_curve(Method::cg, {{"p", &sys.matrix, &sys.rhs}}, p, cfg);
    const auto c = solve(Method::cg, Variant::classical, sys.matrix, sys.rhs, {}, cfg);
    const auto q = solve(Method::cg, Variant::pipelined, sys.matrix, sys.rhs, {}, cfg);
    double cb = 0.0, qb = 0.0;
    for (const auto& it : c.trace.iterations()) cb += it.bytes_kernel / p.bandwidth + it.bytes_transfer / p.transfer_bandwidth;
    for (const auto& it : q.trace.iterations()) qb += it.bytes_kernel / p.bandwidth + it.bytes_transfer / p.transfer_bandwidth;
    EXPECT_NEAR(rows[0].ratio, cb / qb, 1e-12);
}

TEST(Speedup, EqualTracesGiveRatioOne) {
    ExecutionTrace t;
    t.begin(Phase::iteration);
    t.record_launch(100);
    t.record_transfer(8);
    const DeviceProfile p;
    EXPECT_EQ(predicted_time_per_iteration(t, p) / predicted_time_per_iteration(t, p), 1.0);
}

}  // namespace
}  // namespace pkrylov
