#include <doctest.h>

#include <rarefan/experiments.hpp>
#include <rarefan/mapping.hpp>
#include <rarefan/properties.hpp>
#include <rarefan/replicas.hpp>

#include <stdexcept>
#include <vector>

using namespace rarefan;

namespace {

ExperimentPlan plan_with(Execution mode, int threads)
{
    ExperimentPlan p;
    p.t = 60.0;
    p.replicas = 64;
    p.master_seed = 77;
    p.rho = Density::infinite();
    p.exec.mode = mode;
    p.exec.threads = threads;
    return p;
}

}

TEST_CASE("runners return results in replica order")
{
    auto body = [](std::size_t r) { return static_cast<int>(r * r); };
    const auto s = run_replicas_serial<int>(100, body);
    const auto p = run_replicas_parallel<int>(100, body, 4);
    CHECK(s == p);
    CHECK(s[9] == 81);
}

TEST_CASE("parallel runner rethrows the lowest failing replica")
{
    auto body = [](std::size_t r) -> int {
        if (r == 30 || r == 70)
            throw std::runtime_error("replica " + std::to_string(r));
        return 0;
    };
    CHECK_THROWS_WITH(run_replicas_parallel<int>(100, body, 4), "replica 30");
    CHECK_THROWS_WITH(run_replicas_serial<int>(100, body), "replica 30");
}

TEST_CASE("serial and parallel infinite-step samples are identical")
{
    const auto s = sample_infinite_step(plan_with(Execution::Serial, 0));
    for (int threads : {1, 2, 4}) {
        const auto p = sample_infinite_step(plan_with(Execution::Parallel, threads));
        REQUIRE(p.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(p[i].x2 == s[i].x2);
            CHECK(p[i].j2 == s[i].j2);
        }
    }
}

TEST_CASE("serial and parallel experiment reports are identical")
{
    auto serial = plan_with(Execution::Serial, 0);
    auto parallel = plan_with(Execution::Parallel, 3);
    const auto a = exp_second_class_speed(serial);
    const auto b = exp_second_class_speed(parallel);
    CHECK(a.x2.values == b.x2.values);
    CHECK(a.x2.sup_distance == b.x2.sup_distance);
    CHECK(a.trend_sup_distance == b.trend_sup_distance);

    serial.t = parallel.t = 30.0;
    const auto ca = exp_crossing(serial);
    const auto cb = exp_crossing(parallel);
    CHECK(ca.positions == cb.positions);

    serial.rho = parallel.rho = 1.0;
    serial.jmax = parallel.jmax = 25;
    serial.u_grid = parallel.u_grid = {0.3, 0.6};
    const auto sa = exp_stacked_weighted_sum(serial);
    const auto sb = exp_stacked_weighted_sum(parallel);
    REQUIRE(sa.rows.size() == sb.rows.size());
    for (std::size_t i = 0; i < sa.rows.size(); ++i)
        CHECK(sa.rows[i].weighted_sum == sb.rows[i].weighted_sum);

    serial.particles = parallel.particles = 10;
    const auto ma = exp_gap_mapping(serial);
    const auto mb = exp_gap_mapping(parallel);
    for (std::size_t i = 0; i < ma.seeds.size(); ++i)
        CHECK(ma.seeds[i].events_compared == mb.seeds[i].events_compared);
}

TEST_CASE("property checks agree across runners")
{
    const ReplicaOptions serial{Execution::Serial, 0};
    const ReplicaOptions parallel{Execution::Parallel, 2};
    const auto a = check_attractiveness(3, 10, serial);
    const auto b = check_attractiveness(3, 10, parallel);
    CHECK(a.checks == b.checks);
    CHECK(a.violations == b.violations);
}
