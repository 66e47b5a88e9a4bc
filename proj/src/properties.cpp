#include "rarefan/properties.hpp"

#include "rarefan/clocks.hpp"
#include "rarefan/coupling.hpp"
#include "rarefan/dynamics.hpp"
#include "rarefan/initial_measures.hpp"

#include <cmath>
#include <sstream>

namespace rarefan {

namespace {

constexpr std::uint64_t kPairDomain = 3;
constexpr std::uint64_t kCensorDomain = 4;

struct Counts {
    std::size_t checks = 0;
    std::size_t violations = 0;
};

std::vector<double> grid_times(double t, int n)
{
    std::vector<double> times;
    for (int k = 1; k <= n; ++k)
        times.push_back(t * k / n);
    return times;
}

PropertyReport merge(std::string name, const std::vector<Counts>& parts)
{
    PropertyReport rep;
    rep.name = std::move(name);
    for (const auto& c : parts) {
        rep.checks += c.checks;
        rep.violations += c.violations;
    }
    std::ostringstream os;
    os << rep.violations << " violations in " << rep.checks << " checks";
    rep.detail = os.str();
    return rep;
}

}

PropertyReport check_attractiveness(std::uint64_t master_seed, std::size_t seeds, const ReplicaOptions& exec)
{
    // (lower, upper) pairs, ordered on both sides of the step
    const std::vector<std::pair<StepMeasureSpec, StepMeasureSpec>> pairs = {
        {{0.2, 0.2}, {0.5, 0.5}},
        {{0.5, 0.1}, {1.0, 0.1}},
        {{1.0, 0.0}, {2.0, 0.5}},
        {{0.3, 0.3}, {3.0, 1.0}},
        {{1.0, 0.5}, {Density::infinite(), 0.5}},
    };
    const Window window{-40, 40};
    const double t = 20.0;
    auto parts = run_replicas<Counts>(
        seeds,
        [&](std::size_t r) {
            Counts c;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                Rng ra = make_rng(master_seed, r, kPairDomain + 16 * k);
                Rng rb = make_rng(master_seed, r, kPairDomain + 16 * k);
                CoupledPair pair{sample_step_measure(pairs[k].first, window, ra),
                                 sample_step_measure(pairs[k].second, window, rb), ClockSchedule(master_seed, r)};
                if (!leq(pair.a, pair.b))
                    ++c.violations;
                const auto trace = run_coupled(pair, t, grid_times(t, 20));
                for (bool ok : trace.a_leq_b) {
                    ++c.checks;
                    c.violations += ok ? 0 : 1;
                }
            }
            return c;
        },
        exec);
    return merge("attractiveness", parts);
}

PropertyReport check_single_discrepancy(std::uint64_t master_seed, std::size_t seeds, const ReplicaOptions& exec)
{
    const double t = 30.0;
    auto parts = run_replicas<Counts>(
        seeds,
        [&](std::size_t r) {
            Counts c;
            auto check = [&](CoupledPair& pair) {
                const auto trace = run_coupled(pair, t, grid_times(t, 30));
                for (const auto& set : trace.sets) {
                    ++c.checks;
                    if (set.size() != 1 || set[0].signed_count != 1)
                        ++c.violations;
                }
            };
            // random step background with one extra particle at the origin
            Rng ra = make_rng(master_seed, r, kPairDomain);
            Rng rb = make_rng(master_seed, r, kPairDomain);
            StepMeasureSpec spec{1.0, 0.5};
            CoupledPair random_pair{sample_step_measure(spec, {-60, 60}, ra), sample_step_measure(spec, {-60, 60}, rb),
                                    ClockSchedule(master_seed, r)};
            random_pair.a.add_first_class(0, 1);
            check(random_pair);
            // infinite step: reservoir at -1, the extra particle at the origin
            Configuration b(Window{-1, 80}, 0);
            b.set_infinite(-1);
            Configuration a = b;
            a.add_first_class(0, 1);
            CoupledPair reservoir_pair{a, b, ClockSchedule(master_seed, r)};
            check(reservoir_pair);
            return c;
        },
        exec);
    return merge("single discrepancy", parts);
}

namespace {

struct Projected {
    std::vector<std::int64_t> totals;
    std::vector<std::int64_t> low_counts;
    std::vector<Site> low_tags;
};

Projected project(const Configuration& c, int max_class, const std::vector<Tag>& tags)
{
    Projected p;
    for (Site x = c.xmin(); x <= c.xmax(); ++x) {
        const auto& s = c.site(x);
        p.totals.push_back(s.total());
        std::int64_t low = 0;
        for (int k = 1; k <= max_class; ++k)
            low += s.count_class(k) == kInfinite ? 0 : s.count_class(k);
        p.low_counts.push_back(low);
    }
    for (Tag t : tags)
        p.low_tags.push_back(c.tagged(t).position);
    return p;
}

}

PropertyReport check_class_censoring(std::uint64_t master_seed, std::size_t seeds, const ReplicaOptions& exec)
{
    const double t = 40.0;
    const Window window{-50, 80};
    const auto times = grid_times(t, 20);
    auto parts = run_replicas<Counts>(
        seeds,
        [&](std::size_t r) {
            Counts c;
            Rng rng = make_rng(master_seed, r, kCensorDomain);
            const ClockSchedule clocks(master_seed, r);
            // background, then tagged particles of classes 1..4 placed in class order
            Configuration base = sample_step_measure({1.0, 0.3}, window, rng);
            std::vector<std::pair<Site, int>> extras;
            for (int cls = 1; cls <= 4; ++cls)
                for (int k = 0; k < 3; ++k)
                    extras.emplace_back(static_cast<Site>(std::floor(uniform01(rng) * 21.0)) - 10, cls);
            for (int m = 1; m <= 3; ++m) {
                Configuration full = base;
                Configuration cut = base;
                std::vector<Tag> low;
                for (const auto& [x, cls] : extras)
                    if (cls <= m) {
                        low.push_back(full.place(x, cls));
                        cut.place(x, cls);
                    }
                for (const auto& [x, cls] : extras)
                    if (cls > m)
                        full.place(x, cls);
                TazrpEngine ef(full, clocks);
                TazrpEngine ec(cut, clocks);
                for (double s : times) {
                    ef.advance_to(s);
                    ec.advance_to(s);
                    const auto pf = project(full, m, low);
                    const auto pc = project(cut, m, low);
                    ++c.checks;
                    if (pf.low_counts != pc.low_counts || pf.low_tags != pc.low_tags)
                        ++c.violations;
                }
            }
            // multi-class picture against the coupled pair it encodes
            Rng ra = make_rng(master_seed, r, kPairDomain);
            Rng rb = make_rng(master_seed, r, kPairDomain);
            CoupledPair pair{sample_step_measure({2.0, 0.5}, window, ra), sample_step_measure({1.0, 0.5}, window, rb),
                             clocks};
            Configuration multi = discrepancy_as_second_class(pair);
            TazrpEngine em(multi, clocks);
            TazrpEngine ea(pair.a, clocks);
            TazrpEngine eb(pair.b, clocks);
            for (double s : times) {
                em.advance_to(s);
                ea.advance_to(s);
                eb.advance_to(s);
                const auto pm = project(multi, 1, {});
                const auto pa = project(pair.a, 1, {});
                const auto pb = project(pair.b, 1, {});
                ++c.checks;
                if (pm.totals != pa.totals || pm.low_counts != pb.totals)
                    ++c.violations;
            }
            return c;
        },
        exec);
    return merge("class censoring", parts);
}

PropertyReport check_ring_stationarity(const ExperimentPlan& plan, double sigmas)
{
    const auto rep = exp_ring_stationarity(plan);
    PropertyReport out;
    out.name = "ring stationarity";
    out.checks = 2;
    const double z_occ = std::abs(rep.occupancy.point - rep.occupancy_reference) / rep.occupancy.std_error;
    const double z_ind = std::abs(rep.indicator.point - rep.indicator_reference) / rep.indicator.std_error;
    out.violations = (z_occ <= sigmas ? 0 : 1) + (z_ind <= sigmas ? 0 : 1);
    std::ostringstream os;
    os << "mean occupancy " << rep.occupancy.point << " (z=" << z_occ << "), occupied fraction "
       << rep.indicator.point << " (z=" << z_ind << ")";
    out.detail = os.str();
    return out;
}

}
