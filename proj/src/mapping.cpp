#include "rarefan/mapping.hpp"

#include "rarefan/clocks.hpp"
#include "rarefan/dynamics.hpp"
#include "rarefan/initial_measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rarefan {

namespace {

constexpr std::uint64_t kGapDomain = 2;

// first index where the logs differ after mapping zero-range sites to walkers;
// returns the number of events compared and records a divergence if any
void compare_logs(const EventLog& zr, const EventLog& walkers, Site site_limit, Site walker_shift,
                  MappingSeedResult& out)
{
    std::size_t i = 0;
    std::size_t j = 0;
    for (;;) {
        while (i < zr.size() && zr[i].site > site_limit)
            ++i;
        const bool zr_done = i >= zr.size();
        const bool w_done = j >= walkers.size();
        if (zr_done && w_done)
            return;
        if (zr_done || w_done || zr[i].time != walkers[j].time || zr[i].site + walker_shift != walkers[j].site) {
            ++out.divergences;
            double when = zr_done ? walkers[j].time : w_done ? zr[i].time : std::min(zr[i].time, walkers[j].time);
            if (out.first_divergence_time < 0.0 || when < out.first_divergence_time)
                out.first_divergence_time = when;
            return;
        }
        ++out.events_compared;
        ++i;
        ++j;
    }
}

void note_mismatch(MappingSeedResult& out, double when)
{
    ++out.divergences;
    if (out.first_divergence_time < 0.0 || when < out.first_divergence_time)
        out.first_divergence_time = when;
}

std::vector<double> snapshot_times(double t, std::size_t n)
{
    std::vector<double> times;
    for (std::size_t k = 1; k <= n; ++k)
        times.push_back(t * static_cast<double>(k) / static_cast<double>(n));
    return times;
}

// particles to the right of the leader-side walker, labeled TASEP picture
void particle_picture(const ClockSchedule& clocks, Rng& rng, std::int64_t m, double t, std::size_t snapshots,
                      MappingSeedResult& out)
{
    std::vector<Site> x(static_cast<std::size_t>(m));
    x[0] = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        x[i] = x[i - 1] - 1 - sample_geometric(1.0, rng);
    const auto gaps = encode_gaps(x);

    Configuration zr(Window{0, m}, 0);
    zr.set_infinite(0);
    for (std::int64_t i = 1; i < m; ++i)
        zr.add_first_class(i, gaps[static_cast<std::size_t>(i - 1)]);

    EventLog zr_log;
    EventLog walker_log;
    TazrpEngine zr_engine(zr, clocks);
    zr_engine.set_log(&zr_log);
    LabeledExclusion walkers(x, +1, 0, clocks);
    walkers.set_log(&walker_log);

    for (double s : snapshot_times(t, snapshots)) {
        zr_engine.advance_to(s);
        walkers.advance_to(s);
        const auto now = encode_gaps(walkers.positions());
        for (std::int64_t i = 1; i < m; ++i)
            if (zr.site(i).total() != now[static_cast<std::size_t>(i - 1)]) {
                note_mismatch(out, s);
                break;
            }
        if (zr.minted() != walkers.positions()[0] - x[0])
            note_mismatch(out, s);
    }
    compare_logs(zr_log, walker_log, m - 1, 0, out);
}

// Holes as walkers moving left: hole h_0 leads into an infinite block of
// particles, the pair (h_p, next particle) plays the class-2 particle and
// cluster j (particles between h_j and h_{j+1}) is zero-range site j.
void hole_picture(const ClockSchedule& clocks, double t, std::size_t snapshots, MappingSeedResult& out)
{
    const std::int64_t holes = window_for(t);
    std::vector<Site> h(static_cast<std::size_t>(holes));
    h[0] = 0;
    for (std::size_t j = 1; j < h.size(); ++j)
        h[j] = static_cast<Site>(j) + 1;

    Configuration zr(Window{-1, holes - 1}, 0);
    zr.set_infinite(-1);
    const Tag second = zr.place(0, 2);

    EventLog zr_log;
    EventLog walker_log;
    TazrpEngine zr_engine(zr, clocks);
    zr_engine.set_log(&zr_log);
    LabeledExclusion walkers(h, -1, -1, clocks);
    walkers.set_log(&walker_log);

    std::vector<std::int64_t> cluster(static_cast<std::size_t>(holes), 0);
    cluster[0] = 1;
    std::size_t pair = 0;
    std::size_t replayed = 0;
    const auto last = static_cast<std::size_t>(holes - 1);

    for (double s : snapshot_times(t, snapshots)) {
        zr_engine.advance_to(s);
        walkers.advance_to(s);
        for (; replayed < walker_log.size(); ++replayed) {
            const auto w = static_cast<std::size_t>(walker_log[replayed].site);
            if (w >= 1) {
                --cluster[w - 1];
                if (w - 1 == pair && cluster[pair] == 0)
                    ++pair;
            }
            ++cluster[w];
        }
        ++out.snapshots;
        for (std::size_t j = 0; j + 1 < cluster.size(); ++j)
            if (cluster[j] != walkers.positions()[j + 1] - walkers.positions()[j] - 1 ||
                cluster[j] != zr.site(static_cast<Site>(j)).total()) {
                note_mismatch(out, s);
                break;
            }
        if (cluster[last] != zr.site(static_cast<Site>(last)).total() + zr.exited(1) + zr.exited(2))
            note_mismatch(out, s);

        std::int64_t right_of_pair = -1;
        for (std::size_t j = pair; j < cluster.size(); ++j)
            right_of_pair += cluster[j];
        const bool pair_valid = pair < last;
        if (!pair_valid || static_cast<Site>(pair) != second_class_position(zr, second) ||
            right_of_pair != current_past_second_class(zr, second))
            ++out.identity_failures;
    }
    compare_logs(zr_log, walker_log, holes - 2, 1, out);
}

}

std::vector<std::int64_t> encode_gaps(const std::vector<Site>& positions)
{
    std::vector<std::int64_t> gaps;
    for (std::size_t i = 1; i < positions.size(); ++i) {
        const std::int64_t g = positions[i - 1] - positions[i] - 1;
        if (g < 0)
            throw std::invalid_argument("negative gap between particles " + std::to_string(i) + " and " +
                                        std::to_string(i + 1));
        gaps.push_back(g);
    }
    return gaps;
}

MappingSeedResult gap_mapping_replica(std::uint64_t master_seed, std::size_t seed, std::int64_t particles, double t,
                                      std::size_t snapshots)
{
    if (particles < 1)
        throw std::invalid_argument("need at least one particle");
    if (!(t > 0.0))
        throw std::invalid_argument("t must be positive");
    MappingSeedResult out;
    out.seed = seed;
    const ClockSchedule clocks(master_seed, seed);
    Rng rng = make_rng(master_seed, seed, kGapDomain);
    particle_picture(clocks, rng, particles, t, snapshots, out);
    hole_picture(clocks, t, snapshots, out);
    return out;
}

MappingReport exp_gap_mapping(const ExperimentPlan& plan)
{
    MappingReport rep;
    rep.seeds = run_replicas<MappingSeedResult>(
        plan.replicas, [&](std::size_t s) { return gap_mapping_replica(plan.master_seed, s, plan.particles, plan.t); },
        plan.exec);
    for (const auto& s : rep.seeds) {
        rep.divergences += s.divergences;
        rep.identity_failures += s.identity_failures;
    }
    return rep;
}

}
