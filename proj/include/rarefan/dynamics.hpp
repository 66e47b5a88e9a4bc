#pragma once

#include "rarefan/clocks.hpp"
#include "rarefan/lattice_state.hpp"

#include <functional>
#include <iosfwd>
#include <queue>
#include <vector>

namespace rarefan {

struct JumpEvent {
    double time = 0.0;
    Site site = 0;
    int cls = 1;
    Tag tag = kAnonymous;

    bool operator==(const JumpEvent&) const = default;
};

using EventLog = std::vector<JumpEvent>;

// columns time,site,class,tag; tag is empty for anonymous particles
void write_event_csv(std::ostream& out, const EventLog& log);

struct RunStats {
    std::int64_t jumps = 0;
    bool light_cone_violated = false;
};

using SnapshotFn = std::function<void(double, const Configuration&)>;

struct Observers {
    std::vector<double> times;
    SnapshotFn on_snapshot;
    EventLog* log = nullptr;
};

namespace detail {

struct Ring {
    double time;
    Site site;
    bool operator>(const Ring& o) const { return time > o.time || (time == o.time && site > o.site); }
};

using RingQueue = std::priority_queue<Ring, std::vector<Ring>, std::greater<>>;

}

// Unit-rate totally asymmetric zero-range dynamics. Every site rings at the
// times of its clock; a ring at an empty site does nothing, so only occupied
// sites are kept in the queue.
class TazrpEngine {
public:
    TazrpEngine(Configuration& config, const ClockSchedule& clocks);

    // processes every ring with time <= until
    void advance_to(double until);
    double now() const { return now_; }
    void set_log(EventLog* log) { log_ = log; }
    RunStats stats() const;
    // rightmost site that may have felt the missing left boundary
    Site left_front() const { return front_site_; }

private:
    void schedule(Site x, double after);
    void update_front(double until);

    Configuration& config_;
    const ClockSchedule& clocks_;
    detail::RingQueue queue_;
    std::vector<char> scheduled_;
    EventLog* log_ = nullptr;
    double now_ = 0.0;
    std::int64_t jumps_ = 0;
    bool track_front_ = false;
    Site front_site_ = 0;
    double front_time_ = 0.0;
    Site front_limit_ = 0;
};

// Multi-class exclusion: a ring at x swaps the occupants of x and x+1 when the
// class at x is strictly lower (holes count as infinite class).
class TasepEngine {
public:
    TasepEngine(Configuration& config, const ClockSchedule& clocks);

    void advance_to(double until);
    double now() const { return now_; }
    void set_log(EventLog* log) { log_ = log; }
    RunStats stats() const;

private:
    int class_at(Site x) const;
    bool active(Site x) const;
    void maybe_schedule(Site x, double after);
    void update_fronts(double until);
    void check_tag(Tag tag);

    Configuration& config_;
    const ClockSchedule& clocks_;
    detail::RingQueue queue_;
    std::vector<char> scheduled_;
    EventLog* log_ = nullptr;
    double now_ = 0.0;
    std::int64_t jumps_ = 0;
    bool track_fronts_ = false;
    Site left_front_ = 0;
    double left_time_ = 0.0;
    Site right_front_ = 0;
    double right_time_ = 0.0;
};

RunStats run_tazrp_unit(Configuration& config, double until, const ClockSchedule& clocks,
                        const Observers& observers = {});
RunStats run_tasep(Configuration& config, double until, const ClockSchedule& clocks,
                   const Observers& observers = {});

// Labeled walkers with exclusion, all moving in one direction. Walker 0 leads;
// walker i moves only if the site ahead is not held by walker i-1. Walker i
// uses clock key i + key_offset. Logged events carry the walker index as site.
class LabeledExclusion {
public:
    LabeledExclusion(std::vector<Site> positions, int direction, std::int64_t key_offset,
                     const ClockSchedule& clocks);

    void advance_to(double until);
    const std::vector<Site>& positions() const { return pos_; }
    std::int64_t moves(std::size_t walker) const { return moves_[walker]; }
    void set_log(EventLog* log) { log_ = log; }

private:
    bool can_move(std::size_t i) const;
    void maybe_schedule(std::size_t i, double after);

    std::vector<Site> pos_;
    std::vector<std::int64_t> moves_;
    int dir_;
    std::int64_t key_offset_;
    const ClockSchedule& clocks_;
    detail::RingQueue queue_;
    std::vector<char> scheduled_;
    EventLog* log_ = nullptr;
    double now_ = 0.0;
};

// Jump rate g(k) for a site holding k particles.
struct RateFunction {
    std::function<double(std::int64_t)> g;
    // declared sup_k |g(k+1) - g(k)|
    double increment_bound = 1.0;
    std::int64_t checked_prefix = 256;

    // g(0) = 0, g(k) > 0 and non-decreasing on the checked prefix, increments within the bound
    void validate() const;

    static RateFunction unit();
    static RateFunction linear();
};

RunStats run_tazrp_general_g(Configuration& config, double until, const RateFunction& g, Rng& rng,
                             const Observers& observers = {});

// E[g(eta)] for eta ~ Geometric(rho)
double g_tilde(double rho, const RateFunction& g);
// d/drho of g_tilde
double g_tilde_prime(double rho, const RateFunction& g);

}
