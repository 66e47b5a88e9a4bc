#include "rarefan/dynamics.hpp"
#include "engine_drive.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rarefan {

void write_event_csv(std::ostream& out, const EventLog& log)
{
    out << "time,site,class,tag\n";
    char buf[32];
    for (const auto& e : log) {
        std::snprintf(buf, sizeof buf, "%.17g", e.time);
        out << buf << ',' << e.site << ',' << e.cls << ',';
        if (e.tag != kAnonymous)
            out << e.tag;
        out << '\n';
    }
}

TazrpEngine::TazrpEngine(Configuration& config, const ClockSchedule& clocks)
    : config_(config), clocks_(clocks), scheduled_(static_cast<std::size_t>(config.window().size()), 0)
{
    for (Site x = config.xmin(); x <= config.xmax(); ++x)
        if (!config.site(x).empty())
            schedule(x, 0.0);
    track_front_ = !config.periodic() && config.left_guard() > 0 && !config.site(config.xmin()).infinite();
    if (track_front_) {
        front_site_ = config.xmin();
        front_limit_ = config.xmin() + config.left_guard();
        for (Tag t = 0; t < static_cast<Tag>(config.tag_count()); ++t) {
            const auto& p = config.tagged(t);
            if (p.in_window && p.cls > 0)
                front_limit_ = std::min(front_limit_, p.position);
        }
    }
}

void TazrpEngine::schedule(Site x, double after)
{
    auto& flag = scheduled_[static_cast<std::size_t>(x - config_.xmin())];
    if (flag)
        return;
    flag = 1;
    queue_.push({clocks_.next_ring_after(x, after), x});
}

void TazrpEngine::update_front(double until)
{
    if (!track_front_)
        return;
    while (front_site_ < front_limit_) {
        const double r = clocks_.next_ring_after(front_site_, front_time_);
        if (r > until)
            break;
        ++front_site_;
        front_time_ = r;
    }
    if (front_site_ >= front_limit_)
        config_.flag_light_cone();
}

void TazrpEngine::advance_to(double until)
{
    if (until < now_)
        throw std::invalid_argument("advance_to: time runs backwards");
    const Site xmax = config_.xmax();
    while (!queue_.empty() && queue_.top().time <= until) {
        const detail::Ring ring = queue_.top();
        queue_.pop();
        scheduled_[static_cast<std::size_t>(ring.site - config_.xmin())] = 0;
        now_ = ring.time;
        auto occ = config_.pop_next_jumper(ring.site);
        if (!occ)
            continue;
        ++jumps_;
        if (log_)
            log_->push_back({ring.time, ring.site, occ->cls, occ->tag});
        Site dest = ring.site + 1;
        if (dest > xmax && config_.periodic())
            dest = config_.xmin();
        if (dest > xmax) {
            config_.record_exit(*occ);
        } else {
            config_.push_arrival(dest, *occ);
            schedule(dest, ring.time);
        }
        if (!config_.site(ring.site).empty())
            schedule(ring.site, ring.time);
    }
    now_ = until;
    update_front(until);
}

RunStats TazrpEngine::stats() const
{
    return {jumps_, config_.light_cone_violated()};
}

RunStats run_tazrp_unit(Configuration& config, double until, const ClockSchedule& clocks, const Observers& observers)
{
    TazrpEngine engine(config, clocks);
    return drive(engine, config, until, observers);
}

}
