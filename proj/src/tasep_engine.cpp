#include "rarefan/dynamics.hpp"
#include "engine_drive.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace rarefan {

namespace {

constexpr int kHole = std::numeric_limits<int>::max();

}

TasepEngine::TasepEngine(Configuration& config, const ClockSchedule& clocks)
    : config_(config), clocks_(clocks), scheduled_(static_cast<std::size_t>(config.window().size()), 0)
{
    for (Site x = config.xmin(); x <= config.xmax(); ++x) {
        const auto& s = config.site(x);
        if (s.infinite() || s.total() > 1)
            throw std::invalid_argument("exclusion state needs at most one particle per site; site " +
                                        std::to_string(x) + " holds more");
    }
    for (Site x = config.xmin(); x <= config.xmax(); ++x)
        maybe_schedule(x, 0.0);
    track_fronts_ = !config.periodic() && (config.left_guard() > 0 || config.right_guard() > 0);
    left_front_ = config.xmin();
    right_front_ = config.xmax();
}

int TasepEngine::class_at(Site x) const
{
    if (x > config_.xmax()) {
        if (!config_.periodic())
            return kHole;
        x = config_.xmin();
    }
    const int c = config_.site(x).front_class();
    return c == 0 ? kHole : c;
}

bool TasepEngine::active(Site x) const
{
    const int m = class_at(x);
    return m != kHole && m < class_at(x + 1);
}

void TasepEngine::maybe_schedule(Site x, double after)
{
    if (x < config_.xmin() || x > config_.xmax())
        return;
    auto& flag = scheduled_[static_cast<std::size_t>(x - config_.xmin())];
    if (flag || !active(x))
        return;
    flag = 1;
    queue_.push({clocks_.next_ring_after(x, after), x});
}

void TasepEngine::update_fronts(double until)
{
    if (!track_fronts_)
        return;
    for (;;) {
        const double r = clocks_.next_ring_after(left_front_, left_time_);
        if (r > until || left_front_ >= right_front_)
            break;
        ++left_front_;
        left_time_ = r;
    }
    for (;;) {
        const double r = clocks_.next_ring_after(right_front_ - 1, right_time_);
        if (r > until || right_front_ <= left_front_)
            break;
        --right_front_;
        right_time_ = r;
    }
}

void TasepEngine::check_tag(Tag tag)
{
    if (!track_fronts_ || tag == kAnonymous)
        return;
    const auto& p = config_.tagged(tag);
    if (!p.in_window || p.position <= left_front_ || p.position >= right_front_)
        config_.flag_light_cone();
}

void TasepEngine::advance_to(double until)
{
    if (until < now_)
        throw std::invalid_argument("advance_to: time runs backwards");
    while (!queue_.empty() && queue_.top().time <= until) {
        const detail::Ring ring = queue_.top();
        queue_.pop();
        const Site x = ring.site;
        scheduled_[static_cast<std::size_t>(x - config_.xmin())] = 0;
        now_ = ring.time;
        if (!active(x))
            continue;
        ++jumps_;
        Site dest = x + 1;
        if (dest > config_.xmax() && config_.periodic())
            dest = config_.xmin();
        const Occupant a = *config_.pop_next_jumper(x);
        if (log_)
            log_->push_back({ring.time, x, a.cls, a.tag});
        if (dest > config_.xmax()) {
            config_.record_exit(a);
        } else {
            const auto b = config_.pop_next_jumper(dest);
            config_.push_arrival(dest, a);
            if (b)
                config_.push_arrival(x, *b);
            if (track_fronts_ && ((b && b->tag != kAnonymous) || a.tag != kAnonymous)) {
                update_fronts(ring.time);
                check_tag(a.tag);
                if (b)
                    check_tag(b->tag);
            }
        }
        maybe_schedule(x - 1, ring.time);
        maybe_schedule(x, ring.time);
        maybe_schedule(dest, ring.time);
        if (config_.periodic() && x == config_.xmin())
            maybe_schedule(config_.xmax(), ring.time);
    }
    now_ = until;
    update_fronts(until);
    if (track_fronts_)
        for (Tag t = 0; t < static_cast<Tag>(config_.tag_count()); ++t)
            if (config_.tagged(t).cls > 0)
                check_tag(t);
}

RunStats TasepEngine::stats() const
{
    return {jumps_, config_.light_cone_violated()};
}

RunStats run_tasep(Configuration& config, double until, const ClockSchedule& clocks, const Observers& observers)
{
    TasepEngine engine(config, clocks);
    return drive(engine, config, until, observers);
}

}
