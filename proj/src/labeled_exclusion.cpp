#include "rarefan/dynamics.hpp"

#include <stdexcept>

namespace rarefan {

LabeledExclusion::LabeledExclusion(std::vector<Site> positions, int direction, std::int64_t key_offset,
                                   const ClockSchedule& clocks)
    : pos_(std::move(positions)), moves_(pos_.size(), 0), dir_(direction), key_offset_(key_offset),
      clocks_(clocks), scheduled_(pos_.size(), 0)
{
    if (dir_ != 1 && dir_ != -1)
        throw std::invalid_argument("direction must be +1 or -1");
    for (std::size_t i = 1; i < pos_.size(); ++i)
        if ((pos_[i - 1] - pos_[i]) * dir_ <= 0)
            throw std::invalid_argument("walkers must be strictly ordered behind the leader");
    for (std::size_t i = 0; i < pos_.size(); ++i)
        maybe_schedule(i, 0.0);
}

bool LabeledExclusion::can_move(std::size_t i) const
{
    return i == 0 || pos_[i] + dir_ != pos_[i - 1];
}

void LabeledExclusion::maybe_schedule(std::size_t i, double after)
{
    if (i >= pos_.size() || scheduled_[i] || !can_move(i))
        return;
    scheduled_[i] = 1;
    queue_.push({clocks_.next_ring_after(static_cast<std::int64_t>(i) + key_offset_, after), static_cast<Site>(i)});
}

void LabeledExclusion::advance_to(double until)
{
    if (until < now_)
        throw std::invalid_argument("advance_to: time runs backwards");
    while (!queue_.empty() && queue_.top().time <= until) {
        const detail::Ring ring = queue_.top();
        queue_.pop();
        const auto i = static_cast<std::size_t>(ring.site);
        scheduled_[i] = 0;
        now_ = ring.time;
        if (!can_move(i))
            continue;
        pos_[i] += dir_;
        ++moves_[i];
        if (log_)
            log_->push_back({ring.time, ring.site, 1, ring.site});
        maybe_schedule(i, ring.time);
        maybe_schedule(i + 1, ring.time);
    }
    now_ = until;
}

}
