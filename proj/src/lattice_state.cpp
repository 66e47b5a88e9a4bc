#include "rarefan/lattice_state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rarefan {

std::int64_t SiteOccupancy::first_class() const
{
    return infinite_ ? kInfinite : count_class(1);
}

std::int64_t SiteOccupancy::count_class(int cls) const
{
    if (infinite_ && cls == 1)
        return kInfinite;
    std::int64_t n = 0;
    for (const auto& e : queue_)
        if (e.cls == cls)
            n += e.count;
    return n;
}

int SiteOccupancy::front_class() const
{
    if (infinite_)
        return 1;
    return queue_.empty() ? 0 : queue_.front().cls;
}

std::vector<Occupant> SiteOccupancy::occupants() const
{
    std::vector<Occupant> out;
    for (const auto& e : queue_)
        for (std::int64_t i = 0; i < e.count; ++i)
            out.push_back({e.cls, e.tag});
    return out;
}

Configuration::Configuration(Window window, std::int64_t guard_width)
    : window_(window)
{
    if (window.xmin >= window.xmax)
        throw std::invalid_argument("window must satisfy xmin < xmax, got [" + std::to_string(window.xmin) +
                                    "," + std::to_string(window.xmax) + "]");
    if (guard_width < 0)
        throw std::invalid_argument("guard width must be >= 0");
    sites_.resize(static_cast<std::size_t>(window.size()));
    exited_.assign(2, 0);
    set_guards(guard_width, guard_width);
}

Configuration make_config(Window window, std::int64_t guard_width)
{
    return Configuration(window, guard_width);
}

void Configuration::set_guards(std::int64_t left_width, std::int64_t right_width)
{
    left_guard_ = std::max<std::int64_t>(0, std::min(left_width, -window_.xmin));
    right_guard_ = std::max<std::int64_t>(0, std::min(right_width, window_.xmax));
}

SiteOccupancy& Configuration::at(Site x)
{
    if (!window_.contains(x))
        throw std::out_of_range("site " + std::to_string(x) + " outside window [" + std::to_string(window_.xmin) +
                                "," + std::to_string(window_.xmax) + "]");
    return sites_[static_cast<std::size_t>(x - window_.xmin)];
}

const SiteOccupancy& Configuration::site(Site x) const
{
    return const_cast<Configuration*>(this)->at(x);
}

void Configuration::set_infinite(Site x)
{
    auto& s = at(x);
    s.infinite_ = true;
    // finite first-class particles are swallowed by the reservoir
    std::erase_if(s.queue_, [](const SiteOccupancy::Entry& e) { return e.cls == 1; });
    s.total_ = 0;
    for (const auto& e : s.queue_)
        s.total_ += e.count;
}

Tag Configuration::new_tag(int cls, Site x, std::int64_t rank)
{
    Tag tag = static_cast<Tag>(registry_.size());
    registry_.push_back({tag, cls, x, x, rank, true});
    return tag;
}

void Configuration::insert(SiteOccupancy& s, Occupant o)
{
    if (s.infinite_ && o.cls == 1)
        return;
    auto& q = s.queue_;
    std::size_t idx = q.size();
    while (idx > 0 && q[idx - 1].cls > o.cls)
        --idx;
    ++s.total_;
    if (o.tag == kAnonymous && idx > 0 && q[idx - 1].tag == kAnonymous && q[idx - 1].cls == o.cls) {
        ++q[idx - 1].count;
        return;
    }
    q.insert(q.begin() + static_cast<std::ptrdiff_t>(idx), {o.cls, o.tag, 1});
}

void Configuration::add_first_class(Site x, std::int64_t count)
{
    if (count < 0)
        throw std::invalid_argument("negative particle count");
    auto& s = at(x);
    if (s.infinite_ || count == 0)
        return;
    auto& q = s.queue_;
    std::size_t idx = q.size();
    while (idx > 0 && q[idx - 1].cls > 1)
        --idx;
    s.total_ += count;
    if (idx > 0 && q[idx - 1].tag == kAnonymous) {
        q[idx - 1].count += count;
        return;
    }
    q.insert(q.begin() + static_cast<std::ptrdiff_t>(idx), {1, kAnonymous, count});
}

Tag Configuration::place(Site x, int cls, std::optional<Tag> tag)
{
    if (cls < 1)
        throw std::invalid_argument("class must be >= 1");
    auto& s = at(x);
    if (s.infinite_ && cls == 1)
        throw std::invalid_argument("cannot place a tagged first-class particle in a reservoir");
    std::int64_t rank = 0;
    for (const auto& e : s.queue_)
        if (e.cls <= cls)
            rank += e.count;
    Tag t;
    if (tag) {
        t = *tag;
        if (t < 0)
            throw std::invalid_argument("explicit tags must be >= 0");
        if (static_cast<std::size_t>(t) < registry_.size())
            throw std::invalid_argument("tag " + std::to_string(t) + " already assigned");
        while (registry_.size() < static_cast<std::size_t>(t))
            registry_.push_back({static_cast<Tag>(registry_.size()), 0, 0, 0, 0, false});
        registry_.push_back({t, cls, x, x, rank, true});
    } else {
        t = new_tag(cls, x, rank);
    }
    insert(s, {cls, t});
    return t;
}

void Configuration::clear_site(Site x)
{
    auto& s = at(x);
    for (const auto& e : s.queue_)
        if (e.tag != kAnonymous)
            registry_[static_cast<std::size_t>(e.tag)].in_window = false;
    s.queue_.clear();
    s.total_ = 0;
    s.infinite_ = false;
}

std::optional<Occupant> Configuration::pop_next_jumper(Site x)
{
    auto& s = at(x);
    if (s.infinite_) {
        ++minted_;
        return Occupant{1, new_tag(1, x, 0)};
    }
    if (s.queue_.empty())
        return std::nullopt;
    auto& e = s.queue_.front();
    Occupant o{e.cls, e.tag};
    --s.total_;
    if (--e.count == 0)
        s.queue_.erase(s.queue_.begin());
    return o;
}

void Configuration::push_arrival(Site x, Occupant o)
{
    auto& s = at(x);
    if (in_right_guard(x))
        violated_ = true;
    if (o.tag != kAnonymous)
        registry_[static_cast<std::size_t>(o.tag)].position = x;
    insert(s, o);
}

void Configuration::record_exit(Occupant o)
{
    if (static_cast<std::size_t>(o.cls) >= exited_.size())
        exited_.resize(static_cast<std::size_t>(o.cls) + 1, 0);
    ++exited_[static_cast<std::size_t>(o.cls)];
    if (o.tag != kAnonymous) {
        auto& r = registry_[static_cast<std::size_t>(o.tag)];
        r.in_window = false;
        r.position = window_.xmax + 1;
        violated_ = true;
    }
}

const TaggedParticle& Configuration::tagged(Tag tag) const
{
    if (tag < 0 || static_cast<std::size_t>(tag) >= registry_.size())
        throw std::out_of_range("unknown tag " + std::to_string(tag));
    return registry_[static_cast<std::size_t>(tag)];
}

std::vector<Tag> Configuration::tags_of_class(int cls) const
{
    std::vector<Tag> out;
    for (const auto& r : registry_)
        if (r.cls == cls && r.in_window)
            out.push_back(r.tag);
    return out;
}

std::int64_t Configuration::count_class(int cls) const
{
    std::int64_t n = 0;
    for (const auto& s : sites_)
        for (const auto& e : s.queue_)
            if (e.cls == cls)
                n += e.count;
    return n;
}

std::int64_t Configuration::exited(int cls) const
{
    return static_cast<std::size_t>(cls) < exited_.size() ? exited_[static_cast<std::size_t>(cls)] : 0;
}

bool Configuration::operator==(const Configuration& other) const
{
    if (!(window_ == other.window_))
        return false;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto& a = sites_[i];
        const auto& b = other.sites_[i];
        if (a.infinite_ != b.infinite_ || a.queue_.size() != b.queue_.size())
            return false;
        for (std::size_t k = 0; k < a.queue_.size(); ++k) {
            const auto& ea = a.queue_[k];
            const auto& eb = b.queue_[k];
            if (ea.cls != eb.cls || ea.tag != eb.tag || ea.count != eb.count)
                return false;
        }
    }
    return true;
}

bool leq(const Configuration& a, const Configuration& b)
{
    if (!(a.window() == b.window()))
        throw std::invalid_argument("leq: window mismatch");
    for (Site x = a.xmin(); x <= a.xmax(); ++x) {
        const auto& sb = b.site(x);
        if (sb.infinite())
            continue;
        const auto& sa = a.site(x);
        if (sa.infinite() || sa.total() > sb.total())
            return false;
    }
    return true;
}

}
