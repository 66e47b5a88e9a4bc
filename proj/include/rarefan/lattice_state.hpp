#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace rarefan {

using Site = std::int64_t;
using Tag = std::int64_t;

inline constexpr Tag kAnonymous = -1;
inline constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();

struct Window {
    Site xmin = 0;
    Site xmax = 0;

    std::int64_t size() const { return xmax - xmin + 1; }
    bool contains(Site x) const { return x >= xmin && x <= xmax; }
    bool operator==(const Window&) const = default;
};

struct Occupant {
    int cls = 1;
    Tag tag = kAnonymous;

    bool operator==(const Occupant&) const = default;
};

struct TaggedParticle {
    Tag tag = kAnonymous;
    int cls = 1;
    Site position = 0;
    Site birth_site = 0;
    std::int64_t birth_rank = 0;
    bool in_window = true;
};

// Occupants of one site in jump order: lower class first, FIFO within a class.
// Untagged first-class particles are stored as counted runs.
class SiteOccupancy {
public:
    bool infinite() const { return infinite_; }
    bool empty() const { return !infinite_ && total_ == 0; }
    // kInfinite for a reservoir
    std::int64_t total() const { return infinite_ ? kInfinite : total_; }
    std::int64_t first_class() const;
    std::int64_t count_class(int cls) const;
    // class of the occupant that would jump next; 0 if empty
    int front_class() const;
    std::vector<Occupant> occupants() const;

private:
    friend class Configuration;

    struct Entry {
        int cls;
        Tag tag;
        std::int64_t count;
    };

    bool infinite_ = false;
    std::int64_t total_ = 0;
    std::vector<Entry> queue_;
};

class Configuration {
public:
    Configuration(Window window, std::int64_t guard_width);

    const Window& window() const { return window_; }
    Site xmin() const { return window_.xmin; }
    Site xmax() const { return window_.xmax; }
    bool contains(Site x) const { return window_.contains(x); }

    const SiteOccupancy& site(Site x) const;

    void set_infinite(Site x);
    void add_first_class(Site x, std::int64_t count);
    // appends a tagged particle; a fresh tag is minted when none is given
    Tag place(Site x, int cls, std::optional<Tag> tag = std::nullopt);
    void clear_site(Site x);

    std::optional<Occupant> pop_next_jumper(Site x);
    void push_arrival(Site x, Occupant occupant);
    // a particle leaving the window to the right
    void record_exit(Occupant occupant);

    // guards: left guard lies in (-inf,-1], right guard in [1,inf)
    void set_guards(std::int64_t left_width, std::int64_t right_width);
    std::int64_t left_guard() const { return left_guard_; }
    std::int64_t right_guard() const { return right_guard_; }
    bool in_left_guard(Site x) const { return x < window_.xmin + left_guard_; }
    bool in_right_guard(Site x) const { return x > window_.xmax - right_guard_; }

    bool light_cone_violated() const { return violated_; }
    void flag_light_cone() { violated_ = true; }

    bool periodic() const { return periodic_; }
    void set_periodic(bool on) { periodic_ = on; }

    const TaggedParticle& tagged(Tag tag) const;
    std::size_t tag_count() const { return registry_.size(); }
    std::vector<Tag> tags_of_class(int cls) const;

    std::int64_t count_class(int cls) const;
    std::int64_t exited(int cls) const;
    std::int64_t minted() const { return minted_; }

    bool operator==(const Configuration& other) const;

private:
    SiteOccupancy& at(Site x);
    Tag new_tag(int cls, Site x, std::int64_t rank);
    void insert(SiteOccupancy& s, Occupant o);

    Window window_;
    std::vector<SiteOccupancy> sites_;
    std::vector<TaggedParticle> registry_;
    std::vector<std::int64_t> exited_;
    std::int64_t left_guard_ = 0;
    std::int64_t right_guard_ = 0;
    std::int64_t minted_ = 0;
    bool violated_ = false;
    bool periodic_ = false;
};

Configuration make_config(Window window, std::int64_t guard_width);

// site-wise order on per-site totals, all classes aggregated
bool leq(const Configuration& a, const Configuration& b);

}
