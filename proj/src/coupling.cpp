#include "rarefan/coupling.hpp"
#include "rarefan/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace rarefan {

DiscrepancySet discrepancies(const Configuration& a, const Configuration& b)
{
    if (!(a.window() == b.window()))
        throw std::invalid_argument("discrepancies: window mismatch");
    DiscrepancySet out;
    for (Site x = a.xmin(); x <= a.xmax(); ++x) {
        const auto& sa = a.site(x);
        const auto& sb = b.site(x);
        if (sa.infinite() && sb.infinite())
            continue;
        if (sa.infinite() || sb.infinite()) {
            out.push_back({x, sa.infinite() ? kInfinite : -kInfinite});
            continue;
        }
        const std::int64_t d = sa.total() - sb.total();
        if (d != 0)
            out.push_back({x, d});
    }
    return out;
}

CoupledTrace run_coupled(CoupledPair& pair, double until, const std::vector<double>& observe_at)
{
    if (!(pair.a.window() == pair.b.window()))
        throw std::invalid_argument("coupled copies need identical windows");
    TazrpEngine ea(pair.a, pair.clocks);
    TazrpEngine eb(pair.b, pair.clocks);
    CoupledTrace trace;
    std::vector<double> times = observe_at;
    std::sort(times.begin(), times.end());
    for (double s : times) {
        if (s > until)
            break;
        ea.advance_to(s);
        eb.advance_to(s);
        trace.times.push_back(s);
        trace.sets.push_back(discrepancies(pair.a, pair.b));
        trace.a_leq_b.push_back(leq(pair.a, pair.b));
        trace.b_leq_a.push_back(leq(pair.b, pair.a));
    }
    ea.advance_to(until);
    eb.advance_to(until);
    trace.light_cone_violated = pair.a.light_cone_violated() || pair.b.light_cone_violated();
    return trace;
}

Configuration discrepancy_as_second_class(const CoupledPair& pair)
{
    const auto& a = pair.a;
    const auto& b = pair.b;
    if (!leq(b, a))
        throw std::invalid_argument("copies are not ordered: need B <= A site-wise");
    Configuration out(a.window(), 0);
    out.set_guards(a.left_guard(), a.right_guard());
    out.set_periodic(a.periodic());
    int next_class = 2;
    for (Site x = a.xmin(); x <= a.xmax(); ++x) {
        const auto& sb = b.site(x);
        const auto& sa = a.site(x);
        if (sb.infinite()) {
            out.set_infinite(x);
            continue;
        }
        if (sa.infinite())
            throw std::invalid_argument("infinite excess at site " + std::to_string(x));
        out.add_first_class(x, sb.total());
        for (std::int64_t k = 0; k < sa.total() - sb.total(); ++k)
            out.place(x, next_class++);
    }
    return out;
}

namespace {

Configuration rebuild(const Configuration& config, int max_class, bool flatten)
{
    Configuration out(config.window(), 0);
    out.set_guards(config.left_guard(), config.right_guard());
    out.set_periodic(config.periodic());
    for (Site x = config.xmin(); x <= config.xmax(); ++x) {
        const auto& s = config.site(x);
        if (s.infinite())
            out.set_infinite(x);
        for (const auto& o : s.occupants()) {
            if (o.cls > max_class)
                continue;
            if (flatten || (o.cls == 1 && o.tag == kAnonymous))
                out.add_first_class(x, 1);
            else
                out.place(x, o.cls);
        }
    }
    return out;
}

}

Configuration ignore_classes(const Configuration& config)
{
    return rebuild(config, std::numeric_limits<int>::max(), true);
}

Configuration censor_classes(const Configuration& config, int max_class)
{
    return rebuild(config, max_class, false);
}

}
