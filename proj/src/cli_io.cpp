#include "rarefan/cli_io.hpp"

#include "rarefan/format.hpp"
#include "rarefan/hydro.hpp"
#include "rarefan/mapping.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace rarefan {

using nlohmann::json;

const std::vector<ExperimentInfo>& experiment_catalog()
{
    static const std::vector<ExperimentInfo> catalog = {
        {"theorem1", "weighted sum over class-2 particles stacked at the origin of a step (rho, lambda)"},
        {"theorem2", "law of X2(t)/t from the infinite step versus sqrt(u)"},
        {"corollary3", "current J2(t)/t past the class-2 particle from the infinite step versus sqrt(a), mean 1/3"},
        {"theorem4", "class-2 speed, capped current and tagged speed from the perturbed step (rho, lambda)"},
        {"crossing", "probability that the class-2 particle ends right of the class-3 particle"},
        {"localEq", "occupation profile at sites floor(u t) versus the entropy solution"},
        {"tasepFK", "exclusion class-2 speed from the Bernoulli step versus the uniform law"},
        {"mapping", "pathwise check of the particle-gap bijection between exclusion and zero range"},
        {"stationarity", "time averages on a ring started from the Geometric product law"},
    };
    return catalog;
}

namespace {

struct Defaults {
    double t;
    std::size_t n;
    Density rho;
    double lambda;
    std::vector<double> u_grid;
};

Defaults defaults_for(const std::string& experiment)
{
    const Density inf = Density::infinite();
    if (experiment == "theorem1")
        return {400.0, 4000, 1.0, 0.0, {0.2, 0.36, 0.49, 0.81}};
    if (experiment == "theorem4")
        return {400.0, 4000, 1.0, 0.5, {}};
    if (experiment == "crossing")
        return {200.0, 10000, inf, 0.0, {}};
    if (experiment == "localEq")
        return {400.0, 4000, inf, 0.0, {0.09, 0.25, 0.49, 0.81}};
    if (experiment == "tasepFK")
        return {400.0, 4000, 1.0, 0.0, {}};
    if (experiment == "mapping")
        return {100.0, 100, 1.0, 0.0, {}};
    if (experiment == "stationarity")
        return {200.0, 400, 1.0, 0.0, {}};
    return {400.0, 4000, inf, 0.0, {}};
}

bool infinite_step_only(const std::string& e)
{
    return e == "theorem2" || e == "corollary3" || e == "crossing";
}

bool step_experiment(const std::string& e)
{
    return e == "theorem1" || e == "theorem4" || e == "localEq" || e == "tasepFK";
}

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError(path + ": " + what);
}

double number_field(const json& j, const std::string& key)
{
    if (!j.is_number())
        fail("/" + key, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail("/" + key, "must be finite");
    return v;
}

std::int64_t integer_field(const json& j, const std::string& key, std::int64_t min)
{
    if (!j.is_number_integer())
        fail("/" + key, "must be an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        fail("/" + key, "is too large");
    const auto v = j.get<std::int64_t>();
    if (v < min)
        fail("/" + key, "must be >= " + std::to_string(min));
    return v;
}

Density density_field(const json& j, const std::string& key)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "inf")
            return Density::infinite();
        fail("/" + key, "must be a number or \"inf\"");
    }
    const double v = number_field(j, key);
    if (v < 0.0)
        fail("/" + key, "must be >= 0");
    return Density(v);
}

}

RunConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("runConfig"))
        doc = doc.at("runConfig");
    if (!doc.is_object())
        throw ConfigError("/: config must be a JSON object");

    static const std::set<std::string> known = {"experiment", "t",          "N",      "rho",     "lambda",
                                                "Jmax",       "uGrid",      "ringSize", "M",     "masterSeed",
                                                "outDir",     "epsilon",    "delta"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key))
            fail("/" + key, "unknown key");

    if (!doc.contains("experiment") || !doc["experiment"].is_string())
        fail("/experiment", "required string");
    RunConfig c;
    c.experiment = doc["experiment"].get<std::string>();
    bool found = false;
    for (const auto& info : experiment_catalog())
        found = found || info.name == c.experiment;
    if (!found)
        fail("/experiment", "unknown experiment \"" + c.experiment + "\"");

    const Defaults d = defaults_for(c.experiment);
    c.t = d.t;
    c.replicas = d.n;
    c.rho = d.rho;
    c.lambda = d.lambda;
    c.u_grid = d.u_grid;

    if (doc.contains("t")) {
        c.t = number_field(doc["t"], "t");
        if (!(c.t > 0.0))
            fail("/t", "must be > 0");
    }
    if (doc.contains("N"))
        c.replicas = static_cast<std::size_t>(integer_field(doc["N"], "N", 1));
    if (doc.contains("rho"))
        c.rho = density_field(doc["rho"], "rho");
    if (doc.contains("lambda")) {
        c.lambda = number_field(doc["lambda"], "lambda");
        if (c.lambda < 0.0)
            fail("/lambda", "must be >= 0");
    }
    if (doc.contains("Jmax"))
        c.jmax = integer_field(doc["Jmax"], "Jmax", 0);
    if (doc.contains("uGrid")) {
        if (!doc["uGrid"].is_array())
            fail("/uGrid", "must be an array of numbers");
        c.u_grid.clear();
        std::size_t i = 0;
        for (const auto& v : doc["uGrid"])
            c.u_grid.push_back(number_field(v, "uGrid/" + std::to_string(i++)));
    }
    if (doc.contains("ringSize"))
        c.ring_size = integer_field(doc["ringSize"], "ringSize", 2);
    if (doc.contains("M"))
        c.particles = integer_field(doc["M"], "M", 1);
    if (doc.contains("masterSeed")) {
        const auto& s = doc["masterSeed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            fail("/masterSeed", "must be a non-negative 64-bit integer");
        c.master_seed = s.get<std::uint64_t>();
    }
    if (doc.contains("outDir")) {
        if (!doc["outDir"].is_string())
            fail("/outDir", "must be a string");
        c.out_dir = doc["outDir"].get<std::string>();
    }
    if (doc.contains("epsilon")) {
        c.epsilon = number_field(doc["epsilon"], "epsilon");
        if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
            fail("/epsilon", "must lie in (0,1)");
    }
    if (doc.contains("delta")) {
        c.delta = number_field(doc["delta"], "delta");
        if (!(c.delta > 0.0 && c.delta < 1.0))
            fail("/delta", "must lie in (0,1)");
    }

    const std::string& e = c.experiment;
    if (infinite_step_only(e) && (!c.rho.is_infinite() || c.lambda != 0.0))
        fail("/rho", "experiment " + e + " runs from the infinite step; rho must be \"inf\" and lambda 0");
    if (step_experiment(e) && !(c.rho > Density(c.lambda)))
        fail("/rho", "rho must exceed lambda");
    if ((e == "theorem1" || e == "theorem4" || e == "tasepFK" || e == "stationarity") && c.rho.is_infinite())
        fail("/rho", "must be finite for experiment " + e);
    if (e == "theorem4" && c.rho.value() - c.lambda > 1.0)
        fail("/rho", "rho-lambda <= 1 required");
    if (e == "tasepFK" && (c.rho.value() > 1.0 || c.lambda > 1.0))
        fail("/rho", "exclusion densities must lie in [0,1]");
    if ((e == "theorem1" || e == "localEq") && c.u_grid.empty())
        fail("/uGrid", "must not be empty");
    return c;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["experiment"] = c.experiment;
    j["t"] = c.t;
    j["N"] = c.replicas;
    if (c.rho.is_infinite())
        j["rho"] = "inf";
    else
        j["rho"] = c.rho.value();
    j["lambda"] = c.lambda;
    j["Jmax"] = c.jmax;
    j["uGrid"] = c.u_grid;
    j["ringSize"] = c.ring_size;
    j["M"] = c.particles;
    j["masterSeed"] = c.master_seed;
    j["outDir"] = c.out_dir;
    j["epsilon"] = c.epsilon;
    j["delta"] = c.delta;
    return j;
}

std::string config_hash(const RunConfig& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(config).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

ExperimentPlan plan_from_config(const RunConfig& c, const ReplicaOptions& exec)
{
    ExperimentPlan p;
    p.t = c.t;
    p.replicas = c.replicas;
    p.master_seed = c.master_seed;
    p.rho = c.rho;
    p.lambda = c.lambda;
    p.u_grid = c.u_grid;
    p.jmax = c.jmax;
    p.ring_size = c.ring_size;
    p.particles = c.particles;
    p.exec = exec;
    return p;
}

namespace {

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header)
    {
        bool first = true;
        for (const char* h : header) {
            if (!first)
                os_ << ',';
            os_ << h;
            first = false;
        }
        os_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... values)
    {
        bool first = true;
        ((cell(values, first)), ...);
        os_ << '\n';
    }

    std::string str() const { return os_.str(); }

private:
    void cell(double v, bool& first) { sep(first), os_ << format_number(v); }
    void cell(std::int64_t v, bool& first) { sep(first), os_ << v; }
    void cell(std::size_t v, bool& first) { sep(first), os_ << v; }
    void cell(const std::string& v, bool& first) { sep(first), os_ << v; }
    void sep(bool& first)
    {
        if (!first)
            os_ << ',';
        first = false;
    }

    std::ostringstream os_;
};

Verdict at_most(std::string name, double value, double threshold)
{
    return {std::move(name), value, threshold, value <= threshold};
}

json law_json(const LawComparison& law)
{
    json j;
    j["samples"] = law.values.size();
    j["supDistance"] = law.sup_distance;
    json dev = json::array();
    for (const auto& [u, d] : law.deviation)
        dev.push_back({{"u", u}, {"deviation", d}});
    j["deviationProfile"] = dev;
    return j;
}

json estimate_json(const Estimate& e)
{
    return {{"mean", e.point}, {"stderr", e.std_error}, {"n", e.n}};
}

// a JSON-safe number: infinities become the string "inf"
json num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

}

RunResult execute(const RunConfig& c, const ReplicaOptions& exec)
{
    const ExperimentPlan plan = plan_from_config(c, exec);
    RunResult out;
    json& s = out.summary;
    s["experiment"] = c.experiment;
    const std::string& e = c.experiment;

    if (e == "theorem2") {
        const auto rep = exp_second_class_speed(plan);
        Csv csv({"replica", "x2_over_t"});
        for (std::size_t i = 0; i < rep.x2.values.size(); ++i)
            csv.row(rep.x2.replica[i], rep.x2.values[i]);
        out.csv = csv.str();
        out.violations = rep.violations;
        s["x2OverT"] = law_json(rep.x2);
        s["trend"] = {{"t", rep.trend_t}, {"supDistance", rep.trend_sup_distance}};
        out.verdicts.push_back(at_most("sup distance of X2/t to sqrt(u)", rep.x2.sup_distance, 0.05));
        out.verdicts.push_back({"sup distance at t below sup distance at t/4", rep.x2.sup_distance,
                                rep.trend_sup_distance, rep.x2.sup_distance < rep.trend_sup_distance});
    } else if (e == "corollary3") {
        const auto rep = exp_second_class_current(plan);
        Csv csv({"replica", "j2_over_t"});
        for (std::size_t i = 0; i < rep.j2.values.size(); ++i)
            csv.row(rep.j2.replica[i], rep.j2.values[i]);
        out.csv = csv.str();
        out.violations = rep.violations;
        s["j2OverT"] = law_json(rep.j2);
        s["meanJ2OverT"] = estimate_json(rep.mean);
        s["reference"] = kInfiniteStepMeanCurrent;
        out.verdicts.push_back(
            at_most("|mean J2/t - 1/3|", std::abs(rep.mean.point - kInfiniteStepMeanCurrent), 0.03));
        out.verdicts.push_back(at_most("sup distance of J2/t to sqrt(a)", rep.j2.sup_distance, 0.05));
    } else if (e == "theorem1") {
        const auto rep = exp_stacked_weighted_sum(plan);
        Csv csv({"u", "weighted_sum", "reference", "tail_bound", "stderr"});
        json rows = json::array();
        for (const auto& r : rep.rows) {
            csv.row(r.u, r.weighted_sum, r.reference, r.tail_bound, r.std_error);
            rows.push_back({{"u", r.u}, {"weightedSum", r.weighted_sum}, {"reference", r.reference},
                            {"stderr", r.std_error}});
            out.verdicts.push_back(
                at_most("|weighted sum - limit| at u=" + format_number(r.u), std::abs(r.weighted_sum - r.reference), 0.06));
        }
        out.csv = csv.str();
        out.violations = rep.violations;
        const double tail = stacked_tail_bound(c.rho.value(), c.lambda, c.jmax);
        s["rows"] = rows;
        s["tailBound"] = tail;
        s["labelOrderViolations"] = rep.label_order_violations;
        out.verdicts.push_back(at_most("truncation tail bound", tail, 1e-7));
        out.verdicts.push_back(at_most("label order violations", static_cast<double>(rep.label_order_violations), 0));
    } else if (e == "theorem4") {
        const auto rep = exp_perturbed_step(plan);
        Csv csv({"replica", "x2_over_t", "j2_over_t", "x1_over_t"});
        for (std::size_t i = 0; i < rep.x2.values.size(); ++i)
            csv.row(rep.x2.replica[i], rep.x2.values[i], rep.j2_values[i], rep.front_values[i]);
        out.csv = csv.str();
        out.violations = rep.violations;
        const double quad = perturbed_mean_current_quadrature(c.rho.value(), c.lambda);
        s["x2OverT"] = law_json(rep.x2);
        s["meanJ2OverT"] = estimate_json(rep.j2_mean);
        s["meanJ2Reference"] = rep.j2_reference;
        s["meanJ2Quadrature"] = quad;
        s["x1OverT"] = estimate_json(rep.front_speed);
        s["x1Reference"] = rep.front_reference;
        s["meanInitialFrontGap"] = rep.mean_front_gap;
        out.verdicts.push_back(at_most("sup distance of X2/t to F_Z", rep.x2.sup_distance, 0.06));
        out.verdicts.push_back(
            at_most("|mean J2/t - closed form|", std::abs(rep.j2_mean.point - rep.j2_reference), 0.03));
        out.verdicts.push_back(at_most("|closed form - quadrature|", std::abs(rep.j2_reference - quad), 1e-8));
        out.verdicts.push_back(
            at_most("|X1/t - 1/(1+lambda)|", std::abs(rep.front_speed.point - rep.front_reference), 0.02));
    } else if (e == "crossing") {
        const auto rep = exp_crossing(plan);
        Csv csv({"replica", "x2", "x3"});
        for (std::size_t i = 0; i < rep.positions.size(); ++i)
            csv.row(rep.replica[i], rep.positions[i].first, rep.positions[i].second);
        out.csv = csv.str();
        out.violations = rep.violations;
        s["overtaken"] = estimate_json(rep.overtaken);
        s["caughtUp"] = estimate_json(rep.caught_up);
        s["tieFraction"] = rep.tie_fraction;
        s["trend"] = {{"t", rep.trend_t}, {"tieFraction", rep.trend_tie_fraction}};
        out.verdicts.push_back(at_most("|P(X2 > X3) - 2/3|", std::abs(rep.overtaken.point - 2.0 / 3.0), 0.025));
        out.verdicts.push_back({"tie fraction at t below tie fraction at t/2", rep.tie_fraction,
                                rep.trend_tie_fraction,
                                rep.tie_fraction < rep.trend_tie_fraction ||
                                    (rep.tie_fraction == 0.0 && rep.trend_tie_fraction == 0.0)});
    } else if (e == "localEq") {
        const auto rep = exp_local_equilibrium(plan);
        Csv csv({"u", "site", "indicator_mean", "indicator_stderr", "indicator_reference", "density_mean",
                 "density_stderr", "density_reference"});
        json rows = json::array();
        for (const auto& r : rep.rows) {
            csv.row(r.u, static_cast<std::int64_t>(r.site), r.indicator.point, r.indicator.std_error,
                    r.indicator_reference, r.density.point, r.density.std_error, r.density_reference);
            rows.push_back({{"u", r.u},
                            {"site", r.site},
                            {"indicator", estimate_json(r.indicator)},
                            {"indicatorReference", r.indicator_reference},
                            {"density", {{"mean", num(r.density.point)}, {"stderr", num(r.density.std_error)}}},
                            {"densityReference", num(r.density_reference)}});
            out.verdicts.push_back(at_most("|occupied fraction - phi(rho(1,u))| at u=" + format_number(r.u),
                                           std::abs(r.indicator.point - r.indicator_reference), 0.03));
        }
        out.csv = csv.str();
        out.violations = rep.violations;
        s["rows"] = rows;
    } else if (e == "tasepFK") {
        const auto rep = exp_tasep_second_class(plan);
        Csv csv({"replica", "y2_over_t"});
        for (std::size_t i = 0; i < rep.y2.values.size(); ++i)
            csv.row(rep.y2.replica[i], rep.y2.values[i]);
        out.csv = csv.str();
        out.violations = rep.violations;
        s["y2OverT"] = law_json(rep.y2);
        s["support"] = {rep.lo, rep.hi};
        out.verdicts.push_back(at_most("sup distance of Y2/t to the uniform law", rep.y2.sup_distance, 0.05));
    } else if (e == "mapping") {
        const auto rep = exp_gap_mapping(plan);
        Csv csv({"seed", "divergences", "first_divergence_time", "identity_failures"});
        for (const auto& r : rep.seeds)
            csv.row(r.seed, r.divergences,
                    r.first_divergence_time < 0.0 ? std::string() : format_number(r.first_divergence_time),
                    r.identity_failures);
        out.csv = csv.str();
        s["divergences"] = rep.divergences;
        s["identityFailures"] = rep.identity_failures;
        out.verdicts.push_back(at_most("pathwise divergences", static_cast<double>(rep.divergences), 0));
        out.verdicts.push_back(at_most("identity failures", static_cast<double>(rep.identity_failures), 0));
    } else if (e == "stationarity") {
        const auto rep = exp_ring_stationarity(plan);
        Csv csv({"replica", "mean_occupancy", "mean_indicator"});
        for (std::size_t i = 0; i < rep.occupancy_values.size(); ++i)
            csv.row(i, rep.occupancy_values[i], rep.indicator_values[i]);
        out.csv = csv.str();
        s["occupancy"] = estimate_json(rep.occupancy);
        s["indicator"] = estimate_json(rep.indicator);
        s["occupancyReference"] = rep.occupancy_reference;
        s["indicatorReference"] = rep.indicator_reference;
        const double z_occ = std::abs(rep.occupancy.point - rep.occupancy_reference) / rep.occupancy.std_error;
        const double z_ind = std::abs(rep.indicator.point - rep.indicator_reference) / rep.indicator.std_error;
        out.verdicts.push_back(at_most("mean occupancy, standard errors from rho", z_occ, 3.0));
        out.verdicts.push_back(at_most("occupied fraction, standard errors from phi(rho)", z_ind, 3.0));
    } else {
        throw ConfigError("/experiment: unknown experiment \"" + e + "\"");
    }

    s["violations"] = out.violations;
    s["replicas"] = c.replicas;
    s["dkw"] = {{"epsilon", c.epsilon},
                {"delta", c.delta},
                {"requiredReplicas", dkw_sample_size(c.epsilon, c.delta)},
                {"radiusAtN", dkw_radius(c.replicas, c.delta)},
                {"effectiveEpsilon", std::max(c.epsilon, dkw_radius(c.replicas, c.delta))}};
    json verdicts = json::array();
    for (const auto& v : out.verdicts)
        verdicts.push_back({{"criterion", v.name}, {"value", v.value}, {"threshold", v.threshold}, {"pass", v.pass}});
    s["verdicts"] = verdicts;
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::filesystem::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
    f << content;
    if (!f)
        throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

}

int run(const RunConfig& config, const ReplicaOptions& exec, std::ostream& log)
{
    namespace fs = std::filesystem;
    const fs::path dir(config.out_dir);
    try {
        fs::create_directories(dir);
    } catch (const fs::filesystem_error& err) {
        log << "error: " << err.what() << '\n';
        return kExitFailure;
    }

    json manifest;
    manifest["toolVersion"] = kToolVersion;
    manifest["runConfig"] = config_to_json(config);
    manifest["configHash"] = config_hash(config);
    manifest["masterSeed"] = config.master_seed;
    manifest["replicas"] = config.replicas;

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    int code = kExitOk;
    try {
        RunResult result = execute(config, exec);
        bool all = true;
        for (const auto& v : result.verdicts)
            all = all && v.pass;
        code = all ? kExitOk : kExitThresholdFailed;
        manifest["wallTimeSeconds"] = elapsed();
        manifest["violations"] = result.violations;
        manifest["verdicts"] = result.summary["verdicts"];
        write_file(dir / "results.csv", result.csv);
        write_file(dir / "summary.json", result.summary.dump(2) + "\n");
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        for (const auto& v : result.verdicts)
            log << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << format_number(v.value) << " (threshold "
                << format_number(v.threshold) << ")\n";
    } catch (const LightConeAbort& abort) {
        log << "abort: " << abort.what() << '\n';
        manifest["wallTimeSeconds"] = elapsed();
        manifest["violations"] = abort.violations;
        manifest["aborted"] = true;
        try {
            write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        } catch (const std::exception&) {
        }
        return kExitLightCone;
    } catch (const fs::filesystem_error& err) {
        log << "error: " << err.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& err) {
        log << "error: " << err.what() << '\n';
        return kExitFailure;
    }
    return code;
}

}
