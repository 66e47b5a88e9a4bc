#include <doctest.h>

#include <rarefan/cli_io.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace rarefan;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string parse_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("rarefan_cli_" + name);
    fs::remove_all(p);
    return p;
}

}

TEST_CASE("valid config with defaults")
{
    const auto c = parse_config(R"({"experiment":"theorem2","t":400,"N":2000,"masterSeed":42})");
    CHECK(c.experiment == "theorem2");
    CHECK(c.t == 400.0);
    CHECK(c.replicas == 2000);
    CHECK(c.master_seed == 42);
    CHECK(c.rho.is_infinite());
    CHECK(c.epsilon == 0.02);
    CHECK(c.delta == 1e-3);
    const auto d = parse_config(R"({"experiment":"crossing"})");
    CHECK(d.t == 200.0);
    CHECK(d.replicas == 10000);
    const auto l = parse_config(R"({"experiment":"localEq"})");
    CHECK(l.u_grid == std::vector<double>{0.09, 0.25, 0.49, 0.81});
}

TEST_CASE("config errors name the field")
{
    CHECK(contains(parse_error(R"({"experiment":"theorem4","rho":0.5,"lambda":1})"), "rho must exceed lambda"));
    CHECK(contains(parse_error(R"({"experiment":"theorem4","rho":2,"lambda":0.5})"), "rho-lambda <= 1 required"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","bogus":1})"), "/bogus: unknown key"));
    CHECK(contains(parse_error(R"({"experiment":"nope"})"), "/experiment"));
    CHECK(contains(parse_error(R"({"t":5})"), "/experiment"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","t":-1})"), "/t"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","N":0})"), "/N"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","N":1.5})"), "/N"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","rho":1})"), "/rho"));
    CHECK(contains(parse_error(R"({"experiment":"theorem1","uGrid":[]})"), "/uGrid"));
    CHECK(contains(parse_error(R"({"experiment":"theorem1","uGrid":[0.1,"x"]})"), "/uGrid/1"));
    CHECK(contains(parse_error(R"({"experiment":"tasepFK","rho":1.5})"), "/rho"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","masterSeed":-3})"), "/masterSeed"));
    CHECK(contains(parse_error(R"({"experiment":"theorem2","delta":2})"), "/delta"));
    CHECK(contains(parse_error("[1,2"), "not valid JSON"));
    CHECK(contains(parse_error("[1,2]"), "must be a JSON object"));
}

TEST_CASE("config round-trips through its JSON form")
{
    auto c = parse_config(R"({"experiment":"theorem1","rho":1,"lambda":0,"Jmax":25,"uGrid":[0.2,0.36],"masterSeed":18446744073709551615})");
    CHECK(c.master_seed == 18446744073709551615ULL);
    const auto again = parse_config(config_to_json(c).dump());
    CHECK(config_to_json(again) == config_to_json(c));
    CHECK(config_hash(again) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    c.master_seed = 1;
    CHECK(config_hash(again) != config_hash(c));
}

TEST_CASE("manifest documents are accepted as configs")
{
    const auto c = parse_config(R"({"experiment":"mapping","N":3,"masterSeed":9})");
    nlohmann::json manifest;
    manifest["toolVersion"] = kToolVersion;
    manifest["runConfig"] = config_to_json(c);
    const auto back = parse_config(manifest.dump());
    CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("catalog lists every experiment once")
{
    const auto& cat = experiment_catalog();
    CHECK(cat.size() == 9);
    for (const auto& info : cat)
        CHECK_NOTHROW(parse_config(R"({"experiment":")" + info.name + R"("})"));
}

TEST_CASE("run writes results, summary and manifest; rerun is byte-identical")
{
    const fs::path dir = scratch("theorem2");
    auto c = parse_config(R"({"experiment":"theorem2","t":40,"N":50,"masterSeed":3})");
    c.out_dir = dir.string();
    std::ostringstream log;
    const int code = run(c, {}, log);
    CHECK((code == kExitOk || code == kExitThresholdFailed));
    const std::string csv = read_file(dir / "results.csv");
    CHECK(csv.rfind("replica,x2_over_t\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["toolVersion"] == kToolVersion);
    CHECK(manifest["configHash"] == config_hash(c));
    CHECK(manifest["replicas"] == 50);
    CHECK(manifest.contains("wallTimeSeconds"));
    const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(summary["verdicts"].size() == 2);
    CHECK(contains(log.str(), "sup distance of X2/t"));

    auto again = parse_config(read_file(dir / "manifest.json"));
    const fs::path dir2 = scratch("theorem2_again");
    again.out_dir = dir2.string();
    std::ostringstream log2;
    run(again, {Execution::Serial, 0}, log2);
    CHECK(read_file(dir2 / "results.csv") == csv);
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("theorem1 csv schema")
{
    auto c = parse_config(R"({"experiment":"theorem1","t":20,"N":10,"uGrid":[0.5]})");
    const auto r = execute(c, {});
    CHECK(r.csv.rfind("u,weighted_sum,reference,tail_bound,stderr\n", 0) == 0);
}

TEST_CASE("failed thresholds give exit code 2, aborts give 3")
{
    const fs::path dir = scratch("mapping");
    // a tiny theorem4 run misses the sup-distance threshold
    auto c = parse_config(R"({"experiment":"theorem4","t":5,"N":5,"masterSeed":1})");
    c.out_dir = dir.string();
    std::ostringstream log;
    CHECK(run(c, {}, log) == kExitThresholdFailed);
    CHECK(contains(log.str(), "FAIL "));
    fs::remove_all(dir);
}

TEST_CASE("unwritable output directory gives exit code 1")
{
    const fs::path file = scratch("blocker");
    std::ofstream(file) << "x";
    auto c = parse_config(R"({"experiment":"mapping","t":5,"N":1})");
    c.out_dir = (file / "sub").string();
    std::ostringstream log;
    CHECK(run(c, {}, log) == kExitFailure);
    CHECK(contains(log.str(), "error"));
    fs::remove(file);
}
