#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "imc/io.hpp"

using namespace imc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    fs::path p = fs::temp_directory_path() / "imc-io-tests";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("model files parse into validated chains") {
    ParsedModel geo = parse_model(imc::test::data_dir() / "fix-geo.json");
    CHECK(geo.chain.size() == 2);
    CHECK(geo.target.members() == std::vector<int>{0});
    CHECK(std::holds_alternative<IntervalBoundsRow>(geo.chain.rows[1]));

    ParsedModel ruin = parse_model(imc::test::data_dir() / "fix-ruin.json");
    CHECK(ruin.chain.size() == 4);
}

TEST_CASE("parse errors carry context") {
    CHECK_THROWS_AS(parse_model(tmp_dir() / "does-not-exist.json"), ParseError);

    nlohmann::json bad = {{"states", {"a", "b"}},
                          {"target", {"zzz"}},
                          {"rows",
                           {{"a", {{"vertices", {{1.0, 0.0}}}}},
                            {"b", {{"vertices", {{0.0, 1.0}}}}}}}};
    CHECK_THROWS_WITH_AS(parse_model_json(bad), doctest::Contains("zzz"), ValidationError);

    nlohmann::json short_row = {{"states", {"a", "b"}},
                                {"target", {"a"}},
                                {"rows",
                                 {{"a", {{"intervals", {{"lower", {0.5}}, {"upper", {0.6}}}}}},
                                  {"b", {{"vertices", {{0.0, 1.0}}}}}}}};
    CHECK_THROWS_WITH_AS(parse_model_json(short_row), doctest::Contains("DimensionMismatch"),
                         ValidationError);
}

TEST_CASE("model round trip preserves content and digest") {
    ParsedModel first = parse_model(imc::test::data_dir() / "fix-trap.json");
    nlohmann::json emitted = model_to_json(first.chain, first.target);
    ParsedModel second = parse_model_json(emitted);
    CHECK(first.digest == second.digest);
    CHECK(model_to_json(second.chain, second.target) == emitted);
}

TEST_CASE("digest is stable under key reordering") {
    auto a = nlohmann::json::parse(R"({"states":["x"],"target":[],"rows":{"x":{"vertices":[[1.0]]}}})");
    auto b = nlohmann::json::parse(R"({"rows":{"x":{"vertices":[[1.0]]}},"target":[],"states":["x"]})");
    CHECK(canonical_digest(a) == canonical_digest(b));
}

TEST_CASE("values serialize infinities as the inf literal") {
    StateSpace states{{"a", "b"}};
    ExtVector v{ExtValue(0.5), ExtValue::infinity()};
    nlohmann::json doc = values_to_json(states, v);
    CHECK(doc["a"] == 0.5);
    CHECK(doc["b"] == "inf");
}

TEST_CASE("trace CSV matches the recursion by hand") {
    auto [geo, a] = imc::test::fix_geo();
    HittingResult hi = iterate_hitting_time(geo, a, Bound::upper);
    fs::path out = tmp_dir() / "geo-upper.csv";
    emit_trace(hi.trace, geo.states, out);

    std::string text = slurp(out);
    CHECK(text.rfind("iteration,state,value,delta,residual\n", 0) == 0);
    CHECK(text.find("\r") == std::string::npos);  // LF only
    CHECK(text.find("2,s,2.3125,") != std::string::npos);
    CHECK(text.find("0,s,1,") != std::string::npos);  // iteration 0 is the indicator

    // final rows converged: last delta column below the default tolerance
    std::istringstream is(text);
    std::string line, last;
    while (std::getline(is, line))
        if (!line.empty()) last = line;
    const auto first_comma = last.find(',');
    const auto second = last.find(',', first_comma + 1);
    const auto third = last.find(',', second + 1);
    const auto fourth = last.find(',', third + 1);
    const double delta = std::abs(std::strtod(last.substr(third + 1, fourth - third - 1).c_str(), nullptr));
    CHECK(delta < 1e-10);
}

TEST_CASE("solve command produces the fixture truths") {
    fs::path out = tmp_dir() / "trap-upper.json";
    int rc = run_command({"solve", "--quantity", "time", "--bound", "upper", "--model",
                          (imc::test::data_dir() / "fix-trap.json").string(), "--out",
                          out.string()});
    CHECK(rc == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["values"]["g"] == 0.0);
    CHECK(doc["values"]["m"] == "inf");
    CHECK(doc["values"]["t"] == "inf");
}

TEST_CASE("classify command reports the fixture classification") {
    fs::path out = tmp_dir() / "half-classify.json";
    int rc = run_command({"classify", "--model",
                          (imc::test::data_dir() / "fix-half.json").string(), "--out",
                          out.string()});
    CHECK(rc == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["classification"]["B"] == nlohmann::json::array({"t"}));
    CHECK(doc["classification"]["U"] == nlohmann::json::array({"u"}));
    CHECK(doc["classification"]["Z"] == nlohmann::json::array({"g"}));
    CHECK(doc["classification"]["C"] == nlohmann::json::array({"t"}));
}

TEST_CASE("oracle command agrees on the fixtures") {
    fs::path out = tmp_dir() / "geo-brute.json";
    int rc = run_command({"oracle", "--mode", "brute", "--model",
                          (imc::test::data_dir() / "fix-geo.json").string(), "--out",
                          out.string()});
    CHECK(rc == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["agree"] == true);
    CHECK(doc["agreement"]["time_lower"] == true);
}

TEST_CASE("exit codes for failure modes") {
    // validation failure: unknown target label
    fs::path bad = tmp_dir() / "bad-model.json";
    {
        std::ofstream os(bad);
        os << R"({"states":["a"],"target":["zzz"],"rows":{"a":{"vertices":[[1.0]]}}})";
    }
    CHECK(run_command({"classify", "--model", bad.string()}) == 2);

    fs::path broken = tmp_dir() / "broken.json";
    {
        std::ofstream os(broken);
        os << "{ not json";
    }
    CHECK(run_command({"classify", "--model", broken.string()}) == 2);

    // tolerance too tight for the iteration budget
    CHECK(run_command({"solve", "--quantity", "time", "--bound", "upper", "--model",
                       (imc::test::data_dir() / "fix-geo.json").string(), "--max-iter", "3",
                       "--out", (tmp_dir() / "never.json").string()}) == 1);
}

TEST_CASE("result documents are byte-identical across runs") {
    fs::path out1 = tmp_dir() / "det1.json";
    fs::path out2 = tmp_dir() / "det2.json";
    for (const fs::path& out : {out1, out2}) {
        int rc = run_command({"solve", "--quantity", "prob", "--bound", "upper", "--exact",
                              "--witness", "--model",
                              (imc::test::data_dir() / "fix-trap.json").string(), "--out",
                              out.string()});
        CHECK(rc == 0);
    }
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("the installed binary behaves like run_command") {
    fs::path out = tmp_dir() / "bin-geo.json";
    std::string cmd = std::string(IMC_CLI_PATH) + " solve --quantity time --bound lower --model " +
                      (imc::test::data_dir() / "fix-geo.json").string() + " --out " + out.string();
    CHECK(std::system(cmd.c_str()) == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(out));
    const double val = doc["values"]["s"].get<double>();
    CHECK(val == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
}
