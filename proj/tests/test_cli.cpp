#include <c2chain/cli.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace
{

struct Outcome
{
    int rc = 0;
    std::string out;
    std::string err;
};

Outcome Cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Outcome o;
    o.rc = c2chain::RunCli(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string LastLine(const std::string &text)
{
    auto end = text.find_last_not_of('\n');
    auto start = text.rfind('\n', end);
    return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::filesystem::path TempPath(const std::string &name)
{
    return std::filesystem::temp_directory_path() / ("c2chain_cli_" + name);
}

std::string Slurp(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("simulate reports completion")
{
    auto o = Cli({"simulate", "--scenario", "builtin:fig3", "--attack", "A1"});
    CHECK(o.rc == 0);
    CHECK(LastLine(o.out) == "completed: procedures=3");
    CHECK(o.out.find("payload intact: yes") != std::string::npos);

    auto traced = Cli({"simulate", "--attack", "A1", "--trace"});
    CHECK(traced.rc == 0);
    CHECK(traced.out.size() > o.out.size());
    CHECK(traced.out.find("consume") != std::string::npos);

    auto failed = Cli({"simulate", "--scenario", "builtin:fig3", "--attack", "A3"});
    CHECK(failed.rc == 0);
    CHECK(LastLine(failed.out).rfind("not completed: ", 0) == 0);
}

TEST_CASE("transient attack via simulate")
{
    auto o = Cli({"simulate", "--scenario", "builtin:aka", "--attack", "A1-AKA"});
    CHECK(o.rc == 0);
    CHECK(o.out.find("recovered keys match store: yes") != std::string::npos);
    CHECK(LastLine(o.out) == "completed: procedures=1");
}

TEST_CASE("header encode and decode")
{
    auto o = Cli({"header", "encode", "--key-id", "1", "--routing", "pf", "--ttl", "1", "--exec", "udm",
                  "--attack-id", "1", "--type", "key-ext", "--exit", "ue", "--cipher", "identity"});
    CHECK(o.rc == 0);
    CHECK(o.out == "0x00000\n");

    auto enc = Cli({"header", "encode", "--ttl", "5", "--exec", "amf", "--attack-id", "3"});
    REQUIRE(enc.rc == 0);
    auto word = LastLine(enc.out);
    auto dec = Cli({"header", "decode", "--word", word});
    CHECK(dec.rc == 0);
    CHECK(dec.out.find("ttl=5") != std::string::npos);
    CHECK(dec.out.find("AMF") != std::string::npos);

    auto wrongKey = Cli({"--json", "header", "decode", "--word", word, "--key-id", "2"});
    CHECK(wrongKey.rc == 0);
    auto doc = nlohmann::json::parse(wrongKey.out);
    CHECK(doc["decrypted"] == false);

    auto bad = Cli({"header", "encode", "--ttl", "9"});
    CHECK(bad.rc == 1);
    CHECK(bad.err.find("FieldOutOfRange") != std::string::npos);
}

TEST_CASE("overhead table")
{
    auto o = Cli({"overhead"});
    CHECK(o.rc == 0);
    CHECK(o.out.find("15.6") != std::string::npos);
    CHECK(o.out.find("2000.0") != std::string::npos);
    auto csv = Cli({"overhead", "--csv"});
    CHECK(csv.out.rfind("attack,direction,", 0) == 0);
}

TEST_CASE("feasibility exit status")
{
    auto ok = Cli({"feasibility", "--scenario", "builtin:fig3", "--attack", "A1"});
    CHECK(ok.rc == 0);
    CHECK(ok.out.find("forward: UE->AMF->UDM") != std::string::npos);
    auto no = Cli({"feasibility", "--scenario", "builtin:fig3", "--attack", "A3"});
    CHECK(no.rc == 2);
    CHECK(no.out.find("feasible: no") != std::string::npos);
}

TEST_CASE("usage errors exit with status 1")
{
    CHECK(Cli({"simulate", "--bogus"}).rc == 1);
    CHECK(Cli({"nothing"}).rc == 1);
    CHECK(Cli({}).rc == 1);
    auto missing = Cli({"--json", "simulate", "--scenario", "/nonexistent/scenario.json"});
    CHECK(missing.rc == 1);
    auto err = nlohmann::json::parse(missing.err);
    CHECK(err.contains("error"));
    CHECK(err.contains("message"));
    auto unknownAttack = Cli({"simulate", "--attack", "Z9"});
    CHECK(unknownAttack.rc == 1);
    CHECK(unknownAttack.err.rfind("error: ", 0) == 0);
}

TEST_CASE("every command emits one JSON document under --json")
{
    std::vector<std::vector<std::string>> commands = {
        {"feasibility"},
        {"simulate", "--trace"},
        {"simulate", "--scenario", "builtin:aka", "--attack", "A1-AKA"},
        {"sweep", "--bits", "21,64"},
        {"graph"},
        {"graph", "--view", "full"},
        {"header", "encode"},
        {"header", "decode", "--word", "0x00000"},
        {"overhead"},
        {"catalog-dump"},
        {"catalog-dump", "--scenario", "builtin:fig4"},
    };
    for (auto args : commands)
    {
        args.insert(args.begin(), "--json");
        auto o = Cli(args);
        INFO(args[1]);
        CHECK(o.rc == 0);
        CHECK(nlohmann::json::accept(o.out));
    }
}

TEST_CASE("sweep CSV and reruns are byte identical")
{
    auto path = TempPath("sweep.csv");
    auto a = Cli({"sweep", "--scenario", "builtin:fig4", "--attack", "A1", "--bits", "21-24,64", "--csv",
                  path.string()});
    CHECK(a.rc == 0);
    CHECK(a.out.rfind("bits,procedures,messages,completed\n", 0) == 0);
    CHECK(Slurp(path) == a.out);
    CHECK(a.out.find("\n22,") != std::string::npos);
    auto b = Cli({"sweep", "--scenario", "builtin:fig4", "--attack", "A1", "--bits", "21-24,64", "--jobs", "3"});
    CHECK(a.out == b.out);
    std::filesystem::remove(path);

    auto s1 = Cli({"simulate", "--routing", "eerr", "--seed", "5", "--trace"});
    auto s2 = Cli({"simulate", "--routing", "eerr", "--seed", "5", "--trace"});
    CHECK(s1.out == s2.out);
}

TEST_CASE("graph writes DOT files")
{
    auto path = TempPath("graph.dot");
    auto o = Cli({"graph", "--view", "attack", "--dot", path.string()});
    CHECK(o.rc == 0);
    auto dot = Slurp(path);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("purple") != std::string::npos);
    std::filesystem::remove(path);
    CHECK(Cli({"graph", "--view", "sideways"}).rc == 1);
}

#ifdef C2CHAIN_CLI_PATH
TEST_CASE("installed binary runs")
{
    auto out = TempPath("bin.txt");
    std::string cmd = std::string("\"") + C2CHAIN_CLI_PATH + "\" header encode --cipher identity --ttl 1 > \"" +
                      out.string() + "\"";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(Slurp(out) == "0x00000\n");
    std::filesystem::remove(out);
}
#endif
