// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <util.h>

#include <boost/test/unit_test.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code{-1};
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string quote(const std::string& s)
{
    std::string q = "'";
    for (const char c : s) {
        if (c == '\'') {
            q += "'\\''";
        } else {
            q += c;
        }
    }
    return q + "'";
}

class Cli
{
public:
    Cli() : m_dir(testutil::temp_dir("cli")) {}
    ~Cli() { fs::remove_all(m_dir); }

    fs::path path(const std::string& name) const { return m_dir / name; }

    fs::path write(const std::string& name, const std::string& text) const
    {
        std::ofstream out(path(name), std::ios::binary);
        out << text;
        return path(name);
    }

    Result run(const std::vector<std::string>& args) const
    {
        std::string cmd = quote(TXCLUSTER_CLI_PATH);
        for (const auto& a : args) cmd += " " + quote(a);
        cmd += " >" + quote(path("stdout").string()) + " 2>" + quote(path("stderr").string());
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(path("stdout"));
        r.err = slurp(path("stderr"));
        return r;
    }

    std::string store() const { return path("store").string(); }

private:
    fs::path m_dir;
};

nlohmann::json json_of(const Result& r)
{
    BOOST_REQUIRE_MESSAGE(r.code == 0, "exit " << r.code << ": " << r.err);
    return nlohmann::json::parse(r.out);
}

std::size_t lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

BOOST_AUTO_TEST_SUITE(cli_tests)

BOOST_AUTO_TEST_CASE(synth_ingest_stats)
{
    Cli cli;
    const Result synth = cli.run({"synth", "--scenario", "random", "--seed", "5", "--n", "300"});
    BOOST_REQUIRE_EQUAL(synth.code, 0);
    BOOST_CHECK_EQUAL(lines(synth.out), 300U);
    const Result to_file =
        cli.run({"synth", "--scenario", "random", "--seed", "5", "--n", "300", "--out", cli.path("r.jsonl").string()});
    BOOST_REQUIRE_EQUAL(to_file.code, 0);
    BOOST_CHECK_EQUAL(slurp(cli.path("r.jsonl")), synth.out);

    const auto ingested = json_of(cli.run({"ingest", "--store", cli.store(), cli.path("r.jsonl").string()}));
    BOOST_CHECK_EQUAL(ingested["transactions"].get<int>(), 300);
    BOOST_CHECK_EQUAL(ingested["unresolvable_inputs"].get<int>(), 0);
    const auto stats = json_of(cli.run({"stats", "--store", cli.store()}));
    BOOST_CHECK_EQUAL(stats, ingested);
    BOOST_CHECK_EQUAL(stats["confirmed"].get<int>() + stats["failed"].get<int>() + stats["pending"].get<int>(), 300);
}

BOOST_AUTO_TEST_CASE(cluster_fixture)
{
    Cli cli;
    cli.run({"synth", "--scenario", "fig6_oc", "--out", cli.path("f.jsonl").string()});
    json_of(cli.run({"ingest", "--store", cli.store(), cli.path("f.jsonl").string()}));

    const std::string csv = cli.path("nu.csv").string();
    const auto nu = json_of(cli.run({"cluster", "--store", cli.store(), "--set", "unconfirmed", "--heuristics", "oc",
                                     "--universe", "all", "--out", csv}));
    BOOST_CHECK_EQUAL(nu["total"].get<int>(), 1);
    BOOST_CHECK_EQUAL(nu["non_isolated"].get<int>(), 1);
    const std::string text = slurp(csv);
    BOOST_CHECK_EQUAL(text.substr(0, 19), "address,cluster_id\n");
    BOOST_CHECK_EQUAL(lines(text), 6U);
    BOOST_CHECK(fs::exists(csv + ".meta.json"));

    const auto sc = json_of(cli.run({"cluster", "--store", cli.store(), "--out", cli.path("sc.csv").string()}));
    BOOST_CHECK_EQUAL(sc["non_isolated"].get<int>(), 0);

    // Flags override the config file.
    cli.write("run.conf", "set=unconfirmed\nheuristics=cs\nuniverse=all\n");
    const auto over = json_of(cli.run({"cluster", "--config", cli.path("run.conf").string(), "--store", cli.store(),
                                       "--heuristics", "oc", "--no-header", "--out", cli.path("o.csv").string()}));
    BOOST_CHECK_EQUAL(over, nu);
    BOOST_CHECK_EQUAL(lines(slurp(cli.path("o.csv"))), 5U);

    const Result empty = cli.run({"cluster", "--store", cli.store(), "--set", "failed"});
    BOOST_CHECK_EQUAL(empty.code, 0);
    BOOST_CHECK(empty.err.find("warning") != std::string::npos);

    const Result chains = cli.run({"chains", "--store", cli.store(), "--kind", "peel"});
    BOOST_CHECK_EQUAL(chains.code, 0);
    BOOST_CHECK_EQUAL(cli.run({"chains", "--store", cli.store(), "--kind", "spiral"}).code, 1);
}

BOOST_AUTO_TEST_CASE(usage_errors)
{
    Cli cli;
    cli.run({"synth", "--scenario", "fig5_rc", "--out", cli.path("f.jsonl").string()});
    json_of(cli.run({"ingest", "--store", cli.store(), cli.path("f.jsonl").string()}));

    const Result bad = cli.run({"cluster", "--store", cli.store(), "--heuristics", "cs,xx"});
    BOOST_CHECK_EQUAL(bad.code, 1);
    BOOST_CHECK(bad.err.find("unknown heuristic: xx") != std::string::npos);

    BOOST_CHECK_EQUAL(cli.run({}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"frobnicate"}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"cluster"}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"cluster", "--store", cli.store(), "--set", "mined"}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"synth", "--scenario", "nope"}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"mempool-at", "--store", cli.store(), "--time", "1", "--set", "x"}).code, 1);
    BOOST_CHECK_EQUAL(cli.run({"stats", "--store", cli.path("nowhere").string()}).code, 2);
}

BOOST_AUTO_TEST_CASE(corrupt_and_empty_input)
{
    Cli cli;
    cli.run({"synth", "--scenario", "fig9_ni", "--out", cli.path("f.jsonl").string()});
    std::string text = slurp(cli.path("f.jsonl"));
    std::size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = text.find('\n', pos) + 1;
    text.insert(pos, "{\"txid\": 12}\n");
    cli.write("bad.jsonl", text);

    const Result bad = cli.run({"ingest", "--store", cli.store(), cli.path("bad.jsonl").string()});
    BOOST_CHECK_EQUAL(bad.code, 2);
    BOOST_CHECK(bad.err.find("bad.jsonl:3:") != std::string::npos);
    BOOST_CHECK(!fs::exists(cli.path("store") / "records.jsonl"));

    const auto empty = json_of(cli.run({"ingest", "--store", cli.store(), cli.write("e.jsonl", "").string()}));
    for (const auto& [key, value] : empty.items()) BOOST_CHECK_MESSAGE(value.get<int>() == 0, key);
    BOOST_CHECK_EQUAL(json_of(cli.run({"mempool-at", "--store", cli.store(), "--time", "5"})).size(), 0U);
}

BOOST_AUTO_TEST_CASE(mempool_at)
{
    Cli cli;
    cli.run({"synth", "--scenario", "fig5_rc", "--out", cli.path("f.jsonl").string()});
    json_of(cli.run({"ingest", "--store", cli.store(), cli.path("f.jsonl").string()}));
    const Result early = cli.run({"mempool-at", "--store", cli.store(), "--time", "0"});
    BOOST_CHECK_EQUAL(early.code, 0);
    BOOST_CHECK_EQUAL(early.out, "[]\n");

    std::size_t seen = 0;
    for (const auto& rec : testutil::records_of(slurp(cli.path("f.jsonl")))) {
        if (!rec.mempool) continue;
        const auto ids = json_of(
            cli.run({"mempool-at", "--store", cli.store(), "--time", std::to_string(rec.mempool->time)}));
        BOOST_CHECK(std::find(ids.begin(), ids.end(), rec.txid.to_hex()) != ids.end());
        ++seen;
    }
    BOOST_CHECK_GT(seen, 0U);
}

BOOST_AUTO_TEST_CASE(merge_compare_validate)
{
    Cli cli;
    cli.run({"synth", "--scenario", "random", "--seed", "11", "--n", "600", "--out", cli.path("r.jsonl").string()});
    json_of(cli.run({"ingest", "--store", cli.store(), cli.path("r.jsonl").string()}));
    const std::string sc = cli.path("sc.csv").string();
    const std::string nu = cli.path("nu.csv").string();
    const std::string merged = cli.path("m.csv").string();
    const auto sc_count =
        json_of(cli.run({"cluster", "--store", cli.store(), "--heuristics", "cs,ca,cm,cg,ce,ck", "--out", sc}));
    json_of(cli.run({"cluster", "--store", cli.store(), "--set", "unconfirmed", "--heuristics", "rc,oc,fc,ni,pc",
                     "--out", nu}));
    const auto m = json_of(cli.run({"merge", sc, nu, "--out", merged}));
    BOOST_CHECK_LE(m["total"].get<int>(), sc_count["total"].get<int>());
    BOOST_CHECK(fs::exists(merged + ".meta.json"));
    BOOST_CHECK(slurp(merged + ".meta.json").find("merged(SC,NU)") != std::string::npos);

    const std::string per = cli.path("per.jsonl").string();
    const auto report = json_of(cli.run({"compare", "--base", sc, "--new", nu, "--per-cluster", per}));
    BOOST_CHECK_EQUAL(report["base"].get<std::string>(), "SC");
    BOOST_CHECK_EQUAL(report["new"].get<std::string>(), "NU");
    const int clusters = report["clusters"].get<int>();
    BOOST_CHECK_EQUAL(report["add"].get<int>() + report["merge"].get<int>() + report["subset"].get<int>() +
                          report["new_count"].get<int>(),
                      clusters);
    BOOST_CHECK_EQUAL(lines(slurp(per)), static_cast<std::size_t>(clusters));

    std::string labels = "address,label\n";
    std::istringstream csv(slurp(sc));
    std::string line;
    std::getline(csv, line);
    for (int i = 0; i < 20 && std::getline(csv, line); ++i) {
        labels += line.substr(0, line.find(',')) + (i % 2 ? ",Exchange\n" : ",Pool\n");
    }
    const auto v = json_of(cli.run({"validate", "--clusters", sc, "--labels", cli.write("l.csv", labels).string()}));
    BOOST_CHECK_EQUAL(v["pure"].get<int>() + v["impure"].get<int>(), v["clusters_with_labels"].get<int>());

    cli.write("broken.csv", "address,cluster_id\na,a\na,b\n");
    const Result broken = cli.run({"compare", "--base", cli.path("broken.csv").string(), "--new", nu});
    BOOST_CHECK_EQUAL(broken.code, 2);
}

BOOST_AUTO_TEST_SUITE_END()
