// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/errors.h>
#include <txcluster/pipeline.h>
#include <txcluster/synth.h>

#include <util.h>

#include <boost/test/unit_test.hpp>

#include <fstream>
#include <sstream>

using namespace txcluster;
namespace fs = std::filesystem;

namespace {

fs::path write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

BOOST_AUTO_TEST_SUITE(pipeline_tests)

BOOST_AUTO_TEST_CASE(read_records_reports_every_bad_line)
{
    const std::string good = generate("fig6_oc");
    std::istringstream in(good.substr(0, good.find('\n') + 1) + "\n{bad\nnull\n");
    try {
        read_records(in, "f.jsonl");
        BOOST_FAIL("expected IngestError");
    } catch (const IngestError& e) {
        BOOST_REQUIRE_EQUAL(e.problems().size(), 2U);
        BOOST_CHECK_EQUAL(e.problems()[0].rfind("f.jsonl:3: ", 0), 0U);
        BOOST_CHECK_EQUAL(e.problems()[1].rfind("f.jsonl:4: ", 0), 0U);
    }
}

BOOST_AUTO_TEST_CASE(store_directory)
{
    const fs::path dir = testutil::temp_dir("store");
    const fs::path root = dir / "store";
    StoreDir store(root);
    BOOST_CHECK(!store.exists());
    BOOST_CHECK_THROW(store.load(), Error);

    const auto stats = store.ingest({write_file(dir / "a.jsonl", generate("fig5_rc"))});
    BOOST_CHECK(store.exists());
    BOOST_CHECK_EQUAL(stats.transactions, 4U);
    BOOST_CHECK_EQUAL(stats.confirmed, 2U);
    BOOST_CHECK_EQUAL(stats.failed, 2U);
    BOOST_CHECK_EQUAL(stats.pending, 0U);
    BOOST_CHECK_EQUAL(stats.addresses, 3U);
    BOOST_CHECK_EQUAL(stats.unconfirmed_only_addresses, 0U);
    BOOST_CHECK(fs::is_regular_file(root / "index" / "addresses.tsv"));
    BOOST_CHECK(fs::is_regular_file(root / "index" / "spenders.tsv"));
    BOOST_CHECK(fs::is_regular_file(root / "index" / "time.tsv"));
    const std::string times = slurp(root / "index" / "time.tsv");
    BOOST_CHECK_EQUAL(std::count(times.begin(), times.end(), '\n'), 3);

    // Re-ingesting the same observations changes nothing but the record log.
    const std::string before = slurp(root / "index" / "addresses.tsv");
    BOOST_CHECK(store.ingest({dir / "a.jsonl"}) == stats);
    BOOST_CHECK_EQUAL(slurp(root / "index" / "addresses.tsv"), before);

    const TxStore loaded = store.load();
    const TxStore direct = testutil::store_of(generate("fig5_rc"));
    BOOST_CHECK(std::equal(loaded.transactions().begin(), loaded.transactions().end(), direct.transactions().begin(),
                           direct.transactions().end()));

    const auto more = store.ingest({write_file(dir / "b.jsonl", generate("fig6_oc"))});
    BOOST_CHECK_EQUAL(more.transactions, 9U);
    BOOST_CHECK_EQUAL(more.pending, 4U);
    // addr1..addr3 also occur in the confirmed part of the first batch.
    BOOST_CHECK_EQUAL(more.unconfirmed_only_addresses, 2U);
    fs::remove_all(dir);
}

BOOST_AUTO_TEST_CASE(rejected_batches_leave_the_store_alone)
{
    const fs::path dir = testutil::temp_dir("reject");
    StoreDir store(dir / "store");
    store.ingest({write_file(dir / "a.jsonl", generate("fig6_oc"))});
    const std::string records = slurp(dir / "store" / "records.jsonl");

    std::string text = generate("fig9_ni");
    text.insert(text.find('\n') + 1, "garbage\n");
    try {
        store.ingest({write_file(dir / "bad.jsonl", text), dir / "missing.jsonl"});
        BOOST_FAIL("expected IngestError");
    } catch (const IngestError& e) {
        BOOST_REQUIRE_EQUAL(e.problems().size(), 2U);
        BOOST_CHECK(e.problems()[0].find("bad.jsonl:2:") != std::string::npos);
        BOOST_CHECK(e.problems()[1].find("missing.jsonl") != std::string::npos);
    }
    BOOST_CHECK_EQUAL(slurp(dir / "store" / "records.jsonl"), records);

    // A conflicting second observation is rejected at unification.
    auto tx = testutil::records_of(generate("fig6_oc")).back();
    tx.outputs[0].value_sat += 1;
    tx.mempool->fee_sat = 0;
    try {
        store.ingest({write_file(dir / "clash.jsonl", serialize_transaction(tx) + "\n")});
        BOOST_FAIL("expected IngestError");
    } catch (const IngestError& e) {
        BOOST_CHECK(e.problems()[0].find("clash.jsonl") != std::string::npos);
    }
    BOOST_CHECK_EQUAL(slurp(dir / "store" / "records.jsonl"), records);
    fs::remove_all(dir);
}

BOOST_AUTO_TEST_CASE(empty_input)
{
    const fs::path dir = testutil::temp_dir("empty");
    StoreDir store(dir / "store");
    const auto stats = store.ingest({write_file(dir / "empty.jsonl", "")});
    BOOST_CHECK(stats == StoreStats{});
    BOOST_CHECK_EQUAL(stats_to_json(stats),
                      "{\"transactions\":0,\"confirmed\":0,\"failed\":0,\"pending\":0,\"addresses\":0,"
                      "\"unconfirmed_only_addresses\":0,\"unresolvable_inputs\":0}");
    fs::remove_all(dir);
}

BOOST_AUTO_TEST_CASE(cluster_runs)
{
    const TxStore store = testutil::store_of(generate("fig6_oc"));
    RunConfig config;
    auto run = run_cluster(store, config);
    BOOST_CHECK(testutil::multi_clusters(run.clustering).empty());
    BOOST_CHECK_EQUAL(run.count.total, 1U); // only addr1 is confirmed

    config.set = SourceSet::unconfirmed;
    config.heuristics = {HeuristicId::oc};
    config.universe = UniverseKind::all;
    run = run_cluster(store, config);
    const auto clusters = testutil::multi_clusters(run.clustering);
    BOOST_REQUIRE_EQUAL(clusters.size(), 1U);
    BOOST_CHECK_EQUAL(clusters[0].size(), 5U);
    BOOST_CHECK_EQUAL(run.count.total, 1U);
    BOOST_CHECK_EQUAL(run.clustering.provenance().tag, "NU");

    config.set = SourceSet::failed;
    BOOST_CHECK(run_cluster(store, config).empty_source);

    const fs::path dir = testutil::temp_dir("run");
    config.set = SourceSet::unconfirmed;
    config.out = (dir / "nu.csv").string();
    config.links_out = (dir / "nu.links.jsonl").string();
    write_cluster_run(run_cluster(store, config), config);
    const Clustering back = load_clustering_file(config.out);
    BOOST_CHECK(back.same_partition(run.clustering));
    BOOST_CHECK_EQUAL(back.provenance().tag, "NU");
    BOOST_CHECK((back.provenance().heuristics == std::vector<std::string>{"oc"}));
    const std::string links = slurp(config.links_out);
    BOOST_CHECK_EQUAL(std::count(links.begin(), links.end(), '\n'), 4);

    fs::remove(config.out + ".meta.json");
    BOOST_CHECK_EQUAL(load_clustering_file(config.out).provenance().tag, "nu.csv");
    fs::remove_all(dir);
}

BOOST_AUTO_TEST_SUITE_END()
