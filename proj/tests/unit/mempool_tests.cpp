// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/errors.h>
#include <txcluster/mempool.h>
#include <txcluster/pipeline.h>
#include <txcluster/synth.h>

#include <oracles.h>
#include <util.h>

#include <boost/test/unit_test.hpp>

#include <random>

using namespace txcluster;
using testutil::CorpusBuilder;

namespace {

std::set<std::pair<Txid, Txid>> oracle_edges(const oracle::Corpus& c)
{
    std::set<std::pair<Txid, Txid>> out;
    for (const auto& [p, ch] : oracle::edges(c)) out.emplace(c.txs()[p].txid, c.txs()[ch].txid);
    return out;
}

using ChainShape = std::set<std::pair<std::set<std::string>, std::set<std::string>>>;

ChainShape shape(const std::vector<Chain>& chains)
{
    ChainShape out;
    for (const auto& c : chains) {
        std::set<std::string> ids;
        for (const auto& id : c.txids) ids.insert(id.to_hex());
        out.emplace(ids, std::set<std::string>(c.addresses.begin(), c.addresses.end()));
    }
    return out;
}

ChainShape shape(const oracle::Corpus& corpus, const std::vector<oracle::Chain>& chains)
{
    ChainShape out;
    for (const auto& c : chains) {
        std::set<std::string> ids;
        for (const std::size_t i : c.txs) ids.insert(corpus.txs()[i].txid.to_hex());
        out.emplace(ids, c.addresses);
    }
    return out;
}

} // namespace

BOOST_AUTO_TEST_SUITE(mempool_tests)

BOOST_AUTO_TEST_CASE(snapshot_boundaries)
{
    CorpusBuilder b;
    const Txid cb = b.coinbase({{"a", 100}, {"a", 100}});
    const Txid x = b.unconfirmed({{cb, 0}}, {{"b", 90}}, 100, 200);
    const Txid y = b.unconfirmed({{cb, 1}}, {{"c", 90}}, 150);
    const TxStore store = b.store();
    const CorpusView all(store, SourceSet::all);
    BOOST_CHECK(mempool_at(99, all).empty());
    BOOST_CHECK((mempool_at(100, all) == std::vector<Txid>{x}));
    BOOST_CHECK((mempool_at(150, all) == std::vector<Txid>{x, y}));
    BOOST_CHECK((mempool_at(199, all) == std::vector<Txid>{x, y}));
    BOOST_CHECK((mempool_at(200, all) == std::vector<Txid>{y}));
    BOOST_CHECK(mempool_at(1000, CorpusView(store, SourceSet::confirmed)).empty());
}

BOOST_AUTO_TEST_CASE(dependency_edges)
{
    CorpusBuilder b;
    const Txid cb = b.coinbase({{"a", 100}});
    // Confirmed while the child was already waiting: edge by overlap.
    const Txid p = b.confirmed_seen({{cb, 0}}, {{"b", 50}, {"c", 30}, {"d", 10}}, 100, 300);
    const Txid overlap = b.unconfirmed({{p, 0}}, {{"e", 45}}, 200);
    // Entered after the parent left the pool: no edge.
    const Txid after = b.unconfirmed({{p, 1}}, {{"f", 25}}, 300);
    // Same timing, but declared.
    const Txid declared = b.unconfirmed({{p, 2}}, {{"g", 5}}, 400, std::nullopt, false, {p});
    // Pending parent.
    const Txid q = b.unconfirmed({{overlap, 0}}, {{"h", 40}}, 250);
    // Declared dependency without a spend is dropped.
    const Txid r = b.unconfirmed({{q, 0}}, {{"i", 30}}, 500, std::nullopt, false, {q, overlap});

    const TxStore store = b.store();
    const CorpusView view(store, SourceSet::all);
    const auto g = DependencyGraph::build(view);
    BOOST_CHECK(g.has_edge(p, overlap));
    BOOST_CHECK(!g.has_edge(p, after));
    BOOST_CHECK(g.has_edge(p, declared));
    BOOST_CHECK(g.has_edge(overlap, q));
    BOOST_CHECK(g.has_edge(q, r));
    BOOST_CHECK(!g.has_edge(overlap, r));
    BOOST_CHECK(!g.contains(cb));
    BOOST_CHECK_EQUAL(g.dropped_declared_edges(), 1U);
    BOOST_CHECK_EQUAL(g.edge_count(), 4U);
    BOOST_CHECK((g.parents(q) == std::vector<Txid>{overlap}));

    // The confirmed-only view sees no mempool data at all.
    BOOST_CHECK(DependencyGraph::build(CorpusView(store, SourceSet::confirmed)).nodes().empty());
}

BOOST_AUTO_TEST_CASE(cycles_are_reported)
{
    CorpusBuilder b;
    const Txid first = testutil::numbered_txid(1);
    const Txid second = testutil::numbered_txid(2);
    b.unconfirmed({{second, 0}}, {{"a", 10}}, 100);
    b.unconfirmed({{first, 0}}, {{"b", 10}}, 100);
    const TxStore store = b.store();
    try {
        DependencyGraph::build(CorpusView(store, SourceSet::all));
        BOOST_FAIL("cycle not detected");
    } catch (const CycleDetected& e) {
        BOOST_CHECK_EQUAL(e.txids().size(), 2U);
    }
}

BOOST_AUTO_TEST_CASE(conflict_groups_on_replacements)
{
    const TxStore store = testutil::store_of(generate("fig5_rc"));
    const auto groups = conflict_groups(CorpusView(store, SourceSet::all));
    BOOST_REQUIRE_EQUAL(groups.size(), 1U);
    BOOST_REQUIRE_EQUAL(groups[0].members.size(), 3U);
    BOOST_REQUIRE(groups[0].winner);
    BOOST_CHECK(store.find(*groups[0].winner)->is_confirmed());
    BOOST_CHECK(*groups[0].winner == groups[0].members.back());
    const auto pending_only = conflict_groups(CorpusView(store, SourceSet::unconfirmed));
    BOOST_REQUIRE_EQUAL(pending_only.size(), 1U);
    BOOST_CHECK_EQUAL(pending_only[0].members.size(), 2U);
    BOOST_CHECK(!pending_only[0].winner);
}

BOOST_AUTO_TEST_CASE(one_to_one_fixture)
{
    const TxStore store = testutil::store_of(generate("fig6_oc"));
    const CorpusView view(store, SourceSet::unconfirmed);
    const auto g = DependencyGraph::build(view);
    const auto chains = extract_one_to_one_chains(g, view);
    BOOST_REQUIRE_EQUAL(chains.size(), 1U);
    BOOST_CHECK_EQUAL(chains[0].txids.size(), 4U);
    BOOST_CHECK((chains[0].addresses == std::vector<std::string>{"addr1", "addr2", "addr3", "addr4", "addr5"}));
    BOOST_REQUIRE(chains[0].max_gap_sec);
    BOOST_CHECK_EQUAL(*chains[0].max_gap_sec, 40);
    BOOST_CHECK(extract_one_to_one_chains(g, view, 5).empty());
    BOOST_CHECK_EQUAL(chain_to_json(chains[0]).rfind("{\"kind\":\"one_to_one\",\"txids\":[", 0), 0U);
}

BOOST_AUTO_TEST_CASE(fusiform_fixtures)
{
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
        {"fig7_fc1", {"addr2", "addr3"}},
        {"fig7_fc2", {"addr2", "addr3", "addr4", "addr5"}},
        {"fig7_fc3", {"addr2", "addr3", "addr4"}},
    };
    for (const auto& [name, addresses] : cases) {
        const TxStore store = testutil::store_of(generate(name));
        const CorpusView view(store, SourceSet::unconfirmed);
        const auto chains = extract_fusiform_chains(DependencyGraph::build(view), view);
        BOOST_REQUIRE_EQUAL(chains.size(), 1U);
        BOOST_CHECK(chains[0].addresses == addresses);
    }
}

BOOST_AUTO_TEST_CASE(peel_fixture)
{
    const TxStore store = testutil::store_of(generate("fig10_pc"));
    const CorpusView view(store, SourceSet::unconfirmed);
    const auto g = DependencyGraph::build(view);
    const auto chains = extract_peel_chains(view, PeelScope::mempool, &g);
    BOOST_REQUIRE_EQUAL(chains.size(), 2U);
    const auto& main = chains[0].forked ? chains[1] : chains[0];
    const auto& fork = chains[0].forked ? chains[0] : chains[1];
    BOOST_CHECK_EQUAL(main.txids.size(), 3U);
    BOOST_CHECK_EQUAL(fork.txids.size(), 3U);
    BOOST_CHECK(main.txids[1] == fork.txids[0]);
    BOOST_CHECK_EQUAL(main.links.size(), 2U);
    BOOST_CHECK(extract_peel_chains(view, PeelScope::mempool, &g, 4).empty());
    BOOST_CHECK_THROW(extract_peel_chains(view, PeelScope::mempool, nullptr), std::invalid_argument);
    BOOST_CHECK(extract_peel_chains(view, PeelScope::confirmed, nullptr).empty());
}

BOOST_AUTO_TEST_CASE(matches_oracle_on_random_corpora)
{
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto records = testutil::records_of(generate("random", seed, 150));
        const TxStore store = make_store(records);
        for (const SourceSet set : {SourceSet::confirmed, SourceSet::unconfirmed, SourceSet::all}) {
            const CorpusView view(store, set);
            const oracle::Corpus naive(records, set);
            const auto g = DependencyGraph::build(view);
            const auto edges = g.edges();
            BOOST_REQUIRE((std::set<std::pair<Txid, Txid>>(edges.begin(), edges.end()) == oracle_edges(naive)));
            BOOST_REQUIRE(shape(extract_one_to_one_chains(g, view)) == shape(naive, oracle::one_to_one_chains(naive)));
            BOOST_REQUIRE(shape(extract_fusiform_chains(g, view)) == shape(naive, oracle::fusiform_chains(naive)));
            const PeelScope scope = set == SourceSet::confirmed ? PeelScope::confirmed : PeelScope::mempool;
            BOOST_REQUIRE(shape(extract_peel_chains(view, scope, &g)) == shape(naive, oracle::peel_chains(naive)));
        }
    }
}

BOOST_AUTO_TEST_CASE(snapshot_matches_linear_scan)
{
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto records = testutil::records_of(generate("random", seed, 150));
        const TxStore store = make_store(records);
        const MempoolIndex index(CorpusView(store, SourceSet::all));
        for (int q = 0; q < 200; ++q) {
            const Timestamp t = 1651363200 + static_cast<Timestamp>(rng() % 200000) - 1000;
            BOOST_REQUIRE(index.at(t) == oracle::mempool_at(records, t));
        }
    }
}

BOOST_AUTO_TEST_CASE(chain_kind_names)
{
    for (const char* name : {"one_to_one", "fusiform", "peel"}) {
        BOOST_CHECK_EQUAL(to_string(*parse_chain_kind(name)), name);
    }
    BOOST_CHECK(!parse_chain_kind("loop"));
}

BOOST_AUTO_TEST_SUITE_END()
