// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/clustering.h>
#include <txcluster/errors.h>
#include <txcluster/union_find.h>

#include <oracles.h>
#include <util.h>

#include <boost/test/unit_test.hpp>

#include <random>
#include <sstream>

using namespace txcluster;

namespace {

using Groups = std::vector<std::vector<std::string>>;

LinkSet links_of(const std::vector<std::pair<std::string, std::string>>& pairs)
{
    LinkSet s(HeuristicId::cs);
    for (const auto& [a, b] : pairs) s.add(a, b, testutil::numbered_txid(1));
    return s;
}

} // namespace

BOOST_AUTO_TEST_SUITE(clustering_tests)

BOOST_AUTO_TEST_CASE(union_find)
{
    UnionFind uf(6);
    BOOST_CHECK_EQUAL(uf.component_count(), 6U);
    BOOST_CHECK(uf.unite(0, 1));
    BOOST_CHECK(uf.unite(2, 1));
    BOOST_CHECK(!uf.unite(0, 2));
    BOOST_CHECK(uf.unite(4, 5));
    BOOST_CHECK_EQUAL(uf.component_count(), 3U);
    BOOST_CHECK_EQUAL(uf.component_size(2), 3U);
    BOOST_CHECK_EQUAL(uf.find(0), uf.find(2));
    BOOST_CHECK(uf.find(3) != uf.find(4));
}

BOOST_AUTO_TEST_CASE(union_find_matches_bfs)
{
    std::mt19937_64 rng(17);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 1 + rng() % 300;
        const std::size_t m = rng() % (n + n / 2);
        UnionFind uf(n);
        std::set<std::string> nodes;
        std::vector<std::pair<std::string, std::string>> edges;
        for (std::size_t i = 0; i < n; ++i) nodes.insert(std::to_string(i));
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t a = rng() % n;
            const std::size_t b = rng() % n;
            uf.unite(a, b);
            edges.emplace_back(std::to_string(a), std::to_string(b));
        }
        const auto expected = oracle::bfs_components(nodes, edges);
        std::map<std::size_t, std::set<std::string>> by_root;
        for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].insert(std::to_string(i));
        oracle::Partition got;
        for (auto& [r, members] : by_root) got.insert(members);
        BOOST_REQUIRE(got == expected);
        BOOST_REQUIRE_EQUAL(uf.component_count(), expected.size());
    }
}

BOOST_AUTO_TEST_CASE(build_from_links)
{
    const LinkSet s = links_of({{"b", "c"}, {"d", "c"}, {"x", "y"}});
    const Clustering c = Clustering::build(std::vector<LinkSet>{s}, {"a", "b", "z"}, {"SC", {"cs"}});
    BOOST_CHECK_EQUAL(c.size(), 7U);
    BOOST_CHECK_EQUAL(c.cluster_count(), 4U);
    BOOST_CHECK_EQUAL(*c.cluster_id("d"), "b");
    BOOST_CHECK_EQUAL(*c.cluster_id("y"), "x");
    BOOST_CHECK(!c.cluster_id("q"));
    BOOST_CHECK((c.clusters() == Groups{{"a"}, {"b", "c", "d"}, {"x", "y"}, {"z"}}));
    BOOST_CHECK((c.universe() == std::vector<std::string>{"a", "b", "z"}));
    BOOST_CHECK_EQUAL(c.provenance().tag, "SC");

    // Counting over the clustering's own universe: {a}, {b,c,d}, {z}.
    const EntityCount n = entity_count(c);
    BOOST_CHECK_EQUAL(n.total, 3U);
    BOOST_CHECK_EQUAL(n.isolated, 2U);
    BOOST_CHECK_EQUAL(n.non_isolated, 1U);
    BOOST_CHECK_EQUAL(entity_count_to_json(n), "{\"total\":3,\"isolated\":2,\"non_isolated\":1}");

    const std::vector<std::string> other{"c", "y", "unknown"};
    const EntityCount m = entity_count(c, other);
    BOOST_CHECK_EQUAL(m.total, 3U);
    BOOST_CHECK_EQUAL(m.isolated, 1U);
}

BOOST_AUTO_TEST_CASE(from_groups)
{
    const Clustering c = Clustering::from_groups({{"q", "p"}, {"r"}});
    BOOST_CHECK((c.clusters() == Groups{{"p", "q"}, {"r"}}));
    BOOST_CHECK_THROW(Clustering::from_groups({{"a", "b"}, {"b"}}), std::invalid_argument);
}

BOOST_AUTO_TEST_CASE(merge_unions_partitions)
{
    const Clustering a = Clustering::from_groups({{"a", "b"}, {"c"}, {"d", "e"}}, {"SC", {"cs"}});
    const Clustering b = Clustering::from_groups({{"b", "c"}, {"f", "g"}}, {"SU", {"cs", "ca"}});
    const Clustering m = merge(a, b);
    BOOST_CHECK((m.clusters() == Groups{{"a", "b", "c"}, {"d", "e"}, {"f", "g"}}));
    BOOST_CHECK_EQUAL(m.provenance().tag, "merged(SC,SU)");
    BOOST_CHECK((m.provenance().heuristics == std::vector<std::string>{"cs", "ca"}));
    BOOST_CHECK(merge(m, a).same_partition(m));
    BOOST_CHECK(merge(a, b).same_partition(merge(b, a)));
}

BOOST_AUTO_TEST_CASE(csv_round_trip)
{
    const Clustering c = Clustering::from_groups({{"b", "a"}, {"c"}, {"e", "d", "f"}});
    for (const bool header : {true, false}) {
        std::stringstream ss;
        export_clustering(ss, c, header);
        if (header) BOOST_CHECK_EQUAL(ss.str().substr(0, 19), "address,cluster_id\n");
        const Clustering back = import_clustering(ss);
        BOOST_CHECK(back.same_partition(c));
    }
    std::istringstream crlf("address,cluster_id\r\na,a\r\nb,a\r\n\r\nc,c\r\n");
    BOOST_CHECK((import_clustering(crlf).clusters() == Groups{{"a", "b"}, {"c"}}));
}

BOOST_AUTO_TEST_CASE(malformed_csv)
{
    const auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            import_clustering(in);
        } catch (const MalformedClusterFile& e) {
            return e.line();
        }
        return 0;
    };
    BOOST_CHECK_EQUAL(line_of("address,cluster_id\na,a\na,b\n"), 3U);
    BOOST_CHECK_EQUAL(line_of("a,a\nb\n"), 2U);
    BOOST_CHECK_EQUAL(line_of("a,a,a\n"), 1U);
    BOOST_CHECK_EQUAL(line_of("a,a\n,b\n"), 2U);
    BOOST_CHECK_EQUAL(line_of("a,a\nb,a\n"), 0U);
}

BOOST_AUTO_TEST_CASE(provenance_json)
{
    const Provenance p{"NU", {"rc", "oc"}};
    BOOST_CHECK(provenance_from_json(provenance_to_json(p)) == p);
    BOOST_CHECK_THROW(provenance_from_json("nope"), ConfigError);
}

BOOST_AUTO_TEST_CASE(build_matches_bfs)
{
    std::mt19937_64 rng(23);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<std::pair<std::string, std::string>> edges;
        std::set<std::string> nodes;
        for (std::size_t k = 0; k < n / 2 + rng() % n; ++k) {
            const std::size_t a = rng() % n;
            const std::size_t b = (a + 1 + rng() % (n - 1)) % n; // a link never joins an address to itself
            edges.emplace_back("a" + std::to_string(a), "a" + std::to_string(b));
            nodes.insert(edges.back().first);
            nodes.insert(edges.back().second);
        }
        const Clustering c = Clustering::build(std::vector<LinkSet>{links_of(edges)}, {});
        BOOST_REQUIRE(oracle::partition_of(c) == oracle::bfs_components(nodes, edges));
    }
}

BOOST_AUTO_TEST_SUITE_END()
