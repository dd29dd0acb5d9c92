// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/clustering.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace txcluster {

namespace {

void sort_unique(std::vector<std::string>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/** Position of every element of sorted @p sub inside sorted superset @p super. */
std::vector<std::uint32_t> positions_in(std::span<const std::string> sub, std::span<const std::string> super)
{
    std::vector<std::uint32_t> out;
    out.reserve(sub.size());
    std::size_t j = 0;
    for (const auto& s : sub) {
        while (super[j] != s) ++j;
        out.push_back(static_cast<std::uint32_t>(j));
    }
    return out;
}

std::size_t index_in(const std::vector<std::string>& sorted, const std::string& value)
{
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

} // namespace

void Clustering::canonicalize(UnionFind& uf)
{
    const std::size_t n = m_addresses.size();
    constexpr std::uint32_t UNSET = UINT32_MAX;
    std::vector<std::uint32_t> least(n, UNSET);
    m_root.assign(n, 0);
    m_cluster_size.assign(n, 0);
    m_cluster_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (least[r] == UNSET) {
            least[r] = static_cast<std::uint32_t>(i);
            ++m_cluster_count;
        }
        m_root[i] = least[r];
        ++m_cluster_size[least[r]];
    }
}

Clustering Clustering::build(std::span<const LinkSet> link_sets, std::vector<std::string> universe,
                             Provenance provenance)
{
    Clustering c;
    sort_unique(universe);
    std::vector<std::string> linked;
    for (const auto& set : link_sets) {
        for (const auto& [pair, evidence] : set.links()) {
            linked.push_back(pair.first);
            linked.push_back(pair.second);
        }
    }
    sort_unique(linked);
    c.m_addresses.reserve(universe.size() + linked.size());
    std::set_union(universe.begin(), universe.end(), linked.begin(), linked.end(), std::back_inserter(c.m_addresses));
    linked.clear();
    linked.shrink_to_fit();

    c.m_universe.assign(c.m_addresses.size(), false);
    for (const std::uint32_t i : positions_in(universe, c.m_addresses)) c.m_universe[i] = true;
    universe.clear();
    universe.shrink_to_fit();

    UnionFind uf(c.m_addresses.size());
    for (const auto& set : link_sets) {
        for (const auto& [pair, evidence] : set.links()) {
            uf.unite(index_in(c.m_addresses, pair.first), index_in(c.m_addresses, pair.second));
        }
    }
    c.canonicalize(uf);
    c.m_provenance = std::move(provenance);
    return c;
}

Clustering Clustering::from_groups(std::vector<std::vector<std::string>> groups, Provenance provenance)
{
    std::vector<std::pair<std::string, std::size_t>> members;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (auto& a : groups[g]) members.emplace_back(std::move(a), g);
    }
    std::sort(members.begin(), members.end());
    Clustering c;
    c.m_addresses.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0 && members[i].first == members[i - 1].first) {
            throw std::invalid_argument("address in more than one cluster: " + members[i].first);
        }
        c.m_addresses.push_back(members[i].first);
    }
    std::vector<std::size_t> first_of_group(groups.size(), SIZE_MAX);
    UnionFind uf(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto& first = first_of_group[members[i].second];
        if (first == SIZE_MAX) {
            first = i;
        } else {
            uf.unite(first, i);
        }
    }
    c.m_universe.assign(c.m_addresses.size(), true);
    c.canonicalize(uf);
    c.m_provenance = std::move(provenance);
    return c;
}

std::optional<std::size_t> Clustering::index_of(std::string_view address) const
{
    const auto it = std::lower_bound(m_addresses.begin(), m_addresses.end(), address,
                                     [](const std::string& a, std::string_view b) { return a < b; });
    if (it == m_addresses.end() || *it != address) return std::nullopt;
    return static_cast<std::size_t>(it - m_addresses.begin());
}

std::optional<std::string> Clustering::cluster_id(std::string_view address) const
{
    const auto i = index_of(address);
    if (!i) return std::nullopt;
    return m_addresses[m_root[*i]];
}

std::vector<std::vector<std::string>> Clustering::clusters() const
{
    std::vector<std::size_t> slot(m_addresses.size(), SIZE_MAX);
    std::vector<std::vector<std::string>> out;
    out.reserve(m_cluster_count);
    for (std::size_t i = 0; i < m_addresses.size(); ++i) {
        const std::size_t r = m_root[i];
        if (slot[r] == SIZE_MAX) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(m_addresses[i]);
    }
    return out;
}

std::vector<std::string> Clustering::universe() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m_addresses.size(); ++i) {
        if (m_universe[i]) out.push_back(m_addresses[i]);
    }
    return out;
}

Clustering merge(const Clustering& a, const Clustering& b)
{
    Clustering c;
    c.m_addresses.reserve(a.size() + b.size());
    std::set_union(a.m_addresses.begin(), a.m_addresses.end(), b.m_addresses.begin(), b.m_addresses.end(),
                   std::back_inserter(c.m_addresses));
    c.m_universe.assign(c.m_addresses.size(), false);
    UnionFind uf(c.m_addresses.size());
    for (const Clustering* part : {&a, &b}) {
        const auto pos = positions_in(part->m_addresses, c.m_addresses);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            uf.unite(pos[i], pos[part->m_root[i]]);
            if (part->m_universe[i]) c.m_universe[pos[i]] = true;
        }
    }
    c.canonicalize(uf);

    c.m_provenance.tag = "merged(" + a.m_provenance.tag + "," + b.m_provenance.tag + ")";
    for (const Clustering* part : {&a, &b}) {
        for (const auto& h : part->m_provenance.heuristics) {
            auto& hs = c.m_provenance.heuristics;
            if (std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(h);
        }
    }
    return c;
}

EntityCount entity_count(const Clustering& c, std::span<const std::string> universe)
{
    EntityCount count;
    std::vector<bool> seen(c.size(), false);
    for (const auto& address : universe) {
        const auto i = c.index_of(address);
        if (!i) {
            ++count.total;
            ++count.isolated;
            continue;
        }
        const std::size_t r = c.root_of(*i);
        if (seen[r]) continue;
        seen[r] = true;
        ++count.total;
        if (c.cluster_size_of(r) == 1) {
            ++count.isolated;
        } else {
            ++count.non_isolated;
        }
    }
    return count;
}

EntityCount entity_count(const Clustering& c)
{
    EntityCount count;
    std::vector<bool> seen(c.size(), false);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c.in_universe(i)) continue;
        const std::size_t r = c.root_of(i);
        if (seen[r]) continue;
        seen[r] = true;
        ++count.total;
        if (c.cluster_size_of(r) == 1) {
            ++count.isolated;
        } else {
            ++count.non_isolated;
        }
    }
    return count;
}

std::string entity_count_to_json(const EntityCount& count)
{
    nlohmann::ordered_json j;
    j["total"] = count.total;
    j["isolated"] = count.isolated;
    j["non_isolated"] = count.non_isolated;
    return j.dump();
}

void export_clustering(std::ostream& os, const Clustering& c, bool header)
{
    if (header) os << "address,cluster_id\n";
    const auto addresses = c.addresses();
    for (std::size_t i = 0; i < addresses.size(); ++i) {
        os << addresses[i] << ',' << addresses[c.root_of(i)] << '\n';
    }
}

Clustering import_clustering(std::istream& is)
{
    std::map<std::string, std::vector<std::string>> groups;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "address,cluster_id") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw MalformedClusterFile(lineno, "expected exactly two fields");
        }
        std::string address = line.substr(0, comma);
        std::string id = line.substr(comma + 1);
        if (address.empty() || id.empty()) throw MalformedClusterFile(lineno, "empty field");
        if (!seen.insert(address).second) {
            throw MalformedClusterFile(lineno, "address " + address + " appears more than once");
        }
        groups[std::move(id)].push_back(std::move(address));
    }
    std::vector<std::vector<std::string>> list;
    list.reserve(groups.size());
    for (auto& [id, members] : groups) list.push_back(std::move(members));
    return Clustering::from_groups(std::move(list));
}

std::string provenance_to_json(const Provenance& p)
{
    nlohmann::ordered_json j;
    j["tag"] = p.tag;
    j["heuristics"] = p.heuristics;
    return j.dump();
}

Provenance provenance_from_json(std::string_view text)
{
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("provenance sidecar is not a JSON object");
    Provenance p;
    if (j.contains("tag") && j["tag"].is_string()) p.tag = j["tag"].get<std::string>();
    if (j.contains("heuristics") && j["heuristics"].is_array()) {
        for (const auto& h : j["heuristics"]) {
            if (h.is_string()) p.heuristics.push_back(h.get<std::string>());
        }
    }
    return p;
}

} // namespace txcluster
