// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_CLUSTERING_H
#define TXCLUSTER_CLUSTERING_H

#include <txcluster/heuristics.h>
#include <txcluster/union_find.h>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace txcluster {

/** Where a clustering came from: SC, SU, NU, merged(...) or a free-form tag. */
struct Provenance {
    std::string tag;
    std::vector<std::string> heuristics;

    bool operator==(const Provenance&) const = default;
};

/**
 * Partition of a set of addresses. Every cluster is identified by its
 * lexicographically least member. The universe flags mark the addresses
 * entities are counted over.
 */
class Clustering
{
public:
    Clustering() = default;

    /**
     * Connected components of the union of @p link_sets. Addresses of
     * @p universe that no link touches become singletons.
     */
    static Clustering build(std::span<const LinkSet> link_sets, std::vector<std::string> universe,
                            Provenance provenance = {});

    /** One cluster per group. Throws std::invalid_argument if an address is repeated. */
    static Clustering from_groups(std::vector<std::vector<std::string>> groups, Provenance provenance = {});

    /** Sorted distinct addresses. */
    std::span<const std::string> addresses() const noexcept { return m_addresses; }
    std::size_t size() const noexcept { return m_addresses.size(); }
    bool contains(std::string_view address) const { return index_of(address).has_value(); }

    /** Canonical id of the cluster holding @p address, if present. */
    std::optional<std::string> cluster_id(std::string_view address) const;
    /** Index of @p address in addresses(). */
    std::optional<std::size_t> index_of(std::string_view address) const;
    /** Index (into addresses()) of the least member of @p index's cluster. */
    std::size_t root_of(std::size_t index) const { return m_root[index]; }
    std::size_t cluster_size_of(std::size_t index) const { return m_cluster_size[m_root[index]]; }

    /** Clusters ordered by id; members sorted. */
    std::vector<std::vector<std::string>> clusters() const;
    std::size_t cluster_count() const noexcept { return m_cluster_count; }

    bool in_universe(std::size_t index) const { return m_universe[index]; }
    std::vector<std::string> universe() const;

    const Provenance& provenance() const noexcept { return m_provenance; }
    void set_provenance(Provenance p) { m_provenance = std::move(p); }

    /** Same addresses and same partition; provenance and universe are ignored. */
    bool same_partition(const Clustering& other) const
    {
        return m_addresses == other.m_addresses && m_root == other.m_root;
    }

private:
    friend Clustering merge(const Clustering& a, const Clustering& b);

    void canonicalize(UnionFind& uf);

    std::vector<std::string> m_addresses;
    std::vector<std::uint32_t> m_root;
    std::vector<std::uint32_t> m_cluster_size; // indexed by root
    std::vector<bool> m_universe;
    std::size_t m_cluster_count{0};
    Provenance m_provenance;
};

/**
 * Components of the union of both partitions' same-cluster relations.
 * The universe is the union of both universes.
 */
Clustering merge(const Clustering& a, const Clustering& b);

struct EntityCount {
    std::uint64_t total{0};
    std::uint64_t isolated{0};
    std::uint64_t non_isolated{0};

    bool operator==(const EntityCount&) const = default;
};

/**
 * Number of clusters intersecting @p universe. Universe addresses absent
 * from the clustering are isolated entities of their own; a cluster is
 * isolated when it has exactly one member.
 */
EntityCount entity_count(const Clustering& c, std::span<const std::string> universe);
/** Counts over the clustering's own universe. */
EntityCount entity_count(const Clustering& c);

std::string entity_count_to_json(const EntityCount& count);

/** CSV "address,cluster_id", sorted by address, LF line endings. */
void export_clustering(std::ostream& os, const Clustering& c, bool header = true);

/**
 * Reads the CSV written by export_clustering, with or without header.
 * Cluster ids are re-derived from the members. Throws MalformedClusterFile.
 */
Clustering import_clustering(std::istream& is);

/** Sidecar "<csv>.meta.json" holding provenance. */
std::string provenance_to_json(const Provenance& p);
Provenance provenance_from_json(std::string_view text);

} // namespace txcluster

#endif // TXCLUSTER_CLUSTERING_H
