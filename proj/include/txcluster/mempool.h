// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_MEMPOOL_H
#define TXCLUSTER_MEMPOOL_H

#include <txcluster/tx_store.h>
#include <txcluster/txmodel.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace txcluster {

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

/**
 * Time index over every transaction with mempool data. A transaction is in
 * the pool at t when time <= t < removetime (removetime exclusive).
 */
class MempoolIndex
{
public:
    explicit MempoolIndex(const CorpusView& view);

    /** Sorted txids in the pool at @p t. */
    std::vector<Txid> at(Timestamp t) const;

private:
    struct Entry {
        Timestamp time;
        std::optional<Timestamp> removetime;
        Txid txid;
    };
    std::vector<Entry> m_entries; // ascending time
};

std::vector<Txid> mempool_at(Timestamp t, const CorpusView& view);

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

/**
 * parent -> child edges between transactions with mempool data, where the
 * child spends an output of the parent while the parent was unconfirmed.
 *
 * An edge is kept when the child really spends a parent output and at least
 * one of these holds: the child lists the parent in depends, the parent
 * lists the child in spentby, or the child entered the pool before the
 * parent left it. depends/spentby entries without a matching spend are
 * dropped and counted.
 */
class DependencyGraph
{
public:
    /** Throws CycleDetected naming the transactions left on a cycle. */
    static DependencyGraph build(const CorpusView& view);

    std::span<const Txid> nodes() const noexcept { return m_nodes; }
    bool contains(const Txid& txid) const { return m_index.count(txid) != 0; }

    std::vector<Txid> children(const Txid& txid) const;
    std::vector<Txid> parents(const Txid& txid) const;
    bool has_edge(const Txid& parent, const Txid& child) const;

    /** Sorted (parent, child) pairs. */
    std::vector<std::pair<Txid, Txid>> edges() const;
    std::size_t edge_count() const noexcept { return m_edge_count; }
    std::size_t dropped_declared_edges() const noexcept { return m_dropped; }

private:
    std::vector<Txid> m_nodes; // sorted
    std::unordered_map<Txid, std::size_t, TxidHasher> m_index;
    std::vector<std::vector<std::size_t>> m_children;
    std::vector<std::vector<std::size_t>> m_parents;
    std::size_t m_edge_count{0};
    std::size_t m_dropped{0};
};

// ---------------------------------------------------------------------------
// Conflict groups
// ---------------------------------------------------------------------------

struct ConflictGroup {
    OutPoint outpoint;
    //! Ordered by mempool time (transactions never seen in a pool last), then txid.
    std::vector<Txid> members;
    std::optional<Txid> winner;

    bool operator==(const ConflictGroup&) const = default;
};

/** One group per outpoint spent by two or more transactions of @p view. */
std::vector<ConflictGroup> conflict_groups(const CorpusView& view);

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

enum class ChainKind { one_to_one, fusiform, peel };

std::string_view to_string(ChainKind kind) noexcept;
std::optional<ChainKind> parse_chain_kind(std::string_view text) noexcept;

struct Chain {
    ChainKind kind{ChainKind::one_to_one};
    std::vector<Txid> txids;
    //! Sorted distinct addresses the chain implicates.
    std::vector<std::string> addresses;
    //! one_to_one: largest entry-time gap along a chain edge.
    std::optional<Timestamp> max_gap_sec;
    //! peel: output of txids[i] spent by txids[i + 1].
    std::vector<OutPoint> links;
    //! peel: chain starts at a fork of another chain rather than at a root.
    bool forked{false};

    bool operator==(const Chain&) const = default;
};

/** Single-line JSON {"kind","txids","addresses"} (plus max_gap_sec for one_to_one). */
std::string chain_to_json(const Chain& chain);

struct ChainParams {
    std::size_t one_to_one_min_len{3};
    std::size_t fusiform_max_depth{4};
    std::size_t peel_min_len{3};

    bool operator==(const ChainParams&) const = default;
};

std::vector<Chain> extract_one_to_one_chains(const DependencyGraph& graph, const CorpusView& view,
                                             std::size_t min_len = 3);

std::vector<Chain> extract_fusiform_chains(const DependencyGraph& graph, const CorpusView& view,
                                           std::size_t max_depth = 4);

enum class PeelScope { confirmed, mempool };

/**
 * 1-input/2-output sequences where each member spends an output of the
 * previous one. @p graph is required for PeelScope::mempool.
 */
std::vector<Chain> extract_peel_chains(const CorpusView& view, PeelScope scope, const DependencyGraph* graph,
                                       std::size_t min_len = 3);

} // namespace txcluster

#endif // TXCLUSTER_MEMPOOL_H
