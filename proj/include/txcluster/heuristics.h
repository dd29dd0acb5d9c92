// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_HEURISTICS_H
#define TXCLUSTER_HEURISTICS_H

#include <txcluster/mempool.h>
#include <txcluster/tx_store.h>
#include <txcluster/txmodel.h>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace txcluster {

/**
 * cs..ck are the established multi-input and change heuristics, rc/oc/fc
 * work on replacement groups and dependency chains, ni and pc are
 * experimental and never enabled by default.
 */
enum class HeuristicId { cs, ca, cm, cg, ce, ck, rc, oc, fc, ni, pc };

inline constexpr HeuristicId ALL_HEURISTICS[] = {
    HeuristicId::cs, HeuristicId::ca, HeuristicId::cm, HeuristicId::cg, HeuristicId::ce, HeuristicId::ck,
    HeuristicId::rc, HeuristicId::oc, HeuristicId::fc, HeuristicId::ni, HeuristicId::pc,
};

std::string_view to_string(HeuristicId id) noexcept;
std::optional<HeuristicId> parse_heuristic(std::string_view text) noexcept;

/** Parses "cs,ca,rc". Throws UnknownHeuristic on the first bad entry. Result is distinct, in enum order. */
std::vector<HeuristicId> parse_heuristic_list(std::string_view text);
std::string heuristic_list_to_string(const std::vector<HeuristicId>& ids);

bool is_change_heuristic(HeuristicId id) noexcept;

/**
 * Same-entity address pairs. Pairs are stored as (lesser, greater) and
 * self-pairs are discarded. Each pair carries the sorted txids supporting it.
 */
class LinkSet
{
public:
    using Pair = std::pair<std::string, std::string>;

    explicit LinkSet(HeuristicId id) : m_id(id) {}

    HeuristicId heuristic() const noexcept { return m_id; }

    void add(const std::string& a, const std::string& b, const Txid& evidence);
    void add(const std::string& a, const std::string& b, const std::vector<Txid>& evidence);
    /** Star over @p addresses centred on the least one; component-equivalent to a clique. */
    void add_star(const std::vector<std::string>& addresses, const std::vector<Txid>& evidence);

    /** Set union; evidence lists are merged. */
    void merge(const LinkSet& other);

    const std::map<Pair, std::vector<Txid>>& links() const noexcept { return m_links; }
    std::size_t size() const noexcept { return m_links.size(); }
    bool empty() const noexcept { return m_links.empty(); }

    bool operator==(const LinkSet&) const = default;

private:
    HeuristicId m_id;
    std::map<Pair, std::vector<Txid>> m_links;
};

/** One JSON object per line: {"heuristic","a","b","evidence":[...]}. */
void write_links_jsonl(std::ostream& os, const LinkSet& links);

struct CoinJoinParams {
    //! Smallest modal equal-value output group that counts as mixing.
    std::size_t min_equal_outputs{2};
    std::size_t min_outputs{3};

    bool operator==(const CoinJoinParams&) const = default;
};

/**
 * Flags tx iff its most frequent output value occurs k >= min_equal_outputs
 * times, it has at least k inputs and at least min_outputs outputs.
 * Coinbase transactions are never flagged.
 */
bool detect_coinjoin(const Transaction& tx, const CoinJoinParams& params = {});

struct ChangeAssignment {
    Txid txid;
    std::string change_address;
    HeuristicId heuristic{HeuristicId::ca};

    bool operator==(const ChangeAssignment&) const = default;
};

// Per-transaction change rules. Freshness is judged within @p view.
std::optional<ChangeAssignment> change_androulaki(const Transaction& tx, const CorpusView& view);
std::optional<ChangeAssignment> change_meiklejohn(const Transaction& tx, const CorpusView& view);
std::optional<ChangeAssignment> change_goldfeder(const Transaction& tx, const CorpusView& view,
                                                 const CoinJoinParams& params = {});
std::optional<ChangeAssignment> change_ermilov(const Transaction& tx, const CorpusView& view);

/** At most one assignment per chain member: the output spent by its successor. */
std::vector<ChangeAssignment> change_kappos(const std::vector<Chain>& peel_chains, const CorpusView& view);

/** change <-> every input address of the assigned transaction. */
LinkSet links_from_changes(HeuristicId id, const std::vector<ChangeAssignment>& changes, const CorpusView& view);

LinkSet co_spend(const CorpusView& view, const CoinJoinParams& params = {});
LinkSet replacement_change(const std::vector<ConflictGroup>& groups, const CorpusView& view,
                           const CoinJoinParams& params = {});
LinkSet one_to_one_links(const std::vector<Chain>& chains);
LinkSet fusiform_links(const std::vector<Chain>& chains, const CorpusView& view, const CoinJoinParams& params = {});
LinkSet new_input_links(const CorpusView& view, const CoinJoinParams& params = {});
LinkSet peel_chain_links(const std::vector<Chain>& chains);

struct HeuristicParams {
    CoinJoinParams coinjoin;
    ChainParams chains;

    bool operator==(const HeuristicParams&) const = default;
};

/**
 * Runs heuristics over one view, building the dependency graph, chains and
 * conflict groups once on first use.
 */
class HeuristicRunner
{
public:
    HeuristicRunner(const CorpusView& view, HeuristicParams params = {});

    LinkSet run(HeuristicId id);

    /** Assignments of a change heuristic (ca, cm, cg, ce, ck), sorted by txid. */
    std::vector<ChangeAssignment> change_assignments(HeuristicId id);

    const DependencyGraph& graph();
    const std::vector<ConflictGroup>& conflicts();
    const std::vector<Chain>& chains(ChainKind kind);
    PeelScope peel_scope() const noexcept;

private:
    const CorpusView& m_view;
    HeuristicParams m_params;
    std::optional<DependencyGraph> m_graph;
    std::optional<std::vector<ConflictGroup>> m_conflicts;
    std::map<ChainKind, std::vector<Chain>> m_chains;
};

} // namespace txcluster

#endif // TXCLUSTER_HEURISTICS_H
