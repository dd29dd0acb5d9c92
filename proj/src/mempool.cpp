// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/mempool.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace txcluster {

namespace {

bool contains_id(const std::vector<Txid>& ids, const Txid& id)
{
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void sort_unique(std::vector<std::string>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

const std::optional<std::string>& output_address(const CorpusView& view, const OutPoint& op)
{
    static const std::optional<std::string> none;
    const Transaction* tx = view.store().find(op.txid);
    if (!tx || op.vout >= tx->outputs.size()) return none;
    return tx->outputs[op.vout].address;
}

} // namespace

// ---------------------------------------------------------------------------
// MempoolIndex
// ---------------------------------------------------------------------------

MempoolIndex::MempoolIndex(const CorpusView& view)
{
    for (const Transaction* tx : view.transactions()) {
        if (const MempoolMeta* m = view.mempool(*tx)) m_entries.push_back({m->time, m->removetime, tx->txid});
    }
    std::sort(m_entries.begin(), m_entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.time, a.txid) < std::tie(b.time, b.txid); });
}

std::vector<Txid> MempoolIndex::at(Timestamp t) const
{
    const auto end = std::upper_bound(m_entries.begin(), m_entries.end(), t,
                                      [](Timestamp value, const Entry& e) { return value < e.time; });
    std::vector<Txid> out;
    for (auto it = m_entries.begin(); it != end; ++it) {
        if (!it->removetime || *it->removetime > t) out.push_back(it->txid);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Txid> mempool_at(Timestamp t, const CorpusView& view)
{
    return MempoolIndex(view).at(t);
}

// ---------------------------------------------------------------------------
// DependencyGraph
// ---------------------------------------------------------------------------

DependencyGraph DependencyGraph::build(const CorpusView& view)
{
    DependencyGraph g;
    std::vector<const Transaction*> txs;
    for (const Transaction* tx : view.transactions()) {
        if (view.mempool(*tx)) txs.push_back(tx);
    }
    std::sort(txs.begin(), txs.end(), [](const Transaction* a, const Transaction* b) { return a->txid < b->txid; });
    g.m_nodes.reserve(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
        g.m_nodes.push_back(txs[i]->txid);
        g.m_index.emplace(txs[i]->txid, i);
    }
    g.m_children.resize(txs.size());
    g.m_parents.resize(txs.size());

    const auto spends_from = [](const Transaction& child, const Txid& parent) {
        return std::any_of(child.inputs.begin(), child.inputs.end(),
                           [&](const TxInput& in) { return in.prevout.txid == parent; });
    };

    for (std::size_t ci = 0; ci < txs.size(); ++ci) {
        const Transaction& child = *txs[ci];
        const MempoolMeta& cm = *child.mempool;
        for (const auto& in : child.inputs) {
            const auto it = g.m_index.find(in.prevout.txid);
            if (it == g.m_index.end() || it->second == ci) continue;
            const std::size_t pi = it->second;
            const Transaction& parent = *txs[pi];
            const MempoolMeta& pm = *parent.mempool;
            const bool declared = contains_id(cm.depends, parent.txid) || contains_id(pm.spentby, child.txid);
            const bool overlap = pm.removetime ? cm.time < *pm.removetime : !parent.is_confirmed();
            if (declared || overlap) {
                g.m_children[pi].push_back(ci);
                g.m_parents[ci].push_back(pi);
            }
        }
        for (const auto& dep : cm.depends) {
            const auto it = g.m_index.find(dep);
            if (it != g.m_index.end() && !spends_from(child, dep)) ++g.m_dropped;
        }
        for (const auto& sp : cm.spentby) {
            const auto it = g.m_index.find(sp);
            if (it != g.m_index.end() && !spends_from(*txs[it->second], child.txid)) ++g.m_dropped;
        }
    }
    for (auto* adj : {&g.m_children, &g.m_parents}) {
        for (auto& list : *adj) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }
    for (const auto& list : g.m_children) g.m_edge_count += list.size();

    // Kahn's algorithm; whatever is left over sits on or behind a cycle.
    std::vector<std::size_t> indegree(txs.size());
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        indegree[i] = g.m_parents[i].size();
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t n = ready.front();
        ready.pop_front();
        ++visited;
        for (const std::size_t c : g.m_children[n]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    if (visited != txs.size()) {
        std::vector<std::string> stuck;
        for (std::size_t i = 0; i < txs.size(); ++i) {
            if (indegree[i] > 0) stuck.push_back(g.m_nodes[i].to_hex());
        }
        throw CycleDetected(std::move(stuck));
    }
    return g;
}

std::vector<Txid> DependencyGraph::children(const Txid& txid) const
{
    std::vector<Txid> out;
    const auto it = m_index.find(txid);
    if (it == m_index.end()) return out;
    for (const std::size_t c : m_children[it->second]) out.push_back(m_nodes[c]);
    return out;
}

std::vector<Txid> DependencyGraph::parents(const Txid& txid) const
{
    std::vector<Txid> out;
    const auto it = m_index.find(txid);
    if (it == m_index.end()) return out;
    for (const std::size_t p : m_parents[it->second]) out.push_back(m_nodes[p]);
    return out;
}

bool DependencyGraph::has_edge(const Txid& parent, const Txid& child) const
{
    const auto pi = m_index.find(parent);
    const auto ci = m_index.find(child);
    if (pi == m_index.end() || ci == m_index.end()) return false;
    const auto& list = m_children[pi->second];
    return std::binary_search(list.begin(), list.end(), ci->second);
}

std::vector<std::pair<Txid, Txid>> DependencyGraph::edges() const
{
    std::vector<std::pair<Txid, Txid>> out;
    out.reserve(m_edge_count);
    for (std::size_t p = 0; p < m_children.size(); ++p) {
        for (const std::size_t c : m_children[p]) out.emplace_back(m_nodes[p], m_nodes[c]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conflict groups
// ---------------------------------------------------------------------------

std::vector<ConflictGroup> conflict_groups(const CorpusView& view)
{
    std::unordered_map<OutPoint, std::vector<const Transaction*>, OutPointHasher> spenders;
    for (const Transaction* tx : view.transactions()) {
        for (const auto& in : tx->inputs) spenders[in.prevout].push_back(tx);
    }
    std::vector<ConflictGroup> groups;
    for (auto& [outpoint, txs] : spenders) {
        if (txs.size() < 2) continue;
        const auto key = [&](const Transaction* tx) {
            const MempoolMeta* m = view.mempool(*tx);
            return std::make_pair(m ? m->time : std::numeric_limits<Timestamp>::max(), tx->txid);
        };
        std::sort(txs.begin(), txs.end(), [&](const Transaction* a, const Transaction* b) { return key(a) < key(b); });
        ConflictGroup group;
        group.outpoint = outpoint;
        for (const Transaction* tx : txs) {
            group.members.push_back(tx->txid);
            if (tx->is_confirmed() && !group.winner) group.winner = tx->txid;
        }
        groups.push_back(std::move(group));
    }
    std::sort(groups.begin(), groups.end(),
              [](const ConflictGroup& a, const ConflictGroup& b) { return a.outpoint < b.outpoint; });
    return groups;
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

std::string_view to_string(ChainKind kind) noexcept
{
    switch (kind) {
    case ChainKind::one_to_one: return "one_to_one";
    case ChainKind::fusiform: return "fusiform";
    case ChainKind::peel: return "peel";
    }
    return "one_to_one";
}

std::optional<ChainKind> parse_chain_kind(std::string_view text) noexcept
{
    if (text == "one_to_one") return ChainKind::one_to_one;
    if (text == "fusiform") return ChainKind::fusiform;
    if (text == "peel") return ChainKind::peel;
    return std::nullopt;
}

std::string chain_to_json(const Chain& chain)
{
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(chain.kind));
    j["txids"] = nlohmann::ordered_json::array();
    for (const auto& id : chain.txids) j["txids"].push_back(id.to_hex());
    j["addresses"] = chain.addresses;
    if (chain.max_gap_sec) j["max_gap_sec"] = *chain.max_gap_sec;
    return j.dump();
}

std::vector<Chain> extract_one_to_one_chains(const DependencyGraph& graph, const CorpusView& view, std::size_t min_len)
{
    const auto eligible = [&](const Txid& id) -> const Transaction* {
        const Transaction* tx = view.find(id);
        if (!tx || !graph.contains(id)) return nullptr;
        return tx->inputs.size() == 1 && tx->outputs.size() == 1 ? tx : nullptr;
    };

    std::vector<Chain> chains;
    for (const Txid& root : graph.nodes()) {
        if (!eligible(root)) continue;
        const auto parents = graph.parents(root);
        if (std::any_of(parents.begin(), parents.end(), [&](const Txid& p) { return eligible(p) != nullptr; })) {
            continue;
        }

        // A 1-input transaction has at most one parent, so each component is
        // a tree hanging off its root. Qualifying root-to-leaf paths all share
        // the root and therefore merge into a single chain.
        struct Node {
            Txid id;
            std::size_t parent;
            std::size_t depth;
        };
        std::vector<Node> nodes{{root, SIZE_MAX, 0}};
        std::vector<bool> is_leaf;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            bool leaf = true;
            for (const Txid& c : graph.children(nodes[i].id)) {
                if (!eligible(c)) continue;
                leaf = false;
                nodes.push_back({c, i, nodes[i].depth + 1});
            }
            is_leaf.push_back(leaf);
        }
        std::vector<bool> marked(nodes.size(), false);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!is_leaf[i] || nodes[i].depth + 1 < min_len) continue;
            for (std::size_t n = i; n != SIZE_MAX && !marked[n]; n = nodes[n].parent) marked[n] = true;
        }
        if (!marked[0]) continue;

        std::vector<std::pair<std::size_t, Txid>> members;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (marked[i]) members.emplace_back(nodes[i].depth, nodes[i].id);
        }
        std::sort(members.begin(), members.end());

        Chain chain;
        chain.kind = ChainKind::one_to_one;
        Timestamp max_gap = std::numeric_limits<Timestamp>::min();
        for (const auto& [depth, id] : members) {
            chain.txids.push_back(id);
            const Transaction& tx = *view.find(id);
            for (const auto& a : tx.input_addresses()) chain.addresses.push_back(a);
            for (const auto& a : tx.output_addresses()) chain.addresses.push_back(a);
        }
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (!marked[i]) continue;
            const Transaction& child = *view.find(nodes[i].id);
            const Transaction& parent = *view.find(nodes[nodes[i].parent].id);
            max_gap = std::max(max_gap, child.mempool->time - parent.mempool->time);
        }
        if (max_gap != std::numeric_limits<Timestamp>::min()) chain.max_gap_sec = max_gap;
        sort_unique(chain.addresses);
        chains.push_back(std::move(chain));
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) { return a.txids < b.txids; });
    return chains;
}

namespace {

struct FusiformPath {
    std::uint32_t branch;
    std::vector<OutPoint> spent; // outpoints traversed, in order
    std::vector<const Transaction*> txs;
};

bool outpoint_disjoint(const FusiformPath& a, const FusiformPath& b)
{
    for (const auto& op : a.spent) {
        if (std::find(b.spent.begin(), b.spent.end(), op) != b.spent.end()) return false;
    }
    return true;
}

void extend_paths(const DependencyGraph& graph, const CorpusView& view, const Transaction& from, std::uint32_t vout,
                  FusiformPath& current, std::size_t max_depth, std::vector<FusiformPath>& out)
{
    if (current.txs.size() >= max_depth || vout >= from.outputs.size()) return;
    for (const Txid& spender : from.outputs[vout].spent_tx) {
        const Transaction* next = view.find(spender);
        if (!next || !graph.has_edge(from.txid, spender)) continue;
        current.spent.push_back({from.txid, vout});
        current.txs.push_back(next);
        out.push_back(current);
        for (std::uint32_t v = 0; v < next->outputs.size(); ++v) {
            extend_paths(graph, view, *next, v, current, max_depth, out);
        }
        current.spent.pop_back();
        current.txs.pop_back();
    }
}

Chain make_fusiform(const Transaction& source, const std::vector<const FusiformPath*>& paths, const CorpusView& view,
                    const Transaction* sink_tx, const std::string* sink_address)
{
    Chain chain;
    chain.kind = ChainKind::fusiform;
    std::vector<Txid> middle;
    for (const FusiformPath* p : paths) {
        for (const Transaction* tx : p->txs) {
            if (tx != sink_tx) middle.push_back(tx->txid);
        }
        for (const auto& op : p->spent) {
            if (const auto& a = output_address(view, op)) chain.addresses.push_back(*a);
        }
    }
    std::sort(middle.begin(), middle.end());
    middle.erase(std::unique(middle.begin(), middle.end()), middle.end());
    chain.txids.push_back(source.txid);
    chain.txids.insert(chain.txids.end(), middle.begin(), middle.end());
    if (sink_tx) chain.txids.push_back(sink_tx->txid);
    if (sink_address) chain.addresses.push_back(*sink_address);
    sort_unique(chain.addresses);
    return chain;
}

} // namespace

std::vector<Chain> extract_fusiform_chains(const DependencyGraph& graph, const CorpusView& view, std::size_t max_depth)
{
    std::vector<Chain> chains;
    for (const Txid& source_id : graph.nodes()) {
        const Transaction* source = view.find(source_id);
        if (!source || source->outputs.size() < 2) continue;

        std::vector<FusiformPath> paths;
        for (std::uint32_t v = 0; v < source->outputs.size(); ++v) {
            FusiformPath current{v, {}, {}};
            extend_paths(graph, view, *source, v, current, max_depth, paths);
        }
        if (paths.size() < 2) continue;

        // Reconvergence at a transaction: paths ending at the same tx.
        std::map<Txid, std::vector<const FusiformPath*>> by_sink_tx;
        // Reconvergence at an address paid by the last tx of each path.
        std::map<std::string, std::vector<const FusiformPath*>> by_sink_address;
        for (const auto& p : paths) {
            const Transaction* last = p.txs.back();
            by_sink_tx[last->txid].push_back(&p);
            for (const auto& a : last->output_addresses()) by_sink_address[a].push_back(&p);
        }

        for (const auto& [sink, group] : by_sink_tx) {
            bool found = false;
            for (std::size_t i = 0; i < group.size() && !found; ++i) {
                for (std::size_t j = i + 1; j < group.size() && !found; ++j) {
                    found = group[i]->branch != group[j]->branch && outpoint_disjoint(*group[i], *group[j]);
                }
            }
            if (found) chains.push_back(make_fusiform(*source, group, view, group.front()->txs.back(), nullptr));
        }
        for (const auto& [address, group] : by_sink_address) {
            bool found = false;
            for (std::size_t i = 0; i < group.size() && !found; ++i) {
                for (std::size_t j = i + 1; j < group.size() && !found; ++j) {
                    found = group[i]->branch != group[j]->branch && group[i]->txs.back() != group[j]->txs.back() &&
                            outpoint_disjoint(*group[i], *group[j]);
                }
            }
            if (found) chains.push_back(make_fusiform(*source, group, view, nullptr, &address));
        }
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        return std::tie(a.txids, a.addresses) < std::tie(b.txids, b.addresses);
    });
    chains.erase(std::unique(chains.begin(), chains.end()), chains.end());
    return chains;
}

std::vector<Chain> extract_peel_chains(const CorpusView& view, PeelScope scope, const DependencyGraph* graph,
                                       std::size_t min_len)
{
    if (scope == PeelScope::mempool && !graph) throw std::invalid_argument("mempool-scope peel chains need a graph");

    const auto eligible = [&](const Transaction* tx) {
        if (!tx || tx->is_coinbase || tx->inputs.size() != 1 || tx->outputs.size() != 2) return false;
        return scope == PeelScope::mempool ? graph->contains(tx->txid) : tx->is_confirmed();
    };

    struct Link {
        Amount value;
        std::uint32_t vout;
        const Transaction* child;
    };
    std::unordered_map<Txid, std::vector<Link>, TxidHasher> children;
    std::unordered_map<Txid, bool, TxidHasher> has_parent;
    std::vector<const Transaction*> members;

    for (const Transaction* tx : view.transactions()) {
        if (!eligible(tx)) continue;
        members.push_back(tx);
        auto& links = children[tx->txid];
        for (const auto& out : tx->outputs) {
            for (const Txid& spender : out.spent_tx) {
                const Transaction* child = view.find(spender);
                if (!eligible(child)) continue;
                if (scope == PeelScope::mempool && !graph->has_edge(tx->txid, spender)) continue;
                links.push_back({out.value_sat, out.n, child});
                has_parent[spender] = true;
            }
        }
        // The larger output carries the remaining balance and continues the chain.
        std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
            return std::make_tuple(-a.value, a.vout, a.child->txid) < std::make_tuple(-b.value, b.vout, b.child->txid);
        });
    }

    std::vector<Chain> chains;
    const auto follow = [&](std::vector<const Transaction*> seq, std::vector<OutPoint> links, bool forked) {
        for (;;) {
            const auto& next = children[seq.back()->txid];
            if (next.empty()) break;
            links.push_back({seq.back()->txid, next.front().vout});
            seq.push_back(next.front().child);
        }
        if (seq.size() < min_len) return;
        Chain chain;
        chain.kind = ChainKind::peel;
        chain.forked = forked;
        chain.links = std::move(links);
        for (const Transaction* tx : seq) {
            chain.txids.push_back(tx->txid);
            for (const auto& a : tx->input_addresses()) chain.addresses.push_back(a);
        }
        for (const auto& op : chain.links) {
            if (const auto& a = output_address(view, op)) chain.addresses.push_back(*a);
        }
        sort_unique(chain.addresses);
        chains.push_back(std::move(chain));
    };

    for (const Transaction* tx : members) {
        if (!has_parent.count(tx->txid)) follow({tx}, {}, false);
        const auto& links = children[tx->txid];
        for (std::size_t i = 1; i < links.size(); ++i) {
            follow({tx, links[i].child}, {OutPoint{tx->txid, links[i].vout}}, true);
        }
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) { return a.txids < b.txids; });
    return chains;
}

} // namespace txcluster
