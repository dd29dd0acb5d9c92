// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/heuristics.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <set>
#include <unordered_map>

namespace txcluster {

namespace {

void insert_sorted(std::vector<Txid>& ids, const Txid& id)
{
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) ids.insert(it, id);
}

bool disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
    }
    return true;
}

/** Index of the only output whose address is fresh, if exactly one is. */
std::optional<std::size_t> only_fresh_output(const Transaction& tx, const CorpusView& view)
{
    std::optional<std::size_t> found;
    std::size_t count = 0;
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const auto& address = tx.outputs[i].address;
        if (address && view.is_fresh(*address, tx)) {
            ++count;
            found = i;
        }
    }
    return count == 1 ? found : std::nullopt;
}

ChangeAssignment assign(const Transaction& tx, std::size_t vout, HeuristicId id)
{
    return {tx.txid, *tx.outputs[vout].address, id};
}

bool chain_has_coinjoin(const Chain& chain, const CorpusView& view, const CoinJoinParams& params)
{
    return std::any_of(chain.txids.begin(), chain.txids.end(), [&](const Txid& id) {
        const Transaction* tx = view.find(id);
        return tx && detect_coinjoin(*tx, params);
    });
}

} // namespace

std::string_view to_string(HeuristicId id) noexcept
{
    switch (id) {
    case HeuristicId::cs: return "cs";
    case HeuristicId::ca: return "ca";
    case HeuristicId::cm: return "cm";
    case HeuristicId::cg: return "cg";
    case HeuristicId::ce: return "ce";
    case HeuristicId::ck: return "ck";
    case HeuristicId::rc: return "rc";
    case HeuristicId::oc: return "oc";
    case HeuristicId::fc: return "fc";
    case HeuristicId::ni: return "ni";
    case HeuristicId::pc: return "pc";
    }
    return "cs";
}

std::optional<HeuristicId> parse_heuristic(std::string_view text) noexcept
{
    for (const HeuristicId id : ALL_HEURISTICS) {
        if (to_string(id) == text) return id;
    }
    return std::nullopt;
}

std::vector<HeuristicId> parse_heuristic_list(std::string_view text)
{
    std::set<HeuristicId> ids;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string_view item = text.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        const auto id = parse_heuristic(item);
        if (!id) throw UnknownHeuristic(std::string(item));
        ids.insert(*id);
        start = comma + 1;
    }
    return {ids.begin(), ids.end()};
}

std::string heuristic_list_to_string(const std::vector<HeuristicId>& ids)
{
    std::string out;
    for (const HeuristicId id : ids) {
        if (!out.empty()) out += ',';
        out += to_string(id);
    }
    return out;
}

bool is_change_heuristic(HeuristicId id) noexcept
{
    switch (id) {
    case HeuristicId::ca:
    case HeuristicId::cm:
    case HeuristicId::cg:
    case HeuristicId::ce:
    case HeuristicId::ck:
        return true;
    default:
        return false;
    }
}

// ---------------------------------------------------------------------------
// LinkSet
// ---------------------------------------------------------------------------

void LinkSet::add(const std::string& a, const std::string& b, const Txid& evidence)
{
    if (a == b) return;
    auto& ev = m_links[a < b ? Pair{a, b} : Pair{b, a}];
    insert_sorted(ev, evidence);
}

void LinkSet::add(const std::string& a, const std::string& b, const std::vector<Txid>& evidence)
{
    if (a == b) return;
    auto& ev = m_links[a < b ? Pair{a, b} : Pair{b, a}];
    for (const auto& id : evidence) insert_sorted(ev, id);
}

void LinkSet::add_star(const std::vector<std::string>& addresses, const std::vector<Txid>& evidence)
{
    if (addresses.size() < 2) return;
    const std::string& centre = *std::min_element(addresses.begin(), addresses.end());
    for (const auto& a : addresses) add(centre, a, evidence);
}

void LinkSet::merge(const LinkSet& other)
{
    for (const auto& [pair, evidence] : other.m_links) add(pair.first, pair.second, evidence);
}

void write_links_jsonl(std::ostream& os, const LinkSet& links)
{
    for (const auto& [pair, evidence] : links.links()) {
        nlohmann::ordered_json j;
        j["heuristic"] = std::string(to_string(links.heuristic()));
        j["a"] = pair.first;
        j["b"] = pair.second;
        j["evidence"] = nlohmann::ordered_json::array();
        for (const auto& id : evidence) j["evidence"].push_back(id.to_hex());
        os << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

bool detect_coinjoin(const Transaction& tx, const CoinJoinParams& params)
{
    if (tx.is_coinbase || tx.outputs.size() < params.min_outputs) return false;
    std::vector<Amount> values;
    values.reserve(tx.outputs.size());
    for (const auto& out : tx.outputs) values.push_back(out.value_sat);
    std::sort(values.begin(), values.end());
    std::size_t modal = 0;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        modal = std::max(modal, j - i);
        i = j;
    }
    return modal >= params.min_equal_outputs && tx.inputs.size() >= modal;
}

std::optional<ChangeAssignment> change_androulaki(const Transaction& tx, const CorpusView& view)
{
    if (tx.outputs.size() != 2) return std::nullopt;
    const auto vout = only_fresh_output(tx, view);
    if (!vout) return std::nullopt;
    return assign(tx, *vout, HeuristicId::ca);
}

std::optional<ChangeAssignment> change_meiklejohn(const Transaction& tx, const CorpusView& view)
{
    if (tx.is_coinbase) return std::nullopt;
    if (!disjoint(tx.input_addresses(), tx.output_addresses())) return std::nullopt;
    const auto vout = only_fresh_output(tx, view);
    if (!vout) return std::nullopt;
    return assign(tx, *vout, HeuristicId::cm);
}

std::optional<ChangeAssignment> change_goldfeder(const Transaction& tx, const CorpusView& view,
                                                 const CoinJoinParams& params)
{
    auto result = change_meiklejohn(tx, view);
    if (!result || detect_coinjoin(tx, params)) return std::nullopt;
    result->heuristic = HeuristicId::cg;
    return result;
}

std::optional<ChangeAssignment> change_ermilov(const Transaction& tx, const CorpusView& view)
{
    if (tx.inputs.size() == 2 || tx.outputs.size() != 2) return std::nullopt;
    if (!disjoint(tx.input_addresses(), tx.output_addresses())) return std::nullopt;
    const auto vout = only_fresh_output(tx, view);
    if (!vout || tx.outputs[*vout].value_sat % 10000 == 0) return std::nullopt;
    return assign(tx, *vout, HeuristicId::ce);
}

std::vector<ChangeAssignment> change_kappos(const std::vector<Chain>& peel_chains, const CorpusView& view)
{
    // A fork node heads one chain per extra child; its continuation link is
    // preferred so every transaction gets at most one change output.
    std::map<Txid, std::pair<bool, std::string>> best;
    for (const Chain& chain : peel_chains) {
        for (std::size_t i = 0; i < chain.links.size(); ++i) {
            const Transaction* tx = view.store().find(chain.links[i].txid);
            const auto& address = tx->outputs[chain.links[i].vout].address;
            if (!address) continue;
            const bool fork_link = chain.forked && i == 0;
            const auto it = best.find(tx->txid);
            if (it == best.end()) {
                best.emplace(tx->txid, std::make_pair(fork_link, *address));
            } else if (it->second.first && !fork_link) {
                it->second = {false, *address};
            }
        }
    }
    std::vector<ChangeAssignment> out;
    out.reserve(best.size());
    for (const auto& [txid, choice] : best) out.push_back({txid, choice.second, HeuristicId::ck});
    return out;
}

LinkSet links_from_changes(HeuristicId id, const std::vector<ChangeAssignment>& changes, const CorpusView& view)
{
    LinkSet links(id);
    for (const auto& change : changes) {
        const Transaction* tx = view.find(change.txid);
        if (!tx) continue;
        for (const auto& in : tx->input_addresses()) links.add(change.change_address, in, change.txid);
    }
    return links;
}

LinkSet co_spend(const CorpusView& view, const CoinJoinParams& params)
{
    LinkSet links(HeuristicId::cs);
    for (const Transaction* tx : view.transactions()) {
        if (tx->is_coinbase || tx->inputs.size() < 2 || detect_coinjoin(*tx, params)) continue;
        links.add_star(tx->input_addresses(), {tx->txid});
    }
    return links;
}

LinkSet replacement_change(const std::vector<ConflictGroup>& groups, const CorpusView& view,
                           const CoinJoinParams& params)
{
    LinkSet links(HeuristicId::rc);
    for (const auto& group : groups) {
        if (group.members.size() < 2) continue;
        std::vector<const Transaction*> members;
        bool eligible = true;
        for (const auto& id : group.members) {
            const Transaction* tx = view.find(id);
            const MempoolMeta* meta = tx ? view.mempool(*tx) : nullptr;
            if (!meta || !meta->replaceable || detect_coinjoin(*tx, params)) {
                eligible = false;
                break;
            }
            members.push_back(tx);
        }
        if (!eligible) continue;
        const auto inputs = members.front()->input_addresses();
        if (inputs.empty()) continue;
        if (std::any_of(members.begin(), members.end(),
                        [&](const Transaction* tx) { return tx->input_addresses() != inputs; })) {
            continue;
        }

        // address -> amount received in each member that pays it
        std::map<std::string, std::vector<std::pair<Amount, Txid>>> received;
        for (const Transaction* tx : members) {
            std::map<std::string, Amount> per_tx;
            for (const auto& out : tx->outputs) {
                if (out.address) per_tx[*out.address] += out.value_sat;
            }
            for (const auto& [address, amount] : per_tx) received[address].emplace_back(amount, tx->txid);
        }
        for (const auto& [address, amounts] : received) {
            if (amounts.size() < 2) continue;
            const bool varies = std::any_of(amounts.begin(), amounts.end(),
                                            [&](const auto& a) { return a.first != amounts.front().first; });
            if (!varies) continue;
            std::vector<Txid> evidence;
            for (const auto& a : amounts) evidence.push_back(a.second);
            for (const auto& in : inputs) links.add(address, in, evidence);
        }
    }
    return links;
}

LinkSet one_to_one_links(const std::vector<Chain>& chains)
{
    LinkSet links(HeuristicId::oc);
    for (const auto& chain : chains) links.add_star(chain.addresses, chain.txids);
    return links;
}

LinkSet fusiform_links(const std::vector<Chain>& chains, const CorpusView& view, const CoinJoinParams& params)
{
    LinkSet links(HeuristicId::fc);
    for (const auto& chain : chains) {
        if (chain_has_coinjoin(chain, view, params)) continue;
        links.add_star(chain.addresses, chain.txids);
    }
    return links;
}

LinkSet new_input_links(const CorpusView& view, const CoinJoinParams& params)
{
    LinkSet links(HeuristicId::ni);
    std::map<std::pair<std::string, Amount>, std::vector<const Transaction*>> payers;
    for (const Transaction* tx : view.transactions()) {
        if (tx->is_confirmed() || tx->is_coinbase || detect_coinjoin(*tx, params)) continue;
        std::set<std::pair<std::string, Amount>> paid;
        for (const auto& out : tx->outputs) {
            if (out.address) paid.emplace(*out.address, out.value_sat);
        }
        for (const auto& key : paid) payers[key].push_back(tx);
    }
    for (const auto& [key, txs] : payers) {
        if (txs.size() < 2) continue;
        const auto pending = std::count_if(txs.begin(), txs.end(),
                                           [](const Transaction* tx) { return tx->status == TxStatus::pending; });
        if (pending > 1) continue;
        std::vector<std::string> inputs;
        std::vector<Txid> evidence;
        for (const Transaction* tx : txs) {
            for (const auto& a : tx->input_addresses()) inputs.push_back(a);
            evidence.push_back(tx->txid);
        }
        std::sort(inputs.begin(), inputs.end());
        inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
        std::sort(evidence.begin(), evidence.end());
        links.add_star(inputs, evidence);
    }
    return links;
}

LinkSet peel_chain_links(const std::vector<Chain>& chains)
{
    LinkSet links(HeuristicId::pc);
    for (const auto& chain : chains) links.add_star(chain.addresses, chain.txids);
    return links;
}

// ---------------------------------------------------------------------------
// HeuristicRunner
// ---------------------------------------------------------------------------

HeuristicRunner::HeuristicRunner(const CorpusView& view, HeuristicParams params) : m_view(view), m_params(params) {}

const DependencyGraph& HeuristicRunner::graph()
{
    if (!m_graph) m_graph = DependencyGraph::build(m_view);
    return *m_graph;
}

const std::vector<ConflictGroup>& HeuristicRunner::conflicts()
{
    if (!m_conflicts) m_conflicts = conflict_groups(m_view);
    return *m_conflicts;
}

PeelScope HeuristicRunner::peel_scope() const noexcept
{
    return m_view.source_set() == SourceSet::confirmed ? PeelScope::confirmed : PeelScope::mempool;
}

const std::vector<Chain>& HeuristicRunner::chains(ChainKind kind)
{
    const auto it = m_chains.find(kind);
    if (it != m_chains.end()) return it->second;
    std::vector<Chain> found;
    switch (kind) {
    case ChainKind::one_to_one:
        found = extract_one_to_one_chains(graph(), m_view, m_params.chains.one_to_one_min_len);
        break;
    case ChainKind::fusiform:
        found = extract_fusiform_chains(graph(), m_view, m_params.chains.fusiform_max_depth);
        break;
    case ChainKind::peel: {
        const PeelScope scope = peel_scope();
        found = extract_peel_chains(m_view, scope, scope == PeelScope::mempool ? &graph() : nullptr,
                                    m_params.chains.peel_min_len);
        break;
    }
    }
    return m_chains.emplace(kind, std::move(found)).first->second;
}

std::vector<ChangeAssignment> HeuristicRunner::change_assignments(HeuristicId id)
{
    std::vector<ChangeAssignment> out;
    if (id == HeuristicId::ck) return change_kappos(chains(ChainKind::peel), m_view);
    for (const Transaction* tx : m_view.transactions()) {
        std::optional<ChangeAssignment> a;
        switch (id) {
        case HeuristicId::ca: a = change_androulaki(*tx, m_view); break;
        case HeuristicId::cm: a = change_meiklejohn(*tx, m_view); break;
        case HeuristicId::cg: a = change_goldfeder(*tx, m_view, m_params.coinjoin); break;
        case HeuristicId::ce: a = change_ermilov(*tx, m_view); break;
        default: throw std::invalid_argument("not a change heuristic: " + std::string(to_string(id)));
        }
        if (a) out.push_back(std::move(*a));
    }
    std::sort(out.begin(), out.end(),
              [](const ChangeAssignment& a, const ChangeAssignment& b) { return a.txid < b.txid; });
    return out;
}

LinkSet HeuristicRunner::run(HeuristicId id)
{
    if (is_change_heuristic(id)) return links_from_changes(id, change_assignments(id), m_view);
    switch (id) {
    case HeuristicId::cs: return co_spend(m_view, m_params.coinjoin);
    case HeuristicId::rc: return replacement_change(conflicts(), m_view, m_params.coinjoin);
    case HeuristicId::oc: return one_to_one_links(chains(ChainKind::one_to_one));
    case HeuristicId::fc: return fusiform_links(chains(ChainKind::fusiform), m_view, m_params.coinjoin);
    case HeuristicId::ni: return new_input_links(m_view, m_params.coinjoin);
    case HeuristicId::pc: return peel_chain_links(chains(ChainKind::peel));
    default: break;
    }
    return LinkSet(id);
}

} // namespace txcluster
