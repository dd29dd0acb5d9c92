// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/tx_store.h>

#include <txcluster/errors.h>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace txcluster {

namespace {

constexpr std::uint32_t NEVER = std::numeric_limits<std::uint32_t>::max();

std::vector<Txid> sorted_union(const std::vector<Txid>& a, const std::vector<Txid>& b)
{
    std::vector<Txid> out(a);
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

[[noreturn]] void conflict(const Transaction& tx, const std::string& field)
{
    throw InvariantViolation(field, "conflicting observations of transaction " + tx.txid.to_hex());
}

template <typename T>
void unify_optional(std::optional<T>& into, const std::optional<T>& from, const Transaction& tx, const std::string& field)
{
    if (!from) return;
    if (!into) {
        into = from;
    } else if (*into != *from) {
        conflict(tx, field);
    }
}

/** Folds a second observation of the same txid into @p into. */
void unify(Transaction& into, Transaction&& from)
{
    if (into.is_coinbase != from.is_coinbase) conflict(into, "is_coinbase");
    if (into.inputs.size() != from.inputs.size()) conflict(into, "inputs");
    for (std::size_t i = 0; i < into.inputs.size(); ++i) {
        auto& a = into.inputs[i];
        const auto& b = from.inputs[i];
        const std::string path = "inputs[" + std::to_string(i) + "]";
        if (a.prevout != b.prevout) conflict(into, path);
        unify_optional(a.address, b.address, into, path + ".address");
        unify_optional(a.value_sat, b.value_sat, into, path + ".value_sat");
    }
    if (into.outputs.size() != from.outputs.size()) conflict(into, "outputs");
    for (std::size_t i = 0; i < into.outputs.size(); ++i) {
        const auto& a = into.outputs[i];
        const auto& b = from.outputs[i];
        if (a.address != b.address || a.value_sat != b.value_sat) {
            conflict(into, "outputs[" + std::to_string(i) + "]");
        }
    }

    if (from.is_confirmed()) {
        if (into.is_confirmed()) {
            if (into.block_height != from.block_height) conflict(into, "block_height");
            if (into.block_index != from.block_index) conflict(into, "block_index");
        } else {
            into.status = TxStatus::confirmed;
            into.block_height = from.block_height;
            into.block_index = from.block_index;
        }
    }

    if (!from.mempool) return;
    if (!into.mempool) {
        into.mempool = std::move(from.mempool);
        return;
    }
    auto& a = *into.mempool;
    const auto& b = *from.mempool;
    if (a.fee_sat != b.fee_sat) conflict(into, "mempool.fee_sat");
    if (a.vsize != b.vsize) conflict(into, "mempool.vsize");
    a.time = std::min(a.time, b.time);
    // Still present in any pool means not removed.
    if (a.removetime && b.removetime) {
        a.removetime = std::max(*a.removetime, *b.removetime);
    } else {
        a.removetime.reset();
    }
    a.depends = sorted_union(a.depends, b.depends);
    a.spentby = sorted_union(a.spentby, b.spentby);
    a.replaceable = a.replaceable || b.replaceable;
}

} // namespace

CycleDetected::CycleDetected(std::vector<std::string> txids)
    : Error([&] {
          std::string msg = "dependency cycle among " + std::to_string(txids.size()) + " transactions:";
          for (const auto& id : txids) msg += " " + id;
          return msg;
      }()),
      m_txids(std::move(txids))
{
}

std::string_view to_string(SourceSet set) noexcept
{
    switch (set) {
    case SourceSet::confirmed: return "confirmed";
    case SourceSet::unconfirmed: return "unconfirmed";
    case SourceSet::failed: return "failed";
    case SourceSet::all: return "all";
    }
    return "all";
}

std::optional<SourceSet> parse_source_set(std::string_view text) noexcept
{
    if (text == "confirmed") return SourceSet::confirmed;
    if (text == "unconfirmed") return SourceSet::unconfirmed;
    if (text == "failed") return SourceSet::failed;
    if (text == "all") return SourceSet::all;
    return std::nullopt;
}

std::size_t resolve_inputs(Transaction& tx, const std::function<Transaction*(const Txid&)>& lookup)
{
    std::size_t unresolvable = 0;
    for (auto& in : tx.inputs) {
        Transaction* parent = lookup(in.prevout.txid);
        if (!parent || parent == &tx || in.prevout.vout >= parent->outputs.size()) {
            in.unresolvable = true;
            ++unresolvable;
            continue;
        }
        auto& out = parent->outputs[in.prevout.vout];
        in.unresolvable = false;
        in.address = out.address;
        in.value_sat = out.value_sat;
        if (std::find(out.spent_tx.begin(), out.spent_tx.end(), tx.txid) == out.spent_tx.end()) {
            out.spent_tx.push_back(tx.txid);
        }
    }
    return unresolvable;
}

// ---------------------------------------------------------------------------
// TxStore
// ---------------------------------------------------------------------------

TxStore::TxStore() : m_fresh_once(std::make_unique<std::once_flag>()) {}
TxStore::~TxStore() = default;
TxStore::TxStore(TxStore&&) noexcept = default;
TxStore& TxStore::operator=(TxStore&&) noexcept = default;

void TxStore::add(Transaction tx)
{
    if (m_finalized) throw std::logic_error("TxStore::add after finalize");
    const auto [it, inserted] = m_index.try_emplace(tx.txid, m_txs.size());
    if (inserted) {
        m_txs.push_back(std::move(tx));
    } else {
        unify(m_txs[it->second], std::move(tx));
    }
}

void TxStore::finalize()
{
    if (m_finalized) return;

    for (auto& tx : m_txs) {
        if (tx.is_confirmed()) continue;
        tx.status = tx.mempool && tx.mempool->removetime ? TxStatus::failed : TxStatus::pending;
    }

    std::sort(m_txs.begin(), m_txs.end(),
              [](const Transaction& a, const Transaction& b) { return order_key(a) < order_key(b); });
    m_index.clear();
    m_index.reserve(m_txs.size());
    for (std::size_t i = 0; i < m_txs.size(); ++i) m_index.emplace(m_txs[i].txid, i);

    for (auto& tx : m_txs) {
        for (auto& out : tx.outputs) out.spent_tx.clear();
    }
    const auto lookup = [this](const Txid& id) -> Transaction* {
        const auto it = m_index.find(id);
        return it == m_index.end() ? nullptr : &m_txs[it->second];
    };
    m_unresolvable = 0;
    for (auto& tx : m_txs) m_unresolvable += resolve_inputs(tx, lookup);

    for (auto& tx : m_txs) {
        for (auto& out : tx.outputs) {
            std::sort(out.spent_tx.begin(), out.spent_tx.end());
            std::size_t confirmed_spenders = 0;
            for (const auto& spender : out.spent_tx) {
                if (m_txs[m_index.at(spender)].is_confirmed()) ++confirmed_spenders;
            }
            if (confirmed_spenders > 1) {
                throw InvariantViolation("inputs", "output " + tx.txid.to_hex() + ":" + std::to_string(out.n) +
                                                       " is spent by more than one confirmed transaction");
            }
        }
    }
    m_finalized = true;
}

const Transaction* TxStore::find(const Txid& txid) const
{
    const auto it = m_index.find(txid);
    return it == m_index.end() ? nullptr : &m_txs[it->second];
}

std::size_t TxStore::position(const Txid& txid) const
{
    const auto it = m_index.find(txid);
    if (it == m_index.end()) throw UnknownTransaction(txid.to_hex());
    return it->second;
}

const TxStore::FreshIndex& TxStore::fresh_index() const
{
    std::call_once(*m_fresh_once, [this] {
        auto index = std::make_unique<FreshIndex>();
        index->reserve(m_txs.size() * 2);
        const auto note = [&](const std::optional<std::string>& address, std::uint32_t pos, bool confirmed) {
            if (!address) return;
            auto [it, inserted] = index->try_emplace(*address, FirstSeen{pos, confirmed ? pos : NEVER});
            if (!inserted && confirmed && it->second.confirmed == NEVER) it->second.confirmed = pos;
        };
        for (std::size_t i = 0; i < m_txs.size(); ++i) {
            const auto& tx = m_txs[i];
            const auto pos = static_cast<std::uint32_t>(i);
            for (const auto& in : tx.inputs) note(in.address, pos, tx.is_confirmed());
            for (const auto& out : tx.outputs) note(out.address, pos, tx.is_confirmed());
        }
        m_fresh = std::move(index);
    });
    return *m_fresh;
}

bool TxStore::is_fresh(std::string_view address, const Transaction& tx, FreshUniverse universe) const
{
    const std::size_t pos = position(tx.txid);
    const auto& index = fresh_index();
    const auto it = index.find(std::string(address));
    if (it == index.end()) return true;
    const std::uint32_t first =
        universe == FreshUniverse::confirmed_only ? it->second.confirmed : it->second.any;
    return first == NEVER || first >= pos;
}

std::vector<std::string> TxStore::confirmed_addresses() const
{
    std::vector<std::string> out;
    for (const auto& tx : m_txs) {
        if (!tx.is_confirmed()) continue;
        for (const auto& in : tx.inputs) if (in.address) out.push_back(*in.address);
        for (const auto& o : tx.outputs) if (o.address) out.push_back(*o.address);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> TxStore::all_addresses() const
{
    std::vector<std::string> out;
    for (const auto& tx : m_txs) {
        for (const auto& in : tx.inputs) if (in.address) out.push_back(*in.address);
        for (const auto& o : tx.outputs) if (o.address) out.push_back(*o.address);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// CorpusView
// ---------------------------------------------------------------------------

CorpusView::CorpusView(const TxStore& store, SourceSet set) : m_store(&store), m_set(set)
{
    if (!store.finalized()) throw std::logic_error("CorpusView over a store that is not finalized");
    for (const auto& tx : store.transactions()) {
        bool keep = false;
        switch (set) {
        case SourceSet::confirmed: keep = tx.is_confirmed(); break;
        case SourceSet::unconfirmed: keep = tx.is_unconfirmed(); break;
        case SourceSet::failed: keep = tx.status == TxStatus::failed; break;
        case SourceSet::all: keep = true; break;
        }
        if (keep) m_txs.push_back(&tx);
    }
    m_index.reserve(m_txs.size());
    for (const auto* tx : m_txs) m_index.emplace(tx->txid, tx);
}

const Transaction* CorpusView::find(const Txid& txid) const
{
    const auto it = m_index.find(txid);
    return it == m_index.end() ? nullptr : it->second;
}

const MempoolMeta* CorpusView::mempool(const Transaction& tx) const noexcept
{
    if (m_set == SourceSet::confirmed || !tx.mempool) return nullptr;
    return &*tx.mempool;
}

FreshUniverse CorpusView::fresh_universe() const noexcept
{
    return m_set == SourceSet::confirmed ? FreshUniverse::confirmed_only : FreshUniverse::confirmed_and_unconfirmed;
}

bool CorpusView::is_fresh(std::string_view address, const Transaction& tx) const
{
    return m_store->is_fresh(address, tx, fresh_universe());
}

} // namespace txcluster
