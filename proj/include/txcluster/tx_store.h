// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_TX_STORE_H
#define TXCLUSTER_TX_STORE_H

#include <txcluster/txmodel.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace txcluster {

/** Which transactions count as "earlier use" of an address. */
enum class FreshUniverse { confirmed_only, confirmed_and_unconfirmed };

/** Subsets of the corpus a heuristic run may be restricted to. */
enum class SourceSet { confirmed, unconfirmed, failed, all };

std::string_view to_string(SourceSet set) noexcept;
std::optional<SourceSet> parse_source_set(std::string_view text) noexcept;

/**
 * Copies address and value of each referenced output into @p tx's inputs
 * and records @p tx as a spender of those outputs. Inputs whose outpoint
 * cannot be found are flagged unresolvable; the transaction is kept.
 *
 * @p lookup returns a mutable pointer to a stored transaction or nullptr.
 * Returns the number of unresolvable inputs.
 */
std::size_t resolve_inputs(Transaction& tx, const std::function<Transaction*(const Txid&)>& lookup);

/**
 * In-memory corpus. Observations are added, then finalize() derives
 * statuses, resolves inputs and sorts everything into TxOrder. After
 * finalize() the store is immutable and safe for concurrent readers.
 */
class TxStore
{
public:
    TxStore();
    ~TxStore();
    TxStore(TxStore&&) noexcept;
    TxStore& operator=(TxStore&&) noexcept;

    /**
     * Adds one observation. A txid seen before is unified with the earlier
     * observation: identical content is a no-op, mempool data from several
     * nodes is combined, and conflicting content throws InvariantViolation.
     */
    void add(Transaction tx);

    void finalize();
    bool finalized() const noexcept { return m_finalized; }

    /** All transactions in TxOrder. */
    std::span<const Transaction> transactions() const noexcept { return m_txs; }
    std::size_t size() const noexcept { return m_txs.size(); }

    const Transaction* find(const Txid& txid) const;
    /** Position of @p txid in TxOrder; throws UnknownTransaction. */
    std::size_t position(const Txid& txid) const;

    /**
     * True iff @p address occurs in no transaction strictly before @p tx
     * within @p universe. Throws UnknownTransaction if @p tx is not stored.
     */
    bool is_fresh(std::string_view address, const Transaction& tx, FreshUniverse universe) const;

    std::size_t unresolvable_inputs() const noexcept { return m_unresolvable; }

    /** Sorted distinct addresses seen in confirmed transactions. */
    std::vector<std::string> confirmed_addresses() const;
    /** Sorted distinct addresses seen anywhere. */
    std::vector<std::string> all_addresses() const;

private:
    struct FirstSeen {
        std::uint32_t any;
        std::uint32_t confirmed;
    };
    using FreshIndex = std::unordered_map<std::string, FirstSeen>;

    const FreshIndex& fresh_index() const;

    std::vector<Transaction> m_txs;
    std::unordered_map<Txid, std::size_t, TxidHasher> m_index;
    std::size_t m_unresolvable{0};
    bool m_finalized{false};

    mutable std::unique_ptr<std::once_flag> m_fresh_once;
    mutable std::unique_ptr<FreshIndex> m_fresh;
};

/**
 * Read-only subset of a finalized store, kept in TxOrder. Every analysis
 * operation works on a view, so that restricting a run to confirmed or
 * unconfirmed data is a property of the view rather than of each heuristic.
 */
class CorpusView
{
public:
    CorpusView(const TxStore& store, SourceSet set);

    const TxStore& store() const noexcept { return *m_store; }
    SourceSet source_set() const noexcept { return m_set; }
    std::span<const Transaction* const> transactions() const noexcept { return m_txs; }
    std::size_t size() const noexcept { return m_txs.size(); }
    bool empty() const noexcept { return m_txs.empty(); }

    /** Member lookup; nullptr when @p txid is not in the view. */
    const Transaction* find(const Txid& txid) const;

    /** Confirmed-only views never see mempool data. */
    const MempoolMeta* mempool(const Transaction& tx) const noexcept;

    FreshUniverse fresh_universe() const noexcept;
    bool is_fresh(std::string_view address, const Transaction& tx) const;

private:
    const TxStore* m_store;
    SourceSet m_set;
    std::vector<const Transaction*> m_txs;
    std::unordered_map<Txid, const Transaction*, TxidHasher> m_index;
};

} // namespace txcluster

#endif // TXCLUSTER_TX_STORE_H
