// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_TXMODEL_H
#define TXCLUSTER_TXMODEL_H

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace txcluster {

/** Integer satoshis. 1 BTC = 100,000,000 sat. No floating point touches values. */
using Amount = std::int64_t;

/** Unix seconds. */
using Timestamp = std::int64_t;

/**
 * 32-byte transaction id, written as 64 lowercase hex characters.
 * Bytes are kept in the same order as the hex text so that byte-wise
 * comparison equals lexicographic comparison of the hex string.
 */
class Txid
{
public:
    static constexpr std::size_t SIZE = 32;

    constexpr Txid() = default;

    /** Returns nullopt unless @p hex is exactly 64 lowercase hex digits. */
    static std::optional<Txid> from_hex(std::string_view hex);

    std::string to_hex() const;
    const std::array<std::uint8_t, SIZE>& bytes() const noexcept { return m_data; }

    friend auto operator<=>(const Txid&, const Txid&) = default;

private:
    std::array<std::uint8_t, SIZE> m_data{};
};

struct TxidHasher {
    std::size_t operator()(const Txid& txid) const noexcept;
};

struct OutPoint {
    Txid txid;
    std::uint32_t vout{0};

    friend auto operator<=>(const OutPoint&, const OutPoint&) = default;
};

struct OutPointHasher {
    std::size_t operator()(const OutPoint& op) const noexcept;
};

struct TxInput {
    OutPoint prevout;
    std::optional<std::string> address;
    std::optional<Amount> value_sat;
    //! Set by resolution when the referenced output is not in the corpus.
    bool unresolvable{false};

    bool operator==(const TxInput&) const = default;
};

struct TxOutput {
    std::uint32_t n{0};
    //! Absent for nonstandard and OP_RETURN scripts.
    std::optional<std::string> address;
    Amount value_sat{0};
    //! Distinct, sorted ids of every transaction spending this output.
    std::vector<Txid> spent_tx;

    bool is_spent() const noexcept { return !spent_tx.empty(); }
    bool operator==(const TxOutput&) const = default;
};

/** Fields a node reports about a transaction while it sits in its mempool. */
struct MempoolMeta {
    Amount fee_sat{0};
    std::int64_t vsize{1};
    Timestamp time{0};
    std::optional<Timestamp> removetime;
    std::vector<Txid> depends;
    std::vector<Txid> spentby;
    bool replaceable{false};

    bool operator==(const MempoolMeta&) const = default;
};

enum class TxStatus { confirmed, failed, pending };

std::string_view to_string(TxStatus status) noexcept;
std::optional<TxStatus> parse_status(std::string_view text) noexcept;

struct Transaction {
    Txid txid;
    bool is_coinbase{false};
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    TxStatus status{TxStatus::pending};
    std::optional<std::int64_t> block_height;
    std::optional<std::uint32_t> block_index;
    std::optional<MempoolMeta> mempool;

    bool is_confirmed() const noexcept { return status == TxStatus::confirmed; }
    bool is_unconfirmed() const noexcept { return status != TxStatus::confirmed; }

    /** Sorted distinct addresses of resolved inputs. */
    std::vector<std::string> input_addresses() const;
    /** Sorted distinct addresses of outputs that carry one. */
    std::vector<std::string> output_addresses() const;

    bool operator==(const Transaction&) const = default;
};

/**
 * Parses one line of the JSON-lines ingest format and checks the
 * record-level invariants.
 *
 * Throws MalformedRecord or InvariantViolation naming the offending field.
 */
Transaction parse_transaction(std::string_view record);

/** Canonical single-line JSON for @p tx; the inverse of parse_transaction. */
std::string serialize_transaction(const Transaction& tx);

/** Checks every record-level invariant of an already-built transaction. */
void check_transaction(const Transaction& tx);

/**
 * Total order key. Confirmed transactions come first by (height, index);
 * unconfirmed ones follow by mempool entry time. Ties break on txid.
 */
struct TxOrderKey {
    int tier{0};
    std::int64_t major{0};
    std::int64_t minor{0};
    Txid txid;

    friend auto operator<=>(const TxOrderKey&, const TxOrderKey&) = default;
};

TxOrderKey order_key(const Transaction& tx) noexcept;

} // namespace txcluster

#endif // TXCLUSTER_TXMODEL_H
