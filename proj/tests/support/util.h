// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_TEST_UTIL_H
#define TXCLUSTER_TEST_UTIL_H

#include <txcluster/clustering.h>
#include <txcluster/heuristics.h>
#include <txcluster/synth.h>
#include <txcluster/tx_store.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace testutil {

using Outs = std::vector<std::pair<std::string, txcluster::Amount>>;
using Ins = std::vector<txcluster::OutPoint>;

/** Hand-built corpora. Txids are sequential; each confirmed tx gets its own block. */
class CorpusBuilder
{
public:
    txcluster::Txid coinbase(const Outs& outs);
    txcluster::Txid confirmed(const Ins& ins, const Outs& outs);
    /** Confirmed, and also seen in a pool from @p time until @p removetime. */
    txcluster::Txid confirmed_seen(const Ins& ins, const Outs& outs, txcluster::Timestamp time,
                                   txcluster::Timestamp removetime, bool replaceable = false);
    txcluster::Txid unconfirmed(const Ins& ins, const Outs& outs, txcluster::Timestamp time,
                                std::optional<txcluster::Timestamp> removetime = std::nullopt,
                                bool replaceable = false, std::vector<txcluster::Txid> depends = {});

    txcluster::Transaction& last() { return m_records.back(); }
    const std::vector<txcluster::Transaction>& records() const { return m_records; }
    txcluster::TxStore store() const;

private:
    txcluster::Transaction make(const Ins& ins, const Outs& outs);
    std::vector<txcluster::Transaction> m_records;
    std::int64_t m_height{100};
};

txcluster::Txid numbered_txid(std::uint64_t n);

std::vector<txcluster::Transaction> records_of(const std::string& jsonl);
txcluster::TxStore store_of(const std::string& jsonl);

/** First transaction (in corpus order) with an output paying @p address. */
const txcluster::Transaction* paying(const txcluster::TxStore& store, const std::string& address);

/** Clusters with two or more members, each sorted, in id order. */
std::vector<std::vector<std::string>> multi_clusters(const txcluster::Clustering& c);

/** Runs @p ids on @p set and clusters over every address in the store. */
txcluster::Clustering cluster(const txcluster::TxStore& store, txcluster::SourceSet set,
                              const std::vector<txcluster::HeuristicId>& ids,
                              const txcluster::HeuristicParams& params = {});

/** Shape mix that varies with @p seed so chain and RBF shapes get exercised. */
txcluster::ShapeWeights weights_for(std::uint64_t seed);

/** Random partition of a prefix of "a0".."a<pool-1>", mostly small clusters. */
std::vector<std::vector<std::string>> random_groups(std::mt19937_64& rng, std::size_t pool);

/** Fresh empty directory under the system temp dir. */
std::filesystem::path temp_dir(std::string_view name);

} // namespace testutil

#endif // TXCLUSTER_TEST_UTIL_H
