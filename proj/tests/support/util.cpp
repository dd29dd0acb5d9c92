// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "util.h"

#include <txcluster/pipeline.h>

#include <algorithm>
#include <sstream>
#include <unistd.h>

namespace testutil {

using namespace txcluster;

Txid numbered_txid(std::uint64_t n)
{
    std::ostringstream os;
    os << std::hex << n;
    const std::string tail = os.str();
    return *Txid::from_hex(std::string(64 - tail.size(), '0') + tail);
}

Transaction CorpusBuilder::make(const Ins& ins, const Outs& outs)
{
    Transaction tx;
    tx.txid = numbered_txid(m_records.size() + 1);
    for (const auto& op : ins) tx.inputs.push_back({op, std::nullopt, std::nullopt, false});
    for (std::size_t i = 0; i < outs.size(); ++i) {
        TxOutput o;
        o.n = static_cast<std::uint32_t>(i);
        if (!outs[i].first.empty()) o.address = outs[i].first;
        o.value_sat = outs[i].second;
        tx.outputs.push_back(std::move(o));
    }
    tx.is_coinbase = ins.empty();
    return tx;
}

Txid CorpusBuilder::coinbase(const Outs& outs)
{
    return confirmed({}, outs);
}

Txid CorpusBuilder::confirmed(const Ins& ins, const Outs& outs)
{
    Transaction tx = make(ins, outs);
    tx.status = TxStatus::confirmed;
    tx.block_height = m_height++;
    tx.block_index = 0;
    check_transaction(tx);
    m_records.push_back(tx);
    return tx.txid;
}

Txid CorpusBuilder::confirmed_seen(const Ins& ins, const Outs& outs, Timestamp time, Timestamp removetime,
                                   bool replaceable)
{
    Transaction tx = make(ins, outs);
    tx.status = TxStatus::confirmed;
    tx.block_height = m_height++;
    tx.block_index = 0;
    MempoolMeta m;
    m.time = time;
    m.removetime = removetime;
    m.replaceable = replaceable;
    tx.mempool = m;
    check_transaction(tx);
    m_records.push_back(tx);
    return tx.txid;
}

Txid CorpusBuilder::unconfirmed(const Ins& ins, const Outs& outs, Timestamp time, std::optional<Timestamp> removetime,
                                bool replaceable, std::vector<Txid> depends)
{
    Transaction tx = make(ins, outs);
    tx.status = removetime ? TxStatus::failed : TxStatus::pending;
    MempoolMeta m;
    m.time = time;
    m.removetime = removetime;
    m.replaceable = replaceable;
    std::sort(depends.begin(), depends.end());
    m.depends = std::move(depends);
    tx.mempool = m;
    check_transaction(tx);
    m_records.push_back(tx);
    return tx.txid;
}

TxStore CorpusBuilder::store() const
{
    return make_store(m_records);
}

std::vector<Transaction> records_of(const std::string& jsonl)
{
    std::istringstream in(jsonl);
    return read_records(in, "<memory>");
}

TxStore store_of(const std::string& jsonl)
{
    return make_store(records_of(jsonl));
}

const Transaction* paying(const TxStore& store, const std::string& address)
{
    for (const auto& tx : store.transactions()) {
        for (const auto& out : tx.outputs) {
            if (out.address == address) return &tx;
        }
    }
    return nullptr;
}

std::vector<std::vector<std::string>> multi_clusters(const Clustering& c)
{
    std::vector<std::vector<std::string>> out;
    for (auto& cluster : c.clusters()) {
        if (cluster.size() >= 2) out.push_back(std::move(cluster));
    }
    return out;
}

Clustering cluster(const TxStore& store, SourceSet set, const std::vector<HeuristicId>& ids,
                   const HeuristicParams& params)
{
    const CorpusView view(store, set);
    HeuristicRunner runner(view, params);
    std::vector<LinkSet> links;
    for (const HeuristicId id : ids) links.push_back(runner.run(id));
    return Clustering::build(links, store.all_addresses());
}

ShapeWeights weights_for(std::uint64_t seed)
{
    ShapeWeights w;
    switch (seed % 4) {
    case 0: break;
    case 1: // chain heavy
        w.one_to_one = 12;
        w.peel = 12;
        w.fusiform = 10;
        break;
    case 2: // replacement heavy
        w.replacement = 20;
        w.pending_payment = 20;
        w.coinjoin = 5;
        break;
    case 3: // mostly confirmed
        w.pending_payment = 2;
        w.replacement = 2;
        w.payment = 40;
        break;
    }
    return w;
}

std::vector<std::vector<std::string>> random_groups(std::mt19937_64& rng, std::size_t pool)
{
    std::vector<std::string> addresses;
    for (std::size_t i = 0; i < pool; ++i) {
        if (rng() % 4 != 0) addresses.push_back("a" + std::to_string(i));
    }
    std::shuffle(addresses.begin(), addresses.end(), rng);
    std::vector<std::vector<std::string>> groups;
    for (std::size_t i = 0; i < addresses.size();) {
        const std::size_t len = std::min<std::size_t>(addresses.size() - i, 1 + rng() % (rng() % 3 == 0 ? 8 : 3));
        groups.emplace_back(addresses.begin() + i, addresses.begin() + i + len);
        i += len;
    }
    return groups;
}

std::filesystem::path temp_dir(std::string_view name)
{
    static unsigned counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("txcluster-" + std::string(name) + "-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testutil
