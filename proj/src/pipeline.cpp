// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/pipeline.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace txcluster {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::trunc)
{
    std::ofstream out(path, std::ios::binary | std::ios::out | mode);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

StoreStats compute_stats(const TxStore& store)
{
    StoreStats s;
    s.transactions = store.size();
    for (const auto& tx : store.transactions()) {
        switch (tx.status) {
        case TxStatus::confirmed: ++s.confirmed; break;
        case TxStatus::failed: ++s.failed; break;
        case TxStatus::pending: ++s.pending; break;
        }
    }
    s.addresses = store.all_addresses().size();
    s.unconfirmed_only_addresses = s.addresses - store.confirmed_addresses().size();
    s.unresolvable_inputs = store.unresolvable_inputs();
    return s;
}

std::string stats_to_json(const StoreStats& s)
{
    nlohmann::ordered_json j;
    j["transactions"] = s.transactions;
    j["confirmed"] = s.confirmed;
    j["failed"] = s.failed;
    j["pending"] = s.pending;
    j["addresses"] = s.addresses;
    j["unconfirmed_only_addresses"] = s.unconfirmed_only_addresses;
    j["unresolvable_inputs"] = s.unresolvable_inputs;
    return j.dump();
}

std::vector<Transaction> read_records(std::istream& in, const std::string& name)
{
    std::vector<Transaction> records;
    std::vector<std::string> problems;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            records.push_back(parse_transaction(line));
        } catch (const Error& e) {
            problems.push_back(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!problems.empty()) throw IngestError(std::move(problems));
    return records;
}

TxStore make_store(std::vector<Transaction> records)
{
    TxStore store;
    for (auto& tx : records) store.add(std::move(tx));
    store.finalize();
    return store;
}

// ---------------------------------------------------------------------------
// StoreDir
// ---------------------------------------------------------------------------

bool StoreDir::exists() const
{
    return fs::is_regular_file(m_root / "MANIFEST.json");
}

TxStore StoreDir::load() const
{
    if (!exists()) throw Error("no store at " + m_root.string() + " (run ingest first)");
    std::ifstream in(records_path(), std::ios::binary);
    if (!in) throw Error("cannot open " + records_path().string());
    return make_store(read_records(in, records_path().string()));
}

StoreStats StoreDir::ingest(const std::vector<fs::path>& files)
{
    std::vector<Transaction> existing;
    if (exists()) {
        std::ifstream in(records_path(), std::ios::binary);
        existing = read_records(in, records_path().string());
    }

    std::vector<Transaction> incoming;
    std::vector<std::string> names;
    std::vector<std::size_t> origin; // index into names, per incoming record
    std::vector<std::string> problems;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            problems.push_back(file.string() + ": cannot open");
            continue;
        }
        try {
            auto records = read_records(in, file.string());
            for (auto& r : records) {
                incoming.push_back(std::move(r));
                origin.push_back(names.size());
            }
        } catch (const IngestError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
        names.push_back(file.string());
    }
    if (!problems.empty()) throw IngestError(std::move(problems));

    std::vector<std::string> lines;
    lines.reserve(incoming.size());
    for (const auto& tx : incoming) lines.push_back(serialize_transaction(tx));

    TxStore store;
    const std::uint64_t record_count = existing.size() + incoming.size();
    try {
        for (auto& tx : existing) store.add(std::move(tx));
        for (std::size_t i = 0; i < incoming.size(); ++i) {
            try {
                store.add(std::move(incoming[i]));
            } catch (const Error& e) {
                throw IngestError({names[origin[i]] + ": " + e.what()});
            }
        }
        store.finalize();
    } catch (const IngestError&) {
        throw;
    } catch (const Error& e) {
        throw IngestError({std::string("corpus rejected: ") + e.what()});
    }

    fs::create_directories(m_root / "index");
    {
        auto out = open_out(records_path(), std::ios::app);
        for (const auto& l : lines) out << l << '\n';
        if (!out) throw Error("write failed: " + records_path().string());
    }
    write_indexes(store, record_count);
    return compute_stats(store);
}

void StoreDir::write_indexes(const TxStore& store, std::uint64_t records) const
{
    const auto txs = store.transactions();
    {
        std::vector<std::pair<const std::string*, const Txid*>> rows;
        for (const auto& tx : txs) {
            for (const auto& in : tx.inputs) {
                if (in.address) rows.emplace_back(&*in.address, &tx.txid);
            }
            for (const auto& o : tx.outputs) {
                if (o.address) rows.emplace_back(&*o.address, &tx.txid);
            }
        }
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return std::tie(*a.first, *a.second) < std::tie(*b.first, *b.second);
        });
        rows.erase(std::unique(rows.begin(), rows.end(),
                               [](const auto& a, const auto& b) { return *a.first == *b.first && *a.second == *b.second; }),
                   rows.end());
        auto out = open_out(m_root / "index" / "addresses.tsv");
        for (const auto& [address, txid] : rows) out << *address << '\t' << txid->to_hex() << '\n';
    }
    {
        auto out = open_out(m_root / "index" / "spenders.tsv");
        for (const auto& tx : txs) {
            for (const auto& o : tx.outputs) {
                for (const auto& s : o.spent_tx) out << tx.txid.to_hex() << ':' << o.n << '\t' << s.to_hex() << '\n';
            }
        }
    }
    {
        std::vector<const Transaction*> pooled;
        for (const auto& tx : txs) {
            if (tx.mempool) pooled.push_back(&tx);
        }
        std::sort(pooled.begin(), pooled.end(), [](const Transaction* a, const Transaction* b) {
            return std::tie(a->mempool->time, a->txid) < std::tie(b->mempool->time, b->txid);
        });
        auto out = open_out(m_root / "index" / "time.tsv");
        for (const Transaction* tx : pooled) {
            out << tx->mempool->time << '\t';
            if (tx->mempool->removetime) {
                out << *tx->mempool->removetime;
            } else {
                out << '-';
            }
            out << '\t' << tx->txid.to_hex() << '\n';
        }
    }
    nlohmann::ordered_json manifest;
    manifest["format"] = "txcluster-store";
    manifest["version"] = 1;
    manifest["records"] = records;
    manifest["transactions"] = store.size();
    auto out = open_out(m_root / "MANIFEST.json");
    out << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Clustering runs
// ---------------------------------------------------------------------------

ClusterRun run_cluster(const TxStore& store, const RunConfig& config)
{
    validate_config(config);
    const CorpusView view(store, config.set);
    HeuristicRunner runner(view, config.params);
    ClusterRun run;
    run.empty_source = view.empty();
    for (const HeuristicId id : config.heuristics) run.links.push_back(runner.run(id));

    Provenance provenance;
    provenance.tag = provenance_tag(config);
    for (const HeuristicId id : config.heuristics) provenance.heuristics.emplace_back(to_string(id));
    auto universe = config.universe == UniverseKind::confirmed ? store.confirmed_addresses() : store.all_addresses();
    run.clustering = Clustering::build(run.links, std::move(universe), std::move(provenance));
    run.count = entity_count(run.clustering);
    return run;
}

void write_cluster_run(const ClusterRun& run, const RunConfig& config)
{
    if (!config.out.empty()) {
        {
            auto out = open_out(config.out);
            export_clustering(out, run.clustering, config.header);
            if (!out) throw Error("write failed: " + config.out);
        }
        auto meta = open_out(config.out + ".meta.json");
        meta << provenance_to_json(run.clustering.provenance()) << '\n';
    }
    if (!config.links_out.empty()) {
        auto out = open_out(config.links_out);
        for (const auto& set : run.links) write_links_jsonl(out, set);
    }
}

Clustering load_clustering_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    Clustering c = import_clustering(in);
    const fs::path meta = path.string() + ".meta.json";
    if (fs::is_regular_file(meta)) {
        c.set_provenance(provenance_from_json(read_file(meta)));
    } else {
        c.set_provenance({path.filename().string(), {}});
    }
    return c;
}

} // namespace txcluster
