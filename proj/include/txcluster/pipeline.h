// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_PIPELINE_H
#define TXCLUSTER_PIPELINE_H

#include <txcluster/clustering.h>
#include <txcluster/heuristics.h>
#include <txcluster/run_config.h>
#include <txcluster/tx_store.h>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace txcluster {

struct StoreStats {
    std::uint64_t transactions{0};
    std::uint64_t confirmed{0};
    std::uint64_t failed{0};
    std::uint64_t pending{0};
    std::uint64_t addresses{0};
    //! Addresses that never occur in a confirmed transaction.
    std::uint64_t unconfirmed_only_addresses{0};
    std::uint64_t unresolvable_inputs{0};

    bool operator==(const StoreStats&) const = default;
};

StoreStats compute_stats(const TxStore& store);
std::string stats_to_json(const StoreStats& stats);

/**
 * Parses ingest records from @p in. Every bad line is reported as
 * "<name>:<line>: <message>" and the whole batch is rejected with
 * IngestError. Blank lines are skipped.
 */
std::vector<Transaction> read_records(std::istream& in, const std::string& name);

/** Loads records into a new store and finalizes it. */
TxStore make_store(std::vector<Transaction> records);

/**
 * On-disk store: an append-only records.jsonl of canonical observations,
 * a MANIFEST.json, and rebuilt sidecar indexes under index/
 * (addresses.tsv, spenders.tsv, time.tsv).
 */
class StoreDir
{
public:
    explicit StoreDir(std::filesystem::path root) : m_root(std::move(root)) {}

    const std::filesystem::path& root() const noexcept { return m_root; }
    bool exists() const;

    /** Reads every record and finalizes. A missing store is an Error. */
    TxStore load() const;

    /**
     * Validates @p files together with the existing records and appends
     * them only if everything parses, unifies and finalizes.
     * Throws IngestError listing every problem.
     */
    StoreStats ingest(const std::vector<std::filesystem::path>& files);

private:
    std::filesystem::path records_path() const { return m_root / "records.jsonl"; }
    void write_indexes(const TxStore& store, std::uint64_t records) const;

    std::filesystem::path m_root;
};

struct ClusterRun {
    Clustering clustering;
    EntityCount count;
    std::vector<LinkSet> links;
    bool empty_source{false};
};

/** Runs the configured heuristics on the configured source set. */
ClusterRun run_cluster(const TxStore& store, const RunConfig& config);

/** Writes the cluster CSV, its provenance sidecar and the optional links file. */
void write_cluster_run(const ClusterRun& run, const RunConfig& config);

/** Reads a cluster CSV plus its "<csv>.meta.json" sidecar when present. */
Clustering load_clustering_file(const std::filesystem::path& path);

} // namespace txcluster

#endif // TXCLUSTER_PIPELINE_H
