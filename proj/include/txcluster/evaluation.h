// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_EVALUATION_H
#define TXCLUSTER_EVALUATION_H

#include <txcluster/clustering.h>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace txcluster {

enum class Category { add, merge, subset, new_cluster };

std::string_view to_string(Category c) noexcept;

/**
 * Relates a multi-address cluster to a base clustering. Only base clusters
 * with two or more members count: none touched is NEW, two or more is MERGE,
 * exactly one is SUBSET when it contains the whole cluster and ADD otherwise.
 *
 * Throws SingletonCluster for clusters with fewer than two addresses.
 */
Category classify_cluster(const std::vector<std::string>& cluster, const Clustering& base);

struct ImprovementReport {
    std::string base;
    std::string next;
    std::uint64_t clusters{0};
    std::uint64_t add{0};
    std::uint64_t merge{0};
    std::uint64_t subset{0};
    std::uint64_t new_count{0};
    //! (cluster id, category) for every classified cluster, ordered by id.
    std::vector<std::pair<std::string, Category>> per_cluster;
};

/** Classifies every non-singleton cluster of @p next against @p base. */
ImprovementReport compare(const Clustering& base, const Clustering& next, std::string base_name = "",
                          std::string next_name = "");

std::string report_to_json(const ImprovementReport& report);
/** {"cluster","category"} per line. */
void write_per_cluster_jsonl(std::ostream& os, const ImprovementReport& report);

/** address -> entity label. Labels never feed back into clustering. */
using LabelSet = std::map<std::string, std::string>;

/**
 * CSV "address,label" with optional "address,label" header. Throws
 * MalformedLabelFile on bad lines or an address given two labels.
 */
LabelSet load_labels(std::istream& is);

struct LabelReport {
    std::uint64_t clusters_with_labels{0};
    std::uint64_t pure{0};
    std::uint64_t impure{0};
    //! label -> number of clusters its addresses are spread over
    std::map<std::string, std::uint64_t> fragmentation;
};

/** Labeled addresses missing from @p c are treated as singleton clusters. */
LabelReport validate_labels(const Clustering& c, const LabelSet& labels);

std::string label_report_to_json(const LabelReport& report);

} // namespace txcluster

#endif // TXCLUSTER_EVALUATION_H
