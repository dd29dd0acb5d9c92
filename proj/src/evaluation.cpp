// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/evaluation.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <set>

namespace txcluster {

std::string_view to_string(Category c) noexcept
{
    switch (c) {
    case Category::add: return "ADD";
    case Category::merge: return "MERGE";
    case Category::subset: return "SUBSET";
    case Category::new_cluster: return "NEW";
    }
    return "NEW";
}

Category classify_cluster(const std::vector<std::string>& cluster, const Clustering& base)
{
    if (cluster.size() < 2) throw SingletonCluster();
    std::optional<std::size_t> touched;
    bool contained = true;
    for (const auto& address : cluster) {
        const auto i = base.index_of(address);
        if (!i || base.cluster_size_of(*i) < 2) {
            contained = false;
            continue;
        }
        const std::size_t root = base.root_of(*i);
        if (touched && *touched != root) return Category::merge;
        touched = root;
    }
    if (!touched) return Category::new_cluster;
    return contained ? Category::subset : Category::add;
}

ImprovementReport compare(const Clustering& base, const Clustering& next, std::string base_name,
                          std::string next_name)
{
    ImprovementReport report;
    report.base = base_name.empty() ? base.provenance().tag : std::move(base_name);
    report.next = next_name.empty() ? next.provenance().tag : std::move(next_name);
    for (const auto& cluster : next.clusters()) {
        if (cluster.size() < 2) continue;
        const Category cat = classify_cluster(cluster, base);
        ++report.clusters;
        switch (cat) {
        case Category::add: ++report.add; break;
        case Category::merge: ++report.merge; break;
        case Category::subset: ++report.subset; break;
        case Category::new_cluster: ++report.new_count; break;
        }
        report.per_cluster.emplace_back(cluster.front(), cat);
    }
    return report;
}

std::string report_to_json(const ImprovementReport& report)
{
    nlohmann::ordered_json j;
    j["base"] = report.base;
    j["new"] = report.next;
    j["clusters"] = report.clusters;
    j["add"] = report.add;
    j["merge"] = report.merge;
    j["subset"] = report.subset;
    j["new_count"] = report.new_count;
    return j.dump();
}

void write_per_cluster_jsonl(std::ostream& os, const ImprovementReport& report)
{
    for (const auto& [id, cat] : report.per_cluster) {
        nlohmann::ordered_json j;
        j["cluster"] = id;
        j["category"] = std::string(to_string(cat));
        os << j.dump() << '\n';
    }
}

LabelSet load_labels(std::istream& is)
{
    LabelSet labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "address,label") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw MalformedLabelFile(lineno, "expected address,label");
        std::string address = line.substr(0, comma);
        std::string label = line.substr(comma + 1);
        if (address.empty() || label.empty()) throw MalformedLabelFile(lineno, "empty field");
        const auto [it, inserted] = labels.emplace(address, label);
        if (!inserted && it->second != label) {
            throw MalformedLabelFile(lineno, "address " + address + " has two labels");
        }
    }
    return labels;
}

LabelReport validate_labels(const Clustering& c, const LabelSet& labels)
{
    // cluster key -> labels seen among its members. Unknown addresses get
    // a key of their own.
    std::map<std::string, std::set<std::string>> per_cluster;
    std::map<std::string, std::set<std::string>> clusters_of_label;
    for (const auto& [address, label] : labels) {
        const auto id = c.cluster_id(address);
        const std::string key = id ? "c:" + *id : "a:" + address;
        per_cluster[key].insert(label);
        clusters_of_label[label].insert(key);
    }
    LabelReport report;
    report.clusters_with_labels = per_cluster.size();
    for (const auto& [key, set] : per_cluster) {
        if (set.size() == 1) {
            ++report.pure;
        } else {
            ++report.impure;
        }
    }
    for (const auto& [label, keys] : clusters_of_label) report.fragmentation[label] = keys.size();
    return report;
}

std::string label_report_to_json(const LabelReport& report)
{
    nlohmann::ordered_json j;
    j["clusters_with_labels"] = report.clusters_with_labels;
    j["pure"] = report.pure;
    j["impure"] = report.impure;
    j["fragmentation"] = nlohmann::ordered_json::object();
    for (const auto& [label, count] : report.fragmentation) j["fragmentation"][label] = count;
    return j.dump();
}

} // namespace txcluster
