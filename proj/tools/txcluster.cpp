// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/clustering.h>
#include <txcluster/errors.h>
#include <txcluster/evaluation.h>
#include <txcluster/heuristics.h>
#include <txcluster/mempool.h>
#include <txcluster/pipeline.h>
#include <txcluster/run_config.h>
#include <txcluster/synth.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace txcluster;

namespace {

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_DATA = 2;

/** Usage problems detected after CLI11 has parsed the arguments. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

// Options shared by commands that run heuristics. Strings stay empty unless
// given, so a config file value is only overridden when the flag is present.
struct RunFlags {
    std::string config;
    std::string store;
    std::string set;
    std::string heuristics;
    std::string universe;
    std::string out;
    std::string links_out;
    std::string provenance;
    bool no_header{false};
    std::size_t one_to_one_min_len{0};
    std::size_t fusiform_max_depth{0};
    std::size_t peel_min_len{0};
    std::size_t coinjoin_min_equal{0};
    std::size_t coinjoin_min_outputs{0};

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--config", config, "key=value config file");
        cmd.add_option("--store", store, "store directory");
        cmd.add_option("--set", set, "source set: confirmed, unconfirmed, failed, all");
        cmd.add_option("--heuristics", heuristics, "comma list of cs,ca,cm,cg,ce,ck,rc,oc,fc,ni,pc");
        cmd.add_option("--universe", universe, "entity universe: confirmed or all");
        cmd.add_option("--out", out, "cluster CSV to write");
        cmd.add_option("--links-out", links_out, "LinkSet JSON lines to write");
        cmd.add_option("--provenance", provenance, "provenance tag (default: derived)");
        cmd.add_flag("--no-header", no_header, "omit the CSV header");
        cmd.add_option("--one-to-one-min-len", one_to_one_min_len);
        cmd.add_option("--fusiform-max-depth", fusiform_max_depth);
        cmd.add_option("--peel-min-len", peel_min_len);
        cmd.add_option("--coinjoin-min-equal", coinjoin_min_equal);
        cmd.add_option("--coinjoin-min-outputs", coinjoin_min_outputs);
    }

    RunConfig resolve() const
    {
        RunConfig c;
        if (!config.empty()) c = parse_config(slurp(config));
        const auto set_if = [&](const char* key, const std::string& value) {
            if (!value.empty()) apply_setting(c, key, value);
        };
        const auto set_num = [&](const char* key, std::size_t value) {
            if (value != 0) apply_setting(c, key, std::to_string(value));
        };
        set_if("store", store);
        set_if("set", set);
        set_if("heuristics", heuristics);
        set_if("universe", universe);
        set_if("out", out);
        set_if("links_out", links_out);
        set_if("provenance", provenance);
        if (no_header) c.header = false;
        set_num("one_to_one_min_len", one_to_one_min_len);
        set_num("fusiform_max_depth", fusiform_max_depth);
        set_num("peel_min_len", peel_min_len);
        set_num("coinjoin_min_equal_outputs", coinjoin_min_equal);
        set_num("coinjoin_min_outputs", coinjoin_min_outputs);
        validate_config(c);
        if (c.store.empty()) throw UsageError("--store is required");
        return c;
    }
};

int cmd_cluster(const RunFlags& flags)
{
    const RunConfig config = flags.resolve();
    const TxStore store = StoreDir(config.store).load();
    const ClusterRun run = run_cluster(store, config);
    if (run.empty_source) std::cerr << "warning: source set '" << to_string(config.set) << "' is empty\n";
    write_cluster_run(run, config);
    std::cout << entity_count_to_json(run.count) << '\n';
    return 0;
}

int cmd_chains(const RunFlags& flags, const std::string& kind)
{
    RunFlags local = flags;
    if (local.set.empty() && local.config.empty()) local.set = "unconfirmed";
    const RunConfig config = local.resolve();
    const TxStore store = StoreDir(config.store).load();
    const CorpusView view(store, config.set);
    HeuristicRunner runner(view, config.params);
    std::vector<ChainKind> kinds;
    if (kind == "all") {
        kinds = {ChainKind::one_to_one, ChainKind::fusiform, ChainKind::peel};
    } else if (const auto k = parse_chain_kind(kind)) {
        kinds = {*k};
    } else {
        throw UsageError("unknown chain kind: " + kind);
    }
    for (const ChainKind k : kinds) {
        for (const auto& chain : runner.chains(k)) std::cout << chain_to_json(chain) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"txcluster: address clustering over confirmed and unconfirmed transactions"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "add JSON-lines transaction records to a store");
    std::string ingest_store;
    std::vector<std::string> ingest_files;
    ingest->add_option("--store", ingest_store, "store directory")->required();
    ingest->add_option("files", ingest_files, "input files");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "run heuristics and write a clustering");
    RunFlags cluster_flags;
    cluster_flags.attach(*cluster);

    // merge
    auto* merge_cmd = app.add_subcommand("merge", "merge cluster files (the '+' of two results)");
    std::vector<std::string> merge_files;
    std::string merge_out;
    bool merge_no_header = false;
    merge_cmd->add_option("files", merge_files, "cluster CSV files")->required()->expected(2, 64);
    merge_cmd->add_option("--out", merge_out, "merged cluster CSV");
    merge_cmd->add_flag("--no-header", merge_no_header, "omit the CSV header");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "classify new clusters against a base clustering");
    std::string base_file, new_file, per_cluster;
    compare_cmd->add_option("--base", base_file, "base cluster CSV")->required();
    compare_cmd->add_option("--new", new_file, "new cluster CSV")->required();
    compare_cmd->add_option("--per-cluster", per_cluster, "per-cluster categories as JSON lines");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check clusters against address labels");
    std::string validate_clusters, validate_labels_file;
    validate_cmd->add_option("--clusters", validate_clusters, "cluster CSV")->required();
    validate_cmd->add_option("--labels", validate_labels_file, "CSV address,label")->required();

    // mempool-at
    auto* at_cmd = app.add_subcommand("mempool-at", "transactions in the pool at a unix time");
    std::string at_store, at_set = "all";
    Timestamp at_time = 0;
    at_cmd->add_option("--store", at_store, "store directory")->required();
    at_cmd->add_option("--time", at_time, "unix seconds")->required();
    at_cmd->add_option("--set", at_set, "source set");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a fixture or random corpus");
    std::string scenario, synth_out;
    std::uint64_t seed = 0;
    std::size_t n_txs = 1000;
    synth_cmd->add_option("--scenario", scenario, "scenario name")->required();
    synth_cmd->add_option("--seed", seed, "random seed");
    synth_cmd->add_option("--n", n_txs, "number of transactions (random)");
    synth_cmd->add_option("--out", synth_out, "output file (default stdout)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "store statistics");
    std::string stats_store;
    stats_cmd->add_option("--store", stats_store, "store directory")->required();

    // chains
    auto* chains_cmd = app.add_subcommand("chains", "list dependency chains as JSON lines");
    RunFlags chain_flags;
    chain_flags.attach(*chains_cmd);
    std::string chain_kind = "all";
    chains_cmd->add_option("--kind", chain_kind, "one_to_one, fusiform, peel or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    try {
        if (*ingest) {
            std::vector<std::filesystem::path> files(ingest_files.begin(), ingest_files.end());
            const StoreStats stats = StoreDir(ingest_store).ingest(files);
            std::cout << stats_to_json(stats) << '\n';
        } else if (*cluster) {
            return cmd_cluster(cluster_flags);
        } else if (*merge_cmd) {
            std::vector<Clustering> inputs;
            for (const auto& f : merge_files) inputs.push_back(load_clustering_file(f));
            Clustering merged = inputs.front();
            for (std::size_t i = 1; i < inputs.size(); ++i) merged = merge(merged, inputs[i]);
            if (!merge_out.empty()) {
                {
                    auto out = open_output(merge_out);
                    export_clustering(out, merged, !merge_no_header);
                }
                auto meta = open_output(merge_out + ".meta.json");
                meta << provenance_to_json(merged.provenance()) << '\n';
            }
            const auto universe = inputs.front().addresses();
            std::cout << entity_count_to_json(entity_count(merged, universe)) << '\n';
        } else if (*compare_cmd) {
            const Clustering base = load_clustering_file(base_file);
            const Clustering next = load_clustering_file(new_file);
            const ImprovementReport report = compare(base, next);
            if (!per_cluster.empty()) {
                auto out = open_output(per_cluster);
                write_per_cluster_jsonl(out, report);
            }
            std::cout << report_to_json(report) << '\n';
        } else if (*validate_cmd) {
            const Clustering c = load_clustering_file(validate_clusters);
            std::ifstream in(validate_labels_file, std::ios::binary);
            if (!in) throw UsageError("cannot open " + validate_labels_file);
            std::cout << label_report_to_json(validate_labels(c, load_labels(in))) << '\n';
        } else if (*at_cmd) {
            const auto set = parse_source_set(at_set);
            if (!set) throw UsageError("unknown source set: " + at_set);
            const TxStore store = StoreDir(at_store).load();
            nlohmann::ordered_json ids = nlohmann::ordered_json::array();
            for (const auto& id : mempool_at(at_time, CorpusView(store, *set))) ids.push_back(id.to_hex());
            std::cout << ids.dump() << '\n';
        } else if (*synth_cmd) {
            if (synth_out.empty()) {
                generate(scenario, seed, n_txs, std::cout);
            } else {
                auto out = open_output(synth_out);
                generate(scenario, seed, n_txs, out);
            }
        } else if (*stats_cmd) {
            std::cout << stats_to_json(compute_stats(StoreDir(stats_store).load())) << '\n';
        } else if (*chains_cmd) {
            return cmd_chains(chain_flags, chain_kind);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const UnknownHeuristic& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const UnknownScenario& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const IngestError& e) {
        for (const auto& p : e.problems()) std::cerr << "error: " << p << '\n';
        return EXIT_DATA;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_DATA;
    }
    return 0;
}
