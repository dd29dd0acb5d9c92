// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_RUN_CONFIG_H
#define TXCLUSTER_RUN_CONFIG_H

#include <txcluster/heuristics.h>
#include <txcluster/tx_store.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace txcluster {

/** Addresses entities are counted over. */
enum class UniverseKind { confirmed, all };

std::string_view to_string(UniverseKind u) noexcept;
std::optional<UniverseKind> parse_universe(std::string_view text) noexcept;

struct RunConfig {
    std::string store;
    SourceSet set{SourceSet::confirmed};
    std::vector<HeuristicId> heuristics{HeuristicId::cs};
    UniverseKind universe{UniverseKind::confirmed};
    HeuristicParams params;
    std::string out;
    std::string links_out;
    //! Provenance tag; empty means derive it from set and heuristics.
    std::string provenance;
    bool header{true};

    bool operator==(const RunConfig&) const = default;
};

/**
 * key=value lines; '#' starts a comment. Unknown keys, bad values and
 * non-positive thresholds throw ConfigError. Heuristic lists may throw
 * UnknownHeuristic.
 */
RunConfig parse_config(std::string_view text, RunConfig base = {});

/** Applies one key=value setting. */
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/** Every key in a fixed order; parse_config(config_to_string(c)) == c. */
std::string config_to_string(const RunConfig& config);

/** Throws ConfigError when a threshold is not positive or no heuristic is selected. */
void validate_config(const RunConfig& config);

/**
 * SC for established heuristics on confirmed data, SU for them on any
 * unconfirmed set, NU for replacement/chain/experimental heuristics on
 * unconfirmed data, otherwise "custom".
 */
std::string provenance_tag(const RunConfig& config);

} // namespace txcluster

#endif // TXCLUSTER_RUN_CONFIG_H
