// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/run_config.h>

#include <txcluster/errors.h>

#include <algorithm>
#include <charconv>
#include <sstream>

namespace txcluster {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::size_t parse_positive(std::string_view key, std::string_view value)
{
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(std::string(key) + ": not an unsigned integer: " + std::string(value));
    }
    if (out == 0) throw ConfigError(std::string(key) + ": must be positive");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got " + std::string(value));
}

bool is_established(HeuristicId id)
{
    switch (id) {
    case HeuristicId::cs:
    case HeuristicId::ca:
    case HeuristicId::cm:
    case HeuristicId::cg:
    case HeuristicId::ce:
    case HeuristicId::ck:
        return true;
    default:
        return false;
    }
}

} // namespace

std::string_view to_string(UniverseKind u) noexcept
{
    return u == UniverseKind::confirmed ? "confirmed" : "all";
}

std::optional<UniverseKind> parse_universe(std::string_view text) noexcept
{
    if (text == "confirmed") return UniverseKind::confirmed;
    if (text == "all") return UniverseKind::all;
    return std::nullopt;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value)
{
    const std::string k(key);
    if (key == "store") {
        c.store = value;
    } else if (key == "set") {
        const auto s = parse_source_set(value);
        if (!s) throw ConfigError("set: unknown source set " + std::string(value));
        c.set = *s;
    } else if (key == "heuristics") {
        c.heuristics = parse_heuristic_list(value);
    } else if (key == "universe") {
        const auto u = parse_universe(value);
        if (!u) throw ConfigError("universe: expected confirmed or all, got " + std::string(value));
        c.universe = *u;
    } else if (key == "one_to_one_min_len") {
        c.params.chains.one_to_one_min_len = parse_positive(key, value);
    } else if (key == "fusiform_max_depth") {
        c.params.chains.fusiform_max_depth = parse_positive(key, value);
    } else if (key == "peel_min_len") {
        c.params.chains.peel_min_len = parse_positive(key, value);
    } else if (key == "coinjoin_min_equal_outputs") {
        c.params.coinjoin.min_equal_outputs = parse_positive(key, value);
    } else if (key == "coinjoin_min_outputs") {
        c.params.coinjoin.min_outputs = parse_positive(key, value);
    } else if (key == "out") {
        c.out = value;
    } else if (key == "links_out") {
        c.links_out = value;
    } else if (key == "provenance") {
        c.provenance = value;
    } else if (key == "header") {
        c.header = parse_bool(key, value);
    } else {
        throw ConfigError("unknown config key: " + k);
    }
}

RunConfig parse_config(std::string_view text, RunConfig base)
{
    std::size_t lineno = 0;
    while (!text.empty()) {
        const std::size_t nl = std::min(text.find('\n'), text.size());
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(std::min(nl + 1, text.size()));
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    validate_config(base);
    return base;
}

std::string config_to_string(const RunConfig& c)
{
    std::ostringstream os;
    os << "store=" << c.store << '\n';
    os << "set=" << to_string(c.set) << '\n';
    os << "heuristics=" << heuristic_list_to_string(c.heuristics) << '\n';
    os << "universe=" << to_string(c.universe) << '\n';
    os << "one_to_one_min_len=" << c.params.chains.one_to_one_min_len << '\n';
    os << "fusiform_max_depth=" << c.params.chains.fusiform_max_depth << '\n';
    os << "peel_min_len=" << c.params.chains.peel_min_len << '\n';
    os << "coinjoin_min_equal_outputs=" << c.params.coinjoin.min_equal_outputs << '\n';
    os << "coinjoin_min_outputs=" << c.params.coinjoin.min_outputs << '\n';
    os << "out=" << c.out << '\n';
    os << "links_out=" << c.links_out << '\n';
    os << "provenance=" << c.provenance << '\n';
    os << "header=" << (c.header ? "true" : "false") << '\n';
    return os.str();
}

void validate_config(const RunConfig& c)
{
    if (c.heuristics.empty()) throw ConfigError("heuristics: at least one heuristic is required");
    const auto& ch = c.params.chains;
    const auto& cj = c.params.coinjoin;
    if (ch.one_to_one_min_len == 0 || ch.fusiform_max_depth == 0 || ch.peel_min_len == 0 ||
        cj.min_equal_outputs == 0 || cj.min_outputs == 0) {
        throw ConfigError("thresholds must be positive");
    }
}

std::string provenance_tag(const RunConfig& c)
{
    if (!c.provenance.empty()) return c.provenance;
    const bool established = std::all_of(c.heuristics.begin(), c.heuristics.end(), is_established);
    const bool novel = std::none_of(c.heuristics.begin(), c.heuristics.end(), is_established);
    if (c.set == SourceSet::confirmed) return established ? "SC" : "custom";
    if (established) return "SU";
    if (novel) return "NU";
    return "custom";
}

} // namespace txcluster
