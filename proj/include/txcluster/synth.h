// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_SYNTH_H
#define TXCLUSTER_SYNTH_H

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace txcluster {

/** Names accepted by generate(). */
std::vector<std::string> scenario_names();

/** Relative frequency of each transaction shape in random corpora. */
struct ShapeWeights {
    unsigned coinbase{3};
    unsigned payment{30};
    unsigned pending_payment{12};
    unsigned replacement{6};
    unsigned one_to_one{4};
    unsigned peel{4};
    unsigned fusiform{3};
    unsigned coinjoin{2};
};

/**
 * Writes exactly @p n_txs ingest records. The first one is always a
 * coinbase. Output depends only on the arguments.
 */
void generate_random(std::uint64_t seed, std::size_t n_txs, const ShapeWeights& weights, std::ostream& out);

/**
 * Writes the named corpus. Fixture scenarios ignore @p seed and @p n_txs.
 * Throws UnknownScenario.
 */
void generate(std::string_view scenario, std::uint64_t seed, std::size_t n_txs, std::ostream& out);
std::string generate(std::string_view scenario, std::uint64_t seed = 0, std::size_t n_txs = 1000);

} // namespace txcluster

#endif // TXCLUSTER_SYNTH_H
