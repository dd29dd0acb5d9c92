// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/txmodel.h>

#include <txcluster/errors.h>

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <set>

namespace txcluster {

using nlohmann::json;

namespace {

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

constexpr char HEX_DIGITS[] = "0123456789abcdef";

void append_escaped(std::string& out, std::string_view text)
{
    out.push_back('"');
    for (const char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                out += "\\u00";
                out.push_back(HEX_DIGITS[(c >> 4) & 0xf]);
                out.push_back(HEX_DIGITS[c & 0xf]);
            } else {
                out.push_back(c);
            }
        }
    }
    out.push_back('"');
}

void append_txid_list(std::string& out, const std::vector<Txid>& ids)
{
    out.push_back('[');
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back(',');
        out.push_back('"');
        out += ids[i].to_hex();
        out.push_back('"');
    }
    out.push_back(']');
}

// ---------------------------------------------------------------------------
// Field access helpers. Every failure names the dotted field path.
// ---------------------------------------------------------------------------

const json* member(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

const json& require(const json& obj, const char* key, const std::string& path)
{
    const json* v = member(obj, key);
    if (!v) throw MalformedRecord(path, "missing required field");
    return *v;
}

std::int64_t as_int(const json& v, const std::string& path)
{
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw MalformedRecord(path, "integer out of range");
        }
        return static_cast<std::int64_t>(u);
    }
    if (v.is_number_integer()) return v.get<std::int64_t>();
    throw MalformedRecord(path, "expected integer");
}

bool as_bool(const json& v, const std::string& path)
{
    if (!v.is_boolean()) throw MalformedRecord(path, "expected boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string()) throw MalformedRecord(path, "expected string");
    return v.get<std::string>();
}

Txid as_txid(const json& v, const std::string& path)
{
    if (!v.is_string()) throw MalformedRecord(path, "expected 64-char hex string");
    auto id = Txid::from_hex(v.get_ref<const std::string&>());
    if (!id) throw MalformedRecord(path, "expected 64 lowercase hex characters");
    return *id;
}

std::optional<std::string> optional_address(const json& obj, const std::string& path)
{
    const json* v = member(obj, "address");
    if (!v) return std::nullopt;
    auto s = as_string(*v, path + ".address");
    if (s.empty()) throw MalformedRecord(path + ".address", "empty address");
    return s;
}

std::vector<Txid> txid_list(const json& obj, const char* key, const std::string& path)
{
    std::vector<Txid> ids;
    const json* v = member(obj, key);
    if (!v) return ids;
    if (!v->is_array()) throw MalformedRecord(path, "expected array");
    ids.reserve(v->size());
    for (std::size_t i = 0; i < v->size(); ++i) {
        ids.push_back(as_txid((*v)[i], path + "[" + std::to_string(i) + "]"));
    }
    return ids;
}

template <typename T>
bool has_duplicates(std::vector<T> items)
{
    std::sort(items.begin(), items.end());
    return std::adjacent_find(items.begin(), items.end()) != items.end();
}

} // namespace

// ---------------------------------------------------------------------------
// Txid / OutPoint
// ---------------------------------------------------------------------------

std::optional<Txid> Txid::from_hex(std::string_view hex)
{
    if (hex.size() != 2 * SIZE) return std::nullopt;
    Txid id;
    for (std::size_t i = 0; i < SIZE; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        id.m_data[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return id;
}

std::string Txid::to_hex() const
{
    std::string out(2 * SIZE, '0');
    for (std::size_t i = 0; i < SIZE; ++i) {
        out[2 * i] = HEX_DIGITS[m_data[i] >> 4];
        out[2 * i + 1] = HEX_DIGITS[m_data[i] & 0xf];
    }
    return out;
}

std::size_t TxidHasher::operator()(const Txid& txid) const noexcept
{
    // FNV-1a over the first 16 bytes; ids are hashes already.
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < 16; ++i) {
        h ^= txid.bytes()[i];
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

std::size_t OutPointHasher::operator()(const OutPoint& op) const noexcept
{
    return TxidHasher{}(op.txid) ^ (static_cast<std::size_t>(op.vout) * 0x9e3779b97f4a7c15ull);
}

std::string_view to_string(TxStatus status) noexcept
{
    switch (status) {
    case TxStatus::confirmed: return "confirmed";
    case TxStatus::failed: return "failed";
    case TxStatus::pending: return "pending";
    }
    return "pending";
}

std::optional<TxStatus> parse_status(std::string_view text) noexcept
{
    if (text == "confirmed") return TxStatus::confirmed;
    if (text == "failed") return TxStatus::failed;
    if (text == "pending") return TxStatus::pending;
    return std::nullopt;
}

std::vector<std::string> Transaction::input_addresses() const
{
    std::vector<std::string> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        if (in.address) out.push_back(*in.address);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> Transaction::output_addresses() const
{
    std::vector<std::string> out;
    out.reserve(outputs.size());
    for (const auto& o : outputs) {
        if (o.address) out.push_back(*o.address);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Parse / serialize
// ---------------------------------------------------------------------------

Transaction parse_transaction(std::string_view record)
{
    json root = json::parse(record.begin(), record.end(), nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded()) throw MalformedRecord("record", "invalid JSON");
    if (!root.is_object()) throw MalformedRecord("record", "expected JSON object");

    Transaction tx;
    tx.txid = as_txid(require(root, "txid", "txid"), "txid");
    tx.is_coinbase = as_bool(require(root, "is_coinbase", "is_coinbase"), "is_coinbase");

    const json& inputs = require(root, "inputs", "inputs");
    if (!inputs.is_array()) throw MalformedRecord("inputs", "expected array");
    tx.inputs.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::string path = "inputs[" + std::to_string(i) + "]";
        const json& in = inputs[i];
        if (!in.is_object()) throw MalformedRecord(path, "expected object");
        TxInput input;
        input.prevout.txid = as_txid(require(in, "prev_txid", path + ".prev_txid"), path + ".prev_txid");
        const auto vout = as_int(require(in, "vout", path + ".vout"), path + ".vout");
        if (vout < 0 || vout > std::numeric_limits<std::uint32_t>::max()) {
            throw MalformedRecord(path + ".vout", "output index out of range");
        }
        input.prevout.vout = static_cast<std::uint32_t>(vout);
        input.address = optional_address(in, path);
        if (const json* v = member(in, "value_sat")) input.value_sat = as_int(*v, path + ".value_sat");
        tx.inputs.push_back(std::move(input));
    }

    const json& outputs = require(root, "outputs", "outputs");
    if (!outputs.is_array()) throw MalformedRecord("outputs", "expected array");
    tx.outputs.reserve(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::string path = "outputs[" + std::to_string(i) + "]";
        const json& out = outputs[i];
        if (!out.is_object()) throw MalformedRecord(path, "expected object");
        TxOutput output;
        const auto n = as_int(require(out, "n", path + ".n"), path + ".n");
        if (n < 0 || n > std::numeric_limits<std::uint32_t>::max()) {
            throw MalformedRecord(path + ".n", "output index out of range");
        }
        output.n = static_cast<std::uint32_t>(n);
        output.address = optional_address(out, path);
        output.value_sat = as_int(require(out, "value_sat", path + ".value_sat"), path + ".value_sat");
        tx.outputs.push_back(std::move(output));
    }

    const auto status_text = as_string(require(root, "status", "status"), "status");
    const auto status = parse_status(status_text);
    if (!status) throw MalformedRecord("status", "expected confirmed, failed or pending");
    tx.status = *status;

    if (const json* v = member(root, "block_height")) tx.block_height = as_int(*v, "block_height");
    if (const json* v = member(root, "block_index")) {
        const auto idx = as_int(*v, "block_index");
        if (idx < 0 || idx > std::numeric_limits<std::uint32_t>::max()) {
            throw MalformedRecord("block_index", "out of range");
        }
        tx.block_index = static_cast<std::uint32_t>(idx);
    }

    if (const json* mp = member(root, "mempool")) {
        if (!mp->is_object()) throw MalformedRecord("mempool", "expected object");
        MempoolMeta meta;
        meta.fee_sat = as_int(require(*mp, "fee_sat", "mempool.fee_sat"), "mempool.fee_sat");
        meta.vsize = as_int(require(*mp, "vsize", "mempool.vsize"), "mempool.vsize");
        meta.time = as_int(require(*mp, "time", "mempool.time"), "mempool.time");
        if (const json* v = member(*mp, "removetime")) meta.removetime = as_int(*v, "mempool.removetime");
        meta.depends = txid_list(*mp, "depends", "mempool.depends");
        meta.spentby = txid_list(*mp, "spentby", "mempool.spentby");
        if (const json* v = member(*mp, "replaceable")) meta.replaceable = as_bool(*v, "mempool.replaceable");
        tx.mempool = std::move(meta);
    }

    check_transaction(tx);
    return tx;
}

void check_transaction(const Transaction& tx)
{
    if (tx.is_coinbase != tx.inputs.empty()) {
        throw InvariantViolation("is_coinbase", "a transaction is coinbase exactly when it has no inputs");
    }
    if (tx.outputs.empty()) throw InvariantViolation("outputs", "at least one output is required");
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        if (tx.inputs[i].value_sat && *tx.inputs[i].value_sat < 0) {
            throw InvariantViolation("inputs[" + std::to_string(i) + "].value_sat", "negative value");
        }
    }
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        if (tx.outputs[i].n != i) {
            throw InvariantViolation("outputs[" + std::to_string(i) + "].n", "output indexes must equal their position");
        }
        if (tx.outputs[i].value_sat < 0) {
            throw InvariantViolation("outputs[" + std::to_string(i) + "].value_sat", "negative value");
        }
    }
    std::vector<OutPoint> prevouts;
    prevouts.reserve(tx.inputs.size());
    for (const auto& in : tx.inputs) prevouts.push_back(in.prevout);
    if (has_duplicates(std::move(prevouts))) throw InvariantViolation("inputs", "an outpoint is spent twice");

    if (tx.status == TxStatus::confirmed) {
        if (!tx.block_height) throw InvariantViolation("block_height", "required for confirmed transactions");
        if (!tx.block_index) throw InvariantViolation("block_index", "required for confirmed transactions");
    } else {
        if (tx.block_height) throw InvariantViolation("block_height", "only confirmed transactions have a block");
        if (tx.block_index) throw InvariantViolation("block_index", "only confirmed transactions have a block");
        if (!tx.mempool) throw InvariantViolation("mempool", "unconfirmed transactions need mempool data");
    }
    if (tx.status == TxStatus::failed && !tx.mempool->removetime) {
        throw InvariantViolation("removetime", "failed transactions need a removal time");
    }
    if (tx.mempool) {
        const auto& m = *tx.mempool;
        if (m.fee_sat < 0) throw InvariantViolation("fee_sat", "negative fee");
        if (m.vsize <= 0) throw InvariantViolation("vsize", "must be positive");
        if (m.removetime && *m.removetime < m.time) {
            throw InvariantViolation("removetime", "earlier than time");
        }
        if (has_duplicates(m.depends)) throw InvariantViolation("depends", "duplicate entries");
        if (has_duplicates(m.spentby)) throw InvariantViolation("spentby", "duplicate entries");
    }
}

std::string serialize_transaction(const Transaction& tx)
{
    std::string out;
    out.reserve(256 + 160 * (tx.inputs.size() + tx.outputs.size()));
    out += "{\"txid\":\"";
    out += tx.txid.to_hex();
    out += "\",\"is_coinbase\":";
    out += tx.is_coinbase ? "true" : "false";
    out += ",\"inputs\":[";
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const auto& in = tx.inputs[i];
        if (i) out.push_back(',');
        out += "{\"prev_txid\":\"";
        out += in.prevout.txid.to_hex();
        out += "\",\"vout\":";
        out += std::to_string(in.prevout.vout);
        out += ",\"address\":";
        if (in.address) append_escaped(out, *in.address); else out += "null";
        out += ",\"value_sat\":";
        out += in.value_sat ? std::to_string(*in.value_sat) : "null";
        out.push_back('}');
    }
    out += "],\"outputs\":[";
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const auto& o = tx.outputs[i];
        if (i) out.push_back(',');
        out += "{\"n\":";
        out += std::to_string(o.n);
        out += ",\"address\":";
        if (o.address) append_escaped(out, *o.address); else out += "null";
        out += ",\"value_sat\":";
        out += std::to_string(o.value_sat);
        out.push_back('}');
    }
    out += "],\"status\":\"";
    out += to_string(tx.status);
    out += "\",\"block_height\":";
    out += tx.block_height ? std::to_string(*tx.block_height) : "null";
    out += ",\"block_index\":";
    out += tx.block_index ? std::to_string(*tx.block_index) : "null";
    out += ",\"mempool\":";
    if (tx.mempool) {
        const auto& m = *tx.mempool;
        out += "{\"fee_sat\":";
        out += std::to_string(m.fee_sat);
        out += ",\"vsize\":";
        out += std::to_string(m.vsize);
        out += ",\"time\":";
        out += std::to_string(m.time);
        out += ",\"removetime\":";
        out += m.removetime ? std::to_string(*m.removetime) : "null";
        out += ",\"depends\":";
        append_txid_list(out, m.depends);
        out += ",\"spentby\":";
        append_txid_list(out, m.spentby);
        out += ",\"replaceable\":";
        out += m.replaceable ? "true" : "false";
        out.push_back('}');
    } else {
        out += "null";
    }
    out.push_back('}');
    return out;
}

TxOrderKey order_key(const Transaction& tx) noexcept
{
    if (tx.is_confirmed()) {
        return {0, tx.block_height.value_or(0), static_cast<std::int64_t>(tx.block_index.value_or(0)), tx.txid};
    }
    return {1, tx.mempool ? tx.mempool->time : 0, 0, tx.txid};
}

} // namespace txcluster
