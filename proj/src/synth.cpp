// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <txcluster/synth.h>

#include <txcluster/errors.h>
#include <txcluster/txmodel.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

namespace txcluster {

namespace {

constexpr Timestamp BASE_TIME = 1651363200; // 2022-05-01T00:00:00Z
constexpr std::int64_t BASE_HEIGHT = 733000;

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/** Uniform integers from mt19937_64 by rejection, so results do not depend on the standard library. */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : m_gen(seed) {}

    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = m_gen();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    Txid txid()
    {
        std::string hex;
        for (int i = 0; i < 4; ++i) hex += hex64(m_gen());
        return *Txid::from_hex(hex);
    }

private:
    std::mt19937_64 m_gen;
};

std::vector<Txid> sorted_ids(std::vector<Txid> ids)
{
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::int64_t estimate_vsize(std::size_t inputs, std::size_t outputs)
{
    return 11 + 68 * static_cast<std::int64_t>(inputs) + 31 * static_cast<std::int64_t>(outputs);
}

// ---------------------------------------------------------------------------
// Fixture scenarios
// ---------------------------------------------------------------------------

enum class Kind { confirmed, confirmed_seen, pending, failed };

struct Out {
    std::string address;
    Amount value;
};

struct Meta {
    Timestamp time{0};
    std::optional<Timestamp> removetime;
    bool replaceable{false};
    std::vector<Txid> depends;
    std::vector<Txid> spentby;
};

class Fixture
{
public:
    explicit Fixture(std::string tag) : m_tag(std::move(tag)) {}

    /** Deterministic id; @p prefix and @p suffix are pinned where the txid is partly known. */
    Txid id(std::string_view name, std::string_view prefix = "", std::string_view suffix = "") const
    {
        std::uint64_t state = fnv1a(m_tag + "/" + std::string(name));
        std::string hex;
        for (int i = 0; i < 4; ++i) hex += hex64(splitmix64(state));
        hex.replace(0, prefix.size(), prefix);
        hex.replace(hex.size() - suffix.size(), suffix.size(), suffix);
        return *Txid::from_hex(hex);
    }

    void coinbase(const Txid& txid, const std::vector<Out>& outs)
    {
        Transaction tx;
        tx.txid = txid;
        tx.is_coinbase = true;
        add_outputs(tx, outs);
        confirm(tx, true);
        m_txs.push_back(std::move(tx));
    }

    void spend(const Txid& txid, const std::vector<OutPoint>& ins, const std::vector<Out>& outs, Kind kind,
               Meta meta = {})
    {
        Transaction tx;
        tx.txid = txid;
        Amount in_total = 0;
        for (const auto& op : ins) {
            const TxOutput& prev = output(op);
            tx.inputs.push_back({op, prev.address, prev.value_sat, false});
            in_total += prev.value_sat;
        }
        add_outputs(tx, outs);
        Amount out_total = 0;
        for (const auto& o : tx.outputs) out_total += o.value_sat;
        if (kind != Kind::confirmed) {
            MempoolMeta m;
            m.fee_sat = in_total - out_total;
            m.vsize = estimate_vsize(ins.size(), outs.size());
            m.time = meta.time;
            m.removetime = meta.removetime;
            m.replaceable = meta.replaceable;
            m.depends = sorted_ids(meta.depends);
            m.spentby = sorted_ids(meta.spentby);
            tx.mempool = std::move(m);
        }
        if (kind == Kind::confirmed || kind == Kind::confirmed_seen) {
            confirm(tx, false);
        } else {
            tx.status = kind == Kind::failed ? TxStatus::failed : TxStatus::pending;
        }
        m_txs.push_back(std::move(tx));
    }

    void write(std::ostream& out) const
    {
        for (const auto& tx : m_txs) {
            check_transaction(tx);
            out << serialize_transaction(tx) << '\n';
        }
    }

private:
    const TxOutput& output(const OutPoint& op) const
    {
        for (const auto& tx : m_txs) {
            if (tx.txid == op.txid) return tx.outputs.at(op.vout);
        }
        throw std::logic_error("fixture spends an unknown output");
    }

    static void add_outputs(Transaction& tx, const std::vector<Out>& outs)
    {
        for (std::size_t i = 0; i < outs.size(); ++i) {
            TxOutput o;
            o.n = static_cast<std::uint32_t>(i);
            o.address = outs[i].address;
            o.value_sat = outs[i].value;
            tx.outputs.push_back(std::move(o));
        }
    }

    void confirm(Transaction& tx, bool new_block)
    {
        if (new_block || m_height == 0) {
            m_height = m_height == 0 ? BASE_HEIGHT : m_height + 1;
            m_index = 0;
        } else {
            ++m_index;
        }
        tx.status = TxStatus::confirmed;
        tx.block_height = m_height;
        tx.block_index = m_index;
    }

    std::string m_tag;
    std::vector<Transaction> m_txs;
    std::int64_t m_height{0};
    std::uint32_t m_index{0};
};

void fig3_binance(std::ostream& out)
{
    Fixture f("fig3_binance");
    const Timestamp t = BASE_TIME;
    const Txid cb = f.id("coinbase");
    f.coinbase(cb, {{"1Exch...seed", 90'000'000}, {"1Exch...seed", 6'000'000}});

    // Batch payout with 44 outputs; one of them funds bc1q...wwvq.
    const Txid batch = f.id("batch", "66c1", "9dc6");
    std::vector<Out> outs;
    for (int i = 0; i < 44; ++i) {
        if (i == 17) {
            outs.push_back({"bc1q...wwvq", 3'418'277});
        } else {
            outs.push_back({"bc1qpayout" + std::to_string(i), 1'000'000 + 37'113 * i});
        }
    }
    f.spend(batch, {{cb, 0}}, outs, Kind::confirmed);

    const Txid failed = f.id("failed", "dc43", "ef51");
    const Txid replacement = f.id("replacement", "4161", "bb25");
    f.spend(failed, {{batch, 17}}, {{"bc1q...7s3h", 3'417'050}}, Kind::failed,
            {t, t + 780, true, {}, {}});
    f.spend(replacement, {{batch, 17}}, {{"19Fa...Hd5X", 3'395'911}}, Kind::confirmed_seen,
            {t + 180, t + 780, true, {}, {}});

    const Txid funding = f.id("funding");
    std::vector<Out> small;
    for (int i = 0; i < 99; ++i) small.push_back({"19Fa...Hd5X", 51'234 + 7 * i});
    f.spend(funding, {{cb, 1}}, small, Kind::confirmed);

    std::vector<OutPoint> sweep{{replacement, 0}};
    for (std::uint32_t i = 0; i < 99; ++i) sweep.push_back({funding, i});
    f.spend(f.id("sweep", "6903", "4583"), sweep, {{"bc1q...7s3h", 8'412'977}}, Kind::confirmed);
    f.write(out);
}

void fig4_dust(std::ostream& out)
{
    Fixture f("fig4_dust");
    const Timestamp t = BASE_TIME;
    const Txid cb1 = f.id("coinbase1");
    const Txid cb2 = f.id("coinbase2");
    f.coinbase(cb1, {{"1Fund...aaaa", 41'873'215}});
    f.coinbase(cb2, {{"1Fund...bbbb", 12'407'331}});

    const Txid first = f.id("first", "3180", "a362");
    f.spend(first, {{cb1, 0}, {cb2, 0}}, {{"1KqX...JYEQ", 1'904'713}, {"1Fund...cccc", 52'371'022}},
            Kind::confirmed);

    // Failed 1-in/9-out: eight equal dust outputs to whale addresses plus change.
    std::vector<Out> dust;
    for (int i = 1; i <= 8; ++i) dust.push_back({"1Whale" + std::to_string(i), 666});
    dust.push_back({"1KqX...JYEQ", 1'894'185});
    const Txid attack = f.id("attack", "f125", "6b9a");
    f.spend(attack, {{first, 0}}, dust, Kind::failed, {t, t + 3600, false, {}, {}});

    f.spend(f.id("transfer", "4f6e", "9ce3"), {{first, 0}}, {{"1FU6...8hKf", 1'901'277}}, Kind::confirmed);
    f.write(out);
}

void fig5_rc(std::ostream& out)
{
    Fixture f("fig5_rc");
    const Timestamp t = BASE_TIME;
    const Txid tx1 = f.id("tx1");
    f.coinbase(tx1, {{"addr1", 35'000'000}});
    const Txid tx2 = f.id("tx2");
    const Txid tx3 = f.id("tx3");
    const Txid tx4 = f.id("tx4");
    // addr2 is paid the same amount each time; addr3 absorbs the rising fee.
    constexpr Amount PAY = 12'345'678;
    f.spend(tx2, {{tx1, 0}}, {{"addr2", PAY}, {"addr3", 35'000'000 - PAY - 1'130}}, Kind::failed,
            {t, t + 420, true, {}, {}});
    f.spend(tx3, {{tx1, 0}}, {{"addr2", PAY}, {"addr3", 35'000'000 - PAY - 4'870}}, Kind::failed,
            {t + 420, t + 1'260, true, {}, {}});
    f.spend(tx4, {{tx1, 0}}, {{"addr2", PAY}, {"addr3", 35'000'000 - PAY - 11'290}}, Kind::confirmed_seen,
            {t + 1'260, t + 1'900, true, {}, {}});
    f.write(out);
}

void fig6_oc(std::ostream& out)
{
    Fixture f("fig6_oc");
    const Timestamp t = BASE_TIME;
    const Txid tx1 = f.id("tx1");
    f.coinbase(tx1, {{"addr1", 7'311'942}});
    Txid prev = tx1;
    Amount value = 7'311'942;
    for (int i = 2; i <= 5; ++i) {
        const Txid id = f.id("tx" + std::to_string(i));
        value -= 1'411 + 97 * i;
        std::vector<Txid> depends;
        if (i > 2) depends.push_back(prev);
        f.spend(id, {{prev, 0}}, {{"addr" + std::to_string(i), value}}, Kind::pending,
                {t + 40 * (i - 2), std::nullopt, false, depends, {}});
        prev = id;
    }
    f.write(out);
}

void fig7_case(std::ostream& out, int which, const std::string& prefix)
{
    Fixture f("fig7_fc" + std::to_string(which));
    const Timestamp t = BASE_TIME;
    const auto a = [&](int n) { return prefix + "addr" + std::to_string(n); };
    const Txid tx1 = f.id("tx1");
    f.coinbase(tx1, {{a(1), 9'275'513}});
    const Txid tx2 = f.id("tx2");
    f.spend(tx2, {{tx1, 0}}, {{a(2), 4'120'733}, {a(3), 5'151'877}}, Kind::pending, {t, {}, false, {}, {}});
    if (which == 1) {
        f.spend(f.id("tx3"), {{tx2, 0}, {tx2, 1}}, {{a(4), 9'269'981}}, Kind::pending,
                {t + 60, {}, false, {tx2}, {}});
    } else if (which == 2) {
        const Txid tx3 = f.id("tx3");
        const Txid tx4 = f.id("tx4");
        f.spend(tx3, {{tx2, 0}}, {{a(4), 4'118'911}}, Kind::pending, {t + 60, {}, false, {tx2}, {}});
        f.spend(tx4, {{tx2, 1}}, {{a(5), 5'149'203}}, Kind::pending, {t + 75, {}, false, {tx2}, {}});
        f.spend(f.id("tx5"), {{tx3, 0}, {tx4, 0}}, {{a(6), 9'264'317}}, Kind::pending,
                {t + 130, {}, false, {tx3, tx4}, {}});
    } else {
        f.spend(f.id("tx3"), {{tx2, 0}}, {{a(4), 4'118'911}}, Kind::pending, {t + 60, {}, false, {tx2}, {}});
        f.spend(f.id("tx4"), {{tx2, 1}}, {{a(4), 5'149'203}}, Kind::pending, {t + 75, {}, false, {tx2}, {}});
    }
    f.write(out);
}

void fig9_ni(std::ostream& out)
{
    Fixture f("fig9_ni");
    const Timestamp t = BASE_TIME;
    const Txid tx1 = f.id("tx1");
    const Txid tx3 = f.id("tx3");
    const Txid tx5 = f.id("tx5");
    f.coinbase(tx1, {{"addr1", 2'100'455}});
    f.coinbase(tx3, {{"addr3", 1'733'291}});
    f.coinbase(tx5, {{"addr5", 3'006'817}});
    constexpr Amount PAY = 1'571'114;
    // Each replacement keeps the payment to addr2 and pulls in another UTXO.
    f.spend(f.id("tx2"), {{tx1, 0}}, {{"addr2", PAY}, {"chg2", 527'341}}, Kind::failed,
            {t, t + 5'400, true, {}, {}});
    f.spend(f.id("tx4"), {{tx1, 0}, {tx3, 0}}, {{"addr2", PAY}, {"chg4", 2'253'632}}, Kind::failed,
            {t + 5'400, t + 9'000, true, {}, {}});
    f.spend(f.id("tx6"), {{tx1, 0}, {tx3, 0}, {tx5, 0}}, {{"addr2", PAY}, {"chg6", 5'244'449}}, Kind::pending,
            {t + 9'000, {}, true, {}, {}});
    f.write(out);
}

void fig10_pc(std::ostream& out)
{
    Fixture f("fig10_pc");
    const Timestamp t = BASE_TIME;
    const Txid tx0 = f.id("tx0");
    f.coinbase(tx0, {{"addr1", 50'413'872}});
    const Txid tx1 = f.id("tx1");
    const Txid tx2 = f.id("tx2");
    const Txid tx3 = f.id("tx3");
    const Txid tx5 = f.id("tx5");
    const Txid tx6 = f.id("tx6");
    f.spend(tx1, {{tx0, 0}}, {{"addr2", 48'211'509}, {"addr3", 2'201'033}}, Kind::pending, {t, {}, false, {}, {}});
    f.spend(tx2, {{tx1, 0}}, {{"addr4", 40'007'231}, {"addr9", 8'203'117}}, Kind::pending,
            {t + 50, {}, false, {tx1}, {}});
    f.spend(tx3, {{tx2, 0}}, {{"addr6", 37'905'521}, {"addr7", 2'100'377}}, Kind::pending,
            {t + 95, {}, false, {tx2}, {}});
    f.spend(tx5, {{tx2, 1}}, {{"addr10", 1'101'743}, {"addr11", 7'100'229}}, Kind::pending,
            {t + 130, {}, false, {tx2}, {}});
    f.spend(tx6, {{tx5, 1}}, {{"addr12", 5'700'011}, {"addr13", 1'399'013}}, Kind::pending,
            {t + 170, {}, false, {tx5}, {}});
    f.write(out);
}

// ---------------------------------------------------------------------------
// Random corpora
// ---------------------------------------------------------------------------

struct Utxo {
    OutPoint op;
    std::uint64_t address;
    Amount value;
};

class RandomCorpus
{
public:
    RandomCorpus(std::uint64_t seed, const ShapeWeights& weights, std::ostream& out)
        : m_rng(seed), m_weights(weights), m_out(out)
    {
    }

    void run(std::size_t n)
    {
        const unsigned w[] = {m_weights.coinbase, m_weights.payment,  m_weights.pending_payment,
                              m_weights.replacement, m_weights.one_to_one, m_weights.peel,
                              m_weights.fusiform, m_weights.coinjoin};
        const unsigned total = std::accumulate(std::begin(w), std::end(w), 0u);
        while (m_written < n) {
            const std::size_t budget = n - m_written;
            if (m_written == 0 || total == 0) {
                coinbase();
                continue;
            }
            std::uint64_t pick = m_rng.below(total);
            std::size_t shape = 0;
            while (pick >= w[shape]) pick -= w[shape++];
            switch (shape) {
            case 0: coinbase(); break;
            case 1: payment(false); break;
            case 2: payment(true); break;
            case 3: replacement(budget); break;
            case 4: one_to_one(budget); break;
            case 5: peel(budget); break;
            case 6: fusiform(budget); break;
            case 7: coinjoin(); break;
            }
        }
    }

private:
    static std::string address_name(std::uint64_t id)
    {
        std::uint64_t state = id;
        return "bc1q" + hex64(splitmix64(state));
    }

    std::uint64_t fresh_address() { return m_next_address++; }

    /** Fresh most of the time, otherwise an address seen before. */
    std::uint64_t some_address(unsigned reuse_percent = 15)
    {
        if (m_next_address > 0 && m_rng.chance(reuse_percent, 100)) return m_rng.below(m_next_address);
        return fresh_address();
    }

    Timestamp tick() { return m_now += m_rng.range(1, 90); }

    std::optional<Utxo> take(std::vector<Utxo>& pool, Amount min_value = 20'000)
    {
        for (int attempt = 0; attempt < 4 && !pool.empty(); ++attempt) {
            const std::size_t i = m_rng.below(pool.size());
            if (pool[i].value < min_value) continue;
            Utxo u = pool[i];
            pool[i] = pool.back();
            pool.pop_back();
            return u;
        }
        return std::nullopt;
    }

    Transaction build(const std::vector<Utxo>& ins, const std::vector<std::pair<std::uint64_t, Amount>>& outs)
    {
        Transaction tx;
        tx.txid = m_rng.txid();
        for (const auto& u : ins) tx.inputs.push_back({u.op, address_name(u.address), u.value, false});
        for (std::size_t i = 0; i < outs.size(); ++i) {
            TxOutput o;
            o.n = static_cast<std::uint32_t>(i);
            o.address = address_name(outs[i].first);
            o.value_sat = outs[i].second;
            tx.outputs.push_back(std::move(o));
        }
        return tx;
    }

    static Amount total_in(const std::vector<Utxo>& ins)
    {
        Amount s = 0;
        for (const auto& u : ins) s += u.value;
        return s;
    }

    MempoolMeta meta(const std::vector<Utxo>& ins, const Transaction& tx, Timestamp time)
    {
        MempoolMeta m;
        Amount out = 0;
        for (const auto& o : tx.outputs) out += o.value_sat;
        m.fee_sat = total_in(ins) - out;
        m.vsize = estimate_vsize(tx.inputs.size(), tx.outputs.size());
        m.time = time;
        m.replaceable = m_rng.chance(1, 4);
        return m;
    }

    void confirm(Transaction& tx, bool new_block)
    {
        if (new_block || m_in_block >= 12) {
            ++m_height;
            m_in_block = 0;
        }
        tx.status = TxStatus::confirmed;
        tx.block_height = m_height;
        tx.block_index = m_in_block++;
    }

    /** Confirmed transaction; sometimes it was also seen in a pool before confirmation. */
    void emit_confirmed(Transaction& tx, const std::vector<Utxo>& ins)
    {
        const Timestamp now = tick();
        confirm(tx, false);
        if (m_rng.chance(1, 2)) {
            tx.mempool = meta(ins, tx, now - m_rng.range(30, 900));
            tx.mempool->removetime = now;
        }
        emit(tx, m_confirmed);
    }

    void emit_pending(Transaction& tx, const std::vector<Utxo>& ins, const std::vector<Txid>& parents)
    {
        tx.status = TxStatus::pending;
        tx.mempool = meta(ins, tx, tick());
        if (m_rng.chance(7, 10)) tx.mempool->depends = sorted_ids(parents);
        emit(tx, m_pending);
    }

    /** Writes the most recently built transaction and makes its outputs spendable. */
    void emit(const Transaction& tx, std::vector<Utxo>& pool)
    {
        write(tx);
        for (const auto& o : tx.outputs) pool.push_back({{tx.txid, o.n}, m_last_ids[o.n], o.value_sat});
    }

    void write(const Transaction& tx)
    {
        m_out << serialize_transaction(tx) << '\n';
        ++m_written;
    }

    Transaction build_tracked(const std::vector<Utxo>& ins, const std::vector<std::pair<std::uint64_t, Amount>>& outs)
    {
        m_last_ids.clear();
        for (const auto& [id, value] : outs) m_last_ids.push_back(id);
        return build(ins, outs);
    }

    Amount fee() { return m_rng.range(150, 4'000); }

    // Shapes ------------------------------------------------------------

    void coinbase()
    {
        const Amount reward = 625'000'000 + m_rng.range(0, 40'000'000);
        Transaction tx = build_tracked({}, {{some_address(5), reward}});
        tx.is_coinbase = true;
        confirm(tx, true);
        tick();
        emit(tx, m_confirmed);
    }

    std::vector<std::pair<std::uint64_t, Amount>> split(Amount available, std::size_t n_outputs,
                                                        std::uint64_t change_address)
    {
        std::vector<std::pair<std::uint64_t, Amount>> outs;
        Amount left = available;
        for (std::size_t i = 0; i + 1 < n_outputs; ++i) {
            const Amount pay = std::max<Amount>(600, m_rng.range(left / 20, left / 2));
            outs.emplace_back(some_address(), pay);
            left -= pay;
        }
        outs.emplace_back(change_address, left);
        // change is not always last
        if (outs.size() > 1 && m_rng.chance(1, 2)) std::swap(outs.front(), outs.back());
        return outs;
    }

    std::vector<Utxo> gather(std::vector<Utxo>& pool, std::size_t wanted)
    {
        std::vector<Utxo> ins;
        for (std::size_t i = 0; i < wanted; ++i) {
            auto u = take(pool);
            if (!u) break;
            ins.push_back(*u);
        }
        return ins;
    }

    void release(std::vector<Utxo>& pool, const std::vector<Utxo>& ins)
    {
        pool.insert(pool.end(), ins.begin(), ins.end());
    }

    void payment(bool pending)
    {
        std::vector<Utxo>& pool = pending && !m_pending.empty() && m_rng.chance(1, 2) ? m_pending : m_confirmed;
        const std::size_t wanted = 1 + (m_rng.chance(2, 5) ? m_rng.below(3) : 0);
        std::vector<Utxo> ins = gather(pool, wanted);
        if (ins.empty() || total_in(ins) < 50'000) {
            release(pool, ins);
            coinbase();
            return;
        }
        std::vector<Txid> parents;
        for (const auto& u : ins) parents.push_back(u.op.txid);
        const std::uint64_t change = m_rng.chance(1, 8) ? ins.front().address : some_address(10);
        Transaction tx = build_tracked(ins, split(total_in(ins) - fee(), 1 + m_rng.below(3), change));
        if (pending || &pool == &m_pending) {
            emit_pending(tx, ins, parents);
        } else {
            emit_confirmed(tx, ins);
        }
    }

    void replacement(std::size_t budget)
    {
        const std::size_t members = std::min<std::size_t>(budget, 2 + m_rng.below(2));
        const bool from_pending = !m_pending.empty() && m_rng.chance(1, 4);
        std::vector<Utxo>& pool = from_pending ? m_pending : m_confirmed;
        std::vector<Utxo> ins = gather(pool, 1 + m_rng.below(2));
        if (members < 2 || ins.empty() || total_in(ins) < 100'000) {
            release(pool, ins);
            coinbase();
            return;
        }
        std::vector<Txid> parents;
        for (const auto& u : ins) parents.push_back(u.op.txid);
        const bool replaceable = !m_rng.chance(1, 10);
        const bool winner_confirms = !from_pending && m_rng.chance(1, 2);
        const std::uint64_t payee = some_address();
        const std::uint64_t change = some_address(5);
        Amount pay = m_rng.range(total_in(ins) / 10, total_in(ins) / 2);
        Amount fee_sat = fee();

        std::vector<Transaction> txs;
        std::vector<std::vector<Utxo>> inputs;
        Timestamp time = tick();
        for (std::size_t k = 0; k < members; ++k) {
            if (k > 0) {
                fee_sat += m_rng.range(200, 3'000);
                if (m_rng.chance(1, 5)) pay += m_rng.range(1, 5'000); // a few groups change the payment too
                if (m_rng.chance(1, 6)) {                             // and some pull in another input
                    auto extra = take(m_confirmed);
                    if (extra) ins.push_back(*extra);
                }
            }
            const Amount change_value = total_in(ins) - pay - fee_sat;
            if (change_value < 600) break;
            std::vector<std::pair<std::uint64_t, Amount>> outs{{payee, pay}, {change, change_value}};
            if (m_rng.chance(1, 2)) std::swap(outs[0], outs[1]);
            Transaction tx = build_tracked(ins, outs);
            tx.mempool = meta(ins, tx, time);
            tx.mempool->replaceable = replaceable;
            if (m_rng.chance(1, 2)) tx.mempool->depends = sorted_ids(parents);
            txs.push_back(std::move(tx));
            inputs.push_back(ins);
            time += m_rng.range(60, 900);
        }
        if (txs.size() < 2) {
            // Keep whatever was built as a plain pending payment.
            for (auto& tx : txs) {
                tx.status = TxStatus::pending;
                emit(tx, m_pending);
            }
            if (txs.empty()) {
                release(pool, ins);
                coinbase();
            }
            return;
        }
        m_now = std::max(m_now, time);
        for (std::size_t k = 0; k + 1 < txs.size(); ++k) {
            txs[k].status = TxStatus::failed;
            txs[k].mempool->removetime = txs[k + 1].mempool->time + m_rng.range(0, 30);
            write(txs[k]);
        }
        Transaction& winner = txs.back();
        if (winner_confirms) {
            confirm(winner, false);
            winner.mempool->removetime = tick();
            emit(winner, m_confirmed);
        } else {
            winner.status = TxStatus::pending;
            emit(winner, m_pending);
        }
    }

    void one_to_one(std::size_t budget)
    {
        const std::size_t length = std::min<std::size_t>(budget, 2 + m_rng.below(4));
        auto start = take(m_rng.chance(1, 3) && !m_pending.empty() ? m_pending : m_confirmed);
        if (!start) {
            coinbase();
            return;
        }
        Utxo cur = *start;
        for (std::size_t i = 0; i < length; ++i) {
            const Amount value = cur.value - fee();
            if (value < 600) {
                m_pending.push_back(cur);
                return;
            }
            Transaction tx = build_tracked({cur}, {{some_address(10), value}});
            emit_pending(tx, {cur}, {cur.op.txid});
            cur = m_pending.back();
            m_pending.pop_back();
        }
        m_pending.push_back(cur);
    }

    void peel(std::size_t budget)
    {
        const bool confirmed = m_rng.chance(1, 2);
        const std::size_t length = std::min<std::size_t>(budget, 2 + m_rng.below(4));
        const bool want_fork = budget > length && m_rng.chance(1, 4);
        auto start = take(m_confirmed, 1'000'000);
        if (!start) {
            coinbase();
            return;
        }
        std::vector<Utxo>& pool = confirmed ? m_confirmed : m_pending;
        Utxo cur = *start;
        std::optional<Utxo> fork_from;
        for (std::size_t i = 0; i < length; ++i) {
            const Amount small = m_rng.range(cur.value / 50, cur.value / 8);
            const Amount big = cur.value - small - fee();
            if (big < 600 || small < 600) break;
            std::vector<std::pair<std::uint64_t, Amount>> outs{{some_address(), small}, {fresh_address(), big}};
            const bool big_first = m_rng.chance(1, 2);
            if (big_first) std::swap(outs[0], outs[1]);
            Transaction tx = build_tracked({cur}, outs);
            if (confirmed) {
                emit_confirmed(tx, {cur});
            } else {
                emit_pending(tx, {cur}, {cur.op.txid});
            }
            // The two outputs were just appended; continue from the big one.
            Utxo second = pool.back();
            pool.pop_back();
            Utxo first = pool.back();
            pool.pop_back();
            if (big_first) std::swap(first, second);
            cur = second;
            if (want_fork && !fork_from) {
                fork_from = first;
            } else {
                pool.push_back(first);
            }
        }
        pool.push_back(cur);
        if (!fork_from) return;
        const Amount pay = fork_from->value / 3;
        const Amount rest = fork_from->value - pay - fee();
        if (rest < 600) {
            pool.push_back(*fork_from);
            return;
        }
        Transaction tx = build_tracked({*fork_from}, {{some_address(), pay}, {fresh_address(), rest}});
        if (confirmed) {
            emit_confirmed(tx, {*fork_from});
        } else {
            emit_pending(tx, {*fork_from}, {fork_from->op.txid});
        }
    }

    void fusiform(std::size_t budget)
    {
        const std::size_t branches = 2 + m_rng.below(2);
        const std::size_t hops = m_rng.below(3);
        const bool address_sink = hops > 0 && m_rng.chance(1, 2);
        const std::size_t needed = 1 + branches * hops + (address_sink ? 0 : 1);
        if (needed > budget) {
            coinbase();
            return;
        }
        auto start = take(m_confirmed, 200'000);
        if (!start) {
            coinbase();
            return;
        }
        const Amount each = (start->value - fee()) / static_cast<Amount>(branches);
        std::vector<std::pair<std::uint64_t, Amount>> outs;
        for (std::size_t b = 0; b < branches; ++b) outs.emplace_back(some_address(5), each - 17 * static_cast<Amount>(b));
        Transaction source = build_tracked({*start}, outs);
        emit_pending(source, {*start}, {});
        std::vector<Utxo> ends(m_pending.end() - static_cast<std::ptrdiff_t>(branches), m_pending.end());
        m_pending.resize(m_pending.size() - branches);

        const std::uint64_t sink_address = fresh_address();
        for (std::size_t b = 0; b < branches; ++b) {
            for (std::size_t h = 0; h < hops; ++h) {
                const bool last = h + 1 == hops;
                const std::uint64_t to = address_sink && last ? sink_address : some_address(5);
                Transaction tx = build_tracked({ends[b]}, {{to, ends[b].value - fee()}});
                emit_pending(tx, {ends[b]}, {ends[b].op.txid});
                ends[b] = m_pending.back();
                m_pending.pop_back();
            }
        }
        if (address_sink) {
            m_pending.insert(m_pending.end(), ends.begin(), ends.end());
            return;
        }
        std::vector<Txid> parents;
        for (const auto& u : ends) parents.push_back(u.op.txid);
        Transaction sink = build_tracked(ends, {{some_address(5), total_in(ends) - fee()}});
        emit_pending(sink, ends, parents);
    }

    void coinjoin()
    {
        const std::size_t k = 3 + m_rng.below(3);
        std::vector<Utxo> ins = gather(m_confirmed, k);
        Amount smallest = INT64_MAX;
        for (const auto& u : ins) smallest = std::min(smallest, u.value);
        if (ins.size() < k || smallest < 200'000) {
            release(m_confirmed, ins);
            payment(false);
            return;
        }
        const Amount denomination = smallest / 2 + m_rng.range(0, 999);
        std::vector<std::pair<std::uint64_t, Amount>> outs;
        for (std::size_t i = 0; i < k; ++i) outs.emplace_back(fresh_address(), denomination);
        for (const auto& u : ins) outs.emplace_back(fresh_address(), u.value - denomination - 300);
        Transaction tx = build_tracked(ins, outs);
        emit_confirmed(tx, ins);
    }

    Rng m_rng;
    ShapeWeights m_weights;
    std::ostream& m_out;
    std::size_t m_written{0};
    Timestamp m_now{BASE_TIME};
    std::int64_t m_height{BASE_HEIGHT};
    std::uint32_t m_in_block{0};
    std::uint64_t m_next_address{0};
    std::vector<Utxo> m_confirmed;
    std::vector<Utxo> m_pending;
    std::vector<std::uint64_t> m_last_ids;
};

} // namespace

std::vector<std::string> scenario_names()
{
    return {"fig3_binance", "fig4_dust", "fig5_rc", "fig6_oc", "fig7_fc", "fig7_fc1", "fig7_fc2", "fig7_fc3",
            "fig9_ni", "fig10_pc", "random"};
}

void generate_random(std::uint64_t seed, std::size_t n_txs, const ShapeWeights& weights, std::ostream& out)
{
    RandomCorpus corpus(seed, weights, out);
    corpus.run(n_txs);
}

void generate(std::string_view scenario, std::uint64_t seed, std::size_t n_txs, std::ostream& out)
{
    if (scenario == "fig3_binance") return fig3_binance(out);
    if (scenario == "fig4_dust") return fig4_dust(out);
    if (scenario == "fig5_rc") return fig5_rc(out);
    if (scenario == "fig6_oc") return fig6_oc(out);
    if (scenario == "fig7_fc1") return fig7_case(out, 1, "");
    if (scenario == "fig7_fc2") return fig7_case(out, 2, "");
    if (scenario == "fig7_fc3") return fig7_case(out, 3, "");
    if (scenario == "fig7_fc") {
        for (int i = 1; i <= 3; ++i) fig7_case(out, i, "case" + std::to_string(i) + ".");
        return;
    }
    if (scenario == "fig9_ni") return fig9_ni(out);
    if (scenario == "fig10_pc") return fig10_pc(out);
    if (scenario == "random") return generate_random(seed, n_txs, ShapeWeights{}, out);
    throw UnknownScenario(std::string(scenario));
}

std::string generate(std::string_view scenario, std::uint64_t seed, std::size_t n_txs)
{
    std::ostringstream out;
    generate(scenario, seed, n_txs, out);
    return out.str();
}

} // namespace txcluster
