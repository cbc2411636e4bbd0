#include "veriblock/ledger.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace veriblock {

namespace {
constexpr char kDumpMagic[8] = {'V', 'B', 'C', 'H', 'A', 'I', 'N', '1'};
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::IncidentReported: return "IncidentReported";
        case EventKind::EvidenceSubmitted: return "EvidenceSubmitted";
        case EventKind::TrustScoreRequested: return "TrustScoreRequested";
        case EventKind::TrustScoreDelivered: return "TrustScoreDelivered";
    }
    return "Unknown";
}

Bytes Transaction::canonical_bytes() const {
    ByteWriter w;
    w.u64(tx_id);
    w.str(sender);
    w.blob(payload);
    w.i64(sim_time);
    return w.take();
}

Bytes Block::canonical_bytes() const {
    ByteWriter w;
    w.u64(height);
    w.raw(prev_hash);
    w.raw(body_hash);
    w.i64(sealed_at);
    w.u32(static_cast<std::uint32_t>(transactions.size()));
    for (const auto& tx : transactions) w.blob(tx.canonical_bytes());
    return w.take();
}

Hash256 Block::digest() const { return sha256(canonical_bytes()); }

Hash256 Block::compute_body_hash(const std::vector<Transaction>& txs) {
    ByteWriter w;
    for (const auto& tx : txs) w.blob(tx.canonical_bytes());
    return sha256(w.bytes());
}

Ledger::Ledger(std::size_t block_capacity) : block_capacity_(std::max<std::size_t>(1, block_capacity)) {
    // Genesis carries the pinned digest identifier as its single reserved
    // transaction, so a dump is self-describing.
    Transaction header;
    header.tx_id = 0;
    header.sender = "genesis";
    const std::string algo = kHashAlgorithmId;
    header.payload.assign(algo.begin(), algo.end());
    header.sim_time = 0;

    Block genesis;
    genesis.height = 0;
    genesis.prev_hash = kZeroHash;
    genesis.transactions.push_back(std::move(header));
    genesis.body_hash = Block::compute_body_hash(genesis.transactions);
    genesis.sealed_at = 0;
    blocks_.push_back(std::move(genesis));
}

TxId Ledger::append_transaction(const AccountId& sender, Bytes payload, SimTime sim_time) {
    if (payload.empty()) throw Error(Errc::EmptyPayload, "transaction payload must be non-empty");
    if (sim_time < last_tx_time_)
        throw Error(Errc::ClockRegression, "sim_time earlier than last accepted transaction");
    Transaction tx;
    tx.tx_id = next_tx_id_++;
    tx.sender = sender;
    tx.payload = std::move(payload);
    tx.sim_time = sim_time;
    last_tx_time_ = sim_time;
    pending_.push_back(std::move(tx));
    return pending_.back().tx_id;
}

const Block& Ledger::seal_block(SimTime sim_time) {
    Block block;
    block.height = blocks_.back().height + 1;
    block.prev_hash = blocks_.back().digest();
    std::size_t take = std::min(block_capacity_, pending_.size());
    block.transactions.assign(std::make_move_iterator(pending_.begin()),
                              std::make_move_iterator(pending_.begin() + take));
    pending_.erase(pending_.begin(), pending_.begin() + take);
    block.body_hash = Block::compute_body_hash(block.transactions);
    block.sealed_at = sim_time;

    // Apply in block order; a transaction the contracts reject leaves no
    // event but stays on-chain.
    for (const auto& tx : block.transactions) {
        if (!applier_) continue;
        try {
            for (auto& pe : applier_(tx)) {
                LedgerEvent ev;
                ev.event_seq = events_.empty() ? 1 : events_.back().event_seq + 1;
                ev.kind = pe.kind;
                ev.subject_id = pe.subject_id;
                ev.emitted_at = sim_time;
                ev.payload = std::move(pe.payload);
                events_.push_back(std::move(ev));
            }
        } catch (const Error&) {
            ++rejected_;
        }
    }
    blocks_.push_back(std::move(block));
    return blocks_.back();
}

bool Ledger::verify_chain() const { return first_bad_height() < 0; }

std::int64_t Ledger::first_bad_height() const {
    std::int64_t bad = -1;
    verify_blocks(blocks_, &bad);
    return bad;
}

bool Ledger::verify_blocks(const std::vector<Block>& blocks, std::int64_t* first_bad) {
    if (first_bad) *first_bad = -1;
    Hash256 prev = kZeroHash;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        bool ok = b.height == i && b.prev_hash == prev &&
                  b.body_hash == Block::compute_body_hash(b.transactions);
        if (!ok) {
            if (first_bad) *first_bad = static_cast<std::int64_t>(i);
            return false;
        }
        prev = b.digest();
    }
    return true;
}

std::vector<LedgerEvent> Ledger::events_since(EventSeq cursor) const {
    std::vector<LedgerEvent> out;
    for (const auto& ev : events_)
        if (ev.event_seq > cursor) out.push_back(ev);
    return out;
}

const Transaction* Ledger::find_transaction(TxId id) const {
    for (const auto& b : blocks_)
        for (const auto& tx : b.transactions)
            if (tx.tx_id == id) return &tx;
    for (const auto& tx : pending_)
        if (tx.tx_id == id) return &tx;
    return nullptr;
}

void Ledger::dump_binary(std::ostream& out) const {
    out.write(kDumpMagic, sizeof kDumpMagic);
    for (const auto& b : blocks_) {
        Bytes bytes = b.canonical_bytes();
        ByteWriter w;
        w.u64(bytes.size());
        out.write(reinterpret_cast<const char*>(w.bytes().data()),
                  static_cast<std::streamsize>(w.bytes().size()));
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
}

std::vector<Block> Ledger::load_binary(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kDumpMagic, sizeof magic) != 0)
        throw Error(Errc::MalformedPayload, "bad chain dump magic");

    std::vector<Block> blocks;
    for (;;) {
        std::uint8_t lenbuf[8];
        in.read(reinterpret_cast<char*>(lenbuf), sizeof lenbuf);
        if (in.gcount() == 0 && in.eof()) break;
        if (in.gcount() != sizeof lenbuf)
            throw Error(Errc::MalformedPayload, "truncated block length");
        ByteReader lr(lenbuf);
        std::uint64_t len = lr.u64();
        if (len > (std::uint64_t{1} << 32))
            throw Error(Errc::MalformedPayload, "implausible block length");
        Bytes body(len);
        in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(len));
        if (static_cast<std::uint64_t>(in.gcount()) != len)
            throw Error(Errc::MalformedPayload, "truncated block body");

        ByteReader r(body);
        Block b;
        b.height = r.u64();
        for (auto& x : b.prev_hash) x = r.u8();
        for (auto& x : b.body_hash) x = r.u8();
        b.sealed_at = r.i64();
        std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            Bytes txb = r.blob();
            ByteReader tr(txb);
            Transaction tx;
            tx.tx_id = tr.u64();
            tx.sender = tr.str();
            tx.payload = tr.blob();
            tx.sim_time = tr.i64();
            if (!tr.exhausted()) throw Error(Errc::MalformedPayload, "trailing transaction bytes");
            b.transactions.push_back(std::move(tx));
        }
        if (!r.exhausted()) throw Error(Errc::MalformedPayload, "trailing block bytes");
        blocks.push_back(std::move(b));
    }
    if (blocks.empty()) throw Error(Errc::MalformedPayload, "empty chain dump");
    return blocks;
}

void Ledger::dump_jsonl(std::ostream& out) const {
    for (const auto& b : blocks_) {
        nlohmann::json j;
        j["height"] = b.height;
        j["prev_hash"] = to_hex(b.prev_hash);
        j["body_hash"] = to_hex(b.body_hash);
        std::vector<TxId> ids;
        for (const auto& tx : b.transactions) ids.push_back(tx.tx_id);
        j["tx_ids"] = ids;
        out << j.dump() << '\n';
    }
}

}  // namespace veriblock
