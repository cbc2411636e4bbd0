#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "veriblock/bytes.hpp"
#include "veriblock/domain.hpp"
#include "veriblock/hash.hpp"
#include "veriblock/types.hpp"

namespace veriblock {

struct Transaction {
    TxId tx_id = 0;
    AccountId sender;
    Bytes payload;
    SimTime sim_time = 0;

    Bytes canonical_bytes() const;
    bool operator==(const Transaction&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Hash256 prev_hash = kZeroHash;
    Hash256 body_hash = kZeroHash;
    std::vector<Transaction> transactions;
    SimTime sealed_at = 0;

    /// Canonical bytes, also the hashing preimage for the chain link.
    Bytes canonical_bytes() const;
    Hash256 digest() const;
    static Hash256 compute_body_hash(const std::vector<Transaction>& txs);
};

enum class EventKind : std::uint8_t {
    IncidentReported = 0,
    EvidenceSubmitted = 1,
    TrustScoreRequested = 2,
    TrustScoreDelivered = 3,
};

const char* event_kind_name(EventKind k);

using EventPayload = std::variant<Incident, Review, TrustRequest, TrustScoreRecord>;

struct LedgerEvent {
    EventSeq event_seq = 0;  // 1-based, strictly increasing, no gaps
    EventKind kind = EventKind::IncidentReported;
    std::uint64_t subject_id = 0;
    SimTime emitted_at = 0;
    EventPayload payload;
};

/// Simulated append-only hash-chained chain. Transactions queue in a pending
/// pool and enter the chain at the next seal; sealing invokes the registered
/// applier for each transaction and appends whatever events it produces.
class Ledger {
public:
    /// Applies a sealed transaction to contract state. Returns the events to
    /// emit; kind/subject/payload are taken from each entry, seq and time are
    /// assigned by the ledger.
    struct PendingEvent {
        EventKind kind;
        std::uint64_t subject_id;
        EventPayload payload;
    };
    using Applier = std::function<std::vector<PendingEvent>(const Transaction&)>;

    explicit Ledger(std::size_t block_capacity = 200);

    void set_applier(Applier applier) { applier_ = std::move(applier); }
    std::size_t block_capacity() const { return block_capacity_; }

    TxId append_transaction(const AccountId& sender, Bytes payload, SimTime sim_time);
    const Block& seal_block(SimTime sim_time);
    bool verify_chain() const;

    /// Height of the first block whose link or body hash fails, or -1 if intact.
    std::int64_t first_bad_height() const;

    std::vector<LedgerEvent> events_since(EventSeq cursor) const;
    EventSeq last_event_seq() const { return events_.empty() ? 0 : events_.back().event_seq; }

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t pending_count() const { return pending_.size(); }
    std::uint64_t rejected_count() const { return rejected_; }

    const Transaction* find_transaction(TxId id) const;

    void dump_binary(std::ostream& out) const;
    void dump_jsonl(std::ostream& out) const;

    /// Rebuilds just the block list from a binary dump (no events; used by
    /// offline chain verification). Throws Error(MalformedPayload) on damage
    /// that breaks framing.
    static std::vector<Block> load_binary(std::istream& in);
    static bool verify_blocks(const std::vector<Block>& blocks, std::int64_t* first_bad = nullptr);

private:
    std::vector<Block> blocks_;
    std::vector<Transaction> pending_;
    std::vector<LedgerEvent> events_;
    Applier applier_;
    std::size_t block_capacity_ = 200;
    TxId next_tx_id_ = 1;
    SimTime last_tx_time_ = 0;
    std::uint64_t rejected_ = 0;
};

}  // namespace veriblock
