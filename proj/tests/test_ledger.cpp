#include <doctest.h>

#include <sstream>

#include "veriblock/ledger.hpp"

using namespace veriblock;

namespace {

Bytes payload(const std::string& s) { return Bytes(s.begin(), s.end()); }

/// Applier stub: every transaction emits one EvidenceSubmitted event carrying
/// an empty review tagged with the tx id.
Ledger::Applier echo_applier() {
    return [](const Transaction& tx) {
        Review r;
        r.review_id = tx.tx_id;
        return std::vector<Ledger::PendingEvent>{
            {EventKind::EvidenceSubmitted, tx.tx_id, r}};
    };
}

}  // namespace

TEST_CASE("first transaction lands in the next sealed block") {
    Ledger ledger;
    TxId id = ledger.append_transaction("acct-a", payload("incident"), 0);
    CHECK(id == 1);
    CHECK(ledger.pending_count() == 1);
    const Block& b = ledger.seal_block(12);
    CHECK(b.height == 1);
    REQUIRE(b.transactions.size() == 1);
    CHECK(b.transactions[0].tx_id == id);
    CHECK(ledger.find_transaction(id) != nullptr);
}

TEST_CASE("empty payload is rejected") {
    Ledger ledger;
    CHECK_THROWS_AS(ledger.append_transaction("acct-a", {}, 5), Error);
    try {
        ledger.append_transaction("acct-a", {}, 5);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EmptyPayload);
    }
}

TEST_CASE("simulation clock may not regress") {
    Ledger ledger;
    ledger.append_transaction("acct-a", payload("x"), 10);
    try {
        ledger.append_transaction("acct-a", payload("y"), 9);
        FAIL("expected ClockRegression");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ClockRegression);
    }
}

TEST_CASE("1000-transaction batch spans ceil(1000/capacity) blocks in order") {
    Ledger ledger(200);
    for (int i = 0; i < 1000; ++i)
        ledger.append_transaction("acct-a", payload("tx" + std::to_string(i)), i);
    int seals = 0;
    while (ledger.pending_count() > 0) {
        ledger.seal_block(1000 + seals);
        ++seals;
    }
    CHECK(seals == 5);
    TxId expected = 1;
    for (std::size_t h = 1; h < ledger.blocks().size(); ++h)
        for (const auto& tx : ledger.blocks()[h].transactions) CHECK(tx.tx_id == expected++);
    CHECK(expected == 1001);
}

TEST_CASE("sealing an empty pool yields an empty block") {
    Ledger ledger;
    auto height_before = ledger.blocks().back().height;
    const Block& b = ledger.seal_block(12);
    CHECK(b.transactions.empty());
    CHECK(b.height == height_before + 1);
}

TEST_CASE("consecutive seals link by digest") {
    Ledger ledger;
    ledger.append_transaction("a", payload("1"), 0);
    const Block& b1 = ledger.seal_block(12);
    Hash256 d1 = b1.digest();
    const Block& b2 = ledger.seal_block(24);
    CHECK(b2.prev_hash == d1);
    CHECK(ledger.verify_chain());
}

TEST_CASE("tampering any stored byte breaks verification") {
    Ledger ledger;
    for (int i = 0; i < 10; ++i) {
        ledger.append_transaction("a", payload("tx" + std::to_string(i)), i);
        ledger.seal_block(i);
    }
    CHECK(ledger.verify_chain());

    std::ostringstream dump;
    ledger.dump_binary(dump);

    SUBCASE("flip one payload byte") {
        std::istringstream in(dump.str());
        auto blocks = Ledger::load_binary(in);
        blocks[4].transactions[0].payload[0] ^= 0x01;
        std::int64_t bad = -1;
        CHECK_FALSE(Ledger::verify_blocks(blocks, &bad));
        CHECK(bad == 4);
    }

    SUBCASE("re-hashed mid-chain forgery still breaks the successor link") {
        std::istringstream in(dump.str());
        auto blocks = Ledger::load_binary(in);
        blocks[4].transactions[0].sender = "forger";
        blocks[4].body_hash = Block::compute_body_hash(blocks[4].transactions);
        std::int64_t bad = -1;
        CHECK_FALSE(Ledger::verify_blocks(blocks, &bad));
        CHECK(bad == 5);  // successor's prev_hash no longer matches
    }
}

TEST_CASE("events_since returns the ordered tail and never mutates") {
    Ledger ledger;
    ledger.set_applier(echo_applier());
    CHECK(ledger.events_since(0).empty());

    ledger.append_transaction("a", payload("e1"), 0);
    ledger.append_transaction("b", payload("e2"), 1);
    ledger.append_transaction("c", payload("e3"), 2);
    ledger.seal_block(12);

    auto all = ledger.events_since(0);
    REQUIRE(all.size() == 3);
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].event_seq == i + 1);

    auto again = ledger.events_since(0);
    REQUIRE(again.size() == all.size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(again[i].event_seq == all[i].event_seq);

    CHECK(ledger.events_since(ledger.last_event_seq()).empty());
    auto tail = ledger.events_since(2);
    REQUIRE(tail.size() == 1);
    CHECK(tail[0].event_seq == 3);
}

TEST_CASE("identical input sequences produce bit-identical chains") {
    auto build = [] {
        Ledger ledger;
        for (int i = 0; i < 50; ++i) {
            ledger.append_transaction("acct-" + std::to_string(i % 7),
                                      payload("p" + std::to_string(i * 31)), i);
            if (i % 5 == 0) ledger.seal_block(i);
        }
        ledger.seal_block(50);
        std::ostringstream out;
        ledger.dump_binary(out);
        return out.str();
    };
    CHECK(build() == build());
}

TEST_CASE("binary dump round-trips and genesis records the digest id") {
    Ledger ledger;
    ledger.append_transaction("a", payload("x"), 0);
    ledger.seal_block(12);
    std::ostringstream dump;
    ledger.dump_binary(dump);
    std::istringstream in(dump.str());
    auto blocks = Ledger::load_binary(in);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].prev_hash == kZeroHash);
    std::string algo(blocks[0].transactions.at(0).payload.begin(),
                     blocks[0].transactions.at(0).payload.end());
    CHECK(algo == kHashAlgorithmId);
    CHECK(Ledger::verify_blocks(blocks));
}

TEST_CASE("truncated dump is rejected as malformed") {
    Ledger ledger;
    ledger.append_transaction("a", payload("x"), 0);
    ledger.seal_block(12);
    std::ostringstream dump;
    ledger.dump_binary(dump);
    std::string cut = dump.str().substr(0, dump.str().size() - 3);
    std::istringstream in(cut);
    CHECK_THROWS_AS(Ledger::load_binary(in), Error);
}
