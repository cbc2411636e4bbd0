#pragma once

#include "veriblock/contracts.hpp"
#include "veriblock/ledger.hpp"

namespace veriblock {

/// A ledger wired to the contract engine: submitted calls queue as
/// transactions and take effect when their block seals. Sealing happens on a
/// fixed simulated interval via advance_to, or explicitly.
class Node {
public:
    explicit Node(ContractParams contract_params = {}, SimTime block_interval_s = 12,
                  std::size_t block_capacity = 200);

    TxId submit(const AccountId& sender, const ContractCall& call, SimTime sim_time);

    /// Seals every due block up to sim_time (interval cadence).
    void advance_to(SimTime sim_time);
    const Block& seal_now(SimTime sim_time);
    /// Seals until the pending pool drains.
    void flush(SimTime sim_time);

    Ledger& ledger() { return ledger_; }
    const Ledger& ledger() const { return ledger_; }
    ContractEngine& contracts() { return contracts_; }
    const ContractEngine& contracts() const { return contracts_; }

private:
    Ledger ledger_;
    ContractEngine contracts_;
    SimTime block_interval_;
    SimTime next_seal_;
};

}  // namespace veriblock
