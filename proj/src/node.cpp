#include "veriblock/node.hpp"

namespace veriblock {

Node::Node(ContractParams contract_params, SimTime block_interval_s, std::size_t block_capacity)
    : ledger_(block_capacity),
      contracts_(contract_params),
      block_interval_(block_interval_s),
      next_seal_(block_interval_s) {
    ledger_.set_applier([this](const Transaction& tx) { return contracts_.apply(tx); });
}

TxId Node::submit(const AccountId& sender, const ContractCall& call, SimTime sim_time) {
    advance_to(sim_time);
    return ledger_.append_transaction(sender, encode_call(call), sim_time);
}

void Node::advance_to(SimTime sim_time) {
    while (next_seal_ <= sim_time) {
        ledger_.seal_block(next_seal_);
        next_seal_ += block_interval_;
    }
}

const Block& Node::seal_now(SimTime sim_time) { return ledger_.seal_block(sim_time); }

void Node::flush(SimTime sim_time) {
    do {
        ledger_.seal_block(sim_time);
    } while (ledger_.pending_count() > 0);
    if (next_seal_ <= sim_time) next_seal_ = sim_time + block_interval_;
}

}  // namespace veriblock
