#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cuckoo/value.hpp"

namespace cuckoo {

struct ProtocolStep {
    Value state;
    std::map<int, Value> sends; // receiver -> value, decided for the new round
    std::optional<Value> output;
};

// A deterministic round-based protocol for the synchronous benign model,
// expressed as a transition function over (received messages, state, round).
//
// Conventions the engine and the benign executor both rely on:
//  - round-1 sends are the processor's raw input broadcast to everyone
//    (initial() produces the state after round 1)
//  - step(received, state, r) consumes the round r-1 receptions and decides
//    the round-r actions, for 2 <= r <= rounds()
//  - every run outputs by round rounds(); identical arguments always yield
//    identical results, replicas depend on it
class SyncProtocol {
  public:
    virtual ~SyncProtocol() = default;
    virtual std::string name() const = 0;
    virtual int rounds() const = 0;
    virtual bool validate_input(const Value& input) const = 0;
    virtual Value initial(const Value& input) const = 0;
    virtual ProtocolStep step(const std::map<int, Value>& received, const Value& state,
                              int round) const = 0;
};

} // namespace cuckoo
