//------------------------------------------------------------------------------
//
//   Copyright 2026 tfa-lab contributors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Deterministic message fabric: FIFO delivery over three channel classes,
// scripted fault injection, passive adversary observation on the insecure
// class, and a byte-stable transcript of everything that crossed a channel.

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfa/crypto.hpp"
#include "tfa/proposed/actors.hpp"
#include "tfa/sim/adversary.hpp"
#include "tfa/sim/types.hpp"

namespace tfa::sim {

/// Scripted fault kinds. Corrupt models a transmission/environment fault
/// and may target any channel (it is how the documented failure branches
/// get exercised); drop, duplicate and delay-reorder are the adversary's
/// own grammar and only ever apply to the insecure channel.
enum class FaultKind : std::uint8_t {
    Corrupt = 0,   // flip one bit in `field`
    Drop,          // swallow the delivery
    Duplicate,     // deliver twice
    Delay,         // hold back `window` deliveries, then deliver
};

/// One scripted fault: applies to the `msg_index`-th message (1-based)
/// bearing `phase`, counted across the whole run; applied at most once.
struct FaultSpec {
    Phase phase{};
    std::size_t msg_index = 0;
    FieldId field{};
    FaultKind kind = FaultKind::Corrupt;
    std::size_t window = 1;  // Delay only

    friend bool operator==(const FaultSpec& a, const FaultSpec& b) = default;
};

class Transcript {
public:
    struct Line {
        bool is_event;
        std::size_t seq;          // deliveries only
        ActorId from;
        ActorId to;
        ChannelClass channel{};
        Bytes envelope;           // wire bytes as delivered
        std::string note;         // fault / adversary annotations
        ActorId event_actor;      // events only
        Event event;
    };

    void add_delivery(std::size_t seq, ActorId from, ActorId to, ChannelClass cls,
                      const Bytes& wire, std::string note);
    void add_event(ActorId actor, const Event& e);

    const std::vector<Line>& lines() const { return lines_; }

    /// One envelope per line in hex with channel annotations; events as
    /// '#'-prefixed lines.
    std::string render() const;
    Block32 digest() const;

    /// Number of insecure-channel deliveries whose wire bytes contain the
    /// given secret as a substring.
    std::size_t scan_insecure(ByteSpan secret) const;

    /// Adversary annotations present on secure or out-of-band lines
    /// (must stay zero; audited by scenarios).
    std::size_t adversary_reads_off_limits() const;

private:
    std::vector<Line> lines_;
};

class Fabric {
public:
    using Handler = std::function<StepResult(const Envelope&)>;

    /// Returns true to drop the delivery (insecure channel only). May call
    /// Fabric::inject re-entrantly.
    using Interceptor = std::function<bool(const Envelope&, ActorId from, ActorId to)>;

    explicit Fabric(std::vector<FaultSpec> faults = {});

    void register_actor(ActorId id, Handler handler);
    void set_interceptor(Interceptor f) { interceptor_ = std::move(f); }

    /// Queue everything an actor produced, logging its events.
    void post(ActorId from, StepResult&& result);

    /// Adversary-crafted message; only legal on the insecure channel.
    void inject(const Envelope& env, ActorId to, std::string note);

    /// Deliver until quiescence. False when the step budget ran out.
    bool pump(std::size_t budget = 100000);

    Transcript& transcript() { return transcript_; }
    const Transcript& transcript() const { return transcript_; }
    Knowledge& adversary() { return adversary_; }
    const Knowledge& adversary() const { return adversary_; }

    const std::vector<std::pair<ActorId, Event>>& events() const { return events_; }
    std::size_t event_count(EventKind kind, std::string_view detail = {}) const;
    std::size_t event_count_since(std::size_t start, EventKind kind,
                                  std::string_view detail = {}) const;

private:
    struct Pending {
        ActorId from;
        ActorId to;
        ChannelClass channel;
        Envelope env;
        std::string note;
        std::size_t delay = 0;  // deliveries to let pass first
        bool counted = false;   // already seen by the fault counter
    };

    enum class FaultAction { Deliver, Drop, Requeue };
    FaultAction apply_faults(Pending& p);

    std::deque<Pending> queue_;
    std::vector<FaultSpec> faults_;
    std::vector<bool> fault_used_;
    std::map<Phase, std::size_t> phase_counters_;
    std::map<ActorId, Handler> handlers_;
    Interceptor interceptor_;
    Transcript transcript_;
    Knowledge adversary_;
    std::vector<std::pair<ActorId, Event>> events_;
    std::size_t seq_ = 0;
};

}  // namespace tfa::sim
