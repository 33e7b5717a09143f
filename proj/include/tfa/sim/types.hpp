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

#pragma once

#include <string>
#include <vector>

#include "tfa/envelope.hpp"

namespace tfa::sim {

enum class ActorId : std::uint8_t {
    User = 0,
    Rc = 1,
    Server = 2,
    Adversary = 3,
};

const char* actor_name(ActorId a);

/// Secure: private and authentic; the adversary neither reads nor writes.
/// Insecure: the adversary reads, injects, drops, replays and reorders.
/// OutOfBand: the recovery-contact path; invisible to the adversary.
enum class ChannelClass : std::uint8_t {
    Secure = 0,
    Insecure = 1,
    OutOfBand = 2,
};

const char* channel_name(ChannelClass c);

enum class EventKind : std::uint8_t {
    PhaseComplete,
    PhaseAborted,
    CheckFailed,   // detail names the failed check
    IllegalStat,
    UnknownPrincipal,
    BiometricRejected,
    CardAccepted,
    CardRejected,
    StoreReverted,
    SessionKeyEstablished,
    LoginAccepted,  // responder verified the request and issued a challenge
    AuthConfirmed,  // responder verified the final confirmation
    Deregistered,
    RetryStarted,
};

const char* event_name(EventKind k);

struct Event {
    EventKind kind;
    std::string detail;

    friend bool operator==(const Event& a, const Event& b) = default;
};

/// A message an actor wants delivered, with its destination and the channel
/// class the protocol mandates for this hop.
struct Outgoing {
    Envelope env;
    ActorId to;
    ChannelClass channel;
};

struct StepResult {
    std::vector<Outgoing> out;
    std::vector<Event> events;

    void merge(StepResult&& other);
};

}  // namespace tfa::sim
