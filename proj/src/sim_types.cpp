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

#include "tfa/sim/types.hpp"

namespace tfa::sim {

const char* actor_name(ActorId a) {
    switch (a) {
        case ActorId::User: return "user";
        case ActorId::Rc: return "center";
        case ActorId::Server: return "server";
        case ActorId::Adversary: return "adversary";
    }
    return "?";
}

const char* channel_name(ChannelClass c) {
    switch (c) {
        case ChannelClass::Secure: return "secure";
        case ChannelClass::Insecure: return "insecure";
        case ChannelClass::OutOfBand: return "out-of-band";
    }
    return "?";
}

const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::PhaseComplete: return "phase-complete";
        case EventKind::PhaseAborted: return "phase-aborted";
        case EventKind::CheckFailed: return "check-failed";
        case EventKind::IllegalStat: return "illegal-stat";
        case EventKind::UnknownPrincipal: return "unknown-principal";
        case EventKind::BiometricRejected: return "biometric-rejected";
        case EventKind::CardAccepted: return "card-accepted";
        case EventKind::CardRejected: return "card-rejected";
        case EventKind::StoreReverted: return "store-reverted";
        case EventKind::SessionKeyEstablished: return "session-key";
        case EventKind::LoginAccepted: return "login-accepted";
        case EventKind::AuthConfirmed: return "auth-confirmed";
        case EventKind::Deregistered: return "deregistered";
        case EventKind::RetryStarted: return "retry";
    }
    return "?";
}

void StepResult::merge(StepResult&& other) {
    for (auto& o : other.out) out.push_back(std::move(o));
    for (auto& e : other.events) events.push_back(std::move(e));
}

}  // namespace tfa::sim
