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

#include "tfa/sim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace tfa::sim {

void Transcript::add_delivery(std::size_t seq, ActorId from, ActorId to, ChannelClass cls,
                              const Bytes& wire, std::string note) {
    Line line;
    line.is_event = false;
    line.seq = seq;
    line.from = from;
    line.to = to;
    line.channel = cls;
    line.envelope = wire;
    line.note = std::move(note);
    line.event_actor = ActorId::User;
    line.event = Event{EventKind::PhaseComplete, ""};
    lines_.push_back(std::move(line));
}

void Transcript::add_event(ActorId actor, const Event& e) {
    Line line;
    line.is_event = true;
    line.seq = 0;
    line.from = actor;
    line.to = actor;
    line.event_actor = actor;
    line.event = e;
    lines_.push_back(std::move(line));
}

std::string Transcript::render() const {
    std::string out;
    for (const Line& line : lines_) {
        if (line.is_event) {
            out += "# ";
            out += actor_name(line.event_actor);
            out += ' ';
            out += event_name(line.event.kind);
            if (!line.event.detail.empty()) {
                out += ' ';
                out += line.event.detail;
            }
            out += '\n';
            continue;
        }
        out += std::to_string(line.seq);
        out += ' ';
        out += actor_name(line.from);
        out += "->";
        out += actor_name(line.to);
        out += ' ';
        out += channel_name(line.channel);
        out += ' ';
        out += to_hex(line.envelope);
        if (!line.note.empty()) {
            out += " [";
            out += line.note;
            out += ']';
        }
        out += '\n';
    }
    return out;
}

Block32 Transcript::digest() const {
    std::string text = render();
    return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::size_t Transcript::scan_insecure(ByteSpan secret) const {
    if (secret.empty()) return 0;
    std::size_t hits = 0;
    for (const Line& line : lines_) {
        if (line.is_event || line.channel != ChannelClass::Insecure) continue;
        auto it = std::search(line.envelope.begin(), line.envelope.end(), secret.begin(),
                              secret.end());
        if (it != line.envelope.end()) ++hits;
    }
    return hits;
}

std::size_t Transcript::adversary_reads_off_limits() const {
    std::size_t count = 0;
    for (const Line& line : lines_) {
        if (line.is_event || line.channel == ChannelClass::Insecure) continue;
        if (line.note.find("adv") != std::string::npos) ++count;
    }
    return count;
}

Fabric::Fabric(std::vector<FaultSpec> faults)
    : faults_(std::move(faults)), fault_used_(faults_.size(), false) {}

void Fabric::register_actor(ActorId id, Handler handler) {
    handlers_[id] = std::move(handler);
}

void Fabric::post(ActorId from, StepResult&& result) {
    for (auto& event : result.events) {
        transcript_.add_event(from, event);
        events_.emplace_back(from, std::move(event));
    }
    for (auto& outgoing : result.out) {
        queue_.push_back(
            Pending{from, outgoing.to, outgoing.channel, std::move(outgoing.env), ""});
    }
}

void Fabric::inject(const Envelope& env, ActorId to, std::string note) {
    queue_.push_back(
        Pending{ActorId::Adversary, to, ChannelClass::Insecure, env, "adv-inject:" + note});
}

Fabric::FaultAction Fabric::apply_faults(Pending& p) {
    if (p.counted) return FaultAction::Deliver;  // requeued delays count once
    p.counted = true;
    std::size_t index = ++phase_counters_[p.env.phase];
    FaultAction action = FaultAction::Deliver;
    for (std::size_t i = 0; i < faults_.size(); ++i) {
        if (fault_used_[i]) continue;
        const FaultSpec& f = faults_[i];
        if (f.phase != p.env.phase || f.msg_index != index) continue;
        // the adversary's own grammar touches only the insecure channel
        if (f.kind != FaultKind::Corrupt && p.channel != ChannelClass::Insecure) continue;
        auto note = [&](const char* what) {
            if (!p.note.empty()) p.note += ',';
            p.note += what;
        };
        switch (f.kind) {
            case FaultKind::Corrupt:
                for (auto& [id, bytes] : p.env.fields) {
                    if (id == f.field && !bytes.empty()) {
                        bytes[0] ^= 0x01;
                        fault_used_[i] = true;
                        note("fault:");
                        p.note += field_name(f.field);
                        break;
                    }
                }
                break;
            case FaultKind::Drop:
                fault_used_[i] = true;
                note("adv-drop");
                action = FaultAction::Drop;
                break;
            case FaultKind::Duplicate:
                fault_used_[i] = true;
                note("adv-duplicate");
                {
                    Pending copy = p;
                    copy.counted = false;  // the copy is a fresh wire message
                    copy.note = "adv-duplicated";
                    queue_.push_back(std::move(copy));
                }
                break;
            case FaultKind::Delay:
                fault_used_[i] = true;
                note("adv-delay");
                p.delay = f.window;
                action = FaultAction::Requeue;
                break;
        }
    }
    return action;
}

bool Fabric::pump(std::size_t budget) {
    while (!queue_.empty()) {
        if (budget-- == 0) return false;
        Pending p = std::move(queue_.front());
        queue_.pop_front();

        if (p.delay > 0) {
            // held back by a delay fault: let others through first
            --p.delay;
            if (!queue_.empty()) {
                queue_.push_back(std::move(p));
                continue;
            }
        }

        switch (apply_faults(p)) {
            case FaultAction::Drop:
                transcript_.add_delivery(seq_++, p.from, p.to, p.channel, p.env.encode(),
                                         p.note);
                continue;
            case FaultAction::Requeue:
                queue_.push_back(std::move(p));
                continue;
            case FaultAction::Deliver:
                break;
        }

        // adversary taps every insecure delivery (and only those)
        if (p.channel == ChannelClass::Insecure) {
            adversary_.observe_envelope(p.env, phase_name(p.env.phase));
            if (p.note.empty()) {
                p.note = "adv-observed";
            } else {
                p.note += ",adv-observed";
            }
            if (interceptor_ && interceptor_(p.env, p.from, p.to)) {
                transcript_.add_delivery(seq_++, p.from, p.to, p.channel, p.env.encode(),
                                         p.note + ",adv-dropped");
                continue;
            }
        }

        Bytes wire = p.env.encode();
        transcript_.add_delivery(seq_++, p.from, p.to, p.channel, wire, p.note);

        auto handler = handlers_.find(p.to);
        if (handler == handlers_.end()) continue;  // dropped on the floor

        // actors consume the wire form: whatever the codec rejects, the
        // actor never sees
        auto decoded = Envelope::decode(wire);
        if (!decoded.ok()) continue;
        post(p.to, handler->second(decoded.value()));
    }
    return true;
}

std::size_t Fabric::event_count(EventKind kind, std::string_view detail) const {
    return event_count_since(0, kind, detail);
}

std::size_t Fabric::event_count_since(std::size_t start, EventKind kind,
                                      std::string_view detail) const {
    std::size_t count = 0;
    for (std::size_t i = start; i < events_.size(); ++i) {
        if (events_[i].second.kind != kind) continue;
        if (!detail.empty() && events_[i].second.detail != detail) continue;
        ++count;
    }
    return count;
}

}  // namespace tfa::sim
