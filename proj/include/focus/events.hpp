#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focus/error.hpp"

namespace focus {

struct RelatedConcept {
    std::string code;
    double weight = 1.0;  // (0, 1]
};

/// One semantic action reported by the host system: an action type plus the
/// concept codes it involved. `related` carries concepts the host considers
/// adjacent to the action, each with a reduced weight. Wall-clock time is
/// informational only; the model clock is the action sequence number.
struct ActionEvent {
    std::string action_type;
    std::vector<std::string> concepts;
    std::vector<RelatedConcept> related;
    std::optional<std::string> wall_time;

    bool operator==(const ActionEvent&) const = default;
};

/// Parses one action-log line (JSON: `action`, `concepts`, optional
/// `related`, optional `wall_time`).
ActionEvent parse_action_event(const std::string& line);

/// Serializes an event back to its action-log line form.
std::string serialize_action_event(const ActionEvent& event);

/// One (action, time step, concept, weight) tuple; the unit the focus model
/// is built from. All tuples of one event share a time step.
struct TimedActionConcept {
    std::string action_type;
    int time_step = 0;
    std::string concept;
    double weight = 1.0;

    bool operator==(const TimedActionConcept&) const = default;
};

/// Expands events in arrival order; event i gets time step i, its direct
/// concepts weight 1 and its related concepts their own weights.
std::vector<TimedActionConcept> assign_time_steps(std::span<const ActionEvent> events);

bool operator==(const RelatedConcept& a, const RelatedConcept& b);

}  // namespace focus
