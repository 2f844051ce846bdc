#include "focus/events.hpp"

#include <json.hpp>

namespace focus {

bool operator==(const RelatedConcept& a, const RelatedConcept& b) {
    return a.code == b.code && a.weight == b.weight;
}

ActionEvent parse_action_event(const std::string& line) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed action event: ") + e.what());
    }
    if (!obj.is_object()) throw Error("malformed action event: expected a JSON object");
    if (!obj.contains("action") || !obj["action"].is_string()) {
        throw Error("action event requires a string \"action\" field");
    }
    if (!obj.contains("concepts") || !obj["concepts"].is_array()) {
        throw Error("action event requires a \"concepts\" array");
    }

    ActionEvent event;
    event.action_type = obj["action"].get<std::string>();
    for (const auto& c : obj["concepts"]) {
        if (!c.is_string()) throw Error("concept codes must be strings");
        event.concepts.push_back(c.get<std::string>());
    }
    if (event.concepts.empty()) throw Error("action event has an empty concepts list");

    if (obj.contains("related")) {
        if (!obj["related"].is_array()) throw Error("\"related\" must be an array");
        for (const auto& r : obj["related"]) {
            if (!r.is_object() || !r.contains("code") || !r.contains("weight")) {
                throw Error("related entries require \"code\" and \"weight\"");
            }
            RelatedConcept rel;
            rel.code = r["code"].get<std::string>();
            rel.weight = r["weight"].get<double>();
            if (!(rel.weight > 0.0) || rel.weight > 1.0) {
                throw Error("related weight must be in (0, 1]");
            }
            event.related.push_back(std::move(rel));
        }
    }
    if (obj.contains("wall_time")) {
        if (!obj["wall_time"].is_string()) throw Error("\"wall_time\" must be a string");
        event.wall_time = obj["wall_time"].get<std::string>();
    }
    return event;
}

std::string serialize_action_event(const ActionEvent& event) {
    nlohmann::ordered_json obj;
    obj["action"] = event.action_type;
    obj["concepts"] = event.concepts;
    if (!event.related.empty()) {
        nlohmann::ordered_json related = nlohmann::ordered_json::array();
        for (const auto& r : event.related) {
            related.push_back({{"code", r.code}, {"weight", r.weight}});
        }
        obj["related"] = std::move(related);
    }
    if (event.wall_time) obj["wall_time"] = *event.wall_time;
    return obj.dump();
}

std::vector<TimedActionConcept> assign_time_steps(std::span<const ActionEvent> events) {
    std::vector<TimedActionConcept> out;
    int step = 0;
    for (const auto& event : events) {
        for (const auto& code : event.concepts) {
            out.push_back({event.action_type, step, code, 1.0});
        }
        for (const auto& rel : event.related) {
            out.push_back({event.action_type, step, rel.code, rel.weight});
        }
        ++step;
    }
    return out;
}

}  // namespace focus
