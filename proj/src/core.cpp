#include "collwarn/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace collwarn {

using nlohmann::json;

const ObjectState* Frame::find(std::int64_t id) const {
    for (const auto& obj : objects) {
        if (obj.id == id) return &obj;
    }
    return nullptr;
}

namespace {

void validate_channel(const std::vector<Frame>& frames, const char* channel) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame& frame = frames[i];
        if (frame.index != static_cast<std::int64_t>(i)) {
            throw std::runtime_error("frame " + std::to_string(i) + ": " + channel +
                                     " record carries index " + std::to_string(frame.index));
        }
        std::unordered_set<std::int64_t> seen;
        for (const auto& obj : frame.objects) {
            if (obj.id < 0) {
                throw std::runtime_error("frame " + std::to_string(i) + ": negative object id " +
                                         std::to_string(obj.id) + " in " + channel);
            }
            if (!seen.insert(obj.id).second) {
                throw std::runtime_error("frame " + std::to_string(i) + ": duplicate object id " +
                                         std::to_string(obj.id) + " in " + channel);
            }
            const double fields[4] = {obj.px, obj.py, obj.vx, obj.vy};
            const char* names[4] = {"px", "py", "vx", "vy"};
            for (int k = 0; k < 4; ++k) {
                if (!std::isfinite(fields[k])) {
                    throw std::runtime_error("frame " + std::to_string(i) + ": non-finite " +
                                             names[k] + " for object id " + std::to_string(obj.id) +
                                             " in " + channel);
                }
            }
        }
    }
}

}  // namespace

void validate_scenario(const Scenario& scenario) {
    if (!(scenario.frame_rate > 0.0) || !std::isfinite(scenario.frame_rate)) {
        throw std::runtime_error("frame_rate must be finite and > 0");
    }
    if (scenario.ground_truth.size() != scenario.observed.size()) {
        throw std::runtime_error("ground_truth has " + std::to_string(scenario.ground_truth.size()) +
                                 " frames but observed has " + std::to_string(scenario.observed.size()));
    }
    validate_channel(scenario.ground_truth, "gt");
    validate_channel(scenario.observed, "obs");
}

namespace {

json states_to_json(const std::vector<ObjectState>& states) {
    json arr = json::array();
    for (const auto& s : states) {
        arr.push_back(json::array({s.id, s.px, s.py, s.vx, s.vy}));
    }
    return arr;
}

std::vector<ObjectState> states_from_json(const json& arr, int line_no) {
    if (!arr.is_array()) {
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": state list is not an array");
    }
    std::vector<ObjectState> out;
    out.reserve(arr.size());
    for (const auto& rec : arr) {
        if (!rec.is_array() || rec.size() != 5) {
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": state record is not a 5-element array");
        }
        ObjectState s;
        s.id = rec[0].get<std::int64_t>();
        s.px = rec[1].get<double>();
        s.py = rec[2].get<double>();
        s.vx = rec[3].get<double>();
        s.vy = rec[4].get<double>();
        out.push_back(s);
    }
    return out;
}

json parse_line(const std::string& line, int line_no) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }

    Scenario scenario;
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) {
        throw std::runtime_error("parse error at line 1: missing header record");
    }
    ++line_no;
    json header = parse_line(line, line_no);
    if (!header.contains("frame_rate")) {
        throw std::runtime_error("parse error at line 1: header lacks frame_rate");
    }
    scenario.frame_rate = header["frame_rate"].get<double>();
    if (header.contains("metadata")) {
        for (const auto& [key, value] : header["metadata"].items()) {
            scenario.metadata[key] = value.get<std::string>();
        }
    }

    std::int64_t expected_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json gt_rec = parse_line(line, line_no);
        if (!gt_rec.contains("f") || !gt_rec.contains("gt")) {
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected a gt record with keys f and gt");
        }
        if (!std::getline(in, line)) {
            throw std::runtime_error("parse error at line " + std::to_string(line_no + 1) +
                                     ": missing obs record for frame " +
                                     std::to_string(expected_index));
        }
        ++line_no;
        json obs_rec = parse_line(line, line_no);
        if (!obs_rec.contains("f") || !obs_rec.contains("obs")) {
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected an obs record with keys f and obs");
        }
        const auto f_gt = gt_rec["f"].get<std::int64_t>();
        const auto f_obs = obs_rec["f"].get<std::int64_t>();
        if (f_gt != expected_index || f_obs != expected_index) {
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": frame indices out of order (expected " +
                                     std::to_string(expected_index) + ")");
        }
        Frame gt_frame;
        gt_frame.index = expected_index;
        gt_frame.objects = states_from_json(gt_rec["gt"], line_no - 1);
        Frame obs_frame;
        obs_frame.index = expected_index;
        obs_frame.objects = states_from_json(obs_rec["obs"], line_no);
        scenario.ground_truth.push_back(std::move(gt_frame));
        scenario.observed.push_back(std::move(obs_frame));
        ++expected_index;
    }

    validate_scenario(scenario);
    return scenario;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    validate_scenario(scenario);

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open scenario file for writing: " + path);
    }

    json header;
    header["frame_rate"] = scenario.frame_rate;
    header["metadata"] = json::object();
    for (const auto& [key, value] : scenario.metadata) {
        header["metadata"][key] = value;
    }
    out << header.dump() << '\n';

    for (std::size_t i = 0; i < scenario.ground_truth.size(); ++i) {
        json gt_rec;
        gt_rec["f"] = scenario.ground_truth[i].index;
        gt_rec["gt"] = states_to_json(scenario.ground_truth[i].objects);
        out << gt_rec.dump() << '\n';

        json obs_rec;
        obs_rec["f"] = scenario.observed[i].index;
        obs_rec["obs"] = states_to_json(scenario.observed[i].objects);
        out << obs_rec.dump() << '\n';
    }

    if (!out.good()) {
        throw std::runtime_error("I/O failure while writing scenario file: " + path);
    }
}

}  // namespace collwarn
