#pragma once

// File formats. Floats are written as shortest round-trip decimal text, so a
// convert round-trip preserves every 64-bit value.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "motionsync/detail/text.hpp"
#include "motionsync/motion.hpp"
#include "motionsync/warp.hpp"

namespace motionsync {

enum class MotionFormat { json, csv };

inline MotionFormat format_from_extension(const std::string& path) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return MotionFormat::json;
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return MotionFormat::csv;
    throw std::runtime_error("cannot infer format from '" + path + "' (expected .json or .csv)");
}

inline nlohmann::json motion_to_json(const Motion& m) {
    nlohmann::json doc;
    doc["joints"] = m.topology.joint_names;
    doc["links"] = nlohmann::json::array();
    for (const auto& link : m.topology.links) doc["links"].push_back({link[0], link[1]});
    if (!m.topology.bone_lengths.empty()) doc["bone_lengths"] = m.topology.bone_lengths;
    doc["frames"] = nlohmann::json::array();
    for (std::size_t f = 0; f < m.frames.size(); ++f) {
        nlohmann::json frame;
        frame["t"] = m.times[f];
        auto& pos = frame["pos"] = nlohmann::json::array();
        for (const auto& joint : m.frames[f]) pos.push_back({joint.x(), joint.y(), joint.z()});
        doc["frames"].push_back(std::move(frame));
    }
    return doc;
}

inline Motion motion_from_json(const nlohmann::json& doc) {
    try {
        SkeletonTopology topo;
        topo.joint_names = doc.at("joints").get<std::vector<std::string>>();
        if (doc.contains("links"))
            for (const auto& link : doc.at("links"))
                topo.links.push_back({link.at(0).get<int>(), link.at(1).get<int>()});
        if (doc.contains("bone_lengths"))
            topo.bone_lengths = doc.at("bone_lengths").get<std::vector<double>>();
        std::vector<double> times;
        std::vector<std::vector<Eigen::Vector3d>> frames;
        for (const auto& frame : doc.at("frames")) {
            times.push_back(frame.at("t").get<double>());
            std::vector<Eigen::Vector3d> pose;
            for (const auto& p : frame.at("pos"))
                pose.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
            frames.push_back(std::move(pose));
        }
        return make_motion(std::move(topo), times, std::move(frames));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed motion document: ") + e.what());
    }
}

inline std::string motion_to_csv(const Motion& m) {
    std::string out = "t";
    for (const auto& name : m.topology.joint_names)
        out += "," + name + "_x," + name + "_y," + name + "_z";
    out += "\n";
    for (std::size_t f = 0; f < m.frames.size(); ++f) {
        out += detail::format_double(m.times[f]);
        for (const auto& joint : m.frames[f]) {
            out += "," + detail::format_double(joint.x());
            out += "," + detail::format_double(joint.y());
            out += "," + detail::format_double(joint.z());
        }
        out += "\n";
    }
    return out;
}

// CSV carries times and positions only; the link set is not representable.
inline Motion motion_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV document");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split(line, ',');
    if (header.size() < 4 || header[0] != "t" || (header.size() - 1) % 3 != 0)
        throw std::runtime_error("CSV header must be t,<joint>_x,<joint>_y,<joint>_z,...");
    SkeletonTopology topo;
    for (std::size_t c = 1; c < header.size(); c += 3) {
        const std::string& hx = header[c];
        if (hx.size() < 2 || hx.compare(hx.size() - 2, 2, "_x") != 0)
            throw std::runtime_error("CSV joint columns must come in _x,_y,_z triples");
        topo.joint_names.push_back(hx.substr(0, hx.size() - 2));
    }
    std::vector<double> times;
    std::vector<std::vector<Eigen::Vector3d>> frames;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != header.size())
            throw std::runtime_error("CSV row has wrong field count");
        times.push_back(detail::parse_double(fields[0]));
        std::vector<Eigen::Vector3d> pose;
        for (std::size_t c = 1; c < fields.size(); c += 3)
            pose.emplace_back(detail::parse_double(fields[c]), detail::parse_double(fields[c + 1]),
                              detail::parse_double(fields[c + 2]));
        frames.push_back(std::move(pose));
    }
    return make_motion(std::move(topo), times, std::move(frames));
}

inline Motion load_motion(const std::string& text, MotionFormat format) {
    if (format == MotionFormat::json) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(std::string("JSON parse failure: ") + e.what());
        }
        return motion_from_json(doc);
    }
    return motion_from_csv(text);
}

inline std::string save_motion(const Motion& m, MotionFormat format) {
    if (format == MotionFormat::json) return motion_to_json(m).dump(2) + "\n";
    return motion_to_csv(m);
}

inline nlohmann::json warp_to_json(const Diffeomorphism& phi) {
    return {{"knots", phi.knots()}, {"values", phi.values()}};
}

inline Diffeomorphism warp_from_json(const nlohmann::json& doc) {
    try {
        return Diffeomorphism(doc.at("knots").get<std::vector<double>>(),
                              doc.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed warp document: ") + e.what());
    }
}

inline nlohmann::json path_to_json(const FrameCorrespondence& p) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& pair : p.pairs) doc.push_back({pair[0], pair[1]});
    return doc;
}

inline FrameCorrespondence path_from_json(const nlohmann::json& doc) {
    FrameCorrespondence p;
    try {
        for (const auto& pair : doc) p.pairs.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed correspondence document: ") + e.what());
    }
    return p;
}

inline std::string path_to_csv(const FrameCorrespondence& p) {
    std::string out = "i,j\n";
    for (const auto& pair : p.pairs)
        out += std::to_string(pair[0]) + "," + std::to_string(pair[1]) + "\n";
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

inline Motion load_motion_file(const std::string& path) {
    return load_motion(read_file(path), format_from_extension(path));
}

inline void save_motion_file(const std::string& path, const Motion& m) {
    write_file(path, save_motion(m, format_from_extension(path)));
}

}  // namespace motionsync
