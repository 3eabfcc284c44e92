#pragma once

#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "segment_set.hpp"

namespace menger {

using json = nlohmann::json;

template <std::size_t N>
json to_json(const Point<N>& x) {
    json a = json::array();
    for (double v : x.c) a.push_back(v);
    return a;
}

template <std::size_t N>
Point<N> point_from_json(const json& j) {
    if (!j.is_array() || j.size() != N) {
        throw std::invalid_argument("point: expected an array of " + std::to_string(N) + " numbers");
    }
    Point<N> x;
    for (std::size_t i = 0; i < N; ++i) {
        if (!j[i].is_number()) throw std::invalid_argument("point: non-numeric coordinate");
        x[i] = j[i].get<double>();
    }
    if (!all_finite(x)) throw std::invalid_argument("point: non-finite coordinate");
    return x;
}

// {dimension, segments: [[p, q], ...], scaled_blocks: [{axis, exp2_lo, exp2_hi}, ...]}
template <std::size_t N>
json to_json(const SegmentSet<N>& X) {
    json segs = json::array();
    for (const auto& g : X.segments()) segs.push_back(json::array({to_json(g.p), to_json(g.q)}));
    json blocks = json::array();
    for (const auto& b : X.scaled_blocks()) {
        blocks.push_back({{"axis", b.axis}, {"exp2_lo", b.exp2_lo}, {"exp2_hi", b.exp2_hi}});
    }
    return {{"dimension", N}, {"segments", segs}, {"scaled_blocks", blocks}};
}

inline std::size_t json_dimension(const json& j) {
    if (!j.is_object() || !j.contains("dimension") || !j["dimension"].is_number_integer()) {
        throw std::invalid_argument("segment set: missing integer field 'dimension'");
    }
    const auto d = j["dimension"].get<long long>();
    if (d < 2) throw std::invalid_argument("segment set: dimension must be >= 2");
    return static_cast<std::size_t>(d);
}

template <std::size_t N>
SegmentSet<N> segment_set_from_json(const json& j) {
    if (json_dimension(j) != N) throw std::invalid_argument("segment set: dimension mismatch");
    if (!j.contains("segments") || !j["segments"].is_array()) {
        throw std::invalid_argument("segment set: missing array field 'segments'");
    }
    std::vector<std::pair<Point<N>, Point<N>>> pairs;
    for (const auto& s : j["segments"]) {
        if (!s.is_array() || s.size() != 2) throw std::invalid_argument("segment set: each segment is [p, q]");
        pairs.emplace_back(point_from_json<N>(s[0]), point_from_json<N>(s[1]));
    }
    auto X = make_segment_set(pairs);
    if (j.contains("scaled_blocks")) {
        std::vector<ScaledBlock> blocks;
        for (const auto& b : j["scaled_blocks"]) {
            ScaledBlock sb{b.at("axis").get<int>(), b.at("exp2_lo").get<std::int64_t>(), b.at("exp2_hi").get<std::int64_t>()};
            if (sb.axis < 1 || static_cast<std::size_t>(sb.axis) > N || sb.exp2_lo >= sb.exp2_hi) {
                throw std::invalid_argument("segment set: invalid scaled block");
            }
            blocks.push_back(sb);
        }
        X.set_scaled_blocks(std::move(blocks));
    }
    return X;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace menger
