#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "infgon/hyperbolic.hpp"
#include "infgon/mutation.hpp"
#include "infgon/triangulation.hpp"

namespace infgon {

using Json = nlohmann::ordered_json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    Json j;
    in >> j;
    return j;
}

// {"boundary":[{"finite":3},{"acc":{"id":"a","side":"left"}}]}
inline Surface surface_from_json(const Json& j) {
    if (!j.contains("boundary")) throw Error("BadDescriptor", "surface needs a boundary list");
    std::vector<Segment> segs;
    for (auto& e : j.at("boundary")) {
        if (e.contains("finite")) {
            segs.push_back(Segment::finite(e.at("finite").get<long long>()));
        } else if (e.contains("acc")) {
            auto& a = e.at("acc");
            std::string side = a.at("side").get<std::string>();
            segs.push_back(Segment::accumulating(a.at("id").get<std::string>(),
                                                 side == "left" ? Side::Left : Side::Right));
        } else {
            throw Error("BadDescriptor", "segment must be finite or acc");
        }
    }
    return Surface(std::move(segs));
}

inline Json surface_to_json(const Surface& S) {
    Json segs = Json::array();
    for (auto& s : S.boundary()) {
        if (s.infinite())
            segs.push_back({{"acc", {{"id", s.target}, {"side", s.side == Side::Left ? "left" : "right"}}}});
        else
            segs.push_back({{"finite", s.count}});
    }
    return Json{{"boundary", segs}};
}

inline Json curve_to_json(const Curve& c) { return Json::array({c.a.str(), c.b.str()}); }

inline Curve curve_from_json(const Surface& S, const Json& j) {
    return S.curve(S.parse_point(j.at(0).get<std::string>()),
                   S.parse_point(j.at(1).get<std::string>()));
}

inline Triangulation triangulation_from_json(const Json& j,
                                             const Surface* fallback_surface = nullptr) {
    Surface S = j.contains("surface") ? surface_from_json(j.at("surface"))
                                      : (fallback_surface ? *fallback_surface
                                                          : throw Error("BadDescriptor",
                                                                        "triangulation needs a surface"));
    std::vector<Tail> tails;
    std::vector<Curve> core;
    if (j.contains("domains"))
        for (auto& d : j.at("domains")) {
            if (d.contains("incoming_fan")) {
                auto& f = d.at("incoming_fan");
                tails.push_back(Tail::incoming(S.parse_point(f.at("source").get<std::string>()),
                                               f.at("segment").get<int>(),
                                               f.at("from").get<long long>()));
            } else if (d.contains("outgoing_fan")) {
                auto& f = d.at("outgoing_fan");
                tails.push_back(Tail::outgoing(f.at("segment").get<int>(),
                                               f.at("from").get<long long>()));
            } else if (d.contains("zigzag_around")) {
                auto& f = d.at("zigzag_around");
                tails.push_back(Tail::zig_around(
                    f.at("left_segment").get<int>(), f.at("left_from").get<long long>(),
                    f.at("right_segment").get<int>(), f.at("right_from").get<long long>(),
                    f.value("start", "first") == std::string("first")));
            } else if (d.contains("zigzag_to_limit")) {
                auto& f = d.at("zigzag_to_limit");
                tails.push_back(Tail::zig_to_limit(
                    f.at("segment1").get<int>(), f.at("from1").get<long long>(),
                    f.at("segment2").get<int>(), f.at("from2").get<long long>(),
                    f.value("start", "first") == std::string("first")));
            } else if (d.contains("finite_poly")) {
                for (auto& c : d.at("finite_poly").at("diagonals"))
                    core.push_back(curve_from_json(S, c));
            } else {
                throw Error("BadDescriptor", "unknown domain descriptor");
            }
        }
    if (j.contains("core"))
        for (auto& c : j.at("core")) core.push_back(curve_from_json(S, c));
    Triangulation T(S, tails, core);
    if (j.contains("limit_arcs")) {
        std::vector<Curve> lims;
        for (auto& c : j.at("limit_arcs")) lims.push_back(curve_from_json(S, c));
        T.set_declared_limits(std::move(lims));
    }
    return T;
}

inline Json triangulation_to_json(const Triangulation& T) {
    Json out;
    out["surface"] = surface_to_json(T.surface());
    Json doms = Json::array();
    for (auto& t : T.tails()) {
        switch (t.kind) {
            case Tail::Kind::Incoming:
                doms.push_back({{"incoming_fan",
                                 {{"source", t.source.str()}, {"segment", t.seg}, {"from", t.from}}}});
                break;
            case Tail::Kind::Outgoing:
                doms.push_back({{"outgoing_fan", {{"segment", t.seg}, {"from", t.from}}}});
                break;
            case Tail::Kind::ZigAround:
                doms.push_back({{"zigzag_around",
                                 {{"left_segment", t.seg},
                                  {"left_from", t.from},
                                  {"right_segment", t.seg2},
                                  {"right_from", t.from2},
                                  {"start", t.start_first ? "first" : "second"}}}});
                break;
            case Tail::Kind::ZigToLimit:
                doms.push_back({{"zigzag_to_limit",
                                 {{"segment1", t.seg},
                                  {"from1", t.from},
                                  {"segment2", t.seg2},
                                  {"from2", t.from2},
                                  {"start", t.start_first ? "first" : "second"}}}});
                break;
        }
    }
    out["domains"] = doms;
    Json core = Json::array();
    for (auto& c : T.core()) core.push_back(curve_to_json(c));
    out["core"] = core;
    Json lims = Json::array();
    for (auto& c : T.limit_pairs()) lims.push_back(curve_to_json(c));
    out["limit_arcs"] = lims;
    return out;
}

inline MutationProgram program_from_json(const Surface& S, const Json& j) {
    MutationProgram p;
    for (auto& m : j.at("moves")) {
        if (m.contains("flip")) {
            p.moves.push_back(Move::flip(curve_from_json(S, m.at("flip"))));
        } else if (m.contains("shift_fan_source")) {
            p.moves.push_back(Move::shift(m.at("shift_fan_source").get<std::string>()));
        } else if (m.contains("zigzag_to_fans")) {
            p.moves.push_back(Move::zig_to_fans(m.at("zigzag_to_fans").get<std::string>()));
        } else if (m.contains("outgoing_to_incoming")) {
            p.moves.push_back(Move::out_to_in(m.at("outgoing_to_incoming").get<std::string>()));
        } else if (m.contains("incoming_to_outgoing")) {
            p.moves.push_back(Move::in_to_out(m.at("incoming_to_outgoing").get<std::string>()));
        } else {
            throw Error("BadDescriptor", "unknown move");
        }
    }
    return p;
}

inline hyp::FanData fandata_from_json(const Json& j) {
    hyp::FanData d;
    for (auto& v : j.at("x")) d.x.push_back(v.get<double>());
    for (auto& v : j.at("xb")) d.xb.push_back(v.get<double>());
    if (j.contains("xstar")) d.xstar = j.at("xstar").get<double>();
    if (j.contains("sub_a"))
        for (auto& v : j.at("sub_a")) d.sub_a.push_back(v.get<double>());
    if (j.contains("sub_b"))
        for (auto& v : j.at("sub_b")) d.sub_b.push_back(v.get<double>());
    return d;
}

}  // namespace infgon
