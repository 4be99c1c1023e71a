#pragma once

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infgon/expansion.hpp"
#include "infgon/json_io.hpp"
#include "infgon/mutation.hpp"

namespace infgon {
namespace cli {

// Exit codes: 0 verified/ok, 1 falsified identity, 2 usage or data error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact cluster-algebra computations on triangulated infinity-gons"};
    app.require_subcommand(1);

    long long N = 32;
    int H = 6;
    double tol = 1e-9;
    std::string seed = "+";
    std::string format = "text";

    std::string surface_file, tri_file, from_file, to_file, data_file;
    std::string arc_lit, a_lit, b_lit, quad_lit, program_file, kind = "incoming";
    long long cap = 64, trunc = 0;
    int depth = 6;

    auto* c_surface = app.add_subcommand("surface", "inspect a surface descriptor");
    c_surface->add_option("--spec", surface_file, "surface JSON")->required();
    c_surface->add_option("--truncate", trunc, "print the window of this size");

    auto* c_tri = app.add_subcommand("tri", "triangulation utilities");
    auto* c_validate = c_tri->add_subcommand("validate", "check a triangulation at a truncation");
    c_validate->add_option("--surface", surface_file, "surface JSON (optional)");
    c_validate->add_option("--tri", tri_file, "triangulation JSON")->required();
    c_validate->add_option("-N", N, "truncation window");

    auto* c_mutate = app.add_subcommand("mutate", "apply a mutation program");
    c_mutate->add_option("--tri", tri_file)->required();
    c_mutate->add_option("--program", program_file)->required();
    c_mutate->add_option("-N", N);

    auto* c_classify = app.add_subcommand("classify", "reachability class of a pair");
    c_classify->add_option("--from", from_file)->required();
    c_classify->add_option("--to", to_file)->required();
    c_classify->add_option("--cap", cap);
    c_classify->add_option("-N", N);

    auto* c_snake = app.add_subcommand("snake", "snake graph of an arc");
    c_snake->add_option("--tri", tri_file)->required();
    c_snake->add_option("--arc", arc_lit)->required();
    c_snake->add_option("--depth", depth, "materialized tiles per infinite piece");
    c_snake->add_option("--format", format, "text|dot|json");
    c_snake->add_option("--seed", seed, "sign seed + or -");
    int match_bound = -1;
    c_snake->add_option("--matchings", match_bound, "emit perfect matchings up to this height");

    auto* c_expand = app.add_subcommand("expand", "Laurent expansion of an arc");
    c_expand->add_option("--tri", tri_file)->required();
    c_expand->add_option("--arc", arc_lit)->required();
    c_expand->add_option("-H", H, "height bound");
    c_expand->add_option("--format", format, "text|json");

    auto* c_ptolemy = app.add_subcommand("ptolemy", "verify the Ptolemy identity on a quadrilateral");
    c_ptolemy->add_option("--tri", tri_file)->required();
    c_ptolemy->add_option("--quad", quad_lit, "four comma-separated marked points")->required();
    c_ptolemy->add_option("-H", H);

    auto* c_skein = app.add_subcommand("skein", "verify the skein identity for a crossing pair");
    c_skein->add_option("--tri", tri_file)->required();
    c_skein->add_option("--a", a_lit)->required();
    c_skein->add_option("--b", b_lit)->required();
    c_skein->add_option("-H", H);

    auto* c_realize = app.add_subcommand("realize", "numeric fan realization");
    c_realize->add_option("--kind", kind, "incoming|outgoing");
    c_realize->add_option("--data", data_file)->required();
    c_realize->add_option("-N", N);
    c_realize->add_option("--tol", tol);

    auto* c_oracle = app.add_subcommand("oracle-check",
                                        "compare a symbolic expansion with the numeric realization");
    c_oracle->add_option("--tri", tri_file)->required();
    c_oracle->add_option("--arc", arc_lit)->required();
    c_oracle->add_option("--data", data_file)->required();
    c_oracle->add_option("-H", H);
    c_oracle->add_option("-N", N);
    c_oracle->add_option("--tol", tol);

    std::vector<const char*> argv;
    std::vector<std::string> hold = std::move(args);
    argv.push_back("infgon");
    for (auto& s : hold) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_surface->parsed()) {
            Surface S = surface_from_json(load_json_file(surface_file));
            out << "segments: " << S.segment_count() << ", acc_count: " << S.acc_count() << "\n";
            if (trunc > 0) {
                for (auto& p : S.truncate(trunc)) out << p.str() << " ";
                out << "\n";
            }
            return 0;
        }
        if (c_validate->parsed()) {
            std::optional<Surface> S;
            if (!surface_file.empty()) S = surface_from_json(load_json_file(surface_file));
            Triangulation T =
                triangulation_from_json(load_json_file(tri_file), S ? &*S : nullptr);
            auto issues = T.validate(N);
            if (issues.empty()) {
                out << "ok\n";
                return 0;
            }
            for (auto& i : issues) out << i.code << ": " << i.detail << "\n";
            return 1;
        }
        if (c_mutate->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            MutationProgram prog = program_from_json(T.surface(), load_json_file(program_file));
            ProgramResult res = apply_program(T, prog, N);
            out << triangulation_to_json(res.result).dump(2) << "\n";
            out << "orbits:\n";
            for (auto& [c, s] : res.orbits.stabilized_after)
                out << "  " << c.str() << " stabilized after step " << s << "\n";
            return 0;
        }
        if (c_classify->parsed()) {
            Triangulation A = triangulation_from_json(load_json_file(from_file));
            Triangulation B = triangulation_from_json(load_json_file(to_file));
            ReachabilityClass rc = classify_reachability(A, B, cap, N);
            out << rc.name();
            if (!rc.detail.empty()) out << ": " << rc.detail;
            out << "\n";
            if (rc.witness) {
                out << "witness program (" << rc.witness->moves.size() << " moves):\n";
                for (auto& m : rc.witness->moves) out << "  " << m.str() << "\n";
            }
            if (rc.kind == ReachabilityClass::Kind::FiniteSeqOfInfinite)
                out << "bound: at most " << rc.bound << " infinite mutations\n";
            return 0;
        }
        if (c_snake->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            Curve g = T.surface().parse_curve(arc_lit);
            if (match_bound >= 0) {
                Json out_j;
                Json list = Json::array();
                for (auto& m : enumerate_matchings(T, g, match_bound)) {
                    Json e;
                    e["heights"] = m.run_heights;
                    e["local"] = m.block_edges;
                    e["term"] = Laurent::monomial(BigInt(1), m.ratio).str();
                    list.push_back(e);
                }
                out_j["pieces_note"] =
                    "heights: one entry per infinite piece, -1 = staircase through the limit tile";
                out_j["matchings"] = list;
                out << out_j.dump(2) << "\n";
                return 0;
            }
            SnakeGraph G(T, g, depth);
            if (format == "dot") {
                out << G.to_dot();
            } else {
                auto signs = G.sign_function(seed == "-" ? -1 : +1);
                for (size_t t = 0; t < G.tiles().size(); ++t) {
                    auto& tl = G.tiles()[t];
                    out << (tl.data.limit_tile ? "limit tile " : "tile ") << t << ": "
                        << (tl.data.limit_tile ? "* " + T.surface().var_of(tl.data.diag)
                                               : tl.data.dvar);
                    out << "  signs[b,r,t,l]=";
                    for (int pos = 0; pos < 4; ++pos)
                        for (int slot = 0; slot < 4; ++slot)
                            if (tl.slot_pos[slot] == pos) out << (signs[t][slot] > 0 ? "+" : "-");
                    out << "\n";
                }
            }
            return 0;
        }
        if (c_expand->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            Curve g = T.surface().parse_curve(arc_lit);
            Expansion e = expand(T, g, H);
            if (format == "json") {
                Json j;
                j["exact"] = e.exact;
                j["height_bound"] = e.height_bound;
                j["terms"] = e.matching_count;
                Json g2 = Json::object();
                for (auto& [h, p] : e.graded) g2[std::to_string(h)] = p.str();
                j["graded"] = g2;
                j["sum"] = e.sum().str();
                out << j.dump(2) << "\n";
            } else {
                out << e.sum().str() << "\n";
            }
            return 0;
        }
        if (c_ptolemy->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            std::array<MarkedPoint, 4> quad;
            std::stringstream ss(quad_lit);
            std::string item;
            int k = 0;
            while (std::getline(ss, item, ',') && k < 4) quad[k++] = T.surface().parse_point(item);
            if (k != 4) throw Error("DegenerateQuad", "need four marked points");
            bool ok = ptolemy_check(T, quad, H);
            out << (ok ? "VERIFIED" : "FALSIFIED") << " (H=" << H << ")\n";
            return ok ? 0 : 1;
        }
        if (c_skein->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            Curve ga = T.surface().parse_curve(a_lit);
            Curve gb = T.surface().parse_curve(b_lit);
            bool ok = skein_check(T, ga, gb, H);
            bool exact = expand(T, ga, H).exact && expand(T, gb, H).exact;
            if (ok)
                out << "VERIFIED " << (exact ? "(exact)" : "(truncated, H=" + std::to_string(H) + ")")
                    << "\n";
            else
                out << "FALSIFIED\n";
            return ok ? 0 : 1;
        }
        if (c_realize->parsed()) {
            hyp::FanData d = fandata_from_json(load_json_file(data_file));
            hyp::FanKind fk = kind == "outgoing" ? hyp::FanKind::Outgoing : hyp::FanKind::Incoming;
            hyp::DecoratedRealization R = hyp::realize_fan(fk, d, N, tol);
            Json j = Json::object();
            for (auto& [name, h] : R.deco) {
                Json e;
                e["base"] = h.base.infinite ? Json("inf") : Json(h.base.x);
                e["size"] = h.size;
                j[name] = e;
            }
            out << j.dump(2) << "\n";
            return 0;
        }
        if (c_oracle->parsed()) {
            Triangulation T = triangulation_from_json(load_json_file(tri_file));
            if (T.tails().size() != 1 || T.tails()[0].kind != Tail::Kind::Incoming)
                throw Error("BadDescriptor",
                            "oracle-check needs a single incoming-fan triangulation");
            const Tail& t = T.tails()[0];
            hyp::FanData d = fandata_from_json(load_json_file(data_file));
            hyp::DecoratedRealization R = hyp::realize_fan(hyp::FanKind::Incoming, d, N, tol);
            const Surface& S = T.surface();
            Curve g = S.parse_curve(arc_lit);
            // evaluation map for the fan variables
            std::map<VarId, double> vals;
            long long f = t.from;
            for (long long j = f; j < d.n() + f; ++j)
                vals[S.var_of(S.curve(t.source, MarkedPoint::pt(t.seg, j)))] = d.x[j - f];
            for (long long j = f; j + 1 < d.n() + f; ++j)
                vals[S.var_of(S.curve(MarkedPoint::pt(t.seg, j), MarkedPoint::pt(t.seg, j + 1)))] =
                    d.xb[j - f];
            vals[S.var_of(S.curve(t.source, T.acc_point(t.seg)))] = d.xstar;
            Expansion e = expand(T, g, H);
            double sym = e.sum().eval(vals);
            auto label = [&](const MarkedPoint& p) -> std::string {
                if (p.is_acc) return "pstar";
                if (p == t.source) return "src";
                return "p" + std::to_string(p.index - f + 1);
            };
            double geo = R.measure(label(g.a), label(g.b));
            double rel = std::abs(sym - geo) / std::max(1e-300, std::abs(geo));
            out << "symbolic=" << sym << " geometric=" << geo << " rel_err=" << rel << "\n";
            bool ok = rel <= std::max(tol, 1e-5);
            out << (ok ? "AGREE" : "DISAGREE") << "\n";
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace cli
}  // namespace infgon
