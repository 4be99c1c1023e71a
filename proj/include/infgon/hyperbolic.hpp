#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infgon/errors.hpp"
#include "infgon/surface.hpp"

namespace infgon {
namespace hyp {

// Ideal boundary point of the upper half-plane.
struct IdealPoint {
    bool infinite = false;
    double x = 0;
    static IdealPoint real(double v) { return {false, v}; }
    static IdealPoint inf() { return {true, 0}; }
};

// Horocycle: Euclidean circle tangent at a finite base (size = diameter) or a
// horizontal line at height `size` when based at infinity.
struct Horocycle {
    IdealPoint base;
    double size = 1.0;
};

// lambda(gamma) = e^{l/2} with l the signed distance between horocycles.
// Finite bases p,q with diameters d_p,d_q give |p-q|/sqrt(d_p d_q); one base at
// infinity with height h gives sqrt(h/d).
inline double lambda_length(const Horocycle& h1, const Horocycle& h2) {
    if (h1.base.infinite && h2.base.infinite)
        throw Error("CoincidentBases", "both horocycles based at infinity");
    if (h1.base.infinite) return std::sqrt(h1.size / h2.size);
    if (h2.base.infinite) return std::sqrt(h2.size / h1.size);
    double dx = h1.base.x - h2.base.x;
    if (dx == 0) throw Error("CoincidentBases", "horocycles share their base point");
    return std::abs(dx) / std::sqrt(h1.size * h2.size);
}

// Mobius map z -> (az+b)/(cz+d), ad-bc > 0, acting on horocycles.
struct Mobius {
    double a = 1, b = 0, c = 0, d = 1;
    double det() const { return a * d - b * c; }
    Horocycle apply(const Horocycle& h) const {
        Horocycle out;
        if (h.base.infinite) {
            if (c == 0) {
                out.base = IdealPoint::inf();
                out.size = h.size * a / d;
            } else {
                out.base = IdealPoint::real(a / c);
                out.size = det() / (c * c * h.size);
            }
            return out;
        }
        double denom = c * h.base.x + d;
        if (std::abs(denom) < 1e-300) {
            out.base = IdealPoint::inf();
            out.size = det() / (c * c * h.size);
            return out;
        }
        out.base = IdealPoint::real((a * h.base.x + b) / denom);
        out.size = h.size * det() / (denom * denom);
        return out;
    }
};

// Decorated realization of a (truncated) fan: placements and horocycles per
// marked point, keyed by point literal.  Fan realizations also keep the ladder
// of base increments so that distances between deep points are summed from
// positive terms instead of cancelled out of absolute positions.
struct DecoratedRealization {
    std::map<std::string, Horocycle> deco;
    long long N = 0;
    std::vector<double> inc;  // inc[i] = p_{i+2} - p_{i+1}, i = 0..N-2
    double tail = 0;          // p_star - p_N (incoming fans)

    const Horocycle& at(const std::string& pt) const {
        auto it = deco.find(pt);
        if (it == deco.end()) throw Error("UnplacedEndpoint", "no decoration at " + pt);
        return it->second;
    }
    double measure(const std::string& p, const std::string& q) const {
        auto ladder_index = [&](const std::string& s) -> long long {
            if (s == "pstar") return N + 1;
            if (s.size() > 1 && s[0] == 'p' && s.find_first_not_of("0123456789", 1) ==
                                                   std::string::npos) {
                long long k = std::stoll(s.substr(1));
                if (k >= 1 && k <= N) return k;
            }
            return -1;
        };
        long long i = ladder_index(p), j = ladder_index(q);
        if (!inc.empty() && i > 0 && j > 0 && i != j) {
            if (i > j) std::swap(i, j);
            double dx = 0;
            for (long long k = i; k < std::min(j, N); ++k) dx += inc[k - 1];
            if (j == N + 1) dx += tail;
            return dx / std::sqrt(at(p).size * at(q).size);
        }
        return lambda_length(at(p), at(q));
    }
    double measure(const Curve& c) const { return measure(c.a.str(), c.b.str()); }
};

// Unique decorated ideal triangle (0, 1, inf) with prescribed side lambda
// lengths x1 = lambda(0,inf), x2 = lambda(1,inf), x3 = lambda(0,1).
inline DecoratedRealization realize_triangle(double x1, double x2, double x3) {
    if (x1 <= 0 || x2 <= 0 || x3 <= 0)
        throw Error("IncompatibleData", "lambda lengths must be positive");
    double t = x1 * x2 / x3;  // height of the horocycle at infinity
    DecoratedRealization r;
    r.deco["inf"] = {IdealPoint::inf(), t};
    r.deco["0"] = {IdealPoint::real(0), t / (x1 * x1)};
    r.deco["1"] = {IdealPoint::real(1), t / (x2 * x2)};
    return r;
}

enum class FanKind { Incoming, Outgoing };

// Numerical data of an elementary fan: x[i] (fan arcs, 1-based), xb[i]
// (base boundary arcs x_{i,i+1}), and for incoming fans the limit value.
struct FanData {
    std::vector<double> x;   // x_1 .. x_N
    std::vector<double> xb;  // x_{1,2} .. x_{N-1,N}
    double xstar = 1.0;      // incoming only
    // optional almost-elementary attachment data: per base interval, the two
    // lambda lengths x_{n,s_n}, x_{s_n,n+1} of the arcs to an interior point
    std::vector<double> sub_a, sub_b;

    long long n() const { return static_cast<long long>(x.size()); }
};

struct CompatReport {
    bool pass = true;
    std::vector<std::string> failures;
    void fail(const std::string& s) {
        pass = false;
        failures.push_back(s);
    }
};

// Compatibility conditions for elementary fans: incoming needs x_n -> x_* and a
// convergent sum of base lengths; outgoing needs x_n -> 0 and
// x_n * sum x_{i,i+1}/(x_i x_{i+1}) -> 1.  Almost-elementary attachments add
// (x_{n,s_n} + x_{s_n,n+1}) / x_{n,n+1} -> 1.  Limits are checked over the
// window tail with a non-increasing residual trend.
inline CompatReport check_compatibility(FanKind kind, const FanData& data, long long N,
                                        double tol) {
    CompatReport rep;
    if (N < 3 || data.n() < N) {
        rep.fail("window needs at least 3 fan arcs");
        return rep;
    }
    if (static_cast<long long>(data.xb.size()) < N - 1) {
        rep.fail("missing base boundary data");
        return rep;
    }
    for (double v : data.x)
        if (v <= 0) rep.fail("fan lambda lengths must be positive");
    for (double v : data.xb)
        if (v <= 0) rep.fail("base lambda lengths must be positive");
    if (!rep.pass) return rep;

    auto tail_below = [&](std::function<double(long long)> residual, const std::string& what) {
        double prev = -1;
        bool trend = true;
        double worst = 0;
        for (long long i = N / 2; i < N; ++i) {
            double r = std::abs(residual(i));
            worst = std::max(worst, r);
            if (prev >= 0 && r > prev * 1.5 + tol) trend = false;
            prev = r;
        }
        if (worst > tol) rep.fail(what + ": residual " + std::to_string(worst) + " above tolerance");
        if (!trend) rep.fail(what + ": residual trend not decreasing");
    };

    if (kind == FanKind::Incoming) {
        if (data.xstar <= 0) {
            rep.fail("limit lambda length must be positive");
            return rep;
        }
        tail_below([&](long long i) { return data.x[i - 1] - data.xstar; }, "x_n -> x_*");
        // summability of the base lengths: increments near the window edge are
        // below tolerance and non-increasing
        double scale = std::max(1.0, data.xstar);
        double tail = 0;
        for (long long i = std::max(N / 2, N - 6); i < N; ++i) tail += data.xb[i - 1];
        if (tail > tol * scale)
            rep.fail("sum x_{i,i+1} tail does not vanish (divergent base series)");
        bool inc_trend = true;
        for (long long i = N / 2; i + 1 < N; ++i)
            if (data.xb[i] > data.xb[i - 1] * 1.5 + tol * scale) inc_trend = false;
        if (!inc_trend) rep.fail("base lengths x_{i,i+1} do not decay");
    } else {
        tail_below([&](long long i) { return data.x[i - 1]; }, "x_n -> 0");
        auto partial = [&](long long n) {
            double s = 0;
            for (long long i = 1; i < n; ++i) s += data.xb[i - 1] / (data.x[i - 1] * data.x[i]);
            return s;
        };
        tail_below([&](long long i) { return data.x[i - 1] * partial(i) - 1.0; },
                   "x_n * sum -> 1");
    }
    if (!data.sub_a.empty()) {
        long long m = std::min<long long>(
            {static_cast<long long>(data.sub_a.size()), static_cast<long long>(data.sub_b.size()),
             static_cast<long long>(data.xb.size())});
        double prev = -1;
        bool trend = true;
        double worst = 0;
        for (long long i = m / 2; i < m; ++i) {
            double r = std::abs((data.sub_a[i] + data.sub_b[i]) / data.xb[i] - 1.0);
            worst = std::max(worst, r);
            if (prev >= 0 && r > prev * 1.5 + tol) trend = false;
            prev = r;
        }
        if (worst > tol) rep.fail("almost-elementary ratio does not approach 1");
        if (!trend) rep.fail("almost-elementary ratio trend not decreasing");
    }
    return rep;
}

// Realize an elementary fan with its source at infinity: p_1 = 0 and each next
// triangle glued by the unique decorated extension.  The gauge pins the
// limiting horocycle of an incoming fan to Euclidean diameter 2, so boundary
// segments satisfy x_{i,i+1}/s_{i,i+1} -> 1/2; outgoing fans use height 1.
// Points are labelled "p1".."pN" plus "src" and, for incoming fans, "pstar".
inline DecoratedRealization realize_fan(FanKind kind, const FanData& data, long long N,
                                        double tol = 1e-9) {
    // realization only needs the trend conditions; slowly converging families
    // (harmonic tails) are legitimate, so the gate is coarse.  Strict
    // tolerances belong to explicit check_compatibility calls.
    CompatReport rep = check_compatibility(kind, data, N, std::max(tol, 5e-2));
    if (!rep.pass) {
        std::string msg = "incompatible fan data";
        for (auto& f : rep.failures) msg += "; " + f;
        throw Error("IncompatibleData", msg);
    }
    DecoratedRealization r;
    r.N = N;
    double t = kind == FanKind::Incoming ? 2.0 * data.xstar * data.xstar : 1.0;
    r.deco["src"] = {IdealPoint::inf(), t};
    double pos = 0;
    for (long long i = 1; i <= N; ++i) {
        double di = t / (data.x[i - 1] * data.x[i - 1]);
        r.deco["p" + std::to_string(i)] = {IdealPoint::real(pos), di};
        if (i < N) {
            double step = t * data.xb[i - 1] / (data.x[i - 1] * data.x[i]);
            r.inc.push_back(step);
            pos += step;
        }
    }
    if (kind == FanKind::Incoming) {
        // the accumulation point: limit of the p_i with the limiting horocycle
        double tail = 0;
        for (long long i = N; i < data.n() && i - 1 < static_cast<long long>(data.xb.size()); ++i)
            tail += t * data.xb[i - 1] / (data.x[i - 1] * data.x[i]);
        r.tail = tail;
        r.deco["pstar"] = {IdealPoint::real(pos + tail), t / (data.xstar * data.xstar)};
    }
    return r;
}

// Width of the fan on the first n arcs: the closed form
// w_n = 2 x_1^2 sum_{i=1}^{n-1} x_{i,i+1} / (x_i x_{i+1}).
inline double width_formula(const FanData& data, long long n) {
    if (n < 2) throw Error("InvalidTruncation", "width needs n >= 2");
    double s = 0;
    for (long long i = 1; i < n; ++i) s += data.xb[i - 1] / (data.x[i - 1] * data.x[i]);
    return 2.0 * data.x[0] * data.x[0] * s;
}

// Same width measured on a realization by doubling the fan: reflect p_n
// across itself and measure the lambda length of the doubled arc from p_1.
inline double width_geometric(const DecoratedRealization& r, long long n) {
    const Horocycle& h1 = r.at("p1");
    const Horocycle& hn = r.at("p" + std::to_string(n));
    Horocycle mirror{IdealPoint::real(2 * hn.base.x - h1.base.x), h1.size};
    return lambda_length(h1, mirror);
}

}  // namespace hyp
}  // namespace infgon
