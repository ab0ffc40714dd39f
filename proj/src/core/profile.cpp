#include "profile.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wk {

namespace {

constexpr double kE = 2.71828182845904523536;

double logfac(double s, double p) { return p == 0.0 ? 1.0 : std::pow(std::log(kE + s), p); }

template <class F>
double gk(F f, double a, double b, double* err) {
    return integrate_gk(f, a, b, 15, 1e-13, err);
}

// Factorial-weight blocks [(2n)!, (2n+1)!] that are finite in double precision.
const std::vector<std::pair<double, double>>& factorial_blocks() {
    static const std::vector<std::pair<double, double>> blocks = [] {
        std::vector<std::pair<double, double>> out;
        double f = 1.0; // k!
        double prev = 1.0;
        for (int k = 1; k <= 170; ++k) {
            f *= k;
            if (k % 2 == 1 && k >= 3) out.emplace_back(prev, f); // prev = (k-1)!
            prev = f;
        }
        return out;
    }();
    return blocks;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

const char* to_string(Growth::Kind k) {
    switch (k) {
    case Growth::Kind::Power: return "power";
    case Growth::Kind::Slow: return "slow";
    case Growth::Kind::Rapid: return "rapid";
    case Growth::Kind::Bounded: return "bounded";
    default: return "unknown";
    }
}

Profile Profile::zero() { return Profile(); }

Profile Profile::constant(double c) { return power(c, 0.0); }

Profile Profile::power(double c, double a, double p, double center) {
    Segment s;
    s.c = c;
    s.a = a;
    s.p = p;
    s.center = center;
    return from_segments({s});
}

Profile Profile::from_segments(std::vector<Segment> segs, Family family) {
    Profile out;
    out.family_ = family;
    out.segs_ = std::move(segs);
    out.zero_ = false;
    out.validate();
    return out;
}

Profile Profile::table(std::vector<std::pair<double, double>> points) {
    Profile out;
    out.family_ = Family::Table;
    out.pts_ = std::move(points);
    out.zero_ = false;
    out.validate();
    // Prefix integrals at the table abscissae; below the first point the first value extends to 0.
    out.table_prefix_.resize(out.pts_.size());
    out.table_prefix_[0] = out.pts_[0].first * out.pts_[0].second;
    for (size_t i = 1; i < out.pts_.size(); ++i) {
        const auto& [x0, v0] = out.pts_[i - 1];
        const auto& [x1, v1] = out.pts_[i];
        out.table_prefix_[i] = out.table_prefix_[i - 1] + 0.5 * (x1 - x0) * (v0 + v1);
    }
    return out;
}

Profile Profile::factorial_weight() {
    Profile out;
    out.family_ = Family::Named;
    out.named_ = Named::FactorialWeight;
    out.zero_ = false;
    return out;
}

Profile Profile::atomic(double mass) {
    if (!(mass > 0.0)) throw Error(ErrorKind::Domain, "atomic mass must be positive");
    Profile out;
    out.family_ = Family::Named;
    out.named_ = Named::Atomic;
    out.atomic_mass_ = mass;
    out.zero_ = false;
    return out;
}

void Profile::validate() const {
    if (family_ == Family::Table) {
        if (pts_.size() < 2) throw Error(ErrorKind::Parse, "table needs at least two points");
        for (size_t i = 0; i < pts_.size(); ++i) {
            if (!std::isfinite(pts_[i].first) || !std::isfinite(pts_[i].second) || pts_[i].first < 0.0)
                throw Error(ErrorKind::Parse, "table points must be finite with x >= 0");
            if (i > 0 && !(pts_[i].first > pts_[i - 1].first))
                throw Error(ErrorKind::Parse, "table abscissae must be strictly increasing");
        }
        return;
    }
    if (family_ == Family::PowerLog || family_ == Family::Piecewise) {
        if (segs_.empty()) throw Error(ErrorKind::Parse, "profile needs at least one segment");
        if (segs_.front().from != 0.0) throw Error(ErrorKind::Parse, "first segment must start at 0");
        for (size_t i = 0; i < segs_.size(); ++i) {
            const Segment& s = segs_[i];
            if (!(s.to > s.from)) throw Error(ErrorKind::Parse, "segment with to <= from");
            if (i + 1 < segs_.size() && segs_[i + 1].from != s.to)
                throw Error(ErrorKind::Parse, "segments must be contiguous");
            if (!std::isfinite(s.c) || !std::isfinite(s.a) || !std::isfinite(s.p) || !std::isfinite(s.center))
                throw Error(ErrorKind::Parse, "segment parameters must be finite");
            if (s.center > s.from && s.center < s.to)
                throw Error(ErrorKind::Parse, "segment center must not lie inside the segment");
            if (family_ == Family::Piecewise && (s.a != 0.0 || s.p != 0.0))
                throw Error(ErrorKind::Parse, "piecewise family takes constants only");
        }
        if (segs_.back().to != kInf) throw Error(ErrorKind::Parse, "last segment must extend to \"inf\"");
    }
}

bool Profile::is_zero() const {
    if (zero_) return true;
    if (family_ == Family::PowerLog || family_ == Family::Piecewise)
        return std::all_of(segs_.begin(), segs_.end(), [](const Segment& s) { return s.c == 0.0; });
    if (family_ == Family::Table)
        return std::all_of(pts_.begin(), pts_.end(), [](const auto& p) { return p.second == 0.0; });
    return false;
}

bool Profile::is_constant(double* c) const {
    if (zero_) {
        if (c) *c = 0.0;
        return true;
    }
    if (family_ != Family::PowerLog && family_ != Family::Piecewise) return false;
    const double c0 = segs_.front().a == 0.0 && segs_.front().p == 0.0 ? segs_.front().c : NAN;
    for (const Segment& s : segs_) {
        const bool flat = (s.a == 0.0 && s.p == 0.0) || s.c == 0.0;
        const double v = s.c == 0.0 ? 0.0 : s.c;
        if (!flat || v != c0) return false;
    }
    if (c) *c = c0;
    return true;
}

bool Profile::is_pure_power(double* c, double* a) const {
    if (zero_ || family_ != Family::PowerLog || segs_.size() != 1) return false;
    const Segment& s = segs_.front();
    if (s.p != 0.0 || s.center != 0.0) return false;
    if (c) *c = s.c;
    if (a) *a = s.a;
    return true;
}

bool Profile::nonnegative() const {
    if (zero_ || named_ != Named::None) return true;
    if (family_ == Family::Table)
        return std::all_of(pts_.begin(), pts_.end(), [](const auto& p) { return p.second >= 0.0; });
    return std::all_of(segs_.begin(), segs_.end(), [](const Segment& s) { return s.c >= 0.0; });
}

double Profile::seg_value(const Segment& s, double x) const {
    if (s.c == 0.0) return 0.0;
    const double u = std::abs(x - s.center);
    const double pw = s.a == 0.0 ? 1.0 : std::pow(u, s.a);
    return s.c * pw * logfac(u, s.p);
}

double Profile::value(double x) const {
    if (zero_) return 0.0;
    switch (family_) {
    case Family::PowerLog:
    case Family::Piecewise: {
        auto it = std::upper_bound(segs_.begin(), segs_.end(), x,
                                   [](double v, const Segment& s) { return v < s.to; });
        if (it == segs_.end()) --it;
        return seg_value(*it, x);
    }
    case Family::Table: {
        if (x <= pts_.front().first) return pts_.front().second;
        if (x >= pts_.back().first) return pts_.back().second;
        auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                   [](double v, const auto& p) { return v < p.first; });
        const auto& [x1, v1] = *it;
        const auto& [x0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
    }
    case Family::Named:
        if (named_ == Named::FactorialWeight) {
            for (const auto& [lo, hi] : factorial_blocks()) {
                if (x < lo) return 1.0;
                if (x < hi) return 1.0 / x;
            }
            return 1.0;
        }
        return 0.0; // atomic measure: no density
    }
    return 0.0;
}

double Profile::value_left(double x) const {
    if (zero_) return 0.0;
    if (family_ == Family::PowerLog || family_ == Family::Piecewise) {
        auto it = std::lower_bound(segs_.begin(), segs_.end(), x,
                                   [](const Segment& s, double v) { return s.to < v; });
        if (it == segs_.end()) --it;
        return seg_value(*it, x);
    }
    if (named_ == Named::FactorialWeight) {
        for (const auto& [lo, hi] : factorial_blocks()) {
            if (x <= lo) return 1.0;
            if (x <= hi) return 1.0 / x;
        }
        return 1.0;
    }
    return value(x);
}

double Profile::seg_integral(const Segment& s, double x0, double x1, double* err) const {
    if (s.c == 0.0 || x1 <= x0) return 0.0;
    double ulo = std::abs(x0 - s.center), uhi = std::abs(x1 - s.center);
    if (ulo > uhi) std::swap(ulo, uhi);
    const double a = s.a;
    if (ulo == 0.0 && a <= -1.0)
        throw Error(ErrorKind::Divergent, "profile is not integrable at its singular point " + fmt(s.center));
    if (s.p == 0.0) {
        if (a == -1.0) return s.c * std::log(uhi / ulo);
        if (a == 0.0) return s.c * (uhi - ulo);
        return s.c * (std::pow(uhi, a + 1.0) - std::pow(ulo, a + 1.0)) / (a + 1.0);
    }
    double total = 0.0;
    if (ulo < 1.0) {
        const double top = std::min(uhi, 1.0);
        if (a < 0.0 && a > -1.0) {
            // u = t^(1/(1+a)) removes the endpoint singularity: u^a du = dt/(1+a).
            const double k = 1.0 / (1.0 + a);
            auto f = [&](double t) { return logfac(std::pow(t, k), s.p) * k; };
            total += gk(f, std::pow(ulo, 1.0 + a), std::pow(top, 1.0 + a), err);
        } else {
            auto f = [&](double u) { return std::pow(u, a) * logfac(u, s.p); };
            total += gk(f, ulo, top, err);
        }
    }
    if (uhi > 1.0) {
        const double lo = std::max(ulo, 1.0);
        auto f = [&](double v) {
            const double u = std::exp(v);
            return std::exp((a + 1.0) * v) * logfac(u, s.p);
        };
        total += gk(f, std::log(lo), std::log(uhi), err);
    }
    if (err) *err *= std::abs(s.c);
    return s.c * total;
}

double Profile::table_cumulative(double x) const {
    if (x <= pts_.front().first) return x * pts_.front().second;
    if (x >= pts_.back().first) return table_prefix_.back() + (x - pts_.back().first) * pts_.back().second;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x, [](double v, const auto& p) { return v < p.first; });
    const size_t i = static_cast<size_t>(it - pts_.begin()) - 1;
    const double vx = value(x);
    return table_prefix_[i] + 0.5 * (x - pts_[i].first) * (pts_[i].second + vx);
}

double Profile::factorial_cumulative(double x) const {
    double total = 0.0, prev = 0.0;
    for (const auto& [lo, hi] : factorial_blocks()) {
        if (x <= lo) return total + (x - prev);
        total += lo - prev;
        if (x <= hi) return total + std::log(x / lo);
        total += std::log(hi / lo);
        prev = hi;
    }
    return total + (x - prev);
}

double Profile::integral(double x0, double x1, double* err) const {
    if (err) *err = 0.0;
    if (x1 < x0) throw Error(ErrorKind::Domain, "integral bounds out of order");
    if (zero_ || x1 == x0) return 0.0;
    switch (family_) {
    case Family::PowerLog:
    case Family::Piecewise: {
        double total = 0.0;
        for (const Segment& s : segs_) {
            const double lo = std::max(x0, s.from), hi = std::min(x1, s.to);
            if (hi > lo) {
                double e = 0.0;
                total += seg_integral(s, lo, hi, &e);
                if (err) *err += e;
            }
            if (s.to >= x1) break;
        }
        return total;
    }
    case Family::Table:
        return table_cumulative(x1) - table_cumulative(x0);
    case Family::Named:
        if (named_ == Named::FactorialWeight) return factorial_cumulative(x1) - factorial_cumulative(x0);
        return x0 == 0.0 && x1 > 0.0 ? atomic_mass_ : 0.0;
    }
    return 0.0;
}

double Profile::cumulative(double x, double* err) const {
    if (x < 0.0) throw Error(ErrorKind::Domain, "cumulative needs x >= 0");
    return integral(0.0, x, err);
}

std::vector<double> Profile::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    if (zero_) return out;
    if (family_ == Family::PowerLog || family_ == Family::Piecewise) {
        for (const Segment& s : segs_)
            if (s.to > lo && s.to < hi) out.push_back(s.to);
    } else if (family_ == Family::Table) {
        for (const auto& p : pts_)
            if (p.first > lo && p.first < hi) out.push_back(p.first);
    } else if (named_ == Named::FactorialWeight) {
        for (const auto& [a, b] : factorial_blocks()) {
            if (a > lo && a < hi) out.push_back(a);
            if (b > lo && b < hi) out.push_back(b);
        }
    }
    return out;
}

double Profile::last_breakpoint() const {
    if (family_ == Family::Table) return pts_.back().first;
    if (family_ == Family::PowerLog || family_ == Family::Piecewise)
        return segs_.size() > 1 ? segs_[segs_.size() - 2].to : 0.0;
    return 0.0;
}

Tri Profile::integrable_at(double b) const {
    if (zero_ || named_ == Named::Atomic) return Tri::Yes;
    if (named_ == Named::FactorialWeight) return b == kInf ? Tri::No : Tri::Yes;
    if (family_ == Family::Table) return (b < kInf || pts_.back().second == 0.0) ? Tri::Yes : Tri::No;
    if (b == kInf) {
        const Segment& s = segs_.back();
        if (s.c == 0.0 || s.a < -1.0) return Tri::Yes;
        if (s.a == -1.0) return s.p < -1.0 ? Tri::Yes : Tri::No;
        return Tri::No;
    }
    auto it = std::lower_bound(segs_.begin(), segs_.end(), b, [](const Segment& s, double v) { return s.to < v; });
    if (it == segs_.end()) --it;
    if (it->c != 0.0 && it->center == b && it->a <= -1.0) return Tri::No;
    return Tri::Yes;
}

bool Profile::singular_at_zero() const {
    if (family_ != Family::PowerLog && family_ != Family::Piecewise) return false;
    if (zero_) return false;
    const Segment& s = segs_.front();
    return s.c != 0.0 && s.center == 0.0 && s.a < 0.0;
}

bool Profile::singular_at(double b) const {
    if (zero_ || b == kInf) return false;
    if (family_ != Family::PowerLog && family_ != Family::Piecewise) return false;
    auto it = std::lower_bound(segs_.begin(), segs_.end(), b, [](const Segment& s, double v) { return s.to < v; });
    if (it == segs_.end()) --it;
    return it->c != 0.0 && it->center == b && it->a < 0.0;
}

std::optional<Leading> Profile::leading(End end, double b) const {
    if (zero_) return Leading{0.0, 0.0, 0.0};
    if (named_ == Named::Atomic) return std::nullopt;
    if (named_ == Named::FactorialWeight) {
        if (end == End::Zero || b < kInf) return Leading{1.0, 0.0, 0.0};
        return std::nullopt;
    }
    if (family_ == Family::Table) {
        if (end == End::Zero) {
            if (pts_.front().second > 0.0 || pts_.front().first > 0.0) return Leading{pts_.front().second, 0.0, 0.0};
            const double slope = pts_[1].second / pts_[1].first;
            return Leading{slope, 1.0, 0.0};
        }
        if (b < kInf) return Leading{value_left(b), 0.0, 0.0};
        return Leading{pts_.back().second, 0.0, 0.0};
    }
    if (end == End::Zero) {
        const Segment& s = segs_.front();
        if (s.c == 0.0) return Leading{0.0, 0.0, 0.0};
        if (s.center == 0.0) return Leading{s.c, s.a, 0.0};
        return Leading{seg_value(s, 0.0), 0.0, 0.0};
    }
    if (b == kInf) {
        const Segment& s = segs_.back();
        return Leading{s.c, s.c == 0.0 ? 0.0 : s.a, s.c == 0.0 ? 0.0 : s.p};
    }
    auto it = std::lower_bound(segs_.begin(), segs_.end(), b, [](const Segment& s, double v) { return s.to < v; });
    if (it == segs_.end()) --it;
    if (it->c != 0.0 && it->center == b) return Leading{it->c, it->a, 0.0};
    return Leading{seg_value(*it, b), 0.0, 0.0};
}

Growth Profile::cumulative_growth(End end, double b) const {
    Growth g;
    if (named_ == Named::Atomic) {
        g.kind = end == End::Zero ? Growth::Kind::Unknown : Growth::Kind::Bounded;
        return g;
    }
    auto lead = leading(end, b);
    if (!lead) return g;
    const Leading& L = *lead;
    if (L.c <= 0.0) {
        // Zero (or negative) tail: the cumulative is eventually flat.
        g.kind = end == End::Zero ? Growth::Kind::Unknown : Growth::Kind::Bounded;
        return g;
    }
    if (end == End::Zero) {
        if (L.a > -1.0) {
            g.kind = Growth::Kind::Power;
            g.index = L.a + 1.0;
        }
        return g;
    }
    if (b < kInf) {
        // In the variable 1/(b-x): integral of (b-x)^a diverges like (b-x)^(a+1) when a < -1.
        if (L.a < -1.0) {
            g.kind = Growth::Kind::Power;
            g.index = -(L.a + 1.0);
        } else if (L.a == -1.0) {
            g.kind = Growth::Kind::Slow;
        } else {
            g.kind = Growth::Kind::Bounded;
        }
        return g;
    }
    if (L.a > -1.0) {
        g.kind = Growth::Kind::Power;
        g.index = L.a + 1.0;
    } else if (L.a == -1.0) {
        g.kind = L.p >= -1.0 ? Growth::Kind::Slow : Growth::Kind::Bounded;
    } else {
        g.kind = Growth::Kind::Bounded;
    }
    return g;
}

Profile Profile::scaled(double c) const {
    Profile out = *this;
    if (zero_) return out;
    if (family_ == Family::Table) {
        for (auto& p : out.pts_) p.second *= c;
        for (auto& v : out.table_prefix_) v *= c;
    } else if (family_ == Family::PowerLog || family_ == Family::Piecewise) {
        for (auto& s : out.segs_) s.c *= c;
    } else {
        throw Error(ErrorKind::Unsupported, "named profiles cannot be rescaled");
    }
    return out;
}

// ---- JSON ----

namespace {

double parse_bound(const nlohmann::json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw Error(ErrorKind::Parse, "segment bound must be a number or \"inf\", got \"" + s + "\"");
    }
    if (!v.is_number()) throw Error(ErrorKind::Parse, "segment bound must be a number or \"inf\"");
    return v.get<double>();
}

double num_or(const nlohmann::json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw Error(ErrorKind::Parse, std::string("field \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

} // namespace

Profile Profile::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "profile must be a JSON object");
    if (!j.contains("family") || !j.at("family").is_string())
        throw Error(ErrorKind::Parse, "profile needs a string field \"family\"");
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "zero") return zero();
    if (fam == "power-log" || fam == "piecewise") {
        if (!j.contains("segments") || !j.at("segments").is_array())
            throw Error(ErrorKind::Parse, "profile family " + fam + " needs an array \"segments\"");
        std::vector<Segment> segs;
        for (const auto& sj : j.at("segments")) {
            if (!sj.is_object()) throw Error(ErrorKind::Parse, "segment must be an object");
            Segment s;
            s.from = sj.contains("from") ? parse_bound(sj.at("from")) : 0.0;
            s.to = sj.contains("to") ? parse_bound(sj.at("to")) : kInf;
            s.c = num_or(sj, "c", 1.0);
            s.a = num_or(sj, "a", 0.0);
            s.p = num_or(sj, "p", 0.0);
            s.center = num_or(sj, "center", 0.0);
            segs.push_back(s);
        }
        return from_segments(std::move(segs), fam == "piecewise" ? Family::Piecewise : Family::PowerLog);
    }
    if (fam == "table") {
        if (!j.contains("points") || !j.at("points").is_array())
            throw Error(ErrorKind::Parse, "table profile needs an array \"points\"");
        std::vector<std::pair<double, double>> pts;
        for (const auto& pj : j.at("points")) {
            if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number() || !pj[1].is_number())
                throw Error(ErrorKind::Parse, "table point must be [x, v]");
            pts.emplace_back(pj[0].get<double>(), pj[1].get<double>());
        }
        return table(std::move(pts));
    }
    if (fam == "named") {
        if (!j.contains("name") || !j.at("name").is_string())
            throw Error(ErrorKind::Parse, "named profile needs a string field \"name\"");
        const std::string name = j.at("name").get<std::string>();
        if (name == "factorial-weight") return factorial_weight();
        if (name == "atomic-a") return atomic(num_or(j, "a", 1.0));
        throw Error(ErrorKind::Parse, "unknown named profile \"" + name + "\"");
    }
    throw Error(ErrorKind::Parse, "unknown profile family \"" + fam + "\"");
}

nlohmann::json Profile::to_json() const {
    using nlohmann::json;
    if (zero_) return json{{"family", "zero"}};
    switch (family_) {
    case Family::PowerLog:
    case Family::Piecewise: {
        json segs = json::array();
        for (const Segment& s : segs_) {
            json sj{{"from", s.from}, {"c", s.c}};
            if (s.to == kInf)
                sj["to"] = "inf";
            else
                sj["to"] = s.to;
            if (family_ == Family::PowerLog) {
                sj["a"] = s.a;
                sj["p"] = s.p;
                if (s.center != 0.0) sj["center"] = s.center;
            }
            segs.push_back(sj);
        }
        return json{{"family", family_ == Family::Piecewise ? "piecewise" : "power-log"}, {"segments", segs}};
    }
    case Family::Table: {
        json pts = json::array();
        for (const auto& [x, v] : pts_) pts.push_back(json::array({x, v}));
        return json{{"family", "table"}, {"points", pts}};
    }
    case Family::Named:
        if (named_ == Named::FactorialWeight) return json{{"family", "named"}, {"name", "factorial-weight"}};
        return json{{"family", "named"}, {"name", "atomic-a"}, {"a", atomic_mass_}};
    }
    return json();
}

} // namespace wk
