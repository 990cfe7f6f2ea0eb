#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "audit.hpp"
#include "embeddings.hpp"
#include "error.hpp"
#include "hamming.hpp"
#include "ordinals.hpp"
#include "rational.hpp"
#include "treespace.hpp"

namespace cubetree::io {

using nlohmann::json;

inline constexpr const char* report_schema = "cubetree/distortion-report/1";
inline constexpr const char* trace_schema = "cubetree/trace-report/1";

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view what) {
    s = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("expected a non-negative integer for " + std::string(what) + ", got '" + std::string(s) + "'");
    }
    return v;
}

} // namespace detail

/// `1,2,5`, `[1,2,5]`, `{1,2,5}`, `` or `[]`.
inline Point parse_point(std::string_view text) {
    text = detail::trim(text);
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
        char close = text.front() == '[' ? ']' : '}';
        if (text.back() != close) throw ParseError("unbalanced brackets in set '" + std::string(text) + "'");
        text = detail::trim(text.substr(1, text.size() - 2));
    }
    std::vector<Element> elems;
    if (!text.empty()) {
        for (auto part : detail::split(text, ',')) {
            auto v = detail::parse_uint(part, "a set element");
            if (v < 1 || v > UINT32_MAX) throw ParseError("set elements must be in [1, 2^32)");
            elems.push_back(static_cast<Element>(v));
        }
    }
    return Point(std::move(elems));
}

/// `finite:K,R`, `schreier`, `ai:P/Q` (minimal thresholds) or `ai:P/Q:N1,N2,...`.
inline EmbeddingSpec parse_spec(std::string_view text) {
    text = detail::trim(text);
    if (text == "schreier") {
        return EmbeddingSpec::schreier();
    }
    if (text.starts_with("finite:")) {
        auto parts = detail::split(text.substr(7), ',');
        if (parts.size() != 2) throw ParseError("finite spec must be finite:K,R");
        return EmbeddingSpec::finite_rank(detail::parse_uint(parts[0], "k"), detail::parse_uint(parts[1], "r"));
    }
    if (text.starts_with("ai:")) {
        auto rest = text.substr(3);
        auto colon = rest.find(':');
        Rational eps = Rational::parse(rest.substr(0, colon));
        if (colon == std::string_view::npos) {
            return EmbeddingSpec::almost_isometric(eps);
        }
        std::vector<std::int64_t> n{0};
        for (auto part : detail::split(rest.substr(colon + 1), ',')) {
            n.push_back(static_cast<std::int64_t>(detail::parse_uint(part, "a threshold")));
        }
        return EmbeddingSpec::almost_isometric(Thresholds::custom(eps, std::move(n)));
    }
    throw ParseError("unknown embedding spec '" + std::string(text) + "' (expected finite:K,R, schreier or ai:P/Q)");
}

inline json to_json(const Point& p) {
    json a = json::array();
    for (Element e : p.elements()) a.push_back(e);
    return a;
}

inline Point point_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("a point must be a JSON array of positive integers");
    std::vector<Element> elems;
    for (const auto& e : j) {
        if (!e.is_number_unsigned() || e.get<std::uint64_t>() < 1) {
            throw ParseError("point elements must be positive integers");
        }
        elems.push_back(e.get<Element>());
    }
    return Point(std::move(elems));
}

inline json to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_object() && j.contains("num") && j.contains("den")) {
        auto den = j.at("den").get<std::int64_t>();
        if (den == 0) throw ParseError("zero denominator");
        return Rational(j.at("num").get<std::int64_t>(), den);
    }
    throw ParseError("a rational must be an integer, \"p/q\" or {\"num\":p,\"den\":q}");
}

inline json entries_json(const SparseVector& x) {
    json entries = json::array();
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto e = x.entry(i);
        entries.push_back(json::array({json(std::vector<Element>(e.path.begin(), e.path.end())), e.coeff}));
    }
    return entries;
}

/// {"height": k, "entries": [[path, coeff], ...]} sorted by path.
inline json to_json(const SparseVector& x) { return json{{"height", x.height()}, {"entries", entries_json(x)}}; }

inline SparseVector sparse_vector_from_json(const json& j) {
    SparseVectorBuilder b(j.at("height").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2) throw ParseError("sparse vector entries must be [path, coeff]");
        b.add(e.at(0).get<std::vector<Element>>(), e.at(1).get<std::int64_t>());
    }
    return std::move(b).build();
}

/// {"bands": [{"first": a, "last": b, "entries": [...]}, ...]}
inline json to_json(const BundleVector& x) {
    json bands = json::array();
    for (const Band& b : x.bands()) {
        bands.push_back(json{{"first", b.first}, {"last", b.last}, {"entries", entries_json(b.vector)}});
    }
    return json{{"bands", bands}};
}

inline BundleVector bundle_from_json(const json& j) {
    std::vector<Band> bands;
    for (const auto& b : j.at("bands")) {
        std::size_t first = b.at("first").get<std::size_t>();
        json sv{{"height", first}, {"entries", b.at("entries")}};
        bands.push_back(Band{first, b.at("last").get<std::size_t>(), sparse_vector_from_json(sv)});
    }
    return BundleVector(std::move(bands));
}

/// One `(path) coeff` line per entry.
inline std::string to_text(const SparseVector& x) {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto e = x.entry(i);
        out += TreeNode(std::vector<Element>(e.path.begin(), e.path.end())).str() + " " + std::to_string(e.coeff) + "\n";
    }
    return out;
}

inline std::string to_text(const BundleVector& x) {
    if (x.is_zero()) return "zero\n";
    std::string out;
    for (const Band& b : x.bands()) {
        out += "T_" + std::to_string(b.first);
        if (b.last != b.first) out += "..T_" + std::to_string(b.last);
        out += ":\n" + to_text(b.vector);
    }
    return out;
}

inline json to_json(const PairWitness& w) { return json::array({to_json(w.a), to_json(w.b)}); }

inline json to_json(const DistortionReport& r) {
    json j{{"schema", report_schema},
           {"spec", r.spec},
           {"domain", r.domain},
           {"pairs_checked", r.pairs_checked},
           {"max_expansion", to_json(r.max_expansion)},
           {"max_contraction", r.max_contraction ? to_json(*r.max_contraction) : json(nullptr)},
           {"distortion", r.distortion ? to_json(*r.distortion) : json(nullptr)},
           {"expansion_witness", to_json(r.expansion_witness)},
           {"contraction_witness", to_json(r.contraction_witness)},
           {"admissible_pairs", r.admissible_pairs},
           {"violations", r.violations}};
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        j["first_violation"] = json{{"pair", to_json(v.pair)}, {"distance", v.distance}, {"gap", v.gap}, {"what", v.what}};
    } else {
        j["first_violation"] = nullptr;
    }
    return j;
}

inline std::string csv_header() {
    return "spec,domain,pairs_checked,max_expansion,max_contraction,distortion,expansion_witness,"
           "contraction_witness,violations";
}

inline std::string csv_row(const DistortionReport& r) {
    auto q = [](const std::string& s) { return "\"" + s + "\""; };
    auto opt = [](const std::optional<Rational>& x) { return x ? x->str() : std::string("inf"); };
    auto pair = [](const PairWitness& w) { return w.a.str() + " " + w.b.str(); };
    return q(r.spec) + "," + q(r.domain) + "," + std::to_string(r.pairs_checked) + "," + r.max_expansion.str() + "," +
           opt(r.max_contraction) + "," + opt(r.distortion) + "," + q(pair(r.expansion_witness)) + "," +
           q(pair(r.contraction_witness)) + "," + std::to_string(r.violations);
}

inline std::string to_text(const DistortionReport& r) {
    std::ostringstream os;
    auto opt = [](const std::optional<Rational>& x) { return x ? x->str() : std::string("inf"); };
    os << "spec:            " << r.spec << "\n"
       << "domain:          " << r.domain << "\n"
       << "pairs checked:   " << r.pairs_checked << "\n"
       << "max expansion:   " << r.max_expansion << "  at " << r.expansion_witness.a.str() << " "
       << r.expansion_witness.b.str() << "\n"
       << "max contraction: " << opt(r.max_contraction) << "  at " << r.contraction_witness.a.str() << " "
       << r.contraction_witness.b.str() << "\n"
       << "distortion:      " << opt(r.distortion) << "\n";
    if (r.admissible_pairs) os << "admissible pairs: " << r.admissible_pairs << "\n";
    os << "violations:      " << r.violations << "\n";
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        os << "first violation: " << v.pair.a.str() << " " << v.pair.b.str() << " d=" << v.distance
           << " gap=" << v.gap << " (" << v.what << ")\n";
    }
    return os.str();
}

/// {"points": [[...], ...], "images": [[coord, ...], ...]}; coordinates are
/// integers, "p/q" strings or {"num","den"} objects.
inline FiniteEmbedding finite_embedding_from_json(const json& j) {
    FiniteEmbedding f;
    for (const auto& p : j.at("points")) f.domain.push_back(point_from_json(p));
    for (const auto& img : j.at("images")) {
        std::vector<Rational> v;
        for (const auto& c : img) v.push_back(rational_from_json(c));
        f.images.push_back(std::move(v));
    }
    f.validate();
    return f;
}

inline json to_json(const FiniteEmbedding& f) {
    json pts = json::array(), imgs = json::array();
    for (const Point& p : f.domain) pts.push_back(to_json(p));
    for (const auto& v : f.images) {
        json row = json::array();
        for (const Rational& r : v) row.push_back(to_json(r));
        imgs.push_back(row);
    }
    return json{{"points", pts}, {"images", imgs}};
}

inline json to_json(const TraceReport& t) {
    auto opt_pair = [](const std::optional<PairWitness>& w) { return w ? to_json(*w) : json(nullptr); };
    return json{{"schema", trace_schema},
                {"verdict", to_string(t.verdict)},
                {"claim", to_json(t.claim)},
                {"eta", to_json(t.eta)},
                {"lower_violation", opt_pair(t.lower_violation)},
                {"x12", t.x12},
                {"probes", t.probes},
                {"packing_bound", t.bound ? json(*t.bound) : json(nullptr)},
                {"radius", to_json(t.radius)},
                {"min_separation", t.min_separation ? to_json(*t.min_separation) : json(nullptr)},
                {"upper_violation", opt_pair(t.upper_violation)}};
}

} // namespace cubetree::io
