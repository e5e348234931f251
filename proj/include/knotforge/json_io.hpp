#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"
#include "knotforge/laurent.hpp"
#include "knotforge/morse.hpp"

namespace knotforge {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

namespace detail {

inline void check_schema_version(const json& j, const char* what) {
    if (!j.is_object()) throw ingestion_error(std::string(what) + ": expected a JSON object");
    if (j.contains("schema_version") && (!j["schema_version"].is_number_integer() ||
                                         j["schema_version"].get<int>() != kSchemaVersion))
        throw ingestion_error(std::string(what) + ": unsupported schema_version");
}

inline const json& field(const json& j, const char* name, const char* what) {
    auto it = j.find(name);
    if (it == j.end()) throw ingestion_error(std::string(what) + ": missing field '" + name + "'");
    return *it;
}

inline int int_field(const json& j, const char* name, const char* what) {
    const json& f = field(j, name, what);
    if (!f.is_number_integer())
        throw ingestion_error(std::string(what) + ": field '" + name + "' must be an integer");
    return f.get<int>();
}

inline std::string string_field(const json& j, const char* name, const char* what) {
    const json& f = field(j, name, what);
    if (!f.is_string())
        throw ingestion_error(std::string(what) + ": field '" + name + "' must be a string");
    return f.get<std::string>();
}

} // namespace detail

inline json rational_to_json(const Rational& r) { return json(r.str()); }

inline Rational rational_from_json(const json& j, const char* what = "rational") {
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    if (!j.is_string()) throw ingestion_error(std::string(what) + ": expected \"num/den\" string");
    return Rational::parse(j.get<std::string>());
}

inline json laurent_to_json(const LaurentPoly& p) {
    json terms = json::array();
    for (auto& [e, c] : p.coeffs()) terms.push_back(json::array({e, c.str()}));
    return terms;
}

inline LaurentPoly laurent_from_json(const json& j, const char* what = "laurent") {
    if (!j.is_array()) throw ingestion_error(std::string(what) + ": expected [[exp, coeff]] array");
    LaurentPoly p;
    for (auto& t : j) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer())
            throw ingestion_error(std::string(what) + ": malformed term");
        p.add_term(t[0].get<int>(), rational_from_json(t[1], what));
    }
    return p;
}

inline json rationalfn_to_json(const RationalFn& f) {
    return json{{"num", laurent_to_json(f.num())}, {"den", laurent_to_json(f.den())}};
}

inline RationalFn rationalfn_from_json(const json& j, const char* what = "rational function") {
    if (!j.is_object()) throw ingestion_error(std::string(what) + ": expected {num, den}");
    LaurentPoly n = laurent_from_json(detail::field(j, "num", what), what);
    LaurentPoly d = laurent_from_json(detail::field(j, "den", what), what);
    if (d.is_zero()) throw ingestion_error(std::string(what) + ": zero denominator");
    return RationalFn(n, d);
}

inline json diagram_to_json(const Diagram& d) {
    json edges = json::array();
    for (auto& e : d.edges) {
        json color = json::array();
        for (int x : e.color) color.push_back(x);
        edges.push_back(json{{"tail", e.tail},
                             {"head", e.head},
                             {"kind", edge_kind_name(e.kind)},
                             {"color", color}});
    }
    json orients = json::array();
    for (auto& tri : d.orientations) {
        json o = json::array();
        for (auto& h : tri) o.push_back(json::array({h.edge, h.end}));
        orients.push_back(o);
    }
    return json{{"schema_version", kSchemaVersion},
                {"q", d.q},
                {"t", d.t},
                {"rank", d.rank},
                {"edges", edges},
                {"orientations", orients}};
}

inline Diagram diagram_from_json(const json& j) {
    const char* what = "diagram";
    detail::check_schema_version(j, what);
    Diagram d;
    d.q = detail::int_field(j, "q", what);
    d.t = detail::int_field(j, "t", what);
    d.rank = detail::int_field(j, "rank", what);
    const json& edges = detail::field(j, "edges", what);
    if (!edges.is_array()) throw ingestion_error("diagram: 'edges' must be an array");
    for (auto& je : edges) {
        Edge e;
        e.tail = detail::int_field(je, "tail", what);
        e.head = detail::int_field(je, "head", what);
        std::string kind = detail::string_field(je, "kind", what);
        if (kind == "W")
            e.kind = EdgeKind::W;
        else if (kind == "I")
            e.kind = EdgeKind::I;
        else if (kind == "rho")
            e.kind = EdgeKind::Rho;
        else
            throw ingestion_error("diagram: unknown edge kind '" + kind + "'");
        const json& color = detail::field(je, "color", what);
        if (!color.is_array()) throw ingestion_error("diagram: edge color must be an array");
        for (auto& x : color) {
            if (!x.is_number_integer()) throw ingestion_error("diagram: color exponents must be integers");
            e.color.push_back(x.get<int>());
        }
        if ((int)e.color.size() != d.rank)
            throw ingestion_error("diagram: color length differs from rank");
        d.edges.push_back(e);
    }
    const json& orients = detail::field(j, "orientations", what);
    if (!orients.is_array() || (int)orients.size() != d.t)
        throw ingestion_error("diagram: need one orientation triple per trivalent vertex");
    for (auto& jo : orients) {
        if (!jo.is_array() || jo.size() != 3)
            throw ingestion_error("diagram: orientation must list 3 half-edges");
        std::array<HalfEdge, 3> tri;
        for (int i = 0; i < 3; ++i) {
            if (!jo[i].is_array() || jo[i].size() != 2)
                throw ingestion_error("diagram: half-edge must be [edge, end]");
            tri[i].edge = jo[i][0].get<int>();
            tri[i].end = jo[i][1].get<int>();
        }
        d.orientations.push_back(tri);
    }
    try {
        d.validate();
    } catch (const structural_error& e) {
        throw ingestion_error(std::string("diagram: ") + e.what());
    }
    return d;
}

inline json vector_to_json(const DiagramVector& v) {
    json terms = json::array();
    for (auto& [d, c] : v.terms())
        terms.push_back(json{{"coeff", c.str()}, {"diagram", diagram_to_json(d)}});
    return json{{"schema_version", kSchemaVersion}, {"terms", terms}};
}

inline DiagramVector vector_from_json(const json& j) {
    const char* what = "diagram vector";
    detail::check_schema_version(j, what);
    const json& terms = detail::field(j, "terms", what);
    if (!terms.is_array()) throw ingestion_error("diagram vector: 'terms' must be an array");
    DiagramVector v;
    for (auto& t : terms)
        v.add(diagram_from_json(detail::field(t, "diagram", what)),
              rational_from_json(detail::field(t, "coeff", what), what));
    return v;
}

inline json morse_to_json(const FiberwiseMorseData& m) {
    json loci = json::array();
    for (auto& l : m.critical_loci)
        loci.push_back(json{{"id", l.id}, {"index", l.index}, {"period", l.period}, {"sign", l.sign}});
    json events = json::array();
    for (auto& e : m.one_one_events)
        events.push_back(json{{"from", e.from},
                              {"to", e.to},
                              {"base_angle", e.base_angle.str()},
                              {"sign", e.sign}});
    json rows = json::array();
    for (auto& r : m.monodromy) {
        json row = json::array();
        for (long long x : r) row.push_back(x);
        rows.push_back(row);
    }
    return json{{"schema_version", kSchemaVersion},
                {"fiber_genus", m.fiber_genus},
                {"critical_loci", loci},
                {"one_one_events", events},
                {"monodromy", rows},
                {"base_fiber_angle", m.base_fiber_angle.str()}};
}

inline FiberwiseMorseData morse_from_json(const json& j) {
    const char* what = "morse data";
    detail::check_schema_version(j, what);
    FiberwiseMorseData m;
    m.fiber_genus = detail::int_field(j, "fiber_genus", what);
    const json& loci = detail::field(j, "critical_loci", what);
    if (!loci.is_array()) throw ingestion_error("morse data: 'critical_loci' must be an array");
    for (auto& jl : loci) {
        CriticalLocus l;
        l.id = detail::string_field(jl, "id", what);
        l.index = detail::int_field(jl, "index", what);
        l.period = detail::int_field(jl, "period", what);
        l.sign = detail::int_field(jl, "sign", what);
        m.critical_loci.push_back(l);
    }
    const json& events = detail::field(j, "one_one_events", what);
    if (!events.is_array()) throw ingestion_error("morse data: 'one_one_events' must be an array");
    for (auto& je : events) {
        OneOneEvent e;
        e.from = detail::string_field(je, "from", what);
        e.to = detail::string_field(je, "to", what);
        e.base_angle = rational_from_json(detail::field(je, "base_angle", what), what);
        e.sign = detail::int_field(je, "sign", what);
        m.one_one_events.push_back(e);
    }
    const json& rows = detail::field(j, "monodromy", what);
    if (!rows.is_array()) throw ingestion_error("morse data: 'monodromy' must be an array");
    for (auto& jr : rows) {
        if (!jr.is_array()) throw ingestion_error("morse data: monodromy rows must be arrays");
        std::vector<long long> row;
        for (auto& x : jr) {
            if (!x.is_number_integer())
                throw ingestion_error("morse data: monodromy entries must be integers");
            row.push_back(x.get<long long>());
        }
        m.monodromy.push_back(std::move(row));
    }
    if (j.contains("base_fiber_angle"))
        m.base_fiber_angle = rational_from_json(j["base_fiber_angle"], what);
    m.validate();
    return m;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ingestion_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ingestion_error("JSON parse failure in " + path + ": " + e.what());
    }
    return j;
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

} // namespace knotforge
