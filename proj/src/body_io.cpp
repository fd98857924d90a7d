#include "gaussbal/body_io.hpp"

#include <fstream>
#include <limits>

namespace gaussbal {

using nlohmann::json;

namespace {

Vec vec_from_json(const json& j) {
    Vec v;
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

double ext_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("body JSON: bad extended-real string '" + s + "'");
    }
    return j.get<double>();
}

} // namespace

BodyPtr body_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "halfspace") {
        return std::make_shared<HalfspaceBody>(vec_from_json(j.at("normal")),
                                               j.at("offset").get<double>());
    }
    if (type == "hpolytope") {
        int dim = j.at("dim").get<int>();
        std::vector<Halfspace> cons;
        const auto& normals = j.at("normals");
        const auto& offsets = j.at("offsets");
        if (normals.size() != offsets.size())
            throw std::invalid_argument("body JSON: normals/offsets length mismatch");
        for (size_t i = 0; i < normals.size(); ++i) {
            Halfspace h;
            h.normal = vec_from_json(normals[i]);
            if (static_cast<int>(h.normal.size()) != dim)
                throw std::invalid_argument("body JSON: normal dimension mismatch");
            h.offset = offsets[i].get<double>();
            cons.push_back(std::move(h));
        }
        return std::make_shared<PolytopeBody>(dim, std::move(cons));
    }
    if (type == "planar_hypograph") {
        const auto& th = j.at("theta");
        if (th.at("kind").get<std::string>() != "piecewise_linear")
            throw std::invalid_argument("body JSON: unknown theta kind");
        PiecewiseLinearTheta pl;
        for (const auto& k : th.at("knots"))
            pl.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        if (pl.knots.empty()) throw std::invalid_argument("body JSON: theta needs knots");
        for (size_t i = 1; i < pl.knots.size(); ++i)
            if (!(pl.knots[i].first > pl.knots[i - 1].first))
                throw std::invalid_argument("body JSON: theta knots must increase in z");
        pl.left_slope = th.value("left_slope", 0.0);
        if (th.contains("right_value")) pl.right_value = ext_from_json(th.at("right_value"));
        bool mono = th.value("non_increasing", true);
        return std::make_shared<PlanarHypographBody>(ThetaFn(pl), mono);
    }
    throw std::invalid_argument("body JSON: unknown type '" + type + "'");
}

json body_to_json(const Body& body) {
    if (auto* h = dynamic_cast<const HalfspaceBody*>(&body)) {
        return json{{"type", "halfspace"},
                    {"dim", body.dim()},
                    {"normal", h->halfspace().normal},
                    {"offset", h->halfspace().offset}};
    }
    if (auto* p = dynamic_cast<const PolytopeBody*>(&body)) {
        json normals = json::array(), offsets = json::array();
        for (const auto& c : p->constraints()) {
            normals.push_back(c.normal);
            offsets.push_back(c.offset);
        }
        return json{{"type", "hpolytope"},
                    {"dim", body.dim()},
                    {"normals", normals},
                    {"offsets", offsets}};
    }
    throw std::invalid_argument("body_to_json: only halfspaces and polytopes serialize");
}

BodyPtr load_body_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open body file: " + path);
    json j;
    in >> j;
    return body_from_json(j);
}

Gauge gauge_from_string(const std::string& s) {
    if (s == "l2") return Gauge::l2;
    if (s == "l1") return Gauge::l1;
    if (s == "linf") return Gauge::linf;
    throw std::invalid_argument("unknown gauge '" + s + "'");
}

std::string gauge_to_string(Gauge g) {
    switch (g) {
    case Gauge::l2: return "l2";
    case Gauge::l1: return "l1";
    default: return "linf";
    }
}

BalancingInstance instance_from_json(const json& j) {
    BalancingInstance inst;
    inst.dim = j.at("dim").get<int>();
    for (const auto& v : j.at("vectors")) {
        Vec u = vec_from_json(v);
        if (static_cast<int>(u.size()) != inst.dim)
            throw std::invalid_argument("instance JSON: vector dimension mismatch");
        inst.vectors.push_back(std::move(u));
    }
    if (j.contains("body")) {
        BodyPtr b = body_from_json(j.at("body"));
        inst.body = std::dynamic_pointer_cast<const PolytopeBody>(b);
        if (!inst.body)
            throw std::invalid_argument("instance JSON: body must be an hpolytope");
    }
    inst.gauge = gauge_from_string(j.value("gauge", std::string("linf")));
    return inst;
}

BalancingInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json j;
    in >> j;
    return instance_from_json(j);
}

json sign_result_to_json(const SignResult& r) {
    return json{{"signs", r.signs}, {"gauge_value", r.value}, {"verified", r.verified}};
}

json chain_result_to_json(const ChainResult& r) {
    json j{{"success", r.success}};
    if (r.success) {
        j["signs"] = r.signs;
        j["point"] = r.point;
    } else {
        j["failure"] = r.failure;
    }
    return j;
}

} // namespace gaussbal
